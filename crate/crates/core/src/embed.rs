//! Embedding and rerank providers.
//!
//! The engine talks to encoders through the [`Embedder`] trait and to
//! rerankers through [`Reranker`]. The bundled implementations are pure
//! functions of their input text — no network, no clock, no RNG — so a
//! corpus encoded on one machine matches queries encoded on another.
//!
//! [`HashEmbedder`] folds character n-grams (n = 3..=5) into a fixed number
//! of buckets with an FNV-1a hash and L2-normalizes the counts. It is not a
//! semantic model; it is a deterministic stand-in with the same interface,
//! which is exactly what offline tests and air-gapped deployments need.
//! Remote encoders can be plugged in by implementing [`Embedder`].

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::score::min_max_normalize;

/// A unit-length embedding. Construction normalizes, so every value that
/// escapes this module has L2 norm 1 within 1e-6.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector {
    values: Vec<f32>,
}

impl EmbeddingVector {
    /// Build from raw components, rescaling to unit length. Fails on an
    /// empty, non-finite, or all-zero vector.
    pub fn unit(raw: Vec<f32>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidParameter("embedding vector is empty".into()));
        }
        if raw.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "embedding vector has non-finite components".into(),
            ));
        }
        let norm = raw
            .iter()
            .map(|&v| (v as f64) * (v as f64))
            .sum::<f64>()
            .sqrt();
        if norm <= 0.0 {
            return Err(Error::InvalidParameter(
                "embedding vector has zero norm".into(),
            ));
        }
        let values = raw.iter().map(|&v| ((v as f64) / norm) as f32).collect();
        Ok(EmbeddingVector { values })
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    /// Cosine similarity, accumulated in f64. Both operands are unit length,
    /// so this is a plain dot product.
    pub fn cosine(&self, other: &EmbeddingVector) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::Dimension {
                expected: self.values.len(),
                got: other.values.len(),
            });
        }
        let mut acc = 0.0f64;
        for (a, b) in self.values.iter().zip(&other.values) {
            acc += (*a as f64) * (*b as f64);
        }
        Ok(acc)
    }

    /// Deviation of the L2 norm from 1, used by schema validation.
    pub fn norm_error(&self) -> f64 {
        let norm = self
            .values
            .iter()
            .map(|&v| (v as f64) * (v as f64))
            .sum::<f64>()
            .sqrt();
        (norm - 1.0).abs()
    }
}

pub trait Embedder: Send + Sync {
    fn name(&self) -> &str;
    fn dimension(&self) -> usize;
    /// Encode one text. Empty (or whitespace-only) input is an error.
    fn embed(&self, text: &str) -> Result<EmbeddingVector>;
}

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Feature-hashed character n-gram encoder.
#[derive(Debug, Clone)]
pub struct HashEmbedder {
    dimension: usize,
}

impl HashEmbedder {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter(
                "embedding dimension must be >= 1".into(),
            ));
        }
        Ok(HashEmbedder { dimension })
    }
}

impl Embedder for HashEmbedder {
    fn name(&self) -> &str {
        "hash-ngram"
    }

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, text: &str) -> Result<EmbeddingVector> {
        // Case and spacing are canonicalized here so that differently-cased
        // copies of the same string encode identically.
        let canon = text.to_lowercase();
        let canon = canon.split_whitespace().collect::<Vec<_>>().join(" ");
        if canon.is_empty() {
            return Err(Error::EmptyText);
        }
        let chars: Vec<char> = canon.chars().collect();
        let mut buckets = vec![0.0f64; self.dimension];
        let mut buf = String::with_capacity(8);
        let mut any = false;
        for n in 3..=5usize {
            if chars.len() < n {
                continue;
            }
            for window in chars.windows(n) {
                buf.clear();
                buf.extend(window.iter());
                let idx = (fnv1a(buf.as_bytes()) % self.dimension as u64) as usize;
                buckets[idx] += 1.0;
                any = true;
            }
        }
        if !any {
            // Texts shorter than the smallest n-gram still get a stable
            // one-feature encoding.
            let idx = (fnv1a(canon.as_bytes()) % self.dimension as u64) as usize;
            buckets[idx] += 1.0;
        }
        EmbeddingVector::unit(buckets.into_iter().map(|v| v as f32).collect())
    }
}

/// One candidate handed to a reranker.
#[derive(Debug, Clone)]
pub struct RerankCandidate {
    pub id: String,
    pub title: String,
    pub abstract_text: String,
}

/// Rerank output: scores are MinMax-normalized within the call, sorted
/// descending with ties broken by candidate id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RerankScore {
    pub id: String,
    pub score: f64,
}

pub trait Reranker: Send + Sync {
    fn name(&self) -> &str;
    fn rerank(&self, query: &str, candidates: &[RerankCandidate]) -> Result<Vec<RerankScore>>;
}

/// Offline reranker: scores each candidate by the cosine between the query
/// embedding and the candidate's abstract embedding (title when the abstract
/// is empty), then MinMax-normalizes within the call.
pub struct EmbeddingReranker {
    embedder: Arc<dyn Embedder>,
}

impl EmbeddingReranker {
    pub fn new(embedder: Arc<dyn Embedder>) -> Self {
        EmbeddingReranker { embedder }
    }
}

impl Reranker for EmbeddingReranker {
    fn name(&self) -> &str {
        "embedding-cosine"
    }

    fn rerank(&self, query: &str, candidates: &[RerankCandidate]) -> Result<Vec<RerankScore>> {
        if candidates.is_empty() {
            return Ok(Vec::new());
        }
        let q = self.embedder.embed(query)?;
        let mut raw = Vec::with_capacity(candidates.len());
        for c in candidates {
            let text = if !c.abstract_text.trim().is_empty() {
                c.abstract_text.as_str()
            } else {
                c.title.as_str()
            };
            let score = match self.embedder.embed(text) {
                Ok(v) => q.cosine(&v)?,
                // Unencodable candidates sink to the bottom instead of
                // failing the whole call.
                Err(_) => 0.0,
            };
            raw.push(score);
        }
        let normalized = min_max_normalize(&raw);
        let mut out: Vec<RerankScore> = candidates
            .iter()
            .zip(normalized)
            .map(|(c, score)| RerankScore {
                id: c.id.clone(),
                score,
            })
            .collect();
        out.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.id.cmp(&b.id))
        });
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kahan_dot(a: &[f32], b: &[f32]) -> f64 {
        // Compensated summation as an independent reference for cosine.
        let mut sum = 0.0f64;
        let mut c = 0.0f64;
        for (x, y) in a.iter().zip(b) {
            let term = (*x as f64) * (*y as f64) - c;
            let t = sum + term;
            c = (t - sum) - term;
            sum = t;
        }
        sum
    }

    #[test]
    fn unit_rejects_zero_and_empty() {
        assert!(EmbeddingVector::unit(vec![]).is_err());
        assert!(EmbeddingVector::unit(vec![0.0, 0.0]).is_err());
        assert!(EmbeddingVector::unit(vec![f32::NAN, 1.0]).is_err());
    }

    #[test]
    fn unit_normalizes() {
        let v = EmbeddingVector::unit(vec![3.0, 4.0]).unwrap();
        assert!(v.norm_error() < 1e-6);
        assert!((v.values()[0] - 0.6).abs() < 1e-6);
        assert!((v.values()[1] - 0.8).abs() < 1e-6);
    }

    #[test]
    fn embed_is_deterministic() {
        let e = HashEmbedder::new(256).unwrap();
        let a = e.embed("spiking neural networks").unwrap();
        let b = e.embed("spiking neural networks").unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn embed_ignores_case_and_spacing() {
        let e = HashEmbedder::new(256).unwrap();
        let a = e.embed("Graph  Neural Networks").unwrap();
        let b = e.embed("graph neural networks").unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn embed_distinguishes_texts() {
        let e = HashEmbedder::new(256).unwrap();
        let a = e.embed("graph neural networks").unwrap();
        let b = e.embed("variational autoencoders").unwrap();
        assert_ne!(a.values(), b.values());
        let sim = a.cosine(&b).unwrap();
        assert!(
            sim < 0.9,
            "unrelated texts should not be near-identical, got {sim}"
        );
    }

    #[test]
    fn embed_rejects_empty_text() {
        let e = HashEmbedder::new(64).unwrap();
        assert!(matches!(e.embed(""), Err(Error::EmptyText)));
        assert!(matches!(e.embed("   \t"), Err(Error::EmptyText)));
    }

    #[test]
    fn embed_handles_very_short_text() {
        let e = HashEmbedder::new(64).unwrap();
        let v = e.embed("ab").unwrap();
        assert!(v.norm_error() < 1e-6);
    }

    #[test]
    fn self_cosine_is_one() {
        // f32 storage rounds each component, so the identity holds to the
        // same 1e-6 the store enforces on norms, not to f64 precision.
        let e = HashEmbedder::new(512).unwrap();
        let v = e.embed("contrastive representation learning").unwrap();
        assert!((v.cosine(&v).unwrap() - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn cosine_matches_compensated_reference() {
        let e = HashEmbedder::new(512).unwrap();
        let a = e.embed("graph attention networks for molecules").unwrap();
        let b = e.embed("molecular graph transformers").unwrap();
        let got = a.cosine(&b).unwrap();
        let want = kahan_dot(a.values(), b.values());
        assert!((got - want).abs() <= 1e-9, "got {got}, reference {want}");
    }

    #[test]
    fn cosine_rejects_length_mismatch() {
        let a = EmbeddingVector::unit(vec![1.0, 0.0]).unwrap();
        let b = EmbeddingVector::unit(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(a.cosine(&b), Err(Error::Dimension { .. })));
    }

    #[test]
    fn rerank_single_candidate_scores_one() {
        let e: Arc<dyn Embedder> = Arc::new(HashEmbedder::new(128).unwrap());
        let r = EmbeddingReranker::new(e);
        let out = r
            .rerank(
                "graph retrieval",
                &[RerankCandidate {
                    id: "P1".into(),
                    title: "Graph Retrieval".into(),
                    abstract_text: "We study graph retrieval at scale.".into(),
                }],
            )
            .unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].score, 1.0);
    }

    #[test]
    fn rerank_scores_are_normalized_and_sorted() {
        let e: Arc<dyn Embedder> = Arc::new(HashEmbedder::new(256).unwrap());
        let r = EmbeddingReranker::new(e);
        let cands: Vec<RerankCandidate> = [
            ("P1", "graph embeddings for retrieval and ranking tasks"),
            ("P2", "a field survey of beekeeping practices"),
            ("P3", "retrieval with graph embeddings"),
        ]
        .iter()
        .map(|(id, text)| RerankCandidate {
            id: id.to_string(),
            title: text.to_string(),
            abstract_text: text.to_string(),
        })
        .collect();
        let out = r.rerank("graph embeddings retrieval", &cands).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.windows(2).all(|w| w[0].score >= w[1].score));
        assert_eq!(out[0].score, 1.0);
        assert_eq!(out.last().unwrap().score, 0.0);
        assert!(out.iter().all(|s| (0.0..=1.0).contains(&s.score)));
        // The beekeeping candidate is the off-topic one.
        assert_eq!(out.last().unwrap().id, "P2");
    }
}
