//! Tri-path seed recall: keyword matching, two-channel semantic retrieval,
//! and exact/fuzzy title matching, merged into pre-graph paper seed weights.
//!
//! The three paths are independent pure functions over a frozen graph; the
//! merge recomputes raw query–paper similarities for the full candidate
//! union so that papers recalled by only one path still get both score
//! components. All outputs are sorted with node-id tie-breaks, so seed
//! recall is deterministic for a given graph and query.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::config::MatchingConfig;
use crate::embed::{Embedder, EmbeddingVector, RerankCandidate, Reranker};
use crate::error::Result;
use crate::graph::{EmbeddingField, Node, NodeKind, PropertyGraph};
use crate::query::{ExtractedKeyword, ExtractedTitle};
use crate::score::min_max_normalize;
use crate::text::normalize_title_for_match;

/// A matched keyword node with its merged weight w ∈ (0, 1].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeywordSeed {
    #[serde(skip)]
    pub node: usize,
    pub id: String,
    pub weight: f64,
}

/// How a paper seed was recalled through the title path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TitleHitKind {
    Exact,
    Fuzzy,
    None,
}

/// A candidate paper after merging, carrying its pre-graph weight and the
/// normalized components that later appear in the score breakdown.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaperSeed {
    #[serde(skip)]
    pub node: usize,
    pub id: String,
    /// Pre-graph weight; may exceed 1 (the final ranking caps, not this).
    pub s_pre: f64,
    pub title_hit: TitleHitKind,
    /// The exact/fuzzy title bonus folded into `s_pre`.
    pub bonus: f64,
    /// Min-max-normalized embedding component over the candidate pool.
    pub emb_norm: f64,
    /// Min-max-normalized title component over the candidate pool.
    pub title_norm: f64,
}

/// One semantic-path hit (rerank-combined score across both channels).
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticHit {
    pub node: usize,
    pub id: String,
    pub s_emb: f64,
}

/// Per-paper result of the title path.
#[derive(Debug, Clone, PartialEq)]
pub struct TitleScore {
    pub node: usize,
    pub id: String,
    pub s_title: f64,
    pub exact: bool,
}

/// Match extracted keywords against keyword nodes: exact index hits score
/// the keyword's importance; vector hits with cosine at or above the
/// threshold score importance × similarity, at most `keyword_vector_top_k`
/// per input keyword. A node hit several times keeps its best score.
pub fn match_keywords(
    keywords: &[ExtractedKeyword],
    graph: &PropertyGraph,
    config: &MatchingConfig,
    embedder: &dyn Embedder,
) -> Result<Vec<KeywordSeed>> {
    let mut best: BTreeMap<usize, f64> = BTreeMap::new();
    let mut record = |node: usize, score: f64| {
        let entry = best.entry(node).or_insert(0.0);
        *entry = entry.max(score);
    };
    for kw in keywords {
        if kw.importance <= 0.0 || kw.text.is_empty() {
            continue;
        }
        for node in graph.lookup_exact_indexes(NodeKind::Keyword, &kw.text)? {
            record(node, kw.importance);
        }
        let query_vec = match embedder.embed(&kw.text) {
            Ok(v) => v,
            Err(e) => {
                log::warn!("cannot embed keyword `{}` ({e}); exact path only", kw.text);
                continue;
            }
        };
        for hit in graph.vector_search(
            EmbeddingField::KeywordText,
            &query_vec,
            config.keyword_vector_top_k,
        )? {
            if hit.score >= config.theta_kw {
                record(hit.node, kw.importance * hit.score);
            }
        }
    }
    let mut seeds: Vec<KeywordSeed> = best
        .into_iter()
        .filter(|&(_, w)| w > 0.0)
        .map(|(node, weight)| KeywordSeed {
            node,
            id: graph.node_at(node).id().to_string(),
            weight: weight.min(1.0),
        })
        .collect();
    seeds.sort_by(|a, b| {
        b.weight
            .partial_cmp(&a.weight)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.id.cmp(&b.id))
    });
    Ok(seeds)
}

/// Combine per-channel scores by the configured title/abstract ratio,
/// renormalized over whichever channels are present. `None` when neither
/// channel has a score.
fn combine_channels(
    title: Option<f64>,
    abstract_: Option<f64>,
    title_weight: f64,
    abstract_weight: f64,
) -> Option<f64> {
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    if let Some(s) = title {
        numerator += title_weight * s;
        denominator += title_weight;
    }
    if let Some(s) = abstract_ {
        numerator += abstract_weight * s;
        denominator += abstract_weight;
    }
    if denominator > 0.0 {
        Some(numerator / denominator)
    } else {
        None
    }
}

#[derive(Debug, Clone)]
pub struct SemanticMatches {
    pub hits: Vec<SemanticHit>,
    /// True when the reranker failed and retrieval cosines (min-max
    /// normalized per channel) stood in for rerank scores.
    pub used_rerank_fallback: bool,
}

/// Two-channel semantic retrieval: take the top `vector_top_k` papers by
/// title-embedding and by abstract-embedding cosine, rerank each channel
/// keeping `rerank_top_k`, then combine per-channel rerank scores with the
/// configured ratio (a paper present in one channel is scored by that
/// channel alone).
pub fn match_semantic(
    query_text: &str,
    query_vector: &EmbeddingVector,
    graph: &PropertyGraph,
    config: &MatchingConfig,
    reranker: &dyn Reranker,
) -> Result<SemanticMatches> {
    let mut used_rerank_fallback = false;
    let mut channel = |field: EmbeddingField| -> Result<HashMap<usize, f64>> {
        let retrieved = graph.vector_search(field, query_vector, config.vector_top_k)?;
        if retrieved.is_empty() {
            return Ok(HashMap::new());
        }
        let candidates: Vec<RerankCandidate> = retrieved
            .iter()
            .map(|hit| {
                let node = graph.node_at(hit.node);
                let paper = node.as_paper().expect("embedding fields index only papers");
                RerankCandidate {
                    id: paper.id.clone(),
                    title: paper.title.clone(),
                    abstract_text: paper.abstract_text.clone(),
                }
            })
            .collect();
        let mut scored = match reranker.rerank(query_text, &candidates) {
            Ok(scores) => scores
                .into_iter()
                .map(|s| (s.id, s.score))
                .collect::<Vec<_>>(),
            Err(e) => {
                log::warn!(
                    "reranker `{}` failed ({e}); falling back to retrieval cosines",
                    reranker.name()
                );
                used_rerank_fallback = true;
                let cosines: Vec<f64> = retrieved.iter().map(|h| h.score).collect();
                let scaled = min_max_normalize(&cosines);
                retrieved
                    .iter()
                    .zip(scaled)
                    .map(|(h, s)| (graph.node_at(h.node).id().to_string(), s))
                    .collect()
            }
        };
        scored.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.0.cmp(&b.0))
        });
        scored.truncate(config.rerank_top_k);
        Ok(scored
            .into_iter()
            .filter_map(|(id, score)| graph.node_index(&id).map(|n| (n, score)))
            .collect())
    };

    let title_scores = channel(EmbeddingField::PaperTitle)?;
    let abstract_scores = channel(EmbeddingField::PaperAbstract)?;

    let mut nodes: Vec<usize> = title_scores
        .keys()
        .chain(abstract_scores.keys())
        .copied()
        .collect();
    nodes.sort_unstable();
    nodes.dedup();

    let mut hits: Vec<SemanticHit> = nodes
        .into_iter()
        .filter_map(|node| {
            combine_channels(
                title_scores.get(&node).copied(),
                abstract_scores.get(&node).copied(),
                config.title_channel_weight,
                config.abstract_channel_weight,
            )
            .map(|s_emb| SemanticHit {
                node,
                id: graph.node_at(node).id().to_string(),
                s_emb,
            })
        })
        .collect();
    hits.sort_by(|a, b| {
        b.s_emb
            .partial_cmp(&a.s_emb)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.id.cmp(&b.id))
    });
    Ok(SemanticMatches {
        hits,
        used_rerank_fallback,
    })
}

/// Fuzzy similarity of two already-normalized titles: a weighted sum of the
/// character-level longest-common-subsequence ratio and the token Jaccard
/// overlap. Equal strings score exactly 1.0; an empty side scores 0.0.
pub fn fuzzy_title_score(a: &str, b: &str, seq_weight: f64, token_weight: f64) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    if a == b {
        return 1.0;
    }
    let a_chars: Vec<char> = a.chars().collect();
    let b_chars: Vec<char> = b.chars().collect();
    let lcs = lcs_length(&a_chars, &b_chars);
    let seq = 2.0 * lcs as f64 / (a_chars.len() + b_chars.len()) as f64;

    let a_tokens: std::collections::BTreeSet<&str> = a.split_whitespace().collect();
    let b_tokens: std::collections::BTreeSet<&str> = b.split_whitespace().collect();
    let intersection = a_tokens.intersection(&b_tokens).count();
    let union = a_tokens.union(&b_tokens).count();
    let jaccard = if union == 0 {
        0.0
    } else {
        intersection as f64 / union as f64
    };
    seq_weight * seq + token_weight * jaccard
}

/// Longest common subsequence length, two-row dynamic programming.
fn lcs_length(a: &[char], b: &[char]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut curr = vec![0usize; b.len() + 1];
    for &ca in a {
        for (j, &cb) in b.iter().enumerate() {
            curr[j + 1] = if ca == cb {
                prev[j] + 1
            } else {
                prev[j + 1].max(curr[j])
            };
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

struct IndexedTitle {
    node: usize,
    id: String,
    normalized: String,
}

/// Title lookup structure for the title path: an exact map over normalized
/// titles plus an inverted token index that bounds how many papers each
/// extracted title is fuzzily compared against.
pub struct TitleIndex {
    titles: Vec<IndexedTitle>,
    exact: HashMap<String, Vec<usize>>,
    postings: HashMap<String, Vec<usize>>,
    pool_cap: usize,
}

impl TitleIndex {
    pub fn build(graph: &PropertyGraph, pool_cap: usize) -> Self {
        let mut titles = Vec::new();
        let mut exact: HashMap<String, Vec<usize>> = HashMap::new();
        let mut postings: HashMap<String, Vec<usize>> = HashMap::new();
        for (node, n) in graph.nodes_of_kind(NodeKind::Paper) {
            let Node::Paper(p) = n else { continue };
            let normalized = normalize_title_for_match(&p.title);
            if normalized.is_empty() {
                continue;
            }
            let pos = titles.len();
            for token in normalized
                .split_whitespace()
                .collect::<std::collections::BTreeSet<_>>()
            {
                postings.entry(token.to_string()).or_default().push(pos);
            }
            exact.entry(normalized.clone()).or_default().push(pos);
            titles.push(IndexedTitle {
                node,
                id: p.id.clone(),
                normalized,
            });
        }
        TitleIndex {
            titles,
            exact,
            postings,
            pool_cap,
        }
    }

    /// Exact hits plus the top `pool_cap` papers by distinct-token overlap
    /// (ties by paper id). Papers sharing no token never enter the pool.
    pub fn candidate_pool(&self, normalized: &str) -> Vec<usize> {
        let mut overlap: BTreeMap<usize, usize> = BTreeMap::new();
        for token in normalized
            .split_whitespace()
            .collect::<std::collections::BTreeSet<_>>()
        {
            if let Some(posting) = self.postings.get(token) {
                for &pos in posting {
                    *overlap.entry(pos).or_insert(0) += 1;
                }
            }
        }
        let mut ranked: Vec<(usize, usize)> = overlap.into_iter().collect();
        ranked.sort_by(|a, b| {
            b.1.cmp(&a.1)
                .then_with(|| self.titles[a.0].id.cmp(&self.titles[b.0].id))
        });
        ranked.truncate(self.pool_cap);
        let mut pool: Vec<usize> = Vec::new();
        if let Some(hits) = self.exact.get(normalized) {
            pool.extend_from_slice(hits);
        }
        for (pos, _) in ranked {
            if !pool.contains(&pos) {
                pool.push(pos);
            }
        }
        pool
    }

    fn title(&self, pos: usize) -> &IndexedTitle {
        &self.titles[pos]
    }
}

/// Match extracted titles against stored paper titles. Exact index hits
/// score confidence × 1.0; fuzzy candidates below the threshold are
/// discarded, the rest score confidence × similarity. Each input title
/// keeps at most `papers_per_title` papers; each paper keeps its best score
/// and is flagged exact if any surviving match was exact.
pub fn match_titles(
    titles: &[ExtractedTitle],
    index: &TitleIndex,
    config: &MatchingConfig,
) -> Vec<TitleScore> {
    struct Acc {
        id: String,
        best: f64,
        exact: bool,
    }
    let mut per_paper: BTreeMap<usize, Acc> = BTreeMap::new();
    for title in titles {
        if title.text_normalized.is_empty() || title.confidence <= 0.0 {
            continue;
        }
        let mut events: Vec<(usize, &str, f64, bool)> = Vec::new();
        for pos in index.candidate_pool(&title.text_normalized) {
            let entry = index.title(pos);
            let exact = entry.normalized == title.text_normalized;
            let m = if exact {
                1.0
            } else {
                let m = fuzzy_title_score(
                    &entry.normalized,
                    &title.text_normalized,
                    config.seq_weight,
                    config.token_weight,
                );
                if m < config.theta_title {
                    continue;
                }
                m
            };
            events.push((entry.node, entry.id.as_str(), title.confidence * m, exact));
        }
        events.sort_by(|a, b| {
            b.2.partial_cmp(&a.2)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.1.cmp(b.1))
        });
        events.truncate(config.papers_per_title);
        for (node, id, score, exact) in events {
            let acc = per_paper.entry(node).or_insert_with(|| Acc {
                id: id.to_string(),
                best: 0.0,
                exact: false,
            });
            acc.best = acc.best.max(score);
            acc.exact |= exact;
        }
    }
    let mut out: Vec<TitleScore> = per_paper
        .into_iter()
        .map(|(node, acc)| TitleScore {
            node,
            id: acc.id,
            s_title: acc.best,
            exact: acc.exact,
        })
        .collect();
    out.sort_by(|a, b| {
        b.s_title
            .partial_cmp(&a.s_title)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.id.cmp(&b.id))
    });
    out
}

/// Merge the semantic and title paths into pre-graph paper seeds.
///
/// For every candidate in the union, the embedding component is recomputed
/// from raw query–paper cosines (combined by the channel ratio over the
/// embeddings the paper actually stores), so title-only candidates still
/// get scored semantically. Both components are then min-max normalized
/// over the candidate pool (papers without a title score contribute 0 to
/// that pool) and fused with the configured weights plus an exact/fuzzy
/// title bonus.
pub fn merge_candidates(
    semantic: &[SemanticHit],
    title_scores: &[TitleScore],
    query_vector: &EmbeddingVector,
    graph: &PropertyGraph,
    config: &MatchingConfig,
) -> Vec<PaperSeed> {
    #[derive(Default)]
    struct Entry {
        title: Option<(f64, bool)>,
    }
    let mut pool: BTreeMap<usize, Entry> = BTreeMap::new();
    for hit in semantic {
        pool.entry(hit.node).or_default();
    }
    for t in title_scores {
        pool.entry(t.node).or_default().title = Some((t.s_title, t.exact));
    }
    if pool.is_empty() {
        return Vec::new();
    }

    let nodes: Vec<usize> = pool.keys().copied().collect();
    let mut emb_raw: Vec<f64> = Vec::with_capacity(nodes.len());
    let mut title_raw: Vec<f64> = Vec::with_capacity(nodes.len());
    for &node in &nodes {
        let paper = graph
            .node_at(node)
            .as_paper()
            .expect("seed candidates are papers");
        let sim_title = paper
            .title_embedding
            .as_ref()
            .and_then(|v| query_vector.cosine(v).ok());
        let sim_abstract = paper
            .abstract_embedding
            .as_ref()
            .and_then(|v| query_vector.cosine(v).ok());
        let combined = combine_channels(
            sim_title,
            sim_abstract,
            config.title_channel_weight,
            config.abstract_channel_weight,
        );
        if combined.is_none() {
            log::debug!(
                "seed candidate {} stores no embeddings; embedding component is 0",
                paper.id
            );
        }
        emb_raw.push(combined.unwrap_or(0.0));
        title_raw.push(pool[&node].title.map(|(s, _)| s).unwrap_or(0.0));
    }
    let emb_norm = min_max_normalize(&emb_raw);
    let title_norm = min_max_normalize(&title_raw);

    let mut seeds: Vec<PaperSeed> = nodes
        .iter()
        .enumerate()
        .map(|(i, &node)| {
            let title_hit = match pool[&node].title {
                Some((_, true)) => TitleHitKind::Exact,
                Some((_, false)) => TitleHitKind::Fuzzy,
                None => TitleHitKind::None,
            };
            let bonus = match title_hit {
                TitleHitKind::Exact => config.bonus_exact,
                TitleHitKind::Fuzzy => config.bonus_fuzzy,
                TitleHitKind::None => 0.0,
            };
            PaperSeed {
                node,
                id: graph.node_at(node).id().to_string(),
                s_pre: config.lambda_emb * emb_norm[i]
                    + config.lambda_title * title_norm[i]
                    + bonus,
                title_hit,
                bonus,
                emb_norm: emb_norm[i],
                title_norm: title_norm[i],
            }
        })
        .collect();
    seeds.sort_by(|a, b| {
        b.s_pre
            .partial_cmp(&a.s_pre)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.id.cmp(&b.id))
    });
    seeds
}

/// Everything the propagation stage needs from seed recall.
#[derive(Debug, Clone, Default)]
pub struct SeedSet {
    pub keywords: Vec<KeywordSeed>,
    pub papers: Vec<PaperSeed>,
}

impl SeedSet {
    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty() && self.papers.is_empty()
    }
}
