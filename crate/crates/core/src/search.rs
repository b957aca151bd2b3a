//! End-to-end query execution: query analysis, tri-path seed recall,
//! subgraph expansion, the walk, and final ranking, bundled behind one
//! context object that owns the graph and the providers.

use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::config::{EmbeddingConfig, RunConfig};
use crate::embed::{Embedder, EmbeddingReranker, HashEmbedder, Reranker};
use crate::error::{Error, Result};
use crate::graph::{Node, NodeKind, PropertyGraph};
use crate::propagate::{expand_subgraph, rwr_solve};
use crate::query::{
    extract_keywords, extract_titles, query_embedding, resolve_keyword_provider,
    resolve_title_provider, KeywordProvider, QueryInput, TitleProvider,
};
use crate::rank::{rank_authors, rank_papers, ExplanationPath, ScoreBreakdown};
use crate::seed::{
    match_keywords, match_semantic, match_titles, merge_candidates, SeedSet, TitleIndex,
};

/// What the ranked list contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Paper,
    Author,
}

impl SearchMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchMode::Paper => "paper",
            SearchMode::Author => "author",
        }
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "papers" => Ok(SearchMode::Paper),
            "author" | "authors" => Ok(SearchMode::Author),
            other => Err(Error::InvalidParameter(format!(
                "unknown search mode `{other}` (expected `paper` or `author`)"
            ))),
        }
    }
}

/// One ranked entry, enriched with display metadata from the graph.
#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub rank: usize,
    pub id: String,
    pub kind: NodeKind,
    /// Paper title or author display name.
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub venue: Option<String>,
    /// Citation count for papers, cited-by count for authors.
    pub citations: u64,
    pub score: f64,
    pub breakdown: ScoreBreakdown,
    pub explanations: Vec<ExplanationPath>,
}

/// Pipeline counters and fallback flags for one query.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchStats {
    pub keywords_extracted: usize,
    pub titles_extracted: usize,
    pub keyword_seeds: usize,
    pub paper_seeds: usize,
    pub subgraph_nodes: usize,
    pub subgraph_edges: usize,
    pub rwr_iterations: usize,
    pub rwr_converged: bool,
    pub rwr_delta_l1: f64,
    /// True when no recall path produced a seed; the walk was skipped.
    pub empty_recall: bool,
    pub used_keyword_fallback: bool,
    pub used_title_fallback: bool,
    pub used_rerank_fallback: bool,
    pub used_leading_text: bool,
}

/// The full outcome of one search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub mode: SearchMode,
    pub results: Vec<SearchResult>,
    pub stats: SearchStats,
    /// Human-readable notices (provider fallbacks, empty recall).
    pub notes: Vec<String>,
}

fn resolve_embedder(config: &EmbeddingConfig) -> Result<Arc<dyn Embedder>> {
    match config.provider.as_str() {
        "hash-ngram" => Ok(Arc::new(HashEmbedder::new(config.dimension)?)),
        other => Err(Error::Provider {
            provider: other.to_string(),
            message: "no such embedding provider in this build (available: hash-ngram)".into(),
        }),
    }
}

fn resolve_reranker(name: &str, embedder: Arc<dyn Embedder>) -> Result<Box<dyn Reranker>> {
    match name {
        "embedding-cosine" => Ok(Box::new(EmbeddingReranker::new(embedder))),
        other => Err(Error::Provider {
            provider: other.to_string(),
            message: "no such reranker in this build (available: embedding-cosine)".into(),
        }),
    }
}

/// Owns a frozen graph plus the providers and indexes needed to serve
/// queries against it.
pub struct SearchContext {
    graph: PropertyGraph,
    config: RunConfig,
    embedder: Arc<dyn Embedder>,
    reranker: Box<dyn Reranker>,
    keyword_provider: Option<Box<dyn KeywordProvider>>,
    title_provider: Option<Box<dyn TitleProvider>>,
    title_index: TitleIndex,
}

impl SearchContext {
    /// Build a context over a frozen graph. Fails if the graph is not
    /// frozen, a configured provider does not exist, or the embedder's
    /// dimension does not match the graph's.
    pub fn new(graph: PropertyGraph, config: RunConfig) -> Result<Self> {
        if !graph.is_frozen() {
            return Err(Error::NotFrozen);
        }
        config.validate()?;
        let embedder = resolve_embedder(&config.embedding)?;
        if embedder.dimension() != graph.dimension() {
            return Err(Error::Dimension {
                expected: graph.dimension(),
                got: embedder.dimension(),
            });
        }
        let reranker = resolve_reranker(&config.matching.reranker_provider, embedder.clone())?;
        let keyword_provider = resolve_keyword_provider(&config.query)?;
        let title_provider = resolve_title_provider(&config.query)?;
        let title_index = TitleIndex::build(&graph, config.matching.fuzzy_pool_cap);
        Ok(SearchContext {
            graph,
            config,
            embedder,
            reranker,
            keyword_provider,
            title_provider,
            title_index,
        })
    }

    pub fn graph(&self) -> &PropertyGraph {
        &self.graph
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    /// Run the full pipeline for one query.
    pub fn search(&self, query: &QueryInput, mode: SearchMode) -> Result<SearchOutcome> {
        let mut stats = SearchStats::default();
        let mut notes = Vec::new();

        let keywords =
            extract_keywords(query, &self.config.query, self.keyword_provider.as_deref())?;
        stats.keywords_extracted = keywords.keywords.len();
        stats.used_keyword_fallback = keywords.used_fallback;
        if keywords.used_fallback {
            notes.push("keyword provider unavailable; used local term statistics".to_string());
        }
        let titles = extract_titles(query, &self.config.query, self.title_provider.as_deref())?;
        stats.titles_extracted = titles.titles.len();
        stats.used_title_fallback = titles.used_fallback;
        if titles.used_fallback {
            notes.push("title provider unavailable; used local line heuristics".to_string());
        }
        let embedded = query_embedding(query, self.embedder.as_ref())?;
        stats.used_leading_text = embedded.used_leading_text;
        if embedded.used_leading_text {
            notes.push(
                "no abstract heading found in the full-paper query; embedded the leading text"
                    .to_string(),
            );
        }

        let keyword_seeds = match_keywords(
            &keywords.keywords,
            &self.graph,
            &self.config.matching,
            self.embedder.as_ref(),
        )?;
        let semantic = match_semantic(
            &embedded.embedded_text,
            &embedded.vector,
            &self.graph,
            &self.config.matching,
            self.reranker.as_ref(),
        )?;
        stats.used_rerank_fallback = semantic.used_rerank_fallback;
        if semantic.used_rerank_fallback {
            notes.push("reranker failed; used retrieval cosines for channel scores".to_string());
        }
        let title_scores = match_titles(&titles.titles, &self.title_index, &self.config.matching);
        let papers = merge_candidates(
            &semantic.hits,
            &title_scores,
            &embedded.vector,
            &self.graph,
            &self.config.matching,
        );
        let seeds = SeedSet {
            keywords: keyword_seeds,
            papers,
        };
        stats.keyword_seeds = seeds.keywords.len();
        stats.paper_seeds = seeds.papers.len();

        if seeds.is_empty() {
            stats.empty_recall = true;
            notes.push("no recall path matched the query; nothing to rank".to_string());
            return Ok(SearchOutcome {
                mode,
                results: Vec::new(),
                stats,
                notes,
            });
        }

        let subgraph = expand_subgraph(&seeds, &self.graph, &self.config.propagation)?;
        stats.subgraph_nodes = subgraph.len();
        stats.subgraph_edges = subgraph.edges().len();
        let rwr = rwr_solve(&subgraph, &self.config.propagation);
        stats.rwr_iterations = rwr.iterations;
        stats.rwr_converged = rwr.converged;
        stats.rwr_delta_l1 = rwr.delta_l1;
        if !rwr.converged {
            notes.push(format!(
                "walk stopped at the iteration cap with L1 change {:.3e}",
                rwr.delta_l1
            ));
        }

        let ranked = match mode {
            SearchMode::Paper => rank_papers(
                &subgraph,
                &rwr,
                &seeds,
                &self.graph,
                &self.config.ranking,
                self.config.propagation.importance_mode,
            ),
            SearchMode::Author => rank_authors(&subgraph, &rwr, &self.graph, &self.config.ranking),
        };
        if ranked.is_empty() {
            notes.push(match mode {
                SearchMode::Paper => "subgraph contains no papers".to_string(),
                SearchMode::Author => "subgraph contains no authors".to_string(),
            });
        }

        let results = ranked
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let node = self
                    .graph
                    .node(&r.id)
                    .expect("ranked ids come from the graph");
                let (label, year, venue, citations) = match node {
                    Node::Paper(p) => (
                        p.title.clone(),
                        Some(p.publication_year),
                        p.venue_name.clone(),
                        p.citation_count,
                    ),
                    Node::Author(a) => (a.display_name.clone(), None, None, a.cited_by_count),
                    other => (other.label().to_string(), None, None, 0),
                };
                SearchResult {
                    rank: i + 1,
                    id: r.id,
                    kind: r.kind,
                    label,
                    year,
                    venue,
                    citations,
                    score: r.score,
                    breakdown: r.breakdown,
                    explanations: r.explanations,
                }
            })
            .collect();
        Ok(SearchOutcome {
            mode,
            results,
            stats,
            notes,
        })
    }
}
