//! Final ranking over the walked subgraph, score breakdowns, and
//! path-based explanations.
//!
//! Paper mode fuses three normalized components — pre-graph score, walk
//! score, and citation importance — under a support gate that keeps purely
//! topological discoveries from outranking semantically grounded
//! candidates unless their walk score is overwhelming. Author mode ranks
//! by normalized walk score alone. Both modes break ties by citation
//! counts and then node id, so output order is deterministic.

use std::collections::HashMap;

use serde::Serialize;

use crate::config::{ImportanceMode, RankingConfig};
use crate::graph::{EdgeKind, NodeKind, PropertyGraph};
use crate::propagate::{paper_importance, RwrResult, WeightedSubgraph};
use crate::score::min_max_normalize;
use crate::seed::SeedSet;

/// Per-result score components. Paper mode fills every field; author mode
/// carries only the walk component, hop, and seed flag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreBreakdown {
    /// Min-max-normalized pre-graph score over the ranked pool
    /// (0 for papers discovered by expansion alone).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pre_norm: Option<f64>,
    /// Min-max-normalized walk score over the ranked pool.
    pub graph_norm: f64,
    /// Support gate applied to the walk component, in [floor, 1].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<f64>,
    /// Citation importance recomputed over the ranked pool.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub importance: Option<f64>,
    /// Title-match bonus that was folded into the pre-graph score.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub title_bonus: Option<f64>,
    /// Hop distance from the seed set.
    pub hop: u8,
    pub is_seed: bool,
}

/// One traversed edge in an explanation path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathStep {
    pub kind: EdgeKind,
    pub weight: f64,
}

/// A best path from one seed to a result node (at most two edges), scored
/// by the seed's teleport weight times the walk transition probabilities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplanationPath {
    /// Node ids from the seed to the result node.
    pub node_ids: Vec<String>,
    pub steps: Vec<PathStep>,
    pub seed_weight: f64,
    pub score: f64,
}

/// A ranked paper or author with its breakdown and explanations.
#[derive(Debug, Clone, Serialize)]
pub struct RankedResult {
    pub id: String,
    pub kind: NodeKind,
    pub score: f64,
    pub breakdown: ScoreBreakdown,
    pub explanations: Vec<ExplanationPath>,
}

/// The fused paper score and its support gate.
pub fn combine_final(
    pre_norm: f64,
    graph_norm: f64,
    importance: f64,
    config: &RankingConfig,
) -> (f64, f64) {
    let support = pre_norm.max(config.support_floor);
    let final_score = (config.lambda_pre * pre_norm
        + config.lambda_graph * graph_norm * support
        + config.lambda_imp * importance)
        .min(1.0);
    (final_score, support)
}

/// Rank the papers of the subgraph by the fused final score.
///
/// Discovered papers (no seed entry) enter the normalization pool with a
/// raw pre-graph score of exactly 0. Importance is recomputed over the
/// pool's total citation count. Ties break by citation count descending,
/// then node id.
pub fn rank_papers(
    subgraph: &WeightedSubgraph,
    rwr: &RwrResult,
    seeds: &SeedSet,
    graph: &PropertyGraph,
    config: &RankingConfig,
    importance_mode: ImportanceMode,
) -> Vec<RankedResult> {
    let seed_by_node: HashMap<usize, (f64, f64)> = seeds
        .papers
        .iter()
        .map(|p| (p.node, (p.s_pre, p.bonus)))
        .collect();
    let pool: Vec<usize> = (0..subgraph.len())
        .filter(|&l| subgraph.node(l).kind == NodeKind::Paper)
        .collect();
    if pool.is_empty() {
        return Vec::new();
    }
    let raw_pre: Vec<f64> = pool
        .iter()
        .map(|&l| {
            seed_by_node
                .get(&subgraph.node(l).graph_index)
                .map(|&(s_pre, _)| s_pre)
                .unwrap_or(0.0)
        })
        .collect();
    let pre_norm = min_max_normalize(&raw_pre);
    let raw_graph: Vec<f64> = pool.iter().map(|&l| rwr.scores[l]).collect();
    let graph_norm = min_max_normalize(&raw_graph);

    let paths = PathFinder::new(subgraph);
    let mut results: Vec<(RankedResult, u64)> = pool
        .iter()
        .enumerate()
        .map(|(i, &local)| {
            let node = subgraph.node(local);
            let citations = graph
                .node_at(node.graph_index)
                .as_paper()
                .map(|p| p.citation_count)
                .unwrap_or(0);
            let importance =
                paper_importance(citations, subgraph.citation_total(), importance_mode);
            let (score, support) = combine_final(pre_norm[i], graph_norm[i], importance, config);
            let bonus = seed_by_node
                .get(&node.graph_index)
                .map(|&(_, b)| b)
                .unwrap_or(0.0);
            let result = RankedResult {
                id: node.id.clone(),
                kind: NodeKind::Paper,
                score,
                breakdown: ScoreBreakdown {
                    pre_norm: Some(pre_norm[i]),
                    graph_norm: graph_norm[i],
                    support: Some(support),
                    importance: Some(importance),
                    title_bonus: Some(bonus),
                    hop: node.hop,
                    is_seed: node.is_seed,
                },
                explanations: Vec::new(),
            };
            (result, citations)
        })
        .collect();
    results.sort_by(|(a, ca), (b, cb)| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| cb.cmp(ca))
            .then_with(|| a.id.cmp(&b.id))
    });
    results.truncate(config.top_k);
    results
        .into_iter()
        .map(|(mut result, _)| {
            let local = subgraph
                .local_index(graph.node_index(&result.id).expect("ranked node exists"))
                .expect("ranked node is in the subgraph");
            result.explanations = paths.explain(local);
            result
        })
        .collect()
}

/// Rank the authors of the subgraph by normalized walk score. Ties break
/// by the author's citation count descending, then node id.
pub fn rank_authors(
    subgraph: &WeightedSubgraph,
    rwr: &RwrResult,
    graph: &PropertyGraph,
    config: &RankingConfig,
) -> Vec<RankedResult> {
    let pool: Vec<usize> = (0..subgraph.len())
        .filter(|&l| subgraph.node(l).kind == NodeKind::Author)
        .collect();
    if pool.is_empty() {
        return Vec::new();
    }
    let raw_graph: Vec<f64> = pool.iter().map(|&l| rwr.scores[l]).collect();
    let graph_norm = min_max_normalize(&raw_graph);

    let paths = PathFinder::new(subgraph);
    let mut results: Vec<(RankedResult, u64)> = pool
        .iter()
        .enumerate()
        .map(|(i, &local)| {
            let node = subgraph.node(local);
            let cited_by = graph
                .node_at(node.graph_index)
                .as_author()
                .map(|a| a.cited_by_count)
                .unwrap_or(0);
            let result = RankedResult {
                id: node.id.clone(),
                kind: NodeKind::Author,
                score: graph_norm[i],
                breakdown: ScoreBreakdown {
                    pre_norm: None,
                    graph_norm: graph_norm[i],
                    support: None,
                    importance: None,
                    title_bonus: None,
                    hop: node.hop,
                    is_seed: node.is_seed,
                },
                explanations: Vec::new(),
            };
            (result, cited_by)
        })
        .collect();
    results.sort_by(|(a, ca), (b, cb)| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| cb.cmp(ca))
            .then_with(|| a.id.cmp(&b.id))
    });
    results.truncate(config.top_k);
    results
        .into_iter()
        .map(|(mut result, _)| {
            let local = pool
                .iter()
                .copied()
                .find(|&l| subgraph.node(l).id == result.id)
                .expect("ranked author is in the pool");
            result.explanations = paths.explain(local);
            result
        })
        .collect()
}

/// Precomputed pair-level adjacency for explanation search. Parallel edges
/// between the same node pair are collapsed: the walk weight is their sum
/// and the reported step carries the dominant edge's kind.
pub struct PathFinder<'a> {
    subgraph: &'a WeightedSubgraph,
    /// (low, high) local pair -> (summed weight, dominant kind)
    pairs: HashMap<(usize, usize), (f64, EdgeKind)>,
    /// per-node list of (neighbor, pair weight), sorted by neighbor
    neighbors: Vec<Vec<(usize, f64)>>,
    seeds: Vec<usize>,
}

impl<'a> PathFinder<'a> {
    pub fn new(subgraph: &'a WeightedSubgraph) -> Self {
        // value: (summed weight, heaviest single weight, its kind); the
        // heaviest parallel edge names the step, the sum drives the walk
        let mut raw: HashMap<(usize, usize), (f64, f64, EdgeKind)> = HashMap::new();
        for edge in subgraph.edges() {
            let key = (edge.u.min(edge.v), edge.u.max(edge.v));
            let entry = raw
                .entry(key)
                .or_insert((0.0, f64::NEG_INFINITY, edge.kind));
            entry.0 += edge.weight;
            if edge.weight > entry.1 || (edge.weight == entry.1 && edge.kind < entry.2) {
                entry.1 = edge.weight;
                entry.2 = edge.kind;
            }
        }
        let pairs: HashMap<(usize, usize), (f64, EdgeKind)> = raw
            .into_iter()
            .map(|(key, (sum, _, kind))| (key, (sum, kind)))
            .collect();
        let mut neighbors: Vec<Vec<(usize, f64)>> = vec![Vec::new(); subgraph.len()];
        for (&(u, v), &(w, _)) in &pairs {
            neighbors[u].push((v, w));
            neighbors[v].push((u, w));
        }
        for list in &mut neighbors {
            list.sort_by_key(|&(v, _)| v);
        }
        let seeds: Vec<usize> = (0..subgraph.len())
            .filter(|&l| subgraph.node(l).is_seed)
            .collect();
        PathFinder {
            subgraph,
            pairs,
            neighbors,
            seeds,
        }
    }

    fn pair(&self, a: usize, b: usize) -> Option<(f64, EdgeKind)> {
        self.pairs.get(&(a.min(b), a.max(b))).copied()
    }

    /// Transition probability from `from` across a pair of total weight `w`.
    fn transition(&self, from: usize, pair_weight: f64) -> f64 {
        pair_weight / self.subgraph.total_weight(from)
    }

    /// Up to three best simple paths from distinct seeds to `target`, at
    /// most two edges each. A seed target yields its single zero-length
    /// path. Ties prefer higher score, then fewer edges, then smaller
    /// intermediate id, then smaller seed id.
    pub fn explain(&self, target: usize) -> Vec<ExplanationPath> {
        let node = self.subgraph.node(target);
        if node.is_seed {
            let weight = self.subgraph.teleport()[target];
            return vec![ExplanationPath {
                node_ids: vec![node.id.clone()],
                steps: Vec::new(),
                seed_weight: weight,
                score: weight,
            }];
        }
        struct Candidate {
            seed: usize,
            intermediate: Option<usize>,
            score: f64,
            steps: Vec<PathStep>,
        }
        let mut best_per_seed: Vec<Candidate> = Vec::new();
        for &seed in &self.seeds {
            let seed_weight = self.subgraph.teleport()[seed];
            let mut best: Option<Candidate> = None;
            let consider = |candidate: Candidate, best: &mut Option<Candidate>| {
                let replace = match best {
                    None => true,
                    Some(current) => {
                        candidate.score > current.score
                            || (candidate.score == current.score
                                && (candidate.steps.len() < current.steps.len()
                                    || (candidate.steps.len() == current.steps.len()
                                        && candidate
                                            .intermediate
                                            .map(|i| &self.subgraph.node(i).id)
                                            < current
                                                .intermediate
                                                .map(|i| &self.subgraph.node(i).id))))
                    }
                };
                if replace {
                    *best = Some(candidate);
                }
            };
            if let Some((w, kind)) = self.pair(seed, target) {
                consider(
                    Candidate {
                        seed,
                        intermediate: None,
                        score: seed_weight * self.transition(seed, w),
                        steps: vec![PathStep { kind, weight: w }],
                    },
                    &mut best,
                );
            }
            for &(mid, w2) in &self.neighbors[target] {
                if mid == seed || mid == target {
                    continue;
                }
                if let Some((w1, kind1)) = self.pair(seed, mid) {
                    let (_, kind2) = self.pair(mid, target).expect("neighbor pair exists");
                    consider(
                        Candidate {
                            seed,
                            intermediate: Some(mid),
                            score: seed_weight
                                * self.transition(seed, w1)
                                * self.transition(mid, w2),
                            steps: vec![
                                PathStep {
                                    kind: kind1,
                                    weight: w1,
                                },
                                PathStep {
                                    kind: kind2,
                                    weight: w2,
                                },
                            ],
                        },
                        &mut best,
                    );
                }
            }
            if let Some(found) = best {
                best_per_seed.push(found);
            }
        }
        best_per_seed.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| {
                    self.subgraph
                        .node(a.seed)
                        .id
                        .cmp(&self.subgraph.node(b.seed).id)
                })
        });
        best_per_seed.truncate(3);
        best_per_seed
            .into_iter()
            .map(|c| {
                let mut node_ids = vec![self.subgraph.node(c.seed).id.clone()];
                if let Some(mid) = c.intermediate {
                    node_ids.push(self.subgraph.node(mid).id.clone());
                }
                node_ids.push(self.subgraph.node(target).id.clone());
                ExplanationPath {
                    node_ids,
                    steps: c.steps,
                    seed_weight: self.subgraph.teleport()[c.seed],
                    score: c.score,
                }
            })
            .collect()
    }
}
