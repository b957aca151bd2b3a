//! Capped 2-hop subgraph expansion around seed nodes, teleport and edge
//! weighting, and the Random Walk with Restart solver.
//!
//! Expansion treats every edge as undirected and only follows edges whose
//! weight is positive under the current seed context. Node admission is
//! capped per hop and per node kind, ranked by best incoming edge weight
//! with node-id tie-breaks, so the subgraph is deterministic. The solver
//! uses synchronous updates with a fixed accumulation order, which keeps
//! the whole stage bit-reproducible.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::config::{EdgeWeightConfig, ImportanceMode, PropagationConfig};
use crate::error::{Error, Result};
use crate::graph::{edge_static_weight, Edge, EdgeKind, NodeKind, PropertyGraph};
use crate::seed::SeedSet;

/// A node admitted into the expansion subgraph.
#[derive(Debug, Clone)]
pub struct SubgraphNode {
    /// Index of this node in the backing graph.
    pub graph_index: usize,
    pub id: String,
    pub kind: NodeKind,
    /// Undirected hop distance from the seed set (0 for seeds).
    pub hop: u8,
    pub is_seed: bool,
}

/// One retained edge, in subgraph-local endpoint indexes, with its
/// unnormalized walk weight.
#[derive(Debug, Clone)]
pub struct SubgraphEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub kind: EdgeKind,
}

/// The weighted local subgraph the walk runs on.
#[derive(Debug, Clone)]
pub struct WeightedSubgraph {
    nodes: Vec<SubgraphNode>,
    index_of: HashMap<usize, usize>,
    edges: Vec<SubgraphEdge>,
    teleport: Vec<f64>,
    /// Total incident weight per node; 0 marks a dangling node.
    out_weight: Vec<f64>,
    /// Sum of citation counts over all papers in the subgraph.
    citation_total: u64,
}

impl WeightedSubgraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[SubgraphNode] {
        &self.nodes
    }

    pub fn node(&self, local: usize) -> &SubgraphNode {
        &self.nodes[local]
    }

    /// Local index of a graph node, if it was admitted.
    pub fn local_index(&self, graph_index: usize) -> Option<usize> {
        self.index_of.get(&graph_index).copied()
    }

    pub fn edges(&self) -> &[SubgraphEdge] {
        &self.edges
    }

    pub fn teleport(&self) -> &[f64] {
        &self.teleport
    }

    pub fn citation_total(&self) -> u64 {
        self.citation_total
    }

    /// Total incident edge weight of a node (the transition denominator).
    pub fn total_weight(&self, local: usize) -> f64 {
        self.out_weight[local]
    }

    /// Transition probability for one edge leaving `from`, i.e. its weight
    /// over the node's total incident weight.
    pub fn transition(&self, from: usize, edge: &SubgraphEdge) -> f64 {
        debug_assert!(edge.u == from || edge.v == from);
        edge.weight / self.out_weight[from]
    }
}

/// Unnormalized walk weight of an edge. `seed_keyword_weight` carries the
/// match weight of the keyword endpoint when that keyword is a seed; other
/// keywords fall back to the configured smoothing floor (handled by the
/// static table).
pub fn edge_weight(
    edge: &Edge,
    seed_keyword_weight: Option<f64>,
    weights: &EdgeWeightConfig,
) -> f64 {
    match (edge.kind, seed_keyword_weight) {
        (EdgeKind::HasKeyword, Some(kw_weight)) => {
            weights.has_keyword * kw_weight * edge.relevance_score.unwrap_or(0.0)
        }
        _ => edge_static_weight(edge, weights),
    }
}

/// Citation-derived importance of a paper relative to the pool's total
/// citation count, in [0, 1]. Relevance mode pins every paper to 1.
pub fn paper_importance(citation_count: u64, citation_total: u64, mode: ImportanceMode) -> f64 {
    match mode {
        ImportanceMode::Relevance => 1.0,
        ImportanceMode::Quality => {
            let denominator = (1.0 + citation_total.max(1) as f64).ln();
            let ratio = (1.0 + citation_count as f64).ln() / denominator;
            ratio.min(1.0)
        }
    }
}

/// Expand the 2-hop undirected subgraph around the seeds and weight it.
///
/// Per hop and per node kind at most `hop_node_cap` nodes are admitted,
/// ranked by strongest incoming edge weight (node id breaks ties). Every
/// positive-weight edge between admitted nodes is retained. The teleport
/// distribution is computed over the admitted seeds.
pub fn expand_subgraph(
    seeds: &SeedSet,
    graph: &PropertyGraph,
    config: &PropagationConfig,
) -> Result<WeightedSubgraph> {
    if seeds.is_empty() {
        return Err(Error::NoSeeds);
    }
    let kw_weights: HashMap<usize, f64> =
        seeds.keywords.iter().map(|k| (k.node, k.weight)).collect();
    let weight_of = |edge: &Edge| -> f64 {
        // the keyword endpoint of HAS_KEYWORD is always the destination
        let kw = if edge.kind == EdgeKind::HasKeyword {
            graph
                .node_index(&edge.dst)
                .and_then(|i| kw_weights.get(&i))
                .copied()
        } else {
            None
        };
        edge_weight(edge, kw, &config.edge_weights)
    };

    let mut nodes: Vec<SubgraphNode> = Vec::new();
    let mut index_of: HashMap<usize, usize> = HashMap::new();
    let admit = |graph_index: usize,
                 hop: u8,
                 is_seed: bool,
                 nodes: &mut Vec<SubgraphNode>,
                 index_of: &mut HashMap<usize, usize>| {
        let node = graph.node_at(graph_index);
        index_of.insert(graph_index, nodes.len());
        nodes.push(SubgraphNode {
            graph_index,
            id: node.id().to_string(),
            kind: node.kind(),
            hop,
            is_seed,
        });
    };

    // Hop 0: the seeds themselves, capped per kind by weight then id.
    let mut paper_seeds: Vec<(usize, f64, &str)> = seeds
        .papers
        .iter()
        .map(|p| (p.node, p.s_pre, p.id.as_str()))
        .collect();
    let mut keyword_seeds: Vec<(usize, f64, &str)> = seeds
        .keywords
        .iter()
        .map(|k| (k.node, k.weight, k.id.as_str()))
        .collect();
    for group in [&mut paper_seeds, &mut keyword_seeds] {
        group.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.2.cmp(b.2))
        });
        group.truncate(config.hop_node_cap);
    }
    for (node, _, _) in paper_seeds.iter().chain(keyword_seeds.iter()) {
        if !index_of.contains_key(node) {
            admit(*node, 0, true, &mut nodes, &mut index_of);
        }
    }

    // Hops 1 and 2: frontier neighbors over positive-weight edges, grouped
    // by node kind, ranked by best discovery weight.
    let mut frontier: Vec<usize> = nodes.iter().map(|n| n.graph_index).collect();
    for hop in 1..=2u8 {
        let mut best_incoming: BTreeMap<usize, f64> = BTreeMap::new();
        for &from in &frontier {
            for (neighbor, edge_idx) in graph.adjacency_raw(from) {
                if index_of.contains_key(&neighbor) {
                    continue;
                }
                let w = weight_of(graph.edge_at(edge_idx));
                if w <= 0.0 {
                    continue;
                }
                let entry = best_incoming.entry(neighbor).or_insert(0.0);
                *entry = entry.max(w);
            }
        }
        let mut by_kind: BTreeMap<NodeKind, Vec<(usize, f64)>> = BTreeMap::new();
        for (neighbor, w) in best_incoming {
            by_kind
                .entry(graph.node_at(neighbor).kind())
                .or_default()
                .push((neighbor, w));
        }
        let mut admitted_this_hop: Vec<usize> = Vec::new();
        for (_, mut group) in by_kind {
            group.sort_by(|a, b| {
                b.1.partial_cmp(&a.1)
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then_with(|| graph.node_at(a.0).id().cmp(graph.node_at(b.0).id()))
            });
            group.truncate(config.hop_node_cap);
            for (neighbor, _) in group {
                admit(neighbor, hop, false, &mut nodes, &mut index_of);
                admitted_this_hop.push(neighbor);
            }
        }
        if admitted_this_hop.is_empty() {
            break;
        }
        frontier = admitted_this_hop;
    }

    // Retain every positive-weight edge whose endpoints were both admitted.
    let mut edge_indexes: BTreeSet<usize> = BTreeSet::new();
    for node in &nodes {
        for (neighbor, edge_idx) in graph.adjacency_raw(node.graph_index) {
            if index_of.contains_key(&neighbor) {
                edge_indexes.insert(edge_idx);
            }
        }
    }
    let mut edges: Vec<SubgraphEdge> = Vec::new();
    let mut out_weight = vec![0.0; nodes.len()];
    for edge_idx in edge_indexes {
        let edge = graph.edge_at(edge_idx);
        let (Some(&u), Some(&v)) = (
            graph.node_index(&edge.src).and_then(|i| index_of.get(&i)),
            graph.node_index(&edge.dst).and_then(|i| index_of.get(&i)),
        ) else {
            continue;
        };
        let w = weight_of(edge);
        if w <= 0.0 {
            continue;
        }
        out_weight[u] += w;
        out_weight[v] += w;
        edges.push(SubgraphEdge {
            u,
            v,
            weight: w,
            kind: edge.kind,
        });
    }
    edges.sort_by_key(|a| (a.u, a.v, a.kind));

    let citation_total: u64 = nodes
        .iter()
        .filter_map(|n| graph.node_at(n.graph_index).as_paper())
        .map(|p| p.citation_count)
        .sum();

    let mut subgraph = WeightedSubgraph {
        nodes,
        index_of,
        edges,
        teleport: Vec::new(),
        out_weight,
        citation_total,
    };
    subgraph.teleport = seed_teleport(seeds, &subgraph, graph, config);
    Ok(subgraph)
}

/// Teleport distribution over the subgraph: paper seeds weighted by their
/// pre-graph score boosted by citation importance, keyword seeds by their
/// match weight, normalized to sum 1. If every seed weight is zero the
/// distribution is uniform over seeds.
fn seed_teleport(
    seeds: &SeedSet,
    subgraph: &WeightedSubgraph,
    graph: &PropertyGraph,
    config: &PropagationConfig,
) -> Vec<f64> {
    let mut teleport = vec![0.0; subgraph.len()];
    let mut seed_locals: Vec<usize> = Vec::new();
    for paper in &seeds.papers {
        let Some(local) = subgraph.local_index(paper.node) else {
            continue;
        };
        let citations = graph
            .node_at(paper.node)
            .as_paper()
            .map(|p| p.citation_count)
            .unwrap_or(0);
        let imp = paper_importance(citations, subgraph.citation_total, config.importance_mode);
        teleport[local] = paper.s_pre * (1.0 + config.gamma * imp);
        seed_locals.push(local);
    }
    for keyword in &seeds.keywords {
        if let Some(local) = subgraph.local_index(keyword.node) {
            teleport[local] = keyword.weight;
            seed_locals.push(local);
        }
    }
    let total: f64 = teleport.iter().sum();
    if total > 0.0 {
        for value in &mut teleport {
            *value /= total;
        }
    } else {
        log::warn!(
            "all {} seed weights are zero; using a uniform teleport distribution",
            seed_locals.len()
        );
        let uniform = 1.0 / seed_locals.len() as f64;
        for local in seed_locals {
            teleport[local] = uniform;
        }
    }
    teleport
}

/// Outcome of the walk: per-node scores (subgraph-local order), iterations
/// used, and the final L1 change.
#[derive(Debug, Clone)]
pub struct RwrResult {
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub delta_l1: f64,
    pub converged: bool,
}

/// Random Walk with Restart over the weighted subgraph.
pub fn rwr_solve(subgraph: &WeightedSubgraph, config: &PropagationConfig) -> RwrResult {
    rwr_solve_with(subgraph, config, |_, _| {})
}

/// As [`rwr_solve`], invoking `observer(iteration, scores)` after every
/// iteration (1-based) so callers can check per-iteration invariants.
pub fn rwr_solve_with(
    subgraph: &WeightedSubgraph,
    config: &PropagationConfig,
    mut observer: impl FnMut(usize, &[f64]),
) -> RwrResult {
    let n = subgraph.len();
    let alpha = config.alpha;
    let teleport = subgraph.teleport();
    let mut current: Vec<f64> = teleport.to_vec();
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut delta_l1 = f64::INFINITY;
    let mut converged = false;

    // Synchronous updates: `next` is built entirely from `current`. The
    // edge list is pre-sorted, so float accumulation order is fixed.
    while iterations < config.max_iterations {
        for (v, value) in next.iter_mut().enumerate() {
            *value = alpha * teleport[v];
        }
        for edge in subgraph.edges() {
            next[edge.v] +=
                (1.0 - alpha) * current[edge.u] * edge.weight / subgraph.total_weight(edge.u);
            next[edge.u] +=
                (1.0 - alpha) * current[edge.v] * edge.weight / subgraph.total_weight(edge.v);
        }
        for v in 0..n {
            if subgraph.total_weight(v) == 0.0 {
                next[v] += (1.0 - alpha) * current[v];
            }
        }
        delta_l1 = current.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut current, &mut next);
        iterations += 1;
        observer(iterations, &current);
        if delta_l1 < config.epsilon {
            converged = true;
            break;
        }
    }
    RwrResult {
        scores: current,
        iterations,
        delta_l1,
        converged,
    }
}
