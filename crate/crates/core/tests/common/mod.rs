//! Shared helpers for the integration suites: independent reference
//! implementations (dense walk, full-table LCS) and random graph builders.
//! The reference code here deliberately avoids the crate's own algorithms —
//! dense matrices instead of edge relaxation, a full DP table instead of the
//! two-row recurrence — so agreement between the two is evidence, not an
//! identity.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scholargraph_core::config::PropagationConfig;
use scholargraph_core::graph::{
    AuthorNode, Edge, EdgeKind, KeywordNode, Node, PaperNode, PropertyGraph,
};
use scholargraph_core::propagate::WeightedSubgraph;
use scholargraph_core::seed::{KeywordSeed, PaperSeed, SeedSet, TitleHitKind};

/// Dense power iteration over the subgraph's pairwise transition matrix.
/// Mirrors the documented walk semantics: restart mass `alpha` to the
/// teleport vector, remaining mass spread over incident edge weights, and
/// nodes with zero incident weight retaining their non-restart mass.
pub fn dense_rwr(subgraph: &WeightedSubgraph, config: &PropagationConfig) -> Vec<f64> {
    let n = subgraph.len();
    let teleport = subgraph.teleport();
    // incident weight per node, parallel edges summed
    let mut incident = vec![0.0f64; n];
    for edge in subgraph.edges() {
        incident[edge.u] += edge.weight;
        incident[edge.v] += edge.weight;
    }
    // column-stochastic transition matrix: m[v][u] = P(v | u)
    let mut matrix = vec![vec![0.0f64; n]; n];
    for edge in subgraph.edges() {
        matrix[edge.v][edge.u] += edge.weight / incident[edge.u];
        matrix[edge.u][edge.v] += edge.weight / incident[edge.v];
    }
    for u in 0..n {
        if incident[u] == 0.0 {
            matrix[u][u] = 1.0;
        }
    }

    let alpha = config.alpha;
    let mut r: Vec<f64> = teleport.to_vec();
    for _ in 0..config.max_iterations {
        let mut next = vec![0.0f64; n];
        for v in 0..n {
            let mut inflow = 0.0;
            for u in 0..n {
                inflow += matrix[v][u] * r[u];
            }
            next[v] = alpha * teleport[v] + (1.0 - alpha) * inflow;
        }
        let delta: f64 = next.iter().zip(&r).map(|(a, b)| (a - b).abs()).sum();
        r = next;
        if delta < config.epsilon {
            break;
        }
    }
    r
}

/// Longest common subsequence length via the full O(|a|·|b|) table.
pub fn lcs_full_table(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut table = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 0..a.len() {
        for j in 0..b.len() {
            table[i + 1][j + 1] = if a[i] == b[j] {
                table[i][j] + 1
            } else {
                table[i][j + 1].max(table[i + 1][j])
            };
        }
    }
    table[a.len()][b.len()]
}

/// Reference fuzzy title score: weighted sum of the character-sequence
/// ratio and whitespace-token Jaccard, with the same degenerate rules as
/// the production scorer (empty input scores zero, equality scores one).
pub fn oracle_fuzzy(a: &str, b: &str, seq_weight: f64, token_weight: f64) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    if a == b {
        return 1.0;
    }
    let la = a.chars().count() as f64;
    let lb = b.chars().count() as f64;
    let seq = 2.0 * lcs_full_table(a, b) as f64 / (la + lb);
    let ta: BTreeSet<&str> = a.split_whitespace().collect();
    let tb: BTreeSet<&str> = b.split_whitespace().collect();
    let union = ta.union(&tb).count();
    let jaccard = if union == 0 {
        0.0
    } else {
        ta.intersection(&tb).count() as f64 / union as f64
    };
    seq_weight * seq + token_weight * jaccard
}

/// A random schema-valid graph of ≤50 nodes plus a random seed set over it.
/// Covers papers/authors/keywords, every walk-relevant relation kind,
/// parallel pairs (mutual citations), occasional missing relevance scores,
/// and — with `force_isolated` — a guaranteed dangling seed paper.
pub fn random_graph(seed: u64, force_isolated: bool) -> (PropertyGraph, SeedSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = PropertyGraph::new(8);

    let n_papers = rng.gen_range(3..=22);
    let n_authors = rng.gen_range(0..=10);
    let n_keywords = rng.gen_range(0..=10);

    for i in 0..n_papers {
        let mut paper = PaperNode::new(
            format!("P{i:02}"),
            format!("paper number {i}"),
            "abstract text",
            2000 + (i as i32 % 25),
            rng.gen_range(0..400),
        );
        paper.venue_name = None;
        g.add_node(Node::Paper(paper)).unwrap();
    }
    for i in 0..n_authors {
        g.add_node(Node::Author(AuthorNode::new(
            format!("A{i:02}"),
            format!("author {i}"),
        )))
        .unwrap();
    }
    for i in 0..n_keywords {
        g.add_node(Node::Keyword(KeywordNode::new(
            format!("K{i:02}"),
            format!("keyword number {i}"),
        )))
        .unwrap();
    }

    // Isolated paper: a valid seed with no edges, so the walk sees a
    // dangling node.
    let isolated_id = if force_isolated || rng.gen_bool(0.3) {
        let id = "PISO".to_string();
        g.add_node(Node::Paper(PaperNode::new(
            id.clone(),
            "isolated paper",
            "abstract text",
            2015,
            rng.gen_range(0..400),
        )))
        .unwrap();
        Some(id)
    } else {
        None
    };

    let paper_id = |i: usize| format!("P{i:02}");
    let author_id = |i: usize| format!("A{i:02}");
    let keyword_id = |i: usize| format!("K{i:02}");
    let mut used: BTreeSet<(String, String, EdgeKind)> = BTreeSet::new();
    let try_add = |g: &mut PropertyGraph, edge: Edge, used: &mut BTreeSet<_>| {
        if edge.src == edge.dst {
            return;
        }
        if used.insert((edge.src.clone(), edge.dst.clone(), edge.kind)) {
            g.add_edge(edge).unwrap();
        }
    };

    for _ in 0..rng.gen_range(0..(3 * n_papers)) {
        let (a, b) = (rng.gen_range(0..n_papers), rng.gen_range(0..n_papers));
        let kind = if rng.gen_bool(0.8) {
            EdgeKind::Cites
        } else {
            EdgeKind::RelatedTo
        };
        try_add(&mut g, Edge::new(paper_id(a), paper_id(b), kind), &mut used);
    }
    if n_authors > 0 {
        for _ in 0..rng.gen_range(0..(2 * n_authors)) {
            let (a, p) = (rng.gen_range(0..n_authors), rng.gen_range(0..n_papers));
            try_add(
                &mut g,
                Edge::new(author_id(a), paper_id(p), EdgeKind::Authored),
                &mut used,
            );
        }
        for _ in 0..rng.gen_range(0..n_authors) {
            let (a, b) = (rng.gen_range(0..n_authors), rng.gen_range(0..n_authors));
            let count = rng.gen_range(1..=6);
            try_add(
                &mut g,
                Edge::new(author_id(a), author_id(b), EdgeKind::Coauthor).with_count(count),
                &mut used,
            );
        }
    }
    if n_keywords > 0 {
        for _ in 0..rng.gen_range(0..(2 * n_papers)) {
            let (p, k) = (rng.gen_range(0..n_papers), rng.gen_range(0..n_keywords));
            let edge = Edge::new(paper_id(p), keyword_id(k), EdgeKind::HasKeyword)
                .with_relevance(rng.gen_range(0.05..1.0));
            try_add(&mut g, edge, &mut used);
        }
        for _ in 0..rng.gen_range(0..n_keywords) {
            let (a, b) = (rng.gen_range(0..n_keywords), rng.gen_range(0..n_keywords));
            let count = rng.gen_range(1..=4);
            try_add(
                &mut g,
                Edge::new(keyword_id(a), keyword_id(b), EdgeKind::Cooccur).with_count(count),
                &mut used,
            );
        }
    }
    g.freeze();

    // random seed set: 1–5 papers, 0–3 keywords, all weights positive
    let mut papers = Vec::new();
    let mut picked = BTreeSet::new();
    for _ in 0..rng.gen_range(1..=5.min(n_papers)) {
        let i = rng.gen_range(0..n_papers);
        if picked.insert(i) {
            papers.push(paper_seed(&g, &paper_id(i), rng.gen_range(0.1..1.3)));
        }
    }
    if let Some(id) = isolated_id {
        papers.push(paper_seed(&g, &id, rng.gen_range(0.1..1.3)));
    }
    let mut keywords = Vec::new();
    let mut picked = BTreeSet::new();
    if n_keywords > 0 {
        for _ in 0..rng.gen_range(0..=3.min(n_keywords)) {
            let i = rng.gen_range(0..n_keywords);
            if picked.insert(i) {
                keywords.push(KeywordSeed {
                    node: g.node_index(&keyword_id(i)).unwrap(),
                    id: keyword_id(i),
                    weight: rng.gen_range(0.1..1.0),
                });
            }
        }
    }
    (g, SeedSet { keywords, papers })
}

pub fn paper_seed(g: &PropertyGraph, id: &str, s_pre: f64) -> PaperSeed {
    PaperSeed {
        node: g.node_index(id).unwrap(),
        id: id.to_string(),
        s_pre,
        title_hit: TitleHitKind::None,
        bonus: 0.0,
        emb_norm: 0.0,
        title_norm: 0.0,
    }
}
