//! Acceptance suite: ten end-to-end checks, one test per criterion, each
//! printing a single PASS line on success. Reference implementations and
//! fixture values are independent of the production code paths: the dense
//! walk uses an explicit transition matrix, the fuzzy-score oracle a full
//! DP table, and the edge-weight fixture hand-frozen decimals.

mod common;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scholargraph_core::config::{ImportanceMode, MatchingConfig, PropagationConfig, RunConfig};
use scholargraph_core::embed::{Embedder, EmbeddingVector, HashEmbedder};
use scholargraph_core::graph::{
    AuthorNode, Edge, EdgeKind, KeywordNode, Node, PaperNode, PropertyGraph,
};
use scholargraph_core::ingest;
use scholargraph_core::output::render_machine;
use scholargraph_core::propagate::{
    edge_weight, expand_subgraph, paper_importance, rwr_solve, rwr_solve_with,
};
use scholargraph_core::query::{ExtractedKeyword, ExtractedTitle, QueryInput, QueryKind};
use scholargraph_core::search::SearchMode;
use scholargraph_core::seed::{fuzzy_title_score, match_keywords, match_titles, TitleIndex};
use scholargraph_core::synth;
use scholargraph_core::{Error, Result, SearchContext};

// ---------------------------------------------------------------------------
// criterion 1: sparse walk agrees with a dense reference implementation
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_walk_matches_dense_reference_on_100_graphs() {
    let started = Instant::now();
    let config = PropagationConfig::default();
    for graph_seed in 0..100u64 {
        let (graph, seeds) = common::random_graph(graph_seed, graph_seed % 7 == 0);
        let subgraph = expand_subgraph(&seeds, &graph, &config).unwrap();
        let result = rwr_solve(&subgraph, &config);
        assert!(
            result.iterations <= 50,
            "graph {graph_seed}: {} iterations",
            result.iterations
        );
        let reference = common::dense_rwr(&subgraph, &config);
        let l1: f64 = result
            .scores
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).abs())
            .sum();
        assert!(
            l1 <= 1e-6,
            "graph {graph_seed}: L1 distance to dense reference {l1:.3e}"
        );
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(10),
        "oracle batch took {elapsed:?}"
    );
    println!("ACCEPTANCE 1 (walk matches dense reference, 100 graphs, L1<=1e-6, <10s): PASS");
}

// ---------------------------------------------------------------------------
// criterion 2: probability mass is conserved at every iteration
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_mass_conserved_every_iteration_including_dangling() {
    let config = PropagationConfig::default();
    let mut graphs_with_dangling = 0usize;
    for graph_seed in 0..100u64 {
        let (graph, seeds) = common::random_graph(graph_seed, graph_seed % 7 == 0);
        let subgraph = expand_subgraph(&seeds, &graph, &config).unwrap();
        if (0..subgraph.len()).any(|v| subgraph.total_weight(v) == 0.0) {
            graphs_with_dangling += 1;
        }
        rwr_solve_with(&subgraph, &config, |iteration, scores| {
            let mass: f64 = scores.iter().sum();
            assert!(
                (mass - 1.0).abs() <= 1e-6,
                "graph {graph_seed}, iteration {iteration}: total mass {mass}"
            );
        });
    }
    assert!(
        graphs_with_dangling >= 10,
        "fixture must include dangling nodes, got {graphs_with_dangling} graphs"
    );
    println!(
        "ACCEPTANCE 2 (mass 1 +/- 1e-6 every iteration, {graphs_with_dangling} graphs with dangling nodes): PASS"
    );
}

// ---------------------------------------------------------------------------
// criterion 3: edge-weight table against hand-frozen decimals
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_edge_weight_fixture_to_1e12() {
    let weights = PropagationConfig::default().edge_weights;
    let paper_pair = |kind| Edge::new("Pa", "Pb", kind);
    // (case, edge, seed keyword weight, expected)
    let fixture: Vec<(&str, Edge, Option<f64>, f64)> = vec![
        (
            "coauthor n=1",
            Edge::new("Aa", "Ab", EdgeKind::Coauthor).with_count(1),
            None,
            0.60,
        ),
        (
            "coauthor n=2",
            Edge::new("Aa", "Ab", EdgeKind::Coauthor).with_count(2),
            None,
            0.6591673732008658,
        ),
        (
            "coauthor n=100",
            Edge::new("Aa", "Ab", EdgeKind::Coauthor).with_count(100),
            None,
            1.20,
        ),
        (
            "cooccur n=1",
            Edge::new("Ka", "Kb", EdgeKind::Cooccur).with_count(1),
            None,
            0.60,
        ),
        (
            "cooccur n=6",
            Edge::new("Ka", "Kb", EdgeKind::Cooccur).with_count(6),
            None,
            1.167546089433188,
        ),
        (
            "cooccur n=50 capped",
            Edge::new("Ka", "Kb", EdgeKind::Cooccur).with_count(50),
            None,
            1.20,
        ),
        ("cites", paper_pair(EdgeKind::Cites), None, 1.00),
        ("related-to", paper_pair(EdgeKind::RelatedTo), None, 0.90),
        (
            "authored",
            Edge::new("Aa", "Pa", EdgeKind::Authored),
            None,
            0.80,
        ),
        (
            "has-keyword seed 0.9 rel 0.8",
            Edge::new("Pa", "Ka", EdgeKind::HasKeyword).with_relevance(0.8),
            Some(0.9),
            0.8640000000000001,
        ),
        (
            "has-keyword seed 1.0 rel 1.0",
            Edge::new("Pa", "Ka", EdgeKind::HasKeyword).with_relevance(1.0),
            Some(1.0),
            1.2,
        ),
        (
            "has-keyword floor rel 0.8",
            Edge::new("Pa", "Ka", EdgeKind::HasKeyword).with_relevance(0.8),
            None,
            0.24,
        ),
        (
            "has-keyword floor rel 0.4",
            Edge::new("Pa", "Ka", EdgeKind::HasKeyword).with_relevance(0.4),
            None,
            0.12,
        ),
        (
            "has-keyword missing relevance",
            Edge::new("Pa", "Ka", EdgeKind::HasKeyword),
            Some(0.9),
            0.0,
        ),
        (
            "has-topic unlisted",
            Edge::new("Pa", "Ta", EdgeKind::HasTopic),
            None,
            0.0,
        ),
        (
            "affiliation unlisted",
            Edge::new("Aa", "Ia", EdgeKind::AffiliatedWith),
            None,
            0.0,
        ),
    ];
    assert!(fixture.len() >= 12);
    for (case, edge, seed_weight, expected) in &fixture {
        let got = edge_weight(edge, *seed_weight, &weights);
        assert!(
            (got - expected).abs() <= 1e-12,
            "{case}: got {got:.17}, expected {expected:.17}"
        );
    }
    println!(
        "ACCEPTANCE 3 (edge-weight fixture, {} cases exact to 1e-12): PASS",
        fixture.len()
    );
}

// ---------------------------------------------------------------------------
// criterion 4: similarity gates on both recall channels
// ---------------------------------------------------------------------------

/// Embedder returning pre-built unit vectors for known strings.
struct MapEmbedder {
    dimension: usize,
    map: HashMap<String, EmbeddingVector>,
}

impl Embedder for MapEmbedder {
    fn name(&self) -> &str {
        "fixture-map"
    }
    fn dimension(&self) -> usize {
        self.dimension
    }
    fn embed(&self, text: &str) -> Result<EmbeddingVector> {
        self.map
            .get(text)
            .cloned()
            .ok_or_else(|| Error::InvalidParameter(format!("no fixture vector for `{text}`")))
    }
}

/// Unit vector whose cosine against `[1, 0, 0, ...]` is `c`.
fn vector_at_cosine(dimension: usize, c: f64) -> EmbeddingVector {
    let mut raw = vec![0.0f32; dimension];
    raw[0] = c as f32;
    raw[1] = (1.0 - c * c).sqrt() as f32;
    EmbeddingVector::unit(raw).unwrap()
}

#[test]
fn criterion_04_recall_gates_admit_071_and_089_but_not_069_and_087() {
    let matching = MatchingConfig::default();

    // keyword channel: theta 0.7
    let dimension = 8;
    let mut graph = PropertyGraph::new(dimension);
    let mut below = KeywordNode::new("KLOW", "gate low keyword");
    below.text_embedding = Some(vector_at_cosine(dimension, 0.69));
    let mut above = KeywordNode::new("KHIGH", "gate high keyword");
    above.text_embedding = Some(vector_at_cosine(dimension, 0.71));
    graph.add_node(Node::Keyword(below)).unwrap();
    graph.add_node(Node::Keyword(above)).unwrap();
    graph.freeze();

    let embedder = MapEmbedder {
        dimension,
        map: HashMap::from([("probe term".to_string(), vector_at_cosine(dimension, 1.0))]),
    };
    let seeds = match_keywords(
        &[ExtractedKeyword {
            text: "probe term".to_string(),
            importance: 1.0,
        }],
        &graph,
        &matching,
        &embedder,
    )
    .unwrap();
    assert_eq!(
        seeds.iter().map(|s| s.id.as_str()).collect::<Vec<_>>(),
        vec!["KHIGH"],
        "only the similarity-0.71 keyword may pass the 0.7 gate"
    );
    let weight = seeds[0].weight;
    assert!(
        (weight - 0.71).abs() < 1e-6,
        "gated hit should score importance * similarity, got {weight}"
    );

    // title channel: theta 0.88. Frozen fixture pair around the gate:
    // the first probe scores 0.8766..., the second 0.8925...
    let stored = "graph retrieval engines for scholarly search";
    let probe_below = "graph retrieval for scholarly search";
    let probe_above = "graph retrieval engine for scholarly search";
    let m_below = fuzzy_title_score(
        stored,
        probe_below,
        matching.seq_weight,
        matching.token_weight,
    );
    let m_above = fuzzy_title_score(
        stored,
        probe_above,
        matching.seq_weight,
        matching.token_weight,
    );
    assert!(
        (m_below - 0.8766666666666667).abs() <= 1e-12,
        "got {m_below:.17}"
    );
    assert!(
        (m_above - 0.8925287356321839).abs() <= 1e-12,
        "got {m_above:.17}"
    );

    let mut graph = PropertyGraph::new(dimension);
    graph
        .add_node(Node::Paper(PaperNode::new(
            "P1",
            "Graph Retrieval Engines for Scholarly Search",
            "abstract text",
            2020,
            5,
        )))
        .unwrap();
    graph.freeze();
    let index = TitleIndex::build(&graph, matching.fuzzy_pool_cap);

    let title = |text: &str| ExtractedTitle {
        text_normalized: text.to_string(),
        confidence: 1.0,
    };
    let rejected = match_titles(&[title(probe_below)], &index, &matching);
    assert!(
        rejected.is_empty(),
        "fuzzy score 0.8767 must not pass the 0.88 gate"
    );
    let accepted = match_titles(&[title(probe_above)], &index, &matching);
    assert_eq!(accepted.len(), 1);
    assert_eq!(accepted[0].id, "P1");
    assert!((accepted[0].s_title - m_above).abs() <= 1e-12);
    assert!(!accepted[0].exact);

    println!(
        "ACCEPTANCE 4 (keyword gate 0.69/0.71 at 0.7; title gate 0.8767/0.8925 at 0.88): PASS"
    );
}

// ---------------------------------------------------------------------------
// criterion 5: emitted breakdowns reconstruct the final score
// ---------------------------------------------------------------------------

/// Generate a synthetic corpus into a tempdir and load it.
fn synthetic_context(paper_count: usize) -> (tempfile::TempDir, SearchContext) {
    let dir = tempfile::tempdir().unwrap();
    let mut config = RunConfig::default();
    config.synth.paper_count = paper_count;
    synth::generate_synthetic(dir.path(), &config).unwrap();
    let (graph, report) = ingest::prepare_graph(dir.path(), &config).unwrap();
    assert_eq!(report.malformed_lines, 0, "generated corpus must be clean");
    assert_eq!(report.dropped_invalid, 0, "generated corpus must be clean");
    let context = SearchContext::new(graph, config).unwrap();
    (dir, context)
}

fn paper_titles(context: &SearchContext) -> Vec<(String, String, String)> {
    context
        .graph()
        .nodes()
        .filter_map(|(_, node)| node.as_paper())
        .map(|p| (p.id.clone(), p.title.clone(), p.title_normalized.clone()))
        .collect()
}

#[test]
fn criterion_05_breakdowns_reconstruct_final_scores() {
    let (_dir, context) = synthetic_context(200);
    let ranking = context.config().ranking.clone();
    let titles = paper_titles(&context);

    let mut queries = vec![
        (
            QueryKind::Idea,
            "adaptive graph methods for robust molecular prediction".to_string(),
        ),
        (
            QueryKind::Question,
            "which ranking models transfer to clinical text".to_string(),
        ),
        (
            QueryKind::Keywords,
            "graph methods molecular prediction".to_string(),
        ),
    ];
    queries.push((QueryKind::Idea, titles[0].1.clone()));
    queries.push((QueryKind::Idea, titles[57].1.clone()));

    let mut checked = 0usize;
    for (kind, text) in queries {
        let input = QueryInput::new(kind, text).unwrap();
        let outcome = context.search(&input, SearchMode::Paper).unwrap();
        assert!(!outcome.results.is_empty(), "query produced no results");
        for result in &outcome.results {
            let b = &result.breakdown;
            let pre = b.pre_norm.expect("paper results carry pre_norm");
            let support = b.support.expect("paper results carry support");
            let importance = b.importance.expect("paper results carry importance");
            assert!((support - pre.max(ranking.support_floor)).abs() <= 1e-12);
            assert!((0.25..=1.0).contains(&support), "support {support}");
            let reconstructed = (ranking.lambda_pre * pre
                + ranking.lambda_graph * b.graph_norm * support
                + ranking.lambda_imp * importance)
                .min(1.0);
            assert!(
                (reconstructed - result.score).abs() <= 1e-9,
                "{}: breakdown gives {reconstructed}, reported {}",
                result.id,
                result.score
            );
            assert!(
                (0.0..=1.0).contains(&result.score),
                "{}: final {} outside [0,1]",
                result.id,
                result.score
            );
            checked += 1;
        }
    }
    assert!(checked >= 60, "only {checked} results checked");
    println!("ACCEPTANCE 5 (final = min(1, combination of emitted breakdown fields) +/- 1e-9, {checked} results): PASS");
}

// ---------------------------------------------------------------------------
// criterion 6: querying a verbatim title ranks that paper first
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_exact_title_query_ranks_paper_first() {
    let (_dir, context) = synthetic_context(200);
    let titles = paper_titles(&context);
    assert_eq!(titles.len(), 200);

    let mut collisions: HashMap<&str, usize> = HashMap::new();
    for (_, _, normalized) in &titles {
        *collisions.entry(normalized.as_str()).or_insert(0) += 1;
    }

    let mut failures: Vec<(&str, &str)> = Vec::new();
    for (id, title, normalized) in &titles {
        let input = QueryInput::new(QueryKind::Idea, title.clone()).unwrap();
        let outcome = context.search(&input, SearchMode::Paper).unwrap();
        let top = outcome.results.first();
        if top.map(|r| r.id != *id).unwrap_or(true) {
            failures.push((id, normalized));
        }
    }

    let pass_rate = 1.0 - failures.len() as f64 / titles.len() as f64;
    assert!(
        pass_rate >= 0.99,
        "only {:.1}% of verbatim-title queries ranked their paper first ({} failures)",
        pass_rate * 100.0,
        failures.len()
    );
    for (id, normalized) in &failures {
        assert!(
            collisions[normalized] > 1,
            "{id} lost the top rank without sharing a normalized title"
        );
    }
    println!(
        "ACCEPTANCE 6 (exact-title dominance {:.1}% of 200 papers, {} collision-explained failures): PASS",
        pass_rate * 100.0,
        failures.len()
    );
}

// ---------------------------------------------------------------------------
// criterion 7: importance modes
// ---------------------------------------------------------------------------

/// A fixed 24-paper graph whose citation counts are injectable, with real
/// embeddings so the whole pipeline (semantic recall included) runs.
fn citation_graph(citations: &[u64]) -> PropertyGraph {
    assert_eq!(citations.len(), 24);
    let dimension = 64;
    let embedder = HashEmbedder::new(dimension).unwrap();
    let mut graph = PropertyGraph::new(dimension);
    let topics = [
        "adaptive retrieval",
        "walk propagation",
        "citation analysis",
        "entity linking",
        "graph ranking",
        "subgraph expansion",
        "scholarly search",
        "keyword weighting",
    ];
    for i in 0..24 {
        let title = format!("{} strategies volume {}", topics[i % topics.len()], i);
        let abstract_text = format!(
            "We investigate {} with emphasis on reproducible evaluation, run {}.",
            topics[(i * 5) % topics.len()],
            i
        );
        let mut paper = PaperNode::new(
            format!("P{i:02}"),
            &title,
            &abstract_text,
            2000 + i as i32,
            citations[i],
        );
        paper.title_embedding = Some(embedder.embed(&title).unwrap());
        paper.abstract_embedding = Some(embedder.embed(&abstract_text).unwrap());
        graph.add_node(Node::Paper(paper)).unwrap();
    }
    for (k, text) in [
        ("K0", "graph ranking"),
        ("K1", "walk propagation"),
        ("K2", "scholarly search"),
    ] {
        let mut kw = KeywordNode::new(k, text);
        kw.text_embedding = Some(embedder.embed(text).unwrap());
        graph.add_node(Node::Keyword(kw)).unwrap();
    }
    for i in 0..6 {
        graph
            .add_node(Node::Author(AuthorNode::new(
                format!("A{i}"),
                format!("author {i}"),
            )))
            .unwrap();
    }
    for i in 0..24usize {
        graph
            .add_edge(Edge::new(
                format!("P{i:02}"),
                format!("P{:02}", (i + 3) % 24),
                EdgeKind::Cites,
            ))
            .unwrap();
        if i % 2 == 0 {
            graph
                .add_edge(Edge::new(
                    format!("P{i:02}"),
                    format!("P{:02}", (i + 7) % 24),
                    EdgeKind::RelatedTo,
                ))
                .unwrap();
        }
        let kw = ["K0", "K1", "K2"][i % 3];
        graph
            .add_edge(
                Edge::new(format!("P{i:02}"), kw, EdgeKind::HasKeyword)
                    .with_relevance(0.3 + 0.025 * i as f64),
            )
            .unwrap();
        graph
            .add_edge(Edge::new(
                format!("A{}", i % 6),
                format!("P{i:02}"),
                EdgeKind::Authored,
            ))
            .unwrap();
    }
    graph.freeze();
    graph
}

#[test]
fn criterion_07_importance_modes_permutation_invariance_and_monotonicity() {
    // relevance mode + zero importance weight: permuting citations must not
    // move anything
    let base: Vec<u64> = (0..24).map(|i| ((i * 37 + 11) % 400) as u64).collect();
    let mut permuted = base.clone();
    permuted.rotate_left(9);
    assert_ne!(base, permuted);

    let mut config = RunConfig::default();
    config.embedding.dimension = 64;
    config.propagation.importance_mode = ImportanceMode::Relevance;
    config.ranking.lambda_imp = 0.0;

    let run = |citations: &[u64]| {
        let context = SearchContext::new(citation_graph(citations), config.clone()).unwrap();
        let input =
            QueryInput::new(QueryKind::Idea, "graph ranking with walk propagation").unwrap();
        let outcome = context.search(&input, SearchMode::Paper).unwrap();
        assert!(outcome.results.len() >= 10);
        outcome
            .results
            .iter()
            .map(|r| (r.id.clone(), r.score))
            .collect::<Vec<_>>()
    };
    let first = run(&base);
    let second = run(&permuted);
    // the fixture must decide every adjacent pair on score alone, otherwise
    // the citation tie-break could legitimately reorder
    for pair in first.windows(2) {
        assert!(
            (pair[0].1 - pair[1].1).abs() > 1e-12,
            "fixture produced tied scores; tie-breaks would leak citations"
        );
    }
    assert_eq!(
        first, second,
        "citation permutation changed relevance-mode ranking"
    );

    // quality mode: raising one paper's citations (others fixed) never
    // lowers its recomputed importance
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..1000 {
        let own = rng.gen_range(0..10_000u64);
        let others = rng.gen_range(0..1_000_000u64);
        let raise = rng.gen_range(1..5_000u64);
        let before = paper_importance(own, own + others, ImportanceMode::Quality);
        let after = paper_importance(own + raise, own + raise + others, ImportanceMode::Quality);
        assert!(
            after >= before - 1e-15,
            "trial {trial}: importance fell from {before} to {after}"
        );
        assert!((0.0..=1.0).contains(&before) && (0.0..=1.0).contains(&after));
    }
    println!("ACCEPTANCE 7 (relevance-mode permutation invariance; quality-mode monotonicity, 1000 trials): PASS");
}

// ---------------------------------------------------------------------------
// criterion 8: byte-identical machine output across full reruns
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_machine_output_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = RunConfig::default();
    config.synth.paper_count = 200;
    synth::generate_synthetic(dir.path(), &config).unwrap();

    let run = || {
        // fresh load, fresh context: nothing carries over between runs
        let (graph, _) = ingest::prepare_graph(dir.path(), &config).unwrap();
        let context = SearchContext::new(graph, config.clone()).unwrap();
        let paper_query = QueryInput::new(
            QueryKind::Idea,
            "sparse attention methods for seismic translation",
        )
        .unwrap();
        let author_query =
            QueryInput::new(QueryKind::Question, "who works on graph benchmarks").unwrap();
        let papers = context.search(&paper_query, SearchMode::Paper).unwrap();
        let authors = context.search(&author_query, SearchMode::Author).unwrap();
        format!(
            "{}{}",
            render_machine(&papers, "idea"),
            render_machine(&authors, "question")
        )
    };
    let first = run();
    let second = run();
    assert!(first.contains("\"record\":\"result\""));
    assert_eq!(first, second, "machine output differed between reruns");
    println!("ACCEPTANCE 8 (two full reruns render byte-identical machine output): PASS");
}

// ---------------------------------------------------------------------------
// criterion 9: desk-scale latency
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_search_under_two_seconds_on_10k_papers() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = RunConfig::default();
    config.synth.paper_count = 10_000;
    config.synth.author_count = 2_000;
    config.synth.keyword_vocab = 600;
    synth::generate_synthetic(dir.path(), &config).unwrap();
    let (graph, _) = ingest::prepare_graph(dir.path(), &config).unwrap();
    assert_eq!(
        graph.node_count_of_kind(scholargraph_core::NodeKind::Paper),
        10_000
    );
    let context = SearchContext::new(graph, config).unwrap();

    let input = QueryInput::new(
        QueryKind::Idea,
        "adaptive graph methods for molecular prediction under distribution shift",
    )
    .unwrap();
    let started = Instant::now();
    let outcome = context.search(&input, SearchMode::Paper).unwrap();
    let elapsed = started.elapsed();
    assert!(!outcome.results.is_empty());
    assert!(
        elapsed < Duration::from_secs(2),
        "10k-paper search took {elapsed:?}"
    );
    println!("ACCEPTANCE 9 (10,000-paper search in {elapsed:?} < 2s): PASS");
}

// ---------------------------------------------------------------------------
// criterion 10: fuzzy score agrees with the DP + Jaccard oracle
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_fuzzy_score_matches_oracle_on_1000_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let alphabet: Vec<char> = "abcde ".chars().collect();
    let random_string = |rng: &mut ChaCha8Rng| loop {
        let len = rng.gen_range(1..=40);
        let s: String = (0..len)
            .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
            .collect();
        if !s.is_empty() {
            return s;
        }
    };

    let mut equal_pairs = 0usize;
    for trial in 0..1000usize {
        let a = random_string(&mut rng);
        let b = match trial % 5 {
            // identical strings
            0 => a.clone(),
            // near-identical: one character substituted
            1 => {
                let mut chars: Vec<char> = a.chars().collect();
                let at = rng.gen_range(0..chars.len());
                chars[at] = alphabet[rng.gen_range(0..alphabet.len())];
                chars.into_iter().collect()
            }
            _ => random_string(&mut rng),
        };
        let got = fuzzy_title_score(&a, &b, 0.65, 0.35);
        let want = common::oracle_fuzzy(&a, &b, 0.65, 0.35);
        assert!(
            (got - want).abs() <= 1e-12,
            "{a:?} vs {b:?}: got {got:.17}, oracle {want:.17}"
        );
        assert_eq!(
            got == 1.0,
            a == b,
            "{a:?} vs {b:?}: score 1.0 must hold exactly when strings are equal"
        );
        if a == b {
            equal_pairs += 1;
        }
    }
    assert!(equal_pairs >= 150, "only {equal_pairs} equal pairs sampled");
    println!("ACCEPTANCE 10 (fuzzy score = oracle +/- 1e-12 on 1000 pairs; 1.0 iff equal): PASS");
}
