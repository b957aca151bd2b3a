//! Result rendering.
//!
//! Two formats: a human-readable table with per-result score breakdowns and
//! explanation paths, and a machine format that emits one JSON record per
//! line. The machine format is the stable surface for scripts — the first
//! record carries `schema_version` and the run metadata, each result is one
//! self-contained record, and an empty run still emits an explicit
//! `empty_result` marker so consumers never have to infer absence.

use serde::Serialize;

use crate::graph::NodeKind;
use crate::rank::ExplanationPath;
use crate::search::{SearchOutcome, SearchResult, SearchStats};

/// Version of the machine output schema. Bump when record shapes change.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct MetaRecord<'a> {
    record: &'static str,
    schema_version: u32,
    mode: &'a str,
    query_kind: &'a str,
    result_count: usize,
    notes: &'a [String],
    stats: &'a SearchStats,
}

#[derive(Serialize)]
struct ResultRecord<'a> {
    record: &'static str,
    #[serde(flatten)]
    result: &'a SearchResult,
}

#[derive(Serialize)]
struct EmptyRecord {
    record: &'static str,
}

/// Render one line of JSON per record: `run_meta`, then each `result` in
/// rank order, or a single `empty_result` marker when nothing ranked.
/// Field order is fixed by the struct definitions, so identical outcomes
/// serialize byte-identically.
pub fn render_machine(outcome: &SearchOutcome, query_kind: &str) -> String {
    let mut lines = Vec::with_capacity(outcome.results.len() + 2);
    let meta = MetaRecord {
        record: "run_meta",
        schema_version: SCHEMA_VERSION,
        mode: outcome.mode.as_str(),
        query_kind,
        result_count: outcome.results.len(),
        notes: &outcome.notes,
        stats: &outcome.stats,
    };
    lines.push(serde_json::to_string(&meta).expect("meta record serializes"));
    if outcome.results.is_empty() {
        let empty = EmptyRecord {
            record: "empty_result",
        };
        lines.push(serde_json::to_string(&empty).expect("empty record serializes"));
    } else {
        for result in &outcome.results {
            let record = ResultRecord {
                record: "result",
                result,
            };
            lines.push(serde_json::to_string(&record).expect("result record serializes"));
        }
    }
    let mut text = lines.join("\n");
    text.push('\n');
    text
}

/// Render an aligned table with one detail block per result.
pub fn render_human(outcome: &SearchOutcome) -> String {
    let mut out = String::new();
    let stats = &outcome.stats;
    out.push_str(&format!(
        "{} search: {} result(s)\n",
        outcome.mode.as_str(),
        outcome.results.len()
    ));
    out.push_str(&format!(
        "seeds: {} keyword / {} paper; subgraph: {} nodes, {} edges; walk: {} iteration(s), {}\n",
        stats.keyword_seeds,
        stats.paper_seeds,
        stats.subgraph_nodes,
        stats.subgraph_edges,
        stats.rwr_iterations,
        if stats.rwr_converged {
            "converged".to_string()
        } else {
            format!("capped (L1 change {:.3e})", stats.rwr_delta_l1)
        },
    ));
    for note in &outcome.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out.push('\n');
    if outcome.results.is_empty() {
        out.push_str("no results.\n");
        return out;
    }

    let id_width = outcome
        .results
        .iter()
        .map(|r| r.id.len())
        .max()
        .unwrap_or(2)
        .max(2);
    out.push_str(&format!(
        "{:>4}  {:>6}  {:<id_width$}  {:>9}  {:>4}  {}\n",
        "rank", "score", "id", "citations", "year", "label"
    ));
    for result in &outcome.results {
        let year = result
            .year
            .map(|y| y.to_string())
            .unwrap_or_else(|| "-".to_string());
        out.push_str(&format!(
            "{:>4}  {:>6.4}  {:<id_width$}  {:>9}  {:>4}  {}\n",
            result.rank, result.score, result.id, result.citations, year, result.label
        ));
        out.push_str(&format!("      {}\n", breakdown_line(result)));
        for path in &result.explanations {
            out.push_str(&format!("      {}\n", path_line(path)));
        }
    }
    out
}

fn breakdown_line(result: &SearchResult) -> String {
    let b = &result.breakdown;
    let mut parts = Vec::new();
    if let Some(pre) = b.pre_norm {
        parts.push(format!("pre {pre:.4}"));
    }
    parts.push(format!("graph {:.4}", b.graph_norm));
    if let Some(support) = b.support {
        parts.push(format!("support {support:.4}"));
    }
    if let Some(imp) = b.importance {
        parts.push(format!("importance {imp:.4}"));
    }
    if let Some(bonus) = b.title_bonus {
        if bonus > 0.0 {
            parts.push(format!("title bonus +{bonus:.2}"));
        }
    }
    parts.push(format!("hop {}", b.hop));
    if b.is_seed {
        parts.push("seed".to_string());
    }
    if result.kind == NodeKind::Paper {
        if let Some(venue) = &result.venue {
            parts.push(format!("venue {venue}"));
        }
    }
    parts.join(" | ")
}

fn path_line(path: &ExplanationPath) -> String {
    if path.steps.is_empty() {
        return format!(
            "path: {} is a seed (teleport weight {:.4})",
            path.node_ids.first().map(String::as_str).unwrap_or("?"),
            path.seed_weight,
        );
    }
    let mut rendered = String::from("path: ");
    for (i, id) in path.node_ids.iter().enumerate() {
        if i > 0 {
            let step = &path.steps[i - 1];
            rendered.push_str(&format!(" -[{} {:.3}]-> ", step.kind.as_str(), step.weight));
        }
        rendered.push_str(id);
    }
    rendered.push_str(&format!(
        " (seed weight {:.4}, path score {:.4})",
        path.seed_weight, path.score
    ));
    rendered
}
