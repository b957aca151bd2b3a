//! Corpus loading and serialization.
//!
//! A corpus is a directory of UTF-8 line-delimited record files (`*.jsonl`)
//! plus an optional vector sidecar:
//!
//! * every line is one JSON object with a `kind` discriminator — a node kind
//!   (`paper`, `author`, `keyword`, `institution`, `source`, `topic`,
//!   `subfield`, `field`, `domain`) or `edge`;
//! * `vectors.bin` holds little-endian `f32` rows back to back and
//!   `vectors.manifest` describes them as `{"dimension": D, "rows": N}`;
//!   records reference rows by index (`title_embedding_row` etc.) or inline
//!   the vector directly.
//!
//! Loading is two-phase (all node records first, then all edge records, in
//! sorted file order and line order) so edges may reference nodes from any
//! file. Papers and keywords are deduplicated by normalized title/text with
//! a first-record-wins policy; edges pointing at a merged duplicate are
//! re-targeted onto the winner. Authors are deliberately never deduplicated:
//! homonyms are distinct people. Problem lines never abort the load — they
//! are dropped and tallied in the [`LoadReport`].

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::embed::EmbeddingVector;
use crate::error::{Error, Result};
use crate::graph::{
    AuthorNode, Edge, EdgeKind, KeywordNode, MiscNode, Node, NodeKind, PaperNode, PropertyGraph,
};
use crate::text::normalize_text;

/// Sidecar vector file names within a corpus directory.
pub const VECTORS_BIN: &str = "vectors.bin";
pub const VECTORS_MANIFEST: &str = "vectors.manifest";

/// How many malformed-line details a [`LoadReport`] retains verbatim.
const MAX_RETAINED_ISSUES: usize = 100;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorManifest {
    pub dimension: usize,
    pub rows: usize,
}

/// One line of a corpus record file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorpusRecord {
    Paper(PaperRecord),
    Author(AuthorRecord),
    Keyword(KeywordRecord),
    Institution(MiscRecord),
    Source(MiscRecord),
    Topic(MiscRecord),
    Subfield(MiscRecord),
    Field(MiscRecord),
    Domain(MiscRecord),
    Edge(EdgeRecord),
}

/// Inline vector or row reference into `vectors.bin`. At most one of the two
/// fields may be present per embedding.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PaperRecord {
    pub id: String,
    pub title: String,
    #[serde(rename = "abstract", default, skip_serializing_if = "Option::is_none")]
    pub abstract_text: Option<String>,
    #[serde(default)]
    pub publication_year: i32,
    #[serde(default)]
    pub citation_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub venue_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pdf_url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_embedding: Option<Vec<f32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_embedding_row: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abstract_embedding: Option<Vec<f32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abstract_embedding_row: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AuthorRecord {
    pub id: String,
    pub display_name: String,
    #[serde(default)]
    pub works_count: u64,
    #[serde(default)]
    pub cited_by_count: u64,
    #[serde(default)]
    pub h_index: u32,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct KeywordRecord {
    pub id: String,
    pub text: String,
    #[serde(default)]
    pub frequency: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text_embedding: Option<Vec<f32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text_embedding_row: Option<usize>,
}

/// Venue and taxonomy entities share one shape; extra JSON fields land in
/// `attributes` untouched.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MiscRecord {
    pub id: String,
    pub display_name: String,
    #[serde(flatten)]
    pub attributes: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub edge_kind: EdgeKind,
    pub src: String,
    pub dst: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relevance_score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<u32>,
}

/// What happened during a load. Every dropped line is counted somewhere;
/// up to [`MAX_RETAINED_ISSUES`] issues keep their file/line detail.
#[derive(Debug, Default, Clone, Serialize)]
pub struct LoadReport {
    pub nodes_loaded: usize,
    pub edges_loaded: usize,
    /// Paper records merged into an earlier record with the same normalized title.
    pub papers_merged: usize,
    /// Keyword records merged into an earlier record with the same normalized text.
    pub keywords_merged: usize,
    /// Paper records whose abstract was missing or below the configured minimum.
    pub dropped_short_abstract: usize,
    /// Records that failed structural validation (bad vectors, empty fields, duplicate ids…).
    pub dropped_invalid: usize,
    /// Lines that did not parse as a record at all.
    pub malformed_lines: usize,
    /// Edges referencing ids absent after node loading.
    pub dangling_edges_dropped: usize,
    /// Edges that duplicate an already-loaded (src, dst, kind) triple.
    pub duplicate_edges_dropped: usize,
    /// COOCCUR edges derived by [`build_cooccur`]; zero until it runs.
    pub cooccur_edges_built: usize,
    /// Human-readable `file:line: message` details, truncated.
    pub issues: Vec<String>,
}

impl LoadReport {
    fn issue(&mut self, file: &Path, line: usize, message: impl std::fmt::Display) {
        if self.issues.len() < MAX_RETAINED_ISSUES {
            self.issues
                .push(format!("{}:{line}: {message}", file.display()));
        }
    }

    pub fn total_dropped(&self) -> usize {
        self.papers_merged
            + self.keywords_merged
            + self.dropped_short_abstract
            + self.dropped_invalid
            + self.malformed_lines
            + self.dangling_edges_dropped
            + self.duplicate_edges_dropped
    }
}

/// Flat row store backing `*_embedding_row` references.
#[derive(Debug, Default)]
pub struct VectorSidecar {
    dimension: usize,
    data: Vec<f32>,
}

impl VectorSidecar {
    pub fn new(dimension: usize) -> Self {
        VectorSidecar {
            dimension,
            data: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.data.len().checked_div(self.dimension).unwrap_or(0)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Append one row, returning its index.
    pub fn push(&mut self, row: &[f32]) -> Result<usize> {
        if row.len() != self.dimension {
            return Err(Error::Dimension {
                expected: self.dimension,
                got: row.len(),
            });
        }
        let index = self.rows();
        self.data.extend_from_slice(row);
        Ok(index)
    }

    pub fn row(&self, index: usize) -> Option<&[f32]> {
        let start = index.checked_mul(self.dimension)?;
        self.data.get(start..start + self.dimension)
    }

    /// Read `vectors.bin` + `vectors.manifest` from a corpus directory.
    /// Returns `None` when the directory has no sidecar at all.
    pub fn read(dir: &Path) -> Result<Option<Self>> {
        let manifest_path = dir.join(VECTORS_MANIFEST);
        let bin_path = dir.join(VECTORS_BIN);
        if !manifest_path.exists() && !bin_path.exists() {
            return Ok(None);
        }
        if !manifest_path.exists() || !bin_path.exists() {
            return Err(Error::Corpus(format!(
                "{} and {} must be present together",
                VECTORS_BIN, VECTORS_MANIFEST
            )));
        }
        let manifest_text =
            fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
        let manifest: VectorManifest = serde_json::from_str(&manifest_text)
            .map_err(|e| Error::Corpus(format!("invalid {}: {e}", VECTORS_MANIFEST)))?;
        let bytes = fs::read(&bin_path).map_err(|e| Error::io(&bin_path, e))?;
        let expected = manifest
            .rows
            .checked_mul(manifest.dimension)
            .and_then(|n| n.checked_mul(4))
            .ok_or_else(|| Error::Corpus("vector manifest sizes overflow".into()))?;
        if bytes.len() != expected {
            return Err(Error::Corpus(format!(
                "{} holds {} bytes but the manifest declares {} rows x {} dims ({} bytes)",
                VECTORS_BIN,
                bytes.len(),
                manifest.rows,
                manifest.dimension,
                expected
            )));
        }
        let data = bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        Ok(Some(VectorSidecar {
            dimension: manifest.dimension,
            data,
        }))
    }

    /// Write the sidecar pair into a corpus directory.
    pub fn write(&self, dir: &Path) -> Result<()> {
        let bin_path = dir.join(VECTORS_BIN);
        let mut bytes = Vec::with_capacity(self.data.len() * 4);
        for v in &self.data {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        fs::write(&bin_path, bytes).map_err(|e| Error::io(&bin_path, e))?;
        let manifest = VectorManifest {
            dimension: self.dimension,
            rows: self.rows(),
        };
        let manifest_path = dir.join(VECTORS_MANIFEST);
        let text = serde_json::to_string(&manifest).expect("manifest serialization cannot fail");
        fs::write(&manifest_path, text).map_err(|e| Error::io(&manifest_path, e))?;
        Ok(())
    }
}

/// Writes corpus record files line by line, one file per record kind.
pub struct CorpusWriter {
    dir: PathBuf,
    files: BTreeMap<&'static str, fs::File>,
    pub sidecar: VectorSidecar,
}

impl CorpusWriter {
    pub fn create(dir: impl Into<PathBuf>, dimension: usize) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(CorpusWriter {
            dir,
            files: BTreeMap::new(),
            sidecar: VectorSidecar::new(dimension),
        })
    }

    fn file_for(record: &CorpusRecord) -> &'static str {
        match record {
            CorpusRecord::Paper(_) => "papers.jsonl",
            CorpusRecord::Author(_) => "authors.jsonl",
            CorpusRecord::Keyword(_) => "keywords.jsonl",
            CorpusRecord::Institution(_) => "institutions.jsonl",
            CorpusRecord::Source(_) => "sources.jsonl",
            CorpusRecord::Topic(_) => "topics.jsonl",
            CorpusRecord::Subfield(_) => "subfields.jsonl",
            CorpusRecord::Field(_) => "fields.jsonl",
            CorpusRecord::Domain(_) => "domains.jsonl",
            CorpusRecord::Edge(_) => "edges.jsonl",
        }
    }

    pub fn write_record(&mut self, record: &CorpusRecord) -> Result<()> {
        let name = Self::file_for(record);
        let path = self.dir.join(name);
        if !self.files.contains_key(name) {
            let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
            self.files.insert(name, file);
        }
        let file = self.files.get_mut(name).expect("file was just inserted");
        let line = serde_json::to_string(record)
            .map_err(|e| Error::Corpus(format!("cannot serialize record: {e}")))?;
        writeln!(file, "{line}").map_err(|e| Error::io(&path, e))?;
        Ok(())
    }

    /// Flush record files and write the vector sidecar.
    pub fn finish(mut self) -> Result<()> {
        for (name, file) in &mut self.files {
            file.flush()
                .map_err(|e| Error::io(self.dir.join(name), e))?;
        }
        self.sidecar.write(&self.dir)
    }
}

struct PendingEdge {
    record: EdgeRecord,
    file: PathBuf,
    line: usize,
}

/// Load every `*.jsonl` file in `dir` into a fresh graph. Files are visited
/// in sorted name order, lines in file order; node records load before any
/// edge record regardless of which file they came from.
pub fn load_corpus(dir: &Path, config: &RunConfig) -> Result<(PropertyGraph, LoadReport)> {
    let dimension = config.embedding.dimension;
    let sidecar = VectorSidecar::read(dir)?;
    if let Some(s) = &sidecar {
        if s.dimension() != dimension {
            return Err(Error::Dimension {
                expected: dimension,
                got: s.dimension(),
            });
        }
    }

    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|e| e == "jsonl").unwrap_or(false))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Corpus(format!(
            "no .jsonl record files found in {}",
            dir.display()
        )));
    }

    let mut graph = PropertyGraph::new(dimension);
    let mut report = LoadReport::default();
    // duplicate paper/keyword id -> winning id, for edge re-targeting
    let mut alias: HashMap<String, String> = HashMap::new();
    let mut seen_titles: HashMap<String, String> = HashMap::new();
    let mut seen_keywords: HashMap<String, String> = HashMap::new();
    let mut pending_edges: Vec<PendingEdge> = Vec::new();

    for path in &files {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let reader = BufReader::new(file);
        for (line_index, line) in reader.lines().enumerate() {
            let line_no = line_index + 1;
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let record: CorpusRecord = match serde_json::from_str(&line) {
                Ok(r) => r,
                Err(e) => {
                    report.malformed_lines += 1;
                    report.issue(path, line_no, format!("malformed record: {e}"));
                    continue;
                }
            };
            match record {
                CorpusRecord::Edge(record) => pending_edges.push(PendingEdge {
                    record,
                    file: path.clone(),
                    line: line_no,
                }),
                node_record => load_node(
                    node_record,
                    &mut graph,
                    sidecar.as_ref(),
                    config,
                    &mut alias,
                    &mut seen_titles,
                    &mut seen_keywords,
                    &mut report,
                    path,
                    line_no,
                ),
            }
        }
    }

    for pending in pending_edges {
        load_edge(pending, &mut graph, &alias, &mut report);
    }

    log::info!(
        "loaded {} nodes and {} edges from {} ({} lines dropped)",
        report.nodes_loaded,
        report.edges_loaded,
        dir.display(),
        report.total_dropped()
    );
    Ok((graph, report))
}

/// Resolve an inline vector or sidecar row into a unit-length embedding.
/// `None` when the record carries neither.
fn resolve_embedding(
    inline: Option<Vec<f32>>,
    row: Option<usize>,
    sidecar: Option<&VectorSidecar>,
    field: &str,
) -> std::result::Result<Option<EmbeddingVector>, String> {
    let raw = match (inline, row) {
        (Some(_), Some(_)) => {
            return Err(format!(
                "{field}: both inline vector and row reference given"
            ))
        }
        (Some(values), None) => values,
        (None, Some(row_index)) => {
            let sidecar =
                sidecar.ok_or_else(|| format!("{field}: row reference without {VECTORS_BIN}"))?;
            sidecar
                .row(row_index)
                .ok_or_else(|| {
                    format!(
                        "{field}: row {row_index} out of range ({} rows)",
                        sidecar.rows()
                    )
                })?
                .to_vec()
        }
        (None, None) => return Ok(None),
    };
    EmbeddingVector::unit(raw)
        .map(Some)
        .map_err(|e| format!("{field}: {e}"))
}

#[allow(clippy::too_many_arguments)]
fn load_node(
    record: CorpusRecord,
    graph: &mut PropertyGraph,
    sidecar: Option<&VectorSidecar>,
    config: &RunConfig,
    alias: &mut HashMap<String, String>,
    seen_titles: &mut HashMap<String, String>,
    seen_keywords: &mut HashMap<String, String>,
    report: &mut LoadReport,
    path: &Path,
    line_no: usize,
) {
    // For papers and keywords remember the normalized key so the winner map
    // is only updated once the node actually made it into the graph.
    let mut dedup_key: Option<(NodeKind, String)> = None;
    let node = match record {
        CorpusRecord::Paper(r) => {
            let abstract_text = r.abstract_text.unwrap_or_default();
            if abstract_text.chars().count() < config.ingest.min_abstract_chars {
                report.dropped_short_abstract += 1;
                report.issue(
                    path,
                    line_no,
                    format!(
                        "paper {}: abstract shorter than {} characters",
                        r.id, config.ingest.min_abstract_chars
                    ),
                );
                return;
            }
            let normalized = normalize_text(&r.title);
            if let Some(winner) = seen_titles.get(&normalized) {
                alias.insert(r.id.clone(), winner.clone());
                report.papers_merged += 1;
                return;
            }
            let title = match resolve_embedding(
                r.title_embedding,
                r.title_embedding_row,
                sidecar,
                "title_embedding",
            ) {
                Ok(v) => v,
                Err(msg) => return drop_invalid(report, path, line_no, &r.id, msg),
            };
            let abs = match resolve_embedding(
                r.abstract_embedding,
                r.abstract_embedding_row,
                sidecar,
                "abstract_embedding",
            ) {
                Ok(v) => v,
                Err(msg) => return drop_invalid(report, path, line_no, &r.id, msg),
            };
            let mut paper = PaperNode::new(
                r.id.clone(),
                r.title,
                abstract_text,
                r.publication_year,
                r.citation_count,
            );
            paper.venue_name = r.venue_name;
            paper.pdf_url = r.pdf_url;
            paper.title_embedding = title;
            paper.abstract_embedding = abs;
            dedup_key = Some((NodeKind::Paper, normalized));
            Node::Paper(paper)
        }
        CorpusRecord::Keyword(r) => {
            let normalized = normalize_text(&r.text);
            if let Some(winner) = seen_keywords.get(&normalized) {
                alias.insert(r.id.clone(), winner.clone());
                report.keywords_merged += 1;
                return;
            }
            let text = match resolve_embedding(
                r.text_embedding,
                r.text_embedding_row,
                sidecar,
                "text_embedding",
            ) {
                Ok(v) => v,
                Err(msg) => return drop_invalid(report, path, line_no, &r.id, msg),
            };
            let mut keyword = KeywordNode::new(r.id.clone(), r.text);
            keyword.frequency = r.frequency;
            keyword.text_embedding = text;
            dedup_key = Some((NodeKind::Keyword, normalized));
            Node::Keyword(keyword)
        }
        CorpusRecord::Author(r) => {
            let mut author = AuthorNode::new(r.id, r.display_name);
            author.works_count = r.works_count;
            author.cited_by_count = r.cited_by_count;
            author.h_index = r.h_index;
            Node::Author(author)
        }
        CorpusRecord::Institution(r) => misc_node(r, NodeKind::Institution),
        CorpusRecord::Source(r) => misc_node(r, NodeKind::Source),
        CorpusRecord::Topic(r) => misc_node(r, NodeKind::Topic),
        CorpusRecord::Subfield(r) => misc_node(r, NodeKind::Subfield),
        CorpusRecord::Field(r) => misc_node(r, NodeKind::Field),
        CorpusRecord::Domain(r) => misc_node(r, NodeKind::Domain),
        CorpusRecord::Edge(_) => unreachable!("edges are routed to load_edge"),
    };
    let id = node.id().to_string();
    match graph.add_node(node) {
        Ok(()) => {
            report.nodes_loaded += 1;
            match dedup_key {
                Some((NodeKind::Paper, key)) => {
                    seen_titles.insert(key, id);
                }
                Some((NodeKind::Keyword, key)) => {
                    seen_keywords.insert(key, id);
                }
                _ => {}
            }
        }
        Err(e) => drop_invalid(report, path, line_no, &id, e),
    }
}

fn misc_node(record: MiscRecord, kind: NodeKind) -> Node {
    let mut node = MiscNode::new(record.id, kind, record.display_name);
    node.attributes = record.attributes;
    Node::Misc(node)
}

fn drop_invalid(
    report: &mut LoadReport,
    path: &Path,
    line_no: usize,
    id: &str,
    message: impl std::fmt::Display,
) {
    report.dropped_invalid += 1;
    report.issue(path, line_no, format!("{id}: {message}"));
}

fn load_edge(
    pending: PendingEdge,
    graph: &mut PropertyGraph,
    alias: &HashMap<String, String>,
    report: &mut LoadReport,
) {
    let r = pending.record;
    let src = alias.get(&r.src).cloned().unwrap_or(r.src);
    let dst = alias.get(&r.dst).cloned().unwrap_or(r.dst);
    let edge = Edge {
        src,
        dst,
        kind: r.edge_kind,
        count: r.count,
        relevance_score: r.relevance_score,
        position: r.position,
    };
    match graph.add_edge(edge) {
        Ok(()) => report.edges_loaded += 1,
        Err(Error::UnknownNode(id)) => {
            report.dangling_edges_dropped += 1;
            report.issue(
                &pending.file,
                pending.line,
                format!("edge references missing node {id}"),
            );
        }
        Err(Error::Schema(msg)) if msg.starts_with("duplicate") => {
            report.duplicate_edges_dropped += 1;
            report.issue(&pending.file, pending.line, msg);
        }
        Err(e) => {
            report.dropped_invalid += 1;
            report.issue(&pending.file, pending.line, e);
        }
    }
}

/// Derive keyword co-occurrence from paper→keyword assignments: every
/// unordered keyword pair sharing at least one paper gets exactly one
/// COOCCUR edge whose count is the number of shared papers. Any existing
/// COOCCUR edges are replaced, so re-running is idempotent.
pub fn build_cooccur(graph: &mut PropertyGraph) -> Result<usize> {
    // Gather each paper's keywords in a deterministic order.
    let mut per_paper: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for edge in graph.edges() {
        if edge.kind == EdgeKind::HasKeyword {
            per_paper
                .entry(edge.src.clone())
                .or_default()
                .push(edge.dst.clone());
        }
    }
    let mut pair_counts: BTreeMap<(String, String), u64> = BTreeMap::new();
    for keywords in per_paper.values_mut() {
        keywords.sort();
        keywords.dedup();
        for i in 0..keywords.len() {
            for j in (i + 1)..keywords.len() {
                let key = (keywords[i].clone(), keywords[j].clone());
                *pair_counts.entry(key).or_insert(0) += 1;
            }
        }
    }
    let replacements: Vec<Edge> = pair_counts
        .into_iter()
        .map(|((a, b), count)| Edge::new(a, b, EdgeKind::Cooccur).with_count(count))
        .collect();
    let added = replacements.len();
    graph.replace_edges_of_kind(EdgeKind::Cooccur, replacements)?;
    Ok(added)
}

/// Full corpus preparation: load, derive co-occurrence, freeze.
pub fn prepare_graph(dir: &Path, config: &RunConfig) -> Result<(PropertyGraph, LoadReport)> {
    let (mut graph, mut report) = load_corpus(dir, config)?;
    report.cooccur_edges_built = build_cooccur(&mut graph)?;
    graph.freeze();
    Ok((graph, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write_lines(dir: &Path, name: &str, lines: &[&str]) {
        fs::write(dir.join(name), lines.join("\n") + "\n").unwrap();
    }

    fn test_config() -> RunConfig {
        let mut config = RunConfig::default();
        config.embedding.dimension = 4;
        config.ingest.min_abstract_chars = 10;
        config
    }

    fn long_abstract() -> String {
        "This abstract is comfortably long enough for the filter.".to_string()
    }

    fn paper_line(id: &str, title: &str) -> String {
        format!(
            r#"{{"kind":"paper","id":"{id}","title":"{title}","abstract":"{}","publication_year":2020,"citation_count":3}}"#,
            long_abstract()
        )
    }

    #[test]
    fn loads_nodes_and_edges_across_files() {
        let dir = tempfile::tempdir().unwrap();
        write_lines(
            dir.path(),
            "papers.jsonl",
            &[
                &paper_line("P1", "Graph Retrieval"),
                &paper_line("P2", "Vector Search"),
            ],
        );
        write_lines(
            dir.path(),
            "keywords.jsonl",
            &[r#"{"kind":"keyword","id":"K1","text":"graphs"}"#],
        );
        // edges.jsonl sorts before keywords/papers; two-phase load must not care
        write_lines(
            dir.path(),
            "edges.jsonl",
            &[
                r#"{"kind":"edge","edge_kind":"CITES","src":"P1","dst":"P2"}"#,
                r#"{"kind":"edge","edge_kind":"HAS_KEYWORD","src":"P1","dst":"K1","relevance_score":0.8}"#,
            ],
        );
        let (graph, report) = load_corpus(dir.path(), &test_config()).unwrap();
        assert_eq!(report.nodes_loaded, 3);
        assert_eq!(report.edges_loaded, 2);
        assert_eq!(report.total_dropped(), 0);
        assert!(graph.has_edge("P1", "P2", EdgeKind::Cites));
        assert!(graph.has_edge("P1", "K1", EdgeKind::HasKeyword));
    }

    #[test]
    fn duplicate_titles_merge_onto_first_record() {
        let dir = tempfile::tempdir().unwrap();
        write_lines(
            dir.path(),
            "papers.jsonl",
            &[
                &paper_line("P1", "Graph  Neural Networks"),
                &paper_line("P2", "graph neural networks"),
            ],
        );
        write_lines(
            dir.path(),
            "keywords.jsonl",
            &[r#"{"kind":"keyword","id":"K1","text":"graphs"}"#],
        );
        write_lines(
            dir.path(),
            "edges.jsonl",
            &[
                r#"{"kind":"edge","edge_kind":"HAS_KEYWORD","src":"P2","dst":"K1","relevance_score":0.5}"#,
            ],
        );
        let (graph, report) = load_corpus(dir.path(), &test_config()).unwrap();
        assert_eq!(report.papers_merged, 1);
        assert_eq!(graph.node_count_of_kind(NodeKind::Paper), 1);
        // the duplicate's edge re-targeted onto the winner
        assert!(graph.has_edge("P1", "K1", EdgeKind::HasKeyword));
    }

    #[test]
    fn authors_are_never_deduplicated() {
        let dir = tempfile::tempdir().unwrap();
        write_lines(
            dir.path(),
            "authors.jsonl",
            &[
                r#"{"kind":"author","id":"A1","display_name":"Jane Doe"}"#,
                r#"{"kind":"author","id":"A2","display_name":"Jane Doe"}"#,
            ],
        );
        let (graph, report) = load_corpus(dir.path(), &test_config()).unwrap();
        assert_eq!(report.nodes_loaded, 2);
        assert_eq!(graph.node_count_of_kind(NodeKind::Author), 2);
    }

    #[test]
    fn short_abstracts_are_dropped_and_counted() {
        let dir = tempfile::tempdir().unwrap();
        write_lines(
            dir.path(),
            "papers.jsonl",
            &[r#"{"kind":"paper","id":"P1","title":"Tiny","abstract":"short"}"#],
        );
        let (graph, report) = load_corpus(dir.path(), &test_config()).unwrap();
        assert_eq!(report.dropped_short_abstract, 1);
        assert_eq!(graph.node_count(), 0);
        assert_eq!(report.issues.len(), 1);
        assert!(report.issues[0].contains("papers.jsonl:1"));
    }

    #[test]
    fn malformed_lines_are_counted_with_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        write_lines(
            dir.path(),
            "papers.jsonl",
            &[
                &paper_line("P1", "Fine"),
                "{not json",
                r#"{"kind":"mystery","id":"X"}"#,
            ],
        );
        let (graph, report) = load_corpus(dir.path(), &test_config()).unwrap();
        assert_eq!(report.malformed_lines, 2);
        assert_eq!(graph.node_count(), 1);
        assert!(report.issues.iter().any(|m| m.contains(":2:")));
        assert!(report.issues.iter().any(|m| m.contains(":3:")));
    }

    #[test]
    fn dangling_and_duplicate_edges_are_dropped() {
        let dir = tempfile::tempdir().unwrap();
        write_lines(
            dir.path(),
            "papers.jsonl",
            &[&paper_line("P1", "One"), &paper_line("P2", "Two")],
        );
        write_lines(
            dir.path(),
            "edges.jsonl",
            &[
                r#"{"kind":"edge","edge_kind":"CITES","src":"P1","dst":"P2"}"#,
                r#"{"kind":"edge","edge_kind":"CITES","src":"P1","dst":"P2"}"#,
                r#"{"kind":"edge","edge_kind":"CITES","src":"P1","dst":"P9"}"#,
            ],
        );
        let (graph, report) = load_corpus(dir.path(), &test_config()).unwrap();
        assert_eq!(report.edges_loaded, 1);
        assert_eq!(report.duplicate_edges_dropped, 1);
        assert_eq!(report.dangling_edges_dropped, 1);
        assert_eq!(graph.edge_count(), 1);
    }

    #[test]
    fn sidecar_round_trip_and_row_references() {
        let dir = tempfile::tempdir().unwrap();
        let mut sidecar = VectorSidecar::new(4);
        let row = sidecar.push(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert_eq!(row, 0);
        sidecar.write(dir.path()).unwrap();

        write_lines(
            dir.path(),
            "papers.jsonl",
            &[&format!(
                r#"{{"kind":"paper","id":"P1","title":"Vec Paper","abstract":"{}","title_embedding_row":0}}"#,
                long_abstract()
            )],
        );
        let (graph, report) = load_corpus(dir.path(), &test_config()).unwrap();
        assert_eq!(report.total_dropped(), 0);
        let paper = graph.node("P1").unwrap().as_paper().unwrap();
        let v = paper.title_embedding.as_ref().unwrap();
        assert!((v.values()[0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn out_of_range_row_reference_drops_the_record() {
        let dir = tempfile::tempdir().unwrap();
        let sidecar = VectorSidecar::new(4);
        sidecar.write(dir.path()).unwrap();
        write_lines(
            dir.path(),
            "papers.jsonl",
            &[&format!(
                r#"{{"kind":"paper","id":"P1","title":"Vec Paper","abstract":"{}","title_embedding_row":7}}"#,
                long_abstract()
            )],
        );
        let (graph, report) = load_corpus(dir.path(), &test_config()).unwrap();
        assert_eq!(report.dropped_invalid, 1);
        assert_eq!(graph.node_count(), 0);
    }

    #[test]
    fn sidecar_dimension_must_match_config() {
        let dir = tempfile::tempdir().unwrap();
        let sidecar = VectorSidecar::new(8);
        sidecar.write(dir.path()).unwrap();
        write_lines(dir.path(), "papers.jsonl", &[&paper_line("P1", "One")]);
        let err = load_corpus(dir.path(), &test_config()).unwrap_err();
        assert!(matches!(
            err,
            Error::Dimension {
                expected: 4,
                got: 8
            }
        ));
    }

    #[test]
    fn inline_vector_plus_row_reference_is_invalid() {
        let dir = tempfile::tempdir().unwrap();
        let mut sidecar = VectorSidecar::new(4);
        sidecar.push(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        sidecar.write(dir.path()).unwrap();
        write_lines(
            dir.path(),
            "papers.jsonl",
            &[&format!(
                r#"{{"kind":"paper","id":"P1","title":"Conflicted","abstract":"{}","title_embedding":[1.0,0.0,0.0,0.0],"title_embedding_row":0}}"#,
                long_abstract()
            )],
        );
        let (_, report) = load_corpus(dir.path(), &test_config()).unwrap();
        assert_eq!(report.dropped_invalid, 1);
    }

    #[test]
    fn cooccur_counts_shared_papers() {
        let dir = tempfile::tempdir().unwrap();
        write_lines(
            dir.path(),
            "papers.jsonl",
            &[&paper_line("P1", "One"), &paper_line("P2", "Two")],
        );
        write_lines(
            dir.path(),
            "keywords.jsonl",
            &[
                r#"{"kind":"keyword","id":"Ka","text":"alpha"}"#,
                r#"{"kind":"keyword","id":"Kb","text":"beta"}"#,
                r#"{"kind":"keyword","id":"Kc","text":"gamma"}"#,
            ],
        );
        write_lines(
            dir.path(),
            "edges.jsonl",
            &[
                r#"{"kind":"edge","edge_kind":"HAS_KEYWORD","src":"P1","dst":"Ka","relevance_score":1.0}"#,
                r#"{"kind":"edge","edge_kind":"HAS_KEYWORD","src":"P1","dst":"Kb","relevance_score":1.0}"#,
                r#"{"kind":"edge","edge_kind":"HAS_KEYWORD","src":"P1","dst":"Kc","relevance_score":1.0}"#,
                r#"{"kind":"edge","edge_kind":"HAS_KEYWORD","src":"P2","dst":"Ka","relevance_score":1.0}"#,
                r#"{"kind":"edge","edge_kind":"HAS_KEYWORD","src":"P2","dst":"Kb","relevance_score":1.0}"#,
            ],
        );
        let (mut graph, _) = load_corpus(dir.path(), &test_config()).unwrap();
        let added = build_cooccur(&mut graph).unwrap();
        assert_eq!(added, 3); // (a,b), (a,c), (b,c)
        let ab = graph
            .edges()
            .find(|e| e.kind == EdgeKind::Cooccur && e.src == "Ka" && e.dst == "Kb")
            .unwrap();
        assert_eq!(ab.count, Some(2));
        // idempotent: same counts after a second run
        let again = build_cooccur(&mut graph).unwrap();
        assert_eq!(again, 3);
        assert_eq!(
            graph
                .edges()
                .filter(|e| e.kind == EdgeKind::Cooccur)
                .count(),
            3
        );
    }

    #[test]
    fn cooccur_matches_brute_force_on_random_assignments() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut config = test_config();
        config.ingest.min_abstract_chars = 0;
        let mut graph = PropertyGraph::new(4);
        for k in 0..12 {
            graph
                .add_node(Node::Keyword(KeywordNode::new(
                    format!("K{k:02}"),
                    format!("kw {k}"),
                )))
                .unwrap();
        }
        let mut assignments: Vec<(String, String)> = Vec::new();
        for p in 0..40 {
            let pid = format!("P{p:02}");
            graph
                .add_node(Node::Paper(PaperNode::new(
                    &pid,
                    format!("Paper {p}"),
                    "A.",
                    2020,
                    0,
                )))
                .unwrap();
            let n = rng.gen_range(1..=6);
            let mut chosen: Vec<usize> = (0..12).collect();
            for i in 0..n {
                let j = rng.gen_range(i..12);
                chosen.swap(i, j);
            }
            for &k in &chosen[..n] {
                let kid = format!("K{k:02}");
                graph
                    .add_edge(Edge::new(&pid, &kid, EdgeKind::HasKeyword).with_relevance(1.0))
                    .unwrap();
                assignments.push((pid.clone(), kid));
            }
        }
        build_cooccur(&mut graph).unwrap();

        // brute force over the assignment list
        let mut expected: BTreeMap<(String, String), u64> = BTreeMap::new();
        let mut by_paper: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (p, k) in &assignments {
            by_paper.entry(p.clone()).or_default().push(k.clone());
        }
        for ks in by_paper.values_mut() {
            ks.sort();
            for i in 0..ks.len() {
                for j in (i + 1)..ks.len() {
                    *expected.entry((ks[i].clone(), ks[j].clone())).or_insert(0) += 1;
                }
            }
        }
        let mut got: BTreeMap<(String, String), u64> = BTreeMap::new();
        for e in graph.edges().filter(|e| e.kind == EdgeKind::Cooccur) {
            got.insert((e.src.clone(), e.dst.clone()), e.count.unwrap());
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn prepare_graph_freezes_and_counts() {
        let dir = tempfile::tempdir().unwrap();
        write_lines(dir.path(), "papers.jsonl", &[&paper_line("P1", "One")]);
        write_lines(
            dir.path(),
            "keywords.jsonl",
            &[
                r#"{"kind":"keyword","id":"Ka","text":"alpha","frequency":999}"#,
                r#"{"kind":"keyword","id":"Kb","text":"beta"}"#,
            ],
        );
        write_lines(
            dir.path(),
            "edges.jsonl",
            &[
                r#"{"kind":"edge","edge_kind":"HAS_KEYWORD","src":"P1","dst":"Ka","relevance_score":1.0}"#,
                r#"{"kind":"edge","edge_kind":"HAS_KEYWORD","src":"P1","dst":"Kb","relevance_score":1.0}"#,
            ],
        );
        let (graph, report) = prepare_graph(dir.path(), &test_config()).unwrap();
        assert!(graph.is_frozen());
        assert_eq!(report.cooccur_edges_built, 1);
        let ka = graph.node("Ka").unwrap().as_keyword().unwrap();
        assert_eq!(ka.frequency, 1); // recounted at freeze, file value ignored
    }

    #[test]
    fn loading_same_corpus_twice_gives_identical_graphs() {
        let dir = tempfile::tempdir().unwrap();
        write_lines(
            dir.path(),
            "papers.jsonl",
            &[
                &paper_line("P1", "One"),
                &paper_line("P2", "Two"),
                &paper_line("P3", "one"),
            ],
        );
        write_lines(
            dir.path(),
            "edges.jsonl",
            &[r#"{"kind":"edge","edge_kind":"CITES","src":"P3","dst":"P2"}"#],
        );
        let config = test_config();
        let (g1, r1) = load_corpus(dir.path(), &config).unwrap();
        let (g2, r2) = load_corpus(dir.path(), &config).unwrap();
        assert_eq!(r1.nodes_loaded, r2.nodes_loaded);
        assert_eq!(r1.papers_merged, 1);
        let ids1: Vec<&str> = g1.nodes().map(|(_, n)| n.id()).collect();
        let ids2: Vec<&str> = g2.nodes().map(|(_, n)| n.id()).collect();
        assert_eq!(ids1, ids2);
        let e1: Vec<(String, String)> =
            g1.edges().map(|e| (e.src.clone(), e.dst.clone())).collect();
        let e2: Vec<(String, String)> =
            g2.edges().map(|e| (e.src.clone(), e.dst.clone())).collect();
        assert_eq!(e1, e2);
        // the alias re-targeted P3's citation onto P1
        assert!(g1.has_edge("P1", "P2", EdgeKind::Cites));
    }

    #[test]
    fn empty_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = load_corpus(dir.path(), &test_config()).unwrap_err();
        assert!(matches!(err, Error::Corpus(_)));
    }
}
