use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::config::EdgeWeightConfig;
use crate::embed::EmbeddingVector;
use crate::error::{Error, Result};
use crate::text::normalize_text;

use super::edge::{edge_static_weight, Edge, EdgeKind};
use super::node::{Node, NodeKind};

/// Which stored embedding a vector search scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingField {
    PaperTitle,
    PaperAbstract,
    KeywordText,
}

/// One vector-search result: node index into the store plus cosine score.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorHit {
    pub node: usize,
    pub score: f64,
}

#[derive(Debug, Clone, Copy)]
struct AdjEntry {
    neighbor: usize,
    edge: usize,
}

/// In-memory property graph. Mutation happens during ingest; [`freeze`]
/// finalizes derived counters and locks the graph, after which only reads
/// are allowed (shared references are then safe to hand to parallel code).
///
/// [`freeze`]: PropertyGraph::freeze
#[derive(Debug, Default)]
pub struct PropertyGraph {
    dimension: usize,
    nodes: Vec<Node>,
    ids: HashMap<String, usize>,
    edges: Vec<Edge>,
    /// Normalized (src, dst, kind) triples for duplicate detection.
    edge_keys: HashSet<(usize, usize, EdgeKind)>,
    /// Undirected adjacency: every edge appears in both endpoint lists.
    adjacency: Vec<Vec<AdjEntry>>,
    /// normalize_text(title) -> paper node indexes, insertion order.
    title_index: HashMap<String, Vec<usize>>,
    /// text_normalized -> keyword node indexes, insertion order.
    keyword_index: HashMap<String, Vec<usize>>,
    /// Node indexes that carry each embedding field, insertion order.
    title_vectors: Vec<usize>,
    abstract_vectors: Vec<usize>,
    keyword_vectors: Vec<usize>,
    frozen: bool,
    /// Ranking weights for capped neighbor selection.
    static_weights: EdgeWeightConfig,
}

impl PropertyGraph {
    /// An empty graph expecting embeddings of the given dimension.
    pub fn new(dimension: usize) -> Self {
        PropertyGraph {
            dimension,
            static_weights: EdgeWeightConfig::default(),
            ..Default::default()
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_count_of_kind(&self, kind: NodeKind) -> usize {
        self.nodes.iter().filter(|n| n.kind() == kind).count()
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.ids.get(id).map(|&i| &self.nodes[i])
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.ids.get(id).copied()
    }

    pub fn node_at(&self, index: usize) -> &Node {
        &self.nodes[index]
    }

    pub fn edge_at(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (usize, &Node)> {
        self.nodes.iter().enumerate()
    }

    pub fn nodes_of_kind(&self, kind: NodeKind) -> impl Iterator<Item = (usize, &Node)> {
        self.nodes
            .iter()
            .enumerate()
            .filter(move |(_, n)| n.kind() == kind)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    /// Insert a node. Rejects duplicates, structurally invalid nodes and
    /// embeddings that do not match the configured dimension or are not unit
    /// length. Derived normalized fields are (re)computed here so they can
    /// never drift from their source text.
    pub fn add_node(&mut self, mut node: Node) -> Result<()> {
        if self.frozen {
            return Err(Error::Frozen);
        }
        self.validate_node(&node)?;
        match &mut node {
            Node::Paper(p) => p.title_normalized = normalize_text(&p.title),
            Node::Keyword(k) => k.text_normalized = normalize_text(&k.text),
            _ => {}
        }
        let id = node.id().to_string();
        if self.ids.contains_key(&id) {
            return Err(Error::DuplicateNode(id));
        }
        let index = self.nodes.len();
        match &node {
            Node::Paper(p) => {
                self.title_index
                    .entry(p.title_normalized.clone())
                    .or_default()
                    .push(index);
                if p.title_embedding.is_some() {
                    self.title_vectors.push(index);
                }
                if p.abstract_embedding.is_some() {
                    self.abstract_vectors.push(index);
                }
            }
            Node::Keyword(k) => {
                self.keyword_index
                    .entry(k.text_normalized.clone())
                    .or_default()
                    .push(index);
                if k.text_embedding.is_some() {
                    self.keyword_vectors.push(index);
                }
            }
            _ => {}
        }
        self.ids.insert(id, index);
        self.nodes.push(node);
        self.adjacency.push(Vec::new());
        Ok(())
    }

    fn validate_node(&self, node: &Node) -> Result<()> {
        match node {
            Node::Paper(p) => {
                if p.title.trim().is_empty() {
                    return Err(Error::Schema(format!("paper {} has an empty title", p.id)));
                }
                self.validate_embedding(&p.id, "title_embedding", p.title_embedding.as_ref())?;
                self.validate_embedding(
                    &p.id,
                    "abstract_embedding",
                    p.abstract_embedding.as_ref(),
                )?;
            }
            Node::Author(a) => {
                if a.display_name.trim().is_empty() {
                    return Err(Error::Schema(format!(
                        "author {} has an empty display_name",
                        a.id
                    )));
                }
            }
            Node::Keyword(k) => {
                if k.text.trim().is_empty() {
                    return Err(Error::Schema(format!("keyword {} has an empty text", k.id)));
                }
                self.validate_embedding(&k.id, "text_embedding", k.text_embedding.as_ref())?;
            }
            Node::Misc(m) => {
                if matches!(
                    m.kind,
                    NodeKind::Paper | NodeKind::Author | NodeKind::Keyword
                ) {
                    return Err(Error::Schema(format!(
                        "node {} uses the generic shape for typed kind {}",
                        m.id,
                        m.kind.as_str()
                    )));
                }
                if m.display_name.trim().is_empty() {
                    return Err(Error::Schema(format!(
                        "{} {} has an empty display_name",
                        m.kind.as_str(),
                        m.id
                    )));
                }
            }
        }
        if node.id().is_empty() {
            return Err(Error::Schema("node id is empty".into()));
        }
        Ok(())
    }

    fn validate_embedding(&self, id: &str, field: &str, v: Option<&EmbeddingVector>) -> Result<()> {
        let Some(v) = v else { return Ok(()) };
        if v.dimension() != self.dimension {
            return Err(Error::Schema(format!(
                "{id}.{field}: dimension {} does not match configured {}",
                v.dimension(),
                self.dimension
            )));
        }
        if v.norm_error() > 1e-6 {
            return Err(Error::Schema(format!(
                "{id}.{field}: vector is not unit length"
            )));
        }
        Ok(())
    }

    /// Insert an edge. Both endpoints must already exist with the kinds the
    /// relation demands; per-kind properties are validated; duplicate
    /// (src, dst, kind) triples and self-loops are rejected.
    pub fn add_edge(&mut self, edge: Edge) -> Result<()> {
        if self.frozen {
            return Err(Error::Frozen);
        }
        edge.validate_properties()?;
        let src = *self
            .ids
            .get(&edge.src)
            .ok_or_else(|| Error::UnknownNode(edge.src.clone()))?;
        let dst = *self
            .ids
            .get(&edge.dst)
            .ok_or_else(|| Error::UnknownNode(edge.dst.clone()))?;
        if src == dst {
            return Err(Error::Schema(format!(
                "{} edge {} -> {} is a self-loop",
                edge.kind.as_str(),
                edge.src,
                edge.dst
            )));
        }
        let (want_src, want_dst) = edge.kind.endpoints();
        let got_src = self.nodes[src].kind();
        let got_dst = self.nodes[dst].kind();
        if got_src != want_src || got_dst != want_dst {
            return Err(Error::Schema(format!(
                "{} edge requires {} -> {}, got {} -> {}",
                edge.kind.as_str(),
                want_src.as_str(),
                want_dst.as_str(),
                got_src.as_str(),
                got_dst.as_str()
            )));
        }
        if !self.edge_keys.insert((src, dst, edge.kind)) {
            return Err(Error::Schema(format!(
                "duplicate {} edge {} -> {}",
                edge.kind.as_str(),
                edge.src,
                edge.dst
            )));
        }
        let edge_index = self.edges.len();
        self.adjacency[src].push(AdjEntry {
            neighbor: dst,
            edge: edge_index,
        });
        self.adjacency[dst].push(AdjEntry {
            neighbor: src,
            edge: edge_index,
        });
        self.edges.push(edge);
        Ok(())
    }

    pub fn has_edge(&self, src: &str, dst: &str, kind: EdgeKind) -> bool {
        match (self.ids.get(src), self.ids.get(dst)) {
            (Some(&s), Some(&d)) => self.edge_keys.contains(&(s, d, kind)),
            _ => false,
        }
    }

    /// Drop every edge of one kind and insert replacements. Used by the
    /// co-occurrence builder so that re-deriving counts stays idempotent.
    pub fn replace_edges_of_kind(&mut self, kind: EdgeKind, replacements: Vec<Edge>) -> Result<()> {
        if self.frozen {
            return Err(Error::Frozen);
        }
        let kept: Vec<Edge> = self.edges.drain(..).filter(|e| e.kind != kind).collect();
        self.edge_keys.clear();
        for adj in &mut self.adjacency {
            adj.clear();
        }
        self.edges = Vec::with_capacity(kept.len() + replacements.len());
        for e in kept {
            // Re-inserting edges that were already valid; endpoint ids still
            // resolve because nodes are never removed.
            self.add_edge(e)?;
        }
        for e in replacements {
            if e.kind != kind {
                return Err(Error::InvalidParameter(format!(
                    "replacement edge {} -> {} has kind {}, expected {}",
                    e.src,
                    e.dst,
                    e.kind.as_str(),
                    kind.as_str()
                )));
            }
            self.add_edge(e)?;
        }
        Ok(())
    }

    /// All and only the nodes whose normalized key field equals `normalized`.
    /// Papers match on `title_normalized`, keywords on `text_normalized`;
    /// other kinds have no exact index.
    pub fn lookup_exact(&self, kind: NodeKind, normalized: &str) -> Result<Vec<&Node>> {
        let index = match kind {
            NodeKind::Paper => &self.title_index,
            NodeKind::Keyword => &self.keyword_index,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "no exact index for node kind {}",
                    kind.as_str()
                )))
            }
        };
        Ok(index
            .get(normalized)
            .map(|idxs| idxs.iter().map(|&i| &self.nodes[i]).collect())
            .unwrap_or_default())
    }

    /// Like [`lookup_exact`](Self::lookup_exact) but returning node indexes.
    pub fn lookup_exact_indexes(&self, kind: NodeKind, normalized: &str) -> Result<Vec<usize>> {
        let index = match kind {
            NodeKind::Paper => &self.title_index,
            NodeKind::Keyword => &self.keyword_index,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "no exact index for node kind {}",
                    kind.as_str()
                )))
            }
        };
        Ok(index.get(normalized).cloned().unwrap_or_default())
    }

    /// Exact top-k by cosine over every node that stores the field, scored
    /// in parallel but reduced in a fixed order: descending score, ties by
    /// ascending node id.
    pub fn vector_search(
        &self,
        field: EmbeddingField,
        query: &EmbeddingVector,
        k: usize,
    ) -> Result<Vec<VectorHit>> {
        if query.dimension() != self.dimension {
            return Err(Error::Dimension {
                expected: self.dimension,
                got: query.dimension(),
            });
        }
        let candidates = match field {
            EmbeddingField::PaperTitle => &self.title_vectors,
            EmbeddingField::PaperAbstract => &self.abstract_vectors,
            EmbeddingField::KeywordText => &self.keyword_vectors,
        };
        let mut hits: Vec<VectorHit> = candidates
            .par_iter()
            .map(|&i| {
                let v = match (&self.nodes[i], field) {
                    (Node::Paper(p), EmbeddingField::PaperTitle) => p.title_embedding.as_ref(),
                    (Node::Paper(p), EmbeddingField::PaperAbstract) => {
                        p.abstract_embedding.as_ref()
                    }
                    (Node::Keyword(kw), EmbeddingField::KeywordText) => kw.text_embedding.as_ref(),
                    _ => None,
                };
                let score = v
                    .map(|v| query.cosine(v).expect("stored dimensions are validated"))
                    .unwrap_or(f64::NEG_INFINITY);
                VectorHit { node: i, score }
            })
            .collect();
        hits.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| self.nodes[a.node].id().cmp(self.nodes[b.node].id()))
        });
        hits.truncate(k);
        Ok(hits)
    }

    /// Undirected neighbors of a node with a deterministic per-kind cap: for
    /// each neighbor kind at most `per_kind_cap` distinct neighbors survive,
    /// chosen by descending context-free edge weight with ties broken by
    /// ascending neighbor id. Every edge to a surviving neighbor is returned.
    pub fn neighbors(&self, id: &str, per_kind_cap: usize) -> Result<Vec<(usize, &Edge)>> {
        let index = self
            .ids
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownNode(id.to_string()))?;
        Ok(self
            .neighbors_capped(index, per_kind_cap)
            .into_iter()
            .map(|e| (e.neighbor, &self.edges[e.edge]))
            .collect())
    }

    pub(crate) fn neighbors_capped(&self, index: usize, per_kind_cap: usize) -> Vec<AdjEntryPub> {
        let mut entries: Vec<(&AdjEntry, f64)> = self.adjacency[index]
            .iter()
            .map(|e| {
                (
                    e,
                    edge_static_weight(&self.edges[e.edge], &self.static_weights),
                )
            })
            .collect();
        entries.sort_by(|(a, wa), (b, wb)| {
            wb.partial_cmp(wa)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| self.nodes[a.neighbor].id().cmp(self.nodes[b.neighbor].id()))
                .then_with(|| self.edges[a.edge].kind.cmp(&self.edges[b.edge].kind))
        });
        let mut admitted: HashMap<NodeKind, usize> = HashMap::new();
        let mut chosen: HashSet<usize> = HashSet::new();
        let mut out = Vec::with_capacity(entries.len().min(per_kind_cap * 2));
        for (entry, _) in entries {
            let kind = self.nodes[entry.neighbor].kind();
            if chosen.contains(&entry.neighbor) {
                out.push(AdjEntryPub {
                    neighbor: entry.neighbor,
                    edge: entry.edge,
                });
                continue;
            }
            let admitted_count = admitted.entry(kind).or_insert(0);
            if *admitted_count < per_kind_cap {
                *admitted_count += 1;
                chosen.insert(entry.neighbor);
                out.push(AdjEntryPub {
                    neighbor: entry.neighbor,
                    edge: entry.edge,
                });
            }
        }
        out
    }

    /// Raw undirected adjacency of a node, uncapped, in insertion order.
    pub(crate) fn adjacency_raw(&self, index: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency[index].iter().map(|e| (e.neighbor, e.edge))
    }

    pub fn degree(&self, index: usize) -> usize {
        self.adjacency[index].len()
    }

    /// Finalize derived counters and lock the graph against mutation:
    /// keyword `frequency` becomes its HAS_KEYWORD degree and author
    /// `works_count` its AUTHORED degree.
    pub fn freeze(&mut self) {
        if self.frozen {
            return;
        }
        let mut keyword_freq: HashMap<usize, u64> = HashMap::new();
        let mut author_works: HashMap<usize, u64> = HashMap::new();
        for edge in &self.edges {
            match edge.kind {
                EdgeKind::HasKeyword => {
                    let k = self.ids[&edge.dst];
                    *keyword_freq.entry(k).or_insert(0) += 1;
                }
                EdgeKind::Authored => {
                    let a = self.ids[&edge.src];
                    *author_works.entry(a).or_insert(0) += 1;
                }
                _ => {}
            }
        }
        for (i, node) in self.nodes.iter_mut().enumerate() {
            match node {
                Node::Keyword(k) => k.frequency = keyword_freq.get(&i).copied().unwrap_or(0),
                Node::Author(a) => a.works_count = author_works.get(&i).copied().unwrap_or(0),
                _ => {}
            }
        }
        self.frozen = true;
    }
}

/// Public projection of an adjacency entry (indexes into the store).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct AdjEntryPub {
    pub neighbor: usize,
    pub edge: usize,
}
