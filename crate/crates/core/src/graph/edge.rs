use serde::{Deserialize, Serialize};

use crate::config::EdgeWeightConfig;
use crate::error::{Error, Result};

use super::node::NodeKind;

/// Relation kinds with their fixed storage direction. Traversal treats every
/// edge as undirected; the direction only pins which endpoint is which.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EdgeKind {
    /// Paper -> Paper
    Cites,
    /// Paper -> Paper
    RelatedTo,
    /// Author -> Paper
    Authored,
    /// Author -> Author
    Coauthor,
    /// Keyword -> Keyword
    Cooccur,
    /// Paper -> Keyword
    HasKeyword,
    /// Paper -> Topic
    HasTopic,
    /// Author -> Institution
    AffiliatedWith,
    /// Paper -> Source
    PublishIn,
    /// Field -> Domain
    DomainOf,
    /// Subfield -> Field
    FieldOf,
    /// Topic -> Subfield
    SubfieldOf,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 12] = [
        EdgeKind::Cites,
        EdgeKind::RelatedTo,
        EdgeKind::Authored,
        EdgeKind::Coauthor,
        EdgeKind::Cooccur,
        EdgeKind::HasKeyword,
        EdgeKind::HasTopic,
        EdgeKind::AffiliatedWith,
        EdgeKind::PublishIn,
        EdgeKind::DomainOf,
        EdgeKind::FieldOf,
        EdgeKind::SubfieldOf,
    ];

    /// (source kind, destination kind) required by the schema.
    pub fn endpoints(&self) -> (NodeKind, NodeKind) {
        match self {
            EdgeKind::Cites => (NodeKind::Paper, NodeKind::Paper),
            EdgeKind::RelatedTo => (NodeKind::Paper, NodeKind::Paper),
            EdgeKind::Authored => (NodeKind::Author, NodeKind::Paper),
            EdgeKind::Coauthor => (NodeKind::Author, NodeKind::Author),
            EdgeKind::Cooccur => (NodeKind::Keyword, NodeKind::Keyword),
            EdgeKind::HasKeyword => (NodeKind::Paper, NodeKind::Keyword),
            EdgeKind::HasTopic => (NodeKind::Paper, NodeKind::Topic),
            EdgeKind::AffiliatedWith => (NodeKind::Author, NodeKind::Institution),
            EdgeKind::PublishIn => (NodeKind::Paper, NodeKind::Source),
            EdgeKind::DomainOf => (NodeKind::Field, NodeKind::Domain),
            EdgeKind::FieldOf => (NodeKind::Subfield, NodeKind::Field),
            EdgeKind::SubfieldOf => (NodeKind::Topic, NodeKind::Subfield),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeKind::Cites => "CITES",
            EdgeKind::RelatedTo => "RELATED_TO",
            EdgeKind::Authored => "AUTHORED",
            EdgeKind::Coauthor => "COAUTHOR",
            EdgeKind::Cooccur => "COOCCUR",
            EdgeKind::HasKeyword => "HAS_KEYWORD",
            EdgeKind::HasTopic => "HAS_TOPIC",
            EdgeKind::AffiliatedWith => "AFFILIATED_WITH",
            EdgeKind::PublishIn => "PUBLISH_IN",
            EdgeKind::DomainOf => "DOMAIN_OF",
            EdgeKind::FieldOf => "FIELD_OF",
            EdgeKind::SubfieldOf => "SUBFIELD_OF",
        }
    }
}

/// One stored relation. `count` is required on COAUTHOR/COOCCUR (shared
/// papers), `relevance_score` on HAS_KEYWORD, and `position` is allowed only
/// on AUTHORED; everything else must leave them unset.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub src: String,
    pub dst: String,
    pub kind: EdgeKind,
    pub count: Option<u64>,
    pub relevance_score: Option<f64>,
    pub position: Option<u32>,
}

impl Edge {
    pub fn new(src: impl Into<String>, dst: impl Into<String>, kind: EdgeKind) -> Self {
        Edge {
            src: src.into(),
            dst: dst.into(),
            kind,
            count: None,
            relevance_score: None,
            position: None,
        }
    }

    pub fn with_count(mut self, count: u64) -> Self {
        self.count = Some(count);
        self
    }

    pub fn with_relevance(mut self, relevance: f64) -> Self {
        self.relevance_score = Some(relevance);
        self
    }

    pub fn with_position(mut self, position: u32) -> Self {
        self.position = Some(position);
        self
    }

    /// Per-kind property rules, independent of endpoint existence.
    pub fn validate_properties(&self) -> Result<()> {
        let needs_count = matches!(self.kind, EdgeKind::Coauthor | EdgeKind::Cooccur);
        match (needs_count, self.count) {
            (true, None) => {
                return Err(Error::Schema(format!(
                    "{} edge {} -> {} requires a count",
                    self.kind.as_str(),
                    self.src,
                    self.dst
                )))
            }
            (true, Some(0)) => {
                return Err(Error::Schema(format!(
                    "{} edge {} -> {} must have count >= 1",
                    self.kind.as_str(),
                    self.src,
                    self.dst
                )))
            }
            (false, Some(_)) => {
                return Err(Error::Schema(format!(
                    "{} edge {} -> {} must not carry a count",
                    self.kind.as_str(),
                    self.src,
                    self.dst
                )))
            }
            _ => {}
        }
        let needs_rel = self.kind == EdgeKind::HasKeyword;
        match (needs_rel, self.relevance_score) {
            (true, None) => {
                return Err(Error::Schema(format!(
                    "HAS_KEYWORD edge {} -> {} requires a relevance_score",
                    self.src, self.dst
                )))
            }
            (true, Some(r)) if !(0.0..=1.0).contains(&r) || !r.is_finite() => {
                return Err(Error::Schema(format!(
                    "HAS_KEYWORD edge {} -> {} has relevance_score {r} outside [0, 1]",
                    self.src, self.dst
                )))
            }
            (false, Some(_)) => {
                return Err(Error::Schema(format!(
                    "{} edge {} -> {} must not carry a relevance_score",
                    self.kind.as_str(),
                    self.src,
                    self.dst
                )))
            }
            _ => {}
        }
        if self.position.is_some() && self.kind != EdgeKind::Authored {
            return Err(Error::Schema(format!(
                "{} edge {} -> {} must not carry a position",
                self.kind.as_str(),
                self.src,
                self.dst
            )));
        }
        Ok(())
    }
}

/// Context-free edge weight: the weight the propagation stage would assign
/// when no endpoint is a seed keyword. The store uses it to rank neighbors
/// when a per-kind cap forces a cut.
pub fn edge_static_weight(edge: &Edge, w: &EdgeWeightConfig) -> f64 {
    match edge.kind {
        EdgeKind::Cites => w.cites,
        EdgeKind::RelatedTo => w.related_to,
        EdgeKind::Authored => w.authored,
        EdgeKind::Coauthor => scaled_count_weight(w.coauthor, edge.count, w.count_log_cap),
        EdgeKind::Cooccur => scaled_count_weight(w.cooccur, edge.count, w.count_log_cap),
        EdgeKind::HasKeyword => {
            w.has_keyword * w.keyword_floor * edge.relevance_score.unwrap_or(0.0)
        }
        _ => w.default_weight,
    }
}

/// Count-bearing kinds scale their base weight by ln(1 + count), clamped to
/// [1, cap], so repeat collaboration helps but never dominates.
pub(crate) fn scaled_count_weight(base: f64, count: Option<u64>, cap: f64) -> f64 {
    let n = count.unwrap_or(1) as f64;
    base * (n + 1.0).ln().clamp(1.0, cap)
}
