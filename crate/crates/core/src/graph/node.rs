use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::embed::EmbeddingVector;

/// Entity categories of the graph. Paper, Author and Keyword carry typed
/// attributes; the remaining six (venues and the topic taxonomy) share the
/// generic [`MiscNode`] shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Paper,
    Author,
    Keyword,
    Institution,
    Source,
    Topic,
    Subfield,
    Field,
    Domain,
}

impl NodeKind {
    pub const ALL: [NodeKind; 9] = [
        NodeKind::Paper,
        NodeKind::Author,
        NodeKind::Keyword,
        NodeKind::Institution,
        NodeKind::Source,
        NodeKind::Topic,
        NodeKind::Subfield,
        NodeKind::Field,
        NodeKind::Domain,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            NodeKind::Paper => "paper",
            NodeKind::Author => "author",
            NodeKind::Keyword => "keyword",
            NodeKind::Institution => "institution",
            NodeKind::Source => "source",
            NodeKind::Topic => "topic",
            NodeKind::Subfield => "subfield",
            NodeKind::Field => "field",
            NodeKind::Domain => "domain",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PaperNode {
    pub id: String,
    pub title: String,
    /// Derived index form of `title`; the store recomputes this on insert.
    pub title_normalized: String,
    pub abstract_text: String,
    pub publication_year: i32,
    pub citation_count: u64,
    pub venue_name: Option<String>,
    pub pdf_url: Option<String>,
    pub title_embedding: Option<EmbeddingVector>,
    pub abstract_embedding: Option<EmbeddingVector>,
}

impl PaperNode {
    pub fn new(
        id: impl Into<String>,
        title: impl Into<String>,
        abstract_text: impl Into<String>,
        publication_year: i32,
        citation_count: u64,
    ) -> Self {
        PaperNode {
            id: id.into(),
            title: title.into(),
            title_normalized: String::new(),
            abstract_text: abstract_text.into(),
            publication_year,
            citation_count,
            venue_name: None,
            pdf_url: None,
            title_embedding: None,
            abstract_embedding: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AuthorNode {
    pub id: String,
    pub display_name: String,
    /// Number of AUTHORED edges leaving this author; finalized at freeze.
    pub works_count: u64,
    pub cited_by_count: u64,
    pub h_index: u32,
}

impl AuthorNode {
    pub fn new(id: impl Into<String>, display_name: impl Into<String>) -> Self {
        AuthorNode {
            id: id.into(),
            display_name: display_name.into(),
            works_count: 0,
            cited_by_count: 0,
            h_index: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KeywordNode {
    pub id: String,
    pub text: String,
    /// Derived index form of `text`; the store recomputes this on insert.
    pub text_normalized: String,
    /// Number of HAS_KEYWORD edges touching this keyword; finalized at freeze.
    pub frequency: u64,
    pub text_embedding: Option<EmbeddingVector>,
}

impl KeywordNode {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        KeywordNode {
            id: id.into(),
            text: text.into(),
            text_normalized: String::new(),
            frequency: 0,
            text_embedding: None,
        }
    }
}

/// Venue and taxonomy entities (Institution, Source, Topic, Subfield, Field,
/// Domain). They participate in the schema but carry no typed attributes
/// beyond a display name; anything else rides along in `attributes`.
#[derive(Debug, Clone)]
pub struct MiscNode {
    pub id: String,
    pub kind: NodeKind,
    pub display_name: String,
    pub attributes: BTreeMap<String, serde_json::Value>,
}

impl MiscNode {
    pub fn new(id: impl Into<String>, kind: NodeKind, display_name: impl Into<String>) -> Self {
        MiscNode {
            id: id.into(),
            kind,
            display_name: display_name.into(),
            attributes: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Node {
    Paper(PaperNode),
    Author(AuthorNode),
    Keyword(KeywordNode),
    Misc(MiscNode),
}

impl Node {
    pub fn id(&self) -> &str {
        match self {
            Node::Paper(p) => &p.id,
            Node::Author(a) => &a.id,
            Node::Keyword(k) => &k.id,
            Node::Misc(m) => &m.id,
        }
    }

    pub fn kind(&self) -> NodeKind {
        match self {
            Node::Paper(_) => NodeKind::Paper,
            Node::Author(_) => NodeKind::Author,
            Node::Keyword(_) => NodeKind::Keyword,
            Node::Misc(m) => m.kind,
        }
    }

    pub fn as_paper(&self) -> Option<&PaperNode> {
        match self {
            Node::Paper(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_author(&self) -> Option<&AuthorNode> {
        match self {
            Node::Author(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_keyword(&self) -> Option<&KeywordNode> {
        match self {
            Node::Keyword(k) => Some(k),
            _ => None,
        }
    }

    /// Human-readable label for explanations and tables.
    pub fn label(&self) -> &str {
        match self {
            Node::Paper(p) => &p.title,
            Node::Author(a) => &a.display_name,
            Node::Keyword(k) => &k.text,
            Node::Misc(m) => &m.display_name,
        }
    }
}
