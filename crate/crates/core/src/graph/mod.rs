//! Typed in-memory property graph: nine node kinds, twelve relation kinds,
//! exact-match indexes over normalized titles and keyword texts, brute-force
//! vector search over stored embeddings, and capped deterministic neighbor
//! listing. Edges are stored once in their schema direction; traversal is
//! undirected.

mod edge;
mod node;
mod store;

pub use edge::{edge_static_weight, Edge, EdgeKind};
pub use node::{AuthorNode, KeywordNode, MiscNode, Node, NodeKind, PaperNode};
pub use store::{EmbeddingField, PropertyGraph, VectorHit};
