//! Retrieval engine for heterogeneous scholarly knowledge graphs.
//!
//! The crate builds an in-memory property graph of papers, authors, keywords
//! and venue/taxonomy entities, then answers free-text queries in four stages:
//!
//! 1. **Query analysis** ([`query`]) — extract weighted keywords and candidate
//!    titles from the query text and embed it.
//! 2. **Seed matching** ([`seed`]) — recall seed nodes along three paths:
//!    exact/vector keyword lookup, two-channel semantic retrieval over title
//!    and abstract embeddings, and exact/fuzzy title matching.
//! 3. **Propagation** ([`propagate`]) — expand a capped two-hop subgraph
//!    around the seeds, weight its edges by relation type, and run a random
//!    walk with restart to diffuse seed mass.
//! 4. **Ranking** ([`rank`]) — fuse pre-graph scores, walk scores and citation
//!    importance into a final ranking with per-result score breakdowns and
//!    short explanation paths.
//!
//! Everything runs offline and deterministically: the bundled embedding,
//! keyword and rerank providers are pure functions of their inputs, and every
//! pipeline stage breaks ties by node id so that identical inputs produce
//! byte-identical output.

pub mod config;
pub mod embed;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod output;
pub mod propagate;
pub mod query;
pub mod rank;
pub mod score;
pub mod search;
pub mod seed;
pub mod synth;
pub mod text;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use graph::{Edge, EdgeKind, Node, NodeKind, PropertyGraph};
pub use search::{SearchContext, SearchMode, SearchOutcome};
