//! Desk-scale laboratory for studying how A-box materialization affects
//! RDF2vec-style knowledge-graph embeddings.
//!
//! The pipeline is: parse a triple file ([`graph`]), saturate it under a
//! declared T-box ([`materialize`]), extract uniform random walks
//! ([`walk`]), train skip-gram embeddings with negative sampling
//! ([`embed`]), score them on downstream tasks ([`eval`]) and compare the
//! walk corpora of original and materialized graphs ([`analyze`]).
//! [`pipeline`] wires the stages to files.

pub mod analyze;
pub mod embed;
pub mod eval;
pub mod graph;
pub mod materialize;
pub mod pipeline;
pub mod walk;

pub use embed::{EmbeddingModel, KeyedVectors, TrainConfig};
pub use graph::{Graph, TBox};
pub use materialize::{materialize, MaterializationReport, Rule};
pub use walk::{generate_walks, WalkConfig, WalkCorpus};
