pub mod digraph;
pub mod engine;
pub mod error;
pub mod harness;
pub mod random_models;
pub mod rng;

pub use digraph::{Digraph, Sign, SignPattern, VertexId, VertexSet, Walk};
pub use error::{Error, Result};
pub mod absorber;
pub mod connector;
pub mod matching;
pub mod oracle;
pub mod partition;
pub mod pseudorandom;
pub mod scale;
