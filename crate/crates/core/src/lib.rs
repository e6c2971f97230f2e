//! Complexity profiling for knowledge-graph link-prediction datasets: the
//! cumulative spectral gradient over tail-entity classes, relation-level semantic
//! measures, and structural graph measures, plus correlation against model
//! performance tables.
//!
//! Numeric kernels are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix them to `f64`.

pub mod csg;
pub mod embeddings;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod seeding;
pub mod semantic;
pub mod stats;
pub mod structural;

pub use error::{Error, ErrorKind, Result};
pub use scalar::Scalar;

pub type Matrix = linalg::Matrix<f64>;
pub type EmbeddingTable = embeddings::EmbeddingTable<f64>;
pub type SampledClasses = csg::SampledClasses<f64>;
pub type SpectralResult = csg::SpectralResult<f64>;
