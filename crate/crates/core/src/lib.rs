//! Effective quasirandomness for graphons and propagation of Ramsey bounds.

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod io;
pub mod kernels;
pub mod patterns;
pub mod quasirandomness;
pub mod scalar;
pub mod suites;

pub use error::{Error, Result};
pub use graph::SimpleGraph;
pub use kernels::{DensityOptions, ExactKernel, FiniteSpace, FloatKernel, StepKernel};
pub use patterns::{IsoClass, PatternGraph, SubgraphCensus};
pub use scalar::{Mode, Scalar, Q};
