pub mod chsh;
pub mod config;
pub mod error;
pub mod fano;
pub mod fu;
pub mod linalg;
pub mod optimizer;
pub mod random;
pub mod schmidt;
pub mod state;
pub mod zoo;

pub use error::{Error, Result};
pub use fano::{fano_decompose, gell_mann_generators, two_qubit_from_fano, FanoForm};
pub use fu::{fu_distance, Bounds, ClosedFormSource, CyclicUnitary, FuReport};
pub use optimizer::{maximize_fu, OptimizationResult, OptimizerConfig};
pub use schmidt::{schmidt_decompose, SchmidtDecomposition};
pub use state::BipartiteState;
