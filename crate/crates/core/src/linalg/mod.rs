//! Dense complex linear algebra for total dimensions up to a few hundred.

pub mod eig;
pub mod matrix;

pub use eig::{degenerate_clusters, hermitian_eig, mat_exp_i_hermitian, HermitianEigenSystem};
pub use matrix::{
    commutator_norm, conjugate_local_b, frobenius_norm, partial_trace, paulis, purity,
    tensor_product, ComplexMatrix, Subsystem, C64,
};
