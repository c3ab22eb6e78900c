//! Numerical tolerances shared by every module.

/// Every float comparison in the crate goes through one of these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity check on eigensolver input.
    pub hermitian: f64,
    /// Jacobi stops once the off-diagonal Frobenius mass drops below this
    /// (scaled by `max(1, ‖A‖_F)`).
    pub jacobi_off_diagonal: f64,
    pub jacobi_max_sweeps: usize,
    /// Eigenvalues closer than this are one degenerate cluster.
    pub degeneracy: f64,
    /// State validation: Hermitian and unit trace.
    pub state_hermitian: f64,
    pub state_trace: f64,
    /// Most negative eigenvalue still accepted as PSD.
    pub psd_floor: f64,
    pub unitary: f64,
    /// A unitary counts as cyclic when ‖[ρ_B, U]‖_F is at most this.
    pub cyclic: f64,
    pub normalization: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            jacobi_off_diagonal: 1e-12,
            jacobi_max_sweeps: 100,
            degeneracy: 1e-10,
            state_hermitian: 1e-10,
            state_trace: 1e-10,
            psd_floor: -1e-9,
            unitary: 1e-9,
            cyclic: 1e-8,
            normalization: 1e-10,
        }
    }
}

pub const TOL: Tolerances = Tolerances {
    hermitian: 1e-10,
    jacobi_off_diagonal: 1e-12,
    jacobi_max_sweeps: 100,
    degeneracy: 1e-10,
    state_hermitian: 1e-10,
    state_trace: 1e-10,
    psd_floor: -1e-9,
    unitary: 1e-9,
    cyclic: 1e-8,
    normalization: 1e-10,
};
