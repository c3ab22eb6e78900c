//! Validated bipartite density matrices and their JSON file format.

use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, partial_trace, purity, ComplexMatrix, Subsystem, C64};

/// A density matrix on C^M ⊗ C^N that passed validation: Hermitian, unit
/// trace and positive semidefinite, all up to the tolerances in [`TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    rho: ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteState {
    pub fn new(rho: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch("subsystem dimensions must be positive".into()));
        }
        if !rho.is_square() || rho.rows() != dim_a * dim_b {
            return Err(Error::DimensionMismatch(format!(
                "ρ is {}×{}, expected {2}×{2} for dims ({dim_a},{dim_b})",
                rho.rows(),
                rho.cols(),
                dim_a * dim_b
            )));
        }
        let herm = rho.hermitian_deviation();
        if herm > TOL.state_hermitian {
            return Err(Error::InvalidState {
                invariant: "hermitian",
                detail: format!("max |ρ_ij − conj(ρ_ji)| = {herm:.3e}"),
            });
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TOL.state_trace || tr.im.abs() > TOL.state_trace {
            return Err(Error::InvalidState {
                invariant: "unit trace",
                detail: format!("Tr ρ = {:.12}{:+.3e}i", tr.re, tr.im),
            });
        }
        let min_eig = hermitian_eig(&rho)?.min_eigenvalue();
        if min_eig < TOL.psd_floor {
            return Err(Error::InvalidState {
                invariant: "positive semidefinite",
                detail: format!("minimum eigenvalue {min_eig:.3e}"),
            });
        }
        Ok(Self { rho, dim_a, dim_b })
    }

    /// Pure state |ψ⟩⟨ψ| from a unit vector of length M·N.
    pub fn pure(psi: &[C64], dim_a: usize, dim_b: usize) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOL.normalization {
            return Err(Error::Normalization(format!("‖ψ‖² = {norm}")));
        }
        Self::new(ComplexMatrix::projector(psi), dim_a, dim_b)
    }

    pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> Self {
        let d = dim_a * dim_b;
        Self {
            rho: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
            dim_a,
            dim_b,
        }
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn total_dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn reduced_a(&self) -> ComplexMatrix {
        partial_trace(&self.rho, self.dim_a, self.dim_b, Subsystem::A).expect("validated dims")
    }

    pub fn reduced_b(&self) -> ComplexMatrix {
        partial_trace(&self.rho, self.dim_a, self.dim_b, Subsystem::B).expect("validated dims")
    }

    pub fn purity(&self) -> f64 {
        purity(&self.rho)
    }

    pub fn partial_transpose(&self) -> ComplexMatrix {
        self.rho.partial_transpose_b(self.dim_a, self.dim_b).expect("validated dims")
    }

    /// Smallest eigenvalue of the partial transpose; ≥ 0 (up to roundoff) for PPT states.
    pub fn min_partial_transpose_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eig(&self.partial_transpose())?.min_eigenvalue())
    }

    /// (U_A ⊗ U_B) ρ (U_A ⊗ U_B)†
    pub fn apply_local(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<Self> {
        let u = crate::linalg::tensor_product(ua, ub);
        if u.rows() != self.total_dim() {
            return Err(Error::DimensionMismatch("local unitaries do not match state dims".into()));
        }
        let rho = u.matmul(&self.rho)?.matmul(&u.adjoint())?;
        Self::new(rho, self.dim_a, self.dim_b)
    }

    /// v·ρ + (1−v)·I/(MN)
    pub fn with_white_noise(&self, visibility: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&visibility) {
            return Err(Error::OutOfRange(format!("visibility {visibility} not in [0,1]")));
        }
        let mixed = Self::maximally_mixed(self.dim_a, self.dim_b);
        let rho = self.rho.scale_real(visibility) + mixed.rho.scale_real(1.0 - visibility);
        Self::new(rho, self.dim_a, self.dim_b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StateFile::from(self)).expect("state serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        file.into_state()
    }
}

/// On-disk layout: `{"m": M, "n": N, "rho": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StateFile {
    pub m: usize,
    pub n: usize,
    pub rho: Vec<[f64; 2]>,
}

impl From<&BipartiteState> for StateFile {
    fn from(s: &BipartiteState) -> Self {
        Self {
            m: s.dim_a,
            n: s.dim_b,
            rho: s.rho.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl StateFile {
    pub fn into_state(self) -> Result<BipartiteState> {
        let d = self.m * self.n;
        if self.m == 0 || self.n == 0 {
            return Err(Error::Format("m and n must be positive".into()));
        }
        if self.rho.len() != d * d {
            return Err(Error::Format(format!(
                "rho has {} entries, expected {} for m={}, n={}",
                self.rho.len(),
                d * d,
                self.m,
                self.n
            )));
        }
        let data = self.rho.iter().map(|&[re, im]| C64::new(re, im)).collect();
        let rho = ComplexMatrix::from_vec(d, d, data)?;
        BipartiteState::new(rho, self.m, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_psd() {
        let rho = ComplexMatrix::diag_real(&[1.2, -0.2, 0.0, 0.0]);
        let err = BipartiteState::new(rho, 2, 2).unwrap_err();
        assert!(matches!(err, Error::InvalidState { invariant: "positive semidefinite", .. }));
    }

    #[test]
    fn rejects_bad_trace_and_hermiticity() {
        let rho = ComplexMatrix::diag_real(&[0.5, 0.5, 0.5, 0.0]);
        assert!(matches!(
            BipartiteState::new(rho, 2, 2),
            Err(Error::InvalidState { invariant: "unit trace", .. })
        ));
        let mut rho = ComplexMatrix::diag_real(&[0.25; 4]);
        rho[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(
            BipartiteState::new(rho, 2, 2),
            Err(Error::InvalidState { invariant: "hermitian", .. })
        ));
    }

    #[test]
    fn rejects_dimension_mismatch() {
        assert!(matches!(
            BipartiteState::new(ComplexMatrix::identity(4).scale_real(0.25), 2, 3),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let v = [C64::new(0.6, 0.0), C64::new(0.0, 0.1), C64::new(0.3, -0.2), C64::new(0.0, 0.0)];
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<C64> = v.iter().map(|z| z / norm).collect();
        let s = BipartiteState::pure(&v, 2, 2).unwrap();
        let text = s.to_json();
        assert!(text.starts_with("{\"m\":2,\"n\":2,\"rho\":[["));
        let back = BipartiteState::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_rejects_wrong_length() {
        let err = BipartiteState::from_json(r#"{"m":2,"n":2,"rho":[[1,0]]}"#).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
        assert!(matches!(BipartiteState::from_json("not json"), Err(Error::Format(_))));
    }
}
