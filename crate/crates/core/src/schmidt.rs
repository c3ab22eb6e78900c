//! Schmidt decomposition through the eigensystem of ρ_A = Tr_B |ψ⟩⟨ψ|.

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, partial_trace, ComplexMatrix, Subsystem, C64};

/// Coefficients below this are dropped.
const ZERO_COEFFICIENT: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Descending, nonnegative, Σ a_k² = 1.
    pub coefficients: Vec<f64>,
    /// M×r, orthonormal columns.
    pub basis_a: ComplexMatrix,
    /// N×r, orthonormal columns.
    pub basis_b: ComplexMatrix,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Σ a_k |k⟩_A ⊗ |k⟩_B
    pub fn reconstruct(&self) -> Vec<C64> {
        let m = self.basis_a.rows();
        let n = self.basis_b.rows();
        let mut psi = vec![C64::new(0.0, 0.0); m * n];
        for (k, &a) in self.coefficients.iter().enumerate() {
            for i in 0..m {
                for j in 0..n {
                    psi[i * n + j] += a * self.basis_a[(i, k)] * self.basis_b[(j, k)];
                }
            }
        }
        psi
    }

    /// The B Schmidt vectors completed to an orthonormal basis of C^N; the
    /// first `rank()` columns are `basis_b`.
    pub fn full_basis_b(&self) -> ComplexMatrix {
        complete_orthonormal(&self.basis_b)
    }
}

/// Extends orthonormal columns to a full unitary by Gram–Schmidt against the
/// computational basis.
pub fn complete_orthonormal(cols: &ComplexMatrix) -> ComplexMatrix {
    let n = cols.rows();
    let mut vecs: Vec<Vec<C64>> = (0..cols.cols()).map(|k| cols.col_vec(k)).collect();
    for e in 0..n {
        if vecs.len() == n {
            break;
        }
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[e] = C64::new(1.0, 0.0);
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for u in &vecs {
                let ov: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= ov * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            vecs.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(n, n, |i, k| vecs[k][i])
}

pub fn schmidt_decompose(psi: &[C64], m: usize, n: usize) -> Result<SchmidtDecomposition> {
    if psi.len() != m * n {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for dims ({m},{n})",
            psi.len()
        )));
    }
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > TOL.normalization {
        return Err(Error::Normalization(format!("‖ψ‖² = {norm}")));
    }
    let rho_a = partial_trace(&ComplexMatrix::projector(psi), m, n, Subsystem::A)?;
    let eig = hermitian_eig(&rho_a)?;

    let mut coefficients = Vec::new();
    let mut a_cols = Vec::new();
    let mut b_cols = Vec::new();
    for k in (0..m).rev() {
        let ea = eig.eigenvectors.col_vec(k);
        // (⟨e_k| ⊗ I)|ψ⟩ = a_k |b_k⟩; its norm is a_k to roundoff, unlike √λ_k
        let mut b: Vec<C64> = (0..n)
            .map(|j| (0..m).map(|i| ea[i].conj() * psi[i * n + j]).sum())
            .collect();
        let a = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if a < ZERO_COEFFICIENT {
            continue;
        }
        for z in &mut b {
            *z /= a;
        }
        coefficients.push(a);
        a_cols.push(ea);
        b_cols.push(b);
    }
    // eigenvalue order can differ from norm order only by roundoff
    let mut order: Vec<usize> = (0..coefficients.len()).collect();
    order.sort_by(|&i, &j| coefficients[j].total_cmp(&coefficients[i]).then(i.cmp(&j)));
    // a roundoff eigenvalue ~1e-16 projects to a norm ~1e-8; the rank is at most min(m, n)
    order.truncate(m.min(n));
    let coefficients: Vec<f64> = order.iter().map(|&i| coefficients[i]).collect();
    let a_cols: Vec<Vec<C64>> = order.iter().map(|&i| a_cols[i].clone()).collect();
    let b_cols: Vec<Vec<C64>> = order.iter().map(|&i| b_cols[i].clone()).collect();
    let mut coefficients = coefficients;
    // renormalize away eigenvalue roundoff
    let total: f64 = coefficients.iter().map(|a| a * a).sum::<f64>().sqrt();
    for a in &mut coefficients {
        *a /= total;
    }
    let r = coefficients.len();
    Ok(SchmidtDecomposition {
        coefficients,
        basis_a: ComplexMatrix::from_fn(m, r, |i, k| a_cols[k][i]),
        basis_b: ComplexMatrix::from_fn(n, r, |j, k| b_cols[k][j]),
    })
}
