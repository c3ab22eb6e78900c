//! SU(d) generators and the Fano (Bloch vector / correlation matrix) form.
//!
//! Generators are normalized like the Pauli matrices, Tr(σ_i σ_j) = 2δ_ij,
//! and indexed 1..d²−1; the identity component is carried separately. With
//! that normalization
//!
//! ρ = (1/MN)(I⊗I + r^A·σ⊗I + I⊗r^B·σ + Σ_ij T_ij σ_i⊗σ_j),
//! r^A_i = (M/2) Tr(σ_i ρ_A),  T_ij = (MN/4) Tr(σ_i⊗σ_j ρ).

use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, tensor_product, ComplexMatrix, C64};
use crate::state::BipartiteState;

/// Symmetric generators first, then antisymmetric, then diagonal. Pairs
/// (j, k) with j < k run in lexicographic order. For d = 2 this is (σx, σy, σz).
pub fn gell_mann_generators(d: usize) -> Result<Vec<ComplexMatrix>> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("SU(d) generators need d ≥ 2, got {d}")));
    }
    let mut out = Vec::with_capacity(d * d - 1);
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|j| ((j + 1)..d).map(move |k| (j, k)))
        .collect();
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = C64::new(1.0, 0.0);
        m[(k, j)] = C64::new(1.0, 0.0);
        out.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = C64::new(0.0, -1.0);
        m[(k, j)] = C64::new(0.0, 1.0);
        out.push(m);
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = ComplexMatrix::zeros(d, d);
        for j in 0..l {
            m[(j, j)] = C64::new(norm, 0.0);
        }
        m[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        out.push(m);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FanoForm {
    pub dim_a: usize,
    pub dim_b: usize,
    /// Length M²−1.
    pub r_a: Vec<f64>,
    /// Length N²−1.
    pub r_b: Vec<f64>,
    /// (M²−1) rows of N²−1 entries.
    pub t: Vec<Vec<f64>>,
}

impl FanoForm {
    pub fn zero(dim_a: usize, dim_b: usize) -> Self {
        let ka = dim_a * dim_a - 1;
        let kb = dim_b * dim_b - 1;
        Self {
            dim_a,
            dim_b,
            r_a: vec![0.0; ka],
            r_b: vec![0.0; kb],
            t: vec![vec![0.0; kb]; ka],
        }
    }

    /// Two-qubit form with diagonal correlation matrix diag(λ).
    pub fn two_qubit_diagonal(r_a: [f64; 3], r_b: [f64; 3], lambda: [f64; 3]) -> Self {
        let mut t = vec![vec![0.0; 3]; 3];
        for i in 0..3 {
            t[i][i] = lambda[i];
        }
        Self {
            dim_a: 2,
            dim_b: 2,
            r_a: r_a.to_vec(),
            r_b: r_b.to_vec(),
            t,
        }
    }

    fn check_shape(&self) -> Result<()> {
        let ka = self.dim_a * self.dim_a - 1;
        let kb = self.dim_b * self.dim_b - 1;
        if self.dim_a < 2
            || self.dim_b < 2
            || self.r_a.len() != ka
            || self.r_b.len() != kb
            || self.t.len() != ka
            || self.t.iter().any(|row| row.len() != kb)
        {
            return Err(Error::DimensionMismatch(format!(
                "Fano form shape does not match dims ({}, {})",
                self.dim_a, self.dim_b
            )));
        }
        Ok(())
    }

    /// Σ_ij T_ij²
    pub fn t_norm_sqr(&self) -> f64 {
        self.t.iter().flatten().map(|x| x * x).sum()
    }

    pub fn r_b_norm(&self) -> f64 {
        self.r_b.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest |T_ij| with i ≠ j.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.t.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i != j {
                    worst = worst.max(x.abs());
                }
            }
        }
        worst
    }

    /// Diagonal entries of T (only meaningful for square T).
    pub fn t_diagonal(&self) -> Vec<f64> {
        self.t.iter().enumerate().filter_map(|(i, row)| row.get(i).copied()).collect()
    }

    /// Tr(ρ²) from the Fano coefficients.
    pub fn purity(&self) -> f64 {
        let (m, n) = (self.dim_a as f64, self.dim_b as f64);
        let ra: f64 = self.r_a.iter().map(|x| x * x).sum();
        let rb: f64 = self.r_b.iter().map(|x| x * x).sum();
        (m * n + 2.0 * n * ra + 2.0 * m * rb + 4.0 * self.t_norm_sqr()) / (m * n).powi(2)
    }

    /// The operator the coefficients describe; no positivity check.
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        self.check_shape()?;
        let (m, n) = (self.dim_a, self.dim_b);
        let ga = gell_mann_generators(m)?;
        let gb = gell_mann_generators(n)?;
        let ia = ComplexMatrix::identity(m);
        let ib = ComplexMatrix::identity(n);
        // Build A-side and B-side operators, then one Kronecker product per
        // A generator: Σ_j T_ij σ_j collapses the inner sum.
        let mut rho = tensor_product(&ia, &ib);
        for (i, sa) in ga.iter().enumerate() {
            let mut b_part = ComplexMatrix::zeros(n, n);
            for (j, sb) in gb.iter().enumerate() {
                let t = self.t[i][j];
                if t != 0.0 {
                    b_part = b_part + sb.scale_real(t);
                }
            }
            b_part = b_part + ib.scale_real(self.r_a[i]);
            rho = rho + tensor_product(sa, &b_part);
        }
        let mut b_only = ComplexMatrix::zeros(n, n);
        for (j, sb) in gb.iter().enumerate() {
            b_only = b_only + sb.scale_real(self.r_b[j]);
        }
        rho = rho + tensor_product(&ia, &b_only);
        Ok(rho.scale_real(1.0 / (m * n) as f64))
    }
}

pub fn fano_decompose(state: &BipartiteState) -> FanoForm {
    let (m, n) = (state.dim_a(), state.dim_b());
    if m < 2 || n < 2 {
        // no generators on a trivial factor
        return FanoForm {
            dim_a: m,
            dim_b: n,
            r_a: vec![0.0; m * m - 1],
            r_b: vec![0.0; n * n - 1],
            t: vec![vec![0.0; n * n - 1]; m * m - 1],
        };
    }
    let ga = gell_mann_generators(m).expect("m ≥ 2");
    let gb = gell_mann_generators(n).expect("n ≥ 2");
    let rho = state.rho();
    let rho_a = state.reduced_a();
    let rho_b = state.reduced_b();

    let r_a = ga
        .iter()
        .map(|s| 0.5 * m as f64 * s.trace_of_product(&rho_a).unwrap().re)
        .collect();
    let r_b = gb
        .iter()
        .map(|s| 0.5 * n as f64 * s.trace_of_product(&rho_b).unwrap().re)
        .collect();

    // X_j[a', a] = Σ_{b,b'} σ_j[b, b'] ρ[(a', b'), (a, b)], then T_ij = Tr(σ_i X_j)
    let scale = 0.25 * (m * n) as f64;
    let mut t = vec![vec![0.0; gb.len()]; ga.len()];
    for (j, sb) in gb.iter().enumerate() {
        let x = ComplexMatrix::from_fn(m, m, |a2, a| {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..n {
                for b2 in 0..n {
                    let s = sb[(b, b2)];
                    if s.norm_sqr() != 0.0 {
                        acc += s * rho[(a2 * n + b2, a * n + b)];
                    }
                }
            }
            acc
        });
        for (i, sa) in ga.iter().enumerate() {
            let v = sa.trace_of_product(&x).unwrap();
            debug_assert!(v.im.abs() < 1e-9, "T entry has imaginary part {}", v.im);
            t[i][j] = scale * v.re;
        }
    }
    FanoForm {
        dim_a: m,
        dim_b: n,
        r_a,
        r_b,
        t,
    }
}

/// Inverse of [`fano_decompose`] for two qubits; rejects coefficient triples
/// that do not describe a positive semidefinite operator.
pub fn two_qubit_from_fano(fano: &FanoForm) -> Result<BipartiteState> {
    if fano.dim_a != 2 || fano.dim_b != 2 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit Fano form expected, got dims ({}, {})",
            fano.dim_a, fano.dim_b
        )));
    }
    let rho = fano.reconstruct()?;
    let min_eig = hermitian_eig(&rho)?.min_eigenvalue();
    if min_eig < TOL.psd_floor {
        return Err(Error::InvalidState {
            invariant: "positive semidefinite",
            detail: format!("Fano coefficients give minimum eigenvalue {min_eig:.3e}"),
        });
    }
    BipartiteState::new(rho, 2, 2)
}
