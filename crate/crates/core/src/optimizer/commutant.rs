//! Parameterization of the unitaries commuting with ρ_B: block unitaries in
//! the eigenbasis of ρ_B, one block per degenerate eigenvalue cluster.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::fu::CyclicUnitary;
use crate::linalg::{degenerate_clusters, hermitian_eig, mat_exp_i_hermitian, ComplexMatrix, C64};

#[derive(Debug, Clone)]
pub struct CommutantStructure {
    /// Columns are eigenvectors of ρ_B, ascending eigenvalue.
    pub eigenbasis: ComplexMatrix,
    pub eigenvalues: Vec<f64>,
    /// Consecutive index ranges into the eigenbasis columns.
    pub clusters: Vec<Range<usize>>,
    pub rho_b: ComplexMatrix,
}

impl CommutantStructure {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Σ_c size_c²
    pub fn param_count(&self) -> usize {
        self.clusters.iter().map(|c| c.len() * c.len()).sum()
    }

    /// blockdiag(exp(iH_c)) in the eigenbasis. Each cluster's slice holds the
    /// real diagonal of H_c first, then (re, im) of H_c[i][j] for i < j.
    pub fn block_unitary(&self, params: &[f64]) -> Result<ComplexMatrix> {
        if params.len() != self.param_count() {
            return Err(Error::ParameterCount { expected: self.param_count(), got: params.len() });
        }
        let mut u = ComplexMatrix::zeros(self.dim(), self.dim());
        let mut offset = 0;
        for c in &self.clusters {
            let k = c.len();
            let slice = &params[offset..offset + k * k];
            offset += k * k;
            if k == 1 {
                u[(c.start, c.start)] = C64::from_polar(1.0, slice[0]);
                continue;
            }
            let mut h = ComplexMatrix::zeros(k, k);
            for i in 0..k {
                h[(i, i)] = C64::new(slice[i], 0.0);
            }
            let mut p = k;
            for i in 0..k {
                for j in i + 1..k {
                    let z = C64::new(slice[p], slice[p + 1]);
                    h[(i, j)] = z;
                    h[(j, i)] = z.conj();
                    p += 2;
                }
            }
            let block = mat_exp_i_hermitian(&h)?;
            for i in 0..k {
                for j in 0..k {
                    u[(c.start + i, c.start + j)] = block[(i, j)];
                }
            }
        }
        Ok(u)
    }

    /// V · U_block · V†
    pub fn to_computational(&self, block: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.eigenbasis;
        v.matmul(block).and_then(|x| x.matmul(&v.adjoint())).expect("square, same size")
    }
}

pub fn commutant_structure(rho_b: &ComplexMatrix, degeneracy_tol: f64) -> Result<CommutantStructure> {
    if !(degeneracy_tol > 0.0) {
        return Err(Error::OutOfRange(format!("degeneracy_tol = {degeneracy_tol} must be positive")));
    }
    let eig = hermitian_eig(rho_b)?;
    let clusters = degenerate_clusters(&eig.eigenvalues, degeneracy_tol);
    Ok(CommutantStructure {
        eigenbasis: eig.eigenvectors,
        eigenvalues: eig.eigenvalues,
        clusters,
        rho_b: rho_b.clone(),
    })
}

pub fn cyclic_unitary_from_params(structure: &CommutantStructure, params: &[f64]) -> Result<CyclicUnitary> {
    let u = structure.to_computational(&structure.block_unitary(params)?);
    CyclicUnitary::new(u, &structure.rho_b)
}
