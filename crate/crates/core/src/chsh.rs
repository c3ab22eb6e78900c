//! CHSH violation via the correlation matrix, and the pure-state concurrences
//! the Fu distance is compared with.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fano::FanoForm;
use crate::fu::dmax_two_qubit_diag_t;
use crate::linalg::{hermitian_eig, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshReport {
    /// τ₁ + τ₂
    pub m_value: f64,
    pub violates: bool,
    /// The two largest eigenvalues of TᵀT, descending.
    pub tau: (f64, f64),
}

/// M(ρ): sum of the two largest eigenvalues of TᵀT for two qubits.
pub fn horodecki_m(fano: &FanoForm) -> Result<ChshReport> {
    if fano.dim_a != 2 || fano.dim_b != 2 {
        return Err(Error::DimensionMismatch(format!(
            "CHSH needs two qubits, got dims ({}, {})",
            fano.dim_a, fano.dim_b
        )));
    }
    let t = &fano.t;
    let tt = ComplexMatrix::from_fn(3, 3, |i, j| {
        (0..3).map(|k| t[k][i] * t[k][j]).sum::<f64>().into()
    });
    let eig = hermitian_eig(&tt)?;
    let tau1 = eig.eigenvalues[2].max(0.0);
    let tau2 = eig.eigenvalues[1].max(0.0);
    let m_value = tau1 + tau2;
    Ok(ChshReport { m_value, violates: m_value > 1.0, tau: (tau1, tau2) })
}

fn check_pair(a0: f64, a1: f64) -> Result<()> {
    let norm = a0 * a0 + a1 * a1;
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization(format!("a₀² + a₁² = {norm}")));
    }
    Ok(())
}

fn check_coeffs(coeffs: &[f64]) -> Result<()> {
    let norm: f64 = coeffs.iter().map(|a| a * a).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization(format!("Σ a_k² = {norm}")));
    }
    if coeffs.iter().any(|&a| a < 0.0) {
        return Err(Error::OutOfRange("Schmidt coefficients must be nonnegative".into()));
    }
    Ok(())
}

/// 2√(1 + 4a₀²a₁²)
pub fn b_max_pure(a0: f64, a1: f64) -> Result<f64> {
    check_pair(a0, a1)?;
    Ok(2.0 * (1.0 + 4.0 * a0 * a0 * a1 * a1).sqrt())
}

/// 2a₀a₁
pub fn concurrence_two_qubit_pure(a0: f64, a1: f64) -> Result<f64> {
    check_pair(a0, a1)?;
    Ok(2.0 * (a0 * a1).abs())
}

/// √(2(1 − Σ a_k⁴))
pub fn concurrence_rungta(coeffs: &[f64]) -> Result<f64> {
    check_coeffs(coeffs)?;
    let s: f64 = coeffs.iter().map(|a| a.powi(4)).sum();
    Ok((2.0 * (1.0 - s)).max(0.0).sqrt())
}

/// √(2(D−1)/D), the largest value C_R takes in local dimension D.
pub fn rungta_normalization(d: usize) -> f64 {
    let d = d as f64;
    (2.0 * (d - 1.0) / d).sqrt()
}

pub fn concurrence_rungta_normalized(coeffs: &[f64], d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("local dimension {d} < 2")));
    }
    Ok(concurrence_rungta(coeffs)? / rungta_normalization(d))
}

/// 2 a_m a_{m2}: twice the product of the two largest coefficients.
pub fn concurrence_audenaert(coeffs: &[f64]) -> Result<f64> {
    if coeffs.len() < 2 {
        return Err(Error::OutOfRange("need at least two Schmidt coefficients".into()));
    }
    check_coeffs(coeffs)?;
    let mut sorted = coeffs.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(2.0 * sorted[0] * sorted[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceCondition {
    /// r_B lies along the axis (or axes) of smallest |λ|.
    MinAxisAlongBloch,
    EqualMagnitudes,
    MaximallyMixedB,
}

impl EquivalenceCondition {
    pub fn label(self) -> &'static str {
        match self {
            Self::MinAxisAlongBloch => "min-|lambda| axis along r_B",
            Self::EqualMagnitudes => "|lambda_0| = |lambda_1| = |lambda_2|",
            Self::MaximallyMixedB => "rho_B = I/2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub conditions: Vec<EquivalenceCondition>,
    pub m_value: f64,
    pub dmax: f64,
    /// (M > 1) and (d_max > 1/√2) agree.
    pub equivalent: bool,
}

impl EquivalenceReport {
    /// False only if a condition holds yet the two criteria disagree.
    pub fn consistent(&self) -> bool {
        self.conditions.is_empty() || self.equivalent
    }

    pub fn label(&self) -> String {
        if self.conditions.is_empty() {
            "no condition holds".into()
        } else {
            self.conditions.iter().map(|c| c.label()).collect::<Vec<_>>().join("; ")
        }
    }
}

/// Which of the three conditions making M > 1 ⇔ d_max > 1/√2 hold for a
/// two-qubit state with diagonal T.
pub fn equivalence_class_check(fano: &FanoForm) -> Result<EquivalenceReport> {
    let report = dmax_two_qubit_diag_t(fano)?;
    let chsh = horodecki_m(fano)?;
    let lambda = fano.t_diagonal();
    let mags: Vec<f64> = lambda.iter().map(|l| l.abs()).collect();
    let rb = fano.r_b_norm();

    let mut conditions = Vec::new();
    if rb > 1e-10 {
        let min_mag = mags.iter().cloned().fold(f64::INFINITY, f64::min);
        // component of r_B outside the min-|λ| axes
        let outside: f64 = (0..3)
            .filter(|&k| mags[k] > min_mag + 1e-9)
            .map(|k| fano.r_b[k] * fano.r_b[k])
            .sum::<f64>()
            .sqrt();
        if outside <= 1e-9 * rb.max(1.0) {
            conditions.push(EquivalenceCondition::MinAxisAlongBloch);
        }
    }
    let spread = mags.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - mags.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread <= 1e-9 {
        conditions.push(EquivalenceCondition::EqualMagnitudes);
    }
    if rb <= 1e-9 {
        conditions.push(EquivalenceCondition::MaximallyMixedB);
    }
    // under any condition 2 d_max² = M exactly; compare with a little slack
    let m_side = chsh.m_value - 1.0;
    let d_side = 2.0 * report.d_value * report.d_value - 1.0;
    let equivalent = (m_side > 0.0) == (d_side > 0.0) || (m_side.abs() <= 1e-9 && d_side.abs() <= 1e-9);
    Ok(EquivalenceReport { conditions, m_value: chsh.m_value, dmax: report.d_value, equivalent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fano::fano_decompose;
    use crate::zoo::{pseudopure, pure_from_schmidt, singlet, werner};
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    #[test]
    fn werner_form_m_is_two_p_squared() {
        for p in [0.0, 0.3, 0.6, 1.0] {
            let st = if p > 0.0 { pseudopure(&singlet(), p).unwrap() } else { crate::BipartiteState::maximally_mixed(2, 2) };
            let r = horodecki_m(&fano_decompose(&st)).unwrap();
            assert!((r.m_value - 2.0 * p * p).abs() < 1e-10);
            assert!((r.m_value - (r.tau.0 + r.tau.1)).abs() < 1e-10);
            assert!(r.tau.0 >= r.tau.1 && r.tau.1 >= 0.0);
        }
    }

    #[test]
    fn bell_and_product() {
        let phi = pure_from_schmidt(&[H, H], 2, 2).unwrap();
        let r = horodecki_m(&fano_decompose(&phi)).unwrap();
        assert!((r.m_value - 2.0).abs() < 1e-12 && r.violates);
        let prod = pure_from_schmidt(&[1.0], 2, 2).unwrap();
        let r = horodecki_m(&fano_decompose(&prod)).unwrap();
        assert!(r.m_value <= 1.0 + 1e-12 && !r.violates);
        assert!(horodecki_m(&FanoForm::zero(3, 3)).is_err());
    }

    #[test]
    fn b_max_examples() {
        assert!((b_max_pure(H, H).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(b_max_pure(1.0, 0.0).unwrap(), 2.0);
        let a0 = 0.9239f64;
        let a1 = (1.0 - a0 * a0).sqrt();
        assert!(b_max_pure(a0, a1).unwrap() > 2.0);
        assert!(2.0 * a0 * a1 <= H);
        assert!(b_max_pure(0.5, 0.5).is_err());
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence_two_qubit_pure(H, H).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(concurrence_two_qubit_pure(1.0, 0.0).unwrap(), 0.0);
        assert!((concurrence_two_qubit_pure(0.6, 0.8).unwrap() - 0.96).abs() < 1e-15);
        assert!((concurrence_rungta(&[H, H]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(concurrence_rungta(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        let n = concurrence_rungta_normalized(&[H, 0.5, 0.5], 3).unwrap();
        assert!((n - 0.9682).abs() < 5e-5, "{n}");
        let s = 1.0 / 3f64.sqrt();
        assert!((concurrence_audenaert(&[s, s, s]).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(concurrence_audenaert(&[1.0, 0.0]).unwrap(), 0.0);
        assert!((concurrence_audenaert(&[H, 0.5, 0.5]).unwrap() - H).abs() < 1e-15);
        assert!(concurrence_audenaert(&[1.0]).is_err());
    }

    #[test]
    fn equivalence_examples() {
        let w = werner(2, 0.1).unwrap();
        let r = equivalence_class_check(&fano_decompose(&w)).unwrap();
        assert!(r.conditions.contains(&EquivalenceCondition::MaximallyMixedB));
        assert!(r.equivalent && r.consistent());

        let a0 = 0.95f64;
        let a1 = (1.0 - a0 * a0).sqrt();
        let f = FanoForm::two_qubit_diagonal([0.0, 0.0, a0 * a0 - a1 * a1], [0.0, 0.0, a0 * a0 - a1 * a1], [2.0 * a0 * a1, -2.0 * a0 * a1, 1.0]);
        let r = equivalence_class_check(&f).unwrap();
        assert!(r.conditions.is_empty());
        assert!(r.m_value > 1.0 && r.dmax <= H);
        assert!(!r.equivalent && r.consistent());

        let f = FanoForm::two_qubit_diagonal([0.0; 3], [0.2, 0.0, 0.0], [0.4, 0.4, -0.4]);
        let r = equivalence_class_check(&f).unwrap();
        assert!(r.conditions.contains(&EquivalenceCondition::EqualMagnitudes));

        let mut bad = f.clone();
        bad.t[0][2] = 0.1;
        assert!(equivalence_class_check(&bad).is_err());
    }
}
