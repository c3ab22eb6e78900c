//! The Fu distance d(ρ, U) = (1/√2)‖ρ − (I⊗U)ρ(I⊗U)†‖_F, its closed-form
//! maxima over cyclic unitaries for the families that admit one, and the
//! general upper bounds.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::fano::FanoForm;
use crate::linalg::{commutator_norm, conjugate_local_b, frobenius_norm, paulis, ComplexMatrix, C64};
use crate::state::BipartiteState;
use crate::zoo;

/// A unitary on subsystem B together with ‖[ρ_B, U]‖_F against the ρ_B it
/// was built for.
#[derive(Debug, Clone)]
pub struct CyclicUnitary {
    pub u: ComplexMatrix,
    pub cyclicity_residual: f64,
}

impl CyclicUnitary {
    pub fn new(u: ComplexMatrix, rho_b: &ComplexMatrix) -> Result<Self> {
        let defect = u.unitarity_defect();
        if defect > TOL.unitary {
            return Err(Error::NotUnitary { deviation: defect });
        }
        let cyclicity_residual = commutator_norm(rho_b, &u)?;
        Ok(Self { u, cyclicity_residual })
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclicity_residual <= TOL.cyclic
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.u.unitarity_defect()
    }

    /// B U B† with B unitary: re-expresses a witness given in some basis
    /// (e.g. a Schmidt basis) in the computational basis.
    pub fn rebased(&self, basis: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<Self> {
        let u = basis.matmul(&self.u)?.matmul(&basis.adjoint())?;
        Self::new(u, rho_b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedFormSource {
    Pseudopure,
    Werner,
    TwoQubitDiagT,
    HorodeckiA,
    None,
}

impl ClosedFormSource {
    pub fn label(self) -> &'static str {
        match self {
            Self::Pseudopure => "pseudopure",
            Self::Werner => "werner",
            Self::TwoQubitDiagT => "two-qubit-diag-T",
            Self::HorodeckiA => "horodecki-a",
            Self::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest d_max any classically correlated state of these dims can reach.
    pub classical_cc: f64,
    /// √(2[Tr ρ² − 1/(MN)]), valid for every state.
    pub purity: f64,
}

impl Bounds {
    pub fn for_state(state: &BipartiteState) -> Self {
        Self {
            classical_cc: bound_classical(state.dim_a(), state.dim_b()),
            purity: bound_purity(state),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FuReport {
    pub d_value: f64,
    pub witness: Option<CyclicUnitary>,
    pub closed_form_source: ClosedFormSource,
    pub bounds: Bounds,
}

/// Closed-form witnesses on subsystems larger than this are not built; a
/// dense D×D unitary for D = 10⁴ would not fit in memory.
pub const MAX_WITNESS_DIM: usize = 256;

fn clamp_radicand(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

fn check_local(state: &BipartiteState, u: &ComplexMatrix) -> Result<()> {
    if u.rows() != state.dim_b() || u.cols() != state.dim_b() {
        return Err(Error::DimensionMismatch(format!(
            "U is {}×{}, subsystem B has dimension {}",
            u.rows(),
            u.cols(),
            state.dim_b()
        )));
    }
    let defect = u.unitarity_defect();
    if defect > TOL.unitary {
        return Err(Error::NotUnitary { deviation: defect });
    }
    Ok(())
}

/// √(Tr ρ² − Tr ρρ_f), evaluated as (1/√2)‖ρ − ρ_f‖_F, which keeps full
/// relative precision when d is tiny. Defined for any unitary U on B, cyclic
/// or not.
pub fn fu_distance(state: &BipartiteState, u: &ComplexMatrix) -> Result<f64> {
    check_local(state, u)?;
    Ok(fu_distance_unchecked(state, u))
}

/// [`fu_distance`] without the unitarity and shape checks; the optimizer
/// calls this in its inner loop on unitaries it built itself.
pub(crate) fn fu_distance_unchecked(state: &BipartiteState, u: &ComplexMatrix) -> f64 {
    let rho = state.rho();
    let rho_f = conjugate_local_b(rho, u, state.dim_a(), state.dim_b()).expect("checked dims");
    FRAC_1_SQRT_2 * frobenius_norm(&(rho - &rho_f))
}

/// (1/√2)‖ρ − ρ_f‖_F, the defining expression.
pub fn fu_distance_by_definition(state: &BipartiteState, u: &ComplexMatrix) -> Result<f64> {
    check_local(state, u)?;
    let rho_f = conjugate_local_b(state.rho(), u, state.dim_a(), state.dim_b())?;
    Ok(FRAC_1_SQRT_2 * frobenius_norm(&(state.rho() - &rho_f)))
}

/// (2/MN)√(Σ T_ij² − Σ T_ij T^f_ij).
///
/// Only the correlation matrices enter, so the two forms must share their
/// Bloch vectors, which holds whenever ρ_f comes from a cyclic unitary.
pub fn fu_distance_via_correlation(fano: &FanoForm, fano_f: &FanoForm) -> Result<f64> {
    if fano.dim_a != fano_f.dim_a
        || fano.dim_b != fano_f.dim_b
        || fano.t.len() != fano_f.t.len()
        || fano.t.iter().zip(&fano_f.t).any(|(a, b)| a.len() != b.len())
    {
        return Err(Error::DimensionMismatch("Fano forms of different shape".into()));
    }
    let drift = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let moved = drift(&fano.r_a, &fano_f.r_a).max(drift(&fano.r_b, &fano_f.r_b));
    if moved > 1e-8 {
        return Err(Error::OutOfRange(format!(
            "Bloch vectors differ by {moved:.3e}; the correlation form needs a cyclic image"
        )));
    }
    let cross: f64 = fano
        .t
        .iter()
        .flatten()
        .zip(fano_f.t.iter().flatten())
        .map(|(a, b)| a * b)
        .sum();
    let mn = (fano.dim_a * fano.dim_b) as f64;
    Ok(2.0 / mn * clamp_radicand(fano.t_norm_sqr() - cross))
}

/// ‖[ρ_B, U]‖_F
pub fn cyclicity_residual(state: &BipartiteState, u: &ComplexMatrix) -> Result<f64> {
    commutator_norm(&state.reduced_b(), u)
}

/// √(2(M−1)(N−1)/(MN)), capped at 1.
pub fn bound_classical(m: usize, n: usize) -> f64 {
    if m == 0 || n == 0 {
        return 0.0;
    }
    let (mf, nf) = (m as f64, n as f64);
    (2.0 * (mf - 1.0) * (nf - 1.0) / (mf * nf)).sqrt().min(1.0)
}

pub fn bound_purity_from(purity: f64, m: usize, n: usize) -> f64 {
    clamp_radicand(2.0 * (purity - 1.0 / (m * n) as f64))
}

/// √(2[Tr ρ² − 1/(MN)]), evaluated as √2‖ρ − I/(MN)‖_F so that the
/// maximally mixed state gives exactly 0.
pub fn bound_purity(state: &BipartiteState) -> f64 {
    let d = state.total_dim();
    let centered = state.rho().clone() - ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    2f64.sqrt() * frobenius_norm(&centered)
}

/// √(2n/(D(D−n))) for the normalized complement of an n-element UPB in total
/// dimension D.
pub fn bound_upb(total_dim: usize, n_upb: usize) -> Result<f64> {
    if n_upb < 1 || n_upb >= total_dim {
        return Err(Error::OutOfRange(format!(
            "UPB size {n_upb} must lie in [1, {total_dim})"
        )));
    }
    let (d, n) = (total_dim as f64, n_upb as f64);
    Ok((2.0 * n / (d * (d - n))).sqrt())
}

// --- pseudopure -----------------------------------------------------------

/// Phases θ_k minimizing |Σ w_k e^{iθ_k}| for weights w_k = a_k².
///
/// If the largest weight is at most half the total, three sides are formed:
/// the largest weight alone, and the rest split greedily (descending, each
/// onto the lighter side). Greedy splitting keeps the two sides within the
/// largest remaining weight of each other, so the three lengths close a
/// triangle; every weight on a side shares that side's direction.
/// Otherwise the largest weight gets phase 0 and all others phase π.
pub fn polygon_phases(weights: &[f64]) -> Vec<f64> {
    let n = weights.len();
    if n == 0 {
        return Vec::new();
    }
    let total: f64 = weights.iter().sum();
    let m = argmax(weights);
    let wm = weights[m];
    if wm > 0.5 * total {
        return (0..n).map(|k| if k == m { 0.0 } else { PI }).collect();
    }

    let mut rest: Vec<usize> = (0..n).filter(|&k| k != m).collect();
    rest.sort_by(|&i, &j| weights[j].total_cmp(&weights[i]).then(i.cmp(&j)));
    let mut side = vec![0usize; n];
    let (mut l2, mut l3) = (0.0, 0.0);
    for &k in &rest {
        if l2 <= l3 {
            side[k] = 1;
            l2 += weights[k];
        } else {
            side[k] = 2;
            l3 += weights[k];
        }
    }
    let l1 = wm;
    // interior angle between sides 1 and 2, opposite side 3
    let cos_g = if l1 > 0.0 && l2 > 0.0 {
        ((l1 * l1 + l2 * l2 - l3 * l3) / (2.0 * l1 * l2)).clamp(-1.0, 1.0)
    } else {
        1.0
    };
    let heading2 = PI - cos_g.acos();
    let v3 = -(C64::new(l1, 0.0) + C64::from_polar(l2, heading2));
    let heading3 = if v3.norm() > 0.0 { v3.arg() } else { 0.0 };
    let mut phases: Vec<f64> = side
        .iter()
        .map(|&s| match s {
            0 => 0.0,
            1 => heading2,
            _ => heading3,
        })
        .collect();
    phases[m] = 0.0;

    if phase_sum_modulus(weights, &phases) > 1e-9 {
        phases = numerical_phases(weights);
    }
    phases
}

fn argmax(x: &[f64]) -> usize {
    let mut best = 0;
    for (k, v) in x.iter().enumerate() {
        if *v > x[best] {
            best = k;
        }
    }
    best
}

pub fn phase_sum_modulus(weights: &[f64], phases: &[f64]) -> f64 {
    weights
        .iter()
        .zip(phases)
        .map(|(&w, &t)| C64::from_polar(w, t))
        .sum::<C64>()
        .norm()
}

/// Fallback: 100 seeded Nelder–Mead restarts on the phase vector.
fn numerical_phases(weights: &[f64]) -> Vec<f64> {
    use crate::optimizer::nelder_mead::{NelderMead, NelderMeadOptions};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let f = |x: &[f64]| -phase_sum_modulus(weights, x);
    let mut best = (f64::NEG_INFINITY, vec![0.0; weights.len()]);
    for _ in 0..100 {
        let start: Vec<f64> = (0..weights.len()).map(|_| rng.gen_range(-PI..PI)).collect();
        let mut nm = NelderMead::new(&f, start, NelderMeadOptions::default());
        nm.run(&f, 4000);
        let (x, v) = nm.best();
        if v > best.0 {
            best = (v, x.to_vec());
        }
        if -best.0 <= 1e-12 {
            break;
        }
    }
    best.1
}

/// d_max of ε|ψ⟩⟨ψ| + (1−ε)I/(MN) from the Schmidt coefficients of ψ:
/// ε when a_m² ≤ 1/2, else 2ε a_m √(1 − a_m²).
///
/// The witness is diagonal in the Schmidt basis of B (padded with zero
/// coefficients to dimension N); its residual is measured against ρ_B in that
/// basis.
pub fn dmax_pseudopure(coeffs: &[f64], epsilon: f64, m: usize, n: usize) -> Result<FuReport> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::OutOfRange(format!("ε = {epsilon} not in (0,1]")));
    }
    zoo::schmidt_vector(coeffs, m, n)?;
    let mut weights: Vec<f64> = coeffs.iter().map(|a| a * a).collect();
    weights.resize(n, 0.0);
    let am2 = weights.iter().cloned().fold(0.0, f64::max);
    let d_value = if am2 <= 0.5 {
        epsilon
    } else {
        2.0 * epsilon * am2.sqrt() * clamp_radicand(1.0 - am2)
    };
    let witness = if n <= MAX_WITNESS_DIM {
        let phases = polygon_phases(&weights);
        let u = ComplexMatrix::diag(&phases.iter().map(|&t| C64::from_polar(1.0, t)).collect::<Vec<_>>());
        let rho_b = ComplexMatrix::diag_real(
            &weights
                .iter()
                .map(|w| epsilon * w + (1.0 - epsilon) / n as f64)
                .collect::<Vec<_>>(),
        );
        Some(CyclicUnitary::new(u, &rho_b)?)
    } else {
        None
    };
    let d = (m * n) as f64;
    let purity = epsilon * epsilon + (1.0 - epsilon * epsilon) / d;
    Ok(FuReport {
        d_value,
        witness,
        closed_form_source: ClosedFormSource::Pseudopure,
        bounds: Bounds {
            classical_cc: bound_classical(m, n),
            purity: bound_purity_from(purity, m, n),
        },
    })
}

/// The a_m² interval ½(1 ∓ √(1 − 1/(2ε²))) outside which d_max cannot exceed
/// 1/√2; `None` when ε < 1/√2.
pub fn pseudopure_detection_window(epsilon: f64) -> Result<Option<(f64, f64)>> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::OutOfRange(format!("ε = {epsilon} not in (0,1]")));
    }
    let disc = 1.0 - 1.0 / (2.0 * epsilon * epsilon);
    if disc < -1e-15 {
        return Ok(None);
    }
    let s = disc.max(0.0).sqrt();
    Ok(Some((0.5 * (1.0 - s), 0.5 * (1.0 + s))))
}

// --- Werner ---------------------------------------------------------------

/// diag(1, ω, …, ω^{D−1}) with ω = e^{2πi/D}.
pub fn clock_unitary(d: usize) -> ComplexMatrix {
    let entries: Vec<C64> = (0..d)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64))
        .collect();
    ComplexMatrix::diag(&entries)
}

/// |2pD − D − 1|/(D² − 1), attained by any traceless unitary.
pub fn dmax_werner(d: usize, p: f64) -> Result<FuReport> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("Werner dimension {d} < 2")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("Werner p = {p} not in [0,1]")));
    }
    let df = d as f64;
    let d_value = (2.0 * p * df - df - 1.0).abs() / (df * df - 1.0);
    let witness = if d <= MAX_WITNESS_DIM {
        let rho_b = ComplexMatrix::identity(d).scale_real(1.0 / df);
        Some(CyclicUnitary::new(clock_unitary(d), &rho_b)?)
    } else {
        None
    };
    Ok(FuReport {
        d_value,
        witness,
        closed_form_source: ClosedFormSource::Werner,
        bounds: Bounds {
            classical_cc: bound_classical(d, d),
            purity: bound_purity_from(zoo::werner_purity(d, p), d, d),
        },
    })
}

// --- two qubits -----------------------------------------------------------

/// Rodrigues: I + sinθ A + (1 − cosθ) A², A the cross-product matrix of n.
pub fn rotation_from_axis_angle(n: [f64; 3], theta: f64) -> Result<[[f64; 3]; 3]> {
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Normalization(format!("rotation axis has norm {norm}")));
    }
    let a = [[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]];
    let mut a2 = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            a2[i][j] = (0..3).map(|k| a[i][k] * a[k][j]).sum();
        }
    }
    let (s, c) = theta.sin_cos();
    let mut o = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let id = if i == j { 1.0 } else { 0.0 };
            o[i][j] = id + s * a[i][j] + (1.0 - c) * a2[i][j];
        }
    }
    Ok(o)
}

/// exp(−iθ/2 n·σ): the qubit unitary whose adjoint action rotates Bloch
/// vectors by θ about n.
pub fn rotation_unitary(n: [f64; 3], theta: f64) -> ComplexMatrix {
    let p = paulis();
    let (s, c) = (0.5 * theta).sin_cos();
    let mut u = ComplexMatrix::identity(2).scale_real(c);
    for k in 0..3 {
        u = u + p[k].scale(C64::new(0.0, -s * n[k]));
    }
    u
}

fn check_diag_two_qubit(fano: &FanoForm) -> Result<[f64; 3]> {
    if fano.dim_a != 2 || fano.dim_b != 2 || fano.t.len() != 3 || fano.t.iter().any(|r| r.len() != 3) {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit Fano form expected, got dims ({}, {})",
            fano.dim_a, fano.dim_b
        )));
    }
    let off = fano.max_off_diagonal();
    if off >= 1e-10 {
        return Err(Error::NotDiagonal(off));
    }
    Ok([fano.t[0][0], fano.t[1][1], fano.t[2][2]])
}

/// Rotation axis of the optimal cyclic unitary: r_B/‖r_B‖, or, when ρ_B = I/2,
/// the axis of the smallest |λ_k| (lowest index among ties within 1e-10).
pub fn optimal_axis(fano: &FanoForm) -> Result<[f64; 3]> {
    let lambda = check_diag_two_qubit(fano)?;
    let rb = fano.r_b_norm();
    if rb > 1e-10 {
        return Ok([fano.r_b[0] / rb, fano.r_b[1] / rb, fano.r_b[2] / rb]);
    }
    let mut k = 0;
    for i in 1..3 {
        if lambda[i].abs() < lambda[k].abs() - 1e-10 {
            k = i;
        }
    }
    let mut n = [0.0; 3];
    n[k] = 1.0;
    Ok(n)
}

/// ½√(Σ λ_i² (1 − cosθ)(1 − n_i²)) for a rotation by θ about n.
pub fn fu_two_qubit_general_angle(fano: &FanoForm, n: [f64; 3], theta: f64) -> Result<f64> {
    let lambda = check_diag_two_qubit(fano)?;
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Normalization(format!("rotation axis has norm {norm}")));
    }
    let s: f64 = (0..3).map(|i| lambda[i] * lambda[i] * (1.0 - theta.cos()) * (1.0 - n[i] * n[i])).sum();
    Ok(0.5 * clamp_radicand(s))
}

/// (1/√2)√(Σ λ_i² (1 − n_i²)) for two qubits with diagonal T; witness is the
/// π rotation about the optimal axis.
pub fn dmax_two_qubit_diag_t(fano: &FanoForm) -> Result<FuReport> {
    let lambda = check_diag_two_qubit(fano)?;
    let n = optimal_axis(fano)?;
    let s: f64 = (0..3).map(|i| lambda[i] * lambda[i] * (1.0 - n[i] * n[i])).sum();
    let d_value = FRAC_1_SQRT_2 * clamp_radicand(s);

    let p = paulis();
    let mut rho_b = ComplexMatrix::identity(2);
    for k in 0..3 {
        rho_b = rho_b + p[k].scale_real(fano.r_b[k]);
    }
    let rho_b = rho_b.scale_real(0.5);
    let witness = CyclicUnitary::new(rotation_unitary(n, PI), &rho_b)?;
    Ok(FuReport {
        d_value,
        witness: Some(witness),
        closed_form_source: ClosedFormSource::TwoQubitDiagT,
        bounds: Bounds {
            classical_cc: bound_classical(2, 2),
            purity: bound_purity_from(fano.purity(), 2, 2),
        },
    })
}

// --- bound entangled qutrits ----------------------------------------------

/// 2√2 a/(8a + 1), attained by diag(1, −1, 1).
pub fn dmax_horodecki_a(a: f64) -> Result<FuReport> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::OutOfRange(format!("a = {a} not in (0,1)")));
    }
    let state = zoo::horodecki_rho_a(a)?;
    let u = ComplexMatrix::diag_real(&[1.0, -1.0, 1.0]);
    let witness = CyclicUnitary::new(u, &state.reduced_b())?;
    Ok(FuReport {
        d_value: 2.0 * 2f64.sqrt() * a / (8.0 * a + 1.0),
        witness: Some(witness),
        closed_form_source: ClosedFormSource::HorodeckiA,
        bounds: Bounds::for_state(&state),
    })
}

/// |0⟩→|1⟩→|2⟩→|0⟩
pub fn cyclic_shift(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| {
        if i == (j + 1) % d {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// d(ρ_α, U) = (1/7)√(α² − 5α + 9) for a zero-diagonal U; returns the value
/// and the cyclic shift used as U.
pub fn fu_horodecki_alpha(alpha: f64) -> Result<(f64, CyclicUnitary)> {
    if !(2.0..=5.0).contains(&alpha) {
        return Err(Error::OutOfRange(format!("α = {alpha} not in [2,5]")));
    }
    let rho_b = ComplexMatrix::identity(3).scale_real(1.0 / 3.0);
    let witness = CyclicUnitary::new(cyclic_shift(3), &rho_b)?;
    Ok((clamp_radicand(alpha * alpha - 5.0 * alpha + 9.0) / 7.0, witness))
}

/// √(2[Tr ρ_α² − 1/9]) in closed form: 2√(3α² − 15α + 31)/21.
pub fn bound_purity_horodecki_alpha(alpha: f64) -> f64 {
    2.0 * clamp_radicand(3.0 * alpha * alpha - 15.0 * alpha + 31.0) / 21.0
}
