//! Constructors for the state families under study.

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::linalg::{tensor_product, ComplexMatrix, C64};
use crate::state::BipartiteState;

fn basis(n: usize, k: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[k] = C64::new(1.0, 0.0);
    v
}

fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

fn real_vec(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// |ψ⟩ = Σ_k a_k |k⟩_A ⊗ |k⟩_B in the computational bases.
pub fn schmidt_vector(coeffs: &[f64], m: usize, n: usize) -> Result<Vec<C64>> {
    if coeffs.len() > m.min(n) {
        return Err(Error::OutOfRange(format!(
            "{} Schmidt coefficients exceed min({m},{n})",
            coeffs.len()
        )));
    }
    if let Some(a) = coeffs.iter().find(|&&a| a < 0.0 || !a.is_finite()) {
        return Err(Error::OutOfRange(format!("Schmidt coefficient {a} is negative")));
    }
    let norm: f64 = coeffs.iter().map(|a| a * a).sum();
    if (norm - 1.0).abs() > TOL.normalization {
        return Err(Error::Normalization(format!("Σ a_k² = {norm}")));
    }
    let mut psi = vec![C64::new(0.0, 0.0); m * n];
    for (k, &a) in coeffs.iter().enumerate() {
        psi[k * n + k] = C64::new(a, 0.0);
    }
    Ok(psi)
}

pub fn pure_from_schmidt(coeffs: &[f64], m: usize, n: usize) -> Result<BipartiteState> {
    let psi = schmidt_vector(coeffs, m, n)?;
    BipartiteState::new(ComplexMatrix::projector(&psi), m, n)
}

/// (|01⟩ − |10⟩)/√2
pub fn singlet() -> BipartiteState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    BipartiteState::pure(&real_vec(&[0.0, h, -h, 0.0]), 2, 2).expect("singlet is valid")
}

/// ε·σ + (1−ε)/(MN)·I for a pure σ.
pub fn pseudopure(sigma: &BipartiteState, epsilon: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::OutOfRange(format!("ε = {epsilon} not in [0,1]")));
    }
    let p = sigma.purity();
    if p < 1.0 - 1e-9 {
        return Err(Error::InvalidState {
            invariant: "pure",
            detail: format!("Tr σ² = {p}"),
        });
    }
    sigma.with_white_noise(epsilon)
}

/// ρ_W = p·2/(D²+D)·P_sym + (1−p)·2/(D²−D)·P_as with P the swap operator.
pub fn werner(d: usize, p: f64) -> Result<BipartiteState> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("Werner dimension {d} < 2")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("Werner p = {p} not in [0,1]")));
    }
    let dd = d * d;
    let swap = ComplexMatrix::from_fn(dd, dd, |r, c| {
        let (i, j) = (r / d, r % d);
        if c == j * d + i {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let id = ComplexMatrix::identity(dd);
    let sym = (id.clone() + swap.clone()).scale_real(0.5);
    let asym = (id - swap).scale_real(0.5);
    let df = d as f64;
    let rho = sym.scale_real(p * 2.0 / (df * df + df)) + asym.scale_real((1.0 - p) * 2.0 / (df * df - df));
    BipartiteState::new(rho, d, d)
}

/// Tr ρ_W² in closed form.
pub fn werner_purity(d: usize, p: f64) -> f64 {
    let df = d as f64;
    p * p * 2.0 / (df * df + df) + (1.0 - p) * (1.0 - p) * 2.0 / (df * df - df)
}

/// The 3×3 bound entangled family ρ_a = 8a/(8a+1)·ρ_ent + 1/(8a+1)·P_{Φ_a},
/// with ρ_ent = 3/8·P_Ψ + 1/8·Q.
pub fn horodecki_rho_a(a: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::OutOfRange(format!("a = {a} not in [0,1]")));
    }
    let proj = |k: usize| ComplexMatrix::projector(&basis(3, k));
    let mut q = ComplexMatrix::identity(9);
    for k in 0..3 {
        q = q - tensor_product(&proj(k), &proj(k));
    }
    q = q - tensor_product(&proj(2), &proj(0));

    let s3 = 1.0 / 3f64.sqrt();
    let psi: Vec<C64> = (0..9).map(|r| if r % 4 == 0 { C64::new(s3, 0.0) } else { C64::new(0.0, 0.0) }).collect();
    let rho_ent = ComplexMatrix::projector(&psi).scale_real(3.0 / 8.0) + q.scale_real(1.0 / 8.0);

    let b_part = real_vec(&[((1.0 + a) / 2.0).sqrt(), 0.0, ((1.0 - a) / 2.0).sqrt()]);
    let phi_a = kron_vec(&basis(3, 2), &b_part);
    let w = 8.0 * a + 1.0;
    let rho = rho_ent.scale_real(8.0 * a / w) + ComplexMatrix::projector(&phi_a).scale_real(1.0 / w);
    BipartiteState::new(rho, 3, 3)
}

/// ρ_α = 2/7·|φ₊⟩⟨φ₊| + α/7·σ₊ + (5−α)/7·σ₋ on two qutrits, 2 ≤ α ≤ 5.
pub fn horodecki_rho_alpha(alpha: f64) -> Result<BipartiteState> {
    if !(2.0..=5.0).contains(&alpha) {
        return Err(Error::OutOfRange(format!("α = {alpha} not in [2,5]")));
    }
    let s3 = 1.0 / 3f64.sqrt();
    let phi: Vec<C64> = (0..9).map(|r| if r % 4 == 0 { C64::new(s3, 0.0) } else { C64::new(0.0, 0.0) }).collect();
    let mut diag = [0.0; 9];
    for k in 0..3 {
        // σ₊ on |k, k+1⟩, σ₋ on |k+1, k⟩
        diag[k * 3 + (k + 1) % 3] += alpha / 21.0;
        diag[((k + 1) % 3) * 3 + k] += (5.0 - alpha) / 21.0;
    }
    let rho = ComplexMatrix::projector(&phi).scale_real(2.0 / 7.0) + ComplexMatrix::diag_real(&diag);
    BipartiteState::new(rho, 3, 3)
}

/// The five "Tiles" product vectors on two qutrits.
pub fn upb_tiles_vectors() -> Vec<Vec<C64>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let e = |k| basis(3, k);
    let minus = |i: usize, j: usize| -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); 3];
        v[i] = C64::new(h, 0.0);
        v[j] = C64::new(-h, 0.0);
        v
    };
    let s3 = 1.0 / 3f64.sqrt();
    let plus = real_vec(&[s3, s3, s3]);
    vec![
        kron_vec(&e(0), &minus(0, 1)),
        kron_vec(&minus(0, 1), &e(2)),
        kron_vec(&e(2), &minus(1, 2)),
        kron_vec(&minus(1, 2), &e(0)),
        kron_vec(&plus, &plus),
    ]
}

/// (I − Σ_k |ψ_k⟩⟨ψ_k|)/(D − n) for the Tiles UPB (D = 9, n = 5).
pub fn upb_tiles_state() -> BipartiteState {
    let vs = upb_tiles_vectors();
    let mut rho = ComplexMatrix::identity(9);
    for v in &vs {
        rho = rho - ComplexMatrix::projector(v);
    }
    let rho = rho.scale_real(1.0 / (9 - vs.len()) as f64);
    BipartiteState::new(rho, 3, 3).expect("UPB state is valid")
}
