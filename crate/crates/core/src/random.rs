//! Seeded random instances: states, unitaries and Schmidt vectors.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::fano::{two_qubit_from_fano, FanoForm};
use crate::linalg::{ComplexMatrix, C64};
use crate::state::BipartiteState;

fn gaussian_c64(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniformly distributed unit vector in C^n.
pub fn unit_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| gaussian_c64(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random unitary: Gram–Schmidt on Gaussian columns.
pub fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    'draw: loop {
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
        for _ in 0..n {
            let mut v: Vec<C64> = (0..n).map(|_| gaussian_c64(rng)).collect();
            for _ in 0..2 {
                for u in &cols {
                    let ov: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(u) {
                        *x -= ov * y;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                continue 'draw;
            }
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
        return ComplexMatrix::from_fn(n, n, |i, k| cols[k][i]);
    }
}

/// k nonnegative coefficients with unit 2-norm, descending.
pub fn schmidt_coefficients(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let mut a: Vec<f64> = unit_vector(rng, k).iter().map(|z| z.norm()).collect();
    a.sort_by(|x, y| y.total_cmp(x));
    a
}

pub fn pure_state(rng: &mut impl Rng, m: usize, n: usize) -> BipartiteState {
    BipartiteState::pure(&unit_vector(rng, m * n), m, n).expect("unit vector")
}

/// Two-qubit Fano form with diagonal T, drawn by rejection until the state is
/// positive semidefinite. Bloch vectors have norm below `max_bloch`.
pub fn diagonal_t_fano(rng: &mut impl Rng, max_bloch: f64) -> FanoForm {
    let ball = |rng: &mut dyn rand::RngCore| -> [f64; 3] {
        loop {
            let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            if v.iter().map(|x: &f64| x * x).sum::<f64>() <= 1.0 {
                return v.map(|x| x * max_bloch);
            }
        }
    };
    loop {
        let r_a = ball(rng);
        let r_b = ball(rng);
        let lambda = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let f = FanoForm::two_qubit_diagonal(r_a, r_b, lambda);
        if two_qubit_from_fano(&f).is_ok() {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..6 {
            assert!(unitary(&mut rng, n).unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn coefficients_normalized_descending() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = schmidt_coefficients(&mut rng, 4);
        assert!((a.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(a.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn diagonal_t_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = diagonal_t_fano(&mut rng, 0.5);
            assert!(f.max_off_diagonal() < 1e-15);
            assert!(two_qubit_from_fano(&f).is_ok());
        }
    }
}
