//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.
//!
//! Reference values are recomputed here from their closed expressions rather
//! than taken from the library, so a library regression cannot hide itself.

use std::f64::consts::FRAC_1_SQRT_2;
use std::process::{Command, ExitCode};

use fudist_core::chsh::{b_max_pure, concurrence_audenaert, concurrence_rungta_normalized, horodecki_m};
use fudist_core::fano::{fano_decompose, two_qubit_from_fano};
use fudist_core::fu::{
    bound_classical, bound_purity, bound_purity_horodecki_alpha, bound_upb, clock_unitary, cyclic_shift,
    cyclicity_residual, dmax_horodecki_a, dmax_pseudopure, dmax_two_qubit_diag_t, dmax_werner, fu_distance,
    pseudopure_detection_window,
};
use fudist_core::linalg::ComplexMatrix;
use fudist_core::optimizer::{maximize_fu, OptimizerConfig};
use fudist_core::{random, zoo, BipartiteState, FanoForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_TOL: f64 = 2e-4;
const STRICT: f64 = 1e-8;

/// Every oracle run goes through here so the purity bound can be audited
/// across the whole suite.
#[derive(Default)]
struct Oracle {
    runs: usize,
    bound_violations: Vec<String>,
}

impl Oracle {
    fn run(&mut self, state: &BipartiteState, seed: u64, tag: &str) -> f64 {
        let r = maximize_fu(state, &OptimizerConfig::with_seed(seed)).expect("oracle runs");
        self.runs += 1;
        let bound = bound_purity(state);
        if r.d_estimate > bound + STRICT {
            self.bound_violations.push(format!("{tag}: {} > {}", r.d_estimate, bound));
        }
        r.d_estimate
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    match failures.first() {
        None => Outcome { pass: true, detail },
        Some(f) => Outcome { pass: false, detail: format!("{detail}; {} failures, first: {f}", failures.len()) },
    }
}

fn pseudopure_reference(coeffs: &[f64], eps: f64) -> f64 {
    let am = coeffs.iter().cloned().fold(0.0, f64::max);
    if am * am <= 0.5 {
        eps
    } else {
        2.0 * eps * am * (1.0 - am * am).sqrt()
    }
}

fn werner_reference(d: usize, p: f64) -> f64 {
    let d = d as f64;
    (2.0 * p * d - d - 1.0).abs() / (d * d - 1.0)
}

fn criterion_1(oracle: &mut Oracle) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let (m, n) = (2 + i % 3, 2 + (i / 3) % 3);
        let eps = 1.0 - rng.gen::<f64>();
        let c = random::schmidt_coefficients(&mut rng, m.min(n));
        let st = zoo::pseudopure(&zoo::pure_from_schmidt(&c, m, n).unwrap(), eps).unwrap();
        let reference = pseudopure_reference(&c, eps);
        let cf = dmax_pseudopure(&c, eps, m, n).unwrap().d_value;
        let d = oracle.run(&st, 1000 + i as u64, "criterion 1");
        worst = worst.max((d - reference).abs());
        if (d - reference).abs() > ORACLE_TOL || d > reference + STRICT || (cf - reference).abs() > 1e-12 {
            failures.push(format!("{m}x{n} eps={eps} coeffs={c:?}: oracle {d}, formula {reference}, library {cf}"));
        }
    }
    outcome(&failures, format!("50 instances, max |oracle - formula| {worst:.2e}"))
}

fn criterion_2(oracle: &mut Oracle) -> Outcome {
    let mut failures = Vec::new();
    let (mut worst, mut worst_witness): (f64, f64) = (0.0, 0.0);
    for d in 2..=4 {
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let st = zoo::werner(d, p).unwrap();
            let reference = werner_reference(d, p);
            let o = oracle.run(&st, (d * 100 + k) as u64, "criterion 2");
            let w = fu_distance(&st, &clock_unitary(d)).unwrap();
            let res = cyclicity_residual(&st, &clock_unitary(d)).unwrap();
            worst = worst.max((o - reference).abs());
            worst_witness = worst_witness.max((w - reference).abs());
            if (o - reference).abs() > ORACLE_TOL || (w - reference).abs() > 1e-10 || res > 1e-10 {
                failures.push(format!("D={d} p={p}: oracle {o}, clock {w}, formula {reference}"));
            }
            if (dmax_werner(d, p).unwrap().d_value - reference).abs() > 1e-12 {
                failures.push(format!("D={d} p={p}: library closed form disagrees"));
            }
        }
    }
    outcome(&failures, format!("33 points, max |oracle - formula| {worst:.2e}, max clock-witness error {worst_witness:.2e}"))
}

fn diag_t_reference(r_b: [f64; 3], lambda: [f64; 3]) -> f64 {
    let norm = r_b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let n = if norm > 1e-12 {
        r_b.map(|x| x / norm)
    } else {
        let mut k = 0;
        for i in 1..3 {
            if lambda[i].abs() < lambda[k].abs() {
                k = i;
            }
        }
        let mut e = [0.0; 3];
        e[k] = 1.0;
        e
    };
    ((0..3).map(|i| lambda[i] * lambda[i] * (1.0 - n[i] * n[i])).sum::<f64>() / 2.0).sqrt()
}

fn criterion_3(oracle: &mut Oracle) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let f = random::diagonal_t_fano(&mut rng, 0.6);
        let st = two_qubit_from_fano(&f).unwrap();
        let lambda = [f.t[0][0], f.t[1][1], f.t[2][2]];
        let r_b = [f.r_b[0], f.r_b[1], f.r_b[2]];
        let reference = diag_t_reference(r_b, lambda);
        let o = oracle.run(&st, 3000 + i, "criterion 3");
        worst = worst.max((o - reference).abs());
        if (o - reference).abs() > ORACLE_TOL || o > reference + STRICT {
            failures.push(format!("lambda={lambda:?} r_b={r_b:?}: oracle {o}, formula {reference}"));
        }
        if (dmax_two_qubit_diag_t(&f).unwrap().d_value - reference).abs() > 1e-12 {
            failures.push(format!("lambda={lambda:?}: library closed form disagrees"));
        }
    }
    outcome(&failures, format!("50 instances, max |oracle - formula| {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |name: &str, got: f64, want: f64, tol: f64| {
        if !((got - want).abs() <= tol) {
            failures.push(format!("{name}: got {got}, want {want} (tol {tol:e})"));
        }
    };
    check("classical bound 2x2", bound_classical(2, 2), FRAC_1_SQRT_2, 1e-9);
    check("classical bound 3x3", bound_classical(3, 3), (8.0f64 / 9.0).sqrt(), 1e-9);

    let (_, hi) = pseudopure_detection_window(1.0).unwrap().expect("window exists at eps = 1");
    check("a_m window edge", hi.sqrt(), 0.9239, 5e-4);
    // the edge is where the pure-state closed form crosses 1/sqrt(2)
    let edge = hi.sqrt();
    let c = [edge, (1.0 - edge * edge).sqrt()];
    check("closed form at window edge", dmax_pseudopure(&c, 1.0, 2, 2).unwrap().d_value, FRAC_1_SQRT_2, 1e-9);

    // bisect the two-qubit Werner closed form against 1/sqrt(2) on the
    // decreasing branch p in [0, 3/4]
    let (mut lo, mut hi) = (0.0, 0.75);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if dmax_werner(2, mid).unwrap().d_value > FRAC_1_SQRT_2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let threshold = (3.0 * 2f64.sqrt() - 3.0) / (4.0 * 2f64.sqrt());
    check("werner threshold", lo, threshold, 5e-4);
    check("werner threshold vs 0.220", lo, 0.220, 5e-4);

    check("rho_a limit", dmax_horodecki_a(1.0 - 1e-13).unwrap().d_value, 2.0 * 2f64.sqrt() / 9.0, 1e-9);
    check("upb bound", bound_upb(9, 5).unwrap(), 10f64.sqrt() / 6.0, 1e-9);
    check("upb purity bound", bound_purity(&zoo::upb_tiles_state()), 10f64.sqrt() / 6.0, 1e-9);
    for (alpha, want) in [(4.0, 2.0 * 19f64.sqrt() / 21.0), (5.0, 2.0 * 31f64.sqrt() / 21.0)] {
        check(&format!("rho_alpha bound at {alpha}"), bound_purity_horodecki_alpha(alpha), want, 1e-9);
        let st = zoo::horodecki_rho_alpha(alpha).unwrap();
        check(&format!("rho_alpha purity bound at {alpha}"), bound_purity(&st), want, 1e-9);
    }

    let s3 = 1.0 / 3f64.sqrt();
    check("C_A maximally entangled qutrits", concurrence_audenaert(&[s3, s3, s3]).unwrap(), 2.0 / 3.0, 1e-9);
    check("d_max maximally entangled qutrits", dmax_pseudopure(&[s3, s3, s3], 1.0, 3, 3).unwrap().d_value, 1.0, 1e-9);
    let c = [FRAC_1_SQRT_2, 0.5, 0.5];
    check("normalized C_R", concurrence_rungta_normalized(&c, 3).unwrap(), 0.9682, 5e-5);
    check("d_max (1/sqrt2, 1/2, 1/2)", dmax_pseudopure(&c, 1.0, 3, 3).unwrap().d_value, 1.0, 1e-9);
    outcome(&failures, "15 constants".into())
}

fn criterion_5(oracle: &mut Oracle) -> Outcome {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    let flip = ComplexMatrix::diag_real(&[1.0, -1.0, 1.0]);
    for k in 1..=9 {
        let a = k as f64 / 10.0;
        let st = zoo::horodecki_rho_a(a).unwrap();
        let reference = 2.0 * 2f64.sqrt() * a / (8.0 * a + 1.0);
        let o = oracle.run(&st, 500 + k, "criterion 5");
        let res = cyclicity_residual(&st, &flip).unwrap();
        let w = fu_distance(&st, &flip).unwrap();
        worst = worst.max((o - reference).abs());
        worst_res = worst_res.max(res);
        if (o - reference).abs() > ORACLE_TOL || res > 1e-12 || (w - reference).abs() > 1e-10 {
            failures.push(format!("a={a}: oracle {o}, witness {w}, residual {res:e}, formula {reference}"));
        }
    }
    outcome(&failures, format!("9 points, max |oracle - formula| {worst:.2e}, max witness residual {worst_res:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let shift = cyclic_shift(3);
    let d = |alpha: f64| fu_distance(&zoo::horodecki_rho_alpha(alpha).unwrap(), &shift).unwrap();
    let grid: Vec<f64> = (0..=300).map(|k| 2.0 + k as f64 / 100.0).collect();
    let mut ranges = [(f64::INFINITY, f64::NEG_INFINITY); 3];
    for &alpha in &grid {
        let v = d(alpha);
        let reference = (alpha * alpha - 5.0 * alpha + 9.0).sqrt() / 7.0;
        if (v - reference).abs() > 1e-10 {
            failures.push(format!("alpha={alpha}: shift distance {v}, expected {reference}"));
        }
        let bound = bound_purity_horodecki_alpha(alpha);
        if v > bound {
            failures.push(format!("alpha={alpha}: distance {v} above bound {bound}"));
        }
        let st_bound = bound_purity(&zoo::horodecki_rho_alpha(alpha).unwrap());
        if (st_bound - bound).abs() > 1e-12 {
            failures.push(format!("alpha={alpha}: bound {bound} differs from state purity bound {st_bound}"));
        }
        let i = if alpha <= 3.0 { 0 } else if alpha <= 4.0 { 1 } else { 2 };
        ranges[i] = (ranges[i].0.min(v), ranges[i].1.max(v));
    }
    for i in 0..2 {
        if !(ranges[i].1 < ranges[i + 1].0) {
            failures.push(format!("intervals {i} and {} overlap: {:?} {:?}", i + 1, ranges[i], ranges[i + 1]));
        }
    }
    let shown: Vec<String> = ranges.iter().map(|(a, b)| format!("[{a:.6}, {b:.6}]")).collect();
    outcome(&failures, format!("301 points, ranges {}", shown.join(" ")))
}

fn pure_two_qubit(a0: f64) -> BipartiteState {
    zoo::pure_from_schmidt(&[a0, (1.0 - a0 * a0).sqrt()], 2, 2).unwrap()
}

/// Diagonal-T state near the Bell-diagonal tetrahedron's vertices, where
/// d_max > 1/sqrt(2) is common, with small Bloch vectors; rejected until PSD.
fn near_bell_diagonal(rng: &mut ChaCha8Rng) -> FanoForm {
    const VERTICES: [[f64; 3]; 4] = [[1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, -1.0]];
    loop {
        let w: Vec<f64> = (0..4).map(|_| rng.gen::<f64>().powi(4)).collect();
        let total: f64 = w.iter().sum();
        let mut lambda = [0.0; 3];
        for (wk, v) in w.iter().zip(VERTICES) {
            for i in 0..3 {
                lambda[i] += wk / total * v[i];
            }
        }
        let s = rng.gen_range(0.0..0.3);
        let r = |rng: &mut ChaCha8Rng| [0; 3].map(|_| s * rng.gen_range(-1.0..1.0));
        let (r_a, r_b) = (r(rng), r(rng));
        let f = FanoForm::two_qubit_diagonal(r_a, r_b, lambda);
        if two_qubit_from_fano(&f).is_ok() {
            return f;
        }
    }
}

fn criterion_7(oracle: &mut Oracle) -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut forward_cases = 0;
    for i in 0..1000 {
        let f = if i % 2 == 0 { random::diagonal_t_fano(&mut rng, 1.0) } else { near_bell_diagonal(&mut rng) };
        let d = dmax_two_qubit_diag_t(&f).unwrap().d_value;
        let m = horodecki_m(&f).unwrap().m_value;
        if d > FRAC_1_SQRT_2 {
            forward_cases += 1;
            if m <= 1.0 {
                failures.push(format!("d_max {d} > 1/sqrt(2) but M = {m}"));
            }
        }
    }

    // M > 1 while d_max <= 1/sqrt(2), just inside the window edge sin(pi/8)
    // and near its complement
    let mut converse = 0;
    for center in [0.38, 0.93] {
        for k in -4..=4 {
            let a0 = center + k as f64 * 5e-4;
            let st = pure_two_qubit(a0);
            let m = horodecki_m(&fano_decompose(&st)).unwrap().m_value;
            let coeffs = [a0.max((1.0 - a0 * a0).sqrt()), a0.min((1.0 - a0 * a0).sqrt())];
            let d = dmax_pseudopure(&coeffs, 1.0, 2, 2).unwrap().d_value;
            if m > 1.0 && d <= FRAC_1_SQRT_2 {
                converse += 1;
            } else {
                failures.push(format!("a0={a0}: M = {m}, d_max = {d}"));
            }
        }
        let o = oracle.run(&pure_two_qubit(center), 7000 + (center * 100.0) as u64, "criterion 7");
        if o > FRAC_1_SQRT_2 {
            failures.push(format!("a0={center}: oracle {o} > 1/sqrt(2)"));
        }
    }

    let mut worst_b: f64 = 0.0;
    for k in 1..=99 {
        let a0 = k as f64 / 100.0;
        let a1 = (1.0 - a0 * a0).sqrt();
        let st = pure_two_qubit(a0);
        let d = dmax_pseudopure(&[a0.max(a1), a0.min(a1)], 1.0, 2, 2).unwrap().d_value;
        let b = b_max_pure(a0, a1).unwrap();
        let m = horodecki_m(&fano_decompose(&st)).unwrap().m_value;
        let identity = 2.0 * (1.0 + d * d).sqrt();
        worst_b = worst_b.max((b - identity).abs());
        // Horodecki: B_max = 2 sqrt(M)
        if (b - identity).abs() > 1e-10 || (b - 2.0 * m.sqrt()).abs() > 1e-10 {
            failures.push(format!("a0={a0}: B_max {b}, 2sqrt(1+d^2) {identity}, 2sqrt(M) {}", 2.0 * m.sqrt()));
        }
    }

    let mut worst_m: f64 = 0.0;
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let st = zoo::pseudopure(&zoo::singlet(), p).unwrap();
        let m = horodecki_m(&fano_decompose(&st)).unwrap().m_value;
        worst_m = worst_m.max((m - 2.0 * p * p).abs());
        if (m - 2.0 * p * p).abs() > 1e-10 {
            failures.push(format!("p={p}: M = {m}, 2p^2 = {}", 2.0 * p * p));
        }
    }
    outcome(
        &failures,
        format!(
            "1000 states ({forward_cases} with d_max > 1/sqrt(2)), {converse} converse counterexamples, \
             max B_max error {worst_b:.1e}, max |M - 2p^2| {worst_m:.1e}"
        ),
    )
}

fn random_mixed(rng: &mut ChaCha8Rng, m: usize, n: usize, rank: usize) -> BipartiteState {
    let mut rho = ComplexMatrix::zeros(m * n, m * n);
    let weights: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let psi = random::unit_vector(rng, m * n);
        rho = rho + ComplexMatrix::projector(&psi).scale_real(w / total);
    }
    BipartiteState::new(rho, m, n).unwrap()
}

fn criterion_8(oracle: &mut Oracle) -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut worst: f64 = 0.0;
    for i in 0..20u64 {
        // half generic mixed states, half pseudopure states with degenerate ρ_B
        let st = if i % 2 == 0 {
            random_mixed(&mut rng, 2, 3, 2)
        } else {
            let k = 2 + (i as usize / 2) % 2;
            let c = random::schmidt_coefficients(&mut rng, k);
            zoo::pseudopure(&zoo::pure_from_schmidt(&c, k, k).unwrap(), 0.8).unwrap()
        };
        let ua = random::unitary(&mut rng, st.dim_a());
        let ub = random::unitary(&mut rng, st.dim_b());
        let moved = st.apply_local(&ua, &ub).unwrap();
        let d0 = oracle.run(&st, 8000 + i, "criterion 8");
        let d1 = oracle.run(&moved, 8100 + i, "criterion 8");
        worst = worst.max((d0 - d1).abs());
        if (d0 - d1).abs() > ORACLE_TOL {
            failures.push(format!("pair {i}: {d0} vs {d1}"));
        }
    }
    failures.extend(oracle.bound_violations.iter().cloned());
    outcome(
        &failures,
        format!(
            "20 pairs, max |d - d'| {worst:.2e}; purity bound held on all {} oracle runs",
            oracle.runs
        ),
    )
}

fn criterion_9() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_fudist"))
            .args(["verify", "--seed", "42"])
            .current_dir(std::env::temp_dir())
            .output()
            .expect("fudist runs")
    };
    let (a, b) = (run(), run());
    let mut failures = Vec::new();
    if !a.status.success() || !b.status.success() {
        failures.push(format!("exit codes {:?} {:?}: {}", a.status.code(), b.status.code(), String::from_utf8_lossy(&a.stderr)));
    }
    if a.stdout != b.stdout {
        failures.push("summaries differ".into());
    }
    if a.stdout.is_empty() {
        failures.push("empty summary".into());
    }
    outcome(&failures, format!("{} byte summary reproduced", a.stdout.len()))
}

fn main() -> ExitCode {
    let mut oracle = Oracle::default();
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut Oracle) -> Outcome>)> = vec![
        ("pseudopure closed form vs oracle", Box::new(criterion_1)),
        ("werner closed form vs oracle", Box::new(criterion_2)),
        ("two-qubit diagonal-T closed form vs oracle", Box::new(criterion_3)),
        ("reference constants", Box::new(|_| criterion_4())),
        ("rho_a closed form and witness", Box::new(criterion_5)),
        ("rho_alpha disjoint ranges and bound", Box::new(|_| criterion_6())),
        ("CHSH relations", Box::new(criterion_7)),
        ("local-unitary invariance and purity bound", Box::new(criterion_8)),
        ("verify determinism", Box::new(|_| criterion_9())),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let o = check(&mut oracle);
        println!("criterion {}: {} {name} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
