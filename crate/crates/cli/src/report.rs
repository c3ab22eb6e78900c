use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use fudist_core::chsh::horodecki_m;
use fudist_core::fano::fano_decompose;
use fudist_core::fu::{bound_classical, bound_purity, bound_purity_horodecki_alpha, fu_distance};
use fudist_core::optimizer::{maximize_fu, OptimizerConfig};
use serde::Serialize;

use crate::args::{Family, OracleArgs};
use crate::error::CliResult;
use crate::family::{Instance, MAX_STATE_DIM};

pub const SCHEMA: &str = "fudist-v1";

/// `%.{sig}g`: fixed notation for decimal exponents in [-4, sig), scientific
/// otherwise, trailing zeros removed.
pub fn fmt_g(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn g12(x: f64) -> String {
    fmt_g(x, 12)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormOut {
    pub source: &'static str,
    pub d_max: f64,
    /// d(ρ, W) recomputed from the state for the witness W.
    pub witness_d: Option<f64>,
    pub witness_cyclicity_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessOut {
    pub unitary: &'static str,
    pub d: f64,
    pub cyclicity_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleOut {
    pub d_max: f64,
    pub seed: u64,
    pub restarts: usize,
    pub converged_restarts: usize,
    pub best_restart: usize,
    pub cyclicity_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsOut {
    pub classical: f64,
    pub purity: f64,
    pub upb: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChshOut {
    pub m: f64,
    pub tau: [f64; 2],
    pub violates: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub schema: &'static str,
    pub family: &'static str,
    pub dim_a: usize,
    pub dim_b: usize,
    pub parameters: BTreeMap<&'static str, f64>,
    pub purity: Option<f64>,
    pub min_partial_transpose_eigenvalue: Option<f64>,
    pub closed_form: Option<ClosedFormOut>,
    pub shift_witness: Option<WitnessOut>,
    pub oracle: Option<OracleOut>,
    pub oracle_note: Option<String>,
    pub bounds: BoundsOut,
    pub chsh: Option<ChshOut>,
    pub verdict: String,
}

/// The three α intervals give disjoint ranges of the shift-witness distance,
/// so the distance alone tells them apart.
pub fn horodecki_alpha_region(d: f64) -> (&'static str, &'static str) {
    let sep_hi = 3f64.sqrt() / 7.0;
    let bound_hi = 5f64.sqrt() / 7.0;
    if d <= sep_hi + 1e-12 {
        ("separable", "d <= sqrt(3)/7")
    } else if d <= bound_hi + 1e-12 {
        ("bound entangled", "sqrt(3)/7 < d <= sqrt(5)/7")
    } else {
        ("free entangled", "d > sqrt(5)/7")
    }
}

fn verdict(a: &Analysis) -> String {
    if let Some(w) = &a.shift_witness {
        let (region, why) = horodecki_alpha_region(w.d);
        return format!("{region} [shift-witness distance {}: {why}]", g12(w.d));
    }
    let d = a.closed_form.as_ref().map(|c| c.d_max).or(a.oracle.as_ref().map(|o| o.d_max));
    let classical = a.bounds.classical;
    let two_qubits = a.dim_a == 2 && a.dim_b == 2;
    if let (true, Some(d)) = (two_qubits, d) {
        if d > classical {
            return format!(
                "entanglement certified [classical bound exceeded: d_max {} > {}]",
                g12(d),
                g12(classical)
            );
        }
    }
    if a.bounds.purity <= FRAC_1_SQRT_2 {
        return format!(
            "cannot certify entanglement [purity bound {} <= 1/sqrt(2)]",
            g12(a.bounds.purity)
        );
    }
    if !two_qubits {
        return match d {
            Some(d) => format!(
                "criterion inconclusive above 2x2 [d_max {} vs classical bound {}]",
                g12(d),
                g12(classical)
            ),
            None => "criterion inconclusive above 2x2 [no closed form; oracle not run]".into(),
        };
    }
    match (d, &a.chsh) {
        (Some(d), Some(c)) => format!(
            "not certified [d_max {} <= classical bound {}; CHSH M {}]",
            g12(d),
            g12(classical),
            g12(c.m)
        ),
        _ => "not certified [no closed form; oracle not run]".into(),
    }
}

pub fn analyze_instance(inst: &Instance, oracle: &OracleArgs) -> CliResult<Analysis> {
    let state = inst.state.as_ref();
    let closed_form = match &inst.closed_form {
        Some(r) => {
            let w = r.witness.as_ref();
            let witness_d = match (state, w) {
                (Some(s), Some(w)) => Some(fu_distance(s, &w.u)?),
                _ => None,
            };
            Some(ClosedFormOut {
                source: r.closed_form_source.label(),
                d_max: r.d_value,
                witness_d,
                witness_cyclicity_residual: w.map(|w| w.cyclicity_residual),
            })
        }
        None => None,
    };
    let shift_witness = inst.shift_witness.as_ref().map(|(d, w)| WitnessOut {
        unitary: "cyclic shift |0>->|1>->|2>->|0>",
        d: *d,
        cyclicity_residual: w.cyclicity_residual,
    });

    let (oracle_out, oracle_note) = match (oracle.oracle, state) {
        (false, _) => (None, None),
        (true, None) => (None, Some(format!("oracle skipped above total dimension {MAX_STATE_DIM}"))),
        (true, Some(s)) if s.total_dim() > MAX_STATE_DIM => {
            (None, Some(format!("oracle skipped above total dimension {MAX_STATE_DIM}")))
        }
        (true, Some(s)) => {
            let cfg = OptimizerConfig { restarts: oracle.restarts, ..OptimizerConfig::with_seed(oracle.seed) };
            let r = maximize_fu(s, &cfg)?;
            (
                Some(OracleOut {
                    d_max: r.d_estimate,
                    seed: oracle.seed,
                    restarts: r.restarts_used,
                    converged_restarts: r.converged.iter().filter(|c| **c).count(),
                    best_restart: r.best_restart,
                    cyclicity_residual: r.best_unitary.cyclicity_residual,
                }),
                None,
            )
        }
    };

    let purity_bound = match (inst.family, state, &inst.closed_form) {
        (Family::HorodeckiAlpha, _, _) => bound_purity_horodecki_alpha(inst.parameters["alpha"]),
        (_, Some(s), _) => bound_purity(s),
        (_, None, Some(r)) => r.bounds.purity,
        (_, None, None) => f64::NAN,
    };
    let chsh = match state {
        Some(s) if s.dim_a() == 2 && s.dim_b() == 2 => {
            let c = horodecki_m(&fano_decompose(s))?;
            Some(ChshOut { m: c.m_value, tau: [c.tau.0, c.tau.1], violates: c.violates })
        }
        _ => None,
    };
    let min_pt = match state {
        Some(s) => Some(s.min_partial_transpose_eigenvalue()?),
        None => None,
    };
    let mut a = Analysis {
        schema: SCHEMA,
        family: inst.family.label(),
        dim_a: inst.dim_a,
        dim_b: inst.dim_b,
        parameters: inst.parameters.clone(),
        purity: state.map(|s| s.purity()),
        min_partial_transpose_eigenvalue: min_pt,
        closed_form,
        shift_witness,
        oracle: oracle_out,
        oracle_note,
        bounds: BoundsOut {
            classical: bound_classical(inst.dim_a, inst.dim_b),
            purity: purity_bound,
            upb: inst.upb_bound,
        },
        chsh,
        verdict: String::new(),
    };
    a.verdict = verdict(&a);
    Ok(a)
}
