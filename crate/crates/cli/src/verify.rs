use std::fs;
use std::io::Write;
use std::path::PathBuf;

use fudist_core::fano::two_qubit_from_fano;
use fudist_core::fu::{bound_purity, dmax_horodecki_a, dmax_pseudopure, dmax_two_qubit_diag_t, dmax_werner, fu_distance};
use fudist_core::optimizer::{maximize_fu, restart_rng, OptimizerConfig};
use fudist_core::state::StateFile;
use fudist_core::{random, zoo, BipartiteState, FuReport};
use rand::Rng;
use serde::Serialize;

use crate::args::VerifyArgs;
use crate::error::{CliError, CliResult};
use crate::report::{g12, SCHEMA};

pub const FAMILIES: [&str; 4] = ["pseudopure", "werner", "two-qubit-diag-T", "horodecki-a"];

/// Oracle and closed form may differ by this much.
pub const DISCREPANCY_TOL: f64 = 2e-4;
/// Oracle, witness and bounds are compared at this slack.
pub const STRICT_TOL: f64 = 1e-8;
const FAULT: f64 = 1e-2;

pub struct Case {
    pub family: &'static str,
    pub index: usize,
    pub parameters: serde_json::Value,
    pub state: BipartiteState,
    pub closed_form: FuReport,
}

/// Instance `index` of `family`, drawn from the seed's stream for that family.
pub fn make_case(family_index: usize, index: usize, seed: u64) -> CliResult<Case> {
    let family = FAMILIES[family_index];
    // one stream per (family, instance); streams above 2^32 stay clear of the
    // optimizer's per-restart streams
    let mut rng = restart_rng(seed, (1usize << 32) + (family_index << 16) + index);
    let (parameters, state, closed_form) = match family_index {
        0 => {
            let m = rng.gen_range(2..=4);
            let n = rng.gen_range(2..=4);
            let eps: f64 = 1.0 - rng.gen::<f64>();
            let c = random::schmidt_coefficients(&mut rng, m.min(n));
            let st = zoo::pseudopure(&zoo::pure_from_schmidt(&c, m, n)?, eps)?;
            (serde_json::json!({"m": m, "n": n, "epsilon": eps, "coeffs": c}), st, dmax_pseudopure(&c, eps, m, n)?)
        }
        1 => {
            let d = rng.gen_range(2..=4);
            let p: f64 = rng.gen();
            (serde_json::json!({"d": d, "p": p}), zoo::werner(d, p)?, dmax_werner(d, p)?)
        }
        2 => {
            let f = random::diagonal_t_fano(&mut rng, 0.6);
            let st = two_qubit_from_fano(&f)?;
            (serde_json::json!({"r_a": f.r_a, "r_b": f.r_b, "lambda": f.t_diagonal()}), st, dmax_two_qubit_diag_t(&f)?)
        }
        _ => {
            let a = rng.gen_range(0.01..0.99);
            (serde_json::json!({"a": a}), zoo::horodecki_rho_a(a)?, dmax_horodecki_a(a)?)
        }
    };
    Ok(Case { family, index, parameters, state, closed_form })
}

pub fn oracle_seed(seed: u64, family_index: usize, index: usize) -> u64 {
    seed ^ (((family_index as u64) << 32) | index as u64)
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub closed_form: f64,
    pub oracle: f64,
    pub discrepancy: f64,
    pub oracle_excess: f64,
    pub witness_error: f64,
    pub witness_residual: f64,
    pub bound_excess: f64,
    pub failures: Vec<String>,
}

pub fn check_case(case: &Case, seed: u64, family_index: usize, corrupt: bool) -> CliResult<Outcome> {
    let mut closed_form = case.closed_form.d_value;
    if corrupt {
        closed_form += FAULT;
    }
    let cfg = OptimizerConfig::with_seed(oracle_seed(seed, family_index, case.index));
    let r = maximize_fu(&case.state, &cfg)?;
    let w = case.closed_form.witness.as_ref().expect("every verified family has a witness");
    let witness_error = (fu_distance(&case.state, &w.u)? - closed_form).abs();
    let witness_residual = w.cyclicity_residual.max(w.unitarity_defect());
    let purity = bound_purity(&case.state);
    let bound_excess = (r.d_estimate - purity).max(closed_form - purity);
    let o = Outcome {
        closed_form,
        oracle: r.d_estimate,
        discrepancy: (r.d_estimate - closed_form).abs(),
        oracle_excess: r.d_estimate - closed_form,
        witness_error,
        witness_residual,
        bound_excess,
        failures: Vec::new(),
    };
    let mut failures = Vec::new();
    if o.discrepancy > DISCREPANCY_TOL {
        failures.push(format!("|oracle - closed form| = {} > {}", g12(o.discrepancy), g12(DISCREPANCY_TOL)));
    }
    if o.oracle_excess > STRICT_TOL {
        failures.push(format!("oracle exceeds closed form by {}", g12(o.oracle_excess)));
    }
    if o.witness_error > STRICT_TOL {
        failures.push(format!("witness distance off by {}", g12(o.witness_error)));
    }
    if o.witness_residual > STRICT_TOL || r.best_unitary.cyclicity_residual > STRICT_TOL {
        failures.push("non-cyclic unitary".into());
    }
    if o.bound_excess > STRICT_TOL {
        failures.push(format!("purity bound exceeded by {}", g12(o.bound_excess)));
    }
    Ok(Outcome { failures, ..o })
}

#[derive(Serialize)]
struct Replay<'a> {
    schema: &'static str,
    family: &'a str,
    instance: usize,
    verify_seed: u64,
    oracle_seed: u64,
    parameters: &'a serde_json::Value,
    outcome: &'a Outcome,
    #[serde(flatten)]
    state: StateFile,
}

fn write_replay(dir: &PathBuf, case: &Case, seed: u64, fi: usize, o: &Outcome) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(format!("fudist-replay-{}-{}.json", case.family, case.index));
    let replay = Replay {
        schema: SCHEMA,
        family: case.family,
        instance: case.index,
        verify_seed: seed,
        oracle_seed: oracle_seed(seed, fi, case.index),
        parameters: &case.parameters,
        outcome: o,
        state: StateFile::from(&case.state),
    };
    let text = serde_json::to_string_pretty(&replay).expect("replay serializes");
    fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn run_family(fi: usize, args: &VerifyArgs) -> CliResult<Vec<(Case, Outcome)>> {
    let corrupt = args.inject_fault.as_deref() == Some(FAMILIES[fi]);
    let one = |i: usize| -> CliResult<(Case, Outcome)> {
        let case = make_case(fi, i, args.seed)?;
        let o = check_case(&case, args.seed, fi, corrupt)?;
        Ok((case, o))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..args.instances).into_par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..args.instances).map(one).collect()
    }
}

/// Writes the summary table to `out`; replay paths go to `err`.
pub fn run_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    if args.instances == 0 {
        return Err(CliError::Usage("--instances must be at least 1".into()));
    }
    if let Some(f) = &args.inject_fault {
        if !FAMILIES.contains(&f.as_str()) {
            return Err(CliError::Usage(format!("unknown family {f} for fault injection")));
        }
    }
    writeln!(out, "# {SCHEMA} verify seed={} instances={}", args.seed, args.instances)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "family",
        "instances",
        "passed",
        "max_discrepancy",
        "max_oracle_excess",
        "max_witness_error",
        "max_bound_excess",
        "status",
    ])?;
    let mut total = 0;
    let mut passed_total = 0;
    let mut failing = Vec::new();
    for (fi, family) in FAMILIES.iter().enumerate() {
        let results = run_family(fi, args)?;
        let max = |f: fn(&Outcome) -> f64| results.iter().map(|(_, o)| f(o)).fold(f64::NEG_INFINITY, f64::max);
        let passed = results.iter().filter(|(_, o)| o.failures.is_empty()).count();
        total += results.len();
        passed_total += passed;
        w.write_record([
            family.to_string(),
            results.len().to_string(),
            passed.to_string(),
            g12(max(|o| o.discrepancy)),
            g12(max(|o| o.oracle_excess)),
            g12(max(|o| o.witness_error)),
            g12(max(|o| o.bound_excess)),
            if passed == results.len() { "PASS" } else { "FAIL" }.to_string(),
        ])?;
        for (case, o) in results {
            if !o.failures.is_empty() {
                let path = write_replay(&args.replay_dir, &case, args.seed, fi, &o)?;
                failing.push(format!("{} #{}: {} (replay {})", case.family, case.index, o.failures.join("; "), path.display()));
            }
        }
    }
    let ok = passed_total == total;
    w.write_record([
        "overall".to_string(),
        total.to_string(),
        passed_total.to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        if ok { "PASS" } else { "FAIL" }.to_string(),
    ])?;
    out.write_all(&w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)?;
    for line in &failing {
        writeln!(err, "{line}")?;
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::VerifyFailed(format!("{} of {total} instances failed", total - passed_total)))
    }
}
