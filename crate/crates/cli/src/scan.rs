use std::fs::File;
use std::io::{BufWriter, Write};

use crate::args::{OracleArgs, ScanArgs, StateArgs};
use crate::error::{CliError, CliResult};
use crate::family::{build, resolve_family, scan_parameter};
use crate::report::{analyze_instance, g12, Analysis, SCHEMA};

pub const COLUMNS: [&str; 8] = [
    "param",
    "closed_form_dmax",
    "witness_d",
    "oracle_dmax",
    "bound_classical",
    "bound_purity",
    "chsh_m",
    "verdict",
];

/// `steps` evenly spaced points from `start` to `stop`, endpoints exact.
pub fn grid(start: f64, stop: f64, steps: usize) -> CliResult<Vec<f64>> {
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps {steps} must be at least 2")));
    }
    if !(start < stop) {
        return Err(CliError::Usage(format!("--start {start} must be below --stop {stop}")));
    }
    let h = (stop - start) / (steps - 1) as f64;
    Ok((0..steps).map(|i| if i == steps - 1 { stop } else { start + h * i as f64 }).collect())
}

fn row(param: f64, a: &Analysis) -> Vec<String> {
    let opt = |x: Option<f64>| x.map(g12).unwrap_or_default();
    let witness_d = a
        .closed_form
        .as_ref()
        .and_then(|c| c.witness_d)
        .or(a.shift_witness.as_ref().map(|w| w.d));
    vec![
        g12(param),
        opt(a.closed_form.as_ref().map(|c| c.d_max)),
        opt(witness_d),
        opt(a.oracle.as_ref().map(|o| o.d_max)),
        g12(a.bounds.classical),
        g12(a.bounds.purity),
        opt(a.chsh.as_ref().map(|c| c.m)),
        a.verdict.clone(),
    ]
}

fn analyze_point(state: &StateArgs, oracle: &OracleArgs, p: f64) -> CliResult<Analysis> {
    analyze_instance(&build(state, Some(p))?, oracle)
}

pub fn scan_rows(args: &ScanArgs) -> CliResult<Vec<Vec<String>>> {
    let params = grid(args.start, args.stop, args.steps)?;
    #[cfg(feature = "parallel")]
    let analyses: Vec<CliResult<Analysis>> = {
        use rayon::prelude::*;
        params.par_iter().map(|&p| analyze_point(&args.state, &args.oracle, p)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let analyses: Vec<CliResult<Analysis>> =
        params.iter().map(|&p| analyze_point(&args.state, &args.oracle, p)).collect();
    params.iter().zip(analyses).map(|(&p, a)| Ok(row(p, &a?))).collect()
}

/// Header comment, column names, then one row per grid point.
pub fn write_scan(args: &ScanArgs, out: &mut dyn Write) -> CliResult<()> {
    let family = resolve_family(&args.state)?;
    let rows = scan_rows(args)?;
    writeln!(
        out,
        "# {SCHEMA} scan family={} param={} oracle={} seed={}",
        family.label(),
        scan_parameter(family),
        args.oracle.oracle,
        args.oracle.seed
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn run_scan(args: &ScanArgs, stdout: &mut dyn Write) -> CliResult<()> {
    match &args.output {
        None => write_scan(args, stdout),
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut buf = BufWriter::new(file);
            write_scan(args, &mut buf)?;
            buf.flush()?;
            Ok(())
        }
    }
}
