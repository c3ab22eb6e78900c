use std::collections::BTreeMap;
use std::fs;

use fudist_core::fano::fano_decompose;
use fudist_core::fu::{
    bound_upb, dmax_horodecki_a, dmax_pseudopure, dmax_two_qubit_diag_t, dmax_werner, fu_horodecki_alpha,
    CyclicUnitary,
};
use fudist_core::{zoo, BipartiteState, FuReport};

use crate::args::{Family, StateArgs};
use crate::error::{CliError, CliResult};

/// States above this total dimension are never materialized; only closed
/// forms are reported for them.
pub const MAX_STATE_DIM: usize = 100;

/// One fully specified state together with everything known in closed form.
pub struct Instance {
    pub family: Family,
    pub dim_a: usize,
    pub dim_b: usize,
    pub parameters: BTreeMap<&'static str, f64>,
    pub state: Option<BipartiteState>,
    pub closed_form: Option<FuReport>,
    /// ρ_α only: the cyclic-shift unitary and its distance.
    pub shift_witness: Option<(f64, CyclicUnitary)>,
    pub upb_bound: Option<f64>,
}

impl Instance {
    pub fn total_dim(&self) -> usize {
        self.dim_a * self.dim_b
    }
}

pub fn resolve_family(args: &StateArgs) -> CliResult<Family> {
    match (args.family, &args.file) {
        (Some(Family::File), None) => Err(CliError::Usage("--family file needs --file".into())),
        (Some(f), Some(_)) if f != Family::File => {
            Err(CliError::Usage(format!("--file conflicts with --family {}", f.label())))
        }
        (Some(f), _) => Ok(f),
        (None, Some(_)) => Ok(Family::File),
        (None, None) => Err(CliError::Usage("give --family or --file".into())),
    }
}

/// Name of the parameter a scan sweeps for each family.
pub fn scan_parameter(family: Family) -> &'static str {
    match family {
        Family::Pseudopure => "am",
        Family::Werner => "p",
        Family::HorodeckiA => "a",
        Family::HorodeckiAlpha => "alpha",
        Family::Upb | Family::File => "visibility",
    }
}

fn required(v: Option<f64>, flag: &str, family: Family) -> CliResult<f64> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --family {}", family.label())))
}

fn pseudopure_coefficients(args: &StateArgs, am: Option<f64>, k: usize) -> CliResult<Vec<f64>> {
    if let Some(c) = &args.coeffs {
        if am.is_some() {
            return Err(CliError::Usage("--coeffs conflicts with --am (a pseudopure scan sweeps a_m)".into()));
        }
        return Ok(c.clone());
    }
    let Some(am) = am else {
        return Ok(vec![1.0 / (k as f64).sqrt(); k]);
    };
    if k == 1 {
        return Ok(vec![am]);
    }
    if !(am <= 1.0 + 1e-12 && am >= 1.0 / (k as f64).sqrt() - 1e-12) {
        return Err(CliError::Usage(format!(
            "a_m = {am} must lie in [1/sqrt({k}), 1] to be the largest of {k} coefficients"
        )));
    }
    let am = am.min(1.0);
    let rest = ((1.0 - am * am).max(0.0) / (k - 1) as f64).sqrt();
    let mut c = vec![am];
    c.extend(std::iter::repeat_n(rest, k - 1));
    Ok(c)
}

fn read_state_file(args: &StateArgs) -> CliResult<BipartiteState> {
    let path = args.file.as_ref().expect("resolved family file");
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(BipartiteState::from_json(&text)?)
}

/// Builds the instance described by `args`; `param` overrides the family's
/// scan parameter.
pub fn build(args: &StateArgs, param: Option<f64>) -> CliResult<Instance> {
    let family = resolve_family(args)?;
    let mut parameters = BTreeMap::new();
    let inst = |dim_a, dim_b| Instance {
        family,
        dim_a,
        dim_b,
        parameters: BTreeMap::new(),
        state: None,
        closed_form: None,
        shift_witness: None,
        upb_bound: None,
    };
    let mut out = match family {
        Family::Pseudopure => {
            let m = args.dim_a.or(args.dim).unwrap_or(2);
            let n = args.dim_b.or(args.dim).unwrap_or(2);
            let eps = args.epsilon.unwrap_or(1.0);
            let coeffs = pseudopure_coefficients(args, param.or(args.am), m.min(n))?;
            parameters.insert("epsilon", eps);
            parameters.insert("am", coeffs.iter().cloned().fold(0.0, f64::max));
            let mut i = inst(m, n);
            i.closed_form = Some(dmax_pseudopure(&coeffs, eps, m, n)?);
            if m * n <= MAX_STATE_DIM {
                i.state = Some(zoo::pseudopure(&zoo::pure_from_schmidt(&coeffs, m, n)?, eps)?);
            }
            i
        }
        Family::Werner => {
            let d = args.dim.unwrap_or(2);
            let p = required(param.or(args.p), "p", family)?;
            parameters.insert("p", p);
            let mut i = inst(d, d);
            i.closed_form = Some(dmax_werner(d, p)?);
            if d * d <= MAX_STATE_DIM {
                i.state = Some(zoo::werner(d, p)?);
            }
            i
        }
        Family::HorodeckiA => {
            let a = required(param.or(args.a), "a", family)?;
            parameters.insert("a", a);
            let mut i = inst(3, 3);
            i.closed_form = Some(dmax_horodecki_a(a)?);
            i.state = Some(zoo::horodecki_rho_a(a)?);
            i
        }
        Family::HorodeckiAlpha => {
            let alpha = required(param.or(args.alpha), "alpha", family)?;
            parameters.insert("alpha", alpha);
            let mut i = inst(3, 3);
            i.shift_witness = Some(fu_horodecki_alpha(alpha)?);
            i.state = Some(zoo::horodecki_rho_alpha(alpha)?);
            i
        }
        Family::Upb | Family::File => {
            let v = param.unwrap_or(1.0);
            let base = if family == Family::Upb { zoo::upb_tiles_state() } else { read_state_file(args)? };
            let state = if param.is_some() { base.with_white_noise(v)? } else { base };
            parameters.insert("visibility", v);
            let mut i = inst(state.dim_a(), state.dim_b());
            if family == Family::Upb && v == 1.0 {
                i.upb_bound = Some(bound_upb(9, zoo::upb_tiles_vectors().len())?);
            }
            if state.dim_a() == 2 && state.dim_b() == 2 {
                let f = fano_decompose(&state);
                if f.max_off_diagonal() < 1e-10 {
                    i.closed_form = Some(dmax_two_qubit_diag_t(&f)?);
                }
            }
            i.state = Some(state);
            i
        }
    };
    out.parameters = parameters;
    Ok(out)
}
