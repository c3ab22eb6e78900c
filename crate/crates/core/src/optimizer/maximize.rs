//! Multi-start maximization of the Fu distance over the commutant of ρ_B.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::commutant::{commutant_structure, CommutantStructure};
use super::nelder_mead::{GradientAscent, NelderMead, NelderMeadOptions};
use crate::config::TOL;
use crate::error::{Error, Result};
use crate::fu::{fu_distance, CyclicUnitary};
use crate::linalg::{conjugate_local_b, tensor_product, ComplexMatrix};
use crate::state::BipartiteState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalMethod {
    NelderMead,
    GradientAscent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Restarts on the rayon pool; identical results to `Sequential`.
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Execution::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// On the objective d², across the simplex or per accepted step.
    pub convergence_tol: f64,
    pub seed: u64,
    pub degeneracy_tol: f64,
    pub method: LocalMethod,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 2000,
            convergence_tol: 1e-10,
            seed: 0,
            degeneracy_tol: TOL.degeneracy,
            method: LocalMethod::NelderMead,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::OutOfRange("restarts must be at least 1".into()));
        }
        if !(self.convergence_tol > 0.0) || !(self.degeneracy_tol > 0.0) {
            return Err(Error::OutOfRange("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub d_estimate: f64,
    pub best_unitary: CyclicUnitary,
    pub restarts_used: usize,
    pub converged: Vec<bool>,
    /// Index of the restart that produced the maximum (lowest on ties).
    pub best_restart: usize,
    pub evaluations: usize,
}

/// d² as a function of the commutant parameters, evaluated in the eigenbasis
/// of ρ_B where the commutant is block diagonal.
pub struct FuObjective {
    structure: CommutantStructure,
    rho: ComplexMatrix,
    purity: f64,
    dim_a: usize,
    /// V† W V for a hint W; the candidate is then W·U(params).
    hint: Option<ComplexMatrix>,
}

impl FuObjective {
    pub fn new(state: &BipartiteState, structure: CommutantStructure, hint: Option<&ComplexMatrix>) -> Result<Self> {
        let v = &structure.eigenbasis;
        let local = tensor_product(&ComplexMatrix::identity(state.dim_a()), &v.adjoint());
        let rho = local.matmul(state.rho())?.matmul(&local.adjoint())?;
        let hint = match hint {
            Some(w) => {
                let cu = CyclicUnitary::new(w.clone(), &structure.rho_b)?;
                if !cu.is_cyclic() {
                    return Err(Error::OutOfRange(format!(
                        "hint is not cyclic: residual {:.3e}",
                        cu.cyclicity_residual
                    )));
                }
                Some(v.adjoint().matmul(w)?.matmul(v)?)
            }
            None => None,
        };
        Ok(Self { structure, rho, purity: state.purity(), dim_a: state.dim_a(), hint })
    }

    pub fn param_count(&self) -> usize {
        self.structure.param_count()
    }

    pub fn structure(&self) -> &CommutantStructure {
        &self.structure
    }

    fn block(&self, params: &[f64], use_hint: bool) -> ComplexMatrix {
        let u = self.structure.block_unitary(params).expect("parameter count fixed by caller");
        match (&self.hint, use_hint) {
            (Some(w), true) => w.matmul(&u).expect("same size"),
            _ => u,
        }
    }

    /// Tr ρ² − Tr ρρ_f
    pub fn value(&self, params: &[f64], use_hint: bool) -> f64 {
        let u = self.block(params, use_hint);
        let n = self.structure.dim();
        let rho_f = conjugate_local_b(&self.rho, &u, self.dim_a, n).expect("dims fixed");
        self.purity - self.rho.trace_of_product(&rho_f).expect("square").re
    }

    /// The candidate unitary in the computational basis.
    pub fn unitary(&self, params: &[f64], use_hint: bool) -> Result<CyclicUnitary> {
        let u = self.structure.to_computational(&self.block(params, use_hint));
        CyclicUnitary::new(u, &self.structure.rho_b)
    }
}

#[derive(Debug, Clone)]
pub enum LocalSearch {
    NelderMead(NelderMead),
    GradientAscent(GradientAscent),
}

impl LocalSearch {
    pub fn new<F: Fn(&[f64]) -> f64>(method: LocalMethod, f: &F, start: Vec<f64>, tol: f64, initial_step: f64) -> Self {
        match method {
            LocalMethod::NelderMead => Self::NelderMead(NelderMead::new(f, start, NelderMeadOptions { initial_step, tol })),
            LocalMethod::GradientAscent => Self::GradientAscent(GradientAscent::new(f, start, tol)),
        }
    }

    pub fn best(&self) -> (&[f64], f64) {
        match self {
            Self::NelderMead(s) => s.best(),
            Self::GradientAscent(s) => s.best(),
        }
    }

    pub fn converged(&self) -> bool {
        match self {
            Self::NelderMead(s) => s.converged(),
            Self::GradientAscent(s) => s.converged(),
        }
    }

    pub fn iterations(&self) -> usize {
        match self {
            Self::NelderMead(s) => s.iterations(),
            Self::GradientAscent(s) => s.iterations(),
        }
    }

    pub fn evaluations(&self) -> usize {
        match self {
            Self::NelderMead(s) => s.evaluations(),
            Self::GradientAscent(s) => s.evaluations(),
        }
    }
}

/// One local iteration; returns the change in the best objective value,
/// which is never negative.
pub fn local_search_step<F: Fn(&[f64]) -> f64>(search: &mut LocalSearch, f: &F) -> f64 {
    let before = search.best().1;
    match search {
        LocalSearch::NelderMead(s) => s.step(f),
        LocalSearch::GradientAscent(s) => s.step(f),
    }
    search.best().1 - before
}

struct RestartOutcome {
    value: f64,
    params: Vec<f64>,
    use_hint: bool,
    converged: bool,
    evaluations: usize,
}

/// Per-restart generator: the seed picks the key, the restart index the
/// stream, so restarts never share random numbers and their order is
/// irrelevant.
pub fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn run_restart(obj: &FuObjective, config: &OptimizerConfig, restart: usize) -> RestartOutcome {
    let n = obj.param_count();
    let use_hint = restart == 1 && obj.hint.is_some();
    let start: Vec<f64> = if restart == 0 || use_hint {
        vec![0.0; n]
    } else {
        let mut rng = restart_rng(config.seed, restart);
        (0..n).map(|_| rng.gen_range(-PI..PI)).collect()
    };
    let f = |x: &[f64]| obj.value(x, use_hint);
    let tol = config.convergence_tol;
    let budget = config.max_iterations;

    let mut search = LocalSearch::new(config.method, &f, start, tol, 0.5);
    let mut evaluations = 0;
    run_search(&mut search, &f, budget);
    let mut used = search.iterations();
    // restart the simplex at the optimum until it stops moving
    if config.method == LocalMethod::NelderMead {
        let mut step = 0.05;
        while search.converged() && used < budget {
            let (x, v) = search.best();
            let mut polish = LocalSearch::new(config.method, &f, x.to_vec(), tol, step);
            run_search(&mut polish, &f, budget - used);
            used += polish.iterations().max(1);
            evaluations += search.evaluations();
            let gained = polish.best().1 - v;
            search = polish;
            if gained <= tol {
                break;
            }
            step *= 0.5;
        }
    }
    evaluations += search.evaluations();
    let (x, v) = search.best();
    RestartOutcome {
        value: v,
        params: x.to_vec(),
        use_hint,
        converged: search.converged(),
        evaluations,
    }
}

fn run_search<F: Fn(&[f64]) -> f64>(search: &mut LocalSearch, f: &F, budget: usize) {
    match search {
        LocalSearch::NelderMead(s) => {
            s.run(f, budget);
        }
        LocalSearch::GradientAscent(s) => {
            s.run(f, budget);
        }
    }
}

pub fn maximize_fu(state: &BipartiteState, config: &OptimizerConfig) -> Result<OptimizationResult> {
    maximize_fu_with(state, config, None, Execution::default())
}

/// `hint` is a cyclic unitary the second restart starts from, typically a
/// closed-form witness.
pub fn maximize_fu_with_hint(
    state: &BipartiteState,
    config: &OptimizerConfig,
    hint: &ComplexMatrix,
) -> Result<OptimizationResult> {
    maximize_fu_with(state, config, Some(hint), Execution::default())
}

pub fn maximize_fu_with(
    state: &BipartiteState,
    config: &OptimizerConfig,
    hint: Option<&ComplexMatrix>,
    execution: Execution,
) -> Result<OptimizationResult> {
    config.validate()?;
    let structure = commutant_structure(&state.reduced_b(), config.degeneracy_tol)?;
    let obj = FuObjective::new(state, structure, hint)?;

    let outcomes: Vec<RestartOutcome> = match execution {
        Execution::Sequential => (0..config.restarts).map(|r| run_restart(&obj, config, r)).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..config.restarts).into_par_iter().map(|r| run_restart(&obj, config, r)).collect()
        }
    };

    let mut best = 0;
    for (r, o) in outcomes.iter().enumerate() {
        if o.value > outcomes[best].value {
            best = r;
        }
    }
    let winner = &outcomes[best];
    let best_unitary = obj.unitary(&winner.params, winner.use_hint)?;
    let d_estimate = fu_distance(state, &best_unitary.u)?;
    Ok(OptimizationResult {
        d_estimate,
        best_unitary,
        restarts_used: outcomes.len(),
        converged: outcomes.iter().map(|o| o.converged).collect(),
        best_restart: best,
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fu::{dmax_werner, fu_distance};
    use crate::zoo::werner;

    fn quick(seed: u64) -> OptimizerConfig {
        OptimizerConfig { restarts: 4, max_iterations: 600, ..OptimizerConfig::with_seed(seed) }
    }

    #[test]
    fn product_state_is_zero() {
        let ra = ComplexMatrix::diag_real(&[0.7, 0.3]);
        let rb = ComplexMatrix::diag_real(&[0.6, 0.4]);
        let st = BipartiteState::new(tensor_product(&ra, &rb), 2, 2).unwrap();
        let r = maximize_fu(&st, &quick(1)).unwrap();
        assert!(r.d_estimate <= 1e-6);
    }

    #[test]
    fn werner_qutrit() {
        let st = werner(3, 0.0).unwrap();
        let r = maximize_fu(&st, &OptimizerConfig::with_seed(3)).unwrap();
        assert!((r.d_estimate - 0.5).abs() <= 1e-4, "{}", r.d_estimate);
        assert!(r.d_estimate <= dmax_werner(3, 0.0).unwrap().d_value + 1e-8);
        assert!((fu_distance(&st, &r.best_unitary.u).unwrap() - r.d_estimate).abs() <= 1e-10);
        assert_eq!(r.restarts_used, 32);
        assert_eq!(r.converged.len(), 32);
    }

    #[test]
    fn hint_start_is_stationary() {
        let st = werner(2, 0.0).unwrap();
        let w = dmax_werner(2, 0.0).unwrap().witness.unwrap().u;
        let structure = commutant_structure(&st.reduced_b(), 1e-10).unwrap();
        let obj = FuObjective::new(&st, structure, Some(&w)).unwrap();
        let f = |x: &[f64]| obj.value(x, true);
        let mut s = LocalSearch::new(LocalMethod::NelderMead, &f, vec![0.0; 4], 1e-10, 0.5);
        assert!((s.best().1 - 1.0).abs() < 1e-12);
        assert!(local_search_step(&mut s, &f).abs() <= 1e-10);
    }

    #[test]
    fn sequential_matches_default_execution() {
        let st = werner(2, 0.3).unwrap();
        let a = maximize_fu_with(&st, &quick(9), None, Execution::Sequential).unwrap();
        let b = maximize_fu(&st, &quick(9)).unwrap();
        assert_eq!(a.d_estimate.to_bits(), b.d_estimate.to_bits());
        assert_eq!(a.best_restart, b.best_restart);
    }

    #[test]
    fn gradient_method_reaches_werner_value() {
        let st = werner(2, 0.1).unwrap();
        let cfg = OptimizerConfig { method: LocalMethod::GradientAscent, ..quick(2) };
        let r = maximize_fu(&st, &cfg).unwrap();
        let truth = dmax_werner(2, 0.1).unwrap().d_value;
        assert!((r.d_estimate - truth).abs() <= 2e-4, "{} vs {truth}", r.d_estimate);
    }

    #[test]
    fn rejects_bad_config() {
        let st = werner(2, 0.3).unwrap();
        assert!(maximize_fu(&st, &OptimizerConfig { restarts: 0, ..Default::default() }).is_err());
        assert!(maximize_fu(&st, &OptimizerConfig { convergence_tol: 0.0, ..Default::default() }).is_err());
    }

    #[test]
    fn non_cyclic_hint_rejected() {
        let st = crate::zoo::pseudopure(&crate::zoo::pure_from_schmidt(&[0.8, 0.6], 2, 2).unwrap(), 1.0).unwrap();
        let x = crate::linalg::paulis()[0].clone();
        assert!(maximize_fu_with_hint(&st, &quick(0), &x).is_err());
    }
}
