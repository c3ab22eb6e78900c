//! Numerical maximization of the Fu distance over every cyclic unitary.

pub mod commutant;
pub mod maximize;
pub mod nelder_mead;

pub use commutant::{commutant_structure, cyclic_unitary_from_params, CommutantStructure};
pub use maximize::{
    local_search_step, maximize_fu, maximize_fu_with, maximize_fu_with_hint, restart_rng,
    Execution, FuObjective, LocalMethod, LocalSearch, OptimizationResult, OptimizerConfig,
};
