//! The SAT encoding of size-restricted ELQ fitting.

mod catalog;
mod cnf;
mod decode;
mod dimacs;
mod prune;
pub mod symmetry;

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

pub use catalog::{VarCatalog, VarName};
pub use cnf::{build_cnf, disjoint_union, CnfInstance, EncodeOptions, SYMMETRY_LIMIT};
pub use decode::decode;
pub use dimacs::{export_dimacs, parse_dimacs, parse_model, parse_varmap, to_dimacs, varmap};
pub use prune::{prune, prune_example};

use crate::model::{Concept, LabeledExampleSet, Signature};
use crate::sim;
use crate::solver::{SolveResult, Solver};

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("encoding soundness violated: decoded {0} does not fit")]
    Soundness(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundResult {
    Sat(Concept),
    Unsat,
    Timeout,
    /// Not solved: the role signature is empty and `n > 1`.
    Skipped,
}

/// Statistics of one round.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RoundStats {
    pub round: u32,
    pub vars: u32,
    pub clauses: usize,
    pub build_ms: f64,
    pub solve_ms: f64,
    pub conflicts: u64,
    pub outcome: String,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

/// Feeds an instance to the internal solver.
pub fn solve_instance(inst: &CnfInstance, deadline: Option<Instant>) -> (SolveResult, u64) {
    let mut s = Solver::new();
    s.reserve_vars(inst.num_vars() as usize);
    for c in &inst.clauses {
        if !s.add_dimacs_clause(c) {
            return (SolveResult::Unsat, 0);
        }
    }
    let r = s.solve_limited(&[], deadline, None);
    (r, s.stats.conflicts)
}

/// Builds and solves round `n` on an already pruned example set; a
/// satisfying assignment is decoded and checked with [`sim::fits`].
pub fn solve_round(
    e: &LabeledExampleSet,
    sigma: &Signature,
    n: u32,
    opts: EncodeOptions,
    deadline: Option<Instant>,
) -> Result<(RoundResult, RoundStats), EncodeError> {
    let mut stats = RoundStats {
        round: n,
        ..RoundStats::default()
    };
    if n > 1 && sigma.roles.is_empty() {
        stats.outcome = "skipped".into();
        return Ok((RoundResult::Skipped, stats));
    }
    let t0 = Instant::now();
    let inst = build_cnf(e, sigma, n, opts);
    stats.build_ms = ms(t0.elapsed());
    stats.vars = inst.num_vars();
    stats.clauses = inst.num_clauses();
    let t1 = Instant::now();
    let (r, conflicts) = solve_instance(&inst, deadline);
    stats.solve_ms = ms(t1.elapsed());
    stats.conflicts = conflicts;
    let result = match r {
        SolveResult::Sat(model) => {
            let q = decode(&model, &inst.catalog);
            if !sim::fits(&q, e) {
                return Err(EncodeError::Soundness(q.to_string()));
            }
            RoundResult::Sat(q)
        }
        SolveResult::Unsat => RoundResult::Unsat,
        SolveResult::Unknown => RoundResult::Timeout,
    };
    stats.outcome = match result {
        RoundResult::Sat(_) => "sat",
        RoundResult::Unsat => "unsat",
        RoundResult::Timeout => "timeout",
        RoundResult::Skipped => "skipped",
    }
    .into();
    Ok((result, stats))
}
