//! Executable checks of the equivalence chain on concrete formulas:
//! satisfiable iff an acyclic source-to-destination path exists iff the
//! target triple is entailed. Reports carry the raw facts; disagreement is
//! data for the caller (the test suite asserts, this module does not).

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::build::is_consistent;
use crate::closure::{entails_consistent, entails_inconsistent, ClosureError};
use crate::hypergraph::HypergraphError;
use crate::reduction::{
    forced_cyclic_path, path_of_assignment, reduce, ReductionError, ReductionInstance,
};
use crate::sat::{enumerate_assignments, eval_assignment, CnfFormula, SatError};
use crate::search::{find_acyclic_path, validate_path, PathClass};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Wall-clock spent per stage of a chain check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StageTimings {
    pub reduce: Duration,
    pub sat: Duration,
    pub path: Duration,
    pub entailment: Option<Duration>,
}

/// The three independently computed answers for one formula. `entailed` is
/// `None` when the triple set exceeded the entailment budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub formula_id: String,
    pub sat: bool,
    pub path_exists: bool,
    pub entailed: Option<bool>,
    pub agreement: bool,
    pub timings: StageTimings,
}

impl ChainReport {
    /// Key=value rendering with stable key order. Timings are left out so
    /// identical inputs render byte-identically; use
    /// `render_timings` for the measurement lines.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "formula={}", self.formula_id);
        let _ = writeln!(out, "sat={}", self.sat);
        let _ = writeln!(out, "path_exists={}", self.path_exists);
        match self.entailed {
            Some(e) => {
                let _ = writeln!(out, "entailed={e}");
            }
            None => {
                let _ = writeln!(out, "entailed=none");
            }
        }
        let _ = writeln!(out, "agreement={}", self.agreement);
        out
    }

    pub fn render_timings(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "reduce_ms={:.3}", self.timings.reduce.as_secs_f64() * 1e3);
        let _ = writeln!(out, "sat_ms={:.3}", self.timings.sat.as_secs_f64() * 1e3);
        let _ = writeln!(out, "path_ms={:.3}", self.timings.path.as_secs_f64() * 1e3);
        if let Some(d) = self.timings.entailment {
            let _ = writeln!(out, "entailment_ms={:.3}", d.as_secs_f64() * 1e3);
        }
        out
    }
}

/// Runs the three legs of the chain on `f`. Entailment (the expensive leg)
/// only runs when `|R| <= entailment_budget`.
pub fn check_chain(f: &CnfFormula, entailment_budget: usize) -> Result<ChainReport, VerifyError> {
    let mut timings = StageTimings::default();

    let start = Instant::now();
    let inst = reduce(f)?;
    timings.reduce = start.elapsed();

    let start = Instant::now();
    let sat = crate::sat::brute_force_sat(f)?.is_some();
    timings.sat = start.elapsed();

    let start = Instant::now();
    let path_exists = find_acyclic_path(&inst.hypergraph, &inst.source, &inst.dest)?.is_some();
    timings.path = start.elapsed();

    let entailed = if inst.triples.len() <= entailment_budget {
        let start = Instant::now();
        let (yes, _witness) = entails_inconsistent(&inst.triples, &inst.target)?;
        timings.entailment = Some(start.elapsed());
        Some(yes)
    } else {
        None
    };

    let agreement = sat == path_exists && entailed.map_or(true, |e| e == sat);
    Ok(ChainReport {
        formula_id: f.id(),
        sat,
        path_exists,
        entailed,
        agreement,
        timings,
    })
}

/// One satisfying assignment's witness checks: the constructed path must be
/// acyclic, its triples consistent, and the target entailed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCheck {
    pub assignment: String,
    pub path_acyclic: bool,
    pub witness_consistent: bool,
    pub entails_target: bool,
}

impl WitnessCheck {
    pub fn pass(&self) -> bool {
        self.path_acyclic && self.witness_consistent && self.entails_target
    }
}

/// One (falsifying assignment, violated clause) check: the forced wrong-side
/// path must classify as cyclic and its triples must be inconsistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCheck {
    pub assignment: String,
    pub clause: usize,
    pub classified_cyclic: bool,
    pub triples_inconsistent: bool,
}

impl CycleCheck {
    pub fn pass(&self) -> bool {
        self.classified_cyclic && self.triples_inconsistent
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaSuiteReport {
    pub formula_id: String,
    pub witness_checks: Vec<WitnessCheck>,
    pub cycle_checks: Vec<CycleCheck>,
    /// Set when there was nothing to check at all.
    pub vacuous: bool,
}

impl LemmaSuiteReport {
    pub fn all_pass(&self) -> bool {
        self.witness_checks.iter().all(WitnessCheck::pass)
            && self.cycle_checks.iter().all(CycleCheck::pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "formula={}", self.formula_id);
        let _ = writeln!(out, "witness_checks={}", self.witness_checks.len());
        let _ = writeln!(out, "cycle_checks={}", self.cycle_checks.len());
        let _ = writeln!(out, "vacuous={}", self.vacuous);
        let _ = writeln!(out, "all_pass={}", self.all_pass());
        for c in &self.witness_checks {
            let _ = writeln!(out);
            let _ = writeln!(out, "check=witness");
            let _ = writeln!(out, "assignment={}", c.assignment);
            let _ = writeln!(out, "path_acyclic={}", c.path_acyclic);
            let _ = writeln!(out, "witness_consistent={}", c.witness_consistent);
            let _ = writeln!(out, "entails_target={}", c.entails_target);
        }
        for c in &self.cycle_checks {
            let _ = writeln!(out);
            let _ = writeln!(out, "check=cycle");
            let _ = writeln!(out, "assignment={}", c.assignment);
            let _ = writeln!(out, "clause={}", c.clause);
            let _ = writeln!(out, "classified_cyclic={}", c.classified_cyclic);
            let _ = writeln!(out, "triples_inconsistent={}", c.triples_inconsistent);
        }
        out
    }
}

/// Exercises the per-assignment lemmas on `inst`: every satisfying
/// assignment's witness path and triples, and for every (assignment,
/// violated clause) pair the forced cyclic path.
pub fn check_lemma_suite(inst: &ReductionInstance) -> Result<LemmaSuiteReport, VerifyError> {
    let mut witness_checks = Vec::new();
    let mut cycle_checks = Vec::new();
    for v in enumerate_assignments(inst.var_count()) {
        if eval_assignment(&inst.formula, &v)? {
            let path = path_of_assignment(inst, &v)?;
            let class = validate_path(&inst.hypergraph, path.arcs())?;
            let triples = path.triples()?;
            let consistent = is_consistent(&triples);
            let entails = consistent && entails_consistent(&triples, &inst.target)?;
            witness_checks.push(WitnessCheck {
                assignment: v.compact(),
                path_acyclic: class == PathClass::AcyclicPath,
                witness_consistent: consistent,
                entails_target: entails,
            });
        } else {
            for (idx, clause) in inst.formula.clauses().iter().enumerate() {
                let violated = clause.iter().all(|&lit| !v.satisfies_literal(lit));
                if !violated {
                    continue;
                }
                let path = forced_cyclic_path(inst, &v, idx + 1)?;
                let class = validate_path(&inst.hypergraph, path.arcs())?;
                let triples = path.triples()?;
                cycle_checks.push(CycleCheck {
                    assignment: v.compact(),
                    clause: idx + 1,
                    classified_cyclic: class == PathClass::CyclicPath,
                    triples_inconsistent: !is_consistent(&triples),
                });
            }
        }
    }
    let vacuous = witness_checks.is_empty() && cycle_checks.is_empty();
    Ok(LemmaSuiteReport {
        formula_id: inst.formula.id(),
        witness_checks,
        cycle_checks,
        vacuous,
    })
}
