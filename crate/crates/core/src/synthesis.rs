//! Generate, test and prune over the sliced search space.
//!
//! Clause slices run first, layer by layer; satisfied formulas join the
//! pruning store and block every later candidate they entail. DNF slices
//! follow, restricted to candidates whose derived clauses are all covered by
//! satisfied clauses. A final pass keeps only formulas that no other result
//! entails.
//!
//! Every formula has a static discovery key: (phase, slice rank, formula
//! order). Slices inside one layer only see the store as it was after the
//! previous layer plus their own earlier finds, so a blocked candidate is
//! always entailed by a result with a smaller key. Ties between equivalent
//! results go to the smaller key. Together this makes the final set
//! independent of blocking, of the clause filter and of thread count.

use std::time::{Duration, Instant};

use log::{debug, info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::{entails_syntactic, Compiled, Formula, Structure};
use crate::search::{for_each_in_slice, SearchSpec, SliceParams};
use crate::slicing::{split_dnf, split_tem, DnfFilter};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PruningConfig {
    /// Skip candidates entailed by an already satisfied formula.
    pub blocking: bool,
    /// Restrict DNF candidates by the satisfied clauses.
    pub dnf_modulo_clauses: bool,
}

impl Default for PruningConfig {
    fn default() -> Self {
        PruningConfig {
            blocking: true,
            dnf_modulo_clauses: true,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SynthesisConfig {
    pub pruning: PruningConfig,
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
}

/// Satisfied formulas, in discovery order.
#[derive(Debug, Clone, Default)]
pub struct PruningStore {
    formulas: Vec<Formula>,
}

impl PruningStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, f: Formula) {
        self.formulas.push(f);
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn blocks(&self, f: &Formula) -> bool {
        self.formulas.iter().any(|s| entails_syntactic(s, f))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Clause,
    Dnf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceStats {
    pub phase: Phase,
    pub level: usize,
    pub params: SliceParams,
    /// Canonical candidates produced by the enumerator.
    pub generated: u64,
    /// Rejected by the clause filter.
    pub filtered: u64,
    /// Entailed by a satisfied formula.
    pub blocked: u64,
    /// Evaluated against the structures.
    pub tested: u64,
    pub satisfied: u64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct PhaseTimes {
    pub clause_secs: f64,
    pub dnf_secs: f64,
    pub minimize_secs: f64,
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    /// Final clauses, in discovery order.
    pub clauses: Vec<Formula>,
    /// Final non-clause formulas, in discovery order.
    pub formulas: Vec<Formula>,
    /// Every clause found satisfied during the clause phase.
    pub satisfied_clauses: Vec<Formula>,
    pub stats: Vec<SliceStats>,
    pub times: PhaseTimes,
}

impl SynthesisResult {
    /// Clauses followed by non-clause formulas.
    pub fn all(&self) -> Vec<Formula> {
        self.clauses.iter().chain(&self.formulas).cloned().collect()
    }

    pub fn total_tested(&self) -> u64 {
        self.stats.iter().map(|s| s.tested).sum()
    }

    pub fn total_generated(&self) -> u64 {
        self.stats.iter().map(|s| s.generated).sum()
    }
}

/// Candidate evaluation against a fixed set of structures.
struct Checker<'a> {
    sigma: &'a [Structure],
    /// Index of the structure that refuted the previous candidate.
    last_refuter: usize,
}

impl Checker<'_> {
    fn holds(&mut self, f: &Formula) -> bool {
        if self.sigma.is_empty() {
            return true;
        }
        let c = Compiled::new(f);
        if !c.eval(&self.sigma[self.last_refuter]) {
            return false;
        }
        for (i, m) in self.sigma.iter().enumerate() {
            if i != self.last_refuter && !c.eval(m) {
                self.last_refuter = i;
                return false;
            }
        }
        true
    }
}

struct SliceRun {
    satisfied: Vec<Formula>,
    stats: SliceStats,
}

fn run_slice(
    spec: &SearchSpec,
    params: &SliceParams,
    sigma: &[Structure],
    store: Option<&PruningStore>,
    filter_clauses: Option<&[Formula]>,
    phase: Phase,
    level: usize,
) -> SliceRun {
    let mut stats = SliceStats {
        phase,
        level,
        params: params.clone(),
        generated: 0,
        filtered: 0,
        blocked: 0,
        tested: 0,
        satisfied: 0,
    };
    let mut filter = filter_clauses.map(|c| DnfFilter::new(c, sigma));
    let mut checker = Checker {
        sigma,
        last_refuter: 0,
    };
    let mut satisfied = Vec::new();
    for_each_in_slice(spec, params, |f| {
        stats.generated += 1;
        if let Some(filter) = filter.as_mut() {
            if !filter.admits(f) {
                stats.filtered += 1;
                return true;
            }
        }
        if let Some(store) = store {
            if store.blocks(f) || satisfied.iter().any(|s| entails_syntactic(s, f)) {
                stats.blocked += 1;
                return true;
            }
        }
        stats.tested += 1;
        if checker.holds(f) {
            stats.satisfied += 1;
            satisfied.push(f.clone());
        }
        true
    });
    debug!(
        "slice {} {:?}: {} generated, {} filtered, {} blocked, {} tested, {} satisfied",
        params,
        phase,
        stats.generated,
        stats.filtered,
        stats.blocked,
        stats.tested,
        stats.satisfied
    );
    SliceRun { satisfied, stats }
}

/// The satisfied formulas of one slice that no store member entails.
/// Formulas found earlier in the same slice also block later ones.
pub fn fo_syn(
    spec: &SearchSpec,
    params: &SliceParams,
    sigma: &[Structure],
    store: &PruningStore,
) -> Result<Vec<Formula>> {
    for m in sigma {
        spec.check_structure(m)?;
    }
    let phase = if params.is_clause() {
        Phase::Clause
    } else {
        Phase::Dnf
    };
    Ok(run_slice(spec, params, sigma, Some(store), None, phase, 0).satisfied)
}

/// Removes every clause entailed by a non-clause formula.
pub fn filter_implied(clauses: &[Formula], formulas: &[Formula]) -> Vec<Formula> {
    clauses
        .iter()
        .filter(|c| !formulas.iter().any(|f| entails_syntactic(f, c)))
        .cloned()
        .collect()
}

/// Keeps the members no other member dominates. `ψ` dominates `φ` when it
/// entails `φ` and is either strictly stronger or discovered earlier.
/// Input order is discovery order.
pub fn minimize(found: &[Formula]) -> Vec<Formula> {
    let keep: Vec<bool> = found
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            !found.iter().enumerate().any(|(j, g)| {
                j != i && entails_syntactic(g, f) && (j < i || !entails_syntactic(f, g))
            })
        })
        .collect();
    found
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(f, _)| f.clone())
        .collect()
}

fn dedup_structures(sigma: &[Structure]) -> Vec<Structure> {
    let mut seen = std::collections::HashSet::new();
    sigma.iter().filter(|m| seen.insert(*m)).cloned().collect()
}

/// Runs the full synthesis over `spec` against the structures `sigma`.
pub fn force(
    spec: &SearchSpec,
    sigma: &[Structure],
    config: &SynthesisConfig,
) -> Result<SynthesisResult> {
    for m in sigma {
        spec.check_structure(m)?;
    }
    if sigma.is_empty() {
        warn!("no structures given; every candidate is vacuously satisfied");
    }
    let sigma = dedup_structures(sigma);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Spec(format!("cannot start worker threads: {e}")))?;
    pool.install(|| run(spec, &sigma, config.pruning))
}

fn run(spec: &SearchSpec, sigma: &[Structure], pruning: PruningConfig) -> Result<SynthesisResult> {
    let (clause_space, dnf_space) = split_dnf(spec);
    let mut store = PruningStore::new();
    let mut stats = Vec::new();
    let mut times = PhaseTimes::default();

    let start = Instant::now();
    run_phase(
        spec,
        sigma,
        &clause_space,
        Phase::Clause,
        pruning,
        None,
        &mut store,
        &mut stats,
    )?;
    let satisfied_clauses = store.formulas().to_vec();
    times.clause_secs = secs(start.elapsed());
    info!(
        "clause phase: {} slices, {} satisfied clauses",
        clause_space.len(),
        satisfied_clauses.len()
    );

    let start = Instant::now();
    let filter = pruning
        .dnf_modulo_clauses
        .then_some(satisfied_clauses.as_slice());
    run_phase(
        spec,
        sigma,
        &dnf_space,
        Phase::Dnf,
        pruning,
        filter,
        &mut store,
        &mut stats,
    )?;
    times.dnf_secs = secs(start.elapsed());
    info!(
        "dnf phase: {} slices, {} satisfied formulas in total",
        dnf_space.len(),
        store.len()
    );

    let start = Instant::now();
    let kept = minimize(store.formulas());
    let (clauses, formulas): (Vec<Formula>, Vec<Formula>) =
        kept.into_iter().partition(Formula::is_clause);
    let clauses = filter_implied(&clauses, &formulas);
    times.minimize_secs = secs(start.elapsed());

    Ok(SynthesisResult {
        clauses,
        formulas,
        satisfied_clauses,
        stats,
        times,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_phase(
    spec: &SearchSpec,
    sigma: &[Structure],
    slices: &[SliceParams],
    phase: Phase,
    pruning: PruningConfig,
    filter: Option<&[Formula]>,
    store: &mut PruningStore,
    stats: &mut Vec<SliceStats>,
) -> Result<()> {
    for (level, layer) in split_tem(slices)?.into_iter().enumerate() {
        let snapshot: &PruningStore = store;
        let runs: Vec<SliceRun> = layer
            .par_iter()
            .map(|p| {
                let blocking = pruning.blocking.then_some(snapshot);
                run_slice(spec, p, sigma, blocking, filter, phase, level)
            })
            .collect();
        for r in runs {
            for f in r.satisfied {
                store.push(f);
            }
            stats.push(r.stats);
        }
    }
    Ok(())
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}
