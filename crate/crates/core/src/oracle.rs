//! Exhaustive reference synthesis for small search spaces.
//!
//! The oracle enumerates raw prefix/matrix combinations, normalizes each one
//! independently of the slice enumerator, keeps the satisfied non-tautologies
//! and then drops every formula that another one entails semantically.
//! Semantic entailment is decided on a family of structures: every structure
//! when the ground atoms fit in `exhaustive_bits`, a seeded random sample
//! otherwise.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::logic::{
    entails_syntactic, is_tautology, normalize, Binding, Compiled, Formula, Literal, Normalized,
    Quantifier, SortId, Structure, Var,
};
use crate::search::{atoms_over, SearchSpec};

#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Upper limit on raw candidates.
    pub guard: u128,
    /// Structures in the entailment family have per-sort universes from the
    /// variable budget up to budget + `universe_extra`.
    pub universe_extra: u32,
    /// Enumerate all structures of a universe vector when it has at most this
    /// many ground atoms.
    pub exhaustive_bits: u32,
    /// Random structures per universe vector otherwise.
    pub samples: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            guard: 2_000_000,
            universe_extra: 1,
            exhaustive_bits: 14,
            samples: 1024,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub raw_count: u128,
    /// Number of distinct canonical formulas in the space.
    pub canonical_count: usize,
    /// Satisfied canonical formulas that are not syntactic tautologies.
    pub satisfied: Vec<Formula>,
    /// Entailment-maximal members of `satisfied`.
    pub maximal: Vec<Formula>,
}

/// Prefixes whose variables of each sort are `0..k` for some `k` within the
/// budget, with at most `max_exists` existentials.
fn prefixes(spec: &SearchSpec, full_only: bool) -> Vec<Vec<Binding>> {
    let budgets = spec.var_budgets();
    let ranges: Vec<Vec<u8>> = budgets
        .iter()
        .map(|&b| {
            if full_only {
                vec![b]
            } else {
                (0..=b).collect()
            }
        })
        .collect();
    let mut out = Vec::new();
    for counts in ranges.into_iter().multi_cartesian_product() {
        let vars: Vec<Var> = counts
            .iter()
            .enumerate()
            .flat_map(|(s, &n)| (0..n).map(move |i| Var::new(SortId(s as u8), i)))
            .collect();
        if vars.is_empty() {
            continue;
        }
        for qs in (0..vars.len())
            .map(|_| [Quantifier::Forall, Quantifier::Exists])
            .multi_cartesian_product()
        {
            if qs.iter().filter(|q| **q == Quantifier::Exists).count() > spec.max_exists as usize {
                continue;
            }
            out.push(
                vars.iter()
                    .zip(qs)
                    .map(|(v, q)| Binding { var: *v, quant: q })
                    .collect(),
            );
        }
    }
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of ordered cube sequences: each cube a set of 1..=max_and
/// literals, 1..=max_or cubes, at most max_literal literals in total.
fn raw_matrices(num_lits: u128, spec: &SearchSpec) -> u128 {
    let cubes_of: Vec<u128> = (0..=spec.max_and as u128)
        .map(|k| if k == 0 { 0 } else { binomial(num_lits, k) })
        .collect();
    // ways[j][t]: sequences of j cubes using t literals
    let ml = spec.max_literal as usize;
    let mut ways = vec![0u128; ml + 1];
    ways[0] = 1;
    let mut total = 0u128;
    for _ in 0..spec.max_or {
        let mut next = vec![0u128; ml + 1];
        for (t, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for (k, &c) in cubes_of.iter().enumerate().skip(1) {
                if t + k <= ml {
                    next[t + k] = next[t + k].saturating_add(w.saturating_mul(c));
                }
            }
        }
        total = total.saturating_add(next.iter().fold(0u128, |a, b| a.saturating_add(*b)));
        ways = next;
    }
    total
}

/// Candidates before any canonicalization: every prefix combined with every
/// ordered sequence of cubes over the literals of its variables.
pub fn raw_candidate_count(spec: &SearchSpec) -> u128 {
    prefixes(spec, false)
        .iter()
        .map(|p| {
            let vars: Vec<Var> = p.iter().map(|b| b.var).collect();
            let lits = 2 * atoms_over(spec, &vars).len() as u128;
            raw_matrices(lits, spec)
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Every canonical formula of the space, sorted.
pub fn canonical_space(spec: &SearchSpec, guard: u128) -> Result<Vec<Formula>> {
    let raw = raw_candidate_count(spec);
    if raw > guard {
        return Err(Error::OracleGuard {
            count: raw,
            limit: guard,
        });
    }
    // Every smaller prefix is a subsequence of a full one, and normalization
    // drops unused variables, so full prefixes cover the whole space.
    let full = prefixes(spec, true);
    let sets: Vec<BTreeSet<Formula>> = full
        .par_iter()
        .map(|prefix| {
            let vars: Vec<Var> = prefix.iter().map(|b| b.var).collect();
            let lits: Vec<Literal> = atoms_over(spec, &vars)
                .into_iter()
                .flat_map(|a| {
                    let n = a.complement();
                    [a, n]
                })
                .collect();
            let cubes: Vec<Vec<Literal>> = (1..=spec.max_and as usize)
                .flat_map(|k| lits.iter().cloned().combinations(k))
                .collect();
            let mut out = BTreeSet::new();
            let mut pick = Vec::new();
            cube_sets(
                &cubes,
                0,
                spec.max_or as usize,
                spec.max_literal as usize,
                &mut pick,
                &mut |m| {
                    if let Normalized::Formula(f) = normalize(prefix, m.to_vec(), spec.distinct) {
                        if f.num_exists() <= spec.max_exists as usize {
                            out.insert(f);
                        }
                    }
                },
            );
            out
        })
        .collect();
    let mut all = BTreeSet::new();
    for s in sets {
        all.extend(s);
    }
    Ok(all.into_iter().collect())
}

/// Visits every non-empty set of cubes (taken in index order from `start`)
/// with at most `slots` cubes and `budget` literals.
fn cube_sets(
    cubes: &[Vec<Literal>],
    start: usize,
    slots: usize,
    budget: usize,
    pick: &mut Vec<Vec<Literal>>,
    visit: &mut impl FnMut(&[Vec<Literal>]),
) {
    if slots == 0 {
        return;
    }
    for i in start..cubes.len() {
        if cubes[i].len() > budget {
            continue;
        }
        pick.push(cubes[i].clone());
        visit(pick);
        cube_sets(
            cubes,
            i + 1,
            slots - 1,
            budget - cubes[i].len(),
            pick,
            visit,
        );
        pick.pop();
    }
}

/// Structures used to decide entailment between candidates.
pub fn entailment_family(spec: &SearchSpec, config: &OracleConfig) -> Vec<Structure> {
    let sig = spec.signature();
    let ranges: Vec<Vec<u32>> = spec
        .var_budgets()
        .iter()
        .map(|&b| {
            let lo = (b as u32).max(1);
            (lo..=lo + config.universe_extra).collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::new();
    for sizes in ranges.into_iter().multi_cartesian_product() {
        let probe = Structure::new(sig, sizes.clone()).expect("valid universe");
        let bits = probe.atom_count() as u32;
        if bits <= config.exhaustive_bits {
            for code in 0..(1u64 << bits) {
                out.push(Structure::from_code(sig, sizes.clone(), code).expect("valid universe"));
            }
        } else {
            for i in 0..config.samples {
                let density = match i % 4 {
                    0 => 0.5,
                    1 => 0.2,
                    2 => 0.8,
                    _ => rng.gen_range(0.05..0.95),
                };
                out.push(
                    Structure::random(sig, sizes.clone(), density, &mut rng)
                        .expect("valid universe"),
                );
            }
        }
    }
    out
}

/// Truth values of `f` on each structure, packed into words.
pub fn truth_vector(f: &Formula, family: &[Structure]) -> Vec<u64> {
    let c = Compiled::new(f);
    let mut bits = vec![0u64; family.len().div_ceil(64)];
    for (i, m) in family.iter().enumerate() {
        if c.eval(m) {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Reference synthesis: all satisfied canonical non-tautologies, reduced to
/// the members that no other member entails on the family (the canonically
/// least of equivalent members is kept).
pub fn brute_force_oracle(
    spec: &SearchSpec,
    sigma: &[Structure],
    config: &OracleConfig,
) -> Result<OracleResult> {
    for m in sigma {
        spec.check_structure(m)?;
    }
    let raw_count = raw_candidate_count(spec);
    let space = canonical_space(spec, config.guard)?;
    let satisfied: Vec<Formula> = space
        .par_iter()
        .filter(|f| !is_tautology(f))
        .filter(|f| {
            let c = Compiled::new(f);
            sigma.iter().all(|m| c.eval(m))
        })
        .cloned()
        .collect();
    let family = entailment_family(spec, config);
    let vectors: Vec<Vec<u64>> = satisfied
        .par_iter()
        .map(|f| truth_vector(f, &family))
        .collect();
    let keep: Vec<bool> = (0..satisfied.len())
        .into_par_iter()
        .map(|i| {
            !(0..satisfied.len()).any(|j| {
                j != i
                    && subset(&vectors[j], &vectors[i])
                    && (j < i || !subset(&vectors[i], &vectors[j]))
            })
        })
        .collect();
    let maximal = satisfied
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(f, _)| f.clone())
        .collect();
    Ok(OracleResult {
        raw_count,
        canonical_count: space.len(),
        satisfied,
        maximal,
    })
}

/// Outcome of comparing a synthesized set against the oracle.
#[derive(Debug, Clone)]
pub struct DiffReport {
    /// Index into the family of a structure on which the two conjunctions
    /// differ.
    pub counterexample: Option<usize>,
    /// Satisfied formulas not entailed by any member of the synthesized set.
    pub uncovered: Vec<Formula>,
    /// Members of the synthesized set that fail on some input structure.
    pub unsatisfied: Vec<Formula>,
}

impl DiffReport {
    pub fn equivalent(&self) -> bool {
        self.counterexample.is_none() && self.uncovered.is_empty() && self.unsatisfied.is_empty()
    }
}

/// Compares the conjunction of `found` with the conjunction of the oracle's
/// maximal set on `family`, and checks that every satisfied formula is
/// syntactically entailed by a member of `found`.
pub fn diff(
    sigma: &[Structure],
    found: &[Formula],
    oracle: &OracleResult,
    family: &[Structure],
) -> DiffReport {
    let conj = |fs: &[Formula]| -> Vec<u64> {
        let mut acc = vec![u64::MAX; family.len().div_ceil(64)];
        for f in fs {
            for (a, b) in acc.iter_mut().zip(truth_vector(f, family)) {
                *a &= b;
            }
        }
        acc
    };
    let a = conj(found);
    let b = conj(&oracle.maximal);
    let counterexample =
        (0..family.len()).find(|&i| (a[i / 64] >> (i % 64)) & 1 != (b[i / 64] >> (i % 64)) & 1);
    let uncovered = oracle
        .satisfied
        .par_iter()
        .filter(|f| !found.iter().any(|g| entails_syntactic(g, f)))
        .cloned()
        .collect();
    let unsatisfied = found
        .iter()
        .filter(|f| {
            let c = Compiled::new(f);
            !sigma.iter().all(|m| c.eval(m))
        })
        .cloned()
        .collect();
    DiffReport {
        counterexample,
        uncovered,
        unsatisfied,
    }
}
