//! Scheduling of slices: the strength order between slices, its layering,
//! the clause/non-clause split, and the clause-based filter for DNF
//! candidates.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::logic::{
    entails_syntactic, normalize, Compiled, Cube, Formula, Literal, Normalized, Structure,
};
use crate::search::{enumerate_params, SearchSpec, SliceParams};

/// `a` strictly precedes `b`: every formula of `b` can be reached from a
/// formula of `a` by adding variables, turning universals into
/// existentials, deleting literals from cubes and adding cubes.
pub fn precedes(a: &SliceParams, b: &SliceParams) -> bool {
    a != b
        && a.n_exists <= b.n_exists
        && a.t_vars.len() == b.t_vars.len()
        && a.t_vars.iter().zip(&b.t_vars).all(|(x, y)| x <= y)
        && lits_injectable(&a.t_lits, &b.t_lits)
}

/// Whether each cube size of `a` can be matched to a distinct cube size of
/// `b` that is not larger.
fn lits_injectable(a: &[u8], b: &[u8]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a.iter().zip(&b).all(|(x, y)| x >= y)
}

/// Slices whose cubes are all singletons, and the rest.
pub fn split_dnf(spec: &SearchSpec) -> (Vec<SliceParams>, Vec<SliceParams>) {
    enumerate_params(spec)
        .into_iter()
        .partition(SliceParams::is_clause)
}

/// Layers the slices so that every predecessor of a slice sits in an earlier
/// layer; slices inside a layer are pairwise incomparable and sorted.
pub fn split_tem(slices: &[SliceParams]) -> Result<Vec<Vec<SliceParams>>> {
    let n = slices.len();
    let mut indeg = vec![0usize; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j) in (0..n).tuple_combinations() {
        if precedes(&slices[i], &slices[j]) {
            succ[i].push(j);
            indeg[j] += 1;
        } else if precedes(&slices[j], &slices[i]) {
            succ[j].push(i);
            indeg[i] += 1;
        }
    }
    let mut level = vec![0usize; n];
    let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut done = 0;
    while let Some(i) = ready.pop() {
        done += 1;
        for &j in &succ[i] {
            level[j] = level[j].max(level[i] + 1);
            indeg[j] -= 1;
            if indeg[j] == 0 {
                ready.push(j);
            }
        }
    }
    if done != n {
        return Err(Error::SliceCycle);
    }
    let depth = level.iter().max().map_or(0, |m| m + 1);
    let mut levels: Vec<Vec<SliceParams>> = vec![Vec::new(); depth];
    for (i, s) in slices.iter().enumerate() {
        levels[level[i]].push(s.clone());
    }
    for l in &mut levels {
        l.sort();
    }
    Ok(levels)
}

/// Admits a DNF candidate only when each of its derived clauses holds.
///
/// A derived clause that uses every prefix variable normalizes to a clause
/// of the space, and is checked by entailment from the known satisfied
/// clauses; this is exact when `clauses` contains every satisfied clause of
/// the space up to entailment. Under distinct semantics dropping an unused
/// variable changes the meaning of a formula, so a derived clause with
/// unused variables is evaluated on the structures directly.
pub struct DnfFilter<'a> {
    clauses: &'a [Formula],
    sigma: &'a [Structure],
    memo: HashMap<Formula, bool>,
}

impl<'a> DnfFilter<'a> {
    pub fn new(clauses: &'a [Formula], sigma: &'a [Structure]) -> Self {
        DnfFilter {
            clauses,
            sigma,
            memo: HashMap::new(),
        }
    }

    pub fn admits(&mut self, f: &Formula) -> bool {
        for pick in f
            .matrix()
            .iter()
            .map(|c| c.lits().iter())
            .multi_cartesian_product()
        {
            let mut lits: Vec<Literal> = pick.into_iter().cloned().collect();
            lits.sort();
            lits.dedup();
            if lits
                .windows(2)
                .any(|w| w[0].same_atom(&w[1]) && w[0].negated != w[1].negated)
            {
                continue;
            }
            let all_used = f
                .prefix()
                .iter()
                .all(|b| lits.iter().any(|l| l.args.contains(&b.var)));
            let ok = if all_used || !f.distinct() {
                let cubes = lits.into_iter().map(|l| vec![l]).collect();
                let clause = match normalize(f.prefix(), cubes, f.distinct()) {
                    Normalized::Formula(c) => c,
                    Normalized::Tautology => continue,
                    Normalized::Unsatisfiable => return false,
                };
                let clauses = self.clauses;
                *self
                    .memo
                    .entry(clause)
                    .or_insert_with_key(|c| clauses.iter().any(|s| entails_syntactic(s, c)))
            } else {
                let matrix = lits
                    .into_iter()
                    .map(|l| Cube::new(vec![l]).expect("single literal"))
                    .collect();
                let clause = Formula::from_parts_unchecked(f.prefix().to_vec(), matrix, true);
                let sigma = self.sigma;
                *self.memo.entry(clause).or_insert_with_key(|c| {
                    let c = Compiled::new(c);
                    sigma.iter().all(|m| c.eval(m))
                })
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Builds the filter for the DNF phase from the clause phase's satisfied
/// clauses.
pub fn build_from_clauses<'a>(clauses: &'a [Formula], sigma: &'a [Structure]) -> DnfFilter<'a> {
    DnfFilter::new(clauses, sigma)
}
