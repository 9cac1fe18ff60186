use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use super::spec::SearchSpec;
use crate::logic::{is_tautology, Binding, Cube, Formula, Literal, Quantifier, RelId, SortId, Var};

/// One cell of the search-space partition: the exact number of
/// existentials, the exact number of variables used per sort, and the exact
/// sorted tuple of cube sizes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SliceParams {
    pub n_exists: u8,
    pub t_vars: Vec<u8>,
    pub t_lits: Vec<u8>,
}

impl SliceParams {
    pub fn new(n_exists: u8, t_vars: Vec<u8>, t_lits: Vec<u8>) -> Self {
        SliceParams {
            n_exists,
            t_vars,
            t_lits,
        }
    }

    /// The slice a formula belongs to.
    pub fn of(f: &Formula, num_sorts: usize) -> Self {
        SliceParams {
            n_exists: f.num_exists() as u8,
            t_vars: f.var_counts(num_sorts),
            t_lits: f.cube_sizes(),
        }
    }

    pub fn is_clause(&self) -> bool {
        self.t_lits.iter().all(|&k| k == 1)
    }

    pub fn num_vars(&self) -> usize {
        self.t_vars.iter().map(|&n| n as usize).sum()
    }
}

impl fmt::Display for SliceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, ({}), ({}))",
            self.n_exists,
            self.t_vars.iter().join(","),
            self.t_lits.iter().join(",")
        )
    }
}

/// A slice of a particular search space.
#[derive(Debug, Clone, Copy)]
pub struct SlicedTemplate<'a> {
    pub spec: &'a SearchSpec,
    pub params: &'a SliceParams,
}

/// Non-decreasing tuples of cube sizes allowed by the budgets.
fn cube_size_tuples(spec: &SearchSpec) -> Vec<Vec<u8>> {
    fn go(spec: &SearchSpec, cur: &mut Vec<u8>, sum: u8, out: &mut Vec<Vec<u8>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == spec.max_or as usize {
            return;
        }
        let lo = cur.last().copied().unwrap_or(1);
        for k in lo..=spec.max_and {
            if sum + k > spec.max_literal {
                break;
            }
            cur.push(k);
            go(spec, cur, sum + k, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(spec, &mut Vec::new(), 0, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Every feasible slice of the search space: the product of the parameter
/// ranges, keeping only cells that can hold at least one formula.
pub fn enumerate_params(spec: &SearchSpec) -> Vec<SliceParams> {
    let budgets = spec.var_budgets();
    let tls = cube_size_tuples(spec);
    let mut out = Vec::new();
    let tv_ranges: Vec<std::ops::RangeInclusive<u8>> = budgets.iter().map(|&b| 0..=b).collect();
    for tv in tv_ranges.into_iter().multi_cartesian_product() {
        if tv.iter().all(|&n| n == 0) {
            continue;
        }
        for ne in 0..=spec.max_exists {
            for tl in &tls {
                let p = SliceParams::new(ne, tv.clone(), tl.clone());
                if slice_size_upper_bound(spec, &p) > 0 {
                    out.push(p);
                }
            }
        }
    }
    out.sort();
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Prefix variables of a slice, in prefix order.
fn slice_vars(params: &SliceParams) -> Vec<Var> {
    params
        .t_vars
        .iter()
        .enumerate()
        .flat_map(|(s, &n)| (0..n).map(move |i| Var::new(SortId(s as u8), i)))
        .collect()
}

/// All atoms over the given variables, in literal order.
pub(crate) fn atoms_over(spec: &SearchSpec, vars: &[Var]) -> Vec<Literal> {
    let mut out = Vec::new();
    for (ri, rel) in spec.signature().relations().iter().enumerate() {
        let choices: Vec<Vec<Var>> = rel
            .args
            .iter()
            .map(|s| vars.iter().copied().filter(|v| v.sort == *s).collect())
            .collect();
        if choices.iter().any(Vec::is_empty) {
            continue;
        }
        for args in choices.into_iter().multi_cartesian_product() {
            out.push(Literal::pos(RelId(ri as u8), &args));
        }
    }
    out.sort();
    out
}

/// Upper bound on the number of canonical formulas in a slice: prefix
/// choices times per-cube literal choices. Zero when the slice is certainly
/// empty.
pub fn slice_size_upper_bound(spec: &SearchSpec, params: &SliceParams) -> u128 {
    let n = params.num_vars();
    if n == 0 || params.n_exists as usize > n || params.t_lits.is_empty() {
        return 0;
    }
    let vars = slice_vars(params);
    let atoms = atoms_over(spec, &vars);
    let slots: usize = params.t_lits.iter().map(|&k| k as usize).sum();
    // every variable of a sort must be reachable by the available literal slots
    for (s, &need) in params.t_vars.iter().enumerate() {
        if need == 0 {
            continue;
        }
        let per_lit = atoms
            .iter()
            .map(|a| a.args.iter().filter(|v| v.sort.0 as usize == s).count())
            .max()
            .unwrap_or(0);
        if per_lit * slots < need as usize {
            return 0;
        }
    }
    let a = atoms.len() as u128;
    let mut bound = binomial(n as u128, params.n_exists as u128);
    for &k in &params.t_lits {
        if k as u128 > a {
            return 0;
        }
        bound = bound.saturating_mul(binomial(2 * a, k as u128));
    }
    bound
}

/// Quantifier vectors of length `n` with exactly `k` existentials, in
/// lexicographic order (universal first).
fn quantifier_vectors(n: usize, k: usize) -> Vec<Vec<Quantifier>> {
    (0..n)
        .map(|_| [Quantifier::Forall, Quantifier::Exists])
        .multi_cartesian_product()
        .filter(|v| v.iter().filter(|q| **q == Quantifier::Exists).count() == k)
        .collect()
}

struct Candidate {
    cube: Cube,
    var_mask: u16,
}

/// Streams the canonical formulas of one slice, in increasing formula order.
/// The visitor returns `false` to stop early.
pub fn for_each_in_slice(
    spec: &SearchSpec,
    params: &SliceParams,
    mut visit: impl FnMut(&Formula) -> bool,
) {
    if slice_size_upper_bound(spec, params) == 0 {
        return;
    }
    let vars = slice_vars(params);
    let pos_of = |v: &Var| vars.iter().position(|w| w == v).expect("slice variable");
    let lits: Vec<Literal> = atoms_over(spec, &vars)
        .into_iter()
        .flat_map(|a| {
            let n = a.complement();
            [a, n]
        })
        .collect();
    let mut sizes = params.t_lits.clone();
    sizes.sort_unstable();
    let mut by_size: Vec<Vec<Candidate>> = Vec::new();
    for k in 0..=*sizes.last().expect("non-empty") as usize {
        if k == 0 || !sizes.contains(&(k as u8)) {
            by_size.push(Vec::new());
            continue;
        }
        let cands = lits
            .iter()
            .combinations(k)
            .filter_map(|c| {
                let cube = Cube::new(c.into_iter().cloned().collect())?;
                let var_mask = cube
                    .lits()
                    .iter()
                    .flat_map(|l| l.args.iter())
                    .fold(0u16, |m, v| m | 1 << pos_of(v));
                Some(Candidate { cube, var_mask })
            })
            .collect();
        by_size.push(cands);
    }
    let full_mask: u16 = if vars.is_empty() {
        0
    } else {
        (1u16 << vars.len()) - 1
    };

    let mut gen = Generator {
        sizes: &sizes,
        by_size: &by_size,
        full_mask,
        chosen: Vec::with_capacity(sizes.len()),
        prefix: Vec::new(),
        distinct: spec.distinct,
        stop: false,
    };
    for qv in quantifier_vectors(vars.len(), params.n_exists as usize) {
        gen.prefix = vars
            .iter()
            .zip(qv)
            .map(|(v, q)| Binding { var: *v, quant: q })
            .collect();
        gen.rec(0, 0, &mut visit);
        if gen.stop {
            return;
        }
    }
}

struct Generator<'a> {
    sizes: &'a [u8],
    by_size: &'a [Vec<Candidate>],
    full_mask: u16,
    chosen: Vec<(usize, usize)>,
    prefix: Vec<Binding>,
    distinct: bool,
    stop: bool,
}

impl Generator<'_> {
    fn rec(&mut self, pos: usize, mask: u16, visit: &mut impl FnMut(&Formula) -> bool) {
        if self.stop {
            return;
        }
        if pos == self.sizes.len() {
            if mask != self.full_mask {
                return;
            }
            let matrix: Vec<Cube> = self
                .chosen
                .iter()
                .map(|&(k, i)| self.by_size[k][i].cube.clone())
                .collect();
            if !crate::logic::is_symmetry_minimal(&self.prefix, &matrix) {
                return;
            }
            let f = Formula::from_parts_unchecked(self.prefix.clone(), matrix, self.distinct);
            debug_assert!(!is_tautology(&f));
            if !visit(&f) {
                self.stop = true;
            }
            return;
        }
        let k = self.sizes[pos] as usize;
        let start = match self.chosen.last() {
            Some(&(pk, pi)) if pk == k => pi + 1,
            _ => 0,
        };
        let remaining_slots: usize = self.sizes[pos..].iter().map(|&s| s as usize).sum();
        let missing = (self.full_mask & !mask).count_ones() as usize;
        // a literal mentions at most four variables
        if missing > remaining_slots * 4 {
            return;
        }
        for i in start..self.by_size[k].len() {
            let cand = &self.by_size[k][i];
            let absorbed = self
                .chosen
                .iter()
                .any(|&(ck, ci)| ck < k && self.by_size[ck][ci].cube.is_subset_of(&cand.cube));
            if absorbed {
                continue;
            }
            if k == 1 {
                let l = &cand.cube.lits()[0];
                let clash = self.chosen.iter().any(|&(ck, ci)| {
                    ck == 1 && {
                        let m = &self.by_size[1][ci].cube.lits()[0];
                        m.same_atom(l) && m.negated != l.negated
                    }
                });
                if clash {
                    continue;
                }
            }
            self.chosen.push((k, i));
            self.rec(pos + 1, mask | cand.var_mask, visit);
            self.chosen.pop();
            if self.stop {
                return;
            }
        }
    }
}

/// Collects a slice's canonical formulas.
pub fn slice_formulas(spec: &SearchSpec, params: &SliceParams) -> Vec<Formula> {
    let mut out = Vec::new();
    for_each_in_slice(spec, params, |f| {
        out.push(f.clone());
        true
    });
    out
}

impl<'a> SlicedTemplate<'a> {
    pub fn new(spec: &'a SearchSpec, params: &'a SliceParams) -> Self {
        SlicedTemplate { spec, params }
    }

    pub fn upper_bound(&self) -> u128 {
        slice_size_upper_bound(self.spec, self.params)
    }

    pub fn formulas(&self) -> Vec<Formula> {
        slice_formulas(self.spec, self.params)
    }

    /// Membership without enumeration.
    pub fn contains(&self, f: &Formula) -> bool {
        f.distinct() == self.spec.distinct
            && SliceParams::of(f, self.spec.signature().num_sorts()) == *self.params
            && crate::logic::is_canonical(f)
    }
}
