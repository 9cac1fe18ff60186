//! Canonical forms.
//!
//! A canonical formula has sorted, duplicate-free cubes ordered by
//! (size, literals), no cube absorbed by a smaller one, a prefix naming
//! exactly the variables `0..k` of each sort that the matrix uses, and is the
//! least representative among all renamings that permute variables inside a
//! run of same-sort, same-quantifier prefix positions. The least
//! representative is taken first by the per-variable minimum relation index
//! (which makes that profile non-decreasing inside every run) and then by the
//! matrix.

use itertools::Itertools;

use super::formula::{check_literal, check_prefix_order, Binding, Cube, Formula, Literal, Var};
use super::signature::Signature;
use crate::error::Result;

/// Unvalidated formula parts, as produced by a parser or a generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawFormula {
    pub prefix: Vec<Binding>,
    pub matrix: Vec<Vec<Literal>>,
    pub distinct: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    PrefixOrder,
    UnboundVariable,
    UnusedVariable,
    /// A sort's variables are not numbered `0..k`; a renamed variant is canonical.
    VariableNaming,
    Contradiction,
    Tautology,
    /// Cubes out of (size, literal) order; a reordered variant is canonical.
    CubeOrder,
    /// A variable permutation yields a smaller representative.
    Symmetry,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Canonical {
    Accepted(Formula),
    Rejected(Rejection),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    Formula(Formula),
    Tautology,
    /// Every cube was contradictory.
    Unsatisfiable,
}

/// The syntactic tautology rule: an empty cube, or two singleton cubes
/// `{l}` and `{~l}`. Sound, not complete.
pub fn is_tautology(f: &Formula) -> bool {
    matrix_is_tautology(f.matrix())
}

fn matrix_is_tautology(matrix: &[Cube]) -> bool {
    if matrix.iter().any(Cube::is_empty) {
        return true;
    }
    let units: Vec<&Literal> = matrix
        .iter()
        .filter(|c| c.len() == 1)
        .map(|c| &c.lits()[0])
        .collect();
    units
        .iter()
        .tuple_combinations()
        .any(|(a, b)| a.same_atom(b) && a.negated != b.negated)
}

/// Applies the static rules. Duplicate literals, duplicate cubes and cubes
/// absorbed by a smaller cube are removed; any other departure from the
/// canonical form rejects the input.
pub fn canonicalize(sig: &Signature, raw: &RawFormula) -> Result<Canonical> {
    use Canonical::Rejected;
    for lit in raw.matrix.iter().flatten() {
        check_literal(sig, lit)?;
    }
    if check_prefix_order(&raw.prefix).is_err() {
        return Ok(Rejected(Rejection::PrefixOrder));
    }
    for lit in raw.matrix.iter().flatten() {
        if lit
            .args
            .iter()
            .any(|v| !raw.prefix.iter().any(|b| b.var == *v))
        {
            return Ok(Rejected(Rejection::UnboundVariable));
        }
    }
    let mut cubes = Vec::with_capacity(raw.matrix.len());
    for lits in &raw.matrix {
        match Cube::new(lits.clone()) {
            None => return Ok(Rejected(Rejection::Contradiction)),
            Some(c) if c.is_empty() => return Ok(Rejected(Rejection::Tautology)),
            Some(c) => cubes.push(c),
        }
    }
    if cubes.is_empty() {
        return Ok(Rejected(Rejection::Contradiction));
    }
    let mut kept: Vec<Cube> = Vec::with_capacity(cubes.len());
    for c in &cubes {
        if kept.contains(c) {
            continue;
        }
        if cubes.iter().any(|d| d.len() < c.len() && d.is_subset_of(c)) {
            continue;
        }
        kept.push(c.clone());
    }
    if kept.windows(2).any(|w| w[0] >= w[1]) {
        return Ok(Rejected(Rejection::CubeOrder));
    }
    if matrix_is_tautology(&kept) {
        return Ok(Rejected(Rejection::Tautology));
    }
    let f = Formula::from_parts_unchecked(raw.prefix.clone(), kept, raw.distinct);
    if f.prefix().iter().any(|b| !f.uses(b.var)) {
        return Ok(Rejected(Rejection::UnusedVariable));
    }
    if !densely_named(f.prefix()) {
        return Ok(Rejected(Rejection::VariableNaming));
    }
    if !is_symmetry_minimal(f.prefix(), f.matrix()) {
        return Ok(Rejected(Rejection::Symmetry));
    }
    Ok(Canonical::Accepted(f))
}

/// Whether `f` is already in canonical form.
pub fn is_canonical(f: &Formula) -> bool {
    f.matrix().windows(2).all(|w| w[0] < w[1])
        && !f
            .matrix()
            .iter()
            .enumerate()
            .any(|(i, c)| f.matrix()[..i].iter().any(|d| d.is_subset_of(c)))
        && !is_tautology(f)
        && f.prefix().iter().all(|b| f.uses(b.var))
        && densely_named(f.prefix())
        && is_symmetry_minimal(f.prefix(), f.matrix())
}

/// Total canonicalization: the canonical representative of the formula
/// described by the parts. Contradictory cubes are dropped, unused variables
/// are removed from the prefix and the rest are renamed densely.
pub fn normalize(prefix: &[Binding], matrix: Vec<Vec<Literal>>, distinct: bool) -> Normalized {
    let mut cubes: Vec<Cube> = matrix.into_iter().filter_map(Cube::new).collect();
    if cubes.iter().any(Cube::is_empty) {
        return Normalized::Tautology;
    }
    if cubes.is_empty() {
        return Normalized::Unsatisfiable;
    }
    cubes.sort();
    cubes.dedup();
    let mut kept: Vec<Cube> = Vec::with_capacity(cubes.len());
    for c in cubes {
        if !kept.iter().any(|d| d.is_subset_of(&c)) {
            kept.push(c);
        }
    }
    if matrix_is_tautology(&kept) {
        return Normalized::Tautology;
    }

    let used: Vec<Binding> = prefix
        .iter()
        .copied()
        .filter(|b| {
            kept.iter()
                .any(|c| c.lits().iter().any(|l| l.args.contains(&b.var)))
        })
        .collect();
    let mut renamed_prefix = Vec::with_capacity(used.len());
    let mut next = std::collections::HashMap::new();
    let mut map = std::collections::HashMap::new();
    for b in &used {
        let n = next.entry(b.var.sort).or_insert(0u8);
        let nv = Var::new(b.var.sort, *n);
        *n += 1;
        map.insert(b.var, nv);
        renamed_prefix.push(Binding {
            var: nv,
            quant: b.quant,
        });
    }
    let matrix = rename_matrix(&kept, |v| map[&v]);
    let matrix = symmetric_min(&renamed_prefix, matrix);
    Normalized::Formula(Formula::from_parts_unchecked(
        renamed_prefix,
        matrix,
        distinct,
    ))
}

fn densely_named(prefix: &[Binding]) -> bool {
    let mut expected = std::collections::HashMap::new();
    prefix.iter().all(|b| {
        let e = expected.entry(b.var.sort).or_insert(0u8);
        let ok = b.var.idx == *e;
        *e += 1;
        ok
    })
}

fn rename_matrix(matrix: &[Cube], map: impl Fn(Var) -> Var) -> Vec<Cube> {
    let mut out: Vec<Cube> = matrix
        .iter()
        .map(|c| {
            let mut lits: Vec<Literal> = c.lits().iter().map(|l| l.rename(&map)).collect();
            lits.sort();
            Cube::from_sorted_unchecked(lits)
        })
        .collect();
    out.sort();
    out
}

/// Maximal runs of consecutive prefix positions sharing sort and quantifier.
fn quantifier_blocks(prefix: &[Binding]) -> Vec<std::ops::Range<usize>> {
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=prefix.len() {
        if i == prefix.len()
            || prefix[i].var.sort != prefix[start].var.sort
            || prefix[i].quant != prefix[start].quant
        {
            blocks.push(start..i);
            start = i;
        }
    }
    blocks
}

/// Minimum relation index of the literals mentioning each prefix variable.
fn profile(prefix: &[Binding], matrix: &[Cube]) -> Vec<u8> {
    prefix
        .iter()
        .map(|b| {
            matrix
                .iter()
                .flat_map(|c| c.lits())
                .filter(|l| l.args.contains(&b.var))
                .map(|l| l.rel.0)
                .min()
                .unwrap_or(u8::MAX)
        })
        .collect()
}

/// Position-to-position maps that permute variables with equal profile
/// inside a block, composed on top of `base`.
fn tie_permutations(
    blocks: &[std::ops::Range<usize>],
    sorted_profile: &[u8],
    base: Vec<usize>,
) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for b in blocks {
        let mut i = b.start;
        while i < b.end {
            let mut j = i + 1;
            while j < b.end && sorted_profile[j] == sorted_profile[i] {
                j += 1;
            }
            if j - i > 1 {
                groups.push((i..j).collect());
            }
            i = j;
        }
    }
    if groups.is_empty() {
        return vec![base];
    }
    groups
        .iter()
        .map(|g| g.iter().copied().permutations(g.len()).collect::<Vec<_>>())
        .multi_cartesian_product()
        .map(|perms| {
            // target slot t -> t' inside each group
            let mut slot_map: Vec<usize> = (0..base.len()).collect();
            for (g, p) in groups.iter().zip(perms) {
                for (from, to) in g.iter().zip(p) {
                    slot_map[*from] = to;
                }
            }
            base.iter().map(|t| slot_map[*t]).collect()
        })
        .collect()
}

/// `base[i]` = slot of prefix position `i` after sorting every block by
/// profile (stable).
fn profile_sorting_map(blocks: &[std::ops::Range<usize>], prof: &[u8]) -> (Vec<usize>, Vec<u8>) {
    let mut base = vec![0; prof.len()];
    let mut sorted = prof.to_vec();
    for b in blocks {
        let mut order: Vec<usize> = b.clone().collect();
        order.sort_by_key(|&p| prof[p]);
        for (k, p) in order.into_iter().enumerate() {
            base[p] = b.start + k;
            sorted[b.start + k] = prof[p];
        }
    }
    (base, sorted)
}

fn apply_position_map(prefix: &[Binding], matrix: &[Cube], map: &[usize]) -> Vec<Cube> {
    rename_matrix(matrix, |v| {
        let p = prefix
            .iter()
            .position(|b| b.var == v)
            .expect("bound variable");
        prefix[map[p]].var
    })
}

fn symmetric_min(prefix: &[Binding], matrix: Vec<Cube>) -> Vec<Cube> {
    let blocks = quantifier_blocks(prefix);
    if blocks.iter().all(|b| b.len() < 2) {
        return matrix;
    }
    let prof = profile(prefix, &matrix);
    let (base, sorted) = profile_sorting_map(&blocks, &prof);
    tie_permutations(&blocks, &sorted, base)
        .into_iter()
        .map(|m| apply_position_map(prefix, &matrix, &m))
        .min()
        .expect("at least one permutation")
}

pub(crate) fn is_symmetry_minimal(prefix: &[Binding], matrix: &[Cube]) -> bool {
    let blocks = quantifier_blocks(prefix);
    if blocks.iter().all(|b| b.len() < 2) {
        return true;
    }
    let prof = profile(prefix, matrix);
    if blocks
        .iter()
        .any(|b| prof[b.clone()].windows(2).any(|w| w[0] > w[1]))
    {
        return false;
    }
    let identity: Vec<usize> = (0..prefix.len()).collect();
    tie_permutations(&blocks, &prof, identity)
        .into_iter()
        .all(|m| apply_position_map(prefix, matrix, &m).as_slice() >= matrix)
}
