use std::cmp::Ordering;

use smallvec::SmallVec;

use super::signature::{RelId, Signature, SortId};
use crate::error::{Error, Result};

/// A variable: its sort plus its ordinal among the variables of that sort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub sort: SortId,
    pub idx: u8,
}

impl Var {
    pub fn new(sort: SortId, idx: u8) -> Self {
        Var { sort, idx }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binding {
    pub var: Var,
    pub quant: Quantifier,
}

impl Binding {
    pub fn forall(var: Var) -> Self {
        Binding {
            var,
            quant: Quantifier::Forall,
        }
    }

    pub fn exists(var: Var) -> Self {
        Binding {
            var,
            quant: Quantifier::Exists,
        }
    }
}

pub type Args = SmallVec<[Var; 4]>;

/// An atom or its negation. The derived order is the literal order used by
/// canonical forms: relation index, then arguments, then positive before
/// negative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub rel: RelId,
    pub args: Args,
    pub negated: bool,
}

impl Literal {
    pub fn pos(rel: RelId, args: &[Var]) -> Self {
        Literal {
            rel,
            args: args.iter().copied().collect(),
            negated: false,
        }
    }

    pub fn neg(rel: RelId, args: &[Var]) -> Self {
        Literal {
            rel,
            args: args.iter().copied().collect(),
            negated: true,
        }
    }

    pub fn complement(&self) -> Self {
        Literal {
            rel: self.rel,
            args: self.args.clone(),
            negated: !self.negated,
        }
    }

    pub fn same_atom(&self, other: &Literal) -> bool {
        self.rel == other.rel && self.args == other.args
    }

    pub fn rename(&self, map: impl Fn(Var) -> Var) -> Self {
        Literal {
            rel: self.rel,
            args: self.args.iter().map(|v| map(*v)).collect(),
            negated: self.negated,
        }
    }

    /// Bit identifying (relation, polarity); used for cheap entailment filters.
    pub(crate) fn relpol_bit(&self) -> u128 {
        1u128 << (self.rel.0 as u32 * 2 + self.negated as u32)
    }
}

/// A conjunction of literals, kept sorted and duplicate-free. Never contains
/// a literal together with its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cube {
    lits: Vec<Literal>,
}

impl Cube {
    /// Sorts and deduplicates; `None` for a contradictory conjunction.
    pub fn new(mut lits: Vec<Literal>) -> Option<Self> {
        lits.sort();
        lits.dedup();
        // complementary literals are adjacent after sorting
        if lits.windows(2).any(|w| w[0].same_atom(&w[1])) {
            return None;
        }
        Some(Cube { lits })
    }

    pub(crate) fn from_sorted_unchecked(lits: Vec<Literal>) -> Self {
        debug_assert!(lits.windows(2).all(|w| w[0] < w[1]));
        Cube { lits }
    }

    pub fn lits(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// Both cubes are sorted, so this is a linear merge.
    pub fn is_subset_of(&self, other: &Cube) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.lits.iter();
        'outer: for l in &self.lits {
            for m in it.by_ref() {
                match m.cmp(l) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub(crate) fn relpol_mask(&self) -> u128 {
        self.lits.iter().fold(0, |m, l| m | l.relpol_bit())
    }
}

impl Ord for Cube {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.lits.cmp(&other.lits))
    }
}

impl PartialOrd for Cube {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A prenex formula with a DNF matrix.
///
/// `Formula` guarantees structural well-formedness only: the prefix is
/// strictly ordered by (sort, index), every matrix variable is bound and
/// every literal fits the signature. Canonicity is a separate property, see
/// [`crate::logic::canonicalize`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formula {
    prefix: Vec<Binding>,
    matrix: Vec<Cube>,
    distinct: bool,
}

impl Formula {
    pub fn new(
        sig: &Signature,
        prefix: Vec<Binding>,
        matrix: Vec<Cube>,
        distinct: bool,
    ) -> Result<Self> {
        check_prefix_order(&prefix).map_err(Error::Signature)?;
        for cube in &matrix {
            for lit in cube.lits() {
                check_literal(sig, lit)?;
                if let Some(v) = lit
                    .args
                    .iter()
                    .find(|v| !prefix.iter().any(|b| b.var == **v))
                {
                    return Err(Error::Signature(format!(
                        "variable {}#{} is not bound by the prefix",
                        sig.sort(v.sort).name,
                        v.idx
                    )));
                }
            }
        }
        Ok(Formula {
            prefix,
            matrix,
            distinct,
        })
    }

    pub(crate) fn from_parts_unchecked(
        prefix: Vec<Binding>,
        matrix: Vec<Cube>,
        distinct: bool,
    ) -> Self {
        Formula {
            prefix,
            matrix,
            distinct,
        }
    }

    pub fn prefix(&self) -> &[Binding] {
        &self.prefix
    }

    pub fn matrix(&self) -> &[Cube] {
        &self.matrix
    }

    pub fn distinct(&self) -> bool {
        self.distinct
    }

    /// Number of prefix variables of each sort.
    pub fn var_counts(&self, num_sorts: usize) -> Vec<u8> {
        let mut counts = vec![0u8; num_sorts];
        for b in &self.prefix {
            counts[b.var.sort.0 as usize] += 1;
        }
        counts
    }

    pub fn num_exists(&self) -> usize {
        self.prefix
            .iter()
            .filter(|b| b.quant == Quantifier::Exists)
            .count()
    }

    pub fn num_literals(&self) -> usize {
        self.matrix.iter().map(Cube::len).sum()
    }

    /// Cube sizes sorted non-decreasingly.
    pub fn cube_sizes(&self) -> Vec<u8> {
        let mut sizes: Vec<u8> = self.matrix.iter().map(|c| c.len() as u8).collect();
        sizes.sort_unstable();
        sizes
    }

    /// Every cube is a single literal.
    pub fn is_clause(&self) -> bool {
        self.matrix.iter().all(|c| c.len() == 1)
    }

    pub fn position_of(&self, v: Var) -> Option<usize> {
        self.prefix.iter().position(|b| b.var == v)
    }

    pub fn uses(&self, v: Var) -> bool {
        self.matrix
            .iter()
            .any(|c| c.lits().iter().any(|l| l.args.contains(&v)))
    }
}

pub(crate) fn check_prefix_order(prefix: &[Binding]) -> std::result::Result<(), String> {
    if prefix.windows(2).any(|w| w[0].var >= w[1].var) {
        return Err("prefix variables must be ordered by sort, then index, without repeats".into());
    }
    Ok(())
}

pub(crate) fn check_literal(sig: &Signature, lit: &Literal) -> Result<()> {
    if lit.rel.0 as usize >= sig.relations().len() {
        return Err(Error::Signature(format!("unknown relation #{}", lit.rel.0)));
    }
    let rel = sig.relation(lit.rel);
    if rel.arity() != lit.args.len() {
        return Err(Error::Signature(format!(
            "relation `{}` expects {} arguments, got {}",
            rel.name,
            rel.arity(),
            lit.args.len()
        )));
    }
    for (v, s) in lit.args.iter().zip(&rel.args) {
        if v.sort != *s {
            return Err(Error::Signature(format!(
                "argument of sort {} passed to `{}` where {} is expected",
                sig.sort(v.sort).name,
                rel.name,
                sig.sort(*s).name
            )));
        }
    }
    Ok(())
}
