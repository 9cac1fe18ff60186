use smallvec::SmallVec;

use super::formula::{Formula, Quantifier};
use super::signature::SortId;
use super::structure::Structure;
use crate::error::{Error, Result};

struct CompiledLit {
    rel: usize,
    slots: SmallVec<[u8; 4]>,
    negated: bool,
}

/// A formula lowered to prefix slots, ready to be checked against many
/// structures.
pub struct Compiled {
    sorts: Vec<SortId>,
    quants: Vec<Quantifier>,
    cubes: Vec<Vec<CompiledLit>>,
    distinct: bool,
}

impl Compiled {
    pub fn new(f: &Formula) -> Self {
        let prefix = f.prefix();
        let cubes = f
            .matrix()
            .iter()
            .map(|c| {
                c.lits()
                    .iter()
                    .map(|l| CompiledLit {
                        rel: l.rel.0 as usize,
                        slots: l
                            .args
                            .iter()
                            .map(|v| f.position_of(*v).expect("bound variable") as u8)
                            .collect(),
                        negated: l.negated,
                    })
                    .collect()
            })
            .collect();
        Compiled {
            sorts: prefix.iter().map(|b| b.var.sort).collect(),
            quants: prefix.iter().map(|b| b.quant).collect(),
            cubes,
            distinct: f.distinct(),
        }
    }

    /// Assumes `m` matches the formula's signature.
    pub fn eval(&self, m: &Structure) -> bool {
        let mut assign: SmallVec<[u32; 8]> = SmallVec::from_elem(0, self.sorts.len());
        self.go(m, 0, &mut assign)
    }

    fn go(&self, m: &Structure, k: usize, assign: &mut SmallVec<[u32; 8]>) -> bool {
        if k == self.sorts.len() {
            return self.matrix(m, assign);
        }
        let sort = self.sorts[k];
        let forall = self.quants[k] == Quantifier::Forall;
        'elems: for e in 0..m.size(sort) {
            if self.distinct {
                for j in 0..k {
                    if self.sorts[j] == sort && assign[j] == e {
                        continue 'elems;
                    }
                }
            }
            assign[k] = e;
            let r = self.go(m, k + 1, assign);
            if forall && !r {
                return false;
            }
            if !forall && r {
                return true;
            }
        }
        // empty or exhausted domain
        forall
    }

    fn matrix(&self, m: &Structure, assign: &[u32]) -> bool {
        self.cubes.iter().any(|cube| {
            cube.iter().all(|l| {
                let mut idx = 0usize;
                for (i, s) in l.slots.iter().enumerate() {
                    idx += (assign[*s as usize] * m.stride(l.rel, i)) as usize;
                }
                m.bit(l.rel, idx) != l.negated
            })
        })
    }
}

/// Whether `m` satisfies `f`. With distinct semantics, same-sort variables
/// range over pairwise-distinct elements.
pub fn evaluate(f: &Formula, m: &Structure) -> Result<bool> {
    for b in f.prefix() {
        if b.var.sort.0 as usize >= m.sizes().len() {
            return Err(Error::Signature(format!(
                "sort #{} is not in the structure",
                b.var.sort.0
            )));
        }
    }
    for cube in f.matrix() {
        for l in cube.lits() {
            if l.rel.0 as usize >= m.num_relations() {
                return Err(Error::Signature(format!(
                    "relation #{} is not in the structure",
                    l.rel.0
                )));
            }
            let sorts = m.arg_sorts(l.rel);
            if sorts.len() != l.args.len() || sorts.iter().zip(&l.args).any(|(s, v)| *s != v.sort) {
                return Err(Error::Signature(format!(
                    "literal over relation #{} does not match the structure",
                    l.rel.0
                )));
            }
        }
    }
    Ok(Compiled::new(f).eval(m))
}
