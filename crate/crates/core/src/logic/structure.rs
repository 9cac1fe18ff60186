use rand::Rng;
use smallvec::SmallVec;

use super::signature::{RelId, Signature, SortId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Table {
    arg_sorts: SmallVec<[SortId; 4]>,
    /// Row-major strides; the last argument varies fastest.
    strides: SmallVec<[u32; 4]>,
    bits: Vec<u64>,
}

/// A finite structure: a universe size per sort (elements `0..n`) and the set
/// of true ground tuples of each relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    sizes: Vec<u32>,
    tables: Vec<Table>,
}

impl Structure {
    /// All relations empty.
    pub fn new(sig: &Signature, sizes: Vec<u32>) -> Result<Self> {
        if sizes.len() != sig.num_sorts() {
            return Err(Error::Signature(format!(
                "structure has {} universes, signature declares {} sorts",
                sizes.len(),
                sig.num_sorts()
            )));
        }
        if let Some(i) = sizes.iter().position(|&n| n == 0) {
            return Err(Error::Signature(format!(
                "universe of sort `{}` is empty",
                sig.sorts()[i].name
            )));
        }
        let tables = sig
            .relations()
            .iter()
            .map(|r| {
                let mut strides: SmallVec<[u32; 4]> = SmallVec::new();
                let mut acc = 1u32;
                for s in r.args.iter().rev() {
                    strides.push(acc);
                    acc *= sizes[s.0 as usize];
                }
                strides.reverse();
                Table {
                    arg_sorts: r.args.iter().copied().collect(),
                    strides,
                    bits: vec![0; (acc as usize).div_ceil(64)],
                }
            })
            .collect();
        Ok(Structure { sizes, tables })
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn size(&self, sort: SortId) -> u32 {
        self.sizes[sort.0 as usize]
    }

    pub fn num_relations(&self) -> usize {
        self.tables.len()
    }

    pub(crate) fn arg_sorts(&self, rel: RelId) -> &[SortId] {
        &self.tables[rel.0 as usize].arg_sorts
    }

    fn index(&self, rel: RelId, tuple: &[u32]) -> Result<usize> {
        let t = self
            .tables
            .get(rel.0 as usize)
            .ok_or_else(|| Error::Signature(format!("unknown relation #{}", rel.0)))?;
        if tuple.len() != t.arg_sorts.len() {
            return Err(Error::Signature(format!(
                "tuple of length {} for relation of arity {}",
                tuple.len(),
                t.arg_sorts.len()
            )));
        }
        let mut idx = 0usize;
        for ((e, s), stride) in tuple.iter().zip(&t.arg_sorts).zip(&t.strides) {
            if *e >= self.sizes[s.0 as usize] {
                return Err(Error::Signature(format!(
                    "element {} out of range for a universe of size {}",
                    e, self.sizes[s.0 as usize]
                )));
            }
            idx += (*e * *stride) as usize;
        }
        Ok(idx)
    }

    pub fn set(&mut self, rel: RelId, tuple: &[u32], value: bool) -> Result<()> {
        let idx = self.index(rel, tuple)?;
        let word = &mut self.tables[rel.0 as usize].bits[idx / 64];
        if value {
            *word |= 1 << (idx % 64);
        } else {
            *word &= !(1 << (idx % 64));
        }
        Ok(())
    }

    pub fn holds(&self, rel: RelId, tuple: &[u32]) -> Result<bool> {
        let idx = self.index(rel, tuple)?;
        Ok(self.bit(rel.0 as usize, idx))
    }

    #[inline]
    pub(crate) fn bit(&self, rel: usize, idx: usize) -> bool {
        (self.tables[rel].bits[idx / 64] >> (idx % 64)) & 1 == 1
    }

    #[inline]
    pub(crate) fn stride(&self, rel: usize, arg: usize) -> u32 {
        self.tables[rel].strides[arg]
    }

    /// Every true tuple of `rel`, in increasing row-major order.
    pub fn tuples(&self, rel: RelId) -> Vec<Vec<u32>> {
        let t = &self.tables[rel.0 as usize];
        let total: u32 = t
            .arg_sorts
            .iter()
            .map(|s| self.sizes[s.0 as usize])
            .product();
        (0..total as usize)
            .filter(|&i| self.bit(rel.0 as usize, i))
            .map(|mut i| {
                t.strides
                    .iter()
                    .map(|&st| {
                        let e = i as u32 / st;
                        i %= st as usize;
                        e
                    })
                    .collect()
            })
            .collect()
    }

    /// Total number of ground atoms of all relations.
    pub fn atom_count(&self) -> usize {
        self.tables
            .iter()
            .map(|t| {
                t.arg_sorts
                    .iter()
                    .map(|s| self.sizes[s.0 as usize] as usize)
                    .product::<usize>()
            })
            .sum()
    }

    /// Builds the structure whose ground atoms (in relation order, row-major)
    /// are the bits of `code`; atoms past the 64th are false.
    pub fn from_code(sig: &Signature, sizes: Vec<u32>, code: u64) -> Result<Self> {
        let mut m = Structure::new(sig, sizes)?;
        let mut bit = 0;
        for t in &mut m.tables {
            let n: usize = t
                .arg_sorts
                .iter()
                .map(|s| m.sizes[s.0 as usize] as usize)
                .product();
            for i in 0..n {
                if code.checked_shr(bit).is_some_and(|c| c & 1 == 1) {
                    t.bits[i / 64] |= 1 << (i % 64);
                }
                bit += 1;
            }
        }
        Ok(m)
    }

    /// Independent coin flip per ground atom.
    pub fn random<R: Rng>(
        sig: &Signature,
        sizes: Vec<u32>,
        density: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut m = Structure::new(sig, sizes)?;
        for t in &mut m.tables {
            let n: usize = t
                .arg_sorts
                .iter()
                .map(|s| m.sizes[s.0 as usize] as usize)
                .product();
            for i in 0..n {
                if rng.gen_bool(density) {
                    t.bits[i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(m)
    }

    pub fn check_signature(&self, sig: &Signature) -> Result<()> {
        let ok = self.sizes.len() == sig.num_sorts()
            && self.tables.len() == sig.relations().len()
            && self
                .tables
                .iter()
                .zip(sig.relations())
                .all(|(t, r)| t.arg_sorts.as_slice() == r.args.as_slice());
        if ok {
            Ok(())
        } else {
            Err(Error::Signature(
                "structure does not match the signature".into(),
            ))
        }
    }
}
