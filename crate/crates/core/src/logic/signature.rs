use std::collections::HashSet;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortId(pub u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelId(pub u8);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sort {
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub name: String,
    pub args: Vec<SortId>,
}

impl Relation {
    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

/// Sorts and relation symbols. Sort and relation ids are their positions in
/// declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    sorts: Vec<Sort>,
    relations: Vec<Relation>,
}

impl Signature {
    pub fn new(sorts: Vec<Sort>, relations: Vec<Relation>) -> Result<Self> {
        if sorts.len() > u8::MAX as usize || relations.len() > 64 {
            return Err(Error::Spec("too many sorts or relations".into()));
        }
        let mut seen = HashSet::new();
        for s in &sorts {
            if !seen.insert(s.name.as_str()) {
                return Err(Error::Spec(format!("duplicate sort `{}`", s.name)));
            }
        }
        let mut seen = HashSet::new();
        for r in &relations {
            if !seen.insert(r.name.as_str()) {
                return Err(Error::Spec(format!("duplicate relation `{}`", r.name)));
            }
            if r.args.is_empty() {
                return Err(Error::Spec(format!(
                    "relation `{}` has no arguments",
                    r.name
                )));
            }
            if let Some(bad) = r.args.iter().find(|s| s.0 as usize >= sorts.len()) {
                return Err(Error::Spec(format!(
                    "relation `{}` uses undeclared sort #{}",
                    r.name, bad.0
                )));
            }
        }
        Ok(Signature { sorts, relations })
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn sort(&self, id: SortId) -> &Sort {
        &self.sorts[id.0 as usize]
    }

    pub fn relation(&self, id: RelId) -> &Relation {
        &self.relations[id.0 as usize]
    }

    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sorts
            .iter()
            .position(|s| s.name == name)
            .map(|i| SortId(i as u8))
    }

    pub fn rel_id(&self, name: &str) -> Option<RelId> {
        self.relations
            .iter()
            .position(|r| r.name == name)
            .map(|i| RelId(i as u8))
    }

    pub fn num_sorts(&self) -> usize {
        self.sorts.len()
    }

    pub fn max_arity(&self) -> usize {
        self.relations
            .iter()
            .map(Relation::arity)
            .max()
            .unwrap_or(0)
    }

    /// Hex SHA-256 over a canonical rendering of the signature.
    pub fn digest(&self, extra: &str) -> String {
        let mut h = Sha256::new();
        for s in &self.sorts {
            h.update(b"sort ");
            h.update(s.name.as_bytes());
            h.update(b"\n");
        }
        for r in &self.relations {
            h.update(b"rel ");
            h.update(r.name.as_bytes());
            for a in &r.args {
                h.update(b" ");
                h.update(self.sort(*a).name.as_bytes());
            }
            h.update(b"\n");
        }
        h.update(extra.as_bytes());
        hex::encode(h.finalize())
    }
}
