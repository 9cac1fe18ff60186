use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::logic::{Signature, SortId, Structure, Var};

/// The bounded search space: a signature, named variables per sort and the
/// size limits of the prenex-DNF formulas considered.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SearchSpec {
    signature: Signature,
    var_names: Vec<Vec<String>>,
    pub max_literal: u8,
    pub max_or: u8,
    pub max_and: u8,
    pub max_exists: u8,
    pub distinct: bool,
}

impl SearchSpec {
    pub fn new(
        signature: Signature,
        var_names: Vec<Vec<String>>,
        max_literal: u8,
        max_or: u8,
        max_and: u8,
        max_exists: u8,
        distinct: bool,
    ) -> Result<Self> {
        if var_names.len() != signature.num_sorts() {
            return Err(Error::Spec(format!(
                "{} variable lists for {} sorts",
                var_names.len(),
                signature.num_sorts()
            )));
        }
        if max_literal == 0 || max_or == 0 || max_and == 0 {
            return Err(Error::Spec(
                "max-literal, max-or and max-and must be positive".into(),
            ));
        }
        let mut seen = HashSet::new();
        for names in &var_names {
            if names.len() > 8 {
                return Err(Error::Spec("at most 8 variables per sort".into()));
            }
            for n in names {
                if !seen.insert(display_name(n)) {
                    return Err(Error::Spec(format!("duplicate variable `{n}`")));
                }
            }
        }
        if var_names.iter().map(Vec::len).sum::<usize>() > 8 {
            return Err(Error::Spec("at most 8 variables in total".into()));
        }
        Ok(SearchSpec {
            signature,
            var_names,
            max_literal,
            max_or,
            max_and,
            max_exists,
            distinct,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn var_budget(&self, sort: SortId) -> u8 {
        self.var_names[sort.0 as usize].len() as u8
    }

    pub fn var_budgets(&self) -> Vec<u8> {
        self.var_names.iter().map(|v| v.len() as u8).collect()
    }

    pub fn var_names(&self) -> &[Vec<String>] {
        &self.var_names
    }

    /// Printed name of a variable: the declared name with its first letter
    /// upper-cased (`n1` prints as `N1`).
    pub fn var_display(&self, v: Var) -> String {
        display_name(&self.var_names[v.sort.0 as usize][v.idx as usize])
    }

    pub fn var_by_display(&self, name: &str) -> Option<Var> {
        self.var_names.iter().enumerate().find_map(|(s, names)| {
            names
                .iter()
                .position(|n| display_name(n) == name)
                .map(|i| Var::new(SortId(s as u8), i as u8))
        })
    }

    /// Each per-sort universe must hold at least as many elements as the
    /// variable budget of that sort, or weakening-based pruning is unsound.
    pub fn check_structure(&self, m: &Structure) -> Result<()> {
        m.check_signature(&self.signature)?;
        for (i, names) in self.var_names.iter().enumerate() {
            if (m.sizes()[i] as usize) < names.len() {
                return Err(Error::Precondition(format!(
                    "universe of sort `{}` has {} elements but the search space uses {} variables of that sort",
                    self.signature.sorts()[i].name,
                    m.sizes()[i],
                    names.len()
                )));
            }
        }
        Ok(())
    }

    /// Same signature, budgets and variable names, different quantification
    /// semantics.
    pub fn with_distinct(&self, distinct: bool) -> Self {
        SearchSpec {
            distinct,
            ..self.clone()
        }
    }
}

fn display_name(n: &str) -> String {
    let mut c = n.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}
