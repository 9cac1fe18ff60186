//! Formulas, finite structures, evaluation, syntactic entailment and
//! canonical forms.

mod canon;
mod entail;
mod eval;
mod formula;
mod signature;
mod structure;

pub(crate) use canon::is_symmetry_minimal;
pub use canon::{
    canonicalize, is_canonical, is_tautology, normalize, Canonical, Normalized, RawFormula,
    Rejection,
};
pub use entail::entails_syntactic;
pub use eval::{evaluate, Compiled};
pub use formula::{Args, Binding, Cube, Formula, Literal, Quantifier, Var};
pub use signature::{RelId, Relation, Signature, Sort, SortId};
pub use structure::Structure;
