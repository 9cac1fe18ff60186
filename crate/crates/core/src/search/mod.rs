//! The bounded formula space and its partition into slices.

mod slice;
mod spec;

pub(crate) use slice::atoms_over;
pub use slice::{
    enumerate_params, for_each_in_slice, slice_formulas, slice_size_upper_bound, SliceParams,
    SlicedTemplate,
};
pub use spec::SearchSpec;
