//! Bounded invariant synthesis from sampled reachable states.

pub mod error;
pub mod io;
pub mod logic;
pub mod micro;
pub mod oracle;
pub mod search;
pub mod slicing;
pub mod synthesis;

pub use error::{Error, Result};
