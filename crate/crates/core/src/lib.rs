//! Exact-arithmetic toolkit for the PR-box theory of non-local boxes:
//! states, effects, reversible transformations, perfect discrimination,
//! purification, and bit-commitment protocol simulation and audits.
//!
//! Every number is a [`Dyadic`] rational, so all comparisons are exact.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod chsh;
pub mod commitment;
pub mod discrimination;
pub mod dyadic;
pub mod error;
pub mod fiducial;
pub mod json;
pub mod purification;
pub mod table;
pub mod tensor;
pub mod transforms;
pub mod validity;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use fiducial::{state_to_table, table_to_state, FiducialConvention};
pub use table::BoxTable;
pub use tensor::{pair, GptTensor, Role};
