//! Exact point counts of hypersurfaces over finite fields, random plane
//! slicing, explicit Lang–Weil type bounds and the series refinement of
//! their constants.

pub mod cli;
pub mod components;
pub mod counting;
pub mod error;
pub mod exact;
pub mod gf;
pub mod ledger;
pub mod mpoly;
pub mod refine;
pub mod slicing;
mod upoly;

pub use error::{Error, Result};
pub use gf::{embed, field_of_order, make_field, Elem, Embedding, Field, FieldElement};
pub use mpoly::{Degree, Hypersurface, MultiPoly, Setting};
