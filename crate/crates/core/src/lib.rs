//! Exact SO(3) TQFT representations of mapping class groups over cyclotomic
//! fields.

pub mod cache;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod graph;
pub mod invariants;
pub mod rep;
pub mod skein;
pub mod sl2z;
pub mod slalom;

pub use cyclotomic::{make_field, Field, FieldElement};
pub use error::{Result, TqftError};
