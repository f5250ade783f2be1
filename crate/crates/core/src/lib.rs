//! Difference balanced functions GF(q^n)* → GF(q): finite-field arithmetic,
//! constructions, exact property checkers, group-ring design verification,
//! p-ary sequences and exhaustive search.

pub mod constructions;
pub mod designs;
pub mod error;
pub mod field;
mod poly;
pub mod properties;
pub mod report;
pub mod search;
pub mod sequences;

pub use constructions::FunctionTable;
pub use error::{Error, Result};
pub use field::{Elem, Field, FieldDescriptor};
pub use report::{Property, PropertyReport, Witness};
