pub mod error;
pub mod arith;
pub mod cli;
pub mod field;
pub mod hyperelliptic;
pub mod poly;
pub mod residues;
pub mod search;

pub use error::{Budget, Error, Result};
pub use field::{Elem, Field, FieldElem};
pub use poly::{enumerate_monic, Factorization, Poly};
