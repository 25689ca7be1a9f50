//! Exact computation of character depths for finitely presented groups.
//!
//! The crate covers Fox calculus and Alexander-invariant presentations,
//! exact cyclotomic linear algebra, Reidemeister–Schreier covers, orbifold
//! pencils and fundamental groups of real line arrangements.

pub mod arrangement;
pub mod covers;
pub mod cyclotomic;
pub mod dsl;
pub mod engine;
pub mod error;
pub mod fox;
pub mod invariant;
pub mod laurent;
pub mod linalg;
pub mod orbifold;
pub mod presentation;
pub mod word;

pub use cyclotomic::CyclotomicNumber;
pub use error::{Error, Result};
pub use laurent::{LaurentMatrix, LaurentPoly};
pub use presentation::{Character, GroupHom, GroupPresentation};
pub use word::Word;
