//! Exact computations on multiplication tables and divisor statistics of
//! polynomials over finite fields: prime and rough-polynomial counts, Selberg
//! sieve weights, product sets of arithmetic progressions, and the
//! divisor-degree machinery behind their lower bounds. Everything is desk
//! scale and exact: counts are integers, sums are rationals, and every
//! inequality is checked in exact arithmetic.

pub mod error;
pub mod fordsum;
pub mod gfpoly;
pub mod mtable;
pub mod report;
pub mod rough;
pub mod sieve;
pub mod verify;

pub use error::{Error, Result};
pub use gfpoly::{Field, MonicIndex, Poly};
pub use report::{Relation, Report};
pub use sieve::SpfTable;
