//! Shared fixtures for the benchmark targets.

use ffmt_core::gfpoly::Field;
use ffmt_core::sieve::SpfTable;

pub fn field(q: u64) -> Field {
    Field::with_size(q).expect("benchmark field")
}

pub fn table(q: u64, max_deg: usize) -> SpfTable {
    SpfTable::build(&field(q), max_deg).expect("benchmark sieve")
}
