//! Finite fields, polynomial arithmetic over F_q[T], canonical encodings,
//! and enumeration of monic polynomials.

mod field;
mod parse;
mod poly;

pub use field::{Field, MAX_FIELD_SIZE};
pub use parse::{format_poly, parse_poly};
pub use poly::{
    decode_residue, enumerate_monics, enumerate_residues, invertible_residues, monic_count,
    monic_decode, monic_encode, residue_code, MonicIndex, Poly,
};

pub(crate) use field::is_prime_u64;
pub(crate) use poly::{decode_monic_coeffs, encode_monic_coeffs, mul_raw, rem_raw};
