use std::fmt;

use super::field::Field;
use super::poly::Poly;
use crate::error::{Error, Result};

const MAX_EXPONENT: usize = 1 << 20;

/// Parses a polynomial literal. Prime fields accept sums of terms
/// `c*T^k | c*T | T^k | T | c` with coefficients in 0..p; every field
/// accepts the little-endian list form `[c_0,c_1,...,c_d]` of element codes.
/// Repeated powers accumulate.
pub fn parse_poly(text: &str, field: &Field) -> Result<Poly> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::SyntaxError("empty polynomial literal".into()));
    }
    if s.starts_with('[') {
        return parse_list(s, field);
    }
    if field.e() != 1 {
        return Err(Error::SyntaxError(
            "extension fields use the list form [c_0,c_1,...]".into(),
        ));
    }
    let mut coeffs: Vec<u32> = Vec::new();
    for term in s.split('+') {
        let (c, k) = parse_term(term.trim(), field)?;
        if k >= coeffs.len() {
            coeffs.resize(k + 1, 0);
        }
        coeffs[k] = field.add(coeffs[k], c);
    }
    Poly::from_coeffs(field, coeffs)
}

fn parse_term(term: &str, field: &Field) -> Result<(u32, usize)> {
    if term.is_empty() {
        return Err(Error::SyntaxError("empty term".into()));
    }
    let (coeff_part, var_part) = match term.split_once('*') {
        Some((c, v)) => (Some(c.trim()), v.trim()),
        None => (None, term),
    };
    let coeff = match coeff_part {
        Some(c) => parse_coeff(c, field)?,
        None => {
            if !var_part.starts_with('T') {
                // bare constant
                return Ok((parse_coeff(var_part, field)?, 0));
            }
            1
        }
    };
    let exp = match var_part {
        "T" => 1,
        _ => {
            let rest = var_part
                .strip_prefix("T^")
                .ok_or_else(|| Error::SyntaxError(format!("bad term {term:?}")))?;
            let k: usize = rest
                .parse()
                .map_err(|_| Error::SyntaxError(format!("bad exponent {rest:?}")))?;
            if k > MAX_EXPONENT {
                return Err(Error::SyntaxError(format!("exponent {k} too large")));
            }
            k
        }
    };
    Ok((coeff, exp))
}

fn parse_coeff(s: &str, field: &Field) -> Result<u32> {
    let value: u64 = s
        .parse()
        .map_err(|_| Error::SyntaxError(format!("bad coefficient {s:?}")))?;
    if value >= field.q() as u64 {
        return Err(Error::CoefficientOutOfRange {
            value,
            q: field.q() as u64,
        });
    }
    Ok(value as u32)
}

fn parse_list(s: &str, field: &Field) -> Result<Poly> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::SyntaxError("unterminated list literal".into()))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Poly::zero(field));
    }
    let mut coeffs = Vec::new();
    for item in inner.split(',') {
        let value: u64 = item
            .trim()
            .parse()
            .map_err(|_| Error::SyntaxError(format!("bad list entry {item:?}")))?;
        if value >= field.q() as u64 {
            return Err(Error::CoefficientOutOfRange {
                value,
                q: field.q() as u64,
            });
        }
        coeffs.push(value as u32);
    }
    Poly::from_coeffs(field, coeffs)
}

/// Canonical text form: descending powers with zero terms omitted for prime
/// fields, the list form for extension fields.
pub fn format_poly(poly: &Poly) -> String {
    let field = poly.field();
    if field.e() != 1 {
        let items: Vec<String> = poly.coeffs().iter().map(|c| c.to_string()).collect();
        return format!("[{}]", items.join(","));
    }
    if poly.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (k, &c) in poly.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        terms.push(match (c, k) {
            (_, 0) => c.to_string(),
            (1, 1) => "T".into(),
            (1, _) => format!("T^{k}"),
            (_, 1) => format!("{c}*T"),
            (_, _) => format!("{c}*T^{k}"),
        });
    }
    terms.join("+")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {:?}", format_poly(self), self.field())
    }
}
