use num_bigint::BigUint;

use super::field::Field;
use crate::error::{Error, Result};

/// A polynomial over F_q as a canonical little-endian coefficient vector:
/// `coeffs[i]` is the coefficient of T^i and the highest stored coefficient
/// is nonzero. The zero polynomial stores no coefficients and has no degree.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: vec![1],
        }
    }

    /// The monomial T.
    pub fn variable(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: vec![0, 1],
        }
    }

    pub fn constant(field: &Field, c: u32) -> Result<Poly> {
        if c >= field.q() {
            return Err(Error::CoefficientOutOfRange {
                value: c as u64,
                q: field.q() as u64,
            });
        }
        Ok(Poly {
            field: field.clone(),
            coeffs: if c == 0 { Vec::new() } else { vec![c] },
        })
    }

    /// Builds from little-endian coefficients, validating the range and
    /// trimming trailing zeros.
    pub fn from_coeffs(field: &Field, mut coeffs: Vec<u32>) -> Result<Poly> {
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= field.q()) {
            return Err(Error::CoefficientOutOfRange {
                value: bad as u64,
                q: field.q() as u64,
            });
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ok(Poly {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading(&self) -> Option<u32> {
        self.coeffs.last().copied()
    }

    /// |F| = q^deg F for nonzero F.
    pub fn norm(&self) -> Option<BigUint> {
        self.degree()
            .map(|d| BigUint::from(self.field.q()).pow(d as u32))
    }

    fn check_same_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, rhs: &Poly) -> Result<Poly> {
        self.check_same_field(rhs)?;
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.add(self.coeff(i), rhs.coeff(i)));
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        Ok(Poly {
            field: f.clone(),
            coeffs: out,
        })
    }

    pub fn sub(&self, rhs: &Poly) -> Result<Poly> {
        self.check_same_field(rhs)?;
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.sub(self.coeff(i), rhs.coeff(i)));
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        Ok(Poly {
            field: f.clone(),
            coeffs: out,
        })
    }

    pub fn mul(&self, rhs: &Poly) -> Result<Poly> {
        self.check_same_field(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let mut out = vec![0u32; self.coeffs.len() + rhs.coeffs.len() - 1];
        mul_raw(&self.field, &self.coeffs, &rhs.coeffs, &mut out);
        Ok(Poly {
            field: self.field.clone(),
            coeffs: out,
        })
    }

    pub fn mul_scalar(&self, c: u32) -> Result<Poly> {
        if c >= self.field.q() {
            return Err(Error::CoefficientOutOfRange {
                value: c as u64,
                q: self.field.q() as u64,
            });
        }
        if c == 0 {
            return Ok(Poly::zero(&self.field));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| self.field.mul(a, c))
            .collect();
        Ok(Poly {
            field: self.field.clone(),
            coeffs,
        })
    }

    /// Euclidean division: returns (quotient, remainder) with
    /// deg r < deg divisor.
    pub fn divrem(&self, rhs: &Poly) -> Result<(Poly, Poly)> {
        self.check_same_field(rhs)?;
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dd = rhs.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(*rhs.coeffs.last().unwrap());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            quot[top - dd] = c;
            if c != 0 {
                for i in 0..=dd {
                    rem[top - dd + i] = f.sub(rem[top - dd + i], f.mul(c, rhs.coeffs[i]));
                }
            }
        }
        rem.truncate(dd);
        while rem.last() == Some(&0) {
            rem.pop();
        }
        while quot.last() == Some(&0) {
            quot.pop();
        }
        Ok((
            Poly {
                field: f.clone(),
                coeffs: quot,
            },
            Poly {
                field: f.clone(),
                coeffs: rem,
            },
        ))
    }

    pub fn rem(&self, m: &Poly) -> Result<Poly> {
        Ok(self.divrem(m)?.1)
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic generator of the ideal (self, rhs); gcd(0, 0) = 0.
    pub fn gcd(&self, rhs: &Poly) -> Result<Poly> {
        self.check_same_field(rhs)?;
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.to_monic().unwrap_or(a))
    }

    pub fn is_coprime(&self, rhs: &Poly) -> Result<bool> {
        Ok(self.gcd(rhs)?.is_one())
    }

    /// lcm normalized monic; errors when either argument is zero.
    pub fn lcm(&self, rhs: &Poly) -> Result<Poly> {
        self.check_same_field(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = self.gcd(rhs)?;
        let (q, r) = self.divrem(&g)?;
        debug_assert!(r.is_zero());
        let prod = q.mul(rhs)?;
        Ok(prod.to_monic().unwrap())
    }

    /// self^k mod m by square-and-multiply.
    pub fn powmod(&self, mut k: u64, m: &Poly) -> Result<Poly> {
        self.check_same_field(m)?;
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut base = self.rem(m)?;
        let mut acc = Poly::one(&self.field).rem(m)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?.rem(m)?;
            }
            base = base.mul(&base)?.rem(m)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Scales by the inverse of the leading coefficient; None for zero.
    pub fn to_monic(&self) -> Option<Poly> {
        let lead = self.leading()?;
        if lead == 1 {
            return Some(self.clone());
        }
        Some(self.mul_scalar(self.field.inv(lead)).unwrap())
    }

    /// Inverse of self modulo m (extended Euclid); NotCoprime when none.
    pub fn invmod(&self, m: &Poly) -> Result<Poly> {
        self.check_same_field(m)?;
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (m.clone(), self.rem(m)?);
        let (mut s0, mut s1) = (Poly::zero(&self.field), Poly::one(&self.field));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1)?)?;
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return Err(Error::NotCoprime);
        }
        // r0 is a nonzero constant: scale s0 by its inverse.
        let c = self.field.inv(r0.coeff(0));
        s0.mul_scalar(c)?.rem(m)
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

/// In-place reduction of `num` modulo the monic `den`; afterwards
/// `num.len() < den.len()` (trailing zeros trimmed).
pub(crate) fn rem_raw(field: &Field, num: &mut Vec<u32>, den: &[u32]) {
    let dd = den.len() - 1;
    while num.len() > dd {
        let lead = *num.last().unwrap();
        let top = num.len() - 1;
        if lead != 0 {
            for i in 0..dd {
                num[top - dd + i] = field.sub(num[top - dd + i], field.mul(lead, den[i]));
            }
        }
        num.pop();
    }
    while num.last() == Some(&0) {
        num.pop();
    }
}

/// All invertible residues mod m (degree < deg m, coprime to m).
pub fn invertible_residues(field: &Field, m: &Poly) -> Result<Vec<Poly>> {
    let md = m
        .degree()
        .ok_or(Error::DivisionByZero)?;
    let mut out = Vec::new();
    for a in enumerate_residues(field, md) {
        if a.is_coprime(m)? {
            out.push(a);
        }
    }
    Ok(out)
}

/// Convolution of canonical coefficient slices into `out`
/// (length a.len()+b.len()-1, zero-filled by the caller).
pub(crate) fn mul_raw(field: &Field, a: &[u32], b: &[u32], out: &mut [u32]) {
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                out[i + j] = field.add(out[i + j], field.mul(ai, bj));
            }
        }
    }
}

/// Dense index of a monic polynomial: `index` = sum of c_i q^i over the
/// non-leading coefficients. encode/decode is a bijection between monic
/// polynomials of degree n and [0, q^n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonicIndex {
    pub degree: usize,
    pub index: u64,
}

pub fn monic_encode(f: &Poly) -> Result<MonicIndex> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let degree = f.degree().unwrap();
    Ok(MonicIndex {
        degree,
        index: encode_monic_coeffs(f.field(), f.coeffs()),
    })
}

pub fn monic_decode(field: &Field, mi: MonicIndex) -> Poly {
    let mut coeffs = Vec::with_capacity(mi.degree + 1);
    decode_monic_coeffs(field, mi.degree, mi.index, &mut coeffs);
    Poly {
        field: field.clone(),
        coeffs,
    }
}

/// q^degree; panics if the count does not fit in u64.
pub fn monic_count(field: &Field, degree: usize) -> u64 {
    (field.q() as u64)
        .checked_pow(degree as u32)
        .expect("monic count exceeds u64")
}

/// Monic polynomials of the given degree in index order.
pub fn enumerate_monics(field: &Field, degree: usize) -> impl Iterator<Item = Poly> + '_ {
    let count = monic_count(field, degree);
    (0..count).map(move |index| monic_decode(field, MonicIndex { degree, index }))
}

pub(crate) fn encode_monic_coeffs(field: &Field, coeffs: &[u32]) -> u64 {
    debug_assert_eq!(coeffs.last(), Some(&1));
    let q = field.q() as u64;
    let mut idx = 0u64;
    for &c in coeffs[..coeffs.len() - 1].iter().rev() {
        idx = idx * q + c as u64;
    }
    idx
}

pub(crate) fn decode_monic_coeffs(field: &Field, degree: usize, index: u64, out: &mut Vec<u32>) {
    let q = field.q() as u64;
    out.clear();
    let mut v = index;
    for _ in 0..degree {
        out.push((v % q) as u32);
        v /= q;
    }
    debug_assert_eq!(v, 0, "index out of range for degree");
    out.push(1);
}

/// All residues mod m, i.e. polynomials of degree < deg m, in index order.
pub fn enumerate_residues(field: &Field, modulus_degree: usize) -> impl Iterator<Item = Poly> + '_ {
    let count = monic_count(field, modulus_degree);
    (0..count).map(move |index| decode_residue(field, modulus_degree, index))
}

/// Decodes a residue (not necessarily monic) of degree < `len` from its
/// base-q digit index.
pub fn decode_residue(field: &Field, len: usize, index: u64) -> Poly {
    let q = field.q() as u64;
    let mut coeffs = Vec::with_capacity(len);
    let mut v = index;
    for _ in 0..len {
        coeffs.push((v % q) as u32);
        v /= q;
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    Poly {
        field: field.clone(),
        coeffs,
    }
}

/// Base-q digit index of a residue of degree < len.
pub fn residue_code(field: &Field, f: &Poly) -> u64 {
    let q = field.q() as u64;
    let mut idx = 0u64;
    for &c in f.coeffs().iter().rev() {
        idx = idx * q + c as u64;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn p(field: &Field, coeffs: &[u32]) -> Poly {
        Poly::from_coeffs(field, coeffs.to_vec()).unwrap()
    }

    #[test]
    fn figure_one_products() {
        let f = f2();
        // (T^3+T+1)(T^3+T^2+T+1) = T^6+T^5+T^3+1, the duplicated entry.
        let a = p(&f, &[1, 1, 0, 1]);
        let b = p(&f, &[1, 1, 1, 1]);
        assert_eq!(a.mul(&b).unwrap(), p(&f, &[1, 0, 0, 1, 0, 1, 1]));
        // (T^3+1)(T^3+T+1) = T^6+T^4+T+1, the top-left entry.
        let c = p(&f, &[1, 0, 0, 1]);
        assert_eq!(c.mul(&a).unwrap(), p(&f, &[1, 1, 0, 0, 1, 0, 1]));
    }

    #[test]
    fn mul_identity() {
        let f = Field::with_size(9).unwrap();
        let a = p(&f, &[5, 7, 2, 1]);
        assert_eq!(a.mul(&Poly::one(&f)).unwrap(), a);
    }

    #[test]
    fn field_mismatch() {
        let a = Poly::one(&f2());
        let b = Poly::one(&Field::prime(3).unwrap());
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch)));
    }

    #[test]
    fn divrem_roundtrip() {
        let f = Field::prime(5).unwrap();
        let a = p(&f, &[3, 1, 4, 1, 2]);
        let b = p(&f, &[2, 0, 3]);
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.degree() < b.degree());
        assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
        assert!(matches!(
            a.divrem(&Poly::zero(&f)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn gcd_lcm() {
        let f = f2();
        let t = Poly::variable(&f);
        let t1 = p(&f, &[1, 1]);
        let a = t.mul(&t1).unwrap(); // T(T+1)
        let b = t.mul(&t).unwrap(); // T^2
        let g = a.gcd(&b).unwrap();
        assert_eq!(g, t);
        let l = a.lcm(&b).unwrap();
        assert_eq!(l, t.mul(&t).unwrap().mul(&t1).unwrap());
        // gcd * lcm = a * b up to leading unit
        assert_eq!(g.mul(&l).unwrap(), a.mul(&b).unwrap());
    }

    #[test]
    fn invmod_works() {
        let f = f2();
        let m = p(&f, &[1, 1, 1]); // T^2+T+1
        let t = Poly::variable(&f);
        let inv = t.invmod(&m).unwrap();
        assert_eq!(t.mul(&inv).unwrap().rem(&m).unwrap(), Poly::one(&f));
        let not_coprime = t.invmod(&t).unwrap_err();
        assert!(matches!(not_coprime, Error::NotCoprime));
    }

    #[test]
    fn monic_index_examples() {
        let f = f2();
        let t2 = p(&f, &[0, 0, 1]);
        assert_eq!(
            monic_encode(&t2).unwrap(),
            MonicIndex {
                degree: 2,
                index: 0
            }
        );
        let t2t1 = p(&f, &[1, 1, 1]);
        assert_eq!(
            monic_encode(&t2t1).unwrap(),
            MonicIndex {
                degree: 2,
                index: 3
            }
        );
        let f3 = Field::prime(3).unwrap();
        let tp2 = p(&f3, &[2, 1]);
        assert_eq!(
            monic_encode(&tp2).unwrap(),
            MonicIndex {
                degree: 1,
                index: 2
            }
        );
        assert!(matches!(
            monic_encode(&p(&f3, &[1, 2])),
            Err(Error::NotMonic)
        ));
    }

    #[test]
    fn enumerate_counts() {
        let f = f2();
        let deg0: Vec<_> = enumerate_monics(&f, 0).collect();
        assert_eq!(deg0, vec![Poly::one(&f)]);
        let deg1: Vec<_> = enumerate_monics(&f, 1).collect();
        assert_eq!(deg1, vec![Poly::variable(&f), p(&f, &[1, 1])]);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(enumerate_monics(&f3, 2).count(), 9);
    }

    #[test]
    fn encode_decode_bijection_exhaustive() {
        for q in [2u64, 3, 4, 5] {
            let f = Field::with_size(q).unwrap();
            for degree in 0..=6usize {
                if monic_count(&f, degree) > 4096 {
                    continue;
                }
                let mut seen = std::collections::BTreeSet::new();
                for (i, poly) in enumerate_monics(&f, degree).enumerate() {
                    let mi = monic_encode(&poly).unwrap();
                    assert_eq!(mi.index, i as u64);
                    assert_eq!(monic_decode(&f, mi), poly);
                    assert!(seen.insert(mi.index));
                }
                assert_eq!(seen.len() as u64, monic_count(&f, degree));
            }
        }
    }

    #[test]
    fn norm_multiplicative() {
        let f = Field::prime(3).unwrap();
        let a = p(&f, &[1, 2, 1]);
        let b = p(&f, &[2, 1]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(
            ab.norm().unwrap(),
            a.norm().unwrap() * b.norm().unwrap()
        );
        assert_eq!(
            ab.degree().unwrap(),
            a.degree().unwrap() + b.degree().unwrap()
        );
    }
}
