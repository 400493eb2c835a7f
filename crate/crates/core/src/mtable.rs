//! Multiplication-table sets and product sets of arithmetic progressions,
//! computed exactly by marking products in a bit array over monic indices,
//! plus per-polynomial divisor-degree statistics.
//!
//! Two independent algorithms compute |H(n,b)|: product marking over
//! M_b x M_{n-b}, and a direct divisor-existence scan driven by the sieve.
//! The verification suite holds them against each other.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gfpoly::{
    decode_monic_coeffs, encode_monic_coeffs, monic_count, mul_raw, rem_raw, Field, Poly,
};
use crate::sieve::SpfTable;

/// Default cap on in-memory hit-set size, in bits (2^28 bits = 32 MiB).
pub const DEFAULT_HITSET_BITS: u64 = 1 << 28;

const HITSET_MAGIC: &[u8; 4] = b"FFHS";

/// Bit array over the monic polynomials of one degree: bit i is set iff the
/// polynomial with MonicIndex i is attained.
#[derive(Clone)]
pub struct HitSet {
    q: u64,
    n: usize,
    len: u64,
    words: Vec<u64>,
}

impl HitSet {
    pub fn new(field: &Field, n: usize) -> HitSet {
        let len = monic_count(field, n);
        HitSet {
            q: field.q() as u64,
            n,
            len,
            words: vec![0u64; len.div_ceil(64) as usize],
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    #[inline]
    pub fn set(&mut self, index: u64) {
        self.words[(index >> 6) as usize] |= 1 << (index & 63);
    }

    #[inline]
    pub fn get(&self, index: u64) -> bool {
        self.words[(index >> 6) as usize] >> (index & 63) & 1 == 1
    }

    /// Number of marked polynomials.
    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn or_assign(&mut self, other: &HitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Size of the intersection with another hit set of the same shape.
    pub fn intersection_count(&self, other: &HitSet) -> u64 {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }

    pub fn iter_indices(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Raw little-endian export prefixed by magic, q and n, for cross-run
    /// diffing.
    pub fn export(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(HITSET_MAGIC)?;
        w.write_all(&self.q.to_le_bytes())?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        for word in &self.words {
            w.write_all(&word.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn import(path: &Path) -> Result<HitSet> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != HITSET_MAGIC {
            return Err(Error::BadSieveFile("bad hit-set magic".into()));
        }
        let mut u = [0u8; 8];
        r.read_exact(&mut u)?;
        let q = u64::from_le_bytes(u);
        r.read_exact(&mut u)?;
        let n = u64::from_le_bytes(u) as usize;
        let len = q
            .checked_pow(n as u32)
            .ok_or_else(|| Error::BadSieveFile("hit-set too large".into()))?;
        let mut words = vec![0u64; len.div_ceil(64) as usize];
        for word in words.iter_mut() {
            r.read_exact(&mut u)?;
            *word = u64::from_le_bytes(u);
        }
        Ok(HitSet { q, n, len, words })
    }
}

/// An arithmetic progression inside M_degree: the monic polynomials of the
/// given degree congruent to `residue` mod `modulus`. A constant modulus
/// means all of M_degree.
#[derive(Debug, Clone)]
pub struct ApSpec {
    degree: usize,
    residue: Poly,
    modulus: Poly,
}

impl ApSpec {
    pub fn new(degree: usize, residue: Poly, modulus: Poly) -> Result<ApSpec> {
        if residue.field() != modulus.field() {
            return Err(Error::FieldMismatch);
        }
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let modulus = modulus.to_monic().unwrap();
        let residue = residue.rem(&modulus)?;
        Ok(ApSpec {
            degree,
            residue,
            modulus,
        })
    }

    /// All of M_degree.
    pub fn full(field: &Field, degree: usize) -> ApSpec {
        ApSpec {
            degree,
            residue: Poly::zero(field),
            modulus: Poly::one(field),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn residue(&self) -> &Poly {
        &self.residue
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn field(&self) -> &Field {
        self.modulus.field()
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(f.is_monic()
            && f.degree() == Some(self.degree)
            && f.rem(&self.modulus)? == self.residue)
    }

    /// Number of members: q^(degree - deg M) when deg M <= degree.
    pub fn count(&self) -> u64 {
        let md = self.modulus.degree().unwrap();
        if md == 0 {
            return monic_count(self.field(), self.degree);
        }
        if md <= self.degree {
            monic_count(self.field(), self.degree - md)
        } else {
            // only the residue itself can qualify, when it is monic of the
            // right degree
            (self.residue.is_monic() && self.residue.degree() == Some(self.degree)) as u64
        }
    }

    /// Monic indices of the members, ascending. Members are Q*M + A over
    /// monic Q of degree degree - deg M.
    pub fn member_indices(&self) -> Vec<u64> {
        let field = self.field();
        let md = self.modulus.degree().unwrap();
        if md == 0 {
            return (0..monic_count(field, self.degree)).collect();
        }
        if md > self.degree {
            return if self.residue.is_monic() && self.residue.degree() == Some(self.degree) {
                vec![encode_monic_coeffs(field, self.residue.coeffs())]
            } else {
                Vec::new()
            };
        }
        let qd = self.degree - md;
        let mut out = Vec::with_capacity(monic_count(field, qd) as usize);
        let mut qbuf: Vec<u32> = Vec::new();
        let mut prod: Vec<u32> = Vec::new();
        for qi in 0..monic_count(field, qd) {
            decode_monic_coeffs(field, qd, qi, &mut qbuf);
            prod.clear();
            prod.resize(self.degree + 1, 0);
            mul_raw(field, &qbuf, self.modulus.coeffs(), &mut prod);
            for (i, &c) in self.residue.coeffs().iter().enumerate() {
                prod[i] = field.add(prod[i], c);
            }
            out.push(encode_monic_coeffs(field, &prod));
        }
        out.sort_unstable();
        out
    }
}

/// Marks every pairwise product of the two member lists in the hit set.
/// `deg1 + deg2` must equal the hit-set degree.
fn mark_products(
    field: &Field,
    deg1: usize,
    members1: &[u64],
    deg2: usize,
    members2: &[u64],
    hits: &mut HitSet,
) {
    debug_assert_eq!(deg1 + deg2, hits.n);
    let gf2 = field.p() == 2 && field.e() == 1;
    let pairs = members1.len() as u64 * members2.len() as u64;
    let parallel = pairs >= (1 << 20) && rayon::current_num_threads() > 1;

    if gf2 {
        let packed2: Vec<u64> = members2.iter().map(|&i| i | 1 << deg2).collect();
        let n = hits.n;
        let mark_chunk = |chunk: &[u64], hs: &mut HitSet| {
            for &i1 in chunk {
                let a = i1 | 1 << deg1;
                for &b in &packed2 {
                    hs.set(clmul(a, b) ^ (1 << n));
                }
            }
        };
        if parallel {
            let merged = members1
                .par_chunks(members1.len().div_ceil(rayon::current_num_threads()).max(1))
                .map(|chunk| {
                    let mut local = HitSet::new(field, hits.n);
                    mark_chunk(chunk, &mut local);
                    local
                })
                .reduce_with(|mut a, b| {
                    a.or_assign(&b);
                    a
                });
            if let Some(m) = merged {
                hits.or_assign(&m);
            }
        } else {
            mark_chunk(members1, hits);
        }
        return;
    }

    let coeffs2: Vec<Vec<u32>> = members2
        .iter()
        .map(|&i| {
            let mut buf = Vec::new();
            decode_monic_coeffs(field, deg2, i, &mut buf);
            buf
        })
        .collect();
    let mut buf1: Vec<u32> = Vec::new();
    let mut prod: Vec<u32> = Vec::new();
    for &i1 in members1 {
        decode_monic_coeffs(field, deg1, i1, &mut buf1);
        for c2 in &coeffs2 {
            prod.clear();
            prod.resize(deg1 + deg2 + 1, 0);
            mul_raw(field, &buf1, c2, &mut prod);
            hits.set(encode_monic_coeffs(field, &prod));
        }
    }
}

#[inline]
fn clmul(a: u64, mut b: u64) -> u64 {
    let mut out = 0u64;
    while b != 0 {
        let low = b & b.wrapping_neg();
        out ^= a << low.trailing_zeros();
        b ^= low;
    }
    out
}

/// |Omega_1 . Omega_2| with the hit set retained. Errors when the bit array
/// would exceed the budget; use [`product_set_count`] for the sharded route.
pub fn product_set_hits(o1: &ApSpec, o2: &ApSpec, budget_bits: u64) -> Result<HitSet> {
    if o1.field() != o2.field() {
        return Err(Error::FieldMismatch);
    }
    let field = o1.field();
    let n = o1.degree() + o2.degree();
    let bits = (field.q() as u128).pow(n as u32);
    if bits > budget_bits as u128 {
        return Err(Error::BudgetExceeded(format!(
            "hit set needs {bits} bits, budget is {budget_bits}"
        )));
    }
    let mut hits = HitSet::new(field, n);
    mark_products(
        field,
        o1.degree(),
        &o1.member_indices(),
        o2.degree(),
        &o2.member_indices(),
        &mut hits,
    );
    Ok(hits)
}

/// |Omega_1 . Omega_2|: the number of distinct products G_1 G_2. When the
/// full bit array exceeds the budget the index space is partitioned by the
/// leading coefficients into shards processed sequentially, each shard
/// re-scanning the pairs and keeping only products routed to it.
pub fn product_set_count(o1: &ApSpec, o2: &ApSpec, budget_bits: u64) -> Result<u64> {
    match product_set_hits(o1, o2, budget_bits) {
        Ok(hits) => return Ok(hits.count()),
        Err(Error::BudgetExceeded(_)) => {}
        Err(e) => return Err(e),
    }
    let field = o1.field();
    let q = field.q() as u64;
    let n = o1.degree() + o2.degree();
    let mut shard_deg = 0usize;
    while (q as u128).pow((n - shard_deg) as u32) > budget_bits as u128 {
        shard_deg += 1;
    }
    let low_count = monic_count(field, n - shard_deg);
    let members1 = o1.member_indices();
    let members2 = o2.member_indices();
    let mut total = 0u64;
    let mut buf1: Vec<u32> = Vec::new();
    let mut prod: Vec<u32> = Vec::new();
    let coeffs2: Vec<Vec<u32>> = members2
        .iter()
        .map(|&i| {
            let mut buf = Vec::new();
            decode_monic_coeffs(field, o2.degree(), i, &mut buf);
            buf
        })
        .collect();
    for shard in 0..q.pow(shard_deg as u32) {
        let mut hits = HitSet {
            q,
            n: n - shard_deg,
            len: low_count,
            words: vec![0u64; low_count.div_ceil(64) as usize],
        };
        for &i1 in &members1 {
            decode_monic_coeffs(field, o1.degree(), i1, &mut buf1);
            for c2 in &coeffs2 {
                prod.clear();
                prod.resize(n + 1, 0);
                mul_raw(field, &buf1, c2, &mut prod);
                let idx = encode_monic_coeffs(field, &prod);
                if idx / low_count == shard {
                    hits.set(idx % low_count);
                }
            }
        }
        total += hits.count();
    }
    Ok(total)
}

/// |H(n,b)|: monic degree-n polynomials with a monic divisor of degree b,
/// by product marking.
pub fn h_count(field: &Field, n: usize, b: usize, budget_bits: u64) -> Result<u64> {
    check_b(n, b)?;
    product_set_count(
        &ApSpec::full(field, b),
        &ApSpec::full(field, n - b),
        budget_bits,
    )
}

fn check_b(n: usize, b: usize) -> Result<()> {
    if b > n {
        return Err(Error::InvalidParameter(format!(
            "divisor degree {b} exceeds total degree {n}"
        )));
    }
    Ok(())
}

/// |H(n,b;A,M)|: members of H(n,b) congruent to A mod M, by marking then
/// filtering the attained set by residue.
pub fn h_ap_count(
    field: &Field,
    n: usize,
    b: usize,
    a: &Poly,
    m: &Poly,
    budget_bits: u64,
) -> Result<u64> {
    check_b(n, b)?;
    let md = m.degree().ok_or(Error::DivisionByZero)?;
    let hits = product_set_hits(
        &ApSpec::full(field, b),
        &ApSpec::full(field, n - b),
        budget_bits,
    )?;
    if md == 0 {
        return Ok(hits.count());
    }
    let target = a.rem(m)?;
    let mut count = 0;
    let mut buf: Vec<u32> = Vec::new();
    for idx in hits.iter_indices() {
        decode_monic_coeffs(field, n, idx, &mut buf);
        rem_raw(field, &mut buf, m.coeffs());
        if buf == target.coeffs() {
            count += 1;
        }
    }
    Ok(count)
}

/// |H'(n,b;A,M)|: polynomials with a degree-b divisor lying in the class
/// A mod M (the residue constrains the divisor, not the product).
pub fn h_divisor_ap_count(
    field: &Field,
    n: usize,
    b: usize,
    a: &Poly,
    m: &Poly,
    budget_bits: u64,
) -> Result<u64> {
    check_b(n, b)?;
    let omega1 = ApSpec::new(b, a.clone(), m.clone())?;
    product_set_count(&omega1, &ApSpec::full(field, n - b), budget_bits)
}

/// |H(n,b;A1,A2,M1,M2)|: products G_1 G_2 with G_i = A_i mod M_i,
/// G_1 in M_b, G_2 in M_{n-b}.
#[allow(clippy::too_many_arguments)]
pub fn h_two_ap_count(
    field: &Field,
    n: usize,
    b: usize,
    a1: &Poly,
    m1: &Poly,
    a2: &Poly,
    m2: &Poly,
    budget_bits: u64,
) -> Result<u64> {
    check_b(n, b)?;
    let _ = field;
    let omega1 = ApSpec::new(b, a1.clone(), m1.clone())?;
    let omega2 = ApSpec::new(n - b, a2.clone(), m2.clone())?;
    product_set_count(&omega1, &omega2, budget_bits)
}

/// |M(2n)| = |H(2n,n)| and its progression variants.
pub fn m_count(field: &Field, n: usize, budget_bits: u64) -> Result<u64> {
    h_count(field, 2 * n, n, budget_bits)
}

pub fn m_ap_count(field: &Field, n: usize, a: &Poly, m: &Poly, budget_bits: u64) -> Result<u64> {
    h_ap_count(field, 2 * n, n, a, m, budget_bits)
}

pub fn m_divisor_ap_count(
    field: &Field,
    n: usize,
    a: &Poly,
    m: &Poly,
    budget_bits: u64,
) -> Result<u64> {
    h_divisor_ap_count(field, 2 * n, n, a, m, budget_bits)
}

pub fn m_two_ap_count(
    field: &Field,
    n: usize,
    a1: &Poly,
    m1: &Poly,
    a2: &Poly,
    m2: &Poly,
    budget_bits: u64,
) -> Result<u64> {
    h_two_ap_count(field, 2 * n, n, a1, m1, a2, m2, budget_bits)
}

/// Independent route for |H(n,b)|: scan M_n and test divisor existence from
/// the factorization (subset sums of prime-power degrees).
pub fn h_count_scan(table: &SpfTable, n: usize, b: usize) -> Result<u64> {
    check_b(n, b)?;
    table.check_degree(n)?;
    assert!(n < 64, "degree mask is a u64");
    let field = table.field();
    let want = 1u64 << b;
    let mut count = 0;
    for idx in 0..monic_count(field, n) {
        if divisor_degree_mask(table, n, idx) & want != 0 {
            count += 1;
        }
    }
    Ok(count)
}

/// Same scan restricted to F = A mod M.
pub fn h_ap_count_scan(table: &SpfTable, n: usize, b: usize, a: &Poly, m: &Poly) -> Result<u64> {
    check_b(n, b)?;
    table.check_degree(n)?;
    let field = table.field();
    let md = m.degree().ok_or(Error::DivisionByZero)?;
    let target = a.rem(m)?;
    let want = 1u64 << b;
    let mut count = 0;
    let mut buf: Vec<u32> = Vec::new();
    for idx in 0..monic_count(field, n) {
        if divisor_degree_mask(table, n, idx) & want == 0 {
            continue;
        }
        if md > 0 {
            decode_monic_coeffs(field, n, idx, &mut buf);
            rem_raw(field, &mut buf, m.coeffs());
            if buf != target.coeffs() {
                continue;
            }
        }
        count += 1;
    }
    Ok(count)
}

/// Bitmask of attainable divisor degrees of the monic (n, idx): bit d set
/// iff some monic divisor has degree d.
fn divisor_degree_mask(table: &SpfTable, n: usize, idx: u64) -> u64 {
    let mut mask = 1u64;
    for (pd, e) in table.factor_degrees(n, idx) {
        for _ in 0..e {
            mask |= mask << pd;
        }
    }
    mask
}

/// Divisor-degree statistics of one polynomial: the set of attained degrees,
/// its size L, the per-degree divisor counts tau_d, their total tau, and
/// W = sum of tau_d^2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorStats {
    pub degree_set: Vec<usize>,
    pub tau_by_degree: Vec<u64>,
    pub tau: u64,
    pub w: BigUint,
}

impl DivisorStats {
    /// L(H), the number of distinct divisor degrees.
    pub fn distinct_degrees(&self) -> usize {
        self.degree_set.len()
    }
}

/// Statistics from a known factorization given as (prime degree, exponent)
/// pairs with distinct primes.
pub fn divisor_stats_from_factorization(factors: &[(usize, u32)]) -> DivisorStats {
    let total: usize = factors.iter().map(|&(d, e)| d * e as usize).sum();
    let mut tau_by_degree = vec![0u64; total + 1];
    tau_by_degree[0] = 1;
    let mut reached = 0usize;
    for &(d, e) in factors {
        let span = d * e as usize;
        let prev = tau_by_degree.clone();
        for k in 1..=e as usize {
            let shift = k * d;
            for i in 0..=reached.min(total - shift) {
                if prev[i] != 0 {
                    tau_by_degree[i + shift] += prev[i];
                }
            }
        }
        reached += span;
    }
    let degree_set: Vec<usize> = tau_by_degree
        .iter()
        .enumerate()
        .filter(|&(_, &t)| t > 0)
        .map(|(d, _)| d)
        .collect();
    let tau = tau_by_degree.iter().sum();
    let w = tau_by_degree
        .iter()
        .map(|&t| BigUint::from(t) * BigUint::from(t))
        .sum();
    DivisorStats {
        degree_set,
        tau_by_degree,
        tau,
        w,
    }
}

/// Statistics of a monic polynomial via its sieve factorization.
pub fn divisor_stats(table: &SpfTable, h: &Poly) -> Result<DivisorStats> {
    if !h.is_monic() {
        return Err(Error::NotMonic);
    }
    let factors = table.factorize(h)?;
    let degrees: Vec<(usize, u32)> = factors
        .iter()
        .map(|(p, e)| (p.degree().unwrap(), *e))
        .collect();
    Ok(divisor_stats_from_factorization(&degrees))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfpoly::{enumerate_monics, invertible_residues, parse_poly};
    use num_traits::One;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn poly(field: &Field, s: &str) -> Poly {
        parse_poly(s, field).unwrap()
    }

    const BUDGET: u64 = 1 << 22;

    #[test]
    fn figure_one_product_set() {
        let f = f2();
        let o1 = ApSpec::new(3, Poly::one(&f), poly(&f, "T")).unwrap();
        let o2 = ApSpec::new(3, poly(&f, "T+1"), poly(&f, "T^2")).unwrap();
        assert_eq!(o1.count(), 4);
        assert_eq!(o2.count(), 2);
        let hits = product_set_hits(&o1, &o2, BUDGET).unwrap();
        assert_eq!(hits.count(), 7);
        // the duplicated entry is attained
        let dup = poly(&f, "T^6+T^5+T^3+1");
        assert!(hits.get(crate::gfpoly::monic_encode(&dup).unwrap().index));
    }

    #[test]
    fn singleton_side_is_injective() {
        let f3 = crate::gfpoly::Field::prime(3).unwrap();
        // one-element omega_2 fixes G_2, so the product count is |omega_1|
        let o1 = ApSpec::full(&f3, 3);
        let o2 = ApSpec::new(2, poly(&f3, "T^2+1"), poly(&f3, "T^3")).unwrap();
        assert_eq!(o2.count(), 1);
        assert_eq!(
            product_set_count(&o1, &o2, BUDGET).unwrap(),
            o1.count()
        );
    }

    #[test]
    fn m4_over_f2() {
        let f = f2();
        assert_eq!(m_count(&f, 2, BUDGET).unwrap(), 9);
        assert_eq!(h_count(&f, 4, 2, BUDGET).unwrap(), 9);
    }

    #[test]
    fn h_trivial_cases() {
        let f = f2();
        for n in 0..=6 {
            assert_eq!(h_count(&f, n, 0, BUDGET).unwrap(), 1u64 << n);
            assert_eq!(h_count(&f, n, n, BUDGET).unwrap(), 1u64 << n);
        }
        assert!(h_count(&f, 3, 4, BUDGET).is_err());
    }

    #[test]
    fn h_divisor_ap_example() {
        // products of quadratics with constant term 1 by quadratics: 7 values
        let f = f2();
        let count =
            h_divisor_ap_count(&f, 4, 2, &Poly::one(&f), &poly(&f, "T"), BUDGET).unwrap();
        assert_eq!(count, 7);
        // M = 1 reduces to the unrestricted count
        assert_eq!(
            h_divisor_ap_count(&f, 4, 2, &Poly::zero(&f), &Poly::one(&f), BUDGET).unwrap(),
            h_count(&f, 4, 2, BUDGET).unwrap()
        );
    }

    #[test]
    fn two_ap_symmetry_and_figure() {
        let f = f2();
        let one = Poly::one(&f);
        let t = poly(&f, "T");
        let t2 = poly(&f, "T^2");
        let tp1 = poly(&f, "T+1");
        // |H(6,3;1,T+1,T,T^2)| = 7 (the figure)
        assert_eq!(
            h_two_ap_count(&f, 6, 3, &one, &t, &tp1, &t2, BUDGET).unwrap(),
            7
        );
        // swapping the two sides preserves the count
        assert_eq!(
            h_two_ap_count(&f, 6, 3, &tp1, &t2, &one, &t, BUDGET).unwrap(),
            7
        );
        // trivial moduli reduce to h_count
        assert_eq!(
            h_two_ap_count(&f, 6, 2, &Poly::zero(&f), &one, &Poly::zero(&f), &one, BUDGET)
                .unwrap(),
            h_count(&f, 6, 2, BUDGET).unwrap()
        );
    }

    #[test]
    fn marking_equals_scan() {
        let f = f2();
        let t = SpfTable::build(&f, 11).unwrap();
        for n in 1..=11 {
            for b in 0..=n / 2 {
                assert_eq!(
                    h_count(&f, n, b, BUDGET).unwrap(),
                    h_count_scan(&t, n, b).unwrap(),
                    "q=2 n={n} b={b}"
                );
            }
        }
        let f3 = crate::gfpoly::Field::prime(3).unwrap();
        let t3 = SpfTable::build(&f3, 6).unwrap();
        for n in 1..=6 {
            for b in 0..=n / 2 {
                assert_eq!(
                    h_count(&f3, n, b, BUDGET).unwrap(),
                    h_count_scan(&t3, n, b).unwrap(),
                    "q=3 n={n} b={b}"
                );
            }
        }
    }

    #[test]
    fn ap_count_ways_agree() {
        let f = f2();
        let t = SpfTable::build(&f, 9).unwrap();
        for m_text in ["T", "T^2+T+1", "T^3+T"] {
            let m = poly(&f, m_text);
            for n in 2..=9usize {
                for b in 1..=n / 2 {
                    let mut total = 0;
                    for a in crate::gfpoly::enumerate_residues(&f, m.degree().unwrap()) {
                        let via_hits = h_ap_count(&f, n, b, &a, &m, BUDGET).unwrap();
                        let via_scan = h_ap_count_scan(&t, n, b, &a, &m).unwrap();
                        assert_eq!(via_hits, via_scan, "m={m_text} n={n} b={b} a={a}");
                        total += via_hits;
                    }
                    assert_eq!(total, h_count(&f, n, b, BUDGET).unwrap());
                }
            }
        }
    }

    #[test]
    fn ap_members_consistent() {
        let f3 = crate::gfpoly::Field::prime(3).unwrap();
        for degree in 0..=4usize {
            for m_text in ["1", "T", "T^2+1", "T^3+2*T", "T^2+2*T+2"] {
                let m = poly(&f3, m_text);
                for a in crate::gfpoly::enumerate_residues(&f3, m.degree().unwrap()) {
                    let spec = ApSpec::new(degree, a, m.clone()).unwrap();
                    let members = spec.member_indices();
                    assert_eq!(members.len() as u64, spec.count(), "{m_text} deg {degree}");
                    for &idx in &members {
                        let g = crate::gfpoly::monic_decode(
                            &f3,
                            crate::gfpoly::MonicIndex { degree, index: idx },
                        );
                        assert!(spec.contains(&g).unwrap());
                    }
                    // complement check against full enumeration
                    let direct = enumerate_monics(&f3, degree)
                        .filter(|g| spec.contains(g).unwrap())
                        .count();
                    assert_eq!(direct, members.len());
                }
            }
        }
    }

    #[test]
    fn sharded_count_matches_direct() {
        let f = f2();
        for (b1, b2) in [(3usize, 4usize), (2, 5), (4, 4)] {
            let o1 = ApSpec::full(&f, b1);
            let o2 = ApSpec::full(&f, b2);
            let direct = product_set_count(&o1, &o2, BUDGET).unwrap();
            // force sharding with a tiny bit budget
            let sharded = product_set_count(&o1, &o2, 32).unwrap();
            assert_eq!(direct, sharded, "b1={b1} b2={b2}");
        }
        let f3 = crate::gfpoly::Field::prime(3).unwrap();
        let o1 = ApSpec::full(&f3, 2);
        let o2 = ApSpec::new(3, poly(&f3, "T+2"), poly(&f3, "T^2")).unwrap();
        assert_eq!(
            product_set_count(&o1, &o2, BUDGET).unwrap(),
            product_set_count(&o1, &o2, 16).unwrap()
        );
    }

    #[test]
    fn hitset_export_import() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hits.ffhs");
        let f = f2();
        let hits = product_set_hits(&ApSpec::full(&f, 3), &ApSpec::full(&f, 3), BUDGET).unwrap();
        hits.export(&path).unwrap();
        let back = HitSet::import(&path).unwrap();
        assert_eq!(back.count(), hits.count());
        assert_eq!(back.degree(), 6);
        let marked: Vec<u64> = hits.iter_indices().collect();
        let restored: Vec<u64> = back.iter_indices().collect();
        assert_eq!(marked, restored);
    }

    #[test]
    fn divisor_stats_example() {
        let f = f2();
        let t = SpfTable::build(&f, 6).unwrap();
        // H = T^3+T = T(T+1)^2
        let stats = divisor_stats(&t, &poly(&f, "T^3+T")).unwrap();
        assert_eq!(stats.tau, 6);
        assert_eq!(stats.degree_set, vec![0, 1, 2, 3]);
        assert_eq!(stats.distinct_degrees(), 4);
        assert_eq!(stats.tau_by_degree, vec![1, 2, 2, 1]);
        assert_eq!(stats.w, BigUint::from(10u32));
        // primes
        let prime = divisor_stats(&t, &poly(&f, "T^2+T+1")).unwrap();
        assert_eq!((prime.tau, prime.distinct_degrees()), (2, 2));
        assert_eq!(prime.w, BigUint::from(2u32));
        // the unit polynomial
        let unit = divisor_stats(&t, &Poly::one(&f)).unwrap();
        assert_eq!((unit.tau, unit.distinct_degrees()), (1, 1));
        assert_eq!(unit.w, BigUint::one());
    }

    #[test]
    fn divisor_stats_against_enumeration() {
        // brute-force oracle: enumerate all monic divisors directly
        let f = f2();
        let t = SpfTable::build(&f, 8).unwrap();
        for n in 1..=8usize {
            for (k, h) in enumerate_monics(&f, n).enumerate() {
                if k % 5 != 0 {
                    continue;
                }
                let mut tau_by_degree = vec![0u64; n + 1];
                #[allow(clippy::needless_range_loop)]
                for d in 0..=n {
                    for cand in enumerate_monics(&f, d) {
                        if cand.divides(&h).unwrap() {
                            tau_by_degree[d] += 1;
                        }
                    }
                }
                let stats = divisor_stats(&t, &h).unwrap();
                assert_eq!(stats.tau_by_degree, tau_by_degree, "h={h}");
                assert!(stats.degree_set.contains(&0));
                assert!(stats.degree_set.contains(&n));
            }
        }
    }

    #[test]
    fn stats_invariants() {
        // W >= tau^2 / L pointwise (Cauchy-Schwarz)
        let f3 = crate::gfpoly::Field::prime(3).unwrap();
        let t = SpfTable::build(&f3, 6).unwrap();
        for h in enumerate_monics(&f3, 6) {
            let s = divisor_stats(&t, &h).unwrap();
            let l = s.distinct_degrees() as u64;
            assert!(
                s.w.clone() * BigUint::from(l) >= BigUint::from(s.tau) * BigUint::from(s.tau)
            );
            assert!(s.w >= BigUint::from(s.tau));
            assert!(s.tau >= l);
        }
    }

    #[test]
    fn disjointness_of_second_residue() {
        // the H(n,b;A,A',M,M) over invertible A' are pairwise disjoint
        let f = f2();
        let m = poly(&f, "T^2+T+1");
        let a = Poly::one(&f);
        let (n, b) = (8usize, 3usize);
        let units = invertible_residues(&f, &m).unwrap();
        let sets: Vec<HitSet> = units
            .iter()
            .map(|a2| {
                product_set_hits(
                    &ApSpec::new(b, a.clone(), m.clone()).unwrap(),
                    &ApSpec::new(n - b, a2.clone(), m.clone()).unwrap(),
                    BUDGET,
                )
                .unwrap()
            })
            .collect();
        let mut sum = 0;
        for (i, s1) in sets.iter().enumerate() {
            sum += s1.count();
            for s2 in sets.iter().skip(i + 1) {
                assert_eq!(s1.intersection_count(s2), 0);
            }
        }
        let hprime = h_divisor_ap_count(&f, n, b, &a, &m, BUDGET).unwrap();
        assert!(sum <= hprime);
    }
}
