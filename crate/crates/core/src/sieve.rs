//! Smallest-prime-factor sieve over monic polynomials up to a degree cap,
//! and the multiplicative bookkeeping built on it: prime counts (by scan and
//! by the Moebius formula), prime counts in arithmetic progressions, the
//! Moebius and Euler functions, factorization types, squarefree counts, and
//! prime l-th-root counts.
//!
//! "Smallest" prime factor means least degree, ties broken by least index,
//! which makes tables reproducible byte for byte.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::gfpoly::{
    decode_monic_coeffs, enumerate_monics, is_prime_u64, monic_count, monic_decode, monic_encode,
    mul_raw, Field, MonicIndex, Poly,
};

/// Default cap on the total number of table entries (sum of q^d).
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 28;

const UNSET: u64 = u64::MAX;
const FILE_MAGIC: &[u8; 4] = b"FFMT";
const FILE_VERSION: u32 = 1;

#[inline]
fn pack(degree: usize, index: u64) -> u64 {
    ((degree as u64) << 48) | index
}

#[inline]
fn unpack(entry: u64) -> (usize, u64) {
    ((entry >> 48) as usize, entry & ((1 << 48) - 1))
}

/// Smallest-prime-factor table for every monic polynomial of degree
/// 1..=max_deg, addressed by MonicIndex. A polynomial is prime iff its entry
/// points to itself.
pub struct SpfTable {
    field: Field,
    max_deg: usize,
    /// spf[d][i] = packed (degree, index) of the smallest prime factor of
    /// the monic polynomial (d, i); spf[0] is empty.
    spf: Vec<Vec<u64>>,
    /// primes[d] = indices of the degree-d primes, ascending.
    primes: Vec<Vec<u64>>,
}

impl SpfTable {
    pub fn build(field: &Field, max_deg: usize) -> Result<SpfTable> {
        Self::build_with_budget(field, max_deg, DEFAULT_TABLE_BUDGET)
    }

    pub fn build_with_budget(field: &Field, max_deg: usize, budget: u64) -> Result<SpfTable> {
        let q = field.q() as u64;
        let mut total: u128 = 0;
        for d in 1..=max_deg {
            total += (q as u128).pow(d as u32);
        }
        if total > budget as u128 {
            return Err(Error::BudgetExceeded(format!(
                "sieve needs {total} entries, budget is {budget}"
            )));
        }

        let mut spf: Vec<Vec<u64>> = (0..=max_deg)
            .map(|d| {
                if d == 0 {
                    Vec::new()
                } else {
                    vec![UNSET; q.pow(d as u32) as usize]
                }
            })
            .collect();
        let mut primes: Vec<Vec<u64>> = vec![Vec::new(); max_deg + 1];

        let gf2 = field.p() == 2 && field.e() == 1;
        let mut fbuf: Vec<u32> = Vec::new();
        let mut pbuf: Vec<u32> = Vec::new();
        let mut prod: Vec<u32> = Vec::new();

        // Linear sieve: every composite C = P * F with P = spf(C) is marked
        // exactly once, from the pair (F, P) with P <= spf(F).
        for d in 1..=max_deg {
            for idx in 0..q.pow(d as u32) {
                let entry = spf[d][idx as usize];
                let (sd, si) = if entry == UNSET {
                    spf[d][idx as usize] = pack(d, idx);
                    primes[d].push(idx);
                    (d, idx)
                } else {
                    unpack(entry)
                };
                let room = max_deg - d;
                if room == 0 {
                    continue;
                }
                if !gf2 {
                    decode_monic_coeffs(field, d, idx, &mut fbuf);
                }
                for pd in 1..=sd.min(room) {
                    for &pidx in &primes[pd] {
                        if pd == sd && pidx > si {
                            break;
                        }
                        let prod_idx = if gf2 {
                            let a = idx | 1 << d;
                            let b = pidx | 1 << pd;
                            clmul(a, b) ^ (1 << (d + pd))
                        } else {
                            decode_monic_coeffs(field, pd, pidx, &mut pbuf);
                            prod.clear();
                            prod.resize(d + pd + 1, 0);
                            mul_raw(field, &fbuf, &pbuf, &mut prod);
                            crate::gfpoly::encode_monic_coeffs(field, &prod)
                        };
                        debug_assert_eq!(spf[d + pd][prod_idx as usize], UNSET);
                        spf[d + pd][prod_idx as usize] = pack(pd, pidx);
                    }
                }
            }
        }

        Ok(SpfTable {
            field: field.clone(),
            max_deg,
            spf,
            primes,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub(crate) fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.max_deg {
            Err(Error::DegreeExceedsTable {
                degree,
                max_deg: self.max_deg,
            })
        } else {
            Ok(())
        }
    }

    /// Packed smallest-prime-factor entry of the monic (degree, index).
    pub fn spf_index(&self, degree: usize, index: u64) -> Result<(usize, u64)> {
        if degree == 0 || degree > self.max_deg {
            return Err(Error::DegreeExceedsTable {
                degree,
                max_deg: self.max_deg,
            });
        }
        Ok(unpack(self.spf[degree][index as usize]))
    }

    /// Degree of the smallest prime factor, without decoding it.
    #[inline]
    pub(crate) fn spf_degree_raw(&self, degree: usize, index: u64) -> usize {
        (self.spf[degree][index as usize] >> 48) as usize
    }

    pub fn smallest_prime_factor(&self, f: &Poly) -> Result<Poly> {
        let mi = self.require_monic(f)?;
        if mi.degree == 0 {
            return Err(Error::InvalidParameter(
                "the unit polynomial has no prime factor".into(),
            ));
        }
        let (pd, pi) = self.spf_index(mi.degree, mi.index)?;
        Ok(monic_decode(&self.field, MonicIndex {
            degree: pd,
            index: pi,
        }))
    }

    pub fn is_prime(&self, f: &Poly) -> Result<bool> {
        let mi = self.require_monic(f)?;
        if mi.degree == 0 {
            return Ok(false);
        }
        Ok(self.spf_index(mi.degree, mi.index)? == (mi.degree, mi.index))
    }

    /// P^-(F): the least degree among prime divisors; None (infinity) for F = 1.
    pub fn smallest_prime_degree(&self, f: &Poly) -> Result<Option<usize>> {
        let mi = self.require_monic(f)?;
        if mi.degree == 0 {
            return Ok(None);
        }
        Ok(Some(self.spf_index(mi.degree, mi.index)?.0))
    }

    fn require_monic(&self, f: &Poly) -> Result<MonicIndex> {
        if f.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        let mi = monic_encode(f)?;
        self.check_degree(mi.degree)?;
        Ok(mi)
    }

    /// Prime factorization as a sorted list of (prime index, exponent).
    pub fn factorize_index(&self, degree: usize, index: u64) -> Vec<(MonicIndex, u32)> {
        let mut out: BTreeMap<MonicIndex, u32> = BTreeMap::new();
        let (mut d, mut i) = (degree, index);
        let mut num: Vec<u32> = Vec::new();
        let mut den: Vec<u32> = Vec::new();
        while d > 0 {
            let (pd, pi) = unpack(self.spf[d][i as usize]);
            *out.entry(MonicIndex {
                degree: pd,
                index: pi,
            })
            .or_insert(0) += 1;
            if pd == d {
                break; // prime: quotient is 1
            }
            decode_monic_coeffs(&self.field, d, i, &mut num);
            decode_monic_coeffs(&self.field, pd, pi, &mut den);
            divide_exact(&self.field, &mut num, &den);
            d -= pd;
            i = crate::gfpoly::encode_monic_coeffs(&self.field, &num);
        }
        out.into_iter().collect()
    }

    /// Prime factorization of a monic polynomial: distinct primes with
    /// exponents, product recomposes to the argument.
    pub fn factorize(&self, f: &Poly) -> Result<Vec<(Poly, u32)>> {
        let mi = self.require_monic(f)?;
        Ok(self
            .factorize_index(mi.degree, mi.index)
            .into_iter()
            .map(|(p, e)| (monic_decode(&self.field, p), e))
            .collect())
    }

    /// Degrees (with exponents) of the prime factors of (degree, index).
    pub(crate) fn factor_degrees(&self, degree: usize, index: u64) -> Vec<(usize, u32)> {
        self.factorize_index(degree, index)
            .into_iter()
            .map(|(p, e)| (p.degree, e))
            .collect()
    }

    /// Numbers of distinct prime divisors by degree: entry i-1 counts the
    /// distinct primes of degree i. The sum of i*m_i is at most deg F, with
    /// equality iff F is squarefree.
    pub fn factorization_type(&self, f: &Poly) -> Result<FactorizationType> {
        let mi = self.require_monic(f)?;
        let mut m = vec![0u32; mi.degree];
        for (p, _) in self.factorize_index(mi.degree, mi.index) {
            m[p.degree - 1] += 1;
        }
        Ok(FactorizationType { m })
    }

    /// Prime divisors counted with multiplicity, by degree: entry i-1 sums
    /// the exponents of the degree-i primes, so the entries form a partition
    /// of deg F.
    pub fn multiplicity_type(&self, f: &Poly) -> Result<Vec<u32>> {
        let mi = self.require_monic(f)?;
        Ok(self.multiplicity_type_index(mi.degree, mi.index))
    }

    pub(crate) fn multiplicity_type_index(&self, degree: usize, index: u64) -> Vec<u32> {
        let mut m = vec![0u32; degree];
        for (p, e) in self.factorize_index(degree, index) {
            m[p.degree - 1] += e;
        }
        m
    }

    /// Number of primes in M_n, by table scan.
    pub fn pi(&self, n: usize) -> Result<u64> {
        if n == 0 {
            return Ok(0);
        }
        self.check_degree(n)?;
        Ok(self.primes[n].len() as u64)
    }

    pub fn primes_of_degree(&self, d: usize) -> Result<&[u64]> {
        self.check_degree(d)?;
        Ok(&self.primes[d])
    }

    /// Number of primes P in M_n with P = A mod M. Requires (A, M) = 1.
    pub fn pi_ap(&self, n: usize, a: &Poly, m: &Poly) -> Result<u64> {
        self.check_degree(n)?;
        if !a.is_coprime(m)? {
            return Err(Error::NotCoprime);
        }
        if m.degree().unwrap_or(0) == 0 {
            return self.pi(n);
        }
        let target = a.rem(m)?;
        let mut count = 0;
        for &pi in &self.primes[n] {
            let p = monic_decode(&self.field, MonicIndex {
                degree: n,
                index: pi,
            });
            if p.rem(m)? == target {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Moebius function: 0 unless squarefree, else (-1)^(number of primes).
    pub fn mobius(&self, f: &Poly) -> Result<i32> {
        let mi = self.require_monic(f)?;
        Ok(self.mobius_index(mi.degree, mi.index))
    }

    pub(crate) fn mobius_index(&self, degree: usize, index: u64) -> i32 {
        let factors = self.factorize_index(degree, index);
        if factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub(crate) fn is_squarefree_index(&self, degree: usize, index: u64) -> bool {
        self.factorize_index(degree, index)
            .iter()
            .all(|&(_, e)| e == 1)
    }

    /// Euler function Phi(M) = #{A : deg A < deg M, (A, M) = 1}, evaluated
    /// through the product over prime powers.
    pub fn phi(&self, m: &Poly) -> Result<BigUint> {
        let mi = self.require_monic(m)?;
        let q = BigUint::from(self.field.q());
        let mut out = BigUint::from(1u32);
        for (p, e) in self.factorize_index(mi.degree, mi.index) {
            let pd = p.degree as u32;
            out *= q.pow(pd * (e - 1)) * (q.pow(pd) - 1u32);
        }
        Ok(out)
    }

    /// Number of distinct prime divisors of M of degree j.
    pub fn p_j(&self, m: &Poly, j: usize) -> Result<u64> {
        let mi = self.require_monic(m)?;
        Ok(self
            .factorize_index(mi.degree, mi.index)
            .iter()
            .filter(|(p, _)| p.degree == j)
            .count() as u64)
    }

    /// Number of squarefree monic polynomials of degree i, by table scan.
    pub fn squarefree_count(&self, i: usize) -> Result<u64> {
        if i == 0 {
            return Ok(1);
        }
        self.check_degree(i)?;
        let mut count = 0;
        for idx in 0..monic_count(&self.field, i) {
            if self.is_squarefree_index(i, idx) {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Number of primes P in M_n with P^l = E mod M.
    pub fn gamma_roots(&self, n: usize, l: u64, e: &Poly, m: &Poly) -> Result<u64> {
        self.check_degree(n)?;
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let target = e.rem(m)?;
        let mut count = 0;
        for &pi in &self.primes[n] {
            let p = monic_decode(&self.field, MonicIndex {
                degree: n,
                index: pi,
            });
            if p.powmod(l, m)? == target {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Writes the table in the FFMT format: magic, version, then p, e,
    /// reduction index and max_deg as little-endian u64, then per degree the
    /// packed entry array.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(FILE_MAGIC)?;
        w.write_all(&FILE_VERSION.to_le_bytes())?;
        for v in [
            self.field.p() as u64,
            self.field.e() as u64,
            self.field.reduction_index(),
            self.max_deg as u64,
        ] {
            w.write_all(&v.to_le_bytes())?;
        }
        for d in 1..=self.max_deg {
            for &entry in &self.spf[d] {
                w.write_all(&entry.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Loads a table, validating the header and re-deriving three random
    /// entries by trial division before trusting the data.
    pub fn load(path: &Path) -> Result<SpfTable> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != FILE_MAGIC {
            return Err(Error::BadSieveFile("bad magic".into()));
        }
        let mut v4 = [0u8; 4];
        r.read_exact(&mut v4)?;
        if u32::from_le_bytes(v4) != FILE_VERSION {
            return Err(Error::BadSieveFile("unsupported version".into()));
        }
        let mut u = [0u8; 8];
        let mut header = [0u64; 4];
        for h in header.iter_mut() {
            r.read_exact(&mut u)?;
            *h = u64::from_le_bytes(u);
        }
        let [p, e, red_index, max_deg] = header;
        let max_deg = max_deg as usize;
        let field = if e == 1 {
            Field::prime(p)?
        } else {
            let fp = Field::prime(p)?;
            let red = monic_decode(&fp, MonicIndex {
                degree: e as usize,
                index: red_index,
            });
            Field::new(p, e as u32, Some(red.coeffs()))?
        };
        let q = field.q() as u64;
        let mut spf: Vec<Vec<u64>> = vec![Vec::new()];
        let mut primes: Vec<Vec<u64>> = vec![Vec::new(); max_deg + 1];
        let mut buf: Vec<u8> = Vec::new();
        #[allow(clippy::needless_range_loop)]
        for d in 1..=max_deg {
            let count = q.pow(d as u32) as usize;
            buf.resize(count * 8, 0);
            r.read_exact(&mut buf)?;
            let mut entries = Vec::with_capacity(count);
            for (i, chunk) in buf.chunks_exact(8).enumerate() {
                let entry = u64::from_le_bytes(chunk.try_into().unwrap());
                let (pd, pi) = unpack(entry);
                if pd == 0 || pd > d || pi >= q.pow(pd as u32) {
                    return Err(Error::BadSieveFile(format!(
                        "entry ({d},{i}) is out of range"
                    )));
                }
                if pd == d && pi == i as u64 {
                    primes[d].push(pi);
                }
                entries.push(entry);
            }
            spf.push(entries);
        }
        let table = SpfTable {
            field,
            max_deg,
            spf,
            primes,
        };
        table.validate_random_entries(3)?;
        Ok(table)
    }

    fn validate_random_entries(&self, samples: usize) -> Result<()> {
        if self.max_deg == 0 {
            return Ok(());
        }
        let mut rng = rand::thread_rng();
        for _ in 0..samples {
            let d = rng.gen_range(1..=self.max_deg);
            let idx = rng.gen_range(0..monic_count(&self.field, d));
            let f = monic_decode(&self.field, MonicIndex {
                degree: d,
                index: idx,
            });
            let expected = smallest_prime_factor_trial(&f)?.expect("degree >= 1");
            let got = unpack(self.spf[d][idx as usize]);
            let want = monic_encode(&expected).unwrap();
            if got != (want.degree, want.index) {
                return Err(Error::BadSieveFile(format!(
                    "entry ({d},{idx}) disagrees with trial division"
                )));
            }
        }
        Ok(())
    }
}

/// `num /= den` for monic polynomials, assuming exact divisibility.
fn divide_exact(field: &Field, num: &mut Vec<u32>, den: &[u32]) {
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![0u32; nd - dd + 1];
    for top in (dd..=nd).rev() {
        let c = num[top];
        quot[top - dd] = c;
        if c != 0 {
            for i in 0..=dd {
                num[top - dd + i] = field.sub(num[top - dd + i], field.mul(c, den[i]));
            }
        }
    }
    debug_assert!(num.iter().take(dd).all(|&c| c == 0));
    *num = quot;
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

/// Distinct prime divisors per degree (the m_i vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationType {
    m: Vec<u32>,
}

impl FactorizationType {
    pub fn counts(&self) -> &[u32] {
        &self.m
    }

    /// m_i, 1-based degree.
    pub fn count_of_degree(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.m.get(i - 1).copied().unwrap_or(0)
    }
}

/// Smallest prime factor by trial division, independent of any sieve table.
/// None for the unit polynomial.
pub fn smallest_prime_factor_trial(f: &Poly) -> Result<Option<Poly>> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = f.degree().unwrap();
    if n == 0 {
        return Ok(None);
    }
    // The first nontrivial divisor in (degree, index) order is prime.
    for d in 1..=n / 2 {
        for cand in enumerate_monics(f.field(), d) {
            if cand.divides(f)? {
                return Ok(Some(cand));
            }
        }
    }
    Ok(Some(f.clone()))
}

/// Exact prime polynomial count pi_q(n) = (1/n) sum_{d|n} mu(n/d) q^d.
pub fn pi_formula(q: u64, n: usize) -> BigUint {
    assert!(n >= 1, "pi_q(n) needs n >= 1");
    let mut sum = BigInt::from(0);
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let mu = mobius_int(n / d);
        if mu == 0 {
            continue;
        }
        let term = BigInt::from(BigUint::from(q).pow(d as u32));
        if mu > 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (quot, rem) = num_integer::Integer::div_rem(&sum, &BigInt::from(n));
    assert!(rem.is_zero() && !quot.is_negative());
    quot.to_biguint().unwrap()
}

/// Integer Moebius function for small arguments.
pub(crate) fn mobius_int(mut n: usize) -> i32 {
    let mut omega = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            omega += 1;
        }
        d += 1;
    }
    if n > 1 {
        omega += 1;
    }
    if omega % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Is q a prime power? Used by callers that take q directly.
pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|&d| q % d == 0).unwrap();
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
    }
    rest == 1 && is_prime_u64(p)
}
