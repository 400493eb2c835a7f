//! Counts of b-rough polynomials, plain and in arithmetic progressions, the
//! Selberg sieve upper bound with its exact rational weights, the recursion
//! lower bounds, and capped factorization-type counts.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gfpoly::{
    decode_monic_coeffs, monic_count, monic_decode, monic_encode, rem_raw, residue_code,
    MonicIndex, Poly,
};
use crate::report::{rat_int, rat_u64, Report};
use crate::sieve::SpfTable;

/// Psi(n, b): the number of monic degree-n polynomials whose prime factors
/// all have degree strictly greater than b. Degenerate inputs are allowed:
/// the result is pi_q(n) for n/2 <= b < n and 0 for b >= n >= 1.
pub fn psi(table: &SpfTable, n: usize, b: usize) -> Result<u64> {
    if n == 0 {
        return Ok(1);
    }
    table.check_degree(n)?;
    let mut count = 0;
    for idx in 0..monic_count(table.field(), n) {
        if table.spf_degree_raw(n, idx) > b {
            count += 1;
        }
    }
    Ok(count)
}

/// Histogram of P^-(F) over F in M_n: entry d counts polynomials whose
/// smallest prime factor has degree d. Psi(n, b) is the sum of entries
/// above b.
pub fn rough_histogram(table: &SpfTable, n: usize) -> Result<Vec<u64>> {
    table.check_degree(n)?;
    let mut hist = vec![0u64; n + 1];
    if n == 0 {
        return Ok(hist);
    }
    for idx in 0..monic_count(table.field(), n) {
        hist[table.spf_degree_raw(n, idx)] += 1;
    }
    Ok(hist)
}

pub fn psi_from_histogram(hist: &[u64], b: usize) -> u64 {
    hist.iter().skip(b + 1).sum()
}

/// Joint counts of (P^-(F), F mod M) over F in M_n: entry [d][code] counts
/// polynomials with smallest prime degree d and the given residue code.
pub fn rough_residue_counts(table: &SpfTable, n: usize, m: &Poly) -> Result<Vec<Vec<u64>>> {
    table.check_degree(n)?;
    let md = m.degree().ok_or(Error::DivisionByZero)?;
    if !m.is_monic() {
        return Err(Error::NotMonic);
    }
    let field = table.field();
    let classes = monic_count(field, md) as usize;
    let mut counts = vec![vec![0u64; classes]; n + 1];
    if n == 0 {
        // F = 1 has residue 1 and no prime factor; callers treat its
        // smallest prime degree as infinite, so it is not representable
        // here. Degree zero is handled by the scalar helpers.
        return Ok(counts);
    }
    let mut buf: Vec<u32> = Vec::new();
    let q = field.q() as u64;
    for idx in 0..monic_count(field, n) {
        let d = table.spf_degree_raw(n, idx);
        decode_monic_coeffs(field, n, idx, &mut buf);
        rem_raw(field, &mut buf, m.coeffs());
        let mut code = 0u64;
        for &c in buf.iter().rev() {
            code = code * q + c as u64;
        }
        counts[d][code as usize] += 1;
    }
    Ok(counts)
}

/// Psi(n, b; A, M): b-rough polynomials in M_n congruent to A mod M.
pub fn psi_ap(table: &SpfTable, n: usize, b: usize, a: &Poly, m: &Poly) -> Result<u64> {
    let md = m.degree().ok_or(Error::DivisionByZero)?;
    if md == 0 {
        return psi(table, n, b);
    }
    if n == 0 {
        let unit_matches = Poly::one(table.field()).rem(m)? == a.rem(m)?;
        return Ok(unit_matches as u64);
    }
    let counts = rough_residue_counts(table, n, m)?;
    let code = residue_code(table.field(), &a.rem(m)?) as usize;
    Ok(counts
        .iter()
        .skip(b + 1)
        .map(|row| row[code])
        .sum())
}

/// Exact rational S(z) = sum over squarefree monic D of degree <= z of
/// 1/Phi(D).
pub fn sieve_sum(table: &SpfTable, z: usize) -> Result<BigRational> {
    table.check_degree(z)?;
    let field = table.field();
    let mut s = BigRational::zero();
    for d in 0..=z {
        for idx in 0..monic_count(field, d) {
            if d == 0 || table.is_squarefree_index(d, idx) {
                let phi = phi_of_squarefree(table, d, idx);
                s += BigRational::new(BigInt::one(), BigInt::from(phi));
            }
        }
    }
    Ok(s)
}

fn phi_of_squarefree(table: &SpfTable, degree: usize, index: u64) -> BigUint {
    let q = BigUint::from(table.field().q());
    if degree == 0 {
        return BigUint::one();
    }
    let mut out = BigUint::one();
    for (p, e) in table.factorize_index(degree, index) {
        debug_assert_eq!(e, 1);
        out *= q.pow(p.degree as u32) - 1u32;
    }
    out
}

/// Selberg weights at level z: lambda_1 = 1, lambda_D supported on squarefree
/// monic D with deg D <= z, minimizing the quadratic form
/// Q = sum lambda_{D1} lambda_{D2} / |[D1, D2]| with minimum exactly 1/S(z).
pub struct SelbergWeights {
    z: usize,
    s: BigRational,
    weights: BTreeMap<MonicIndex, BigRational>,
}

impl SelbergWeights {
    pub fn z(&self) -> usize {
        self.z
    }

    /// S(z), the reciprocal of the minimal quadratic form value.
    pub fn s(&self) -> &BigRational {
        &self.s
    }

    /// lambda_D; zero off the squarefree support.
    pub fn weight(&self, d: &Poly) -> BigRational {
        monic_encode(d)
            .ok()
            .and_then(|mi| self.weights.get(&mi).cloned())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&MonicIndex, &BigRational)> {
        self.weights.iter()
    }
}

/// Computes the Selberg weights by the theta substitution and dual Moebius
/// inversion: theta_E = mu(E) / (Phi(E) S(z)), then
/// lambda_D = |D| sum_{D | E, deg E <= z} mu(E/D) theta_E.
pub fn selberg_weights(table: &SpfTable, z: usize) -> Result<SelbergWeights> {
    table.check_degree(z)?;
    let field = table.field();
    let q = field.q() as u64;

    // squarefree monic E of degree <= z, with their prime factors
    let mut squarefree: Vec<(MonicIndex, Vec<MonicIndex>)> = Vec::new();
    for d in 0..=z {
        for idx in 0..monic_count(field, d) {
            let factors = if d == 0 {
                Vec::new()
            } else {
                let fs = table.factorize_index(d, idx);
                if fs.iter().any(|&(_, e)| e > 1) {
                    continue;
                }
                fs.into_iter().map(|(p, _)| p).collect()
            };
            squarefree.push((MonicIndex { degree: d, index: idx }, factors));
        }
    }

    let mut s = BigRational::zero();
    for (_, factors) in &squarefree {
        let mut phi = BigUint::one();
        for p in factors {
            phi *= BigUint::from(q).pow(p.degree as u32) - 1u32;
        }
        s += BigRational::new(BigInt::one(), BigInt::from(phi));
    }

    let mut weights: BTreeMap<MonicIndex, BigRational> = BTreeMap::new();
    let field_one = Poly::one(field);
    for (_, factors) in &squarefree {
        let mut phi = BigUint::one();
        for p in factors {
            phi *= BigUint::from(q).pow(p.degree as u32) - 1u32;
        }
        let mu_e = if factors.len() % 2 == 0 { 1 } else { -1 };
        let theta = BigRational::new(BigInt::from(mu_e), BigInt::from(phi)) / &s;
        // distribute theta_E to every divisor D | E with sign mu(E/D)
        let k = factors.len();
        for mask in 0u32..(1 << k) {
            let mut d_poly = field_one.clone();
            let mut omega_d = 0usize;
            for (bit, p) in factors.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    d_poly = d_poly.mul(&monic_decode(field, *p))?;
                    omega_d += 1;
                }
            }
            let sign = if (k - omega_d) % 2 == 0 { 1 } else { -1 };
            let d_mi = monic_encode(&d_poly)?;
            let norm = BigInt::from(q).pow(d_mi.degree as u32);
            let contrib = BigRational::from_integer(BigInt::from(sign) * norm) * &theta;
            *weights.entry(d_mi).or_insert_with(BigRational::zero) += contrib;
        }
    }
    weights.retain(|_, w| !w.is_zero());

    let lambda_one = weights
        .get(&MonicIndex { degree: 0, index: 0 })
        .cloned()
        .unwrap_or_else(BigRational::zero);
    assert!(lambda_one.is_one(), "lambda_1 must be 1, got {lambda_one}");

    Ok(SelbergWeights { z, s, weights })
}

/// The quadratic form Q(Lambda) evaluated exactly. Equals 1/S(z) at the
/// optimal weights.
pub fn selberg_q_form(table: &SpfTable, weights: &SelbergWeights) -> Result<BigRational> {
    let field = table.field();
    let entries: Vec<(Poly, &BigRational)> = weights
        .weights
        .iter()
        .map(|(mi, w)| (monic_decode(field, *mi), w))
        .collect();
    let q = BigInt::from(field.q());
    let mut total = BigRational::zero();
    for (i, (d1, w1)) in entries.iter().enumerate() {
        for (d2, w2) in entries.iter().skip(i) {
            let g = d1.gcd(d2)?;
            let lcm_deg =
                d1.degree().unwrap() + d2.degree().unwrap() - g.degree().unwrap();
            let term = *w1 * *w2 / BigRational::from_integer(q.pow(lcm_deg as u32));
            if d1 == d2 {
                total += term;
            } else {
                total += term * rat_u64(2);
            }
        }
    }
    Ok(total)
}

/// Checks Psi(n, z) <= q^n / S(z) and S(z) >= z (1 - 1/q), both exactly.
pub fn selberg_upper_bound_reports(table: &SpfTable, n: usize, z: usize) -> Result<Vec<Report>> {
    let s = sieve_sum(table, z)?;
    let psi_nz = psi(table, n, z)?;
    let qn = rat_int(BigInt::from(BigUint::from(table.field().q() as u64).pow(n as u32)));
    let q = table.field().q() as i64;
    let weak = rat_int(z as i64) * rat_int(q - 1) / rat_int(q);
    let mut reports = vec![
        Report::le("selberg_upper_bound", &rat_u64(psi_nz), &(qn / &s)),
        Report::ge("sieve_sum_weak_bound", &s, &weak),
    ];
    for r in &mut reports {
        r.params.insert("q".into(), table.field().q().to_string());
        r.params.insert("n".into(), n.to_string());
        r.params.insert("z".into(), z.to_string());
    }
    Ok(reports)
}

/// Checks the recursion inequality
/// n Psi(n,b) >= q^n - 2 q^(n/2) + sum_{b < deg P <= n-b-1} deg P Psi(n - deg P, b)
/// and Psi(n,b) >= q^n / (10b + 5). The irrational 2 q^(n/2) is compared by
/// squaring; no floating point. Degenerate inputs (b >= n) are reported as
/// such and pass vacuously.
pub fn psi_recursion_reports(table: &SpfTable, n: usize, b: usize) -> Result<Vec<Report>> {
    let q = BigInt::from(table.field().q());
    if b >= n {
        let report = Report::eq("psi_recursion", &BigRational::zero(), &BigRational::zero())
            .with_param("q", table.field().q())
            .with_param("n", n)
            .with_param("b", b)
            .with_param("degenerate", true);
        return Ok(vec![report]);
    }
    let qn = q.pow(n as u32);
    let psi_nb = BigInt::from(psi(table, n, b)?);

    let mut sum = BigInt::zero();
    for d in b + 1..=n.saturating_sub(b + 1) {
        let pi_d = BigInt::from(table.pi(d)?);
        let psi_rest = BigInt::from(psi(table, n - d, b)?);
        sum += BigInt::from(d) * pi_d * psi_rest;
    }

    // q^n - (n Psi - sum) <= 2 q^(n/2)  <=>  deficit <= 0 or deficit^2 <= 4 q^n
    let deficit = &qn - (BigInt::from(n) * &psi_nb - &sum);
    let lhs_sq = if deficit.is_positive() {
        &deficit * &deficit
    } else {
        BigInt::zero()
    };
    let recursion = Report::le(
        "psi_recursion",
        &rat_int(lhs_sq),
        &rat_int(BigInt::from(4) * &qn),
    )
    .with_param("q", table.field().q())
    .with_param("n", n)
    .with_param("b", b)
    .with_param("compared", "squared");

    let tenb = Report::le(
        "psi_lower_allb",
        &rat_int(qn),
        &rat_int(BigInt::from(10 * b as u64 + 5) * &psi_nb),
    )
    .with_param("q", table.field().q())
    .with_param("n", n)
    .with_param("b", b);

    Ok(vec![recursion, tenb])
}

/// Query for rough polynomials with capped factorization multiplicities:
/// counts F in M_n with P^-(F) > b whose prime multiplicities per degree all
/// stay at or below `cap` (the natural cap is 3), optionally restricted to a
/// residue class.
#[derive(Debug, Clone)]
pub struct CappedTypeQuery {
    pub n: usize,
    pub b: usize,
    pub cap: u32,
    pub residue: Option<(Poly, Poly)>,
}

impl CappedTypeQuery {
    pub fn new(n: usize, b: usize) -> CappedTypeQuery {
        CappedTypeQuery {
            n,
            b,
            cap: 3,
            residue: None,
        }
    }

    pub fn with_cap(mut self, cap: u32) -> CappedTypeQuery {
        self.cap = cap;
        self
    }

    pub fn with_residue(mut self, e: Poly, m: Poly) -> CappedTypeQuery {
        self.residue = Some((e, m));
        self
    }
}

pub fn capped_rough_count(table: &SpfTable, query: &CappedTypeQuery) -> Result<u64> {
    let n = query.n;
    if n == 0 {
        return match &query.residue {
            None => Ok(1),
            Some((e, m)) => Ok((Poly::one(table.field()).rem(m)? == e.rem(m)?) as u64),
        };
    }
    table.check_degree(n)?;
    let field = table.field();
    let residue = match &query.residue {
        None => None,
        Some((e, m)) => Some((e.rem(m)?, m.clone())),
    };
    let mut count = 0;
    let mut buf: Vec<u32> = Vec::new();
    for idx in 0..monic_count(field, n) {
        if table.spf_degree_raw(n, idx) <= query.b {
            continue;
        }
        let mults = table.multiplicity_type_index(n, idx);
        if mults.iter().any(|&m| m > query.cap) {
            continue;
        }
        if let Some((e, m)) = &residue {
            decode_monic_coeffs(field, n, idx, &mut buf);
            rem_raw(field, &mut buf, m.coeffs());
            let reduced = Poly::from_coeffs(field, buf.clone())?;
            if &reduced != e {
                continue;
            }
        }
        count += 1;
    }
    Ok(count)
}

/// xi(n, m[, E, M]): the number of F in M_n whose multiplicity type equals
/// `m` (entry i-1 counts degree-i primes with multiplicity), times the
/// indicator that no prime of degree <= b occurs. Unless `m` is a partition
/// of n the count is zero.
pub fn xi(
    table: &SpfTable,
    n: usize,
    m: &[u32],
    b: usize,
    residue: Option<(&Poly, &Poly)>,
) -> Result<u64> {
    if m.iter().take(b).any(|&c| c != 0) {
        return Ok(0);
    }
    let weight: usize = m.iter().enumerate().map(|(i, &c)| (i + 1) * c as usize).sum();
    if weight != n {
        return Ok(0);
    }
    if n == 0 {
        return match residue {
            None => Ok(1),
            Some((e, md)) => Ok((Poly::one(table.field()).rem(md)? == e.rem(md)?) as u64),
        };
    }
    table.check_degree(n)?;
    let field = table.field();
    let target = match residue {
        None => None,
        Some((e, md)) => Some((e.rem(md)?, md.clone())),
    };
    let mut count = 0;
    let mut buf: Vec<u32> = Vec::new();
    for idx in 0..monic_count(field, n) {
        let mults = table.multiplicity_type_index(n, idx);
        if !type_matches(&mults, m) {
            continue;
        }
        if let Some((e, md)) = &target {
            decode_monic_coeffs(field, n, idx, &mut buf);
            rem_raw(field, &mut buf, md.coeffs());
            let reduced = Poly::from_coeffs(field, buf.clone())?;
            if &reduced != e {
                continue;
            }
        }
        count += 1;
    }
    Ok(count)
}

fn type_matches(actual: &[u32], query: &[u32]) -> bool {
    let len = actual.len().max(query.len());
    (0..len).all(|i| {
        actual.get(i).copied().unwrap_or(0) == query.get(i).copied().unwrap_or(0)
    })
}

/// Enumerates the partitions of n as multiplicity vectors (m_1, ..., m_n)
/// with sum i*m_i = n.
pub fn partitions_of(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(remaining: usize, max_part: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            current[part - 1] += 1;
            rec(remaining - part, part, current, out);
            current[part - 1] -= 1;
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(n, n, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfpoly::{enumerate_monics, invertible_residues, parse_poly, Field};
    use num_traits::ToPrimitive;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn poly(field: &Field, s: &str) -> Poly {
        parse_poly(s, field).unwrap()
    }

    #[test]
    fn psi_spot_values() {
        let f = f2();
        let t = SpfTable::build(&f, 8).unwrap();
        // Psi(2,1) = pi_2(2) = 1
        assert_eq!(psi(&t, 2, 1).unwrap(), 1);
        // Psi(4,1) = 4: three prime quartics plus (T^2+T+1)^2
        assert_eq!(psi(&t, 4, 1).unwrap(), 4);
        // b >= n/2 means rough = prime
        for n in 1..=8usize {
            for b in n / 2..n {
                assert_eq!(psi(&t, n, b).unwrap(), t.pi(n).unwrap(), "n={n} b={b}");
            }
        }
        // unit polynomial is rough for every b
        assert_eq!(psi(&t, 0, 5).unwrap(), 1);
        // Psi(n, 0) counts everything
        assert_eq!(psi(&t, 5, 0).unwrap(), 32);
    }

    #[test]
    fn psi_monotone_in_b() {
        let f3 = Field::prime(3).unwrap();
        let t = SpfTable::build(&f3, 7).unwrap();
        for n in 1..=7usize {
            for b in 1..n {
                assert!(psi(&t, n, b).unwrap() <= psi(&t, n, b - 1).unwrap());
            }
        }
    }

    #[test]
    fn psi_ap_partitions() {
        let f = f2();
        let t = SpfTable::build(&f, 9).unwrap();
        for m_text in ["T", "T^2+T+1", "T^2", "T^3+T+1"] {
            let m = poly(&f, m_text);
            for n in 1..=7 {
                for b in 1..n {
                    let total: u64 = crate::gfpoly::enumerate_residues(&f, m.degree().unwrap())
                        .map(|a| psi_ap(&t, n, b, &a, &m).unwrap())
                        .sum();
                    assert_eq!(total, psi(&t, n, b).unwrap(), "m={m_text} n={n} b={b}");
                }
            }
        }
    }

    #[test]
    fn psi_ap_spot() {
        let f = f2();
        let t = SpfTable::build(&f, 4).unwrap();
        // T^2+T+1 is the only 1-rough quadratic and is = 1 mod T
        assert_eq!(
            psi_ap(&t, 2, 1, &Poly::one(&f), &poly(&f, "T")).unwrap(),
            1
        );
        // roughness forces coprimality to small-prime moduli
        assert_eq!(
            psi_ap(&t, 3, 1, &Poly::zero(&f), &poly(&f, "T")).unwrap(),
            0
        );
    }

    #[test]
    fn psi_ap_oracle_comparison() {
        // brute-force oracle: filter the enumeration directly
        let f3 = Field::prime(3).unwrap();
        let t = SpfTable::build(&f3, 5).unwrap();
        let m = poly(&f3, "T^2+1");
        for n in 1..=5 {
            for b in 1..n {
                for a in invertible_residues(&f3, &m).unwrap() {
                    let brute = enumerate_monics(&f3, n)
                        .filter(|g| {
                            t.smallest_prime_degree(g).unwrap().unwrap() > b
                                && g.rem(&m).unwrap() == a
                        })
                        .count() as u64;
                    assert_eq!(psi_ap(&t, n, b, &a, &m).unwrap(), brute);
                }
            }
        }
    }

    #[test]
    fn sieve_sum_values() {
        let f = f2();
        let t = SpfTable::build(&f, 6).unwrap();
        // S(1) = 1/Phi(1) + 1/Phi(T) + 1/Phi(T+1) = 3
        assert_eq!(sieve_sum(&t, 1).unwrap(), rat_u64(3));
        // S(z) >= direct sum of squarefree densities = 2 + (z-1)(1 - 1/q)
        for z in 1..=6usize {
            let s = sieve_sum(&t, z).unwrap();
            let mut direct = BigRational::zero();
            for i in 0..=z {
                direct += rat_u64(t.squarefree_count(i).unwrap())
                    / rat_int(BigInt::from(2).pow(i as u32));
            }
            if z >= 1 {
                let expect =
                    rat_u64(2) + rat_int(z as i64 - 1) * rat_u64(1) / rat_u64(2);
                assert_eq!(direct, expect, "z={z}");
            }
            assert!(s >= direct);
            let weak = rat_int(z as i64) * rat_u64(1) / rat_u64(2);
            assert!(s >= weak);
        }
    }

    #[test]
    fn selberg_exactness_small() {
        for q in [2u64, 3] {
            let field = Field::with_size(q).unwrap();
            let t = SpfTable::build(&field, 5).unwrap();
            for z in 1..=4usize {
                let w = selberg_weights(&t, z).unwrap();
                assert!(w.weight(&Poly::one(&field)).is_one(), "lambda_1 = 1");
                let qf = selberg_q_form(&t, &w).unwrap();
                assert!(
                    (qf * w.s()).is_one(),
                    "Q * S = 1 failed for q={q} z={z}"
                );
            }
        }
    }

    #[test]
    fn selberg_weight_zero_off_support() {
        let f = f2();
        let t = SpfTable::build(&f, 5).unwrap();
        let w = selberg_weights(&t, 3).unwrap();
        // non-squarefree
        assert!(w.weight(&poly(&f, "T^2")).is_zero());
        // beyond the level
        assert!(w.weight(&poly(&f, "T^4+T+1")).is_zero());
    }

    #[test]
    fn selberg_perturbation_not_better() {
        // perturbing any single weight by 1/q in either direction must not
        // decrease the quadratic form
        let f = f2();
        let t = SpfTable::build(&f, 6).unwrap();
        let w = selberg_weights(&t, 3).unwrap();
        let optimal = selberg_q_form(&t, &w).unwrap();
        let delta = BigRational::new(BigInt::one(), BigInt::from(2));
        let keys: Vec<MonicIndex> = w
            .weights
            .keys()
            .copied()
            .filter(|mi| mi.degree > 0)
            .collect();
        for key in keys {
            for sign in [1i32, -1] {
                let mut perturbed = SelbergWeights {
                    z: w.z,
                    s: w.s.clone(),
                    weights: w.weights.clone(),
                };
                *perturbed.weights.get_mut(&key).unwrap() +=
                    BigRational::from_integer(BigInt::from(sign)) * &delta;
                let qf = selberg_q_form(&t, &perturbed).unwrap();
                assert!(qf >= optimal, "perturbing {key:?} improved Q");
            }
        }
    }

    #[test]
    fn selberg_upper_bound_examples() {
        let f = f2();
        let t = SpfTable::build(&f, 8).unwrap();
        // Psi(4,1) = 4 <= 16/3 with S(1) = 3
        let reports = selberg_upper_bound_reports(&t, 4, 1).unwrap();
        assert!(reports.iter().all(|r| r.pass));
        assert_eq!(reports[0].lhs, "4");
        assert_eq!(reports[0].rhs, "16/3");
        // 2-rough quartics are exactly the three prime quartics
        // ((T^2+T+1)^2 has a prime factor of degree 2, not above 2)
        let reports = selberg_upper_bound_reports(&t, 4, 2).unwrap();
        assert!(reports.iter().all(|r| r.pass));
        assert_eq!(psi(&t, 4, 2).unwrap(), 3);
    }

    #[test]
    fn recursion_reports_pass() {
        let f = f2();
        let t = SpfTable::build(&f, 10).unwrap();
        for n in 2..=10usize {
            for b in 1..n {
                let reports = psi_recursion_reports(&t, n, b).unwrap();
                for r in &reports {
                    assert!(r.pass, "{} failed at n={n} b={b}", r.name);
                }
            }
        }
        // spot: n=4, b=1 -> 4*4 = 16 >= 16 - 8 + 2, deficit 2, squared 4 <= 64
        let reports = psi_recursion_reports(&t, 4, 1).unwrap();
        assert_eq!(reports[0].lhs, "4");
        assert_eq!(reports[0].rhs, "64");
        // degenerate b >= n
        let reports = psi_recursion_reports(&t, 3, 5).unwrap();
        assert_eq!(reports[0].params.get("degenerate").unwrap(), "true");
        assert!(reports[0].pass);
    }

    #[test]
    fn capped_count_examples() {
        let f = f2();
        let t = SpfTable::build(&f, 8).unwrap();
        // no rough quartic has four equal-degree primes
        assert_eq!(
            capped_rough_count(&t, &CappedTypeQuery::new(4, 1)).unwrap(),
            4
        );
        // a huge cap makes the constraint vacuous
        for n in 1..=8 {
            for b in 1..n {
                let q = CappedTypeQuery::new(n, b).with_cap(n as u32 + 1);
                assert_eq!(capped_rough_count(&t, &q).unwrap(), psi(&t, n, b).unwrap());
            }
        }
        // complement identity: theta + #{rough with some multiplicity > cap} = Psi
        for n in 2..=8 {
            for b in 1..n {
                for cap in 1..=3u32 {
                    let capped = capped_rough_count(
                        &t,
                        &CappedTypeQuery::new(n, b).with_cap(cap),
                    )
                    .unwrap();
                    let over: u64 = (0..monic_count(&f, n))
                        .filter(|&idx| {
                            t.spf_degree_raw(n, idx) > b
                                && t.multiplicity_type_index(n, idx)
                                    .iter()
                                    .any(|&m| m > cap)
                        })
                        .count() as u64;
                    assert_eq!(capped + over, psi(&t, n, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn xi_examples() {
        let f = f2();
        let t = SpfTable::build(&f, 8).unwrap();
        // xi(2, (0,1)) with b=1: only T^2+T+1
        assert_eq!(xi(&t, 2, &[0, 1], 1, None).unwrap(), 1);
        // the indicator kills types with small primes
        assert_eq!(xi(&t, 2, &[2, 0], 1, None).unwrap(), 0);
        // sum over partitions recovers Psi
        for n in 1..=8 {
            for b in 0..n {
                let total: u64 = partitions_of(n)
                    .iter()
                    .map(|m| xi(&t, n, m, b, None).unwrap())
                    .sum();
                assert_eq!(total, psi(&t, n, b).unwrap(), "n={n} b={b}");
            }
        }
    }

    #[test]
    fn xi_decomposition_identity() {
        // xi(n, m, D, M) = sum_C xi(n-ij, m - i e_j, C, M) xi(ij, i e_j, C^-1 D, M)
        // with j the least degree present and i its multiplicity, for
        // invertible D; exhaustive at q=2, n <= 8, deg M <= 2.
        let f = f2();
        let t = SpfTable::build(&f, 8).unwrap();
        for m_text in ["T", "T+1", "T^2+T+1", "T^2+T"] {
            let modulus = poly(&f, m_text);
            let units = invertible_residues(&f, &modulus).unwrap();
            for n in 1..=8usize {
                for mvec in partitions_of(n) {
                    let j = match mvec.iter().position(|&c| c != 0) {
                        Some(p) => p + 1,
                        None => continue,
                    };
                    let i = mvec[j - 1] as usize;
                    let mut rest = mvec.clone();
                    rest[j - 1] = 0;
                    let mut single = vec![0u32; j];
                    single[j - 1] = i as u32;
                    for d_res in &units {
                        let lhs = xi(&t, n, &mvec, 0, Some((d_res, &modulus))).unwrap();
                        let mut rhs = 0u64;
                        for c_res in &units {
                            let c_inv_d = c_res
                                .invmod(&modulus)
                                .unwrap()
                                .mul(d_res)
                                .unwrap()
                                .rem(&modulus)
                                .unwrap();
                            rhs += xi(&t, n - i * j, &rest, 0, Some((c_res, &modulus)))
                                .unwrap()
                                * xi(&t, i * j, &single, 0, Some((&c_inv_d, &modulus)))
                                    .unwrap();
                        }
                        assert_eq!(
                            lhs, rhs,
                            "decomposition failed: M={m_text} n={n} m={mvec:?} D={d_res}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn xi_multiplicity_formula_with_gamma() {
        // xi(2j, 2 e_j, B, M) = (sum_E pi(j,E,M) pi(j,BE^-1,M) + Gamma(j,2,B,M)) / 2
        let f = f2();
        let t = SpfTable::build(&f, 8).unwrap();
        let modulus = poly(&f, "T^2+T+1");
        let units = invertible_residues(&f, &modulus).unwrap();
        for j in 1..=4usize {
            let mut single = vec![0u32; j];
            single[j - 1] = 2;
            for b_res in &units {
                let lhs = xi(&t, 2 * j, &single, 0, Some((b_res, &modulus))).unwrap();
                let mut ordered = 0u64;
                for e_res in &units {
                    let be_inv = e_res
                        .invmod(&modulus)
                        .unwrap()
                        .mul(b_res)
                        .unwrap()
                        .rem(&modulus)
                        .unwrap();
                    ordered += t.pi_ap(j, e_res, &modulus).unwrap()
                        * t.pi_ap(j, &be_inv, &modulus).unwrap();
                }
                let gamma = t.gamma_roots(j, 2, b_res, &modulus).unwrap();
                assert_eq!(lhs * 2, ordered + gamma, "j={j} B={b_res}");
            }
        }
    }

    #[test]
    fn partitions_count() {
        // p(8) = 22
        assert_eq!(partitions_of(8).len(), 22);
        assert_eq!(partitions_of(1), vec![vec![1]]);
        let total: usize = partitions_of(6)
            .iter()
            .map(|m| {
                m.iter()
                    .enumerate()
                    .map(|(i, &c)| (i + 1) * c as usize)
                    .sum::<usize>()
            })
            .sum::<usize>()
            / partitions_of(6).len();
        assert_eq!(total, 6);
    }

    #[test]
    fn histogram_matches_psi() {
        let f3 = Field::prime(3).unwrap();
        let t = SpfTable::build(&f3, 6).unwrap();
        for n in 1..=6 {
            let hist = rough_histogram(&t, n).unwrap();
            assert_eq!(hist.iter().sum::<u64>().to_u64().unwrap(), 3u64.pow(n as u32));
            for b in 0..n {
                assert_eq!(psi_from_histogram(&hist, b), psi(&t, n, b).unwrap());
            }
        }
    }
}
