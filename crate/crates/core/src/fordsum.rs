//! The divisor-degree lower-bound machinery: greedy prime pools E_j bounded
//! by reciprocal sum log 2, squarefree families A(v) with per-pool factor
//! counts, exact rational sums of W, tau and L over them, the weight f(v),
//! the constrained vector family B, Ford's combinatorial sum, and the sum of
//! L(H)/|H| over a degree window.
//!
//! Pools are represented by exact per-degree prime counts from the Moebius
//! formula, so they extend past any sieve table; materialized prime lists are
//! attached when the pool lies inside the table range. Family sums have two
//! routes: literal member enumeration, and an aggregation over degree
//! multisets that computes the same exact rationals without touching
//! individual members.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gfpoly::{monic_decode, Field, MonicIndex, Poly};
use crate::mtable::divisor_stats_from_factorization;
use crate::report::{rat_u64, Report};
use crate::sieve::{pi_formula, SpfTable};

/// Fixed rational lower bound of ln 2, accurate to 1e-16. Every reciprocal
/// sum comparison in the pool construction uses this exact threshold.
pub fn ln2_lower() -> BigRational {
    BigRational::new(
        BigInt::from(6_931_471_805_599_453u64),
        BigInt::from(10u64).pow(16),
    )
}

/// One prime pool E_j: primes not dividing M with degree in
/// (lambda_{j-1}, lambda_j].
pub struct PrimePool {
    /// Inclusive degree range of the pool.
    pub degrees: (usize, usize),
    /// Exact number of qualifying primes per degree.
    pub degree_counts: Vec<(usize, BigUint)>,
    /// (degree, index) of each qualifying prime, present when the pool lies
    /// within the sieve range.
    pub listed: Option<Vec<(usize, u64)>>,
    /// Exact reciprocal sum over the pool.
    pub sum: BigRational,
    /// Contribution of the next degree, which would push the sum past the
    /// threshold (greedy maximality witness).
    pub next_contrib: BigRational,
}

impl PrimePool {
    pub fn total_count(&self) -> BigUint {
        self.degree_counts.iter().map(|(_, c)| c).sum()
    }
}

/// The greedy thresholds lambda_1 = 1 < lambda_2 < ... with their pools.
pub struct LambdaSequence {
    field: Field,
    modulus: Poly,
    lambdas: Vec<usize>,
    pools: Vec<PrimePool>,
    truncated: bool,
}

impl LambdaSequence {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn lambdas(&self) -> &[usize] {
        &self.lambdas
    }

    pub fn pools(&self) -> &[PrimePool] {
        &self.pools
    }

    /// Whether the requested number of pools could not be built under the
    /// degree cap; consumers must treat missing pools as absent, never as
    /// empty.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// max_j |log2(lambda_j) - j| over the built thresholds.
    pub fn k_empirical(&self) -> f64 {
        self.lambdas
            .iter()
            .enumerate()
            .map(|(i, &l)| ((l as f64).log2() - (i as f64 + 1.0)).abs())
            .fold(0.0, f64::max)
    }
}

/// Builds the sequence: lambda_1 = 1, and each later lambda_j is the largest
/// integer such that the reciprocal sum of the pool stays at or below the
/// ln 2 threshold. Stops with the truncation flag instead of building a pool
/// whose top degree would exceed `degree_cap`.
pub fn lambda_sequence(
    table: &SpfTable,
    modulus: &Poly,
    j_max: usize,
    degree_cap: usize,
) -> Result<LambdaSequence> {
    if j_max == 0 {
        return Err(Error::InvalidParameter("j_max must be positive".into()));
    }
    let field = table.field().clone();
    if modulus.field() != &field {
        return Err(Error::FieldMismatch);
    }
    if !modulus.is_monic() {
        return Err(Error::NotMonic);
    }
    let q = field.q() as u64;
    let m_factors = table.factorize(modulus)?;
    let mut excluded_by_degree: BTreeMap<usize, u64> = BTreeMap::new();
    let mut excluded_set: BTreeSet<(usize, u64)> = BTreeSet::new();
    for (p, _) in &m_factors {
        let d = p.degree().unwrap();
        *excluded_by_degree.entry(d).or_insert(0) += 1;
        let mi = crate::gfpoly::monic_encode(p).unwrap();
        excluded_set.insert((d, mi.index));
    }

    let count_at = |d: usize| -> BigUint {
        let excluded = excluded_by_degree.get(&d).copied().unwrap_or(0);
        pi_formula(q, d) - BigUint::from(excluded)
    };
    let contrib_at = |d: usize| -> BigRational {
        BigRational::new(
            BigInt::from(count_at(d)),
            BigInt::from(BigUint::from(q).pow(d as u32)),
        )
    };

    let threshold = ln2_lower();
    let mut lambdas: Vec<usize> = Vec::new();
    let mut pools: Vec<PrimePool> = Vec::new();
    let mut truncated = false;

    while lambdas.len() < j_max {
        let prev = lambdas.last().copied().unwrap_or(0);
        let (lo, hi) = if lambdas.is_empty() {
            (1usize, 1usize) // lambda_1 = 1 by definition
        } else {
            let lo = prev + 1;
            let mut hi = lo;
            let mut acc = contrib_at(lo);
            loop {
                let next = acc.clone() + contrib_at(hi + 1);
                if next <= threshold {
                    acc = next;
                    hi += 1;
                    if hi > degree_cap {
                        break;
                    }
                } else {
                    break;
                }
            }
            (lo, hi)
        };
        if hi > degree_cap {
            truncated = true;
            break;
        }
        let mut sum = BigRational::zero();
        let mut degree_counts = Vec::new();
        for d in lo..=hi {
            degree_counts.push((d, count_at(d)));
            sum += contrib_at(d);
        }
        let listed = if hi <= table.max_deg() {
            let mut primes = Vec::new();
            for d in lo..=hi {
                for &idx in table.primes_of_degree(d)? {
                    if !excluded_set.contains(&(d, idx)) {
                        primes.push((d, idx));
                    }
                }
            }
            Some(primes)
        } else {
            None
        };
        pools.push(PrimePool {
            degrees: (lo, hi),
            degree_counts,
            listed,
            sum,
            next_contrib: contrib_at(hi + 1),
        });
        lambdas.push(hi);
    }

    Ok(LambdaSequence {
        field,
        modulus: modulus.clone(),
        lambdas,
        pools,
        truncated,
    })
}

fn binomial(n: &BigUint, k: u32) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - BigUint::from(i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

fn check_v(seq: &LambdaSequence, v: &[u32]) -> Result<()> {
    for (j0, &b) in v.iter().enumerate() {
        if b == 0 {
            continue;
        }
        match seq.pools.get(j0) {
            None => {
                return Err(Error::PoolTooSmall {
                    pool: j0 + 1,
                    available: 0,
                    requested: b as usize,
                })
            }
            Some(pool) => {
                if pool.total_count() < BigUint::from(b) {
                    return Err(Error::PoolTooSmall {
                        pool: j0 + 1,
                        available: pool.total_count().to_usize().unwrap_or(usize::MAX),
                        requested: b as usize,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Number of members of A(v): the product of per-pool binomials.
pub fn av_member_count(seq: &LambdaSequence, v: &[u32]) -> Result<BigUint> {
    check_v(seq, v)?;
    let mut total = BigUint::one();
    for (j0, &b) in v.iter().enumerate() {
        if b == 0 {
            continue;
        }
        // choosing b distinct primes across the degrees of pool j
        let pool = &seq.pools[j0];
        let mut per_pool = BigUint::zero();
        for combo in degree_count_vectors(&pool.degree_counts, b) {
            per_pool += combo.weight;
        }
        total *= per_pool;
    }
    Ok(total)
}

/// Calls `f` with the (degree, index) list of every member of A(v), one call
/// per member. Requires materialized prime lists and a member count within
/// `member_budget`.
pub fn for_each_av_member(
    seq: &LambdaSequence,
    v: &[u32],
    member_budget: u64,
    mut f: impl FnMut(&[(usize, u64)]) -> Result<()>,
) -> Result<()> {
    check_v(seq, v)?;
    let count = av_member_count(seq, v)?;
    if count > BigUint::from(member_budget) {
        return Err(Error::BudgetExceeded(format!(
            "A(v) holds {count} members, budget is {member_budget}"
        )));
    }
    let mut active: Vec<&[(usize, u64)]> = Vec::new();
    let mut picks: Vec<u32> = Vec::new();
    for (j0, &b) in v.iter().enumerate() {
        if b == 0 {
            continue;
        }
        let pool = &seq.pools[j0];
        match &pool.listed {
            Some(list) => active.push(list),
            None => {
                return Err(Error::BudgetExceeded(format!(
                    "pool {} is not materialized (degrees {}..={} exceed the sieve)",
                    j0 + 1,
                    pool.degrees.0,
                    pool.degrees.1
                )))
            }
        }
        picks.push(b);
    }
    let mut member: Vec<(usize, u64)> = Vec::new();
    descend_pools(&active, &picks, 0, &mut member, &mut f)
}

fn descend_pools(
    active: &[&[(usize, u64)]],
    picks: &[u32],
    level: usize,
    member: &mut Vec<(usize, u64)>,
    f: &mut impl FnMut(&[(usize, u64)]) -> Result<()>,
) -> Result<()> {
    if level == active.len() {
        return f(member);
    }
    let list = active[level];
    let k = picks[level] as usize;
    let mut choose = vec![0usize; k];
    combinations(list, k, 0, 0, &mut choose, &mut |chosen: &[usize]| {
        let base = member.len();
        for &c in chosen {
            member.push(list[c]);
        }
        let out = descend_pools(active, picks, level + 1, member, f);
        member.truncate(base);
        out
    })
}

fn combinations(
    list: &[(usize, u64)],
    k: usize,
    start: usize,
    depth: usize,
    choose: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if depth == k {
        return f(choose);
    }
    for i in start..=list.len() - (k - depth) {
        choose[depth] = i;
        combinations(list, k, i + 1, depth + 1, choose, f)?;
    }
    Ok(())
}

/// Exact sums over A(v) and the family size.
#[derive(Debug, Clone, PartialEq)]
pub struct AvStats {
    pub members: BigUint,
    pub sum_w: BigRational,
    pub sum_tau: BigRational,
    pub sum_l: BigRational,
    /// Exact sum of 1/|H| over the family.
    pub sum_inv: BigRational,
    /// Largest member degree (0 for the empty product family).
    pub max_degree: usize,
}

struct DegreeCombo {
    weight: BigUint,
    counts: Vec<(usize, u32)>,
}

/// All ways to pick `b` primes from a pool grouped by degree: count vectors
/// (k_d) with sum b, weighted by the product of binomials.
fn degree_count_vectors(degree_counts: &[(usize, BigUint)], b: u32) -> Vec<DegreeCombo> {
    let mut out = Vec::new();
    let mut current: Vec<(usize, u32)> = Vec::new();
    fn rec(
        degree_counts: &[(usize, BigUint)],
        pos: usize,
        remaining: u32,
        weight: BigUint,
        current: &mut Vec<(usize, u32)>,
        out: &mut Vec<DegreeCombo>,
    ) {
        if remaining == 0 {
            out.push(DegreeCombo {
                weight,
                counts: current.clone(),
            });
            return;
        }
        if pos == degree_counts.len() {
            return;
        }
        let (d, avail) = &degree_counts[pos];
        for k in 0..=remaining {
            let ways = binomial(avail, k);
            if ways.is_zero() {
                break;
            }
            if k > 0 {
                current.push((*d, k));
            }
            rec(
                degree_counts,
                pos + 1,
                remaining - k,
                weight.clone() * &ways,
                current,
                out,
            );
            if k > 0 {
                current.pop();
            }
        }
    }
    rec(
        degree_counts,
        0,
        b,
        BigUint::one(),
        &mut current,
        &mut out,
    );
    out
}

/// Exact sums of W(H)/|H|, tau(H)/|H| and L(H)/|H| over A(v) by aggregation
/// over degree multisets. Works for pools of any size.
pub fn av_stats_aggregated(seq: &LambdaSequence, v: &[u32]) -> Result<AvStats> {
    check_v(seq, v)?;
    let q = BigInt::from(seq.field.q());
    let mut per_pool: Vec<Vec<DegreeCombo>> = Vec::new();
    for (j0, &b) in v.iter().enumerate() {
        if b == 0 {
            continue;
        }
        per_pool.push(degree_count_vectors(&seq.pools[j0].degree_counts, b));
    }

    let mut stats = AvStats {
        members: BigUint::zero(),
        sum_w: BigRational::zero(),
        sum_tau: BigRational::zero(),
        sum_l: BigRational::zero(),
        sum_inv: BigRational::zero(),
        max_degree: 0,
    };
    let mut combined: Vec<(usize, u32)> = Vec::new();
    fn rec(
        per_pool: &[Vec<DegreeCombo>],
        level: usize,
        weight: BigUint,
        combined: &mut Vec<(usize, u32)>,
        q: &BigInt,
        stats: &mut AvStats,
    ) {
        if level == per_pool.len() {
            // k distinct primes of degree d, each squarefree
            let factors: Vec<(usize, u32)> = combined
                .iter()
                .flat_map(|&(d, k)| std::iter::repeat((d, 1)).take(k as usize))
                .collect();
            let ds = divisor_stats_from_factorization(&factors);
            let degree: usize = combined.iter().map(|&(d, k)| d * k as usize).sum();
            let norm = BigRational::from_integer(q.pow(degree as u32));
            let wbig = BigRational::from_integer(BigInt::from(weight.clone()));
            stats.sum_w += &wbig * BigRational::from_integer(BigInt::from(ds.w.clone())) / &norm;
            stats.sum_tau += &wbig * rat_u64(ds.tau) / &norm;
            stats.sum_l += &wbig * rat_u64(ds.distinct_degrees() as u64) / &norm;
            stats.sum_inv += &wbig / &norm;
            stats.members += weight;
            stats.max_degree = stats.max_degree.max(degree);
            return;
        }
        for combo in &per_pool[level] {
            let base = combined.len();
            combined.extend_from_slice(&combo.counts);
            rec(
                per_pool,
                level + 1,
                weight.clone() * &combo.weight,
                combined,
                q,
                stats,
            );
            combined.truncate(base);
        }
    }
    rec(
        &per_pool,
        0,
        BigUint::one(),
        &mut combined,
        &q,
        &mut stats,
    );
    Ok(stats)
}

/// The same sums by literal member enumeration. Verifies tau(H) = 2^B for
/// every member (B the total number of chosen primes) and, when the member
/// fits in the sieve, checks the statistics against the factorization route.
pub fn av_stats_enumerated(
    seq: &LambdaSequence,
    table: &SpfTable,
    v: &[u32],
    member_budget: u64,
) -> Result<AvStats> {
    let big_b: u32 = v.iter().sum();
    let q = BigInt::from(seq.field.q());
    let mut stats = AvStats {
        members: BigUint::zero(),
        sum_w: BigRational::zero(),
        sum_tau: BigRational::zero(),
        sum_l: BigRational::zero(),
        sum_inv: BigRational::zero(),
        max_degree: 0,
    };
    let field = seq.field.clone();
    for_each_av_member(seq, v, member_budget, |member| {
        let factors: Vec<(usize, u32)> = member.iter().map(|&(d, _)| (d, 1)).collect();
        let ds = divisor_stats_from_factorization(&factors);
        assert_eq!(
            ds.tau,
            1u64 << big_b,
            "member of A(v) must have 2^B divisors"
        );
        let degree: usize = member.iter().map(|&(d, _)| d).sum();
        if degree <= table.max_deg() {
            let mut h = Poly::one(&field);
            for &(d, idx) in member {
                h = h.mul(&monic_decode(&field, MonicIndex { degree: d, index: idx }))?;
            }
            let direct = crate::mtable::divisor_stats(table, &h)?;
            assert_eq!(direct, ds, "sieve route disagrees on {h}");
        }
        let norm = BigRational::from_integer(q.pow(degree as u32));
        stats.sum_l += rat_u64(ds.distinct_degrees() as u64) / &norm;
        stats.sum_tau += rat_u64(ds.tau) / &norm;
        stats.sum_w += BigRational::from_integer(BigInt::from(ds.w)) / &norm;
        stats.sum_inv += BigRational::one() / &norm;
        stats.members += BigUint::one();
        stats.max_degree = stats.max_degree.max(degree);
        Ok(())
    })?;
    Ok(stats)
}

/// Members of A(v) as polynomials, for small families.
pub fn enumerate_av_polys(
    seq: &LambdaSequence,
    v: &[u32],
    member_budget: u64,
) -> Result<Vec<Poly>> {
    let field = seq.field.clone();
    let mut out = Vec::new();
    for_each_av_member(seq, v, member_budget, |member| {
        let mut h = Poly::one(&field);
        for &(d, idx) in member {
            h = h.mul(&monic_decode(&field, MonicIndex { degree: d, index: idx }))?;
        }
        out.push(h);
        Ok(())
    })?;
    Ok(out)
}

/// f(v) = sum_{h=N}^{J} 2^(N-1-h+b_N+...+b_h), exact.
pub fn f_of_v(v: &[u32], n_start: usize) -> Result<BigRational> {
    if n_start == 0 || n_start > v.len() {
        return Err(Error::InvalidParameter(format!(
            "N must lie in 1..={}",
            v.len()
        )));
    }
    if v.iter().take(n_start - 1).any(|&b| b != 0) {
        return Err(Error::InvalidParameter(
            "f(v) requires b_1 = ... = b_(N-1) = 0".into(),
        ));
    }
    let mut total = BigRational::zero();
    let mut prefix: i64 = 0;
    for h in n_start..=v.len() {
        prefix += v[h - 1] as i64;
        let exp = n_start as i64 - 1 - h as i64 + prefix;
        total += pow2(exp);
    }
    Ok(total)
}

fn pow2(exp: i64) -> BigRational {
    if exp >= 0 {
        BigRational::from_integer(BigInt::from(2).pow(exp as u32))
    } else {
        BigRational::new(BigInt::one(), BigInt::from(2).pow((-exp) as u32))
    }
}

/// The vector family B(N, k): v = (b_1, ..., b_J) with J = N+k-1,
/// b_1 = ... = b_(N-1) = 0, b_N + ... + b_J = k and
/// b_j <= N min(j, J-j+1).
pub fn b_set(n_start: usize, k: usize) -> Result<Vec<Vec<u32>>> {
    if n_start == 0 || k == 0 {
        return Err(Error::InvalidParameter("N and k must be positive".into()));
    }
    let j_total = n_start + k - 1;
    let mut out = Vec::new();
    let mut v = vec![0u32; j_total];
    fn rec(
        v: &mut Vec<u32>,
        j: usize,
        remaining: usize,
        n_start: usize,
        j_total: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        if j > j_total {
            if remaining == 0 {
                out.push(v.clone());
            }
            return;
        }
        let cap = n_start * j.min(j_total - j + 1);
        for b in 0..=cap.min(remaining) {
            v[j - 1] = b as u32;
            rec(v, j + 1, remaining - b, n_start, j_total, out);
        }
        v[j - 1] = 0;
    }
    rec(&mut v, n_start, k, n_start, j_total, &mut out);
    Ok(out)
}

/// Ford's combinatorial sum over B(N,k) and its comparator k^(k-1)/k!:
/// returns (sum of 1/(b_N! ... b_J! f(v)), comparator).
pub fn ford_sum(n_start: usize, k: usize) -> Result<(BigRational, BigRational)> {
    let vectors = b_set(n_start, k)?;
    let mut sum = BigRational::zero();
    for v in &vectors {
        let mut denom = BigUint::one();
        for &b in v.iter().skip(n_start - 1) {
            denom *= factorial(b);
        }
        let fv = f_of_v(v, n_start)?;
        sum += BigRational::new(BigInt::one(), BigInt::from(denom)) / fv;
    }
    let comparator = BigRational::new(
        BigInt::from(BigUint::from(k as u64).pow(k as u32 - 1)),
        BigInt::from(factorial(k as u32)),
    );
    Ok((sum, comparator))
}

fn factorial(n: u32) -> BigUint {
    (1..=n).map(BigUint::from).product::<BigUint>().max(BigUint::one())
}

/// Exact sum of L(H)/|H| over monic H with deg H <= bound and (H, M) = 1.
pub fn lsum(table: &SpfTable, bound: usize, modulus: &Poly) -> Result<BigRational> {
    table.check_degree(bound)?;
    if modulus.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let field = table.field();
    let q = BigInt::from(field.q());
    let m_primes: BTreeSet<(usize, u64)> = if modulus.degree() == Some(0) {
        BTreeSet::new()
    } else {
        table
            .factorize(modulus)?
            .iter()
            .map(|(p, _)| {
                let mi = crate::gfpoly::monic_encode(p).unwrap();
                (mi.degree, mi.index)
            })
            .collect()
    };
    let mut total = BigRational::one(); // H = 1 contributes L/|H| = 1
    for d in 1..=bound {
        let norm = BigRational::from_integer(q.pow(d as u32));
        let mut l_total: u64 = 0;
        for idx in 0..crate::gfpoly::monic_count(field, d) {
            let factors = table.factorize_index(d, idx);
            if factors
                .iter()
                .any(|(p, _)| m_primes.contains(&(p.degree, p.index)))
            {
                continue;
            }
            let mut mask = 1u64;
            for (p, e) in &factors {
                for _ in 0..*e {
                    mask |= mask << p.degree;
                }
            }
            l_total += mask.count_ones() as u64;
        }
        total += rat_u64(l_total) / norm;
    }
    Ok(total)
}

/// Smallest N with N 2^(K+1-N) <= eta, and k = floor(log2 b) - 2N; the
/// parameters the degree-budget chain asks of (eta, b) given the empirical K.
pub fn choose_parameters(eta: f64, b: usize, k_empirical: f64) -> Option<(usize, usize)> {
    if eta <= 0.0 || b < 2 {
        return None;
    }
    let n = (1..=64).find(|&n| {
        (n as f64) * 2f64.powf(k_empirical + 1.0 - n as f64) <= eta
    })?;
    let k = (b as f64).log2().floor() as i64 - 2 * n as i64;
    if k < 1 {
        return None;
    }
    Some((n, k as usize))
}

/// Per-family Cauchy-Schwarz reports plus the aggregate comparison against
/// the degree-window L-sum:
/// for every v in B(N,k): (sum tau/|H|)^2 / (sum W/|H|) <= sum L/|H|, every
/// member degree within sum b_j lambda_j, the families pairwise disjoint,
/// and the total of the lower bounds at most lsum(window, M).
pub fn cs_pipeline_reports(
    table: &SpfTable,
    seq: &LambdaSequence,
    n_start: usize,
    k: usize,
    member_budget: u64,
) -> Result<Vec<Report>> {
    let vectors = b_set(n_start, k)?;
    let mut reports = Vec::new();
    let mut aggregate_lower = BigRational::zero();
    let mut window = 0usize;
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut total_members_enumerated = BigUint::zero();
    let mut duplicate_members = 0u64;
    let mut equality_cases = 0u64;

    for v in &vectors {
        let budget: usize = v
            .iter()
            .enumerate()
            .map(|(j0, &b)| {
                seq.pools
                    .get(j0)
                    .map(|p| p.degrees.1 * b as usize)
                    .unwrap_or(0)
            })
            .sum();
        window = window.max(budget);

        let enumerable = av_member_count(seq, v)? <= BigUint::from(member_budget)
            && v.iter().enumerate().all(|(j0, &b)| {
                b == 0 || seq.pools.get(j0).is_some_and(|p| p.listed.is_some())
            });
        let (stats, route) = if enumerable {
            let stats = av_stats_enumerated(seq, table, v, member_budget)?;
            // hash-set disjointness across families
            let field = seq.field.clone();
            for_each_av_member(seq, v, member_budget, |member| {
                let mut h = Poly::one(&field);
                for &(d, idx) in member {
                    h = h.mul(&monic_decode(&field, MonicIndex { degree: d, index: idx }))?;
                }
                if !seen.insert(h.coeffs().to_vec()) {
                    duplicate_members += 1;
                }
                Ok(())
            })?;
            total_members_enumerated += stats.members.clone();
            (stats, "enumerated")
        } else {
            (av_stats_aggregated(seq, v)?, "aggregated")
        };

        let lower = &stats.sum_tau * &stats.sum_tau / &stats.sum_w;
        if lower == stats.sum_l {
            equality_cases += 1;
        }
        aggregate_lower += &lower;
        let vtext = v
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(",");
        reports.push(
            Report::le("cs_per_family", &lower, &stats.sum_l)
                .with_param("v", &vtext)
                .with_param("route", route)
                .with_param("members", stats.members.clone()),
        );
        reports.push(
            Report::le(
                "family_degree_budget",
                &rat_u64(stats.max_degree as u64),
                &rat_u64(budget as u64),
            )
            .with_param("v", &vtext),
        );
    }

    reports.push(
        Report::eq(
            "families_pairwise_disjoint",
            &rat_u64(duplicate_members),
            &BigRational::zero(),
        )
        .with_param("members_enumerated", total_members_enumerated.clone())
        .with_param("distinct_members", seen.len()),
    );

    // the inclusion argument needs the L-sum window to cover every family
    // member, so a shallow sieve is an error rather than a clamp
    let window_sum = lsum(table, window, &seq.modulus)?;
    reports.push(
        Report::le("aggregate_vs_lsum", &aggregate_lower, &window_sum)
            .with_param("window", window)
            .with_param("equality_cases", equality_cases)
            .with_param("n_start", n_start)
            .with_param("k", k),
    );
    Ok(reports)
}
