//! Cross-module identities: randomized algebra checks, multiplicative
//! identities against brute-force oracles, partition identities, and the
//! reported-constant studies.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ffmt_core::fordsum::{av_stats_aggregated, b_set, lambda_sequence, ln2_lower};
use ffmt_core::gfpoly::{
    enumerate_monics, enumerate_residues, monic_count, parse_poly, Field, Poly,
};
use ffmt_core::mtable::divisor_stats;
use ffmt_core::rough::{psi, rough_residue_counts, xi};
use ffmt_core::sieve::SpfTable;

fn random_poly(rng: &mut StdRng, field: &Field, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    let mut coeffs: Vec<u32> = (0..=deg).map(|_| rng.gen_range(0..field.q())).collect();
    if let Some(last) = coeffs.last_mut() {
        if *last == 0 {
            *last = 1; // keep the intended degree
        }
    }
    Poly::from_coeffs(field, coeffs).unwrap()
}

fn random_monic(rng: &mut StdRng, field: &Field, deg: usize) -> Poly {
    let index = rng.gen_range(0..monic_count(field, deg));
    ffmt_core::gfpoly::monic_decode(
        field,
        ffmt_core::MonicIndex { degree: deg, index },
    )
}

#[test]
fn poly_mul_commutative_associative_distributive() {
    // 10^4 random triples per field
    for q in [2u64, 3, 4, 5, 9] {
        let field = Field::with_size(q).unwrap();
        let mut rng = StdRng::seed_from_u64(0x5eed + q);
        for _ in 0..10_000 {
            let a = random_poly(&mut rng, &field, 8);
            let b = random_poly(&mut rng, &field, 8);
            let c = random_poly(&mut rng, &field, 8);
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab, b.mul(&a).unwrap());
            assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                ab.add(&a.mul(&c).unwrap()).unwrap()
            );
        }
    }
}

#[test]
fn degree_and_norm_add_under_multiplication() {
    let mut rng = StdRng::seed_from_u64(7);
    for q in [2u64, 5, 8] {
        let field = Field::with_size(q).unwrap();
        for _ in 0..2_000 {
            let d1 = rng.gen_range(0..6);
            let d2 = rng.gen_range(0..6);
            let f = random_monic(&mut rng, &field, d1);
            let g = random_monic(&mut rng, &field, d2);
            let fg = f.mul(&g).unwrap();
            assert_eq!(fg.degree(), Some(d1 + d2));
            assert_eq!(
                fg.norm().unwrap(),
                f.norm().unwrap() * g.norm().unwrap()
            );
        }
    }
}

#[test]
fn gcd_divides_and_lcm_complements() {
    for q in [2u64, 3, 9] {
        let field = Field::with_size(q).unwrap();
        let mut rng = StdRng::seed_from_u64(40 + q);
        for _ in 0..500 {
            let a = random_poly(&mut rng, &field, 7);
            let b = random_poly(&mut rng, &field, 7);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let g = a.gcd(&b).unwrap();
            assert!(g.divides(&a).unwrap() && g.divides(&b).unwrap());
            assert!(g.is_monic());
            let l = a.lcm(&b).unwrap();
            // gcd * lcm = a * b up to the leading unit
            let prod = a.mul(&b).unwrap().to_monic().unwrap();
            assert_eq!(g.mul(&l).unwrap().to_monic().unwrap(), prod);
        }
    }
}

#[test]
fn parse_format_identities() {
    // parse . format is the identity; format . parse is the identity up to
    // term reordering
    let mut rng = StdRng::seed_from_u64(99);
    for q in [2u64, 3, 5, 9] {
        let field = Field::with_size(q).unwrap();
        for _ in 0..2_000 {
            let p = random_poly(&mut rng, &field, 9);
            let text = ffmt_core::gfpoly::format_poly(&p);
            assert_eq!(parse_poly(&text, &field).unwrap(), p, "q={q} text={text}");
        }
    }
    let f5 = Field::prime(5).unwrap();
    for (shuffled, canonical) in [
        ("1+T^3+2*T", "T^3+2*T+1"),
        ("T+T^2+T", "T^2+2*T"),
        ("4+3", "2"),
    ] {
        let p = parse_poly(shuffled, &f5).unwrap();
        assert_eq!(ffmt_core::gfpoly::format_poly(&p), canonical);
    }
}

#[test]
fn phi_divisor_sum_is_norm() {
    // sum over monic divisors D of F of Phi(D) equals |F|,
    // >= 10^3 random F per field
    for q in [2u64, 3, 4, 5] {
        let field = Field::with_size(q).unwrap();
        let max_deg = if q == 2 { 10 } else { 6 };
        let table = SpfTable::build(&field, max_deg).unwrap();
        let mut rng = StdRng::seed_from_u64(q * 31);
        for _ in 0..1_000 {
            let deg = rng.gen_range(1..=max_deg);
            let f = random_monic(&mut rng, &field, deg);
            let factors = table.factorize(&f).unwrap();
            // expand every divisor from the factorization
            let mut divisors = vec![Poly::one(&field)];
            for (p, e) in &factors {
                let mut next = Vec::with_capacity(divisors.len() * (*e as usize + 1));
                let mut power = Poly::one(&field);
                for _ in 0..=*e {
                    for d in &divisors {
                        next.push(d.mul(&power).unwrap());
                    }
                    power = power.mul(p).unwrap();
                }
                divisors = next;
            }
            let total: BigUint = divisors
                .iter()
                .map(|d| table.phi(d).unwrap())
                .sum();
            assert_eq!(total, f.norm().unwrap(), "q={q} f={f}");
        }
    }
}

#[test]
fn phi_matches_direct_enumeration_to_degree_8() {
    let field = Field::prime(2).unwrap();
    let table = SpfTable::build(&field, 8).unwrap();
    for m in enumerate_monics(&field, 8) {
        let direct = enumerate_residues(&field, 8)
            .filter(|a| a.is_coprime(&m).unwrap())
            .count();
        assert_eq!(table.phi(&m).unwrap(), BigUint::from(direct), "m={m}");
    }
    // and multiplicativity on coprime pairs over F_3
    let f3 = Field::prime(3).unwrap();
    let t3 = SpfTable::build(&f3, 8).unwrap();
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..300 {
        let da = rng.gen_range(1..=4);
        let db = rng.gen_range(1..=4);
        let a = random_monic(&mut rng, &f3, da);
        let b = random_monic(&mut rng, &f3, db);
        if a.is_coprime(&b).unwrap() {
            assert_eq!(
                t3.phi(&a.mul(&b).unwrap()).unwrap(),
                t3.phi(&a).unwrap() * t3.phi(&b).unwrap()
            );
        }
    }
}

#[test]
fn psi_ap_partitions_all_moduli_to_degree_4() {
    for q in [2u64, 3] {
        let field = Field::with_size(q).unwrap();
        let table = SpfTable::build(&field, 7).unwrap();
        for md in 1..=4usize {
            for m in enumerate_monics(&field, md) {
                for n in 1..=7usize {
                    let counts = rough_residue_counts(&table, n, &m).unwrap();
                    for b in 1..n {
                        let total: u64 = counts
                            .iter()
                            .skip(b + 1)
                            .map(|row| row.iter().sum::<u64>())
                            .sum();
                        assert_eq!(
                            total,
                            psi(&table, n, b).unwrap(),
                            "q={q} m={m} n={n} b={b}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn cauchy_schwarz_on_random_families() {
    // (sum tau/|H|)^2 <= (sum L/|H|)(sum W/|H|) for arbitrary finite
    // families, in exact rationals
    let field = Field::prime(2).unwrap();
    let table = SpfTable::build(&field, 10).unwrap();
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..50 {
        let size = rng.gen_range(1..=40);
        let mut sum_tau = BigRational::zero();
        let mut sum_l = BigRational::zero();
        let mut sum_w = BigRational::zero();
        for _ in 0..size {
            let dh = rng.gen_range(0..=10);
            let h = random_monic(&mut rng, &field, dh);
            let stats = divisor_stats(&table, &h).unwrap();
            let norm = BigRational::from_integer(BigInt::from(2).pow(
                h.degree().unwrap() as u32,
            ));
            sum_tau += BigRational::from_integer(BigInt::from(stats.tau)) / &norm;
            sum_l += BigRational::from_integer(BigInt::from(
                stats.distinct_degrees() as u64
            )) / &norm;
            sum_w += BigRational::from_integer(BigInt::from(stats.w)) / &norm;
        }
        assert!(&sum_tau * &sum_tau <= &sum_l * &sum_w);
    }
}

#[test]
fn lambda_bounds_small_fields() {
    // lambda_j within [2^(j-K), 2^(j+K)] for the empirical K, and K <= 3
    for q in [2u64, 3, 4, 5] {
        let field = Field::with_size(q).unwrap();
        let table = SpfTable::build(&field, 6).unwrap();
        let seq = lambda_sequence(&table, &Poly::one(&field), 6, 64).unwrap();
        assert!(!seq.truncated());
        let k = seq.k_empirical();
        assert!(k <= 3.0, "q={q}: K = {k}");
        for (j0, &l) in seq.lambdas().iter().enumerate() {
            let j = (j0 + 1) as f64;
            assert!((l as f64) >= 2f64.powf(j - k) - 1e-9);
            assert!((l as f64) <= 2f64.powf(j + k) + 1e-9);
        }
    }
}

#[test]
fn w_sum_shape_constant_reported() {
    // sum W/|H| against the product-form bound
    // (2 ln 2)^B / (prod b_j!) * sum_j 2^(-j + b_1 + ... + b_j):
    // the quotient is an empirical constant, reported not asserted
    let field = Field::prime(2).unwrap();
    let table = SpfTable::build(&field, 8).unwrap();
    let seq = lambda_sequence(&table, &Poly::one(&field), 5, 64).unwrap();
    let ln2 = 2f64.ln();
    let mut c0: f64 = 0.0;
    for n_start in 1..=2usize {
        for k in 1..=3usize {
            for v in b_set(n_start, k).unwrap() {
                let stats = av_stats_aggregated(&seq, &v).unwrap();
                let b_total: u32 = v.iter().sum();
                let mut denom_fact = 1f64;
                for &b in &v {
                    denom_fact *= (1..=b).map(|x| x as f64).product::<f64>().max(1.0);
                }
                let mut tail = 0f64;
                let mut prefix = 0i64;
                for (j0, &b) in v.iter().enumerate() {
                    prefix += b as i64;
                    tail += 2f64.powi(-(j0 as i32 + 1) + prefix as i32);
                }
                let shape = (2.0 * ln2).powi(b_total as i32) / denom_fact * tail;
                let measured = stats.sum_w.to_f64().unwrap();
                assert!(measured.is_finite() && measured > 0.0);
                c0 = c0.max(measured / shape);
            }
        }
    }
    println!("empirical W-sum shape constant C0 = {c0:.4}");
    assert!(c0.is_finite() && c0 > 0.0);
}

#[test]
fn capped_counts_decompose_by_type() {
    // theta_E as a sum of xi over capped partitions, exhaustively for q=2
    let field = Field::prime(2).unwrap();
    let table = SpfTable::build(&field, 6).unwrap();
    let modulus = parse_poly("T^2+T+1", &field).unwrap();
    for n in 2..=6usize {
        for b in 1..n {
            for e in ffmt_core::gfpoly::invertible_residues(&field, &modulus).unwrap() {
                let direct = ffmt_core::rough::capped_rough_count(
                    &table,
                    &ffmt_core::rough::CappedTypeQuery::new(n, b)
                        .with_residue(e.clone(), modulus.clone()),
                )
                .unwrap();
                let by_type: u64 = ffmt_core::rough::partitions_of(n)
                    .iter()
                    .filter(|m| m.iter().all(|&c| c <= 3))
                    .map(|m| xi(&table, n, m, b, Some((&e, &modulus))).unwrap())
                    .sum();
                assert_eq!(direct, by_type, "n={n} b={b} e={e}");
            }
        }
    }
}

#[test]
fn selberg_sum_exceeds_threshold_consequence() {
    // z (1 - 1/q) <= S(z), the weak bound used by the sieve chain
    for q in [2u64, 3, 5] {
        let field = Field::with_size(q).unwrap();
        let table = SpfTable::build(&field, 6).unwrap();
        for z in 1..=6usize {
            let s = ffmt_core::rough::sieve_sum(&table, z).unwrap();
            let weak = BigRational::new(
                BigInt::from(z as u64 * (q - 1)),
                BigInt::from(q),
            );
            assert!(s >= weak, "q={q} z={z}");
        }
    }
}

#[test]
fn ln2_threshold_is_tight_rational() {
    // ln 2 = 0.69314718055994530941...; the threshold is the 16-digit
    // truncation, strictly below it and within 1e-15
    let t = ln2_lower();
    let denom = BigInt::from(10u64).pow(16);
    assert_eq!(
        t,
        BigRational::new(BigInt::from(6_931_471_805_599_453u64), denom.clone())
    );
    // 0.6931471805599454 > ln 2 > 0.6931471805599453
    let upper = BigRational::new(BigInt::from(6_931_471_805_599_454u64), denom);
    assert!(t < upper);
    assert!((t.to_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
}
