//! Acceptance suite: every verification suite on its full grid, one
//! pass/fail line per criterion.

use std::sync::{Mutex, OnceLock};

use ffmt_core::report::Report;
use ffmt_core::verify::{run_suite, Suite, TableSource, VerifyOptions};

fn tables() -> &'static Mutex<TableSource> {
    static TABLES: OnceLock<Mutex<TableSource>> = OnceLock::new();
    TABLES.get_or_init(|| Mutex::new(TableSource::new(&VerifyOptions::default())))
}

fn run(criterion: usize, suite: Suite) -> Vec<Report> {
    let opts = VerifyOptions::default();
    let reports = {
        let mut tables = tables().lock().unwrap();
        run_suite(suite, &opts, &mut tables).expect("suite must run")
    };
    let failed: Vec<&Report> = reports.iter().filter(|r| !r.pass).collect();
    let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "criterion {criterion} ({}): {verdict} [{} checks, {} failed]",
        suite.name(),
        reports.len(),
        failed.len()
    );
    for f in failed.iter().take(5) {
        println!("    {} {:?}: {} {} {}", f.name, f.params, f.lhs, f.relation, f.rhs);
    }
    reports
}

fn assert_all_pass(reports: &[Report]) {
    let failed: Vec<&Report> = reports.iter().filter(|r| !r.pass).collect();
    assert!(
        failed.is_empty(),
        "{} checks failed, first: {:?}",
        failed.len(),
        failed.first()
    );
}

#[test]
fn criterion_1_figure_reproduction() {
    let reports = run(1, Suite::Figure1);
    assert_eq!(reports.len(), 3);
    assert_all_pass(&reports);
}

#[test]
fn criterion_2_prime_count_identity() {
    let reports = run(2, Suite::Primes);
    // 3 reports per (q, n) over the fixed depth grid
    let expected: usize = [20, 14, 10, 9, 7, 7, 7].iter().sum::<usize>() * 3;
    assert_eq!(reports.len(), expected);
    assert_all_pass(&reports);
}

#[test]
fn criterion_3_selberg_exactness() {
    let reports = run(3, Suite::Selberg);
    assert!(reports.iter().any(|r| r.name == "selberg_qs_product"));
    assert!(reports.iter().any(|r| r.name == "selberg_upper_bound"));
    assert_all_pass(&reports);
}

#[test]
fn criterion_4_rough_count_bounds() {
    let reports = run(4, Suite::Rough);
    assert!(reports.iter().any(|r| r.name == "psi_recursion"));
    assert!(reports.iter().any(|r| r.name == "psi_lower_allb"));
    assert!(reports.iter().any(|r| r.name == "psi_equals_pi_above_half"));
    assert!(reports.iter().any(|r| r.name == "psi_spot_4_1"));
    assert_all_pass(&reports);
}

#[test]
fn criterion_5_equidistribution_ratio() {
    let reports = run(5, Suite::Equidistribution);
    assert!(!reports.is_empty());
    // the grid reaches n = 20 and moduli of degree up to 3
    assert!(reports
        .iter()
        .any(|r| r.params.get("n").map(String::as_str) == Some("20")));
    assert!(reports
        .iter()
        .any(|r| r.params.get("modulus").map(String::as_str) == Some("T^3+T^2+T")));
    assert_all_pass(&reports);
}

#[test]
fn criterion_6_mtable_two_routes_and_scaling() {
    let reports = run(6, Suite::Mtable);
    assert!(reports.iter().any(|r| r.name == "h_count_two_routes"));
    assert!(reports.iter().any(|r| r.name == "h_spot_4_2"));
    assert!(reports.iter().any(|r| r.name == "m_spot_4"));
    // scaling rows cover n in 8..=26, bounded both ways
    for name in ["scaling_ratio_lower", "scaling_ratio_upper"] {
        let rows = reports.iter().filter(|r| r.name == name).count();
        assert_eq!(rows, 19, "{name}");
    }
    assert_all_pass(&reports);
}

#[test]
fn criterion_7_disjoint_union() {
    let reports = run(7, Suite::Disjoint);
    assert!(reports
        .iter()
        .any(|r| r.name == "second_class_pairwise_disjoint"));
    assert!(reports.iter().any(|r| r.name == "disjoint_union_le_hprime"));
    assert_all_pass(&reports);
}

#[test]
fn criterion_8_ford_machinery() {
    let reports = run(8, Suite::Ford);
    for name in [
        "lambda_prefix",
        "lambda_greedy_maximality",
        "tau_identity_2_pow_b",
        "cs_per_family",
        "lsum_2_trivial_modulus",
        "ford_sum_1_1",
        "ford_sum_1_1_comparator",
    ] {
        assert!(
            reports.iter().any(|r| r.name == name),
            "missing report {name}"
        );
    }
    assert_all_pass(&reports);
}

#[test]
fn criterion_9_delta_constant() {
    let reports = run(9, Suite::Delta);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].lhs, "8607/100000");
    assert_eq!(reports[0].params.get("printed").unwrap(), "0.08607");
    assert_all_pass(&reports);
}
