//! `ffmt`: build and query smallest-prime-factor sieves over F_q[T], count
//! primes, rough polynomials and multiplication-table sets, run the Ford
//! machinery, and execute the verification suites. Counts and rationals are
//! printed exactly; machine output goes to --json/--csv.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use ffmt_core::error::Error;
use ffmt_core::fordsum::{
    cs_pipeline_reports, ford_sum, lambda_sequence, lsum,
};
use ffmt_core::gfpoly::{parse_poly, Field, Poly};
use ffmt_core::mtable::{
    divisor_stats, h_ap_count, h_count, h_divisor_ap_count, h_two_ap_count, m_ap_count, m_count,
    m_divisor_ap_count, m_two_ap_count, product_set_hits, ApSpec, DEFAULT_HITSET_BITS,
};
use ffmt_core::report::Report;
use ffmt_core::rough::{
    psi, psi_ap, selberg_q_form, selberg_upper_bound_reports, selberg_weights,
};
use ffmt_core::sieve::{SpfTable, DEFAULT_TABLE_BUDGET};
use ffmt_core::verify::{
    run_suite, scaling_rows, Suite, TableSource, VerifyOptions,
};

#[derive(Parser)]
#[command(name = "ffmt", version, about = "Exact multiplication-table laboratory for F_q[T]")]
struct Cli {
    /// Worker thread cap for product marking.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write machine-readable JSON here.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write CSV here.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Table budget in entries (default 2^28).
    #[arg(long, global = true, value_name = "ENTRIES")]
    mem_budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

/// Field selection: prime power --q, or --p with --e.
#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(long, conflicts_with_all = ["p", "e"])]
    q: Option<u64>,
    #[arg(long, requires = "e")]
    p: Option<u64>,
    #[arg(long, requires = "p")]
    e: Option<u32>,
}

impl FieldArgs {
    fn field(&self) -> Result<Field, Error> {
        match (self.q, self.p, self.e) {
            (Some(q), None, None) => Field::with_size(q),
            (None, Some(p), Some(e)) => Field::new(p, e, None),
            _ => Err(Error::InvalidParameter(
                "supply --q, or --p together with --e".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a smallest-prime-factor sieve and persist it.
    Sieve {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        max_deg: usize,
        /// Output path (defaults into FFMT_SIEVE_DIR).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Number of prime polynomials of degree n.
    Pi {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// Primes of degree n congruent to --res mod --mod.
    PiAp {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        res: String,
        #[arg(long = "mod")]
        modulus: String,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// Number of b-rough monic polynomials of degree n.
    Psi {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// b-rough polynomials in an arithmetic progression.
    PsiAp {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        res: String,
        #[arg(long = "mod")]
        modulus: String,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// |H(n,b)|: degree-n polynomials with a degree-b divisor.
    H {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        /// Export the attained set as an FFHS bit array.
        #[arg(long)]
        export_hits: Option<PathBuf>,
    },
    /// |H(n,b;A,M)|: the residue constraint applies to the product.
    HAp {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        res: String,
        #[arg(long = "mod")]
        modulus: String,
    },
    /// |H'(n,b;A,M)|: the residue constraint applies to the divisor.
    HDivAp {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        res: String,
        #[arg(long = "mod")]
        modulus: String,
    },
    /// |H(n,b;A1,A2,M1,M2)|: both factors constrained.
    HTwoAp {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        res1: String,
        #[arg(long)]
        mod1: String,
        #[arg(long)]
        res2: String,
        #[arg(long)]
        mod2: String,
    },
    /// Multiplication-table counts |M(2n)| and the progression variants
    /// (--n is the half degree).
    Mtable {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        res: Option<String>,
        #[arg(long = "mod")]
        modulus: Option<String>,
        #[arg(long)]
        div_res: Option<String>,
        #[arg(long)]
        div_mod: Option<String>,
        #[arg(long)]
        res1: Option<String>,
        #[arg(long)]
        mod1: Option<String>,
        #[arg(long)]
        res2: Option<String>,
        #[arg(long)]
        mod2: Option<String>,
    },
    /// Distinct products of two arithmetic progressions.
    ProductSet {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        b1: usize,
        #[arg(long)]
        res1: Option<String>,
        #[arg(long)]
        mod1: Option<String>,
        #[arg(long)]
        b2: usize,
        #[arg(long)]
        res2: Option<String>,
        #[arg(long)]
        mod2: Option<String>,
        #[arg(long)]
        export_hits: Option<PathBuf>,
    },
    /// Divisor-degree statistics of one polynomial.
    Stats {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// Greedy prime-pool thresholds lambda_j with pool data.
    Lambda {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "mod")]
        modulus: Option<String>,
        #[arg(long, default_value_t = 5)]
        j_max: usize,
        #[arg(long, default_value_t = 64)]
        degree_cap: usize,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// Sum of L(H)/|H| over deg H <= bound, (H, M) = 1.
    Lsum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        bound: usize,
        #[arg(long = "mod")]
        modulus: Option<String>,
    },
    /// Ford's combinatorial sum over B(N,k) and its comparator.
    FordSum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Per-family Cauchy-Schwarz pipeline against the window L-sum.
    CsPipeline {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "mod")]
        modulus: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 64)]
        degree_cap: usize,
        #[arg(long, default_value_t = 65536)]
        member_budget: u64,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// Selberg weights at level z: S(z), exactness product, and the
    /// Psi(n,z) upper bounds when --n is given.
    Selberg {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        z: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// Run verification suites (exit 1 on any failed check).
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Scaled |H(n, n/2)| study rows.
    Scaling {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 8)]
        min_n: usize,
        #[arg(long)]
        max_n: usize,
    },
}

/// One counted quantity with its parameters; values are decimal strings.
#[derive(Serialize)]
struct CountRecord {
    name: String,
    params: BTreeMap<String, String>,
    value: String,
}

impl CountRecord {
    fn new(name: &str, value: impl ToString) -> CountRecord {
        CountRecord {
            name: name.into(),
            params: BTreeMap::new(),
            value: value.to_string(),
        }
    }

    fn with(mut self, key: &str, value: impl ToString) -> CountRecord {
        self.params.insert(key.into(), value.to_string());
        self
    }
}

enum Output {
    Count(CountRecord),
    Reports(Vec<Report>),
    Scaling(Vec<ffmt_core::verify::ScalingRow>),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_)
        | Error::DegreeExceedsTable { .. }
        | Error::BadSieveFile(_)
        | Error::Io(_) => 3,
        _ => 2,
    }
}

fn sieve_dir() -> Option<PathBuf> {
    std::env::var_os("FFMT_SIEVE_DIR").map(PathBuf::from)
}

/// Loads a cached sieve when FFMT_SIEVE_DIR holds one, else builds it
/// (persisting when the directory is set).
fn obtain_table(field: &Field, max_deg: usize, budget: Option<u64>) -> Result<SpfTable, Error> {
    let budget = budget.unwrap_or(DEFAULT_TABLE_BUDGET);
    let path = sieve_dir().map(|d| {
        d.join(format!("spf_q{}_d{}.ffmt", field.q(), max_deg))
    });
    if let Some(p) = &path {
        if p.exists() {
            let table = SpfTable::load(p)?;
            if table.field() == field && table.max_deg() >= max_deg {
                return Ok(table);
            }
        }
    }
    let table = SpfTable::build_with_budget(field, max_deg, budget)?;
    if let Some(p) = &path {
        if let Some(parent) = p.parent() {
            std::fs::create_dir_all(parent)?;
        }
        table.save(p)?;
    }
    Ok(table)
}

fn poly_arg(text: &str, field: &Field) -> Result<Poly, Error> {
    parse_poly(text, field)
}

fn modulus_or_one(text: &Option<String>, field: &Field) -> Result<Poly, Error> {
    match text {
        Some(t) => parse_poly(t, field),
        None => Ok(Poly::one(field)),
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode, Error> {
    let output = run_command(cli)?;
    let mut failures = false;
    match &output {
        Output::Count(record) => {
            println!("{}", record.value);
        }
        Output::Reports(reports) => {
            print_report_table(reports);
            failures = reports.iter().any(|r| !r.pass);
        }
        Output::Scaling(rows) => {
            println!("q,n,b,count,ratio_natural_log,ratio_log_q");
            for r in rows {
                println!(
                    "{},{},{},{},{:.6},{:.6}",
                    r.q, r.n, r.b, r.count, r.ratio_natural_log, r.ratio_log_q
                );
            }
        }
    }
    if let Some(path) = &cli.json {
        write_json(&output, path)?;
    }
    if let Some(path) = &cli.csv {
        write_csv(&output, path)?;
    }
    Ok(if failures {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn print_report_table(reports: &[Report]) {
    for r in reports {
        let params = r
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        println!(
            "{:4} {:32} {} {} {} {}",
            if r.pass { "ok" } else { "FAIL" },
            r.name,
            r.lhs,
            r.relation,
            r.rhs,
            params
        );
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    println!("{} checks, {} failed", reports.len(), failed);
}

fn write_json(output: &Output, path: &Path) -> Result<(), Error> {
    let text = match output {
        Output::Count(record) => serde_json::to_string_pretty(record).unwrap(),
        Output::Reports(reports) => serde_json::to_string_pretty(reports).unwrap(),
        Output::Scaling(rows) => {
            let records: Vec<CountRecord> = rows
                .iter()
                .map(|r| {
                    CountRecord::new("h_count", r.count)
                        .with("q", r.q)
                        .with("n", r.n)
                        .with("b", r.b)
                        .with("ratio_natural_log_approx", format!("{:.6}", r.ratio_natural_log))
                        .with("ratio_log_q_approx", format!("{:.6}", r.ratio_log_q))
                })
                .collect();
            serde_json::to_string_pretty(&records).unwrap()
        }
    };
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn write_csv(output: &Output, path: &Path) -> Result<(), Error> {
    let to_io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    let mut w = csv::Writer::from_path(path).map_err(to_io)?;
    match output {
        Output::Count(record) => {
            w.write_record(["name", "params", "value"]).map_err(to_io)?;
            let params = record
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";");
            w.write_record([&record.name, &params, &record.value]).map_err(to_io)?;
        }
        Output::Reports(reports) => {
            w.write_record(["name", "params", "lhs", "relation", "rhs", "pass", "wall_time_ms"]).map_err(to_io)?;
            for r in reports {
                let params = r
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(";");
                w.write_record([
                    &r.name,
                    &params,
                    &r.lhs,
                    &r.relation.to_string(),
                    &r.rhs,
                    &r.pass.to_string(),
                    &r.wall_time_ms.to_string(),
                ]).map_err(to_io)?;
            }
        }
        Output::Scaling(rows) => {
            w.write_record(["q", "n", "b", "count", "ratio_natural_log", "ratio_log_q"]).map_err(to_io)?;
            for r in rows {
                w.write_record([
                    &r.q.to_string(),
                    &r.n.to_string(),
                    &r.b.to_string(),
                    &r.count.to_string(),
                    &format!("{:.6}", r.ratio_natural_log),
                    &format!("{:.6}", r.ratio_log_q),
                ]).map_err(to_io)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn run_command(cli: &Cli) -> Result<Output, Error> {
    let budget = cli.mem_budget;
    let hitset_bits = cli.mem_budget.unwrap_or(DEFAULT_HITSET_BITS);
    match &cli.command {
        Command::Sieve {
            field,
            max_deg,
            out,
        } => {
            let field = field.field()?;
            let table = SpfTable::build_with_budget(
                &field,
                *max_deg,
                budget.unwrap_or(DEFAULT_TABLE_BUDGET),
            )?;
            let path = match out {
                Some(p) => p.clone(),
                None => sieve_dir()
                    .ok_or_else(|| {
                        Error::InvalidParameter(
                            "pass --out or set FFMT_SIEVE_DIR".into(),
                        )
                    })?
                    .join(format!("spf_q{}_d{}.ffmt", field.q(), max_deg)),
            };
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            table.save(&path)?;
            Ok(Output::Count(
                CountRecord::new("sieve", path.display())
                    .with("q", field.q())
                    .with("max_deg", max_deg),
            ))
        }
        Command::Pi { field, n, max_deg } => {
            let field = field.field()?;
            let table = obtain_table(&field, max_deg.unwrap_or(*n).max(*n), budget)?;
            Ok(Output::Count(
                CountRecord::new("pi", table.pi(*n)?)
                    .with("q", field.q())
                    .with("n", n),
            ))
        }
        Command::PiAp {
            field,
            n,
            res,
            modulus,
            max_deg,
        } => {
            let field = field.field()?;
            let table = obtain_table(&field, max_deg.unwrap_or(*n).max(*n), budget)?;
            let a = poly_arg(res, &field)?;
            let m = poly_arg(modulus, &field)?;
            Ok(Output::Count(
                CountRecord::new("pi_ap", table.pi_ap(*n, &a, &m)?)
                    .with("q", field.q())
                    .with("n", n)
                    .with("res", &a)
                    .with("mod", &m),
            ))
        }
        Command::Psi { field, n, b, max_deg } => {
            let field = field.field()?;
            let table = obtain_table(&field, max_deg.unwrap_or(*n).max(*n), budget)?;
            Ok(Output::Count(
                CountRecord::new("psi", psi(&table, *n, *b)?)
                    .with("q", field.q())
                    .with("n", n)
                    .with("b", b),
            ))
        }
        Command::PsiAp {
            field,
            n,
            b,
            res,
            modulus,
            max_deg,
        } => {
            let field = field.field()?;
            let table = obtain_table(&field, max_deg.unwrap_or(*n).max(*n), budget)?;
            let a = poly_arg(res, &field)?;
            let m = poly_arg(modulus, &field)?;
            Ok(Output::Count(
                CountRecord::new("psi_ap", psi_ap(&table, *n, *b, &a, &m)?)
                    .with("q", field.q())
                    .with("n", n)
                    .with("b", b)
                    .with("res", &a)
                    .with("mod", &m),
            ))
        }
        Command::H {
            field,
            n,
            b,
            export_hits,
        } => {
            let field = field.field()?;
            if let Some(path) = export_hits {
                let hits = product_set_hits(
                    &ApSpec::full(&field, *b),
                    &ApSpec::full(&field, *n - *b),
                    hitset_bits,
                )?;
                hits.export(path)?;
                return Ok(Output::Count(
                    CountRecord::new("h", hits.count())
                        .with("q", field.q())
                        .with("n", n)
                        .with("b", b)
                        .with("exported", path.display()),
                ));
            }
            Ok(Output::Count(
                CountRecord::new("h", h_count(&field, *n, *b, hitset_bits)?)
                    .with("q", field.q())
                    .with("n", n)
                    .with("b", b),
            ))
        }
        Command::HAp {
            field,
            n,
            b,
            res,
            modulus,
        } => {
            let field = field.field()?;
            let a = poly_arg(res, &field)?;
            let m = poly_arg(modulus, &field)?;
            Ok(Output::Count(
                CountRecord::new("h_ap", h_ap_count(&field, *n, *b, &a, &m, hitset_bits)?)
                    .with("q", field.q())
                    .with("n", n)
                    .with("b", b)
                    .with("res", &a)
                    .with("mod", &m),
            ))
        }
        Command::HDivAp {
            field,
            n,
            b,
            res,
            modulus,
        } => {
            let field = field.field()?;
            let a = poly_arg(res, &field)?;
            let m = poly_arg(modulus, &field)?;
            Ok(Output::Count(
                CountRecord::new(
                    "h_div_ap",
                    h_divisor_ap_count(&field, *n, *b, &a, &m, hitset_bits)?,
                )
                .with("q", field.q())
                .with("n", n)
                .with("b", b)
                .with("res", &a)
                .with("mod", &m),
            ))
        }
        Command::HTwoAp {
            field,
            n,
            b,
            res1,
            mod1,
            res2,
            mod2,
        } => {
            let field = field.field()?;
            let a1 = poly_arg(res1, &field)?;
            let m1 = poly_arg(mod1, &field)?;
            let a2 = poly_arg(res2, &field)?;
            let m2 = poly_arg(mod2, &field)?;
            Ok(Output::Count(
                CountRecord::new(
                    "h_two_ap",
                    h_two_ap_count(&field, *n, *b, &a1, &m1, &a2, &m2, hitset_bits)?,
                )
                .with("q", field.q())
                .with("n", n)
                .with("b", b)
                .with("res1", &a1)
                .with("mod1", &m1)
                .with("res2", &a2)
                .with("mod2", &m2),
            ))
        }
        Command::Mtable {
            field,
            n,
            res,
            modulus,
            div_res,
            div_mod,
            res1,
            mod1,
            res2,
            mod2,
        } => {
            let field = field.field()?;
            let record = match (res, div_res, res1) {
                (Some(res), None, None) => {
                    let a = poly_arg(res, &field)?;
                    let m = modulus_or_one(modulus, &field)?;
                    CountRecord::new("m_ap", m_ap_count(&field, *n, &a, &m, hitset_bits)?)
                        .with("res", &a)
                        .with("mod", &m)
                }
                (None, Some(dres), None) => {
                    let a = poly_arg(dres, &field)?;
                    let m = modulus_or_one(div_mod, &field)?;
                    CountRecord::new(
                        "m_div_ap",
                        m_divisor_ap_count(&field, *n, &a, &m, hitset_bits)?,
                    )
                    .with("div_res", &a)
                    .with("div_mod", &m)
                }
                (None, None, Some(r1)) => {
                    let a1 = poly_arg(r1, &field)?;
                    let m1 = modulus_or_one(mod1, &field)?;
                    let a2 = poly_arg(
                        res2.as_deref().ok_or_else(|| {
                            Error::InvalidParameter("--res2 required with --res1".into())
                        })?,
                        &field,
                    )?;
                    let m2 = modulus_or_one(mod2, &field)?;
                    CountRecord::new(
                        "m_two_ap",
                        m_two_ap_count(&field, *n, &a1, &m1, &a2, &m2, hitset_bits)?,
                    )
                    .with("res1", &a1)
                    .with("mod1", &m1)
                    .with("res2", &a2)
                    .with("mod2", &m2)
                }
                (None, None, None) => {
                    CountRecord::new("m", m_count(&field, *n, hitset_bits)?)
                }
                _ => {
                    return Err(Error::InvalidParameter(
                        "choose one variant: --res, --div-res, or --res1/--res2".into(),
                    ))
                }
            };
            Ok(Output::Count(record.with("q", field.q()).with("n", n)))
        }
        Command::ProductSet {
            field,
            b1,
            res1,
            mod1,
            b2,
            res2,
            mod2,
            export_hits,
        } => {
            let field = field.field()?;
            let m1 = modulus_or_one(mod1, &field)?;
            let a1 = match res1 {
                Some(r) => poly_arg(r, &field)?,
                None => Poly::zero(&field),
            };
            let m2 = modulus_or_one(mod2, &field)?;
            let a2 = match res2 {
                Some(r) => poly_arg(r, &field)?,
                None => Poly::zero(&field),
            };
            let o1 = ApSpec::new(*b1, a1.clone(), m1.clone())?;
            let o2 = ApSpec::new(*b2, a2.clone(), m2.clone())?;
            let hits = product_set_hits(&o1, &o2, hitset_bits)?;
            if let Some(path) = export_hits {
                hits.export(path)?;
            }
            Ok(Output::Count(
                CountRecord::new("product_set", hits.count())
                    .with("q", field.q())
                    .with("b1", b1)
                    .with("res1", &a1)
                    .with("mod1", &m1)
                    .with("b2", b2)
                    .with("res2", &a2)
                    .with("mod2", &m2),
            ))
        }
        Command::Stats { field, poly, max_deg } => {
            let field = field.field()?;
            let h = poly_arg(poly, &field)?;
            let deg = h.degree().unwrap_or(0);
            let table = obtain_table(&field, max_deg.unwrap_or(deg).max(deg), budget)?;
            let stats = divisor_stats(&table, &h)?;
            let degset = stats
                .degree_set
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let tau_d = stats
                .tau_by_degree
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(",");
            Ok(Output::Count(
                CountRecord::new("stats", stats.tau)
                    .with("q", field.q())
                    .with("poly", &h)
                    .with("degree_set", degset)
                    .with("L", stats.distinct_degrees())
                    .with("tau_by_degree", tau_d)
                    .with("tau", stats.tau)
                    .with("W", &stats.w),
            ))
        }
        Command::Lambda {
            field,
            modulus,
            j_max,
            degree_cap,
            max_deg,
        } => {
            let field = field.field()?;
            let m = modulus_or_one(modulus, &field)?;
            let table_deg = max_deg.unwrap_or_else(|| m.degree().unwrap_or(0).max(8));
            let table = obtain_table(&field, table_deg, budget)?;
            let seq = lambda_sequence(&table, &m, *j_max, *degree_cap)?;
            let lambdas = seq
                .lambdas()
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let pool_sizes = seq
                .pools()
                .iter()
                .map(|p| p.total_count().to_string())
                .collect::<Vec<_>>()
                .join(",");
            Ok(Output::Count(
                CountRecord::new("lambda", &lambdas)
                    .with("q", field.q())
                    .with("mod", &m)
                    .with("pool_sizes", pool_sizes)
                    .with("k_empirical", format!("{:.4}", seq.k_empirical()))
                    .with("truncated", seq.truncated()),
            ))
        }
        Command::Lsum {
            field,
            bound,
            modulus,
        } => {
            let field = field.field()?;
            let m = modulus_or_one(modulus, &field)?;
            let table = obtain_table(&field, *bound, budget)?;
            Ok(Output::Count(
                CountRecord::new("lsum", lsum(&table, *bound, &m)?)
                    .with("q", field.q())
                    .with("bound", bound)
                    .with("mod", &m),
            ))
        }
        Command::FordSum { n, k } => {
            let (sum, comparator) = ford_sum(*n, *k)?;
            let ratio = rational_to_f64(&sum) / rational_to_f64(&comparator);
            Ok(Output::Count(
                CountRecord::new("ford_sum", &sum)
                    .with("N", n)
                    .with("k", k)
                    .with("comparator", &comparator)
                    .with("ratio_approx", format!("{ratio:.6}")),
            ))
        }
        Command::CsPipeline {
            field,
            modulus,
            n,
            k,
            degree_cap,
            member_budget,
            max_deg,
        } => {
            let field = field.field()?;
            let m = modulus_or_one(modulus, &field)?;
            // the aggregate check sums L(H)/|H| over the full degree window
            // reached by the families, so size the sieve to that window
            // unless --max-deg pins it
            let table_deg = match max_deg {
                Some(d) => *d,
                None => {
                    let probe = obtain_table(&field, m.degree().unwrap_or(0).max(1), budget)?;
                    let seq = lambda_sequence(&probe, &m, n + k, *degree_cap)?;
                    let mut window = 0usize;
                    for v in ffmt_core::fordsum::b_set(*n, *k)? {
                        let w: usize = v
                            .iter()
                            .enumerate()
                            .map(|(j0, &b)| {
                                seq.pools().get(j0).map(|p| p.degrees.1 * b as usize).unwrap_or(0)
                            })
                            .sum();
                        window = window.max(w);
                    }
                    window.max(1)
                }
            };
            let table = obtain_table(&field, table_deg, budget)?;
            let seq = lambda_sequence(&table, &m, n + k, *degree_cap)?;
            Ok(Output::Reports(cs_pipeline_reports(
                &table,
                &seq,
                *n,
                *k,
                *member_budget,
            )?))
        }
        Command::Selberg { field, z, n, max_deg } => {
            let field = field.field()?;
            let need = max_deg.unwrap_or_else(|| n.unwrap_or(*z).max(*z));
            let table = obtain_table(&field, need, budget)?;
            let weights = selberg_weights(&table, *z)?;
            let product = selberg_q_form(&table, &weights)? * weights.s();
            let mut reports = vec![ffmt_core::report::Report::eq(
                "selberg_qs_product",
                &product,
                &ffmt_core::report::rat_u64(1),
            )
            .with_param("q", field.q())
            .with_param("z", z)
            .with_param("S", weights.s())];
            if let Some(n) = n {
                reports.extend(selberg_upper_bound_reports(&table, *n, *z)?);
            }
            Ok(Output::Reports(reports))
        }
        Command::Verify { suite, q, max_n } => {
            let opts = VerifyOptions {
                max_n: *max_n,
                q_filter: *q,
                sieve_dir: sieve_dir(),
                table_budget: budget,
                hitset_budget: cli.mem_budget,
            };
            let mut tables = TableSource::new(&opts);
            let mut reports = Vec::new();
            if suite == "all" {
                for s in Suite::ALL {
                    reports.extend(run_suite(s, &opts, &mut tables)?);
                }
            } else {
                let s = Suite::from_name(suite).ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "unknown suite {suite:?}; use one of all, {}",
                        Suite::ALL.map(|s| s.name()).join(", ")
                    ))
                })?;
                reports = run_suite(s, &opts, &mut tables)?;
            }
            Ok(Output::Reports(reports))
        }
        Command::Scaling { field, min_n, max_n } => {
            let field = field.field()?;
            Ok(Output::Scaling(scaling_rows(
                &field,
                *min_n,
                *max_n,
                hitset_bits,
            )?))
        }
    }
}

use ffmt_core::report::rat_to_f64 as rational_to_f64;
