//! Command-line front end: one subcommand per object the library computes.
//!
//! Exit codes: 0 = success (and, for checks, everything passed or all
//! divisor comparisons equal); 1 = a verification failed; 2 = the divisor
//! comparison found a difference; 3 = usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qcartan::partitions::{
    enumerate_multipartitions, enumerate_p_class_regular, enumerate_p_cores,
    enumerate_p_regular, enumerate_partitions, enumerate_q, Partition,
};
use qcartan::qpoly::ProductForm;
use qcartan::verify::{run_all, run_verify, Verdict, VerificationReport, VerifyOptions};
use qcartan::{determinants, fock, habacus, series, smith, weights};

#[derive(Parser)]
#[command(name = "qcartan", version, about = "Exact combinatorics of graded Cartan matrices")]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,

    /// Directory for the decomposition-matrix cache
    #[arg(long, global = true, env = "QCARTAN_CACHE_DIR", default_value = "cache")]
    cache_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct OutputArgs {
    /// Emit JSON (the default)
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,

    /// Emit aligned text tables instead of JSON
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumerateKind {
    /// All partitions of n
    Partitions,
    /// p-regular partitions of n
    Regular,
    /// p-class-regular partitions of n
    ClassRegular,
    /// p-cores of size n
    Cores,
    /// r-multipartitions of total size d
    Multipartitions,
    /// The index set Q_p(n)
    Q,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichWeight {
    E,
    H,
    G,
}

#[derive(Subcommand)]
enum Command {
    /// List a partition family
    Enumerate {
        #[arg(long, value_enum, default_value = "partitions")]
        kind: EnumerateKind,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        r: Option<u32>,
        /// Render partitions in exponent notation, e.g. 1^9 3 5^3
        #[arg(long)]
        exponents: bool,
    },
    /// Tabulate a weight over the partitions of n
    Weights {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "e")]
        which: WhichWeight,
    },
    /// Run the part-trading correspondence on one partition
    Glaisher {
        #[arg(long)]
        p: u32,
        /// Partition, written like 5,3,1,1 (brackets optional)
        partition: String,
    },
    /// The graded determinant in product form
    Delta {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        /// Tabulate the per-weight blocks instead of the full product
        #[arg(long)]
        by_block: bool,
        /// Also print the expanded polynomial
        #[arg(long)]
        expand: bool,
    },
    /// The graded decomposition matrix D_n(q)
    Decomp {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
    },
    /// The graded Cartan matrix C_n(q)
    Cartan {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        /// Restrict to the block with this core, written like 2,1
        #[arg(long)]
        block: Option<String>,
        /// Print only the exact determinant
        #[arg(long)]
        det: bool,
    },
    /// Elementary divisors of C_n(q) over Q[q, q^-1]
    Snf {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        /// Restrict to the block with this core
        #[arg(long)]
        block: Option<String>,
    },
    /// Compare Cartan elementary divisors with the diagonal weight matrices
    Conjecture {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        /// Compare block by block instead of globally
        #[arg(long)]
        blockwise: bool,
    },
    /// H-core and H-quotient of a strict partition (p = 2)
    Habacus {
        /// Strict partition, written like 9,7,3,2 (brackets optional)
        partition: String,
    },
    /// Generating-function identities against enumeration
    SeriesCheck {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 30)]
        order: usize,
    },
    /// Run statement-level verifications
    Verify {
        /// Statement id, e.g. thm-4.1 (see --list)
        statement: Option<String>,
        /// Shorthand: --theorem 7.1 means thm-7.1
        #[arg(long, conflicts_with = "statement")]
        theorem: Option<String>,
        /// Run every known statement
        #[arg(long, conflicts_with_all = ["statement", "theorem"])]
        all: bool,
        /// List the known statement ids
        #[arg(long)]
        list: bool,
        /// Moduli to sweep (repeatable)
        #[arg(long)]
        p: Vec<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, visible_alias = "dmax")]
        d: Option<u32>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        order: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    return ExitCode::SUCCESS;
                }
                _ => 3,
            };
            eprint!("{e}");
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cli: &Cli) -> qcartan::Result<ExitCode> {
    let out = cli.output;
    match &cli.command {
        Command::Enumerate { kind, n, p, d, r, exponents } => {
            if *exponents {
                for text in enumerate_exponent_notation(*kind, *n, *p)? {
                    println!("{text}");
                }
            } else {
                let doc = enumerate_doc(*kind, *n, *p, *d, *r)?;
                emit_list(out, &doc);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Weights { p, n, which } => {
            let rows: Vec<(Partition, ProductForm)> = match which {
                WhichWeight::E => enumerate_partitions(*n)
                    .into_iter()
                    .map(|lam| {
                        let w = weights::weight_e(&lam, *p);
                        (lam, w)
                    })
                    .collect(),
                WhichWeight::H => enumerate_partitions(*n)
                    .into_iter()
                    .map(|lam| {
                        let w = weights::weight_h(&lam, *p);
                        (lam, w)
                    })
                    .collect(),
                WhichWeight::G => enumerate_p_class_regular(*n, *p)?
                    .into_iter()
                    .map(|lam| {
                        let w = weights::weight_g(&lam, *p).expect("class regular input");
                        (lam, w)
                    })
                    .collect(),
            };
            if out.table {
                let table: Vec<Vec<String>> = rows
                    .iter()
                    .map(|(lam, w)| vec![lam.to_string(), w.to_string()])
                    .collect();
                print_table(&["partition", "weight"], &table);
            } else {
                let doc: Vec<Value> = rows
                    .iter()
                    .map(|(lam, w)| json!({"partition": lam.to_json(), "weight": w.to_json()}))
                    .collect();
                print_json(&Value::Array(doc));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Glaisher { p, partition } => {
            let lam = parse_partition(partition)?;
            let result = weights::glaisher(&lam, *p);
            if out.table {
                println!("image: {}", result.image);
                for (i, d) in &result.steps {
                    println!("g_{i} steps: {d}");
                }
            } else {
                print_json(&result.to_json());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Delta { p, n, by_block, expand } => {
            if *by_block {
                let mut rows = Vec::new();
                for d in 0..=(n / p) {
                    let cores = enumerate_p_cores(n - p * d, *p)?.len();
                    let block = determinants::delta_block(d, *p)?;
                    rows.push((d, cores, block));
                }
                if out.table {
                    let table: Vec<Vec<String>> = rows
                        .iter()
                        .map(|(d, c, b)| {
                            let mut row = vec![d.to_string(), c.to_string(), b.value.to_string()];
                            if *expand {
                                row.push(b.value.expand().to_string());
                            }
                            row
                        })
                        .collect();
                    let mut headers = vec!["d", "cores", "block"];
                    if *expand {
                        headers.push("expanded");
                    }
                    print_table(&headers, &table);
                } else {
                    let doc: Vec<Value> = rows
                        .iter()
                        .map(|(d, c, b)| {
                            let mut entry = json!({
                                "d": d,
                                "cores": c,
                                "block": b.value.to_json(),
                            });
                            if *expand {
                                entry["expanded"] = b.value.expand().to_json();
                            }
                            entry
                        })
                        .collect();
                    print_json(&Value::Array(doc));
                }
            } else {
                let delta = determinants::delta(*n, *p)?;
                if out.table {
                    println!("delta = {delta}");
                    if *expand {
                        println!("expanded = {}", delta.expand());
                    }
                } else {
                    let mut doc = json!({"p": p, "n": n, "delta": delta.to_json()});
                    if *expand {
                        doc["expanded"] = delta.expand().to_json();
                    }
                    print_json(&doc);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decomp { p, n } => {
            let d = fock::canonical_basis_cached(*n, *p, &cli.cache_dir)?;
            if out.table {
                let headers: Vec<String> =
                    std::iter::once("lambda \\ mu".to_string())
                        .chain(d.cols().iter().map(|c| c.to_string()))
                        .collect();
                let rows: Vec<Vec<String>> = d
                    .rows()
                    .iter()
                    .enumerate()
                    .map(|(r, lam)| {
                        std::iter::once(lam.to_string())
                            .chain((0..d.cols().len()).map(|c| d.entry(r, c).to_string()))
                            .collect()
                    })
                    .collect();
                let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
                print_table(&header_refs, &rows);
            } else {
                print_json(&d.to_json());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cartan { p, n, block, det } => {
            let cartan = fock::cartan_cached(*n, *p, &cli.cache_dir)?;
            let matrix = match block {
                Some(text) => {
                    let index = block_index(text, *n, *p)?;
                    fock::cartan_block(&cartan, &index)?
                }
                None => cartan,
            };
            if *det {
                let value = matrix.det()?;
                if out.table {
                    println!("det = {value}");
                } else {
                    print_json(&json!({"p": p, "n": n, "det": value.to_json()}));
                }
            } else if out.table {
                let headers: Vec<String> = std::iter::once(String::new())
                    .chain(matrix.labels().iter().map(|l| l.to_string()))
                    .collect();
                let rows: Vec<Vec<String>> = matrix
                    .labels()
                    .iter()
                    .enumerate()
                    .map(|(r, lam)| {
                        std::iter::once(lam.to_string())
                            .chain(
                                (0..matrix.size()).map(|c| matrix.entry(r, c).to_string()),
                            )
                            .collect()
                    })
                    .collect();
                let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
                print_table(&header_refs, &rows);
            } else {
                print_json(&matrix.to_json());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Snf { p, n, block } => {
            let cartan = fock::cartan_cached(*n, *p, &cli.cache_dir)?;
            let matrix = match block {
                Some(text) => {
                    let index = block_index(text, *n, *p)?;
                    fock::cartan_block(&cartan, &index)?
                }
                None => cartan,
            };
            let laurent: Vec<Vec<qcartan::LaurentPoly>> = matrix
                .entries()
                .iter()
                .map(|row| row.iter().map(qcartan::LaurentPoly::from_qpoly).collect())
                .collect();
            let chain = smith::snf(&laurent)?;
            if out.table {
                for (i, d) in chain.divisors.iter().enumerate() {
                    println!("d_{} = {d}", i + 1);
                }
            } else {
                print_json(&json!({"p": p, "n": n, "divisors": chain.to_json()}));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Conjecture { p, n, blockwise } => {
            let report = if *blockwise {
                smith::check_conjecture_blockwise(*n, *p, Some(&cli.cache_dir))?
            } else {
                smith::check_conjecture(*n, *p, Some(&cli.cache_dir))?
            };
            if out.table {
                for c in &report.comparisons {
                    let status = if c.equal { "equal" } else { "DIFFER" };
                    println!("{} vs {}: {status}", c.lhs, c.rhs);
                    if let Some((i, a, b)) = &c.first_difference {
                        println!("  first difference at index {i}: {a} vs {b}");
                    }
                }
            } else {
                print_json(&report.to_json());
            }
            Ok(if report.all_equal() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Habacus { partition } => {
            let lam = parse_partition(partition)?;
            let core = habacus::h_core(&lam)?;
            let quotient = habacus::h_quotient(&lam)?;
            if out.table {
                println!("core: {core}");
                println!("quotient: {quotient}");
            } else {
                print_json(&json!({"core": core.to_json(), "quotient": quotient.to_json()}));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SeriesCheck { p, order } => {
            let report = series::oracle_counts(*order, *p)?;
            if out.table {
                for check in &report.checks {
                    let status = if check.pass() { "pass" } else { "FAIL" };
                    println!("{}: {status}", check.id);
                }
            } else {
                print_json(&report.to_json());
            }
            Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Verify { statement, theorem, all, list, p, n, d, m, order } => {
            if *list {
                for s in qcartan::verify::STATEMENTS {
                    println!("{s}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let options = VerifyOptions {
                p_values: if p.is_empty() { None } else { Some(p.clone()) },
                max_n: *n,
                max_d: *d,
                max_m: *m,
                order: *order,
                cache_dir: Some(cli.cache_dir.clone()),
            };
            let reports: Vec<VerificationReport> = if *all {
                run_all(&options)?
            } else {
                let id = match (statement, theorem) {
                    (Some(s), _) => s.clone(),
                    (None, Some(t)) => format!("thm-{t}"),
                    (None, None) => {
                        return Err(qcartan::Error::Invalid(
                            "pass a statement id, --theorem, --all or --list".into(),
                        ))
                    }
                };
                vec![run_verify(&id, &options)?]
            };
            if out.table {
                for r in &reports {
                    let extra = match (&r.witness, r.conjecture_equal) {
                        (Some(w), _) => format!(" [{w}]"),
                        (None, Some(equal)) => format!(" [all_equal={equal}]"),
                        _ => String::new(),
                    };
                    println!(
                        "{}: {} ({} ms){extra}",
                        r.statement,
                        r.verdict.as_str(),
                        r.runtime_ms
                    );
                }
            } else {
                print_json(&qcartan::verify::reports_to_json(&reports));
            }
            let failed = reports.iter().any(|r| r.verdict == Verdict::Fail);
            let differs = reports.iter().any(|r| r.conjecture_equal == Some(false));
            Ok(if failed {
                ExitCode::FAILURE
            } else if differs {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn enumerate_doc(
    kind: EnumerateKind,
    n: Option<u32>,
    p: Option<u32>,
    d: Option<u32>,
    r: Option<u32>,
) -> qcartan::Result<Vec<Value>> {
    let need = |x: Option<u32>, flag: &str| {
        x.ok_or_else(|| qcartan::Error::Invalid(format!("--{flag} is required for this kind")))
    };
    Ok(match kind {
        EnumerateKind::Partitions => enumerate_partitions(need(n, "n")?)
            .iter()
            .map(Partition::to_json)
            .collect(),
        EnumerateKind::Regular => enumerate_p_regular(need(n, "n")?, need(p, "p")?)?
            .iter()
            .map(Partition::to_json)
            .collect(),
        EnumerateKind::ClassRegular => {
            enumerate_p_class_regular(need(n, "n")?, need(p, "p")?)?
                .iter()
                .map(Partition::to_json)
                .collect()
        }
        EnumerateKind::Cores => enumerate_p_cores(need(n, "n")?, need(p, "p")?)?
            .iter()
            .map(Partition::to_json)
            .collect(),
        EnumerateKind::Multipartitions => {
            enumerate_multipartitions(need(d, "d")?, need(r, "r")?)
                .iter()
                .map(|mu| mu.to_json())
                .collect()
        }
        EnumerateKind::Q => enumerate_q(need(n, "n")?, need(p, "p")?)?
            .iter()
            .map(|qi| qi.to_json())
            .collect(),
    })
}

/// Exponent-notation rendering for the plain partition families.
fn enumerate_exponent_notation(
    kind: EnumerateKind,
    n: Option<u32>,
    p: Option<u32>,
) -> qcartan::Result<Vec<String>> {
    let need = |x: Option<u32>, flag: &str| {
        x.ok_or_else(|| qcartan::Error::Invalid(format!("--{flag} is required for this kind")))
    };
    let family = match kind {
        EnumerateKind::Partitions => enumerate_partitions(need(n, "n")?),
        EnumerateKind::Regular => enumerate_p_regular(need(n, "n")?, need(p, "p")?)?,
        EnumerateKind::ClassRegular => enumerate_p_class_regular(need(n, "n")?, need(p, "p")?)?,
        EnumerateKind::Cores => enumerate_p_cores(need(n, "n")?, need(p, "p")?)?,
        _ => {
            return Err(qcartan::Error::Invalid(
                "--exponents applies to plain partition families".into(),
            ))
        }
    };
    Ok(family.iter().map(Partition::exponent_notation).collect())
}

/// Resolves a `--block` core string into a block label of `C_n(q)`.
fn block_index(text: &str, n: u32, p: u32) -> qcartan::Result<qcartan::partitions::BlockIndex> {
    let core = parse_partition(text)?;
    if core.size() > n || !(n - core.size()).is_multiple_of(p) {
        return Err(qcartan::Error::Invalid(format!(
            "core {core} does not label a block of C_{n}(q) at p = {p}"
        )));
    }
    let weight = (n - core.size()) / p;
    qcartan::partitions::BlockIndex::new(p, core, weight)
}

/// Accepts `[9,7,3,2]`, `9,7,3,2` or `9 7 3 2`.
fn parse_partition(text: &str) -> qcartan::Result<Partition> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "[]" {
        return Ok(Partition::empty());
    }
    let inner = trimmed.trim_start_matches('[').trim_end_matches(']');
    let parts: std::result::Result<Vec<u32>, _> = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect();
    match parts {
        Ok(parts) => Partition::new(parts),
        Err(_) => Err(qcartan::Error::Invalid(format!("cannot parse partition {text:?}"))),
    }
}

fn print_json(doc: &Value) {
    println!("{}", serde_json::to_string_pretty(doc).expect("serializable"));
}

fn emit_list(out: OutputArgs, items: &[Value]) {
    if out.table {
        for item in items {
            println!("{item}");
        }
    } else {
        print_json(&Value::Array(items.to_vec()));
    }
}

fn print_table(headers: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(cell.len());
            }
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c:<width$}", width = widths.get(i).copied().unwrap_or(0)))
            .collect();
        println!("{}", padded.join("  ").trim_end());
    };
    line(headers.iter().map(|h| h.to_string()).collect());
    line(widths.iter().map(|w| "-".repeat(*w)).collect());
    for row in rows {
        line(row.clone());
    }
}
