//! Command-line front end.
//!
//! Exit status: 0 success, 1 any other error (bad input, parse failures),
//! 2 invalid flags, 3 enumeration budget exceeded, 4 internal invariant
//! violated (including a failed certificate under `--verify`).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::degree_summary;
use crate::error::{Budget, Error, Result};
use crate::field::Field;
use crate::hyperelliptic::{verify_order_g, Certificate, Curve};
use crate::poly::Poly;
use crate::residues::{char_sum_double, char_sum_fixed, CharSumResult};
use crate::search::{
    build_f, census, derive_params, enumerate_solutions, CensusReport, SearchOptions,
    SearchParams, SolutionTuple, Strategy,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "torsion", version, about = "Class group torsion constructions over F_q[x]")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Maximum number of enumeration nodes.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT.0)]
    pub budget: u128,

    /// Worker threads for the exhaustive searches.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    /// Factorization seed; results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output file (stdout if absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct Regime {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub g: u32,
    #[arg(long = "L")]
    pub l: usize,
    /// Override the derived `T`.
    #[arg(long = "T")]
    pub t: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived degree parameters.
    Params(Regime),
    /// All solutions in the regime, one JSON object per line.
    Search {
        #[command(flatten)]
        regime: Regime,
        /// Check the order-g certificate of every solution.
        #[arg(long)]
        verify: bool,
        /// Use the naive triple loop instead of congruence lifting.
        #[arg(long)]
        naive: bool,
    },
    /// Search followed by aggregation by f.
    Census {
        #[command(flatten)]
        regime: Regime,
        #[arg(long)]
        verify: bool,
    },
    /// Order-g certificate for one triple, or for every line of a JSONL file.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        t: Option<String>,
        /// JSONL file as written by `search`.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Point counts, L-polynomial and class number of y^2 = f.
    Curve {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        f: String,
        /// Also count reduced divisors directly and compare.
        #[arg(long)]
        brute: bool,
    },
    /// Degree sums of mu, phi, d and the irreducible count.
    Tables {
        #[arg(long)]
        q: u64,
        #[arg(long = "U", value_delimiter = ',', required = true)]
        u: Vec<u32>,
    },
    /// Character sums, for a fixed b or summed over monic b of degree B.
    Charsum {
        #[arg(long)]
        q: u64,
        #[arg(long, conflicts_with = "big_b")]
        b: Option<String>,
        #[arg(long = "B", id = "big_b")]
        big_b: Option<usize>,
        #[arg(long = "D", value_delimiter = ',', required = true)]
        d: Vec<usize>,
    },
}

/// Rendered output plus the error (if any) that should set the exit status
/// after the output has been written.
pub struct Outcome {
    pub text: String,
    pub failure: Option<Error>,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, failure: None }
    }
}

/// Parses arguments, runs, writes output; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Executes one command and writes its output to `--out` or stdout.
pub fn run(config: &RunConfig) -> Result<()> {
    let outcome = execute(config)?;
    match &config.out {
        Some(path) => fs::write(path, &outcome.text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.text.as_bytes());
        }
    }
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Executes one command, returning the rendered output.
pub fn execute(config: &RunConfig) -> Result<Outcome> {
    if config.budget == 0 {
        return Err(Error::InvalidArgument("--budget must be positive".into()));
    }
    if config.workers == 0 {
        return Err(Error::InvalidArgument("--workers must be at least 1".into()));
    }
    let budget = Budget(config.budget);
    let options = |naive: bool| SearchOptions {
        budget,
        workers: config.workers,
        strategy: if naive { Strategy::Naive } else { Strategy::Lifting },
    };
    match &config.command {
        Command::Params(r) => {
            let params = derive_params(r.q, r.g, r.l, r.t)?;
            let fmt = pick(config.format, Format::Json, &[Format::Json, Format::Jsonl, Format::Csv])?;
            Ok(Outcome::ok(render_params(&params, fmt)?))
        }
        Command::Search { regime, verify, naive } => {
            let params = derive_params(regime.q, regime.g, regime.l, regime.t)?;
            let fmt = pick(config.format, Format::Jsonl, &[Format::Jsonl, Format::Json, Format::Csv])?;
            let solutions = enumerate_solutions(&params, &options(*naive))?;
            let failure = if *verify {
                certify_all(&solutions, params.g, budget)?.1
            } else {
                None
            };
            let text = render_solutions(&solutions, &params, fmt)?;
            Ok(Outcome { text, failure })
        }
        Command::Census { regime, verify } => {
            let params = derive_params(regime.q, regime.g, regime.l, regime.t)?;
            let fmt = pick(config.format, Format::Csv, &[Format::Csv, Format::Json])?;
            let (report, solutions) = census(&params, &options(false))?;
            let (certs, failure) = if *verify {
                let (c, f) = certify_all(&solutions, params.g, budget)?;
                (Some(c), f)
            } else {
                (None, None)
            };
            let text = render_census(&report, certs.as_deref(), fmt)?;
            Ok(Outcome { text, failure })
        }
        Command::Verify { q, g, m, n, t, input } => {
            let field = Field::with_order(*q)?;
            let fmt = pick(config.format, Format::Jsonl, &[Format::Jsonl, Format::Json])?;
            let entries = match input {
                Some(path) => read_solutions(&field, path)?,
                None => {
                    let g = g.ok_or_else(|| Error::InvalidArgument("--g is required".into()))?;
                    let poly = |name: &str, s: &Option<String>| -> Result<Poly> {
                        let s = s
                            .as_ref()
                            .ok_or_else(|| Error::InvalidArgument(format!("--{name} is required")))?;
                        Poly::parse(&field, s)
                    };
                    let (m, n, t) = (poly("m", m)?, poly("n", n)?, poly("t", t)?);
                    let f = build_f(&m, &n, &t, g)
                        .map_err(|r| Error::InvalidArgument(format!("triple rejected: {r}")))?;
                    vec![(SolutionTuple { m, n, t, f, s_class: None }, g)]
                }
            };
            let mut certs = Vec::with_capacity(entries.len());
            for (sol, g) in &entries {
                certs.push(verify_order_g(sol, *g, budget)?);
            }
            let failure = first_failure(&certs);
            Ok(Outcome { text: render_records(&certs, fmt)?, failure })
        }
        Command::Curve { q, f, brute } => {
            let field = Field::with_order(*q)?;
            pick(config.format, Format::Json, &[Format::Json, Format::Jsonl])?;
            let curve = Curve::new(&Poly::parse(&field, f)?)?;
            let summary = curve.l_polynomial(budget)?;
            let mut value = serde_json::to_value(&summary).expect("serializable");
            let mut failure = None;
            if *brute {
                let count = curve.class_group_brute(budget)?;
                value["h_brute"] = json!(count);
                if count != summary.h {
                    failure = Some(Error::Invariant(format!(
                        "class number {} disagrees with divisor count {count}",
                        summary.h
                    )));
                }
            }
            Ok(Outcome { text: format!("{value}\n"), failure })
        }
        Command::Tables { q, u } => {
            let field = Field::with_order(*q)?;
            let fmt = pick(config.format, Format::Csv, &[Format::Csv, Format::Json, Format::Jsonl])?;
            let rows = u
                .iter()
                .map(|&u| degree_summary(&field, u, budget))
                .collect::<Result<Vec<_>>>()?;
            let text = match fmt {
                Format::Csv => to_csv(
                    &["q", "U", "sum_mu", "sum_phi", "sum_d", "pi"],
                    rows.iter().map(|s| {
                        vec![
                            s.q.to_string(),
                            s.degree.to_string(),
                            s.sum_mu.to_string(),
                            s.sum_phi.to_string(),
                            s.sum_d.to_string(),
                            s.pi.to_string(),
                        ]
                    }),
                )?,
                _ => render_records(&rows, fmt)?,
            };
            Ok(Outcome::ok(text))
        }
        Command::Charsum { q, b, big_b, d } => {
            let field = Field::with_order(*q)?;
            let fmt = pick(config.format, Format::Csv, &[Format::Csv, Format::Json, Format::Jsonl])?;
            let rows = match (b, big_b) {
                (Some(b), None) => {
                    let b = Poly::parse(&field, b)?;
                    d.iter()
                        .map(|&d| char_sum_fixed(&b, d, budget))
                        .collect::<Result<Vec<_>>>()?
                }
                (None, Some(big_b)) => d
                    .iter()
                    .map(|&d| char_sum_double(&field, *big_b, d, budget))
                    .collect::<Result<Vec<_>>>()?,
                _ => return Err(Error::InvalidArgument("give exactly one of --b and --B".into())),
            };
            let text = match fmt {
                Format::Csv => charsum_csv(&rows)?,
                _ => render_records(&rows, fmt)?,
            };
            Ok(Outcome::ok(text))
        }
    }
}

fn pick(requested: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format> {
    let fmt = requested.unwrap_or(default);
    if allowed.contains(&fmt) {
        Ok(fmt)
    } else {
        Err(Error::InvalidArgument(format!(
            "format {fmt:?} is not available for this command"
        )))
    }
}

fn certify_all(
    solutions: &[SolutionTuple],
    g: u32,
    budget: Budget,
) -> Result<(Vec<Certificate>, Option<Error>)> {
    let certs = solutions
        .iter()
        .map(|s| verify_order_g(s, g, budget))
        .collect::<Result<Vec<_>>>()?;
    let failure = first_failure(&certs);
    Ok((certs, failure))
}

fn first_failure(certs: &[Certificate]) -> Option<Error> {
    let failed = certs.iter().filter(|c| !c.pass).count();
    (failed > 0).then(|| {
        Error::Invariant(format!("{failed} of {} certificates failed", certs.len()))
    })
}

fn read_solutions(field: &Field, path: &PathBuf) -> Result<Vec<(SolutionTuple, u32)>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let v: Value = serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
            SolutionTuple::from_json(field, &v)
        })
        .collect()
}

fn render_records<T: Serialize>(items: &[T], fmt: Format) -> Result<String> {
    match fmt {
        Format::Json => Ok(serde_json::to_string_pretty(items).expect("serializable") + "\n"),
        Format::Jsonl => Ok(items
            .iter()
            .map(|i| serde_json::to_string(i).expect("serializable") + "\n")
            .collect()),
        Format::Csv => Err(Error::InvalidArgument("csv is not available here".into())),
    }
}

fn to_csv<I>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn charsum_csv(rows: &[CharSumResult]) -> Result<String> {
    to_csv(
        &["q", "B_or_b", "D", "value", "predicted", "match", "predicted_without_unit_factor"],
        rows.iter().map(|r| {
            vec![
                r.q.to_string(),
                r.b_column(),
                r.d.to_string(),
                r.value.to_string(),
                opt(&r.predicted),
                opt(&r.matches),
                opt(&r.predicted_without_unit_factor),
            ]
        }),
    )
}

fn render_params(p: &SearchParams, fmt: Format) -> Result<String> {
    match fmt {
        Format::Csv => to_csv(
            &["q", "g", "L", "T", "M", "N", "Q", "log_q_L", "small_prime_degree"],
            [vec![
                p.q.to_string(),
                p.g.to_string(),
                p.l.to_string(),
                p.t.to_string(),
                p.m.to_string(),
                p.n.to_string(),
                p.big_q.to_string(),
                p.log_l.to_string(),
                p.small_prime_degree.to_string(),
            ]],
        ),
        _ => Ok(serde_json::to_string(p).expect("serializable") + "\n"),
    }
}

fn render_solutions(solutions: &[SolutionTuple], p: &SearchParams, fmt: Format) -> Result<String> {
    match fmt {
        Format::Jsonl => Ok(solutions
            .iter()
            .map(|s| s.to_json_line(p.q, p.g) + "\n")
            .collect()),
        Format::Json => {
            let items: Vec<Value> = solutions
                .iter()
                .map(|s| serde_json::from_str(&s.to_json_line(p.q, p.g)).expect("valid json"))
                .collect();
            Ok(serde_json::to_string_pretty(&items).expect("serializable") + "\n")
        }
        Format::Csv => to_csv(
            &["q", "g", "m", "n", "t", "f", "s_class"],
            solutions.iter().map(|s| {
                vec![
                    p.q.to_string(),
                    p.g.to_string(),
                    s.m.to_json().to_string(),
                    s.n.to_json().to_string(),
                    s.t.to_json().to_string(),
                    s.f.to_json().to_string(),
                    s.s_class.map(|c| format!("{c:?}")).unwrap_or_default(),
                ]
            }),
        ),
    }
}

fn render_census(report: &CensusReport, certs: Option<&[Certificate]>, fmt: Format) -> Result<String> {
    match fmt {
        Format::Csv => {
            let mut header: Vec<&str> = CensusReport::CSV_HEADER.to_vec();
            let mut row = report.csv_row();
            header.extend(["cauchy_lower_ceil", "verified"]);
            row.push(report.cauchy_lower.ceil().to_string());
            row.push(match certs {
                Some(c) => format!("{}/{}", c.iter().filter(|c| c.pass).count(), c.len()),
                None => String::new(),
            });
            to_csv(&header, [row])
        }
        _ => {
            let mut value = serde_json::to_value(report).expect("serializable");
            if let Some(c) = certs {
                value["certificates"] = serde_json::to_value(c).expect("serializable");
            }
            Ok(serde_json::to_string_pretty(&value).expect("serializable") + "\n")
        }
    }
}
