use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use qfock::poly::{rational_from_str, GramValues};
use qfock::sign::{DEFAULT_MAX_N, Label};
use qfock::verify::{self, VerifyReport};
use qfock::{
    enumerate_positive_signs_bounded, enumerate_pp_bounded, ncpp_counterpart, pp_with_sign,
    vacuum_expectation_operator, vacuum_expectation_with_labels, MultiPoly, NumericGram,
    PairPartition, SignSequence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "qfock", version, about = "Vacuum expectations on the (q,2)-Fock space")]
struct Cli {
    /// Output format; `moment` defaults to text, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Cap on n for the enumeration commands.
    #[arg(long, global = true, env = "QFOCK_MAX_N", default_value_t = DEFAULT_MAX_N)]
    max_n: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Positive-class sign sequences of length 2n, in lexicographic order.
    EnumerateSigns { n: usize },
    /// All pair partitions of {1, …, 2n}.
    EnumeratePp { n: usize },
    /// Pair partitions whose left/right pattern is the given sequence.
    PpWithSign {
        #[arg(allow_hyphen_values = true)]
        eps: String,
    },
    /// The unique non-crossing pair partition with the given pattern.
    Counterpart {
        #[arg(allow_hyphen_values = true)]
        eps: String,
    },
    /// Crossing number of a pair partition written as "1-4,2-3".
    Crossing { theta: String },
    /// Depth of the k-th pair (1-based) of a non-crossing pair partition.
    Depth { theta: String, k: usize },
    /// The distinguished family of pair partitions indexing the expectation.
    Pset {
        #[arg(allow_hyphen_values = true)]
        eps: String,
    },
    /// Vacuum expectation of the creation/annihilation word given by ε.
    Moment {
        #[arg(allow_hyphen_values = true)]
        eps: String,
        /// Gram matrix file: a "dim N" line, then N rows of N rationals.
        #[arg(long, conflicts_with = "symbolic")]
        gram: Option<PathBuf>,
        /// Keep every Gram factor symbolic (the default without --gram).
        #[arg(long)]
        symbolic: bool,
        /// Value substituted for q, as "p/q".
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// Exhaustive cross-checks; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        /// Comma-separated values of q.
        #[arg(long, allow_hyphen_values = true, default_value = "-1,-1/2,0,1/2,1")]
        q_grid: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Adds one random rational test vector to the norm checks.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Failure modes mapped to exit codes.
enum Failure {
    Input(String),
    Verification,
}

impl From<qfock::Error> for Failure {
    fn from(e: qfock::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let format = cli.format.unwrap_or(match cli.command {
        Command::Moment { .. } => Format::Text,
        _ => Format::Json,
    });
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::EnumerateSigns { n } => {
            let seqs = enumerate_positive_signs_bounded(*n, cli.max_n)?;
            write_sequences(&mut out, format, &seqs)
        }
        Command::EnumeratePp { n } => {
            let all = enumerate_pp_bounded(*n, cli.max_n)?;
            write_partitions(&mut out, format, &all)
        }
        Command::PpWithSign { eps } => {
            let eps = parse_eps(eps, cli.max_n)?;
            write_partitions(&mut out, format, &pp_with_sign(&eps)?)
        }
        Command::Counterpart { eps } => {
            let theta = ncpp_counterpart(&parse_eps(eps, cli.max_n)?)?;
            write_partitions(&mut out, format, std::slice::from_ref(&theta))
        }
        Command::Crossing { theta } => {
            let theta: PairPartition = theta.parse()?;
            write_scalar(&mut out, format, "crossing_number", theta.crossing_number())
        }
        Command::Depth { theta, k } => {
            let theta: PairPartition = theta.parse()?;
            if *k == 0 {
                return Err(Failure::Input("pair index k is 1-based".into()));
            }
            write_scalar(&mut out, format, "depth", theta.depth(k - 1)?)
        }
        Command::Pset { eps } => {
            let pset = qfock::build_p_set(&parse_eps(eps, cli.max_n)?)?;
            match format {
                Format::Json => write_json(&mut out, &serde_json::to_value(&pset).expect("serializable")),
                _ => write_partitions(&mut out, format, &pset.members),
            }
        }
        Command::Moment {
            eps,
            gram,
            symbolic: _,
            q,
        } => {
            let eps = parse_eps(eps, cli.max_n)?;
            let q = q.as_deref().map(parse_q).transpose()?;
            moment(&mut out, format, &eps, gram.as_deref(), q)
        }
        Command::Verify {
            n_max,
            q_grid,
            dim,
            seed,
        } => run_verify(&mut out, format, *n_max, q_grid, *dim, *seed),
    }
}

fn parse_eps(s: &str, max_n: usize) -> Result<SignSequence, Failure> {
    let eps: SignSequence = s.parse()?;
    qfock::sign::check_bound(eps.len().div_ceil(2), max_n)?;
    Ok(eps)
}

fn parse_q(s: &str) -> Result<BigRational, Failure> {
    let q = rational_from_str(s)?;
    qfock::fock::check_q(&q)?;
    Ok(q)
}

fn write_json(out: &mut impl Write, value: &Value) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Failure::Input(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn write_sequences(out: &mut impl Write, format: Format, seqs: &[SignSequence]) -> Outcome {
    match format {
        Format::Json => {
            let list: Vec<Vec<i64>> = seqs.iter().map(SignSequence::as_integers).collect();
            write_json(out, &json!({ "sequences": list }))
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
            for s in seqs {
                w.write_record(s.as_integers().iter().map(i64::to_string))?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            for s in seqs {
                writeln!(out, "{s}")?;
            }
            Ok(())
        }
    }
}

fn write_partitions(out: &mut impl Write, format: Format, parts: &[PairPartition]) -> Outcome {
    match format {
        Format::Json => {
            let value = if let [single] = parts {
                serde_json::to_value(single)
            } else {
                serde_json::to_value(json!({ "partitions": parts }))
            };
            write_json(out, &value.expect("serializable"))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["pairs", "crossing_number"])?;
            for p in parts {
                w.write_record([p.to_arg_string(), p.crossing_number().to_string()])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            for p in parts {
                writeln!(out, "{p}")?;
            }
            Ok(())
        }
    }
}

fn write_scalar(out: &mut impl Write, format: Format, name: &str, value: usize) -> Outcome {
    match format {
        Format::Json => {
            let mut map = serde_json::Map::new();
            map.insert(name.to_string(), value.into());
            write_json(out, &Value::Object(map))
        }
        Format::Csv => {
            writeln!(out, "{name}\n{value}")?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "{value}")?;
            Ok(())
        }
    }
}

/// Reads a "dim N" header followed by an N×N matrix of rationals.
fn read_gram_file(path: &Path) -> Result<Vec<Vec<BigRational>>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().unwrap_or_default();
    let dim: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["dim", n] => n
            .parse()
            .map_err(|_| Failure::Input(format!("bad dimension {n:?}")))?,
        _ => return Err(Failure::Input(format!("expected \"dim N\" header, found {header:?}"))),
    };
    let matrix = lines
        .map(|line| {
            line.split_whitespace()
                .map(rational_from_str)
                .collect::<qfock::Result<Vec<_>>>()
        })
        .collect::<qfock::Result<Vec<_>>>()?;
    if matrix.len() != dim {
        return Err(Failure::Input(format!("expected {dim} matrix rows, found {}", matrix.len())));
    }
    Ok(matrix)
}

fn moment(
    out: &mut impl Write,
    format: Format,
    eps: &SignSequence,
    gram: Option<&Path>,
    q: Option<BigRational>,
) -> Outcome {
    let symbolic = vacuum_expectation_operator(eps);
    let result = match gram {
        None => symbolic.substitute(q.as_ref(), None)?,
        Some(path) => {
            let matrix = read_gram_file(path)?;
            if matrix.len() < eps.len() {
                return Err(Failure::Input(format!(
                    "Gram matrix has dimension {} but the word has length {}",
                    matrix.len(),
                    eps.len()
                )));
            }
            match q {
                // Numeric operator simulation; position i uses row i.
                Some(q) => {
                    let gram = NumericGram::new(q, matrix)?;
                    let labels: Vec<Label> = (0..eps.len() as Label).collect();
                    MultiPoly::constant(vacuum_expectation_with_labels(eps, &labels, &gram)?)
                }
                None => {
                    NumericGram::new(BigRational::from_integer(0.into()), matrix.clone())?;
                    let mut values = GramValues::new();
                    for i in 0..eps.len() {
                        for j in i + 1..eps.len() {
                            values.insert((i as Label + 1, j as Label + 1), matrix[i][j].clone());
                        }
                    }
                    symbolic.substitute(None, Some(&values))?
                }
            }
        }
    };
    write_poly(out, format, &result)
}

fn write_poly(out: &mut impl Write, format: Format, poly: &MultiPoly) -> Outcome {
    match format {
        Format::Json => write_json(out, &serde_json::to_value(poly).expect("serializable")),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["q", "gram", "coeff"])?;
            for (m, c) in poly.terms() {
                let gram: Vec<String> = m.gram_factors().iter().map(|(i, j)| format!("{i}-{j}")).collect();
                w.write_record([m.q_degree().to_string(), gram.join(";"), c.to_string()])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "{poly}")?;
            Ok(())
        }
    }
}

fn random_vector(seed: u64, dim: usize) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vec<(i64, i64)> = (0..dim)
            .map(|_| (rng.random_range(-5..=5), rng.random_range(1..=4)))
            .collect();
        if v.iter().any(|&(n, _)| n != 0) {
            return v
                .into_iter()
                .map(|(n, d)| BigRational::new(n.into(), d.into()))
                .collect();
        }
    }
}

fn run_verify(
    out: &mut impl Write,
    format: Format,
    n_max: usize,
    q_grid: &str,
    dim: usize,
    seed: Option<u64>,
) -> Outcome {
    if !(1..=5).contains(&n_max) {
        return Err(Failure::Input(format!("--n-max must be between 1 and 5, got {n_max}")));
    }
    let grid = q_grid
        .split(',')
        .map(|s| parse_q(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let extra: Vec<Vec<BigRational>> = seed.map(|s| random_vector(s, dim)).into_iter().collect();

    let mut reports = verify::check_main_theorem(n_max)?;
    reports.extend(verify::check_uniqueness(n_max.min(4))?);
    reports.extend(verify::check_combinatorics(n_max)?);
    reports.extend(verify::check_fock_analysis_with(&grid, dim, n_max.min(3), &extra)?);
    reports.sort();

    write_reports(out, format, &reports)?;
    let failed: Vec<&VerifyReport> = reports.iter().filter(|r| !r.passed()).collect();
    if failed.is_empty() {
        return Ok(());
    }
    for r in &failed {
        eprintln!(
            "FAIL {} {}: {}",
            r.check,
            serde_json::to_string(&r.instance).expect("serializable"),
            serde_json::to_string(&r.detail).expect("serializable"),
        );
    }
    Err(Failure::Verification)
}

fn write_reports(out: &mut impl Write, format: Format, reports: &[VerifyReport]) -> Outcome {
    match format {
        Format::Json => write_json(out, &json!({ "reports": reports })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["check", "instance", "status", "expected", "actual"])?;
            for r in reports {
                let (expected, actual) = r
                    .detail
                    .as_ref()
                    .map(|d| (d.expected.as_str(), d.actual.as_str()))
                    .unwrap_or_default();
                w.write_record([
                    r.check.as_str(),
                    &serde_json::to_string(&r.instance).expect("serializable"),
                    if r.passed() { "pass" } else { "fail" },
                    expected,
                    actual,
                ])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            let mut checks: Vec<&str> = reports.iter().map(|r| r.check.as_str()).collect();
            checks.dedup();
            for check in checks {
                let of: Vec<_> = reports.iter().filter(|r| r.check == check).collect();
                let passed = of.iter().filter(|r| r.passed()).count();
                writeln!(out, "{check}: {passed}/{} passed", of.len())?;
            }
            Ok(())
        }
    }
}
