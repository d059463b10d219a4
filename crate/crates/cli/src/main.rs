use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use belyi_core::error::HarnessError;
use belyi_core::expectation::{
    rational_text, trace_expectation_exact, trace_series_record, truncation_error_report,
    word_expectation_exact, word_series_record, TRUNCATION_HEADER,
};
use belyi_core::harness::{
    parse_word, render_records_csv, render_records_json, run_montecarlo, run_oracle_n1,
    sample_records, topology_records, write_text, MonteCarloConfig, ParsedWord, CSV_HEADER, MAX_N,
};
use belyi_core::modular::{F2Word, ModularWord};
use belyi_core::outputs::{enumerate_outputs, stratify};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

const SEED_ENV: &str = "BELYI_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "belyi",
    version,
    about = "Random covers of the modular surface: sampling, exact expectations, series and topology"
)]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Format for tabular output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw random pairs (sigma, tau) on 6n points.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact expected fixed-point count, optionally with a Monte Carlo estimate.
    Expect {
        #[arg(long)]
        word: String,
        #[arg(long)]
        n: usize,
        /// Number of Monte Carlo samples.
        #[arg(long)]
        mc: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Truncation order of the reported series value.
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Series coefficients of the expected fixed-point count in 1/(6n).
    Series {
        #[arg(long)]
        word: String,
        #[arg(long)]
        order: usize,
    },
    /// Series coefficients of the expected normalized trace.
    USeries {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        order: usize,
    },
    /// Output classes of the homomorphism enumeration.
    Outputs {
        #[arg(long)]
        word: String,
        /// Group classes by number of fold steps.
        #[arg(long)]
        stratify: bool,
    },
    /// Genus, cusps and cusp widths of random samples.
    Topology {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        large_cusps: usize,
    },
    /// Exhaustive checks over every pair at n = 1.
    Oracle,
    /// Exact values against truncated series (or Monte Carlo) over a range of n.
    Compare {
        #[arg(long)]
        word: String,
        /// Inclusive range `a..b`.
        #[arg(long)]
        n_grid: String,
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// Compare against this many Monte Carlo samples per n instead.
        #[arg(long)]
        mc: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Io(anyhow::Error),
    Oracle,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<HarnessError>() {
            Some(HarnessError::Io { .. }) => Failure::Io(e),
            _ => Failure::Usage(e),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn effective_seed(flag: u64) -> anyhow::Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV}={v} is not a 64-bit unsigned integer")),
        Err(_) => Ok(flag),
    }
}

fn check_n(n: usize) -> anyhow::Result<()> {
    if n == 0 || n > MAX_N {
        bail!("--n must be between 1 and {MAX_N}");
    }
    Ok(())
}

fn check_order(order: usize) -> anyhow::Result<()> {
    if order == 0 {
        bail!("--order must be at least 1");
    }
    Ok(())
}

fn standard_word(text: &str) -> anyhow::Result<F2Word> {
    match parse_word(text)? {
        ParsedWord::Standard(w) => Ok(w),
        ParsedWord::Elliptic(g) => Err(anyhow!(
            "`{g}` is conjugate to the identity or a torsion element; use `u-series --gamma {text}` for its trace series"
        )),
    }
}

fn parse_grid(text: &str) -> anyhow::Result<Vec<usize>> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| anyhow!("--n-grid must look like a..b"))?;
    let a: usize = a.trim().parse().context("bad lower end of --n-grid")?;
    let b: usize = b.trim().parse().context("bad upper end of --n-grid")?;
    if a == 0 || a > b || b > MAX_N {
        bail!("--n-grid needs 1 <= a <= b <= {MAX_N}");
    }
    Ok((a..=b).collect())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_text(path, text).map_err(Failure::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn table<T: Serialize>(format: Format, header: &[&str], rows: &[T]) -> anyhow::Result<String> {
    Ok(match format {
        Format::Csv => render_records_csv(header, rows)?,
        Format::Json => render_records_json(rows)?,
    })
}

#[derive(Serialize)]
struct TopologyRow {
    n: usize,
    genus: usize,
    cusp_count: usize,
    widths: String,
    large_cusps_l: usize,
    large_cusps: bool,
    components: usize,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Sample { n, count, seed } => {
            check_n(n)?;
            let rows = sample_records(n, count, effective_seed(seed)?);
            emit(
                out,
                &table(cli.format, &["index", "n", "sigma", "tau"], &rows)?,
            )
        }
        Command::Expect {
            word,
            n,
            mc,
            seed,
            order,
            workers,
        } => {
            check_n(n)?;
            check_order(order)?;
            match (parse_word(&word).map_err(anyhow::Error::from)?, mc) {
                (ParsedWord::Elliptic(g), None) => {
                    let e = trace_expectation_exact(&g, n);
                    emit(out, &format!("E[tr]({g}, n={n}) = {}\n", rational_text(&e)))
                }
                (ParsedWord::Elliptic(_), Some(_)) => Err(standard_word(&word).unwrap_err().into()),
                (ParsedWord::Standard(w), None) => {
                    let e = word_expectation_exact(&w, n);
                    emit(
                        out,
                        &format!("E[fix]({w}, n={n}) = {}\n", rational_text(&e)),
                    )
                }
                (ParsedWord::Standard(w), Some(samples)) => {
                    let cfg = MonteCarloConfig {
                        n,
                        word: w,
                        samples,
                        seed: effective_seed(seed)?,
                        order,
                        workers,
                    };
                    let row = run_montecarlo(&cfg)?;
                    if row.degenerate {
                        eprintln!("warning: a single sample gives no standard error");
                    }
                    emit(out, &table(cli.format, &CSV_HEADER, &[row])?)
                }
            }
        }
        Command::Series { word, order } => {
            check_order(order)?;
            let record = match parse_word(&word).map_err(anyhow::Error::from)? {
                ParsedWord::Standard(w) => word_series_record(&w, order),
                ParsedWord::Elliptic(g) => trace_series_record(&g, order),
            };
            emit(
                out,
                &render_records_json(&record).map_err(anyhow::Error::from)?,
            )
        }
        Command::USeries { gamma, order } => {
            check_order(order)?;
            let g: ModularWord = gamma
                .parse()
                .with_context(|| format!("cannot parse `{gamma}` as a word in b and c"))?;
            let record = trace_series_record(&g, order);
            emit(
                out,
                &render_records_json(&record).map_err(anyhow::Error::from)?,
            )
        }
        Command::Outputs {
            word,
            stratify: by_folds,
        } => {
            let w = standard_word(&word)?;
            let outputs = enumerate_outputs(&w);
            let mut text = String::new();
            if by_folds {
                for (a, stratum) in stratify(&outputs) {
                    text.push_str(&format!("# a={a}: {} classes\n", stratum.len()));
                    for d in stratum {
                        text.push_str(&d.report_line());
                        text.push('\n');
                    }
                }
            } else {
                for d in &outputs {
                    text.push_str(&d.report_line());
                    text.push('\n');
                }
            }
            emit(out, &text)
        }
        Command::Topology {
            n,
            count,
            seed,
            large_cusps,
        } => {
            check_n(n)?;
            if large_cusps == 0 {
                return Err(Failure::Usage(anyhow!("--large-cusps must be at least 1")));
            }
            let records = topology_records(n, count, effective_seed(seed)?, large_cusps)
                .map_err(anyhow::Error::from)?;
            let text = match cli.format {
                Format::Json => render_records_json(&records).map_err(anyhow::Error::from)?,
                Format::Csv => {
                    let rows: Vec<TopologyRow> = records
                        .into_iter()
                        .map(|r| TopologyRow {
                            n: r.n,
                            genus: r.genus,
                            cusp_count: r.cusp_count,
                            widths: r
                                .widths
                                .iter()
                                .map(usize::to_string)
                                .collect::<Vec<_>>()
                                .join(" "),
                            large_cusps_l: r.large_cusps_l,
                            large_cusps: r.large_cusps,
                            components: r.components,
                        })
                        .collect();
                    render_records_csv(
                        &[
                            "n",
                            "genus",
                            "cusp_count",
                            "widths",
                            "large_cusps_l",
                            "large_cusps",
                            "components",
                        ],
                        &rows,
                    )
                    .map_err(anyhow::Error::from)?
                }
            };
            emit(out, &text)
        }
        Command::Oracle => {
            let report = run_oracle_n1();
            let mut text = String::new();
            for c in &report.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                text.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
            }
            emit(out, &text)?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::Oracle)
            }
        }
        Command::Compare {
            word,
            n_grid,
            order,
            mc,
            seed,
            workers,
        } => {
            check_order(order)?;
            let w = standard_word(&word)?;
            let grid = parse_grid(&n_grid)?;
            let text = match mc {
                None => {
                    let rows: Vec<_> = truncation_error_report(&w, order, &grid)
                        .iter()
                        .map(|r| r.record())
                        .collect();
                    table(cli.format, &TRUNCATION_HEADER, &rows)?
                }
                Some(samples) => {
                    let seed = effective_seed(seed)?;
                    let rows = grid
                        .iter()
                        .map(|&n| {
                            run_montecarlo(&MonteCarloConfig {
                                n,
                                word: w.clone(),
                                samples,
                                seed,
                                order,
                                workers,
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    table(cli.format, &CSV_HEADER, &rows)?
                }
            };
            emit(out, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
        Err(Failure::Oracle) => {
            eprintln!("error: oracle checks failed");
            ExitCode::from(2)
        }
    }
}
