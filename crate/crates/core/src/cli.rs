//! The `guesswork` command line.
//!
//! Every subcommand prints JSON by default or CSV with `--format csv`.
//! Exit codes: 0 success, 1 computation error, 2 usage error.

use std::f64::consts::LN_2;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::exact::{self, GuessworkDistribution};
use crate::figures::{self, FigureId};
use crate::ldp_approx;
use crate::noise::NoiseModel;
use crate::source::SourceDistribution;
use crate::subordination;

/// Parsed probability vectors must sum to one within this tolerance; they
/// are renormalized afterwards.
pub const PROBS_SUM_TOL: f64 = 1e-9;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "guesswork", version, about = "Guesswork over erasure channels")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Report entropies and rates in bits instead of nats.
    #[arg(long, global = true)]
    bits: bool,

    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// JSON object of default flag values; flags on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct SourceArg {
    /// Character probabilities, comma separated.
    #[arg(long, value_parser = parse_probs)]
    probs: SourceDistribution,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rényi, Shannon and min-entropy of the source.
    Entropy {
        #[command(flatten)]
        src: SourceArg,
        /// Rényi order; `inf` for min-entropy.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Guesswork sCGF, optionally composed with a channel.
    Scgf {
        #[command(flatten)]
        src: SourceArg,
        #[arg(long, value_parser = parse_channel)]
        channel: Option<NoiseModel>,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Guesswork rate function (and subordinated rate by both routes).
    Ratefn {
        #[command(flatten)]
        src: SourceArg,
        #[arg(long, value_parser = parse_channel)]
        channel: Option<NoiseModel>,
        /// Single evaluation point; otherwise a grid over [0, log m].
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
    /// Growth rates of E[log G] and log E[G] per character.
    Growth {
        #[command(flatten)]
        src: SourceArg,
        #[arg(long, value_parser = parse_channel)]
        channel: NoiseModel,
    },
    /// Compare two channels over the same source.
    Compare {
        #[command(flatten)]
        src: SourceArg,
        #[arg(long, value_parser = parse_channel)]
        channel: NoiseModel,
        #[arg(long, value_parser = parse_channel)]
        versus: NoiseModel,
    },
    /// Exact finite-length moments.
    Exact {
        #[command(flatten)]
        src: SourceArg,
        #[arg(long, value_parser = parse_channel)]
        channel: Option<NoiseModel>,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Rate-function approximation of the guesswork pmf.
    Approx {
        #[command(flatten)]
        src: SourceArg,
        #[arg(long, value_parser = parse_channel)]
        channel: Option<NoiseModel>,
        #[arg(short = 'k')]
        k: usize,
        /// Single rank; otherwise a log-spaced grid of ranks.
        #[arg(long)]
        rank: Option<u128>,
    },
    /// Monte-Carlo attack simulation.
    Simulate {
        #[command(flatten)]
        src: SourceArg,
        #[arg(long, value_parser = parse_channel)]
        channel: NoiseModel,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Emit a figure dataset as CSV.
    Figure { figure: FigureId },
}

fn parse_probs(s: &str) -> Result<SourceDistribution, String> {
    let probs = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| format!("not a number: {v:?}")))
        .collect::<Result<Vec<f64>, String>>()?;
    let sum: f64 = probs.iter().sum();
    if !sum.is_finite() || (sum - 1.0).abs() > PROBS_SUM_TOL {
        return Err(format!("probabilities sum to {sum}, expected 1 (tolerance {PROBS_SUM_TOL})"));
    }
    SourceDistribution::new(probs.iter().map(|p| p / sum).collect()).map_err(|e| e.to_string())
}

fn parse_channel(s: &str) -> Result<NoiseModel, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<O: Write, E: Write>(args: Vec<String>, stdout: &mut O, stderr: &mut E) -> i32 {
    let args = match apply_config(args) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => stdout.write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write output: {e}");
                    EXIT_COMPUTE
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_COMPUTE
        }
    }
}

/// Splices flags from `--config <file>` into `args` for every key not
/// already given on the command line.
fn apply_config(mut args: Vec<String>) -> Result<Vec<String>, String> {
    let path = args.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            args.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    });
    let Some(path) = path else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read config {path}: {e}"))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| format!("config {path} is not JSON: {e}"))?;
    let Value::Object(map) = value else {
        return Err(format!("config {path} must be a JSON object"));
    };
    for (key, val) in map {
        let flag = if key.len() == 1 {
            format!("-{key}")
        } else {
            format!("--{}", key.replace('_', "-"))
        };
        let given = args
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        match val {
            Value::Bool(true) => args.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => args.extend([flag, s]),
            Value::Number(n) => args.extend([flag, n.to_string()]),
            Value::Array(items) => {
                let joined = items
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(",");
                args.extend([flag, joined]);
            }
            Value::Object(_) => return Err(format!("config key {key:?} cannot be an object")),
        }
    }
    Ok(args)
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    // Nats per display unit.
    let unit = if cli.bits { LN_2 } else { 1.0 };
    let unit_name = if cli.bits { "bits" } else { "nats" };
    let d = |v: f64| v / unit;

    let value = match &cli.command {
        Command::Figure { figure } => {
            let data = figures::emit_figure_data(*figure);
            return Ok(data.to_csv_string());
        }
        Command::Entropy { src, alpha } => {
            let s = &src.probs;
            json!({
                "probs": s.probs(),
                "support_size": s.support_size(),
                "alpha": alpha,
                "renyi_entropy": alpha.map(|a| d(s.renyi_entropy(a))),
                "shannon_entropy": d(s.shannon_entropy()),
                "min_entropy": d(s.min_entropy()),
                "renyi_half": d(s.renyi_entropy(0.5)),
                "unit": unit_name,
            })
        }
        Command::Scgf { src, channel, alpha } => {
            let s = &src.probs;
            let g = s.guesswork_scgf(*alpha);
            let mut obj = json!({
                "alpha": alpha,
                "guesswork_scgf": d(g),
                "unit": unit_name,
            });
            if let Some(ch) = channel {
                obj["channel"] = json!(ch.to_string());
                obj["subordinated_scgf"] = json!(d(ch.scgf(g)));
            }
            obj
        }
        Command::Ratefn { src, channel, x, points } => {
            let s = &src.probs;
            let xs: Vec<f64> = match x {
                Some(x) => vec![x * unit],
                None => {
                    if *points < 2 {
                        return Err(Failure::Usage("--points must be at least 2".into()));
                    }
                    let edge = s.log_support_size();
                    (0..*points)
                        .map(|i| edge * i as f64 / (*points - 1) as f64)
                        .collect()
                }
            };
            let rows: Vec<Value> = xs
                .iter()
                .map(|&x| {
                    let mut row = json!({
                        "x": d(x),
                        "guesswork_rate": d(s.guesswork_rate_function(x)),
                    });
                    if let Some(ch) = channel {
                        row["subordinated_rate_inf"] =
                            json!(d(subordination::subordinated_rate_inf(s, ch, x)));
                        row["subordinated_rate_dual"] =
                            json!(d(subordination::subordinated_rate_dual(s, ch, x)));
                    }
                    row
                })
                .collect();
            Value::Array(rows)
        }
        Command::Growth { src, channel } => {
            let s = &src.probs;
            let g = subordination::growth_rates(s, channel)?;
            json!({
                "channel": channel.to_string(),
                "mean_erasure_rate": channel.mean_erasure_rate(),
                "shannon_entropy": d(s.shannon_entropy()),
                "renyi_half": d(s.renyi_entropy(0.5)),
                "mean_log_growth": d(g.mean_log_growth),
                "log_mean_growth": d(g.log_mean_growth),
                "unit": unit_name,
            })
        }
        Command::Compare { src, channel, versus } => {
            let c = subordination::compare_channels(&src.probs, channel, versus)?;
            let rates = |mu: f64, g: subordination::GrowthRates| {
                json!({
                    "mean_erasure_rate": mu,
                    "mean_log_growth": d(g.mean_log_growth),
                    "log_mean_growth": d(g.log_mean_growth),
                })
            };
            json!({
                "first": c.first.to_string(),
                "second": c.second.to_string(),
                "first_rates": rates(c.first_mean_erasure_rate, c.first_rates),
                "second_rates": rates(c.second_mean_erasure_rate, c.second_rates),
                "mean_log_growth_difference": d(c.mean_log_growth_difference),
                "log_mean_growth_difference": d(c.log_mean_growth_difference),
                "noisier_but_easier": c.noisier_but_easier,
                "unit": unit_name,
            })
        }
        Command::Exact { src, channel, k, alpha } => {
            let s = &src.probs;
            match channel {
                None => {
                    let log_moment = exact::exact_guesswork_moment(s, *k, *alpha)?;
                    let mean_log = if *k == 0 {
                        0.0
                    } else {
                        GuessworkDistribution::new(s, *k)?.mean_log()
                    };
                    json!({
                        "k": k,
                        "alpha": alpha,
                        "log_moment": d(log_moment),
                        "mean_log_guesswork": d(mean_log),
                        "unit": unit_name,
                    })
                }
                Some(ch) => {
                    let log_moment = exact::exact_subordinated_moment(s, ch, *k, *alpha)?;
                    let mean_log = exact::exact_mean_log_guesswork(s, ch, *k)?;
                    json!({
                        "k": k,
                        "alpha": alpha,
                        "channel": ch.to_string(),
                        "log_moment": d(log_moment),
                        "mean_log_guesswork_rate": d(mean_log),
                        "unit": unit_name,
                    })
                }
            }
        }
        Command::Approx { src, channel, k, rank } => {
            let s = &src.probs;
            match (channel, rank) {
                (None, Some(n)) => json!({
                    "k": k,
                    "rank": n.to_string(),
                    "approx": ldp_approx::approx_pmf(s, *k, *n)?,
                    "exact": GuessworkDistribution::new(s, *k)?.pmf(*n),
                }),
                (None, None) => {
                    let c = ldp_approx::compare_exact_vs_approx(s, *k)?;
                    let rows: Vec<Value> = c
                        .grid
                        .iter()
                        .map(|p| {
                            json!({
                                "rank": p.rank.to_string(),
                                "exact": p.exact,
                                "approx": p.approx,
                            })
                        })
                        .collect();
                    match cli.format {
                        Format::Json => json!({
                            "k": k,
                            "max_abs_log_ratio": c.max_abs_log_ratio,
                            "grid": rows,
                        }),
                        Format::Csv => Value::Array(rows),
                    }
                }
                (Some(ch), Some(n)) => json!({
                    "k": k,
                    "channel": ch.to_string(),
                    "rank": n.to_string(),
                    "approx": ldp_approx::approx_subordinated_pmf(s, ch, *k, *n)?,
                }),
                (Some(ch), None) => {
                    let max = (s.alphabet_size() as u128)
                        .checked_pow(*k as u32)
                        .ok_or(crate::Error::RankOverflow { alphabet: s.alphabet_size(), length: *k })?;
                    let rows = ldp_approx::log_spaced_ranks(max, ldp_approx::GRID_POINTS)
                        .into_iter()
                        .map(|n| {
                            Ok(json!({
                                "rank": n.to_string(),
                                "approx": ldp_approx::approx_subordinated_pmf(s, ch, *k, n)?,
                            }))
                        })
                        .collect::<Result<Vec<Value>, crate::Error>>()?;
                    Value::Array(rows)
                }
            }
        }
        Command::Simulate { src, channel, k, trials } => {
            let r = exact::simulate_attack(&src.probs, channel, *k, *trials, cli.seed)?;
            let exact_value = exact::exact_mean_log_guesswork(&src.probs, channel, *k)?;
            let stat = |s: exact::SummaryStat, scale: f64| {
                json!({
                    "mean": s.mean / scale,
                    "variance": s.variance / (scale * scale),
                    "std_error": s.std_error / scale,
                    "ci_low": s.ci_low / scale,
                    "ci_high": s.ci_high / scale,
                })
            };
            json!({
                "k": r.k,
                "trials": r.trials,
                "seed": r.seed,
                "channel": r.noise.to_string(),
                "log_guesswork_rate": stat(r.log_guesswork_rate, unit),
                "erasure_fraction": stat(r.erasure_fraction, 1.0),
                "exact_mean_log_guesswork_rate": d(exact_value),
                "unit": unit_name,
            })
        }
    };

    Ok(match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Csv => to_csv(&value),
    })
}

fn flatten(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    match v {
        Value::Object(m) => {
            for (k, inner) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, inner, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

fn to_csv(value: &Value) -> String {
    let rows: Vec<Map<String, Value>> = match value {
        Value::Array(items) => items
            .iter()
            .map(|v| {
                let mut m = Map::new();
                flatten("", v, &mut m);
                m
            })
            .collect(),
        other => {
            let mut m = Map::new();
            flatten("", other, &mut m);
            vec![m]
        }
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first() {
        let headers: Vec<&String> = first.keys().collect();
        w.write_record(&headers).expect("in-memory write");
        for row in &rows {
            w.write_record(headers.iter().map(|h| row.get(*h).map(cell).unwrap_or_default()))
                .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}
