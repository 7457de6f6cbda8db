//! The `cprank` command line.
//!
//! Exit codes: 0 on success, 1 on a domain error (bad Newick, rank 0, a
//! size above a cap), 2 on a usage error. Output never carries color
//! escapes, so `NO_COLOR` holds trivially.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::asymptotics::{
    mean_rank_asymptotic, pi_asymptotic, loglog_asymptotic, theta_cdf, PaperConstants,
};
use crate::enumeration::{
    enumerate_shapes, exact_moments, shape_probability, Model,
};
use crate::error::{Error, Result};
use crate::figures::figure_csv;
use crate::newick::{parse_newick, to_newick};
use crate::numeric::{fmt_ratio, fmt_real};
use crate::rank::{count_by_height, extremal_seqs, rank, unrank, HeightMode};
use crate::sampling::{height_scale, monte_carlo, sample_heights};

#[derive(Debug, Parser)]
#[command(name = "cprank", version, about = "Ranks, enumerates and samples binary tree shapes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank of a Newick shape (`-` reads stdin).
    Rank { newick: String },
    /// Canonical Newick of the shape with rank K.
    Unrank { k: String },
    /// Extremal rank sequences and shape counts by height.
    Seq {
        which: SeqKind,
        #[arg(long)]
        max: usize,
    },
    /// All shapes with N leaves, ascending by rank.
    Enumerate {
        #[arg(long)]
        leaves: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Exact probability of every N-leaf shape under a model.
    Probs {
        #[arg(long)]
        leaves: u64,
        #[arg(long)]
        model: Model,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Exact rank and height moments.
    Moments {
        #[arg(long)]
        leaves: u64,
        #[arg(long)]
        model: Model,
    },
    /// Seeded Monte Carlo estimates.
    Sample {
        #[arg(long)]
        model: Model,
        #[arg(long)]
        leaves: u64,
        #[arg(long)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include the shape histogram (`rank,count` CSV with `--format csv`).
        #[arg(long)]
        histogram: bool,
        /// Sample heights only; never builds the shapes.
        #[arg(long, conflicts_with = "histogram")]
        height_only: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Asymptotic approximations and the reported constants.
    Asym {
        #[arg(long, value_enum)]
        what: AsymKind,
        #[arg(long)]
        model: Option<Model>,
        /// Inclusive range `a:b` of leaf counts.
        #[arg(long, value_parser = parse_range)]
        n_range: Option<(u64, u64)>,
        /// Evaluation point for `theta-cdf` (repeatable).
        #[arg(long)]
        x: Vec<f64>,
        /// `pi_n c_{n-1}^2` instead of `pi_n c_{n-1}`.
        #[arg(long)]
        variance: bool,
    },
    /// CSV behind one of the three plots.
    Figures {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeqKind {
    C,
    D,
    HeightCounts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AsymKind {
    Loglog,
    Pi,
    MeanRank,
    ThetaCdf,
    Constants,
}

fn parse_range(s: &str) -> std::result::Result<(u64, u64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                // --help and --version
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(cli.command, stdin, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("i/o: {e}"))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(io_err)
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    emit(out, &text)?;
    emit(out, "\n")
}

fn execute(command: Command, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Rank { newick } => {
            let text = if newick == "-" {
                let mut buf = String::new();
                stdin.read_to_string(&mut buf).map_err(io_err)?;
                buf
            } else {
                newick
            };
            let t = parse_newick(&text)?;
            emit(out, &format!("{}\n", rank(&t)))
        }
        Command::Unrank { k } => {
            let k: BigUint = k
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("not a rank: {k:?}")))?;
            let t = unrank(&k)?;
            emit(out, &format!("{}\n", to_newick(&t)))
        }
        Command::Seq { which, max } => {
            let mut text = String::new();
            match which {
                SeqKind::C => {
                    text.push_str("h,c\n");
                    for (h, c) in extremal_seqs(max).c.iter().enumerate() {
                        text.push_str(&format!("{h},{c}\n"));
                    }
                }
                SeqKind::D => {
                    text.push_str("h,d\n");
                    for (i, d) in extremal_seqs(max).d.iter().enumerate() {
                        text.push_str(&format!("{},{d}\n", i + 2));
                    }
                }
                SeqKind::HeightCounts => {
                    text.push_str("h,at_most,exactly\n");
                    for h in 0..=max {
                        text.push_str(&format!(
                            "{h},{},{}\n",
                            count_by_height(h, HeightMode::AtMost),
                            count_by_height(h, HeightMode::Exactly)
                        ));
                    }
                }
            }
            emit(out, &text)
        }
        Command::Enumerate { leaves, format } => {
            let shapes = enumerate_shapes(leaves)?;
            let rows = shapes.iter().map(|t| (rank(t), t.height(), to_newick(t)));
            match format {
                Format::Csv => {
                    let mut text = String::from("rank,height,newick\n");
                    for (r, h, nw) in rows {
                        text.push_str(&format!("{r},{h},\"{nw}\"\n"));
                    }
                    emit(out, &text)
                }
                Format::Json => {
                    let v: Vec<Value> = rows
                        .map(|(r, h, nw)| json!({"rank": r.to_string(), "height": h, "newick": nw}))
                        .collect();
                    emit_json(out, &Value::Array(v))
                }
            }
        }
        Command::Probs {
            leaves,
            model,
            format,
        } => {
            let shapes = enumerate_shapes(leaves)?;
            let rows = shapes
                .iter()
                .map(|t| (rank(t), fmt_ratio(&shape_probability(t, model)), to_newick(t)));
            match format {
                Format::Csv => {
                    let mut text = String::from("rank,probability,newick\n");
                    for (r, p, nw) in rows {
                        text.push_str(&format!("{r},{p},\"{nw}\"\n"));
                    }
                    emit(out, &text)
                }
                Format::Json => {
                    let v: Vec<Value> = rows
                        .map(|(r, p, nw)| {
                            json!({"rank": r.to_string(), "probability": p, "newick": nw})
                        })
                        .collect();
                    emit_json(out, &json!({"model": model.name(), "n": leaves, "shapes": v}))
                }
            }
        }
        Command::Moments { leaves, model } => emit_json(out, &exact_moments(leaves, model)?.to_json()),
        Command::Sample {
            model,
            leaves,
            count,
            seed,
            histogram,
            height_only,
            format,
        } => {
            if height_only {
                let heights = sample_heights(model, leaves, count, seed)?;
                if count < 2 {
                    return Err(Error::InvalidArgument(format!(
                        "need at least 2 samples, got {count}"
                    )));
                }
                let (mean, se) = mean_and_se(heights.iter().map(|&h| h as f64));
                let scale = height_scale(model, leaves);
                return emit_json(
                    out,
                    &json!({
                        "model": model.name(),
                        "n": leaves,
                        "samples": count,
                        "seed": seed,
                        "mean_height": fmt_real(mean),
                        "se_height": fmt_real(se),
                        "height_scale": fmt_real(scale),
                        "mean_scaled_height": fmt_real(mean / scale),
                    }),
                );
            }
            let report = monte_carlo(model, leaves, count, seed, histogram)?;
            match (format, report.histogram_csv()) {
                (Format::Csv, Some(csv)) => emit(out, &csv),
                (Format::Csv, None) => Err(Error::InvalidArgument(
                    "--format csv needs --histogram".into(),
                )),
                (Format::Json, _) => {
                    let mut v = report.to_json();
                    v["seed"] = json!(seed);
                    emit_json(out, &v)
                }
            }
        }
        Command::Asym {
            what,
            model,
            n_range,
            x,
            variance,
        } => emit_json(out, &asym(what, model, n_range, &x, variance)?),
        Command::Figures { which, out: path } => {
            let csv = figure_csv(which)?;
            match path {
                Some(p) => std::fs::write(&p, csv).map_err(io_err),
                None => emit(out, &csv),
            }
        }
    }
}

fn mean_and_se(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut count = 0f64;
    let mut mean = 0f64;
    let mut m2 = 0f64;
    for x in xs {
        count += 1.0;
        let d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }
    (mean, (m2 / (count - 1.0) / count).sqrt())
}

fn asym(
    what: AsymKind,
    model: Option<Model>,
    n_range: Option<(u64, u64)>,
    x: &[f64],
    variance: bool,
) -> Result<Value> {
    let need = |name: &str| Error::InvalidArgument(format!("--{name} is required here"));
    match what {
        AsymKind::Constants => Ok(PaperConstants::reported().to_json()),
        AsymKind::ThetaCdf => {
            if x.is_empty() {
                return Err(need("x"));
            }
            Ok(Value::Array(
                x.iter()
                    .map(|&x| json!({"x": fmt_real(x), "cdf": fmt_real(theta_cdf(x))}))
                    .collect(),
            ))
        }
        AsymKind::Loglog | AsymKind::Pi | AsymKind::MeanRank => {
            let model = model.ok_or_else(|| need("model"))?;
            let (a, b) = n_range.ok_or_else(|| need("n-range"))?;
            let mut rows = Vec::new();
            for n in a..=b {
                let mut row = match what {
                    AsymKind::Loglog => json!({"value": fmt_real(loglog_asymptotic(n, model)?)}),
                    AsymKind::Pi => {
                        let v = pi_asymptotic(n, model)?;
                        json!({"value": fmt_real(v.value), "ln": fmt_real(v.ln)})
                    }
                    _ => mean_rank_asymptotic(n, model, variance)?.to_json(),
                };
                row["n"] = json!(n);
                rows.push(row);
            }
            Ok(json!({"model": model.name(), "what": what_name(what), "rows": rows}))
        }
    }
}

fn what_name(what: AsymKind) -> &'static str {
    match what {
        AsymKind::Loglog => "loglog",
        AsymKind::Pi => "pi",
        AsymKind::MeanRank => "mean-rank",
        AsymKind::ThetaCdf => "theta-cdf",
        AsymKind::Constants => "constants",
    }
}
