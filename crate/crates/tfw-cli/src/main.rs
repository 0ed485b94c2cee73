//! `tfw`: reports on tropical skeletons, wrapped Floer generators, η-integral
//! obstructions, disk energies and mirror-ring checks.

mod commands;
mod failure;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "tfw", version, about = "Tropical skeletons, wrapped Floer generators and mirror checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Lq,
    Pants,
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Svg,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Curve JSON file (implies `--curve file`).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub curve: Option<CurveKind>,
    /// `log|q|` for the built-in `lq` curve.
    #[arg(long, global = true, default_value = "1/2")]
    pub logq: String,
    /// `arg q / π` for the built-in `lq` curve.
    #[arg(long, global = true, default_value = "1/3")]
    pub argq: String,
    /// Wrapping number or filtration level.
    #[arg(long, global = true, default_value_t = 2)]
    pub k: i64,
    /// Radius `R`; defaults to `10·k·M + 2k + 10`.
    #[arg(long = "R", global = true)]
    pub r: Option<f64>,
    /// Translation direction `a1,a2`, normalized to a unit vector.
    #[arg(long, global = true)]
    pub a: Option<String>,
    /// `auto` or comma-separated Morse offsets, one per end.
    #[arg(long, global = true, default_value = "auto")]
    pub phi: String,
    /// Mirror-ring cutoff valuation, e.g. `50` or `16*pi`.
    #[arg(long, global = true, default_value = "24")]
    pub cutoff: String,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Interval refinement depth for valuation comparisons.
    #[arg(long, global = true, env = "TFW_PRECISION")]
    pub precision: Option<u32>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Newton polygon, smoothness, skeleton, ends and interior count.
    Analyze,
    /// Floer generators of the wrapped complex.
    Generators,
    /// η-integral test on a nullhomotopic class of end circles.
    Obstruction {
        /// `opposite-ends` or comma-separated multiplicities, one per end.
        #[arg(long, default_value = "opposite-ends")]
        class: String,
    },
    /// Energy of a disk from its boundary data.
    Energy {
        #[arg(long)]
        disk: PathBuf,
    },
    /// Filtered dimensions, basis certificates, table checks and the coefficient solve.
    MirrorCheck,
    /// Pole order and slope of a function along an end.
    PoleProfile {
        /// Laurent polynomial in `z1`, `z2` and named constants.
        #[arg(long)]
        g: String,
        #[arg(long)]
        end: usize,
    },
    /// SVG of the skeleton, with an optional per-end generator ladder.
    Render {
        #[arg(long)]
        ladder: bool,
    },
}

/// A finished command: the payload and the exit code it carries.
pub struct Outcome {
    pub body: Body,
    pub code: i32,
}

pub enum Body {
    Report(Value),
    Svg(String),
}

/// Plain `key: value` lines for a JSON report.
fn to_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        to_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        to_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar(x))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(outcome: &Outcome, format: Option<Format>) -> Result<String, Failure> {
    match (&outcome.body, format) {
        (Body::Svg(s), None | Some(Format::Svg)) => Ok(s.clone()),
        (Body::Svg(s), Some(Format::Json)) => Ok(serde_json::to_string_pretty(&serde_json::json!({ "svg": s }))? + "\n"),
        (Body::Svg(_), Some(Format::Text)) => Err(Failure::domain("render supports --format svg or json")),
        (Body::Report(v), None | Some(Format::Json)) => Ok(serde_json::to_string_pretty(v)? + "\n"),
        (Body::Report(v), Some(Format::Text)) => {
            let mut s = String::new();
            to_text(v, 0, &mut s);
            Ok(s)
        }
        (Body::Report(_), Some(Format::Svg)) => Err(Failure::domain("only render produces svg")),
    }
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    let outcome = commands::dispatch(&cli.command, &cli.opts)?;
    let text = render(&outcome, cli.opts.format)?;
    match &cli.opts.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("tfw: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
