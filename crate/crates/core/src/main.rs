use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use udtfs::cli::{self, Input, Report, TypeSelection};
use udtfs::{Error, GenSpec, Result, TraceSystem};

#[derive(Parser)]
#[command(name = "udtfs", version, about = "Type compression and definability checks on finite trace systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct InputArgs {
    /// Trace system file, fixture name (e.g. CHAIN4x3) or `gen:SPEC`
    source: Option<String>,
    #[arg(long, conflicts_with_all = ["source", "gen", "fixture"])]
    input: Option<PathBuf>,
    /// Generator spec, compact (`cube:2`) or JSON
    #[arg(long, conflicts_with_all = ["source", "fixture"])]
    gen: Option<String>,
    #[arg(long, conflicts_with = "source")]
    fixture: Option<String>,
    /// Seed override for random generators
    #[arg(long)]
    seed: Option<u64>,
}

impl InputArgs {
    fn load(&self) -> Result<TraceSystem> {
        let input = match (&self.source, &self.input, &self.gen, &self.fixture) {
            (Some(s), ..) => Input::parse_source(s)?,
            (_, Some(p), ..) => Input::File(p.clone()),
            (_, _, Some(g), _) => Input::Gen(GenSpec::from_str(g)?),
            (_, _, _, Some(f)) => Input::Fixture(f.clone()),
            _ => return Err(Error::Domain("no input given (use a source, --input, --gen or --fixture)".into())),
        };
        input.load(self.seed)
    }
}

#[derive(Args)]
struct OutArgs {
    /// Report destination; `-` for stdout
    #[arg(long, default_value = "-")]
    json: String,
    /// No progress messages on stderr
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Independence dimension, TP bound, VC-density and Sauer checks
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compress types over a domain and verify the round trip
    Compress {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Comma-separated columns (labels, `#j` or indices); default all
        #[arg(long)]
        domain: Option<String>,
        /// Sign string over the domain, e.g. 101
        #[arg(long = "type", conflicts_with_all = ["row", "all_types"])]
        ty: Option<String>,
        /// Use the trace of this row
        #[arg(long, conflicts_with = "all_types")]
        row: Option<usize>,
        /// One entry per realized type
        #[arg(long)]
        all_types: bool,
        /// Ladder node budget
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Indiscernibility analysis of a column sequence
    Indisc {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Comma-separated columns in order, or `all`
        #[arg(long, default_value = "all")]
        seq: String,
    },
    /// Exhaustive validity of a definition scheme suite
    Schemes {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
        /// compression, threshold, membership, negation, conjunction or lift
        #[arg(long, default_value = "compression")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        max_b: usize,
    },
    /// Generate a trace system in the text format
    Gen {
        /// Kind (intervals, halfline, singletons, cube, grid, random) or a full spec
        kind: String,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        thresholds: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a JSON report here (`-` for stdout)
        #[arg(long)]
        json: Option<String>,
    },
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Domain(format!("missing --{flag}")))
}

#[allow(clippy::too_many_arguments)]
fn gen_spec(
    kind: &str,
    points: Option<usize>,
    thresholds: Option<usize>,
    dim: Option<usize>,
    m: Option<usize>,
    rows: Option<usize>,
    cols: Option<usize>,
    density: Option<f64>,
    seed: Option<u64>,
) -> Result<GenSpec> {
    if kind.contains(':') || kind.trim_start().starts_with('{') {
        let spec = GenSpec::from_str(kind)?;
        return Ok(match seed {
            Some(s) => spec.with_seed(s),
            None => spec,
        });
    }
    Ok(match kind {
        "intervals" => GenSpec::Intervals { points: need(points, "points")?, which: None },
        "halfline" => GenSpec::Halfline { points: need(points, "points")?, thresholds: need(thresholds, "thresholds")? },
        "singletons" => GenSpec::Singletons { points: need(points, "points")? },
        "cube" => GenSpec::Cube { dim: need(dim, "dim")? },
        "grid" => GenSpec::Grid { m: need(m, "m")? },
        "random" => GenSpec::Random {
            rows: need(rows, "rows")?,
            cols: need(cols, "cols")?,
            density: need(density, "density")?,
            seed: seed.unwrap_or(0),
        },
        other => return Err(Error::Domain(format!("unknown generator kind {other:?}"))),
    })
}

fn write_to(dest: &str, text: &str) -> Result<()> {
    if dest == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string()))
    } else {
        std::fs::write(dest, text).map_err(|e| Error::Io(format!("{dest}: {e}")))
    }
}

fn emit(report: &Report, out: &OutArgs) -> Result<()> {
    write_to(&out.json, &report.to_json())?;
    if !out.quiet && out.json != "-" {
        eprintln!("wrote {}", out.json);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Analyze { input, out } => {
            let sys = input.load()?;
            emit(&cli::analyze(&sys)?, &out)
        }
        Cmd::Compress { input, out, domain, ty, row, all_types, budget } => {
            let sys = input.load()?;
            let dom = cli::parse_columns(&sys, domain.as_deref())?;
            let sel = match (ty, row, all_types) {
                (Some(bits), _, _) => TypeSelection::Bits(bits),
                (_, Some(r), _) => TypeSelection::Row(r),
                (_, _, true) => TypeSelection::All,
                _ => return Err(Error::Domain("choose one of --type, --row or --all-types".into())),
            };
            if !out.quiet && sel == TypeSelection::All {
                eprintln!("compressing all realized types over {} columns", dom.len());
            }
            emit(&cli::compress_report(&sys, &dom, &sel, budget)?, &out)
        }
        Cmd::Indisc { input, out, seq } => {
            let sys = input.load()?;
            let cols = cli::parse_columns(&sys, Some(&seq))?;
            emit(&cli::indisc_report(&sys, &cols)?, &out)
        }
        Cmd::Schemes { input, out, suite, max_b } => {
            let sys = input.load()?;
            if !out.quiet {
                eprintln!("checking suite {suite} up to |B| = {max_b}");
            }
            emit(&cli::schemes_report(&sys, &suite, max_b)?, &out)
        }
        Cmd::Gen { kind, points, thresholds, dim, m, rows, cols, density, seed, out, json } => {
            let spec = gen_spec(&kind, points, thresholds, dim, m, rows, cols, density, seed)?;
            let sys = spec.build()?;
            let dest = out.as_ref().map(|p| p.display().to_string());
            write_to(dest.as_deref().unwrap_or("-"), &sys.to_text())?;
            if let Some(j) = json {
                write_to(&j, &cli::gen_report(&spec, &sys, dest.as_deref()).to_json())?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(cli::EXIT_OK as u8),
        Err(e) => {
            eprintln!("udtfs: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
