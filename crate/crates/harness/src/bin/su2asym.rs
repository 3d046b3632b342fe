use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use recoupling::asym_threej::LengthConvention;
use recoupling::{EulerRotation, HalfInt, Precision, Spin};
use recoupling_harness::report::{write_table, Summary};
use recoupling_harness::sweep::{eval_character, eval_dmatrix, eval_threej};
use recoupling_harness::tables::{haar_check, region_map, xi_surface, TableSummary};
use recoupling_harness::{default_precision, run_sweep, ConfigError, Mode, OutputFormat, Record, SweepSpec};
use serde_json::json;

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

/// Exact and asymptotic SU(2) recoupling quantities.
#[derive(Parser)]
#[command(name = "su2asym", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit JSON `{spec, records, summary}`.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV with a header row (default).
    #[arg(long, global = true)]
    csv: bool,
    /// Write to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Half-width factor of the transition band `kappa J^{-2/3}`.
    #[arg(long, global = true)]
    kappa: Option<f64>,
    /// Decimal digits for exact evaluation (default from SU2ASYM_PRECISION, else 40).
    #[arg(long, global = true, value_name = "DIGITS")]
    precision: Option<u32>,
    /// Seed for random rotations.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// One Wigner matrix element `D^J_{M M'}(alpha, beta, gamma)`.
    Dmatrix {
        #[arg(long, allow_negative_numbers = true)]
        j: f64,
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, allow_negative_numbers = true)]
        mp: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, value_enum, default_value = "compare")]
        mode: ModeArg,
    },
    /// The character of one rotation.
    Char {
        #[arg(long)]
        j: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, value_enum, default_value = "compare")]
        mode: ModeArg,
    },
    /// One 3j symbol.
    Threej {
        #[arg(long, num_args = 3, required = true)]
        j: Vec<f64>,
        #[arg(long, num_args = 3, required = true, allow_negative_numbers = true)]
        m: Vec<f64>,
        #[arg(long, value_enum, default_value = "compare")]
        mode: ModeArg,
        /// Use vector lengths `J + 1/2` in the triangle.
        #[arg(long)]
        shifted_lengths: bool,
    },
    /// Run a TOML sweep specification.
    Sweep { spec: PathBuf },
    /// Region and boundary-term diagnostic over `(x, xi^2)`.
    RegionMap {
        #[arg(long)]
        j: f64,
        /// `a:b:n` (n points from a to b) or a comma list.
        #[arg(long, allow_hyphen_values = true)]
        xi2: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Fixed `M'/J`; the diagonal `y = x` when omitted.
        #[arg(long, allow_negative_numbers = true)]
        y: Option<f64>,
    },
    /// Decay exponent of the suppressed region over `(x, y)` at fixed `xi^2`.
    XiSurface {
        #[arg(long)]
        xi2: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Add the measured decay slope of the exact elements.
        #[arg(long)]
        with_oracle: bool,
        /// Spins used for the measured slope.
        #[arg(long, value_delimiter = ',', default_value = "20,40,60,80,100")]
        oracle_j: Vec<f64>,
    },
    /// Haar integrals of three Wigner matrices against products of 3j symbols.
    HaarCheck {
        /// Largest `J1 + J2 + J3`.
        #[arg(long, default_value_t = 6.0)]
        max_sum: f64,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Exact,
    Asym,
    Compare,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Asym => Mode::Asym,
            ModeArg::Compare => Mode::Compare,
        }
    }
}

enum Failure {
    Config(String),
    Numeric,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(format!("output: {e}"))
    }
}

fn parse_grid(text: &str, field: &'static str) -> Result<Vec<f64>, ConfigError> {
    let bad = |msg: &str| ConfigError::field(field, format!("{msg} in `{text}`"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let a: f64 = parts[0].trim().parse().map_err(|_| bad("bad start"))?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad("bad end"))?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad("bad count"))?;
        return match n {
            0 => Err(bad("empty grid")),
            1 => Ok(vec![a]),
            _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
        };
    }
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| bad("bad number")))
        .collect::<Result<Vec<f64>, _>>()
        .and_then(|v| if v.is_empty() { Err(bad("empty grid")) } else { Ok(v) })
}

fn spin(v: f64, field: &'static str) -> Result<Spin, ConfigError> {
    Spin::from_f64(v).ok_or_else(|| ConfigError::field(field, format!("{v} is not a non-negative half-integer")))
}

fn half(v: f64, field: &'static str) -> Result<HalfInt, ConfigError> {
    HalfInt::from_f64(v).ok_or_else(|| ConfigError::field(field, format!("{v} is not a half-integer")))
}

fn rotation(alpha: f64, beta: f64, gamma: f64) -> Result<EulerRotation, ConfigError> {
    EulerRotation::new(alpha, beta, gamma).map_err(|_| ConfigError::field("beta", "must lie in [0, pi]"))
}

fn precision(g: &Global) -> Result<Precision, ConfigError> {
    match g.precision {
        Some(d) => Precision::from_digits(d).ok_or_else(|| ConfigError::field("precision", format!("{d} digits is outside the supported range"))),
        None => Ok(default_precision()),
    }
}

fn format(g: &Global, fallback: OutputFormat) -> OutputFormat {
    if g.json {
        OutputFormat::Json
    } else if g.csv {
        OutputFormat::Csv
    } else {
        fallback
    }
}

fn sink(g: &Global) -> Result<Box<dyn Write>, Failure> {
    Ok(match &g.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes one record; a record carrying an error is a numeric failure.
fn single(g: &Global, spec: serde_json::Value, r: Record) -> Result<(), Failure> {
    let summary = Summary::from_records(std::slice::from_ref(&r), &[r.j1]);
    let mut out = sink(g)?;
    write_table(&mut out, format(g, OutputFormat::Csv), &spec, std::slice::from_ref(&r), &summary)?;
    out.flush()?;
    match r.error {
        Some(e) => {
            eprintln!("su2asym: {e}");
            Err(Failure::Numeric)
        }
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let kappa = g.kappa.unwrap_or(1.0);
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(ConfigError::field("kappa", "must be positive").into());
    }
    match cli.command {
        Command::Dmatrix { j, m, mp, alpha, beta, gamma, mode } => {
            let rot = rotation(alpha, beta, gamma)?;
            let r = eval_dmatrix(spin(j, "j")?, half(m, "m")?, half(mp, "mp")?, &rot, mode.into(), kappa, precision(g)?);
            let spec = json!({"command": "dmatrix", "j": j, "m": m, "mp": mp, "alpha": alpha, "beta": beta, "gamma": gamma, "kappa": kappa});
            single(g, spec, r)
        }
        Command::Char { j, alpha, beta, gamma, mode } => {
            let rot = rotation(alpha, beta, gamma)?;
            let r = eval_character(spin(j, "j")?, &rot, mode.into(), precision(g)?);
            single(g, json!({"command": "char", "j": j, "alpha": alpha, "beta": beta, "gamma": gamma}), r)
        }
        Command::Threej { j, m, mode, shifted_lengths } => {
            let js = [spin(j[0], "j")?, spin(j[1], "j")?, spin(j[2], "j")?];
            let ms = [half(m[0], "m")?, half(m[1], "m")?, half(m[2], "m")?];
            let lengths = if shifted_lengths { LengthConvention::Shifted } else { LengthConvention::Bare };
            let r = eval_threej(js, ms, mode.into(), lengths, precision(g)?);
            single(g, json!({"command": "threej", "j": j, "m": m, "shifted_lengths": shifted_lengths}), r)
        }
        Command::Sweep { spec } => {
            let mut s = SweepSpec::from_path(&spec)?;
            if let Some(seed) = g.seed {
                s.seed = seed;
            }
            if let Some(k) = g.kappa {
                s.kappa = k;
            }
            if g.precision.is_some() {
                s.precision = Some(precision(g)?.digits());
            }
            s.output_format = format(g, s.output_format);
            s.validate()?;
            let report = run_sweep(&s);
            let mut out = sink(g)?;
            write_table(&mut out, s.output_format, &s, &report.records, &report.summary)?;
            out.flush()?;
            Ok(())
        }
        Command::RegionMap { j, xi2, x, y } => {
            let (xi2g, xg) = (parse_grid(&xi2, "xi2")?, parse_grid(&x, "x")?);
            let rows = region_map(spin(j, "j")?, &xi2g, &xg, y, kappa)?;
            let summary = TableSummary {
                rows: rows.len(),
                reliable: Some(rows.iter().filter(|r| r.em_reliable).count()),
                ..TableSummary::default()
            };
            let spec = json!({"command": "region-map", "j": j, "xi2": xi2g, "x": xg, "y": y, "kappa": kappa});
            let mut out = sink(g)?;
            write_table(&mut out, format(g, OutputFormat::Csv), &spec, &rows, &summary)?;
            out.flush()?;
            Ok(())
        }
        Command::XiSurface { xi2, x, y, with_oracle, oracle_j } => {
            let (xg, yg) = (parse_grid(&x, "x")?, parse_grid(&y, "y")?);
            let spins = oracle_j.iter().map(|&v| spin(v, "oracle-j")).collect::<Result<Vec<_>, _>>()?;
            let rows = xi_surface(xi2, &xg, &yg, with_oracle.then_some(spins.as_slice()), precision(g)?)?;
            let summary = TableSummary {
                rows: rows.len(),
                positive_xi: Some(rows.iter().filter(|r| r.xi_sign > 0).count()),
                ..TableSummary::default()
            };
            let spec = json!({"command": "xi-surface", "xi2": xi2, "x": xg, "y": yg, "with_oracle": with_oracle, "oracle_j": oracle_j});
            let mut out = sink(g)?;
            write_table(&mut out, format(g, OutputFormat::Csv), &spec, &rows, &summary)?;
            out.flush()?;
            Ok(())
        }
        Command::HaarCheck { max_sum } => {
            if !(0.0..=12.0).contains(&max_sum) {
                return Err(ConfigError::field("max-sum", "must lie in [0, 12]").into());
            }
            let rows = haar_check(max_sum);
            let summary = TableSummary {
                rows: rows.len(),
                max_abs_err: rows.iter().map(|r| r.abs_err).reduce(f64::max),
                ..TableSummary::default()
            };
            let mut out = sink(g)?;
            write_table(&mut out, format(g, OutputFormat::Csv), &json!({"command": "haar-check", "max_sum": max_sum}), &rows, &summary)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("su2asym: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Numeric) => ExitCode::from(EXIT_NUMERIC),
    }
}
