//! The `approxlat` command line: one subcommand per scenario, each writing
//! a JSON report (and CSV plot data where there is any).
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report
//! is still written), 2 for usage errors.

mod scenarios;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use scenarios::{run_scenario, Check, Report};

#[derive(Parser, Debug)]
#[command(name = "approxlat", version, about = "Certificates and witnesses for approximate lattices", arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Scenario,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Cut-and-project set over Q(√d): symmetry, product cover, window
    /// arithmetic and the Delone parameters of its projection.
    Meyer,
    /// A Zariski-dense approximate subgroup of R² that is not an
    /// approximate lattice.
    Thin,
    /// {1} × Z in the ax+b group: discrete, not relatively dense, and not
    /// Zariski dense.
    Example3,
    /// Solutions of y^p = t·x^p − x modulo t^N.
    Rosenlicht,
    /// Coset cover g + H ⊂ closure ⊂ F + H for two parallel rows.
    BorelShape,
    /// A positive density ρ on ax+b with ∫ρ = 1 and ∫ρΔ > 1.
    Unimod,
    /// Local-matching distance, limits, translate propagation, subgroup
    /// hulls and the union density locator.
    HullSuite,
    /// Vanishing ideals and density certificates on random point sets, or
    /// on a point-set file.
    Zariski,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Meyer => "meyer",
            Scenario::Thin => "thin",
            Scenario::Example3 => "example3",
            Scenario::Rosenlicht => "rosenlicht",
            Scenario::BorelShape => "borel-shape",
            Scenario::Unimod => "unimod",
            Scenario::HullSuite => "hull-suite",
            Scenario::Zariski => "zariski",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Scenario parameters. Anything left unset takes the scenario's default,
/// which the report records alongside the values actually used.
#[derive(Args, Clone, Debug, Default, PartialEq, Serialize)]
pub struct Options {
    /// Window radius (meaning depends on the scenario).
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Polynomial degree.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Characteristic.
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// Series precision.
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Quadrature cells per axis.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Seed for the randomized suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Square-free d of the quadratic field.
    #[arg(long, global = true)]
    pub d: Option<u64>,
    /// Lowest Laurent valuation searched is −laurent.
    #[arg(long, global = true)]
    pub laurent: Option<i64>,
    /// Point-set file to analyse instead of random sets.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Directory receiving `<scenario>.json` and plot data.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    #[serde(skip)]
    pub format: Format,
}

fn write_outputs(report: &Report, opts: &Options) -> std::io::Result<()> {
    let json = report.to_json();
    if let Some(dir) = &opts.out {
        fs::create_dir_all(dir)?;
        let name = report.scenario;
        fs::write(dir.join(format!("{name}.json")), &json)?;
        if let Some(csv) = &report.csv {
            fs::write(dir.join(format!("{name}.csv")), csv)?;
        }
        for (file, text) in &report.files {
            fs::write(dir.join(file), text)?;
        }
    }
    let mut out = std::io::stdout().lock();
    match opts.format {
        Format::Json => out.write_all(json.as_bytes())?,
        Format::Csv => out.write_all(report.csv.clone().unwrap_or_else(|| report.checks_csv()).as_bytes())?,
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the scenario and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    let report = run_scenario(cli.command, &cli.options);
    for c in &report.caveats {
        eprintln!("note: {c}");
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAIL {}: {}", c.name, c.detail);
    }
    if let Err(e) = write_outputs(&report, &cli.options) {
        eprintln!("error: could not write the report: {e}");
        return 1;
    }
    if report.passed {
        0
    } else {
        1
    }
}
