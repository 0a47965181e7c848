use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dcurv::commands;
use dcurv::numfmt::sig;
use dcurv::{CliError, Result};
use discrete_curvature::{Family, Gauge, SolverOptions};

/// Discrete Gaussian curvature on triangulated surfaces.
#[derive(Parser)]
#[command(name = "dcurv", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-vertex angle defect, Voronoi area and curvature.
    Curvature {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a conformally equivalent metric of constant curvature.
    Uniformize {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        #[arg(long, value_enum, default_value_t = GaugeArg::SumZero)]
        gauge: GaugeArg,
        /// Initial conformal factor as `<vertex> <value>` rows.
        #[arg(long)]
        init: Option<PathBuf>,
        /// Extra Hessian shift on every Newton step.
        #[arg(long, default_value_t = 0.0)]
        damping: f64,
        /// Writes `<prefix>.u` and `<prefix>.report`; defaults to the input
        /// path without its extension.
        #[arg(long)]
        out_prefix: Option<PathBuf>,
    },
    /// Tabulate the curvature mismatch of a family over its parameter interval.
    Scan {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 401)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameters at which a family member has constant curvature.
    Roots {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 401)]
        samples: usize,
        #[arg(long, default_value_t = 1e-12)]
        root_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a closed triangle mesh to a surface file.
    ImportObj { input: PathBuf, output: PathBuf },
    /// Write one family member as a surface file.
    Family {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        v: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    b0: f64,
    #[arg(long)]
    c0: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Tet,
    Genus2,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Tet => Family::Tetrahedron,
            FamilyArg::Genus2 => Family::Genus2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GaugeArg {
    SumZero,
    Pin,
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Curvature { file, out } => {
            let text = commands::curvature(&file)?;
            commands::write_output(out.as_deref(), &text)
        }
        Command::Uniformize { file, tol, max_iter, gauge, init, damping, out_prefix } => {
            let opts = SolverOptions {
                grad_tol: tol,
                max_iter,
                gauge: match gauge {
                    GaugeArg::SumZero => Gauge::SumZero,
                    GaugeArg::Pin => Gauge::PinFirstVertex,
                },
                trust_damping: damping,
                ..Default::default()
            };
            let out = commands::uniformize(&file, opts, init.as_deref())?;
            let prefix = out_prefix.unwrap_or_else(|| file.with_extension(""));
            commands::write_output(Some(&with_suffix(&prefix, ".u")), &out.factor)?;
            commands::write_output(Some(&with_suffix(&prefix, ".report")), &out.report)?;
            println!("converged in {} iterations, gradient norm {}", out.iterations, sig(out.grad_norm));
            Ok(())
        }
        Command::Scan { family, samples, out } => {
            let text = commands::scan(family.family.into(), family.b0, family.c0, samples)?;
            commands::write_output(out.as_deref(), &text)
        }
        Command::Roots { family, samples, root_tol, out } => {
            let text = commands::roots(family.family.into(), family.b0, family.c0, samples, root_tol)?;
            commands::write_output(out.as_deref(), &text)
        }
        Command::ImportObj { input, output } => {
            let (text, warnings) = commands::import_obj(&input)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            commands::write_output(Some(&output), &text)
        }
        Command::Family { family, v, out } => {
            let text = commands::family_file(family.family.into(), family.b0, family.c0, v)?;
            commands::write_output(out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::exit_code(&e))
        }
    }
}
