use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qstat_core::catalog;
use qstat_core::geometry::ManifoldSpec;
use qstat_core::lifts::Bundle;
use qstat_core::manifest::{self, Manifest};
use qstat_core::run::{run, Command, SuiteOptions};

#[derive(Parser)]
#[command(
    name = "qstat",
    version,
    about = "Verify quasi-statistical identities on a manifold manifest"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classification flags of the base connection and metric.
    Classify(RunArgs),
    /// Checks on the generalized tangent bundle TM ⊕ T*M.
    Generalized(RunArgs),
    /// Checks on the cotangent and tangent bundle lifts.
    Lift(RunArgs),
    /// Norden structure checks on the lifts.
    Norden(RunArgs),
    /// Everything above.
    All(RunArgs),
    /// Print a catalog entry as a manifest.
    Export {
        #[arg(long)]
        builtin: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Manifest JSON file. Required unless --builtin is given.
    manifest: Option<PathBuf>,
    /// Use a catalog entry instead of a file.
    #[arg(long, conflicts_with = "manifest")]
    builtin: Option<String>,
    /// Restrict lift and norden checks to one bundle (default: both).
    #[arg(long, value_enum)]
    bundle: Option<BundleArg>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BundleArg {
    Cotangent,
    Tangent,
}

impl From<BundleArg> for Bundle {
    fn from(b: BundleArg) -> Self {
        match b {
            BundleArg::Cotangent => Bundle::Cotangent,
            BundleArg::Tangent => Bundle::Tangent,
        }
    }
}

fn input(args: &RunArgs) -> Result<(Manifest, ManifoldSpec), String> {
    match (&args.manifest, &args.builtin) {
        (_, Some(name)) => {
            let entry = catalog::builtin(name).map_err(|e| e.to_string())?;
            let m = catalog::manifest(name).map_err(|e| e.to_string())?;
            Ok((m, entry.spec))
        }
        (Some(path), None) => manifest::load(path).map_err(|e| e.to_string()),
        (None, None) => Err("a manifest path or --builtin NAME is required".into()),
    }
}

fn write(out: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(format!("cannot write report: {e}")),
            _ => Ok(()),
        },
    }
}

fn execute(command: Command, args: &RunArgs) -> Result<bool, String> {
    let (m, spec) = input(args)?;
    let mut opts = SuiteOptions::from_manifest(&m);
    if let Some(s) = args.samples {
        opts.samples = s;
    }
    if let Some(s) = args.seed {
        opts.seed = s;
    }
    if let Some(t) = args.tol {
        if t.is_nan() || t < 0.0 {
            return Err(format!("tolerance must be non-negative, got {t}"));
        }
        opts.tol = t;
    }
    let report =
        run(command, &spec, args.bundle.map(Bundle::from), &opts).map_err(|e| e.to_string())?;
    write(args.out.as_ref(), &report.to_json())?;
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Classify(a) => execute(Command::Classify, a),
        Cmd::Generalized(a) => execute(Command::Generalized, a),
        Cmd::Lift(a) => execute(Command::Lift, a),
        Cmd::Norden(a) => execute(Command::Norden, a),
        Cmd::All(a) => execute(Command::All, a),
        Cmd::Export { builtin, out } => catalog::manifest(builtin)
            .map_err(|e| e.to_string())
            .and_then(|m| write(out.as_ref(), &m.to_json()))
            .map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("qstat: {msg}");
            ExitCode::from(2)
        }
    }
}
