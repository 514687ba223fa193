//! `slicelab` command line: one subcommand per experiment kind, plus `report`
//! for running a batch of spec files into one aggregated output.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use slicelab::polytope::Caps;
use slicelab_cli::{emit_report, render, run_experiment, CliError, ExperimentKind, ExperimentSpec, Format, Report};

#[derive(Parser)]
#[command(name = "slicelab", version, about = "Exact slice and diameter experiments on rational polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the stage ledger K_1..K_N.
    Construct(Common),
    /// Build the symmetric ball B_eps.
    Ball(Common),
    /// Slice a body by a functional at depth alpha.
    Slice(Common),
    /// Exact diameter of a body.
    Diameter(Common),
    /// Slice-sum diameter lower bound on the l_p product of l_inf balls.
    VerifyProp21(Common),
    /// Exact slice-sum diameter (p = 1).
    VerifyProp21Exact(Common),
    /// Open-set witness on the top stage.
    VerifyK0Open(Common),
    /// Small convex combination of stage slices.
    VerifyK0Combo(Common),
    /// Renormed combination on B_eps.
    VerifyThmCombo(Common),
    /// Open-set witness on B_eps.
    VerifyThmOpen(Common),
    /// Midpoint decomposition check for a pair of bodies.
    VerifyLemma24(Common),
    /// Slice inclusion in an l1-sum ball.
    VerifyL1sum(Common),
    /// Run several spec files and aggregate their reports.
    Report(Batch),
}

#[derive(Args, Clone)]
struct Shared {
    /// Output directory for report.json and summary.csv; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized experiments (overrides the spec file).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cap_vertices: Option<usize>,
    #[arg(long)]
    cap_sums: Option<u128>,
    /// Format for stdout output.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct Common {
    /// Experiment spec (JSON). Its `kind` must match the subcommand.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Inline JSON object merged over the spec's params.
    #[arg(long)]
    params: Option<String>,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct Batch {
    /// Spec files; each holds one spec or an array of specs.
    #[arg(long = "spec", required = true)]
    specs: Vec<PathBuf>,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn single_spec(kind: ExperimentKind, args: &Common) -> Result<ExperimentSpec, CliError> {
    let mut spec = match &args.spec {
        Some(path) => {
            let spec = ExperimentSpec::from_json(&read(path)?)?;
            if spec.kind != kind {
                return Err(CliError::Spec {
                    field: "kind".into(),
                    message: format!("spec is `{}`, subcommand runs `{}`", spec.kind.name(), kind.name()),
                });
            }
            spec
        }
        None => ExperimentSpec::new(kind),
    };
    if let Some(text) = &args.params {
        let extra: Value = serde_json::from_str(text).map_err(|e| CliError::Spec {
            field: "--params".into(),
            message: e.to_string(),
        })?;
        let (Value::Object(base), Value::Object(extra)) = (&mut spec.params, extra) else {
            return Err(CliError::Spec {
                field: "--params".into(),
                message: "must be a JSON object".into(),
            });
        };
        base.extend(extra);
    }
    Ok(spec)
}

fn batch_specs(args: &Batch) -> Result<Vec<ExperimentSpec>, CliError> {
    let mut out = Vec::new();
    for path in &args.specs {
        let text = read(path)?;
        let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Spec {
            field: path.display().to_string(),
            message: e.to_string(),
        })?;
        let items = match value {
            Value::Array(items) => items,
            v => vec![v],
        };
        for (i, item) in items.into_iter().enumerate() {
            let spec = serde_json::from_value(item).map_err(|e| CliError::Spec {
                field: format!("{}[{i}]", path.display()),
                message: e.to_string(),
            })?;
            out.push(spec);
        }
    }
    Ok(out)
}

fn execute(mut specs: Vec<ExperimentSpec>, shared: &Shared) -> Result<bool, CliError> {
    let mut caps = Caps::default();
    if let Some(v) = shared.cap_vertices {
        caps.max_vertices = v;
    }
    if let Some(s) = shared.cap_sums {
        caps.max_sums = s;
    }
    let mut reports: Vec<Report> = Vec::new();
    for spec in &mut specs {
        if let Some(seed) = shared.seed {
            spec.seed = seed;
        }
        let start = Instant::now();
        let report = run_experiment(spec, &caps)?;
        eprintln!(
            "{}: {} certificate(s), {} in {:.2?}",
            spec.kind.name(),
            report.certificates.len(),
            if report.passed() { "pass" } else { "FAIL" },
            start.elapsed()
        );
        reports.push(report);
    }
    let passed = reports.iter().all(Report::passed);
    let out = shared.out.clone().or_else(|| specs.iter().find_map(|s| s.out.clone()));
    match out {
        Some(dir) => {
            for path in emit_report(&reports, &dir)? {
                eprintln!("wrote {}", path.display());
            }
        }
        None => {
            let bytes = render(&reports, shared.format.into())?;
            std::io::stdout().write_all(&bytes).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?;
        }
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = |kind: ExperimentKind, args: &Common| execute(vec![single_spec(kind, args)?], &args.shared);
    let result = match &cli.command {
        Command::Construct(a) => run(ExperimentKind::BuildStages, a),
        Command::Ball(a) => run(ExperimentKind::Ball, a),
        Command::Slice(a) => run(ExperimentKind::Slice, a),
        Command::Diameter(a) => run(ExperimentKind::Diameter, a),
        Command::VerifyProp21(a) => run(ExperimentKind::Prop21, a),
        Command::VerifyProp21Exact(a) => run(ExperimentKind::Prop21Exact, a),
        Command::VerifyK0Open(a) => run(ExperimentKind::K0Open, a),
        Command::VerifyK0Combo(a) => run(ExperimentKind::K0Combo, a),
        Command::VerifyThmCombo(a) => run(ExperimentKind::ThmCombo, a),
        Command::VerifyThmOpen(a) => run(ExperimentKind::ThmOpen, a),
        Command::VerifyLemma24(a) => run(ExperimentKind::Lemma24, a),
        Command::VerifyL1sum(a) => run(ExperimentKind::L1sum, a),
        Command::Report(b) => batch_specs(b).and_then(|specs| execute(specs, &b.shared)),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
