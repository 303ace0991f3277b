use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use logspace_core::analytic::{poly_modular_infimum, privalov_profile, OuterFunction, PolyInfimumOptions};
use logspace_core::harness::experiments::{Inputs, Tolerances, TOLERANCE_DOCS};
use logspace_core::harness::generate::{generate_function, weight_descriptor};
use logspace_core::harness::ingest::{load_function, load_measure, write_function};
use logspace_core::harness::{run_experiment, ExperimentConfig, GeneratorSpec, CATALOG};
use logspace_core::metrics::{f_norm, metric, MetricKind};
use logspace_core::weighted::{classify_descriptors, DivergenceRule};
use logspace_core::{AnalyticFunction, DiscreteMeasure, Exponent, LabError, SampledFunction};
use serde_json::json;

#[derive(Parser)]
#[command(name = "logspace-lab", version, about = "Log-type Orlicz modulars, metrics and weighted-space experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a catalogued experiment; exits 0 iff every check passes.
    Experiment(ExperimentArgs),
    /// Distance between two sampled functions.
    Metric(MetricArgs),
    /// F-norm |f|_p of a sampled function.
    Fnorm(FnormArgs),
    /// Compare the weighted classes of two weights along a refinement ladder.
    ClassifyWeights(ClassifyArgs),
    /// Radial means of (log+|f(re^{it})|)^p.
    Privalov(PrivalovArgs),
    /// Minimize the modular over polynomials with P(0) = 1.
    PolyInfimum(PolyArgs),
    /// Write generator samples as `index,re,im` CSV.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment name (see --list).
    #[arg(required_unless_present = "list")]
    name: Option<String>,
    /// Print the catalog and exit.
    #[arg(long)]
    list: bool,
    /// Exponents, comma separated.
    #[arg(long = "p", value_delimiter = ',')]
    p: Vec<f64>,
    /// Grid sizes or refinement ladder, comma separated.
    #[arg(long = "grid-size", value_delimiter = ',')]
    grid_size: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random trials where the experiment uses them.
    #[arg(long)]
    trials: Option<usize>,
    /// Maximum polynomial degree (poly-infimum).
    #[arg(long)]
    degree: Option<usize>,
    /// Optimizer restarts (poly-infimum).
    #[arg(long)]
    restarts: Option<usize>,
    /// Tolerance override `name=value`; repeatable. Defaults are listed below.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
    /// Measure CSV (`label,mass`) for the base functions.
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Base function f as CSV (`index,re,im`).
    #[arg(long)]
    f: Option<PathBuf>,
    /// Base function g as CSV (`index,re,im`).
    #[arg(long)]
    g: Option<PathBuf>,
    /// Base function f as a generator spec.
    #[arg(long = "f-spec")]
    f_spec: Option<String>,
    /// Base function g as a generator spec.
    #[arg(long = "g-spec")]
    g_spec: Option<String>,
    /// Extra weight pair for weight-classify.
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct MetricArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: MetricKind,
    #[arg(long = "p")]
    p: f64,
    #[arg(long)]
    f: PathBuf,
    #[arg(long)]
    g: PathBuf,
    /// Measure CSV; defaults to the uniform probability grid of the row count.
    #[arg(long)]
    measure: Option<PathBuf>,
}

#[derive(Args)]
struct FnormArgs {
    #[arg(long = "p")]
    p: f64,
    #[arg(long)]
    f: PathBuf,
    #[arg(long)]
    measure: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long = "p")]
    p: f64,
    /// Weight family, e.g. `expneg:a=1,b=1/p`.
    #[arg(long)]
    w: String,
    #[arg(long)]
    omega: String,
    /// `a..b` for grid sizes 2^a, 2^(a+step), ..., 2^b, or explicit sizes `256,1024`.
    #[arg(long, default_value = "8..20")]
    ladder: String,
    #[arg(long = "ladder-step", default_value_t = 2)]
    ladder_step: u32,
}

#[derive(Args)]
struct PrivalovArgs {
    #[arg(long = "p")]
    p: f64,
    /// `poly:c0,c1,...` or `outer:<generator>` with boundary modulus given by the generator.
    #[arg(long = "fn")]
    function: String,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.9,0.99,0.999")]
    radii: Vec<f64>,
    #[arg(long = "grid-size", default_value_t = 4096)]
    grid_size: usize,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long = "p")]
    p: f64,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "grid-size", default_value_t = 4096)]
    grid_size: usize,
    /// Weight ratio w/omega as a generator, e.g. `expneg:a=1,b=1/p`; sampled on the midpoint grid.
    #[arg(long)]
    ratio: Option<String>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    spec: String,
    #[arg(long = "grid-size")]
    grid_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Resolves the symbol `p` in the spec.
    #[arg(long = "p")]
    p: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<MetricKind, String> {
    s.parse().map_err(|e: LabError| e.to_string())
}

fn tolerance_help() -> String {
    let mut text = String::from("Tolerances (override with --tol NAME=VALUE):\n");
    for (name, doc) in TOLERANCE_DOCS {
        let default = Tolerances::default_of(name).unwrap_or_default();
        text.push_str(&format!("  {name:<24} {default:<10} {doc}\n"));
    }
    text
}

fn exponent(p: f64) -> Result<Exponent, LabError> {
    Exponent::new(p)
}

fn print_json(value: &serde_json::Value) -> Result<(), LabError> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn measure_arg(path: &Option<PathBuf>) -> Result<Option<Arc<DiscreteMeasure>>, LabError> {
    Ok(match path {
        Some(p) => Some(Arc::new(load_measure(p)?)),
        None => None,
    })
}

fn experiment(args: ExperimentArgs) -> Result<ExitCode, LabError> {
    if args.list {
        for (name, anchor) in CATALOG {
            println!("{name:<22} {anchor}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let mut tolerances = Tolerances::default();
    for item in &args.tol {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| LabError::Config(format!("expected NAME=VALUE, got `{item}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| LabError::Config(format!("tolerance `{k}` needs a number")))?;
        tolerances.set(k.trim(), v)?;
    }
    let config = ExperimentConfig {
        experiment: args.name.expect("required without --list"),
        p_values: args.p,
        grid_sizes: args.grid_size,
        seed: args.seed,
        trials: args.trials,
        degree: args.degree,
        restarts: args.restarts,
        tolerances,
        inputs: Inputs {
            measure: args.measure,
            f: args.f,
            g: args.g,
            f_spec: args.f_spec,
            g_spec: args.g_spec,
            w_spec: args.w,
            omega_spec: args.omega,
        },
    };
    let report = run_experiment(&config)?;
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout()),
    };
    match args.format {
        Format::Json => writeln!(sink, "{}", report.to_json()?)?,
        Format::Csv => report.write_csv(&mut sink)?,
    }
    sink.flush()?;
    let failed: Vec<&str> = report.failed().map(|c| c.id.as_str()).collect();
    if failed.is_empty() {
        eprintln!("{}: PASS ({} checks)", report.experiment, report.checks.len());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{}: FAIL ({} of {} checks): {}", report.experiment, failed.len(), report.checks.len(), failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn load_pair(f: &Path, g: &Path, measure: &Option<PathBuf>) -> Result<(SampledFunction, SampledFunction), LabError> {
    let measure = measure_arg(measure)?;
    let f = load_function(f, measure)?;
    let g = load_function(g, Some(f.measure().clone()))?;
    Ok((f, g))
}

fn metric_cmd(args: MetricArgs) -> Result<ExitCode, LabError> {
    let (f, g) = load_pair(&args.f, &args.g, &args.measure)?;
    let v = metric(args.kind, &f, &g, exponent(args.p)?)?;
    let parts = (v.ky_fan_part.is_some() || v.integral_part.is_some())
        .then(|| json!({ "ky_fan_part": v.ky_fan_part, "integral_part": v.integral_part }));
    print_json(&json!({ "value": v.value, "parts": parts, "iterations": null }))?;
    Ok(ExitCode::SUCCESS)
}

fn fnorm_cmd(args: FnormArgs) -> Result<ExitCode, LabError> {
    let f = load_function(&args.f, measure_arg(&args.measure)?)?;
    let r = f_norm(&f, exponent(args.p)?)?;
    print_json(&json!({ "value": r.value, "parts": null, "iterations": r.iterations }))?;
    Ok(ExitCode::SUCCESS)
}

fn parse_ladder(text: &str, step: u32) -> Result<Vec<usize>, LabError> {
    let bad = || LabError::Config(format!("bad ladder `{text}`"));
    if let Some((a, b)) = text.split_once("..") {
        let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if a > b || b > 40 || step == 0 {
            return Err(bad());
        }
        let mut out: Vec<usize> = (a..=b).step_by(step as usize).map(|k| 1usize << k).collect();
        if out.last() != Some(&(1usize << b)) {
            out.push(1usize << b);
        }
        Ok(out)
    } else {
        text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
    }
}

fn classify_cmd(args: ClassifyArgs) -> Result<ExitCode, LabError> {
    let p = exponent(args.p)?;
    let ladder = parse_ladder(&args.ladder, args.ladder_step)?;
    let descriptor = |s: &str| {
        weight_descriptor(&GeneratorSpec::parse(s, Some(args.p))?)?.ok_or(LabError::MissingDescriptor)
    };
    let (w, omega) = (descriptor(&args.w)?, descriptor(&args.omega)?);
    let c = classify_descriptors(&w, &omega, p, &ladder, &DivergenceRule::default())?;
    print_json(&json!({
        "p": args.p,
        "w": args.w,
        "omega": args.omega,
        "w_descriptor": w,
        "omega_descriptor": omega,
        "rule": DivergenceRule::default(),
        "relation": c.relation,
        "classification": c,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn analytic_fn(text: &str, p: f64, n: usize) -> Result<AnalyticFunction, LabError> {
    if let Some(rest) = text.strip_prefix("outer:") {
        let spec = GeneratorSpec::parse(rest, Some(p))?;
        let d = weight_descriptor(&spec)?;
        let singular = d.as_ref().is_some_and(|d| d.is_singular());
        let measure = Arc::new(if singular {
            DiscreteMeasure::midpoint_grid(n)?
        } else {
            DiscreteMeasure::lebesgue_grid(n)?
        });
        let logs: Vec<f64> = match d {
            Some(d) => measure.angles().expect("circle grid").iter().map(|&t| d.ln_at(t)).collect(),
            None => generate_function(&spec, measure.clone(), 0)?.moduli().iter().map(|m| m.ln()).collect(),
        };
        return Ok(AnalyticFunction::Outer(OuterFunction::new(measure, logs)?));
    }
    let spec = GeneratorSpec::parse(text, Some(p))?;
    match spec.name.as_str() {
        "poly" | "poly-boundary" => Ok(AnalyticFunction::real_polynomial(&spec.values())),
        other => Err(LabError::UnknownGenerator(other.to_string())),
    }
}

fn privalov_cmd(args: PrivalovArgs) -> Result<ExitCode, LabError> {
    let p = exponent(args.p)?;
    let f = analytic_fn(&args.function, args.p, args.grid_size)?;
    let grid = DiscreteMeasure::lebesgue_grid(args.grid_size)?;
    let profile = privalov_profile(&f, p, &args.radii, &grid)?;
    print_json(&json!({ "p": args.p, "fn": args.function, "grid_size": args.grid_size, "profile": profile }))?;
    Ok(ExitCode::SUCCESS)
}

fn poly_cmd(args: PolyArgs) -> Result<ExitCode, LabError> {
    let p = exponent(args.p)?;
    let opts = PolyInfimumOptions {
        degree: args.degree,
        restarts: args.restarts,
        seed: args.seed,
        ..PolyInfimumOptions::default()
    };
    let (grid, log_ratio) = match &args.ratio {
        None => (DiscreteMeasure::lebesgue_grid(args.grid_size)?, None),
        Some(spec) => {
            let d = weight_descriptor(&GeneratorSpec::parse(spec, Some(args.p))?)?.ok_or(LabError::MissingDescriptor)?;
            let grid = DiscreteMeasure::midpoint_grid(args.grid_size)?;
            let logs: Vec<f64> = grid.angles().expect("circle grid").iter().map(|&t| d.ln_at(t)).collect();
            (grid, Some(logs))
        }
    };
    let r = poly_modular_infimum(p, &grid, log_ratio.as_deref(), None, &opts)?;
    print_json(&json!({
        "p": args.p,
        "grid_size": args.grid_size,
        "ratio": args.ratio,
        "floor": if args.ratio.is_none() { Some(p.pow(std::f64::consts::LN_2)) } else { None },
        "options": opts,
        "result": r,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn generate_cmd(args: GenerateArgs) -> Result<ExitCode, LabError> {
    let spec = GeneratorSpec::parse(&args.spec, args.p)?;
    let measure = Arc::new(DiscreteMeasure::lebesgue_grid(args.grid_size)?);
    let f = generate_function(&spec, measure, args.seed)?;
    match &args.out {
        Some(path) => write_function(File::create(path)?, &f)?,
        None => write_function(io::stdout().lock(), &f)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let command = Cli::command().mut_subcommand("experiment", |c| c.after_help(tolerance_help()));
    let cli = match Cli::from_arg_matches(&command.get_matches()) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let result = match cli.command {
        Command::Experiment(a) => experiment(a),
        Command::Metric(a) => metric_cmd(a),
        Command::Fnorm(a) => fnorm_cmd(a),
        Command::ClassifyWeights(a) => classify_cmd(a),
        Command::Privalov(a) => privalov_cmd(a),
        Command::PolyInfimum(a) => poly_cmd(a),
        Command::Generate(a) => generate_cmd(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
