//! `fprkit`: false positive risk for an observed two-sample t-test p-value.

mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fprkit_core::fpr::{Alternative, Approach, Sweep};
use fprkit_core::report::{
    self, CurveRequest, InterpretRequest, PriorNeededRequest, SimulateRequest,
};
use fprkit_core::Error;

#[derive(Parser)]
#[command(name = "fprkit", version, about = "False positive risk for two-sample t-test p-values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Likelihood ratios, FPR50, FPR at a prior, prior needed and calibration for one p-value.
    Interpret(InterpretArgs),
    /// Prior probability of a real effect needed to reach a target false positive risk.
    PriorNeeded(PriorNeededArgs),
    /// Evidence measures over a grid of priors, p-values or sample sizes.
    Curve(CurveArgs),
    /// Seeded Monte-Carlo replication of t-tests, compared with the analytic values.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct DesignArgs {
    /// Sample size per group.
    #[arg(long, default_value_t = 16, allow_negative_numbers = true)]
    n: u64,
    /// True effect size under H1, in standard deviations.
    #[arg(long = "effect-size", default_value_t = 1.0, allow_negative_numbers = true)]
    effect_size: f64,
    /// Significance threshold used for power.
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    alpha: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ApproachArg {
    #[value(alias = "p_equals")]
    PEquals,
    #[value(alias = "p_less_than")]
    PLessThan,
}

impl From<ApproachArg> for Approach {
    fn from(a: ApproachArg) -> Self {
        match a {
            ApproachArg::PEquals => Approach::PEquals,
            ApproachArg::PLessThan => Approach::PLessThan,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlternativeArg {
    #[value(alias = "fixed_effect")]
    FixedEffect,
    #[value(alias = "ml_alternative")]
    MlAlternative,
}

impl From<AlternativeArg> for Alternative {
    fn from(a: AlternativeArg) -> Self {
        match a {
            AlternativeArg::FixedEffect => Alternative::FixedEffect,
            AlternativeArg::MlAlternative => Alternative::MlAlternative,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    Prior,
    P,
    N,
}

impl From<SweepArg> for Sweep {
    fn from(s: SweepArg) -> Self {
        match s {
            SweepArg::Prior => Sweep::Prior,
            SweepArg::P => Sweep::P,
            SweepArg::N => Sweep::N,
        }
    }
}

#[derive(Args)]
struct InterpretArgs {
    /// Observed two-sided p-value.
    #[arg(long, allow_negative_numbers = true)]
    p: f64,
    #[command(flatten)]
    design: DesignArgs,
    /// Prior probability of a real effect.
    #[arg(long, allow_negative_numbers = true)]
    prior: Option<f64>,
    /// Reading used for the headline values.
    #[arg(long, value_enum, default_value = "p-equals")]
    approach: ApproachArg,
    /// Target false positive risk for the prior-needed value.
    #[arg(long = "target-fpr", default_value_t = report::DEFAULT_TARGET_FPR, allow_negative_numbers = true)]
    target_fpr: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct PriorNeededArgs {
    /// Observed two-sided p-value.
    #[arg(long, allow_negative_numbers = true)]
    p: f64,
    /// Target false positive risk.
    #[arg(long = "target-fpr", default_value_t = report::DEFAULT_TARGET_FPR, allow_negative_numbers = true)]
    target_fpr: f64,
    #[command(flatten)]
    design: DesignArgs,
    #[arg(long, value_enum, default_value = "p-equals")]
    approach: ApproachArg,
    #[arg(long, value_enum, default_value = "fixed-effect")]
    alternative: AlternativeArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct CurveArgs {
    /// Input to vary.
    #[arg(long, value_enum)]
    sweep: SweepArg,
    /// `start:stop:steps` or a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    /// p-value held fixed when not swept.
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    p: f64,
    /// Prior held fixed when not swept.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    prior: f64,
    #[command(flatten)]
    design: DesignArgs,
    #[arg(long, value_enum, default_value = "fixed-effect")]
    alternative: AlternativeArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    design: DesignArgs,
    /// Fraction of simulated experiments with a real effect.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    prior: f64,
    #[arg(long = "n-experiments", default_value_t = 100_000, allow_negative_numbers = true)]
    n_experiments: u64,
    /// Observed p; the default window is [p - 0.005, p].
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    p: f64,
    /// Explicit p window as `lo,hi`.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(f64, f64)>,
    /// Random seed; generated and echoed when omitted.
    #[arg(long, allow_negative_numbers = true)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let grid = report::parse_grid(s)?;
    match grid[..] {
        [lo, hi] => Ok((lo, hi)),
        _ => Err("expected lo,hi".into()),
    }
}

/// Flag that sets each request field.
fn flag_for(field: &str) -> &str {
    match field {
        "p" => "--p",
        "n_per_group" => "--n",
        "effect_size_sd" => "--effect-size",
        "alpha" => "--alpha",
        "prior_h1" => "--prior",
        "target_fpr" => "--target-fpr",
        "n_experiments" => "--n-experiments",
        "p_window" => "--window",
        "grid" => "--grid",
        "seed" => "--seed",
        "alternative" => "--alternative",
        other => other,
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.field() {
            Some(field) => Failure::Usage(format!("invalid value for {}: {e}", flag_for(field))),
            None => Failure::Domain(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("FPRKIT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("invalid value for FPRKIT_THREADS: '{raw}' (expected an integer >= 1)"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Interpret(a) => {
            let req = InterpretRequest {
                p: a.p,
                n_per_group: a.design.n,
                effect_size_sd: a.design.effect_size,
                prior_h1: a.prior,
                alpha: a.design.alpha,
                approach: a.approach.into(),
                target_fpr: a.target_fpr,
            };
            let env = report::interpret(&req)?;
            emit(a.format, &env, render::interpret_text, "interpret")
        }
        Command::PriorNeeded(a) => {
            let req = PriorNeededRequest {
                p: a.p,
                target_fpr: a.target_fpr,
                n_per_group: a.design.n,
                effect_size_sd: a.design.effect_size,
                alpha: a.design.alpha,
                approach: a.approach.into(),
                alternative: a.alternative.into(),
            };
            let env = report::prior_needed(&req)?;
            emit(a.format, &env, render::prior_needed_text, "prior-needed")
        }
        Command::Curve(a) => {
            let grid = report::parse_grid(&a.grid)
                .map_err(|e| Failure::Usage(format!("invalid value for --grid: {e}")))?;
            let req = CurveRequest {
                sweep: a.sweep.into(),
                grid,
                p: a.p,
                prior_h1: a.prior,
                n_per_group: a.design.n,
                effect_size_sd: a.design.effect_size,
                alpha: a.design.alpha,
                alternative: a.alternative.into(),
            };
            let env = report::curve_report(&req)?;
            match a.format {
                Format::Csv => {
                    for w in &env.warnings {
                        eprintln!("warning: {w}");
                    }
                    Ok(render::curve_csv(&env.results.rows))
                }
                f => emit(f, &env, render::curve_text, "curve"),
            }
        }
        Command::Simulate(a) => {
            let generated = a.seed.is_none();
            let seed = a.seed.unwrap_or_else(random_seed);
            let req = SimulateRequest {
                n_per_group: a.design.n,
                effect_size_sd: a.design.effect_size,
                alpha: a.design.alpha,
                prior_h1: a.prior,
                n_experiments: a.n_experiments,
                p: a.p,
                p_window: a.window,
                seed: Some(seed),
            };
            let mut env = report::simulate_report(&req)?;
            if generated {
                env.warnings
                    .push(format!("no --seed given; generated seed {seed} (pass it to reproduce this run)"));
            }
            emit(a.format, &env, render::simulate_text, "simulate")
        }
    }
}

fn random_seed() -> u64 {
    use std::hash::{BuildHasher, Hasher};
    let mut h = std::collections::hash_map::RandomState::new().build_hasher();
    h.write_u128(
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or_default(),
    );
    h.finish()
}

fn emit<T: serde::Serialize>(
    format: Format,
    env: &T,
    text: fn(&T) -> String,
    command: &str,
) -> Result<String, Failure> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(env).expect("envelope serializes");
            s.push('\n');
            Ok(s)
        }
        Format::Text => Ok(text(env)),
        Format::Csv => Err(Failure::Usage(format!(
            "invalid value for --format: csv is only available for curve, not {command}"
        ))),
    }
}
