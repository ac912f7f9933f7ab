//! The `conrad` command line.
//!
//! ```text
//! conrad <radius|poly|verify|sharpness|identities|sweep> [--class K] [--A x] [--a x]
//!        [--alpha x] [--lambda x] [--p x] [--samples n] [--seed n] [--degree n]
//!        [--grid-r n] [--grid-theta n] [--margin x] [--eps x]
//!        [--param NAME --from x --to x --steps n --out PATH] [--json]
//! ```
//!
//! Exit status is 0 on success, 1 when a verification fails or output cannot
//! be written, 2 on usage errors.

pub mod sweep;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use conrad_core::{
    identity_checks, polynomial_for, radius_for, sample_verify, sharpness_check, ClassKind,
    ClassSpec, Error, Extremal, GridSpec, Param, Params,
};
use serde::Serialize;

pub use sweep::{emit_sweep, SweepConfig};

pub const SEED_ENV: &str = "CONRAD_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Radius,
    Poly,
    Verify,
    Sharpness,
    Identities,
    Sweep,
}

#[derive(Debug, Parser)]
#[command(
    name = "conrad",
    version,
    about = "Radii of concavity for classes of univalent functions",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long, value_name = "K")]
    pub class: Option<String>,
    #[arg(long = "A", value_name = "x")]
    pub aperture: Option<f64>,
    #[arg(long = "a", value_name = "x")]
    pub a: Option<f64>,
    #[arg(long, value_name = "x")]
    pub alpha: Option<f64>,
    #[arg(long, value_name = "x")]
    pub lambda: Option<f64>,
    #[arg(long = "p", value_name = "x")]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Falls back to $CONRAD_SEED, then 1.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    #[arg(long = "grid-r", default_value_t = 16)]
    pub grid_r: usize,
    #[arg(long = "grid-theta", default_value_t = 256)]
    pub grid_theta: usize,
    #[arg(long, default_value_t = 0.999)]
    pub margin: f64,
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    #[arg(long, value_name = "NAME")]
    pub param: Option<String>,
    #[arg(long, value_name = "x")]
    pub from: Option<f64>,
    #[arg(long, value_name = "x")]
    pub to: Option<f64>,
    #[arg(long, value_name = "n")]
    pub steps: Option<usize>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

/// Result of one invocation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: String) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: message,
        }
    }

    fn failure(message: String) -> Self {
        Outcome {
            code: EXIT_FAILURE,
            stdout: String::new(),
            stderr: message,
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.parameter_name() {
            Some(name) => Failure::Usage(format!("error: --{name}: {e}\n")),
            None => Failure::Runtime(format!("error: {e}\n")),
        }
    }
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("error: {flag}: {msg}\n"))
}

/// Parses `argv` (program name first) and runs the command.
///
/// `env_seed` is the value of `$CONRAD_SEED`, used when `--seed` is absent.
pub fn run_command<I, S>(argv: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::usage(text)
            };
        }
    };
    match dispatch(&cli, env_seed) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => Outcome::usage(msg),
        Err(Failure::Runtime(msg)) => Outcome::failure(msg),
    }
}

fn params(cli: &Cli) -> Params {
    Params {
        aperture: cli.aperture,
        a: cli.a,
        alpha: cli.alpha,
        lambda: cli.lambda,
        p: cli.p,
    }
}

fn class_kind(cli: &Cli) -> Result<ClassKind, Failure> {
    let name = cli
        .class
        .as_deref()
        .ok_or_else(|| usage("--class", "required for this command"))?;
    name.parse::<ClassKind>().map_err(|_| {
        let known: Vec<_> = ClassKind::ALL.iter().map(|k| k.name()).collect();
        usage(
            "--class",
            format!(
                "unknown class `{name}` (expected one of {})",
                known.join(", ")
            ),
        )
    })
}

fn class_spec(cli: &Cli) -> Result<ClassSpec, Failure> {
    Ok(ClassSpec::from_params(class_kind(cli)?, params(cli))?)
}

fn seed(cli: &Cli, env_seed: Option<&str>) -> Result<u64, Failure> {
    match (cli.seed, env_seed) {
        (Some(s), _) => Ok(s),
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| usage(SEED_ENV, format!("`{v}` is not an unsigned integer"))),
        (None, None) => Ok(1),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli, env_seed: Option<&str>) -> Result<(i32, String), Failure> {
    match cli.command {
        Command::Radius => radius(cli),
        Command::Poly => poly(cli),
        Command::Verify => verify(cli, env_seed),
        Command::Sharpness => sharpness(cli),
        Command::Identities => identities(cli),
        Command::Sweep => run_sweep(cli),
    }
}

fn radius(cli: &Cli) -> Result<(i32, String), Failure> {
    let spec = class_spec(cli)?;
    let result = radius_for(&spec)?;
    if cli.json {
        return Ok((EXIT_OK, to_json(&result)));
    }
    let mut out = String::new();
    let _ = writeln!(out, "class:  {spec}");
    let _ = writeln!(out, "value:  {:.12}", result.value);
    let _ = writeln!(out, "method: {}", result.method.name());
    if let Some(r1) = result.r1 {
        let _ = writeln!(out, "r1:     {r1:.12}");
    }
    if let Some(r2) = result.r2 {
        let _ = writeln!(out, "r2:     {r2:.12}");
    }
    if let Some((lo, hi)) = result.bracket {
        let _ = writeln!(out, "bracket: ({lo}, {hi})");
    }
    Ok((EXIT_OK, out))
}

#[derive(Serialize)]
struct PolyReport {
    class_spec: ClassSpec,
    coeffs: Vec<f64>,
    bracket: (f64, f64),
    value_at_lo: f64,
    value_at_hi: f64,
}

fn poly(cli: &Cli) -> Result<(i32, String), Failure> {
    let spec = class_spec(cli)?;
    let poly = polynomial_for(&spec)?;
    let (lo, hi) =
        conrad_core::radii::bracket_for(&spec).expect("polynomial classes have a bracket");
    let report = PolyReport {
        class_spec: spec,
        value_at_lo: poly.eval(lo),
        value_at_hi: poly.eval(hi),
        coeffs: poly.coeffs,
        bracket: (lo, hi),
    };
    if cli.json {
        return Ok((EXIT_OK, to_json(&report)));
    }
    let mut out = String::new();
    let _ = writeln!(out, "class: {spec}");
    for (k, c) in report.coeffs.iter().enumerate().rev() {
        let _ = writeln!(out, "  r^{k}: {c:+.12e}");
    }
    let _ = writeln!(out, "value at {lo}: {:+.12e}", report.value_at_lo);
    let _ = writeln!(out, "value at {hi}: {:+.12e}", report.value_at_hi);
    Ok((EXIT_OK, out))
}

fn verify(cli: &Cli, env_seed: Option<&str>) -> Result<(i32, String), Failure> {
    let spec = class_spec(cli)?;
    let seed = seed(cli, env_seed)?;
    let grid = GridSpec {
        n_radial: cli.grid_r,
        n_angular: cli.grid_theta,
        margin_factor: cli.margin,
    };
    let report = sample_verify(&spec, cli.samples, seed, &grid, cli.degree)?;
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    if cli.json {
        return Ok((code, to_json(&report)));
    }
    let mut out = String::new();
    let _ = writeln!(out, "class:        {spec}");
    let _ = writeln!(
        out,
        "samples:      {} (seed {seed}, degree {})",
        report.samples, report.degree
    );
    let _ = writeln!(
        out,
        "grid:         {} x {} at r <= {:.12}",
        grid.n_radial, grid.n_angular, report.radius_used
    );
    let _ = writeln!(out, "failures:     {}", report.failures);
    let _ = writeln!(out, "worst margin: {:.6e}", report.worst_margin);
    let _ = writeln!(
        out,
        "witness:      seed {} at z = {:.6}{:+.6}i",
        report.witness.seed, report.witness.z.re, report.witness.z.im
    );
    let _ = writeln!(out, "{}", if report.passed() { "PASS" } else { "FAIL" });
    Ok((code, out))
}

fn sharpness(cli: &Cli) -> Result<(i32, String), Failure> {
    let spec = class_spec(cli)?;
    let kind = Extremal::try_from(spec.kind()).map_err(|_| {
        usage(
            "--class",
            format!("sharpness needs pprime or lif, got {}", spec.kind()),
        )
    })?;
    let alpha = spec.get(Param::Alpha).unwrap_or(1.0);
    let report = sharpness_check(kind, spec.aperture(), alpha, cli.eps)?;
    let code = if report.passed { EXIT_OK } else { EXIT_FAILURE };
    if cli.json {
        return Ok((code, to_json(&report)));
    }
    let mut out = String::new();
    let _ = writeln!(out, "class:   {spec}");
    let _ = writeln!(out, "radius:  {:.12}", report.radius);
    let _ = writeln!(out, "Re T(-(R+eps)) = {:+.6e}", report.outside);
    let _ = writeln!(out, "Re T(-(R-eps)) = {:+.6e}", report.inside);
    let _ = writeln!(out, "{}", if report.passed { "PASS" } else { "FAIL" });
    Ok((code, out))
}

fn identities(cli: &Cli) -> Result<(i32, String), Failure> {
    if cli.class.is_some() {
        return Err(usage("--class", "identities takes no class"));
    }
    let checks = identity_checks();
    let code = if checks.iter().all(|c| c.passed) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    if cli.json {
        return Ok((code, to_json(&checks)));
    }
    let mut out = String::new();
    for c in &checks {
        let _ = writeln!(
            out,
            "{} {:<24} max error {:.3e} (tol {:.0e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.max_error,
            c.tolerance
        );
    }
    Ok((code, out))
}

fn run_sweep(cli: &Cli) -> Result<(i32, String), Failure> {
    let kind = class_kind(cli)?;
    let name = cli
        .param
        .as_deref()
        .ok_or_else(|| usage("--param", "required for sweep"))?;
    let param: Param = name
        .parse()
        .map_err(|_| usage("--param", format!("unknown parameter `{name}`")))?;
    if !kind.params().contains(&param) {
        return Err(usage(
            "--param",
            format!("class {kind} has no parameter {param}"),
        ));
    }
    let config = SweepConfig {
        kind,
        template: params(cli),
        param,
        from: cli
            .from
            .ok_or_else(|| usage("--from", "required for sweep"))?,
        to: cli.to.ok_or_else(|| usage("--to", "required for sweep"))?,
        steps: cli
            .steps
            .ok_or_else(|| usage("--steps", "required for sweep"))?,
        output_path: cli
            .out
            .clone()
            .ok_or_else(|| usage("--out", "required for sweep"))?,
    };
    // every step is validated before anything is written
    config.specs()?;
    let rows = emit_sweep(&config).map_err(|e| match e {
        sweep::SweepError::Radius(e) => Failure::from(e),
        sweep::SweepError::Io(_) => Failure::Runtime(format!("error: {e}\n")),
    })?;
    let path = config.output_path.display();
    if cli.json {
        return Ok((
            EXIT_OK,
            to_json(&serde_json::json!({ "rows": rows, "out": path.to_string() })),
        ));
    }
    Ok((EXIT_OK, format!("wrote {rows} rows to {path}\n")))
}
