mod expr;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use slicereg::boundary::spherical_jet;
use slicereg::corpus::example_rows;
use slicereg::verify::{run_suite, SampleConfig, SuiteInput, SUITES};
use slicereg::{Quaternion, SliceFunction};

use expr::{parse, Expr};

#[derive(Parser)]
#[command(
    name = "slicereg",
    version,
    about = "Boundary behaviour of slice regular functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the worked example values and compare them to closed forms.
    Examples {
        #[arg(long, default_value_t = 128)]
        truncation: usize,
    },
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
    /// Evaluate a function and its slice derivative at a point.
    Eval(EvalArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    suite: String,
    /// Function to verify; the suite's built-in families when absent.
    #[arg(long = "fn", value_name = "EXPR")]
    function: Option<String>,
    /// Orisphere parameter for the julia suite.
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    functions: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 128)]
    truncation: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol_eq: f64,
    /// Also write the report as JSON.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "fn", value_name = "EXPR")]
    function: String,
    /// Point as four comma-separated reals.
    #[arg(long, value_name = "A,B,C,D", allow_hyphen_values = true)]
    at: String,
    /// Also print the spherical jet `A0, A1, A2` at the point.
    #[arg(long)]
    jet: bool,
    /// Write the coefficient list of the series as JSON.
    #[arg(long, value_name = "FILE")]
    dump_coeffs: Option<PathBuf>,
    #[arg(long, default_value_t = 128)]
    truncation: usize,
}

/// Exit status 1 is kept for reports with violated margins.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Examples { truncation } => examples(truncation),
        Command::Verify(args) => verify(args),
        Command::Eval(args) => eval(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Compact form that drops zero parts, e.g. `5/3 + 4/3 k` prints as
/// `1.66... + 1.33...k`.
fn fmt_quat(q: Quaternion) -> String {
    let parts = [q.x0, q.x1, q.x2, q.x3];
    let noise = 1e-15 * q.norm().max(1.0);
    let mut out = String::new();
    for (x, unit) in parts.into_iter().zip(["", "i", "j", "k"]) {
        if x.abs() <= noise {
            continue;
        }
        let body = if !unit.is_empty() && x.abs() == 1.0 {
            unit.to_string()
        } else {
            format!("{}{unit}", x.abs())
        };
        out.push_str(match (out.is_empty(), x < 0.0) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        });
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn examples(truncation: usize) -> Result<bool, Failure> {
    let rows = example_rows(truncation)?;
    let width = rows.iter().map(|r| r.label.len()).max().unwrap_or(0);
    let mut all = true;
    for r in &rows {
        let status = if r.pass() { "PASS" } else { "FAIL" };
        all &= r.pass();
        if !r.pass() {
            eprintln!("mismatch in {}: deviation {:e}", r.label, r.deviation());
        }
        println!(
            "{:<width$}  computed {}  expected {}  {status}",
            format!("{}:", r.label),
            fmt_quat(r.computed),
            r.expected_text,
            width = width + 1
        );
    }
    Ok(all)
}

fn verify(args: VerifyArgs) -> Result<bool, Failure> {
    let defaults = SampleConfig::default();
    let cfg = SampleConfig {
        seed: args.seed,
        count: args.samples.unwrap_or(defaults.count),
        functions: args.functions.unwrap_or(defaults.functions),
        truncation: args.truncation,
        tol_eq: args.tol_eq,
        ..defaults
    };
    let mut input = SuiteInput::default();
    if let Some(src) = &args.function {
        let e = parse(src)?;
        if matches!(args.suite.as_str(), "halfspace" | "rigidity") {
            input.halfspace = Some(e.to_halfspace(cfg.truncation)?);
        } else {
            input.ball = Some(e.to_series(cfg.truncation)?);
        }
    }
    input.k = args.k;
    let report = run_suite(&args.suite, &input, &cfg)?;
    print!("{}", report.to_text());
    if let Some(path) = &args.out {
        std::fs::write(path, report.to_json())
            .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    Ok(report.pass)
}

fn parse_point(text: &str) -> Result<Quaternion, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Failure(format!(
            "--at needs four comma-separated reals, got `{text}`"
        )));
    }
    let mut x = [0.0; 4];
    for (slot, p) in x.iter_mut().zip(&parts) {
        *slot = p
            .parse()
            .map_err(|_| Failure(format!("--at: `{p}` is not a real number")))?;
    }
    Ok(Quaternion::from(x))
}

fn eval(args: EvalArgs) -> Result<bool, Failure> {
    let e: Expr = parse(&args.function)?;
    let q = parse_point(&args.at)?;
    if e.uses_cayley() {
        if args.jet || args.dump_coeffs.is_some() {
            return Err(Failure(
                "--jet and --dump-coeffs need a power series at 0, not a half-space map".into(),
            ));
        }
        let f = e.to_halfspace(args.truncation)?;
        println!("f(q) = {}", fmt_quat(f.eval(q)));
        println!("f'(q) = {}", fmt_quat(f.derivative_at(q)));
        return Ok(true);
    }
    let f = e.to_series(args.truncation)?;
    println!("f(q) = {}", fmt_quat(f.eval(q)));
    println!("f'(q) = {}", fmt_quat(f.eval_derivative(q)));
    if args.jet {
        let jet = spherical_jet(&f, q, 2)?;
        let shown: Vec<String> = jet.a.iter().map(|a| fmt_quat(*a)).collect();
        println!("A = [{}]", shown.join(", "));
    }
    if let Some(path) = &args.dump_coeffs {
        std::fs::write(path, f.to_json())
            .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    Ok(true)
}
