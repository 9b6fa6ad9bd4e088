use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use spin7_cli::commands::{self, Direction, Mode, WeilArgs};
use spin7_cli::corpus::{corpus, float_agreement, run_all, Record};
use spin7_cli::twoform::parse_two_zero;
use spin7_core::json::{form_from_json, parse_gaussian, parse_rational};
use spin7_core::{Error, Form, Result, Scalar};

#[derive(Parser, Debug)]
#[command(name = "spin7", version, about = "Exact exterior calculus on R^8 with Spin(7) and SU(4) structures")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Print JSON instead of text (only `verify` has a text form).
    #[arg(long, global = true)]
    json: bool,
    /// Exact arithmetic only; a step that needs floats is an error.
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Floating-point arithmetic throughout.
    #[arg(long, global = true)]
    float: bool,
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Number of random samples, where a command samples.
    #[arg(long, global = true, default_value_t = 0)]
    samples: usize,
    /// Input Form JSON file; stdin when absent.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
}

impl Global {
    fn mode(&self) -> Mode {
        match (self.exact, self.float) {
            (true, _) => Mode::Exact,
            (_, true) => Mode::Float,
            _ => Mode::Default,
        }
    }
}

#[derive(Args, Debug)]
struct DirectionArgs {
    /// A (2,0)-form such as "dz12+dz34".
    #[arg(long, conflicts_with = "gamma", required_unless_present = "gamma")]
    c: Option<String>,
    /// Basis element gamma_j of A+, j in 1..=6.
    #[arg(long)]
    gamma: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the identity corpus.
    Verify,
    /// Split a 2- or 4-form into its Spin(7) and SU(4) pieces.
    Decompose,
    /// Rotate the SU(4) structure in a direction of A+.
    Rotate {
        #[command(flatten)]
        direction: DirectionArgs,
        /// Form JSON file for a class to report on.
        #[arg(long)]
        beta: Option<PathBuf>,
    },
    /// Rotation residual of a class; the class comes from --beta, --in or stdin.
    Residual {
        #[command(flatten)]
        direction: DirectionArgs,
        #[arg(long)]
        beta: Option<PathBuf>,
    },
    /// Bogomolov verdict for a 4-form class.
    Bogomolov,
    /// Rotate a Weil-type abelian fourfold and report the pipeline.
    WeilRotate {
        #[arg(long)]
        d: u64,
        /// Gaussian rational such as "1/3+1/5i".
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
}

fn read_json(path: Option<&Path>) -> Result<Value> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Schema {
            field: "$".into(),
            message: format!("cannot read {}: {e}", p.display()),
        })?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Schema {
                field: "$".into(),
                message: format!("cannot read stdin: {e}"),
            })?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::Schema {
        field: "$".into(),
        message: format!("invalid JSON: {e}"),
    })
}

fn read_form(path: Option<&Path>) -> Result<(Form<Scalar>, usize)> {
    form_from_json(&read_json(path)?)
}

fn read_four_form(path: Option<&Path>) -> Result<Form<Scalar>> {
    let (form, degree) = read_form(path)?;
    if degree != 4 {
        return Err(Error::Schema {
            field: "degree".into(),
            message: format!("expected 4, got {degree}"),
        });
    }
    Ok(form)
}

fn direction(args: &DirectionArgs) -> Result<Direction> {
    match (&args.c, args.gamma) {
        (Some(c), _) => Ok(Direction::C(parse_two_zero(c)?)),
        (None, Some(j)) => Ok(Direction::Gamma(j)),
        (None, None) => Err(Error::Schema {
            field: "c".into(),
            message: "one of --c or --gamma is required".into(),
        }),
    }
}

fn weil_args(d: u64, a: &str, y: &str, g: &Global) -> Result<WeilArgs> {
    let a = parse_gaussian(a).ok_or_else(|| Error::Schema {
        field: "a".into(),
        message: format!("expected a Gaussian rational such as \"1/3+1/5i\", got {a:?}"),
    })?;
    let y = parse_rational(y).ok_or_else(|| Error::Schema {
        field: "y".into(),
        message: format!("expected a rational such as \"1/2\", got {y:?}"),
    })?;
    Ok(WeilArgs {
        d,
        a,
        y,
        samples: g.samples,
        seed: g.seed,
    })
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn emit_json(v: &Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("serialisable")));
}

fn text_report(records: &[Record]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&format!(
            "{} {:<32} expected {} got {} (residual {:.3e})\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.expected,
            r.got,
            r.residual
        ));
    }
    let passed = records.iter().filter(|r| r.pass).count();
    out.push_str(&format!("{passed}/{} entries pass\n", records.len()));
    out
}

fn verify(g: &Global) -> ExitCode {
    let records = run_all(&corpus());
    let (floats_agree, worst) = float_agreement(&records);
    let all = records.iter().all(|r| r.pass) && floats_agree;
    if g.json {
        let report = serde_json::json!({
            "pass": all,
            "float_agreement": { "pass": floats_agree, "worst_relative": format!("{worst:.16e}") },
            "entries": records.iter().map(Record::to_json).collect::<Vec<_>>(),
        });
        emit_json(&report);
    } else {
        emit(&text_report(&records));
        emit(&format!("float/exact agreement: worst relative gap {worst:.3e}\n"));
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: &Cli) -> Result<Value> {
    let g = &cli.global;
    let mode = g.mode();
    let input = g.input.as_deref();
    match &cli.command {
        Command::Verify => unreachable!("handled by main"),
        Command::Decompose => {
            let (form, degree) = read_form(input)?;
            commands::decompose(&form, degree, mode)
        }
        Command::Rotate { direction: d, beta } => {
            let dir = direction(d)?;
            let beta = beta.as_deref().map(|p| read_four_form(Some(p))).transpose()?;
            commands::rotate_cmd(&dir, beta.as_ref(), mode)
        }
        Command::Residual { direction: d, beta } => {
            let dir = direction(d)?;
            let beta = read_four_form(beta.as_deref().or(input))?;
            commands::residual_cmd(&dir, &beta, mode)
        }
        Command::Bogomolov => {
            let beta = read_four_form(input)?;
            commands::bogomolov_cmd(&beta, mode, g.samples, g.seed)
        }
        Command::WeilRotate { d, a, y } => commands::weil_rotate_cmd(&weil_args(*d, a, y, g)?, mode),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SPIN7_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if matches!(cli.command, Command::Verify) {
        return verify(&cli.global);
    }
    match run(&cli) {
        Ok(v) => {
            emit_json(&v);
            ExitCode::SUCCESS
        }
        Err(e) => {
            log::debug!("command failed: {e:?}");
            emit_json(&commands::error_json(&e));
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}
