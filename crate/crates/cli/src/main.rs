//! `puiseux`: Newton polygons, initial forms, roots and Weierstraß
//! preparation for polynomials over generalised Puiseux series.

mod report;
mod svg;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use puiseux::coeffs::{Mode, DEFAULT_MAX_PRECISION};
use puiseux::error::Error;
use puiseux::exponents::Exponent;
use puiseux::polynomial::{PolyOverK, DEFAULT_VAL_CAP};
use puiseux::syntax::{elaborate_with_cap, parse, parse_exponent, parse_exponent_list, parse_series, Elaborated};
use serde_json::{json, Value};

use report::Report;

#[derive(Parser)]
#[command(name = "puiseux", version, about = "Polynomials over generalised Puiseux series")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Coefficient arithmetic.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact, global = true)]
    mode: ModeArg,
    /// Working precision in bits for float mode and numeric root finding.
    #[arg(long, env = "PUISEUX_PRECISION", default_value_t = 128, global = true)]
    precision: u32,
    /// Give up on a valuation when no term shows up to this exponent.
    #[arg(long, value_name = "EXPR", global = true)]
    val_cap: Option<String>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also draw the Newton polygon to this SVG file.
    #[arg(long, value_name = "PATH", global = true)]
    svg: Option<PathBuf>,
    /// Report valuations with the opposite sign (`val t = -1`).
    #[arg(long, global = true)]
    max_convention: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Args)]
struct Input {
    /// The polynomial; read from standard input when absent.
    poly: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// t-support, lower hull vertices and faces.
    Polygon(Input),
    /// The t-initial form for a weight.
    InitialForm {
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        omega: String,
        #[command(flatten)]
        input: Input,
    },
    /// The least value of `val f_i + ω·i`.
    Ord {
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        omega: String,
        #[command(flatten)]
        input: Input,
    },
    /// All roots, expanded to t-order `--order`.
    Solve {
        #[arg(long, value_name = "EXPR", default_value = "3", allow_hyphen_values = true)]
        order: String,
        #[command(flatten)]
        input: Input,
    },
    /// Weierstraß preparation `F = U·P` up to t-order `--order`.
    Prepare {
        #[arg(long, value_name = "EXPR", default_value = "5")]
        order: String,
        #[command(flatten)]
        input: Input,
    },
    /// Tropical roots, or the initial form of a polynomial in x1..xn at the
    /// weights given by `--omega w1,...,wn`.
    Tropicalize {
        #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
        omega: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// The value of the polynomial at a series, to t-order `--order`.
    Eval {
        #[arg(long, value_name = "SERIES", allow_hyphen_values = true)]
        at: String,
        #[arg(long, value_name = "EXPR", default_value = "5", allow_hyphen_values = true)]
        order: String,
        #[command(flatten)]
        input: Input,
    },
}

/// Exit codes.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::PrecisionExhausted { .. } | Error::NumericallyZeroDivisor => 4,
        Error::UndeterminedValuation { .. } => 5,
        _ => 3,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::PrecisionExhausted { .. } | Error::NumericallyZeroDivisor => "precision",
        Error::UndeterminedValuation { .. } => "undetermined",
        _ => "semantic",
    }
}

pub struct Context {
    mode: Mode,
    precision: u32,
    cap: Exponent,
    max_convention: bool,
}

impl Context {
    pub fn solver_config(&self) -> puiseux::solver::SolverConfig {
        puiseux::solver::SolverConfig {
            mode: self.mode,
            precision: self.precision,
            max_precision: DEFAULT_MAX_PRECISION.max(self.precision),
            val_cap: Some(self.cap.clone()),
        }
    }

    /// A valuation-like quantity in the chosen sign convention.
    pub fn val(&self, e: &Exponent) -> String {
        if self.max_convention { (-e).to_string() } else { e.to_string() }
    }
}

fn read_input(input: &Input) -> Result<String, Error> {
    match &input.poly {
        Some(text) => Ok(text.clone()),
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::Semantic(format!("cannot read standard input: {e}")))?;
            Ok(text)
        }
    }
}

fn univariate(text: &str, ctx: &Context) -> Result<PolyOverK, Error> {
    match elaborate_with_cap(&parse(text)?, &ctx.cap)? {
        Elaborated::Univariate(f) => Ok(match ctx.mode {
            Mode::Exact => f,
            Mode::Float => f.to_float(ctx.precision).with_val_cap(ctx.cap.clone()),
        }),
        Elaborated::Multivariate(_) => Err(Error::Semantic(
            "this command needs a polynomial in y; x1..xn are only accepted by tropicalize".into(),
        )),
    }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let g = &cli.global;
    let cap = match &g.val_cap {
        Some(text) => parse_exponent(text)?,
        None => Exponent::from_integer(DEFAULT_VAL_CAP),
    };
    let ctx = Context {
        mode: match g.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        },
        precision: g.precision,
        cap,
        max_convention: g.max_convention,
    };
    let (input, report) = match &cli.command {
        Command::Polygon(input) => {
            let f = univariate(&read_input(input)?, &ctx)?;
            (f.clone(), report::polygon(&f, &ctx)?)
        }
        Command::InitialForm { omega, input } => {
            let f = univariate(&read_input(input)?, &ctx)?;
            (f.clone(), report::initial_form(&f, &parse_exponent(omega)?, &ctx)?)
        }
        Command::Ord { omega, input } => {
            let f = univariate(&read_input(input)?, &ctx)?;
            (f.clone(), report::ord(&f, &parse_exponent(omega)?, &ctx)?)
        }
        Command::Solve { order, input } => {
            let f = univariate(&read_input(input)?, &ctx)?;
            (f.clone(), report::solve(&f, &parse_exponent(order)?, &ctx)?)
        }
        Command::Prepare { order, input } => {
            let f = univariate(&read_input(input)?, &ctx)?;
            (f.clone(), report::prepare(&f, &parse_exponent(order)?, &ctx)?)
        }
        Command::Eval { at, order, input } => {
            let f = univariate(&read_input(input)?, &ctx)?;
            let mut y = parse_series(at)?;
            if let Mode::Float = ctx.mode {
                y = y.to_float(ctx.precision);
            }
            (f.clone(), report::eval(&f, &y, &parse_exponent(order)?, &ctx)?)
        }
        Command::Tropicalize { omega, input } => {
            let text = read_input(input)?;
            match elaborate_with_cap(&parse(&text)?, &ctx.cap)? {
                Elaborated::Univariate(f) => {
                    if omega.is_some() {
                        return Err(Error::Semantic("--omega applies to polynomials in x1..xn".into()));
                    }
                    (f.clone(), report::tropical_univariate(&f, &ctx)?)
                }
                Elaborated::Multivariate(f) => {
                    let Some(omega) = omega else {
                        return Err(Error::Semantic("a polynomial in x1..xn needs --omega w1,...,wn".into()));
                    };
                    if g.svg.is_some() {
                        return Err(Error::Semantic("--svg draws Newton polygons of polynomials in y".into()));
                    }
                    return report::tropical_multivariate(&f, &parse_exponent_list(omega)?, &ctx);
                }
            }
        }
    };
    if let Some(path) = &g.svg {
        let drawing = svg::newton_polygon(&input.newton_polygon()?, ctx.max_convention);
        std::fs::write(path, drawing)
            .map_err(|e| Error::Semantic(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.global.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("JSON values serialize"));
            } else {
                print!("{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.global.json {
                let body: Value = json!({
                    "error": { "code": code, "kind": error_kind(&e), "message": e.to_string() }
                });
                println!("{}", serde_json::to_string_pretty(&body).expect("JSON values serialize"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}
