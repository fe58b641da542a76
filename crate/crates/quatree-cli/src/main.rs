//! Command-line driver: every paper demo as a subcommand with a
//! machine-readable JSON report on stdout.
//!
//! Exit codes: 0 success, 1 mathematical precondition failure (named reason
//! on stderr), 2 usage errors (malformed flags or unparsable values).

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use quatree::apartment;
use quatree::error::Error;
use quatree::exact;
use quatree::mat2::Mat2;
use quatree::quat::QuaternionAlgebra;
use quatree::split;
use quatree::transitivity;
use quatree::tree::{ball_vertex_count, Ball, Vertex};

const SCHEMA_VERSION: u32 = 1;

fn parse_rational_arg(s: &str) -> Result<BigRational, String> {
    exact::parse_rational(s).map_err(|e| e.to_string())
}

fn parse_matrix_arg(s: &str) -> Result<Mat2<BigRational>, String> {
    Mat2::parse(s).map_err(|e| e.to_string())
}

fn parse_primes_arg(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| e.to_string()))
        .collect()
}

#[derive(Parser)]
#[command(
    name = "quatree",
    version,
    about = "Transitivity of quaternion norm-1 groups on the Bruhat-Tits tree of SL2(Qp)"
)]
struct Cli {
    /// Emit compact JSON instead of pretty-printed.
    #[arg(long, global = true)]
    compact: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct AlgebraArgs {
    /// First algebra constant (e2^2 = alpha), e.g. "-2" or "7/3".
    #[arg(long, value_parser = parse_rational_arg)]
    alpha: BigRational,
    /// Second algebra constant (e3^2 = beta).
    #[arg(long, value_parser = parse_rational_arg)]
    beta: BigRational,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether -1 has a square root in (alpha, beta)_Q.
    MinusOne(AlgebraArgs),
    /// Strong-transitivity verdict with witness or local obstruction.
    Strong(AlgebraArgs),
    /// Radius-bounded Weyl-transitivity verification.
    Weyl {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        maxlen: u32,
        /// Stabilizer generator depth (defaults to radius + 2).
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Per-prime dichotomy table: Weyl evidence plus the exact strong
    /// verdict.
    Dichotomy {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Comma-separated list of primes, e.g. "3,7,11".
        #[arg(long, value_parser = parse_primes_arg)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 4)]
        radius: u32,
        #[arg(long, default_value_t = 2)]
        maxlen: u32,
    },
    /// The explicit nonstandard-apartment example.
    Sec5Demo {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 6)]
        radius: u32,
        /// Override the default A = [[0,-1],[1,7/3]].
        #[arg(long, value_parser = parse_matrix_arg)]
        a_matrix: Option<Mat2<BigRational>>,
        /// Override the default B = [[2,3],[-5/3,-2]].
        #[arg(long, value_parser = parse_matrix_arg)]
        b_matrix: Option<Mat2<BigRational>>,
    },
    /// Enumerate a tree ball, optionally exporting DOT.
    Ball {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        radius: u32,
        /// Write a Graphviz DOT rendering to this file.
        #[arg(long)]
        dot: Option<std::path::PathBuf>,
    },
    /// Approximate an SL2(Q) target by an exact-norm-1 rational quaternion.
    Approximate {
        #[arg(long)]
        p: u64,
        /// Target matrix "a,b;c,d" with rational entries and determinant 1.
        #[arg(long, value_parser = parse_matrix_arg)]
        target: Mat2<BigRational>,
        /// Certified digits of agreement.
        #[arg(long)]
        digits: u32,
        #[arg(long, value_parser = parse_rational_arg, default_value = "-2")]
        alpha: BigRational,
        #[arg(long, value_parser = parse_rational_arg, default_value = "-5")]
        beta: BigRational,
    },
    /// Axis and translation length of a hyperbolic rational matrix.
    Axis {
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = parse_matrix_arg)]
        matrix: Mat2<BigRational>,
        #[arg(long)]
        radius: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (command, params, result) = match run(&cli.command) {
        Ok(triple) => triple,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                Error::BadInput(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            };
        }
    };
    let envelope = json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "quatree",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "parameters": params,
        "result": result,
        "timing_ms": started.elapsed().as_millis() as u64,
    });
    let rendered = if cli.compact {
        serde_json::to_string(&envelope).expect("serializable")
    } else {
        serde_json::to_string_pretty(&envelope).expect("serializable")
    };
    println!("{rendered}");
    ExitCode::SUCCESS
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn run(cmd: &Command) -> Result<(&'static str, Value, Value), Error> {
    match cmd {
        Command::MinusOne(args) => {
            let decision = quatree::forms::minus_one_in_d2(&args.alpha, &args.beta)?;
            let form = format!(
                "<1,{},{},{}>",
                args.alpha,
                args.beta,
                -(&args.alpha * &args.beta)
            );
            Ok((
                "minus-one",
                json!({ "alpha": args.alpha.to_string(), "beta": args.beta.to_string() }),
                json!({
                    "minus_one_in_d2": decision,
                    "form": form,
                    "form_isotropic_over_q": decision,
                }),
            ))
        }
        Command::Strong(args) => {
            let verdict = transitivity::strong_transitivity_decide(&args.alpha, &args.beta)?;
            Ok((
                "strong",
                json!({ "alpha": args.alpha.to_string(), "beta": args.beta.to_string() }),
                to_value(&verdict),
            ))
        }
        Command::Weyl {
            algebra,
            p,
            radius,
            maxlen,
            depth,
        } => {
            let report = transitivity::weyl_transitivity_check(
                &algebra.alpha,
                &algebra.beta,
                *p,
                *radius,
                *maxlen,
                *depth,
            )?;
            Ok((
                "weyl",
                json!({
                    "alpha": algebra.alpha.to_string(),
                    "beta": algebra.beta.to_string(),
                    "p": p,
                    "radius": radius,
                    "maxlen": maxlen,
                    "depth": report.depth,
                }),
                to_value(&report),
            ))
        }
        Command::Dichotomy {
            algebra,
            primes,
            radius,
            maxlen,
        } => {
            let report = transitivity::theorem1_dichotomy(
                &algebra.alpha,
                &algebra.beta,
                primes,
                *radius,
                *maxlen,
            )?;
            Ok((
                "dichotomy",
                json!({
                    "alpha": algebra.alpha.to_string(),
                    "beta": algebra.beta.to_string(),
                    "primes": primes,
                    "radius": radius,
                    "maxlen": maxlen,
                }),
                to_value(&report),
            ))
        }
        Command::Sec5Demo {
            p,
            radius,
            a_matrix,
            b_matrix,
        } => {
            let (default_a, default_b) = transitivity::sec5_default_matrices();
            let a = a_matrix.clone().unwrap_or(default_a);
            let b = b_matrix.clone().unwrap_or(default_b);
            let report = transitivity::nonstandard_apartment(&a, &b, *p, *radius)?;
            Ok((
                "sec5-demo",
                json!({
                    "p": p,
                    "radius": radius,
                    "a_matrix": a.to_string(),
                    "b_matrix": b.to_string(),
                }),
                to_value(&report),
            ))
        }
        Command::Ball { p, radius, dot } => {
            if *p == 2 || !exact::is_prime_u64(*p) {
                return Err(Error::InadmissiblePrime {
                    p: *p,
                    reason: "the tree is defined here for odd primes".into(),
                });
            }
            let ball = Ball::enumerate(&Vertex::base(*p), *radius);
            let mut dot_path = None;
            if let Some(path) = dot {
                std::fs::write(path, ball.to_dot(None))
                    .map_err(|e| Error::BadInput(format!("cannot write {path:?}: {e}")))?;
                dot_path = Some(path.display().to_string());
            }
            Ok((
                "ball",
                json!({ "p": p, "radius": radius }),
                json!({
                    "vertex_count": ball.vertex_count(),
                    "expected_vertex_count": ball_vertex_count(*p, *radius),
                    "chamber_count": ball.chambers().len(),
                    "dot_file": dot_path,
                }),
            ))
        }
        Command::Approximate {
            p,
            target,
            digits,
            alpha,
            beta,
        } => {
            let algebra = QuaternionAlgebra::new(alpha.clone(), beta.clone())?;
            let (q, ctx) = split::approximate_rational_matrix(&algebra, *p, target, *digits)?;
            Ok((
                "approximate",
                json!({
                    "p": p,
                    "target": target.to_string(),
                    "digits": digits,
                    "alpha": alpha.to_string(),
                    "beta": beta.to_string(),
                }),
                json!({
                    "quaternion": q.to_string(),
                    "norm_is_one": algebra.norm(&q) == exact::rat(1),
                    "certified_digits": digits,
                    "working_precision": ctx.precision(),
                }),
            ))
        }
        Command::Axis { p, matrix, radius } => {
            if *p == 2 || !exact::is_prime_u64(*p) {
                return Err(Error::InadmissiblePrime {
                    p: *p,
                    reason: "the tree is defined here for odd primes".into(),
                });
            }
            let ball = Ball::enumerate(&Vertex::base(*p), *radius);
            let (segment, length) = apartment::axis(matrix, &ball)?;
            Ok((
                "axis",
                json!({ "p": p, "matrix": matrix.to_string(), "radius": radius }),
                json!({
                    "translation_length": length,
                    "vertices": segment
                        .vertices()
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>(),
                }),
            ))
        }
    }
}
