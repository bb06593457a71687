use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use localeig::dense::Mat;
use localeig::json::{
    parse_json, pencil_from_json, ratmat_from_json, state_space_from_json, state_space_to_json,
};
use localeig::parse::{parse_matrix_rows, parse_scalar};
use localeig::pencilroots::Pencil;
use localeig::poleremoval::Recovery;
use localeig::ratfun::Point;
use localeig::ratmat::RatMat;
use localeig::realization::{realize, StateSpace};
use localeig::report::{coalescent_report, pencil_report, rootvectors_report, structure_report, Report};
use localeig::scalar::{Context, Exact, Float, Scalar};
use localeig::Error;

#[derive(Parser)]
#[command(name = "localeig", version, about = "Local eigenstructure of rational matrices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    run: RunConfig,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Arithmetic: exact rationals or complex floating point.
    #[arg(long, value_enum, default_value_t = Backend::Exact, global = true)]
    backend: Backend,
    /// Relative rank threshold.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Relative threshold for cancelling common factors.
    #[arg(long, global = true)]
    cancel_tol: Option<f64>,
    /// Seed for randomized choices.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    Float,
}

#[derive(Args)]
struct PointArgs {
    /// Matrix file (text or JSON); `-` reads stdin.
    file: PathBuf,
    /// Point λ0, or `inf`.
    #[arg(default_value = "0", allow_hyphen_values = true)]
    point: String,
    /// Comma-separated points, each analysed independently.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    points: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Partial multiplicities, ranks and minimal indices.
    Structure(PointArgs),
    /// Maximal set of root vectors; poles go through the feedback pipeline.
    Rootvectors {
        #[command(flatten)]
        at: PointArgs,
        /// Recover with K as a rational matrix instead of truncating.
        #[arg(long)]
        exact_k: bool,
    },
    /// Feedback pipeline with its diagnostics.
    Coalescent {
        #[command(flatten)]
        at: PointArgs,
        #[arg(long)]
        exact_k: bool,
    },
    /// Minimal state-space realization.
    Realize {
        file: PathBuf,
    },
    /// Root polynomials of a pencil M0 + λ M1.
    Pencil(PointArgs),
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    let io = |e: std::io::Error| Error::Parse {
        line: 0,
        column: 0,
        message: format!("{}: {e}", path.display()),
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

/// JSON documents start with `{` or `[[`; a single bracket is the text grammar.
fn as_json(src: &str) -> Option<Result<Value, Error>> {
    let t = src.trim_start();
    if t.starts_with('{') {
        return Some(parse_json(src));
    }
    if t.starts_with('[') && t[1..].trim_start().starts_with('[') {
        return Some(parse_json(src));
    }
    None
}

fn load_ratmat<S: Scalar>(src: &str, ctx: &Context) -> Result<RatMat<S>, Error> {
    match as_json(src) {
        Some(v) => {
            let v = v?;
            if v.get("A").is_some() {
                state_space_from_json::<S>(&v)?.transfer_function(ctx)
            } else {
                ratmat_from_json(&v, ctx)
            }
        }
        None => RatMat::new(parse_matrix_rows(src)?),
    }
}

fn load_pencil<S: Scalar>(src: &str) -> Result<(Mat<S>, Mat<S>), Error> {
    match as_json(src) {
        Some(v) => pencil_from_json(&v?),
        None => {
            let p = RatMat::<S>::new(parse_matrix_rows(src)?)?
                .to_polymat()
                .map_err(|_| Error::Precondition("a pencil has polynomial entries".into()))?;
            if p.degree().unwrap_or(0) > 1 {
                return Err(Error::Precondition("a pencil has degree at most 1".into()));
            }
            Ok((p.coeff(0), p.coeff(1)))
        }
    }
}

fn parse_point<S: Scalar>(s: &str) -> Result<Point<S>, Error> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        Ok(Point::Infinity)
    } else {
        Ok(Point::Finite(parse_scalar(t)?))
    }
}

fn points<S: Scalar>(a: &PointArgs) -> Result<Vec<Point<S>>, Error> {
    match &a.points {
        Some(list) => list.iter().map(|p| parse_point(p)).collect(),
        None => Ok(vec![parse_point(&a.point)?]),
    }
}

fn render(reports: &[Report], json: bool) -> String {
    if json {
        let mut s = if reports.len() == 1 {
            reports[0].to_json()
        } else {
            serde_json::to_string_pretty(reports).expect("reports serialize")
        };
        s.push('\n');
        s
    } else {
        reports.iter().map(Report::to_text).collect::<Vec<_>>().join("\n")
    }
}

fn realize_text<S: Scalar>(ss: &StateSpace<S>) -> String {
    let mut s = format!("states: {}\n", ss.order());
    for (name, m) in [("A", &ss.a), ("E", &ss.e), ("B", &ss.b), ("C", &ss.c), ("D", &ss.d)] {
        let rows: Vec<String> = (0..m.nrows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .map(localeig::format::scalar_to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        s.push_str(&format!("{name} ({}x{}): [{}]\n", m.nrows(), m.ncols(), rows.join("; ")));
    }
    s
}

fn per_point<S: Scalar>(
    src: &str,
    at: &PointArgs,
    ctx: &Context,
    f: impl Fn(&RatMat<S>, &Point<S>) -> Result<Report, Error>,
) -> Result<Vec<Report>, Error> {
    let r = load_ratmat::<S>(src, ctx)?;
    points::<S>(at)?.iter().map(|p| f(&r, p)).collect()
}

fn recovery(exact_k: bool) -> Recovery {
    if exact_k {
        Recovery::Exact
    } else {
        Recovery::Truncated
    }
}

fn run<S: Scalar>(cli: &Cli, ctx: &Context) -> Result<String, Error> {
    let json = cli.run.json;
    match &cli.cmd {
        Cmd::Structure(at) => {
            let src = read_input(&at.file)?;
            let reports = per_point::<S>(&src, at, ctx, |r, p| structure_report(r, p, ctx))?;
            Ok(render(&reports, json))
        }
        Cmd::Rootvectors { at, exact_k } => {
            let src = read_input(&at.file)?;
            let reports = per_point::<S>(&src, at, ctx, |r, p| rootvectors_report(r, p, recovery(*exact_k), ctx))?;
            Ok(render(&reports, json))
        }
        Cmd::Coalescent { at, exact_k } => {
            let src = read_input(&at.file)?;
            let reports = per_point::<S>(&src, at, ctx, |r, p| coalescent_report(r, p, recovery(*exact_k), ctx))?;
            Ok(render(&reports, json))
        }
        Cmd::Realize { file } => {
            let src = read_input(file)?;
            let ss = realize(&load_ratmat::<S>(&src, ctx)?, ctx)?;
            if json {
                Ok(serde_json::to_string_pretty(&state_space_to_json(&ss)).expect("values serialize") + "\n")
            } else {
                Ok(realize_text(&ss))
            }
        }
        Cmd::Pencil(at) => {
            let src = read_input(&at.file)?;
            let (m0, m1) = load_pencil::<S>(&src)?;
            let reports = points::<S>(at)?
                .into_iter()
                .map(|p| match p {
                    Point::Finite(x) => pencil_report(&Pencil::at_point(&m0, &m1, &x)?, ctx),
                    Point::Infinity => Err(Error::Precondition(
                        "pencils are analysed at finite points; reverse the pencil for infinity".into(),
                    )),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(render(&reports, json))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Json(_) => 2,
        Error::Verification(_) | Error::NotMinimal | Error::Collision(_) => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = Context::default();
    if let Some(seed) = cli.run.seed {
        ctx.seed = seed;
    }
    if let Some(tol) = cli.run.tol {
        ctx.rank_tol = tol;
    }
    if let Some(tol) = cli.run.cancel_tol {
        ctx.cancel_tol = tol;
    }
    let out = match cli.run.backend {
        Backend::Exact => run::<Exact>(&cli, &ctx),
        Backend::Float => run::<Float>(&cli, &ctx),
    };
    match out {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("localeig: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
