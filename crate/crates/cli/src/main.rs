//! `pflag`: JSON front end to the flag and p-curvature library.

mod dispatch;
mod report;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use pflag::Error;

#[derive(Parser)]
#[command(
    name = "pflag",
    version,
    about = "Flags, p-curvature and Atiyah profiles"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Io {
    /// Input JSON: a file path, `-` for stdin, or an inline document.
    #[arg(long)]
    input: Option<String>,
    /// Print the JSON report instead of a text summary.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a connection on P^1 extends over infinity.
    PoneCheck(Io),
    /// p^{m+1}-curvature of a connection on P^1.
    PonePcurv(Io),
    /// A complete flag of sub-connections.
    PoneFlag(Io),
    /// Cartier descent of a connection with zero p-curvature.
    PoneDescend(Io),
    /// Pull back along the relative Frobenius.
    PonePullback {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        s: Option<i64>,
    },
    /// Atiyah profile of an indecomposable bundle of rank r and degree d.
    EllProfile {
        #[command(flatten)]
        io: Io,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
    },
    /// Line-bundle classes of the Atiyah filtration.
    EllClasses(Io),
    /// Whether a sum of indecomposables carries a connection.
    EllAdmits {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        p: Option<u32>,
    },
    /// Graded pieces of the flag, with multiplicities.
    EllSkeleton {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        p: Option<u32>,
    },
    /// Peeling order of first line bundles, with pairwise hom constraints.
    EllPeel(Io),
    /// Characteristic polynomial of the p-curvature on a chart.
    HitCharpoly(Io),
    /// Hitchin base dimension against the image of the twist.
    HitDims {
        #[command(flatten)]
        io: Io,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
    },
    /// Certificate that a rank-2 chart connection has no stable line.
    HitCert(Io),
    /// Triangularizing gauge for nilpotent p-curvature.
    HitNilflag(Io),
    /// Run the fixture corpus and the property suites.
    Selftest {
        #[arg(long)]
        json: bool,
        /// Run only items of this module, or whose name contains this text.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use this corpus file instead of the built-in one.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

fn read_input(src: Option<&str>) -> pflag::Result<Value> {
    let text = match src {
        None => return Ok(json!({})),
        Some(s) if s.trim_start().starts_with(['{', '[']) => s.to_string(),
        Some("-") => std::io::read_to_string(std::io::stdin())
            .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?,
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("reading {path}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

fn flags(pairs: &[(&str, Option<i64>)]) -> Map<String, Value> {
    pairs
        .iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), json!(v))))
        .collect()
}

fn split(cmd: Cmd) -> (String, Io, Map<String, Value>) {
    let name = |s: &str| s.to_string();
    match cmd {
        Cmd::PoneCheck(io) => (name("pone-check"), io, Map::new()),
        Cmd::PonePcurv(io) => (name("pone-pcurv"), io, Map::new()),
        Cmd::PoneFlag(io) => (name("pone-flag"), io, Map::new()),
        Cmd::PoneDescend(io) => (name("pone-descend"), io, Map::new()),
        Cmd::PonePullback { io, s } => (name("pone-pullback"), io, flags(&[("s", s)])),
        Cmd::EllProfile { io, r, d } => (name("ell-profile"), io, flags(&[("r", r), ("d", d)])),
        Cmd::EllClasses(io) => (name("ell-classes"), io, Map::new()),
        Cmd::EllAdmits { io, p } => (name("ell-admits"), io, flags(&[("p", p.map(i64::from))])),
        Cmd::EllSkeleton { io, p } => (name("ell-skeleton"), io, flags(&[("p", p.map(i64::from))])),
        Cmd::EllPeel(io) => (name("ell-peel"), io, Map::new()),
        Cmd::HitCharpoly(io) => (name("hit-charpoly"), io, Map::new()),
        Cmd::HitDims { io, g, r } => (name("hit-dims"), io, flags(&[("g", g), ("r", r)])),
        Cmd::HitCert(io) => (name("hit-cert"), io, Map::new()),
        Cmd::HitNilflag(io) => (name("hit-nilflag"), io, Map::new()),
        Cmd::Selftest { .. } => unreachable!("handled by the caller"),
    }
}

fn emit(report: &Value, as_json: bool) -> ExitCode {
    if as_json {
        print!("{}", report::to_json_string(report));
    } else {
        print!("{}", report::to_text(report));
    }
    let code = report["exit_code"].as_i64().unwrap_or(1);
    if code != 0 && !as_json {
        if let Some(e) = report["error"].as_str() {
            eprintln!("error: {e}");
        }
    }
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(report::EXIT_PARSE as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Cmd::Selftest {
        json,
        filter,
        seed,
        corpus,
    } = cli.cmd
    {
        let report = selftest::report(corpus.as_deref(), filter.as_deref(), seed);
        return emit(&report, json);
    }
    let (name, io, args) = split(cli.cmd);
    let input = read_input(io.input.as_deref());
    let canonical = json!({ "args": args, "input": input.as_ref().unwrap_or(&Value::Null) });
    let res = input.and_then(|input| dispatch::run(&name, &input, &args));
    emit(&report::build(&name, &canonical, &res), io.json)
}
