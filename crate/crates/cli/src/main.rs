use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use telesigma::expansion::choose_b;
use telesigma::integrality::{c_table, verify_theorems, CheckSelection, IntegralityReport, Verdict};
use telesigma::json;
use telesigma::pipeline::{run, PipelineOptions, PipelineOutput};
use telesigma::sigma::SigmaExpansion;
use telesigma::{Error, Rational, TelescopicData};

/// Sigma function expansions of telescopic curves.
#[derive(Parser)]
#[command(name = "telesigma", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct RunArgs {
    /// Curve document: {"a": [...], "lambda": "symbolic" | {index: "p/q"}, "W": n, "t_order"?: n, "b"?: [...]}.
    input: PathBuf,
    /// Weight bound, overriding the document.
    #[arg(long = "W")]
    weight: Option<u32>,
    /// Precision of the local expansions.
    #[arg(long = "t-order")]
    t_order: Option<usize>,
    /// Local parameter exponents, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    b: Option<Vec<i64>>,
    /// Recompute with a second local parameter and require the same result.
    #[arg(long)]
    gauge_check: bool,
    /// Directory for the output files.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Semigroup data, λ catalog and relation matrix.
    Info {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Option<Vec<i64>>,
    },
    /// Expand σ and optionally the intermediate tables.
    Expand {
        #[command(flatten)]
        args: RunArgs,
        #[arg(long, value_enum, default_value = "sigma")]
        emit: Vec<Emit>,
    },
    /// Verify the integrality statements for a curve document or an exported σ.
    Check {
        #[command(flatten)]
        args: RunArgs,
        #[arg(long, value_enum, default_value = "all")]
        check: Vec<Check>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Sigma,
    Tau,
    Q,
    Omega,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Tilde,
    Bar,
    Square,
    All,
}

enum Failure {
    Verdict(String),
    Invalid(String),
    Pipeline(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verdict(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Pipeline(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(v) => Failure::Invalid(format!("{v:?}: {v}")),
            Error::Parse(_) | Error::Argument(_) => Failure::Invalid(e.to_string()),
            other => Failure::Pipeline(format!("{other:?}")),
        }
    }
}

struct CurveInput {
    td: TelescopicData,
    weight: u32,
    t_order: Option<usize>,
    b: Option<Vec<i64>>,
    lambda: BTreeMap<usize, Rational>,
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn parse_input(v: &Value, args: Option<&RunArgs>) -> Result<CurveInput, Failure> {
    let a: Vec<u32> = v
        .get("a")
        .cloned()
        .and_then(|a| serde_json::from_value(a).ok())
        .ok_or_else(|| Failure::Invalid("curve document needs \"a\": a list of positive integers".into()))?;
    let td = TelescopicData::new(&a).map_err(Error::from)?;
    let lambda = match v.get("lambda") {
        None => BTreeMap::new(),
        Some(Value::String(s)) if s == "symbolic" => BTreeMap::new(),
        Some(other) => json::parse_lambda_values(&td, other)?,
    };
    let field = |k: &str| v.get(k).and_then(Value::as_u64);
    let weight = args
        .and_then(|a| a.weight)
        .or(field("W").map(|w| w as u32))
        .ok_or_else(|| Failure::Invalid("weight bound missing: set \"W\" or pass --W".into()))?;
    let t_order = args.and_then(|a| a.t_order).or(field("t_order").map(|t| t as usize));
    let doc_b = match v.get("b") {
        None => None,
        Some(b) => Some(serde_json::from_value::<Vec<i64>>(b.clone()).map_err(|_| Failure::Invalid("\"b\" must be a list of integers".into()))?),
    };
    let b = args.and_then(|a| a.b.clone()).or(doc_b);
    if let Some(b) = &b {
        if b.len() != td.m() {
            return Err(Failure::Invalid(format!("b has {} entries, expected {}", b.len(), td.m())));
        }
    }
    Ok(CurveInput { td, weight, t_order, b, lambda })
}

fn pipeline(input: &CurveInput, gauge_check: bool) -> Result<PipelineOutput, Failure> {
    let opts = PipelineOptions {
        weight_bound: input.weight,
        t_order: input.t_order,
        b: input.b.clone(),
        lambda_values: input.lambda.clone(),
        gauge_check,
    };
    Ok(run(&input.td, &opts)?)
}

fn write_out(dir: &Path, name: &str, v: &Value) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Invalid(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, json::to_string(v)).map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display())))
}

fn cmd_info(input: &Path, b: Option<Vec<i64>>) -> Result<(), Failure> {
    let v = read_json(input)?;
    let a: Vec<u32> = v
        .get("a")
        .cloned()
        .and_then(|a| serde_json::from_value(a).ok())
        .ok_or_else(|| Failure::Invalid("curve document needs \"a\": a list of positive integers".into()))?;
    let td = TelescopicData::new(&a).map_err(Error::from)?;
    let b = b.unwrap_or_else(|| choose_b(&td));
    print!("{}", json::to_string(&json::info(&td, &b)?));
    Ok(())
}

fn cmd_expand(args: &RunArgs, emit: &[Emit]) -> Result<(), Failure> {
    let input = parse_input(&read_json(&args.input)?, Some(args))?;
    let out = pipeline(&input, args.gauge_check)?;
    let td = &input.td;
    let wants = |e: Emit| emit.contains(&e) || emit.contains(&Emit::All);
    let mut docs: Vec<(&str, Value)> = Vec::new();
    if wants(Emit::Sigma) {
        docs.push(("sigma", json::sigma_expansion(&out.sigma)));
    }
    if wants(Emit::Tau) {
        docs.push(("tau", json::tau(td, &out.data.tau)));
    }
    if wants(Emit::Q) {
        docs.push(("q", json::q_table(td, &out.q)));
    }
    if wants(Emit::Omega) {
        docs.push(("omega", json::expansions(td, &out.expansions)));
    }
    match &args.out {
        Some(dir) => {
            for (name, v) in &docs {
                write_out(dir, &format!("{name}.json"), v)?;
            }
        }
        None if docs.len() == 1 => print!("{}", json::to_string(&docs[0].1)),
        None => {
            let obj: serde_json::Map<String, Value> = docs.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            print!("{}", json::to_string(&Value::Object(obj)));
        }
    }
    Ok(())
}

fn selection(checks: &[Check]) -> CheckSelection {
    if checks.contains(&Check::All) {
        return CheckSelection::ALL;
    }
    CheckSelection {
        tilde: checks.contains(&Check::Tilde),
        bar: checks.contains(&Check::Bar),
        square: checks.contains(&Check::Square),
    }
}

fn cmd_check(args: &RunArgs, checks: &[Check]) -> Result<(), Failure> {
    let doc = read_json(&args.input)?;
    let which = selection(checks);
    let (se, reports): (SigmaExpansion, Vec<IntegralityReport>) = if doc.get("terms").is_some() {
        let se = json::parse_sigma_expansion(&doc)?;
        let reports = verify_theorems(&se, None, which);
        (se, reports)
    } else {
        let input = parse_input(&doc, Some(args))?;
        let out = pipeline(&input, args.gauge_check)?;
        let reports = verify_theorems(&out.sigma, Some(&c_table(&out.expansions)), which);
        (out.sigma, reports)
    };
    let td = &se.curve;
    for r in &reports {
        let extra = match &r.verdict {
            Verdict::Skipped(reason) => format!(" ({reason})"),
            Verdict::Fail => format!(" ({} witnesses)", r.witnesses.len()),
            Verdict::Pass => String::new(),
        };
        println!("{} in {}: {}{extra}", r.subject, r.ring, r.verdict.tag());
    }
    let detail = json!({
        "curve": { "a": td.a },
        "W": se.weight_bound,
        "reports": reports.iter().map(|r| json::report(td, r)).collect::<Vec<_>>(),
    });
    if let Some(dir) = &args.out {
        write_out(dir, "reports.json", &detail)?;
    }
    let failed: Vec<String> = reports.iter().filter(|r| r.failed()).map(|r| format!("{} in {}", r.subject, r.ring)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verdict(format!("failed: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Info { input, b } => cmd_info(input, b.clone()),
        Command::Expand { args, emit } => cmd_expand(args, emit),
        Command::Check { args, check } => cmd_check(args, check),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Verdict(msg) | Failure::Invalid(msg) | Failure::Pipeline(msg)) = &f;
            eprintln!("telesigma: {msg}");
            ExitCode::from(f.code())
        }
    }
}
