use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Rational;
use serde_json::{json, Map, Value};

use clausen::exactnum::{parse_rational, ParamValue};
use clausen::hyperseries::{eval_pfq, PFQSpec};
use clausen::idbook::{
    catalog, default_z0, eval_at, find, run_operator_checks, sample_theorem1_params, verify, verify_theorem1, Domain, EvalCtx,
    IdError, IdentityCase, Instance, Point, VerifyConfig, OPERATOR_CHECKS,
};
use clausen::kdf::{self, KdFSpec};

#[derive(Parser)]
#[command(name = "clausen", version, about = "Verify Clausen-type hypergeometric identities in exact and multiprecision arithmetic")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Working precision in decimal digits (at least 20).
    #[arg(long, global = true, default_value_t = 60, value_parser = clap::value_parser!(u32).range(20..))]
    prec: u32,
    /// Pass when relative residuals are below 10^-TOL_EXP [default: prec - 20].
    #[arg(long, global = true)]
    tol_exp: Option<u32>,
    /// Term budget per series; for double series, the number of diagonals.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(100..))]
    max_terms: u64,
    /// Seed for parameter and point sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads [default: all cores].
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON lines output (default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Flat CSV summary.
    #[arg(long, global = true)]
    csv: bool,
    /// Keep only cases carrying this tag or whose id contains it.
    #[arg(long, global = true)]
    filter: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a series given as JSON, or both sides of a catalog case.
    Eval {
        /// pFq or double-series spec, e.g. '{"upper":["1","1"],"lower":["2"]}'.
        #[arg(long, conflicts_with = "case")]
        spec: Option<String>,
        /// Catalog case id.
        #[arg(long)]
        case: Option<String>,
        /// Parameter override NAME=VALUE (repeatable).
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Point: z, or x,y.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Verify a catalog case, "all", "operators" or "theorem1".
    Verify {
        selector: String,
        /// Parameter override NAME=VALUE (repeatable).
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Random parameter sets in addition to the default one.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Random points in addition to the default ones.
        #[arg(long, default_value_t = 0)]
        points: usize,
        /// Operator checks to run (repeatable) [default: all].
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Degree bound for operator coefficient checks.
        #[arg(long, default_value_t = 12)]
        degree: usize,
    },
    /// List the identity cases.
    Catalog,
}

/// Failure classes, ordered by exit code.
#[derive(Debug)]
enum Fail {
    Input(String),
    Eval(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Input(_) => 1,
            Fail::Eval(_) => 2,
        }
    }
}

impl From<IdError> for Fail {
    fn from(e: IdError) -> Self {
        if e.is_input_error() {
            Fail::Input(e.to_string())
        } else {
            Fail::Eval(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.cmd {
        Command::Eval { spec, case, params, at } => cmd_eval(&cli.run, spec.as_deref(), case.as_deref(), params, at),
        Command::Verify { selector, params, samples, points, checks, degree } => {
            cmd_verify(&cli.run, selector, params, *samples, *points, checks, *degree)
        }
        Command::Catalog => cmd_catalog(&cli.run),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let (Fail::Input(m) | Fail::Eval(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}

impl RunArgs {
    fn tol_exp(&self) -> u32 {
        self.tol_exp.unwrap_or(self.prec - 20)
    }

    fn max_terms(&self) -> usize {
        self.max_terms as usize
    }

    fn sink(&self) -> Result<Box<dyn Write>, Fail> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Fail::Input(format!("{}: {e}", p.display())))?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn pool(&self) -> Result<rayon::ThreadPool, Fail> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.jobs {
            b = b.num_threads(n.max(1));
        }
        b.build().map_err(|e| Fail::Eval(e.to_string()))
    }

    fn keep(&self, c: &IdentityCase) -> bool {
        self.filter.as_deref().is_none_or(|f| c.has_tag(f) || c.id.contains(f))
    }
}

fn parse_params(list: &[String]) -> Result<Instance, Fail> {
    list.iter()
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| Fail::Input(format!("expected NAME=VALUE, got {kv:?}")))?;
            let q = parse_rational(v).map_err(|e| Fail::Input(format!("{k}: {e}")))?;
            Ok((k.trim().to_string(), ParamValue::Exact(q)))
        })
        .collect()
}

fn parse_point(s: &str) -> Result<Point, Fail> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| parse_rational(t).map(ParamValue::Exact).map_err(|e| Fail::Input(format!("point {s:?}: {e}")));
    match parts.as_slice() {
        [z] => Ok(Point::Z(num(z)?)),
        [x, y] => Ok(Point::XY(num(x)?, num(y)?)),
        _ => Err(Fail::Input(format!("point {s:?}: expected z or x,y"))),
    }
}

fn series_json(v: &clausen::hyperseries::SeriesValue) -> Value {
    let mut m = serde_json::to_value(v).expect("serializable");
    m["decimal"] = Value::String(v.value.to_string());
    m
}

fn cmd_eval(run: &RunArgs, spec: Option<&str>, case: Option<&str>, params: &[String], at: &str) -> Result<u8, Fail> {
    let point = parse_point(at)?;
    let mut out = run.sink()?;
    let mut line = |v: Value| writeln!(out, "{v}").map_err(|e| Fail::Eval(e.to_string()));
    match (spec, case) {
        (Some(s), None) => {
            let raw: Value = serde_json::from_str(s).map_err(|e| Fail::Input(format!("spec: {e}")))?;
            let v = if raw.get("shape").is_some() {
                let k: KdFSpec = serde_json::from_value(raw).map_err(|e| Fail::Input(format!("spec: {e}")))?;
                k.validate().map_err(|e| Fail::Input(e.to_string()))?;
                let Point::XY(x, y) = point else { return Err(Fail::Input("double series need a point x,y".into())) };
                kdf::eval(&k, &x, &y, run.prec, run.max_terms()).map_err(|e| Fail::Eval(e.to_string()))?
            } else {
                let p: PFQSpec = serde_json::from_value(raw).map_err(|e| Fail::Input(format!("spec: {e}")))?;
                let Point::Z(z) = point else { return Err(Fail::Input("pFq needs a single point z".into())) };
                eval_pfq(&p, &z, run.prec, run.max_terms()).map_err(|e| Fail::Eval(e.to_string()))?
            };
            line(series_json(&v))?;
        }
        (None, Some(id)) => {
            let c = find(id)?;
            let inst = c.instance_from(&parse_params(params)?)?;
            let ctx = EvalCtx { digits: run.prec, max_terms: run.max_terms(), accept: run.tol_exp() };
            for p in c.build(&inst)? {
                let (l, _) = eval_at(&p.lhs, &point, &ctx)?;
                let (r, _) = eval_at(&p.rhs, &point, &ctx)?;
                line(json!({ "case": c.id, "pair": p.label, "point": point.to_string(), "lhs": l.to_string(), "rhs": r.to_string() }))?;
            }
        }
        _ => return Err(Fail::Input("give exactly one of --spec or --case".into())),
    }
    Ok(0)
}

fn cmd_catalog(run: &RunArgs) -> Result<u8, Fail> {
    let mut out = run.sink()?;
    let cases: Vec<IdentityCase> = catalog().into_iter().filter(|c| run.keep(c)).collect();
    let io = |e: io::Error| Fail::Eval(e.to_string());
    if run.csv {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["id", "mode", "tags", "params", "anchor"]).map_err(|e| Fail::Eval(e.to_string()))?;
        for c in &cases {
            let v = serde_json::to_value(c).expect("serializable");
            let params: Vec<&str> = c.params.iter().map(|p| p.name).collect();
            w.write_record([c.id, v["mode"].as_str().unwrap_or(""), &c.tags.join(" "), &params.join(" "), c.anchor])
                .map_err(|e| Fail::Eval(e.to_string()))?;
        }
        w.flush().map_err(io)?;
    } else {
        for c in &cases {
            writeln!(out, "{}", serde_json::to_string(c).expect("serializable")).map_err(io)?;
        }
        out.flush().map_err(io)?;
    }
    Ok(0)
}

enum Job {
    Identity { case: usize, inst: Instance, points: Vec<Point> },
    Operator { check: String, seed: u64 },
    Theorem1 { which: u8, a: Rational, b: Rational, c: Rational },
}

/// One report line plus its classification.
struct Outcome {
    row: Value,
    pass: bool,
    error: Option<Fail>,
}

fn tagged(kind: &str, v: Value) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), Value::String(kind.into()));
    if let Value::Object(o) = v {
        m.extend(o);
    }
    Value::Object(m)
}

fn failed(kind: &str, id: &str, params: Value, e: Fail) -> Outcome {
    let (Fail::Input(m) | Fail::Eval(m)) = &e;
    let row = json!({ "kind": kind, "id": id, "params": params, "pass": false, "error": m });
    Outcome { row, pass: false, error: Some(e) }
}

fn run_job(job: &Job, cases: &[IdentityCase], run: &RunArgs, cfg: &VerifyConfig, degree: usize) -> Vec<Outcome> {
    match job {
        Job::Identity { case, inst, points } => {
            let c = &cases[*case];
            match verify(c, inst, points, cfg) {
                Ok(r) => {
                    let pass = r.pass;
                    vec![Outcome { row: tagged("identity", serde_json::to_value(&r).expect("serializable")), pass, error: None }]
                }
                Err(e) => vec![failed("identity", c.id, serde_json::to_value(inst).expect("serializable"), e.into())],
            }
        }
        Job::Operator { check, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            match run_operator_checks(&mut rng, &[check.as_str()], 1, degree) {
                Ok(rs) => rs
                    .into_iter()
                    .map(|r| Outcome { pass: r.pass, row: tagged("operator", serde_json::to_value(&r).expect("serializable")), error: None })
                    .collect(),
                Err(e) => vec![failed("operator", check, Value::Null, e.into())],
            }
        }
        Job::Theorem1 { which, a, b, c } => match verify_theorem1(*which, a, b, c, &default_z0(*which), run.prec, run.max_terms()) {
            Ok(r) => vec![Outcome { pass: r.pass, row: tagged("theorem1", serde_json::to_value(&r).expect("serializable")), error: None }],
            Err(e) => {
                let params = json!({ "which": which, "a": a.to_string(), "b": b.to_string(), "c": c.to_string() });
                vec![failed("theorem1", &format!("spap{which}"), params, e.into())]
            }
        },
    }
}

fn identity_jobs(run: &RunArgs, cases: &[IdentityCase], only: Option<&str>, given: &Instance, samples: usize, points: usize) -> Result<Vec<Job>, Fail> {
    let mut jobs = Vec::new();
    for (k, c) in cases.iter().enumerate() {
        if only.is_some_and(|id| id != c.id) || (only.is_none() && !run.keep(c)) {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
        rng.set_stream(k as u64);
        let mut pts = c.default_points.clone();
        if matches!(c.domain, Domain::Z { .. }) {
            pts.extend(c.sample_points(&mut rng, points));
        }
        let first = if given.is_empty() { c.default_instance() } else { c.instance_from(given)? };
        jobs.push(Job::Identity { case: k, inst: first, points: pts.clone() });
        for _ in 0..samples {
            let inst = c.sample(&mut rng);
            jobs.push(Job::Identity { case: k, inst, points: pts.clone() });
        }
    }
    Ok(jobs)
}

fn operator_jobs(run: &RunArgs, checks: &[String], samples: usize) -> Result<Vec<Job>, Fail> {
    let names: Vec<String> = if checks.is_empty() { OPERATOR_CHECKS.iter().map(|s| s.to_string()).collect() } else { checks.to_vec() };
    let mut jobs = Vec::new();
    for (k, name) in names.iter().enumerate() {
        if !OPERATOR_CHECKS.contains(&name.as_str()) {
            return Err(Fail::Input(format!("unknown check {name:?}; expected one of {}", OPERATOR_CHECKS.join(", "))));
        }
        // symbolic checks have nothing to sample
        let rounds = if matches!(name.as_str(), "syzygies" | "combination") { 1 } else { samples.max(1) };
        for r in 0..rounds {
            jobs.push(Job::Operator { check: name.clone(), seed: run.seed ^ ((k as u64) << 32) ^ r as u64 });
        }
    }
    Ok(jobs)
}

fn theorem1_jobs(run: &RunArgs, given: &Instance, samples: usize) -> Result<Vec<Job>, Fail> {
    let mut sets = Vec::new();
    let get = |n: &str, d: (i64, i64)| given.get(n).and_then(|v| v.as_exact().cloned()).unwrap_or_else(|| Rational::from(d));
    for k in given.keys() {
        if !["a", "b", "c"].contains(&k.as_str()) {
            return Err(Fail::Input(format!("theorem1 takes a, b, c, not {k:?}")));
        }
    }
    sets.push((get("a", (1, 5)), get("b", (1, 7)), get("c", (1, 3))));
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    for _ in 0..samples {
        sets.push(sample_theorem1_params(&mut rng));
    }
    let mut jobs = Vec::new();
    for (a, b, c) in sets {
        for which in 0..=3 {
            clausen::idbook::theorem1_params_ok(which, &a, &b, &c)?;
            jobs.push(Job::Theorem1 { which, a: a.clone(), b: b.clone(), c: c.clone() });
        }
    }
    Ok(jobs)
}

fn cmd_verify(run: &RunArgs, selector: &str, params: &[String], samples: usize, points: usize, checks: &[String], degree: usize) -> Result<u8, Fail> {
    let cases = catalog();
    let given = parse_params(params)?;
    let jobs = match selector {
        "all" => {
            if !given.is_empty() {
                return Err(Fail::Input("--param needs a single case".into()));
            }
            let mut j = identity_jobs(run, &cases, None, &given, samples, points)?;
            if run.filter.is_none() {
                j.extend(operator_jobs(run, checks, samples)?);
                j.extend(theorem1_jobs(run, &given, samples)?);
            }
            j
        }
        "operators" => operator_jobs(run, checks, samples)?,
        "theorem1" => theorem1_jobs(run, &given, samples)?,
        id => {
            find(id)?;
            identity_jobs(run, &cases, Some(id), &given, samples, points)?
        }
    };
    let cfg = VerifyConfig { prec: run.prec, tol_exp: run.tol_exp(), max_terms: run.max_terms(), ..VerifyConfig::default() };
    let results: Vec<Outcome> = run.pool()?.install(|| jobs.par_iter().flat_map_iter(|j| run_job(j, &cases, run, &cfg, degree)).collect());

    write_report(run, &results)?;
    let total = results.len();
    let passed = results.iter().filter(|o| o.pass).count();
    let input = results.iter().filter(|o| matches!(o.error, Some(Fail::Input(_)))).count();
    let eval = results.iter().filter(|o| matches!(o.error, Some(Fail::Eval(_)))).count();
    let summary = format!("verify {selector}: {total} checks, {passed} passed, {} failed, {eval} errors", total - passed - eval);
    if run.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    for o in &results {
        if let Some(Fail::Input(m) | Fail::Eval(m)) = &o.error {
            eprintln!("error: {m}");
        }
    }
    Ok(if eval > 0 {
        2
    } else if input > 0 || passed < total {
        1
    } else {
        0
    })
}

fn write_report(run: &RunArgs, results: &[Outcome]) -> Result<(), Fail> {
    let out = run.sink()?;
    let err = |e: &dyn std::fmt::Display| Fail::Eval(e.to_string());
    if run.csv {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["kind", "id", "params", "max_rel", "pass", "error", "wall_ms"]).map_err(|e| err(&e))?;
        for o in results {
            let r = &o.row;
            let s = |k: &str| match &r[k] {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                v => v.to_string(),
            };
            let id = [s("case"), s("check"), s("id")].into_iter().find(|x| !x.is_empty()).unwrap_or_default();
            let id = match r.get("which") {
                Some(w) => format!("spap{w}"),
                None => match r.get("label") {
                    Some(l) => format!("{id}: {}", l.as_str().unwrap_or("")),
                    None => id,
                },
            };
            let params = match &r["params"] {
                _ if r.get("which").is_some() => format!("a={} b={} c={}", s("a"), s("b"), s("c")),
                Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", v.as_str().unwrap_or(""))).collect::<Vec<_>>().join(" "),
                Value::Array(v) => v.iter().map(|x| x.as_str().unwrap_or("")).collect::<Vec<_>>().join(" "),
                _ => String::new(),
            };
            let rel = [s("max_rel"), s("residual")].into_iter().find(|x| !x.is_empty()).unwrap_or_default();
            let ms = r["timing"]["wall_ms"].as_u64().map(|m| m.to_string()).unwrap_or_default();
            w.write_record([s("kind"), id, params, rel, o.pass.to_string(), s("error"), ms]).map_err(|e| err(&e))?;
        }
        w.flush().map_err(|e| err(&e))?;
    } else {
        let mut out = out;
        for o in results {
            writeln!(out, "{}", o.row).map_err(|e| err(&e))?;
        }
        out.flush().map_err(|e| err(&e))?;
    }
    Ok(())
}
