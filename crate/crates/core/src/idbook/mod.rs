//! Identity catalog: each case is a list of LHS/RHS expression pairs with a
//! parameter predicate, verified either exactly (truncated power series over
//! Q, exact rationals at points) or numerically at a target precision.

mod cases;
mod expr;
mod operators;
mod series;
mod theorem1;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rand::Rng;
use rug::{Float, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{digits_to_bits, ten_pow_neg, APComplex, NumError, ParamValue, PoleError};
use crate::hyperseries::SeriesError;
use crate::kdf::KdfError;
use crate::thetaops::ThetaError;

pub use cases::{catalog, find, spap0_spec};
pub use expr::{chaundy_coeff, eval_at, eval_series, Arg, EvalCtx, Expr, Point};
pub use operators::{run_operator_checks, OperatorReport, OPERATOR_CHECKS};
pub use series::QSeries;
pub use theorem1::{default_z0, sample_theorem1_params, theorem1_params_ok, theorem1_suite, verify_theorem1, Theorem1Report};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdError {
    #[error("parameter predicate violated: {0}")]
    Predicate(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("branch error: {0}")]
    Branch(String),
    #[error("no power series expansion: {0}")]
    NotSeries(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("unknown case {0:?}")]
    UnknownCase(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("{pair} at {point}: {source}")]
    Eval { pair: String, point: String, source: Box<IdError> },
    #[error(transparent)]
    Kdf(#[from] KdfError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Pole(#[from] PoleError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

impl IdError {
    /// Input errors (as opposed to evaluation failures).
    pub fn is_input_error(&self) -> bool {
        matches!(self, IdError::Predicate(_) | IdError::BadParams(_) | IdError::UnknownCase(_))
    }
}

pub type Instance = BTreeMap<String, ParamValue>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamKind {
    /// Random rationals strictly between `lo` and `hi` (given as p/q pairs).
    Rational { lo: (i64, i64), hi: (i64, i64) },
    Integer { lo: i64, hi: i64 },
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    #[serde(flatten)]
    pub kind: ParamKind,
}

/// Where the sample points live.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// Real z in the open interval (lo, hi).
    Z { lo: (i64, i64), hi: (i64, i64) },
    /// Fixed points (x, y) or z.
    Fixed { points: Vec<Point> },
    /// Constant identities.
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct Pair {
    pub label: String,
    pub lhs: Expr,
    pub rhs: Expr,
}

type Check = fn(&Instance) -> Result<(), String>;
type Build = fn(&Instance) -> Result<Vec<Pair>, IdError>;

pub struct IdentityCase {
    pub id: &'static str,
    pub anchor: &'static str,
    pub mode: Mode,
    pub tags: &'static [&'static str],
    pub params: &'static [ParamSpec],
    pub domain: Domain,
    pub default_points: Vec<Point>,
    defaults: &'static [(&'static str, i64, i64)],
    check: Check,
    build: Build,
}

#[derive(Serialize)]
struct CaseInfo<'a> {
    id: &'a str,
    anchor: &'a str,
    mode: Mode,
    tags: &'a [&'a str],
    params: &'a [ParamSpec],
    domain: &'a Domain,
    default_instance: Instance,
    default_points: &'a [Point],
}

impl Serialize for IdentityCase {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        CaseInfo {
            id: self.id,
            anchor: self.anchor,
            mode: self.mode,
            tags: self.tags,
            params: self.params,
            domain: &self.domain,
            default_instance: self.default_instance(),
            default_points: &self.default_points,
        }
        .serialize(ser)
    }
}

impl fmt::Debug for IdentityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdentityCase({})", self.id)
    }
}

fn q(p: (i64, i64)) -> Rational {
    Rational::from(p)
}

impl IdentityCase {
    pub fn has_tag(&self, t: &str) -> bool {
        self.tags.contains(&t)
    }

    pub fn default_instance(&self) -> Instance {
        self.defaults.iter().map(|(n, p, d)| (n.to_string(), ParamValue::ratio(*p, *d))).collect()
    }

    /// Completes a partial instance with defaults and rejects unknown names.
    pub fn instance_from(&self, given: &Instance) -> Result<Instance, IdError> {
        let mut inst = self.default_instance();
        for (k, v) in given {
            if !self.params.iter().any(|p| p.name == k) {
                let names: Vec<_> = self.params.iter().map(|p| p.name).collect();
                return Err(IdError::BadParams(format!("{} takes {names:?}, not {k:?}", self.id)));
            }
            inst.insert(k.clone(), v.clone());
        }
        Ok(inst)
    }

    pub fn check(&self, inst: &Instance) -> Result<(), IdError> {
        for p in self.params {
            let v = inst.get(p.name).ok_or_else(|| IdError::BadParams(format!("missing parameter {}", p.name)))?;
            if let ParamKind::Integer { .. } = p.kind {
                match v.as_exact() {
                    Some(r) if r.denom() == &1u32 && *r >= 0 => {}
                    _ => return Err(IdError::Predicate(format!("{} must be a non-negative integer, got {v}", p.name))),
                }
            }
        }
        (self.check)(inst).map_err(IdError::Predicate)
    }

    pub fn build(&self, inst: &Instance) -> Result<Vec<Pair>, IdError> {
        self.check(inst)?;
        (self.build)(inst)
    }

    /// A random instance satisfying the predicate.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Instance {
        for _ in 0..10_000 {
            let inst: Instance = self.params.iter().map(|p| (p.name.to_string(), ParamValue::Exact(sample_param(rng, &p.kind)))).collect();
            if self.check(&inst).is_ok() {
                return inst;
            }
        }
        panic!("no admissible sample for {}", self.id)
    }

    /// Random points inside the domain; the defaults for fixed domains.
    pub fn sample_points<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<Point> {
        match &self.domain {
            Domain::Z { lo, hi } => (0..count).map(|_| Point::Z(ParamValue::Exact(sample_rational(rng, &q(*lo), &q(*hi), 12)))).collect(),
            _ => self.default_points.clone(),
        }
    }
}

pub fn sample_rational<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational, max_den: u32) -> Rational {
    loop {
        let d = rng.gen_range(2..=max_den);
        let a = Rational::from(lo * d).floor().numer().to_i64().expect("small bound");
        let b = Rational::from(hi * d).ceil().numer().to_i64().expect("small bound");
        let r = Rational::from((rng.gen_range(a..=b), d as i64));
        if *lo < r && r < *hi {
            return r;
        }
    }
}

fn sample_param<R: Rng>(rng: &mut R, k: &ParamKind) -> Rational {
    match k {
        ParamKind::Rational { lo, hi } => sample_rational(rng, &q(*lo), &q(*hi), 12),
        ParamKind::Integer { lo, hi } => Rational::from(rng.gen_range(*lo..=*hi)),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub prec: u32,
    pub tol_exp: u32,
    pub max_terms: usize,
    /// Number of power series coefficients compared in exact mode.
    pub series_len: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { prec: 60, tol_exp: 40, max_terms: 100_000, series_len: 21 }
    }
}

impl VerifyConfig {
    pub fn with_prec(prec: u32) -> Self {
        VerifyConfig { prec, tol_exp: prec.saturating_sub(20), ..Default::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Sample {
    pub pair: String,
    pub point: String,
    pub lhs: String,
    pub rhs: String,
    pub abs: String,
    pub rel: String,
    /// Some(equal) when both sides are exact rationals.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesCheck {
    pub pair: String,
    pub degree: usize,
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_difference: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub wall_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub case: String,
    pub params: Instance,
    pub mode: Mode,
    pub precision: u32,
    pub tol_exp: u32,
    pub samples: Vec<Sample>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<SeriesCheck>,
    pub max_rel: String,
    pub terms_used: usize,
    pub pass: bool,
    pub timing: Timing,
}

impl VerificationReport {
    pub fn max_rel_f64(&self) -> f64 {
        self.max_rel.parse().unwrap_or(f64::INFINITY)
    }
}

fn sci(f: &Float) -> String {
    if f.is_zero() {
        "0".into()
    } else {
        f.to_string_radix(10, Some(4))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::None => write!(f, "-"),
            Point::Z(z) => write!(f, "z={z}"),
            Point::XY(x, y) => write!(f, "(x,y)=({x},{y})"),
        }
    }
}

/// Both sides of every pair evaluated separately at every point; in exact
/// mode also compared as power series in z.
fn ctx_err(pair: &str, point: String) -> impl FnOnce(IdError) -> IdError + '_ {
    move |e| IdError::Eval { pair: pair.to_string(), point, source: Box::new(e) }
}

pub fn verify(case: &IdentityCase, inst: &Instance, points: &[Point], cfg: &VerifyConfig) -> Result<VerificationReport, IdError> {
    let start = Instant::now();
    let pairs = case.build(inst)?;
    let digits = cfg.prec + 10;
    let ctx = EvalCtx { digits, max_terms: cfg.max_terms, accept: cfg.tol_exp + 5 };
    let bits = digits_to_bits(digits);
    let tol = ten_pow_neg(cfg.tol_exp as i64, bits);
    let mut samples = Vec::new();
    let mut series = Vec::new();
    let mut max_rel = Float::with_val(bits, 0);
    let mut terms_used = 0;
    let mut pass = true;

    for pair in &pairs {
        if case.mode == Mode::Exact && matches!(case.domain, Domain::Z { .. }) {
            let len = cfg.series_len;
            let l = eval_series(&pair.lhs, len).map_err(ctx_err(&pair.label, "series".into()))?;
            let r = eval_series(&pair.rhs, len).map_err(ctx_err(&pair.label, "series".into()))?;
            let diff = l.first_difference(&r);
            pass &= diff.is_none();
            series.push(SeriesCheck { pair: pair.label.clone(), degree: len - 1, equal: diff.is_none(), first_difference: diff });
        }
        for p in points {
            let (l, tl) = eval_at(&pair.lhs, p, &ctx).map_err(ctx_err(&pair.label, p.to_string()))?;
            let (r, tr) = eval_at(&pair.rhs, p, &ctx).map_err(ctx_err(&pair.label, p.to_string()))?;
            terms_used += tl + tr;
            let exact = match (&l, &r) {
                (ParamValue::Exact(a), ParamValue::Exact(b)) => Some(a == b),
                _ => None,
            };
            let (lc, rc) = (l.to_complex_at(digits), r.to_complex_at(digits));
            let abs = (&lc - &rc).abs();
            let scale = lc.abs().max(&rc.abs());
            // an exact zero on one side has no scale of its own
            let zero_side = matches!(&l, ParamValue::Exact(q) if *q == 0) || matches!(&r, ParamValue::Exact(q) if *q == 0);
            let rel = if scale.is_zero() {
                Float::with_val(bits, 0)
            } else if zero_side {
                abs.clone()
            } else {
                Float::with_val(bits, &abs / &scale)
            };
            let ok = match exact {
                Some(e) => e,
                None => rel < tol,
            };
            pass &= ok;
            if rel > max_rel {
                max_rel = rel.clone();
            }
            samples.push(Sample {
                pair: pair.label.clone(),
                point: p.to_string(),
                lhs: decimal(&l),
                rhs: decimal(&r),
                abs: sci(&abs),
                rel: sci(&rel),
                exact,
                pass: ok,
            });
        }
    }
    Ok(VerificationReport {
        case: case.id.to_string(),
        params: inst.clone(),
        mode: case.mode,
        precision: cfg.prec,
        tol_exp: cfg.tol_exp,
        samples,
        series,
        max_rel: sci(&max_rel),
        terms_used,
        pass,
        timing: Timing { wall_ms: start.elapsed().as_millis() as u64 },
    })
}

fn decimal(v: &ParamValue) -> String {
    match v {
        ParamValue::Exact(q) => q.to_string(),
        ParamValue::Approx(z) => z.to_decimal(30),
    }
}

/// Relative difference of two values at the given working precision.
pub fn rel_diff(a: &ParamValue, b: &ParamValue, digits: u32) -> Float {
    APComplex::rel_diff(&a.to_complex_at(digits), &b.to_complex_at(digits))
}
