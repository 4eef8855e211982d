//! Expression trees for identity sides, with a multiprecision evaluator and
//! an exact truncated-power-series evaluator.

use rug::{Float, Rational};
use serde::Serialize;

use super::series::QSeries;
use super::IdError;
use crate::exactnum::{gamma_param, pochhammer_q, ten_pow_neg, APComplex, ParamValue};
use crate::hyperseries::{eval_pfq, PFQSpec};
use crate::kdf::{self, CoeffTable, KdFSpec};

/// Series arguments as functions of the sample point.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Arg {
    Z,
    OneMinusZ,
    /// z/(z-1)
    ZOverZMinusOne,
    InvZ,
    /// 1/(1-z)
    InvOneMinusZ,
    ZSquared,
    OneMinusZSquared,
    X,
    Y,
    InvX,
    InvY,
    /// x(1-y)
    XOneMinusY,
    /// y(1-x)
    YOneMinusX,
}

/// A sample point: none (constant identities), a value of z, or a pair (x, y).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Point {
    None,
    Z(ParamValue),
    XY(ParamValue, ParamValue),
}

impl Arg {
    pub fn value(&self, p: &Point) -> Result<ParamValue, IdError> {
        let one = ParamValue::int(1);
        let need_z = || match p {
            Point::Z(z) => Ok(z.clone()),
            _ => Err(IdError::Domain(format!("{self:?} needs a point z"))),
        };
        let need_xy = || match p {
            Point::XY(x, y) => Ok((x.clone(), y.clone())),
            _ => Err(IdError::Domain(format!("{self:?} needs a point (x, y)"))),
        };
        Ok(match self {
            Arg::Z => need_z()?,
            Arg::OneMinusZ => one.sub(&need_z()?),
            Arg::ZOverZMinusOne => {
                let z = need_z()?;
                z.div(&z.sub(&one))?
            }
            Arg::InvZ => one.div(&need_z()?)?,
            Arg::InvOneMinusZ => one.div(&one.sub(&need_z()?))?,
            Arg::ZSquared => {
                let z = need_z()?;
                z.mul(&z)
            }
            Arg::OneMinusZSquared => {
                let w = one.sub(&need_z()?);
                w.mul(&w)
            }
            Arg::X => need_xy()?.0,
            Arg::Y => need_xy()?.1,
            Arg::InvX => one.div(&need_xy()?.0)?,
            Arg::InvY => one.div(&need_xy()?.1)?,
            Arg::XOneMinusY => {
                let (x, y) = need_xy()?;
                x.mul(&one.sub(&y))
            }
            Arg::YOneMinusX => {
                let (x, y) = need_xy()?;
                y.mul(&one.sub(&x))
            }
        })
    }

    /// Power series in z, if the argument is one.
    pub fn series(&self, len: usize) -> Option<QSeries> {
        let q = |v: i64| Rational::from(v);
        Some(match self {
            Arg::Z => QSeries::monomial(1, len),
            Arg::OneMinusZ => QSeries::from_coeffs(vec![q(1), q(-1)], len),
            Arg::ZOverZMinusOne => QSeries::from_coeffs((0..len).map(|k| if k == 0 { q(0) } else { q(-1) }).collect(), len),
            Arg::InvOneMinusZ => QSeries::from_coeffs(vec![q(1); len], len),
            Arg::ZSquared => QSeries::monomial(2, len),
            Arg::OneMinusZSquared => QSeries::from_coeffs(vec![q(1), q(-2), q(1)], len),
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "node")]
pub enum Expr {
    Const { value: ParamValue },
    Pfq { spec: PFQSpec, arg: Arg },
    Kdf { spec: KdFSpec, x: Arg, y: Arg },
    /// base^exp on the principal branch
    Pow { base: Arg, exp: ParamValue },
    /// Π Γ(num) / Π Γ(den)
    GammaRatio { num: Vec<ParamValue>, den: Vec<ParamValue> },
    /// Double-sum expansion of ₂F₁(a, b; c; z)² with inner terminating ₄F₃(1) sums.
    Chaundy { a: ParamValue, b: ParamValue, c: ParamValue, arg: Arg },
    Square { of: Box<Expr> },
    Sum { terms: Vec<Expr> },
    Prod { factors: Vec<Expr> },
    Neg { of: Box<Expr> },
}

impl Expr {
    pub fn constant(v: impl Into<ParamValue>) -> Expr {
        Expr::Const { value: v.into() }
    }
    pub fn pfq(spec: PFQSpec, arg: Arg) -> Expr {
        Expr::Pfq { spec, arg }
    }
    pub fn kdf(spec: KdFSpec, x: Arg, y: Arg) -> Expr {
        Expr::Kdf { spec, x, y }
    }
    pub fn pow(base: Arg, exp: impl Into<ParamValue>) -> Expr {
        Expr::Pow { base, exp: exp.into() }
    }
    pub fn square(e: Expr) -> Expr {
        Expr::Square { of: Box::new(e) }
    }
    pub fn sum(terms: Vec<Expr>) -> Expr {
        Expr::Sum { terms }
    }
    pub fn prod(factors: Vec<Expr>) -> Expr {
        Expr::Prod { factors }
    }
    pub fn neg(e: Expr) -> Expr {
        Expr::Neg { of: Box::new(e) }
    }

    /// Structural simplification: sorts series parameters, drops unit
    /// constants, collapses one-element products and sums, and replaces double
    /// series cut to a single row or column by the univariate series along the
    /// other axis.
    pub fn simplify(self) -> Expr {
        match self {
            Expr::Kdf { spec, x, y } => match spec.cut_indices() {
                (_, Some(0)) => Expr::Pfq { spec: spec.axis_spec(true).canonical(), arg: x },
                (Some(0), _) => Expr::Pfq { spec: spec.axis_spec(false).canonical(), arg: y },
                _ => Expr::Kdf { spec, x, y },
            },
            Expr::Prod { factors } => {
                let mut out: Vec<Expr> = factors
                    .into_iter()
                    .map(Expr::simplify)
                    .filter(|f| !matches!(f, Expr::Const { value } if *value == ParamValue::int(1)))
                    .collect();
                match out.len() {
                    0 => Expr::constant(1),
                    1 => out.remove(0),
                    _ => Expr::Prod { factors: out },
                }
            }
            Expr::Sum { terms } => {
                let mut out: Vec<Expr> = terms.into_iter().map(Expr::simplify).collect();
                if out.len() == 1 {
                    out.remove(0)
                } else {
                    Expr::Sum { terms: out }
                }
            }
            Expr::Pfq { spec, arg } => Expr::Pfq { spec: spec.canonical(), arg },
            Expr::Pow { exp, .. } if exp.is_zero() => Expr::constant(1),
            Expr::Square { of } => Expr::square(of.simplify()),
            Expr::Neg { of } => Expr::neg(of.simplify()),
            e => e,
        }
    }
}

/// Evaluation settings for the multiprecision path.
#[derive(Clone, Copy, Debug)]
pub struct EvalCtx {
    pub digits: u32,
    pub max_terms: usize,
    /// Extrapolated edge values are accepted once their error estimate is below 10^-accept.
    pub accept: u32,
}

/// Value and number of series terms used.
pub fn eval_at(e: &Expr, p: &Point, ctx: &EvalCtx) -> Result<(ParamValue, usize), IdError> {
    let d = ctx.digits;
    Ok(match e {
        Expr::Const { value } => (value.clone(), 0),
        Expr::Pfq { spec, arg } => {
            let z = arg.value(p)?;
            let v = eval_pfq(spec, &z, d, ctx.max_terms)?;
            if !v.converged {
                return Err(IdError::NoConvergence(format!("pFq at {z}: error estimate {:?}", v.error_estimate)));
            }
            (v.value, v.terms_used)
        }
        Expr::Kdf { spec, x, y } => {
            let (xv, yv) = (x.value(p)?, y.value(p)?);
            let v = kdf::eval(spec, &xv, &yv, d, ctx.max_terms)?;
            let close_enough = v.error_estimate.is_some_and(|e| e < 10f64.powi(-(ctx.accept as i32)));
            if !v.converged && !close_enough {
                return Err(IdError::NoConvergence(format!("double series at ({xv}, {yv}): error estimate {:?}", v.error_estimate)));
            }
            (v.value, v.terms_used)
        }
        Expr::Pow { base, exp } => (power(&base.value(p)?, exp, d)?, 0),
        Expr::GammaRatio { num, den } => {
            let mut acc = APComplex::one(d + 5);
            for g in num {
                acc = &acc * &gamma_param(g, d + 5)?;
            }
            for g in den {
                acc = &acc / &gamma_param(g, d + 5)?;
            }
            (ParamValue::Approx(acc.with_digits(d)), 0)
        }
        Expr::Chaundy { a, b, c, arg } => {
            let z = arg.value(p)?;
            chaundy_value(a, b, c, &z, ctx)?
        }
        Expr::Square { of } => {
            let (v, t) = eval_at(of, p, ctx)?;
            (v.mul(&v), t)
        }
        Expr::Sum { terms } => {
            let mut acc = ParamValue::int(0);
            let mut used = 0;
            for t in terms {
                let (v, u) = eval_at(t, p, ctx)?;
                acc = acc.add(&v);
                used += u;
            }
            (acc, used)
        }
        Expr::Prod { factors } => {
            let mut acc = ParamValue::int(1);
            let mut used = 0;
            for f in factors {
                let (v, u) = eval_at(f, p, ctx)?;
                acc = acc.mul(&v);
                used += u;
            }
            (acc, used)
        }
        Expr::Neg { of } => {
            let (v, t) = eval_at(of, p, ctx)?;
            (v.neg(), t)
        }
    })
}

fn power(base: &ParamValue, exp: &ParamValue, d: u32) -> Result<ParamValue, IdError> {
    if let (ParamValue::Exact(b), ParamValue::Exact(e)) = (base, exp) {
        if e.denom() == &1u32 {
            let k = e.numer().to_i32().ok_or_else(|| IdError::Domain(format!("exponent {e} too large")))?;
            if *b == 0 && k < 0 {
                return Err(IdError::Domain("0 to a negative power".into()));
            }
            return Ok(ParamValue::Exact(Rational::from(rug::ops::Pow::pow(b, k))));
        }
        if *b <= 0 {
            return Err(IdError::Branch(format!("{b}^{e} needs a positive base")));
        }
        return Ok(ParamValue::Approx(APComplex::from_rational(b, d).pow_q(e)));
    }
    let bc = base.to_complex_at(d);
    if bc.is_real() && *bc.re() <= 0 {
        return Err(IdError::Branch(format!("{base}^{exp} needs a positive base")));
    }
    Ok(ParamValue::Approx(bc.pow(&exp.to_complex_at(d))))
}

fn exact(p: &ParamValue) -> Result<Rational, IdError> {
    p.as_exact().cloned().ok_or_else(|| IdError::NotSeries("approximate parameter".into()))
}

/// Coefficient of z^k in the double-sum expansion.
pub fn chaundy_coeff(a: &Rational, b: &Rational, c: &Rational, k: usize) -> Result<Rational, IdError> {
    let h = Rational::from((1, 2));
    let kq = Rational::from(k as u64);
    let inner = PFQSpec::new(
        vec![
            ParamValue::Exact(Rational::from(-&kq) / 2u32),
            ParamValue::Exact((Rational::from(1) - &kq) / 2u32),
            ParamValue::Exact(h.clone()),
            ParamValue::Exact(Rational::from(a + b) - c + &h),
        ],
        vec![
            ParamValue::Exact(Rational::from(a + &h)),
            ParamValue::Exact(Rational::from(b + &h)),
            ParamValue::Exact(Rational::from(3u32) / 2u32 - c.clone() - &kq),
        ],
    );
    let n = inner.termination_index()?.expect("one upper parameter is -floor(k/2)");
    let s: Rational = inner.coefficients(n)?.into_iter().sum();
    let two = |r: &Rational| Rational::from(r * 2u32);
    let num = pochhammer_q(&two(a), k) * pochhammer_q(&two(b), k) * pochhammer_q(&(Rational::from(c - &h)), k);
    let den = pochhammer_q(c, k) * pochhammer_q(&(two(c) - Rational::from(1)), k) * Rational::from(crate::exactnum::factorial(k));
    if den == 0 {
        return Err(IdError::Domain(format!("vanishing denominator at k = {k}")));
    }
    Ok(num / den * s)
}

fn chaundy_value(a: &ParamValue, b: &ParamValue, c: &ParamValue, z: &ParamValue, ctx: &EvalCtx) -> Result<(ParamValue, usize), IdError> {
    let (a, b, c) = (exact(a)?, exact(b)?, exact(c)?);
    let d = ctx.digits + 10;
    let bits = crate::exactnum::digits_to_bits(d);
    let zc = z.to_complex_at(d);
    let tol = ten_pow_neg(d as i64, bits);
    let mut sum = APComplex::zero(d);
    let mut zk = APComplex::one(d);
    let mut quiet = 0;
    for k in 0..ctx.max_terms {
        let t = &APComplex::from_rational(&chaundy_coeff(&a, &b, &c, k)?, d) * &zk;
        sum += &t;
        let small = Float::with_val(bits, &tol * &sum.abs());
        quiet = if t.abs() <= small { quiet + 1 } else { 0 };
        if k > 10 && quiet >= 6 {
            return Ok((ParamValue::Approx(sum.with_digits(ctx.digits)), k + 1));
        }
        zk = &zk * &zc;
    }
    Err(IdError::NoConvergence(format!("double-sum expansion needs more than {} terms", ctx.max_terms)))
}

/// Exact truncated power series in z with `len` coefficients.
pub fn eval_series(e: &Expr, len: usize) -> Result<QSeries, IdError> {
    let arg_series = |a: &Arg| a.series(len).ok_or_else(|| IdError::NotSeries(format!("{a:?} is not a power series in z")));
    Ok(match e {
        Expr::Const { value } => QSeries::constant(exact(value)?, len),
        Expr::Pfq { spec, arg } => {
            let s = arg_series(arg)?;
            match spec.termination_index()? {
                Some(n) => s.compose_poly(&spec.coefficients(n)?),
                None => {
                    let f = spec.coefficients(len.saturating_sub(1))?;
                    s.compose(&f).ok_or_else(|| IdError::NotSeries(format!("{arg:?} does not vanish at z = 0")))?
                }
            }
        }
        Expr::Kdf { spec, x, y } => {
            let (xs, ys) = (arg_series(x)?, arg_series(y)?);
            let (ci, cj) = spec.cut_indices();
            let open = |cut: Option<usize>, s: &QSeries| match cut {
                Some(c) => Ok(c),
                None if s.constant_term() == 0 => Ok(len.saturating_sub(1)),
                None => Err(IdError::NotSeries(format!("{spec:?} does not terminate where its argument is nonzero at z = 0"))),
            };
            let (imax, jmax) = (open(ci, &xs)?, open(cj, &ys)?);
            let total = if ci.is_none() && cj.is_none() { Some(len.saturating_sub(1)) } else { None };
            let table: CoeffTable<Rational> = CoeffTable::build(spec, imax, jmax, total, 0)?;
            let powers = |s: &QSeries, n: usize| {
                let mut v = vec![QSeries::constant(Rational::from(1), len)];
                for _ in 0..n {
                    let next = v.last().expect("nonempty").mul(s);
                    v.push(next);
                }
                v
            };
            let (px, py) = (powers(&xs, imax), powers(&ys, jmax));
            let mut acc = QSeries::zero(len);
            for ((i, j), c) in table.iter() {
                if *c != 0 {
                    acc = acc.add(&px[i].mul(&py[j]).scale(c));
                }
            }
            acc
        }
        Expr::Pow { base, exp } => {
            let e = exact(exp)?;
            let s = arg_series(base)?;
            if s.constant_term() == 0 {
                let k = (e.denom() == &1u32).then(|| e.numer().to_usize()).flatten();
                let Some(k) = k else {
                    return Err(IdError::NotSeries(format!("{base:?}^{e} is not a power series")));
                };
                // the argument has the form z^v (unit); only pure powers of z occur here
                let lead = s.coeffs().iter().position(|c| *c != 0).unwrap_or(len);
                let mut unit = QSeries::from_coeffs(s.coeffs()[lead.min(len)..].to_vec(), len);
                let u0 = unit.constant_term();
                if u0 == 0 {
                    return Ok(QSeries::zero(len));
                }
                unit = unit.scale(&Rational::from(u0.recip_ref())).pow(&e).expect("unit").scale(&Rational::from(rug::ops::Pow::pow(&u0, k as i32)));
                QSeries::monomial(lead * k, len).mul(&unit)
            } else {
                let u0 = s.constant_term();
                if u0 != 1 {
                    return Err(IdError::NotSeries(format!("{base:?} does not start with 1")));
                }
                s.pow(&e).expect("constant term one")
            }
        }
        Expr::GammaRatio { .. } => return Err(IdError::NotSeries("Gamma quotient".into())),
        Expr::Chaundy { a, b, c, arg } => {
            let (a, b, c) = (exact(a)?, exact(b)?, exact(c)?);
            let f: Vec<Rational> = (0..len).map(|k| chaundy_coeff(&a, &b, &c, k)).collect::<Result<_, _>>()?;
            arg_series(arg)?.compose(&f).ok_or_else(|| IdError::NotSeries(format!("{arg:?} does not vanish at z = 0")))?
        }
        Expr::Square { of } => {
            let s = eval_series(of, len)?;
            s.mul(&s)
        }
        Expr::Sum { terms } => {
            let mut acc = QSeries::zero(len);
            for t in terms {
                acc = acc.add(&eval_series(t, len)?);
            }
            acc
        }
        Expr::Prod { factors } => {
            let mut acc = QSeries::constant(Rational::from(1), len);
            for f in factors {
                acc = acc.mul(&eval_series(f, len)?);
            }
            acc
        }
        Expr::Neg { of } => eval_series(of, len)?.scale(&Rational::from(-1)),
    })
}
