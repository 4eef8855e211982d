//! Residuals of the symmetric-square equation for the four double-series
//! solutions. Prefactors z^α (1-z)^β are moved into the operator (θ ↦ θ + r
//! with r = α + βz/(z-1)), so no branch of a power is ever evaluated.

use rug::{Float, Rational};
use serde::Serialize;

use super::cases::spap0_spec;
use super::IdError;
use crate::exactnum::{digits_to_bits, ten_pow_neg, APComplex, ParamValue};
use crate::kdf::{eval_jet, eval_line_jet, Curve, KdFSpec};
use crate::thetaops::{build_symsq, RatFunc, ThetaOperator, Var, NVARS};

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Report {
    pub which: u8,
    pub a: String,
    pub b: String,
    pub c: String,
    pub z0: String,
    pub precision: u32,
    pub residual: String,
    pub control: String,
    pub pass: bool,
}

/// Evaluation point used when none is given: interior to the region of the
/// arguments of each solution.
pub fn default_z0(which: u8) -> Rational {
    match which {
        2 => Rational::from((7, 10)),
        3 => Rational::from(-2),
        _ => Rational::from((3, 10)),
    }
}

struct Solution {
    spec: KdFSpec,
    phi: [RatFunc; 2],
    alpha: Rational,
    beta: Rational,
}

fn pv(q: &Rational) -> ParamValue {
    ParamValue::Exact(q.clone())
}

fn solution(which: u8, a: &Rational, b: &Rational, c: &Rational) -> Result<Solution, IdError> {
    let h = Rational::from((1, 2));
    let one = Rational::from(1);
    let e = |q: Rational| ParamValue::Exact(q);
    let ab = Rational::from(a + b);
    let z = RatFunc::var(Var::Z);
    let r1 = RatFunc::one();
    Ok(match which {
        0 => Solution { spec: spap0_spec(&pv(a), &pv(b), &pv(c)), phi: [z.clone(), &r1 - &z], alpha: Rational::new(), beta: Rational::new() },
        1 => Solution {
            spec: KdFSpec::f1220(
                e(h.clone()),
                e(Rational::from(a - b) + &h),
                e(Rational::from(&ab - c) + &h),
                e(Rational::from(b - a) + &h),
                e(Rational::from(c - &ab) + &h),
                e(c.clone()),
                e(Rational::from(2) - c.clone()),
            ),
            phi: [z.clone(), z.div(&(&z - &r1))],
            alpha: Rational::from(&one - c),
            beta: Rational::from(c - &ab) - &h,
        },
        2 => Solution {
            spec: KdFSpec::f1220(
                e(h.clone()),
                e(Rational::from(a - b) + &h),
                e(Rational::from(c - &h)),
                e(Rational::from(b - a) + &h),
                e(Rational::from((3, 2)) - c.clone()),
                e(Rational::from(&ab - c) + 1u32),
                e(Rational::from(c - &ab) + 1u32),
            ),
            phi: [&r1 - &z, &r1 - &z.recip()],
            alpha: Rational::from(&h - c),
            beta: Rational::from(c - &ab),
        },
        3 => Solution {
            spec: KdFSpec::f1220(
                e(h.clone()),
                e(Rational::from(c - &h)),
                e(Rational::from(&ab - c) + &h),
                e(Rational::from((3, 2)) - c.clone()),
                e(Rational::from(c - &ab) + &h),
                e(Rational::from(a - b) + 1u32),
                e(Rational::from(b - a) + 1u32),
            ),
            phi: [z.recip(), (&r1 - &z).recip()],
            alpha: Rational::from(&h - c),
            beta: Rational::from(c - &ab) - &h,
        },
        _ => return Err(IdError::BadParams(format!("solution index {which} is not in 0..=3"))),
    })
}

/// Lower parameters of the solution's series must avoid zero and the negative integers.
pub fn theorem1_params_ok(which: u8, a: &Rational, b: &Rational, c: &Rational) -> Result<(), IdError> {
    let s = solution(which, a, b, c)?;
    let lower: &[&str] = match which {
        0 => &["c", "q1", "q2"],
        _ => &["b", "c"],
    };
    for n in lower {
        let v = s.spec.param(n);
        if v.nonpositive_integer().is_some() {
            return Err(IdError::Predicate(format!("lower parameter {n} = {v} is zero or a negative integer")));
        }
    }
    Ok(())
}

fn at(f: &RatFunc, z0: &Rational) -> Result<Rational, IdError> {
    let mut point: [Rational; NVARS] = Default::default();
    point[Var::Z.idx()] = z0.clone();
    f.eval(&point).ok_or_else(|| IdError::Domain(format!("pole of {f} at z = {z0}")))
}

/// θ^k H for k = 0..=3 where H(z) = F(φ1(z), φ2(z)).
fn theta_jet(s: &Solution, z0: &Rational, digits: u32, max_terms: usize) -> Result<Vec<APComplex>, IdError> {
    let d = digits;
    let mut dphi = [[Rational::new(), Rational::new(), Rational::new(), Rational::new()], Default::default()];
    for (t, phi) in s.phi.iter().enumerate() {
        let mut f = phi.clone();
        for k in 0..4 {
            dphi[t][k] = at(&f, z0)?;
            f = f.deriv(Var::Z);
        }
    }
    let jet = eval_jet(&s.spec, &pv(&dphi[0][0]), &pv(&dphi[1][0]), 3, d, max_terms)?;
    let p = |i: usize, j: usize| jet.get(i, j).expect("order 3 jet").clone();
    let q = |t: usize, k: usize| APComplex::from_rational(&dphi[t][k], d);
    let (x1, x2, x3) = (q(0, 1), q(0, 2), q(0, 3));
    let (y1, y2, y3) = (q(1, 1), q(1, 2), q(1, 3));
    let three = Rational::from(3);
    let two = Rational::from(2);
    let sum = |v: Vec<APComplex>| v.iter().fold(APComplex::zero(d), |acc, t| &acc + t);

    let h1 = sum(vec![&p(1, 0) * &x1, &p(0, 1) * &y1]);
    let h2 = sum(vec![
        &p(2, 0) * &x1.sqr(),
        (&(&p(1, 1) * &x1) * &y1).scale_q(&two),
        &p(0, 2) * &y1.sqr(),
        &p(1, 0) * &x2,
        &p(0, 1) * &y2,
    ]);
    let h3 = sum(vec![
        &p(3, 0) * &x1.powi(3),
        (&(&p(2, 1) * &x1.sqr()) * &y1).scale_q(&three),
        (&(&p(1, 2) * &x1) * &y1.sqr()).scale_q(&three),
        &p(0, 3) * &y1.powi(3),
        (&(&p(2, 0) * &x1) * &x2).scale_q(&three),
        (&p(1, 1) * &(&(&x1 * &y2) + &(&x2 * &y1))).scale_q(&three),
        (&(&p(0, 2) * &y1) * &y2).scale_q(&three),
        &p(1, 0) * &x3,
        &p(0, 1) * &y3,
    ]);
    let z = APComplex::from_rational(z0, d);
    let (zh1, z2h2, z3h3) = (&z * &h1, &z.sqr() * &h2, &z.powi(3) * &h3);
    Ok(vec![
        p(0, 0),
        zh1.clone(),
        &zh1 + &z2h2,
        &(&zh1 + &z2h2.scale_q(&three)) + &z3h3,
    ])
}

/// `|Σ f_k(z0) θ^k H| / max_k |f_k(z0) θ^k H|`.
fn normalized_residual(op: &ThetaOperator, jet: &[APComplex], z0: &Rational, digits: u32) -> Result<Float, IdError> {
    let bits = digits_to_bits(digits);
    let mut total = APComplex::zero(digits);
    let mut scale = Float::with_val(bits, 0);
    for ((k, _), f) in op.terms() {
        let t = &APComplex::from_rational(&at(f, z0)?, digits) * &jet[*k as usize];
        scale = scale.max(&t.abs());
        total += &t;
    }
    if scale.is_zero() {
        return Ok(scale);
    }
    Ok(total.abs() / scale)
}

fn operator(a: &Rational, b: &Rational, c: &Rational, s: &Solution) -> ThetaOperator {
    let k = |q: &Rational| RatFunc::constant(q.clone());
    let l = build_symsq(&k(a), &k(b), &k(c));
    if s.alpha == 0 && s.beta == 0 {
        return l;
    }
    let z = RatFunc::var(Var::Z);
    let r = &k(&s.alpha) + &(&k(&s.beta) * &z.div(&(&z - &RatFunc::one())));
    l.gauge(&r)
}

/// Residual of the symmetric-square equation for solution `which` at `z0`,
/// with a negative control where c is shifted by 10^-3 in the operator only.
pub fn verify_theorem1(which: u8, a: &Rational, b: &Rational, c: &Rational, z0: &Rational, prec: u32, max_terms: usize) -> Result<Theorem1Report, IdError> {
    theorem1_params_ok(which, a, b, c)?;
    let s = solution(which, a, b, c)?;
    let digits = prec + 10;
    let jet: Vec<APComplex> = if which == 0 {
        eval_line_jet(&s.spec, Curve::SumToOne, &pv(z0), 3, digits, max_terms)?.into_iter().map(|e| e.value.with_digits(digits)).collect()
    } else {
        theta_jet(&s, z0, digits, max_terms)?
    };
    let residual = normalized_residual(&operator(a, b, c, &s), &jet, z0, digits)?;
    let shifted = Rational::from(c + Rational::from((1, 1000)));
    let control = normalized_residual(&operator(a, b, &shifted, &s), &jet, z0, digits)?;
    let bits = digits_to_bits(digits);
    let pass = residual < ten_pow_neg(prec as i64 - 25, bits) && control > ten_pow_neg(6, bits);
    let sci = |f: &Float| if f.is_zero() { "0".to_string() } else { f.to_string_radix(10, Some(4)) };
    Ok(Theorem1Report {
        which,
        a: a.to_string(),
        b: b.to_string(),
        c: c.to_string(),
        z0: z0.to_string(),
        precision: prec,
        residual: sci(&residual),
        control: sci(&control),
        pass,
    })
}

/// Random (a, b, c) with a, b in (0, 1/2) and c in (1/5, 4/5) that are
/// admissible for all four solutions.
pub fn sample_theorem1_params<R: rand::Rng>(rng: &mut R) -> (Rational, Rational, Rational) {
    let (zero, half) = (Rational::new(), Rational::from((1, 2)));
    let (clo, chi) = (Rational::from((1, 5)), Rational::from((4, 5)));
    loop {
        let a = super::sample_rational(rng, &zero, &half, 12);
        let b = super::sample_rational(rng, &zero, &half, 12);
        let c = super::sample_rational(rng, &clo, &chi, 12);
        if (0..=3).all(|w| theorem1_params_ok(w, &a, &b, &c).is_ok()) {
            return (a, b, c);
        }
    }
}

/// Checks every solution at its default point for `count` sampled parameter sets.
pub fn theorem1_suite<R: rand::Rng>(rng: &mut R, count: usize, prec: u32, max_terms: usize) -> Result<Vec<Theorem1Report>, IdError> {
    let mut out = Vec::new();
    for _ in 0..count {
        let (a, b, c) = sample_theorem1_params(rng);
        for which in 0..=3 {
            out.push(verify_theorem1(which, &a, &b, &c, &default_z0(which), prec, max_terms)?);
        }
    }
    Ok(out)
}
