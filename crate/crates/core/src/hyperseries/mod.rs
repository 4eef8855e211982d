//! Univariate generalized hypergeometric series pFq: summation with a
//! rigorous tail bound, exact terminating sums, extrapolated sums at z = 1,
//! the Gauss value at 1, and the Pfaff/Euler transformations.

pub mod extrapolate;
mod transform;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{
    digits_to_bits, gamma_param, rgamma_param, ten_pow_neg, APComplex, ParamValue, PoleError,
};

pub use transform::{euler_transform, pfaff_transform, Transformed};

/// Guard digits carried while summing.
pub const GUARD_DIGITS: u32 = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series does not converge: {0}")]
    NoConvergence(String),
    #[error("lower parameter vanishes at term {index} before the series terminates")]
    UndefinedSeries { index: usize },
    #[error("more than {0} terms needed")]
    MaxTermsExceeded(usize),
    #[error("convergence condition violated: {0}")]
    ConvergenceViolation(String),
    #[error("expected a 2F1, got {upper}F{lower}")]
    Shape { upper: usize, lower: usize },
    #[error(transparent)]
    Pole(#[from] PoleError),
}

/// Parameters of `pFq(upper; lower; z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "pFq")]
pub struct PFQSpec {
    pub upper: Vec<ParamValue>,
    pub lower: Vec<ParamValue>,
}

/// A summed series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: ParamValue,
    pub terms_used: usize,
    pub terminated: bool,
    pub converged: bool,
    /// Relative error estimate when the value comes from extrapolation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_estimate: Option<f64>,
}

impl PFQSpec {
    pub fn new(upper: Vec<ParamValue>, lower: Vec<ParamValue>) -> Self {
        PFQSpec { upper, lower }
    }

    pub fn f21(a: ParamValue, b: ParamValue, c: ParamValue) -> Self {
        PFQSpec { upper: vec![a, b], lower: vec![c] }
    }

    pub fn is_exact(&self) -> bool {
        self.upper.iter().chain(&self.lower).all(ParamValue::is_exact)
    }

    /// Parameters sorted by value within each list, for structural comparison.
    pub fn canonical(&self) -> PFQSpec {
        let key = |p: &ParamValue| match p {
            ParamValue::Exact(q) => (0u8, q.clone(), String::new()),
            ParamValue::Approx(z) => (1u8, Rational::new(), z.to_string()),
        };
        let mut upper = self.upper.clone();
        let mut lower = self.lower.clone();
        upper.sort_by_key(key);
        lower.sort_by_key(key);
        PFQSpec { upper, lower }
    }

    /// Index N at which the series is cut by an exact upper parameter -N.
    /// Errors when an exact lower parameter -M with M < N vanishes first.
    pub fn termination_index(&self) -> Result<Option<usize>, SeriesError> {
        let n = self
            .upper
            .iter()
            .filter_map(|u| match u {
                ParamValue::Exact(_) => u.nonpositive_integer(),
                ParamValue::Approx(_) => None,
            })
            .map(|v| (-v) as usize)
            .min();
        let Some(n) = n else { return Ok(None) };
        for l in &self.lower {
            if let Some(m) = l.nonpositive_integer() {
                let m = (-m) as usize;
                if m < n {
                    return Err(SeriesError::UndefinedSeries { index: m + 1 });
                }
            }
        }
        Ok(Some(n))
    }

    /// Exact ratio t_{k+1}/t_k without the z factor, or None if it is 0/0 or
    /// has a vanishing denominator.
    pub fn term_ratio_exact(&self, k: usize) -> Option<Rational> {
        let mut num = Rational::from(1);
        let mut den = Rational::from(k as u64 + 1);
        for u in &self.upper {
            num *= Rational::from(u.as_exact()? + k as u64);
        }
        for l in &self.lower {
            den *= Rational::from(l.as_exact()? + k as u64);
        }
        if den == 0 {
            return None;
        }
        Some(num / den)
    }

    /// Exact coefficients of z^0..z^n (zero past the termination point).
    pub fn coefficients(&self, n: usize) -> Result<Vec<Rational>, SeriesError> {
        let cut = self.termination_index()?;
        let mut out = Vec::with_capacity(n + 1);
        let mut t = Rational::from(1);
        for k in 0..=n {
            if cut.is_some_and(|c| k > c) {
                out.push(Rational::new());
                continue;
            }
            out.push(t.clone());
            if cut == Some(k) {
                continue;
            }
            let r = self.term_ratio_exact(k).ok_or(SeriesError::UndefinedSeries { index: k + 1 })?;
            t *= r;
        }
        Ok(out)
    }
}

fn abs_f64(p: &ParamValue) -> f64 {
    match p {
        ParamValue::Exact(q) => q.to_f64().abs(),
        ParamValue::Approx(z) => z.abs_f64(),
    }
}

/// Upper bound for |t_{j+1}/t_j| valid for every j >= k, or None when no
/// bound below 1 is available yet.
fn ratio_bound(spec: &PFQSpec, zabs: f64, k: usize) -> Option<f64> {
    let j = k as f64;
    let ua: Vec<f64> = spec.upper.iter().map(abs_f64).collect();
    let la: Vec<f64> = spec.lower.iter().map(abs_f64).collect();
    if la.iter().any(|&l| j - l < 1.0) {
        return None;
    }
    let mut r = zabs;
    let mut lowers = la.iter();
    let mut factorial_used = false;
    for &u in &ua {
        match lowers.next() {
            Some(&l) => r *= ((j + u) / (j - l)).max(1.0),
            None if !factorial_used => {
                r *= ((j + u) / (j + 1.0)).max(1.0);
                factorial_used = true;
            }
            None => return None,
        }
    }
    if !factorial_used {
        r /= j + 1.0;
    }
    if r < 1.0 {
        Some(r)
    } else {
        None
    }
}

fn precision_ok(precision: u32) -> u32 {
    precision.max(5)
}

/// Evaluates `pFq(spec; z)`.
pub fn eval_pfq(spec: &PFQSpec, z: &ParamValue, precision: u32, max_terms: usize) -> Result<SeriesValue, SeriesError> {
    let precision = precision_ok(precision);
    if z.is_zero() {
        return Ok(SeriesValue {
            value: ParamValue::int(1),
            terms_used: 1,
            terminated: true,
            converged: true,
            error_estimate: None,
        });
    }
    if let Some(n) = spec.termination_index()? {
        return sum_terminating(spec, z, n, precision);
    }
    let p = spec.upper.len();
    let q = spec.lower.len();
    let zabs = abs_f64(z);
    if p > q + 1 {
        return Err(SeriesError::NoConvergence(format!("{p}F{q} diverges for z != 0")));
    }
    if p == q + 1 {
        let is_one = match z {
            ParamValue::Exact(v) => *v == 1,
            ParamValue::Approx(c) => c.is_real() && *c.re() == 1,
        };
        if is_one {
            return sum_at_one(spec, precision, max_terms);
        }
        let is_minus_one = match z {
            ParamValue::Exact(v) => *v == -1,
            ParamValue::Approx(c) => c.is_real() && *c.re() == -1,
        };
        if is_minus_one {
            return sum_at_minus_one(spec, precision, max_terms);
        }
        if zabs >= 1.0 {
            return Err(SeriesError::NoConvergence(format!("|z| = {zabs} >= 1")));
        }
    }
    sum_numeric(spec, z, precision, max_terms)
}

fn sum_terminating(spec: &PFQSpec, z: &ParamValue, n: usize, precision: u32) -> Result<SeriesValue, SeriesError> {
    if let (true, ParamValue::Exact(zq)) = (spec.is_exact(), z) {
        let mut s = Rational::new();
        let mut t = Rational::from(1);
        for k in 0..=n {
            s += &t;
            if k == n {
                break;
            }
            let r = spec.term_ratio_exact(k).ok_or(SeriesError::UndefinedSeries { index: k + 1 })?;
            t *= r;
            t *= zq;
        }
        return Ok(SeriesValue {
            value: ParamValue::Exact(s),
            terms_used: n + 1,
            terminated: true,
            converged: true,
            error_estimate: None,
        });
    }
    let w = precision + GUARD_DIGITS;
    let zc = z.to_complex_at(w);
    let ups: Vec<APComplex> = spec.upper.iter().map(|u| u.to_complex_at(w)).collect();
    let lows: Vec<APComplex> = spec.lower.iter().map(|l| l.to_complex_at(w)).collect();
    let mut s = APComplex::zero(w);
    let mut t = APComplex::one(w);
    for k in 0..=n {
        s += &t;
        if k == n {
            break;
        }
        t = next_term(&t, &ups, &lows, &zc, k).ok_or(SeriesError::UndefinedSeries { index: k + 1 })?;
    }
    Ok(SeriesValue {
        value: ParamValue::Approx(s.with_digits(precision)),
        terms_used: n + 1,
        terminated: true,
        converged: true,
        error_estimate: None,
    })
}

fn next_term(t: &APComplex, ups: &[APComplex], lows: &[APComplex], z: &APComplex, k: usize) -> Option<APComplex> {
    let kq = Rational::from(k as u64);
    let mut num = t * z;
    for u in ups {
        num = &num * &u.add_q(&kq);
    }
    let mut den = APComplex::from_i64(k as i64 + 1, t.digits());
    for l in lows {
        let lk = l.add_q(&kq);
        if ParamValue::Approx(lk.clone()).nonpositive_integer() == Some(0) {
            return None;
        }
        den = &den * &lk;
    }
    Some(&num / &den)
}

fn sum_numeric(spec: &PFQSpec, z: &ParamValue, precision: u32, max_terms: usize) -> Result<SeriesValue, SeriesError> {
    let w = precision + GUARD_DIGITS;
    let bits = digits_to_bits(w);
    let zc = z.to_complex_at(w);
    let zabs = abs_f64(z);
    let ups: Vec<APComplex> = spec.upper.iter().map(|u| u.to_complex_at(w)).collect();
    let lows: Vec<APComplex> = spec.lower.iter().map(|l| l.to_complex_at(w)).collect();
    let tol = ten_pow_neg(precision as i64 + 2, bits);
    let mut s = APComplex::zero(w);
    let mut t = APComplex::one(w);
    for k in 0..max_terms {
        s += &t;
        if let Some(r) = ratio_bound(spec, zabs, k) {
            let tail = Float::with_val(bits, t.abs() * r / (1.0 - r));
            let scale = s.abs().max(&Float::with_val(bits, 1e-300));
            if tail <= Float::with_val(bits, &tol * &scale) {
                return Ok(SeriesValue {
                    value: ParamValue::Approx(s.with_digits(precision)),
                    terms_used: k + 1,
                    terminated: false,
                    converged: true,
                    error_estimate: None,
                });
            }
        }
        t = next_term(&t, &ups, &lows, &zc, k).ok_or(SeriesError::UndefinedSeries { index: k + 1 })?;
        if t.is_zero() {
            return Ok(SeriesValue {
                value: ParamValue::Approx(s.with_digits(precision)),
                terms_used: k + 1,
                terminated: true,
                converged: true,
                error_estimate: None,
            });
        }
    }
    Err(SeriesError::MaxTermsExceeded(max_terms))
}

/// Re(sum lower - sum upper), the decay exponent of pFq(1) terms.
pub fn excess_at_one(spec: &PFQSpec) -> f64 {
    spec.lower.iter().map(ParamValue::re_f64).sum::<f64>() - spec.upper.iter().map(ParamValue::re_f64).sum::<f64>()
}

/// Node window and working digits for the extrapolated sums at z = 1 and -1.
fn at_one_window(precision: u32) -> (usize, usize, usize, u32) {
    if precision <= 70 {
        (400, 800, 41, precision + 40)
    } else {
        (800, 1600, 61, precision + 90)
    }
}

fn sum_at_one(spec: &PFQSpec, precision: u32, max_terms: usize) -> Result<SeriesValue, SeriesError> {
    let s_excess = excess_at_one(spec);
    if s_excess <= 0.0 {
        return Err(SeriesError::NoConvergence(format!(
            "at z = 1 the parameter excess {s_excess} is not positive"
        )));
    }
    let (lo, hi, count, w) = at_one_window(precision);
    if hi > max_terms {
        return Err(SeriesError::MaxTermsExceeded(max_terms));
    }
    let ups: Vec<APComplex> = spec.upper.iter().map(|u| u.to_complex_at(w)).collect();
    let lows: Vec<APComplex> = spec.lower.iter().map(|l| l.to_complex_at(w)).collect();
    let one = APComplex::one(w);
    let node_list = extrapolate::nodes(lo, hi, count);
    let mut sums = Vec::with_capacity(count);
    let mut s = APComplex::zero(w);
    let mut t = APComplex::one(w);
    let mut next_node = node_list.iter().peekable();
    for k in 0..=hi {
        s += &t;
        // partial sum with terms 0..=k has k+1 terms
        if next_node.peek().is_some_and(|&&n| n == k + 1) {
            sums.push((k + 1, s.clone()));
            next_node.next();
        }
        t = next_term(&t, &ups, &lows, &one, k).ok_or(SeriesError::UndefinedSeries { index: k + 1 })?;
    }
    // S_N - S ~ N^{-s}
    let mut p = APComplex::zero(w);
    for l in &lows {
        p = &p - l;
    }
    for u in &ups {
        p = &p + u;
    }
    let solve_digits = w + 160;
    let ex = extrapolate::limit_from_partial_sums(&sums, &p, solve_digits)
        .ok_or_else(|| SeriesError::NoConvergence("singular extrapolation system".into()))?;
    Ok(SeriesValue {
        value: ParamValue::Approx(ex.value.with_digits(precision)),
        terms_used: hi + 1,
        terminated: false,
        converged: extrapolate::meets(ex.error_estimate, precision),
        error_estimate: Some(ex.error_estimate),
    })
}

/// Alternating sum at z = -1: the even-indexed partial sums satisfy
/// `S_N = S + sum_k g_k N^(-1-s-k)`.
fn sum_at_minus_one(spec: &PFQSpec, precision: u32, max_terms: usize) -> Result<SeriesValue, SeriesError> {
    let s_excess = excess_at_one(spec);
    if s_excess <= -1.0 {
        return Err(SeriesError::NoConvergence(format!(
            "at z = -1 the parameter excess {s_excess} is not above -1"
        )));
    }
    let (lo, hi, count, w) = at_one_window(precision);
    if hi > max_terms {
        return Err(SeriesError::MaxTermsExceeded(max_terms));
    }
    let ups: Vec<APComplex> = spec.upper.iter().map(|u| u.to_complex_at(w)).collect();
    let lows: Vec<APComplex> = spec.lower.iter().map(|l| l.to_complex_at(w)).collect();
    let minus_one = APComplex::from_i64(-1, w);
    let node_list: Vec<usize> = extrapolate::nodes(lo / 2, hi / 2, count).into_iter().map(|n| 2 * n).collect();
    let mut sums = Vec::with_capacity(count);
    let mut s = APComplex::zero(w);
    let mut t = APComplex::one(w);
    let mut next_node = node_list.iter().peekable();
    for k in 0..=hi {
        s += &t;
        if next_node.peek().is_some_and(|&&n| n == k + 1) {
            sums.push((k + 1, s.clone()));
            next_node.next();
        }
        t = next_term(&t, &ups, &lows, &minus_one, k).ok_or(SeriesError::UndefinedSeries { index: k + 1 })?;
    }
    let mut p = APComplex::from_i64(-1, w);
    for l in &lows {
        p = &p - l;
    }
    for u in &ups {
        p = &p + u;
    }
    let ex = extrapolate::limit_from_partial_sums(&sums, &p, w + 160)
        .ok_or_else(|| SeriesError::NoConvergence("singular extrapolation system".into()))?;
    Ok(SeriesValue {
        value: ParamValue::Approx(ex.value.with_digits(precision)),
        terms_used: hi + 1,
        terminated: false,
        converged: extrapolate::meets(ex.error_estimate, precision),
        error_estimate: Some(ex.error_estimate),
    })
}

/// Γ(c)Γ(c−a−b) / (Γ(c−a)Γ(c−b)).
pub fn gauss_value_at_1(a: &ParamValue, b: &ParamValue, c: &ParamValue, precision: u32) -> Result<APComplex, SeriesError> {
    let cab = c.sub(a).sub(b);
    let ok = match &cab {
        ParamValue::Exact(q) => *q > 0,
        ParamValue::Approx(z) => *z.re() > 0,
    };
    if !ok {
        return Err(SeriesError::ConvergenceViolation(format!("Re(c-a-b) = {} <= 0", cab.re_f64())));
    }
    let w = precision + GUARD_DIGITS;
    let g = &gamma_param(c, w)? * &gamma_param(&cab, w)?;
    let r = &rgamma_param(&c.sub(a), w) * &rgamma_param(&c.sub(b), w);
    Ok((&g * &r).with_digits(precision))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(p: i64, q: i64) -> ParamValue {
        ParamValue::ratio(p, q)
    }

    fn approx_eq(v: &ParamValue, want: &APComplex, digits: i64) -> bool {
        APComplex::rel_diff(&v.to_complex(want.digits()), want) < ten_pow_neg(digits, 300)
    }

    #[test]
    fn zero_argument() {
        let s = PFQSpec::f21(pv(1, 3), pv(2, 5), pv(3, 7));
        assert_eq!(eval_pfq(&s, &pv(0, 1), 30, 1000).unwrap().value, ParamValue::int(1));
    }

    #[test]
    fn log_two() {
        let s = PFQSpec::f21(pv(1, 1), pv(1, 1), pv(2, 1));
        let v = eval_pfq(&s, &pv(1, 2), 50, 100000).unwrap();
        let ln2 = APComplex::from_i64(2, 60).ln().scale_q(&Rational::from(2));
        assert!(approx_eq(&v.value, &ln2, 48));
        assert!(v.converged && !v.terminated);
    }

    #[test]
    fn terminating_is_exact() {
        let s = PFQSpec::f21(pv(1, 1), pv(-1, 1), pv(1, 2));
        let v = eval_pfq(&s, &pv(1, 3), 30, 100).unwrap();
        assert_eq!(v.value, pv(1, 3));
        assert!(v.terminated);
    }

    #[test]
    fn blocked_lower_parameter() {
        let s = PFQSpec::f21(pv(-3, 1), pv(1, 2), pv(-1, 1));
        assert!(matches!(eval_pfq(&s, &pv(1, 3), 30, 100), Err(SeriesError::UndefinedSeries { .. })));
        let ok = PFQSpec::f21(pv(-2, 1), pv(1, 2), pv(-4, 1));
        assert!(eval_pfq(&ok, &pv(1, 3), 30, 100).is_ok());
    }

    #[test]
    fn divergent_rejected() {
        let s = PFQSpec::f21(pv(1, 3), pv(1, 5), pv(1, 2));
        assert!(matches!(eval_pfq(&s, &pv(3, 2), 30, 100), Err(SeriesError::NoConvergence(_))));
        assert!(matches!(eval_pfq(&s, &pv(1, 1), 30, 1000), Err(SeriesError::NoConvergence(_))));
    }

    #[test]
    fn max_terms() {
        let s = PFQSpec::f21(pv(1, 3), pv(1, 5), pv(1, 2));
        assert!(matches!(eval_pfq(&s, &pv(99, 100), 40, 100), Err(SeriesError::MaxTermsExceeded(100))));
    }

    #[test]
    fn gauss_examples() {
        let one = gauss_value_at_1(&pv(1, 3), &pv(0, 1), &pv(5, 4), 40).unwrap();
        assert!(APComplex::rel_diff(&one, &APComplex::one(40)) < 1e-38);
        let v = gauss_value_at_1(&pv(1, 2), &pv(1, 2), &pv(2, 1), 40).unwrap();
        let want = &APComplex::from_i64(4, 40) / &APComplex::pi(40);
        assert!(APComplex::rel_diff(&v, &want) < 1e-38);
        assert!(matches!(
            gauss_value_at_1(&pv(1, 2), &pv(1, 2), &pv(1, 1), 40),
            Err(SeriesError::ConvergenceViolation(_))
        ));
    }

    #[test]
    fn sum_at_one_high_precision() {
        let s = PFQSpec::f21(pv(2, 9), pv(1, 7), pv(5, 3));
        let v = eval_pfq(&s, &pv(1, 1), 110, 100000).unwrap();
        assert!(v.converged, "{:?}", v.error_estimate);
        let g = gauss_value_at_1(&pv(2, 9), &pv(1, 7), &pv(5, 3), 120).unwrap();
        assert!(approx_eq(&v.value, &g, 105));
    }

    #[test]
    fn sum_at_one_matches_gauss() {
        // 2F1(1/4,1/4;1;1) = Gamma(1/2) / Gamma(3/4)^2
        let s = PFQSpec::f21(pv(1, 4), pv(1, 4), pv(1, 1));
        let v = eval_pfq(&s, &pv(1, 1), 40, 100000).unwrap();
        let g = gauss_value_at_1(&pv(1, 4), &pv(1, 4), &pv(1, 1), 50).unwrap();
        assert!(approx_eq(&v.value, &g, 38), "{} vs {}", v.value, g);
        let g34 = crate::exactnum::gamma(&APComplex::from_f64(0.75, 50)).unwrap();
        let closed = &APComplex::pi(50).sqrt() / &g34.sqr();
        assert!(APComplex::rel_diff(&g, &closed) < 1e-45);
        assert!(g.to_decimal(9).starts_with("1.1803406"), "{}", g.to_decimal(9));
    }

    #[test]
    fn coefficient_list_terminates() {
        let s = PFQSpec::f21(pv(-2, 1), pv(1, 1), pv(1, 1));
        let c = s.coefficients(4).unwrap();
        assert_eq!(c, vec![Rational::from(1), Rational::from(-2), Rational::from(1), Rational::new(), Rational::new()]);
    }

    #[test]
    fn json_shape() {
        let s = PFQSpec::new(vec![pv(1, 2), pv(-3, 1)], vec![pv(2, 1)]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"kind":"pFq","upper":["1/2","-3"],"lower":["2"]}"#);
        let back: PFQSpec = serde_json::from_str(r#"{"upper": ["1/2","−3"], "lower": ["2"], "kind": "pFq"}"#).unwrap();
        assert_eq!(back, s);
    }
}
