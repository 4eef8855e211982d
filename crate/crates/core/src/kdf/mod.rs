//! Bivariate hypergeometric series: the Kampé de Fériet shapes F2111 and
//! F1220, the product shape F0211, and Appell F2/F3/F4.
//!
//! Coefficients are produced by ratio steps from (0,0); matched vanishing
//! upper/lower factors are resolved as term-wise limits via ε-slopes.

mod boundary;
mod eval;
mod walk;

use std::collections::BTreeMap;

use rug::Rational;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::exactnum::{APComplex, NumError, ParamValue, Scalar};
use crate::hyperseries::{PFQSpec, SeriesError};

pub use boundary::{decay_exponent, eval_boundary, eval_line_jet, Curve};
pub use eval::{eval, eval_jet, Jet2};
use walk::{Cell, Tables};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KdfError {
    #[error("coefficient ({i},{j}) has a vanishing lower factor without a matching upper zero")]
    UndefinedCoefficient { i: usize, j: usize },
    #[error("series does not terminate in both directions")]
    NotTerminating,
    #[error("series does not converge: {0}")]
    NoConvergence(String),
    #[error("more than {0} terms needed")]
    MaxTermsExceeded(usize),
    #[error("{shape:?} takes parameters {expected:?}")]
    BadParams { shape: Shape, expected: &'static [&'static str] },
    #[error("reversal needs nonzero constant: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shape {
    F2111,
    F1220,
    F0211,
    AppellF2,
    AppellF3,
    AppellF4,
}

impl Shape {
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Shape::F2111 => &["a", "b", "p1", "p2", "c", "q1", "q2"],
            Shape::F1220 => &["a", "p1", "p2", "q1", "q2", "b", "c"],
            Shape::F0211 => &["a1", "a2", "b1", "b2", "c1", "c2"],
            Shape::AppellF2 => &["a", "b1", "b2", "c1", "c2"],
            Shape::AppellF3 => &["a1", "a2", "b1", "b2", "c"],
            Shape::AppellF4 => &["a", "b", "c1", "c2"],
        }
    }

    /// (up_n, up_i, up_j, lo_n, lo_i, lo_j) parameter names.
    #[allow(clippy::type_complexity)]
    fn role_names(self) -> ([&'static str; 2], [&'static str; 2], [&'static str; 2], [&'static str; 2], [&'static str; 1], [&'static str; 1]) {
        match self {
            Shape::F2111 => (["a", "b"], ["p1", ""], ["p2", ""], ["c", ""], ["q1"], ["q2"]),
            Shape::F1220 => (["a", ""], ["p1", "q1"], ["p2", "q2"], ["b", "c"], [""], [""]),
            Shape::F0211 => (["", ""], ["a1", "b1"], ["a2", "b2"], ["", ""], ["c1"], ["c2"]),
            Shape::AppellF2 => (["a", ""], ["b1", ""], ["b2", ""], ["", ""], ["c1"], ["c2"]),
            Shape::AppellF3 => (["", ""], ["a1", "b1"], ["a2", "b2"], ["c", ""], [""], [""]),
            Shape::AppellF4 => (["a", "b"], ["", ""], ["", ""], ["", ""], ["c1"], ["c2"]),
        }
    }
}

/// A parameter with the ε-slope used for term-wise limits.
#[derive(Clone, Debug, PartialEq)]
pub struct KParam {
    pub value: ParamValue,
    pub eps: Rational,
}

impl KParam {
    pub fn plain(value: ParamValue) -> Self {
        KParam { value, eps: Rational::new() }
    }
}

impl Serialize for KParam {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        if self.eps == 0 {
            return self.value.serialize(ser);
        }
        use serde::ser::SerializeMap;
        let mut m = ser.serialize_map(Some(2))?;
        m.serialize_entry("value", &self.value)?;
        m.serialize_entry("eps", &self.eps.to_string())?;
        m.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawKParam {
    WithSlope { value: ParamValue, eps: String },
    Plain(ParamValue),
}

impl<'de> Deserialize<'de> for KParam {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        match RawKParam::deserialize(de)? {
            RawKParam::Plain(v) => Ok(KParam::plain(v)),
            RawKParam::WithSlope { value, eps } => Ok(KParam {
                value,
                eps: crate::exactnum::parse_rational(&eps).map_err(de::Error::custom)?,
            }),
        }
    }
}

/// A bivariate series: shape plus named parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KdFSpec {
    pub shape: Shape,
    pub params: BTreeMap<String, KParam>,
}

pub(crate) struct Roles<'a> {
    pub up_n: Vec<&'a KParam>,
    pub up_i: Vec<&'a KParam>,
    pub up_j: Vec<&'a KParam>,
    pub lo_n: Vec<&'a KParam>,
    pub lo_i: Vec<&'a KParam>,
    pub lo_j: Vec<&'a KParam>,
}

impl KdFSpec {
    /// Parameters in `shape.param_names()` order.
    pub fn new(shape: Shape, values: Vec<ParamValue>) -> Result<Self, KdfError> {
        let names = shape.param_names();
        if values.len() != names.len() {
            return Err(KdfError::BadParams { shape, expected: names });
        }
        let params = names.iter().zip(values).map(|(n, v)| (n.to_string(), KParam::plain(v))).collect();
        Ok(KdFSpec { shape, params })
    }

    #[allow(clippy::too_many_arguments)]
    pub fn f2111(a: ParamValue, b: ParamValue, p1: ParamValue, p2: ParamValue, c: ParamValue, q1: ParamValue, q2: ParamValue) -> Self {
        Self::new(Shape::F2111, vec![a, b, p1, p2, c, q1, q2]).expect("arity")
    }

    #[allow(clippy::too_many_arguments)]
    pub fn f1220(a: ParamValue, p1: ParamValue, p2: ParamValue, q1: ParamValue, q2: ParamValue, b: ParamValue, c: ParamValue) -> Self {
        Self::new(Shape::F1220, vec![a, p1, p2, q1, q2, b, c]).expect("arity")
    }

    pub fn validate(&self) -> Result<(), KdfError> {
        let names = self.shape.param_names();
        let ok = self.params.len() == names.len() && names.iter().all(|n| self.params.contains_key(*n));
        if ok {
            Ok(())
        } else {
            Err(KdfError::BadParams { shape: self.shape, expected: names })
        }
    }

    pub fn param(&self, name: &str) -> &ParamValue {
        &self.params[name].value
    }

    pub fn with_slope(mut self, name: &str, eps: Rational) -> Self {
        if let Some(p) = self.params.get_mut(name) {
            p.eps = eps;
        }
        self
    }

    pub fn is_exact(&self) -> bool {
        self.params.values().all(|p| p.value.is_exact())
    }

    fn digits_hint(&self) -> u32 {
        self.params
            .values()
            .filter_map(|p| match &p.value {
                ParamValue::Approx(z) => Some(z.digits()),
                _ => None,
            })
            .min()
            .unwrap_or(60)
    }

    pub(crate) fn roles(&self) -> Roles<'_> {
        let (un, ui, uj, ln, li, lj) = self.shape.role_names();
        let pick = |names: &[&str]| -> Vec<&KParam> {
            names.iter().filter(|n| !n.is_empty()).map(|n| &self.params[*n]).collect()
        };
        Roles { up_n: pick(&un), up_i: pick(&ui), up_j: pick(&uj), lo_n: pick(&ln), lo_i: pick(&li), lo_j: pick(&lj) }
    }

    /// First index where a hard upper zero cuts the x (resp. y) direction.
    pub fn cut_indices(&self) -> (Option<usize>, Option<usize>) {
        let r = self.roles();
        let cut = |ps: &[&KParam]| {
            ps.iter()
                .filter(|p| p.eps == 0)
                .filter_map(|p| match &p.value {
                    ParamValue::Exact(_) => p.value.nonpositive_integer(),
                    _ => None,
                })
                .map(|v| (-v) as usize)
                .min()
        };
        let n = cut(&r.up_n);
        let i = cut(&r.up_i);
        let j = cut(&r.up_j);
        let min = |a: Option<usize>, b: Option<usize>| match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        (min(n, i), min(n, j))
    }

    /// The univariate series along the x axis (y = 0) or y axis (x = 0).
    pub fn axis_spec(&self, along_x: bool) -> PFQSpec {
        let r = self.roles();
        let (ui, li) = if along_x { (&r.up_i, &r.lo_i) } else { (&r.up_j, &r.lo_j) };
        let upper = r.up_n.iter().chain(ui.iter()).map(|p| p.value.clone()).collect();
        let lower = r.lo_n.iter().chain(li.iter()).map(|p| p.value.clone()).collect();
        PFQSpec { upper, lower }
    }
}

fn coeff_walk<S: Scalar>(spec: &KdFSpec, i: usize, j: usize, digits: u32) -> Result<Option<S>, KdfError> {
    let mut t: Tables<'_, S> = Tables::new(spec, None, None, digits);
    t.ensure(i + j + 1)?;
    let mut cell: Cell<S> = Cell::origin(digits);
    for k in 0..i {
        cell = cell.step(&t.n_part[k], &t.i_part[k], (k + 1, 0))?;
    }
    for k in 0..j {
        cell = cell.step(&t.n_part[i + k], &t.j_part[k], (i, k + 1))?;
    }
    Ok(cell.value((i, j))?.cloned())
}

/// Coefficient of x^i y^j.
pub fn coeff(spec: &KdFSpec, i: usize, j: usize) -> Result<ParamValue, KdfError> {
    spec.validate()?;
    if spec.is_exact() {
        Ok(ParamValue::Exact(coeff_walk::<Rational>(spec, i, j, 0)?.unwrap_or_default()))
    } else {
        let d = spec.digits_hint();
        Ok(ParamValue::Approx(coeff_walk::<APComplex>(spec, i, j, d)?.unwrap_or_else(|| APComplex::zero(d))))
    }
}

/// Coefficients c_{i,j} for i <= imax, j <= jmax and optionally i + j <= total.
#[derive(Clone, Debug)]
pub struct CoeffTable<S> {
    pub imax: usize,
    pub jmax: usize,
    pub total: Option<usize>,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> CoeffTable<S> {
    pub fn build(spec: &KdFSpec, imax: usize, jmax: usize, total: Option<usize>, digits: u32) -> Result<Self, KdfError> {
        spec.validate()?;
        let mut t: Tables<'_, S> = Tables::new(spec, None, None, digits);
        t.ensure(imax + jmax + 1)?;
        let mut rows = Vec::with_capacity(imax + 1);
        let mut head: Cell<S> = Cell::origin(digits);
        for i in 0..=imax {
            if i > 0 {
                head = head.step(&t.n_part[i - 1], &t.i_part[i - 1], (i, 0))?;
            }
            let jlim = match total {
                Some(tt) if tt < i => break,
                Some(tt) => jmax.min(tt - i),
                None => jmax,
            };
            let mut row = Vec::with_capacity(jlim + 1);
            let mut cell = head.clone();
            for j in 0..=jlim {
                if j > 0 {
                    cell = cell.step(&t.n_part[i + j - 1], &t.j_part[j - 1], (i, j))?;
                }
                row.push(cell.value((i, j))?.cloned().unwrap_or_else(|| S::zero(digits)));
            }
            rows.push(row);
        }
        Ok(CoeffTable { imax, jmax, total, rows })
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&S> {
        self.rows.get(i)?.get(j)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &S)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| ((i, j), v)))
    }
}

/// Exact bivariate polynomial.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BiPoly {
    pub terms: BTreeMap<(usize, usize), Rational>,
}

#[derive(Serialize, Deserialize)]
struct BiTerm {
    i: usize,
    j: usize,
    coeff: ParamValue,
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let v: Vec<BiTerm> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| BiTerm { i, j, coeff: ParamValue::Exact(c.clone()) })
            .collect();
        v.serialize(ser)
    }
}

impl BiPoly {
    pub fn degree(&self) -> (usize, usize) {
        self.terms.keys().fold((0, 0), |(a, b), &(i, j)| (a.max(i), b.max(j)))
    }

    pub fn eval_exact(&self, x: &Rational, y: &Rational) -> Rational {
        let mut s = Rational::new();
        for (&(i, j), c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..i {
                t *= x;
            }
            for _ in 0..j {
                t *= y;
            }
            s += t;
        }
        s
    }

    pub fn eval(&self, x: &ParamValue, y: &ParamValue, digits: u32) -> ParamValue {
        if let (Some(xq), Some(yq)) = (x.as_exact(), y.as_exact()) {
            return ParamValue::Exact(self.eval_exact(xq, yq));
        }
        let xc = x.to_complex_at(digits);
        let yc = y.to_complex_at(digits);
        let mut s = APComplex::zero(digits);
        for (&(i, j), c) in &self.terms {
            let t = &(&xc.powi(i as i64) * &yc.powi(j as i64)) * &APComplex::from_rational(c, digits);
            s += &t;
        }
        ParamValue::Approx(s)
    }
}

/// The finite sum of a series that terminates in both directions.
pub fn terminating_sum(spec: &KdFSpec) -> Result<BiPoly, KdfError> {
    spec.validate()?;
    let (Some(imax), Some(jmax)) = spec.cut_indices() else {
        return Err(KdfError::NotTerminating);
    };
    if !spec.is_exact() {
        return Err(KdfError::Num(NumError::NotExact));
    }
    let table = CoeffTable::<Rational>::build(spec, imax, jmax, None, 0)?;
    let terms = table.iter().filter(|(_, v)| **v != 0).map(|(k, v)| (k, v.clone())).collect();
    Ok(BiPoly { terms })
}

/// Rewrites a terminating F2111 with p1 = -m, p2 = -n as
/// `constant · x^m y^n · F1220(1/x, 1/y)` and returns (constant, F1220 spec).
pub fn reverse_summation(spec: &KdFSpec) -> Result<(Rational, KdFSpec), KdfError> {
    if spec.shape != Shape::F2111 {
        return Err(KdfError::BadParams { shape: spec.shape, expected: Shape::F2111.param_names() });
    }
    spec.validate()?;
    let ex = |n: &str| spec.param(n).as_exact().cloned().ok_or(KdfError::Num(NumError::NotExact));
    let (a, b, p1, p2, c, q1, q2) = (ex("a")?, ex("b")?, ex("p1")?, ex("p2")?, ex("c")?, ex("q1")?, ex("q2")?);
    let m = ParamValue::Exact(p1.clone()).nonpositive_integer().ok_or(KdfError::NotTerminating)?;
    let n = ParamValue::Exact(p2.clone()).nonpositive_integer().ok_or(KdfError::NotTerminating)?;
    let (m, n) = ((-m) as usize, (-n) as usize);
    let k = m + n;
    let kq = Rational::from(k as u64);
    use crate::exactnum::pochhammer_q as ph;
    let num = Rational::from(ph(&a, k) * ph(&b, k));
    let den = Rational::from(ph(&c, k) * ph(&q1, m)) * ph(&q2, n);
    if num == 0 || den == 0 {
        return Err(KdfError::Degenerate(format!("(a)_K(b)_K = {num}, (c)_K(q1)_m(q2)_n = {den}")));
    }
    let mut constant = num / den;
    if k % 2 == 1 {
        constant = -constant;
    }
    let one = Rational::from(1);
    let e = |q: Rational| ParamValue::Exact(q);
    let rev = KdFSpec::f1220(
        e(Rational::from(&one - &c) - &kq),
        e(p1.clone()),
        e(p2.clone()),
        e(Rational::from(&one - &q1) - Rational::from(m as u64)),
        e(Rational::from(&one - &q2) - Rational::from(n as u64)),
        e(Rational::from(&one - &a) - &kq),
        e(Rational::from(&one - &b) - &kq),
    );
    Ok((constant, rev))
}

/// Checks coeff_F2111(m-i, n-j) = constant · coeff_F1220(i, j) on the whole rectangle.
pub fn verify_reversal(spec: &KdFSpec) -> Result<bool, KdfError> {
    let (constant, rev) = reverse_summation(spec)?;
    let (Some(m), Some(n)) = spec.cut_indices() else {
        return Err(KdfError::NotTerminating);
    };
    let fwd = CoeffTable::<Rational>::build(spec, m, n, None, 0)?;
    let bwd = CoeffTable::<Rational>::build(&rev, m, n, None, 0)?;
    for i in 0..=m {
        for j in 0..=n {
            let want = Rational::from(&constant * bwd.get(i, j).expect("in table"));
            if fwd.get(m - i, n - j).expect("in table") != &want {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::pochhammer_q;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from((p, d))
    }
    fn pv(p: i64, d: i64) -> ParamValue {
        ParamValue::ratio(p, d)
    }

    fn sample_f2111() -> KdFSpec {
        KdFSpec::f2111(pv(1, 3), pv(2, 7), pv(3, 5), pv(-1, 4), pv(5, 6), pv(7, 9), pv(4, 3))
    }

    #[test]
    fn origin_is_one() {
        assert_eq!(coeff(&sample_f2111(), 0, 0).unwrap(), ParamValue::int(1));
    }

    #[test]
    fn matches_pochhammer_formula() {
        let s = sample_f2111();
        let p = |n: &str| s.param(n).as_exact().unwrap().clone();
        for i in 0..5usize {
            for j in 0..5usize {
                let n = i + j;
                let num = pochhammer_q(&p("a"), n) * pochhammer_q(&p("b"), n) * pochhammer_q(&p("p1"), i) * pochhammer_q(&p("p2"), j);
                let den = pochhammer_q(&p("c"), n)
                    * pochhammer_q(&p("q1"), i)
                    * pochhammer_q(&p("q2"), j)
                    * Rational::from(crate::exactnum::factorial(i))
                    * Rational::from(crate::exactnum::factorial(j));
                assert_eq!(coeff(&s, i, j).unwrap(), ParamValue::Exact(num / den));
            }
        }
    }

    #[test]
    fn p2_cut() {
        let s = KdFSpec::f2111(pv(1, 3), pv(2, 7), pv(3, 5), pv(-2, 1), pv(5, 6), pv(7, 9), pv(4, 3));
        for j in 3..6 {
            assert_eq!(coeff(&s, 1, j).unwrap(), ParamValue::int(0));
        }
        assert_ne!(coeff(&s, 1, 2).unwrap(), ParamValue::int(0));
    }

    #[test]
    fn undefined_lower() {
        let s = KdFSpec::f2111(pv(1, 3), pv(2, 7), pv(3, 5), pv(1, 2), pv(5, 6), pv(7, 9), pv(-1, 1));
        assert!(matches!(coeff(&s, 0, 2), Err(KdfError::UndefinedCoefficient { .. })));
    }

    #[test]
    fn dclausen_trivial() {
        // a = 1, m = n = 0
        let s = KdFSpec::f2111(pv(2, 1), pv(-2, 1), pv(0, 1), pv(0, 1), pv(1, 2), pv(0, 1), pv(0, 1));
        let p = terminating_sum(&s).unwrap();
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.terms[&(0, 0)], Rational::from(1));
    }

    #[test]
    fn dclausen_m1() {
        // a = 1/3, m = 1, n = 0: 2a, -2a-2m-2n; -m, -n; 1/2-m-n; -2m, -2n
        let s = KdFSpec::f2111(pv(2, 3), pv(-8, 3), pv(-1, 1), pv(0, 1), pv(-1, 2), pv(-2, 1), pv(0, 1));
        let p = terminating_sum(&s).unwrap();
        assert_eq!(p.degree(), (1, 0));
        // c_{1,0} = (2/3)(-8/3)(-1) / ((-1/2)(-2)) = 16/9
        assert_eq!(p.terms[&(1, 0)], q(16, 9));
    }

    #[test]
    fn altclaust_rectangle() {
        // a = 1/5, m = n = 1: 1/2; -m,-n; m+1, n+1; 2a+m+n+1; 1-2a-m-n
        let s = KdFSpec::f1220(pv(1, 2), pv(-1, 1), pv(-1, 1), pv(2, 1), pv(2, 1), pv(17, 5), pv(-7, 5));
        let p = terminating_sum(&s).unwrap();
        assert_eq!(p.degree(), (1, 1));
        assert_eq!(p.terms.len(), 4);
    }

    #[test]
    fn not_terminating() {
        assert!(matches!(terminating_sum(&sample_f2111()), Err(KdfError::NotTerminating)));
    }

    #[test]
    fn reversal_dclausen() {
        for (m, n) in [(0, 0), (1, 0), (2, 1), (3, 3)] {
            let a = q(2, 7);
            let (mi, ni) = (m as i64, n as i64);
            let s = KdFSpec::f2111(
                ParamValue::Exact(Rational::from(2 * &a)),
                ParamValue::Exact(Rational::from(-2 * &a) - 2 * mi - 2 * ni),
                pv(-mi, 1),
                pv(-ni, 1),
                ParamValue::Exact(q(1, 2) - mi - ni),
                pv(-2 * mi, 1),
                pv(-2 * ni, 1),
            );
            assert!(verify_reversal(&s).unwrap(), "m={m} n={n}");
        }
    }

    #[test]
    fn slope_limit_keeps_row_alive() {
        // p1 = 0 with slope 1 over q1 = 0 with slope 2: ratio 1/2 at the (1,0) step
        let s = KdFSpec::f2111(pv(1, 1), pv(1, 1), pv(0, 1), pv(1, 1), pv(1, 1), pv(0, 1), pv(1, 1))
            .with_slope("p1", Rational::from(1))
            .with_slope("q1", Rational::from(2));
        assert_eq!(coeff(&s, 1, 0).unwrap(), ParamValue::ratio(1, 2));
    }

    #[test]
    fn json_roundtrip() {
        let s = sample_f2111().with_slope("b", Rational::from(2));
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.contains("\"shape\":\"F2111\""));
        let back: KdFSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn poly_json() {
        let s = KdFSpec::f1220(pv(1, 2), pv(-1, 1), pv(0, 1), pv(2, 1), pv(1, 1), pv(3, 1), pv(1, 1));
        let p = terminating_sum(&s).unwrap();
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"[{"i":0,"j":0,"coeff":"1"},{"i":1,"j":0,"coeff":"-1/3"}]"#);
    }
}
