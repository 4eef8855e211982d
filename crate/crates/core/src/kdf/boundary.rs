//! Values and θ-jets on the edge of the convergence region, where diagonal
//! sums decay only algebraically: `D_n ~ n^e`. Partial sums over the first N
//! diagonals are extrapolated to N → ∞.

use rug::{Float, Rational};

use super::walk::{walk_diagonals, Tables};
use super::{KdFSpec, KdfError, Shape};
use crate::exactnum::{ten_pow_neg, APComplex, ParamValue};
use crate::hyperseries::extrapolate::{self, Extrapolated};
use crate::hyperseries::SeriesValue;

const NODE_LO: usize = 800;
const NODE_HI: usize = 1600;
const NODE_COUNT: usize = 61;

/// Curves through the edge of the region, parametrized by z.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Curve {
    /// `(x, y) = (z, 1 - z)`
    SumToOne,
    /// `(x, y) = (z^2, (1 - z)^2)`
    SqrtSumToOne,
}

impl Curve {
    pub fn point(self, z: &ParamValue) -> (ParamValue, ParamValue) {
        let w = ParamValue::int(1).sub(z);
        match self {
            Curve::SumToOne => (z.clone(), w),
            Curve::SqrtSumToOne => (z.mul(z), w.mul(&w)),
        }
    }
}

/// Growth exponent `e` of the diagonal sums on the edge, for the shapes whose
/// edge is reached with positive real arguments.
pub fn decay_exponent(spec: &KdFSpec) -> Option<ParamValue> {
    let r = spec.roles();
    let sum = |v: &[&super::KParam]| v.iter().fold(ParamValue::int(0), |s, p| s.add(&p.value));
    match spec.shape {
        Shape::F2111 | Shape::AppellF2 => Some(
            sum(&r.up_n)
                .sub(&sum(&r.lo_n))
                .add_i(-1)
                .add(&sum(&r.up_i))
                .sub(&sum(&r.lo_i))
                .add(&sum(&r.up_j))
                .sub(&sum(&r.lo_j)),
        ),
        Shape::AppellF4 => Some(sum(&r.up_n).sub(&sum(&r.lo_i)).sub(&sum(&r.lo_j)).add_q(&Rational::from((-1, 2)))),
        _ => None,
    }
}

pub(crate) fn input_digits(x: &ParamValue, y: &ParamValue, fallback: u32) -> u32 {
    [x, y]
        .iter()
        .filter_map(|p| match p {
            ParamValue::Approx(c) => Some(c.digits()),
            _ => None,
        })
        .min()
        .unwrap_or(fallback)
        .min(fallback)
}

/// Whether `(x, y)` is a positive real point on the edge of the region.
pub(crate) fn on_boundary(shape: Shape, x: &APComplex, y: &APComplex, digits: u32) -> bool {
    if !matches!(shape, Shape::F2111 | Shape::AppellF2 | Shape::AppellF4) {
        return false;
    }
    let b = x.bits();
    let tol = ten_pow_neg(digits.saturating_sub(5) as i64, b);
    let real_pos = |c: &APComplex| *c.re() > 0 && Float::with_val(b, c.im().abs_ref()) <= tol;
    if !real_pos(x) || !real_pos(y) {
        return false;
    }
    let r = match shape {
        Shape::AppellF4 => Float::with_val(b, x.re().sqrt_ref()) + y.re().clone().sqrt(),
        _ => Float::with_val(b, x.re() + y.re()),
    };
    Float::with_val(b, r - 1u32).abs() <= tol
}

/// Logarithmic derivatives `θ log x`, `θ log y`, `θ² log y`, `θ³ log y` along a curve (θ = z d/dz).
fn curve_logs(curve: Curve, z: &APComplex) -> (APComplex, APComplex, APComplex, APComplex) {
    let w = z.digits();
    let one = APComplex::one(w);
    let om = &one - z;
    let base_v = -&(z / &om);
    let dv = -&(z / &om.sqr());
    let ddv = -&(&(z * &(&one + z)) / &om.powi(3));
    let k = match curve {
        Curve::SumToOne => 1,
        Curve::SqrtSumToOne => 2,
    };
    let s = APComplex::from_i64(k, w);
    (s.clone(), &s * &base_v, &s * &dv, &s * &ddv)
}

/// Extrapolated limits of `sum_{i,j} t_ij P_k(i,j)` for `k = 0..=order`,
/// where `P_k` are the θ-weights along `curve` (only `k = 0` without a curve).
fn diagonal_limits(
    spec: &KdFSpec,
    x: &APComplex,
    y: &APComplex,
    curve: Option<(Curve, &APComplex)>,
    order: usize,
    precision: u32,
    max_terms: usize,
) -> Result<Vec<Extrapolated>, KdfError> {
    let e = decay_exponent(spec).ok_or_else(|| KdfError::NoConvergence(format!("no edge summation for {:?}", spec.shape)))?;
    // Tangential derivatives along the curve keep the n^e decay of the diagonal
    // sums; the fit below still allows growing terms up to n^(e+1+k).
    let e_re = e.re_f64();
    if e_re >= -1.0 {
        return Err(KdfError::NoConvergence(format!("diagonal sums decay like n^{e_re:.4} on the edge; need an exponent below -1")));
    }
    if NODE_HI > max_terms {
        return Err(KdfError::MaxTermsExceeded(max_terms));
    }
    // the 61-node fit amplifies rounding in the partial sums by ~10^50
    let w = precision + 90;
    let bits = crate::exactnum::digits_to_bits(w);
    let mut tables: Tables<'_, APComplex> = Tables::new(spec, Some(x.with_digits(w)), Some(y.with_digits(w)), w);
    let logs = curve.map(|(c, z)| curve_logs(c, &z.with_digits(w)));
    let nodes = extrapolate::nodes(NODE_LO, NODE_HI, NODE_COUNT);
    let mut next = nodes.iter().peekable();
    let mut partial = vec![APComplex::zero(w); order + 1];
    let mut samples: Vec<Vec<(usize, APComplex)>> = vec![Vec::with_capacity(NODE_COUNT); order + 1];
    walk_diagonals(&mut tables, w, NODE_HI - 1, |n, diag| {
        // moments M_a = sum_i t_i i^a on this diagonal
        let mut mom = vec![APComplex::zero(w); order + 1];
        for (i, c) in diag.iter().enumerate() {
            let Some(t) = c.value((i, n - i))? else { continue };
            mom[0] += t;
            let fi = Float::with_val(bits, i as u64);
            let mut ti = t.clone();
            for m in mom.iter_mut().skip(1) {
                ti = ti.scale(&fi);
                *m += &ti;
            }
        }
        partial[0] += &mom[0];
        if let Some((u, v, dv, ddv)) = &logs {
            let nn = APComplex::from_i64(n as i64, w);
            let a = &nn * v;
            let b = u - v;
            // L = A + B i, L' = dv (n - i), L'' = ddv (n - i)
            let nm = |k: usize| &(&nn * &mom[k]) - &mom[k + 1];
            if order >= 1 {
                let s1 = &(&a * &mom[0]) + &(&b * &mom[1]);
                partial[1] += &s1;
            }
            if order >= 2 {
                let l2 = &(&(&a.sqr() * &mom[0]) + &(&(&a * &b) * &mom[1]).scale_q(&Rational::from(2))) + &(&b.sqr() * &mom[2]);
                let lp = dv * &nm(0);
                partial[2] += &(&l2 + &lp);
            }
            if order >= 3 {
                let (a2, b2) = (a.sqr(), b.sqr());
                let three = Rational::from(3);
                let l3 = &(&(&(&a2 * &a) * &mom[0]) + &(&(&a2 * &b) * &mom[1]).scale_q(&three))
                    + &(&(&(&a * &b2) * &mom[2]).scale_q(&three) + &(&(&b2 * &b) * &mom[3]));
                // sum t (A + B i)(n - i) = A n M0 + (B n - A) M1 - B M2
                let llp = dv * &(&(&(&(&a * &nn) * &mom[0]) + &(&(&(&b * &nn) - &a) * &mom[1])) - &(&b * &mom[2]));
                let lpp = ddv * &nm(0);
                partial[3] += &(&(&l3 + &llp.scale_q(&three)) + &lpp);
            }
        }
        if next.peek().is_some_and(|&&m| m == n + 1) {
            next.next();
            for (k, s) in partial.iter().enumerate() {
                samples[k].push((n + 1, s.clone()));
            }
        }
        Ok(true)
    })?;
    let solve = w + 160;
    let mut out = Vec::with_capacity(order + 1);
    for (k, sm) in samples.iter().enumerate() {
        let p = e.add_i(k as i64 + 1).to_complex_at(solve);
        let ex = extrapolate::limit_from_partial_sums(sm, &p, solve)
            .ok_or_else(|| KdfError::NoConvergence("singular extrapolation system".into()))?;
        out.push(Extrapolated { value: ex.value.with_digits(precision), error_estimate: ex.error_estimate });
    }
    Ok(out)
}

/// Value on the edge of the region of convergence.
pub fn eval_boundary(spec: &KdFSpec, x: &ParamValue, y: &ParamValue, precision: u32, max_terms: usize) -> Result<SeriesValue, KdfError> {
    let w = precision + 40;
    let (xc, yc) = (x.to_complex_at(w), y.to_complex_at(w));
    if !on_boundary(spec.shape, &xc, &yc, input_digits(x, y, w)) {
        return Err(KdfError::NoConvergence(format!("({x}, {y}) is not a positive point on the edge of the region")));
    }
    let ex = diagonal_limits(spec, &xc, &yc, None, 0, precision, max_terms)?.remove(0);
    Ok(SeriesValue {
        value: ParamValue::Approx(ex.value),
        terms_used: NODE_HI * (NODE_HI + 1) / 2,
        terminated: false,
        converged: extrapolate::meets(ex.error_estimate, precision),
        error_estimate: Some(ex.error_estimate),
    })
}

/// `θ^k F` for `k = 0..=order` along an edge curve (θ = z d/dz), each with
/// its extrapolation error estimate.
pub fn eval_line_jet(
    spec: &KdFSpec,
    curve: Curve,
    z: &ParamValue,
    order: usize,
    precision: u32,
    max_terms: usize,
) -> Result<Vec<Extrapolated>, KdfError> {
    if order > 3 {
        return Err(KdfError::NoConvergence(format!("line jets are limited to order 3, got {order}")));
    }
    let w = precision + 40;
    let (x, y) = curve.point(z);
    let (xc, yc) = (x.to_complex_at(w), y.to_complex_at(w));
    if !on_boundary(spec.shape, &xc, &yc, input_digits(&x, &y, w)) {
        return Err(KdfError::NoConvergence(format!("curve point ({x}, {y}) is not on the edge of the region")));
    }
    let zc = z.to_complex_at(w);
    diagonal_limits(spec, &xc, &yc, Some((curve, &zc)), order, precision, max_terms)
}
