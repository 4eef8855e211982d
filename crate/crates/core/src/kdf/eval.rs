//! Summation over expanding triangles `i + j <= N`, and partial-derivative jets.

use std::collections::BTreeMap;

use rug::{Float, Rational};

use super::boundary::{self, on_boundary};
use super::walk::{walk_diagonals, Tables};
use super::{KdFSpec, KdfError, Shape};
use crate::exactnum::{digits_to_bits, ten_pow_neg, APComplex, ParamValue, Scalar};
use crate::hyperseries::{eval_pfq, SeriesValue, GUARD_DIGITS};

const BLOCK: usize = 16;

/// Partial derivatives `d^(α+β) F / dx^α dy^β` at a point.
#[derive(Clone, Debug)]
pub struct Jet2 {
    pub point: (APComplex, APComplex),
    pub order: usize,
    pub partials: BTreeMap<(usize, usize), APComplex>,
}

impl Jet2 {
    pub fn get(&self, alpha: usize, beta: usize) -> Option<&APComplex> {
        self.partials.get(&(alpha, beta))
    }
}

/// Which series region a point is in, from the coefficient growth of the shape.
pub(crate) fn region_measure(shape: Shape, x: &APComplex, y: &APComplex) -> Float {
    let (ax, ay) = (x.abs(), y.abs());
    let b = ax.prec();
    match shape {
        Shape::F2111 | Shape::AppellF2 => Float::with_val(b, &ax + &ay),
        Shape::F1220 | Shape::AppellF3 | Shape::F0211 => ax.max(&ay),
        Shape::AppellF4 => Float::with_val(b, ax.sqrt() + ay.sqrt()),
    }
}

fn mag(z: &APComplex) -> Float {
    let r = Float::with_val(z.bits(), z.re().abs_ref());
    let i = Float::with_val(z.bits(), z.im().abs_ref());
    r.max(&i)
}

fn falling(i: usize, a: usize) -> i128 {
    (0..a).map(|k| i as i128 - k as i128).product()
}

fn ok_value(v: ParamValue, cells: usize, terminated: bool) -> SeriesValue {
    SeriesValue { value: v, terms_used: cells, terminated, converged: true, error_estimate: None }
}

/// Evaluates the double series at `(x, y)`.
pub fn eval(spec: &KdFSpec, x: &ParamValue, y: &ParamValue, precision: u32, max_terms: usize) -> Result<SeriesValue, KdfError> {
    spec.validate()?;
    let precision = precision.max(5);
    if x.is_zero() && y.is_zero() {
        return Ok(ok_value(ParamValue::int(1), 1, true));
    }
    let (ci, cj) = spec.cut_indices();
    if let (Some(m), Some(n)) = (ci, cj) {
        return finite_sum(spec, x, y, m, n, precision);
    }
    if y.is_zero() || x.is_zero() {
        let (axis, z) = if y.is_zero() { (spec.axis_spec(true), x) } else { (spec.axis_spec(false), y) };
        let v = eval_pfq(&axis, z, precision, max_terms)?;
        return Ok(v);
    }
    let w = precision + GUARD_DIGITS + 10;
    let xc = x.to_complex_at(w);
    let yc = y.to_complex_at(w);
    if ci.is_none() && cj.is_none() {
        if on_boundary(spec.shape, &xc, &yc, boundary::input_digits(x, y, w)) {
            return boundary::eval_boundary(spec, x, y, precision, max_terms);
        }
        let r = region_measure(spec.shape, &xc, &yc);
        if r >= 1 {
            return Err(KdfError::NoConvergence(format!("({x}, {y}) lies outside the region of convergence of {:?}", spec.shape)));
        }
    }
    let (sums, cells) = sum_triangle(spec, &xc, &yc, &[(0, 0)], precision, max_terms)?;
    Ok(SeriesValue {
        value: ParamValue::Approx(sums[0].with_digits(precision)),
        terms_used: cells,
        terminated: false,
        converged: true,
        error_estimate: None,
    })
}

fn finite_sum(spec: &KdFSpec, x: &ParamValue, y: &ParamValue, m: usize, n: usize, precision: u32) -> Result<SeriesValue, KdfError> {
    if spec.is_exact() {
        if let (Some(xq), Some(yq)) = (x.as_exact(), y.as_exact()) {
            let s = walk_sum::<Rational>(spec, xq.clone(), yq.clone(), 0, m, n)?;
            return Ok(ok_value(ParamValue::Exact(s), (m + 1) * (n + 1), true));
        }
    }
    let w = precision + GUARD_DIGITS;
    let s = walk_sum::<APComplex>(spec, x.to_complex_at(w), y.to_complex_at(w), w, m, n)?;
    Ok(ok_value(ParamValue::Approx(s.with_digits(precision)), (m + 1) * (n + 1), true))
}

fn walk_sum<S: Scalar>(spec: &KdFSpec, x: S, y: S, digits: u32, m: usize, n: usize) -> Result<S, KdfError> {
    let mut t: Tables<'_, S> = Tables::new(spec, Some(x), Some(y), digits);
    let mut s = S::zero(digits);
    walk_diagonals(&mut t, digits, m + n, |d, cells| {
        for (i, c) in cells.iter().enumerate() {
            if let Some(v) = c.value((i, d - i))? {
                s = s.add(v);
            }
        }
        Ok(true)
    })?;
    Ok(s)
}

/// Sums the requested partials over expanding triangles; `max_terms` bounds
/// the number of diagonals. Each partial is
/// declared converged when three successive blocks of diagonals shrink by a
/// factor of at least two and the last block is negligible.
pub(crate) fn sum_triangle(
    spec: &KdFSpec,
    x: &APComplex,
    y: &APComplex,
    orders: &[(usize, usize)],
    precision: u32,
    max_terms: usize,
) -> Result<(Vec<APComplex>, usize), KdfError> {
    let w = precision + GUARD_DIGITS + 10;
    let bits = digits_to_bits(w);
    let x0 = x.is_zero();
    let y0 = y.is_zero();
    let fold = |v: &APComplex, zero: bool| if zero { APComplex::one(w) } else { v.with_digits(w) };
    let mut tables: Tables<'_, APComplex> = Tables::new(spec, Some(fold(x, x0)), Some(fold(y, y0)), w);
    let k = orders.len();
    let mut sums = vec![APComplex::zero(w); k];
    let mut block_max = vec![Float::new(bits); k];
    let mut history: Vec<Vec<Float>> = vec![Vec::new(); k];
    let tol = ten_pow_neg(precision as i64 + 2, bits);
    let mut cells = 0usize;
    let mut done = false;
    let mut failure: Option<KdfError> = None;
    walk_diagonals(&mut tables, w, usize::MAX - 1, |n, diag| {
        cells += diag.len();
        if n + 1 > max_terms {
            failure = Some(KdfError::MaxTermsExceeded(max_terms));
            return Ok(false);
        }
        for (i, c) in diag.iter().enumerate() {
            let j = n - i;
            let Some(t) = c.value((i, j))? else { continue };
            for (slot, &(a, b)) in orders.iter().enumerate() {
                if (x0 && i != a) || (y0 && j != b) || i < a || j < b {
                    continue;
                }
                let f = falling(i, a) * falling(j, b);
                let contrib = if f == 1 { t.clone() } else { t.scale_q(&Rational::from(f)) };
                let mg = mag(&contrib);
                if mg > block_max[slot] {
                    block_max[slot] = mg;
                }
                sums[slot] += &contrib;
            }
        }
        if (n + 1) % BLOCK != 0 {
            return Ok(true);
        }
        let mut all = true;
        let mut stalled = n + 1 >= 256;
        for slot in 0..k {
            let h = &mut history[slot];
            h.push(std::mem::replace(&mut block_max[slot], Float::new(bits)));
            let len = h.len();
            if len < 4 {
                all = false;
                stalled = false;
                continue;
            }
            let shrinking = (len - 3..len).all(|q| Float::with_val(bits, &h[q] * 2u32) <= h[q - 1]);
            let stall = (len - 3..len).all(|q| h[q] > Float::with_val(bits, &h[q - 1] * 0.8f64));
            stalled &= stall;
            let scale = mag(&sums[slot]);
            let margin = Float::with_val(bits, &h[len - 1] * ((n + 1) as u64 * BLOCK as u64));
            let small = h[len - 1].is_zero() || margin <= Float::with_val(bits, &tol * &scale);
            if !(shrinking && small) {
                all = false;
            }
        }
        if all {
            done = true;
            return Ok(false);
        }
        if stalled {
            failure = Some(KdfError::NoConvergence(format!("terms stop decaying by diagonal {}", n + 1)));
            return Ok(false);
        }
        Ok(true)
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    debug_assert!(done);
    // scale by x^-α y^-β for the folded powers
    let xi = if x0 { APComplex::one(w) } else { x.with_digits(w).recip() };
    let yi = if y0 { APComplex::one(w) } else { y.with_digits(w).recip() };
    let out = sums
        .into_iter()
        .zip(orders)
        .map(|(s, &(a, b))| {
            let mut v = s;
            if !x0 {
                v = &v * &xi.powi(a as i64);
            }
            if !y0 {
                v = &v * &yi.powi(b as i64);
            }
            v
        })
        .collect();
    Ok((out, cells))
}

/// All partials of total order `<= order` at an interior point.
pub fn eval_jet(spec: &KdFSpec, x: &ParamValue, y: &ParamValue, order: usize, precision: u32, max_terms: usize) -> Result<Jet2, KdfError> {
    spec.validate()?;
    if order > 3 {
        return Err(KdfError::NoConvergence(format!("jets are limited to order 3, got {order}")));
    }
    let precision = precision.max(5);
    let w = precision + GUARD_DIGITS + 10;
    let xc = x.to_complex_at(w);
    let yc = y.to_complex_at(w);
    let (ci, cj) = spec.cut_indices();
    if ci.is_none() && cj.is_none() && region_measure(spec.shape, &xc, &yc) >= 1 {
        return Err(KdfError::NoConvergence(format!("({x}, {y}) is not strictly inside the region of convergence")));
    }
    let orders: Vec<(usize, usize)> = (0..=order).flat_map(|t| (0..=t).map(move |a| (a, t - a))).collect();
    let (sums, _) = sum_triangle(spec, &xc, &yc, &orders, precision, max_terms)?;
    let partials = orders.into_iter().zip(sums).map(|(o, v)| (o, v.with_digits(precision))).collect();
    Ok(Jet2 { point: (xc.with_digits(precision), yc.with_digits(precision)), order, partials })
}
