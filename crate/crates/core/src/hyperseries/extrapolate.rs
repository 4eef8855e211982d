//! Limits of algebraically converging sequences.
//!
//! Given partial sums with `S_N = S + sum_k g_k N^(p-k)`, a linear fit at
//! `K+1` nodes eliminates the first `K` correction terms.

use rug::Rational;

use crate::exactnum::{ten_pow_neg, APComplex};

/// Nodes used by `limit_from_partial_sums`: `count` evenly spaced values in `[lo, hi]`.
pub fn nodes(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    assert!(count >= 2 && hi > lo);
    (0..count).map(|r| lo + r * (hi - lo) / (count - 1)).collect()
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<APComplex>>, mut b: Vec<APComplex>) -> Option<Vec<APComplex>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].cmp_abs(&a[j][col]))?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let f = &a[row][col] * &inv;
            for k in col..n {
                let t = &f * &a[col][k];
                a[row][k] = &a[row][k] - &t;
            }
            let t = &f * &b[col];
            b[row] = &b[row] - &t;
        }
    }
    let mut x = vec![APComplex::zero(b[0].digits()); n];
    for row in (0..n).rev() {
        let mut s = b[row].clone();
        for k in row + 1..n {
            s = &s - &(&a[row][k] * &x[k]);
        }
        x[row] = &s / &a[row][row];
    }
    Some(x)
}

/// Estimated limit and a self-consistency error estimate.
#[derive(Clone, Debug)]
pub struct Extrapolated {
    pub value: APComplex,
    pub error_estimate: f64,
}

/// Extrapolates `S` from `(N, S_N)` pairs assuming corrections `N^(p-k)`.
/// The fit uses all nodes; a second fit with fewer corrections gives the
/// error estimate. `digits` is the precision of the linear solve.
pub fn limit_from_partial_sums(sums: &[(usize, APComplex)], p: &APComplex, digits: u32) -> Option<Extrapolated> {
    let full = fit(sums, p, digits)?;
    let drop = (sums.len() / 5).max(2);
    let reduced = fit(&sums[drop..], p, digits)?;
    let err = APComplex::rel_diff(&full, &reduced).to_f64();
    Some(Extrapolated { value: full, error_estimate: err })
}

fn fit(sums: &[(usize, APComplex)], p: &APComplex, digits: u32) -> Option<APComplex> {
    let m = sums.len();
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for (n, s) in sums {
        let nn = APComplex::from_i64(*n as i64, digits);
        let ln_n = nn.ln();
        let lead = (&ln_n * &p.with_digits(digits)).exp();
        let inv = nn.recip();
        let mut row = Vec::with_capacity(m);
        row.push(APComplex::one(digits));
        let mut term = lead;
        for _ in 1..m {
            row.push(term.clone());
            term = &term * &inv;
        }
        a.push(row);
        b.push(s.with_digits(digits));
    }
    let x = solve_dense(a, b)?;
    Some(x[0].clone())
}

/// Whether a relative error estimate meets `10^-digits`.
pub fn meets(err: f64, digits: u32) -> bool {
    let t = ten_pow_neg(digits as i64, 64).to_f64();
    err <= t
}

/// `p` as a real exponent.
pub fn real_exponent(q: &Rational, digits: u32) -> APComplex {
    APComplex::from_rational(q, digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_three_halves() {
        // sum k^{-3/2}: S_N - S ~ N^{-1/2}
        let digits = 120;
        let mut s = APComplex::zero(digits);
        let mut sums = Vec::new();
        let ns = nodes(200, 400, 25);
        let e = APComplex::from_rational(&Rational::from((-3, 2)), digits);
        let mut k = 1usize;
        for &n in &ns {
            while k <= n {
                let t = (&APComplex::from_i64(k as i64, digits).ln() * &e).exp();
                s = &s + &t;
                k += 1;
            }
            sums.push((n, s.clone()));
        }
        let p = APComplex::from_rational(&Rational::from((-1, 2)), digits);
        let r = limit_from_partial_sums(&sums, &p, 200).unwrap();
        // zeta(3/2) = 2.612375348685488343348567567924071630570800652400...
        let want = "2.6123753486854883433485675679240716305708";
        assert!(r.value.to_decimal(45).starts_with(want), "{}", r.value.to_decimal(45));
    }
}
