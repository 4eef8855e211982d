use std::sync::Mutex;

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use super::apcomplex::{digits_to_bits, ten_pow_neg, APComplex};
use super::param::{near_nonpositive_integer, ParamValue};
use super::PoleError;

static BERNOULLI_EVEN: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// B_{2k} for k = 0..=kmax, cached.
fn bernoulli_even(kmax: usize) -> Vec<Rational> {
    let mut cache = BERNOULLI_EVEN.lock().expect("bernoulli cache poisoned");
    if cache.len() <= kmax {
        // all B_n up to 2*kmax via sum_{j<=n} C(n+1, j) B_j = 0
        let n_max = 2 * kmax;
        let mut b: Vec<Rational> = Vec::with_capacity(n_max + 1);
        b.push(Rational::from(1));
        for n in 1..=n_max {
            if n > 1 && n % 2 == 1 {
                b.push(Rational::new());
                continue;
            }
            let mut s = Rational::new();
            let mut binom = Integer::from(1);
            for (j, bj) in b.iter().enumerate() {
                if *bj != 0 {
                    s += Rational::from(bj * &binom);
                }
                // C(n+1, j+1) from C(n+1, j)
                binom *= (n + 1 - j) as u64;
                binom /= (j + 1) as u64;
            }
            b.push(-s / Rational::from(n as u64 + 1));
        }
        *cache = (0..=kmax).map(|k| b[2 * k].clone()).collect();
    }
    cache[..=kmax].to_vec()
}

/// Stirling series for ln Γ(w) at `digits` working digits; Re w must be large.
fn ln_gamma_stirling(w: &APComplex, digits: u32) -> APComplex {
    let bits = digits_to_bits(digits);
    let half = Rational::from((1, 2));
    let ln_w = w.ln();
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let half_ln_2pi = APComplex::from_real(two_pi.ln() / 2u32, digits);
    let mut acc = &(&w.add_q(&-half.clone()) * &ln_w) - w;
    acc = &acc + &half_ln_2pi;
    let tol = ten_pow_neg(digits as i64 + 2, bits);
    let w2 = w.sqr();
    let mut wpow = w.clone();
    let mut kmax = 16usize;
    let mut bern = bernoulli_even(kmax);
    let mut prev = Float::with_val(bits, f64::INFINITY);
    let mut k = 1usize;
    loop {
        if k > kmax {
            kmax *= 2;
            bern = bernoulli_even(kmax);
        }
        let c = Rational::from(&bern[k] / Rational::from((2 * k * (2 * k - 1)) as u64));
        let term = (&APComplex::from_rational(&c, digits) / &wpow).with_digits(digits);
        let mag = term.abs();
        if mag > prev {
            break;
        }
        acc = &acc + &term;
        if mag < tol {
            break;
        }
        prev = mag;
        wpow = &wpow * &w2;
        k += 1;
    }
    acc
}

fn gamma_at(z: &APComplex, digits: u32) -> APComplex {
    let z = z.with_digits(digits);
    let half = Float::with_val(z.bits(), 0.5);
    if *z.re() < half {
        // Γ(z) = π / (sin(πz) Γ(1-z))
        let pi = APComplex::pi(digits);
        let one_minus = &APComplex::one(digits) - &z;
        let s = (&pi * &z).sin();
        return &pi / &(&s * &gamma_at(&one_minus, digits));
    }
    let target = Float::with_val(z.bits(), 0.5 * digits as f64 + 10.0);
    let mut shift = 0u32;
    let mut w = z.clone();
    let mut prod = APComplex::one(digits);
    while *w.re() < target {
        prod = &prod * &w;
        w = w.add_q(&Rational::from(1));
        shift += 1;
    }
    let lg = ln_gamma_stirling(&w, digits);
    let g = lg.exp();
    if shift == 0 {
        g
    } else {
        &g / &prod
    }
}

/// Γ(z), accurate to the precision of `z`. Working precision grows until two
/// successive evaluations agree.
pub fn gamma(z: &APComplex) -> Result<APComplex, PoleError> {
    if let Some(n) = near_nonpositive_integer(z) {
        return Err(PoleError { at: n });
    }
    let d = z.digits();
    let mut guard = 12u32;
    let mut prev = gamma_at(z, d + guard);
    for _ in 0..5 {
        guard *= 2;
        let next = gamma_at(z, d + guard);
        let rd = APComplex::rel_diff(&next, &prev);
        if rd < ten_pow_neg(d as i64 + 2, digits_to_bits(d + guard)) {
            return Ok(next.with_digits(d));
        }
        prev = next;
    }
    Ok(prev.with_digits(d))
}

/// Γ(p) at `digits`; poles are detected exactly for exact input.
pub fn gamma_param(p: &ParamValue, digits: u32) -> Result<APComplex, PoleError> {
    if let ParamValue::Exact(q) = p {
        if q.denom() == &1u32 && *q <= 0 {
            return Err(PoleError { at: q.numer().to_i64().unwrap_or(i64::MIN) });
        }
        if q.denom() == &1u32 && *q <= 200 {
            let n = q.numer().to_u32().expect("small positive integer");
            let f = Integer::from(Integer::factorial(n - 1));
            return Ok(APComplex::from_rational(&Rational::from(f), digits));
        }
    }
    gamma(&p.to_complex_at(digits))
}

/// 1/Γ(p), which vanishes at the poles of Γ.
pub fn rgamma_param(p: &ParamValue, digits: u32) -> APComplex {
    match gamma_param(p, digits) {
        Ok(g) => g.recip(),
        Err(_) => APComplex::zero(digits),
    }
}
