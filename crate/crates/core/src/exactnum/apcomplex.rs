use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::{Float, Rational};

/// Binary precision used to carry `digits` significant decimal digits.
pub fn digits_to_bits(digits: u32) -> u32 {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

/// Multiprecision complex number tagged with a significant-digit count.
#[derive(Clone, Debug)]
pub struct APComplex {
    re: Float,
    im: Float,
    digits: u32,
}

impl APComplex {
    pub fn new(re: Float, im: Float, digits: u32) -> Self {
        let bits = digits_to_bits(digits);
        APComplex {
            re: Float::with_val(bits, re),
            im: Float::with_val(bits, im),
            digits,
        }
    }

    pub fn from_real(re: Float, digits: u32) -> Self {
        let bits = digits_to_bits(digits);
        APComplex {
            re: Float::with_val(bits, re),
            im: Float::new(bits),
            digits,
        }
    }

    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        let bits = digits_to_bits(digits);
        APComplex {
            re: Float::with_val(bits, q),
            im: Float::new(bits),
            digits,
        }
    }

    pub fn from_i64(n: i64, digits: u32) -> Self {
        let bits = digits_to_bits(digits);
        APComplex {
            re: Float::with_val(bits, n),
            im: Float::new(bits),
            digits,
        }
    }

    pub fn from_f64(x: f64, digits: u32) -> Self {
        let bits = digits_to_bits(digits);
        APComplex {
            re: Float::with_val(bits, x),
            im: Float::new(bits),
            digits,
        }
    }

    pub fn zero(digits: u32) -> Self {
        Self::from_i64(0, digits)
    }

    pub fn one(digits: u32) -> Self {
        Self::from_i64(1, digits)
    }

    pub fn i(digits: u32) -> Self {
        let bits = digits_to_bits(digits);
        APComplex {
            re: Float::new(bits),
            im: Float::with_val(bits, 1),
            digits,
        }
    }

    pub fn pi(digits: u32) -> Self {
        let bits = digits_to_bits(digits);
        APComplex::from_real(Float::with_val(bits, Constant::Pi), digits)
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        digits_to_bits(self.digits)
    }

    /// Re-rounds to a different precision.
    pub fn with_digits(&self, digits: u32) -> Self {
        APComplex::new(self.re.clone(), self.im.clone(), digits)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.bits(), self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn conj(&self) -> Self {
        APComplex {
            re: self.re.clone(),
            im: Float::with_val(self.bits(), -&self.im),
            digits: self.digits,
        }
    }

    pub fn scale(&self, f: &Float) -> Self {
        let b = self.bits();
        APComplex {
            re: Float::with_val(b, &self.re * f),
            im: Float::with_val(b, &self.im * f),
            digits: self.digits,
        }
    }

    pub fn scale_q(&self, q: &Rational) -> Self {
        let b = self.bits();
        let f = Float::with_val(b, q);
        self.scale(&f)
    }

    pub fn add_q(&self, q: &Rational) -> Self {
        let b = self.bits();
        APComplex {
            re: Float::with_val(b, &self.re + q),
            im: self.im.clone(),
            digits: self.digits,
        }
    }

    pub fn recip(&self) -> Self {
        APComplex::one(self.digits) / self
    }

    pub fn sqr(&self) -> Self {
        self * self
    }

    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut base = self.clone();
        let mut acc = APComplex::one(self.digits);
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let b = self.bits();
        let m = Float::with_val(b, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(b));
        APComplex {
            re: Float::with_val(b, &m * &c),
            im: Float::with_val(b, &m * &s),
            digits: self.digits,
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let b = self.bits();
        let r = self.abs();
        APComplex {
            re: Float::with_val(b, r.ln_ref()),
            im: Float::with_val(b, self.im.atan2_ref(&self.re)),
            digits: self.digits,
        }
    }

    /// Principal power `self^w`; `0^w = 0` for Re w > 0.
    pub fn pow(&self, w: &APComplex) -> Self {
        let d = self.digits.min(w.digits);
        if self.is_zero() {
            if w.is_zero() {
                return APComplex::one(d);
            }
            return APComplex::zero(d);
        }
        (&self.ln() * w).exp().with_digits(d)
    }

    pub fn pow_q(&self, q: &Rational) -> Self {
        if q.denom() == &1u32 {
            if let Some(n) = q.numer().to_i64() {
                if n.unsigned_abs() < 4096 {
                    return self.powi(n);
                }
            }
        }
        self.pow(&APComplex::from_rational(q, self.digits))
    }

    pub fn sqrt(&self) -> Self {
        let half = Rational::from((1, 2));
        self.pow_q(&half)
    }

    pub fn sin(&self) -> Self {
        let b = self.bits();
        let (s, c) = self.re.clone().sin_cos(Float::new(b));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(b));
        APComplex {
            re: Float::with_val(b, &s * &ch),
            im: Float::with_val(b, &c * &sh),
            digits: self.digits,
        }
    }

    /// `|a - b| / max(|a|, |b|)`, or 0 when both vanish.
    pub fn rel_diff(a: &APComplex, b: &APComplex) -> Float {
        let d = (a - b).abs();
        let m = a.abs().max(&b.abs());
        if m.is_zero() {
            return d;
        }
        d / m
    }

    /// Decimal rendering with `n` significant digits.
    pub fn to_decimal(&self, n: usize) -> String {
        let re = fmt_float(&self.re, n);
        if self.im.is_zero() {
            return re;
        }
        let sign = if self.im.is_sign_negative() { "-" } else { "+" };
        let im = fmt_float(&Float::with_val(self.bits(), self.im.abs_ref()), n);
        format!("{re}{sign}{im}i")
    }

    pub fn cmp_abs(&self, other: &APComplex) -> Ordering {
        self.abs().partial_cmp(&other.abs()).unwrap_or(Ordering::Equal)
    }
}

pub(crate) fn fmt_float(x: &Float, n: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(n.max(1)));
    // rug renders "1.2345e-3"; drop a trailing "e0"
    match s.strip_suffix("e0") {
        Some(t) => t.to_string(),
        None => s,
    }
}

/// `10^(-k)` at the given binary precision.
pub fn ten_pow_neg(k: i64, bits: u32) -> Float {
    let x = Float::with_val(bits, -k);
    Float::with_val(bits, x.exp10_ref())
}

impl PartialEq for APComplex {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

impl fmt::Display for APComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(self.digits as usize))
    }
}

impl<'a> Add<&'a APComplex> for &'a APComplex {
    type Output = APComplex;
    fn add(self, o: &APComplex) -> APComplex {
        let d = self.digits.min(o.digits);
        let b = digits_to_bits(d);
        APComplex {
            re: Float::with_val(b, &self.re + &o.re),
            im: Float::with_val(b, &self.im + &o.im),
            digits: d,
        }
    }
}

impl<'a> Sub<&'a APComplex> for &'a APComplex {
    type Output = APComplex;
    fn sub(self, o: &APComplex) -> APComplex {
        let d = self.digits.min(o.digits);
        let b = digits_to_bits(d);
        APComplex {
            re: Float::with_val(b, &self.re - &o.re),
            im: Float::with_val(b, &self.im - &o.im),
            digits: d,
        }
    }
}

impl<'a> Mul<&'a APComplex> for &'a APComplex {
    type Output = APComplex;
    fn mul(self, o: &APComplex) -> APComplex {
        let d = self.digits.min(o.digits);
        let b = digits_to_bits(d);
        if self.im.is_zero() && o.im.is_zero() {
            return APComplex {
                re: Float::with_val(b, &self.re * &o.re),
                im: Float::new(b),
                digits: d,
            };
        }
        let rr = Float::with_val(b + 8, &self.re * &o.re);
        let ii = Float::with_val(b + 8, &self.im * &o.im);
        let ri = Float::with_val(b + 8, &self.re * &o.im);
        let ir = Float::with_val(b + 8, &self.im * &o.re);
        APComplex {
            re: Float::with_val(b, &rr - &ii),
            im: Float::with_val(b, &ri + &ir),
            digits: d,
        }
    }
}

impl<'a> Div<&'a APComplex> for &'a APComplex {
    type Output = APComplex;
    fn div(self, o: &APComplex) -> APComplex {
        let d = self.digits.min(o.digits);
        let b = digits_to_bits(d);
        if o.im.is_zero() {
            return APComplex {
                re: Float::with_val(b, &self.re / &o.re),
                im: Float::with_val(b, &self.im / &o.re),
                digits: d,
            };
        }
        let wb = b + 16;
        let den = Float::with_val(wb, o.re.square_ref()) + Float::with_val(wb, o.im.square_ref());
        let rr = Float::with_val(wb, &self.re * &o.re);
        let ii = Float::with_val(wb, &self.im * &o.im);
        let ir = Float::with_val(wb, &self.im * &o.re);
        let ri = Float::with_val(wb, &self.re * &o.im);
        APComplex {
            re: Float::with_val(b, (rr + ii) / &den),
            im: Float::with_val(b, (ir - ri) / &den),
            digits: d,
        }
    }
}

impl Neg for &APComplex {
    type Output = APComplex;
    fn neg(self) -> APComplex {
        APComplex {
            re: Float::with_val(self.bits(), -&self.re),
            im: Float::with_val(self.bits(), -&self.im),
            digits: self.digits,
        }
    }
}

impl Neg for APComplex {
    type Output = APComplex;
    fn neg(self) -> APComplex {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<APComplex> for APComplex {
            type Output = APComplex;
            fn $m(self, o: APComplex) -> APComplex {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a APComplex> for APComplex {
            type Output = APComplex;
            fn $m(self, o: &APComplex) -> APComplex {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<APComplex> for &'a APComplex {
            type Output = APComplex;
            fn $m(self, o: APComplex) -> APComplex {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&APComplex> for APComplex {
    fn add_assign(&mut self, o: &APComplex) {
        *self = &*self + o;
    }
}

impl SubAssign<&APComplex> for APComplex {
    fn sub_assign(&mut self, o: &APComplex) {
        *self = &*self - o;
    }
}

impl MulAssign<&APComplex> for APComplex {
    fn mul_assign(&mut self, o: &APComplex) {
        *self = &*self * o;
    }
}
