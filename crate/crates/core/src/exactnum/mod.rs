//! Exact rationals, multiprecision complex values, Gamma and Pochhammer
//! symbols, and leading-order limits of Pochhammer ratios.

mod apcomplex;
mod gamma;
mod param;

use std::fmt::Debug;

use rug::{Integer, Rational};
use thiserror::Error;

pub use apcomplex::{digits_to_bits, ten_pow_neg, APComplex};
pub use gamma::{gamma, gamma_param, rgamma_param};
pub use param::{parse_rational, ParamValue};

/// Arbitrary-size fraction, always kept in lowest terms with positive denominator.
pub type ExactRational = Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("Gamma has a pole at {at}")]
pub struct PoleError {
    pub at: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("cannot parse number {0:?}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("approximate value where an exact one is required")]
    NotExact,
}

/// Arithmetic shared by exact and multiprecision code paths.
pub trait Scalar: Clone + Debug + Send + Sync + 'static {
    fn lift(q: &Rational, digits: u32) -> Self;
    fn lift_param(p: &ParamValue, digits: u32) -> Result<Self, NumError>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn into_param(self) -> ParamValue;

    fn zero(digits: u32) -> Self {
        Self::lift(&Rational::new(), digits)
    }
    fn one(digits: u32) -> Self {
        Self::lift(&Rational::from(1), digits)
    }
    fn mul_q(&self, q: &Rational, digits: u32) -> Self {
        self.mul(&Self::lift(q, digits))
    }
}

impl Scalar for Rational {
    fn lift(q: &Rational, _: u32) -> Self {
        q.clone()
    }
    fn lift_param(p: &ParamValue, _: u32) -> Result<Self, NumError> {
        p.as_exact().cloned().ok_or(NumError::NotExact)
    }
    fn add(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn div(&self, o: &Self) -> Self {
        Rational::from(self / o)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn into_param(self) -> ParamValue {
        ParamValue::Exact(self)
    }
}

impl Scalar for APComplex {
    fn lift(q: &Rational, digits: u32) -> Self {
        APComplex::from_rational(q, digits)
    }
    fn lift_param(p: &ParamValue, digits: u32) -> Result<Self, NumError> {
        Ok(p.to_complex_at(digits))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        APComplex::is_zero(self)
    }
    fn into_param(self) -> ParamValue {
        ParamValue::Approx(self)
    }
}

/// Rising factorial (x)_k.
pub fn pochhammer(x: &ParamValue, k: usize) -> ParamValue {
    match x {
        ParamValue::Exact(q) => ParamValue::Exact(pochhammer_q(q, k)),
        ParamValue::Approx(z) => {
            let mut acc = APComplex::one(z.digits());
            let mut f = z.clone();
            let one = Rational::from(1);
            for _ in 0..k {
                acc = &acc * &f;
                f = f.add_q(&one);
            }
            ParamValue::Approx(acc)
        }
    }
}

pub fn pochhammer_q(q: &Rational, k: usize) -> Rational {
    let mut acc = Rational::from(1);
    let mut f = q.clone();
    for _ in 0..k {
        acc *= &f;
        if acc == 0 {
            return acc;
        }
        f += 1;
    }
    acc
}

pub fn factorial(n: usize) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

/// A factor `value + slope·ε` of a product whose ε→0 limit is wanted.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsFactor {
    pub value: Rational,
    pub slope: Rational,
}

impl EpsFactor {
    pub fn new(value: Rational, slope: Rational) -> Self {
        EpsFactor { value, slope }
    }
}

/// Leading behaviour `coeff·ε^order` of a product of `EpsFactor`s. A factor
/// with vanishing value and slope makes the product identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsProduct {
    pub coeff: Rational,
    pub order: i32,
    pub rigid_zero: bool,
}

impl Default for EpsProduct {
    fn default() -> Self {
        EpsProduct { coeff: Rational::from(1), order: 0, rigid_zero: false }
    }
}

impl EpsProduct {
    pub fn mul_factor(&mut self, f: &EpsFactor) {
        if f.value != 0 {
            self.coeff *= &f.value;
        } else if f.slope != 0 {
            self.coeff *= &f.slope;
            self.order += 1;
        } else {
            self.rigid_zero = true;
        }
    }

    /// Returns false when dividing by an identically vanishing factor.
    pub fn div_factor(&mut self, f: &EpsFactor) -> bool {
        if f.value != 0 {
            self.coeff /= &f.value;
        } else if f.slope != 0 {
            self.coeff /= &f.slope;
            self.order -= 1;
        } else {
            return self.rigid_zero;
        }
        true
    }

    /// ε→0 limit, or None when it diverges.
    pub fn limit(&self) -> Option<Rational> {
        if self.rigid_zero || self.order > 0 {
            Some(Rational::new())
        } else if self.order == 0 {
            Some(self.coeff.clone())
        } else {
            None
        }
    }
}

/// Factors of (value + slope·ε)_k.
pub fn eps_pochhammer(value: &Rational, slope: &Rational, k: usize) -> Vec<EpsFactor> {
    (0..k)
        .map(|j| EpsFactor::new(Rational::from(value + j as u64), slope.clone()))
        .collect()
}

/// lim_{ε→0} (ε−k)_{2k+1} / (2ε−2k)_{2k+1}, computed from the leading orders
/// of numerator and denominator.
pub fn pochhammer_ratio_limit(k: usize) -> Rational {
    let kk = Rational::from(k as u64);
    let mut p = EpsProduct::default();
    for f in eps_pochhammer(&Rational::from(-&kk), &Rational::from(1), 2 * k + 1) {
        p.mul_factor(&f);
    }
    for f in eps_pochhammer(&Rational::from(-2 * kk), &Rational::from(2), 2 * k + 1) {
        let ok = p.div_factor(&f);
        debug_assert!(ok);
    }
    p.limit().expect("orders balance")
}

/// Checks (a+1/2)_m (a)_{m+1} / ((1/2)_m (1/2)_{m+1}) = 2^{2m} (m!)^2 (2a)_{2m+1} / ((2m)! (2m+1)!).
pub fn pochhammer_identity_check(m: usize, a: &ParamValue) -> bool {
    let (lhs, rhs) = pochhammer_identity_sides(m, a);
    match (&lhs, &rhs) {
        (ParamValue::Exact(l), ParamValue::Exact(r)) => l == r,
        _ => {
            let d = match a {
                ParamValue::Approx(z) => z.digits(),
                _ => 40,
            };
            let rd = APComplex::rel_diff(&lhs.to_complex(d), &rhs.to_complex(d));
            rd < ten_pow_neg(d as i64 - 10, digits_to_bits(d))
        }
    }
}

pub(crate) fn pochhammer_identity_sides(m: usize, a: &ParamValue) -> (ParamValue, ParamValue) {
    let half = ParamValue::ratio(1, 2);
    let lnum = pochhammer(&a.add(&half), m).mul(&pochhammer(a, m + 1));
    let lden = pochhammer(&half, m).mul(&pochhammer(&half, m + 1));
    let lhs = lnum.div(&lden).expect("(1/2)_m never vanishes");
    let four_m = Integer::from(Integer::u_pow_u(4, m as u32));
    let fm = factorial(m);
    let num_c = Rational::from(four_m * Integer::from(&fm * &fm));
    let den_c = Rational::from(factorial(2 * m) * factorial(2 * m + 1));
    let c = ParamValue::Exact(num_c / den_c);
    let rhs = c.mul(&pochhammer(&a.scale_i(2), 2 * m + 1));
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&ParamValue::ratio(5, 7), 0), ParamValue::int(1));
        assert_eq!(pochhammer(&ParamValue::ratio(1, 2), 3), ParamValue::ratio(15, 8));
        assert_eq!(pochhammer(&ParamValue::int(-3), 5), ParamValue::int(0));
    }

    #[test]
    fn ratio_limit_examples() {
        assert_eq!(pochhammer_ratio_limit(0), Rational::from((1, 2)));
        assert_eq!(pochhammer_ratio_limit(1), Rational::from((-1, 4)));
        assert_eq!(pochhammer_ratio_limit(2), Rational::from((1, 12)));
    }

    #[test]
    fn ratio_limit_matches_closed_form() {
        // (-1)^k k! / (2^{2k+1} (1/2)_k)
        for k in 0..10usize {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let num = Rational::from(factorial(k) * sign);
            let den = Rational::from(Integer::from(Integer::u_pow_u(2, 2 * k as u32 + 1)))
                * pochhammer_q(&Rational::from((1, 2)), k);
            assert_eq!(pochhammer_ratio_limit(k), num / den, "k={k}");
        }
    }

    #[test]
    fn identity_examples() {
        assert!(pochhammer_identity_check(0, &ParamValue::ratio(1, 3)));
        let (l, r) = pochhammer_identity_sides(1, &ParamValue::int(1));
        assert_eq!(l, ParamValue::int(8));
        assert_eq!(r, ParamValue::int(8));
        assert!(pochhammer_identity_check(2, &ParamValue::ratio(1, 4)));
        assert!(pochhammer_identity_check(3, &ParamValue::Approx(APComplex::from_f64(0.3, 40))));
    }

    #[test]
    fn eps_rigid_zero_in_denominator() {
        let mut p = EpsProduct::default();
        assert!(!p.div_factor(&EpsFactor::new(Rational::new(), Rational::new())));
        p.mul_factor(&EpsFactor::new(Rational::new(), Rational::new()));
        assert!(p.div_factor(&EpsFactor::new(Rational::new(), Rational::new())));
        assert_eq!(p.limit(), Some(Rational::new()));
    }
}
