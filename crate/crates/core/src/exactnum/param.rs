use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::apcomplex::{digits_to_bits, ten_pow_neg, APComplex};
use super::NumError;

/// A parameter or argument: exact rational, or a multiprecision complex.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Exact(Rational),
    Approx(APComplex),
}

impl ParamValue {
    pub fn int(n: i64) -> Self {
        ParamValue::Exact(Rational::from(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        ParamValue::Exact(Rational::from((p, q)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ParamValue::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            ParamValue::Exact(q) => Some(q),
            ParamValue::Approx(_) => None,
        }
    }

    pub fn to_complex(&self, digits: u32) -> APComplex {
        match self {
            ParamValue::Exact(q) => APComplex::from_rational(q, digits),
            ParamValue::Approx(z) => z.with_digits(digits.min(z.digits()).max(1)),
        }
    }

    /// Like `to_complex` but keeps the requested precision even for approx input.
    pub fn to_complex_at(&self, digits: u32) -> APComplex {
        match self {
            ParamValue::Exact(q) => APComplex::from_rational(q, digits),
            ParamValue::Approx(z) => z.with_digits(digits),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ParamValue::Exact(q) => *q == 0,
            ParamValue::Approx(z) => z.is_zero(),
        }
    }

    /// Exact test for exact values; for approximate values a relative
    /// tolerance of `10^-(precision-5)` around the nearest integer.
    pub fn nonpositive_integer(&self) -> Option<i64> {
        match self {
            ParamValue::Exact(q) => {
                if q.denom() == &1u32 && *q <= 0 {
                    q.numer().to_i64()
                } else {
                    None
                }
            }
            ParamValue::Approx(z) => near_nonpositive_integer(z),
        }
    }

    pub fn re_f64(&self) -> f64 {
        match self {
            ParamValue::Exact(q) => q.to_f64(),
            ParamValue::Approx(z) => z.re().to_f64(),
        }
    }

    /// Real part as a float at the given precision.
    pub fn re_float(&self, digits: u32) -> Float {
        match self {
            ParamValue::Exact(q) => Float::with_val(digits_to_bits(digits), q),
            ParamValue::Approx(z) => Float::with_val(digits_to_bits(digits), z.re()),
        }
    }

    pub fn add(&self, o: &ParamValue) -> ParamValue {
        match (self, o) {
            (ParamValue::Exact(a), ParamValue::Exact(b)) => ParamValue::Exact(Rational::from(a + b)),
            _ => ParamValue::Approx(self.approx_with(o, |a, b| a + b)),
        }
    }

    pub fn sub(&self, o: &ParamValue) -> ParamValue {
        match (self, o) {
            (ParamValue::Exact(a), ParamValue::Exact(b)) => ParamValue::Exact(Rational::from(a - b)),
            _ => ParamValue::Approx(self.approx_with(o, |a, b| a - b)),
        }
    }

    pub fn mul(&self, o: &ParamValue) -> ParamValue {
        match (self, o) {
            (ParamValue::Exact(a), ParamValue::Exact(b)) => ParamValue::Exact(Rational::from(a * b)),
            _ => ParamValue::Approx(self.approx_with(o, |a, b| a * b)),
        }
    }

    pub fn div(&self, o: &ParamValue) -> Result<ParamValue, NumError> {
        if o.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(match (self, o) {
            (ParamValue::Exact(a), ParamValue::Exact(b)) => ParamValue::Exact(Rational::from(a / b)),
            _ => ParamValue::Approx(self.approx_with(o, |a, b| a / b)),
        })
    }

    pub fn neg(&self) -> ParamValue {
        match self {
            ParamValue::Exact(a) => ParamValue::Exact(Rational::from(-a)),
            ParamValue::Approx(z) => ParamValue::Approx(-z),
        }
    }

    pub fn add_q(&self, q: &Rational) -> ParamValue {
        self.add(&ParamValue::Exact(q.clone()))
    }

    pub fn add_i(&self, n: i64) -> ParamValue {
        self.add(&ParamValue::int(n))
    }

    pub fn scale_i(&self, n: i64) -> ParamValue {
        self.mul(&ParamValue::int(n))
    }

    fn approx_with(&self, o: &ParamValue, f: impl Fn(&APComplex, &APComplex) -> APComplex) -> APComplex {
        let d = match (self, o) {
            (ParamValue::Approx(a), ParamValue::Approx(b)) => a.digits().min(b.digits()),
            (ParamValue::Approx(a), _) => a.digits(),
            (_, ParamValue::Approx(b)) => b.digits(),
            _ => unreachable!("exact pair handled by caller"),
        };
        f(&self.to_complex_at(d), &o.to_complex_at(d))
    }
}

pub(crate) fn near_nonpositive_integer(z: &APComplex) -> Option<i64> {
    let bits = z.bits();
    let n = z.re().to_integer()?;
    if n > 0 {
        return None;
    }
    let nf = Float::with_val(bits, &n);
    let dr = Float::with_val(bits, z.re() - &nf);
    let dist = Float::with_val(bits, dr.hypot_ref(z.im()));
    let mut tol = ten_pow_neg(z.digits() as i64 - 5, bits);
    let scale = Float::with_val(bits, nf.abs_ref()).max(&Float::with_val(bits, 1));
    tol *= scale;
    if dist <= tol {
        n.to_i64()
    } else {
        None
    }
}

impl From<Rational> for ParamValue {
    fn from(q: Rational) -> Self {
        ParamValue::Exact(q)
    }
}

impl From<i64> for ParamValue {
    fn from(n: i64) -> Self {
        ParamValue::int(n)
    }
}

impl From<APComplex> for ParamValue {
    fn from(z: APComplex) -> Self {
        ParamValue::Approx(z)
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Exact(q) => write!(f, "{q}"),
            ParamValue::Approx(z) => write!(f, "{z}"),
        }
    }
}

/// Parses "p/q", an integer, or a finite decimal ("0.3", "-1.5e-2") into an
/// exact rational. Accepts the Unicode minus sign.
pub fn parse_rational(s: &str) -> Result<Rational, NumError> {
    let t = s.trim().replace('\u{2212}', "-");
    if t.is_empty() {
        return Err(NumError::Parse(s.to_string()));
    }
    if t.contains('/') {
        return Rational::from_str(&t).map_err(|_| NumError::Parse(s.to_string()));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(k) => {
            let e: i64 = t[k + 1..].parse().map_err(|_| NumError::Parse(s.to_string()))?;
            (&t[..k], e)
        }
        None => (&t[..], 0),
    };
    let (neg, body) = match mant.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = match body.find('.') {
        Some(k) => (&body[..k], &body[k + 1..]),
        None => (body, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return Err(NumError::Parse(s.to_string()));
    }
    if !ip.chars().all(|c| c.is_ascii_digit()) || !fp.chars().all(|c| c.is_ascii_digit()) {
        return Err(NumError::Parse(s.to_string()));
    }
    let digits = format!("{ip}{fp}");
    let n = Integer::from_str(if digits.is_empty() { "0" } else { &digits })
        .map_err(|_| NumError::Parse(s.to_string()))?;
    let shift = exp - fp.len() as i64;
    let mut q = Rational::from(n);
    if shift >= 0 {
        q *= Integer::from(Integer::u_pow_u(10, shift as u32));
    } else {
        q /= Integer::from(Integer::u_pow_u(10, (-shift) as u32));
    }
    if neg {
        q = -q;
    }
    Ok(q)
}

impl FromStr for ParamValue {
    type Err = NumError;
    fn from_str(s: &str) -> Result<Self, NumError> {
        parse_rational(s).map(ParamValue::Exact)
    }
}

impl Serialize for ParamValue {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            ParamValue::Exact(q) => ser.serialize_str(&q.to_string()),
            ParamValue::Approx(z) => {
                let n = z.digits() as usize;
                let mut m = ser.serialize_map(Some(3))?;
                m.serialize_entry("re", &super::apcomplex::fmt_float(z.re(), n))?;
                m.serialize_entry("im", &super::apcomplex::fmt_float(z.im(), n))?;
                m.serialize_entry("precision", &z.digits())?;
                m.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawParam {
    Text(String),
    Int(i64),
    Approx { re: String, #[serde(default)] im: Option<String>, precision: u32 },
}

impl<'de> Deserialize<'de> for ParamValue {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        match RawParam::deserialize(de)? {
            RawParam::Text(s) => s.parse().map_err(de::Error::custom),
            RawParam::Int(n) => Ok(ParamValue::int(n)),
            RawParam::Approx { re, im, precision } => {
                let bits = digits_to_bits(precision);
                let parse = |s: &str| {
                    Float::parse(s.replace('\u{2212}', "-"))
                        .map(|v| Float::with_val(bits, v))
                        .map_err(de::Error::custom)
                };
                let r = parse(&re)?;
                let i = match im {
                    Some(s) => parse(&s)?,
                    None => Float::new(bits),
                };
                Ok(ParamValue::Approx(APComplex::new(r, i, precision)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_decimal() {
        assert_eq!(parse_rational("1/3").unwrap(), Rational::from((1, 3)));
        assert_eq!(parse_rational("\u{2212}3").unwrap(), Rational::from(-3));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::from((1, 4)));
        assert_eq!(parse_rational("-1.5e-2").unwrap(), Rational::from((-3, 200)));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let p = ParamValue::ratio(-7, 4);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "\"-7/4\"");
        let back: ParamValue = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let z = ParamValue::Approx(APComplex::from_f64(0.5, 30));
        let s = serde_json::to_string(&z).unwrap();
        let back: ParamValue = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = ParamValue::ratio(1, 3);
        let b = ParamValue::ratio(1, 6);
        assert_eq!(a.add(&b), ParamValue::ratio(1, 2));
        assert!(a.div(&ParamValue::int(0)).is_err());
    }

    #[test]
    fn pole_detection() {
        assert_eq!(ParamValue::int(-3).nonpositive_integer(), Some(-3));
        assert_eq!(ParamValue::ratio(-3, 2).nonpositive_integer(), None);
        let near = APComplex::from_rational(&Rational::from(-2), 40).add_q(&Rational::from((1, 10i64.pow(18))));
        assert_eq!(ParamValue::Approx(near.clone()).nonpositive_integer(), None);
        let nearer = APComplex::from_rational(&Rational::from(-2), 40).add_q(&parse_rational("1e-38").unwrap());
        assert_eq!(ParamValue::Approx(nearer).nonpositive_integer(), Some(-2));
    }
}
