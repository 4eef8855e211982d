//! Rational functions with a factored denominator.
//!
//! Denominator factors are kept monic and non-constant; equality is decided
//! by cross-multiplication, so no multivariate gcd is needed.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::Rational;

use super::poly::{Poly, Var, NVARS};

#[derive(Clone, Debug, Default)]
pub struct RatFunc {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc::default()
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: BTreeMap::new() }
    }

    pub fn constant(q: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(q))
    }

    pub fn int(n: i64) -> Self {
        RatFunc::constant(Rational::from(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        RatFunc::constant(Rational::from((p, q)))
    }

    pub fn var(v: Var) -> Self {
        RatFunc::from_poly(Poly::var(v))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn den_factors(&self) -> impl Iterator<Item = (&Poly, u32)> {
        self.den.iter().map(|(p, e)| (p, *e))
    }

    /// The expanded denominator.
    pub fn denominator(&self) -> Poly {
        self.den.iter().fold(Poly::one(), |acc, (p, e)| &acc * &p.pow(*e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        self.as_poly().and_then(Poly::as_constant)
    }

    pub fn uses(&self, v: Var) -> bool {
        self.num.uses(v) || self.den.keys().any(|d| d.uses(v))
    }

    /// Divides by `p^e`, splitting off monomial factors and merging with known factors.
    fn push_den(&mut self, p: &Poly, e: u32) {
        if e == 0 {
            return;
        }
        let mc = p.monomial_content();
        let mut rest = p.div_monomial(&mc);
        for v in Var::ALL {
            let k = mc[v.idx()];
            if k > 0 {
                *self.den.entry(Poly::var(v)).or_insert(0) += k as u32 * e;
            }
        }
        // known factors dividing `rest`
        let known: Vec<Poly> = self.den.keys().cloned().collect();
        for f in known {
            if f.len() < 2 {
                continue;
            }
            while rest.len() > 1 {
                match rest.div_exact(&f) {
                    Some(q) => {
                        rest = q;
                        *self.den.get_mut(&f).expect("known") += e;
                    }
                    None => break,
                }
            }
        }
        let (lc, monic) = rest.monic();
        assert!(lc != 0, "division by zero rational function");
        let inv = Rational::from(lc.recip_ref()).pow(e as i32);
        self.num = self.num.scale(&Rational::from(inv));
        if monic.as_constant().is_none() {
            *self.den.entry(monic).or_insert(0) += e;
        }
    }

    /// Cancels denominator factors that divide the numerator.
    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let keys: Vec<Poly> = self.den.keys().cloned().collect();
        for f in keys {
            loop {
                let e = self.den[&f];
                if e == 0 {
                    break;
                }
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        *self.den.get_mut(&f).expect("present") -= 1;
                    }
                    None => break,
                }
            }
            if self.den[&f] == 0 {
                self.den.remove(&f);
            }
        }
        self
    }

    fn common(a: &RatFunc, b: &RatFunc) -> (BTreeMap<Poly, u32>, Poly, Poly) {
        let mut den = a.den.clone();
        for (f, e) in &b.den {
            let slot = den.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        let lift = |r: &RatFunc| {
            let mut p = r.num.clone();
            for (f, e) in &den {
                let have = r.den.get(f).copied().unwrap_or(0);
                if *e > have {
                    p = &p * &f.pow(e - have);
                }
            }
            p
        };
        let (na, nb) = (lift(a), lift(b));
        (den, na, nb)
    }

    pub fn recip(&self) -> RatFunc {
        assert!(!self.is_zero(), "reciprocal of zero");
        let mut r = RatFunc::from_poly(self.denominator());
        r.push_den(&self.num, 1);
        r.reduce()
    }

    pub fn div(&self, o: &RatFunc) -> RatFunc {
        self * &o.recip()
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        RatFunc { num: self.num.pow(k), den: self.den.iter().map(|(f, e)| (f.clone(), e * k)).collect() }
    }

    pub fn scale(&self, q: &Rational) -> RatFunc {
        RatFunc { num: self.num.scale(q), den: if *q == 0 { BTreeMap::new() } else { self.den.clone() } }
    }

    /// Partial derivative in `v`.
    pub fn deriv(&self, v: Var) -> RatFunc {
        // d(N / prod D^e) = (N' prod_S D - N sum_S e_k D_k' prod_{S\k} D) / (prod D^e prod_S D)
        let moving: Vec<(&Poly, u32, Poly)> = self.den.iter().filter_map(|(f, e)| {
            let d = f.deriv(v);
            if d.is_zero() { None } else { Some((f, *e, d)) }
        }).collect();
        let prod_s = moving.iter().fold(Poly::one(), |acc, (f, _, _)| &acc * f);
        let mut num = &self.num.deriv(v) * &prod_s;
        for (k, (_, e, d)) in moving.iter().enumerate() {
            let others = moving.iter().enumerate().filter(|(l, _)| *l != k).fold(Poly::one(), |acc, (_, (f, _, _))| &acc * f);
            num = &num - &(&(&self.num * d) * &others).scale(&Rational::from(*e));
        }
        let mut den = self.den.clone();
        for (f, _, _) in &moving {
            *den.get_mut(*f).expect("present") += 1;
        }
        RatFunc { num, den }.reduce()
    }

    /// Euler derivative `v ∂/∂v`.
    pub fn theta(&self, v: Var) -> RatFunc {
        &RatFunc::var(v) * &self.deriv(v)
    }

    /// Replaces `v` by `r`.
    pub fn subst(&self, v: Var, r: &RatFunc) -> RatFunc {
        if !self.uses(v) {
            return self.clone();
        }
        let mut out = subst_poly(&self.num, v, r);
        for (f, e) in &self.den {
            let fr = subst_poly(f, v, r);
            out = &out * &fr.recip().pow(*e);
        }
        out
    }

    pub fn instantiate(&self, values: &[(Var, Rational)]) -> RatFunc {
        let mut r = RatFunc::from_poly(self.num.instantiate(values));
        for (f, e) in &self.den {
            r.push_den(&f.instantiate(values), *e);
        }
        r.reduce()
    }

    /// Value at a full rational point; None at a pole.
    pub fn eval(&self, point: &[Rational; NVARS]) -> Option<Rational> {
        let d = self.denominator().eval(point);
        if d == 0 {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }
}

fn subst_poly(p: &Poly, v: Var, r: &RatFunc) -> RatFunc {
    if !p.uses(v) {
        return RatFunc::from_poly(p.clone());
    }
    let i = v.idx();
    let mut powers = vec![RatFunc::one()];
    let mut out = RatFunc::zero();
    for (m, c) in p.terms() {
        let e = m[i] as usize;
        while powers.len() <= e {
            let next = &powers[powers.len() - 1] * r;
            powers.push(next);
        }
        let mut mm = *m;
        mm[i] = 0;
        out = &out + &(&RatFunc::from_poly(Poly::monomial(mm, c.clone())) * &powers[e]);
    }
    out
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        let (_, a, b) = RatFunc::common(self, o);
        a == b
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let (den, a, b) = RatFunc::common(self, o);
        RatFunc { num: &a + &b, den }.reduce()
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let mut den = self.den.clone();
        for (f, e) in &o.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        RatFunc { num: &self.num * &o.num, den }.reduce()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(p, e)| {
                let base = if p.len() > 1 { format!("({p})") } else { p.to_string() };
                if *e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        write!(f, "({}) / ({})", self.num, parts.join("*"))
    }
}
