//! Sparse multivariate polynomials over Q.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::Rational;

pub const NVARS: usize = 10;

/// Indeterminates: the series variables and the symbolic parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    Z,
    A,
    B,
    C,
    P1,
    P2,
    Q1,
    Q2,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::X, Var::Y, Var::Z, Var::A, Var::B, Var::C, Var::P1, Var::P2, Var::Q1, Var::Q2];

    pub fn idx(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z", "a", "b", "c", "p1", "p2", "q1", "q2"][self.idx()]
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == s)
    }
}

/// Exponent vector, ordered lexicographically with `x` most significant.
pub type Mono = [u16; NVARS];

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Mono, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::from(1))
    }

    pub fn constant(q: Rational) -> Self {
        let mut p = Poly::zero();
        if q != 0 {
            p.terms.insert([0; NVARS], q);
        }
        p
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(Rational::from(n))
    }

    pub fn var(v: Var) -> Self {
        let mut m = [0; NVARS];
        m[v.idx()] = 1;
        Poly::monomial(m, Rational::from(1))
    }

    pub fn monomial(m: Mono, q: Rational) -> Self {
        let mut p = Poly::zero();
        if q != 0 {
            p.terms.insert(m, q);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&[0; NVARS]).cloned(),
            _ => None,
        }
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m[v.idx()] > 0)
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m[v.idx()]).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Mono, q: Rational) {
        if q == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(q);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += q;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, q: &Rational) -> Poly {
        if *q == 0 {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, Rational::from(c * q))).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Partial derivative in `v`.
    pub fn deriv(&self, v: Var) -> Poly {
        let i = v.idx();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut mm = *m;
                mm[i] -= 1;
                out.add_term(mm, Rational::from(c * m[i] as u64));
            }
        }
        out
    }

    /// Leading term in lex order.
    pub fn leading(&self) -> Option<(&Mono, &Rational)> {
        self.terms.iter().next_back()
    }

    /// `(lc, self / lc)`.
    pub fn monic(&self) -> (Rational, Poly) {
        match self.leading() {
            None => (Rational::new(), Poly::zero()),
            Some((_, lc)) => {
                let lc = lc.clone();
                let inv = Rational::from(lc.recip_ref());
                (lc, self.scale(&inv))
            }
        }
    }

    /// Exact quotient, or None if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (*dm, dc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            let mut qm = [0u16; NVARS];
            for k in 0..NVARS {
                if m[k] < dm[k] {
                    return None;
                }
                qm[k] = m[k] - dm[k];
            }
            let qc = Rational::from(c / &dc);
            let t = Poly::monomial(qm, qc);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut g = [u16::MAX; NVARS];
        for m in self.terms.keys() {
            for k in 0..NVARS {
                g[k] = g[k].min(m[k]);
            }
        }
        if self.is_zero() {
            [0; NVARS]
        } else {
            g
        }
    }

    pub fn div_monomial(&self, d: &Mono) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut mm = *m;
                for k in 0..NVARS {
                    mm[k] -= d[k];
                }
                (mm, c.clone())
            })
            .collect();
        Poly { terms }
    }

    /// Replaces `v` by the polynomial `r`.
    pub fn subst(&self, v: Var, r: &Poly) -> Poly {
        let i = v.idx();
        if !self.uses(v) {
            return self.clone();
        }
        let mut powers: Vec<Poly> = vec![Poly::one()];
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m[i] as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * r;
                powers.push(next);
            }
            let mut mm = *m;
            mm[i] = 0;
            out = &out + &(&Poly::monomial(mm, c.clone()) * &powers[e]);
        }
        out
    }

    /// Substitutes rational values for some variables.
    pub fn instantiate(&self, values: &[(Var, Rational)]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut mm = *m;
            let mut cc = c.clone();
            for (v, q) in values {
                let e = mm[v.idx()];
                if e > 0 {
                    cc *= Rational::from((q).pow(e as i32));
                    mm[v.idx()] = 0;
                }
            }
            out.add_term(mm, cc);
        }
        out
    }

    /// Value at a full rational point (indexed by `Var::idx`).
    pub fn eval(&self, point: &[Rational; NVARS]) -> Rational {
        let mut s = Rational::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for k in 0..NVARS {
                if m[k] > 0 {
                    t *= Rational::from((&point[k]).pow(m[k] as i32));
                }
            }
            s += t;
        }
        s
    }

    /// Coefficients of the univariate polynomial in `v`, if no other variable occurs.
    pub fn univariate(&self, v: Var) -> Option<Vec<Rational>> {
        let i = v.idx();
        let mut out = vec![Rational::new(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            if (0..NVARS).any(|k| k != i && m[k] > 0) {
                return None;
            }
            out[m[i] as usize] = c.clone();
        }
        Some(out)
    }

    /// Exponent pairs `(deg x, deg y)` with coefficients, if only x and y occur.
    pub fn bivariate(&self) -> Option<Vec<((usize, usize), Rational)>> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if (2..NVARS).any(|k| m[k] > 0) {
                return None;
            }
            out.push(((m[0] as usize, m[1] as usize), c.clone()));
        }
        Some(out)
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, Rational::from(-c));
        }
        r
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m = *m1;
                for k in 0..NVARS {
                    m[k] += m2[k];
                }
                r.add_term(m, Rational::from(c1 * c2));
            }
        }
        r
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Rational::from(-1))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let vars: Vec<String> = Var::ALL
                .iter()
                .filter(|v| m[v.idx()] > 0)
                .map(|v| match m[v.idx()] {
                    1 => v.name().to_string(),
                    e => format!("{}^{}", v.name(), e),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}
