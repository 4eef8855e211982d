//! Euler operators in left normal form: `sum f_{ij} θx^i θy^j` (or `sum f_k θz^k`).

use std::collections::BTreeMap;

use rug::Rational;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::poly::{Poly, Var};
use super::ratfunc::RatFunc;
use super::ThetaError;
use crate::kdf::CoeffTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarSet {
    /// θx, θy over C(x, y)
    XY,
    /// θz over C(z)
    Z,
}

impl VarSet {
    fn vars(self) -> (Var, Var) {
        match self {
            VarSet::XY => (Var::X, Var::Y),
            VarSet::Z => (Var::Z, Var::Z),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ThetaOperator {
    vars: VarSet,
    terms: BTreeMap<(u32, u32), RatFunc>,
}

fn binom(n: u32, k: u32) -> Rational {
    let mut r = Rational::from(1);
    for t in 0..k {
        r *= Rational::from((n - t) as u64);
        r /= Rational::from((t + 1) as u64);
    }
    r
}

impl ThetaOperator {
    pub fn zero(vars: VarSet) -> Self {
        ThetaOperator { vars, terms: BTreeMap::new() }
    }

    pub fn scalar(vars: VarSet, f: RatFunc) -> Self {
        let mut op = ThetaOperator::zero(vars);
        op.add_term((0, 0), f);
        op
    }

    pub fn identity(vars: VarSet) -> Self {
        ThetaOperator::scalar(vars, RatFunc::one())
    }

    /// θx (`which = 0`), θy (`which = 1`), or θz.
    pub fn theta(vars: VarSet, which: usize) -> Self {
        let mut op = ThetaOperator::zero(vars);
        let mono = if which == 0 || vars == VarSet::Z { (1, 0) } else { (0, 1) };
        op.add_term(mono, RatFunc::one());
        op
    }

    /// `θz + s`, `θx + s`, `θy + s`, or `θx + θy + s` by `(wx, wy)` weights.
    pub fn linear(vars: VarSet, wx: i64, wy: i64, s: RatFunc) -> Self {
        let mut op = ThetaOperator::scalar(vars, s);
        if wx != 0 {
            op.add_term((1, 0), RatFunc::int(wx));
        }
        if wy != 0 {
            op.add_term((0, 1), RatFunc::int(wy));
        }
        op
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> RatFunc {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: (u32, u32), f: RatFunc) {
        if f.is_zero() {
            return;
        }
        let next = match self.terms.get(&m) {
            Some(g) => g + &f,
            None => f,
        };
        if next.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, next);
        }
    }

    fn check(&self, o: &ThetaOperator) -> Result<(), ThetaError> {
        if self.vars != o.vars {
            return Err(ThetaError::VariableMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &ThetaOperator) -> Result<ThetaOperator, ThetaError> {
        self.check(o)?;
        let mut r = self.clone();
        for (m, f) in &o.terms {
            r.add_term(*m, f.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &ThetaOperator) -> Result<ThetaOperator, ThetaError> {
        self.add(&o.scale_left(&RatFunc::int(-1)))
    }

    /// `f · self`.
    pub fn scale_left(&self, f: &RatFunc) -> ThetaOperator {
        let mut r = ThetaOperator::zero(self.vars);
        for (m, g) in &self.terms {
            r.add_term(*m, f * g);
        }
        r
    }

    /// `θx^i θy^j g` as a normal form (Leibniz rule for Euler derivations).
    fn move_past(&self, i: u32, j: u32, g: &RatFunc) -> Vec<((u32, u32), RatFunc)> {
        let (vx, vy) = self.vars.vars();
        let mut gx = vec![g.clone()];
        for _ in 0..i {
            let next = gx.last().expect("nonempty").theta(vx);
            gx.push(next);
        }
        let mut out = Vec::new();
        for (k, gk) in gx.iter().enumerate() {
            let k = k as u32;
            let mut g_kl = gk.clone();
            for l in 0..=j {
                if l > 0 {
                    g_kl = g_kl.theta(vy);
                }
                if g_kl.is_zero() {
                    break;
                }
                let c = Rational::from(binom(i, k) * binom(j, l));
                out.push(((i - k, j - l), g_kl.scale(&c)));
            }
        }
        out
    }

    /// Normal form of `self ∘ o`.
    pub fn compose(&self, o: &ThetaOperator) -> Result<ThetaOperator, ThetaError> {
        self.check(o)?;
        let mut r = ThetaOperator::zero(self.vars);
        for (&(i, j), f) in &self.terms {
            for (&(bi, bj), g) in &o.terms {
                for ((ri, rj), h) in self.move_past(i, j, g) {
                    r.add_term((ri + bi, rj + bj), f * &h);
                }
            }
        }
        Ok(r)
    }

    pub fn compose_all(ops: &[ThetaOperator]) -> Result<ThetaOperator, ThetaError> {
        let mut it = ops.iter();
        let first = it.next().expect("at least one operator").clone();
        it.try_fold(first, |acc, op| acc.compose(op))
    }

    pub fn pow(&self, k: u32) -> ThetaOperator {
        let mut r = ThetaOperator::identity(self.vars);
        for _ in 0..k {
            r = r.compose(self).expect("same variables");
        }
        r
    }

    /// Replaces θx, θy by operators `tx`, `ty` and maps coefficients through `f`.
    pub fn substitute(&self, f: impl Fn(&RatFunc) -> RatFunc, tx: &ThetaOperator, ty: &ThetaOperator) -> Result<ThetaOperator, ThetaError> {
        self.check(tx)?;
        self.check(ty)?;
        let mut px = vec![ThetaOperator::identity(self.vars)];
        let mut py = vec![ThetaOperator::identity(self.vars)];
        let mut r = ThetaOperator::zero(self.vars);
        for (&(i, j), c) in &self.terms {
            while px.len() <= i as usize {
                let n = px.last().expect("nonempty").compose(tx)?;
                px.push(n);
            }
            while py.len() <= j as usize {
                let n = py.last().expect("nonempty").compose(ty)?;
                py.push(n);
            }
            let mono = px[i as usize].compose(&py[j as usize])?;
            r = r.add(&mono.scale_left(&f(c)))?;
        }
        Ok(r)
    }

    /// `x^-α y^-β ∘ self ∘ x^α y^β`: replaces θx by θx + α and θy by θy + β.
    /// It annihilates `F` exactly when `self` annihilates `x^α y^β F`.
    pub fn shift_conjugate(&self, alpha: &RatFunc, beta: &RatFunc) -> ThetaOperator {
        let tx = ThetaOperator::linear(self.vars, 1, 0, alpha.clone());
        let ty = match self.vars {
            VarSet::XY => ThetaOperator::linear(self.vars, 0, 1, beta.clone()),
            VarSet::Z => tx.clone(),
        };
        self.substitute(Clone::clone, &tx, &ty).expect("same variables")
    }

    /// Conjugation by an arbitrary factor `g` with logarithmic Euler derivative
    /// `r = θg/g` (univariate): θ ↦ θ + r.
    pub fn gauge(&self, r: &RatFunc) -> ThetaOperator {
        assert_eq!(self.vars, VarSet::Z);
        let t = ThetaOperator::linear(VarSet::Z, 1, 0, r.clone());
        self.substitute(Clone::clone, &t, &t).expect("same variables")
    }

    /// The operator in the inverted variables `x -> 1/x`, `y -> 1/y`.
    pub fn invert(&self) -> ThetaOperator {
        let (vx, vy) = self.vars.vars();
        let f = |c: &RatFunc| {
            let c = c.subst(vx, &RatFunc::var(vx).recip());
            if vy != vx {
                c.subst(vy, &RatFunc::var(vy).recip())
            } else {
                c
            }
        };
        let tx = ThetaOperator::linear(self.vars, -1, 0, RatFunc::zero());
        let ty = match self.vars {
            VarSet::XY => ThetaOperator::linear(self.vars, 0, -1, RatFunc::zero()),
            VarSet::Z => tx.clone(),
        };
        self.substitute(f, &tx, &ty).expect("same variables")
    }

    /// Univariate change of variable `z = φ(u)` (u written as z again):
    /// coefficients become `f(φ(u))` and θz becomes `φ/(u φ') θu`.
    pub fn change_variable(&self, phi: &RatFunc) -> ThetaOperator {
        assert_eq!(self.vars, VarSet::Z);
        let h = phi.div(&RatFunc::var(Var::Z).mul_ref(&phi.deriv(Var::Z)));
        let mut t = ThetaOperator::zero(VarSet::Z);
        t.add_term((1, 0), h);
        self.substitute(|c| c.subst(Var::Z, phi), &t, &t).expect("same variables")
    }

    /// Left-multiplies by the product of all denominators, giving polynomial coefficients.
    pub fn clear_denominators(&self) -> ThetaOperator {
        let mut lcm: BTreeMap<Poly, u32> = BTreeMap::new();
        for c in self.terms.values() {
            for (f, e) in c.den_factors() {
                let slot = lcm.entry(f.clone()).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
        let m = lcm.iter().fold(Poly::one(), |acc, (f, e)| &acc * &f.pow(*e));
        self.scale_left(&RatFunc::from_poly(m))
    }

    pub fn instantiate(&self, values: &[(Var, Rational)]) -> ThetaOperator {
        let mut r = ThetaOperator::zero(self.vars);
        for (m, c) in &self.terms {
            r.add_term(*m, c.instantiate(values));
        }
        r
    }

    pub fn map_coeffs(&self, f: impl Fn(&RatFunc) -> RatFunc) -> ThetaOperator {
        let mut r = ThetaOperator::zero(self.vars);
        for (m, c) in &self.terms {
            r.add_term(*m, f(c));
        }
        r
    }

    /// Residual coefficients of `self` applied to `sum c_k z^k`; valid for every
    /// index of the input since coefficients are polynomial.
    pub fn apply_to_series(&self, coeffs: &[Rational]) -> Result<Vec<Rational>, ThetaError> {
        if self.vars != VarSet::Z {
            return Err(ThetaError::VariableMismatch);
        }
        let mut parts = Vec::new();
        for (&(k, _), c) in &self.terms {
            let p = c.as_poly().ok_or_else(|| ThetaError::NotPolynomial(c.to_string()))?;
            let u = p.univariate(Var::Z).ok_or_else(|| ThetaError::NotInstantiated(p.to_string()))?;
            parts.push((k, u));
        }
        let shift = parts.iter().map(|(_, u)| u.len()).max().unwrap_or(1);
        if coeffs.len() < shift {
            return Err(ThetaError::BoundsTooSmall { needed: shift, got: coeffs.len() });
        }
        let mut out = vec![Rational::new(); coeffs.len()];
        for (n, slot) in out.iter_mut().enumerate() {
            for (k, u) in &parts {
                for (s, cs) in u.iter().enumerate() {
                    if *cs == 0 || s > n {
                        continue;
                    }
                    let idx = n - s;
                    let w = Rational::from((idx as i64).pow(*k));
                    *slot += Rational::from(cs * &coeffs[idx]) * w;
                }
            }
        }
        Ok(out)
    }

    /// Residual table of `self` applied to `sum c_ij x^i y^j`.
    pub fn apply_to_table(&self, table: &CoeffTable<Rational>) -> Result<BTreeMap<(usize, usize), Rational>, ThetaError> {
        if self.vars != VarSet::XY {
            return Err(ThetaError::VariableMismatch);
        }
        let mut parts = Vec::new();
        for (&(k, l), c) in &self.terms {
            let p = c.as_poly().ok_or_else(|| ThetaError::NotPolynomial(c.to_string()))?;
            let b = p.bivariate().ok_or_else(|| ThetaError::NotInstantiated(p.to_string()))?;
            parts.push((k, l, b));
        }
        let needed = self.order() as usize + 1;
        if table.imax + 1 < needed || table.jmax + 1 < needed {
            return Err(ThetaError::BoundsTooSmall { needed, got: table.imax.min(table.jmax) + 1 });
        }
        let mut out = BTreeMap::new();
        for ((i, j), _) in table.iter() {
            let mut s = Rational::new();
            for (k, l, b) in &parts {
                for ((u, v), cs) in b {
                    if *u > i || *v > j {
                        continue;
                    }
                    let (ii, jj) = (i - u, j - v);
                    let c = table.get(ii, jj).expect("down-closed table");
                    let w = Rational::from((ii as i64).pow(*k) * (jj as i64).pow(*l));
                    s += Rational::from(cs * c) * w;
                }
            }
            out.insert((i, j), s);
        }
        Ok(out)
    }
}

impl RatFunc {
    fn mul_ref(&self, o: &RatFunc) -> RatFunc {
        self * o
    }
}

#[derive(Serialize)]
struct TermJson {
    mono: [u32; 2],
    num: String,
    den: String,
}

impl Serialize for ThetaOperator {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| TermJson { mono: [i, j], num: c.numerator().to_string(), den: c.denominator().to_string() })
            .collect();
        let mut m = ser.serialize_map(Some(2))?;
        m.serialize_entry("vars", if self.vars == VarSet::XY { "xy" } else { "z" })?;
        m.serialize_entry("terms", &terms)?;
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tx() -> ThetaOperator {
        ThetaOperator::theta(VarSet::XY, 0)
    }
    fn ty() -> ThetaOperator {
        ThetaOperator::theta(VarSet::XY, 1)
    }

    #[test]
    fn commutation_rule() {
        let x = ThetaOperator::scalar(VarSet::XY, RatFunc::var(Var::X));
        let lhs = tx().compose(&x).unwrap();
        let rhs = x.compose(&ThetaOperator::linear(VarSet::XY, 1, 0, RatFunc::one())).unwrap();
        assert!(lhs.sub(&rhs).unwrap().is_zero());
        assert_eq!(lhs.coeff(1, 0), RatFunc::var(Var::X));
        assert_eq!(lhs.coeff(0, 0), RatFunc::var(Var::X));
    }

    #[test]
    fn independent_thetas_commute() {
        let a = tx().compose(&ty()).unwrap();
        let b = ty().compose(&tx()).unwrap();
        assert!(a.sub(&b).unwrap().is_zero());
    }

    #[test]
    fn constants_commute() {
        let a = ThetaOperator::linear(VarSet::Z, 1, 0, RatFunc::var(Var::A));
        let b = ThetaOperator::linear(VarSet::Z, 1, 0, RatFunc::var(Var::B));
        assert!(a.compose(&b).unwrap().sub(&b.compose(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn mismatch() {
        assert!(matches!(tx().compose(&ThetaOperator::theta(VarSet::Z, 0)), Err(ThetaError::VariableMismatch)));
    }

    #[test]
    fn conjugation_group_action() {
        let x = ThetaOperator::scalar(VarSet::XY, RatFunc::var(Var::X));
        let op = x.compose(&tx().pow(2)).unwrap().add(&ty()).unwrap();
        let a = RatFunc::var(Var::A);
        let b = RatFunc::ratio(1, 3);
        let back = op.shift_conjugate(&a, &b).shift_conjugate(&-&a, &-&b);
        assert!(back.sub(&op).unwrap().is_zero());
        assert!(op.shift_conjugate(&RatFunc::zero(), &RatFunc::zero()).sub(&op).unwrap().is_zero());
    }

    #[test]
    fn theta_kills_constants_series() {
        let op = ThetaOperator::theta(VarSet::Z, 0);
        let r = op.apply_to_series(&[Rational::from(5), Rational::new(), Rational::new()]).unwrap();
        assert!(r.iter().all(|c| *c == 0));
    }

    #[test]
    fn json_terms() {
        let x = ThetaOperator::scalar(VarSet::XY, RatFunc::var(Var::X));
        let op = tx().compose(&x).unwrap();
        let j = serde_json::to_string(&op).unwrap();
        assert_eq!(j, r#"{"vars":"xy","terms":[{"mono":[0,0],"num":"x","den":"1"},{"mono":[1,0],"num":"x","den":"1"}]}"#);
    }
}
