//! Mixed forms: partial-derivative monomials θx^i θy^j with coefficients in z,
//! under the curve x = z, y = 1 - z where Θz = θx + z/(z-1) θy.

use std::collections::BTreeMap;

use super::operator::{ThetaOperator, VarSet};
use super::poly::Var;
use super::ratfunc::RatFunc;
use super::ThetaError;

#[derive(Clone, Debug, Default)]
pub struct MixedForm {
    terms: BTreeMap<(u32, u32), RatFunc>,
}

fn w() -> RatFunc {
    let z = RatFunc::var(Var::Z);
    z.div(&(&z - &RatFunc::one()))
}

impl MixedForm {
    pub fn zero() -> Self {
        MixedForm::default()
    }

    pub fn constant(f: RatFunc) -> Self {
        let mut m = MixedForm::zero();
        m.add_term((0, 0), f);
        m
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

    pub fn add(&self, o: &MixedForm) -> MixedForm {
        let mut r = self.clone();
        for (m, f) in &o.terms {
            r.add_term(*m, f.clone());
        }
        r
    }

    pub fn sub(&self, o: &MixedForm) -> MixedForm {
        self.add(&o.scale_left(&RatFunc::int(-1)))
    }

    pub fn scale_left(&self, f: &RatFunc) -> MixedForm {
        let mut r = MixedForm::zero();
        for (m, g) in &self.terms {
            r.add_term(*m, f * g);
        }
        r
    }

    /// `Θz ∘ self`: z d/dz on coefficients, left multiplication on monomials.
    pub fn theta_z(&self) -> MixedForm {
        let w = w();
        let mut r = MixedForm::zero();
        for (&(i, j), g) in &self.terms {
            r.add_term((i, j), g.theta(Var::Z));
            r.add_term((i + 1, j), g.clone());
            r.add_term((i, j + 1), g * &w);
        }
        r
    }
}

/// Partial differential form of an operator in θz.
pub fn specialize_ode(op: &ThetaOperator) -> Result<MixedForm, ThetaError> {
    if op.vars() != VarSet::Z {
        return Err(ThetaError::VariableMismatch);
    }
    let mut powers = vec![MixedForm::constant(RatFunc::one())];
    let mut out = MixedForm::zero();
    for (&(k, _), f) in op.terms() {
        while powers.len() <= k as usize {
            let next = powers.last().expect("nonempty").theta_z();
            powers.push(next);
        }
        out = out.add(&powers[k as usize].scale_left(f));
    }
    Ok(out)
}

/// Specialized form of an operator in θx, θy: coefficients restricted to x = z, y = 1 - z.
pub fn specialize_pde(op: &ThetaOperator) -> Result<MixedForm, ThetaError> {
    if op.vars() != VarSet::XY {
        return Err(ThetaError::VariableMismatch);
    }
    let z = RatFunc::var(Var::Z);
    let one_minus = &RatFunc::one() - &z;
    let mut out = MixedForm::zero();
    for (&m, f) in op.terms() {
        let g = f.subst(Var::X, &z).subst(Var::Y, &one_minus);
        out.add_term(m, g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_z_is_the_curve_derivative() {
        let m = specialize_ode(&ThetaOperator::theta(VarSet::Z, 0)).unwrap();
        assert_eq!(m.coeff(1, 0), RatFunc::one());
        assert_eq!(m.coeff(0, 1), w());
        assert_eq!(m.terms().count(), 2);
    }

    #[test]
    fn square_correction() {
        let m = specialize_ode(&ThetaOperator::theta(VarSet::Z, 0).pow(2)).unwrap();
        let z = RatFunc::var(Var::Z);
        let w = w();
        assert_eq!(m.coeff(2, 0), RatFunc::one());
        assert_eq!(m.coeff(1, 1), w.scale(&rug::Rational::from(2)));
        assert_eq!(m.coeff(0, 2), &w * &w);
        // -z/(z-1)^2 θy
        assert_eq!(m.coeff(0, 1), -&z.div(&(&z - &RatFunc::one()).pow(2)));
    }

    #[test]
    fn constants_and_x_plus_y() {
        let c = ThetaOperator::scalar(VarSet::Z, RatFunc::ratio(3, 7));
        assert_eq!(specialize_ode(&c).unwrap().coeff(0, 0), RatFunc::ratio(3, 7));
        let s = &RatFunc::var(Var::X) + &RatFunc::var(Var::Y);
        let op = ThetaOperator::theta(VarSet::XY, 0).scale_left(&s);
        assert_eq!(specialize_pde(&op).unwrap().coeff(1, 0), RatFunc::one());
        let xt = ThetaOperator::theta(VarSet::XY, 0).scale_left(&RatFunc::var(Var::X));
        assert_eq!(specialize_pde(&xt).unwrap().coeff(1, 0), RatFunc::var(Var::Z));
    }
}
