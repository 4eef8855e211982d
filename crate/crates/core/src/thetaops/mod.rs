//! Euler-operator algebra over rational functions: normal forms, the
//! hypergeometric and symmetric-square operators, the partial differential
//! operators of the F2111 series, and their transformations.

mod mixed;
mod operator;
mod poly;
mod ratfunc;
pub mod solutions;

use rug::Rational;
use thiserror::Error;

pub use mixed::{specialize_ode, specialize_pde, MixedForm};
pub use operator::{ThetaOperator, VarSet};
pub use poly::{Poly, Var, NVARS};
pub use ratfunc::RatFunc;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("operators act on different variables")]
    VariableMismatch,
    #[error("coefficient table too small: need {needed}, got {got}")]
    BoundsTooSmall { needed: usize, got: usize },
    #[error("coefficient {0} is not a polynomial; clear denominators first")]
    NotPolynomial(String),
    #[error("coefficient {0} still has symbolic parameters")]
    NotInstantiated(String),
    #[error("P{0} is not defined")]
    BadIndex(u8),
    #[error(transparent)]
    Kdf(#[from] crate::kdf::KdfError),
    #[error(transparent)]
    Series(#[from] crate::hyperseries::SeriesError),
}

fn lin(vars: VarSet, wx: i64, wy: i64, s: &RatFunc) -> ThetaOperator {
    ThetaOperator::linear(vars, wx, wy, s.clone())
}

fn prod(ops: &[ThetaOperator]) -> ThetaOperator {
    ThetaOperator::compose_all(ops).expect("same variables")
}

fn q(p: i64, d: i64) -> RatFunc {
    RatFunc::ratio(p, d)
}

/// `z(θ+a)(θ+b) - θ(θ+c-1)`.
pub fn build_hpgde(a: &RatFunc, b: &RatFunc, c: &RatFunc) -> ThetaOperator {
    let v = VarSet::Z;
    let z = RatFunc::var(Var::Z);
    let left = prod(&[lin(v, 1, 0, a), lin(v, 1, 0, b)]).scale_left(&z);
    let right = prod(&[lin(v, 1, 0, &RatFunc::zero()), lin(v, 1, 0, &(c - &RatFunc::one()))]);
    left.sub(&right).expect("same variables")
}

/// The third-order operator annihilating products of two solutions of `build_hpgde(a, b, c)`.
pub fn build_symsq(a: &RatFunc, b: &RatFunc, c: &RatFunc) -> ThetaOperator {
    let v = VarSet::Z;
    let z = RatFunc::var(Var::Z);
    let one = RatFunc::one();
    let two = |r: &RatFunc| r.scale(&Rational::from(2));
    let ab = a + b;
    let left = prod(&[lin(v, 1, 0, &two(a)), lin(v, 1, 0, &two(b)), lin(v, 1, 0, &ab)]).scale_left(&z);
    let right = prod(&[
        lin(v, 1, 0, &RatFunc::zero()),
        lin(v, 1, 0, &(c - &one)),
        lin(v, 1, 0, &(&two(c) - &two(&one))),
    ]);
    // (2a+2b-2c+1) z/(z-1) ((a+b-c+1) θ + 2ab)
    let k = &(&two(&ab) - &two(c)) + &one;
    let w = z.div(&(&z - &one));
    let mut tail = ThetaOperator::theta(v, 0).scale_left(&(&(&ab - c) + &one));
    tail = tail.add(&ThetaOperator::scalar(v, two(&(a * b)))).expect("same variables");
    let tail = tail.scale_left(&(&k * &w));
    left.sub(&right).and_then(|o| o.add(&tail)).expect("same variables")
}

/// Parameters `(a; b; p1, p2; c; q1, q2)` of the F2111 series as rational functions.
#[derive(Clone, Debug)]
pub struct PParams {
    pub a: RatFunc,
    pub b: RatFunc,
    pub p1: RatFunc,
    pub p2: RatFunc,
    pub c: RatFunc,
    pub q1: RatFunc,
    pub q2: RatFunc,
}

impl PParams {
    pub fn symbolic() -> Self {
        let v = RatFunc::var;
        PParams { a: v(Var::A), b: v(Var::B), p1: v(Var::P1), p2: v(Var::P2), c: v(Var::C), q1: v(Var::Q1), q2: v(Var::Q2) }
    }

    /// In the order a, b, p1, p2, c, q1, q2.
    pub fn from_rationals(r: &[Rational; 7]) -> Self {
        let c = |k: usize| RatFunc::constant(r[k].clone());
        PParams { a: c(0), b: c(1), p1: c(2), p2: c(3), c: c(4), q1: c(5), q2: c(6) }
    }

    /// The specialization belonging to the square of ₂F₁(a, b; c): parameters
    /// 2a; 2b; c-1/2, a+b-c+1/2; a+b+1/2; 2c-1, 2a+2b-2c+1.
    pub fn square_of_2f1(a: &RatFunc, b: &RatFunc, c: &RatFunc) -> Self {
        let two = |r: &RatFunc| r.scale(&Rational::from(2));
        let ab = a + b;
        let half = q(1, 2);
        PParams {
            a: two(a),
            b: two(b),
            p1: c - &half,
            p2: &(&ab - c) + &half,
            c: &ab + &half,
            q1: &two(c) - &RatFunc::one(),
            q2: &(&two(&ab) - &two(c)) + &RatFunc::one(),
        }
    }
}

/// P1, P2, P3 for the F2111 series.
pub fn build_p(k: u8, p: &PParams) -> Result<ThetaOperator, ThetaError> {
    let v = VarSet::XY;
    let one = RatFunc::one();
    let x = RatFunc::var(Var::X);
    let y = RatFunc::var(Var::Y);
    let s = |r: &RatFunc| lin(v, 1, 1, r);
    let tx = |r: &RatFunc| lin(v, 1, 0, r);
    let ty = |r: &RatFunc| lin(v, 0, 1, r);
    let zero = RatFunc::zero();
    let c1 = &p.c - &one;
    Ok(match k {
        1 => prod(&[s(&p.a), s(&p.b), tx(&p.p1)])
            .scale_left(&x)
            .sub(&prod(&[tx(&zero), s(&c1), tx(&(&p.q1 - &one))]))?,
        2 => prod(&[s(&p.a), s(&p.b), ty(&p.p2)])
            .scale_left(&y)
            .sub(&prod(&[ty(&zero), s(&c1), ty(&(&p.q2 - &one))]))?,
        3 => prod(&[ty(&zero), ty(&(&p.q2 - &one)), tx(&p.p1)])
            .scale_left(&x)
            .sub(&prod(&[tx(&zero), tx(&(&p.q1 - &one)), ty(&p.p2)]).scale_left(&y))?,
        _ => return Err(ThetaError::BadIndex(k)),
    })
}

/// Parameters `(a; p1, p2; q1, q2; b; c)` of the F1220 series.
#[derive(Clone, Debug)]
pub struct QParams {
    pub a: RatFunc,
    pub p1: RatFunc,
    pub p2: RatFunc,
    pub q1: RatFunc,
    pub q2: RatFunc,
    pub b: RatFunc,
    pub c: RatFunc,
}

impl QParams {
    /// In the order a, p1, p2, q1, q2, b, c.
    pub fn from_rationals(r: &[Rational; 7]) -> Self {
        let c = |k: usize| RatFunc::constant(r[k].clone());
        QParams { a: c(0), p1: c(1), p2: c(2), q1: c(3), q2: c(4), b: c(5), c: c(6) }
    }
}

/// The two first-order-recurrence operators of the F1220 series.
pub fn build_q(k: u8, p: &QParams) -> Result<ThetaOperator, ThetaError> {
    let v = VarSet::XY;
    let one = RatFunc::one();
    let s = |r: &RatFunc| lin(v, 1, 1, r);
    let tx = |r: &RatFunc| lin(v, 1, 0, r);
    let ty = |r: &RatFunc| lin(v, 0, 1, r);
    let zero = RatFunc::zero();
    let (b1, c1) = (&p.b - &one, &p.c - &one);
    Ok(match k {
        1 => prod(&[s(&p.a), tx(&p.p1), tx(&p.q1)])
            .scale_left(&RatFunc::var(Var::X))
            .sub(&prod(&[tx(&zero), s(&b1), s(&c1)]))?,
        2 => prod(&[s(&p.a), ty(&p.p2), ty(&p.q2)])
            .scale_left(&RatFunc::var(Var::Y))
            .sub(&prod(&[ty(&zero), s(&b1), s(&c1)]))?,
        _ => return Err(ThetaError::BadIndex(k)),
    })
}

/// The two syzygy combinations of P1, P2, P3 with sign pattern `signs`
/// (the true syzygies use `[1, 1, 1]`).
pub fn syzygy(which: u8, p: &PParams, signs: [i64; 3]) -> Result<ThetaOperator, ThetaError> {
    let v = VarSet::XY;
    let one = RatFunc::one();
    let (p1, p2, p3) = (build_p(1, p)?, build_p(2, p)?, build_p(3, p)?);
    let zero = RatFunc::zero();
    let (m1, m2, m3) = match which {
        1 => (
            lin(v, 0, 1, &p.p2).scale_left(&-&RatFunc::var(Var::Y)),
            lin(v, 1, 0, &p.p1).scale_left(&RatFunc::var(Var::X)),
            lin(v, 1, 1, &(&p.c - &RatFunc::int(2))),
        ),
        2 => (
            prod(&[lin(v, 0, 1, &zero), lin(v, 0, 1, &(&p.q2 - &one))]),
            prod(&[lin(v, 1, 0, &zero), lin(v, 1, 0, &(&p.q1 - &one))]).scale_left(&RatFunc::int(-1)),
            // note the minus sign
            prod(&[lin(v, 1, 1, &(&p.a - &one)), lin(v, 1, 1, &(&p.b - &one))]).scale_left(&RatFunc::int(-1)),
        ),
        _ => return Err(ThetaError::BadIndex(which)),
    };
    let t1 = m1.compose(&p1)?.scale_left(&RatFunc::int(signs[0]));
    let t2 = m2.compose(&p2)?.scale_left(&RatFunc::int(signs[1]));
    let t3 = m3.compose(&p3)?.scale_left(&RatFunc::int(signs[2]));
    t1.add(&t2)?.add(&t3)
}

/// Both syzygies reduce to the zero operator.
pub fn check_syzygies(p: &PParams) -> bool {
    [1, 2].iter().all(|&k| syzygy(k, p, [1, 1, 1]).map(|o| o.is_zero()).unwrap_or(false))
}

/// `specialize_ode(symsq) - (S(P1) - z²/(z-1)² S(P2) - 1/(z-1)² S(P3))` for
/// the square-of-₂F₁ parameters; `weights` replaces the three multipliers.
pub fn combination_residual(a: &RatFunc, b: &RatFunc, c: &RatFunc, weights: Option<[RatFunc; 3]>) -> Result<MixedForm, ThetaError> {
    let z = RatFunc::var(Var::Z);
    let zm1 = &z - &RatFunc::one();
    let weights = weights.unwrap_or_else(|| {
        let d = zm1.pow(2);
        [RatFunc::one(), -&(&z * &z).div(&d), -&d.recip()]
    });
    let lhs = specialize_ode(&build_symsq(a, b, c))?;
    let p = PParams::square_of_2f1(a, b, c);
    let mut rhs = MixedForm::zero();
    for (k, w) in (1..=3).zip(weights.iter()) {
        rhs = rhs.add(&specialize_pde(&build_p(k, &p)?)?.scale_left(w));
    }
    Ok(lhs.sub(&rhs))
}

/// The symmetric-square operator coincides with the specialized combination of P1, P2, P3.
pub fn verify_combination(a: &RatFunc, b: &RatFunc, c: &RatFunc) -> bool {
    combination_residual(a, b, c, None).map(|m| m.is_zero()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperseries::PFQSpec;
    use crate::exactnum::ParamValue;

    fn r(p: i64, d: i64) -> Rational {
        Rational::from((p, d))
    }
    fn f21_coeffs(a: &Rational, b: &Rational, c: &Rational, n: usize) -> Vec<Rational> {
        let s = PFQSpec::f21(ParamValue::Exact(a.clone()), ParamValue::Exact(b.clone()), ParamValue::Exact(c.clone()));
        s.coefficients(n).unwrap()
    }

    #[test]
    fn hpgde_kills_2f1() {
        let (a, b, c) = (r(2, 7), r(-3, 5), r(4, 9));
        let k = |x: &Rational| RatFunc::constant(x.clone());
        let op = build_hpgde(&k(&a), &k(&b), &k(&c));
        let res = op.apply_to_series(&f21_coeffs(&a, &b, &c, 20)).unwrap();
        assert!(res.iter().all(|x| *x == 0));
        // second solution z^(1-c) 2F1(1+a-c, 1+b-c; 2-c)
        let one = Rational::from(1);
        let second = f21_coeffs(&(Rational::from(&one + &a) - &c), &(Rational::from(&one + &b) - &c), &(Rational::from(2) - &c), 20);
        let shifted = op.shift_conjugate(&k(&(Rational::from(1) - &c)), &RatFunc::zero());
        assert!(shifted.apply_to_series(&second).unwrap().iter().all(|x| *x == 0));
    }

    #[test]
    fn symbolic_syzygies() {
        assert!(check_syzygies(&PParams::symbolic()));
        assert!(!syzygy(1, &PParams::symbolic(), [1, -1, 1]).unwrap().is_zero());
    }

    #[test]
    fn symbolic_combination() {
        let v = RatFunc::var;
        assert!(verify_combination(&v(Var::A), &v(Var::B), &v(Var::C)));
    }

    #[test]
    fn flipped_combination_fails() {
        let v = RatFunc::var;
        let z = RatFunc::var(Var::Z);
        let d = (&z - &RatFunc::one()).pow(2);
        let w = [RatFunc::one(), -&(&z * &z).div(&d), d.recip()];
        assert!(!combination_residual(&v(Var::A), &v(Var::B), &v(Var::C), Some(w)).unwrap().is_zero());
    }
}
