//! Coefficient-level checks that explicit series solutions are annihilated
//! by transformed operators.

use rug::Rational;
use serde::Serialize;

use super::{build_p, build_q, build_symsq, PParams, QParams, RatFunc, ThetaError, ThetaOperator, Var};
use crate::exactnum::ParamValue;
use crate::hyperseries::PFQSpec;
use crate::kdf::{CoeffTable, KdFSpec};

/// Outcome of one annihilation check.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionCheck {
    pub label: String,
    /// Number of residual coefficients examined.
    pub checked: usize,
    /// How many of them were nonzero.
    pub nonzero: usize,
}

impl SolutionCheck {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.nonzero == 0
    }
}

/// A bivariate solution `x^α y^β K(x, y)` or, when `inverted`, `x^α y^β K(1/x, 1/y)`.
#[derive(Clone, Debug)]
pub struct Companion {
    pub label: String,
    pub alpha: Rational,
    pub beta: Rational,
    pub inverted: bool,
    pub series: KdFSpec,
}

fn ex(q: &Rational) -> ParamValue {
    ParamValue::Exact(q.clone())
}

fn k(q: &Rational) -> RatFunc {
    RatFunc::constant(q.clone())
}

/// The operator acting on the series factor of `c`.
pub fn transport(op: &ThetaOperator, c: &Companion) -> ThetaOperator {
    let t = op.shift_conjugate(&k(&c.alpha), &k(&c.beta));
    if c.inverted {
        t.invert().clear_denominators()
    } else {
        t.clear_denominators()
    }
}

/// Applies every operator to the coefficient table of `c` up to total degree `total`.
pub fn check_companion(ops: &[ThetaOperator], c: &Companion, total: usize) -> Result<SolutionCheck, ThetaError> {
    let table: CoeffTable<Rational> = CoeffTable::build(&c.series, total, total, Some(total), 0)?;
    let mut checked = 0;
    let mut nonzero = 0;
    for op in ops {
        for (_, v) in transport(op, c).apply_to_table(&table)? {
            checked += 1;
            if v != 0 {
                nonzero += 1;
            }
        }
    }
    Ok(SolutionCheck { label: c.label.clone(), checked, nonzero })
}

/// The F2111 series itself and its four companions, for parameters `a, b, p1, p2, c, q1, q2`.
pub fn f2111_companions(p: &[Rational; 7]) -> Vec<Companion> {
    let [a, b, p1, p2, c, q1, q2] = p;
    let one = Rational::from(1);
    let s1 = Rational::from(&one - q1);
    let s2 = Rational::from(&one - q2);
    let f = |v: [Rational; 7]| KdFSpec::f2111(ex(&v[0]), ex(&v[1]), ex(&v[2]), ex(&v[3]), ex(&v[4]), ex(&v[5]), ex(&v[6]));
    let zero = Rational::new();
    let pp = Rational::from(p1 + p2) + &one;
    vec![
        Companion { label: "series".into(), alpha: zero.clone(), beta: zero.clone(), inverted: false, series: f(p.clone()) },
        Companion {
            label: "x^(1-q1)".into(),
            alpha: s1.clone(),
            beta: zero.clone(),
            inverted: false,
            series: f([
                Rational::from(a + &s1),
                Rational::from(b + &s1),
                Rational::from(p1 + &s1),
                p2.clone(),
                Rational::from(c + &s1),
                Rational::from(&s1 + &one),
                q2.clone(),
            ]),
        },
        Companion {
            label: "y^(1-q2)".into(),
            alpha: zero.clone(),
            beta: s2.clone(),
            inverted: false,
            series: f([
                Rational::from(a + &s2),
                Rational::from(b + &s2),
                p1.clone(),
                Rational::from(p2 + &s2),
                Rational::from(c + &s2),
                q1.clone(),
                Rational::from(&s2 + &one),
            ]),
        },
        Companion {
            label: "x^(1-q1) y^(1-q2)".into(),
            alpha: s1.clone(),
            beta: s2.clone(),
            inverted: false,
            series: f([
                Rational::from(a + &s1) + &s2,
                Rational::from(b + &s1) + &s2,
                Rational::from(p1 + &s1),
                Rational::from(p2 + &s2),
                Rational::from(c + &s1) + &s2,
                Rational::from(&s1 + &one),
                Rational::from(&s2 + &one),
            ]),
        },
        Companion {
            label: "x^(-p1) y^(-p2) F1220(1/x, 1/y)".into(),
            alpha: Rational::from(-p1),
            beta: Rational::from(-p2),
            inverted: true,
            series: KdFSpec::f1220(
                ex(&Rational::from(&pp - c)),
                ex(&Rational::from(p1 + &s1)),
                ex(&Rational::from(p2 + &s2)),
                ex(p1),
                ex(p2),
                ex(&Rational::from(&pp - a)),
                ex(&Rational::from(&pp - b)),
            ),
        },
    ]
}

/// Checks the F2111 series and its companions against P1, P2.
pub fn check_f2111_companions(p: &[Rational; 7], total: usize) -> Result<Vec<SolutionCheck>, ThetaError> {
    let pp = PParams::from_rationals(p);
    let ops = [build_p(1, &pp)?, build_p(2, &pp)?];
    f2111_companions(p).iter().map(|c| check_companion(&ops, c, total)).collect()
}

/// The F2111 solution `x^-p1 y^-p2 F2111(1+p1+p2-b; 1+p1+p2-c; p1, p2; 1+p1+p2-a;
/// 1+p1-q1, 1+p2-q2 | 1/x, 1/y)` of the F1220 system with parameters `a, p1, p2, q1, q2, b, c`.
pub fn f1220_companion(q: &[Rational; 7], label: &str) -> Companion {
    let [a, p1, p2, q1, q2, b, c] = q;
    let pp = Rational::from(p1 + p2) + 1u32;
    let one = Rational::from(1);
    Companion {
        label: label.to_string(),
        alpha: Rational::from(-p1),
        beta: Rational::from(-p2),
        inverted: true,
        series: KdFSpec::f2111(
            ex(&Rational::from(&pp - b)),
            ex(&Rational::from(&pp - c)),
            ex(p1),
            ex(p2),
            ex(&Rational::from(&pp - a)),
            ex(&(Rational::from(p1 - q1) + &one)),
            ex(&(Rational::from(p2 - q2) + &one)),
        ),
    }
}

/// The four F2111 companions of an F1220 system under `p1 <-> q1`, `p2 <-> q2`.
pub fn f1220_companions(q: &[Rational; 7]) -> Vec<Companion> {
    let mut out = Vec::with_capacity(4);
    for (sw1, sw2) in [(false, false), (true, false), (false, true), (true, true)] {
        let mut v = q.clone();
        if sw1 {
            v.swap(1, 3);
        }
        if sw2 {
            v.swap(2, 4);
        }
        let label = format!("{}{}", if sw1 { "q1" } else { "p1" }, if sw2 { ",q2" } else { ",p2" });
        out.push(f1220_companion(&v, &label));
    }
    out
}

/// F1220 parameters (a, p1, p2, q1, q2, b, c) of the three transformed solutions
/// of the symmetric square for ₂F₁(a, b; c)².
pub fn square_f1220_params(a: &Rational, b: &Rational, c: &Rational) -> [(String, [Rational; 7]); 3] {
    let h = Rational::from((1, 2));
    let one = Rational::from(1);
    let amb = Rational::from(a - b);
    let abc = Rational::from(a + b) - c;
    [
        (
            "z^(1-c)".into(),
            [
                h.clone(),
                Rational::from(&amb + &h),
                Rational::from(&abc + &h),
                Rational::from(&h - &amb),
                Rational::from(&h - &abc),
                c.clone(),
                Rational::from(2) - c,
            ],
        ),
        (
            "1-z".into(),
            [
                h.clone(),
                Rational::from(&amb + &h),
                Rational::from(c - &h),
                Rational::from(&h - &amb),
                Rational::from(3u32) / 2u32 - c.clone(),
                Rational::from(&abc + &one),
                Rational::from(&one - &abc),
            ],
        ),
        (
            "1/z".into(),
            [
                h.clone(),
                Rational::from(c - &h),
                Rational::from(&abc + &h),
                Rational::from(3u32) / 2u32 - c.clone(),
                Rational::from(&h - &abc),
                Rational::from(&amb + &one),
                Rational::from(&one - &amb),
            ],
        ),
    ]
}

/// The twelve F2111 solutions obtained from the three transformed square solutions.
pub fn set_of_twelve(a: &Rational, b: &Rational, c: &Rational, total: usize) -> Result<Vec<SolutionCheck>, ThetaError> {
    let mut out = Vec::with_capacity(12);
    for (name, q) in square_f1220_params(a, b, c) {
        let qp = QParams::from_rationals(&q);
        let ops = [build_q(1, &qp)?, build_q(2, &qp)?];
        for comp in f1220_companions(&q) {
            let mut r = check_companion(&ops, &comp, total)?;
            r.label = format!("{name} [{}]", r.label);
            out.push(r);
        }
    }
    Ok(out)
}

/// Cauchy square of a coefficient list.
pub fn cauchy_square(c: &[Rational]) -> Vec<Rational> {
    (0..c.len())
        .map(|n| (0..=n).fold(Rational::new(), |acc, i| acc + Rational::from(&c[i] * &c[n - i])))
        .collect()
}

fn f21_square(a: &Rational, b: &Rational, c: &Rational, n: usize) -> Result<Vec<Rational>, ThetaError> {
    let s = PFQSpec::f21(ex(a), ex(b), ex(c));
    Ok(cauchy_square(&s.coefficients(n)?))
}

fn univariate_check(label: &str, op: &ThetaOperator, coeffs: &[Rational]) -> Result<SolutionCheck, ThetaError> {
    let res = op.apply_to_series(coeffs)?;
    Ok(SolutionCheck { label: label.to_string(), checked: res.len(), nonzero: res.iter().filter(|v| **v != 0).count() })
}

/// The symmetric square annihilates ₂F₁(a, b; c)² and the two squares in
/// inverted variables, `z^-2a ₂F₁(a, 1+a-c; 1+a-b; 1/z)²` and
/// `(1-z)^-2a ₂F₁(a, c-b; 1+a-b; 1/(1-z))²`; coefficients up to `degree`.
pub fn check_square_solutions(a: &Rational, b: &Rational, c: &Rational, degree: usize) -> Result<Vec<SolutionCheck>, ThetaError> {
    let op = build_symsq(&k(a), &k(b), &k(c));
    let n = degree + 1;
    let one = Rational::from(1);
    let mut out = vec![univariate_check("2F1(a,b;c)^2", &op.clear_denominators(), &f21_square(a, b, c, n)?)?];

    let lower = Rational::from(&one + a) - b;
    let two_a = Rational::from(a * 2u32);
    let at_inf = op.shift_conjugate(&k(&Rational::from(-&two_a)), &RatFunc::zero()).invert().clear_denominators();
    let sq = f21_square(a, &(Rational::from(&one + a) - c), &lower, n)?;
    out.push(univariate_check("z^(-2a) 2F1(a,1+a-c;1+a-b;1/z)^2", &at_inf, &sq)?);

    // g = (1-z)^-2a has θg/g = 2a z/(1-z); then z = (u-1)/u
    let z = RatFunc::var(Var::Z);
    let r = &k(&two_a) * &z.div(&(&RatFunc::one() - &z));
    let phi = (&z - &RatFunc::one()).div(&z);
    let at_one = op.gauge(&r).change_variable(&phi).clear_denominators();
    let sq = f21_square(a, &Rational::from(c - b), &lower, n)?;
    out.push(univariate_check("(1-z)^(-2a) 2F1(a,c-b;1+a-b;1/(1-z))^2", &at_one, &sq)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, d: i64) -> Rational {
        Rational::from((p, d))
    }

    fn params() -> [Rational; 7] {
        [r(1, 3), r(-2, 7), r(3, 5), r(1, 9), r(5, 11), r(2, 13), r(7, 17)]
    }

    #[test]
    fn p_operators_kill_the_series() {
        let p = params();
        let pp = PParams::from_rationals(&p);
        let ops: Vec<_> = (1..=3).map(|i| build_p(i, &pp).unwrap()).collect();
        let c = &f2111_companions(&p)[0];
        assert!(check_companion(&ops, c, 12).unwrap().passed());
    }

    #[test]
    fn perturbed_parameter_is_detected() {
        let p = params();
        let mut bad = p.clone();
        bad[2] += r(1, 100);
        let pp = PParams::from_rationals(&bad);
        let c = &f2111_companions(&p)[0];
        assert!(!check_companion(&[build_p(1, &pp).unwrap()], c, 8).unwrap().passed());
    }

    #[test]
    fn companions() {
        for chk in check_f2111_companions(&params(), 10).unwrap() {
            assert!(chk.passed(), "{chk:?}");
        }
    }

    #[test]
    fn twelve() {
        let v = set_of_twelve(&r(1, 5), &r(1, 7), &r(1, 3), 8).unwrap();
        assert_eq!(v.len(), 12);
        for chk in v {
            assert!(chk.passed(), "{chk:?}");
        }
    }

    #[test]
    fn swapped_roles_fail() {
        let q = square_f1220_params(&r(1, 5), &r(1, 7), &r(1, 3))[0].1.clone();
        let qp = QParams::from_rationals(&q);
        let ops = [build_q(1, &qp).unwrap(), build_q(2, &qp).unwrap()];
        // 1+p1+p2-a, 1+p1+p2-b on top, 1+p1+p2-c below
        let mut c = f1220_companion(&q, "wrong");
        let [a, _, _, _, _, b, cc] = &q;
        let pp = Rational::from(&q[1] + &q[2]) + 1u32;
        c.series = KdFSpec::f2111(
            ex(&Rational::from(&pp - a)),
            ex(&Rational::from(&pp - b)),
            ex(&q[1]),
            ex(&q[2]),
            ex(&Rational::from(&pp - cc)),
            ex(&(Rational::from(&q[1] - &q[3]) + 1u32)),
            ex(&(Rational::from(&q[2] - &q[4]) + 1u32)),
        );
        assert!(!check_companion(&ops, &c, 6).unwrap().passed());
    }

    #[test]
    fn squares() {
        for chk in check_square_solutions(&r(1, 5), &r(2, 7), &r(3, 11), 12).unwrap() {
            assert!(chk.passed(), "{chk:?}");
        }
    }
}
