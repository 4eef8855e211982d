//! Operator-level checks: P1, P2, P3 on coefficient tables, the syzygies,
//! the specialized combination, and the explicit solution families.

use rand::Rng;
use rug::Rational;
use serde::Serialize;

use super::{sample_rational, IdError};
use crate::kdf::{CoeffTable, KdFSpec};
use crate::exactnum::ParamValue;
use crate::thetaops::solutions::{check_f2111_companions, check_square_solutions, set_of_twelve, SolutionCheck};
use crate::thetaops::{build_p, combination_residual, syzygy, verify_combination, PParams, RatFunc, Var};

pub const OPERATOR_CHECKS: [&str; 6] = ["annihilate", "syzygies", "combination", "companions", "squares", "twelve"];

#[derive(Clone, Debug, Serialize)]
pub struct OperatorReport {
    pub check: String,
    pub label: String,
    pub params: Vec<String>,
    /// Residual coefficients examined (0 for symbolic checks).
    pub checked: usize,
    pub nonzero: usize,
    pub pass: bool,
}

impl OperatorReport {
    fn symbolic(check: &str, label: &str, pass: bool) -> Self {
        OperatorReport { check: check.into(), label: label.into(), params: vec!["symbolic".into()], checked: 0, nonzero: usize::from(!pass), pass }
    }

    fn from_solution(check: &str, params: &[Rational], s: SolutionCheck) -> Self {
        OperatorReport {
            check: check.into(),
            label: s.label.clone(),
            params: params.iter().map(|q| q.to_string()).collect(),
            checked: s.checked,
            nonzero: s.nonzero,
            pass: s.passed(),
        }
    }
}

fn generic<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let (lo, hi) = (Rational::from(-2), Rational::from(2));
    (0..n)
        .map(|_| loop {
            let r = sample_rational(rng, &lo, &hi, 12);
            if !r.is_integer() {
                break r;
            }
        })
        .collect()
}

fn retry<R: Rng, T>(rng: &mut R, n: usize, mut f: impl FnMut(&[Rational]) -> Result<T, IdError>) -> Result<(Vec<Rational>, T), IdError> {
    let mut last = None;
    for _ in 0..50 {
        let p = generic(rng, n);
        match f(&p) {
            Ok(v) => return Ok((p, v)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn seven(p: &[Rational]) -> [Rational; 7] {
    std::array::from_fn(|k| p[k].clone())
}

/// P1, P2, P3 applied to the F2111 table up to total degree `total`.
fn annihilate(p: &[Rational; 7], total: usize) -> Result<Vec<SolutionCheck>, IdError> {
    let pp = PParams::from_rationals(p);
    let spec = KdFSpec::f2111(
        ParamValue::Exact(p[0].clone()),
        ParamValue::Exact(p[1].clone()),
        ParamValue::Exact(p[2].clone()),
        ParamValue::Exact(p[3].clone()),
        ParamValue::Exact(p[4].clone()),
        ParamValue::Exact(p[5].clone()),
        ParamValue::Exact(p[6].clone()),
    );
    let table: CoeffTable<Rational> = CoeffTable::build(&spec, total, total, Some(total), 0)?;
    let mut out = Vec::new();
    for k in 1..=3 {
        let res = build_p(k, &pp)?.clear_denominators().apply_to_table(&table)?;
        out.push(SolutionCheck { label: format!("P{k}"), checked: res.len(), nonzero: res.values().filter(|v| **v != 0).count() });
    }
    Ok(out)
}

/// Runs the named checks with `rounds` random parameter sets each; `total` is
/// the degree bound of the coefficient checks.
pub fn run_operator_checks<R: Rng>(rng: &mut R, checks: &[&str], rounds: usize, total: usize) -> Result<Vec<OperatorReport>, IdError> {
    let mut out = Vec::new();
    for &check in checks {
        match check {
            "annihilate" => {
                for _ in 0..rounds {
                    let (p, res) = retry(rng, 7, |p| annihilate(&seven(p), total))?;
                    out.extend(res.into_iter().map(|s| OperatorReport::from_solution(check, &p, s)));
                }
            }
            "syzygies" => {
                let p = PParams::symbolic();
                for k in 1..=2 {
                    out.push(OperatorReport::symbolic(check, &format!("syzygy {k}"), syzygy(k, &p, [1, 1, 1])?.is_zero()));
                    // a wrong sign must leave a nonzero operator
                    out.push(OperatorReport::symbolic(check, &format!("syzygy {k}, sign flipped (control)"), !syzygy(k, &p, [1, -1, 1])?.is_zero()));
                }
            }
            "combination" => {
                let v = RatFunc::var;
                let (a, b, c) = (v(Var::A), v(Var::B), v(Var::C));
                out.push(OperatorReport::symbolic(check, "symmetric square = P1 - z^2/(z-1)^2 P2 - 1/(z-1)^2 P3", verify_combination(&a, &b, &c)));
                let z = v(Var::Z);
                let d = (&z - &RatFunc::one()).pow(2);
                let wrong = [RatFunc::one(), (&z * &z).div(&d), -&d.recip()];
                let ctl = combination_residual(&a, &b, &c, Some(wrong))?;
                out.push(OperatorReport::symbolic(check, "sign of the P2 weight flipped (control)", !ctl.is_zero()));
            }
            "companions" => {
                for _ in 0..rounds {
                    let (p, res) = retry(rng, 7, |p| Ok(check_f2111_companions(&seven(p), total)?))?;
                    out.extend(res.into_iter().map(|s| OperatorReport::from_solution(check, &p, s)));
                }
            }
            "squares" => {
                for _ in 0..rounds {
                    let (p, res) = retry(rng, 3, |p| Ok(check_square_solutions(&p[0], &p[1], &p[2], total)?))?;
                    out.extend(res.into_iter().map(|s| OperatorReport::from_solution(check, &p, s)));
                }
            }
            "twelve" => {
                for _ in 0..rounds {
                    let (p, res) = retry(rng, 3, |p| Ok(set_of_twelve(&p[0], &p[1], &p[2], total)?))?;
                    out.extend(res.into_iter().map(|s| OperatorReport::from_solution(check, &p, s)));
                }
            }
            other => return Err(IdError::BadParams(format!("unknown operator check '{other}'; expected one of {}", OPERATOR_CHECKS.join(", ")))),
        }
    }
    Ok(out)
}
