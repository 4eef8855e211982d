use rug::Rational;
use serde::Serialize;

use super::{eval_pfq, PFQSpec, SeriesError};
use crate::exactnum::ParamValue;

/// `(1-z)^exponent · pFq(spec; argument)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transformed {
    pub prefactor_exponent: ParamValue,
    pub spec: PFQSpec,
    pub argument: ParamValue,
}

impl Transformed {
    pub fn describe(&self) -> String {
        format!("(1-z)^({}) * pFq(..; {})", self.prefactor_exponent, self.argument)
    }

    /// Evaluates at the original argument `z`.
    pub fn evaluate(&self, z: &ParamValue, precision: u32, max_terms: usize) -> Result<ParamValue, SeriesError> {
        let inner = eval_pfq(&self.spec, &self.argument, precision, max_terms)?.value;
        let base = ParamValue::int(1).sub(z);
        let pre = power(&base, &self.prefactor_exponent, precision + 10);
        Ok(pre.mul(&inner))
    }
}

/// `base^e`, exact when both are exact and `e` is an integer.
pub fn power(base: &ParamValue, e: &ParamValue, digits: u32) -> ParamValue {
    if let (ParamValue::Exact(b), ParamValue::Exact(q)) = (base, e) {
        if q.denom() == &1u32 && (*b != 0 || *q >= 0) {
            if let Some(n) = q.numer().to_i32() {
                let mut r = Rational::from(1);
                for _ in 0..n.unsigned_abs() {
                    r *= b;
                }
                if n < 0 {
                    r = r.recip();
                }
                return ParamValue::Exact(r);
            }
        }
    }
    ParamValue::Approx(base.to_complex_at(digits).pow(&e.to_complex_at(digits)))
}

fn as_f21(spec: &PFQSpec) -> Result<(&ParamValue, &ParamValue, &ParamValue), SeriesError> {
    match (spec.upper.as_slice(), spec.lower.as_slice()) {
        ([a, b], [c]) => Ok((a, b, c)),
        _ => Err(SeriesError::Shape { upper: spec.upper.len(), lower: spec.lower.len() }),
    }
}

/// 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)).
pub fn pfaff_transform(spec: &PFQSpec, z: &ParamValue) -> Result<Transformed, SeriesError> {
    let (a, b, c) = as_f21(spec)?;
    let zm1 = z.sub(&ParamValue::int(1));
    let argument = z
        .div(&zm1)
        .map_err(|_| SeriesError::NoConvergence("z = 1 has no Pfaff image".into()))?;
    Ok(Transformed {
        prefactor_exponent: a.neg(),
        spec: PFQSpec::f21(a.clone(), c.sub(b), c.clone()),
        argument,
    })
}

/// 2F1(a,b;c;z) = (1-z)^{c-a-b} 2F1(c-a, c-b; c; z).
pub fn euler_transform(spec: &PFQSpec, z: &ParamValue) -> Result<Transformed, SeriesError> {
    let (a, b, c) = as_f21(spec)?;
    Ok(Transformed {
        prefactor_exponent: c.sub(a).sub(b),
        spec: PFQSpec::f21(c.sub(a), c.sub(b), c.clone()),
        argument: z.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{ten_pow_neg, APComplex};

    fn pv(p: i64, q: i64) -> ParamValue {
        ParamValue::ratio(p, q)
    }

    #[test]
    fn pfaff_log_two() {
        let s = PFQSpec::f21(pv(1, 1), pv(1, 1), pv(2, 1));
        let t = pfaff_transform(&s, &pv(1, 2)).unwrap();
        assert_eq!(t.argument, pv(-1, 1));
        assert_eq!(power(&pv(1, 2), &t.prefactor_exponent, 30), pv(2, 1));
        let direct = eval_pfq(&s, &pv(1, 2), 40, 10000).unwrap().value;
        let via = t.evaluate(&pv(1, 2), 40, 10000).unwrap();
        let rd = APComplex::rel_diff(&direct.to_complex(40), &via.to_complex(40));
        assert!(rd < ten_pow_neg(38, 200));
    }

    #[test]
    fn pfaff_is_involution() {
        let s = PFQSpec::f21(pv(1, 3), pv(2, 7), pv(5, 4));
        let z = pv(1, 5);
        let t1 = pfaff_transform(&s, &z).unwrap();
        let t2 = pfaff_transform(&t1.spec, &t1.argument).unwrap();
        assert_eq!(t2.argument, z);
        assert_eq!(t2.spec, s);
    }

    #[test]
    fn euler_trivial_exponent() {
        let s = PFQSpec::f21(pv(1, 1), pv(1, 1), pv(2, 1));
        let t = euler_transform(&s, &pv(1, 2)).unwrap();
        assert_eq!(t.prefactor_exponent, pv(0, 1));
        assert_eq!(t.spec, s);
    }

    #[test]
    fn euler_quarter() {
        let s = PFQSpec::f21(pv(1, 4), pv(1, 4), pv(1, 1));
        let z = pv(3, 10);
        let t = euler_transform(&s, &z).unwrap();
        let direct = eval_pfq(&s, &z, 45, 10000).unwrap().value;
        let via = t.evaluate(&z, 45, 10000).unwrap();
        let rd = APComplex::rel_diff(&direct.to_complex(45), &via.to_complex(45));
        assert!(rd < ten_pow_neg(40, 200));
    }

    #[test]
    fn shape_error() {
        let s = PFQSpec::new(vec![pv(1, 1)], vec![]);
        assert!(matches!(pfaff_transform(&s, &pv(1, 2)), Err(SeriesError::Shape { .. })));
    }
}
