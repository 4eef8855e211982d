use clausen::exactnum::{gamma, pochhammer, pochhammer_identity_check, APComplex, ParamValue};
use clausen::hyperseries::{eval_pfq, euler_transform, pfaff_transform, PFQSpec};
use clausen::kdf::{coeff, eval, eval_jet, CoeffTable, KdFSpec, Shape};
use clausen::thetaops::solutions::cauchy_square;
use clausen::thetaops::{build_hpgde, RatFunc};
use proptest::prelude::*;
use rug::{Integer, Rational};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn rat(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (lo..=hi, 1i64..=12).prop_map(|(n, d)| Rational::from((n, d)))
}

/// Rationals that are never integers, so lower parameters stay admissible.
fn frac(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (lo..=hi, 2i64..=12).prop_filter_map("integer", |(n, d)| {
        let q = Rational::from((n, d));
        (!q.is_integer()).then_some(q)
    })
}

fn ex(q: &Rational) -> ParamValue {
    ParamValue::Exact(q.clone())
}

fn exact(v: ParamValue) -> Rational {
    v.as_exact().expect("exact").clone()
}

fn binom(n: u32, k: u32) -> Rational {
    Rational::from(Integer::from(Integer::binomial_u(n, k)))
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn pochhammer_splits(x in rat(-30, 30), j in 0usize..=20, k in 0usize..=20) {
        let whole = pochhammer(&ex(&x), j + k);
        let parts = pochhammer(&ex(&x), j).mul(&pochhammer(&ex(&x).add_i(j as i64), k));
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn gamma_recurrence(n in 1i64..=1000, d in 1i64..=100) {
        let z = APComplex::from_rational(&Rational::from((n, d)), 50);
        prop_assume!(*z.re() <= 10);
        let lhs = gamma(&(&z + &APComplex::one(50))).unwrap();
        let rhs = &z * &gamma(&z).unwrap();
        prop_assert!(APComplex::rel_diff(&lhs, &rhs).to_f64() < 1e-46);
    }

    #[test]
    fn pochhammer_identity_holds(m in 0usize..=6, a in rat(-24, 24)) {
        prop_assert!(pochhammer_identity_check(m, &ex(&a)));
    }

    #[test]
    fn term_ratios_are_exact(a in rat(-20, 20), b in rat(-20, 20), c in frac(-20, 20), e in frac(-20, 20)) {
        let s = PFQSpec::new(vec![ex(&a), ex(&b), ex(&e)], vec![ex(&c), ex(&Rational::from(&e + 1u32))]);
        let t = s.coefficients(12).unwrap();
        for k in 0..11 {
            let r = Rational::from(&a + k as u32) * Rational::from(&b + k as u32) * Rational::from(&e + k as u32)
                / (Rational::from(&c + k as u32) * Rational::from(&e + (k + 1) as u32) * Rational::from(k as u32 + 1));
            prop_assert_eq!(&t[k + 1], &(Rational::from(&t[k] * &r)));
        }
    }

    #[test]
    fn terminating_2f1_is_binomial(n in 0u32..=8, b in frac(-9, 9)) {
        // 2F1(-N, b; b; z) = (1-z)^N
        let s = PFQSpec::f21(ParamValue::int(-(n as i64)), ex(&b), ex(&b));
        let c = s.coefficients(n as usize + 3).unwrap();
        for k in 0..c.len() as u32 {
            let want = if k <= n { binom(n, k) * if k % 2 == 0 { 1 } else { -1 } } else { Rational::new() };
            prop_assert_eq!(&c[k as usize], &want);
        }
    }

    #[test]
    fn pfaff_and_euler_agree(a in frac(-8, 8), b in frac(-8, 8), c in frac(-8, 8), z in (-49i64..=49).prop_map(|n| Rational::from((n, 100)))) {
        let s = PFQSpec::f21(ex(&a), ex(&b), ex(&c));
        let zz = ex(&z);
        let direct = eval_pfq(&s, &zz, 40, 100_000).unwrap().value.to_complex_at(40);
        for t in [pfaff_transform(&s, &zz).unwrap(), euler_transform(&s, &zz).unwrap()] {
            let v = t.evaluate(&zz, 40, 100_000).unwrap().to_complex_at(40);
            prop_assert!(APComplex::rel_diff(&direct, &v).to_f64() < 1e-35);
        }
    }

    #[test]
    fn kdf_ratio_recurrences(p in prop::array::uniform7(frac(-6, 6))) {
        let [a, b, p1, p2, c, q1, q2] = p.clone();
        let s = KdFSpec::f2111(ex(&a), ex(&b), ex(&p1), ex(&p2), ex(&c), ex(&q1), ex(&q2));
        let t: CoeffTable<Rational> = CoeffTable::build(&s, 12, 12, Some(12), 0).unwrap();
        let q = |r: &Rational, k: usize| Rational::from(r + k as u32);
        for i in 0..12usize {
            for j in 0..12 - i {
                let cij = t.get(i, j).unwrap();
                let n = i + j;
                let up = q(&a, n) * q(&b, n) / q(&c, n);
                if i + j + 1 <= 12 {
                    let rx = Rational::from(&up * q(&p1, i)) / (q(&q1, i) * Rational::from(i as u32 + 1));
                    prop_assert_eq!(t.get(i + 1, j).unwrap(), &Rational::from(cij * &rx));
                    let ry = Rational::from(&up * q(&p2, j)) / (q(&q2, j) * Rational::from(j as u32 + 1));
                    prop_assert_eq!(t.get(i, j + 1).unwrap(), &Rational::from(cij * &ry));
                    // cross relation
                    let l = Rational::from(t.get(i + 1, j).unwrap() * q(&p2, j)) * q(&q1, i) * Rational::from(i as u32 + 1);
                    let r = Rational::from(t.get(i, j + 1).unwrap() * q(&p1, i)) * q(&q2, j) * Rational::from(j as u32 + 1);
                    prop_assert_eq!(l, r);
                }
                prop_assert_eq!(exact(coeff(&s, i, j).unwrap()), cij.clone());
            }
        }
    }

    #[test]
    fn a_equals_c_is_appell_f2(p in prop::array::uniform6(frac(-6, 6))) {
        let [a, b, p1, p2, q1, q2] = p.clone();
        let s = KdFSpec::f2111(ex(&a), ex(&b), ex(&p1), ex(&p2), ex(&a), ex(&q1), ex(&q2));
        let f2 = KdFSpec::new(Shape::AppellF2, vec![ex(&b), ex(&p1), ex(&p2), ex(&q1), ex(&q2)]).unwrap();
        for i in 0..7 {
            for j in 0..7 - i {
                prop_assert_eq!(coeff(&s, i, j).unwrap(), coeff(&f2, i, j).unwrap());
            }
        }
    }

    #[test]
    fn f0211_diagonal_is_square(a in frac(-6, 6), b in frac(-6, 6), c in frac(-6, 6)) {
        let s = KdFSpec::new(Shape::F0211, vec![ex(&a), ex(&a), ex(&b), ex(&b), ex(&c), ex(&c)]).unwrap();
        let t: CoeffTable<Rational> = CoeffTable::build(&s, 15, 15, Some(15), 0).unwrap();
        let sq = cauchy_square(&PFQSpec::f21(ex(&a), ex(&b), ex(&c)).coefficients(16).unwrap());
        for (n, want) in sq.iter().enumerate().take(16) {
            let diag = (0..=n).fold(Rational::new(), |acc, i| acc + t.get(i, n - i).unwrap());
            prop_assert_eq!(&diag, want);
        }
    }

    #[test]
    fn hpgde_annihilates_2f1(a in rat(-9, 9), b in rat(-9, 9), c in frac(-9, 9)) {
        let k = |q: &Rational| RatFunc::constant(q.clone());
        let op = build_hpgde(&k(&a), &k(&b), &k(&c));
        let coeffs = PFQSpec::f21(ex(&a), ex(&b), ex(&c)).coefficients(14).unwrap();
        let res = op.apply_to_series(&coeffs).unwrap();
        prop_assert!(res.iter().all(|r| *r == 0));
    }
}

proptest! {
    #![proptest_config(config(5))]

    #[test]
    fn jet_first_partials_match_finite_differences(p in prop::array::uniform7(frac(-3, 3)), x in 1i64..=20, y in 1i64..=20) {
        let [a, b, p1, p2, c, q1, q2] = p.clone();
        let s = KdFSpec::f2111(ex(&a), ex(&b), ex(&p1), ex(&p2), ex(&c), ex(&q1), ex(&q2));
        let (xq, yq) = (Rational::from((x, 100)), Rational::from((y, 100)));
        let prec = 45;
        let jet = eval_jet(&s, &ex(&xq), &ex(&yq), 1, prec, 100_000).unwrap();
        let h = Rational::from((1, 1_000_000_000_000_000i64));
        let f = |dx: &Rational, dy: &Rational| {
            eval(&s, &ex(&Rational::from(&xq + dx)), &ex(&Rational::from(&yq + dy)), prec, 100_000).unwrap().value.to_complex_at(prec)
        };
        let zero = Rational::new();
        let two_h = APComplex::from_rational(&Rational::from(&h * 2u32), prec);
        let fx = &(&f(&h, &zero) - &f(&Rational::from(-&h), &zero)) / &two_h;
        let fy = &(&f(&zero, &h) - &f(&zero, &Rational::from(-&h))) / &two_h;
        let f00 = f(&zero, &zero);
        prop_assert!(APComplex::rel_diff(jet.get(0, 0).unwrap(), &f00).to_f64() < 1e-40);
        prop_assert!(APComplex::rel_diff(jet.get(1, 0).unwrap(), &fx).to_f64() < 1e-22);
        prop_assert!(APComplex::rel_diff(jet.get(0, 1).unwrap(), &fy).to_f64() < 1e-22);
    }
}
