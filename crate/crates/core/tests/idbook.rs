use clausen::exactnum::ParamValue;
use clausen::hyperseries::{eval_pfq, gauss_value_at_1, PFQSpec};
use clausen::idbook::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Rational;

fn pv(p: i64, q: i64) -> ParamValue {
    ParamValue::ratio(p, q)
}

fn inst(case: &IdentityCase, kv: &[(&str, ParamValue)]) -> Instance {
    let given: Instance = kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    case.instance_from(&given).unwrap()
}

fn simplified(case: &IdentityCase, i: &Instance) -> Vec<(String, String)> {
    case.build(i)
        .unwrap()
        .into_iter()
        .map(|p| (serde_json::to_string(&p.lhs.simplify()).unwrap(), serde_json::to_string(&p.rhs.simplify()).unwrap()))
        .collect()
}

#[test]
fn catalog_is_stable_and_large() {
    let a: Vec<&str> = catalog().iter().map(|c| c.id).collect();
    let b: Vec<&str> = catalog().iter().map(|c| c.id).collect();
    assert_eq!(a, b);
    assert!(a.len() >= 18);
    let mut sorted = a.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), a.len(), "duplicate ids");
    assert_eq!(catalog().iter().filter(|c| c.has_tag("theorem2")).count(), 3);
    for c in catalog().iter().filter(|c| c.has_tag("terminating")) {
        assert_eq!(c.mode, Mode::Exact, "{}", c.id);
    }
}

#[test]
fn every_default_instance_verifies() {
    let cfg = VerifyConfig::default();
    for c in catalog() {
        let r = verify(&c, &c.default_instance(), &c.default_points, &cfg).unwrap_or_else(|e| panic!("{}: {e}", c.id));
        assert!(r.pass, "{}: {}", c.id, serde_json::to_string(&r).unwrap());
        assert!(r.series.iter().all(|s| s.equal), "{}", c.id);
    }
}

#[test]
fn random_instances_verify() {
    let cfg = VerifyConfig::with_prec(40);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for c in catalog() {
        for _ in 0..2 {
            let i = c.sample(&mut rng);
            let pts = c.sample_points(&mut rng, 2);
            let r = verify(&c, &i, &pts, &VerifyConfig { tol_exp: 30, ..cfg }).unwrap_or_else(|e| panic!("{} {i:?}: {e}", c.id));
            assert!(r.pass, "{}: {}", c.id, serde_json::to_string(&r).unwrap());
        }
    }
}

#[test]
fn clausen_rejects_terminating_right_side() {
    let c = find("clausen").unwrap();
    let i = inst(&c, &[("a", pv(-1, 2)), ("b", pv(-3, 2))]);
    match c.build(&i) {
        Err(e @ IdError::Predicate(_)) => {
            assert!(e.is_input_error());
            assert!(e.to_string().contains("terminates"), "{e}");
        }
        other => panic!("expected a predicate error, got {other:?}"),
    }
}

#[test]
fn gen_clausen_at_n0_is_clausen() {
    let g = find("gen-clausen").unwrap();
    let c = find("clausen").unwrap();
    for (a, b) in [(pv(1, 4), pv(1, 4)), (pv(2, 7), pv(-3, 5))] {
        let gi = inst(&g, &[("a", a.clone()), ("b", b.clone()), ("n", pv(0, 1))]);
        let ci = inst(&c, &[("a", a), ("b", b)]);
        let (gs, cs) = (simplified(&g, &gi), simplified(&c, &ci));
        assert_eq!(gs[0].0, cs[0].0);
        assert_eq!(gs[0].1, cs[0].1);
    }
}

#[test]
fn gen_altclaus_at_half_is_chaundy_alt() {
    let g = find("gen-altclaus").unwrap();
    let c = find("chaundy-alt").unwrap();
    let (a, b) = (pv(1, 5), pv(1, 7));
    let cc = a.add(&b).add(&pv(1, 2));
    let gi = inst(&g, &[("a", a.clone()), ("b", b.clone()), ("c", cc)]);
    let ci = inst(&c, &[("a", a), ("b", b)]);
    let (gs, cs) = (simplified(&g, &gi), simplified(&c, &ci));
    assert_eq!(gs[0].1, cs[0].1);
    // both sides as values too
    let cfg = VerifyConfig::default();
    assert!(verify(&g, &gi, &g.default_points, &cfg).unwrap().pass);
}

#[test]
fn gen_clausen_constant_is_gauss_quotient() {
    // at z = 1 the right side reduces to C 3F2(2a, 2b, a+b+n; a+b+1/2, 2a+2b+2n; 1)
    let g = find("gen-clausen").unwrap();
    let d = 50;
    for n in 0..=3i64 {
        let (a, b) = (pv(1, 5), pv(1, 9));
        let ab = a.add(&b);
        let i = inst(&g, &[("a", a.clone()), ("b", b.clone()), ("n", pv(n, 1))]);
        let pairs = g.build(&i).unwrap();
        // a unit constant is dropped when the pair is built
        let constant = match &pairs[0].rhs {
            Expr::Prod { factors } => match &factors[0] {
                Expr::Const { value } => value.clone(),
                other => panic!("unexpected factor {other:?}"),
            },
            _ => ParamValue::int(1),
        };
        let gauss = gauss_value_at_1(&a, &b, &ab.add_i(n).add(&pv(1, 2)), d).unwrap();
        let s = PFQSpec::new(vec![a.scale_i(2), b.scale_i(2), ab.add_i(n)], vec![ab.add(&pv(1, 2)), ab.add_i(n).scale_i(2)]);
        let at1 = eval_pfq(&s, &pv(1, 1), d, 100_000).unwrap().value.to_complex_at(d);
        let quotient = &gauss.sqr() / &at1;
        let err = clausen::exactnum::APComplex::rel_diff(&quotient, &constant.to_complex_at(d)).to_f64();
        assert!(err < 1e-40, "n={n}: {err}");
    }
    // n = 1 by hand: (1/2)(a+b+1/2)/((a+1/2)(b+1/2)) with a = b = 1/4 gives 8/9
    let i = inst(&g, &[("a", pv(1, 4)), ("b", pv(1, 4)), ("n", pv(1, 1))]);
    let Expr::Prod { factors } = &g.build(&i).unwrap()[0].rhs else { panic!() };
    assert_eq!(factors[0], Expr::Const { value: pv(8, 9) });
}

#[test]
fn dihedral_closed_check() {
    // a = 1, m = n = 0: (1-2z)^2 + 4z(1-z) = 1
    let c = find("dihedral-sum").unwrap();
    let i = inst(&c, &[("a", pv(1, 1)), ("m", pv(0, 1)), ("n", pv(0, 1))]);
    let pts: Vec<Point> = [(1, 7), (1, 2), (5, 6)].iter().map(|&(p, q)| Point::Z(pv(p, q))).collect();
    let r = verify(&c, &i, &pts, &VerifyConfig::default()).unwrap();
    assert!(r.pass);
    for s in &r.samples {
        assert_eq!(s.rhs, "1");
    }
}

#[test]
fn exact_cases_agree_exactly_for_small_indices() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let cfg = VerifyConfig::default();
    for id in ["dihedral-sum", "exclausen", "altclaus-terminating", "pfaff-dclausen", "pfaff-exclausen", "m0-dclausen", "m0-pfaff"] {
        let c = find(id).unwrap();
        for m in 0..=4i64 {
            for n in 0..=4i64 {
                let mut given = c.sample(&mut rng);
                for (k, v) in [("m", m), ("n", n)] {
                    if given.contains_key(k) {
                        given.insert(k.into(), pv(v, 1));
                    }
                }
                if c.check(&given).is_err() || c.build(&given).is_err() {
                    continue;
                }
                let pts = c.sample_points(&mut rng, 2);
                let r = verify(&c, &given, &pts, &cfg).unwrap_or_else(|e| panic!("{id} {given:?}: {e}"));
                assert!(r.pass, "{id}: {}", serde_json::to_string(&r).unwrap());
                assert!(r.series.iter().all(|s| s.equal), "{id}");
            }
        }
    }
}

#[test]
fn chaundy_coefficients_match_cauchy_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (lo, hi) = (Rational::from(-2), Rational::from(2));
    let mut done = 0;
    while done < 10 {
        let [a, b, c] = [0; 3].map(|_| sample_rational(&mut rng, &lo, &hi, 9));
        let cc = ParamValue::Exact(c.clone());
        if cc.nonpositive_integer().is_some() || ParamValue::Exact(Rational::from(&c * 2u32) - 1u32).nonpositive_integer().is_some() {
            continue;
        }
        let coeffs = PFQSpec::f21(ParamValue::Exact(a.clone()), ParamValue::Exact(b.clone()), cc).coefficients(11).unwrap();
        let sq = clausen::thetaops::solutions::cauchy_square(&coeffs);
        for (k, want) in sq.iter().enumerate() {
            let got = chaundy_coeff(&a, &b, &c, k).unwrap_or_else(|e| panic!("{a} {b} {c} k={k}: {e}"));
            assert_eq!(&got, want, "a={a} b={b} c={c} k={k}");
        }
        done += 1;
    }
}

#[test]
fn theorem1_all_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for r in theorem1_suite(&mut rng, 1, 60, 100_000).unwrap() {
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn report_is_deterministic() {
    let c = find("bailey").unwrap();
    let cfg = VerifyConfig::with_prec(30);
    let strip = |mut r: VerificationReport| {
        r.timing.wall_ms = 0;
        serde_json::to_string(&r).unwrap()
    };
    let a = strip(verify(&c, &c.default_instance(), &c.default_points, &cfg).unwrap());
    let b = strip(verify(&c, &c.default_instance(), &c.default_points, &cfg).unwrap());
    assert_eq!(a, b);
}

#[test]
fn operator_checks_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for r in run_operator_checks(&mut rng, &OPERATOR_CHECKS, 2, 12).unwrap() {
        assert!(r.pass, "{r:?}");
    }
}
