//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use clausen::exactnum::{pochhammer, pochhammer_ratio_limit, APComplex, ParamValue};
use clausen::hyperseries::{eval_pfq, gauss_value_at_1, PFQSpec};
use clausen::idbook::*;
use clausen::kdf::{CoeffTable, KdFSpec};
use clausen::thetaops::solutions::cauchy_square;
use clausen::thetaops::{build_p, check_syzygies, verify_combination, PParams, RatFunc, Var};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Rational;

type Outcome = Result<String, String>;

fn pv(p: i64, q: i64) -> ParamValue {
    ParamValue::ratio(p, q)
}

fn rng(k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xC1A05E ^ k)
}

fn cfg(prec: u32, tol: u32) -> VerifyConfig {
    VerifyConfig { prec, tol_exp: tol, ..VerifyConfig::default() }
}

fn z_points(vals: &[(i64, i64)]) -> Vec<Point> {
    vals.iter().map(|&(p, q)| Point::Z(pv(p, q))).collect()
}

fn quarter_points() -> Vec<Point> {
    z_points(&[(1, 10), (1, 5), (3, 10), (2, 5)])
}

/// Verifies and returns the worst relative residual, failing on the first miss.
fn check(case: &IdentityCase, inst: &Instance, pts: &[Point], c: &VerifyConfig) -> Result<f64, String> {
    let r = verify(case, inst, pts, c).map_err(|e| format!("{} {inst:?}: {e}", case.id))?;
    if !r.pass {
        return Err(format!("{} {inst:?}: max_rel {}", case.id, r.max_rel));
    }
    if let Some(s) = r.series.iter().find(|s| !s.equal) {
        return Err(format!("{} {inst:?}: series differ at z^{:?}", case.id, s.first_difference));
    }
    Ok(r.max_rel_f64())
}

fn case(id: &str) -> IdentityCase {
    find(id).expect("catalog id")
}

fn with(c: &IdentityCase, kv: &[(&str, ParamValue)]) -> Result<Instance, String> {
    let given: Instance = kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    c.instance_from(&given).map_err(|e| e.to_string())
}

fn simplified_rhs(c: &IdentityCase, i: &Instance) -> Result<String, String> {
    let p = c.build(i).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&p[0].rhs.clone().simplify()).unwrap())
}

fn simplified_lhs(c: &IdentityCase, i: &Instance) -> Result<String, String> {
    let p = c.build(i).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&p[0].lhs.clone().simplify()).unwrap())
}

fn c1_clausen_chaundy() -> Outcome {
    let t = Instant::now();
    let mut worst = 0f64;
    for (k, id) in ["clausen", "chaundy-alt"].iter().enumerate() {
        let c = case(id);
        let mut r = rng(10 + k as u64);
        for _ in 0..20 {
            worst = worst.max(check(&c, &c.sample(&mut r), &quarter_points(), &cfg(60, 40))?);
        }
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= 30.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(format!("40 sets, max rel {worst:.1e}, {secs:.1} s"))
}

fn c2_gen_altclaus() -> Outcome {
    let c = case("gen-altclaus");
    let mut r = rng(20);
    let mut worst = 0f64;
    for _ in 0..20 {
        worst = worst.max(check(&c, &c.sample(&mut r), &quarter_points(), &cfg(60, 40))?);
    }
    // degenerations
    let (a, b) = (pv(2, 7), pv(-1, 3));
    let chaundy = case("chaundy-alt");
    let gi = with(&c, &[("a", a.clone()), ("b", b.clone()), ("c", a.add(&b).add(&pv(1, 2)))])?;
    let ci = with(&chaundy, &[("a", a.clone()), ("b", b.clone())])?;
    if simplified_rhs(&c, &gi)? != simplified_rhs(&chaundy, &ci)? || simplified_lhs(&c, &gi)? != simplified_lhs(&chaundy, &ci)? {
        return Err("c = a+b+1/2 does not reduce to the Chaundy product".into());
    }
    let g = case("gen-clausen");
    let cl = case("clausen");
    let gi = with(&g, &[("a", a.clone()), ("b", b.clone()), ("n", pv(0, 1))])?;
    let ci = with(&cl, &[("a", a), ("b", b)])?;
    if simplified_rhs(&g, &gi)? != simplified_rhs(&cl, &ci)? || simplified_lhs(&g, &gi)? != simplified_lhs(&cl, &ci)? {
        return Err("n = 0 does not reduce to Clausen's identity".into());
    }
    Ok(format!("20 sets, max rel {worst:.1e}; both degenerations structurally identical"))
}

fn c3_gen_clausen() -> Outcome {
    let c = case("gen-clausen");
    let mut r = rng(30);
    let mut worst = 0f64;
    let mut worst_const = 0f64;
    for n in 0..=3i64 {
        for _ in 0..10 {
            let mut inst = c.sample(&mut r);
            inst.insert("n".into(), pv(n, 1));
            if c.check(&inst).is_err() {
                continue;
            }
            worst = worst.max(check(&c, &inst, &quarter_points(), &cfg(60, 40))?);
        }
        // constant against Gauss at z = 1 where the double series reduces to a 3F2(1)
        let (a, b) = (pv(1, 5), pv(1, 9));
        let ab = a.add(&b);
        let inst = with(&c, &[("a", a.clone()), ("b", b.clone()), ("n", pv(n, 1))])?;
        let rhs = &c.build(&inst).map_err(|e| e.to_string())?[0].rhs;
        let constant = match rhs {
            Expr::Prod { factors } => match &factors[0] {
                Expr::Const { value } => value.clone(),
                _ => return Err("unexpected constant".into()),
            },
            _ => ParamValue::int(1),
        };
        let d = 50;
        let gauss = gauss_value_at_1(&a, &b, &ab.add_i(n).add(&pv(1, 2)), d).map_err(|e| e.to_string())?;
        let s = PFQSpec::new(vec![a.scale_i(2), b.scale_i(2), ab.add_i(n)], vec![ab.add(&pv(1, 2)), ab.add_i(n).scale_i(2)]);
        let at1 = eval_pfq(&s, &pv(1, 1), d, 100_000).map_err(|e| e.to_string())?.value.to_complex_at(d);
        let e = APComplex::rel_diff(&(&gauss.sqr() / &at1), &constant.to_complex_at(d)).to_f64();
        if e >= 1e-40 {
            return Err(format!("n={n}: constant differs from the Gauss quotient by {e:.1e}"));
        }
        worst_const = worst_const.max(e);
    }
    Ok(format!("n = 0..3, max rel {worst:.1e}; constants match Gauss quotients to {worst_const:.1e}"))
}

fn c4_terminating() -> Outcome {
    let ids = ["dihedral-sum", "exclausen", "altclaus-terminating", "pfaff-dclausen", "pfaff-exclausen", "m0-dclausen", "m0-pfaff"];
    let mut r = rng(40);
    let mut runs = 0;
    for id in ids {
        let c = case(id);
        for m in 0..=4i64 {
            for n in 0..=4i64 {
                let mut done = 0;
                let mut tries = 0;
                while done < 10 {
                    tries += 1;
                    if tries > 200 {
                        return Err(format!("{id}: no admissible a for m={m}, n={n}"));
                    }
                    let mut inst = c.sample(&mut r);
                    for (k, v) in [("m", m), ("n", n)] {
                        if inst.contains_key(k) {
                            inst.insert(k.into(), pv(v, 1));
                        }
                    }
                    if c.build(&inst).is_err() {
                        continue;
                    }
                    let pts = c.sample_points(&mut r, 5);
                    let rep = verify(&c, &inst, &pts, &cfg(60, 40)).map_err(|e| format!("{id} {inst:?}: {e}"))?;
                    if !rep.pass || rep.series.is_empty() || rep.series.iter().any(|s| !s.equal) {
                        return Err(format!("{id} {inst:?}: {}", serde_json::to_string(&rep).unwrap()));
                    }
                    // when both sides are exact rationals the point check itself is equality
                    if rep.samples.iter().any(|s| s.exact == Some(false)) {
                        return Err(format!("{id} {inst:?}: exact values differ"));
                    }
                    done += 1;
                    runs += 1;
                }
                if !c.params.iter().any(|p| p.name == "n") && n > 0 || !c.params.iter().any(|p| p.name == "m") && m > 0 {
                    break;
                }
            }
        }
    }
    let e = case("euler-altclaus");
    let mut worst = 0f64;
    for _ in 0..10 {
        let pts = e.sample_points(&mut r, 5);
        worst = worst.max(check(&e, &e.sample(&mut r), &pts, &cfg(60, 40))?);
    }
    // a = 1, m = n = 0
    let d = case("dihedral-sum");
    let inst = with(&d, &[("a", pv(1, 1)), ("m", pv(0, 1)), ("n", pv(0, 1))])?;
    let pts = d.sample_points(&mut r, 5);
    let rep = verify(&d, &inst, &pts, &cfg(60, 40)).map_err(|e| e.to_string())?;
    if !rep.pass || rep.samples.iter().any(|s| s.rhs != "1") || rep.series.iter().any(|s| !s.equal) {
        return Err("(1-2z)^2 + 4z(1-z) = 1 failed".into());
    }
    Ok(format!("{runs} exact instances (m, n <= 4) equal as series over Q; Euler variant max rel {worst:.1e}; a=1 closed check holds"))
}

fn c5_operators() -> Outcome {
    let t = Instant::now();
    let mut r = rng(50);
    let reps = run_operator_checks(&mut r, &["annihilate"], 5, 12).map_err(|e| e.to_string())?;
    let cells: usize = reps.iter().map(|x| x.checked).sum();
    if let Some(bad) = reps.iter().find(|x| !x.pass) {
        return Err(format!("{bad:?}"));
    }
    if !check_syzygies(&PParams::symbolic()) {
        return Err("syzygies do not vanish".into());
    }
    let v = RatFunc::var;
    if !verify_combination(&v(Var::A), &v(Var::B), &v(Var::C)) {
        return Err("symbolic combination differs from the symmetric square".into());
    }
    // a perturbed P1 must not annihilate the table
    let p = [pv(1, 3), pv(2, 5), pv(-1, 4), pv(3, 7), pv(5, 6), pv(1, 9), pv(-2, 3)];
    let q: Vec<Rational> = p.iter().map(|x| x.as_exact().unwrap().clone()).collect();
    let spec = KdFSpec::f2111(p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone(), p[4].clone(), p[5].clone(), p[6].clone());
    let table: CoeffTable<Rational> = CoeffTable::build(&spec, 8, 8, Some(8), 0).map_err(|e| e.to_string())?;
    let mut wrong = q.clone();
    wrong[2] += Rational::from((1, 100));
    let op = build_p(1, &PParams::from_rationals(&std::array::from_fn(|k| wrong[k].clone()))).map_err(|e| e.to_string())?;
    if op.clear_denominators().apply_to_table(&table).map_err(|e| e.to_string())?.values().all(|x| *x == 0) {
        return Err("perturbed P1 still annihilates".into());
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(format!("P1-P3 zero on {cells} residual cells (degree 12, 5 sets); syzygies and symbolic combination vanish; {secs:.1} s"))
}

fn c6_theorem1() -> Outcome {
    let mut r = rng(60);
    let reps = theorem1_suite(&mut r, 5, 60, 100_000).map_err(|e| e.to_string())?;
    let mut worst = 0f64;
    let mut min_ctl = f64::INFINITY;
    for x in &reps {
        let res: f64 = x.residual.parse().unwrap_or(f64::INFINITY);
        let ctl: f64 = x.control.parse().unwrap_or(0.0);
        if !x.pass || res >= 1e-35 || ctl <= 1e-6 {
            return Err(format!("{x:?}"));
        }
        worst = worst.max(res);
        min_ctl = min_ctl.min(ctl);
    }
    Ok(format!("{} residuals, max {worst:.1e}; smallest control {min_ctl:.1e}", reps.len()))
}

fn c7_gamma() -> Outcome {
    let mut r = rng(70);
    let mut worst = 0f64;
    for id in ["gamma-eval-z0", "gamma-eval-z1"] {
        let c = case(id);
        for _ in 0..10 {
            let inst = c.sample(&mut r);
            worst = worst.max(check(&c, &inst, &c.default_points, &cfg(60, 40))?);
        }
    }
    let z0 = case("gamma-eval-z0");
    let z1 = case("gamma-eval-z1");
    let bad0 = [("a", pv(1, 5)), ("b", pv(1, 7)), ("c", pv(3, 2))];
    let bad1 = [("a", pv(1, 2)), ("b", pv(2, 3)), ("c", pv(1, 3))];
    for (c, kv) in [(&z0, &bad0), (&z1, &bad1)] {
        match c.build(&with(c, kv)?) {
            Err(IdError::Predicate(_)) => {}
            other => return Err(format!("{}: inadmissible set not rejected: {other:?}", c.id)),
        }
    }
    Ok(format!("20 sets, max rel {worst:.1e}; inadmissible sets rejected"))
}

fn c8_appell() -> Outcome {
    let mut r = rng(80);
    let mut worst = 0f64;
    let b = case("bailey");
    let pt = [Point::XY(pv(1, 5), pv(3, 10))];
    for _ in 0..10 {
        worst = worst.max(check(&b, &b.sample(&mut r), &pt, &cfg(60, 40))?);
    }
    let d = case("bailey-diagonal");
    for _ in 0..10 {
        worst = worst.max(check(&d, &d.sample(&mut r), &z_points(&[(3, 10)]), &cfg(60, 40))?);
    }
    let f = case("f4-connection");
    let mut worst_f = 0f64;
    for _ in 0..5 {
        worst_f = worst_f.max(check(&f, &f.sample(&mut r), &f.default_points, &cfg(60, 35))?);
    }
    Ok(format!("Bailey and diagonal max rel {worst:.1e}; connection max rel {worst_f:.1e}"))
}

fn c9_limits() -> Outcome {
    let eps = Rational::from((1, rug::Integer::from(rug::Integer::u_pow_u(10, 20))));
    for k in 0..=6usize {
        let e = ParamValue::Exact(eps.clone());
        let num = pochhammer(&e.add_i(-(k as i64)), 2 * k + 1);
        let den = pochhammer(&e.scale_i(2).add_i(-2 * k as i64), 2 * k + 1);
        let approx = num.div(&den).map_err(|e| e.to_string())?;
        let exact = pochhammer_ratio_limit(k);
        let rel = APComplex::rel_diff(&approx.to_complex_at(40), &APComplex::from_rational(&exact, 40)).to_f64();
        if rel >= 1e-15 {
            return Err(format!("k={k}: {rel:.1e}"));
        }
    }
    let mut r = rng(90);
    let mut runs = 0;
    for id in ["regroup", "pochhammer-identity"] {
        let c = case(id);
        for m in 0..=6i64 {
            for n in 0..=6i64 {
                let mut inst = c.sample(&mut r);
                inst.insert("m".into(), pv(m, 1));
                if inst.contains_key("n") {
                    inst.insert("n".into(), pv(n, 1));
                } else if n > 0 {
                    continue;
                }
                let rep = verify(&c, &inst, &c.default_points, &cfg(60, 40)).map_err(|e| format!("{id} {inst:?}: {e}"))?;
                if !rep.pass || rep.samples.iter().any(|s| s.exact != Some(true)) {
                    return Err(format!("{id} {inst:?}: {}", serde_json::to_string(&rep).unwrap()));
                }
                runs += 1;
            }
        }
    }
    Ok(format!("limits match for k <= 6; {runs} exact regrouping/Pochhammer instances"))
}

fn c10_chaundy_expansion() -> Outcome {
    let mut r = rng(100);
    let (lo, hi) = (Rational::from(-2), Rational::from(2));
    let mut done = 0;
    while done < 10 {
        let [a, b, c] = [0; 3].map(|_| sample_rational(&mut r, &lo, &hi, 9));
        // the finite-sum form has a+1/2, b+1/2 and 3/2-c-k downstairs
        if [&a, &b, &c].iter().any(|q| Rational::from(*q * 2u32).is_integer()) {
            continue;
        }
        let f = PFQSpec::f21(ParamValue::Exact(a.clone()), ParamValue::Exact(b.clone()), ParamValue::Exact(c.clone()));
        let sq = cauchy_square(&f.coefficients(11).map_err(|e| e.to_string())?);
        for (k, want) in sq.iter().enumerate().take(11) {
            let got = chaundy_coeff(&a, &b, &c, k).map_err(|e| format!("a={a} b={b} c={c} k={k}: {e}"))?;
            if &got != want {
                return Err(format!("a={a} b={b} c={c} k={k}: {got} != {want}"));
            }
        }
        done += 1;
    }
    Ok("10 parameter sets, z^0..z^10 equal".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Clausen and Chaundy products", c1_clausen_chaundy),
        ("generalized product with F1220", c2_gen_altclaus),
        ("generalized Clausen with F2111", c3_gen_clausen),
        ("terminating identities, exact", c4_terminating),
        ("operator suite", c5_operators),
        ("symmetric-square residuals", c6_theorem1),
        ("Gamma evaluations at the corners", c7_gamma),
        ("Bailey, diagonal, F4 connection", c8_appell),
        ("Pochhammer limits and regroupings", c9_limits),
        ("Chaundy expansion coefficients", c10_chaundy_expansion),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.1} s]", k + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.1} s]", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
