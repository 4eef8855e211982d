//! The identity catalog.

use rug::{Integer, Rational};

use super::expr::{Arg, Expr, Point};
use super::{Domain, IdError, IdentityCase, Instance, Mode, Pair, ParamKind, ParamSpec};
use crate::exactnum::{factorial, pochhammer, pochhammer_ratio_limit, ParamValue};
use crate::hyperseries::PFQSpec;
use crate::kdf::{reverse_summation, KdFSpec, Shape};

const fn rat(name: &'static str, lo: (i64, i64), hi: (i64, i64)) -> ParamSpec {
    ParamSpec { name, kind: ParamKind::Rational { lo, hi } }
}

const fn int(name: &'static str, lo: i64, hi: i64) -> ParamSpec {
    ParamSpec { name, kind: ParamKind::Integer { lo, hi } }
}

const A: ParamSpec = rat("a", (-3, 2), (3, 2));
const B: ParamSpec = rat("b", (-3, 2), (3, 2));
const C: ParamSpec = rat("c", (-3, 2), (5, 2));
const A_WIDE: ParamSpec = rat("a", (-2, 1), (2, 1));
const M: ParamSpec = int("m", 0, 4);
const N: ParamSpec = int("n", 0, 4);
const N3: ParamSpec = int("n", 0, 3);
const M6: ParamSpec = int("m", 0, 6);
const N6: ParamSpec = int("n", 0, 6);
const C_BELOW_1: ParamSpec = rat("c", (-3, 2), (1, 1));

fn z_points() -> Vec<Point> {
    [(1, 10), (1, 5), (3, 10), (2, 5)].iter().map(|&(p, q)| Point::Z(ParamValue::ratio(p, q))).collect()
}

fn unit_interval() -> Domain {
    Domain::Z { lo: (0, 1), hi: (1, 1) }
}

fn pv(p: i64, q: i64) -> ParamValue {
    ParamValue::ratio(p, q)
}

fn half() -> ParamValue {
    pv(1, 2)
}

fn get(i: &Instance, n: &str) -> ParamValue {
    i[n].clone()
}

fn uint(i: &Instance, n: &str) -> usize {
    i[n].as_exact().and_then(|q| q.numer().to_usize()).expect("checked integer parameter")
}

/// Err for the first parameter that is zero or a negative integer.
fn forbid(list: &[(&str, ParamValue)]) -> Result<(), String> {
    for (what, v) in list {
        if v.nonpositive_integer().is_some() {
            return Err(format!("{what} = {v} is zero or a negative integer"));
        }
    }
    Ok(())
}

fn positive_re(what: &str, v: &ParamValue) -> Result<(), String> {
    if v.re_f64() > 0.0 {
        Ok(())
    } else {
        Err(format!("convergence needs Re({what}) > 0, got {v}"))
    }
}

fn ph(x: &ParamValue, k: usize) -> ParamValue {
    pochhammer(x, k)
}

fn product(xs: &[ParamValue]) -> ParamValue {
    xs.iter().fold(ParamValue::int(1), |acc, x| acc.mul(x))
}

fn quotient(num: &[ParamValue], den: &[ParamValue]) -> Result<ParamValue, IdError> {
    Ok(product(num).div(&product(den))?)
}

fn k(v: ParamValue) -> Expr {
    Expr::constant(v)
}

fn f21(a: ParamValue, b: ParamValue, c: ParamValue, arg: Arg) -> Expr {
    Expr::pfq(PFQSpec::f21(a, b, c), arg)
}

fn pfq(upper: Vec<ParamValue>, lower: Vec<ParamValue>, arg: Arg) -> Expr {
    Expr::pfq(PFQSpec::new(upper, lower).canonical(), arg)
}

fn z_pow(e: usize) -> Expr {
    Expr::pow(Arg::Z, ParamValue::int(e as i64))
}

fn pair(label: &str, lhs: Expr, rhs: Expr) -> Pair {
    Pair { label: label.to_string(), lhs: lhs.simplify(), rhs: rhs.simplify() }
}

/// F2111(2a; -2a-2m-2n; -m, -n; 1/2-m-n; -2m, -2n).
fn dihedral_spec(a: &ParamValue, m: usize, n: usize) -> KdFSpec {
    let (mi, ni) = (m as i64, n as i64);
    KdFSpec::f2111(
        a.scale_i(2),
        a.scale_i(-2).add_i(-2 * mi - 2 * ni),
        ParamValue::int(-mi),
        ParamValue::int(-ni),
        half().add_i(-mi - ni),
        ParamValue::int(-2 * mi),
        ParamValue::int(-2 * ni),
    )
}

/// F2111 of the first solution with c-dependent parameters.
pub fn spap0_spec(a: &ParamValue, b: &ParamValue, c: &ParamValue) -> KdFSpec {
    let ab = a.add(b);
    KdFSpec::f2111(
        a.scale_i(2),
        b.scale_i(2),
        c.sub(&half()),
        ab.sub(c).add(&half()),
        ab.add(&half()),
        c.scale_i(2).add_i(-1),
        ab.sub(c).scale_i(2).add_i(1),
    )
}

/// The F1220 of the product of the two local solutions at z = 0.
fn altclaus_spec(a: &ParamValue, b: &ParamValue, c: &ParamValue) -> KdFSpec {
    let h = half();
    let ab = a.add(b);
    KdFSpec::f1220(
        h.clone(),
        a.sub(b).add(&h),
        ab.sub(c).add(&h),
        b.sub(a).add(&h),
        c.sub(&ab).add(&h),
        c.clone(),
        ParamValue::int(2).sub(c),
    )
}

fn f4(a: ParamValue, b: ParamValue, c1: ParamValue, c2: ParamValue) -> KdFSpec {
    KdFSpec::new(Shape::AppellF4, vec![a, b, c1, c2]).expect("arity")
}

/// Constants of the two squares in the dihedral sum.
fn dihedral_constants(a: &ParamValue, m: usize, n: usize) -> Result<(ParamValue, ParamValue), IdError> {
    let h = half();
    let c1 = quotient(&[ph(&a.add(&h), n), ph(&a.add_i(m as i64).add(&h), n)], &[ph(&h, n), ph(&h.add_i(m as i64), n)])?;
    let am = ph(a, m + n + 1);
    let hm1 = ph(&h, m + 1);
    let c2 = quotient(
        &[ph(&a.add(&h), m), ph(&a.add_i(n as i64).add(&h), m), am.clone(), am],
        &[ph(&h, m), hm1.clone(), hm1, ph(&h, n), ph(&h, m + n)],
    )?;
    Ok((c1, c2))
}

fn int_pv(n: Integer) -> ParamValue {
    ParamValue::Exact(Rational::from(n))
}

#[allow(clippy::too_many_arguments)]
fn case(
    id: &'static str,
    anchor: &'static str,
    mode: Mode,
    tags: &'static [&'static str],
    params: &'static [ParamSpec],
    domain: Domain,
    defaults: &'static [(&'static str, i64, i64)],
    check: fn(&Instance) -> Result<(), String>,
    build: fn(&Instance) -> Result<Vec<Pair>, IdError>,
) -> IdentityCase {
    let default_points = match &domain {
        Domain::Z { .. } => z_points(),
        Domain::Fixed { points } => points.clone(),
        Domain::None => vec![Point::None],
    };
    IdentityCase { id, anchor, mode, tags, params, domain, default_points, defaults, check, build }
}

/// All cases, in a fixed order.
pub fn catalog() -> Vec<IdentityCase> {
    vec![
        case(
            "clausen",
            "2F1(a,b;a+b+1/2;z)^2 = 3F2(2a,2b,a+b;2a+2b,a+b+1/2;z)",
            Mode::Numeric,
            &["classical", "square"],
            &[A, B],
            unit_interval(),
            &[("a", 1, 4), ("b", 1, 4)],
            |i| {
                let s = get(i, "a").add(&get(i, "b"));
                if s.nonpositive_integer().is_some() {
                    return Err(format!(
                        "a+b = {s} is zero or a negative integer: the 3F2 on the right then terminates and no longer equals \
                         the square (see exclausen and dihedral-sum for the terminating version)"
                    ));
                }
                forbid(&[("a+b+1/2", s.add(&half()))])
            },
            |i| {
                let (a, b) = (get(i, "a"), get(i, "b"));
                let ab = a.add(&b);
                Ok(vec![pair(
                    "square",
                    Expr::square(f21(a.clone(), b.clone(), ab.add(&half()), Arg::Z)),
                    pfq(vec![a.scale_i(2), b.scale_i(2), ab.clone()], vec![ab.add(&half()), ab.scale_i(2)], Arg::Z),
                )])
            },
        ),
        case(
            "chaundy-alt",
            "2F1(a,b;a+b+1/2;z) 2F1(1/2-a,1/2-b;3/2-a-b;z) = 3F2(1/2,a-b+1/2,b-a+1/2;a+b+1/2,3/2-a-b;z)",
            Mode::Numeric,
            &["classical", "product"],
            &[A, B],
            unit_interval(),
            &[("a", 1, 5), ("b", 1, 7)],
            |i| {
                let s = get(i, "a").add(&get(i, "b"));
                forbid(&[("a+b+1/2", s.add(&half())), ("3/2-a-b", pv(3, 2).sub(&s))])
            },
            |i| {
                let (a, b) = (get(i, "a"), get(i, "b"));
                let h = half();
                let ab = a.add(&b);
                Ok(vec![pair(
                    "product",
                    Expr::prod(vec![
                        f21(a.clone(), b.clone(), ab.add(&h), Arg::Z),
                        f21(h.sub(&a), h.sub(&b), pv(3, 2).sub(&ab), Arg::Z),
                    ]),
                    pfq(vec![h.clone(), a.sub(&b).add(&h), b.sub(&a).add(&h)], vec![ab.add(&h), pv(3, 2).sub(&ab)], Arg::Z),
                )])
            },
        ),
        case(
            "gen-altclaus",
            "2F1(a,b;c;z) 2F1(1+a-c,1+b-c;2-c;z) = (1-z)^(c-a-b-1/2) F1220(1/2; a-b+1/2, a+b-c+1/2; b-a+1/2, c-a-b+1/2; c; 2-c | z, z/(z-1))",
            Mode::Numeric,
            &["theorem2", "product"],
            &[A, B, C],
            Domain::Z { lo: (0, 1), hi: (1, 2) },
            &[("a", 1, 5), ("b", 1, 7), ("c", 1, 3)],
            |i| {
                let c = get(i, "c");
                forbid(&[("c", c.clone()), ("2-c", ParamValue::int(2).sub(&c))])
            },
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                let one = ParamValue::int(1);
                Ok(vec![pair(
                    "product",
                    Expr::prod(vec![
                        f21(a.clone(), b.clone(), c.clone(), Arg::Z),
                        f21(one.add(&a).sub(&c), one.add(&b).sub(&c), ParamValue::int(2).sub(&c), Arg::Z),
                    ]),
                    Expr::prod(vec![
                        Expr::pow(Arg::OneMinusZ, c.sub(&a).sub(&b).sub(&half())),
                        Expr::kdf(altclaus_spec(&a, &b, &c), Arg::Z, Arg::ZOverZMinusOne),
                    ]),
                )])
            },
        ),
        case(
            "gen-clausen",
            "2F1(a,b;a+b+n+1/2;z)^2 = (1/2)_n (a+b+1/2)_n / ((a+1/2)_n (b+1/2)_n) F2111(2a; 2b; a+b+n, -n; a+b+1/2; 2a+2b+2n, -2n | z, 1-z)",
            Mode::Numeric,
            &["theorem2", "square"],
            &[A, B, N3],
            unit_interval(),
            &[("a", 1, 4), ("b", 1, 4), ("n", 1, 1)],
            |i| {
                let (a, b) = (get(i, "a"), get(i, "b"));
                let n = i["n"].clone();
                let ab = a.add(&b);
                let h = half();
                forbid(&[
                    ("a+b+1/2", ab.add(&h)),
                    ("a+b+n+1/2", ab.add(&n).add(&h)),
                    ("2a+2b+2n", ab.add(&n).scale_i(2)),
                    ("a+1/2", a.add(&h)),
                    ("b+1/2", b.add(&h)),
                ])
            },
            |i| {
                let (a, b, n) = (get(i, "a"), get(i, "b"), uint(i, "n"));
                let h = half();
                let ab = a.add(&b);
                let ni = n as i64;
                let constant = quotient(&[ph(&h, n), ph(&ab.add(&h), n)], &[ph(&a.add(&h), n), ph(&b.add(&h), n)])?;
                let spec = KdFSpec::f2111(
                    a.scale_i(2),
                    b.scale_i(2),
                    ab.add_i(ni),
                    ParamValue::int(-ni),
                    ab.add(&h),
                    ab.add_i(ni).scale_i(2),
                    ParamValue::int(-2 * ni),
                );
                Ok(vec![pair(
                    "square",
                    Expr::square(f21(a.clone(), b.clone(), ab.add_i(ni).add(&h), Arg::Z)),
                    Expr::prod(vec![k(constant), Expr::kdf(spec, Arg::Z, Arg::OneMinusZ)]),
                )])
            },
        ),
        case(
            "dihedral-sum",
            "C1 2F1(a,-a-m-n;1/2-m;z)^2 + C2 z^(2m+1) 2F1(a+m+1/2,1/2-a-n;m+3/2;z)^2 = F2111(2a; -2a-2m-2n; -m, -n; 1/2-m-n; -2m, -2n | z, 1-z)",
            Mode::Exact,
            &["theorem2", "terminating", "dihedral"],
            &[A_WIDE, M, N],
            unit_interval(),
            &[("a", 1, 1), ("m", 0, 1), ("n", 0, 1)],
            |_| Ok(()),
            |i| {
                let (a, m, n) = (get(i, "a"), uint(i, "m"), uint(i, "n"));
                let (mi, ni) = (m as i64, n as i64);
                let (c1, c2) = dihedral_constants(&a, m, n)?;
                let h = half();
                Ok(vec![pair(
                    "squares",
                    Expr::sum(vec![
                        Expr::prod(vec![k(c1), Expr::square(f21(a.clone(), a.neg().add_i(-mi - ni), h.add_i(-mi), Arg::Z))]),
                        Expr::prod(vec![
                            k(c2),
                            z_pow(2 * m + 1),
                            Expr::square(f21(a.add_i(mi).add(&h), h.sub(&a).add_i(-ni), pv(3, 2).add_i(mi), Arg::Z)),
                        ]),
                    ]),
                    Expr::kdf(dihedral_spec(&a, m, n), Arg::Z, Arg::OneMinusZ),
                )])
            },
        ),
        case(
            "exclausen",
            "2F1(a,-a-m;1/2-m;z)^2 + C z^(2m+1) 2F1(a+m+1/2,1/2-a;m+3/2;z)^2 = terminating 3F2(2a,-2a-2m,-m;1/2-m,-2m;z)",
            Mode::Exact,
            &["terminating", "dihedral"],
            &[A_WIDE, M],
            unit_interval(),
            &[("a", 1, 3), ("m", 1, 1)],
            |_| Ok(()),
            |i| {
                let (a, m) = (get(i, "a"), uint(i, "m"));
                let mi = m as i64;
                let h = half();
                let t = ph(&a.add(&h), m).mul(&ph(&a, m + 1));
                let u = ph(&h, m).mul(&ph(&h, m + 1));
                let constant = quotient(&[t.clone(), t], &[u.clone(), u])?;
                Ok(vec![pair(
                    "squares",
                    Expr::sum(vec![
                        Expr::square(f21(a.clone(), a.neg().add_i(-mi), h.add_i(-mi), Arg::Z)),
                        Expr::prod(vec![k(constant), z_pow(2 * m + 1), Expr::square(f21(a.add_i(mi).add(&h), h.sub(&a), pv(3, 2).add_i(mi), Arg::Z))]),
                    ]),
                    pfq(
                        vec![a.scale_i(2), a.scale_i(-2).add_i(-2 * mi), ParamValue::int(-mi)],
                        vec![h.add_i(-mi), ParamValue::int(-2 * mi)],
                        Arg::Z,
                    ),
                )])
            },
        ),
        case(
            "altclaus-terminating",
            "2F1(a,a+m+1/2;2a+m+n+1;z) 2F1(-a-m-n,1/2-a-n;1-2a-m-n;z) = (1-z)^n F1220(1/2; -m, -n; m+1, n+1; 2a+m+n+1; 1-2a-m-n | z, z/(z-1))",
            Mode::Exact,
            &["terminating", "dihedral", "product"],
            &[A_WIDE, M, N],
            unit_interval(),
            &[("a", 1, 3), ("m", 1, 1), ("n", 1, 1)],
            |i| {
                let (a, m, n) = (get(i, "a"), i["m"].clone(), i["n"].clone());
                let s = a.scale_i(2).add(&m).add(&n);
                forbid(&[("2a+m+n+1", s.add_i(1)), ("1-2a-m-n", ParamValue::int(1).sub(&s))])
            },
            |i| {
                let (a, m, n) = (get(i, "a"), uint(i, "m"), uint(i, "n"));
                let (mi, ni) = (m as i64, n as i64);
                let h = half();
                let s = a.scale_i(2).add_i(mi + ni);
                let spec = KdFSpec::f1220(
                    h.clone(),
                    ParamValue::int(-mi),
                    ParamValue::int(-ni),
                    ParamValue::int(mi + 1),
                    ParamValue::int(ni + 1),
                    s.add_i(1),
                    ParamValue::int(1).sub(&s),
                );
                Ok(vec![pair(
                    "product",
                    Expr::prod(vec![
                        f21(a.clone(), a.add_i(mi).add(&h), s.add_i(1), Arg::Z),
                        f21(a.neg().add_i(-mi - ni), h.sub(&a).add_i(-ni), ParamValue::int(1).sub(&s), Arg::Z),
                    ]),
                    Expr::prod(vec![Expr::pow(Arg::OneMinusZ, ParamValue::int(ni)), Expr::kdf(spec, Arg::Z, Arg::ZOverZMinusOne)]),
                )])
            },
        ),
        case(
            "square-as-F0211",
            "2F1(a,b;c;z)^2 = F0211(a, a; b, b; c, c | z, z)",
            Mode::Numeric,
            &["square"],
            &[A, B, C],
            unit_interval(),
            &[("a", 1, 3), ("b", 2, 5), ("c", 3, 7)],
            |i| forbid(&[("c", get(i, "c"))]),
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                let spec = KdFSpec::new(Shape::F0211, vec![a.clone(), a.clone(), b.clone(), b.clone(), c.clone(), c.clone()])?;
                Ok(vec![pair("square", Expr::square(f21(a, b, c, Arg::Z)), Expr::kdf(spec, Arg::Z, Arg::Z))])
            },
        ),
        case(
            "chaundy-double",
            "2F1(a,b;c;z)^2 = sum_k (2a)_k (2b)_k (c-1/2)_k / ((c)_k (2c-1)_k k!) 4F3(-k/2,(1-k)/2,1/2,a+b-c+1/2; a+1/2,b+1/2,3/2-c-k; 1) z^k",
            Mode::Exact,
            &["terminating", "square"],
            &[A, B, C],
            unit_interval(),
            &[("a", 1, 3), ("b", 2, 5), ("c", 3, 7)],
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                let h = half();
                if c.sub(&h).as_exact().is_some_and(|r| r.denom() == &1u32) {
                    return Err(format!("c = {c}: 3/2-c-k hits a non-positive integer"));
                }
                forbid(&[("c", c.clone()), ("2c-1", c.scale_i(2).add_i(-1)), ("a+1/2", a.add(&h)), ("b+1/2", b.add(&h))])
            },
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                Ok(vec![pair(
                    "expansion",
                    Expr::square(f21(a.clone(), b.clone(), c.clone(), Arg::Z)),
                    Expr::Chaundy { a, b, c, arg: Arg::Z },
                )])
            },
        ),
        case(
            "euler-altclaus",
            "2F1(a,b;c;z) 2F1(1-a,1-b;2-c;z) = (1-z)^(-1/2) F1220(1/2; a-b+1/2, a+b-c+1/2; b-a+1/2, c-a-b+1/2; c; 2-c | z, z/(z-1))",
            Mode::Numeric,
            &["product", "transformation"],
            &[A, B, C],
            Domain::Z { lo: (0, 1), hi: (1, 2) },
            &[("a", 1, 5), ("b", 1, 7), ("c", 1, 3)],
            |i| {
                let c = get(i, "c");
                forbid(&[("c", c.clone()), ("2-c", ParamValue::int(2).sub(&c))])
            },
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                let one = ParamValue::int(1);
                Ok(vec![pair(
                    "product",
                    Expr::prod(vec![
                        f21(a.clone(), b.clone(), c.clone(), Arg::Z),
                        f21(one.sub(&a), one.sub(&b), ParamValue::int(2).sub(&c), Arg::Z),
                    ]),
                    Expr::prod(vec![Expr::pow(Arg::OneMinusZ, pv(-1, 2)), Expr::kdf(altclaus_spec(&a, &b, &c), Arg::Z, Arg::ZOverZMinusOne)]),
                )])
            },
        ),
        case(
            "pfaff-dclausen",
            "C1 2F1(a,a+n+1/2;1/2-m;z)^2 - C2 z^(2m+1) 2F1(a+m+1/2,a+n+m+1;m+3/2;z)^2 = (1-z)^(-2a) F2111(2a; -2a-2m-2n; -m, -n; 1/2-m-n; -2m, -2n | z/(z-1), 1/(1-z))",
            Mode::Exact,
            &["terminating", "dihedral", "transformation"],
            &[A_WIDE, M, N],
            unit_interval(),
            &[("a", 1, 3), ("m", 1, 1), ("n", 1, 1)],
            |_| Ok(()),
            |i| {
                let (a, m, n) = (get(i, "a"), uint(i, "m"), uint(i, "n"));
                let (mi, ni) = (m as i64, n as i64);
                let (c1, c2) = dihedral_constants(&a, m, n)?;
                let h = half();
                Ok(vec![pair(
                    "squares",
                    Expr::sum(vec![
                        Expr::prod(vec![k(c1), Expr::square(f21(a.clone(), a.add_i(ni).add(&h), h.add_i(-mi), Arg::Z))]),
                        Expr::neg(Expr::prod(vec![
                            k(c2),
                            z_pow(2 * m + 1),
                            Expr::square(f21(a.add_i(mi).add(&h), a.add_i(mi + ni + 1), pv(3, 2).add_i(mi), Arg::Z)),
                        ])),
                    ]),
                    Expr::prod(vec![Expr::pow(Arg::OneMinusZ, a.scale_i(-2)), Expr::kdf(dihedral_spec(&a, m, n), Arg::ZOverZMinusOne, Arg::InvOneMinusZ)]),
                )])
            },
        ),
        case(
            "pfaff-exclausen",
            "2F1(a,a+1/2;1/2-m;z)^2 - C z^(2m+1) 2F1(a+m+1/2,a+m+1;m+3/2;z)^2 = (1-z)^(-2a) 3F2(2a,-2a-2m,-m;1/2-m,-2m;z/(z-1))",
            Mode::Exact,
            &["terminating", "dihedral", "transformation"],
            &[A_WIDE, M],
            unit_interval(),
            &[("a", 1, 3), ("m", 1, 1)],
            |_| Ok(()),
            |i| {
                let (a, m) = (get(i, "a"), uint(i, "m"));
                let mi = m as i64;
                let h = half();
                let t = ph(&a.add(&h), m).mul(&ph(&a, m + 1));
                let u = ph(&h, m).mul(&ph(&h, m + 1));
                let constant = quotient(&[t.clone(), t], &[u.clone(), u])?;
                Ok(vec![pair(
                    "squares",
                    Expr::sum(vec![
                        Expr::square(f21(a.clone(), a.add(&h), h.add_i(-mi), Arg::Z)),
                        Expr::neg(Expr::prod(vec![
                            k(constant),
                            z_pow(2 * m + 1),
                            Expr::square(f21(a.add_i(mi).add(&h), a.add_i(mi + 1), pv(3, 2).add_i(mi), Arg::Z)),
                        ])),
                    ]),
                    Expr::prod(vec![
                        Expr::pow(Arg::OneMinusZ, a.scale_i(-2)),
                        pfq(
                            vec![a.scale_i(2), a.scale_i(-2).add_i(-2 * mi), ParamValue::int(-mi)],
                            vec![h.add_i(-mi), ParamValue::int(-2 * mi)],
                            Arg::ZOverZMinusOne,
                        ),
                    ]),
                )])
            },
        ),
        case(
            "m0-dclausen",
            "(a+1/2)_n^2 2F1(a,-a-n;1/2;z)^2 + 4 z (a)_{n+1}^2 2F1(a+1/2,1/2-a-n;3/2;z)^2 = (1/2)_n^2 3F2(2a,-2a-2n,-n;1/2-n,-2n;1-z)",
            Mode::Exact,
            &["terminating", "dihedral"],
            &[A_WIDE, N],
            unit_interval(),
            &[("a", 1, 1), ("n", 0, 1)],
            |_| Ok(()),
            |i| {
                let (a, n) = (get(i, "a"), uint(i, "n"));
                let ni = n as i64;
                let h = half();
                let t = ph(&a.add(&h), n);
                let u = ph(&a, n + 1);
                let w = ph(&h, n);
                Ok(vec![pair(
                    "squares",
                    Expr::sum(vec![
                        Expr::prod(vec![k(t.mul(&t)), Expr::square(f21(a.clone(), a.neg().add_i(-ni), h.clone(), Arg::Z))]),
                        Expr::prod(vec![k(u.mul(&u).scale_i(4)), z_pow(1), Expr::square(f21(a.add(&h), h.sub(&a).add_i(-ni), pv(3, 2), Arg::Z))]),
                    ]),
                    Expr::prod(vec![
                        k(w.mul(&w)),
                        pfq(
                            vec![a.scale_i(2), a.scale_i(-2).add_i(-2 * ni), ParamValue::int(-ni)],
                            vec![h.add_i(-ni), ParamValue::int(-2 * ni)],
                            Arg::OneMinusZ,
                        ),
                    ]),
                )])
            },
        ),
        case(
            "m0-pfaff",
            "(a+1/2)_n^2 2F1(a,a+n+1/2;1/2;z)^2 - 4 z (a)_{n+1}^2 2F1(a+1/2,a+n+1;3/2;z)^2 = (1/2)_n^2 (1-z)^(-2a) 3F2(2a,-2a-2n,-n;1/2-n,-2n;1/(1-z))",
            Mode::Exact,
            &["terminating", "dihedral", "transformation"],
            &[A_WIDE, N],
            unit_interval(),
            &[("a", 1, 3), ("n", 1, 1)],
            |_| Ok(()),
            |i| {
                let (a, n) = (get(i, "a"), uint(i, "n"));
                let ni = n as i64;
                let h = half();
                let t = ph(&a.add(&h), n);
                let u = ph(&a, n + 1);
                let w = ph(&h, n);
                Ok(vec![pair(
                    "squares",
                    Expr::sum(vec![
                        Expr::prod(vec![k(t.mul(&t)), Expr::square(f21(a.clone(), a.add_i(ni).add(&h), h.clone(), Arg::Z))]),
                        Expr::neg(Expr::prod(vec![k(u.mul(&u).scale_i(4)), z_pow(1), Expr::square(f21(a.add(&h), a.add_i(ni + 1), pv(3, 2), Arg::Z))])),
                    ]),
                    Expr::prod(vec![
                        k(w.mul(&w)),
                        Expr::pow(Arg::OneMinusZ, a.scale_i(-2)),
                        pfq(
                            vec![a.scale_i(2), a.scale_i(-2).add_i(-2 * ni), ParamValue::int(-ni)],
                            vec![h.add_i(-ni), ParamValue::int(-2 * ni)],
                            Arg::InvOneMinusZ,
                        ),
                    ]),
                )])
            },
        ),
        case(
            "gamma-eval-z0",
            "F2111(2a; 2b; c-1/2, a+b-c+1/2; a+b+1/2; 2c-1, 2a+2b-2c+1 | 0, 1) = G(1/2)G(a+b+1/2)G(1-c)G(1+a+b-c) / (G(a+1/2)G(b+1/2)G(1+a-c)G(1+b-c)), Re(1-c) > 0",
            Mode::Numeric,
            &["gamma"],
            &[A, B, C_BELOW_1],
            Domain::Fixed { points: vec![Point::XY(ParamValue::int(0), ParamValue::int(1))] },
            &[("a", 1, 5), ("b", 1, 7), ("c", 1, 3)],
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                positive_re("1-c", &ParamValue::int(1).sub(&c))?;
                gamma_forbid(&a, &b, &c)
            },
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                let h = half();
                let ab = a.add(&b);
                let one = ParamValue::int(1);
                Ok(vec![pair(
                    "value",
                    Expr::kdf(spap0_spec(&a, &b, &c), Arg::X, Arg::Y),
                    Expr::GammaRatio {
                        num: vec![h.clone(), ab.add(&h), one.sub(&c), one.add(&ab).sub(&c)],
                        den: vec![a.add(&h), b.add(&h), one.add(&a).sub(&c), one.add(&b).sub(&c)],
                    },
                )])
            },
        ),
        case(
            "gamma-eval-z1",
            "F2111(2a; 2b; c-1/2, a+b-c+1/2; a+b+1/2; 2c-1, 2a+2b-2c+1 | 1, 0) = G(1/2)G(a+b+1/2)G(c)G(c-a-b) / (G(a+1/2)G(b+1/2)G(c-a)G(c-b)), Re(c-a-b) > 0",
            Mode::Numeric,
            &["gamma"],
            &[A, B, C],
            Domain::Fixed { points: vec![Point::XY(ParamValue::int(1), ParamValue::int(0))] },
            &[("a", 1, 5), ("b", 1, 7), ("c", 4, 3)],
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                positive_re("c-a-b", &c.sub(&a).sub(&b))?;
                gamma_forbid(&a, &b, &c)
            },
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                let h = half();
                let ab = a.add(&b);
                Ok(vec![pair(
                    "value",
                    Expr::kdf(spap0_spec(&a, &b, &c), Arg::X, Arg::Y),
                    Expr::GammaRatio {
                        num: vec![h.clone(), ab.add(&h), c.clone(), c.sub(&ab)],
                        den: vec![a.add(&h), b.add(&h), c.sub(&a), c.sub(&b)],
                    },
                )])
            },
        ),
        case(
            "bailey",
            "F4(a; b; c, a+b-c+1 | x(1-y), y(1-x)) = 2F1(a,b;c;x) 2F1(a,b;a+b-c+1;y)",
            Mode::Numeric,
            &["appell"],
            &[A, B, C],
            Domain::Fixed { points: vec![Point::XY(pv(1, 5), pv(3, 10)), Point::XY(pv(1, 10), pv(1, 4))] },
            &[("a", 1, 5), ("b", 1, 7), ("c", 1, 3)],
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                forbid(&[("c", c.clone()), ("a+b-c+1", a.add(&b).sub(&c).add_i(1))])
            },
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                let c2 = a.add(&b).sub(&c).add_i(1);
                Ok(vec![pair(
                    "product",
                    Expr::kdf(f4(a.clone(), b.clone(), c.clone(), c2.clone()), Arg::XOneMinusY, Arg::YOneMinusX),
                    Expr::prod(vec![f21(a.clone(), b.clone(), c, Arg::X), f21(a, b, c2, Arg::Y)]),
                )])
            },
        ),
        case(
            "bailey-diagonal",
            "F4(a; b; c, a+b-c+1 | x^2, (1-x)^2) = 2F1(a,b;c;x) 2F1(a,b;a+b-c+1;1-x)",
            Mode::Numeric,
            &["appell", "edge"],
            &[A, B, C],
            Domain::Fixed { points: vec![Point::Z(pv(3, 10))] },
            &[("a", 1, 5), ("b", 1, 7), ("c", 1, 3)],
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                forbid(&[("c", c.clone()), ("a+b-c+1", a.add(&b).sub(&c).add_i(1))])
            },
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                let c2 = a.add(&b).sub(&c).add_i(1);
                Ok(vec![pair(
                    "product",
                    Expr::kdf(f4(a.clone(), b.clone(), c.clone(), c2.clone()), Arg::ZSquared, Arg::OneMinusZSquared),
                    Expr::prod(vec![f21(a.clone(), b.clone(), c, Arg::Z), f21(a, b, c2, Arg::OneMinusZ)]),
                )])
            },
        ),
        case(
            "f4-connection",
            "2F1(a,b;c;x)^2 = G(c)G(c-a-b)/(G(c-a)G(c-b)) F4(a; b; c, a+b-c+1 | x^2, (1-x)^2) + G(c)G(a+b-c)/(G(a)G(b)) (1-x)^(2c-2a-2b) F4(c-a; c-b; c, c-a-b+1 | x^2, (1-x)^2), Re c < 1, Re(c-a-b) > 0",
            Mode::Numeric,
            &["appell", "edge", "gamma"],
            &[A, B, C_BELOW_1],
            Domain::Fixed { points: vec![Point::Z(pv(3, 10)), Point::Z(pv(3, 5))] },
            &[("a", -1, 5), ("b", 1, 7), ("c", 1, 3)],
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                positive_re("1-c", &ParamValue::int(1).sub(&c))?;
                let e = c.sub(&a).sub(&b);
                positive_re("c-a-b", &e)?;
                forbid(&[
                    ("c", c.clone()),
                    ("c-a-b", e.clone()),
                    ("a+b-c", e.neg()),
                    ("a", a.clone()),
                    ("b", b.clone()),
                    ("c-a", c.sub(&a)),
                    ("c-b", c.sub(&b)),
                    ("a+b-c+1", e.neg().add_i(1)),
                    ("c-a-b+1", e.add_i(1)),
                ])
            },
            |i| {
                let (a, b, c) = (get(i, "a"), get(i, "b"), get(i, "c"));
                let e = c.sub(&a).sub(&b);
                Ok(vec![pair(
                    "connection",
                    Expr::square(f21(a.clone(), b.clone(), c.clone(), Arg::Z)),
                    Expr::sum(vec![
                        Expr::prod(vec![
                            Expr::GammaRatio { num: vec![c.clone(), e.clone()], den: vec![c.sub(&a), c.sub(&b)] },
                            Expr::kdf(f4(a.clone(), b.clone(), c.clone(), e.neg().add_i(1)), Arg::ZSquared, Arg::OneMinusZSquared),
                        ]),
                        Expr::prod(vec![
                            Expr::GammaRatio { num: vec![c.clone(), e.neg()], den: vec![a.clone(), b.clone()] },
                            Expr::pow(Arg::OneMinusZ, e.scale_i(2)),
                            Expr::kdf(f4(c.sub(&a), c.sub(&b), c.clone(), e.add_i(1)), Arg::ZSquared, Arg::OneMinusZSquared),
                        ]),
                    ]),
                )])
            },
        ),
        case(
            "altern2-limit",
            "K0 2F1(a,-a-m-n;1/2-m;z)^2 = F2111(2a; -2a-2m-2n; -m, -n; 1/2-m-n; -2m, -2n | z, 1-z) + K1 z^(2m+1) F2111(2a+2m+1; 1-2a-2n; m+1, -n; 3/2+m-n; 2m+2, -2n | z, 1-z)",
            Mode::Exact,
            &["terminating", "dihedral", "limit"],
            &[A_WIDE, M, N],
            unit_interval(),
            &[("a", 1, 3), ("m", 1, 1), ("n", 1, 1)],
            |_| Ok(()),
            |i| {
                let (a, m, n) = (get(i, "a"), uint(i, "m"), uint(i, "n"));
                let (mi, ni) = (m as i64, n as i64);
                let h = half();
                let k0 = quotient(&[ph(&a.add(&h), n), ph(&h.sub(&a).add_i(-mi - ni), n)], &[ph(&h, n), ph(&h.add_i(-mi - ni), n)])?;
                let sign = if m % 2 == 0 { 1 } else { -1 };
                let two_pow = int_pv(Integer::from(Integer::u_pow_u(2, 2 * m as u32 + 1)));
                let k1 = quotient(
                    &[
                        ph(&a.scale_i(2), 2 * m + 1),
                        ph(&a.scale_i(-2).add_i(-2 * mi - 2 * ni), 2 * m + 1),
                        int_pv(factorial(m)),
                        ParamValue::int(sign),
                    ],
                    &[ph(&h.add_i(-mi - ni), 2 * m + 1), int_pv(factorial(2 * m + 1)), two_pow, ph(&h, m)],
                )?;
                let second = KdFSpec::f2111(
                    a.scale_i(2).add_i(2 * mi + 1),
                    ParamValue::int(1).sub(&a.scale_i(2)).add_i(-2 * ni),
                    ParamValue::int(mi + 1),
                    ParamValue::int(-ni),
                    pv(3, 2).add_i(mi - ni),
                    ParamValue::int(2 * mi + 2),
                    ParamValue::int(-2 * ni),
                );
                Ok(vec![pair(
                    "limit",
                    Expr::prod(vec![k(k0), Expr::square(f21(a.clone(), a.neg().add_i(-mi - ni), h.add_i(-mi), Arg::Z))]),
                    Expr::sum(vec![
                        Expr::kdf(dihedral_spec(&a, m, n), Arg::Z, Arg::OneMinusZ),
                        Expr::prod(vec![k(k1), z_pow(2 * m + 1), Expr::kdf(second, Arg::Z, Arg::OneMinusZ)]),
                    ]),
                )])
            },
        ),
        case(
            "regroup",
            "Pochhammer regroupings used for the dihedral sum, and the epsilon limit of (e-k)_{2k+1}/(2e-2k)_{2k+1}",
            Mode::Exact,
            &["terminating", "pochhammer", "limit"],
            &[A_WIDE, M6, N6],
            Domain::None,
            &[("a", 1, 3), ("m", 2, 1), ("n", 1, 1)],
            |_| Ok(()),
            |i| {
                let (a, m, n) = (get(i, "a"), uint(i, "m"), uint(i, "n"));
                let (mi, ni) = (m as i64, n as i64);
                let h = half();
                let base = h.add_i(-mi - ni);
                let two = |e: usize| int_pv(Integer::from(Integer::u_pow_u(2, e as u32)));
                let sign = |e: usize| ParamValue::int(if e % 2 == 0 { 1 } else { -1 });
                let limit = quotient(&[sign(m), int_pv(factorial(m))], &[two(2 * m + 1), ph(&h, m)])?;
                Ok(vec![
                    pair(
                        "(1/2-m-n)_{2m+1} (m-n+3/2)_n = (1/2-m-n)_{2m+n+1}",
                        k(ph(&base, 2 * m + 1).mul(&ph(&pv(3, 2).add_i(mi - ni), n))),
                        k(ph(&base, 2 * m + n + 1)),
                    ),
                    pair(
                        "(1/2-m-n)_{2m+n+1} = (-1)^(m+n) (1/2)_{m+n} (1/2)_{m+1}",
                        k(ph(&base, 2 * m + n + 1)),
                        k(product(&[sign(m + n), ph(&h, m + n), ph(&h, m + 1)])),
                    ),
                    pair(
                        "(2a)_{2m+1} = 2^(2m+1) (a)_{m+1} (a+1/2)_m",
                        k(ph(&a.scale_i(2), 2 * m + 1)),
                        k(product(&[two(2 * m + 1), ph(&a, m + 1), ph(&a.add(&h), m)])),
                    ),
                    pair("(a)_{m+1} (a+m+1)_n = (a)_{m+n+1}", k(ph(&a, m + 1).mul(&ph(&a.add_i(mi + 1), n))), k(ph(&a, m + n + 1))),
                    pair(
                        "(2m+1)! = 2^(2m+1) m! (1/2)_{m+1}",
                        k(int_pv(factorial(2 * m + 1))),
                        k(product(&[two(2 * m + 1), int_pv(factorial(m)), ph(&h, m + 1)])),
                    ),
                    pair("limit (e-m)_{2m+1}/(2e-2m)_{2m+1} as e -> 0", k(ParamValue::Exact(pochhammer_ratio_limit(m))), k(limit)),
                ])
            },
        ),
        case(
            "pochhammer-identity",
            "(a+1/2)_m (a)_{m+1} / ((1/2)_m (1/2)_{m+1}) = 2^(2m) (m!)^2 (2a)_{2m+1} / ((2m)! (2m+1)!)",
            Mode::Exact,
            &["terminating", "pochhammer"],
            &[A_WIDE, M6],
            Domain::None,
            &[("a", 1, 3), ("m", 2, 1)],
            |_| Ok(()),
            |i| {
                let (a, m) = (get(i, "a"), uint(i, "m"));
                let h = half();
                let lhs = quotient(&[ph(&a.add(&h), m), ph(&a, m + 1)], &[ph(&h, m), ph(&h, m + 1)])?;
                let fm = int_pv(factorial(m));
                let rhs = quotient(
                    &[int_pv(Integer::from(Integer::u_pow_u(4, m as u32))), fm.clone(), fm, ph(&a.scale_i(2), 2 * m + 1)],
                    &[int_pv(factorial(2 * m)), int_pv(factorial(2 * m + 1))],
                )?;
                Ok(vec![pair("constants", k(lhs), k(rhs))])
            },
        ),
        case(
            "reversal",
            "terminating F2111(x, y) = K x^m y^n F1220(1/x, 1/y) with the summation order reversed in both directions",
            Mode::Exact,
            &["terminating", "dihedral"],
            &[A_WIDE, M, N],
            Domain::Fixed {
                points: vec![Point::XY(pv(1, 3), pv(2, 5)), Point::XY(pv(-1, 2), pv(3, 7)), Point::XY(pv(7, 4), pv(-5, 3))],
            },
            &[("a", 1, 3), ("m", 2, 1), ("n", 1, 1)],
            |i| {
                let (a, m, n) = (get(i, "a"), uint(i, "m"), uint(i, "n"));
                let b = a.scale_i(-2).add_i(-2 * (m + n) as i64);
                if ph(&a.scale_i(2), m + n).is_zero() || ph(&b, m + n).is_zero() {
                    return Err("the reversed sum needs (2a)_(m+n) (-2a-2m-2n)_(m+n) != 0".into());
                }
                Ok(())
            },
            |i| {
                let (a, m, n) = (get(i, "a"), uint(i, "m"), uint(i, "n"));
                let spec = dihedral_spec(&a, m, n);
                let (constant, rev) = reverse_summation(&spec)?;
                Ok(vec![pair(
                    "reversed",
                    Expr::kdf(spec, Arg::X, Arg::Y),
                    Expr::prod(vec![
                        k(ParamValue::Exact(constant)),
                        Expr::pow(Arg::X, ParamValue::int(m as i64)),
                        Expr::pow(Arg::Y, ParamValue::int(n as i64)),
                        Expr::kdf(rev, Arg::InvX, Arg::InvY),
                    ]),
                )])
            },
        ),
    ]
}

fn gamma_forbid(a: &ParamValue, b: &ParamValue, c: &ParamValue) -> Result<(), String> {
    let h = half();
    let ab = a.add(b);
    let one = ParamValue::int(1);
    forbid(&[
        ("a+b+1/2", ab.add(&h)),
        ("2c-1", c.scale_i(2).add_i(-1)),
        ("2a+2b-2c+1", ab.sub(c).scale_i(2).add_i(1)),
        ("a+1/2", a.add(&h)),
        ("b+1/2", b.add(&h)),
        ("1-c", one.sub(c)),
        ("1+a+b-c", one.add(&ab).sub(c)),
        ("1+a-c", one.add(a).sub(c)),
        ("1+b-c", one.add(b).sub(c)),
        ("c", c.clone()),
        ("c-a-b", c.sub(&ab)),
        ("c-a", c.sub(a)),
        ("c-b", c.sub(b)),
    ])
}

pub fn find(id: &str) -> Result<IdentityCase, IdError> {
    catalog().into_iter().find(|c| c.id == id).ok_or_else(|| IdError::UnknownCase(id.to_string()))
}

