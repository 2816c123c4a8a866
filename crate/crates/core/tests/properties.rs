use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use padic_exceptional::algebraic::SetMember;
use padic_exceptional::arith::rat;
use padic_exceptional::constructions::{build_g, build_h, ExceptionalSetSpec, PolyEnumerator, SetMode, Theorem1Config, Theorem1State};
use padic_exceptional::newton::newton_polygon;
use padic_exceptional::series::TruncatedSeries;
use padic_exceptional::{vp_rational, IntPolynomial, PAdicScalar, Prime, Radius, Rational, Valuation};

fn count_p(mut n: i128, p: i128) -> i64 {
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

fn oracle_val(num: i64, den: i64, p: u64) -> Option<i64> {
    if num == 0 {
        return None;
    }
    Some(count_p(num as i128, p as i128) - count_p(den as i128, p as i128))
}

fn val(q: &Rational, p: u64) -> Valuation {
    vp_rational(q, p).unwrap()
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11])
}

fn ratio() -> impl Strategy<Value = (i64, i64)> {
    (-100_000i64..100_000, 1i64..100_000)
}

proptest! {
    #[test]
    fn valuation_matches_factor_count(p in prime(), (n, d) in ratio()) {
        let got = val(&rat(n, d), p);
        match oracle_val(n, d, p) {
            None => prop_assert!(got.is_infinite()),
            Some(v) => prop_assert_eq!(got, Valuation::int(v)),
        }
    }

    #[test]
    fn ultrametric_and_product(p in prime(), (a, b) in ratio(), (c, d) in ratio()) {
        let x = rat(a, b);
        let y = rat(c, d);
        let (vx, vy) = (val(&x, p), val(&y, p));
        prop_assert_eq!(val(&(&x * &y), p), &vx + &vy);
        let vs = val(&(&x + &y), p);
        prop_assert!(vs >= vx.clone().min(vy.clone()));
        if vx != vy {
            prop_assert_eq!(vs, vx.min(vy));
        }
    }

    #[test]
    fn scalar_arithmetic_agrees_with_rationals(p in prime(), (a, b) in ratio(), (c, d) in ratio()) {
        let pr = Prime::new(p).unwrap();
        let (x, y) = (rat(a, b), rat(c, d));
        let (sx, sy) = (PAdicScalar::from_rational(&x, pr), PAdicScalar::from_rational(&y, pr));
        prop_assert_eq!(sx.add(&sy).unwrap().to_rational(), Some(&x + &y));
        prop_assert_eq!(sx.mul(&sy).unwrap().to_rational(), Some(&x * &y));
        if !y.is_zero() {
            prop_assert_eq!(sy.inv().unwrap().to_rational(), Some(y.recip()));
        }
    }

    #[test]
    fn newton_polygon_of_split_product(p in prop::sample::select(vec![2u64, 5, 7]), roots in prop::collection::vec((0u32..4, 1i64..50), 1..5)) {
        let mut poly = IntPolynomial::from_i64(&[1]);
        let mut want = Vec::new();
        for (k, u) in &roots {
            let u = if u % p as i64 == 0 { u + 1 } else { *u };
            let r = BigInt::from(p).pow(*k) * u;
            poly = poly.mul(&IntPolynomial::new(vec![-r, BigInt::one()]));
            want.push(*k as i64);
        }
        let np = newton_polygon(&poly, Prime::new(p).unwrap()).unwrap();
        let mut got: Vec<i64> = Vec::new();
        for (v, mult) in np.root_valuations() {
            let v = v.finite().unwrap().clone();
            prop_assert!(v.is_integer());
            for _ in 0..mult {
                got.push(v.to_integer().try_into().unwrap());
            }
        }
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn dump_round_trip(p in prime(), cs in prop::collection::vec((-50i64..50, 1i64..50, -3i64..4), 1..30)) {
        let pr = Prime::new(p).unwrap();
        let coeffs: Vec<Rational> = cs.iter().map(|(n, d, e)| rat(*n, *d) * padic_exceptional::arith::pow_rat(p, *e)).collect();
        let s = TruncatedSeries::from_rationals(pr, &coeffs, None).unwrap();
        let text = s.dump();
        let back = TruncatedSeries::parse_dump(pr, &text).unwrap();
        prop_assert_eq!(back.dump(), text);
        for (i, q) in coeffs.iter().enumerate() {
            prop_assert_eq!(back.rational_coeff(i).unwrap(), q.clone());
        }
    }
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Brute-force list of primitive irreducible polynomials of degree ≤ 2,
/// sorted by the canonical key.
fn brute_force_deg2(bound: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<(i64, usize, i64, Vec<i64>)> = Vec::new();
    for deg in 1..=2usize {
        let h = bound;
        let ranges = vec![-h..=h; deg + 1];
        let mut tuples: Vec<Vec<i64>> = vec![vec![]];
        for r in ranges {
            tuples = tuples.into_iter().flat_map(|t| r.clone().map(move |x| [t.clone(), vec![x]].concat())).collect();
        }
        for t in tuples {
            // t is leading-first
            if t[0] <= 0 {
                continue;
            }
            let height = t.iter().map(|x| x.abs()).max().unwrap();
            let g = t.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
            if g != 1 {
                continue;
            }
            if deg == 2 && (t[2] == 0 || is_square(&BigInt::from(t[1] * t[1] - 4 * t[0] * t[2]))) {
                continue;
            }
            out.push((height.max(deg as i64), deg, height, t));
        }
    }
    out.sort();
    out.into_iter().map(|x| x.3).collect()
}

#[test]
fn enumeration_matches_brute_force_for_quadratics() {
    let bound = 30;
    let want = brute_force_deg2(bound);
    let got: Vec<Vec<i64>> = PolyEnumerator::with_max_degree(Prime::new(5).unwrap(), Radius::Infinity, 2)
        .take(want.len())
        .map(|poly| poly.coeffs().iter().rev().map(|c| c.try_into().unwrap()).collect())
        .collect();
    assert_eq!(got, want);
}

#[test]
fn enumeration_all_degrees_small_bound() {
    // full canonical order up to max(deg, H) = 3
    let mut want: Vec<(i64, usize, i64, Vec<i64>)> = Vec::new();
    for deg in 1..=3usize {
        let mut tuples: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..=deg {
            tuples = tuples.into_iter().flat_map(|t| (-3..=3).map(move |x| [t.clone(), vec![x]].concat())).collect();
        }
        for t in tuples {
            let height = t.iter().map(|x| x.abs()).max().unwrap();
            if t[0] <= 0 || height.max(deg as i64) > 3 || t.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)) != 1 {
                continue;
            }
            // degree ≥ 2 irreducible over Q ⇔ no rational root (deg ≤ 3)
            let lead = t[0];
            let c0 = t[deg];
            let has_root = deg > 1
                && (c0 == 0
                    || (1..=c0.abs()).filter(|a| c0 % a == 0).any(|a| {
                        (1..=lead).filter(|b| lead % b == 0).any(|b| {
                            [a, -a].iter().any(|&a| {
                                let x = rat(a, b);
                                let mut acc = Rational::zero();
                                for c in &t {
                                    acc = acc * &x + rat(*c, 1);
                                }
                                acc.is_zero()
                            })
                        })
                    }));
            if !has_root {
                want.push((height.max(deg as i64), deg, height, t));
            }
        }
    }
    want.sort();
    let got: Vec<Vec<i64>> = PolyEnumerator::new(Prime::new(5).unwrap(), Radius::Infinity)
        .take(want.len())
        .map(|poly| poly.coeffs().iter().rev().map(|c| c.try_into().unwrap()).collect())
        .collect();
    assert_eq!(got, want.into_iter().map(|x| x.3).collect::<Vec<_>>());
}

fn tail_holds(short: &TruncatedSeries, long: &TruncatedSeries, prime: Prime) {
    let rule = short.tail().expect("tail rule");
    let last = short.last_index();
    for w in [rat(0, 1), rat(1, 2), rat(1, 1), rat(3, 1)] {
        let Ok(bound) = rule.bound_at(prime, last, &Valuation::Finite(w.clone())) else { continue };
        for (i, c) in long.coeffs().iter().enumerate().skip(last + 1) {
            let actual = c.valuation().add_scaled(i as i64, &w);
            assert!(actual >= bound, "index {i}, w {w}: {actual} < {bound}");
        }
    }
}

#[test]
fn theorem1_tails_are_sound() {
    let p = Prime::new(5).unwrap();
    for members in [
        vec![SetMember::all_roots(IntPolynomial::z())],
        vec![SetMember::all_roots(IntPolynomial::z()), SetMember::all_roots(IntPolynomial::from_i64(&[-2, 0, 1]))],
    ] {
        let spec = ExceptionalSetSpec::new(p, Radius::Infinity, members, SetMode::FullConjugacy).unwrap();
        let mut st = Theorem1State::new(spec, Theorem1Config::default()).unwrap();
        let long = build_h(&mut st, 4).unwrap();
        for depth in 1..4 {
            let short = build_h(&mut st, depth).unwrap();
            tail_holds(&short.series, &long.series, p);
        }
    }
    for e in [rat(0, 1), rat(1, 2), rat(1, 1), rat(-1, 3)] {
        let rho = Radius::Finite(e);
        let long = build_g(p, &rho, 300).unwrap();
        for last in [10, 40, 120] {
            let short = build_g(p, &rho, last).unwrap();
            tail_holds(&short.series, &long.series, p);
        }
    }
}
