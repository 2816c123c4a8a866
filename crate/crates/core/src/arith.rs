//! Small exact-integer helpers shared across modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// `p^e` for a non-negative exponent.
pub fn pow_u(p: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `p^e` as a rational, allowing negative exponents.
pub fn pow_rat(p: u64, e: i64) -> Rational {
    if e >= 0 {
        rat_int(pow_u(p, e as u64))
    } else {
        Rational::new(BigInt::one(), pow_u(p, e.unsigned_abs()))
    }
}

/// Splits a non-zero integer as `p^v * rest` with `p ∤ rest`.
pub fn split_p(n: &BigInt, p: u64) -> (u64, BigInt) {
    assert!(!n.is_zero(), "split_p of zero");
    let pb = BigInt::from(p);
    let mut v = 0u64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

/// p-adic valuation of a non-zero integer.
pub fn vp_int(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        None
    } else {
        Some(split_p(n, p).0)
    }
}

/// p-adic valuation of a non-zero rational.
pub fn vp_rat(q: &Rational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let a = split_p(q.numer(), p).0 as i64;
    let b = split_p(q.denom(), p).0 as i64;
    Some(a - b)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Integer representative in `[0, p^k)` of the p-integral rational `q`
/// modulo `p^k`. Panics when `q` is not p-integral.
pub fn rat_mod_pk(q: &Rational, p: u64, k: u64) -> BigInt {
    let m = pow_u(p, k);
    let inv = mod_inverse(&q.denom().mod_floor(&m), &m).expect("denominator divisible by p");
    (q.numer() * inv).mod_floor(&m)
}

/// Symmetric representative of `n` modulo `m` (in `(-m/2, m/2]`).
pub fn symmetric_mod(n: &BigInt, m: &BigInt) -> BigInt {
    let r = n.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

pub fn lcm_denoms<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |acc, n| acc.gcd(n))
}

pub fn floor_rat(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

pub fn ceil_rat(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

pub fn abs_max<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().map(|c| c.abs()).max().unwrap_or_default()
}

/// `⌊log_p n⌋` for a positive integer.
pub fn ilog(n: &BigInt, p: u64) -> i64 {
    assert!(n.is_positive(), "ilog of a non-positive integer");
    let est = ((n.bits() - 1) as f64 / (p as f64).log2()).floor() as i64;
    let mut k = (est - 1).max(0);
    while pow_u(p, (k + 1) as u64) <= *n {
        k += 1;
    }
    while k > 0 && pow_u(p, k as u64) > *n {
        k -= 1;
    }
    k
}

/// `⌈ln x⌉` for a positive integer `x`: the least `k ≥ 0` with `e^k ≥ x`,
/// decided with rational brackets of `e` from its factorial series.
pub fn ceil_ln(x: &BigInt) -> u64 {
    assert!(x.is_positive(), "ceil_ln of a non-positive integer");
    let x = rat_int(x.clone());
    let mut k = 0u64;
    loop {
        if ge_e_pow(k, &x) {
            return k;
        }
        k += 1;
    }
}

/// Whether `e^k ≥ x`, refining the bracket of `e` until decided.
fn ge_e_pow(k: u64, x: &Rational) -> bool {
    if k == 0 {
        return x <= &Rational::one();
    }
    let mut terms = 12usize;
    loop {
        let (lo, hi) = e_bracket(terms);
        if num_traits::pow(lo, k as usize) >= *x {
            return true;
        }
        if num_traits::pow(hi, k as usize) < *x {
            return false;
        }
        terms *= 2;
    }
}

/// `lo < e < hi` from `Σ_{i≤n} 1/i!` and its remainder bound `1/(n!·n)`.
fn e_bracket(n: usize) -> (Rational, Rational) {
    let mut sum = Rational::zero();
    let mut fact = BigInt::one();
    for i in 0..=n {
        if i > 0 {
            fact *= i;
        }
        sum += Rational::new(BigInt::one(), fact.clone());
    }
    let rem = Rational::new(BigInt::one(), fact * n);
    (sum.clone(), sum + rem)
}

/// Compares `p^x` with the positive rational `r`, where `x` is an
/// arbitrary rational exponent. Uses only integer arithmetic:
/// `p^(a/b)` vs `r` is decided by `p^a` vs `r^b`.
pub fn cmp_ppow(p: u64, x: &Rational, r: &Rational) -> std::cmp::Ordering {
    assert!(r.is_positive(), "cmp_ppow requires r > 0");
    // log_p r lies strictly between lo and hi
    let a = ilog(r.numer(), p);
    let c = ilog(r.denom(), p);
    let lo = rat(a - c - 1, 1);
    let hi = rat(a + 1 - c, 1);
    if x >= &hi {
        return std::cmp::Ordering::Greater;
    }
    if x <= &lo {
        return std::cmp::Ordering::Less;
    }
    let b = x.denom().clone();
    let b_u: usize = b.clone().try_into().expect("exponent denominator too large");
    let a = x.numer().clone();
    let a_i: i64 = a.try_into().expect("exponent numerator too large");
    let lhs = pow_rat(p, a_i);
    let rhs = num_traits::pow(r.clone(), b_u);
    lhs.cmp(&rhs)
}

/// Compares `A^(1/ra) * p^xa` with `B^(1/rb) * p^xb` for positive
/// rationals `A`, `B`, positive integer roots and rational exponents.
pub fn cmp_radical(
    p: u64,
    a: &Rational,
    ra: u32,
    xa: &Rational,
    b: &Rational,
    rb: u32,
    xb: &Rational,
) -> std::cmp::Ordering {
    // Raise both sides to L = lcm(ra, rb); then compare A^(L/ra) * p^(L xa)
    // against B^(L/rb) * p^(L xb), i.e. A^(L/ra) / B^(L/rb) vs p^(L (xb - xa)).
    let l = (ra as u64).lcm(&(rb as u64));
    let lhs = num_traits::pow(a.clone(), (l / ra as u64) as usize);
    let rhs = num_traits::pow(b.clone(), (l / rb as u64) as usize);
    let expo = (xb - xa) * rat(l as i64, 1);
    // lhs/rhs vs p^expo  <=>  compare p^expo with lhs/rhs reversed
    cmp_ppow(p, &expo, &(lhs / rhs)).reverse()
}
