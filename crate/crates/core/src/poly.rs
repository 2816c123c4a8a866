//! Dense univariate polynomials over `Z` and `Q`, constant term first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{abs_max, gcd_all, lcm_denoms, rat_int, Rational};
use crate::error::{Error, Result};

/// Polynomial with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly(Vec<Rational>);

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly(vec![Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        QPoly::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        QPoly::new(v)
    }

    pub fn x() -> Self {
        QPoly(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        QPoly::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &Rational) -> QPoly {
        QPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Product truncated to degree `< n`.
    pub fn mul_trunc(&self, o: &QPoly, n: usize) -> QPoly {
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.0.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> QPoly {
        let mut acc = QPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; fails on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> Result<(QPoly, QPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.leading().recip();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((QPoly::new(q), QPoly::new(r)))
    }

    pub fn rem(&self, d: &QPoly) -> Result<QPoly> {
        Ok(self.div_rem(d)?.1)
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·o = g`, `g` monic.
    pub fn xgcd(&self, o: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &QPoly) -> QPoly {
        self.0.iter().rev().fold(QPoly::zero(), |acc, c| acc.mul(g).add(&QPoly::constant(c.clone())))
    }

    /// Squarefree part `self / gcd(self, self')`, monic.
    pub fn squarefree_part(&self) -> QPoly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("nonzero gcd").0.monic()
    }

    /// Resultant via the Euclidean algorithm over `Q`.
    pub fn resultant(&self, o: &QPoly) -> Rational {
        let (mut a, mut b) = (self.clone(), o.clone());
        let mut acc = Rational::one();
        loop {
            let (da, db) = match (a.degree(), b.degree()) {
                (None, _) | (_, None) => return Rational::zero(),
                (Some(x), Some(y)) => (x, y),
            };
            if db == 0 {
                return acc * num_traits::pow(b.leading(), da);
            }
            let r = a.rem(&b).expect("nonzero divisor");
            let dr = match r.degree() {
                None => return Rational::zero(),
                Some(d) => d,
            };
            // Res(a, b) = (-1)^{da db} lc(b)^{da - dr} Res(b, r)
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            acc *= num_traits::pow(b.leading(), da - dr);
            a = b;
            b = r;
        }
    }

    /// Primitive integer polynomial proportional to `self`, positive lead.
    pub fn to_primitive_int(&self) -> IntPolynomial {
        let l = lcm_denoms(self.0.iter());
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * rat_int(l.clone())).to_integer()).collect();
        IntPolynomial::primitive(ints)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Integer polynomial, constant term first, no trailing zeros.
///
/// Minimal polynomials are kept primitive with a positive leading
/// coefficient via [`IntPolynomial::primitive`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|x| x.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Divides out the content and normalizes the sign of the lead.
    pub fn primitive(coeffs: Vec<BigInt>) -> Self {
        let p = Self::new(coeffs);
        if p.coeffs.is_empty() {
            return p;
        }
        let mut g = gcd_all(p.coeffs.iter());
        if p.coeffs.last().unwrap().is_negative() {
            g = -g;
        }
        Self::new(p.coeffs.iter().map(|c| c / &g).collect())
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    /// Naive height: largest absolute coefficient.
    pub fn height(&self) -> BigInt {
        abs_max(self.coeffs.iter())
    }

    pub fn content(&self) -> BigInt {
        gcd_all(self.coeffs.iter())
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.content().is_one() && self.leading().is_positive()
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| rat_int(c.clone())).collect())
    }

    pub fn eval_rat(&self, x: &Rational) -> Rational {
        self.to_qpoly().eval(x)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, o: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    /// Rational root of a degree-1 polynomial.
    pub fn linear_root(&self) -> Option<Rational> {
        if self.degree() != 1 {
            return None;
        }
        Some(Rational::new(-self.coeffs[0].clone(), self.coeffs[1].clone()))
    }

    /// Irreducibility over `Q` for a primitive polynomial: rational-root
    /// test, a modular shortcut, then Kronecker's interpolation search.
    pub fn is_irreducible(&self) -> bool {
        let d = self.degree();
        if self.is_zero() || d == 0 {
            return false;
        }
        if !self.content().is_one() {
            return false;
        }
        if d == 1 {
            return true;
        }
        if self.coeffs[0].is_zero() {
            return false;
        }
        if self.has_rational_root() {
            return false;
        }
        if d <= 3 {
            return true;
        }
        if self.irreducible_mod_small_prime() {
            return true;
        }
        for k in 2..=d / 2 {
            if self.kronecker_factor(k).is_some() {
                return false;
            }
        }
        true
    }

    fn has_rational_root(&self) -> bool {
        let a0 = self.coeffs[0].abs();
        let an = self.leading().abs();
        let num_divs = divisors(&a0);
        let den_divs = divisors(&an);
        for a in &num_divs {
            for b in &den_divs {
                if !a.gcd(b).is_one() {
                    continue;
                }
                for s in [1i64, -1] {
                    let r = Rational::new(a * s, b.clone());
                    if self.eval_rat(&r).is_zero() {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn irreducible_mod_small_prime(&self) -> bool {
        for &l in &[3u64, 5, 7, 11, 13, 17, 19, 23] {
            if (self.leading() % BigInt::from(l)).is_zero() {
                continue;
            }
            let f = crate::fp::FpPoly::from_ints(self.coeffs(), l);
            if f.is_irreducible() {
                return true;
            }
        }
        false
    }

    /// Searches for an integer factor of degree exactly `k` by
    /// interpolating divisor choices at `k+1` integer points.
    fn kronecker_factor(&self, k: usize) -> Option<IntPolynomial> {
        let mut points = Vec::new();
        let mut x = 0i64;
        while points.len() < k + 1 {
            let v = self.eval_int(&BigInt::from(x));
            if v.is_zero() {
                return Some(IntPolynomial::from_i64(&[-x, 1]));
            }
            points.push((x, v));
            x = if x <= 0 { -x + 1 } else { -x };
        }
        let choices: Vec<Vec<BigInt>> = points
            .iter()
            .enumerate()
            .map(|(i, (_, v))| {
                let ds = divisors(&v.abs());
                if i == 0 {
                    ds
                } else {
                    ds.iter().flat_map(|d| [d.clone(), -d.clone()]).collect()
                }
            })
            .collect();
        let mut idx = vec![0usize; k + 1];
        let target = self.to_qpoly();
        loop {
            let vals: Vec<(Rational, Rational)> = points
                .iter()
                .zip(&idx)
                .enumerate()
                .map(|(i, ((x, _), &j))| (Rational::from_integer((*x).into()), rat_int(choices[i][j].clone())))
                .collect();
            let cand = lagrange(&vals);
            if cand.degree() == Some(k) && cand.coeffs().iter().all(|c| c.is_integer()) {
                let (_, r) = target.div_rem(&cand).expect("nonzero");
                if r.is_zero() {
                    return Some(cand.to_primitive_int());
                }
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return None;
                }
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// `self(x + c)` for an integer shift `c`.
    pub fn shift(&self, c: &BigInt) -> IntPolynomial {
        let q = self.to_qpoly().compose(&QPoly::new(vec![rat_int(c.clone()), Rational::one()]));
        IntPolynomial::new(q.coeffs().iter().map(|x| x.to_integer()).collect())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Positive divisors of a positive integer, by trial division.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Lagrange interpolation through the given points.
pub fn lagrange(pts: &[(Rational, Rational)]) -> QPoly {
    let mut acc = QPoly::zero();
    for (i, (xi, yi)) in pts.iter().enumerate() {
        let mut term = QPoly::constant(yi.clone());
        for (j, (xj, _)) in pts.iter().enumerate() {
            if i != j {
                let lin = QPoly::new(vec![-xj.clone(), Rational::one()]);
                term = term.mul(&lin).scale(&(xi - xj).recip());
            }
        }
        acc = acc.add(&term);
    }
    acc
}
