use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebraic::{AlgebraicNumber, SetMember};
use crate::arith::{pow_u, vp_int};
use crate::error::Result;
use crate::padic::{Prime, Radius};
use crate::poly::IntPolynomial;

/// Primitive irreducible integer polynomials in canonical order:
/// by `max(deg, H)`, then degree, then height, then the coefficient tuple
/// read from the leading coefficient down (leading coefficient positive).
pub struct PolyEnumerator {
    prime: Prime,
    rho: Radius,
    bound: u64,
    deg: usize,
    height: u64,
    max_deg: usize,
    tuple: Option<Vec<i64>>,
}

impl PolyEnumerator {
    /// Only polynomials that can have a root in `B(0, ρ)` are produced.
    pub fn new(prime: Prime, rho: Radius) -> Self {
        let mut e = PolyEnumerator { prime, rho, bound: 1, deg: 1, height: 1, max_deg: usize::MAX, tuple: None };
        e.tuple = e.first_tuple();
        e
    }

    /// Same order, restricted to degree at most `d`.
    pub fn with_max_degree(prime: Prime, rho: Radius, d: usize) -> Self {
        let mut e = Self::new(prime, rho);
        e.max_deg = d.max(1);
        e
    }

    /// Smallest `|a_0|` compatible with a root of valuation `> t`.
    fn min_constant(&self) -> Option<BigInt> {
        let t = -self.rho.exponent()?.clone();
        if t.is_negative() {
            return None;
        }
        Some(pow_u(self.prime.get(), t.floor().to_integer().to_u64().unwrap() + 1))
    }

    fn group_possible(&self) -> bool {
        match self.min_constant() {
            Some(m) => BigInt::from(self.height) >= m,
            None => true,
        }
    }

    fn first_tuple(&self) -> Option<Vec<i64>> {
        let h = self.height as i64;
        let mut t = vec![-h; self.deg + 1];
        t[0] = 1;
        Some(t)
    }

    /// Advances `(bound, deg, height)` to the next group that can contain
    /// an acceptable polynomial.
    fn next_group(&mut self) {
        loop {
            let b = self.bound;
            if self.deg as u64 == b {
                if self.height < b {
                    self.height += 1;
                } else {
                    self.bound += 1;
                    self.deg = 1;
                    self.height = self.bound;
                }
            } else {
                self.deg += 1;
                self.height = if self.deg as u64 == b { 1 } else { b };
            }
            if self.deg <= self.max_deg && self.group_possible() {
                break;
            }
        }
        self.tuple = self.first_tuple();
    }

    fn advance_tuple(&mut self) -> bool {
        let h = self.height as i64;
        let t = self.tuple.as_mut().unwrap();
        for i in (0..t.len()).rev() {
            if t[i] < h {
                t[i] += 1;
                for x in t.iter_mut().skip(i + 1) {
                    *x = -h;
                }
                return true;
            }
        }
        false
    }

    fn accept(&self, t: &[i64]) -> Option<IntPolynomial> {
        let h = self.height as i64;
        if t.iter().map(|x| x.abs()).max() != Some(h) {
            return None;
        }
        let coeffs: Vec<BigInt> = t.iter().rev().map(|&x| BigInt::from(x)).collect();
        if coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c)) != BigInt::from(1) {
            return None;
        }
        let a0 = &coeffs[0];
        if a0.is_zero() && self.deg > 1 {
            return None;
        }
        if let (Some(t_ball), false) = (self.rho.exponent().map(|e| -e.clone()), a0.is_zero()) {
            // largest root valuation from the first Newton segment
            let p = self.prime.get();
            let v0 = vp_int(a0, p).unwrap() as i64;
            let best = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| crate::arith::rat(v0 - vp_int(c, p).unwrap() as i64, j as i64))
                .max()
                .unwrap();
            if best <= t_ball {
                return None;
            }
        }
        let poly = IntPolynomial::new(coeffs);
        if self.deg > 1 && !poly.is_irreducible() {
            return None;
        }
        Some(poly)
    }
}

impl Iterator for PolyEnumerator {
    type Item = IntPolynomial;

    fn next(&mut self) -> Option<IntPolynomial> {
        if !self.group_possible() {
            self.next_group();
        }
        loop {
            let t = self.tuple.clone().unwrap();
            let found = self.accept(&t);
            if !self.advance_tuple() {
                self.next_group();
            }
            if found.is_some() {
                return found;
            }
        }
    }
}

/// Algebraic numbers in `B(0, ρ)` outside an excluded set, one per root,
/// in canonical polynomial order and then branch order.
pub struct AlgebraicEnumerator {
    polys: PolyEnumerator,
    prime: Prime,
    rho: Radius,
    exclude: Vec<SetMember>,
    queue: VecDeque<AlgebraicNumber>,
}

impl AlgebraicEnumerator {
    pub fn new(prime: Prime, rho: Radius, exclude: Vec<SetMember>) -> Self {
        AlgebraicEnumerator { polys: PolyEnumerator::new(prime, rho.clone()), prime, rho, exclude, queue: VecDeque::new() }
    }

    fn excluded(&self, b: &AlgebraicNumber, flat: usize) -> bool {
        self.exclude.iter().any(|m| {
            &m.poly == b.minpoly()
                && match &m.branches {
                    None => true,
                    Some(list) => list.contains(&flat),
                }
        })
    }

    /// Next polynomial that contributes at least one number.
    pub fn next_poly(&mut self) -> Result<(IntPolynomial, Vec<AlgebraicNumber>)> {
        loop {
            let poly = self.polys.next().expect("infinite enumeration");
            let branches = AlgebraicNumber::branches(&poly, self.prime)?;
            let keep: Vec<AlgebraicNumber> = branches
                .into_iter()
                .enumerate()
                .filter(|(i, b)| self.rho.contains(b.valuation()) && !self.excluded(b, *i))
                .map(|(_, b)| b)
                .collect();
            if !keep.is_empty() {
                return Ok((poly, keep));
            }
        }
    }

    pub fn take_n(&mut self, n: usize) -> Result<Vec<AlgebraicNumber>> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            out.push(self.next_number()?);
        }
        Ok(out)
    }

    pub fn next_number(&mut self) -> Result<AlgebraicNumber> {
        if let Some(b) = self.queue.pop_front() {
            return Ok(b);
        }
        let (_, bs) = self.next_poly()?;
        self.queue.extend(bs);
        Ok(self.queue.pop_front().unwrap())
    }
}
