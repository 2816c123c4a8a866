use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::certificate::candidate_polys;
use super::enumerate::AlgebraicEnumerator;
use super::theorem1::{build_g, BlockSeries};
use crate::algebraic::AlgebraicNumber;
use crate::arith::{pow_rat, rat, Rational};
use crate::error::{Error, Result};
use crate::newton::newton_polygon_q;
use crate::padic::{vp_rational, PAdicScalar, Prime, Radius, Valuation};
use crate::poly::QPoly;
use crate::series::{TruncatedSeries, MAX_MATERIALIZED_VALUATION};

/// Draws per choice before giving up on a target.
const MAX_DRAWS: usize = 256;
/// Largest prefix of `g` built while looking for a vanishing block.
const MAX_G_INDEX: usize = 1 << 12;

/// Target set `E_α` for the value at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetSet {
    /// Any rational value.
    Rational,
    /// Any value that is none of the algebraic numbers of degree
    /// `≤ max_degree` and height `≤ max_height`.
    Avoid { max_degree: u32, max_height: BigInt },
}

/// The value `f̃_m(α_j)` and how it meets its target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub step: usize,
    pub point: usize,
    pub value: Rational,
    pub holds: bool,
    /// For avoidance: `max ν(value − a)` over the candidates `a`.
    pub margin: Option<Valuation>,
}

pub fn check_target(target: &TargetSet, value: &Rational, p: Prime) -> Result<(bool, Option<Valuation>)> {
    match target {
        TargetSet::Rational => Ok((true, None)),
        TargetSet::Avoid { max_degree, max_height } => {
            let shift = QPoly::new(vec![value.clone(), Rational::one()]);
            let mut margin = Valuation::Finite(rat(i64::MIN / 2, 1));
            for q in candidate_polys(*max_degree, max_height)? {
                if q.eval_rat(value).is_zero() {
                    return Ok((false, Some(Valuation::Infinity)));
                }
                let np = newton_polygon_q(&q.to_qpoly().compose(&shift), p);
                if let Some(v) = np.max_root_valuation() {
                    margin = margin.max(v);
                }
            }
            Ok((true, Some(margin)))
        }
    }
}

/// `X`, `E`, the chosen `δ_k, ε_k` and `P̃_m` after `m` steps.
pub struct Theorem3State {
    pub prime: Prime,
    pub rho: Radius,
    pub points: Vec<Rational>,
    pub targets: Vec<TargetSet>,
    pub seed: u64,
    pub deltas: Vec<Rational>,
    pub epsilons: Vec<Rational>,
    pub poly: QPoly,
    pub log: Vec<Membership>,
    g: Option<BlockSeries>,
    g_values: Vec<Rational>,
    rng: ChaCha8Rng,
}

/// First `n` rational points of the canonical enumeration of `B(0, ρ)`,
/// with `0` first.
pub fn canonical_points(prime: Prime, rho: &Radius, n: usize) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::zero()];
    let mut e = AlgebraicEnumerator::new(prime, rho.clone(), Vec::new());
    while out.len() < n {
        let a = e.next_number()?;
        match a.as_rational() {
            Some(q) if q.is_zero() => {}
            Some(q) => out.push(q),
            None => return Err(Error::Unsupported(format!("non-rational point {a} in X"))),
        }
    }
    out.truncate(n);
    Ok(out)
}

impl Theorem3State {
    /// Sets up `f_0 = g + δ_0`; `g = 1` for `ρ = ∞`.
    pub fn new(prime: Prime, rho: Radius, points: Vec<Rational>, targets: Vec<TargetSet>, seed: u64) -> Result<Self> {
        if points.is_empty() || !points[0].is_zero() {
            return Err(Error::Precondition("X must start with 0".into()));
        }
        if targets.len() != points.len() {
            return Err(Error::Precondition(format!("{} targets for {} points", targets.len(), points.len())));
        }
        for (i, a) in points.iter().enumerate() {
            if points[..i].contains(a) {
                return Err(Error::Precondition(format!("point {a} repeated")));
            }
            if !rho.contains(&vp_rational(a, prime.get())?) {
                return Err(Error::OutsideRadius(format!("point {a} not in B(0, {rho})")));
            }
        }
        let g = match rho {
            Radius::Infinity => None,
            Radius::Finite(_) => Some(build_g(prime, &rho, 16)?),
        };
        let mut st = Theorem3State {
            prime,
            rho,
            points,
            targets,
            seed,
            deltas: Vec::new(),
            epsilons: Vec::new(),
            poly: QPoly::zero(),
            log: Vec::new(),
            g,
            g_values: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        for i in 0..st.points.len() {
            let v = st.g_value(i)?;
            st.g_values.push(v);
        }
        // δ_0: zero when g(0) = 1 already meets E_0
        let a0 = st.g_values[0].clone();
        let mut d0 = Rational::zero();
        let mut draws = 0;
        while !check_target(&st.targets[0], &(&a0 + &d0), prime)?.0 {
            draws += 1;
            if draws > MAX_DRAWS {
                return Err(Error::EmptyTarget(format!("no value found for f(0) near {a0}")));
            }
            d0 = st.draw_unit();
        }
        st.poly = QPoly::constant(d0.clone());
        st.deltas.push(d0);
        st.record(0)?;
        Ok(st)
    }

    /// `g(α_i)` as an exact finite sum.
    fn g_value(&mut self, i: usize) -> Result<Rational> {
        let Some(g) = &mut self.g else {
            return Ok(Rational::one());
        };
        let alpha = AlgebraicNumber::rational(&self.points[i], self.prime);
        loop {
            if let Some(v) = g.exact_value_at(&alpha)? {
                return Ok(v.as_rational().expect("rational point"));
            }
            let last = 2 * g.series.last_index();
            if last > MAX_G_INDEX {
                return Err(Error::BudgetExceeded(format!("g has no vanishing block at {} below index {MAX_G_INDEX}", self.points[i])));
            }
            *g = build_g(self.prime, &self.rho, last)?;
        }
    }

    /// Number of completed steps `m`.
    pub fn step(&self) -> usize {
        self.deltas.len() - 1
    }

    fn draw_unit(&mut self) -> Rational {
        let p = self.prime.get();
        let mut draw = |hi: u64| loop {
            let n = self.rng.gen_range(1..=hi);
            if n % p != 0 {
                return n as i64;
            }
        };
        let (n, d) = (draw(999), draw(9));
        let sign = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        rat(sign * n, d)
    }

    /// A draw with `ν = k^k + 1`, inside `B(0, p^{−k^k})`.
    fn draw_small(&mut self, k: usize) -> Result<Rational> {
        let e = (k as u64)
            .checked_pow(k as u32)
            .filter(|e| *e < MAX_MATERIALIZED_VALUATION as u64)
            .ok_or_else(|| Error::BudgetExceeded(format!("p^(k^k) for k = {k} too large")))?;
        Ok(self.draw_unit() * pow_rat(self.prime.get(), e as i64 + 1))
    }

    /// `∏_{j=2}^{k} (z − α_j)`.
    fn node_poly(&self, k: usize) -> QPoly {
        (2..=k).fold(QPoly::one(), |acc, j| acc.mul(&QPoly::new(vec![-self.points[j - 1].clone(), Rational::one()])))
    }

    /// `f̃_m(α_j)` for the current `m`.
    pub fn value_at(&self, j: usize) -> Rational {
        &self.g_values[j - 1] + self.poly.eval(&self.points[j - 1])
    }

    fn record(&mut self, step: usize) -> Result<()> {
        for j in 1..=(step + 1).min(self.points.len()) {
            let value = self.value_at(j);
            let (holds, margin) = check_target(&self.targets[j - 1], &value, self.prime)?;
            self.log.push(Membership { step, point: j, value, holds, margin });
        }
        Ok(())
    }

    /// Step `m → m+1`: `δ_{m+1}` fixes `c_{m+1} ∈ K`, then `ε_{m+1}` puts
    /// `f̃_{m+1}(α_{m+2})` into its target.
    pub fn advance(&mut self) -> Result<()> {
        let k = self.step() + 1;
        let nodes = self.node_poly(k);
        let delta = self.draw_small(k)?;
        // c_{k} changes by (−1)^{k−1} α_2⋯α_k δ_k, rational like δ_k
        self.poly = self.poly.add(&QPoly::monomial(Rational::one(), k).mul(&nodes).scale(&delta));
        let eps_poly = QPoly::monomial(Rational::one(), k + 1).mul(&nodes);
        let eps = if k < self.points.len() {
            let b = eps_poly.eval(&self.points[k]);
            debug_assert!(!b.is_zero());
            let base = self.value_at(k + 1);
            let mut draws = 0;
            loop {
                let e = self.draw_small(k)?;
                if check_target(&self.targets[k], &(&base + &e * &b), self.prime)?.0 {
                    break e;
                }
                draws += 1;
                if draws > MAX_DRAWS {
                    return Err(Error::EmptyTarget(format!(
                        "no value of f at {} in B({base}, p^-{})",
                        self.points[k],
                        k.pow(k as u32)
                    )));
                }
            }
        } else {
            self.draw_small(k)?
        };
        self.poly = self.poly.add(&eps_poly.scale(&eps));
        self.deltas.push(delta);
        self.epsilons.push(eps);
        self.record(k)
    }

    pub fn advance_to(&mut self, m: usize) -> Result<()> {
        while self.step() < m {
            self.advance()?;
        }
        Ok(())
    }

    /// Coefficient `c_i^{(m)}` of `f̃_m = g + P̃_m`.
    pub fn coefficient(&mut self, i: usize) -> Result<Rational> {
        let gi = match &mut self.g {
            None => {
                if i == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            Some(g) => {
                while g.series.last_index() < i {
                    *g = build_g(self.prime, &self.rho, 2 * g.series.last_index().max(i))?;
                }
                g.series.rational_coeff(i)?
            }
        };
        Ok(gi + self.poly.coeff(i))
    }

    /// `c_0..c_m`, which later steps no longer change.
    pub fn prefix(&mut self) -> Result<TruncatedSeries> {
        let m = self.step();
        let coeffs = (0..=m).map(|i| self.coefficient(i)).collect::<Result<Vec<_>>>()?;
        TruncatedSeries::from_rationals(self.prime, &coeffs, None)
    }

    /// Minimum of `ν(δ_k) − k^k` and `ν(ε_k) − k^k` over `k ≥ 1`.
    pub fn perturbation_room(&self) -> Option<BigInt> {
        let p = self.prime.get();
        let mut best: Option<BigInt> = None;
        for (i, d) in self.deltas.iter().enumerate().skip(1).chain(self.epsilons.iter().enumerate().map(|(i, e)| (i + 1, e))) {
            let Valuation::Finite(v) = vp_rational(d, p).ok()? else {
                return None;
            };
            let room = v.to_integer() - BigInt::from(i).pow(i as u32);
            if best.as_ref().is_none_or(|b| &room < b) {
                best = Some(room);
            }
        }
        best
    }

    /// Text log of the choices and memberships; equal seeds give equal logs.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, d) in self.deltas.iter().enumerate() {
            out.push_str(&format!("delta\t{k}\t{d}\n"));
        }
        for (k, e) in self.epsilons.iter().enumerate() {
            out.push_str(&format!("epsilon\t{}\t{e}\n", k + 1));
        }
        for m in &self.log {
            let margin = m.margin.as_ref().map_or("-".to_string(), |v| v.to_string());
            out.push_str(&format!("member\t{}\t{}\t{}\t{}\t{margin}\n", m.step, m.point, m.holds, m.value));
        }
        out
    }
}

/// The coefficient of `z^{k}` contributed by `δ z^{k} ∏_{j=2}^{k} (z − α_j)`.
pub fn delta_multiplier(points: &[Rational], k: usize) -> Rational {
    let prod: Rational = points[1..k].iter().fold(Rational::one(), |acc, a| acc * a);
    if (k - 1) % 2 == 1 {
        -prod
    } else {
        prod
    }
}

/// `ν` of a scalar as an integer.
pub fn scalar_valuation(x: &Rational, p: Prime) -> Option<BigInt> {
    match PAdicScalar::from_rational(x, p).valuation() {
        Valuation::Finite(v) if v.denom().is_one() => Some(v.to_integer()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    #[test]
    fn first_step_rational_target() {
        let pts = vec![rat(0, 1), rat(1, 1)];
        let mut st = Theorem3State::new(p5(), Radius::Infinity, pts, vec![TargetSet::Rational; 2], 7).unwrap();
        assert_eq!(st.deltas[0], rat(0, 1));
        st.advance().unwrap();
        assert!(scalar_valuation(&st.epsilons[0], p5()).unwrap() >= BigInt::from(1));
        assert!(st.log.iter().all(|m| m.holds));
        assert_eq!(st.value_at(1), rat(1, 1));
    }

    #[test]
    fn avoidance_by_exhaustion() {
        let pts = vec![rat(0, 1), rat(1, 1), rat(-1, 1)];
        let avoid = TargetSet::Avoid { max_degree: 1, max_height: BigInt::from(3) };
        let mut st = Theorem3State::new(p5(), Radius::Infinity, pts, vec![avoid.clone(); 3], 11).unwrap();
        st.advance_to(2).unwrap();
        assert_ne!(st.deltas[0], rat(0, 1));
        // brute force: value ≠ a/b for |a|, |b| ≤ 3
        for j in 1..=3 {
            let v = st.value_at(j);
            for a in -3..=3i64 {
                for b in 1..=3i64 {
                    assert_ne!(v, rat(a, b));
                }
            }
        }
    }

    #[test]
    fn sign_of_multiplier() {
        let pts = vec![rat(0, 1), rat(2, 1), rat(3, 1)];
        // z^3 (z − 2)(z − 3): coefficient of z^3 is 6
        assert_eq!(delta_multiplier(&pts, 3), rat(6, 1));
        assert_eq!(delta_multiplier(&pts, 2), rat(-2, 1));
        assert_eq!(delta_multiplier(&pts, 1), rat(1, 1));
    }

    #[test]
    fn finite_radius_values() {
        let rho = Radius::Finite(rat(0, 1));
        let pts = canonical_points(p5(), &rho, 3).unwrap();
        assert_eq!(pts[0], rat(0, 1));
        let mut st = Theorem3State::new(p5(), rho, pts, vec![TargetSet::Rational; 3], 3).unwrap();
        st.advance_to(2).unwrap();
        assert!(st.log.iter().all(|m| m.holds));
        assert_eq!(st.prefix().unwrap().last_index(), 2);
    }
}
