//! Truncated power series with exact coefficients and named tail rules.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebraic::{AlgebraicNumber, NumberFieldElement};
use crate::arith::{ilog, pow_u, rat, rat_int, Rational};
use crate::error::{Error, Result};
use crate::padic::{PAdicScalar, Prime, Radius, Valuation};

/// Coefficients with `|ν| ≤` this are materialized as plain rationals.
pub const MAX_MATERIALIZED_VALUATION: i64 = 200_000;

/// Lower bound on `ν(c_i)` for indices beyond the known prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailRule {
    /// All later coefficients vanish.
    Zero,
    /// `ν(c_i) ≥ slope·i + offset`; `sharp` when the bound's growth rate
    /// is attained infinitely often.
    Linear { slope: Rational, offset: Rational, sharp: bool },
    /// `ν(1/i!) = −(i − s_p(i))/(p−1)`.
    ExpLegendre,
    /// `ν(1/i) = −ν_p(i)`.
    LogHarmonic,
    /// Blocks `p^{δ_k} z^{ω_k} ∏_{j≤k} P_j(z)` for `k > n`, with
    /// `δ_{n+1}` and `ω_{n+1}` the first unbuilt block's parameters.
    Theorem1Tail { delta_next: BigInt, omega_next: BigInt },
    /// `ν(c_i) ≥ ⌊i·u/v⌋ + 1`, attained once per block.
    Theorem1Radius { rho_exponent: Rational },
    /// Coefficientwise minimum of several rules (sum of series).
    Min(Vec<TailRule>),
}

fn radius_room(slope: &Rational, w: &Rational) -> Result<Rational> {
    let room = slope + w;
    if !room.is_positive() {
        return Err(Error::OutsideRadius(format!("point valuation {w} not above {}", -slope)));
    }
    Ok(room)
}

impl TailRule {
    /// Lower bound on `min_{i > after} ν(c_i) + i·w` for a point of
    /// valuation `w`.
    pub fn bound_at(&self, prime: Prime, after: usize, w: &Valuation) -> Result<Valuation> {
        let Valuation::Finite(w) = w else {
            return Ok(Valuation::Infinity);
        };
        let i0 = rat((after + 1) as i64, 1);
        let p = prime.get();
        match self {
            TailRule::Zero => Ok(Valuation::Infinity),
            TailRule::Linear { slope, offset, .. } => {
                let room = radius_room(slope, w)?;
                Ok(Valuation::Finite(i0 * room + offset))
            }
            TailRule::ExpLegendre => {
                let s = rat(-1, p as i64 - 1);
                TailRule::Linear { slope: s.clone(), offset: -s, sharp: true }.bound_at(prime, after, &Valuation::Finite(w.clone()))
            }
            TailRule::LogHarmonic => {
                let room = radius_room(&Rational::zero(), w)?;
                let start = BigInt::from(after + 1);
                let mut k = ilog(&start, p);
                let mut best: Option<Rational> = None;
                loop {
                    let pk = pow_u(p, k as u64);
                    let i = if pk > start { pk.clone() } else { start.clone() };
                    let val = rat_int(i) * &room - rat(k, 1);
                    if best.as_ref().is_none_or(|b| &val < b) {
                        best = Some(val);
                    }
                    // beyond this point the bound only grows
                    if pk >= start && rat_int(pk * (p - 1)) * &room >= Rational::one() {
                        break;
                    }
                    k += 1;
                }
                Ok(Valuation::Finite(best.unwrap()))
            }
            TailRule::Theorem1Tail { delta_next, omega_next } => {
                let d = rat_int(delta_next.clone());
                let o = rat_int(omega_next.clone());
                if !w.is_negative() {
                    return Ok(Valuation::Finite(d + o * w));
                }
                if d < -w * rat(2, 1) {
                    return Err(Error::UnresolvedTail(format!(
                        "next block exponent {delta_next} is below twice the point's pole order {}",
                        -w
                    )));
                }
                Ok(Valuation::Finite(d + o * w * rat(2, 1)))
            }
            TailRule::Theorem1Radius { rho_exponent } => {
                let room = radius_room(rho_exponent, w)?;
                Ok(Valuation::Finite(i0 * room + Rational::new(BigInt::one(), rho_exponent.denom().clone())))
            }
            TailRule::Min(rules) => {
                let mut out = Valuation::Infinity;
                for r in rules {
                    out = out.min(r.bound_at(prime, after, &Valuation::Finite(w.clone()))?);
                }
                Ok(out)
            }
        }
    }

    /// Exact `limsup −ν(c_i)/i` when the rule pins it down, `None` for
    /// entire series; `Err` when only a lower bound on the radius is known.
    fn growth(&self, prime: Prime) -> std::result::Result<Option<Rational>, Rational> {
        let p = prime.get() as i64;
        match self {
            TailRule::Zero | TailRule::Theorem1Tail { .. } => Ok(None),
            TailRule::Linear { slope, sharp: true, .. } => Ok(Some(-slope.clone())),
            TailRule::Linear { slope, .. } => Err(-slope.clone()),
            TailRule::ExpLegendre => Ok(Some(rat(1, p - 1))),
            TailRule::LogHarmonic => Ok(Some(Rational::zero())),
            TailRule::Theorem1Radius { rho_exponent } => Ok(Some(-rho_exponent.clone())),
            TailRule::Min(rules) => {
                let mut gs = Vec::new();
                let mut exact = true;
                for r in rules {
                    match r.growth(prime) {
                        Ok(g) => gs.push(g),
                        Err(g) => {
                            exact = false;
                            gs.push(Some(g));
                        }
                    }
                }
                let finite: Vec<Rational> = gs.iter().flatten().cloned().collect();
                let top = finite.iter().max().cloned();
                let ties = top.as_ref().map_or(0, |t| finite.iter().filter(|g| *g == t).count());
                if exact && ties <= 1 {
                    Ok(top)
                } else {
                    Err(top.unwrap_or_else(Rational::zero))
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            TailRule::Zero => "zero".into(),
            TailRule::Linear { slope, offset, .. } => format!("linear({slope}, {offset})"),
            TailRule::ExpLegendre => "exp-legendre".into(),
            TailRule::LogHarmonic => "log-harmonic".into(),
            TailRule::Theorem1Tail { delta_next, omega_next } => format!("theorem1-tail({delta_next}, {omega_next})"),
            TailRule::Theorem1Radius { rho_exponent } => format!("theorem1-radius({rho_exponent})"),
            TailRule::Min(rs) => format!("min({})", rs.iter().map(|r| r.name()).collect::<Vec<_>>().join(", ")),
        }
    }
}

/// Coefficients `c_0..c_T` plus an optional rule for `i > T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    prime: Prime,
    coeffs: Vec<PAdicScalar>,
    tail: Option<TailRule>,
}

/// Value of a partial sum and a lower bound on the valuation of the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalResult {
    pub value: NumberFieldElement,
    pub terms: usize,
    /// `None` when the series carries no tail rule.
    pub tail_valuation: Option<Valuation>,
}

impl EvalResult {
    pub fn require_tail(&self) -> Result<&Valuation> {
        self.tail_valuation.as_ref().ok_or(Error::MissingTailBound)
    }
}

/// Radius information read off a series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiusReport {
    /// `max_{i≥1, c_i≠0} −ν(c_i)/i` over the prefix.
    pub prefix_sup: Option<Rational>,
    pub witnesses: Vec<usize>,
    /// Exact radius `p^{u/v}` or `∞` when the tail rule certifies it.
    pub certified: Option<Radius>,
}

impl TruncatedSeries {
    pub fn new(prime: Prime, coeffs: Vec<PAdicScalar>, tail: Option<TailRule>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("a series needs at least the constant coefficient".into()));
        }
        if coeffs.iter().any(|c| c.prime() != prime) {
            return Err(Error::Precondition("coefficient over a different prime".into()));
        }
        Ok(TruncatedSeries { prime, coeffs, tail })
    }

    pub fn from_rationals(prime: Prime, coeffs: &[Rational], tail: Option<TailRule>) -> Result<Self> {
        Self::new(prime, coeffs.iter().map(|c| PAdicScalar::from_rational(c, prime)).collect(), tail)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn coeffs(&self) -> &[PAdicScalar] {
        &self.coeffs
    }

    /// Index of the last known coefficient.
    pub fn last_index(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Option<&PAdicScalar> {
        self.coeffs.get(i)
    }

    pub fn tail(&self) -> Option<&TailRule> {
        self.tail.as_ref()
    }

    pub fn valuations(&self) -> Vec<Valuation> {
        self.coeffs.iter().map(|c| c.valuation().clone()).collect()
    }

    pub fn truncate(&self, last: usize, tail: Option<TailRule>) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(last + 1);
        TruncatedSeries { prime: self.prime, coeffs, tail }
    }

    /// Coefficientwise sum over the shorter prefix.
    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.prime != o.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), o.prime.get()));
        }
        let n = self.coeffs.len().min(o.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect::<Result<Vec<_>>>()?;
        // dropped coefficients of a longer operand are not covered by its rule
        let tail = match (&self.tail, &o.tail) {
            (Some(a), Some(b)) if self.coeffs.len() == o.coeffs.len() => Some(TailRule::Min(vec![a.clone(), b.clone()])),
            _ => None,
        };
        Ok(TruncatedSeries { prime: self.prime, coeffs, tail })
    }

    /// `c_i` as a plain rational, refusing astronomically large powers.
    pub fn rational_coeff(&self, i: usize) -> Result<Rational> {
        materialize(&self.coeffs[i])
    }

    /// Exact partial sum through index `terms` at `α`, with the
    /// non-archimedean tail bound from the remaining known coefficients
    /// and the tail rule.
    pub fn eval_at(&self, alpha: &AlgebraicNumber, terms: usize) -> Result<EvalResult> {
        if terms > self.last_index() {
            return Err(Error::Precondition(format!("{terms} terms requested, {} known", self.last_index())));
        }
        if alpha.prime() != self.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), alpha.prime().get()));
        }
        let w = alpha.valuation().clone();
        let tail_rule = match &self.tail {
            Some(rule) => Some(rule.bound_at(self.prime, self.last_index(), &w)?),
            None => None,
        };
        let m = alpha.minpoly();
        let a = alpha.as_field_element();
        let mut value = NumberFieldElement::zero(m);
        for i in (0..=terms).rev() {
            value = value.mul(&a)?;
            if !self.coeffs[i].is_zero() {
                value = value.add(&NumberFieldElement::from_rational(m, &materialize(&self.coeffs[i])?))?;
            }
        }
        let tail_valuation = tail_rule.map(|rule_bound| {
            (terms + 1..=self.last_index())
                .map(|i| self.coeffs[i].valuation().add_scaled(i as i64, w.finite().unwrap_or(&Rational::zero())))
                .map(|v| if w.is_infinite() { Valuation::Infinity } else { v })
                .fold(rule_bound, Valuation::min)
        });
        Ok(EvalResult { value, terms, tail_valuation })
    }

    /// Radius data: the prefix supremum of `−ν(c_i)/i` with the indices
    /// attaining it, and the exact radius when the tail rule fixes it.
    pub fn radius_from_coeffs(&self) -> RadiusReport {
        let mut best: Option<Rational> = None;
        let mut witnesses = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let Valuation::Finite(v) = c.valuation() else { continue };
            let r = -v / rat(i as i64, 1);
            match &best {
                Some(b) if &r < b => {}
                Some(b) if &r == b => witnesses.push(i),
                _ => {
                    best = Some(r);
                    witnesses = vec![i];
                }
            }
        }
        let certified = match &self.tail {
            Some(rule) => match rule.growth(self.prime) {
                Ok(Some(g)) => Some(Radius::Finite(-g)),
                Ok(None) => Some(Radius::Infinity),
                Err(_) => None,
            },
            None => None,
        };
        RadiusReport { prefix_sup: best, witnesses, certified }
    }

    /// One line per index: `i\tv\tnum\tden`, or `i\tinf` for zero.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            match (c.valuation(), c.unit()) {
                (Valuation::Finite(v), Some(u)) => {
                    writeln!(out, "{i}\t{v}\t{}\t{}", u.numer(), u.denom()).unwrap();
                }
                _ => writeln!(out, "{i}\tinf").unwrap(),
            }
        }
        out
    }

    /// Inverse of [`Self::dump`]; the tail rule is not part of the format.
    pub fn parse_dump(prime: Prime, text: &str) -> Result<Self> {
        let bad = |line: usize, what: &str| Error::Precondition(format!("dump line {line}: {what}"));
        let mut coeffs = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let parts: Vec<&str> = line.split('\t').collect();
            let idx: usize = parts[0].parse().map_err(|_| bad(ln + 1, "bad index"))?;
            if idx != coeffs.len() {
                return Err(bad(ln + 1, "indices must be consecutive from 0"));
            }
            match parts.as_slice() {
                [_, "inf"] => coeffs.push(PAdicScalar::zero(prime)),
                [_, v, n, d] => {
                    let v: Rational = v.parse().map_err(|_| bad(ln + 1, "bad valuation"))?;
                    let n: BigInt = n.parse().map_err(|_| bad(ln + 1, "bad numerator"))?;
                    let d: BigInt = d.parse().map_err(|_| bad(ln + 1, "bad denominator"))?;
                    if !d.is_positive() {
                        return Err(bad(ln + 1, "denominator must be positive"));
                    }
                    let u = Rational::new(n.clone(), d.clone());
                    if u.numer() != &n || u.is_zero() || &n % prime.get() == BigInt::zero() || &d % prime.get() == BigInt::zero() {
                        return Err(bad(ln + 1, "unit must be reduced, nonzero and prime to p"));
                    }
                    coeffs.push(PAdicScalar::new(prime, v, u));
                }
                _ => return Err(bad(ln + 1, "expected 2 or 4 tab-separated fields")),
            }
        }
        Self::new(prime, coeffs, None)
    }
}

pub fn materialize(c: &PAdicScalar) -> Result<Rational> {
    if let Valuation::Finite(v) = c.valuation() {
        let too_big = v.abs() > rat(MAX_MATERIALIZED_VALUATION, 1);
        if too_big {
            return Err(Error::BudgetExceeded(format!("coefficient p^{v}·u is too large to expand")));
        }
    }
    c.to_rational()
        .ok_or_else(|| Error::Precondition("coefficient with fractional valuation has no rational value".into()))
}

/// Which built-in series to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Exp,
    Log,
}

/// `exp_p(z) = Σ z^n/n!` or `log_p(1+z) = Σ (−1)^{n+1} z^n/n` through `z^T`.
pub fn builtin_series(name: Builtin, prime: Prime, last: usize) -> Result<TruncatedSeries> {
    if last < 1 {
        return Err(Error::Precondition("at least one non-constant term is required".into()));
    }
    let mut coeffs = Vec::with_capacity(last + 1);
    match name {
        Builtin::Exp => {
            let mut fact = BigInt::one();
            for n in 0..=last {
                if n > 0 {
                    fact *= n;
                }
                coeffs.push(Rational::new(BigInt::one(), fact.clone()));
            }
        }
        Builtin::Log => {
            coeffs.push(Rational::zero());
            for n in 1..=last {
                let sign = if n % 2 == 1 { 1 } else { -1 };
                coeffs.push(rat(sign, n as i64));
            }
        }
    }
    let rule = match name {
        Builtin::Exp => TailRule::ExpLegendre,
        Builtin::Log => TailRule::LogHarmonic,
    };
    TruncatedSeries::from_rationals(prime, &coeffs, Some(rule))
}

/// `ν_p(n!)` by Legendre's digit-sum formula `(n − s_p(n))/(p − 1)`.
pub fn legendre(n: u64, p: u64) -> u64 {
    let mut s = 0;
    let mut m = n;
    while m > 0 {
        s += m % p;
        m /= p;
    }
    (n - s) / (p - 1)
}

/// Truncated composition `f(g(z))` for rational series with `g(0) = 0`.
pub fn compose_rational(f: &[Rational], g: &[Rational], n: usize) -> Result<Vec<Rational>> {
    if g.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::Precondition("inner series must vanish at 0".into()));
    }
    let trunc = |v: Vec<Rational>| -> Vec<Rational> { v.into_iter().take(n + 1).collect() };
    let mul = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n + 1];
        for (i, x) in a.iter().enumerate().take(n + 1) {
            for (j, y) in b.iter().enumerate().take(n + 1 - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let mut out = vec![Rational::zero(); n + 1];
    let mut power = vec![Rational::one()];
    for c in f.iter().take(n + 1) {
        for (k, x) in power.iter().enumerate().take(n + 1) {
            out[k] += c * x;
        }
        power = trunc(mul(&power, g));
    }
    Ok(out)
}

/// Valuation of a rational as an integer, if it is nonzero and bounded.
pub fn int_valuation(c: &PAdicScalar) -> Option<i64> {
    c.valuation().finite().and_then(|v| if v.denom().is_one() { v.numer().to_i64() } else { None })
}
