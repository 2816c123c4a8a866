use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::valuation::{Prime, Valuation};
use crate::arith::{pow_rat, rat_int, rat_mod_pk, split_p, Rational};
use crate::error::{Error, Result};

/// An exact value `p^v · u` with `v` rational and `u` a rational unit
/// (`p ∤ num(u)·den(u)`), or zero.
///
/// Fractional `v` stands for an element of a ramified extension whose
/// absolute value is `p^{-v}`; the unit is then a formal rational factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicScalar {
    prime: Prime,
    valuation: Valuation,
    unit: Option<Rational>,
}

impl PAdicScalar {
    pub fn zero(prime: Prime) -> Self {
        PAdicScalar { prime, valuation: Valuation::Infinity, unit: None }
    }

    /// Decomposes a rational into `p^v · u`.
    pub fn from_rational(q: &Rational, prime: Prime) -> Self {
        if q.is_zero() {
            return Self::zero(prime);
        }
        let p = prime.get();
        let (a, na) = split_p(q.numer(), p);
        let (b, nb) = split_p(q.denom(), p);
        PAdicScalar {
            prime,
            valuation: Valuation::Finite(rat_int(BigInt::from(a as i64 - b as i64))),
            unit: Some(Rational::new(na, nb)),
        }
    }

    pub fn from_int(n: i64, prime: Prime) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()), prime)
    }

    /// Builds `p^v · u`, moving any powers of `p` in `u` into the valuation.
    pub fn new(prime: Prime, v: Rational, u: Rational) -> Self {
        if u.is_zero() {
            return Self::zero(prime);
        }
        let inner = Self::from_rational(&u, prime);
        let shift = inner.valuation.expect_finite().clone();
        PAdicScalar { prime, valuation: Valuation::Finite(v + shift), unit: inner.unit }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn unit(&self) -> Option<&Rational> {
        self.unit.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_none()
    }

    /// The exact rational value when the valuation is an integer.
    pub fn to_rational(&self) -> Option<Rational> {
        match (&self.valuation, &self.unit) {
            (Valuation::Infinity, _) => Some(Rational::zero()),
            (Valuation::Finite(v), Some(u)) if v.denom().is_one() => {
                let e = v.numer().to_i64()?;
                Some(pow_rat(self.prime.get(), e) * u)
            }
            _ => None,
        }
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        Ok(())
    }

    /// Exact sum. Fails only when the two valuations differ by a
    /// non-integer, in which case the sum leaves the `p^v·Q` family.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let v1 = self.valuation.expect_finite();
        let v2 = other.valuation.expect_finite();
        let diff = v1 - v2;
        if !diff.denom().is_one() {
            return Err(Error::IncommensurableValuations(v1.to_string(), v2.to_string()));
        }
        let p = self.prime.get();
        let (vmin, a, b) = if v1 <= v2 {
            (v1.clone(), self.unit.clone().unwrap(), other.unit.clone().unwrap() * pow_rat(p, (-diff).to_integer().to_i64().unwrap()))
        } else {
            (v2.clone(), self.unit.clone().unwrap() * pow_rat(p, diff.to_integer().to_i64().unwrap()), other.unit.clone().unwrap())
        };
        Ok(Self::new(self.prime, vmin, a + b))
    }

    pub fn neg(&self) -> Self {
        PAdicScalar { prime: self.prime, valuation: self.valuation.clone(), unit: self.unit.as_ref().map(|u| -u) }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Exact product: valuations add, units multiply.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.prime));
        }
        Ok(PAdicScalar {
            prime: self.prime,
            valuation: &self.valuation + &other.valuation,
            unit: Some(self.unit.as_ref().unwrap() * other.unit.as_ref().unwrap()),
        })
    }

    pub fn inv(&self) -> Result<Self> {
        match (&self.valuation, &self.unit) {
            (Valuation::Finite(v), Some(u)) => Ok(PAdicScalar {
                prime: self.prime,
                valuation: Valuation::Finite(-v),
                unit: Some(u.recip()),
            }),
            _ => Err(Error::DivisionByZero),
        }
    }

    /// A rational `r` with `ν(self − r) ≥ k`, using a bounded-size
    /// representative of the unit modulo `p^{k−v}`.
    pub fn approximate(&self, k: i64) -> Result<Rational> {
        let v = match &self.valuation {
            Valuation::Infinity => return Ok(Rational::zero()),
            Valuation::Finite(v) => v,
        };
        if !v.denom().is_one() {
            return Err(Error::Precondition("cannot approximate a ramified scalar by a rational".into()));
        }
        let v = v.numer().to_i64().ok_or_else(|| Error::BudgetExceeded("valuation exceeds i64".into()))?;
        if v >= k {
            return Ok(Rational::zero());
        }
        let p = self.prime.get();
        let digits = (k - v) as u64;
        let rep = rat_mod_pk(self.unit.as_ref().unwrap(), p, digits);
        let m = crate::arith::pow_u(p, digits);
        let rep = crate::arith::symmetric_mod(&rep, &m);
        Ok(pow_rat(p, v) * rat_int(rep))
    }

    pub fn is_unit(&self) -> bool {
        matches!(&self.valuation, Valuation::Finite(v) if v.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        match &self.valuation {
            Valuation::Infinity => true,
            Valuation::Finite(v) => !v.is_negative(),
        }
    }

    pub fn one(prime: Prime) -> Self {
        PAdicScalar { prime, valuation: Valuation::int(0), unit: Some(Rational::one()) }
    }
}

impl fmt::Display for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.valuation, &self.unit) {
            (Valuation::Infinity, _) => write!(f, "0"),
            (v, Some(u)) => write!(f, "{}^({})·{}", self.prime, v, u),
            _ => unreachable!(),
        }
    }
}

/// `ν_p(q)` for an exact rational; `Infinity` for zero.
pub fn vp_rational(q: &Rational, p: u64) -> Result<Valuation> {
    let prime = Prime::new(p)?;
    Ok(PAdicScalar::from_rational(q, prime).valuation().clone())
}
