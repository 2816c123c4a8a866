use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rat_int, Rational};
use crate::error::{Error, Result};

/// A validated prime number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    /// Accepts `p` after a trial-division primality check.
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidPrime(p));
        }
        let mut d = 2u64;
        while d.saturating_mul(d) <= p {
            if p.is_multiple_of(d) {
                return Err(Error::InvalidPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An exact valuation: a rational exponent, or `+∞` for zero.
///
/// `Infinity` compares greater than every finite value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Rational),
    Infinity,
}

impl Valuation {
    pub fn int(v: i64) -> Self {
        Valuation::Finite(Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_big(v: BigInt) -> Self {
        Valuation::Finite(rat_int(v))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(q) => Some(q),
            Valuation::Infinity => None,
        }
    }

    /// Finite value; panics on infinity.
    pub fn expect_finite(&self) -> &Rational {
        self.finite().expect("valuation is infinite")
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// `v + k·w`, used for weights `ν(c_i) + i·ν(z)`.
    pub fn add_scaled(&self, k: i64, w: &Rational) -> Self {
        match self {
            Valuation::Finite(q) => Valuation::Finite(q + w * Rational::from_integer(k.into())),
            Valuation::Infinity => Valuation::Infinity,
        }
    }

    pub fn is_integral(&self) -> bool {
        match self {
            Valuation::Finite(q) => q.denom().is_one(),
            Valuation::Infinity => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
            (Valuation::Infinity, _) => Ordering::Greater,
            (_, Valuation::Infinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for &Valuation {
    type Output = Valuation;
    fn add(self, rhs: &Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        &self + &rhs
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(q) => write!(f, "{q}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

impl From<Rational> for Valuation {
    fn from(q: Rational) -> Self {
        Valuation::Finite(q)
    }
}

impl Default for Valuation {
    fn default() -> Self {
        Valuation::Finite(Rational::zero())
    }
}
