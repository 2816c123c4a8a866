//! p-adic scalars, valuations and finite extensions of `Q_p`.

pub mod extension;
mod scalar;
mod valuation;

pub use extension::{ext_norm, ext_valuation, ExtElement, ExtensionDesc};
pub use scalar::{vp_rational, PAdicScalar};
pub use valuation::{Prime, Valuation};

use crate::arith::Rational;

/// A value-group radius `ρ = p^{u/v}`, or `ρ = ∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Radius {
    Finite(Rational),
    Infinity,
}

impl Radius {
    /// Whether a point of valuation `ν` lies in the open ball `|x| < ρ`.
    pub fn contains(&self, nu: &Valuation) -> bool {
        match (self, nu) {
            (Radius::Infinity, _) | (_, Valuation::Infinity) => true,
            (Radius::Finite(e), Valuation::Finite(v)) => v > &-e.clone(),
        }
    }

    pub fn exponent(&self) -> Option<&Rational> {
        match self {
            Radius::Finite(e) => Some(e),
            Radius::Infinity => None,
        }
    }
}

impl std::fmt::Display for Radius {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Radius::Finite(e) => write!(f, "p^({e})"),
            Radius::Infinity => write!(f, "inf"),
        }
    }
}
