//! Exact p-adic arithmetic for power series with prescribed exceptional sets.
//!
//! The crate is layered: [`padic`] and [`arith`] provide exact scalars and
//! valuations, [`algebraic`] handles algebraic numbers and their `Q_p`
//! embeddings, [`series`] holds truncated power series with tail bounds,
//! [`constructions`] builds the exceptional-set series and certificates, and
//! [`weierstrass`] implements preparation and conjugate propagation.

pub mod algebraic;
pub mod arith;
pub mod constructions;
pub mod error;
pub mod fp;
pub mod linalg;
pub mod newton;
pub mod padic;
pub mod poly;
pub mod series;
pub mod weierstrass;

pub use arith::Rational;
pub use error::{Error, ErrorClass, Result};
pub use padic::{vp_rational, PAdicScalar, Prime, Radius, Valuation};
pub use poly::{IntPolynomial, QPoly};
