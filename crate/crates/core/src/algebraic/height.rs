use num_bigint::BigInt;
use num_traits::One;

use super::numfield::{minpoly_of_element, rational_minpoly, NumberFieldElement};
use crate::arith::Rational;
use crate::poly::IntPolynomial;

/// Exact height and degree of an algebraic number, with the primitive
/// minimal polynomial they were read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightRecord {
    pub minpoly: IntPolynomial,
    pub height: BigInt,
    pub degree: usize,
}

impl HeightRecord {
    pub fn from_minpoly(minpoly: IntPolynomial) -> Self {
        HeightRecord { height: minpoly.height(), degree: minpoly.degree(), minpoly }
    }
}

pub fn height_of_rational(q: &Rational) -> HeightRecord {
    HeightRecord::from_minpoly(rational_minpoly(q))
}

pub fn height_of_element(x: &NumberFieldElement) -> HeightRecord {
    HeightRecord::from_minpoly(minpoly_of_element(x))
}

/// Which height estimate to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeightOp {
    Power(u32),
    Product,
    Sum,
}

/// Default stand-in for the unspecified `e^{O(·)}` constant.
pub const DEFAULT_HEIGHT_CONSTANT: u64 = 4;

/// Upper bound on the height of a power, product or sum:
/// `C^n·H^n`, `C·(H₁H₂)^{m₁m₂}`, `C^k·(H₁⋯H_k)^{m₁⋯m_k}`.
pub fn height_bound(op: HeightOp, inputs: &[HeightRecord], c: u64) -> BigInt {
    let c = BigInt::from(c);
    match op {
        HeightOp::Power(n) => {
            let h = &inputs[0].height;
            num_traits::pow(c * h, n as usize)
        }
        HeightOp::Product | HeightOp::Sum => {
            let hs: BigInt = inputs.iter().map(|r| r.height.clone()).product();
            let ms: usize = inputs.iter().map(|r| r.degree).product();
            let ck = if op == HeightOp::Product {
                c
            } else {
                num_traits::pow(c, inputs.len())
            };
            ck * num_traits::pow(hs, ms.max(1))
        }
    }
    .max(BigInt::one())
}
