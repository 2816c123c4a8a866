use std::fmt;

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::linalg::{charpoly, Matrix};
use crate::poly::{IntPolynomial, QPoly};

/// An element of `Q(θ) = Q[t]/(m(t))`, stored reduced modulo `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberFieldElement {
    modulus: IntPolynomial,
    value: QPoly,
}

impl NumberFieldElement {
    /// Reduces `value` modulo the generator's minimal polynomial.
    pub fn new(modulus: &IntPolynomial, value: QPoly) -> Self {
        let m = modulus.to_qpoly();
        let value = value.rem(&m).expect("nonzero modulus");
        NumberFieldElement { modulus: modulus.clone(), value }
    }

    pub fn from_rational(modulus: &IntPolynomial, q: &Rational) -> Self {
        Self::new(modulus, QPoly::constant(q.clone()))
    }

    pub fn from_int(modulus: &IntPolynomial, n: i64) -> Self {
        Self::from_rational(modulus, &Rational::from_integer(n.into()))
    }

    pub fn zero(modulus: &IntPolynomial) -> Self {
        Self::new(modulus, QPoly::zero())
    }

    pub fn one(modulus: &IntPolynomial) -> Self {
        Self::new(modulus, QPoly::one())
    }

    /// The generator `θ`.
    pub fn generator(modulus: &IntPolynomial) -> Self {
        Self::new(modulus, QPoly::x())
    }

    pub fn modulus(&self) -> &IntPolynomial {
        &self.modulus
    }

    /// Coordinates in the power basis `1, θ, …`.
    pub fn value(&self) -> &QPoly {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.value.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.value.coeff(0)),
            _ => None,
        }
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.modulus != o.modulus {
            return Err(Error::Precondition(format!(
                "number field elements over different generators {} and {}",
                self.modulus, o.modulus
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(NumberFieldElement { modulus: self.modulus.clone(), value: self.value.add(&o.value) })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(NumberFieldElement { modulus: self.modulus.clone(), value: self.value.sub(&o.value) })
    }

    pub fn neg(&self) -> Self {
        NumberFieldElement { modulus: self.modulus.clone(), value: self.value.neg() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        NumberFieldElement { modulus: self.modulus.clone(), value: self.value.scale(q) }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(Self::new(&self.modulus, self.value.mul(&o.value)))
    }

    /// Inverse via the extended Euclidean algorithm.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.value.xgcd(&self.modulus.to_qpoly());
        if g.degree() != Some(0) {
            return Err(Error::Precondition("generator polynomial is reducible".into()));
        }
        Ok(Self::new(&self.modulus, s))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut r = Self::one(&self.modulus);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).unwrap();
            }
            b = b.mul(&b).unwrap();
            e >>= 1;
        }
        r
    }

    /// `P(self)` for an integer polynomial `P`.
    pub fn eval_poly(&self, p: &IntPolynomial) -> Self {
        p.coeffs().iter().rev().fold(Self::zero(&self.modulus), |acc, c| {
            let term = Self::from_rational(&self.modulus, &Rational::from_integer(c.clone()));
            acc.mul(self).unwrap().add(&term).unwrap()
        })
    }

    /// Matrix of multiplication by `self` in the power basis.
    pub fn mult_matrix(&self) -> Matrix {
        let n = self.modulus.degree();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let basis = Self::new(&self.modulus, QPoly::monomial(Rational::one(), j));
            let prod = self.mul(&basis).unwrap();
            cols.push((0..n).map(|i| prod.value.coeff(i)).collect::<Vec<_>>());
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }
}

/// Minimal polynomial over `Z` of a number field element: the squarefree
/// part of the characteristic polynomial of multiplication, made primitive
/// with positive leading coefficient.
pub fn minpoly_of_element(x: &NumberFieldElement) -> IntPolynomial {
    if let Some(q) = x.as_rational() {
        return rational_minpoly(&q);
    }
    charpoly(&x.mult_matrix()).squarefree_part().to_primitive_int()
}

/// `den·z − num` for a rational `num/den`.
pub fn rational_minpoly(q: &Rational) -> IntPolynomial {
    IntPolynomial::primitive(vec![-q.numer().clone(), q.denom().clone()])
}

impl fmt::Display for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}
