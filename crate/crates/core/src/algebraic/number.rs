use std::fmt;

use num_traits::Zero;

use super::numfield::NumberFieldElement;
use super::qpfactor::{qp_factorization, QpFactor};
use crate::arith::{pow_rat, Rational};
use crate::error::{Error, Result};
use crate::padic::{ext_valuation, vp_rational, ExtElement, Prime, Valuation};
use crate::poly::{IntPolynomial, QPoly};

/// Working precision for factorizations backing [`AlgebraicNumber`]s.
pub const DEFAULT_PRECISION: i64 = 30;

/// Largest precision tried when a valuation is not resolved.
const MAX_PRECISION: i64 = 4000;

/// An algebraic number with a chosen embedding into `Q̄_p`: the root
/// `conjugate` of the `factor`-th `Q_p`-irreducible factor of `minpoly`.
#[derive(Debug, Clone)]
pub struct AlgebraicNumber {
    minpoly: IntPolynomial,
    prime: Prime,
    factor: usize,
    conjugate: usize,
    local: QpFactor,
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        (&self.minpoly, self.prime, self.factor, self.conjugate) == (&o.minpoly, o.prime, o.factor, o.conjugate)
    }
}

impl Eq for AlgebraicNumber {}

impl AlgebraicNumber {
    /// Every root of an irreducible primitive polynomial, ordered by
    /// `Q_p`-factor and then by conjugate index inside the factor.
    pub fn branches(minpoly: &IntPolynomial, prime: Prime) -> Result<Vec<AlgebraicNumber>> {
        if !minpoly.is_primitive() || minpoly.leading() <= &Zero::zero() {
            return Err(Error::Precondition(format!("{minpoly} is not primitive with positive leading coefficient")));
        }
        if !minpoly.is_irreducible() {
            return Err(Error::Precondition(format!("{minpoly} is reducible over Q")));
        }
        let fz = qp_factorization(minpoly, prime, DEFAULT_PRECISION)?;
        let mut out = Vec::new();
        for (i, f) in fz.factors.iter().enumerate() {
            for c in 0..f.degree() {
                out.push(AlgebraicNumber { minpoly: minpoly.clone(), prime, factor: i, conjugate: c, local: f.clone() });
            }
        }
        Ok(out)
    }

    pub fn rational(q: &Rational, prime: Prime) -> Self {
        let mp = super::numfield::rational_minpoly(q);
        Self::branches(&mp, prime).expect("linear polynomials factor exactly").remove(0)
    }

    /// Branch number `index` in the order of [`Self::branches`].
    pub fn branch(minpoly: &IntPolynomial, prime: Prime, index: usize) -> Result<Self> {
        let mut all = Self::branches(minpoly, prime)?;
        if index >= all.len() {
            return Err(Error::Precondition(format!("branch {index} out of range for {minpoly}")));
        }
        Ok(all.swap_remove(index))
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn height(&self) -> num_bigint::BigInt {
        self.minpoly.height()
    }

    pub fn factor_index(&self) -> usize {
        self.factor
    }

    pub fn conjugate_index(&self) -> usize {
        self.conjugate
    }

    /// Flat index among all roots of the minimal polynomial.
    pub fn branch_index(&self) -> Result<usize> {
        let all = Self::branches(&self.minpoly, self.prime)?;
        Ok(all.iter().position(|b| b == self).expect("branch of its own polynomial"))
    }

    pub fn local_factor(&self) -> &QpFactor {
        &self.local
    }

    /// Degree of `Q_p(α)` over `Q_p`.
    pub fn local_degree(&self) -> usize {
        self.local.degree()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.minpoly.linear_root()
    }

    /// `ν(α)`.
    pub fn valuation(&self) -> &Valuation {
        &self.local.root_valuation
    }

    /// `α` as the generator of `Q(α)`.
    pub fn as_field_element(&self) -> NumberFieldElement {
        NumberFieldElement::generator(&self.minpoly)
    }

    /// `ν(x(α))` for `x ∈ Q(α)` at this embedding, computed from the norm
    /// of `x` in the local field `Q_p(α)`.
    pub fn valuation_of(&self, x: &NumberFieldElement) -> Result<Valuation> {
        if x.modulus() != &self.minpoly {
            return Err(Error::Precondition("element of a different number field".into()));
        }
        if x.is_zero() {
            return Ok(Valuation::Infinity);
        }
        if let Some(q) = x.as_rational() {
            return vp_rational(&q, self.prime.get());
        }
        let mut prec = self.local.precision.max(DEFAULT_PRECISION);
        let mut local = self.local.clone();
        loop {
            match local_valuation(&local, self.prime, x.value()) {
                Err(Error::InsufficientPrecision(msg)) => {
                    if prec >= MAX_PRECISION {
                        return Err(Error::InsufficientPrecision(msg));
                    }
                    prec *= 4;
                    let fz = qp_factorization(&self.minpoly, self.prime, prec)?;
                    local = fz.factors[self.factor].clone();
                }
                other => return other,
            }
        }
    }
}

fn local_valuation(local: &QpFactor, prime: Prime, value: &QPoly) -> Result<Valuation> {
    let p = prime.get();
    let ext = local.extension(prime)?;
    // the extension's generator is p^s·α
    let s = match &local.root_valuation {
        Valuation::Finite(v) if v < &Rational::zero() => (-v).ceil().to_integer().try_into().unwrap_or(0i64),
        _ => 0,
    };
    let coords = QPoly::new(
        value.coeffs().iter().enumerate().map(|(i, c)| c * pow_rat(p, -s * i as i64)).collect(),
    )
    .rem(ext.defining())?;
    let prec = ext.precision().unwrap_or(local.precision).max(1);
    let elem = ExtElement::new(&ext, coords.coeffs().to_vec(), prec)?;
    Ok(Valuation::Finite(ext_valuation(&elem)?))
}

/// `ν(α)` of an algebraic number at its branch.
pub fn abs_of_algebraic(alpha: &AlgebraicNumber) -> Valuation {
    alpha.valuation().clone()
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "root[{}.{}] of {}", self.factor, self.conjugate, self.minpoly),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn valuations_of_branches() {
        let s5 = AlgebraicNumber::branches(&IntPolynomial::from_i64(&[-5, 0, 1]), p(5)).unwrap();
        assert_eq!(s5.len(), 2);
        assert_eq!(abs_of_algebraic(&s5[0]), Valuation::Finite(rat(1, 2)));
        let s2 = AlgebraicNumber::branch(&IntPolynomial::from_i64(&[-2, 0, 1]), p(5), 0).unwrap();
        assert_eq!(abs_of_algebraic(&s2), Valuation::int(0));
        let zero = AlgebraicNumber::rational(&rat(0, 1), p(5));
        assert_eq!(abs_of_algebraic(&zero), Valuation::Infinity);
        // consistent with ext_valuation of the generator
        assert_eq!(s5[0].valuation_of(&s5[0].as_field_element()).unwrap(), Valuation::Finite(rat(1, 2)));
    }

    #[test]
    fn element_valuations_at_split_branches() {
        // x^2 - 2 splits at 7; 3 - √2 vanishes to order >= 1 at the branch √2 ≡ 3
        let m = IntPolynomial::from_i64(&[-2, 0, 1]);
        let bs = AlgebraicNumber::branches(&m, p(7)).unwrap();
        let x = NumberFieldElement::new(&m, QPoly::from_ints(&[3, -1]));
        let vals: Vec<Valuation> = bs.iter().map(|b| b.valuation_of(&x).unwrap()).collect();
        assert!(vals.contains(&Valuation::int(0)));
        assert!(vals.iter().any(|v| v >= &Valuation::int(1)));
        // norm (9 - 2) = 7 splits as 7^1 · 7^0
        assert_eq!(vals.iter().map(|v| v.expect_finite().clone()).sum::<Rational>(), rat(1, 1));
    }

    #[test]
    fn negative_valuation_roots() {
        let bs = AlgebraicNumber::branches(&IntPolynomial::from_i64(&[-1, 0, 5]), p(5)).unwrap();
        assert_eq!(bs[0].valuation(), &Valuation::Finite(rat(-1, 2)));
        let inv = bs[0].as_field_element().inv().unwrap();
        assert_eq!(bs[0].valuation_of(&inv).unwrap(), Valuation::Finite(rat(1, 2)));
    }
}
