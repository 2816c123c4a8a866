use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{cmp_ppow, rat_int, Rational};
use crate::padic::Valuation;

/// Square of the conjugate bound `2^{−3n/2} n^{−5n/2} H^{−2n}`, i.e.
/// `2^{−3n} n^{−5n} H^{−4n}`.
pub fn liouville_bound_conjugates(n: u32, h: &BigInt) -> Rational {
    let n_big = BigInt::from(n);
    let den = num_traits::pow(BigInt::from(2), 3 * n as usize)
        * num_traits::pow(n_big, 5 * n as usize)
        * num_traits::pow(h.clone(), 4 * n as usize);
    Rational::new(BigInt::one(), den)
}

/// General bound `r · p^{e}` where `r = (n+1)^{−m}(m+1)^{−n}H_α^{−m}H_β^{−n}`
/// and `p^{e} = max{1, p^{−ν_α}}·max{1, p^{−ν_β}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralBound {
    pub factor: Rational,
    pub p_exponent: Rational,
}

impl GeneralBound {
    /// The bound as a rational when the exponent is an integer.
    pub fn to_rational(&self, p: u64) -> Option<Rational> {
        if !self.p_exponent.denom().is_one() {
            return None;
        }
        let e: i64 = self.p_exponent.numer().try_into().ok()?;
        Some(&self.factor * crate::arith::pow_rat(p, e))
    }
}

fn neg_part(v: &Valuation) -> Rational {
    match v {
        Valuation::Finite(q) if q.is_negative() => -q.clone(),
        _ => Rational::zero(),
    }
}

pub fn liouville_bound_general(n: u32, m: u32, h_alpha: &BigInt, h_beta: &BigInt, nu_alpha: &Valuation, nu_beta: &Valuation) -> GeneralBound {
    let den = num_traits::pow(BigInt::from(n + 1), m as usize)
        * num_traits::pow(BigInt::from(m + 1), n as usize)
        * num_traits::pow(h_alpha.clone(), m as usize)
        * num_traits::pow(h_beta.clone(), n as usize);
    GeneralBound { factor: Rational::new(BigInt::one(), den), p_exponent: neg_part(nu_alpha) + neg_part(nu_beta) }
}

/// Compares the distance `p^{−ν}` with `sqrt(bound_sq)`.
pub fn cmp_distance_conjugate(p: u64, nu: &Rational, bound_sq: &Rational) -> Ordering {
    cmp_ppow(p, &(-nu * rat_int(BigInt::from(2))), bound_sq)
}

/// Compares the distance `p^{−ν}` with a general bound.
pub fn cmp_distance_general(p: u64, nu: &Rational, bound: &GeneralBound) -> Ordering {
    cmp_ppow(p, &(-nu - &bound.p_exponent), &bound.factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn conjugate_bound_values() {
        // squares of 2^-12 and 2^-8
        assert_eq!(liouville_bound_conjugates(2, &int(2)), rat(1, 1 << 24));
        assert_eq!(liouville_bound_conjugates(2, &int(1)), rat(1, 1 << 16));
        // p=7, |2√2| = 1 >= 2^-12
        assert_eq!(cmp_distance_conjugate(7, &rat(0, 1), &liouville_bound_conjugates(2, &int(2))), Ordering::Greater);
    }

    #[test]
    fn general_bound_values() {
        let v0 = Valuation::int(0);
        let b = liouville_bound_general(1, 1, &int(6), &int(5), &v0, &v0);
        assert_eq!(b.to_rational(5), Some(rat(1, 120)));
        let b = liouville_bound_general(1, 1, &int(1), &int(1), &v0, &v0);
        assert_eq!(b.to_rational(5), Some(rat(1, 4)));
        // p=5, α=1, β=6: |1−6| = 5^-1 against 2^-1·2^-1·1^-1·6^-1
        let b = liouville_bound_general(1, 1, &int(1), &int(6), &v0, &v0);
        assert_eq!(b.to_rational(5), Some(rat(1, 24)));
        assert_eq!(cmp_distance_general(5, &rat(1, 1), &b), Ordering::Greater);
        // a negative valuation raises the bound
        let b = liouville_bound_general(1, 1, &int(1), &int(5), &Valuation::int(-1), &v0);
        assert_eq!(b.to_rational(5), Some(rat(5, 20)));
    }
}
