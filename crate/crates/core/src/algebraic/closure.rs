use super::number::AlgebraicNumber;
use crate::error::{Error, Result};
use crate::padic::{Prime, Radius};
use crate::poly::IntPolynomial;

/// One polynomial of an exceptional-set description, optionally
/// restricted to some of its roots (flat branch indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetMember {
    pub poly: IntPolynomial,
    pub branches: Option<Vec<usize>>,
}

impl SetMember {
    pub fn all_roots(poly: IntPolynomial) -> Self {
        SetMember { poly, branches: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureWitness {
    pub poly: IntPolynomial,
    /// Offending root, when a single root is to blame.
    pub branch: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub closed: bool,
    pub witness: Option<ClosureWitness>,
}

impl ClosureReport {
    fn ok() -> Self {
        ClosureReport { closed: true, witness: None }
    }

    fn fail(poly: &IntPolynomial, branch: Option<usize>, reason: String) -> Self {
        ClosureReport { closed: false, witness: Some(ClosureWitness { poly: poly.clone(), branch, reason }) }
    }
}

fn selected(member: &SetMember, n: usize) -> Result<Vec<bool>> {
    let mut sel = vec![member.branches.is_none(); n];
    for &b in member.branches.iter().flatten() {
        if b >= n {
            return Err(Error::Precondition(format!("branch {b} out of range for {}", member.poly)));
        }
        sel[b] = true;
    }
    Ok(sel)
}

fn check(members: &[SetMember], prime: Prime, rho: &Radius, over_qp: bool) -> Result<ClosureReport> {
    for m in members {
        let roots = AlgebraicNumber::branches(&m.poly, prime)?;
        let sel = selected(m, roots.len())?;
        for (i, r) in roots.iter().enumerate() {
            if !sel[i] {
                let partner = roots.iter().enumerate().any(|(j, s)| sel[j] && s.factor_index() == r.factor_index());
                if !over_qp || partner {
                    let kind = if over_qp { "Q_p-conjugate" } else { "conjugate" };
                    return Ok(ClosureReport::fail(&m.poly, Some(i), format!("{kind} root {r} is missing")));
                }
                continue;
            }
            if !rho.contains(r.valuation()) {
                return Ok(ClosureReport::fail(
                    &m.poly,
                    Some(i),
                    format!("root {r} of valuation {} lies outside the ball |z| < {rho}", r.valuation()),
                ));
            }
        }
    }
    Ok(ClosureReport::ok())
}

/// Closure under conjugation over `Q`: each polynomial is taken with all
/// of its roots, and every root lies in `B(0, ρ)`.
pub fn is_conjugation_closed(members: &[SetMember], prime: Prime, rho: &Radius) -> Result<ClosureReport> {
    check(members, prime, rho, false)
}

/// The weaker closure under `Q_p`-conjugation: selected roots form whole
/// `Q_p`-irreducible factors.
pub fn is_qp_conjugation_closed(members: &[SetMember], prime: Prime, rho: &Radius) -> Result<ClosureReport> {
    check(members, prime, rho, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn all(c: &[i64]) -> SetMember {
        SetMember::all_roots(IntPolynomial::from_i64(c))
    }

    #[test]
    fn full_sets() {
        let s = [all(&[0, 1]), all(&[-2, 0, 1])];
        assert!(is_conjugation_closed(&s, p(5), &Radius::Infinity).unwrap().closed);
    }

    #[test]
    fn single_branch_is_refused() {
        let s = [all(&[0, 1]), SetMember { poly: IntPolynomial::from_i64(&[-2, 0, 1]), branches: Some(vec![0]) }];
        let r = is_conjugation_closed(&s, p(5), &Radius::Infinity).unwrap();
        assert!(!r.closed);
        assert_eq!(r.witness.unwrap().branch, Some(1));
        // √2 is Q_5-irreducible, so even the weaker check fails
        assert!(!is_qp_conjugation_closed(&s, p(5), &Radius::Infinity).unwrap().closed);
        // at p=7 the two roots are separate Q_7 points
        assert!(is_qp_conjugation_closed(&s, p(7), &Radius::Infinity).unwrap().closed);
        assert!(!is_conjugation_closed(&s, p(7), &Radius::Infinity).unwrap().closed);
    }

    #[test]
    fn ball_condition() {
        let s = [all(&[0, 1]), all(&[-5, 0, 1])];
        assert!(is_conjugation_closed(&s, p(5), &Radius::Finite(rat(1, 4))).unwrap().closed);
        let r = is_conjugation_closed(&s, p(5), &Radius::Finite(rat(-1, 1))).unwrap();
        assert!(!r.closed);
    }
}
