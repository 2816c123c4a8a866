use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::theorem1::Theorem1State;
use crate::algebraic::{
    cmp_distance_conjugate, cmp_distance_general, height_of_element, liouville_bound_conjugates, liouville_bound_general,
    minpoly_of_element, AlgebraicNumber, GeneralBound, NumberFieldElement,
};
use crate::arith::{pow_rat, Rational};
use crate::error::{Error, Result};
use crate::padic::Valuation;
use crate::poly::IntPolynomial;
use crate::series::{TailRule, MAX_MATERIALIZED_VALUATION};

/// Certificates give up beyond this block.
pub const MAX_CERTIFICATE_DEPTH: usize = 4;

/// A lower bound on `|v − γ_n|` for a candidate `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistanceBound {
    /// Square of the bound for distinct conjugates of degree `degree`.
    ConjugateSquared { degree: u32, height: BigInt, square: Rational },
    /// Bound for non-conjugate numbers.
    General { candidate_degree: u32, candidate_height: BigInt, bound: GeneralBound },
}

impl DistanceBound {
    /// Compares the distance `p^{−ν}` with this bound.
    pub fn cmp_distance(&self, p: u64, nu: &Rational) -> Ordering {
        match self {
            DistanceBound::ConjugateSquared { square, .. } => cmp_distance_conjugate(p, nu, square),
            DistanceBound::General { bound, .. } => cmp_distance_general(p, nu, bound),
        }
    }
}

/// One step `n`: `γ_n`, the tail after it and the weakest Liouville bound
/// over the candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateStep {
    pub n: usize,
    pub gamma: NumberFieldElement,
    pub gamma_minpoly: IntPolynomial,
    pub gamma_height: BigInt,
    pub gamma_valuation: Valuation,
    /// `|h(β) − γ_n| ≤ p^{−tail_valuation}`.
    pub tail_valuation: Rational,
    pub tail_rule: TailRule,
    pub candidates: usize,
    /// Weakest bound and the candidate polynomial attaining it.
    pub worst: Option<(IntPolynomial, DistanceBound)>,
    /// Every candidate other than `γ_n` is farther than the tail.
    pub separated: bool,
    pub gamma_is_candidate: bool,
}

/// `ν(γ_{n+1} − γ_n)` against the tail after `γ_{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosingGap {
    pub n: usize,
    pub gap_valuation: Rational,
    pub next_tail_valuation: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Certified { n: usize },
    BudgetExceeded(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonAlgebraicityCertificate {
    pub beta: AlgebraicNumber,
    pub max_degree: u32,
    pub max_height: BigInt,
    pub steps: Vec<CertificateStep>,
    pub closing: Option<ClosingGap>,
    pub verdict: Verdict,
    /// Set when the sequences were relaxed.
    pub not_a_certificate: bool,
}

/// Primitive irreducible polynomials of degree `≤ l` and height `≤ H`.
pub fn candidate_polys(l: u32, h_max: &BigInt) -> Result<Vec<IntPolynomial>> {
    if l == 0 {
        return Ok(Vec::new());
    }
    let h = h_max.to_u64().ok_or_else(|| Error::BudgetExceeded("height budget too large".into()))?;
    let size = (2 * h + 1) as f64;
    if size.powi(l as i32 + 1) > 5e6 {
        return Err(Error::BudgetExceeded(format!("candidate space for degree {l}, height {h} too large")));
    }
    let h = h as i64;
    let mut out = Vec::new();
    for deg in 1..=l as usize {
        let mut t = vec![-h; deg + 1];
        t[deg] = 1;
        loop {
            let q = IntPolynomial::from_i64(&t);
            if q.is_primitive() && q.is_irreducible() {
                out.push(q);
            }
            let mut i = 0;
            while i <= deg && t[i] == h {
                t[i] = if i == deg { 1 } else { -h };
                i += 1;
            }
            if i > deg {
                break;
            }
            t[i] += 1;
        }
    }
    Ok(out)
}

/// `β^{ω_k} ∏_{j≤k} P_j(β)` in `Q(β)`.
fn block_value(state: &Theorem1State, beta: &NumberFieldElement, k: usize) -> Result<NumberFieldElement> {
    let shift = state.omega[k].to_u64().ok_or_else(|| Error::BudgetExceeded(format!("ω_{k} too large")))?;
    beta.pow(shift).mul(&beta.eval_poly(&state.block_poly(k)))
}

fn tail_after(state: &Theorem1State, beta: &AlgebraicNumber, n: usize) -> Result<(TailRule, Rational)> {
    let rule = TailRule::Theorem1Tail { delta_next: state.delta[n + 1].clone(), omega_next: state.omega[n + 1].clone() };
    match rule.bound_at(beta.prime(), 0, beta.valuation())? {
        Valuation::Finite(v) => Ok((rule, v)),
        Valuation::Infinity => Err(Error::Precondition("β = 0 lies in S".into())),
    }
}

/// Weakest Liouville bound against `γ` over the candidates.
fn separate(
    p: u64,
    candidates: &[IntPolynomial],
    gamma_minpoly: &IntPolynomial,
    gamma_height: &BigInt,
    gamma_valuation: &Valuation,
    tail: &Rational,
) -> Result<(Option<(IntPolynomial, DistanceBound)>, bool)> {
    let n = gamma_minpoly.degree() as u32;
    let mut worst: Option<(IntPolynomial, DistanceBound)> = None;
    let mut all = true;
    for q in candidates {
        let bound = if q == gamma_minpoly {
            if n == 1 {
                continue;
            }
            DistanceBound::ConjugateSquared { degree: n, height: gamma_height.clone(), square: liouville_bound_conjugates(n, gamma_height) }
        } else {
            // the candidate's own valuation only enlarges the bound
            let m = q.degree() as u32;
            let b = liouville_bound_general(n, m, gamma_height, &q.height(), gamma_valuation, &Valuation::Infinity);
            DistanceBound::General { candidate_degree: m, candidate_height: q.height(), bound: b }
        };
        // the tail beats the bound: p^{−tail} < bound
        if bound.cmp_distance(p, tail) != Ordering::Less {
            all = false;
        }
        let weaker = match &worst {
            None => true,
            Some((_, w)) => bound_lt(p, &bound, w),
        };
        if weaker {
            worst = Some((q.clone(), bound));
        }
    }
    Ok((worst, all))
}

/// Whether bound `a` is smaller than bound `b`.
fn bound_lt(p: u64, a: &DistanceBound, b: &DistanceBound) -> bool {
    // compare squares: a² < b²
    let sq = |d: &DistanceBound| -> (Rational, Rational) {
        match d {
            DistanceBound::ConjugateSquared { square, .. } => (square.clone(), Rational::zero()),
            DistanceBound::General { bound, .. } => (&bound.factor * &bound.factor, &bound.p_exponent * Rational::from_integer(2.into())),
        }
    };
    let (fa, ea) = sq(a);
    let (fb, eb) = sq(b);
    // fa·p^{ea} < fb·p^{eb}  ⇔  p^{eb−ea} > fa/fb
    crate::arith::cmp_ppow(p, &(eb - ea), &(fa / fb)) == Ordering::Greater
}

/// Certifies that `h(β)` is none of the algebraic numbers of degree `≤ l`
/// and height `≤ H_max`.
pub fn certify_not_algebraic(state: &mut Theorem1State, beta: &AlgebraicNumber, l: u32, h_max: &BigInt) -> Result<NonAlgebraicityCertificate> {
    if state.spec.contains(beta)? || state.spec.members.iter().any(|m| m.poly == *beta.minpoly() && m.branches.is_none()) {
        return Err(Error::NotOutsideS(beta.to_string()));
    }
    let p = state.spec.prime.get();
    let candidates = candidate_polys(l, h_max)?;
    let mut cert = NonAlgebraicityCertificate {
        beta: beta.clone(),
        max_degree: l,
        max_height: h_max.clone(),
        steps: Vec::new(),
        closing: None,
        verdict: Verdict::BudgetExceeded(String::new()),
        not_a_certificate: state.config.relaxed,
    };
    if candidates.is_empty() {
        cert.verdict = Verdict::Certified { n: 0 };
        return Ok(cert);
    }
    let b = beta.as_field_element();
    let mut gamma = NumberFieldElement::one(beta.minpoly());
    for n in 1..=MAX_CERTIFICATE_DEPTH {
        state.advance_to(n + 2)?;
        let e = state.delta[n].to_i64().filter(|e| *e <= MAX_MATERIALIZED_VALUATION);
        let Some(e) = e else {
            cert.verdict = Verdict::BudgetExceeded(format!("γ_{n} needs p^{} materialized", state.delta[n]));
            return Ok(cert);
        };
        gamma = gamma.add(&block_value(state, &b, n)?.scale(&pow_rat(p, e)))?;
        let rec = height_of_element(&gamma);
        let gamma_valuation = beta.valuation_of(&gamma)?;
        let (tail_rule, tail) = tail_after(state, beta, n)?;
        let (worst, separated) = separate(p, &candidates, &rec.minpoly, &rec.height, &gamma_valuation, &tail)?;
        let gamma_is_candidate = rec.degree as u32 <= l && &rec.height <= h_max;
        debug_assert_eq!(minpoly_of_element(&gamma), rec.minpoly);
        cert.steps.push(CertificateStep {
            n,
            gamma: gamma.clone(),
            gamma_minpoly: rec.minpoly,
            gamma_height: rec.height,
            gamma_valuation,
            tail_valuation: tail,
            tail_rule,
            candidates: candidates.len(),
            worst,
            separated,
            gamma_is_candidate,
        });
        if !separated {
            continue;
        }
        let step = block_value(state, &b, n + 1)?;
        let Valuation::Finite(vs) = beta.valuation_of(&step)? else {
            return Err(Error::Precondition("β is a root of a polynomial of S".into()));
        };
        let gap = Rational::from_integer(state.delta[n + 1].clone()) + vs;
        let (_, next_tail) = tail_after(state, beta, n + 1)?;
        if gap < next_tail {
            cert.closing = Some(ClosingGap { n, gap_valuation: gap, next_tail_valuation: next_tail });
            cert.verdict = Verdict::Certified { n: n + 1 };
            return Ok(cert);
        }
    }
    cert.verdict = Verdict::BudgetExceeded(format!("no step up to depth {MAX_CERTIFICATE_DEPTH} separates all candidates"));
    Ok(cert)
}
