//! Weierstrass preparation relative to a closed ball `|z| ≤ p^{−v}` and
//! the conjugate-propagation check built on it.

use num_traits::{One, Zero};

use crate::algebraic::{minpoly_of_element, qp_factorization, AlgebraicNumber, NumberFieldElement};
use crate::arith::{ceil_rat, rat, Rational};
use crate::error::{Error, Result};
use crate::newton::NewtonPolygon;
use crate::padic::{vp_rational, PAdicScalar, Prime, Valuation};
use crate::poly::{IntPolynomial, QPoly};
use crate::series::TruncatedSeries;

/// Weights `w_n = ν(b_n) + n·v` of a truncated series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussNormView {
    pub prime: Prime,
    pub v: Rational,
    pub weights: Vec<Valuation>,
    /// Lower bound on the weights past the prefix, if known.
    pub tail_weight: Option<Valuation>,
}

impl GaussNormView {
    pub fn new(f: &TruncatedSeries, v: &Rational) -> Result<Self> {
        let weights = f.valuations().iter().enumerate().map(|(i, nu)| nu.add_scaled(i as i64, v)).collect();
        let tail_weight = match f.tail() {
            Some(rule) => Some(rule.bound_at(f.prime(), f.last_index(), &Valuation::Finite(v.clone()))?),
            None => None,
        };
        Ok(GaussNormView { prime: f.prime(), v: v.clone(), weights, tail_weight })
    }

    fn from_coeffs(prime: Prime, coeffs: &[Rational], v: &Rational, tail_weight: Option<Valuation>) -> Result<Self> {
        let weights = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| Ok(vp_rational(c, prime.get())?.add_scaled(i as i64, v)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GaussNormView { prime, v: v.clone(), weights, tail_weight })
    }

    /// Smallest weight over the prefix.
    pub fn min_weight(&self) -> Valuation {
        self.weights.iter().cloned().min().unwrap_or(Valuation::Infinity)
    }

    /// `min weight` when the tail provably stays strictly above it.
    fn resolved_min(&self) -> Result<Rational> {
        let Valuation::Finite(m) = self.min_weight() else {
            return Err(Error::UnresolvedTail("the known prefix vanishes".into()));
        };
        match &self.tail_weight {
            Some(t) if t > &Valuation::Finite(m.clone()) => Ok(m),
            Some(t) => Err(Error::UnresolvedTail(format!("tail weight bound {t} does not exceed the prefix minimum {m}"))),
            None => Err(Error::UnresolvedTail("no tail bound".into())),
        }
    }
}

/// Largest index of minimal weight: `|b_N|c^N = max_n |b_n|c^n`.
pub fn select_n(view: &GaussNormView) -> Result<usize> {
    let m = Valuation::Finite(view.resolved_min()?);
    Ok(view.weights.iter().rposition(|w| *w == m).unwrap())
}

/// Number of zeros with valuation `≥ v`, read off the Newton polygon.
pub fn zeros_in_ball(f: &TruncatedSeries, v: &Rational) -> Result<usize> {
    let view = GaussNormView::new(f, v)?;
    view.resolved_min()?;
    Ok(NewtonPolygon::from_valuations(&f.valuations()).count_roots_at_least(v))
}

fn weight(c: &Rational, i: usize, v: &Rational, p: u64) -> Valuation {
    vp_rational(c, p).expect("valid prime").add_scaled(i as i64, v)
}

fn poly_weight(q: &QPoly, v: &Rational, p: u64) -> Valuation {
    q.coeffs().iter().enumerate().map(|(i, c)| weight(c, i, v, p)).min().unwrap_or(Valuation::Infinity)
}

/// Drops p-adic digits of weight `≥ cut`.
fn cut_poly(q: &QPoly, v: &Rational, cut: &Rational, prime: Prime) -> Result<QPoly> {
    let coeffs = q
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| cut_coeff(&PAdicScalar::from_rational(c, prime), i, v, cut))
        .collect::<Result<Vec<_>>>()?;
    Ok(QPoly::new(coeffs))
}

fn cut_coeff(c: &PAdicScalar, i: usize, v: &Rational, cut: &Rational) -> Result<Rational> {
    let k = ceil_rat(&(cut - v * rat(i as i64, 1)));
    let k = i64::try_from(k).map_err(|_| Error::BudgetExceeded("precision exceeds i64".into()))?;
    c.approximate(k)
}

/// `f ≈ g·h` with `g` monic of degree `N` and `h` a unit on the ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrepResult {
    pub n: usize,
    pub g: QPoly,
    pub h: QPoly,
    pub v: Rational,
    pub weights: Vec<Valuation>,
    /// `min weight(f − g·h) − min weight(f)` over the prefix.
    pub residual: Valuation,
    /// `tail weight − min weight(f)`.
    pub tail_gap: Option<Valuation>,
    /// `min_{i≥1} w(h_i) − w(h_0)`, the contraction per iteration.
    pub gap: Valuation,
    pub iterations: usize,
    pub unit_certified: bool,
}

/// Weierstrass preparation of `f` at radius `p^{−v}` to relative weight
/// `target`.
pub fn weierstrass_prep(f: &TruncatedSeries, v: &Rational, target: i64) -> Result<PrepResult> {
    let view = GaussNormView::new(f, v)?;
    let m = view.resolved_min()?;
    let cut = &m + rat(target + 2, 1);
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| cut_coeff(c, i, v, &cut))
        .collect::<Result<Vec<_>>>()?;
    prep_coeffs(f.prime(), &coeffs, v, view.tail_weight, target, Some(view.weights))
}

fn prep_coeffs(
    prime: Prime,
    coeffs: &[Rational],
    v: &Rational,
    tail_weight: Option<Valuation>,
    target: i64,
    weights: Option<Vec<Valuation>>,
) -> Result<PrepResult> {
    let p = prime.get();
    let view = GaussNormView::from_coeffs(prime, coeffs, v, tail_weight.clone())?;
    let view = GaussNormView { weights: weights.unwrap_or(view.weights), ..view };
    let n = select_n(&view)?;
    let m = view.resolved_min()?;
    let f = QPoly::new(coeffs.to_vec());
    let cut = &m + rat(target + 2, 1);
    // g carries weights relative to the unit's w(h_0) = m − N·v
    let g_cut = &cut - (&m - v * rat(n as i64, 1));
    let q_cut = &cut - v * rat(n as i64, 1);
    let lead = coeffs[n].clone();
    let mut g = QPoly::new(coeffs[..=n].to_vec()).scale(&(Rational::one() / &lead));
    g = cut_poly(&g, v, &g_cut, prime)?;
    let want = Valuation::Finite(&m + rat(target, 1));
    let mut iterations = 0;
    loop {
        let (q, r) = f.div_rem(&g)?;
        let q = cut_poly(&q, v, &q_cut, prime)?;
        let h0 = q.coeff(0);
        if h0.is_zero() {
            return Err(Error::PrecisionExhausted("unit factor lost its constant term".into()));
        }
        let w0 = weight(&h0, 0, v, p);
        let gap = (1..=q.degree().unwrap_or(0))
            .map(|i| weight(&q.coeff(i), i, v, p))
            .min()
            .map_or(Valuation::Infinity, |w| match (w, &w0) {
                (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
                _ => Valuation::Infinity,
            });
        let resid = f.sub(&g.mul(&q));
        let rw = poly_weight(&resid, v, p);
        if rw >= want {
            return finish(prime, v, n, g, q, &m, coeffs, tail_weight, gap, iterations);
        }
        if gap <= Valuation::int(0) {
            return Err(Error::PrecisionExhausted(format!("unit factor not dominant; residual weight {rw}")));
        }
        iterations += 1;
        let max_iter = match &gap {
            Valuation::Finite(gp) => ceil_rat(&(rat(target + 2, 1) / gp)).try_into().unwrap_or(usize::MAX).saturating_add(8),
            Valuation::Infinity => 8,
        };
        if iterations > max_iter {
            return Err(Error::PrecisionExhausted(format!("residual weight {rw} after {iterations} iterations")));
        }
        g = cut_poly(&g.add(&r.scale(&(Rational::one() / &h0))), v, &g_cut, prime)?;
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    prime: Prime,
    v: &Rational,
    n: usize,
    g: QPoly,
    h: QPoly,
    m: &Rational,
    coeffs: &[Rational],
    tail_weight: Option<Valuation>,
    gap: Valuation,
    iterations: usize,
) -> Result<PrepResult> {
    let p = prime.get();
    let f = QPoly::new(coeffs.to_vec());
    let resid = f.sub(&g.mul(&h));
    let rel = |w: Valuation| match w {
        Valuation::Finite(x) => Valuation::Finite(x - m),
        Valuation::Infinity => Valuation::Infinity,
    };
    let weights = (0..coeffs.len()).map(|i| weight(&coeffs[i], i, v, p)).collect();
    let h_series = TruncatedSeries::from_rationals(prime, h.coeffs(), Some(crate::series::TailRule::Zero))?;
    let unit_certified = zeros_in_ball(&h_series, v)? == 0;
    Ok(PrepResult {
        n,
        g,
        h,
        v: v.clone(),
        weights,
        residual: rel(poly_weight(&resid, v, p)),
        tail_gap: tail_weight.map(rel),
        gap,
        iterations,
        unit_certified,
    })
}

/// A conjugate branch `α'` with the valuation of `P_β(f(α'))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugateCheck {
    pub branch: usize,
    pub value_valuation: Valuation,
    /// `ν(P_β(f(α')))` is exactly infinite or at least the tail bound.
    pub is_root: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop1Report {
    pub beta: NumberFieldElement,
    pub beta_exact: bool,
    pub beta_minpoly: IntPolynomial,
    pub v: Rational,
    pub prep: PrepResult,
    pub local_factor: QPoly,
    /// `min weight(g_β mod local factor) − N·v`.
    pub remainder_weight: Valuation,
    pub divides_to: i64,
    pub conjugates: Vec<ConjugateCheck>,
}

/// Propagation of `f(α) = β` to the `Q_p`-conjugates of `α`.
pub fn prop1_check(f: &TruncatedSeries, alpha: &AlgebraicNumber, exact_value: Option<&NumberFieldElement>, precision: i64) -> Result<Prop1Report> {
    if alpha.local_degree() < 2 {
        return Err(Error::Precondition(format!("{alpha} has local degree 1")));
    }
    let prime = f.prime();
    let p = prime.get();
    let terms = f.last_index();
    let (beta, beta_exact) = match exact_value {
        Some(b) => (b.clone(), true),
        None => (f.eval_at(alpha, terms)?.value, false),
    };
    let beta_minpoly = minpoly_of_element(&beta);
    let Valuation::Finite(v) = alpha.valuation().clone() else {
        return Err(Error::Precondition("α = 0".into()));
    };

    // f_β = P_β(f) from the prefix, digits beyond the cut dropped
    let view = GaussNormView::new(f, &v)?;
    let Valuation::Finite(wf) = view.min_weight() else {
        return Err(Error::UnresolvedTail("the known prefix vanishes".into()));
    };
    let k = beta_minpoly.degree();
    let floor = wf.clone().min(Rational::zero());
    let cut = &wf + rat(2 * precision + 16, 1) - &floor * rat(k as i64, 1);
    let fc = QPoly::new(f.coeffs().iter().enumerate().map(|(i, c)| cut_coeff(c, i, &v, &cut)).collect::<Result<Vec<_>>>()?);
    let mut fb = QPoly::zero();
    for c in beta_minpoly.coeffs().iter().rev() {
        fb = fb.mul(&fc).add(&QPoly::constant(Rational::from_integer(c.clone())));
    }
    // dropped digits and the series tail reach f_β at weight ≥ err
    let low = match &view.tail_weight {
        Some(Valuation::Finite(t)) => t.clone().min(wf.clone()).min(Rational::zero()),
        Some(Valuation::Infinity) => floor.clone(),
        None => return Err(Error::UnresolvedTail("no tail bound".into())),
    };
    let mut err = Valuation::Finite(cut + &low * rat(k as i64 - 1, 1));
    if let Some(t) = &view.tail_weight {
        err = err.min(t.clone().add_scaled(k as i64 - 1, &low).min(t.clone()));
    }
    let coeffs = fb.coeffs().to_vec();
    let prep = prep_coeffs(prime, &coeffs, &v, Some(err.clone()), precision, None)?;

    let fz = qp_factorization(alpha.minpoly(), prime, (precision + 10).max(30))?;
    let local = fz.factors[alpha.factor_index()].poly.clone();
    let (_, rem) = prep.g.div_rem(&local)?;
    let nv = &v * rat(prep.n as i64, 1);
    let remainder_weight = match poly_weight(&rem, &v, p) {
        Valuation::Finite(w) => Valuation::Finite(w - &nv),
        Valuation::Infinity => Valuation::Infinity,
    };
    let bar = Valuation::Finite(rat(precision, 1));
    if remainder_weight < bar || prep.residual < bar {
        return Err(Error::DivisibilityUndecided(format!(
            "remainder weight {remainder_weight}, residual {} below {precision}",
            prep.residual
        )));
    }

    let mut conjugates = Vec::new();
    let fb_series = TruncatedSeries::from_rationals(prime, &coeffs, None)?;
    for other in AlgebraicNumber::branches(alpha.minpoly(), prime)? {
        if other.factor_index() != alpha.factor_index() {
            continue;
        }
        let val = fb_series.eval_at(&other, fb_series.last_index())?.value;
        let nu = other.valuation_of(&val)?;
        let is_root = nu.is_infinite() || nu >= err.clone().min(Valuation::Finite(rat(precision, 1)));
        conjugates.push(ConjugateCheck { branch: other.branch_index()?, value_valuation: nu, is_root });
    }
    Ok(Prop1Report {
        beta,
        beta_exact,
        beta_minpoly,
        v,
        prep,
        local_factor: local,
        remainder_weight,
        divides_to: precision,
        conjugates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::TailRule;

    fn series(p: u64, c: &[i64]) -> TruncatedSeries {
        let c: Vec<Rational> = c.iter().map(|&x| rat(x, 1)).collect();
        TruncatedSeries::from_rationals(Prime::new(p).unwrap(), &c, Some(TailRule::Zero)).unwrap()
    }

    #[test]
    fn selection_examples() {
        let f = series(5, &[1, 1, 5]);
        assert_eq!(select_n(&GaussNormView::new(&f, &rat(0, 1)).unwrap()).unwrap(), 1);
        let f = series(5, &[5, 1]);
        assert_eq!(select_n(&GaussNormView::new(&f, &rat(0, 1)).unwrap()).unwrap(), 1);
        assert_eq!(zeros_in_ball(&f, &rat(0, 1)).unwrap(), 1);
        assert_eq!(select_n(&GaussNormView::new(&f, &rat(1, 1)).unwrap()).unwrap(), 1);
    }

    #[test]
    fn zero_counts() {
        // (z − 1)(z − 5)
        let f = series(5, &[5, -6, 1]);
        assert_eq!(zeros_in_ball(&f, &rat(1, 1)).unwrap(), 1);
        assert_eq!(zeros_in_ball(&f, &rat(0, 1)).unwrap(), 2);
        assert_eq!(zeros_in_ball(&series(5, &[1, 5]), &rat(0, 1)).unwrap(), 0);
        let open = TruncatedSeries::from_rationals(Prime::new(5).unwrap(), &[rat(1, 1)], None).unwrap();
        assert!(matches!(zeros_in_ball(&open, &rat(0, 1)), Err(Error::UnresolvedTail(_))));
    }

    #[test]
    fn recovers_product() {
        // (z² − 2)(1 + 5z + 25z³) at p = 5, v = 0
        let g = QPoly::from_ints(&[-2, 0, 1]);
        let h = QPoly::from_ints(&[1, 5, 0, 25]);
        let c: Vec<i64> = g.mul(&h).coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect();
        let r = weierstrass_prep(&series(5, &c), &rat(0, 1), 10).unwrap();
        assert_eq!(r.n, 2);
        assert!(r.residual >= Valuation::int(10));
        assert!(r.unit_certified);
        let diff = r.g.sub(&g);
        assert!(poly_weight(&diff, &rat(0, 1), 5) >= Valuation::int(10));
    }

    #[test]
    fn exp_has_no_zeros_in_small_ball() {
        let f = crate::series::builtin_series(crate::series::Builtin::Exp, Prime::new(5).unwrap(), 30).unwrap();
        let r = weierstrass_prep(&f, &rat(1, 1), 10).unwrap();
        assert_eq!(r.n, 0);
        assert!(r.unit_certified);
    }

    #[test]
    fn conjugate_propagation_walkthrough() {
        use crate::algebraic::SetMember;
        use crate::constructions::{build_h, ExceptionalSetSpec, SetMode, Theorem1Config, Theorem1State};
        use crate::padic::Radius;
        let p = Prime::new(5).unwrap();
        let sq2 = IntPolynomial::from_i64(&[-2, 0, 1]);
        let members = vec![SetMember::all_roots(IntPolynomial::z()), SetMember::all_roots(sq2.clone())];
        let spec = ExceptionalSetSpec::new(p, Radius::Infinity, members, SetMode::FullConjugacy).unwrap();
        let mut st = Theorem1State::new(spec, Theorem1Config::default()).unwrap();
        let h = build_h(&mut st, 2).unwrap();
        let alpha = AlgebraicNumber::branch(&sq2, p, 0).unwrap();
        let beta = h.exact_value_at(&alpha).unwrap().unwrap();
        let r = prop1_check(&h.series, &alpha, Some(&beta), 10).unwrap();
        assert_eq!(r.beta_minpoly, IntPolynomial::from_i64(&[-11, 1]));
        assert_eq!(r.prep.n, 2);
        assert!(poly_weight(&r.prep.g.sub(&QPoly::from_ints(&[-2, 0, 1])), &rat(0, 1), 5) >= Valuation::int(10));
        assert_eq!(r.conjugates.len(), 2);
        assert!(r.conjugates.iter().all(|c| c.is_root));
        let one = AlgebraicNumber::rational(&rat(1, 1), p);
        assert!(matches!(prop1_check(&h.series, &one, None, 10), Err(Error::Precondition(_))));
    }
}
