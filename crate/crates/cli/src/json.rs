//! JSON views of library values. Integers and rationals are strings so
//! that no value is rounded.

use num_bigint::BigInt;
use serde_json::{json, Value};

use padic_exceptional::algebraic::{AlgebraicNumber, NumberFieldElement};
use padic_exceptional::constructions::{
    CertificateStep, DistanceBound, Membership, NonAlgebraicityCertificate, Verdict,
};
use padic_exceptional::newton::NewtonPolygon;
use padic_exceptional::series::{EvalResult, RadiusReport};
use padic_exceptional::weierstrass::{PrepResult, Prop1Report};
use padic_exceptional::{IntPolynomial, QPoly, Radius, Rational, Valuation};

pub fn int(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn rat(q: &Rational) -> Value {
    json!({ "num": q.numer().to_string(), "den": q.denom().to_string() })
}

pub fn val(v: &Valuation) -> Value {
    match v {
        Valuation::Infinity => Value::String("inf".into()),
        Valuation::Finite(q) => rat(q),
    }
}

pub fn opt_val(v: &Option<Valuation>) -> Value {
    v.as_ref().map_or(Value::Null, val)
}

pub fn radius(r: &Radius) -> Value {
    match r {
        Radius::Infinity => Value::String("infinity".into()),
        Radius::Finite(e) => rat(e),
    }
}

pub fn ipoly(q: &IntPolynomial) -> Value {
    Value::Array(q.coeffs().iter().map(int).collect())
}

pub fn qpoly(q: &QPoly) -> Value {
    Value::Array(q.coeffs().iter().map(rat).collect())
}

pub fn element(x: &NumberFieldElement) -> Value {
    json!({ "modulus": ipoly(x.modulus()), "value": qpoly(x.value()) })
}

pub fn algebraic(a: &AlgebraicNumber) -> Value {
    json!({
        "minpoly": ipoly(a.minpoly()),
        "branch": a.branch_index().ok(),
        "degree": a.degree(),
        "valuation": val(a.valuation()),
        "display": a.to_string(),
    })
}

pub fn radius_report(r: &RadiusReport) -> Value {
    json!({
        "prefix_sup": r.prefix_sup.as_ref().map_or(Value::Null, rat),
        "witnesses": r.witnesses,
        "certified": r.certified.as_ref().map_or(Value::Null, radius),
    })
}

pub fn eval(e: &EvalResult) -> Value {
    json!({ "value": element(&e.value), "terms": e.terms, "tail_valuation": opt_val(&e.tail_valuation) })
}

pub fn newton(np: &NewtonPolygon) -> Value {
    json!({
        "zero_order": np.zero_order,
        "segments": np.segments.iter().map(|s| json!({
            "start": s.start, "length": s.length, "slope": rat(&s.slope), "root_valuation": rat(&s.root_valuation()),
        })).collect::<Vec<_>>(),
    })
}

fn bound(b: &DistanceBound) -> Value {
    match b {
        DistanceBound::ConjugateSquared { degree, height, square } => {
            json!({ "kind": "conjugate-squared", "degree": degree, "height": int(height), "square": rat(square) })
        }
        DistanceBound::General { candidate_degree, candidate_height, bound } => json!({
            "kind": "general",
            "candidate_degree": candidate_degree,
            "candidate_height": int(candidate_height),
            "factor": rat(&bound.factor),
            "p_exponent": rat(&bound.p_exponent),
        }),
    }
}

fn step(s: &CertificateStep) -> Value {
    json!({
        "n": s.n,
        "gamma": element(&s.gamma),
        "gamma_minpoly": ipoly(&s.gamma_minpoly),
        "gamma_height": int(&s.gamma_height),
        "gamma_valuation": val(&s.gamma_valuation),
        "tail_valuation": rat(&s.tail_valuation),
        "tail_rule": s.tail_rule.name(),
        "candidates": s.candidates,
        "worst": s.worst.as_ref().map_or(Value::Null, |(q, b)| json!({ "candidate": ipoly(q), "bound": bound(b) })),
        "separated": s.separated,
        "gamma_is_candidate": s.gamma_is_candidate,
    })
}

pub fn certificate(c: &NonAlgebraicityCertificate) -> Value {
    let (verdict, n, reason) = match &c.verdict {
        Verdict::Certified { n } => ("certified", Some(*n), None),
        Verdict::BudgetExceeded(r) => ("budget-exceeded", None, Some(r.clone())),
    };
    json!({
        "beta": algebraic(&c.beta),
        "l": c.max_degree,
        "h_max": int(&c.max_height),
        "steps": c.steps.iter().map(step).collect::<Vec<_>>(),
        "closing": c.closing.as_ref().map_or(Value::Null, |g| json!({
            "n": g.n, "gap_valuation": rat(&g.gap_valuation), "next_tail_valuation": rat(&g.next_tail_valuation),
        })),
        "verdict": verdict,
        "n": n,
        "reason": reason,
        "not_a_certificate": c.not_a_certificate,
    })
}

pub fn prep(r: &PrepResult) -> Value {
    json!({
        "N": r.n,
        "g": qpoly(&r.g),
        "h": qpoly(&r.h),
        "v": rat(&r.v),
        "weights": r.weights.iter().map(val).collect::<Vec<_>>(),
        "residual": val(&r.residual),
        "tail_gap": opt_val(&r.tail_gap),
        "gap": val(&r.gap),
        "iterations": r.iterations,
        "unit_certified": r.unit_certified,
    })
}

pub fn prop1(r: &Prop1Report) -> Value {
    json!({
        "beta": element(&r.beta),
        "beta_exact": r.beta_exact,
        "beta_minpoly": ipoly(&r.beta_minpoly),
        "v": rat(&r.v),
        "prep": prep(&r.prep),
        "local_factor": qpoly(&r.local_factor),
        "remainder_weight": val(&r.remainder_weight),
        "divides_to": r.divides_to,
        "conjugates": r.conjugates.iter().map(|c| json!({
            "branch": c.branch, "value_valuation": val(&c.value_valuation), "is_root": c.is_root,
        })).collect::<Vec<_>>(),
    })
}

pub fn membership(m: &Membership) -> Value {
    json!({
        "step": m.step,
        "point": m.point,
        "value": rat(&m.value),
        "holds": m.holds,
        "margin": opt_val(&m.margin),
    })
}
