//! Factorization of rational polynomials over `Q_p` to finite precision:
//! coprime residual splitting by Hensel lifting, and single-slope Newton
//! segments after shifting a repeated linear residual root to the origin.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{pow_rat, pow_u, rat_int, rat_mod_pk, symmetric_mod, vp_int, Rational};
use crate::error::{Error, Result};
use crate::fp::FpPoly;
use crate::newton::{newton_polygon, NewtonPolygon};
use crate::padic::{vp_rational, ExtensionDesc, Prime, Valuation};
use crate::poly::{IntPolynomial, QPoly};

/// One monic `Q_p`-irreducible factor, coefficients known modulo
/// `p^precision` (or exactly).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QpFactor {
    pub poly: QPoly,
    pub precision: i64,
    pub exact: bool,
    pub ramification: usize,
    pub residue_degree: usize,
    /// Common valuation of the factor's roots.
    pub root_valuation: Valuation,
}

impl QpFactor {
    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap()
    }

    /// The extension of `Q_p` generated by a root of this factor.
    pub fn extension(&self, prime: Prime) -> Result<ExtensionDesc> {
        let prec = if self.exact { None } else { Some(self.precision) };
        // scale to p-integral coefficients: roots times p^s
        let s = match &self.root_valuation {
            Valuation::Finite(v) if v.is_negative() => (-v).ceil().to_integer().to_i64().unwrap(),
            _ => 0,
        };
        let m = self.degree();
        let scaled = QPoly::new(
            self.poly.coeffs().iter().enumerate().map(|(i, c)| c * pow_rat(prime.get(), s * (m - i) as i64)).collect(),
        );
        ExtensionDesc::with_indices(prime, scaled, self.ramification, self.residue_degree, prec.map(|k| k - s * m as i64))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QpFactorization {
    pub prime: Prime,
    pub poly: IntPolynomial,
    pub factors: Vec<QpFactor>,
}

impl QpFactorization {
    /// Minimum coefficient precision over all factors.
    pub fn precision(&self) -> i64 {
        self.factors.iter().filter(|f| !f.exact).map(|f| f.precision).min().unwrap_or(i64::MAX)
    }
}

type IPoly = Vec<BigInt>;

struct Local {
    coeffs: IPoly,
    prec: i64,
    e: usize,
    f: usize,
}

fn modp(c: &IPoly, m: &BigInt) -> IPoly {
    c.iter().map(|x| x.mod_floor(m)).collect()
}

fn imul(a: &IPoly, b: &IPoly) -> IPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `f(y + r)`.
fn ishift(f: &IPoly, r: &BigInt) -> IPoly {
    let mut out: IPoly = vec![BigInt::zero()];
    for c in f.iter().rev() {
        // out = out * (y + r) + c
        let mut next = vec![BigInt::zero(); out.len() + 1];
        for (i, x) in out.iter().enumerate() {
            next[i + 1] += x;
            next[i] += x * r;
        }
        next[0] += c;
        out = next;
    }
    while out.len() > 1 && out.last().is_some_and(|x| x.is_zero()) {
        out.pop();
    }
    out
}

fn to_fp(f: &IPoly, p: u64) -> FpPoly {
    FpPoly::from_ints(f, p)
}

fn from_fp(f: &FpPoly) -> IPoly {
    f.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

fn iadd_scaled(a: &mut IPoly, b: &FpPoly, scale: &BigInt) {
    for (i, &c) in b.coeffs().iter().enumerate() {
        if i >= a.len() {
            a.resize(i + 1, BigInt::zero());
        }
        a[i] += scale * c;
    }
}

/// Lifts `m ≡ ḡ·h̄ (mod p)` with coprime monic `ḡ, h̄` to monic `g, h`
/// with `m ≡ g·h (mod p^k)`.
fn hensel_pair(m: &IPoly, gbar: &FpPoly, hbar: &FpPoly, p: u64, k: i64) -> (IPoly, IPoly) {
    let (_, t) = gbar.bezout(hbar);
    let mut g = from_fp(gbar);
    let mut h = from_fp(hbar);
    let pb = BigInt::from(p);
    let mut pj = pb.clone();
    for _ in 1..k {
        let gh = imul(&g, &h);
        let diff: IPoly = (0..m.len()).map(|i| &m[i] - gh.get(i).cloned().unwrap_or_default()).collect();
        let e: IPoly = diff.iter().map(|x| x / &pj).collect();
        let ebar = to_fp(&e, p);
        if !ebar.is_zero() {
            let tau = t.mul(&ebar).div_rem(gbar).1;
            let sigma = ebar.sub(&tau.mul(hbar)).div_rem(gbar).0;
            iadd_scaled(&mut g, &tau, &pj);
            iadd_scaled(&mut h, &sigma, &pj);
        }
        pj *= &pb;
    }
    (modp(&g, &pj), modp(&h, &pj))
}

fn hensel_multi(m: &IPoly, targets: &[FpPoly], p: u64, k: i64) -> Vec<IPoly> {
    if targets.len() == 1 {
        return vec![m.clone()];
    }
    let rest = targets[1..].iter().skip(1).fold(targets[1].clone(), |acc, f| acc.mul(f));
    let (g, h) = hensel_pair(m, &targets[0], &rest, p, k);
    let mut out = vec![g];
    out.extend(hensel_multi(&h, &targets[1..], p, k));
    out
}

fn factor_monic(m: &IPoly, k: i64, p: u64) -> Result<Vec<Local>> {
    if k < 1 {
        return Err(Error::InsufficientPrecision("working precision exhausted during splitting".into()));
    }
    let d = m.len() - 1;
    if d == 1 {
        return Ok(vec![Local { coeffs: m.clone(), prec: k, e: 1, f: 1 }]);
    }
    let fac = to_fp(m, p).factor();
    if fac.len() > 1 {
        let targets: Vec<FpPoly> = fac
            .iter()
            .map(|(phi, e)| (1..*e).fold(phi.clone(), |acc, _| acc.mul(phi)))
            .collect();
        let lifted = hensel_multi(m, &targets, p, k);
        let mut out = Vec::new();
        for (g, (phi, e)) in lifted.into_iter().zip(fac.iter()) {
            if *e == 1 {
                out.push(Local { coeffs: g, prec: k, e: 1, f: phi.degree().unwrap() });
            } else {
                out.extend(factor_monic(&g, k, p)?);
            }
        }
        return Ok(out);
    }
    let (phi, mult) = &fac[0];
    if *mult == 1 {
        return Ok(vec![Local { coeffs: m.clone(), prec: k, e: 1, f: d }]);
    }
    if phi.degree() != Some(1) {
        return Err(Error::Unsupported(format!(
            "residual factor of degree {} repeated {} times needs iterated splitting",
            phi.degree().unwrap(),
            mult
        )));
    }
    let pk = pow_u(p, k as u64);
    // a lift of the residual root that is not itself a root modulo p^k
    let r0 = BigInt::from((p - phi.coeffs()[0]) % p);
    let (r, m1) = (0..=d as u64 + 1)
        .map(|j| {
            let r = &r0 + BigInt::from(j * p);
            let m1 = modp(&ishift(m, &r), &pk);
            (r, m1)
        })
        .find(|(_, m1)| !m1[0].is_zero())
        .ok_or_else(|| Error::InsufficientPrecision("residual root lifts all vanish".into()))?;
    let vals: Vec<(Valuation, bool)> = m1
        .iter()
        .map(|c| match vp_int(c, p) {
            Some(v) => (Valuation::int(v as i64), true),
            None => (Valuation::int(k), false),
        })
        .collect();
    let np = NewtonPolygon::from_lower_bounds(&vals)?;
    let last = np.segments.last().expect("positive degree");
    let lambda_min = last.root_valuation();
    if np.segments.len() == 1 && lambda_min.denom() == &BigInt::from(d as u64) {
        return Ok(vec![Local { coeffs: m.clone(), prec: k, e: d, f: 1 }]);
    }
    if !lambda_min.denom().is_one() {
        return Err(Error::Unsupported(format!(
            "Newton segment of slope {} with denominator below the degree needs residual polynomials",
            -lambda_min
        )));
    }
    let a = lambda_min.to_integer().to_i64().unwrap();
    let k2 = k - a * d as i64;
    if k2 < 1 {
        return Err(Error::InsufficientPrecision("working precision exhausted during slope scaling".into()));
    }
    let pk2 = pow_u(p, k2 as u64);
    let m2: IPoly = m1
        .iter()
        .enumerate()
        .map(|(i, c)| (c / pow_u(p, a as u64 * (d - i) as u64)).mod_floor(&pk2))
        .collect();
    let subs = factor_monic(&m2, k2, p)?;
    let mut out = Vec::new();
    for s in subs {
        let md = s.coeffs.len() - 1;
        let g1: IPoly = s.coeffs.iter().enumerate().map(|(i, c)| c * pow_u(p, a as u64 * (md - i) as u64)).collect();
        let g = ishift(&g1, &-&r);
        out.push(Local { coeffs: modp(&g, &pow_u(p, s.prec as u64)), prec: s.prec, e: s.e, f: s.f });
    }
    Ok(out)
}

/// `Q_p`-irreducible factors of a separable integer polynomial, each with
/// coefficients to at least `precision` p-adic digits.
pub fn qp_factorization(poly: &IntPolynomial, prime: Prime, precision: i64) -> Result<QpFactorization> {
    let p = prime.get();
    if poly.is_zero() || poly.degree() == 0 {
        return Err(Error::Precondition("factorization of a constant polynomial".into()));
    }
    let q = poly.to_qpoly();
    if q.gcd(&q.derivative()).degree() != Some(0) {
        return Err(Error::Precondition(format!("{poly} is not separable")));
    }
    let d = poly.degree();
    if d == 1 {
        let monic = q.monic();
        let root = -monic.coeff(0);
        let v = vp_rational(&root, p)?;
        let factor = QpFactor { poly: monic, precision, exact: true, ramification: 1, residue_degree: 1, root_valuation: v };
        return Ok(QpFactorization { prime, poly: poly.clone(), factors: vec![factor] });
    }
    let np = newton_polygon(poly, prime)?;
    let min_root = np.segments.last().map(|s| s.root_valuation()).unwrap_or_else(Rational::zero);
    let shift = if min_root.is_negative() { (-min_root).ceil().to_integer().to_i64().unwrap() } else { 0 };
    let lead = q.leading();
    let mq: Vec<Rational> = (0..=d)
        .map(|i| q.coeff(i) / &lead * pow_rat(p, shift * (d - i) as i64))
        .collect();
    let mpoly = QPoly::new(mq.clone());
    let disc = mpoly.resultant(&mpoly.derivative());
    let vdisc = vp_rational(&disc, p)?.expect_finite().to_integer().to_i64().unwrap().max(0);
    let mut extra = 2 * vdisc + shift * d as i64 + 4;
    let locals = loop {
        let kw = precision + extra;
        let pk = pow_u(p, kw as u64);
        let m: IPoly = mq.iter().map(|c| rat_mod_pk(c, p, kw as u64).mod_floor(&pk)).collect();
        match factor_monic(&m, kw, p) {
            Ok(l) => break l,
            Err(Error::InsufficientPrecision(msg)) => {
                if extra > 8 * (vdisc + shift * d as i64 + 16) {
                    return Err(Error::InsufficientPrecision(msg));
                }
                extra *= 2;
            }
            Err(e) => return Err(e),
        }
    };
    let mut factors = Vec::new();
    for l in locals {
        let md = l.coeffs.len() - 1;
        let prec = l.prec - shift * md as i64;
        let modulus = pow_u(p, l.prec as u64);
        let coeffs: Vec<Rational> = l
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| rat_int(symmetric_mod(c, &modulus)) * pow_rat(p, shift * (i as i64 - md as i64)))
            .collect();
        let fpoly = QPoly::new(coeffs);
        let c0 = fpoly.coeff(0);
        let v0 = vp_rational(&c0, p)?;
        let root_valuation = match v0 {
            Valuation::Finite(v) if v < Rational::from_integer(prec.into()) => {
                Valuation::Finite(v / rat_int(BigInt::from(md)))
            }
            _ => {
                return Err(Error::InsufficientPrecision(format!(
                    "constant term of a degree-{md} factor not resolved at precision {prec}"
                )))
            }
        };
        factors.push(QpFactor {
            poly: fpoly,
            precision: prec,
            exact: false,
            ramification: l.e,
            residue_degree: l.f,
            root_valuation,
        });
    }
    factors.sort_by(|a, b| {
        (a.degree(), std::cmp::Reverse(&a.root_valuation), a.poly.coeffs())
            .cmp(&(b.degree(), std::cmp::Reverse(&b.root_valuation), b.poly.coeffs()))
    });
    Ok(QpFactorization { prime, poly: poly.clone(), factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    /// Checks `∏ F_j ≡ P / lead` to the reported precision.
    fn reconstructs(fz: &QpFactorization) -> bool {
        let prod = fz.factors.iter().fold(QPoly::one(), |acc, f| acc.mul(&f.poly));
        let target = fz.poly.to_qpoly().monic();
        let k = fz.precision().min(60);
        let diff = prod.sub(&target);
        diff.coeffs().iter().all(|c| vp_rational(c, fz.prime.get()).unwrap() >= Valuation::int(k))
    }

    #[test]
    fn quadratic_examples() {
        let f = qp_factorization(&IntPolynomial::from_i64(&[-2, 0, 1]), p(5), 20).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!((f.factors[0].ramification, f.factors[0].residue_degree), (1, 2));
        let f = qp_factorization(&IntPolynomial::from_i64(&[-2, 0, 1]), p(7), 20).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert!(reconstructs(&f));
        // each root squares to 2 modulo 7^20
        for fac in &f.factors {
            let r = -fac.poly.coeff(0);
            let v = vp_rational(&(&r * &r - rat_int(BigInt::from(2))), 7).unwrap();
            assert!(v >= Valuation::int(20));
        }
        let f = qp_factorization(&IntPolynomial::from_i64(&[-5, 0, 1]), p(5), 20).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].ramification, 2);
        assert_eq!(f.factors[0].root_valuation, Valuation::Finite(crate::arith::rat(1, 2)));
    }

    #[test]
    fn repeated_residual_roots() {
        // (z-1)(z-6): both roots ≡ 1 mod 5, split after shifting
        let f = qp_factorization(&IntPolynomial::from_i64(&[6, -7, 1]), p(5), 12).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert!(reconstructs(&f));
        // z^2 - 2z - 4 = (z-1)^2 - 5: ramified around 1
        let f = qp_factorization(&IntPolynomial::from_i64(&[-4, -2, 1]), p(5), 12).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].ramification, 2);
        // 25z^2 - 1: roots ±1/5
        let f = qp_factorization(&IntPolynomial::from_i64(&[-1, 0, 25]), p(5), 12).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert!(f.factors.iter().all(|x| x.root_valuation == Valuation::int(-1)));
        assert!(reconstructs(&f));
        // z^2 - 26 at p=5: roots ≡ ±1, z^2 - 51 splits 2-adically? use p=5 and 2z^2+z+3
        let f = qp_factorization(&IntPolynomial::from_i64(&[-26, 0, 1]), p(5), 12).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert!(reconstructs(&f));
    }

    #[test]
    fn higher_degree() {
        // x^4 + 1 over Q_5 splits into two quadratics (5 ≡ 1 mod 4 gives i)
        let f = qp_factorization(&IntPolynomial::from_i64(&[1, 0, 0, 0, 1]), p(5), 10).unwrap();
        assert_eq!(f.factors.iter().map(|x| x.degree()).collect::<Vec<_>>(), vec![2, 2]);
        assert!(reconstructs(&f));
        // x^3 - 5 totally ramified at 5
        let f = qp_factorization(&IntPolynomial::from_i64(&[-5, 0, 0, 1]), p(5), 10).unwrap();
        assert_eq!(f.factors[0].ramification, 3);
        // x^4 - 25: slope 1/2 of length 4 is not handled
        let r = qp_factorization(&IntPolynomial::from_i64(&[-25, 0, 0, 0, 1]), p(5), 10);
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }
}
