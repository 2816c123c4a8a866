//! Finite extensions `Q_p(t)/(P(t))` given by a monic defining polynomial,
//! with elements carried as power-basis coordinates at tracked precision.

use num_traits::{One, ToPrimitive, Zero};

use super::scalar::vp_rational;
use super::valuation::{Prime, Valuation};
use crate::arith::{pow_rat, Rational};
use crate::error::{Error, Result};
use crate::fp::FpPoly;
use crate::linalg::{determinant, Matrix};
use crate::poly::QPoly;

/// A presented extension of `Q_p` of degree `n = e·f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionDesc {
    prime: Prime,
    defining: QPoly,
    ramification: usize,
    residue_degree: usize,
    /// Absolute precision of the defining coefficients; `None` when exact.
    precision: Option<i64>,
}

fn is_p_integral(c: &Rational, p: u64) -> bool {
    vp_rational(c, p).map(|v| v >= Valuation::int(0)).unwrap_or(false)
}

impl ExtensionDesc {
    /// Classifies an exact monic p-integral defining polynomial.
    ///
    /// Eisenstein polynomials give `e = n`, polynomials irreducible modulo
    /// `p` give `f = n`. Other presentations need [`Self::with_indices`].
    pub fn new(prime: Prime, defining: QPoly) -> Result<Self> {
        Self::check_shape(prime, &defining)?;
        let n = defining.degree().unwrap();
        let p = prime.get();
        let (e, f) = if n == 1 {
            (1, 1)
        } else if is_eisenstein(&defining, p) {
            (n, 1)
        } else if reduction(&defining, p).is_irreducible() {
            (1, n)
        } else {
            return Err(Error::Unsupported(format!(
                "cannot classify defining polynomial {defining} at p={p}; supply e and f"
            )));
        };
        Ok(ExtensionDesc { prime, defining, ramification: e, residue_degree: f, precision: None })
    }

    /// Presentation with caller-supplied ramification data.
    pub fn with_indices(prime: Prime, defining: QPoly, e: usize, f: usize, precision: Option<i64>) -> Result<Self> {
        Self::check_shape(prime, &defining)?;
        let n = defining.degree().unwrap();
        if e * f != n {
            return Err(Error::Precondition(format!("e·f = {} differs from degree {n}", e * f)));
        }
        Ok(ExtensionDesc { prime, defining, ramification: e, residue_degree: f, precision })
    }

    fn check_shape(prime: Prime, defining: &QPoly) -> Result<()> {
        match defining.degree() {
            Some(d) if d >= 1 => {}
            _ => return Err(Error::Precondition("defining polynomial must have degree >= 1".into())),
        }
        if !defining.leading().is_one() {
            return Err(Error::Precondition("defining polynomial must be monic".into()));
        }
        if !defining.coeffs().iter().all(|c| is_p_integral(c, prime.get())) {
            return Err(Error::Precondition("defining polynomial must have p-integral coefficients".into()));
        }
        Ok(())
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn defining(&self) -> &QPoly {
        &self.defining
    }

    pub fn degree(&self) -> usize {
        self.defining.degree().unwrap()
    }

    pub fn ramification(&self) -> usize {
        self.ramification
    }

    pub fn residue_degree(&self) -> usize {
        self.residue_degree
    }

    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    /// Matrix of multiplication by `Σ c_i t^i` in the basis `1, t, …, t^{n−1}`.
    fn mult_matrix(&self, coeffs: &[Rational]) -> Matrix {
        let n = self.degree();
        let elem = QPoly::new(coeffs.to_vec());
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let prod = elem.mul(&QPoly::monomial(Rational::one(), j)).rem(&self.defining).expect("monic");
            cols.push((0..n).map(|i| prod.coeff(i)).collect::<Vec<_>>());
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }
}

fn is_eisenstein(f: &QPoly, p: u64) -> bool {
    let n = f.degree().unwrap();
    let v = |c: &Rational| vp_rational(c, p).unwrap();
    (0..n).all(|i| v(&f.coeff(i)) >= Valuation::int(1)) && v(&f.coeff(0)) == Valuation::int(1)
}

fn reduction(f: &QPoly, p: u64) -> FpPoly {
    let ints: Vec<_> = f.coeffs().iter().map(|c| crate::arith::rat_mod_pk(c, p, 1)).collect();
    FpPoly::from_ints(&ints, p)
}

/// An element `Σ c_i t^i` known modulo `p^precision` in each coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElement {
    ext: ExtensionDesc,
    coeffs: Vec<Rational>,
    precision: i64,
}

impl ExtElement {
    pub fn new(ext: &ExtensionDesc, mut coeffs: Vec<Rational>, precision: i64) -> Result<Self> {
        let n = ext.degree();
        if coeffs.len() > n {
            return Err(Error::Precondition(format!("{} coordinates for a degree-{n} extension", coeffs.len())));
        }
        if precision < 1 {
            return Err(Error::Precondition("precision must be at least 1".into()));
        }
        coeffs.resize(n, Rational::zero());
        Ok(ExtElement { ext: ext.clone(), coeffs, precision })
    }

    /// The exact rational `q` embedded in `ext`.
    pub fn from_rational(ext: &ExtensionDesc, q: &Rational, precision: i64) -> Result<Self> {
        Self::new(ext, vec![q.clone()], precision)
    }

    /// The generator `t`.
    pub fn generator(ext: &ExtensionDesc, precision: i64) -> Result<Self> {
        if ext.degree() == 1 {
            return Self::new(ext, vec![-ext.defining.coeff(0)], precision);
        }
        Self::new(ext, vec![Rational::zero(), Rational::one()], precision)
    }

    pub fn extension(&self) -> &ExtensionDesc {
        &self.ext
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    fn min_coeff_valuation(&self) -> Option<i64> {
        let p = self.ext.prime.get();
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| vp_rational(c, p).unwrap().expect_finite().to_integer().to_i64().unwrap())
            .min()
    }

    /// Product; precision drops to what both factors guarantee.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ext != other.ext {
            return Err(Error::Precondition("elements of different extensions".into()));
        }
        let a = QPoly::new(self.coeffs.clone());
        let b = QPoly::new(other.coeffs.clone());
        let prod = a.mul(&b).rem(&self.ext.defining)?;
        let va = self.min_coeff_valuation().unwrap_or(self.precision);
        let vb = other.min_coeff_valuation().unwrap_or(other.precision);
        let precision = (self.precision + vb).min(other.precision + va).max(1);
        Self::new(&self.ext, prod.coeffs().to_vec(), precision)
    }
}

/// `N_{K/Q_p}(x)` as `(value, precision)`: the determinant of
/// multiplication by `x`, known modulo `p^precision`.
pub fn ext_norm(x: &ExtElement) -> Result<(Rational, i64)> {
    let ext = &x.ext;
    let n = ext.degree() as i64;
    let p = ext.prime.get();
    let prec = ext.precision.map_or(x.precision, |d| d.min(x.precision));
    let Some(vmin) = x.min_coeff_valuation() else {
        return Err(Error::InsufficientPrecision("element is zero at the working precision".into()));
    };
    // scale into the integral lattice so the determinant error is O(p^prec)
    let s = (-vmin).max(0);
    let scale = pow_rat(p, s);
    let scaled: Vec<Rational> = x.coeffs.iter().map(|c| c * &scale).collect();
    let det = determinant(&ext.mult_matrix(&scaled));
    let norm = det * pow_rat(p, -s * n);
    Ok((norm, prec + s - s * n))
}

/// `ν(x) = ν_p(N(x))/n`, refused when the norm's valuation is not
/// resolved at the tracked precision.
pub fn ext_valuation(x: &ExtElement) -> Result<Rational> {
    let (norm, prec) = ext_norm(x)?;
    let v = vp_rational(&norm, x.ext.prime.get())?;
    match v {
        Valuation::Finite(v) if v < Rational::from_integer(prec.into()) => {
            Ok(v / Rational::from_integer((x.ext.degree() as i64).into()))
        }
        _ => Err(Error::InsufficientPrecision(format!(
            "norm valuation {} not below precision {prec}",
            v
        ))),
    }
}

impl ExtElement {
    /// Whether every coordinate is p-integral.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| is_p_integral(c, self.ext.prime.get()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    fn q5_sqrt5() -> ExtensionDesc {
        ExtensionDesc::new(p5(), QPoly::from_ints(&[-5, 0, 1])).unwrap()
    }

    #[test]
    fn classification() {
        let e = q5_sqrt5();
        assert_eq!((e.ramification(), e.residue_degree()), (2, 1));
        let u = ExtensionDesc::new(p5(), QPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!((u.ramification(), u.residue_degree()), (1, 2));
        assert!(ExtensionDesc::new(p5(), QPoly::from_ints(&[-4, -2, 1])).is_err());
    }

    #[test]
    fn norms() {
        let e = q5_sqrt5();
        let t = ExtElement::generator(&e, 20).unwrap();
        assert_eq!(ext_norm(&t).unwrap().0, rat(-5, 1));
        let one = ExtElement::from_rational(&e, &rat(1, 1), 20).unwrap();
        assert_eq!(ext_norm(&one).unwrap().0, rat(1, 1));
        let x = ExtElement::new(&e, vec![rat(1, 1), rat(1, 1)], 20).unwrap();
        // Res(t^2 - 5, 1 + t)
        let oracle = QPoly::from_ints(&[-5, 0, 1]).resultant(&QPoly::from_ints(&[1, 1]));
        assert_eq!(ext_norm(&x).unwrap().0, oracle);
        assert_eq!(oracle, rat(-4, 1));
    }

    #[test]
    fn valuations() {
        let e = q5_sqrt5();
        let t = ExtElement::generator(&e, 20).unwrap();
        assert_eq!(ext_valuation(&t).unwrap(), rat(1, 2));
        let one = ExtElement::from_rational(&e, &rat(1, 1), 20).unwrap();
        assert_eq!(ext_valuation(&one).unwrap(), rat(0, 1));
        let five = ExtElement::from_rational(&e, &rat(5, 1), 20).unwrap();
        let five_t = five.mul(&t).unwrap();
        assert_eq!(ext_valuation(&five_t).unwrap(), rat(3, 2));
        assert_eq!(ext_valuation(&five_t).unwrap(), ext_valuation(&five).unwrap() + ext_valuation(&t).unwrap());
    }

    #[test]
    fn unresolved_norm_is_refused() {
        let e = q5_sqrt5();
        let tiny = ExtElement::from_rational(&e, &rat(625, 1), 3).unwrap();
        assert!(matches!(ext_valuation(&tiny), Err(Error::InsufficientPrecision(_))));
    }
}
