//! Newton polygons of polynomials and truncated series.

use num_traits::{Signed, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::padic::{vp_rational, Prime, Valuation};
use crate::poly::{IntPolynomial, QPoly};

/// One edge of the lower convex hull of `(i, ν(a_i))`.
///
/// An edge of slope `s` and horizontal length `ℓ` accounts for exactly
/// `ℓ` roots of valuation `-s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub length: usize,
    pub slope: Rational,
}

impl Segment {
    pub fn root_valuation(&self) -> Rational {
        -self.slope.clone()
    }

    pub fn end(&self) -> usize {
        self.start + self.length
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Number of leading zero coefficients: roots at `0` (valuation `∞`).
    pub zero_order: usize,
    pub segments: Vec<Segment>,
    /// Valuation at the first finite vertex.
    pub first_height: Rational,
}

fn cross(o: &(usize, Rational), a: &(usize, Rational), b: &(usize, Rational)) -> Rational {
    let ax = Rational::from_integer((a.0 as i64 - o.0 as i64).into());
    let bx = Rational::from_integer((b.0 as i64 - o.0 as i64).into());
    ax * (&b.1 - &o.1) - (&a.1 - &o.1) * bx
}

fn hull(points: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
    let mut h: Vec<(usize, Rational)> = Vec::new();
    for pt in points {
        while h.len() >= 2 && !cross(&h[h.len() - 2], &h[h.len() - 1], pt).is_positive() {
            h.pop();
        }
        h.push(pt.clone());
    }
    h
}

impl NewtonPolygon {
    /// Polygon from the coefficient valuations `vals[i] = ν(a_i)`.
    /// Trailing infinite entries (beyond the degree) are ignored.
    pub fn from_valuations(vals: &[Valuation]) -> Self {
        let zero_order = vals.iter().take_while(|v| v.is_infinite()).count();
        let pts: Vec<(usize, Rational)> = vals
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.finite().map(|q| (i, q.clone())))
            .collect();
        Self::from_points(zero_order, &pts)
    }

    fn from_points(zero_order: usize, pts: &[(usize, Rational)]) -> Self {
        let h = hull(pts);
        let segments = h
            .windows(2)
            .map(|w| {
                let len = w[1].0 - w[0].0;
                Segment {
                    start: w[0].0,
                    length: len,
                    slope: (&w[1].1 - &w[0].1) / Rational::from_integer((len as i64).into()),
                }
            })
            .collect();
        let first_height = h.first().map(|x| x.1.clone()).unwrap_or_else(Rational::zero);
        NewtonPolygon { zero_order, segments, first_height }
    }

    /// Polygon where some coefficient valuations are only known to be at
    /// least a given value. Each entry is `(value, exact)`. Succeeds only
    /// when every inexact point provably lies on or above the hull of the
    /// exact points, so the hull is the true one.
    pub fn from_lower_bounds(vals: &[(Valuation, bool)]) -> Result<Self> {
        let first_exact = vals.iter().position(|(v, e)| *e && !v.is_infinite());
        let last_exact = vals.iter().rposition(|(v, e)| *e && !v.is_infinite());
        let (first, last) = match (first_exact, last_exact) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::InsufficientPrecision("no resolved coefficient".into())),
        };
        for (i, (v, e)) in vals.iter().enumerate() {
            if i < first && !(*e && v.is_infinite()) {
                return Err(Error::InsufficientPrecision(format!("coefficient {i} below the first resolved vertex")));
            }
            if i > last && !*e {
                return Err(Error::InsufficientPrecision(format!("coefficient {i} beyond the last resolved vertex")));
            }
        }
        let pts: Vec<(usize, Rational)> = vals
            .iter()
            .enumerate()
            .filter(|(_, (v, e))| *e && !v.is_infinite())
            .map(|(i, (v, _))| (i, v.expect_finite().clone()))
            .collect();
        let np = Self::from_points(first, &pts);
        for (i, (v, e)) in vals.iter().enumerate() {
            if *e || i < first || i > last {
                continue;
            }
            let hv = np.height_at(i);
            if let Valuation::Finite(b) = v {
                if b < &hv {
                    return Err(Error::InsufficientPrecision(format!(
                        "coefficient {i} known only to valuation >= {b}, below hull value {hv}"
                    )));
                }
            }
        }
        Ok(np)
    }

    /// Height of the hull at abscissa `i` (inside the polygon's range).
    fn height_at(&self, i: usize) -> Rational {
        let Some((s, off)) = self
            .segments
            .iter()
            .find(|s| i >= s.start && i <= s.end())
            .map(|s| (s, i - s.start))
        else {
            return self.first_height.clone();
        };
        let start_h = self.vertex_height(s.start);
        start_h + &s.slope * Rational::from_integer((off as i64).into())
    }

    fn vertex_height(&self, idx: usize) -> Rational {
        let mut h = self.first_height.clone();
        for s in &self.segments {
            if s.start == idx {
                return h;
            }
            h += &s.slope * Rational::from_integer((s.length as i64).into());
        }
        h
    }

    /// Root valuations with multiplicities, `∞` first if present.
    pub fn root_valuations(&self) -> Vec<(Valuation, usize)> {
        let mut out = Vec::new();
        if self.zero_order > 0 {
            out.push((Valuation::Infinity, self.zero_order));
        }
        for s in &self.segments {
            out.push((Valuation::Finite(s.root_valuation()), s.length));
        }
        out
    }

    /// Total number of roots accounted for (the degree).
    pub fn total_length(&self) -> usize {
        self.zero_order + self.segments.iter().map(|s| s.length).sum::<usize>()
    }

    /// Number of roots with valuation `>= v`.
    pub fn count_roots_at_least(&self, v: &Rational) -> usize {
        self.zero_order
            + self.segments.iter().filter(|s| &s.root_valuation() >= v).map(|s| s.length).sum::<usize>()
    }

    /// Number of roots with valuation strictly greater than `v`.
    pub fn count_roots_above(&self, v: &Rational) -> usize {
        self.zero_order
            + self.segments.iter().filter(|s| &s.root_valuation() > v).map(|s| s.length).sum::<usize>()
    }

    /// Largest finite root valuation, or `∞` if zero is a root.
    pub fn max_root_valuation(&self) -> Option<Valuation> {
        if self.zero_order > 0 {
            return Some(Valuation::Infinity);
        }
        self.segments.first().map(|s| Valuation::Finite(s.root_valuation()))
    }

    pub fn min_root_valuation(&self) -> Option<Valuation> {
        match self.segments.last() {
            Some(s) => Some(Valuation::Finite(s.root_valuation())),
            None if self.zero_order > 0 => Some(Valuation::Infinity),
            None => None,
        }
    }
}

/// Newton polygon of an integer polynomial at `p`.
pub fn newton_polygon(poly: &IntPolynomial, p: Prime) -> Result<NewtonPolygon> {
    if poly.is_zero() {
        return Err(Error::Precondition("Newton polygon of the zero polynomial".into()));
    }
    Ok(newton_polygon_q(&poly.to_qpoly(), p))
}

/// Newton polygon of a rational polynomial at `p`.
pub fn newton_polygon_q(poly: &QPoly, p: Prime) -> NewtonPolygon {
    let vals: Vec<Valuation> =
        poly.coeffs().iter().map(|c| vp_rational(c, p.get()).expect("validated prime")).collect();
    NewtonPolygon::from_valuations(&vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn eisenstein_quadratic() {
        let np = newton_polygon(&IntPolynomial::from_i64(&[-5, 0, 1]), p(5)).unwrap();
        assert_eq!(np.segments.len(), 1);
        assert_eq!(np.segments[0].slope, rat(-1, 2));
        assert_eq!(np.segments[0].length, 2);
    }

    #[test]
    fn two_slopes() {
        // (z-1)(z-5) = 5 - 6z + z^2
        let np = newton_polygon(&IntPolynomial::from_i64(&[5, -6, 1]), p(5)).unwrap();
        let got: Vec<(Rational, usize)> = np.segments.iter().map(|s| (s.slope.clone(), s.length)).collect();
        assert_eq!(got, vec![(rat(-1, 1), 1), (rat(0, 1), 1)]);
        assert_eq!(np.count_roots_at_least(&rat(1, 1)), 1);
        assert_eq!(np.count_roots_at_least(&rat(0, 1)), 2);
    }

    #[test]
    fn unit_roots_and_zero_roots() {
        let np = newton_polygon(&IntPolynomial::from_i64(&[-2, 0, 1]), p(5)).unwrap();
        assert_eq!(np.segments, vec![Segment { start: 0, length: 2, slope: rat(0, 1) }]);
        let np = newton_polygon(&IntPolynomial::from_i64(&[0, 0, 5, 1]), p(5)).unwrap();
        assert_eq!(np.zero_order, 2);
        assert_eq!(np.total_length(), 3);
        assert_eq!(np.max_root_valuation(), Some(Valuation::Infinity));
    }

    #[test]
    fn lower_bounds_are_checked_against_hull() {
        let vals = vec![
            (Valuation::int(2), true),
            (Valuation::int(5), false),
            (Valuation::int(0), true),
        ];
        let np = NewtonPolygon::from_lower_bounds(&vals).unwrap();
        assert_eq!(np.segments[0].slope, rat(-1, 1));
        let bad = vec![(Valuation::int(4), true), (Valuation::int(1), false), (Valuation::int(0), true)];
        assert!(NewtonPolygon::from_lower_bounds(&bad).is_err());
    }
}
