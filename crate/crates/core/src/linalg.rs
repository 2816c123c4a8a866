//! Dense exact matrices over `Q`.

use num_traits::{One, Zero};

use crate::arith::{rat_int, Rational};
use crate::poly::QPoly;

pub type Matrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![Rational::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][k] * &bk[j];
            }
        }
    }
    out
}

/// Determinant by Gaussian elimination.
pub fn determinant(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pv;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Characteristic polynomial `det(x·I − M)` (Faddeev–LeVerrier).
pub fn charpoly(m: &Matrix) -> QPoly {
    let n = m.len();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut mk = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = M·M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let am = mat_mul(m, &mk);
        let tr: Rational = (0..n).map(|i| am[i][i].clone()).fold(Rational::zero(), |a, b| a + b);
        c[n - k] = -tr / rat_int((k as i64).into());
    }
    QPoly::new(c)
}
