//! Polynomials over the prime field `F_p` for small `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_ints(coeffs: &[BigInt], p: u64) -> Self {
        let pb = BigInt::from(p);
        Self::new(p, coeffs.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect())
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn mulm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: u64) -> u64 {
        // Fermat
        let mut r = 1u64;
        let mut b = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mulm(r, b);
            }
            b = self.mulm(b, b);
            e >>= 1;
        }
        r
    }

    pub fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let li = self.inv(l);
                Self::new(self.p, self.c.iter().map(|&x| self.mulm(x, li)).collect())
            }
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Self::new(self.p, v)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(self.p, vec![]);
        }
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mulm(a, b)) % self.p;
            }
        }
        Self::new(self.p, out)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let li = self.inv(*d.c.last().unwrap());
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::new(self.p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = self.mulm(r[k + dd], li);
            if c != 0 {
                for (j, &dj) in d.c.iter().enumerate() {
                    r[k + j] = (r[k + j] + self.p - self.mulm(c, dj)) % self.p;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(self.p, q), Self::new(self.p, r))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(s, t)` with `s·self + t·o = 1`; panics unless coprime.
    pub fn bezout(&self, o: &Self) -> (Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::new(p, vec![]));
        let (mut t0, mut t1) = (Self::new(p, vec![]), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        assert_eq!(r0.degree(), Some(0), "bezout of non-coprime polynomials");
        let li = self.inv(r0.c[0]);
        let scale = |f: &Self| Self::new(p, f.c.iter().map(|&x| self.mulm(x, li)).collect());
        (scale(&s0), scale(&t0))
    }

    /// `base^e mod m` for a polynomial base.
    fn powmod(base: &Self, mut e: u128, m: &Self) -> Self {
        let mut r = Self::one(base.p);
        let mut b = base.div_rem(m).1;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).div_rem(m).1;
            }
            b = b.mul(&b).div_rem(m).1;
            e >>= 1;
        }
        r
    }

    /// Ben-Or irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let d = match self.degree() {
            None | Some(0) => return false,
            Some(d) => d,
        };
        if d == 1 {
            return true;
        }
        let f = self.monic();
        let x = Self::x(self.p);
        let mut xp = x.clone();
        for _ in 1..=d / 2 {
            xp = Self::powmod(&xp, self.p as u128, &f);
            let g = f.gcd(&xp.sub(&x));
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// ordered by degree and then coefficients.
    pub fn factor(&self) -> Vec<(FpPoly, usize)> {
        let mut rest = self.monic();
        let mut out: Vec<(FpPoly, usize)> = Vec::new();
        let mut k = 1;
        while rest.degree().unwrap_or(0) > 0 {
            let d = rest.degree().unwrap();
            if k > d / 2 || rest.is_irreducible() {
                out.push((rest.clone(), 1));
                break;
            }
            for cand in monic_polys(self.p, k) {
                let mut mult = 0;
                loop {
                    let (q, r) = rest.div_rem(&cand);
                    if !r.is_zero() {
                        break;
                    }
                    rest = q;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((cand, mult));
                }
                if rest.degree().unwrap_or(0) == 0 {
                    break;
                }
            }
            k += 1;
        }
        // Merge an irreducible remainder that repeats an earlier factor.
        let mut merged: Vec<(FpPoly, usize)> = Vec::new();
        for (f, m) in out {
            if let Some(e) = merged.iter_mut().find(|(g, _)| *g == f) {
                e.1 += m;
            } else {
                merged.push((f, m));
            }
        }
        merged.sort_by(|a, b| (a.0.degree(), &a.0.c).cmp(&(b.0.degree(), &b.0.c)));
        merged
    }
}

/// All monic polynomials of degree `k` over `F_p`.
fn monic_polys(p: u64, k: usize) -> impl Iterator<Item = FpPoly> {
    let total = (p as u128).pow(k as u32);
    (0..total).map(move |mut n| {
        let mut c = Vec::with_capacity(k + 1);
        for _ in 0..k {
            c.push((n % p as u128) as u64);
            n /= p as u128;
        }
        c.push(1);
        FpPoly::new(p, c)
    })
}
