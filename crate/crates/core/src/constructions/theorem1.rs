use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::enumerate::{AlgebraicEnumerator, PolyEnumerator};
use crate::algebraic::{height_of_element, is_conjugation_closed, AlgebraicNumber, NumberFieldElement, SetMember};
use crate::arith::{ceil_ln, floor_rat, pow_rat, rat, rat_int, Rational};
use crate::error::{Error, Result};
use crate::padic::{PAdicScalar, Prime, Radius, Valuation};
use crate::poly::IntPolynomial;
use crate::series::{TailRule, TruncatedSeries, MAX_MATERIALIZED_VALUATION};

/// Whether a set must be closed under conjugation over `Q` or may pick
/// individual branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetMode {
    FullConjugacy,
    SelectedBranches,
}

/// The set `S` as a list of polynomials, the first being `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalSetSpec {
    pub prime: Prime,
    pub rho: Radius,
    pub members: Vec<SetMember>,
    pub mode: SetMode,
}

impl ExceptionalSetSpec {
    pub fn new(prime: Prime, rho: Radius, members: Vec<SetMember>, mode: SetMode) -> Result<Self> {
        match members.first() {
            Some(m) if m.poly == IntPolynomial::z() && m.branches.is_none() => {}
            _ => return Err(Error::Precondition("the first polynomial of S must be z".into())),
        }
        for m in &members {
            if !m.poly.is_primitive() || m.poly.leading().is_negative() || !m.poly.is_irreducible() {
                return Err(Error::Precondition(format!("{} is not a primitive irreducible polynomial", m.poly)));
            }
        }
        if mode == SetMode::FullConjugacy {
            let report = is_conjugation_closed(&members, prime, &rho)?;
            if let Some(w) = report.witness {
                return Err(Error::NotClosed(format!("{} (polynomial {}, branch {:?})", w.reason, w.poly, w.branch)));
            }
        }
        Ok(ExceptionalSetSpec { prime, rho, members, mode })
    }

    /// `P_k`, extended periodically (1-based).
    pub fn poly(&self, k: usize) -> &IntPolynomial {
        &self.members[(k - 1) % self.members.len()].poly
    }

    /// Whether `α` is one of the selected points of `S`.
    pub fn contains(&self, alpha: &AlgebraicNumber) -> Result<bool> {
        for m in &self.members {
            if &m.poly == alpha.minpoly() {
                return Ok(match &m.branches {
                    None => true,
                    Some(list) => list.contains(&alpha.branch_index()?),
                });
            }
        }
        Ok(false)
    }
}

/// Non-minimal choices for the growth sequences, indexed from `n = 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Theorem1Config {
    pub slack_omega: Vec<BigInt>,
    pub slack_delta: Vec<BigInt>,
    /// Slower `δ_n = max{δ_{n−1}, ⌈ln x_{n−1}⌉} + ω_n`; outputs are not
    /// certificates.
    pub relaxed: bool,
}

impl Theorem1Config {
    fn slack(v: &[BigInt], n: usize) -> BigInt {
        v.get(n - 1).cloned().unwrap_or_default()
    }
}

/// Sequences `x_n`, `ω_n`, `δ_n` and the enumerated `β_n`.
pub struct Theorem1State {
    pub spec: ExceptionalSetSpec,
    pub config: Theorem1Config,
    pub betas: Vec<AlgebraicNumber>,
    pub x: Vec<BigInt>,
    pub omega: Vec<BigInt>,
    pub delta: Vec<BigInt>,
    enumerator: AlgebraicEnumerator,
}

impl Theorem1State {
    pub fn new(spec: ExceptionalSetSpec, config: Theorem1Config) -> Result<Self> {
        if config.slack_omega.iter().chain(&config.slack_delta).any(|s| s.is_negative()) {
            return Err(Error::Precondition("slack values must be non-negative".into()));
        }
        let enumerator = AlgebraicEnumerator::new(spec.prime, Radius::Infinity, spec.members.clone());
        Ok(Theorem1State {
            spec,
            config,
            betas: Vec::new(),
            x: vec![BigInt::one()],
            omega: vec![BigInt::zero()],
            delta: vec![BigInt::one()],
            enumerator,
        })
    }

    /// Index of the last computed `ω_n, δ_n`.
    pub fn depth(&self) -> usize {
        self.omega.len() - 1
    }

    /// `N_n = Σ_{k≤n} deg P_k`.
    pub fn n_total(&self, n: usize) -> usize {
        (1..=n).map(|k| self.spec.poly(k).degree()).sum()
    }

    /// Computes `ω_n`, `δ_n`, `β_n` and `x_n` for the next `n`.
    pub fn advance(&mut self) -> Result<()> {
        let n = self.depth() + 1;
        let omega = &self.omega[n - 1] + BigInt::from(self.n_total(n)) + Theorem1Config::slack(&self.config.slack_omega, n);
        let lnx = BigInt::from(ceil_ln(&self.x[n - 1]));
        let prev = (&self.delta[n - 1]).max(&lnx).clone();
        let base = if self.config.relaxed {
            prev + &omega
        } else {
            let e = u32::try_from(n).map_err(|_| Error::BudgetExceeded("depth".into()))?;
            num_traits::pow(omega.clone(), e as usize) * prev
        };
        let delta = base + Theorem1Config::slack(&self.config.slack_delta, n);
        self.omega.push(omega);
        self.delta.push(delta);
        let beta = self.enumerator.next_number()?;
        self.betas.push(beta);
        let xn = compute_xn(&self.spec, &self.betas, n);
        self.x.push(xn);
        Ok(())
    }

    pub fn advance_to(&mut self, n: usize) -> Result<()> {
        while self.depth() < n {
            self.advance()?;
        }
        Ok(())
    }

    /// `∏_{k≤n} P_k(z)`.
    pub fn block_poly(&self, n: usize) -> IntPolynomial {
        (1..=n).fold(IntPolynomial::from_i64(&[1]), |acc, k| acc.mul(self.spec.poly(k)))
    }
}

/// `x_n = max_{i,k ≤ n} H(P_1(β_i)⋯P_k(β_i))`, heights computed exactly.
pub fn compute_xn(spec: &ExceptionalSetSpec, betas: &[AlgebraicNumber], n: usize) -> BigInt {
    let mut best = BigInt::one();
    for beta in betas.iter().take(n) {
        let b = beta.as_field_element();
        let mut prod = NumberFieldElement::one(beta.minpoly());
        for k in 1..=n {
            prod = prod.mul(&b.eval_poly(spec.poly(k))).unwrap();
            let h = height_of_element(&prod).height;
            if h > best {
                best = h;
            }
        }
    }
    best
}

/// One block `p^{e} z^{shift} Q(z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub n: usize,
    pub exponent: BigInt,
    pub shift: usize,
    pub poly: IntPolynomial,
}

/// `1 + Σ_n p^{e_n} z^{s_n} Q_n(z)` with its coefficient expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSeries {
    pub prime: Prime,
    pub blocks: Vec<Block>,
    pub series: TruncatedSeries,
    /// Per block, the first index where `ν(c_i)` meets its bound exactly.
    pub attained: Vec<usize>,
}

fn expand(prime: Prime, blocks: &[Block], tail: Option<TailRule>) -> Result<TruncatedSeries> {
    let last = blocks.iter().map(|b| b.shift + b.poly.degree()).max().unwrap_or(0);
    let mut coeffs = vec![PAdicScalar::zero(prime); last + 1];
    coeffs[0] = PAdicScalar::one(prime);
    for b in blocks {
        let e = rat_int(b.exponent.clone());
        for (i, d) in b.poly.coeffs().iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let term = PAdicScalar::new(prime, e.clone(), rat_int(d.clone()));
            let idx = b.shift + i;
            coeffs[idx] = if coeffs[idx].is_zero() { term } else { coeffs[idx].add(&term)? };
        }
    }
    TruncatedSeries::new(prime, coeffs, tail)
}

impl BlockSeries {
    /// Exact value at `α` when some block polynomial vanishes there:
    /// the finite sum over the blocks before it.
    pub fn exact_value_at(&self, alpha: &AlgebraicNumber) -> Result<Option<NumberFieldElement>> {
        let m = alpha.minpoly();
        let a = alpha.as_field_element();
        let mut sum = NumberFieldElement::one(m);
        for b in &self.blocks {
            let q = a.eval_poly(&b.poly);
            if q.is_zero() {
                return Ok(Some(sum));
            }
            let e = b.exponent.to_i64().filter(|e| e.abs() <= MAX_MATERIALIZED_VALUATION).ok_or_else(|| {
                Error::BudgetExceeded(format!("block exponent {} too large to expand", b.exponent))
            })?;
            let term = q.mul(&a.pow(b.shift as u64))?.scale(&pow_rat(self.prime.get(), e));
            sum = sum.add(&term)?;
        }
        Ok(None)
    }
}

/// `h(z) = 1 + Σ_{n≤depth} p^{δ_n} z^{ω_n} ∏_{k≤n} P_k(z)`; the tail rule
/// cites `δ_{depth+1}, ω_{depth+1}`.
pub fn build_h(state: &mut Theorem1State, depth: usize) -> Result<BlockSeries> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    state.advance_to(depth + 1)?;
    let mut blocks = Vec::with_capacity(depth);
    for n in 1..=depth {
        let shift = state.omega[n]
            .to_usize()
            .filter(|s| *s <= 1_000_000)
            .ok_or_else(|| Error::BudgetExceeded(format!("ω_{n} = {} too large", state.omega[n])))?;
        blocks.push(Block { n, exponent: state.delta[n].clone(), shift, poly: state.block_poly(n) });
    }
    let tail = TailRule::Theorem1Tail { delta_next: state.delta[depth + 1].clone(), omega_next: state.omega[depth + 1].clone() };
    let series = expand(state.spec.prime, &blocks, Some(tail))?;
    let attained = blocks.iter().map(|b| b.shift + b.poly.coeffs().iter().position(|c| !c.is_zero()).unwrap()).collect();
    Ok(BlockSeries { prime: state.spec.prime, blocks, series, attained })
}

/// `h(α)` for `α ∈ S` as an exact finite sum.
pub fn verify_exceptional_value(h: &BlockSeries, spec: &ExceptionalSetSpec, alpha: &AlgebraicNumber) -> Result<NumberFieldElement> {
    if !spec.contains(alpha)? {
        return Err(Error::NotInS(alpha.to_string()));
    }
    h.exact_value_at(alpha)?
        .ok_or_else(|| Error::Precondition(format!("no built block vanishes at {alpha}; increase the depth")))
}

/// `a_n = ⌊n·u/v⌋ + 1`, the least integer with `a_n/n > u/v`.
pub fn compute_an(rho: &Radius, n: u64) -> Result<BigInt> {
    match rho {
        Radius::Infinity => Err(Error::Precondition("a_n is only defined for a finite radius".into())),
        Radius::Finite(e) => Ok(floor_rat(&(e * rat(n as i64, 1))) + 1),
    }
}

/// `g(z) = 1 + Σ_n p^{ψ_n} z^{ω_n} ∏_{k≤n} P_k(z)` over the polynomials
/// with a root in `B(0, ρ)` (`P_1 = z`), through at least index `last`.
pub fn build_g(prime: Prime, rho: &Radius, last: usize) -> Result<BlockSeries> {
    let Radius::Finite(e) = rho else {
        return Err(Error::Precondition("g is only built for a finite radius".into()));
    };
    let mut polys = PolyEnumerator::new(prime, rho.clone()).filter(|q| q != &IntPolynomial::z());
    let mut prod = IntPolynomial::z();
    let mut omega = 0usize;
    let mut blocks = Vec::new();
    let mut attained = Vec::new();
    let p = prime.get();
    let mut n = 1;
    loop {
        if n > 1 {
            prod = prod.mul(&polys.next().expect("infinite enumeration"));
        }
        let nn = prod.degree();
        omega += nn;
        let mut psi: Option<BigInt> = None;
        let mut arg = 0;
        for (i, d) in prod.coeffs().iter().enumerate().skip(1) {
            if d.is_zero() {
                continue;
            }
            let a = compute_an(rho, (omega + i) as u64)?;
            let cand = a - BigInt::from(crate::arith::vp_int(d, p).unwrap());
            if psi.as_ref().is_none_or(|b| &cand > b) {
                psi = Some(cand);
                arg = omega + i;
            }
        }
        blocks.push(Block { n, exponent: psi.unwrap(), shift: omega, poly: prod.clone() });
        attained.push(arg);
        if omega + nn >= last {
            break;
        }
        n += 1;
    }
    let tail = TailRule::Theorem1Radius { rho_exponent: e.clone() };
    let series = expand(prime, &blocks, Some(tail))?;
    Ok(BlockSeries { prime, blocks, series, attained })
}

/// `f = h + g` over `h`'s prefix, with the minimum of both tail rules.
pub fn build_f(h: &BlockSeries, g: &BlockSeries) -> Result<TruncatedSeries> {
    let last = h.series.last_index();
    if g.series.last_index() < last {
        return Err(Error::Precondition("g must cover h's prefix".into()));
    }
    let g_cut = g.series.truncate(last, g.series.tail().cloned());
    let h_cut = h.series.clone();
    let sum = h_cut.add(&g_cut)?;
    Ok(sum)
}

/// Fills a slack vector deterministically from a seed.
pub fn seeded_slack(seed: u64, len: usize, max: u64) -> Vec<BigInt> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| BigInt::from(rng.gen_range(0..=max))).collect()
}

/// Whether a valuation is an integer (for integer-coefficient checks).
pub fn is_integral_coeff(c: &PAdicScalar) -> bool {
    match c.valuation() {
        Valuation::Infinity => true,
        Valuation::Finite(v) => !v.is_negative() && c.unit().is_some_and(|u| u.denom().is_one()),
    }
}

/// `ν(c_i)/i` per block must increase strictly: the entirety check.
pub fn block_weights(h: &BlockSeries) -> Vec<Rational> {
    h.blocks
        .iter()
        .map(|b| rat_int(b.exponent.clone()) / rat((b.shift + b.poly.degree()) as i64, 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    fn spec(extra: &[&[i64]]) -> ExceptionalSetSpec {
        let mut members = vec![SetMember::all_roots(IntPolynomial::z())];
        members.extend(extra.iter().map(|c| SetMember::all_roots(IntPolynomial::from_i64(c))));
        ExceptionalSetSpec::new(p5(), Radius::Infinity, members, SetMode::FullConjugacy).unwrap()
    }

    #[test]
    fn sequences_for_zero_set() {
        let mut st = Theorem1State::new(spec(&[]), Theorem1Config::default()).unwrap();
        st.advance_to(4).unwrap();
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(st.omega, ints(&[0, 1, 3, 6, 10]));
        assert_eq!(st.delta, ints(&[1, 1, 9, 1944, 19_440_000]));
        assert_eq!(&st.x[..3], &ints(&[1, 1, 1])[..]);
        assert_eq!(st.x[3], BigInt::from(8));
    }

    #[test]
    fn sequences_with_sqrt2() {
        let mut st = Theorem1State::new(spec(&[&[-2, 0, 1]]), Theorem1Config::default()).unwrap();
        st.advance_to(2).unwrap();
        assert_eq!(st.x[1], BigInt::from(1));
        assert_eq!(st.omega[2], BigInt::from(4));
        assert_eq!(st.delta[2], BigInt::from(16));
    }

    #[test]
    fn h_prefix_and_values() {
        let mut st = Theorem1State::new(spec(&[]), Theorem1Config::default()).unwrap();
        let h = build_h(&mut st, 3).unwrap();
        assert_eq!(h.series.dump().lines().take(6).collect::<Vec<_>>(), vec!["0\t0\t1\t1", "1\tinf", "2\t1\t1\t1", "3\tinf", "4\tinf", "5\t9\t1\t1"]);
        let zero = AlgebraicNumber::rational(&rat(0, 1), p5());
        assert_eq!(verify_exceptional_value(&h, &st.spec, &zero).unwrap().as_rational(), Some(rat(1, 1)));
        let one = AlgebraicNumber::rational(&rat(1, 1), p5());
        assert!(matches!(verify_exceptional_value(&h, &st.spec, &one), Err(Error::NotInS(_))));

        let mut st = Theorem1State::new(spec(&[&[-2, 0, 1]]), Theorem1Config::default()).unwrap();
        let h = build_h(&mut st, 3).unwrap();
        for b in AlgebraicNumber::branches(&IntPolynomial::from_i64(&[-2, 0, 1]), p5()).unwrap() {
            let v = verify_exceptional_value(&h, &st.spec, &b).unwrap();
            assert_eq!(v.as_rational(), Some(rat(11, 1)));
            let e = h.series.eval_at(&b, h.series.last_index()).unwrap();
            assert_eq!(e.value, v);
        }
    }

    #[test]
    fn a_n_values() {
        let r = |u, v| Radius::Finite(rat(u, v));
        assert!((1..10).all(|n| compute_an(&r(0, 1), n).unwrap() == BigInt::from(1)));
        assert!((1..10).all(|n| compute_an(&r(1, 1), n).unwrap() == BigInt::from(n + 1)));
        assert!((1..10).all(|n| compute_an(&r(-1, 1), n).unwrap() == BigInt::from(1 - n as i64)));
        assert!(compute_an(&Radius::Infinity, 3).is_err());
    }

    #[test]
    fn g_first_block() {
        let g = build_g(p5(), &Radius::Finite(rat(1, 2)), 40).unwrap();
        assert_eq!(g.blocks[0].exponent, BigInt::from(2));
        assert_eq!(g.series.dump().lines().take(3).collect::<Vec<_>>(), vec!["0\t0\t1\t1", "1\tinf", "2\t2\t1\t1"]);
        assert_eq!(g.series.radius_from_coeffs().certified, Some(Radius::Finite(rat(1, 2))));
    }
}
