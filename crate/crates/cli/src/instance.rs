//! Instance files: parsing, validation and conversion into library types.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Deserialize;

use padic_exceptional::algebraic::{AlgebraicNumber, SetMember};
use padic_exceptional::constructions::{SetMode, TargetSet, Theorem1Config};
use padic_exceptional::{IntPolynomial, Prime, Radius, Rational};

#[derive(Debug, thiserror::Error)]
#[error("schema: {0}")]
pub struct SchemaError(pub String);

fn schema(msg: impl Into<String>) -> SchemaError {
    SchemaError(msg.into())
}

/// An integer given as a JSON number or a decimal string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum IntSpec {
    Num(i64),
    Str(String),
}

impl IntSpec {
    pub fn value(&self) -> Result<BigInt, SchemaError> {
        match self {
            IntSpec::Num(n) => Ok(BigInt::from(*n)),
            IntSpec::Str(s) => s.trim().parse().map_err(|_| schema(format!("not an integer: {s:?}"))),
        }
    }
}

/// A rational given as an integer or an `"a/b"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RatSpec {
    Num(i64),
    Str(String),
}

impl RatSpec {
    pub fn value(&self) -> Result<Rational, SchemaError> {
        match self {
            RatSpec::Num(n) => Ok(Rational::from_integer(BigInt::from(*n))),
            RatSpec::Str(s) => parse_rational(s),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, SchemaError> {
    let bad = || schema(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(schema(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RhoSpec {
    Name(String),
    Frac { num: i64, den: i64 },
}

impl Default for RhoSpec {
    fn default() -> Self {
        RhoSpec::Name("infinity".into())
    }
}

pub fn parse_rho(spec: &RhoSpec) -> Result<Radius, SchemaError> {
    match spec {
        RhoSpec::Name(s) if s == "infinity" || s == "inf" => Ok(Radius::Infinity),
        RhoSpec::Name(s) => Ok(Radius::Finite(parse_rational(s)?)),
        RhoSpec::Frac { num, den } => {
            if *den <= 0 {
                return Err(schema("rho denominator must be positive"));
            }
            Ok(Radius::Finite(Rational::new(BigInt::from(*num), BigInt::from(*den))))
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    #[default]
    Theorem1,
    Theorem3,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolySpec {
    pub coeffs: Vec<IntSpec>,
    pub branches: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub coeffs: Vec<IntSpec>,
    #[serde(default)]
    pub branch: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TargetSpec {
    Rational,
    Avoid { max_degree: u32, max_height: IntSpec },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySpec {
    pub beta: PointSpec,
    pub l: u32,
    pub h_max: IntSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SeriesSpec {
    Named(String),
    Coeffs {
        coeffs: Vec<RatSpec>,
        #[serde(default)]
        finite: bool,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrepSpec {
    pub series: SeriesSpec,
    #[serde(default)]
    pub v: Option<RatSpec>,
    #[serde(default = "default_precision")]
    pub precision: i64,
    pub alpha: Option<PointSpec>,
}

fn default_precision() -> i64 {
    10
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSlack {
    pub len: usize,
    pub max: u64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlackFile {
    #[serde(default)]
    pub slack_omega: Vec<IntSpec>,
    #[serde(default)]
    pub slack_delta: Vec<IntSpec>,
}

/// Raw instance file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub p: u64,
    #[serde(default)]
    pub rho: RhoSpec,
    #[serde(default)]
    pub mode: ModeSpec,
    #[serde(rename = "S", default)]
    pub s: Vec<PolySpec>,
    #[serde(default)]
    pub slack_omega: Vec<IntSpec>,
    #[serde(default)]
    pub slack_delta: Vec<IntSpec>,
    pub random_slack: Option<RandomSlack>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub relaxed: bool,
    #[serde(rename = "X")]
    pub x: Option<Vec<RatSpec>>,
    #[serde(rename = "E", default)]
    pub e: Vec<TargetSpec>,
    pub depth: Option<usize>,
    pub terms: Option<usize>,
    pub certify: Option<CertifySpec>,
    #[serde(default)]
    pub points: Vec<PointSpec>,
    pub prep: Option<PrepSpec>,
}

/// A validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub prime: Prime,
    pub rho: Radius,
    pub mode: SetMode,
    pub members: Vec<SetMember>,
    pub config: Theorem1Config,
    pub seed: u64,
    pub x: Option<Vec<Rational>>,
    pub e: Vec<TargetSet>,
    pub depth: Option<usize>,
    pub terms: Option<usize>,
    pub certify: Option<(PointSpec, u32, BigInt)>,
    pub points: Vec<PointSpec>,
    pub prep: Option<PrepSpec>,
}

pub fn poly_of(coeffs: &[IntSpec]) -> Result<IntPolynomial, SchemaError> {
    let c = coeffs.iter().map(IntSpec::value).collect::<Result<Vec<_>, _>>()?;
    let q = IntPolynomial::new(c);
    if q.is_zero() {
        return Err(schema("zero polynomial"));
    }
    Ok(q)
}

fn ints(v: &[IntSpec], what: &str) -> Result<Vec<BigInt>, SchemaError> {
    let out = v.iter().map(IntSpec::value).collect::<Result<Vec<_>, _>>()?;
    if out.iter().any(|x| x.is_negative()) {
        return Err(schema(format!("{what} entries must be non-negative")));
    }
    Ok(out)
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self, SchemaError> {
        let raw: InstanceFile = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        Self::validate(raw)
    }

    pub fn from_path(path: &Path) -> Result<(Self, Vec<u8>), SchemaError> {
        let bytes = std::fs::read(path).map_err(|e| schema(format!("{}: {e}", path.display())))?;
        let text = std::str::from_utf8(&bytes).map_err(|_| schema("instance is not UTF-8"))?;
        Ok((Self::from_json(text)?, bytes))
    }

    /// Instance given only by flags.
    pub fn bare(p: u64) -> Result<Self, SchemaError> {
        Self::validate(InstanceFile {
            p,
            rho: RhoSpec::default(),
            mode: ModeSpec::Theorem1,
            s: Vec::new(),
            slack_omega: Vec::new(),
            slack_delta: Vec::new(),
            random_slack: None,
            seed: 0,
            relaxed: false,
            x: None,
            e: Vec::new(),
            depth: None,
            terms: None,
            certify: None,
            points: Vec::new(),
            prep: None,
        })
    }

    pub fn validate(raw: InstanceFile) -> Result<Self, SchemaError> {
        let prime = Prime::new(raw.p).map_err(|_| schema(format!("p = {} is not a prime", raw.p)))?;
        let rho = parse_rho(&raw.rho)?;
        let mut members = Vec::new();
        for m in &raw.s {
            let poly = poly_of(&m.coeffs)?;
            let poly = IntPolynomial::primitive(poly.coeffs().to_vec());
            if poly.degree() == 0 {
                return Err(schema("constant polynomial in S"));
            }
            if let Some(b) = &m.branches {
                if b.is_empty() || b.iter().any(|&i| i >= poly.degree()) {
                    return Err(schema(format!("branch list {b:?} invalid for degree {}", poly.degree())));
                }
            }
            members.push(SetMember { poly, branches: m.branches.clone() });
        }
        let mut slack_omega = ints(&raw.slack_omega, "slack_omega")?;
        let mut slack_delta = ints(&raw.slack_delta, "slack_delta")?;
        if let Some(r) = &raw.random_slack {
            if !slack_omega.is_empty() || !slack_delta.is_empty() {
                return Err(schema("random_slack conflicts with explicit slack"));
            }
            slack_omega = padic_exceptional::constructions::theorem1::seeded_slack(raw.seed, r.len, r.max);
            slack_delta = padic_exceptional::constructions::theorem1::seeded_slack(raw.seed ^ 0x9e37_79b9_7f4a_7c15, r.len, r.max);
        }
        let mode = match raw.mode {
            ModeSpec::Theorem1 => SetMode::FullConjugacy,
            ModeSpec::Theorem3 => SetMode::SelectedBranches,
        };
        let x = match &raw.x {
            Some(v) => Some(v.iter().map(RatSpec::value).collect::<Result<Vec<_>, _>>()?),
            None => None,
        };
        let mut e = Vec::new();
        for t in &raw.e {
            e.push(match t {
                TargetSpec::Rational => TargetSet::Rational,
                TargetSpec::Avoid { max_degree, max_height } => {
                    let h = max_height.value()?;
                    if !h.is_positive() {
                        return Err(schema("max_height must be positive"));
                    }
                    TargetSet::Avoid { max_degree: *max_degree, max_height: h }
                }
            });
        }
        if let Some(x) = &x {
            if e.len() > x.len() {
                return Err(schema(format!("{} targets for {} points", e.len(), x.len())));
            }
        }
        if raw.depth == Some(0) || raw.terms == Some(0) {
            return Err(schema("depth and terms must be positive"));
        }
        let certify = match raw.certify {
            Some(c) => {
                poly_of(&c.beta.coeffs)?;
                let h = c.h_max.value()?;
                if h.is_negative() {
                    return Err(schema("h_max must be non-negative"));
                }
                Some((c.beta, c.l, h))
            }
            None => None,
        };
        for pt in &raw.points {
            poly_of(&pt.coeffs)?;
        }
        if let Some(prep) = &raw.prep {
            if let Some(v) = &prep.v {
                v.value()?;
            }
            if let SeriesSpec::Named(n) = &prep.series {
                if !["h", "g", "f", "exp", "log"].contains(&n.as_str()) {
                    return Err(schema(format!("unknown series {n:?}")));
                }
            }
            if prep.precision <= 0 {
                return Err(schema("precision must be positive"));
            }
        }
        Ok(Instance {
            prime,
            rho,
            mode,
            members,
            config: Theorem1Config { slack_omega, slack_delta, relaxed: raw.relaxed },
            seed: raw.seed,
            x,
            e,
            depth: raw.depth,
            terms: raw.terms,
            certify,
            points: raw.points,
            prep: raw.prep,
        })
    }

    pub fn apply_slack_file(&mut self, text: &str) -> Result<(), SchemaError> {
        let f: SlackFile = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        self.config.slack_omega = ints(&f.slack_omega, "slack_omega")?;
        self.config.slack_delta = ints(&f.slack_delta, "slack_delta")?;
        Ok(())
    }

    /// `S`, defaulting to `{0}`.
    pub fn members_or_zero(&self) -> Vec<SetMember> {
        if self.members.is_empty() {
            vec![SetMember::all_roots(IntPolynomial::z())]
        } else {
            self.members.clone()
        }
    }
}

/// A point of an instance as an algebraic number.
pub fn point(spec: &PointSpec, prime: Prime) -> padic_exceptional::Result<AlgebraicNumber> {
    let q = poly_of(&spec.coeffs).map_err(|e| padic_exceptional::Error::Precondition(e.0))?;
    AlgebraicNumber::branch(&IntPolynomial::primitive(q.coeffs().to_vec()), prime, spec.branch)
}
