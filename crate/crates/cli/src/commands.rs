//! The subcommands.

use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use serde_json::{json, Value};

use padic_exceptional::algebraic::{is_conjugation_closed, AlgebraicNumber};
use padic_exceptional::constructions::theorem1::block_weights;
use padic_exceptional::constructions::{
    build_f, build_g, build_h, canonical_points, certify_not_algebraic, verify_exceptional_value, AlgebraicEnumerator,
    BlockSeries, ExceptionalSetSpec, SetMode, TargetSet, Theorem1State, Theorem3State, Verdict,
};
use padic_exceptional::newton::{newton_polygon, NewtonPolygon};
use padic_exceptional::series::{builtin_series, Builtin, TailRule, TruncatedSeries};
use padic_exceptional::weierstrass::{prop1_check, select_n, weierstrass_prep, zeros_in_ball, GaussNormView};
use padic_exceptional::{Error, ErrorClass, Prime, Radius, Rational};

use crate::instance::{parse_rho, point, poly_of, Instance, RhoSpec, SchemaError, SeriesSpec};
use crate::json;
use crate::output::{digest, Artifacts};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    GenH,
    GenG,
    GenF,
    GenThm3,
    Eval,
    Certify,
    Prep,
    Newton,
    ConjCheck,
    EnumAlg,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GenH => "gen-h",
            Command::GenG => "gen-g",
            Command::GenF => "gen-f",
            Command::GenThm3 => "gen-thm3",
            Command::Eval => "eval",
            Command::Certify => "certify",
            Command::Prep => "prep",
            Command::Newton => "newton",
            Command::ConjCheck => "conj-check",
            Command::EnumAlg => "enum-alg",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub p: Option<u64>,
    pub rho: Option<String>,
    pub terms: Option<usize>,
    pub depth: Option<usize>,
    pub seed: Option<u64>,
    pub slack_file: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("{}: {0}", .0.name())]
    Core(#[from] Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Core(e) => class_code(e.class()),
            CliError::Io(_) => 1,
        }
    }
}

fn class_code(c: ErrorClass) -> i32 {
    match c {
        ErrorClass::Precondition => 3,
        ErrorClass::Budget => 4,
        ErrorClass::Undecided => 5,
    }
}

/// Result of a command that ran to completion: summary and exit status.
pub struct Outcome {
    pub verdicts: Value,
    pub exit: i32,
    pub message: Option<String>,
}

impl Outcome {
    fn ok(verdicts: Value) -> Self {
        Outcome { verdicts, exit: 0, message: None }
    }
}

pub fn load(instance: Option<&PathBuf>, flags: &Flags) -> Result<(Instance, String), CliError> {
    let (mut inst, bytes) = match instance {
        Some(path) => Instance::from_path(path)?,
        None => {
            let p = flags.p.ok_or_else(|| SchemaError("either an instance file or --p is required".into()))?;
            (Instance::bare(p)?, Vec::new())
        }
    };
    if let Some(p) = flags.p {
        inst.prime = Prime::new(p).map_err(|_| SchemaError(format!("p = {p} is not a prime")))?;
    }
    if let Some(r) = &flags.rho {
        inst.rho = parse_rho(&RhoSpec::Name(r.clone()))?;
    }
    if flags.terms.is_some() {
        inst.terms = flags.terms;
    }
    if flags.depth.is_some() {
        inst.depth = flags.depth;
    }
    if let Some(s) = flags.seed {
        inst.seed = s;
    }
    if let Some(path) = &flags.slack_file {
        let text = std::fs::read_to_string(path).map_err(|e| SchemaError(format!("{}: {e}", path.display())))?;
        inst.apply_slack_file(&text)?;
    }
    Ok((inst, digest(&bytes)))
}

/// Runs a command, writing artifacts atomically; returns the exit status.
pub fn run(cmd: Command, instance: Option<&PathBuf>, flags: &Flags) -> Result<Outcome, CliError> {
    let (inst, inst_digest) = load(instance, flags)?;
    let mut arts = Artifacts::new(flags.out.clone())?;
    let start = Instant::now();
    let res = dispatch(cmd, &inst, &mut arts);
    match res {
        Ok(outcome) => {
            let report = json!({
                "command": cmd.name(),
                "instance_digest": inst_digest,
                "seed": inst.seed,
                "elapsed_ms": start.elapsed().as_millis() as u64,
                "exit": outcome.exit,
                "verdicts": outcome.verdicts,
            });
            arts.finish(report)?;
            Ok(outcome)
        }
        Err(e) => {
            arts.discard();
            Err(e)
        }
    }
}

fn dispatch(cmd: Command, inst: &Instance, arts: &mut Artifacts) -> Result<Outcome, CliError> {
    match cmd {
        Command::GenH => gen_h(inst, arts),
        Command::GenG => gen_g(inst, arts),
        Command::GenF => gen_f(inst, arts),
        Command::GenThm3 => gen_thm3(inst, arts),
        Command::Eval => eval(inst, arts),
        Command::Certify => certify(inst, arts),
        Command::Prep => prep(inst, arts),
        Command::Newton => newton(inst, arts),
        Command::ConjCheck => conj_check(inst, arts),
        Command::EnumAlg => enum_alg(inst, arts),
    }
}

fn theorem1_state(inst: &Instance) -> Result<Theorem1State, CliError> {
    let spec = ExceptionalSetSpec::new(inst.prime, inst.rho.clone(), inst.members_or_zero(), SetMode::FullConjugacy)?;
    Ok(Theorem1State::new(spec, inst.config.clone())?)
}

fn sequences(st: &Theorem1State) -> Value {
    let ints = |v: &[BigInt]| v.iter().map(json::int).collect::<Vec<_>>();
    json!({
        "omega": ints(&st.omega),
        "delta": ints(&st.delta),
        "x": ints(&st.x),
        "betas": st.betas.iter().map(json::algebraic).collect::<Vec<_>>(),
        "relaxed": st.config.relaxed,
    })
}

fn blocks(b: &BlockSeries) -> Value {
    Value::Array(
        b.blocks
            .iter()
            .zip(&b.attained)
            .map(|(blk, at)| {
                json!({ "n": blk.n, "exponent": json::int(&blk.exponent), "shift": blk.shift, "poly": json::ipoly(&blk.poly), "attained": at })
            })
            .collect(),
    )
}

fn h_series(inst: &Instance) -> Result<(Theorem1State, BlockSeries), CliError> {
    let mut st = theorem1_state(inst)?;
    let h = build_h(&mut st, inst.depth.unwrap_or(3))?;
    Ok((st, h))
}

fn exceptional_values(st: &Theorem1State, h: &BlockSeries) -> Result<Vec<Value>, CliError> {
    let mut out = Vec::new();
    for m in &st.spec.members {
        for a in AlgebraicNumber::branches(&m.poly, st.spec.prime)? {
            let v = verify_exceptional_value(h, &st.spec, &a)?;
            out.push(json!({ "alpha": json::algebraic(&a), "value": json::element(&v) }));
        }
    }
    Ok(out)
}

fn gen_h(inst: &Instance, arts: &mut Artifacts) -> Result<Outcome, CliError> {
    let (st, h) = h_series(inst)?;
    arts.write("h.dump", h.series.dump().as_bytes())?;
    let radius = h.series.radius_from_coeffs();
    let weights: Vec<Value> = block_weights(&h).iter().map(json::rat).collect();
    arts.write_json(
        "h.json",
        &json!({
            "sequences": sequences(&st),
            "blocks": blocks(&h),
            "block_weights": weights,
            "tail_rule": h.series.tail().map(|t| t.name()),
            "radius": json::radius_report(&radius),
            "exceptional_values": exceptional_values(&st, &h)?,
            "not_a_certificate": st.config.relaxed,
        }),
    )?;
    Ok(Outcome::ok(json!({ "radius": radius.certified.as_ref().map_or(Value::Null, json::radius), "last_index": h.series.last_index() })))
}

fn finite_rho(inst: &Instance) -> Result<(), CliError> {
    if inst.rho == Radius::Infinity {
        return Err(Error::Precondition("g needs a finite radius (--rho u/v)".into()).into());
    }
    Ok(())
}

fn integer_coefficients(s: &TruncatedSeries) -> bool {
    s.coeffs().iter().all(padic_exceptional::constructions::theorem1::is_integral_coeff)
}

fn gen_g(inst: &Instance, arts: &mut Artifacts) -> Result<Outcome, CliError> {
    finite_rho(inst)?;
    let g = build_g(inst.prime, &inst.rho, inst.terms.unwrap_or(40))?;
    arts.write("g.dump", g.series.dump().as_bytes())?;
    let radius = g.series.radius_from_coeffs();
    arts.write_json(
        "g.json",
        &json!({
            "rho": json::radius(&inst.rho),
            "blocks": blocks(&g),
            "radius": json::radius_report(&radius),
            "integer_coefficients": integer_coefficients(&g.series),
        }),
    )?;
    Ok(Outcome::ok(json!({ "radius": radius.certified.as_ref().map_or(Value::Null, json::radius) })))
}

fn f_series(inst: &Instance) -> Result<(Theorem1State, BlockSeries, TruncatedSeries), CliError> {
    let (st, h) = h_series(inst)?;
    let f = match &inst.rho {
        Radius::Infinity => h.series.clone(),
        Radius::Finite(_) => {
            let g = build_g(inst.prime, &inst.rho, h.series.last_index())?;
            build_f(&h, &g)?
        }
    };
    Ok((st, h, f))
}

fn gen_f(inst: &Instance, arts: &mut Artifacts) -> Result<Outcome, CliError> {
    let (_, _, f) = f_series(inst)?;
    arts.write("f.dump", f.dump().as_bytes())?;
    let radius = f.radius_from_coeffs();
    arts.write_json(
        "f.json",
        &json!({
            "rho": json::radius(&inst.rho),
            "tail_rule": f.tail().map(|t| t.name()),
            "radius": json::radius_report(&radius),
            "integer_coefficients": integer_coefficients(&f),
        }),
    )?;
    Ok(Outcome::ok(json!({ "radius": radius.certified.as_ref().map_or(Value::Null, json::radius) })))
}

fn gen_thm3(inst: &Instance, arts: &mut Artifacts) -> Result<Outcome, CliError> {
    let points = match &inst.x {
        Some(x) => x.clone(),
        None => canonical_points(inst.prime, &inst.rho, 6)?,
    };
    // shorter target lists repeat cyclically
    let targets: Vec<TargetSet> = match inst.e.len() {
        0 => vec![TargetSet::Rational; points.len()],
        k => (0..points.len()).map(|i| inst.e[i % k].clone()).collect(),
    };
    let mut st = Theorem3State::new(inst.prime, inst.rho.clone(), points, targets, inst.seed)?;
    st.advance_to(inst.depth.unwrap_or(6))?;
    let prefix = st.prefix()?;
    arts.write("thm3.log", st.dump().as_bytes())?;
    arts.write("thm3.dump", prefix.dump().as_bytes())?;
    let all_hold = st.log.iter().all(|m| m.holds);
    arts.write_json(
        "thm3.json",
        &json!({
            "points": st.points.iter().map(json::rat).collect::<Vec<_>>(),
            "deltas": st.deltas.iter().map(json::rat).collect::<Vec<_>>(),
            "epsilons": st.epsilons.iter().map(json::rat).collect::<Vec<_>>(),
            "membership": st.log.iter().map(json::membership).collect::<Vec<_>>(),
            "perturbation_room": st.perturbation_room().as_ref().map(json::int),
            "all_hold": all_hold,
        }),
    )?;
    Ok(Outcome::ok(json!({ "all_hold": all_hold, "steps": st.step() })))
}

fn eval(inst: &Instance, arts: &mut Artifacts) -> Result<Outcome, CliError> {
    let (st, h, f) = f_series(inst)?;
    let mut out = Vec::new();
    for spec in &inst.points {
        let a = point(spec, inst.prime)?;
        let r = f.eval_at(&a, f.last_index())?;
        let exact = if inst.rho == Radius::Infinity && st.spec.contains(&a)? {
            Some(json::element(&verify_exceptional_value(&h, &st.spec, &a)?))
        } else {
            None
        };
        out.push(json!({ "point": json::algebraic(&a), "result": json::eval(&r), "exact": exact }));
    }
    arts.write_json("eval.json", &Value::Array(out))?;
    Ok(Outcome::ok(json!({ "points": inst.points.len() })))
}

fn certify(inst: &Instance, arts: &mut Artifacts) -> Result<Outcome, CliError> {
    let Some((beta, l, h_max)) = &inst.certify else {
        return Err(SchemaError("certify needs a \"certify\" section".into()).into());
    };
    let mut st = theorem1_state(inst)?;
    let beta = point(beta, inst.prime)?;
    let cert = certify_not_algebraic(&mut st, &beta, *l, h_max)?;
    arts.write_json("certificate.json", &json::certificate(&cert))?;
    let (exit, message) = match &cert.verdict {
        Verdict::Certified { .. } => (0, None),
        Verdict::BudgetExceeded(r) => (4, Some(format!("budget-exceeded: {r}"))),
    };
    let verdict = json::certificate(&cert);
    Ok(Outcome { verdicts: json!({ "verdict": verdict["verdict"], "n": verdict["n"] }), exit, message })
}

fn named_series(inst: &Instance, spec: &SeriesSpec) -> Result<(TruncatedSeries, Option<BlockSeries>), CliError> {
    let terms = inst.terms.unwrap_or(40);
    Ok(match spec {
        SeriesSpec::Named(n) => match n.as_str() {
            "h" => {
                let (_, h) = h_series(inst)?;
                (h.series.clone(), Some(h))
            }
            "g" => {
                finite_rho(inst)?;
                (build_g(inst.prime, &inst.rho, terms)?.series, None)
            }
            "f" => (f_series(inst)?.2, None),
            "exp" => (builtin_series(Builtin::Exp, inst.prime, terms)?, None),
            _ => (builtin_series(Builtin::Log, inst.prime, terms)?, None),
        },
        SeriesSpec::Coeffs { coeffs, finite } => {
            let c = coeffs.iter().map(|c| c.value()).collect::<Result<Vec<Rational>, _>>()?;
            let tail = finite.then_some(TailRule::Zero);
            (TruncatedSeries::from_rationals(inst.prime, &c, tail)?, None)
        }
    })
}

fn prep(inst: &Instance, arts: &mut Artifacts) -> Result<Outcome, CliError> {
    let Some(spec) = &inst.prep else {
        return Err(SchemaError("prep needs a \"prep\" section".into()).into());
    };
    let (f, blocks) = named_series(inst, &spec.series)?;
    if let Some(a) = &spec.alpha {
        let alpha = point(a, inst.prime)?;
        let exact = match &blocks {
            Some(b) => b.exact_value_at(&alpha)?,
            None => None,
        };
        let r = prop1_check(&f, &alpha, exact.as_ref(), spec.precision)?;
        arts.write_json("prop1.json", &json::prop1(&r))?;
        return Ok(Outcome::ok(json!({ "N": r.prep.n, "divides_to": r.divides_to })));
    }
    let v = match &spec.v {
        Some(v) => v.value()?,
        None => Rational::from_integer(0.into()),
    };
    let n = select_n(&GaussNormView::new(&f, &v)?)?;
    let zeros = zeros_in_ball(&f, &v)?;
    let r = weierstrass_prep(&f, &v, spec.precision)?;
    let mut out = json::prep(&r);
    out["select_N"] = json!(n);
    out["zeros_in_ball"] = json!(zeros);
    arts.write_json("prep.json", &out)?;
    Ok(Outcome::ok(json!({ "N": n, "zeros_in_ball": zeros, "residual": json::val(&r.residual) })))
}

fn newton(inst: &Instance, arts: &mut Artifacts) -> Result<Outcome, CliError> {
    let mut out = Vec::new();
    for spec in &inst.points {
        let q = poly_of(&spec.coeffs)?;
        out.push(json!({ "poly": json::ipoly(&q), "polygon": json::newton(&newton_polygon(&q, inst.prime)?) }));
    }
    if let Some(spec) = &inst.prep {
        let (f, _) = named_series(inst, &spec.series)?;
        out.push(json!({ "series_prefix": f.last_index(), "polygon": json::newton(&NewtonPolygon::from_valuations(&f.valuations())) }));
    }
    if out.is_empty() {
        return Err(SchemaError("newton needs \"points\" polynomials or a \"prep\" series".into()).into());
    }
    arts.write_json("newton.json", &Value::Array(out))?;
    Ok(Outcome::ok(json!({})))
}

fn conj_check(inst: &Instance, arts: &mut Artifacts) -> Result<Outcome, CliError> {
    if inst.members.is_empty() {
        return Err(SchemaError("conj-check needs a non-empty S".into()).into());
    }
    let report = is_conjugation_closed(&inst.members, inst.prime, &inst.rho)?;
    let witness = report.witness.as_ref().map(|w| {
        json!({ "poly": json::ipoly(&w.poly), "branch": w.branch, "reason": w.reason })
    });
    arts.write_json("conj.json", &json!({ "closed": report.closed, "witness": witness }))?;
    let message = report.witness.as_ref().map(|w| {
        format!(
            "{}: {} (polynomial {}, branch {})",
            Error::NotClosed(String::new()).name(),
            w.reason,
            w.poly,
            w.branch.map_or("-".to_string(), |b| b.to_string())
        )
    });
    let exit = if report.closed { 0 } else { 3 };
    Ok(Outcome { verdicts: json!({ "closed": report.closed, "witness": witness }), exit, message })
}

fn enum_alg(inst: &Instance, arts: &mut Artifacts) -> Result<Outcome, CliError> {
    let k = inst.terms.unwrap_or(10);
    let mut e = AlgebraicEnumerator::new(inst.prime, inst.rho.clone(), inst.members.clone());
    let list = e.take_n(k)?;
    arts.write_json("enum.json", &Value::Array(list.iter().map(json::algebraic).collect()))?;
    Ok(Outcome::ok(json!({ "count": list.len() })))
}
