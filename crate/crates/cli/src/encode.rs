//! JSON encodings of library results.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use schinzel_core::coprime::{CoprimeReport, LocalEvidence, LocalReport};
use schinzel_core::enumerate::SpiralCursor;
use schinzel_core::factorlab::{IrredCertificate, Witness};
use schinzel_core::fixdiv::{FixedDivisorReport, PrimeEvidence};
use schinzel_core::hilbert::{DensityReport, HypothesesReport, SpecializationPoint};
use schinzel_core::polyschinzel::{DegreeConditions, DegreeMode, SchinzelDiagnosis, StrongPlan, SubstitutionPlan};
use schinzel_core::{Error, MPoly, Registry};

/// Integers that fit in 64 bits become numbers, larger ones strings.
pub fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn polys(v: &[MPoly]) -> Value {
    Value::Array(v.iter().map(|p| json!(p.to_string())).collect())
}

pub fn certificate(c: &IrredCertificate, registry: &Registry) -> Value {
    let witness = match &c.witness {
        Witness::Prime(p) => json!({ "prime": int(p) }),
        Witness::Point { main, values } => {
            let values: Map<String, Value> =
                values.iter().map(|(v, x)| (registry.name(*v).to_owned(), int(x))).collect();
            json!({ "main": registry.name(*main), "values": values })
        }
        Witness::Factor(f) => json!({ "factor": f.to_string() }),
        Witness::None => Value::Null,
    };
    json!({ "verdict": c.verdict.to_string(), "method": c.method.to_string(), "witness": witness })
}

pub fn fixed(r: &FixedDivisorReport) -> Value {
    let evidence: Vec<Value> = r
        .evidence
        .iter()
        .map(|(p, e)| match e {
            PrimeEvidence::Fixed => json!({ "prime": int(p), "fixed": true }),
            PrimeEvidence::Witness(t) => json!({ "prime": int(p), "fixed": false, "witness": ints(t) }),
        })
        .collect();
    json!({
        "delta": r.delta,
        "content": int(&r.content),
        "candidates": ints(&r.candidates),
        "confirmed": ints(&r.confirmed),
        "evidence": evidence,
    })
}

pub fn hypotheses(r: &HypothesesReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({ "condition": c.condition, "passed": c.passed, "detail": c.detail }))
        .collect();
    json!({ "all_pass": r.all_pass(), "checks": checks, "fixed_divisors": fixed(&r.fixed_divisors) })
}

pub fn point(p: &SpecializationPoint, registry: &Registry) -> Value {
    let certs: Vec<Value> =
        p.certificates.iter().map(|c| c.as_ref().map_or(Value::Null, |c| certificate(c, registry))).collect();
    json!({
        "t": ints(&p.t),
        "member": p.is_member(),
        "content": int(&p.content),
        "reason": p.reason.as_ref().map(|r| r.to_string()),
        "certificates": certs,
    })
}

pub fn cursor(c: &SpiralCursor) -> Value {
    json!({ "shell": c.shell, "ranks": c.ranks, "done": c.done })
}

/// Non-member points beyond this count are omitted from density reports.
pub const MAX_LISTED_POINTS: usize = 1000;

pub fn density(r: &DensityReport) -> Value {
    let listed: Vec<Value> = r.non_member_points.iter().take(MAX_LISTED_POINTS).map(|t| ints(t)).collect();
    json!({
        "total": r.total,
        "members": r.members,
        "non_members": r.non_members,
        "reasons": r.reasons,
        "non_member_points": listed,
        "non_member_points_truncated": r.non_member_points.len() > MAX_LISTED_POINTS,
    })
}

pub fn conditions(c: &DegreeConditions) -> Value {
    json!({
        "star": c.star,
        "a": c.a,
        "b": c.b,
        "c": c.c,
        "ells": c.ells,
        "param_degrees": c.param_degrees,
        "mode": match c.mode { DegreeMode::General => "general", DegreeMode::NearUfd => "near-ufd" },
    })
}

pub fn diagnosis(d: &SchinzelDiagnosis) -> Value {
    json!({
        "failures": d.failures,
        "irreducible": d.irreducible,
        "content": int(&d.content),
        "conditions": conditions(&d.conditions),
        "generic_fixed_divisors": d.generic_fixed.as_ref().map(fixed),
    })
}

pub fn plan(p: &SubstitutionPlan, registry: &Registry) -> Value {
    let certs: Vec<Value> = p.certificates.iter().map(|c| certificate(c, registry)).collect();
    json!({
        "coefficients": ints(&p.theta),
        "substitutions": polys(&p.substitutions),
        "compositions": polys(&p.compositions),
        "certificates": certs,
        "fixed_divisors": p.fixed_divisors.as_ref().map(fixed),
        "examined": p.examined,
    })
}

pub fn strong(s: &StrongPlan, registry: &Registry) -> Value {
    json!({
        "r": s.r,
        "leading_coefficient": int(&s.leading_coefficient),
        "delta": s.delta,
        "bad_primes": ints(&s.bad_primes),
        "theta": int(&s.theta),
        "omega": int(&s.omega),
        "plan": plan(&s.plan, registry),
    })
}

pub fn local(r: &LocalReport) -> Value {
    let evidence: Vec<Value> = r
        .evidence
        .iter()
        .map(|(p, e)| match e {
            LocalEvidence::Violated => json!({ "prime": int(p), "violated": true }),
            LocalEvidence::Refuted { point, index } => {
                json!({ "prime": int(p), "violated": false, "point": ints(point), "index": index })
            }
        })
        .collect();
    json!({ "holds": r.holds(), "candidates": ints(&r.candidates), "evidence": evidence })
}

pub fn coprime(r: &CoprimeReport) -> Value {
    json!({
        "local": local(&r.local),
        "point": ints(&r.point),
        "values": ints(&r.values),
        "gcd": int(&r.gcd),
        "examined": r.examined,
    })
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "syntax",
        Error::UnknownIdentifier { .. } => "unknown-identifier",
        Error::RegistryMismatch => "registry-mismatch",
        Error::InvalidSplit(_) => "invalid-split",
        Error::ZeroPolynomial => "zero-polynomial",
        Error::ConstantPolynomial => "constant-polynomial",
        Error::InvalidModulus(_) => "invalid-modulus",
        Error::CompositeModulus(_) => "composite-modulus",
        Error::ModulusTooLarge(_) => "modulus-too-large",
        Error::BudgetExceeded(_) => "budget",
        Error::NotCoprime(_) => "not-coprime",
        Error::FixedPrime { .. } => "fixed-prime",
        Error::Hypothesis { .. } => "hypothesis",
        Error::Refused(_) => "refused",
        Error::InvalidArgument(_) => "invalid-argument",
    }
}

pub fn error(e: &Error) -> Value {
    let mut v = json!({ "kind": error_kind(e), "message": e.to_string() });
    match e {
        Error::FixedPrime { prime, .. } => v["prime"] = int(prime),
        Error::Refused(d) => v["diagnosis"] = diagnosis(d),
        Error::Hypothesis { condition, .. } => v["condition"] = json!(condition),
        _ => {}
    }
    v
}
