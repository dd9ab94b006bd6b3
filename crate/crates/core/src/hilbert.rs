//! Specializations `t ∈ Z^k` at which every `P_i(t, Y)` stays irreducible
//! over the integers (irreducible over the rationals, product content one).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::enumerate::{BoxIter, Spiral, SpiralCursor};
use crate::factorlab::{gcd_q_all, is_irreducible_q, is_primitive_wrt, IrredCertificate};
use crate::fixdiv::{fixed_prime_divisors, FixedDivisorReport};
use crate::polyring::{MPoly, VarSplit};
use crate::{Error, Result};

pub const IRRED: &str = "Irred/Q(T)";
pub const PRIM: &str = "Prim/Q[T]";
pub const NOFIXDIV: &str = "NoFixDiv/Z[T]";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionCheck {
    pub condition: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesesReport {
    pub checks: Vec<ConditionCheck>,
    pub fixed_divisors: FixedDivisorReport,
}

impl HypothesesReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

pub(crate) fn validate(polys: &[MPoly], split: &VarSplit) -> Result<()> {
    if polys.is_empty() {
        return Err(Error::InvalidArgument("at least one polynomial is required".into()));
    }
    split.require_params()?;
    split.require_vars()?;
    for p in polys {
        split.check_registry(p.registry())?;
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
    }
    Ok(())
}

pub(crate) fn product(polys: &[MPoly]) -> MPoly {
    polys.iter().skip(1).fold(polys[0].clone(), |acc, p| &acc * p)
}

/// Checks irreducibility over the rational function field in the
/// parameters, primitivity, and the absence of fixed prime divisors.
pub fn hypotheses_check(polys: &[MPoly], split: &VarSplit) -> Result<HypothesesReport> {
    validate(polys, split)?;
    let mut irred = ConditionCheck { condition: IRRED, passed: true, detail: String::new() };
    let mut prim = ConditionCheck { condition: PRIM, passed: true, detail: String::new() };
    for (i, p) in polys.iter().enumerate() {
        let g = gcd_q_all(p.coefficients_in(split.vars()).values(), p.registry());
        if irred.passed {
            let core = p.div_exact(&g).map(|q| q.primitive_part());
            match core {
                Some(c) if c.degree_in_vars(split.vars()) >= 1 => {
                    let cert = is_irreducible_q(&c)?;
                    if !cert.is_irreducible() {
                        irred.passed = false;
                        irred.detail = format!("P{} = {p} is reducible ({} certificate)", i + 1, cert.method);
                    }
                }
                _ => {
                    irred.passed = false;
                    irred.detail = format!("P{} = {p} has degree 0 in the variables", i + 1);
                }
            }
        }
        if prim.passed && !is_primitive_wrt(p, split)? {
            prim.passed = false;
            prim.detail = format!("P{} = {p} has common factor {g}", i + 1);
        }
    }
    let fixed_divisors = fixed_prime_divisors(&product(polys), split)?;
    let nofix = ConditionCheck {
        condition: NOFIXDIV,
        passed: fixed_divisors.is_empty(),
        detail: match fixed_divisors.confirmed.first() {
            Some(q) => format!("fixed prime {q} divides every specialization of the product"),
            None => String::new(),
        },
    };
    Ok(HypothesesReport { checks: alloc::vec![irred, prim, nofix], fixed_divisors })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonMember {
    /// `P_i(t, Y)` is constant.
    Degenerate(usize),
    Reducible(usize),
    /// Content of the specialized product is not one.
    Content(BigInt),
}

impl NonMember {
    pub fn kind(&self) -> &'static str {
        match self {
            NonMember::Degenerate(_) => "degenerate",
            NonMember::Reducible(_) => "reducible",
            NonMember::Content(_) => "content",
        }
    }
}

impl fmt::Display for NonMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonMember::Degenerate(i) => write!(f, "P{}(t, Y) is constant", i + 1),
            NonMember::Reducible(i) => write!(f, "P{}(t, Y) is reducible", i + 1),
            NonMember::Content(c) => write!(f, "product content {c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationPoint {
    pub t: Vec<BigInt>,
    /// `None` for degenerate specializations.
    pub certificates: Vec<Option<IrredCertificate>>,
    pub content: BigInt,
    pub reason: Option<NonMember>,
}

impl SpecializationPoint {
    pub fn is_member(&self) -> bool {
        self.reason.is_none()
    }
}

/// Full membership evidence at `t`.
pub fn specialization_check(polys: &[MPoly], split: &VarSplit, t: &[BigInt]) -> Result<SpecializationPoint> {
    validate(polys, split)?;
    if t.len() != split.k() {
        return Err(Error::InvalidArgument(format!("expected {} parameter values, got {}", split.k(), t.len())));
    }
    let values: Vec<(usize, BigInt)> = split.params().iter().copied().zip(t.iter().cloned()).collect();
    let mut certificates = Vec::with_capacity(polys.len());
    let mut content = BigInt::one();
    let mut reason = None;
    for (i, p) in polys.iter().enumerate() {
        let s = p.specialize(&values);
        content *= s.content();
        if s.is_constant() {
            certificates.push(None);
            reason.get_or_insert(NonMember::Degenerate(i));
            continue;
        }
        let cert = is_irreducible_q(&s)?;
        if !cert.is_irreducible() && !matches!(reason, Some(NonMember::Degenerate(_))) {
            reason.get_or_insert(NonMember::Reducible(i));
        }
        certificates.push(Some(cert));
    }
    if reason.is_none() && !content.is_one() {
        reason = Some(NonMember::Content(content.clone()));
    }
    Ok(SpecializationPoint { t: t.to_vec(), certificates, content, reason })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Spiral,
    /// Lexicographic over `[-n, n]^k`.
    Box(i64),
}

enum Points {
    Spiral(Spiral),
    Box(BoxIter),
}

/// Lazy stream of members in enumeration order.
pub struct HilbertSearch {
    polys: Vec<MPoly>,
    split: VarSplit,
    points: Points,
    budget: u64,
    examined: u64,
    found: u64,
    failed: bool,
}

impl HilbertSearch {
    pub fn examined(&self) -> u64 {
        self.examined
    }

    /// Resumable position when enumerating by spiral.
    pub fn cursor(&self) -> Option<&SpiralCursor> {
        match &self.points {
            Points::Spiral(s) => Some(s.cursor()),
            Points::Box(_) => None,
        }
    }

    /// Continues a spiral search from `cursor` with a fresh budget.
    pub fn resume(polys: &[MPoly], split: &VarSplit, cursor: SpiralCursor, budget: u64) -> Result<Self> {
        let mut s = hilbert_search(polys, split, Enumeration::Spiral, budget)?;
        s.points = Points::Spiral(Spiral::resume(cursor));
        Ok(s)
    }
}

impl Iterator for HilbertSearch {
    type Item = Result<SpecializationPoint>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            if self.examined >= self.budget {
                self.failed = true;
                return (self.found == 0)
                    .then(|| Err(Error::budget(format!("no member among the first {} points", self.budget))));
            }
            let t = match &mut self.points {
                Points::Spiral(s) => s.next(),
                Points::Box(b) => b.next(),
            };
            let Some(t) = t else {
                self.failed = true;
                return None;
            };
            self.examined += 1;
            let t: Vec<BigInt> = t.into_iter().map(BigInt::from).collect();
            match specialization_check(&self.polys, &self.split, &t) {
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
                Ok(point) if point.is_member() => {
                    self.found += 1;
                    return Some(Ok(point));
                }
                Ok(_) => {}
            }
        }
    }
}

/// Starts a lazy search examining at most `budget` points.
pub fn hilbert_search(polys: &[MPoly], split: &VarSplit, enumeration: Enumeration, budget: u64) -> Result<HilbertSearch> {
    validate(polys, split)?;
    let points = match enumeration {
        Enumeration::Spiral => Points::Spiral(Spiral::new(split.k())),
        Enumeration::Box(n) => Points::Box(BoxIter::new(split.k(), n)),
    };
    Ok(HilbertSearch {
        polys: polys.to_vec(),
        split: split.clone(),
        points,
        budget,
        examined: 0,
        found: 0,
        failed: false,
    })
}

/// Points allowed in one exhaustive density count.
pub const DENSITY_BUDGET: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DensityReport {
    pub total: u64,
    pub members: u64,
    pub non_members: u64,
    pub reasons: BTreeMap<String, u64>,
    pub non_member_points: Vec<Vec<BigInt>>,
}

impl DensityReport {
    /// Combines counts of disjoint point sets; points stay in argument order.
    pub fn merge(mut self, other: DensityReport) -> DensityReport {
        self.total += other.total;
        self.members += other.members;
        self.non_members += other.non_members;
        for (k, v) in other.reasons {
            *self.reasons.entry(k).or_default() += v;
        }
        self.non_member_points.extend(other.non_member_points);
        self
    }
}

/// Exact counts over the given points.
pub fn density_over(
    polys: &[MPoly],
    split: &VarSplit,
    points: impl IntoIterator<Item = Vec<i64>>,
) -> Result<DensityReport> {
    validate(polys, split)?;
    let mut report = DensityReport::default();
    for t in points {
        let t: Vec<BigInt> = t.into_iter().map(BigInt::from).collect();
        let point = specialization_check(polys, split, &t)?;
        report.total += 1;
        match point.reason {
            None => report.members += 1,
            Some(r) => {
                report.non_members += 1;
                *report.reasons.entry(r.kind().to_string()).or_default() += 1;
                report.non_member_points.push(t);
            }
        }
    }
    Ok(report)
}

/// Exact counts over the box `[-n, n]^k`.
pub fn density_report(polys: &[MPoly], split: &VarSplit, n: i64) -> Result<DensityReport> {
    validate(polys, split)?;
    if n < 0 {
        return Err(Error::InvalidArgument("box radius must be non-negative".into()));
    }
    if BoxIter::size(split.k(), n) > DENSITY_BUDGET {
        return Err(Error::budget(format!("box of radius {n} in dimension {} exceeds {DENSITY_BUDGET} points", split.k())));
    }
    density_over(polys, split, BoxIter::new(split.k(), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Registry;
    use alloc::vec;

    fn setup(polys: &[&str]) -> (Vec<MPoly>, VarSplit) {
        let r = Registry::new(&["T", "Y"]).unwrap();
        (polys.iter().map(|s| MPoly::parse(s, &r).unwrap()).collect(), VarSplit::new(&r, &["T"], &["Y"]).unwrap())
    }

    fn t(v: i64) -> Vec<BigInt> {
        vec![BigInt::from(v)]
    }

    #[test]
    fn hypotheses() {
        let (ps, s) = setup(&["Y^2-T"]);
        assert!(hypotheses_check(&ps, &s).unwrap().all_pass());
        let (ps, s) = setup(&["(T^2-T)*Y + T^2-T-2"]);
        let r = hypotheses_check(&ps, &s).unwrap();
        assert_eq!(r.failed().unwrap().condition, NOFIXDIV);
        assert_eq!(r.fixed_divisors.confirmed, vec![BigInt::from(2)]);
        let (ps, s) = setup(&["T*Y+T"]);
        let r = hypotheses_check(&ps, &s).unwrap();
        assert!(r.checks[0].passed);
        assert_eq!(r.failed().unwrap().condition, PRIM);
        let (ps, s) = setup(&["Y^2-T^2"]);
        assert_eq!(hypotheses_check(&ps, &s).unwrap().failed().unwrap().condition, IRRED);
    }

    #[test]
    fn membership() {
        let (ps, s) = setup(&["Y^2-T"]);
        assert!(specialization_check(&ps, &s, &t(2)).unwrap().is_member());
        assert_eq!(specialization_check(&ps, &s, &t(1)).unwrap().reason, Some(NonMember::Reducible(0)));
        let (ps, s) = setup(&["2*Y+T"]);
        assert_eq!(specialization_check(&ps, &s, &t(2)).unwrap().reason, Some(NonMember::Content(BigInt::from(2))));
        assert!(specialization_check(&ps, &s, &t(1)).unwrap().is_member());
        let (ps, s) = setup(&["T*Y+1"]);
        assert_eq!(specialization_check(&ps, &s, &t(0)).unwrap().reason, Some(NonMember::Degenerate(0)));
    }

    #[test]
    fn search_order() {
        let first = |polys: &[&str]| {
            let (ps, s) = setup(polys);
            hilbert_search(&ps, &s, Enumeration::Spiral, 100).unwrap().next().unwrap().unwrap().t
        };
        assert_eq!(first(&["Y^2-T"]), t(-1));
        assert_eq!(first(&["Y-T"]), t(0));
        assert_eq!(first(&["Y^2-T", "Y^2+T"]), t(2));
    }

    #[test]
    fn search_budget_and_prefix() {
        let (ps, s) = setup(&["Y^2-T"]);
        let err = hilbert_search(&ps, &s, Enumeration::Spiral, 2).unwrap().next().unwrap().unwrap_err();
        assert!(err.is_budget());
        let small: Vec<_> = hilbert_search(&ps, &s, Enumeration::Spiral, 20).unwrap().map(|p| p.unwrap().t).collect();
        let large: Vec<_> = hilbert_search(&ps, &s, Enumeration::Spiral, 60).unwrap().map(|p| p.unwrap().t).collect();
        assert_eq!(&large[..small.len()], &small[..]);
        let mut search = hilbert_search(&ps, &s, Enumeration::Spiral, 10).unwrap();
        let head: Vec<_> = search.by_ref().map(|p| p.unwrap().t).collect();
        let tail: Vec<_> = HilbertSearch::resume(&ps, &s, search.cursor().unwrap().clone(), 10)
            .unwrap()
            .map(|p| p.unwrap().t)
            .collect();
        assert_eq!([head, tail].concat(), small);
    }

    #[test]
    fn densities() {
        let (ps, s) = setup(&["Y^2-T"]);
        let r = density_report(&ps, &s, 100).unwrap();
        assert_eq!(r.non_members, 11);
        assert_eq!(r.non_member_points, (0..=10).map(|i| t(i * i)).collect::<Vec<_>>());
        let (ps, s) = setup(&["Y-T"]);
        let r = density_report(&ps, &s, 10).unwrap();
        assert_eq!((r.members, r.non_members), (21, 0));
        let (ps, s) = setup(&["2*Y+T"]);
        let r = density_report(&ps, &s, 10).unwrap();
        assert_eq!(r.non_members, 11);
        assert_eq!(r.reasons.get("content"), Some(&11));
    }
}
