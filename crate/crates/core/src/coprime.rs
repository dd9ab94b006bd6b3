//! Integer points where several polynomials take globally coprime values.
//!
//! Every variable of the registry is treated as a parameter. The local
//! condition asks that no prime divide all values; a violating prime is a
//! common fixed prime, so it is among the fixed-prime candidates of the
//! first polynomial.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::enumerate::{BoxIter, Spiral};
use crate::factorlab::gcd_q_all;
use crate::fixdiv::{candidate_fixed_primes, EXHAUSTION_BUDGET};
use crate::hilbert::Enumeration;
use crate::polyring::{MPoly, VarSplit};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalEvidence {
    /// Residue tuple and index of a polynomial nonvanishing there mod `p`.
    Refuted { point: Vec<BigInt>, index: usize },
    /// Every polynomial vanishes mod `p` at every residue tuple.
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalReport {
    pub candidates: Vec<BigInt>,
    pub evidence: Vec<(BigInt, LocalEvidence)>,
}

impl LocalReport {
    pub fn holds(&self) -> bool {
        self.evidence.iter().all(|(_, e)| *e != LocalEvidence::Violated)
    }

    pub fn violators(&self) -> Vec<BigInt> {
        self.evidence.iter().filter(|(_, e)| *e == LocalEvidence::Violated).map(|(p, _)| p.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoprimeReport {
    pub local: LocalReport,
    pub point: Vec<BigInt>,
    pub values: Vec<BigInt>,
    pub gcd: BigInt,
    pub examined: u64,
}

impl fmt::Display for CoprimeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", ");
        write!(f, "m = ({}), values ({}), gcd {}", join(&self.point), join(&self.values), self.gcd)
    }
}

fn validate(qs: &[MPoly]) -> Result<VarSplit> {
    if qs.len() < 2 {
        return Err(Error::InvalidArgument("at least two polynomials are required".into()));
    }
    let reg = qs[0].registry();
    if reg.is_empty() {
        return Err(Error::InvalidArgument("at least one parameter is required".into()));
    }
    for q in qs {
        if q.registry() != reg {
            return Err(Error::RegistryMismatch);
        }
        if q.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
    }
    let g = gcd_q_all(qs.iter(), reg);
    if !g.is_constant() {
        return Err(Error::NotCoprime(format!("{g}")));
    }
    VarSplit::from_indices(reg, (0..reg.len()).collect(), Vec::new())
}

fn residue_search(qs: &[MPoly], p: &BigInt) -> Result<LocalEvidence> {
    let k = qs[0].nvars();
    let m = p
        .to_u64()
        .filter(|&m| (m as u128).checked_pow(k as u32).is_some_and(|n| n <= EXHAUSTION_BUDGET as u128))
        .ok_or_else(|| Error::budget(format!("{p}^{k} residue tuples exceed {EXHAUSTION_BUDGET}")))?;
    for t in ResidueTuples::new(k, m) {
        let point: Vec<BigInt> = t.iter().map(|&x| BigInt::from(x)).collect();
        if let Some(index) = qs.iter().position(|q| !q.eval(&point).mod_floor(p).is_zero()) {
            return Ok(LocalEvidence::Refuted { point, index });
        }
    }
    Ok(LocalEvidence::Violated)
}

struct ResidueTuples {
    m: u64,
    next: Option<Vec<u64>>,
}

impl ResidueTuples {
    fn new(k: usize, m: u64) -> Self {
        ResidueTuples { m, next: Some(vec![0; k]) }
    }
}

impl Iterator for ResidueTuples {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        while i > 0 {
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.m {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

/// Checks that no prime divides every value of the polynomials.
pub fn check_copsch_local(qs: &[MPoly]) -> Result<LocalReport> {
    let split = validate(qs)?;
    let candidates = candidate_fixed_primes(&qs[0], &split)?;
    let evidence = candidates
        .iter()
        .map(|p| Ok((p.clone(), residue_search(qs, p)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalReport { candidates, evidence })
}

fn gcd_of(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

/// Points examined by [`coprime_search`] unless told otherwise.
pub const DEFAULT_BUDGET: u64 = 100_000;

/// First point in enumeration order where the values have gcd one.
pub fn coprime_search(qs: &[MPoly], enumeration: &Enumeration, budget: u64) -> Result<CoprimeReport> {
    let local = check_copsch_local(qs)?;
    if let Some(p) = local.violators().into_iter().next() {
        return Err(Error::FixedPrime { prime: p.clone(), context: format!("{p} divides every value") });
    }
    let k = qs[0].nvars();
    let points: Box<dyn Iterator<Item = Vec<i64>>> = match enumeration {
        Enumeration::Spiral => Box::new(Spiral::new(k)),
        Enumeration::Box(n) => Box::new(BoxIter::new(k, *n)),
    };
    for (examined, t) in (1u64..).zip(points.take(budget as usize)) {
        let point: Vec<BigInt> = t.into_iter().map(BigInt::from).collect();
        let values: Vec<BigInt> = qs.iter().map(|q| q.eval(&point)).collect();
        let gcd = gcd_of(&values);
        if gcd.is_one() {
            return Ok(CoprimeReport { local, point, values, gcd, examined });
        }
    }
    Err(Error::budget(format!("no coprime point among the first {budget} points")))
}

/// Number of points of `[-n, n]^k` with coprime values, and the box size.
pub fn coprime_density(qs: &[MPoly], n: i64) -> Result<(u64, u64)> {
    validate(qs)?;
    let k = qs[0].nvars();
    let size = BoxIter::size(k, n);
    if size > crate::hilbert::DENSITY_BUDGET {
        return Err(Error::budget(format!("box of {size} points")));
    }
    let mut hits = 0;
    for t in BoxIter::new(k, n) {
        let point: Vec<BigInt> = t.into_iter().map(BigInt::from).collect();
        let values: Vec<BigInt> = qs.iter().map(|q| q.eval(&point)).collect();
        if gcd_of(&values).is_one() {
            hits += 1;
        }
    }
    Ok((hits, size as u64))
}
