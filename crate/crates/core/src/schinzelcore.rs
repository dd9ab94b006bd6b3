//! Arithmetic progressions along which specializing the first parameter keeps
//! primitivity and the absence of fixed divisors.
//!
//! The construction takes a nonzero integer `δ` in the ideal generated by the
//! `T_1`-coefficient polynomials of the product, collects the bad primes
//! (primes of `δ`, of the content, and primes up to the parameter degree), and
//! picks a base point avoiding vanishing modulo each of them by CRT.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{crt, prime_divisors, primes_up_to};
use crate::factorlab::{gcd_q_all, is_primitive_wrt};
use crate::fixdiv::{fixed_prime_divisors, is_fixed_prime, PrimeEvidence};
use crate::polyring::{MPoly, UPoly, VarSplit};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgressionWitness {
    /// Registry index of the specialized parameter.
    pub param: usize,
    pub delta: BigInt,
    pub bad_primes: Vec<BigInt>,
    pub omega: BigInt,
    pub base_point: Vec<BigInt>,
}

impl ProgressionWitness {
    pub fn alpha(&self) -> &BigInt {
        &self.base_point[0]
    }

    /// `ω·ℓ + α`.
    pub fn term(&self, ell: i64) -> BigInt {
        &self.omega * BigInt::from(ell) + self.alpha()
    }
}

/// Returns `(g, s, t)` with `s·a + t·b = g` and `g` a rational multiple of
/// `gcd(a, b)`, all in `Z[x]`.
fn extended_euclid(a: &UPoly, b: &UPoly) -> UPoly {
    let one = UPoly::constant(BigInt::one());
    let mut prev = (a.clone(), one.clone(), UPoly::zero());
    let mut cur = (b.clone(), UPoly::zero(), one);
    if prev.0.degree() < cur.0.degree() {
        core::mem::swap(&mut prev, &mut cur);
    }
    while !cur.0.is_zero() {
        let (r0, r1) = (&prev.0, &cur.0);
        let e = r0.degree() + 1 - r1.degree().min(r0.degree() + 1);
        let lc = r1.leading_coefficient();
        let scale = lc.pow(e as u32);
        // scale·r0 = q·r1 + r by repeated leading-term elimination.
        let mut r = r0.scale(&scale);
        let mut q = UPoly::zero();
        while !r.is_zero() && r.degree() >= r1.degree() {
            let lr = r.leading_coefficient();
            let shift = r.degree() - r1.degree();
            let (c, rem) = lr.div_rem(&lc);
            debug_assert!(rem.is_zero());
            let mut mono = vec![BigInt::zero(); shift + 1];
            mono[shift] = c;
            let mono = UPoly::new(mono);
            r = r.sub(&mono.mul(r1));
            q = q.add(&mono);
        }
        let s = prev.1.scale(&scale).sub(&q.mul(&cur.1));
        let t = prev.2.scale(&scale).sub(&q.mul(&cur.2));
        let g = r.content().gcd(&s.content()).gcd(&t.content());
        let next = if g.is_zero() || g.is_one() {
            (r, s, t)
        } else {
            let div = |p: &UPoly| UPoly::new(p.coeffs().iter().map(|c| c / &g).collect());
            (div(&r), div(&s), div(&t))
        };
        prev = core::mem::replace(&mut cur, next);
    }
    prev.0
}

/// A nonzero integer in the ideal generated by `coeffs` in `Z[x]`, where the
/// inputs are polynomials in the single variable `var` without a common
/// factor over the rationals.
pub fn bezout_constant(coeffs: &[MPoly], var: usize) -> Result<BigInt> {
    let first = coeffs.first().ok_or_else(|| Error::InvalidArgument("empty coefficient list".into()))?;
    let g = gcd_q_all(coeffs.iter(), first.registry());
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !g.is_constant() {
        return Err(Error::NotCoprime(format!("{g}")));
    }
    let mut acc = UPoly::zero();
    for c in coeffs {
        let u = c
            .to_upoly(var)
            .ok_or_else(|| Error::InvalidArgument(format!("{c} involves more than one variable")))?;
        acc = if acc.degree() == 0 && u.degree() == 0 {
            UPoly::constant(acc.coeff(0).gcd(&u.coeff(0)))
        } else if acc.is_zero() {
            u
        } else {
            extended_euclid(&acc, &u)
        };
    }
    debug_assert_eq!(acc.degree(), 0);
    Ok(acc.coeff(0).abs())
}

/// Primes dividing `δ` or the content of `p`, and primes up to `Δ`.
pub fn bad_prime_set(p: &MPoly, split: &VarSplit, delta: &BigInt) -> Result<Vec<BigInt>> {
    if p.is_zero() || delta.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let big_delta = p.degree_profile(split)?.delta;
    let mut out = prime_divisors(delta);
    out.extend(prime_divisors(&p.content()));
    out.extend(primes_up_to(big_delta as u64).into_iter().map(BigInt::from));
    out.sort();
    out.dedup();
    Ok(out)
}

/// A parameter tuple at which `p` is nonzero modulo every prime in `primes`,
/// assembled by CRT from the least residue witness of each prime.
pub fn nonvanishing_point(p: &MPoly, split: &VarSplit, primes: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut per_prime: Vec<(BigInt, Vec<BigInt>)> = Vec::with_capacity(primes.len());
    for q in primes {
        match is_fixed_prime(p, split, q)? {
            PrimeEvidence::Fixed => {
                return Err(Error::FixedPrime { prime: q.clone(), context: format!("{p} vanishes identically mod {q}") })
            }
            PrimeEvidence::Witness(u) => per_prime.push((q.clone(), u)),
        }
    }
    Ok((0..split.k())
        .map(|j| {
            let congruences: Vec<(BigInt, BigInt)> = per_prime.iter().map(|(q, u)| (u[j].clone(), q.clone())).collect();
            crt(&congruences).expect("distinct primes are coprime")
        })
        .collect())
}

fn product(polys: &[MPoly]) -> Result<MPoly> {
    let first = polys.first().ok_or_else(|| Error::InvalidArgument("empty polynomial list".into()))?;
    let mut acc = MPoly::one(first.registry());
    for p in polys {
        acc = acc.try_mul(p)?;
    }
    Ok(acc)
}

fn check_primitive(polys: &[MPoly], split: &VarSplit) -> Result<()> {
    for (i, p) in polys.iter().enumerate() {
        if !is_primitive_wrt(p, split)? {
            let g = gcd_q_all(p.coefficients_in(split.vars()).values(), p.registry());
            return Err(Error::hypothesis("Prim/Q[T]", format!("P{} = {p} has common factor {g}", i + 1)));
        }
    }
    Ok(())
}

/// Progression witness for specializing the first parameter.
pub fn progression_witness(polys: &[MPoly], split: &VarSplit) -> Result<ProgressionWitness> {
    split.require_params()?;
    let pi = product(polys)?;
    split.check_registry(pi.registry())?;
    check_primitive(polys, split)?;
    let report = fixed_prime_divisors(&pi, split)?;
    if let Some(q) = report.confirmed.first() {
        return Err(Error::FixedPrime {
            prime: q.clone(),
            context: format!("NoFixDiv/Z[T] fails: {q} divides every specialization of the product"),
        });
    }
    let t1 = split.params()[0];
    let rest: Vec<usize> = (0..pi.nvars()).filter(|&v| v != t1).collect();
    let coeffs: Vec<MPoly> = pi.coefficients_in(&rest).into_values().collect();
    let delta = bezout_constant(&coeffs, t1)?;
    let bad_primes = bad_prime_set(&pi, split, &delta)?;
    let base_point = nonvanishing_point(&pi, split, &bad_primes)?;
    let omega = bad_primes.iter().product();
    Ok(ProgressionWitness { param: t1, delta, bad_primes, omega, base_point })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgressionEntry {
    pub ell: i64,
    pub t1: BigInt,
    /// Violated condition, if any.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgressionReport {
    pub entries: Vec<ProgressionEntry>,
}

impl ProgressionReport {
    pub fn exceptional(&self) -> Vec<i64> {
        self.entries.iter().filter(|e| e.failure.is_some()).map(|e| e.ell).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.failure.is_none())
    }
}

/// Checks primitivity and the absence of fixed primes after `T_1 ↦ ωℓ + α`
/// for every `ℓ` in `range`.
pub fn verify_progression(
    polys: &[MPoly],
    split: &VarSplit,
    witness: &ProgressionWitness,
    range: RangeInclusive<i64>,
) -> Result<ProgressionReport> {
    let rest = split.drop_first_param();
    let mut entries = Vec::new();
    for ell in range {
        let t1 = witness.term(ell);
        let spec: Vec<MPoly> = polys.iter().map(|p| p.specialize(&[(witness.param, t1.clone())])).collect();
        let failure = match spec.iter().position(|p| p.is_zero()) {
            Some(i) => Some(format!("P{} vanishes", i + 1)),
            None => match check_primitive(&spec, &rest) {
                Err(e) => Some(format!("{e}")),
                Ok(()) => {
                    let pi = product(&spec)?;
                    let report = fixed_prime_divisors(&pi, &rest)?;
                    report.confirmed.first().map(|q| format!("NoFixDiv fails: fixed prime {q}"))
                }
            },
        };
        entries.push(ProgressionEntry { ell, t1, failure });
    }
    Ok(ProgressionReport { entries })
}
