//! Fixed prime divisors with respect to the parameters.
//!
//! A prime `p` is a fixed divisor of `P(T, Y)` when `P(t, Y) ≡ 0 (mod p)` for
//! every integer tuple `t`. Only primes `p ≤ Δ` (the largest degree in a
//! single parameter) and primes dividing the content can be fixed, so the
//! candidate list is finite and each candidate is settled by checking the
//! `p^k` residue tuples.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{is_prime, mul_mod, prime_divisors, primes_up_to};
use crate::polyring::{MPoly, VarSplit};
use crate::{Error, Result};

/// Residue tuples allowed per candidate prime.
pub const EXHAUSTION_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeEvidence {
    /// Every residue tuple gives the zero polynomial.
    Fixed,
    /// Lexicographically least parameter tuple with nonzero reduction.
    Witness(Vec<BigInt>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedDivisorReport {
    pub candidates: Vec<BigInt>,
    pub confirmed: Vec<BigInt>,
    pub evidence: Vec<(BigInt, PrimeEvidence)>,
    pub delta: u32,
    pub content: BigInt,
}

impl FixedDivisorReport {
    pub fn is_empty(&self) -> bool {
        self.confirmed.is_empty()
    }
}

impl fmt::Display for FixedDivisorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[BigInt]| v.iter().map(|p| format!("{p}")).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "delta {}, content {}, candidates {{{}}}, fixed {{{}}}",
            self.delta,
            self.content,
            list(&self.candidates),
            list(&self.confirmed)
        )
    }
}

fn check(p: &MPoly, split: &VarSplit) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    split.check_registry(p.registry())
}

/// Primes `≤ Δ` together with the primes dividing the content, ascending.
pub fn candidate_fixed_primes(p: &MPoly, split: &VarSplit) -> Result<Vec<BigInt>> {
    check(p, split)?;
    let delta = p.degree_profile(split)?.delta;
    let mut out: Vec<BigInt> = primes_up_to(delta as u64).into_iter().map(BigInt::from).collect();
    out.extend(prime_divisors(&p.content()));
    out.sort();
    out.dedup();
    Ok(out)
}

/// Decides whether the prime `q` is a fixed divisor of `p`.
pub fn is_fixed_prime(p: &MPoly, split: &VarSplit, q: &BigInt) -> Result<PrimeEvidence> {
    check(p, split)?;
    if !is_prime(q) {
        return Err(Error::CompositeModulus(q.clone()));
    }
    if (p.content() % q).is_zero() {
        return Ok(PrimeEvidence::Fixed);
    }
    let params: Vec<usize> = split.params().iter().copied().filter(|&v| p.involves(v)).collect();
    let zero_tuple = || vec![BigInt::zero(); split.k()];
    if params.is_empty() {
        return Ok(PrimeEvidence::Witness(zero_tuple()));
    }
    let small = q.to_u64().filter(|&m| {
        (m as u128).checked_pow(params.len() as u32).is_some_and(|n| n <= EXHAUSTION_BUDGET as u128)
    });
    let Some(m) = small else {
        return Err(Error::budget(format!("{q}^{} residue tuples exceed {EXHAUSTION_BUDGET}", params.len())));
    };
    // Each coefficient (in the variables) as a list of (parameter exponents, residue).
    let coeffs: Vec<Vec<(Vec<usize>, u64)>> = p
        .coefficients_in(split.vars())
        .values()
        .map(|c| {
            c.terms()
                .filter_map(|(mono, a)| {
                    let r = a.mod_floor(q).to_u64().unwrap();
                    (r != 0).then(|| (params.iter().map(|&v| mono.0[v] as usize).collect(), r))
                })
                .collect()
        })
        .collect();
    let max_e = params.iter().map(|&v| p.degree_in(v) as usize).max().unwrap_or(0);
    // powers[t][e] = t^e mod m
    let powers: Vec<Vec<u64>> = (0..m)
        .map(|t| {
            let mut row = vec![1 % m; max_e + 1];
            for e in 1..=max_e {
                row[e] = mul_mod(row[e - 1], t, m);
            }
            row
        })
        .collect();
    let mut t = vec![0u64; params.len()];
    loop {
        let nonzero = coeffs.iter().any(|terms| {
            let mut acc = 0u64;
            for (exps, c) in terms {
                let mut v = *c;
                for (i, &e) in exps.iter().enumerate() {
                    v = mul_mod(v, powers[t[i] as usize][e], m);
                }
                acc = (acc + v) % m;
            }
            acc != 0
        });
        if nonzero {
            let mut w = zero_tuple();
            for (i, &v) in params.iter().enumerate() {
                let pos = split.params().iter().position(|&x| x == v).unwrap();
                w[pos] = BigInt::from(t[i]);
            }
            return Ok(PrimeEvidence::Witness(w));
        }
        let mut i = t.len();
        loop {
            if i == 0 {
                return Ok(PrimeEvidence::Fixed);
            }
            i -= 1;
            t[i] += 1;
            if t[i] < m {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Runs [`is_fixed_prime`] over every candidate.
pub fn fixed_prime_divisors(p: &MPoly, split: &VarSplit) -> Result<FixedDivisorReport> {
    let candidates = candidate_fixed_primes(p, split)?;
    let mut confirmed = Vec::new();
    let mut evidence = Vec::new();
    for q in &candidates {
        let e = is_fixed_prime(p, split, q)?;
        if e == PrimeEvidence::Fixed {
            confirmed.push(q.clone());
        }
        evidence.push((q.clone(), e));
    }
    Ok(FixedDivisorReport {
        candidates,
        confirmed,
        evidence,
        delta: p.degree_profile(split)?.delta,
        content: p.content(),
    })
}

/// Product of the fixed primes; inverting it removes every fixed divisor.
pub fn removal_scalar(p: &MPoly, split: &VarSplit) -> Result<BigInt> {
    Ok(fixed_prime_divisors(p, split)?.confirmed.iter().product())
}

/// `∏ (2^q - 2)` over prime powers `q ≤ b`; divisible by every prime `≤ b`.
pub fn gamma_b_witness(b: u64) -> BigInt {
    let mut out = BigInt::one();
    for q in 2..=b {
        if is_prime_power(q) {
            out *= (BigInt::one() << q as usize) - 2u32;
        }
    }
    out
}

fn is_prime_power(n: u64) -> bool {
    let Some(p) = primes_up_to(n).into_iter().find(|p| n.is_multiple_of(*p)) else { return false };
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}
