use alloc::collections::BTreeMap;
use alloc::vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::mpoly::write_terms;
use super::{MPoly, Monomial, Registry};
use crate::{Error, Result};

/// Polynomial with coefficients reduced into `[0, m)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResiduePoly {
    registry: Registry,
    modulus: BigInt,
    terms: BTreeMap<Monomial, BigInt>,
}

impl ResiduePoly {
    pub fn from_mpoly(p: &MPoly, m: &BigInt) -> Result<Self> {
        if *m < BigInt::from(2) {
            return Err(Error::InvalidModulus(m.clone()));
        }
        let mut terms = BTreeMap::new();
        for (mono, c) in p.terms() {
            let r = c.mod_floor(m);
            if !r.is_zero() {
                terms.insert(mono.clone(), r);
            }
        }
        Ok(ResiduePoly { registry: p.registry().clone(), modulus: m.clone(), terms })
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.registry != other.registry || self.modulus != other.modulus {
            return Err(Error::RegistryMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let v = (out.terms.get(m).cloned().unwrap_or_default() + c).mod_floor(&self.modulus);
            if v.is_zero() {
                out.terms.remove(m);
            } else {
                out.terms.insert(m.clone(), v);
            }
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = Monomial(ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect());
                *acc.entry(m).or_default() += ca * cb;
            }
        }
        let terms = acc
            .into_iter()
            .filter_map(|(m, c)| {
                let r = c.mod_floor(&self.modulus);
                (!r.is_zero()).then_some((m, r))
            })
            .collect();
        Ok(ResiduePoly { registry: self.registry.clone(), modulus: self.modulus.clone(), terms })
    }

    /// Dense coefficients in `var` as machine words; `None` if another
    /// variable occurs or the modulus does not fit.
    pub fn univariate_u64(&self, var: usize) -> Option<(u64, vec::Vec<u64>)> {
        let p = self.modulus.to_u64()?;
        let deg = self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0) as usize;
        let mut out = vec![0u64; deg + 1];
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(v, &e)| v != var && e > 0) {
                return None;
            }
            out[m.0[var] as usize] = c.to_u64()?;
        }
        while out.len() > 1 && *out.last().unwrap() == 0 {
            out.pop();
        }
        Some((p, out))
    }
}

impl fmt::Display for ResiduePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.registry.names(), self.terms.iter().rev())?;
        write!(f, " (mod {})", self.modulus)
    }
}
