use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{is_prime, mul_mod, pow_mod};
use crate::polyring::{ResiduePoly, UPoly};
use crate::{Error, Result};

/// Dense polynomial over the field with `p` elements, `p < 2^63`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        c.iter_mut().for_each(|a| *a %= p);
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_upoly(f: &UPoly, p: u64) -> Self {
        let m = BigInt::from(p);
        FpPoly::new(p, f.coeffs().iter().map(|a| a.mod_floor(&m).to_u64().unwrap()).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let li = self.inv(l);
                FpPoly::new(self.p, self.c.iter().map(|&a| mul_mod(a, li, self.p)).collect())
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let p = self.p;
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        FpPoly::new(p, (0..n).map(|i| (get(&self.c, i) + p - get(&other.c, i)) % p).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(self.p, Vec::new());
        }
        let p = self.p;
        let mut out = vec![0u128; self.c.len() + other.c.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % pp;
            }
        }
        FpPoly::new(p, out.into_iter().map(|v| v as u64).collect())
    }

    pub fn rem(&self, m: &Self) -> Self {
        assert!(!m.is_zero(), "division by zero polynomial");
        let p = self.p;
        let mut r = self.c.clone();
        let dm = m.degree();
        let li = self.inv(*m.c.last().unwrap());
        while r.len() > dm && !r.is_empty() {
            let top = *r.last().unwrap();
            if top != 0 {
                let q = mul_mod(top, li, p);
                let shift = r.len() - 1 - dm;
                for (j, &b) in m.c.iter().enumerate() {
                    r[shift + j] = (r[shift + j] + p - mul_mod(q, b, p)) % p;
                }
            }
            r.pop();
        }
        FpPoly::new(p, r)
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        FpPoly::new(p, self.c.iter().enumerate().skip(1).map(|(i, &a)| mul_mod(a, i as u64 % p, p)).collect())
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = FpPoly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Distinct-degree irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = self.degree();
        if self.is_zero() || n == 0 {
            return false;
        }
        let f = self.monic();
        let x = FpPoly::x(self.p);
        let mut h = x.rem(&f);
        for _ in 1..=n / 2 {
            h = h.pow_mod(self.p, &f);
            if f.gcd(&h.sub(&x)).degree() > 0 {
                return false;
            }
        }
        true
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == 0
    }

    /// Degrees of the irreducible factors of a squarefree polynomial,
    /// ascending with multiplicity.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut f = self.monic();
        let x = FpPoly::x(self.p);
        let mut h = x.rem(&f);
        let mut out = Vec::new();
        let mut i = 1;
        while f.degree() >= 2 * i {
            h = h.pow_mod(self.p, &f);
            let g = f.gcd(&h.sub(&x));
            if g.degree() > 0 {
                out.extend(core::iter::repeat_n(i, g.degree() / i));
                f = f.div_exact(&g);
                h = h.rem(&f);
            }
            i += 1;
        }
        if f.degree() > 0 {
            out.push(f.degree());
        }
        out
    }

    fn div_exact(&self, g: &Self) -> Self {
        let p = self.p;
        let mut r = self.c.clone();
        let dg = g.degree();
        let li = self.inv(*g.c.last().unwrap());
        let mut q = vec![0u64; r.len() - dg];
        for k in (0..q.len()).rev() {
            let top = r[k + dg];
            let c = mul_mod(top, li, p);
            q[k] = c;
            for (j, &b) in g.c.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mul_mod(c, b, p)) % p;
            }
        }
        FpPoly::new(p, q)
    }
}

/// Irreducibility over the prime field of a univariate residue polynomial.
pub fn is_irreducible_fp(p: &ResiduePoly) -> Result<bool> {
    let m = p.modulus();
    if !is_prime(m) {
        return Err(Error::CompositeModulus(m.clone()));
    }
    if m.bits() > 63 {
        return Err(Error::ModulusTooLarge(m.clone()));
    }
    let mut occurring = p.terms().flat_map(|(mono, _)| {
        mono.exponents().iter().enumerate().filter(|(_, &e)| e > 0).map(|(v, _)| v).collect::<Vec<_>>()
    });
    let var = match occurring.next() {
        None => return Err(Error::ConstantPolynomial),
        Some(v) => v,
    };
    let (q, coeffs) = p
        .univariate_u64(var)
        .ok_or_else(|| Error::InvalidArgument("polynomial is not univariate".into()))?;
    Ok(FpPoly::new(q, coeffs).is_irreducible())
}
