use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Monomial;
use super::mpoly::write_terms;

/// Dense univariate integer polynomial, coefficients from the constant term up.
///
/// Trailing zeros are stripped, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly(Vec<BigInt>);

impl UPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: BigInt) -> Self {
        UPoly::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        UPoly(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut g = self.content();
        if self.leading_coefficient().is_negative() {
            g = -g;
        }
        UPoly(self.0.iter().map(|c| c / &g).collect())
    }

    pub fn scale(&self, c: &BigInt) -> UPoly {
        UPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::constant(BigInt::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(g).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// Exact quotient in `Z[x]`, if `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &UPoly) -> Option<UPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(UPoly::zero());
        }
        if self.0.len() < divisor.0.len() {
            return None;
        }
        let dl = divisor.leading_coefficient();
        let mut rem = self.0.clone();
        let shift = self.0.len() - divisor.0.len();
        let mut quot = vec![BigInt::zero(); shift + 1];
        for k in (0..=shift).rev() {
            let top = &rem[k + divisor.0.len() - 1];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&dl);
            if !r.is_zero() {
                return None;
            }
            for (j, d) in divisor.0.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
            quot[k] = q;
        }
        rem.iter().all(|c| c.is_zero()).then(|| UPoly::new(quot))
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn prem(&self, b: &UPoly) -> UPoly {
        assert!(!b.is_zero(), "pseudo-division by zero");
        if self.0.len() < b.0.len() {
            return self.clone();
        }
        let lb = b.leading_coefficient();
        let db = b.degree();
        let mut r = self.clone();
        let mut steps = self.degree() - db + 1;
        while !r.is_zero() && r.degree() >= db {
            let lr = r.leading_coefficient();
            let shift = r.degree() - db;
            let mut next: Vec<BigInt> = r.0.iter().map(|c| c * &lb).collect();
            for (j, c) in b.0.iter().enumerate() {
                next[shift + j] -= &lr * c;
            }
            r = UPoly::new(next);
            steps -= 1;
        }
        r.scale(&lb.pow(steps as u32))
    }

    /// Primitive gcd in `Z[x]` with positive leading coefficient.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part() };
        }
        a.primitive_part().scale(&c)
    }

    pub fn display_with<'a>(&'a self, name: &'a str) -> impl fmt::Display + 'a {
        struct D<'a>(&'a UPoly, &'a str);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let names = [String::from(self.1)];
                let monos: Vec<Monomial> = (0..self.0 .0.len()).map(|e| Monomial(vec![e as u32])).collect();
                let terms = self.0 .0.iter().enumerate().rev().filter(|(_, c)| !c.is_zero());
                write_terms(f, &names, terms.map(|(e, c)| (&monos[e], c)))
            }
        }
        D(self, name)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("x"))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({self})")
    }
}
