use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ResiduePoly, UPoly, VarSplit};
use crate::{Error, Result};

/// Ordered list of variable names shared by a family of polynomials.
#[derive(Clone)]
pub struct Registry(Arc<Vec<String>>);

impl Registry {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut seen: Vec<&str> = Vec::new();
        for n in names {
            let n = n.as_ref();
            if !is_identifier(n) {
                return Err(Error::InvalidArgument(alloc::format!("`{n}` is not a valid identifier")));
            }
            if seen.contains(&n) {
                return Err(Error::InvalidArgument(alloc::format!("duplicate variable `{n}`")));
            }
            seen.push(n);
        }
        Ok(Registry(Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect())))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// This registry followed by `extra` names.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Registry> {
        let mut all: Vec<String> = self.0.as_ref().clone();
        all.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Registry::new(&all)
    }
}

impl PartialEq for Registry {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Registry {}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric())
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degrees of a polynomial relative to a parameter/variable split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    /// `deg_{x}(P)` for every registered name, in registry order.
    pub per_name: Vec<(String, u32)>,
    /// Maximum degree in a single parameter (0 when there are none).
    pub delta: u32,
    /// Total degree in the variables.
    pub deg_vars: u32,
}

/// Sparse polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    registry: Registry,
    terms: BTreeMap<Monomial, BigInt>,
}

impl MPoly {
    pub fn zero(registry: &Registry) -> Self {
        MPoly { registry: registry.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(registry: &Registry, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = MPoly::zero(registry);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(registry.len()), c);
        }
        p
    }

    pub fn one(registry: &Registry) -> Self {
        MPoly::constant(registry, 1)
    }

    /// The variable with registry index `i`.
    pub fn var(registry: &Registry, i: usize) -> Self {
        let mut m = Monomial::one(registry.len());
        m.0[i] = 1;
        MPoly::monomial(registry, m, BigInt::one())
    }

    pub fn var_named(registry: &Registry, name: &str) -> Result<Self> {
        let i = registry
            .index_of(name)
            .ok_or_else(|| Error::UnknownIdentifier { name: name.to_string(), pos: 0 })?;
        Ok(MPoly::var(registry, i))
    }

    pub fn monomial(registry: &Registry, m: Monomial, c: BigInt) -> Self {
        assert_eq!(m.0.len(), registry.len(), "exponent vector length");
        let mut p = MPoly::zero(registry);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms(registry: &Registry, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = MPoly::zero(registry);
        for (m, c) in terms {
            assert_eq!(m.0.len(), registry.len(), "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    pub fn parse(text: &str, registry: &Registry) -> Result<Self> {
        super::parse::parse_with_registry(text, registry)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn nvars(&self) -> usize {
        self.registry.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if !self.is_constant() {
            return None;
        }
        self.terms.values().next().cloned()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    fn check_same(&self, other: &MPoly) -> Result<()> {
        if self.registry == other.registry {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same(other)?;
        let mut out = MPoly::zero(&self.registry);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(&self.registry);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.registry);
        }
        MPoly { registry: self.registry.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// Exact division by a nonzero integer; `None` if some coefficient is not divisible.
    pub fn div_scalar(&self, c: &BigInt) -> Option<MPoly> {
        let mut terms = BTreeMap::new();
        for (m, a) in &self.terms {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            terms.insert(m.clone(), q);
        }
        Some(MPoly { registry: self.registry.clone(), terms })
    }

    /// gcd of the integer coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        crate::arith::gcd_all(self.terms.values())
    }

    /// `self / content`, keeping the sign of the coefficients; zero stays zero.
    pub fn primitive_part(&self) -> MPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        self.div_scalar(&c).expect("content divides")
    }

    /// Multiplies by -1 when the leading coefficient is negative.
    pub fn normalize_sign(&self) -> MPoly {
        if self.leading_coefficient().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Total degree in the listed variables.
    pub fn degree_in_vars(&self, vars: &[usize]) -> u32 {
        self.terms.keys().map(|m| vars.iter().map(|&v| m.0[v]).sum::<u32>()).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Registry indices of the variables actually present.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&v| self.involves(v)).collect()
    }

    pub fn degree_profile(&self, split: &VarSplit) -> Result<DegreeProfile> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        split.check_registry(&self.registry)?;
        let per_name =
            (0..self.nvars()).map(|i| (self.registry.name(i).to_string(), self.degree_in(i))).collect();
        let delta = split.params().iter().map(|&i| self.degree_in(i)).max().unwrap_or(0);
        let deg_vars = self.degree_in_vars(split.vars());
        Ok(DegreeProfile { per_name, delta, deg_vars })
    }

    /// Ring homomorphism replacing each bound variable by a polynomial over the same registry.
    pub fn substitute<S: AsRef<str>>(&self, bindings: &[(S, MPoly)]) -> Result<MPoly> {
        let mut idx = Vec::with_capacity(bindings.len());
        for (name, value) in bindings {
            let name = name.as_ref();
            let i = self
                .registry
                .index_of(name)
                .ok_or_else(|| Error::UnknownIdentifier { name: name.to_string(), pos: 0 })?;
            self.check_same(value)?;
            idx.push((i, value.clone()));
        }
        Ok(self.substitute_indices(&idx))
    }

    pub fn substitute_indices(&self, bindings: &[(usize, MPoly)]) -> MPoly {
        let mut bound: Vec<Option<&MPoly>> = vec![None; self.nvars()];
        for (i, v) in bindings {
            bound[*i] = Some(v);
        }
        let mut powers: Vec<Vec<MPoly>> = (0..self.nvars()).map(|_| Vec::new()).collect();
        let mut out = MPoly::zero(&self.registry);
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let mut factor = MPoly::one(&self.registry);
            for v in 0..self.nvars() {
                if let Some(value) = bound[v] {
                    let e = m.0[v] as usize;
                    rest.0[v] = 0;
                    if e == 0 {
                        continue;
                    }
                    let cache = &mut powers[v];
                    if cache.is_empty() {
                        cache.push(MPoly::one(&self.registry));
                    }
                    while cache.len() <= e {
                        let next = &cache[cache.len() - 1] * value;
                        cache.push(next);
                    }
                    factor = &factor * &cache[e];
                }
            }
            let term = MPoly::monomial(&self.registry, rest, c.clone());
            out = &out + &(&factor * &term);
        }
        out
    }

    /// Replaces the listed variables by integers.
    pub fn specialize(&self, values: &[(usize, BigInt)]) -> MPoly {
        let mut out = MPoly::zero(&self.registry);
        let mut pow_cache: BTreeMap<(usize, u32), BigInt> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = m.clone();
            for (v, value) in values {
                let e = m.0[*v];
                rest.0[*v] = 0;
                if e > 0 {
                    let p = pow_cache.entry((*v, e)).or_insert_with(|| num_traits::pow(value.clone(), e as usize));
                    coeff *= &*p;
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    /// Value at a full assignment (one integer per registered variable).
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars());
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[v].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Groups terms by their exponents in `vars`. Each coefficient has zero
    /// exponents in `vars`.
    pub fn coefficients_in(&self, vars: &[usize]) -> BTreeMap<Monomial, MPoly> {
        let mut out: BTreeMap<Monomial, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut key = Monomial::one(self.nvars());
            let mut rest = m.clone();
            for &v in vars {
                key.0[v] = m.0[v];
                rest.0[v] = 0;
            }
            out.entry(key).or_insert_with(|| MPoly::zero(&self.registry)).add_term(rest, c.clone());
        }
        out
    }

    /// Coefficients of `self` as a polynomial in `var`, index = power.
    pub fn as_univariate(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(&self.registry); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut rest = m.clone();
            rest.0[var] = 0;
            out[e].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_univariate(registry: &Registry, var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero(registry);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut m = m.clone();
                m.0[var] += e as u32;
                out.add_term(m, a.clone());
            }
        }
        out
    }

    /// Dense univariate view; `None` if some other variable occurs.
    pub fn to_upoly(&self, var: usize) -> Option<UPoly> {
        let mut coeffs = vec![BigInt::zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(v, &e)| v != var && e > 0) {
                return None;
            }
            coeffs[m.0[var] as usize] = c.clone();
        }
        Some(UPoly::new(coeffs))
    }

    pub fn from_upoly(registry: &Registry, var: usize, u: &UPoly) -> MPoly {
        let mut out = MPoly::zero(registry);
        for (e, c) in u.coeffs().iter().enumerate() {
            let mut m = Monomial::one(registry.len());
            m.0[var] = e as u32;
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn reduce_mod(&self, m: &BigInt) -> Result<ResiduePoly> {
        ResiduePoly::from_mpoly(self, m)
    }

    /// Exact quotient `self / divisor` in the integer polynomial ring, if it exists.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        if self.registry != divisor.registry || divisor.is_zero() {
            return None;
        }
        let (lm, lc) = divisor.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(&self.registry);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let (q, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            let qm = m.div(&lm);
            for (dm, dc) in &divisor.terms {
                rem.add_term(dm.mul(&qm), -(dc * &q));
            }
            quot.add_term(qm, q);
        }
        Some(quot)
    }

    pub fn divides(&self, other: &MPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Re-expresses the polynomial over `target`, matching variables by name.
    /// Fails if a variable that occurs is missing from `target`.
    pub fn with_registry(&self, target: &Registry) -> Result<MPoly> {
        let mut map = Vec::with_capacity(self.nvars());
        for (i, name) in self.registry.names().iter().enumerate() {
            let j = target.index_of(name);
            if j.is_none() && self.involves(i) {
                return Err(Error::RegistryMismatch);
            }
            map.push(j);
        }
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(target.len());
            for (i, &e) in m.0.iter().enumerate() {
                if let Some(j) = map[i] {
                    nm.0[j] = e;
                }
            }
            out.add_term(nm, c.clone());
        }
        Ok(out)
    }

    pub(crate) fn map_coefficients(&self, f: impl Fn(&BigInt) -> BigInt) -> MPoly {
        let mut out = MPoly::zero(&self.registry);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    /// Panics on a registry mismatch; use [`MPoly::try_add`] to get an error instead.
    fn add(self, rhs: &'a MPoly) -> MPoly {
        self.try_add(rhs).expect("registry mismatch")
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &'a MPoly) -> MPoly {
        self.try_sub(rhs).expect("registry mismatch")
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &'a MPoly) -> MPoly {
        self.try_mul(rhs).expect("registry mismatch")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.map_coefficients(|c| -c)
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

pub(crate) fn write_terms<'a, C: fmt::Display + Signed + One + 'a>(
    f: &mut fmt::Formatter<'_>,
    names: &[String],
    terms: impl Iterator<Item = (&'a Monomial, &'a C)>,
) -> fmt::Result {
    let mut first = true;
    for (m, c) in terms {
        let negative = c.is_negative();
        let mag = c.abs();
        if first {
            if negative {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if negative { " - " } else { " + " })?;
        }
        first = false;
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || m.degree() == 0 {
            factors.push(alloc::format!("{mag}"));
        }
        for (v, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[v].clone()),
                _ => factors.push(alloc::format!("{}^{}", names[v], e)),
            }
        }
        f.write_str(&factors.join("*"))?;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for MPoly {
    /// Terms in descending graded-lexicographic order, e.g. `T^2*Y - T*Y + T^2 - T - 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.registry.names(), self.terms.iter().rev())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}
