use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::fp::FpPoly;
use crate::arith::{divisor_count, divisors, primes_up_to};
use crate::enumerate::from_rank;
use crate::polyring::{MPoly, Monomial, UPoly};
use crate::{Error, Result};

/// Limits for the exhaustive oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerBudget {
    pub max_total_degree: u64,
    pub max_vars: usize,
    /// Search nodes allowed per univariate factor search.
    pub max_nodes: u64,
    /// Restrict candidate factor degrees using factorization patterns modulo
    /// small primes. Off keeps the oracle independent of mod-p reasoning.
    pub degree_sieve: bool,
}

impl Default for KroneckerBudget {
    fn default() -> Self {
        KroneckerBudget { max_total_degree: 12, max_vars: 3, max_nodes: 50_000_000, degree_sieve: false }
    }
}

/// Complete factorization `unit * content * prod f_i^e_i` over the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: i8,
    pub content: BigInt,
    /// Irreducible primitive factors with positive leading coefficient, in
    /// ascending order of total degree and then term order.
    pub factors: Vec<(MPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self, template: &MPoly) -> MPoly {
        let mut acc = MPoly::constant(template.registry(), &self.content * BigInt::from(self.unit));
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e);
        }
        acc
    }

    pub fn is_irreducible_over_q(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

struct Search<'a> {
    f: &'a UPoly,
    lc: BigInt,
    nodes: u64,
    max_nodes: u64,
}

/// Newton interpolation state along one branch of the search.
struct Newton {
    points: Vec<BigInt>,
    /// Divided-difference table rows, last entry of each row is the newest.
    diffs: Vec<Vec<BigInt>>,
}

impl Newton {
    /// Extends with `g(point) = value`; fails when a divided difference is
    /// not an integer.
    fn push(&mut self, point: &BigInt, value: BigInt) -> bool {
        let j = self.points.len();
        let mut row = vec![value];
        for i in 0..j {
            let num = &row[i] - &self.diffs[i].last().unwrap().clone();
            let den = point - &self.points[j - 1 - i];
            let (q, r) = num.div_rem(&den);
            if !r.is_zero() {
                return false;
            }
            row.push(q);
        }
        for (i, v) in row.into_iter().enumerate() {
            if i < self.diffs.len() {
                self.diffs[i].push(v);
            } else {
                self.diffs.push(vec![v]);
            }
        }
        self.points.push(point.clone());
        true
    }

    fn pop(&mut self) {
        self.points.pop();
        let n = self.points.len();
        self.diffs.truncate(n + 1);
        if self.diffs.len() == n + 1 {
            self.diffs.pop();
        }
        for row in &mut self.diffs {
            row.pop();
        }
    }

    /// Leading divided difference after all points are in.
    fn top(&self) -> &BigInt {
        &self.diffs[self.points.len() - 1][0]
    }

    fn polynomial(&self) -> UPoly {
        let k = self.points.len();
        let mut acc = UPoly::zero();
        for i in (0..k).rev() {
            let c = &self.diffs[i][0];
            acc = acc.mul(&UPoly::new(vec![-self.points[i].clone(), BigInt::one()])).add(&UPoly::constant(c.clone()));
        }
        acc
    }
}

impl Search<'_> {
    fn dfs(
        &mut self,
        newton: &mut Newton,
        points: &[BigInt],
        choices: &[Vec<BigInt>],
        checks: &[(BigInt, BigInt)],
    ) -> Result<Option<UPoly>> {
        let j = newton.points.len();
        if j == points.len() {
            let top = newton.top();
            if top.is_zero() || !(&self.lc % top).is_zero() {
                return Ok(None);
            }
            let g = newton.polynomial();
            for (b, fb) in checks {
                let gb = g.eval(b);
                if gb.is_zero() || !(fb % &gb).is_zero() {
                    return Ok(None);
                }
            }
            return Ok(self.f.div_exact(&g).map(|_| g));
        }
        for v in &choices[j] {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(Error::budget(format!("Kronecker search exceeded {} nodes", self.max_nodes)));
            }
            if newton.push(&points[j], v.clone()) {
                let found = self.dfs(newton, points, choices, checks)?;
                newton.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
        }
        Ok(None)
    }
}

/// Degrees `d` in `1..=n/2` not excluded by factorization patterns modulo
/// small primes.
fn sieve_degrees(f: &UPoly) -> Vec<usize> {
    let n = f.degree();
    let mut allowed: Vec<bool> = vec![true; n + 1];
    let mut used = 0;
    for p in primes_up_to(200) {
        if used == 6 {
            break;
        }
        let pb = BigInt::from(p);
        if (f.leading_coefficient() % &pb).is_zero() {
            continue;
        }
        let fp = FpPoly::from_upoly(f, p);
        if !fp.is_squarefree() {
            continue;
        }
        used += 1;
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in fp.factor_degrees() {
            for s in (d..=n).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        for (a, s) in allowed.iter_mut().zip(&sums) {
            *a &= *s;
        }
    }
    (1..=n / 2).filter(|&d| allowed[d]).collect()
}

/// A nontrivial factor of least degree of a primitive `f` with
/// `deg f >= 2`, or `None` if `f` is irreducible.
fn least_factor(f: &UPoly, budget: &KroneckerBudget) -> Result<Option<UPoly>> {
    let n = f.degree();
    if f.coeff(0).is_zero() {
        return Ok(Some(UPoly::x()));
    }
    let pool_size = 4 * n + 12;
    let mut pool: Vec<(u64, BigInt, BigInt)> = Vec::with_capacity(pool_size);
    for rank in 0..pool_size as u64 {
        let a = BigInt::from(from_rank(rank));
        let fa = f.eval(&a);
        if fa.is_zero() {
            return Ok(Some(UPoly::new(vec![-a, BigInt::one()])));
        }
        pool.push((divisor_count(fa.magnitude()), a, fa));
    }
    pool.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.abs().cmp(&y.1.abs())));
    let degrees: Vec<usize> = if budget.degree_sieve && f.content().is_one() {
        sieve_degrees(f)
    } else {
        (1..=n / 2).collect()
    };
    let mut search = Search { f, lc: f.leading_coefficient(), nodes: 0, max_nodes: budget.max_nodes };
    for k in degrees {
        let chosen = &pool[..=k];
        let points: Vec<BigInt> = chosen.iter().map(|c| c.1.clone()).collect();
        let choices: Vec<Vec<BigInt>> = chosen
            .iter()
            .enumerate()
            .map(|(i, (_, _, fa))| {
                let ds: Vec<BigUint> = divisors(fa.magnitude());
                let mut out = Vec::with_capacity(2 * ds.len());
                for d in ds {
                    let d = BigInt::from(d);
                    if i > 0 {
                        out.push(-d.clone());
                    }
                    out.push(d);
                }
                out
            })
            .collect();
        let checks: Vec<(BigInt, BigInt)> = pool[k + 1..].iter().map(|c| (c.1.clone(), c.2.clone())).collect();
        let mut newton = Newton { points: Vec::new(), diffs: Vec::new() };
        if let Some(g) = search.dfs(&mut newton, &points, &choices, &checks)? {
            return Ok(Some(g.primitive_part()));
        }
    }
    Ok(None)
}

/// Sign, content and irreducible factors with multiplicities.
pub type UnivariateFactorization = (i8, BigInt, Vec<(UPoly, u32)>);

/// Full factorization of a univariate integer polynomial.
pub fn factor_univariate(f: &UPoly, budget: &KroneckerBudget) -> Result<UnivariateFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let unit: i8 = if f.leading_coefficient().is_negative() { -1 } else { 1 };
    let content = f.content();
    let mut rest = f.primitive_part();
    let mut found: Vec<UPoly> = Vec::new();
    while rest.degree() >= 1 {
        let g = if rest.degree() == 1 { None } else { least_factor(&rest, budget)? };
        match g {
            Some(g) => {
                rest = rest.div_exact(&g).expect("factor divides");
                found.push(g);
            }
            None => {
                found.push(rest.clone());
                break;
            }
        }
    }
    Ok((unit, content, collect_powers(found)))
}

fn collect_powers<T: PartialEq>(items: Vec<T>) -> Vec<(T, u32)> {
    let mut out: Vec<(T, u32)> = Vec::new();
    for it in items {
        match out.iter_mut().find(|(x, _)| *x == it) {
            Some((_, e)) => *e += 1,
            None => out.push((it, 1)),
        }
    }
    out
}

/// Kronecker substitution data: `x_{order[i]} -> X^{weights[i]}`.
struct Substitution {
    order: Vec<usize>,
    weights: Vec<u64>,
    bounds: Vec<u32>,
}

impl Substitution {
    fn for_poly(p: &MPoly, order: Vec<usize>) -> Self {
        let bounds: Vec<u32> = order.iter().map(|&v| p.degree_in(v)).collect();
        let mut weights = Vec::with_capacity(order.len());
        let mut w = 1u64;
        for b in &bounds {
            weights.push(w);
            w *= *b as u64 + 1;
        }
        Substitution { order, weights, bounds }
    }

    fn image_degree(&self, p: &MPoly) -> u64 {
        p.terms()
            .map(|(m, _)| self.order.iter().zip(&self.weights).map(|(&v, w)| m.0[v] as u64 * w).sum::<u64>())
            .max()
            .unwrap_or(0)
    }

    fn image(&self, p: &MPoly) -> UPoly {
        let mut coeffs = vec![BigInt::zero(); self.image_degree(p) as usize + 1];
        for (m, c) in p.terms() {
            let e: u64 = self.order.iter().zip(&self.weights).map(|(&v, w)| m.0[v] as u64 * w).sum();
            coeffs[e as usize] += c;
        }
        UPoly::new(coeffs)
    }

    fn invert(&self, g: &UPoly, template: &MPoly) -> MPoly {
        let nv = template.nvars();
        let terms = g.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(e, c)| {
            let mut rem = e as u64;
            let mut m = Monomial::one(nv);
            for i in (0..self.order.len()).rev() {
                let q = rem / self.weights[i];
                rem %= self.weights[i];
                m.0[self.order[i]] = q.min(u32::MAX as u64) as u32;
            }
            (m, c.clone())
        });
        MPoly::from_terms(template.registry(), terms)
    }

    fn fits(&self, g: &UPoly) -> bool {
        g.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).all(|(e, _)| {
            let mut rem = e as u64;
            for i in (0..self.order.len()).rev() {
                if rem / self.weights[i] > self.bounds[i] as u64 {
                    return false;
                }
                rem %= self.weights[i];
            }
            true
        })
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn positive(p: MPoly) -> MPoly {
    if p.leading_coefficient().is_negative() {
        -p
    } else {
        p
    }
}

/// Complete factorization over the integers by Kronecker's method.
pub fn kronecker_factor(p: &MPoly, budget: &KroneckerBudget) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let vars = p.support_vars();
    let unit: i8 = if p.leading_coefficient().is_negative() { -1 } else { 1 };
    let content = p.content();
    if vars.is_empty() {
        return Ok(Factorization { unit, content, factors: Vec::new() });
    }
    if p.total_degree() > budget.max_total_degree || vars.len() > budget.max_vars {
        return Err(Error::budget(format!(
            "oracle limited to total degree {} in at most {} variables",
            budget.max_total_degree, budget.max_vars
        )));
    }
    let prim = positive(p.primitive_part());
    let factors = if vars.len() == 1 {
        let f = prim.to_upoly(vars[0]).expect("single variable");
        let (_, _, fs) = factor_univariate(&f, budget)?;
        fs.into_iter().map(|(g, e)| (positive(MPoly::from_upoly(p.registry(), vars[0], &g)), e)).collect()
    } else {
        let sub = permutations(&vars)
            .into_iter()
            .map(|o| Substitution::for_poly(&prim, o))
            .min_by_key(|s| s.image_degree(&prim))
            .unwrap();
        let (_, _, image_factors) = factor_univariate(&sub.image(&prim), budget)?;
        let mut pieces: Vec<UPoly> = Vec::new();
        for (g, e) in image_factors {
            pieces.extend(core::iter::repeat_n(g, e as usize));
        }
        let mut rest = prim.clone();
        let mut found: Vec<MPoly> = Vec::new();
        let mut size = 1;
        'outer: while !rest.is_constant() {
            while 2 * size <= pieces.len() {
                let mut idx: Vec<usize> = (0..size).collect();
                loop {
                    let g = idx.iter().fold(UPoly::constant(BigInt::one()), |acc, &i| acc.mul(&pieces[i]));
                    if sub.fits(&g) {
                        let cand = positive(sub.invert(&g, &prim).primitive_part());
                        if !cand.is_constant() {
                            if let Some(q) = rest.div_exact(&cand) {
                                rest = q;
                                found.push(cand);
                                for &i in idx.iter().rev() {
                                    pieces.remove(i);
                                }
                                continue 'outer;
                            }
                        }
                    }
                    if !next_combination(&mut idx, pieces.len()) {
                        break;
                    }
                }
                size += 1;
            }
            found.push(positive(rest.clone()));
            break;
        }
        collect_powers(found)
    };
    let mut factors: Vec<(MPoly, u32)> = factors;
    factors.sort_by(|a, b| a.0.total_degree().cmp(&b.0.total_degree()).then_with(|| a.0.terms().cmp(b.0.terms())));
    Ok(Factorization { unit, content, factors })
}
