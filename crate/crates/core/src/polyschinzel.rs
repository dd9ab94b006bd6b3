//! Substituting polynomials `M_i(Y)` for the parameters so that every
//! `P_j(M(Y), Y)` is irreducible in `Z[Y]`.
//!
//! The solver checks the degree conditions, builds the generic substitution
//! `T_i ↦ Σ_l λ_{i,l} Q_{i,l}(Y)` over all monic monomials `Q_{i,l}` with
//! `deg_{Y_j} ≤ d_{ij}`, confirms that the resulting family has no fixed
//! prime divisor in the `λ`, and then searches integer coefficient tuples.
//! The strong pipeline produces `M = θ + ω·R(v, Y)` whose compositions also
//! have no fixed divisor in `Y`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{prime_divisors, primes_up_to};
use crate::enumerate::{Spiral, SpiralCursor};
use crate::factorlab::{is_irreducible_q, is_irreducible_z, IrredCertificate};
use crate::fixdiv::{candidate_fixed_primes, fixed_prime_divisors, is_fixed_prime, FixedDivisorReport, PrimeEvidence};
use crate::hilbert::product;
use crate::polyring::{MPoly, Monomial, Registry, VarSplit};
use crate::schinzelcore::nonvanishing_point;
use crate::{Error, Result};

/// `∏ (d_j + 1)`, the number of monic monomials with `deg_{Y_j} ≤ d_j`.
pub fn ell(d: &[u32]) -> u64 {
    d.iter().map(|&x| x as u64 + 1).product()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DegreeMode {
    General,
    #[default]
    NearUfd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeConditions {
    pub star: bool,
    pub a: bool,
    pub b: bool,
    /// Only defined for a single parameter.
    pub c: Option<bool>,
    /// `ℓ(d_i)` per parameter.
    pub ells: Vec<u64>,
    /// `Σ_j deg_{T_i}(P_j)` per parameter.
    pub param_degrees: Vec<u64>,
    pub mode: DegreeMode,
}

impl DegreeConditions {
    pub fn some_case_holds(&self) -> bool {
        self.a || self.b || self.c == Some(true)
    }
}

fn check_matrix(split: &VarSplit, d: &[Vec<u32>]) -> Result<()> {
    if d.len() != split.k() || d.iter().any(|row| row.len() != split.n()) {
        return Err(Error::InvalidArgument(format!(
            "degree matrix must be {} x {} (parameters x variables)",
            split.k(),
            split.n()
        )));
    }
    Ok(())
}

/// Verdicts for condition (*) and the cases (a), (b), (c).
pub fn check_degree_conditions(
    polys: &[MPoly],
    split: &VarSplit,
    d: &[Vec<u32>],
    mode: DegreeMode,
) -> Result<DegreeConditions> {
    if polys.is_empty() {
        return Err(Error::InvalidArgument("at least one polynomial is required".into()));
    }
    split.require_params()?;
    check_matrix(split, d)?;
    for p in polys {
        split.check_registry(p.registry())?;
    }
    let y_degrees: Vec<u64> = polys.iter().map(|p| p.degree_in_vars(split.vars()) as u64).collect();
    let star = y_degrees.iter().all(|&e| e >= 1) || d.iter().all(|row| row.iter().any(|&x| x > 0));
    let ells: Vec<u64> = d.iter().map(|row| ell(row)).collect();
    let param_degrees: Vec<u64> =
        split.params().iter().map(|&t| polys.iter().map(|p| p.degree_in(t) as u64).sum()).collect();
    let a = ells.iter().zip(&param_degrees).all(|(&l, &s)| l > s);
    let b = ells.iter().zip(&param_degrees).all(|(&l, &s)| l >= 64 || (1u64 << l) > s);
    let c = (split.k() == 1).then(|| {
        let total: u64 = d[0].iter().map(|&x| x as u64).sum();
        let bound = match mode {
            DegreeMode::General => y_degrees.iter().sum(),
            DegreeMode::NearUfd => y_degrees.iter().copied().max().unwrap_or(0),
        };
        total > bound
    });
    Ok(DegreeConditions { star, a, b, c, ells, param_degrees, mode })
}

/// Maximum number of `λ` indeterminates in a generic substitution.
pub const MAX_LAMBDA: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericSubstitution {
    /// Input registry (parameters and variables).
    pub source: Registry,
    /// `λ` names followed by the variable names.
    pub registry: Registry,
    /// Registry indices (in `registry`) of `λ_{i,0..ℓ_i}`.
    pub lambda: Vec<Vec<usize>>,
    /// `Q_{i,l}` as exponent vectors over the variables, ascending, `Q_{i,0} = 1`.
    pub monomials: Vec<Vec<Monomial>>,
    /// `M_{Q_i}(λ_i, Y)` over `registry`.
    pub generic: Vec<MPoly>,
    /// `F_j = P_j(M_{Q_1}, ..., M_{Q_k}, Y)` over `registry`.
    pub family: Vec<MPoly>,
    /// `λ` as parameters, `Y` as variables, over `registry`.
    pub split: VarSplit,
}

fn monomial_box(bounds: &[u32]) -> Vec<Monomial> {
    let mut out = vec![Monomial(vec![0; bounds.len()])];
    for (j, &b) in bounds.iter().enumerate() {
        let mut next = Vec::new();
        for m in &out {
            for e in 0..=b {
                let mut m = m.clone();
                m.0[j] = e;
                next.push(m);
            }
        }
        out = next;
    }
    out.sort();
    out
}

fn lambda_names(source: &Registry, ells: &[usize]) -> Vec<Vec<String>> {
    let mut prefix = String::from("L");
    loop {
        let names: Vec<Vec<String>> = ells
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                (0..l)
                    .map(|j| if ells.len() == 1 { format!("{prefix}{j}") } else { format!("{prefix}{}x{j}", i + 1) })
                    .collect()
            })
            .collect();
        if names.iter().flatten().all(|n| source.index_of(n).is_none()) {
            return names;
        }
        prefix.push('L');
    }
}

impl GenericSubstitution {
    /// Builds the generic substitution, rejecting inputs that violate (*).
    pub fn new(polys: &[MPoly], split: &VarSplit, d: &[Vec<u32>]) -> Result<Self> {
        let conds = check_degree_conditions(polys, split, d, DegreeMode::NearUfd)?;
        if !conds.star {
            return Err(Error::hypothesis("(*)", "some P_l has degree 0 in Y and some d_i is zero"));
        }
        Self::build(polys, split, d)
    }

    /// Builds the substitution without checking (*); used for diagnostics.
    pub fn build(polys: &[MPoly], split: &VarSplit, d: &[Vec<u32>]) -> Result<Self> {
        check_matrix(split, d)?;
        let source = split.registry().clone();
        let monomials: Vec<Vec<Monomial>> = d.iter().map(|row| monomial_box(row)).collect();
        let ells: Vec<usize> = monomials.iter().map(|m| m.len()).collect();
        let total: usize = ells.iter().sum();
        if total > MAX_LAMBDA {
            return Err(Error::budget(format!("{total} coefficient indeterminates exceed {MAX_LAMBDA}")));
        }
        let names = lambda_names(&source, &ells);
        let flat: Vec<&String> = names.iter().flatten().collect();
        let extended = source.extended(&flat)?;
        let mut reg_names: Vec<&str> = flat.iter().map(|s| s.as_str()).collect();
        let var_names = split.var_names();
        reg_names.extend(var_names.iter().copied());
        let registry = Registry::new(&reg_names)?;

        let generic_in = |reg: &Registry| -> Vec<MPoly> {
            names
                .iter()
                .zip(&monomials)
                .map(|(lams, monos)| {
                    let mut acc = MPoly::zero(reg);
                    for (lam, q) in lams.iter().zip(monos) {
                        let mut m = Monomial::one(reg.len());
                        m.0[reg.index_of(lam).unwrap()] = 1;
                        for (j, &e) in q.0.iter().enumerate() {
                            m.0[reg.index_of(var_names[j]).unwrap()] = e;
                        }
                        acc = &acc + &MPoly::monomial(reg, m, BigInt::one());
                    }
                    acc
                })
                .collect()
        };
        let generic_ext = generic_in(&extended);
        let bindings: Vec<(usize, MPoly)> = split.params().iter().copied().zip(generic_ext).collect();
        let family = polys
            .iter()
            .map(|p| p.with_registry(&extended)?.substitute_indices(&bindings).with_registry(&registry))
            .collect::<Result<Vec<_>>>()?;
        let lambda: Vec<Vec<usize>> =
            names.iter().map(|ls| ls.iter().map(|n| registry.index_of(n).unwrap()).collect()).collect();
        let split = VarSplit::new(&registry, &flat, &var_names)?;
        let generic = generic_in(&registry);
        Ok(GenericSubstitution { source, registry, lambda, generic, monomials, family, split })
    }

    pub fn lambda_count(&self) -> usize {
        self.lambda.iter().map(|l| l.len()).sum()
    }

    fn assignment(&self, theta: &[BigInt]) -> Vec<(usize, BigInt)> {
        self.lambda.iter().flatten().copied().zip(theta.iter().cloned()).collect()
    }

    /// Concrete `M_i(Y)` over the source registry for a coefficient tuple.
    pub fn substitutions(&self, theta: &[BigInt]) -> Result<Vec<MPoly>> {
        let values = self.assignment(theta);
        self.generic.iter().map(|g| g.specialize(&values).with_registry(&self.source)).collect()
    }

    /// Concrete compositions `P_j(M(Y), Y)` over the source registry.
    pub fn compositions(&self, theta: &[BigInt]) -> Result<Vec<MPoly>> {
        let values = self.assignment(theta);
        self.family.iter().map(|f| f.specialize(&values).with_registry(&self.source)).collect()
    }

    /// Certifies each `F_j` irreducible over the rationals with positive
    /// degree in the variables.
    pub fn verify_irreducible(&self) -> Result<Vec<IrredCertificate>> {
        self.family
            .iter()
            .map(|f| {
                if f.degree_in_vars(self.split.vars()) == 0 {
                    return Err(Error::hypothesis("(*)", format!("{f} has degree 0 in the variables")));
                }
                is_irreducible_q(f)
            })
            .collect()
    }
}

/// Selections `λ` that pick a single monomial per parameter, capped.
fn monomial_selections(gs: &GenericSubstitution, cap: usize) -> Vec<Vec<BigInt>> {
    let total = gs.lambda_count();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gs.lambda.len()];
    'outer: loop {
        if out.len() == cap {
            break;
        }
        let mut v = vec![BigInt::zero(); total];
        let mut offset = 0;
        for (i, ls) in gs.lambda.iter().enumerate() {
            v[offset + choice[i]] = BigInt::one();
            offset += ls.len();
        }
        out.push(v);
        let mut i = choice.len();
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < gs.lambda[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
    // The all-top-monomial selection first.
    out.reverse();
    out
}

/// Fixed prime divisors of `∏ F_j` with respect to `λ`, refuting candidates
/// by monomial selections before falling back to exhaustion.
pub fn verify_no_fixed_divisor_generic(gs: &GenericSubstitution) -> Result<FixedDivisorReport> {
    let pi = product(&gs.family);
    if pi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let candidates = candidate_fixed_primes(&pi, &gs.split)?;
    let selections = monomial_selections(gs, 4096);
    let mut confirmed = Vec::new();
    let mut evidence = Vec::new();
    for q in &candidates {
        let shortcut = if (pi.content() % q).is_zero() {
            None
        } else {
            selections.iter().find(|sel| {
                let values = gs.assignment(sel);
                !pi.specialize(&values).reduce_mod(q).map(|r| r.is_zero()).unwrap_or(true)
            })
        };
        let e = match shortcut {
            Some(sel) => PrimeEvidence::Witness(sel.clone()),
            None => is_fixed_prime(&pi, &gs.split, q)?,
        };
        if e == PrimeEvidence::Fixed {
            confirmed.push(q.clone());
        }
        evidence.push((q.clone(), e));
    }
    Ok(FixedDivisorReport {
        candidates,
        confirmed,
        evidence,
        delta: pi.degree_profile(&gs.split)?.delta,
        content: pi.content(),
    })
}

/// Why the solver refused an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchinzelDiagnosis {
    /// Irreducibility over the rationals of each input polynomial.
    pub irreducible: Vec<bool>,
    pub content: BigInt,
    pub conditions: DegreeConditions,
    /// Fixed primes of the generic family, when it could be built.
    pub generic_fixed: Option<FixedDivisorReport>,
    pub failures: Vec<String>,
}

impl fmt::Display for SchinzelDiagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.failures.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionPlan {
    /// Coefficient tuple (`Θ` for the solver, `v` for the strong pipeline).
    pub theta: Vec<BigInt>,
    pub substitutions: Vec<MPoly>,
    pub compositions: Vec<MPoly>,
    pub certificates: Vec<IrredCertificate>,
    /// Fixed primes of the composed product with respect to the variables.
    pub fixed_divisors: Option<FixedDivisorReport>,
    /// Coefficient tuples examined to find this plan, counted from the start.
    pub examined: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Coefficient tuples examined before giving up.
    pub budget: u64,
    /// Require `deg_{Y_j}(M_i) = d_{ij}`.
    pub exact_degree: bool,
    pub mode: DegreeMode,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { budget: 10_000, exact_degree: true, mode: DegreeMode::NearUfd }
    }
}

fn diagnose(polys: &[MPoly], split: &VarSplit, d: &[Vec<u32>], mode: DegreeMode) -> Result<SchinzelDiagnosis> {
    let conditions = check_degree_conditions(polys, split, d, mode)?;
    let mut failures = Vec::new();
    let mut irreducible = Vec::with_capacity(polys.len());
    for (i, p) in polys.iter().enumerate() {
        let ok = !p.is_constant() && is_irreducible_q(p)?.is_irreducible();
        if !ok {
            failures.push(format!("P{} = {p} is not irreducible over the rationals", i + 1));
        }
        irreducible.push(ok);
    }
    let content = polys.iter().map(|p| p.content()).product::<BigInt>();
    if !content.is_one() {
        failures.push(format!("product content is {content}, not 1"));
    }
    if !conditions.star {
        failures.push("condition (*) fails: some P_l has degree 0 in Y and some d_i is zero".to_string());
    }
    if !conditions.some_case_holds() {
        let mut parts = Vec::new();
        for (i, (&l, &s)) in conditions.ells.iter().zip(&conditions.param_degrees).enumerate() {
            if l <= s {
                parts.push(format!("(a) ell(d_{}) = {l} <= {s}", i + 1));
            }
            if l < 64 && (1u64 << l) <= s {
                parts.push(format!("(b) 2^ell(d_{}) = {} <= {s}", i + 1, 1u64 << l));
            }
        }
        if conditions.c == Some(false) {
            parts.push("(c) total degree of d too small".to_string());
        }
        failures.push(format!("none of the degree conditions (a), (b), (c) holds: {}", parts.join(", ")));
    }
    let generic_fixed = if irreducible.iter().all(|&b| b) || polys.iter().all(|p| !p.is_zero()) {
        match GenericSubstitution::build(polys, split, d) {
            Ok(gs) => Some(verify_no_fixed_divisor_generic(&gs)?),
            Err(e) if e.is_budget() => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    if let Some(r) = &generic_fixed {
        if let Some(q) = r.confirmed.first() {
            failures.push(format!("generic substitution has fixed prime {q}"));
        }
    }
    Ok(SchinzelDiagnosis { irreducible, content, conditions, generic_fixed, failures })
}

/// Lazy enumeration of substitution plans in spiral order.
pub struct PlanSearch {
    gs: GenericSubstitution,
    d: Vec<Vec<u32>>,
    options: SolveOptions,
    spiral: Spiral,
    examined: u64,
}

impl PlanSearch {
    pub fn cursor(&self) -> &SpiralCursor {
        self.spiral.cursor()
    }

    pub fn generic(&self) -> &GenericSubstitution {
        &self.gs
    }

    fn exact(&self, subs: &[MPoly]) -> bool {
        let split_vars: Vec<usize> =
            self.gs.split.var_names().iter().map(|n| self.gs.source.index_of(n).unwrap()).collect();
        subs.iter().zip(&self.d).all(|(m, row)| split_vars.iter().zip(row).all(|(&y, &dj)| m.degree_in(y) == dj))
    }
}

impl Iterator for PlanSearch {
    type Item = Result<SubstitutionPlan>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.examined >= self.options.budget {
                return None;
            }
            let theta: Vec<BigInt> = self.spiral.next()?.into_iter().map(BigInt::from).collect();
            self.examined += 1;
            let step = (|| -> Result<Option<SubstitutionPlan>> {
                let subs = self.gs.substitutions(&theta)?;
                if self.options.exact_degree && !self.exact(&subs) {
                    return Ok(None);
                }
                let comps = self.gs.compositions(&theta)?;
                let mut certificates = Vec::with_capacity(comps.len());
                for c in &comps {
                    if c.is_constant() {
                        return Ok(None);
                    }
                    let (ok, cert) = is_irreducible_z(c)?;
                    if !ok {
                        return Ok(None);
                    }
                    certificates.push(cert);
                }
                Ok(Some(SubstitutionPlan {
                    theta: theta.clone(),
                    substitutions: subs,
                    compositions: comps,
                    certificates,
                    fixed_divisors: None,
                    examined: self.examined,
                }))
            })();
            match step {
                Err(e) => return Some(Err(e)),
                Ok(Some(plan)) => return Some(Ok(plan)),
                Ok(None) => {}
            }
        }
    }
}

/// Checks every precondition and returns the plan search, or a refusal
/// carrying the full diagnosis.
pub fn schinzel_plans(polys: &[MPoly], split: &VarSplit, d: &[Vec<u32>], options: &SolveOptions) -> Result<PlanSearch> {
    split.require_vars()?;
    let diagnosis = diagnose(polys, split, d, options.mode)?;
    if !diagnosis.failures.is_empty() {
        return Err(Error::Refused(Box::new(diagnosis)));
    }
    let gs = GenericSubstitution::new(polys, split, d)?;
    Ok(PlanSearch {
        spiral: Spiral::new(gs.lambda_count()),
        gs,
        d: d.to_vec(),
        options: options.clone(),
        examined: 0,
    })
}

/// First substitution plan in spiral order.
pub fn solve_polynomial_schinzel(
    polys: &[MPoly],
    split: &VarSplit,
    d: &[Vec<u32>],
    options: &SolveOptions,
) -> Result<SubstitutionPlan> {
    let mut search = schinzel_plans(polys, split, d, options)?;
    search
        .next()
        .unwrap_or_else(|| Err(Error::budget(format!("no plan among the first {} coefficient tuples", options.budget))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongPlan {
    pub r: u32,
    pub leading_coefficient: BigInt,
    pub delta: u64,
    pub bad_primes: Vec<BigInt>,
    pub theta: BigInt,
    pub omega: BigInt,
    pub plan: SubstitutionPlan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongOptions {
    pub budget: u64,
    /// Search monic `M = Y^d + Σ v_l Q_l` directly instead of `θ + ω·R`.
    pub monic: bool,
}

impl Default for StrongOptions {
    fn default() -> Self {
        StrongOptions { budget: 10_000, monic: false }
    }
}

fn univariate_param(polys: &[MPoly], split: &VarSplit) -> Result<usize> {
    if split.k() != 1 {
        return Err(Error::InvalidSplit("exactly one parameter is required".into()));
    }
    split.require_vars()?;
    let t = split.params()[0];
    for p in polys {
        split.check_registry(p.registry())?;
        if p.support_vars().iter().any(|&v| v != t) {
            return Err(Error::InvalidArgument(format!("{p} must involve only {}", split.registry().name(t))));
        }
        if p.is_constant() {
            return Err(Error::ConstantPolynomial);
        }
    }
    if polys.is_empty() {
        return Err(Error::InvalidArgument("at least one polynomial is required".into()));
    }
    Ok(t)
}

fn fixed_in_vars(composed: &MPoly, split: &VarSplit) -> Result<FixedDivisorReport> {
    let vars: Vec<&str> = split.var_names();
    let ysplit = VarSplit::new(split.registry(), &vars, &[] as &[&str])?;
    fixed_prime_divisors(composed, &ysplit)
}

/// Substitution `M(Y)` with every `P_i(M(Y))` irreducible in `Z[Y]` and the
/// composed product free of fixed prime divisors in `Y`.
pub fn strong_pipeline(polys: &[MPoly], split: &VarSplit, d: &[u32], options: &StrongOptions) -> Result<StrongPlan> {
    let t = univariate_param(polys, split)?;
    if d.len() != split.n() {
        return Err(Error::InvalidArgument(format!("degree tuple must have {} entries", split.n())));
    }
    if d.iter().all(|&x| x == 0) {
        return Err(Error::InvalidArgument("degree tuple must be nonzero".into()));
    }
    for (i, p) in polys.iter().enumerate() {
        if !is_irreducible_q(p)?.is_irreducible() {
            return Err(Error::hypothesis("Irred/Q", format!("P{} = {p} is reducible", i + 1)));
        }
    }
    let pi = product(polys);
    let tsplit = VarSplit::from_indices(split.registry(), vec![t], Vec::new())?;
    let report = fixed_prime_divisors(&pi, &tsplit)?;
    if let Some(q) = report.confirmed.first() {
        return Err(Error::FixedPrime {
            prime: q.clone(),
            context: format!("{q} divides {pi} at every integer"),
        });
    }
    let r = pi.degree_in(t);
    let leading_coefficient = pi.to_upoly(t).unwrap().leading_coefficient();
    let delta = r as u64 * d.iter().map(|&x| x as u64).sum::<u64>();
    let mut bad_primes = prime_divisors(&leading_coefficient);
    bad_primes.extend(primes_up_to(delta).into_iter().map(BigInt::from));
    bad_primes.sort();
    bad_primes.dedup();
    let theta = nonvanishing_point(&pi, &tsplit, &bad_primes)?.remove(0);
    let omega: BigInt = bad_primes.iter().product();

    let reg = split.registry();
    let monos = monomial_box(d);
    let (top, lower) = monos.split_last().unwrap();
    let as_poly = |m: &Monomial| {
        let mut full = Monomial::one(reg.len());
        for (j, &y) in split.vars().iter().enumerate() {
            full.0[y] = m.0[j];
        }
        MPoly::monomial(reg, full, BigInt::one())
    };
    let top = as_poly(top);
    let lower: Vec<MPoly> = lower.iter().map(as_poly).collect();
    for (examined, v) in (1u64..=options.budget).zip(Spiral::new(lower.len())) {
        let mut rpoly = top.clone();
        for (c, q) in v.iter().zip(&lower) {
            rpoly = &rpoly + &q.scale(&BigInt::from(*c));
        }
        let m = if options.monic {
            rpoly
        } else {
            &rpoly.scale(&omega) + &MPoly::constant(reg, theta.clone())
        };
        let comps: Vec<MPoly> = polys.iter().map(|p| p.substitute_indices(&[(t, m.clone())])).collect();
        let mut certificates = Vec::with_capacity(comps.len());
        for c in &comps {
            let (ok, cert) = is_irreducible_z(c)?;
            if !ok {
                break;
            }
            certificates.push(cert);
        }
        if certificates.len() != comps.len() {
            continue;
        }
        let fixed = fixed_in_vars(&product(&comps), split)?;
        if !fixed.is_empty() {
            continue;
        }
        let plan = SubstitutionPlan {
            theta: v.into_iter().map(BigInt::from).collect(),
            substitutions: vec![m],
            compositions: comps,
            certificates,
            fixed_divisors: Some(fixed),
            examined,
        };
        return Ok(StrongPlan { r, leading_coefficient, delta, bad_primes, theta, omega, plan });
    }
    Err(Error::budget(format!("no substitution among the first {} coefficient tuples", options.budget)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionStage {
    pub stage: usize,
    pub pipeline: StrongPlan,
    /// Running composition `C_m(T)`.
    pub composition: MPoly,
    /// `P_i(C_m(T))`.
    pub family: Vec<MPoly>,
    pub fixed_divisors: FixedDivisorReport,
}

fn stage_error(stage: usize, e: Error) -> Error {
    match e {
        Error::BudgetExceeded(msg) => Error::BudgetExceeded(format!("stage {stage}: {msg}")),
        Error::FixedPrime { prime, context } => Error::FixedPrime { prime, context: format!("stage {stage}: {context}") },
        other => Error::hypothesis(format!("stage {stage}"), format!("{other}")),
    }
}

/// Applies the strong pipeline repeatedly with one variable, composing the
/// substitutions and re-verifying irreducibility and the absence of fixed
/// primes after each stage.
pub fn iterated_composition(
    polys: &[MPoly],
    split: &VarSplit,
    degrees: &[u32],
    options: &StrongOptions,
) -> Result<Vec<CompositionStage>> {
    let t = univariate_param(polys, split)?;
    if split.n() != 1 {
        return Err(Error::InvalidSplit("iterated composition uses exactly one variable".into()));
    }
    let y = split.vars()[0];
    let reg = split.registry();
    let tsplit = VarSplit::from_indices(reg, vec![t], Vec::new())?;
    let mut composition = MPoly::var(reg, t);
    let mut family = polys.to_vec();
    let mut out = Vec::new();
    for (idx, &dm) in degrees.iter().enumerate() {
        let stage = idx + 1;
        let pipeline = strong_pipeline(&family, split, &[dm], options).map_err(|e| stage_error(stage, e))?;
        let m_of_t = pipeline.plan.substitutions[0].substitute_indices(&[(y, MPoly::var(reg, t))]);
        composition = composition.substitute_indices(&[(t, m_of_t)]);
        family = polys.iter().map(|p| p.substitute_indices(&[(t, composition.clone())])).collect();
        for (i, f) in family.iter().enumerate() {
            let (ok, _) = is_irreducible_z(f).map_err(|e| stage_error(stage, e))?;
            if !ok {
                return Err(stage_error(stage, Error::hypothesis("Irred/Z", format!("P{}(C(T)) = {f} is reducible", i + 1))));
            }
        }
        let fixed = fixed_prime_divisors(&product(&family), &tsplit).map_err(|e| stage_error(stage, e))?;
        if let Some(q) = fixed.confirmed.first() {
            return Err(stage_error(stage, Error::FixedPrime { prime: q.clone(), context: "composed family".into() }));
        }
        out.push(CompositionStage { stage, pipeline, composition: composition.clone(), family: family.clone(), fixed_divisors: fixed });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRecord {
    pub m: MPoly,
    pub content: BigInt,
    /// Index in the monomial family of the polynomial congruent to `M` mod 2.
    pub residue_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleBundle {
    pub d: u32,
    /// `{0,1}`-coefficient polynomials of degree `≤ d`; bit `j` of the index
    /// is the coefficient of `Y^j`.
    pub family: Vec<MPoly>,
    pub p0: MPoly,
    pub shift: u64,
    pub p: MPoly,
    pub certificate: IrredCertificate,
    pub samples: Vec<SampleRecord>,
}

impl CounterexampleBundle {
    pub fn all_samples_even(&self) -> bool {
        self.samples.iter().all(|s| s.content.is_even())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleOptions {
    /// Largest shift `m` tried.
    pub max_shift: u64,
    pub samples: usize,
    pub seed: u64,
    /// Sampled coefficients lie in `[-coeff_bound, coeff_bound]`.
    pub coeff_bound: i64,
}

impl Default for CounterexampleOptions {
    fn default() -> Self {
        CounterexampleOptions { max_shift: 1000, samples: 1000, seed: 0, coeff_bound: 20 }
    }
}

/// Registry `T, Y` and the polynomial `∏ (T - p(Y)) + 2m` over all
/// `{0,1}`-coefficient `p` of degree `≤ d`, with the least `m ≥ 1` making it
/// irreducible, sampled against random `M` of degree `d`.
pub fn sharpness_counterexample(d: u32, options: &CounterexampleOptions) -> Result<CounterexampleBundle> {
    if d > 3 {
        return Err(Error::budget(format!("d = {d} gives degree 2^{} in T", d + 1)));
    }
    let reg = Registry::new(&["T", "Y"])?;
    let t = MPoly::var(&reg, 0);
    let y = MPoly::var(&reg, 1);
    let family: Vec<MPoly> = (0..1u32 << (d + 1))
        .map(|bits| {
            let mut acc = MPoly::zero(&reg);
            for j in 0..=d {
                if bits >> j & 1 == 1 {
                    acc = &acc + &y.pow(j);
                }
            }
            acc
        })
        .collect();
    let p0 = family.iter().fold(MPoly::one(&reg), |acc, q| &acc * &(&t - q));
    let mut found = None;
    for m in 1..=options.max_shift {
        let p = &p0 + &MPoly::constant(&reg, BigInt::from(2 * m));
        let cert = is_irreducible_q(&p)?;
        if cert.is_irreducible() && p.content().is_one() {
            found = Some((m, p, cert));
            break;
        }
    }
    let (shift, p, certificate) =
        found.ok_or_else(|| Error::budget(format!("no irreducible shift with m <= {}", options.max_shift)))?;

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let b = options.coeff_bound;
    let mut samples = Vec::with_capacity(options.samples);
    for _ in 0..options.samples {
        let mut coeffs: Vec<i64> = (0..=d).map(|_| rng.gen_range(-b..=b)).collect();
        while coeffs[d as usize] == 0 {
            coeffs[d as usize] = rng.gen_range(-b..=b);
        }
        let m = coeffs
            .iter()
            .enumerate()
            .fold(MPoly::zero(&reg), |acc, (j, &c)| &acc + &y.pow(j as u32).scale(&BigInt::from(c)));
        let composed = p.substitute_indices(&[(0, m.clone())]);
        let residue_index =
            coeffs.iter().enumerate().map(|(j, &c)| (c.rem_euclid(2) as usize) << j).sum::<usize>();
        samples.push(SampleRecord { m, content: composed.content(), residue_index });
    }
    Ok(CounterexampleBundle { d, family, p0, shift, p, certificate, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(polys: &[&str]) -> (Vec<MPoly>, VarSplit) {
        let r = Registry::new(&["T", "Y"]).unwrap();
        (polys.iter().map(|s| MPoly::parse(s, &r).unwrap()).collect(), VarSplit::new(&r, &["T"], &["Y"]).unwrap())
    }

    #[test]
    fn ell_values() {
        assert_eq!(ell(&[1, 2]), 6);
        assert_eq!(ell(&[0]), 1);
        assert_eq!(ell(&[3]), 4);
    }

    #[test]
    fn degree_conditions() {
        let (ps, s) = setup(&["Y^2-T"]);
        let c = check_degree_conditions(&ps, &s, &[vec![1]], DegreeMode::General).unwrap();
        assert_eq!((c.a, c.b, c.c, c.star), (true, true, Some(false), true));
        let (ps, s) = setup(&["T^2-T+2"]);
        let c = check_degree_conditions(&ps, &s, &[vec![0]], DegreeMode::NearUfd).unwrap();
        assert!(!c.b && !c.star);
        let (ps, s) = setup(&["T"]);
        assert!(!check_degree_conditions(&ps, &s, &[vec![0]], DegreeMode::NearUfd).unwrap().star);
        assert!(check_degree_conditions(&ps, &s, &[vec![0, 1]], DegreeMode::NearUfd).is_err());
    }

    #[test]
    fn generic_examples() {
        let (ps, s) = setup(&["Y^2-T"]);
        let gs = GenericSubstitution::new(&ps, &s, &[vec![1]]).unwrap();
        assert_eq!(gs.family[0], MPoly::parse("Y^2 - L1*Y - L0", &gs.registry).unwrap());
        assert!(verify_no_fixed_divisor_generic(&gs).unwrap().is_empty());
        assert!(gs.verify_irreducible().unwrap().iter().all(|c| c.is_irreducible()));
        let (ps, s) = setup(&["T"]);
        let gs = GenericSubstitution::new(&ps, &s, &[vec![1]]).unwrap();
        assert_eq!(gs.family[0], MPoly::parse("L0 + L1*Y", &gs.registry).unwrap());
        let (ps, s) = setup(&["T^2-T+2"]);
        let gs = GenericSubstitution::build(&ps, &s, &[vec![0]]).unwrap();
        assert_eq!(gs.family[0], MPoly::parse("L0^2-L0+2", &gs.registry).unwrap());
        assert_eq!(verify_no_fixed_divisor_generic(&gs).unwrap().confirmed, vec![BigInt::from(2)]);
    }

    #[test]
    fn lambda_names_avoid_collisions() {
        let r = Registry::new(&["L0", "T", "Y"]).unwrap();
        let s = VarSplit::new(&r, &["T"], &["Y"]).unwrap();
        let p = MPoly::parse("Y-T", &r).unwrap();
        let gs = GenericSubstitution::new(&[p], &s, &[vec![1]]).unwrap();
        assert_eq!(gs.registry.names(), &["LL0", "LL1", "Y"]);
        let r = Registry::new(&["T1", "T2", "Y1", "Y2"]).unwrap();
        let s = VarSplit::new(&r, &["T1", "T2"], &["Y1", "Y2"]).unwrap();
        let p = MPoly::parse("Y1*Y2-T1*T2", &r).unwrap();
        let gs = GenericSubstitution::new(&[p], &s, &[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(gs.lambda.iter().map(|l| l.len()).collect::<Vec<_>>(), vec![2, 4]);
        assert_eq!(gs.registry.name(2), "L2x0");
        assert_eq!(gs.monomials[1].last().unwrap().0, vec![1, 1]);
    }

    #[test]
    fn solver_examples() {
        let (ps, s) = setup(&["Y^2-T"]);
        let plan = solve_polynomial_schinzel(&ps, &s, &[vec![1]], &SolveOptions::default()).unwrap();
        assert_eq!(plan.substitutions[0].to_string(), "Y + 1");
        assert_eq!(plan.compositions[0].to_string(), "Y^2 - Y - 1");
        let (ps, s) = setup(&["T"]);
        let plan = solve_polynomial_schinzel(&ps, &s, &[vec![1]], &SolveOptions::default()).unwrap();
        assert_eq!(plan.substitutions[0].to_string(), "Y");
        let (ps, s) = setup(&["T^2-T+2"]);
        match solve_polynomial_schinzel(&ps, &s, &[vec![0]], &SolveOptions::default()) {
            Err(Error::Refused(diag)) => {
                assert!(!diag.conditions.b);
                assert_eq!(diag.generic_fixed.unwrap().confirmed, vec![BigInt::from(2)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn strong_examples() {
        let (ps, s) = setup(&["T^2+1"]);
        let sp = strong_pipeline(&ps, &s, &[1], &StrongOptions::default()).unwrap();
        assert_eq!((sp.bad_primes.clone(), sp.theta.clone(), sp.omega.clone()), (vec![BigInt::from(2)], BigInt::zero(), BigInt::from(2)));
        assert_eq!(sp.plan.compositions[0].to_string(), "4*Y^2 + 1");
        let (ps, s) = setup(&["T^2+1", "T^2+T+1"]);
        let sp = strong_pipeline(&ps, &s, &[1], &StrongOptions::default()).unwrap();
        assert_eq!(sp.delta, 4);
        assert_eq!(sp.omega, BigInt::from(6));
        assert_eq!(sp.plan.substitutions[0].to_string(), "6*Y");
        assert!(sp.plan.fixed_divisors.as_ref().unwrap().is_empty());
        let (ps, s) = setup(&["T^2-T+2"]);
        let err = strong_pipeline(&ps, &s, &[1], &StrongOptions::default()).unwrap_err();
        assert!(matches!(err, Error::FixedPrime { ref prime, .. } if *prime == BigInt::from(2)));
        let (ps, s) = setup(&["T^2+1"]);
        let sp = strong_pipeline(&ps, &s, &[2], &StrongOptions { monic: true, ..StrongOptions::default() }).unwrap();
        assert_eq!(sp.plan.substitutions[0].leading_coefficient(), BigInt::one());
    }

    #[test]
    fn composition_examples() {
        let (ps, s) = setup(&["T^2+1"]);
        let stages = iterated_composition(&ps, &s, &[1, 1], &StrongOptions::default()).unwrap();
        assert_eq!(stages.len(), 2);
        assert!(stages.iter().all(|st| st.fixed_divisors.is_empty()));
        let (ps, s) = setup(&["T"]);
        let stages = iterated_composition(&ps, &s, &[2], &StrongOptions::default()).unwrap();
        assert_eq!(stages[0].composition.degree_in(0), 2);
        assert!(iterated_composition(&ps, &s, &[], &StrongOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn counterexample_small() {
        let opts = CounterexampleOptions { samples: 50, ..CounterexampleOptions::default() };
        let b = sharpness_counterexample(0, &opts).unwrap();
        assert_eq!(b.p.to_string(), "T^2 - T + 2");
        assert_eq!(b.shift, 1);
        assert!(b.all_samples_even());
        let b = sharpness_counterexample(1, &opts).unwrap();
        assert_eq!(b.p.degree_in(0), 4);
        assert_eq!(b.family.len(), 4);
        assert!(b.all_samples_even());
    }
}
