//! Irreducibility certificates, exhaustive factorization and gcd.
//!
//! Fast paths produce certificates that can be checked independently: a
//! prime modulo which the polynomial stays irreducible of the same degree, or
//! an integer point at which a primitive multivariate polynomial specializes
//! to an irreducible univariate one of the same degree. The Kronecker oracle
//! decides everything else within a budget.

mod fp;
mod gcd;
mod kronecker;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use fp::{is_irreducible_fp, FpPoly};
pub use gcd::{gcd_q, gcd_q_all, gcd_z, is_primitive_wrt};
pub use kronecker::{factor_univariate, kronecker_factor, Factorization, KroneckerBudget, UnivariateFactorization};

use crate::arith::primes_up_to;
use crate::enumerate::Spiral;
use crate::polyring::{MPoly, UPoly};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Irreducible,
    Reducible,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ModP,
    Evaluation,
    /// A nonconstant gcd of the coefficients in one variable splits off.
    ContentSplit,
    KroneckerExhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Prime(BigInt),
    /// Main variable and values assigned to the other variables.
    Point { main: usize, values: Vec<(usize, BigInt)> },
    Factor(MPoly),
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrredCertificate {
    pub verdict: Verdict,
    pub method: Method,
    pub witness: Witness,
}

impl IrredCertificate {
    pub fn is_irreducible(&self) -> bool {
        self.verdict == Verdict::Irreducible
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Irreducible => "irreducible",
            Verdict::Reducible => "reducible",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ModP => "mod-p",
            Method::Evaluation => "evaluation",
            Method::ContentSplit => "content-split",
            Method::KroneckerExhaustive => "kronecker-exhaustive",
        })
    }
}

const TRIED_PRIMES: usize = 10;
const EVALUATION_POINTS: usize = 40;

/// Irreducibility modulo one of the first primes not dividing the leading
/// coefficient, with the degree preserved.
fn mod_p_witness(f: &UPoly) -> Option<BigInt> {
    if f.degree() == 0 {
        return None;
    }
    let lc = f.leading_coefficient();
    primes_up_to(200)
        .into_iter()
        .filter(|&p| !(&lc % BigInt::from(p)).is_zero())
        .take(TRIED_PRIMES)
        .find(|&p| FpPoly::from_upoly(f, p).is_irreducible())
        .map(BigInt::from)
}

fn content_split(p: &MPoly) -> Option<MPoly> {
    for v in p.support_vars() {
        let g = gcd_q_all(p.as_univariate(v).iter(), p.registry());
        if !g.is_constant() {
            return Some(g);
        }
    }
    None
}

/// Evaluation certificate: `p` is primitive in `main` and some integer point
/// for the other variables keeps its degree and gives an irreducible image.
fn evaluation_witness(p: &MPoly, exhaustive_images: bool, budget: &KroneckerBudget) -> Option<Witness> {
    let vars = p.support_vars();
    let mut mains = vars.clone();
    mains.sort_by_key(|&v| core::cmp::Reverse(p.degree_in(v)));
    for main in mains {
        let coeffs = p.as_univariate(main);
        if !gcd_q_all(coeffs.iter(), p.registry()).is_constant() {
            continue;
        }
        let lc = coeffs.last().unwrap();
        let others: Vec<usize> = vars.iter().copied().filter(|&v| v != main).collect();
        for point in Spiral::new(others.len()).take(EVALUATION_POINTS) {
            let values: Vec<(usize, BigInt)> = others.iter().zip(&point).map(|(&v, &x)| (v, BigInt::from(x))).collect();
            if lc.specialize(&values).is_zero() {
                continue;
            }
            let image = p.specialize(&values).to_upoly(main).expect("only main variable remains");
            let irreducible = if mod_p_witness(&image).is_some() {
                true
            } else if exhaustive_images {
                match kronecker::factor_univariate(&image.primitive_part(), budget) {
                    Ok((_, _, fs)) => fs.len() == 1 && fs[0].1 == 1,
                    Err(_) => false,
                }
            } else {
                false
            };
            if irreducible {
                return Some(Witness::Point { main, values });
            }
        }
    }
    None
}

fn require_nonconstant(p: &MPoly) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    Ok(())
}

/// Fast certificates only; `Inconclusive` when none applies.
pub fn fast_certificate(p: &MPoly) -> Result<IrredCertificate> {
    fast(p, false, &KroneckerBudget::default())
}

fn fast(p: &MPoly, exhaustive_images: bool, budget: &KroneckerBudget) -> Result<IrredCertificate> {
    require_nonconstant(p)?;
    let vars = p.support_vars();
    if vars.len() == 1 {
        let f = p.to_upoly(vars[0]).unwrap();
        if let Some(q) = mod_p_witness(&f) {
            return Ok(IrredCertificate { verdict: Verdict::Irreducible, method: Method::ModP, witness: Witness::Prime(q) });
        }
    } else {
        if let Some(g) = content_split(p) {
            let verdict = if g.total_degree() == p.total_degree() { Verdict::Inconclusive } else { Verdict::Reducible };
            if verdict == Verdict::Reducible {
                return Ok(IrredCertificate { verdict, method: Method::ContentSplit, witness: Witness::Factor(g) });
            }
        }
        if let Some(w) = evaluation_witness(p, exhaustive_images, budget) {
            return Ok(IrredCertificate { verdict: Verdict::Irreducible, method: Method::Evaluation, witness: w });
        }
    }
    Ok(IrredCertificate { verdict: Verdict::Inconclusive, method: Method::KroneckerExhaustive, witness: Witness::None })
}

/// Decides irreducibility over the rationals.
pub fn is_irreducible_q(p: &MPoly) -> Result<IrredCertificate> {
    is_irreducible_q_with(p, &KroneckerBudget { degree_sieve: true, ..KroneckerBudget::default() })
}

pub fn is_irreducible_q_with(p: &MPoly, budget: &KroneckerBudget) -> Result<IrredCertificate> {
    let cert = fast(p, true, budget)?;
    if cert.verdict != Verdict::Inconclusive {
        return Ok(cert);
    }
    let f = kronecker_factor(p, budget)?;
    Ok(if f.is_irreducible_over_q() {
        IrredCertificate { verdict: Verdict::Irreducible, method: Method::KroneckerExhaustive, witness: Witness::None }
    } else {
        IrredCertificate {
            verdict: Verdict::Reducible,
            method: Method::KroneckerExhaustive,
            witness: Witness::Factor(f.factors[0].0.clone()),
        }
    })
}

/// Irreducibility over the integers: irreducible over the rationals with
/// content one.
pub fn is_irreducible_z(p: &MPoly) -> Result<(bool, IrredCertificate)> {
    let cert = is_irreducible_q(p)?;
    Ok((cert.is_irreducible() && p.content().is_one(), cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;
    use alloc::string::ToString;

    fn q(s: &str, names: &[&str]) -> IrredCertificate {
        is_irreducible_q(&parse_poly(s, names).unwrap()).unwrap()
    }

    #[test]
    fn q_examples() {
        let c = q("Y^2-2", &["Y"]);
        assert_eq!((c.verdict, c.method, c.witness), (Verdict::Irreducible, Method::ModP, Witness::Prime(BigInt::from(3))));
        let c = q("Y^2-1", &["Y"]);
        assert_eq!(c.verdict, Verdict::Reducible);
        assert!(matches!(c.witness, Witness::Factor(ref f) if f.to_string() == "Y - 1" || f.to_string() == "Y + 1"));
        let c = q("T*(T-1)*(T-Y)*(T-Y-1)+2", &["T", "Y"]);
        assert_eq!((c.verdict, c.method), (Verdict::Irreducible, Method::Evaluation));
        assert_eq!(q("Y^4+1", &["Y"]).verdict, Verdict::Irreducible);
        assert_eq!(q("T*Y+T", &["T", "Y"]).verdict, Verdict::Reducible);
        assert_eq!(q("T^2-Y^2", &["T", "Y"]).verdict, Verdict::Reducible);
    }

    #[test]
    fn z_examples() {
        let z = |s: &str, n: &[&str]| is_irreducible_z(&parse_poly(s, n).unwrap()).unwrap().0;
        assert!(!z("2*Y+2", &["Y"]));
        assert!(z("Y^2-2", &["Y"]));
        assert!(z("4*T^2+1", &["T"]));
        assert!(matches!(is_irreducible_q(&parse_poly("5", &["Y"]).unwrap()), Err(Error::ConstantPolynomial)));
    }

    #[test]
    fn evaluation_witness_checks_out() {
        let p = parse_poly("T*(T-1)*(T-Y)*(T-Y-1)+2", &["T", "Y"]).unwrap();
        let c = fast_certificate(&p).unwrap();
        let Witness::Point { main, values } = c.witness else { panic!("{c:?}") };
        let image = p.specialize(&values).to_upoly(main).unwrap();
        assert_eq!(image.degree() as u32, p.degree_in(main));
        assert!(mod_p_witness(&image).is_some());
        let _ = BigInt::one();
    }
}
