use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::Signed;

use crate::polyring::{MPoly, VarSplit};
use crate::{Error, Result};

fn main_var(a: &MPoly, b: &MPoly) -> Option<usize> {
    let mut vars = a.support_vars();
    vars.extend(b.support_vars());
    vars.into_iter().max()
}

fn trim(mut v: Vec<MPoly>) -> Vec<MPoly> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Pseudo-remainder of `a` by `b` as polynomials in one variable.
fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<MPoly> = a.to_vec();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        let mut next: Vec<MPoly> = r.iter().map(|c| c * lb).collect();
        for (j, c) in b.iter().enumerate() {
            next[shift + j] = &next[shift + j] - &(&lr * c);
        }
        next.pop();
        r = trim(next);
    }
    r
}

fn content_in(coeffs: &[MPoly]) -> MPoly {
    let mut g = MPoly::zero(coeffs[0].registry());
    for c in coeffs {
        g = gcd_z(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn divide_all(coeffs: &[MPoly], d: &MPoly) -> Vec<MPoly> {
    coeffs.iter().map(|c| c.div_exact(d).expect("content divides every coefficient")).collect()
}

fn positive(p: MPoly) -> MPoly {
    if p.leading_coefficient().is_negative() {
        -p
    } else {
        p
    }
}

/// Greatest common divisor in `Z[x_1, ..., x_m]`, with positive leading
/// coefficient; `gcd(0, 0) = 0`.
pub fn gcd_z(a: &MPoly, b: &MPoly) -> MPoly {
    assert!(a.registry() == b.registry(), "registry mismatch");
    if a.is_zero() {
        return positive(b.clone());
    }
    if b.is_zero() {
        return positive(a.clone());
    }
    let Some(v) = main_var(a, b) else {
        let g = a.constant_value().unwrap().gcd(&b.constant_value().unwrap());
        return MPoly::constant(a.registry(), g);
    };
    let ua = a.as_univariate(v);
    let ub = b.as_univariate(v);
    let ca = content_in(&ua);
    let cb = content_in(&ub);
    let c = gcd_z(&ca, &cb);
    let (mut pa, mut pb) = (divide_all(&ua, &ca), divide_all(&ub, &cb));
    if pa.len() < pb.len() {
        core::mem::swap(&mut pa, &mut pb);
    }
    while pb.len() > 1 {
        let r = prem(&pa, &pb);
        pa = pb;
        pb = if r.is_empty() { r } else { divide_all(&r, &content_in(&r)) };
    }
    let g = if pb.is_empty() {
        MPoly::from_univariate(a.registry(), v, &pa)
    } else {
        MPoly::one(a.registry())
    };
    positive(&g.primitive_part() * &c)
}

/// Primitive gcd over the rationals, with positive leading coefficient.
pub fn gcd_q(a: &MPoly, b: &MPoly) -> MPoly {
    let g = gcd_z(a, b);
    if g.is_zero() {
        return g;
    }
    positive(g.primitive_part())
}

/// Primitive gcd over the rationals of a list; zero for an all-zero list.
pub fn gcd_q_all<'a>(polys: impl IntoIterator<Item = &'a MPoly>, registry: &crate::Registry) -> MPoly {
    let mut g = MPoly::zero(registry);
    for p in polys {
        g = gcd_q(&g, p);
        if g.is_constant() && !g.is_zero() {
            return MPoly::one(registry);
        }
    }
    g
}

/// Whether the coefficients of `p` as a polynomial in the split's variables
/// have a constant gcd over the rationals.
pub fn is_primitive_wrt(p: &MPoly, split: &VarSplit) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    split.check_registry(p.registry())?;
    let coeffs = p.coefficients_in(split.vars());
    Ok(gcd_q_all(coeffs.values(), p.registry()).is_constant())
}
