use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

use schinzel_core::enumerate::{from_rank, rank_of, Spiral};
use schinzel_core::factorlab::{fast_certificate, kronecker_factor, KroneckerBudget, Verdict};
use schinzel_core::fixdiv::{is_fixed_prime, PrimeEvidence};
use schinzel_core::schinzelcore::nonvanishing_point;
use schinzel_core::{MPoly, Monomial, Registry, VarSplit};

fn reg() -> Registry {
    Registry::new(&["T", "Y", "Z"]).unwrap()
}

fn poly(nvars: usize, max_exp: u32, max_terms: usize, bound: i64) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars), -bound..=bound), 0..=max_terms).prop_map(
        move |terms| {
            let r = reg();
            MPoly::from_terms(
                &r,
                terms.into_iter().map(|(mut e, c)| {
                    e.resize(3, 0);
                    (Monomial(e), BigInt::from(c))
                }),
            )
        },
    )
}

fn point() -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec(-30i64..=30, 3).prop_map(|v| v.into_iter().map(BigInt::from).collect())
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(3, 3, 5, 20), b in poly(3, 3, 5, 20), c in poly(3, 3, 5, 20)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MPoly::one(&reg()), a.clone());
    }

    #[test]
    fn gauss_content(a in poly(3, 3, 5, 40), b in poly(3, 3, 5, 40)) {
        prop_assert_eq!((&a * &b).content(), a.content() * b.content());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(3, 3, 5, 20), b in poly(3, 3, 5, 20), t in point()) {
        prop_assert_eq!((&a * &b).eval(&t), a.eval(&t) * b.eval(&t));
        prop_assert_eq!((&a + &b).eval(&t), a.eval(&t) + b.eval(&t));
    }

    #[test]
    fn substitution_is_a_homomorphism(a in poly(3, 3, 4, 20), b in poly(3, 3, 4, 20), m in poly(3, 2, 3, 10)) {
        let s = |p: &MPoly| p.substitute_indices(&[(0, m.clone())]);
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
    }

    #[test]
    fn reduction_is_a_homomorphism(a in poly(3, 3, 5, 50), b in poly(3, 3, 5, 50), m in 2i64..40) {
        let m = BigInt::from(m);
        let lhs = (&a * &b).reduce_mod(&m).unwrap();
        let rhs = a.reduce_mod(&m).unwrap().try_mul(&b.reduce_mod(&m).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn print_parse_round_trip(a in poly(3, 4, 6, 100)) {
        let back = MPoly::parse(&a.to_string(), &reg()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn exact_division_recovers_factors(a in poly(3, 2, 4, 10), b in poly(3, 2, 4, 10)) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn spiral_ranks_are_a_bijection(r in 0u64..1_000_000) {
        prop_assert_eq!(rank_of(from_rank(r)), r);
    }

    #[test]
    fn fast_certificates_agree_with_the_oracle(p in poly(2, 3, 5, 9)) {
        prop_assume!(!p.is_constant());
        let cert = fast_certificate(&p).unwrap();
        if cert.verdict != Verdict::Inconclusive {
            let f = kronecker_factor(&p, &KroneckerBudget::default()).unwrap();
            prop_assert_eq!(cert.verdict == Verdict::Irreducible, f.is_irreducible_over_q());
        }
    }

    #[test]
    fn fixed_prime_evidence_is_sound(p in poly(2, 3, 5, 12), q in prop::sample::select(vec![2u32, 3, 5, 7])) {
        prop_assume!(!p.is_zero());
        let r = reg();
        let split = VarSplit::new(&r, &["T"], &["Y", "Z"]).unwrap();
        let q = BigInt::from(q);
        match is_fixed_prime(&p, &split, &q).unwrap() {
            PrimeEvidence::Witness(t) => {
                prop_assert!(!p.specialize(&[(0, t[0].clone())]).reduce_mod(&q).unwrap().is_zero());
            }
            PrimeEvidence::Fixed => {
                for t in -10i64..=10 {
                    prop_assert!(p.specialize(&[(0, BigInt::from(t))]).reduce_mod(&q).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn nonvanishing_points_avoid_every_prime(p in poly(2, 3, 5, 12)) {
        prop_assume!(!p.is_zero());
        let r = reg();
        let split = VarSplit::new(&r, &["T"], &["Y", "Z"]).unwrap();
        let primes: Vec<BigInt> = [2, 3, 5, 7].iter().map(|&x| BigInt::from(x)).collect();
        let fixed = primes.iter().any(|q| is_fixed_prime(&p, &split, q).unwrap() == PrimeEvidence::Fixed);
        match nonvanishing_point(&p, &split, &primes) {
            Ok(v) => {
                prop_assert!(!fixed);
                let image = p.specialize(&[(0, v[0].clone())]);
                for q in &primes {
                    prop_assert!(!image.reduce_mod(q).unwrap().is_zero());
                }
            }
            Err(_) => prop_assert!(fixed),
        }
    }
}

#[test]
fn spiral_prefix_is_ordered_by_shell() {
    let pts: Vec<Vec<i64>> = Spiral::new(2).take(25).collect();
    assert_eq!(pts.len(), 25);
    let norms: Vec<i64> = pts.iter().map(|p| p.iter().map(|x| x.abs()).max().unwrap()).collect();
    assert!(norms.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(pts[0], vec![0, 0]);
}

#[test]
fn content_of_integer_values_divides_gcd() {
    let r = reg();
    let p = MPoly::parse("(T^2-T)*Y + T^2 - T - 2", &r).unwrap();
    for t in -50i64..=50 {
        let c = p.specialize(&[(0, BigInt::from(t))]).content();
        assert!(c.is_even() || c.is_zero());
        assert!(!c.is_one());
    }
}
