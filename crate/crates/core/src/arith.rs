//! Integer helpers: primes, factorization, divisors, CRT.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Primes `<= n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin with the first twelve prime bases; exact below 3.3·10^24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &BigInt) -> bool {
    n.is_positive() && is_probable_prime(n.magnitude())
}

fn pollard_brent(n: &BigUint) -> BigUint {
    // n is odd, composite and not a perfect power of a small prime
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let m: u64 = 64;
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn factor_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(&n);
    let other = &n / &d;
    factor_into(d, out);
    factor_into(other, out);
}

/// Prime factorization of `n > 0` as ascending `(prime, exponent)` pairs.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "factorize(0)");
    let mut rest = n.clone();
    let mut primes: Vec<BigUint> = Vec::new();
    for p in primes_up_to(1000) {
        let bp = BigUint::from(p);
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            primes.push(bp.clone());
        }
    }
    factor_into(rest, &mut primes);
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Distinct primes dividing `n` (ascending); empty for `n ∈ {0, ±1}`.
pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return Vec::new();
    }
    factorize(n.magnitude()).into_iter().map(|(p, _)| BigInt::from(p)).collect()
}

pub fn divisor_count(n: &BigUint) -> u64 {
    factorize(n).iter().map(|(_, e)| *e as u64 + 1).product()
}

/// Positive divisors of `n > 0`, ascending.
pub fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..e {
                pk *= &p;
                next.push(pk.clone());
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Least non-negative residue.
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Chinese remaindering for pairwise coprime moduli. Returns the least
/// non-negative solution, or `None` when the moduli are not coprime.
pub fn crt(congruences: &[(BigInt, BigInt)]) -> Option<BigInt> {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, m) in congruences {
        let egcd = modulus.extended_gcd(m);
        if !egcd.gcd.is_one() {
            return None;
        }
        // x + modulus * k ≡ r (mod m)  =>  k ≡ (r - x) * modulus^{-1}
        let k = ((r - &x) * &egcd.x).mod_floor(m);
        x += &modulus * k;
        modulus *= m;
        x = x.mod_floor(&modulus);
    }
    Some(x)
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

/// Primes `p ≤ bound` as `BigInt`.
pub fn primes_up_to_big(bound: u64) -> Vec<BigInt> {
    primes_up_to(bound).into_iter().map(BigInt::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_and_miller_rabin_agree() {
        let sieve = primes_up_to(5000);
        let mr: Vec<u64> = (0..=5000).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(sieve, mr);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
    }

    #[test]
    fn factorization_round_trip() {
        let n = BigUint::from(2u64.pow(5) * 3 * 1_000_003 * 1_000_003);
        let f = factorize(&n);
        assert_eq!(
            f,
            vec![
                (BigUint::from(2u32), 5),
                (BigUint::from(3u32), 1),
                (BigUint::from(1_000_003u32), 2)
            ]
        );
        let big = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64);
        let f = factorize(&big);
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn divisors_of_twelve() {
        let d: Vec<u32> = divisors(&BigUint::from(12u32)).iter().map(|x| x.to_u32().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisor_count(&BigUint::from(12u32)), 6);
    }

    #[test]
    fn crt_least_representative() {
        let x = crt(&[(BigInt::from(1), BigInt::from(2)), (BigInt::from(0), BigInt::from(5))]).unwrap();
        assert_eq!(x, BigInt::from(5));
        let x = crt(&[(BigInt::from(2), BigInt::from(3)), (BigInt::from(3), BigInt::from(5))]).unwrap();
        assert_eq!(x, BigInt::from(8));
        assert_eq!(crt(&[]), Some(BigInt::zero()));
        assert!(crt(&[(BigInt::from(1), BigInt::from(4)), (BigInt::from(1), BigInt::from(6))]).is_none());
    }
}
