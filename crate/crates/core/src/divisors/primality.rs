//! Small-prime sieve and a deterministic primality test.
//!
//! Below `3.3 · 10^24` Miller-Rabin with the first thirteen prime bases is a
//! proof. Above it we run Baillie-PSW (base-2 strong test plus a strong Lucas
//! test with Selfridge parameters), for which no counterexample is known.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub const SIEVE_LIMIT: u32 = 1_000_000;

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// All primes below [`SIEVE_LIMIT`].
pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = SIEVE_LIMIT as usize;
        let mut composite = vec![false; limit];
        let mut primes = Vec::with_capacity(80_000);
        for i in 2..limit {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

fn strong_probable_prime_u64(n: u64, base: u64) -> bool {
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        let p = p as u64;
        if n % p == 0 {
            return n == p;
        }
    }
    MR_BASES
        .iter()
        .all(|&b| strong_probable_prime_u64(n, b as u64))
}

fn strong_probable_prime(n: &BigInt, base: &BigInt) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    debug_assert!(n.is_odd() && n.sign() == Sign::Plus);
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        a >>= twos;
        let n_mod_8 = (&n % 8u32).to_u32().unwrap();
        if twos % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    if x.is_odd() {
        (x + n) >> 1u32
    } else {
        x >> 1u32
    }
}

/// Strong Lucas probable-prime test with Selfridge's method A parameters.
fn strong_lucas_probable_prime(n: &BigInt) -> bool {
    // The search for D below never terminates on perfect squares.
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 if d.magnitude() != n.magnitude() => return false,
            _ => {}
        }
        d = if d.sign() == Sign::Plus {
            -(d + 2u32)
        } else {
            -d + 2u32
        };
    }
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d) / 4;

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    // Left-to-right ladder on the bits of k.
    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(n);
    for i in (0..k.bits() - 1).rev() {
        u = (&u * &v).mod_floor(n);
        v = (&v * &v - (&qk << 1u32)).mod_floor(n);
        qk = (&qk * &qk).mod_floor(n);
        if k.bit(i) {
            let u_next = half_mod((&p * &u + &v).mod_floor(n), n);
            let v_next = half_mod((&d * &u + &p * &v).mod_floor(n), n);
            u = u_next;
            v = v_next;
            qk = (&qk * &q).mod_floor(n);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - (&qk << 1u32)).mod_floor(n);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(n);
    }
    false
}

/// Deterministic primality test for arbitrary non-negative integers.
pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &small_primes()[..100] {
        if (n % p).is_zero() {
            return false;
        }
    }
    // 3.317 · 10^24: largest bound known for the first thirteen prime bases.
    let deterministic_bound: BigInt = "3317044064679887385961981".parse().unwrap();
    if *n < deterministic_bound {
        return MR_BASES
            .iter()
            .all(|&b| strong_probable_prime(n, &BigInt::from(b)));
    }
    strong_probable_prime(n, &BigInt::from(2)) && strong_lucas_probable_prime(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn sieve_matches_trial_division() {
        let primes = small_primes();
        assert_eq!(primes.len(), 78_498);
        for n in 0..20_000u64 {
            assert_eq!(
                primes.binary_search(&(n as u32)).is_ok(),
                naive_is_prime(n),
                "{n}"
            );
        }
    }

    #[test]
    fn u64_primality_matches_trial_division() {
        for n in 0..50_000u64 {
            assert_eq!(is_prime_u64(n), naive_is_prime(n), "{n}");
        }
        // Strong pseudoprimes to several bases.
        for n in [
            3_215_031_751u64,
            2_152_302_898_747,
            3_474_749_660_383,
            341_550_071_728_321,
        ] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn big_primality() {
        let p = |s: &str| s.parse::<BigInt>().unwrap();
        // 2^89 - 1 and 2^127 - 1 are Mersenne primes.
        assert!(is_prime(&((BigInt::one() << 89u32) - 1u32)));
        assert!(is_prime(&((BigInt::one() << 127u32) - 1u32)));
        assert!(!is_prime(&((BigInt::one() << 67u32) - 1u32)));
        assert!(!is_prime(&((BigInt::one() << 128u32) + 1u32)));
        // Product of two 20-digit primes.
        let a = p("100000000000000000039");
        let b = p("100000000000000000129");
        assert!(is_prime(&a) && is_prime(&b));
        assert!(!is_prime(&(&a * &b)));
        assert!(!is_prime(&(&a * &a)));
        // Fibonacci prime F_83.
        assert!(is_prime(&p("99194853094755497")));
        assert!(is_prime(&p("1066340417491710595814572169")));
    }

    #[test]
    fn lucas_test_agrees_on_odd_numbers() {
        for n in (5u64..20_000).step_by(2) {
            let big = BigInt::from(n);
            if naive_is_prime(n) {
                assert!(strong_lucas_probable_prime(&big), "{n}");
            }
        }
        // 5459 and 5777 are strong Lucas pseudoprimes but fail base 2.
        for n in [5459u64, 5777, 10877] {
            assert!(strong_lucas_probable_prime(&BigInt::from(n)));
            assert!(!strong_probable_prime(&BigInt::from(n), &BigInt::from(2)));
        }
    }

    #[test]
    fn jacobi_small_values() {
        assert_eq!(jacobi(&BigInt::from(2), &BigInt::from(7)), 1);
        assert_eq!(jacobi(&BigInt::from(3), &BigInt::from(7)), -1);
        assert_eq!(jacobi(&BigInt::from(-1), &BigInt::from(11)), -1);
        assert_eq!(jacobi(&BigInt::from(5), &BigInt::from(15)), 0);
        assert_eq!(jacobi(&BigInt::from(1001), &BigInt::from(9907)), -1);
    }
}
