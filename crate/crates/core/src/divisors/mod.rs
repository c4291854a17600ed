//! Divisor counting for `F_n`: factorization, `τ`, `Ω`, ranks of apparition,
//! primitive divisors and lower bounds on `τ(F_n)`.

mod factor;
pub mod primality;

pub use factor::{
    factorize, factorize_partial, factorize_with, FactorConfig, Factorization, PartialFactorization,
};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sequence::f_fast;

pub const DEFAULT_RANK_LIMIT: u64 = 5000;

pub fn tau(n: &BigInt) -> Result<u64> {
    Ok(factorize(n)?.tau())
}

pub fn big_omega(n: &BigInt) -> Result<u64> {
    Ok(factorize(n)?.big_omega())
}

/// Least `n ≥ 1` with `p | F_n`, searching up to [`DEFAULT_RANK_LIMIT`].
pub fn rank_of_apparition(a: &BigInt, b: &BigInt, p: &BigInt) -> Option<u64> {
    rank_of_apparition_within(a, b, p, DEFAULT_RANK_LIMIT)
}

/// Iterate `F` modulo `p` for at most `limit` indices.
///
/// Primes dividing `b` (and not `a`) never divide any `F_n` with `n ≥ 1`,
/// so the search gives up at the limit instead of cycling forever.
pub fn rank_of_apparition_within(a: &BigInt, b: &BigInt, p: &BigInt, limit: u64) -> Option<u64> {
    let a = a.mod_floor(p);
    let b = b.mod_floor(p);
    let mut lo = BigInt::zero();
    let mut hi = BigInt::one() % p;
    for n in 1..=limit {
        if hi.is_zero() {
            return Some(n);
        }
        let next = (&a * &hi + &b * &lo) % p;
        lo = std::mem::replace(&mut hi, next);
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveDivisorReport {
    pub n: u64,
    pub primitive_primes: Vec<BigInt>,
    pub has_primitive: bool,
}

fn require_positive(a: &BigInt, b: &BigInt) -> Result<()> {
    if a.sign() == Sign::Plus && b.sign() == Sign::Plus {
        Ok(())
    } else {
        Err(Error::hypothesis(format!(
            "need a, b > 0, got a={a}, b={b}"
        )))
    }
}

fn proper_divisors(n: u64) -> Vec<u64> {
    (2..n).filter(|d| n % d == 0).collect()
}

/// Factor `F_n`, first splitting it along `gcd(F_n, F_d)` for `d | n`.
///
/// `F_d | F_n`, so the pieces are products of smaller algebraic factors and
/// are far easier to finish with rho than `F_n` itself.
pub fn factor_sequence_term(
    a: &BigInt,
    b: &BigInt,
    n: u64,
    cfg: &FactorConfig,
) -> Result<PartialFactorization> {
    let value = f_fast(a, b, n);
    if value.is_zero() {
        return Err(Error::domain(format!("F_{n} = 0 has no factorization")));
    }
    let value = if value.sign() == Sign::Minus {
        -value
    } else {
        value
    };
    if value.to_string().len() > cfg.max_digits {
        return Err(Error::resource(format!(
            "F_{n} has {} digits, above the factoring limit of {}",
            value.to_string().len(),
            cfg.max_digits
        )));
    }

    let mut pieces = vec![value.clone()];
    for d in proper_divisors(n) {
        let f_d = f_fast(a, b, d);
        let mut next = Vec::with_capacity(pieces.len() + 1);
        for piece in pieces {
            let g = piece.gcd(&f_d);
            if !g.is_one() && g != piece {
                next.push(&piece / &g);
                next.push(g);
            } else {
                next.push(piece);
            }
        }
        pieces = next;
    }

    let mut known: std::collections::BTreeMap<BigInt, u32> = Default::default();
    let mut composite = Vec::new();
    for piece in pieces.iter().filter(|x| !x.is_one()) {
        let part = factorize_partial(piece, cfg)?;
        for (p, e) in part.known {
            *known.entry(p).or_insert(0) += e;
        }
        composite.extend(part.unfactored);
    }

    // Re-establish coprimality of leftovers with every known prime.
    let mut unfactored = Vec::new();
    for mut m in composite {
        for (p, e) in known.iter_mut() {
            while (&m % p).is_zero() {
                m /= p;
                *e += 1;
            }
        }
        if !m.is_one() {
            unfactored.push(m);
        }
    }
    let mut leftover_known = Vec::new();
    unfactored.retain(|m| {
        if primality::is_prime(m) {
            leftover_known.push(m.clone());
            false
        } else {
            true
        }
    });
    for p in leftover_known {
        *known.entry(p).or_insert(0) += 1;
    }
    unfactored.sort();

    Ok(PartialFactorization {
        n: value,
        known: known.into_iter().collect(),
        unfactored,
    })
}

/// Primes dividing `F_n` that divide no earlier `F_m`, `1 ≤ m < n`.
pub fn primitive_divisors(a: &BigInt, b: &BigInt, n: u64) -> Result<PrimitiveDivisorReport> {
    require_positive(a, b)?;
    if n == 0 {
        return Err(Error::domain("index must be positive"));
    }
    if n > DEFAULT_RANK_LIMIT {
        return Err(Error::resource(format!(
            "index {n} exceeds the rank search limit {DEFAULT_RANK_LIMIT}"
        )));
    }
    let partial = factor_sequence_term(a, b, n, &FactorConfig::default())?;
    let factorization = partial
        .into_complete()
        .ok_or_else(|| Error::resource(format!("F_{n} could not be completely factored")))?;
    let mut primitive_primes = Vec::new();
    for (p, _) in factorization.factors() {
        match rank_of_apparition_within(a, b, p, n) {
            Some(r) if r == n => primitive_primes.push(p.clone()),
            Some(_) => {}
            None => {
                return Err(Error::InternalInvariant(format!(
                    "{p} divides F_{n} but has no rank ≤ {n}"
                )))
            }
        }
    }
    Ok(PrimitiveDivisorReport {
        n,
        has_primitive: !primitive_primes.is_empty(),
        primitive_primes,
    })
}

/// `τ(F_{p^e}) ≥ 2^e` for an odd prime `p`.
pub fn check_tau_prime_power(a: &BigInt, b: &BigInt, p: u64, e: u32) -> Result<bool> {
    require_positive(a, b)?;
    if p == 2 || !primality::is_prime_u64(p) {
        return Err(Error::hypothesis(format!("{p} is not an odd prime")));
    }
    let index = p
        .checked_pow(e)
        .ok_or_else(|| Error::domain(format!("{p}^{e} overflows the index type")))?;
    let partial = factor_sequence_term(a, b, index, &FactorConfig::default())?;
    let needed = 1u64 << e;
    let lower = partial.tau_lower_bound();
    if partial.is_complete() || lower >= needed {
        Ok(lower >= needed)
    } else {
        Err(Error::resource(format!(
            "F_{index} only partially factored; τ ≥ {lower} does not decide τ ≥ {needed}"
        )))
    }
}

/// Outcome of the two divisor-count lower bounds at one index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauBoundCheck {
    pub n: u64,
    /// `τ(F_n)` when `tau_exact`, otherwise a proven lower bound.
    pub tau: u64,
    pub tau_exact: bool,
    /// `2^{Ω(n)}` for odd `n`, `2^{Ω(n) - 1}` for even `n`.
    pub omega_bound: u64,
    /// `τ(n)` for odd `n`, `τ(n) - 1` for even `n`.
    pub divisor_bound: u64,
    pub omega_bound_ok: bool,
    pub tau_bound_ok: bool,
}

impl TauBoundCheck {
    pub fn holds(&self) -> bool {
        self.omega_bound_ok && self.tau_bound_ok
    }
}

pub fn check_tau_bounds(a: &BigInt, b: &BigInt, n: u64) -> Result<TauBoundCheck> {
    require_positive(a, b)?;
    if n < 2 {
        return Err(Error::domain("index must be at least 2"));
    }
    let index_factors = factorize(&BigInt::from(n))?;
    let omega = index_factors.big_omega() as u32;
    let (omega_bound, divisor_bound) = if n % 2 == 1 {
        (1u64 << omega, index_factors.tau())
    } else {
        (1u64 << (omega - 1), index_factors.tau() - 1)
    };

    let partial = factor_sequence_term(a, b, n, &FactorConfig::default())?;
    let tau = partial.tau_lower_bound();
    let tau_exact = partial.is_complete();
    if !tau_exact && (tau < omega_bound || tau < divisor_bound) {
        return Err(Error::resource(format!(
            "F_{n} only partially factored; τ ≥ {tau} does not decide the bounds"
        )));
    }
    Ok(TauBoundCheck {
        n,
        tau,
        tau_exact,
        omega_bound,
        divisor_bound,
        omega_bound_ok: tau >= omega_bound,
        tau_bound_ok: tau >= divisor_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TauScanEntry {
    Checked(TauBoundCheck),
    Skipped { n: u64, reason: String },
}

/// Run [`check_tau_bounds`] for `2 ≤ n ≤ n_max`, ordered by `n`.
///
/// Resource failures become explicit skip entries; other errors propagate.
pub fn scan_tau_bounds(a: &BigInt, b: &BigInt, n_max: u64) -> Result<Vec<TauScanEntry>> {
    require_positive(a, b)?;
    (2..=n_max)
        .into_par_iter()
        .map(|n| match check_tau_bounds(a, b, n) {
            Ok(check) => Ok(TauScanEntry::Checked(check)),
            Err(Error::Resource(reason)) => Ok(TauScanEntry::Skipped { n, reason }),
            Err(e) => Err(e),
        })
        .collect()
}

/// [`primitive_divisors`] for every `n` in `lo..=hi`, ordered by `n`.
pub fn primitive_divisor_scan(
    a: &BigInt,
    b: &BigInt,
    lo: u64,
    hi: u64,
) -> Vec<(u64, Result<PrimitiveDivisorReport>)> {
    (lo..=hi)
        .into_par_iter()
        .map(|n| (n, primitive_divisors(a, b, n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn tau_and_omega_examples() {
        assert_eq!(tau(&big(144)), Ok(15));
        assert_eq!(tau(&big(1)), Ok(1));
        assert_eq!(tau(&big(12)), Ok(6));
        assert_eq!(big_omega(&big(12)), Ok(3));
        assert_eq!(big_omega(&big(1)), Ok(0));
        assert_eq!(big_omega(&big(144)), Ok(6));
        assert!(matches!(tau(&big(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of_apparition(&big(1), &big(1), &big(2)), Some(3));
        assert_eq!(rank_of_apparition(&big(1), &big(1), &big(5)), Some(5));
        assert_eq!(rank_of_apparition(&big(2), &big(1), &big(5)), Some(3));
        // 2 | b: F_n ≡ a^{n-1} (mod 2) is never 0 for odd a.
        assert_eq!(rank_of_apparition(&big(1), &big(2), &big(2)), None);
        assert_eq!(
            rank_of_apparition_within(&big(1), &big(1), &big(13), 6),
            None
        );
        assert_eq!(
            rank_of_apparition_within(&big(1), &big(1), &big(13), 7),
            Some(7)
        );
    }

    #[test]
    fn rank_matches_brute_force() {
        for (a, b) in [(1i64, 1i64), (2, 1), (1, 2), (3, 1)] {
            let f: Vec<BigInt> = (0..200).map(|n| f_fast(&big(a), &big(b), n)).collect();
            for &p in &primality::small_primes()[..40] {
                let p = big(i64::from(p));
                let brute = (1..200u64).find(|&n| (&f[n as usize] % &p).is_zero());
                assert_eq!(
                    rank_of_apparition(&big(a), &big(b), &p),
                    brute,
                    "a={a} b={b} p={p}"
                );
            }
        }
    }

    #[test]
    fn primitive_examples() {
        let r = primitive_divisors(&big(1), &big(1), 12).unwrap();
        assert!(!r.has_primitive);
        let r = primitive_divisors(&big(1), &big(1), 7).unwrap();
        assert_eq!(r.primitive_primes, vec![big(13)]);
        let r = primitive_divisors(&big(1), &big(1), 1).unwrap();
        assert!(!r.has_primitive);
        assert!(primitive_divisors(&big(1), &big(-1), 5).is_err());
    }

    #[test]
    fn pell_has_a_primitive_divisor_at_twelve() {
        // F_12 = 13860 = 2² · 3² · 5 · 7 · 11 for (a, b) = (2, 1); 11 first appears here.
        assert_eq!(f_fast(&big(2), &big(1), 12), big(13860));
        let r = primitive_divisors(&big(2), &big(1), 12).unwrap();
        assert_eq!(r.primitive_primes, vec![big(11)]);
        assert_eq!(rank_of_apparition(&big(2), &big(1), &big(7)), Some(6));
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(check_tau_prime_power(&big(1), &big(1), 3, 3), Ok(true));
        assert_eq!(check_tau_prime_power(&big(1), &big(1), 3, 1), Ok(true));
        assert_eq!(check_tau_prime_power(&big(2), &big(1), 3, 2), Ok(true));
        assert_eq!(tau(&f_fast(&big(2), &big(1), 9)), Ok(4));
        assert!(check_tau_prime_power(&big(1), &big(1), 2, 3).is_err());
        assert!(check_tau_prime_power(&big(1), &big(1), 9, 1).is_err());
    }

    #[test]
    fn tau_bound_examples() {
        let c = check_tau_bounds(&big(1), &big(1), 12).unwrap();
        assert_eq!((c.tau, c.omega_bound, c.divisor_bound), (15, 4, 5));
        assert!(c.holds() && c.tau_exact);
        let c = check_tau_bounds(&big(1), &big(1), 2).unwrap();
        assert_eq!((c.tau, c.omega_bound, c.divisor_bound), (1, 1, 1));
        assert!(c.holds());
        let c = check_tau_bounds(&big(1), &big(1), 9).unwrap();
        assert_eq!((c.tau, c.omega_bound, c.divisor_bound), (4, 4, 3));
        assert!(c.holds());
        assert!(check_tau_bounds(&big(1), &big(1), 1).is_err());
    }

    #[test]
    fn sequence_term_factorization_is_exact() {
        for n in 1..=90 {
            let value = f_fast(&big(1), &big(1), n);
            let part = factor_sequence_term(&big(1), &big(1), n, &FactorConfig::default()).unwrap();
            let f = part
                .into_complete()
                .expect("classic F_n ≤ 90 factors completely");
            assert_eq!(f.product(), value, "n={n}");
            assert!(f.factors().iter().all(|(p, _)| primality::is_prime(p)));
        }
    }

    #[test]
    fn odd_divisor_injection() {
        for n in (1u64..=99).step_by(2) {
            let f_n = f_fast(&big(1), &big(1), n);
            let mut prev = BigInt::zero();
            for d in (1..=n).filter(|d| n % d == 0) {
                let f_d = f_fast(&big(1), &big(1), d);
                assert!((&f_n % &f_d).is_zero());
                if d > 1 {
                    assert!(f_d > prev, "n={n} d={d}");
                }
                prev = f_d;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn factorization_round_trip(n in 1u64..1_000_000_000_000) {
            let f = factorize(&BigInt::from(n)).unwrap();
            prop_assert_eq!(f.product(), BigInt::from(n));
            prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(f.factors().iter().all(|(p, e)| *e >= 1 && primality::is_prime(p)));
        }
    }
}
