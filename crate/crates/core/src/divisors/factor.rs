//! Integer factorization: trial division by sieved primes, then Pollard's rho
//! (Brent's variant) with a per-input deterministic seed.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::primality::{is_prime, small_primes};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorConfig {
    /// Trial-divide by every prime below this bound.
    pub trial_bound: u32,
    /// Total rho iterations allowed per composite before giving up on it.
    pub rho_iterations: u64,
    /// Inputs with more decimal digits are refused outright.
    pub max_digits: usize,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_bound: 1_000_000,
            rho_iterations: 1 << 19,
            max_digits: 80,
        }
    }
}

/// Complete prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: BigInt,
    factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn n(&self) -> &BigInt {
        &self.n
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(BigInt, u32)] {
        &self.factors
    }

    pub fn tau(&self) -> u64 {
        self.factors
            .iter()
            .map(|(_, e)| u64::from(*e) + 1)
            .product()
    }

    pub fn big_omega(&self) -> u64 {
        self.factors.iter().map(|(_, e)| u64::from(*e)).sum()
    }

    pub fn product(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<BigInt> {
        let mut divs = vec![BigInt::one()];
        for (p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            for d in &divs {
                let mut term = d.clone();
                next.push(term.clone());
                for _ in 0..*e {
                    term *= p;
                    next.push(term.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }
}

/// A factorization that may still contain composite cofactors rho could not split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFactorization {
    pub n: BigInt,
    /// Proven primes with exponents, increasing.
    pub known: Vec<(BigInt, u32)>,
    /// Composite cofactors, each coprime to every known prime.
    pub unfactored: Vec<BigInt>,
}

impl PartialFactorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    pub fn into_complete(self) -> Option<Factorization> {
        self.unfactored.is_empty().then_some(Factorization {
            n: self.n,
            factors: self.known,
        })
    }

    /// A proven lower bound on `τ(n)`; exact when the factorization is complete.
    ///
    /// The leftover product `L` is composite and coprime to the known part,
    /// so `τ(L) ≥ 3`, and `τ(L)` is even (hence `≥ 4`) unless `L` is a square.
    pub fn tau_lower_bound(&self) -> u64 {
        let known: u64 = self.known.iter().map(|(_, e)| u64::from(*e) + 1).product();
        if self.unfactored.is_empty() {
            return known;
        }
        let rest: BigInt = self.unfactored.iter().product();
        let root = rest.sqrt();
        known * if &root * &root == rest { 3 } else { 4 }
    }
}

fn digit_count(n: &BigInt) -> usize {
    n.magnitude().to_str_radix(10).len()
}

fn seed_of(n: &BigInt) -> u64 {
    (n % 2_147_483_647u64).to_u64().unwrap_or(0)
}

/// One run of Brent's cycle search on `x ↦ x² + c (mod n)`.
fn brent(n: &BigInt, c: &BigInt, x0: &BigInt, budget: u64) -> Option<BigInt> {
    const BATCH: u64 = 128;
    let step = |x: &BigInt| (x * x + c) % n;
    let mut y = x0.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigInt::one();
    let mut g = BigInt::one();
    let mut r: u64 = 1;
    let mut spent: u64 = 0;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = step(&y);
                q = (q * (&x - &y).abs()) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        spent += 2 * r;
        r *= 2;
        if g.is_one() && spent > budget {
            return None;
        }
    }
    if &g == n {
        // The batch overshot; replay it one step at a time.
        loop {
            ys = step(&ys);
            g = (&x - &ys).abs().gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// A nontrivial factor of the odd composite `n`, or `None` within budget.
fn rho_split(n: &BigInt, cfg: &FactorConfig) -> Option<BigInt> {
    let seed = seed_of(n);
    let attempts = 4u64;
    let per_attempt = (cfg.rho_iterations / attempts).max(1);
    (0..attempts).find_map(|i| {
        let c = BigInt::from(1 + (seed + 7 * i) % 1_000);
        let x0 = BigInt::from(2 + (seed / 1_000 + i) % 97);
        brent(n, &c, &x0, per_attempt)
    })
}

fn trial_divide(n: &mut BigInt, bound: u32, known: &mut BTreeMap<BigInt, u32>) {
    if let Some(mut small) = n.to_u64() {
        for &p in small_primes() {
            if p >= bound || u64::from(p) * u64::from(p) > small {
                break;
            }
            let p64 = u64::from(p);
            while small % p64 == 0 {
                small /= p64;
                *known.entry(BigInt::from(p)).or_insert(0) += 1;
            }
        }
        *n = BigInt::from(small);
        return;
    }
    for &p in small_primes() {
        if p >= bound {
            break;
        }
        if (&*n % p).is_zero() {
            let mut e = 0;
            while (&*n % p).is_zero() {
                *n /= p;
                e += 1;
            }
            *known.entry(BigInt::from(p)).or_insert(0) += e;
        }
        let pp = BigInt::from(u64::from(p) * u64::from(p));
        if pp > *n {
            break;
        }
    }
}

/// Factor as far as the configured budget allows.
pub fn factorize_partial(n: &BigInt, cfg: &FactorConfig) -> Result<PartialFactorization> {
    if n.sign() != Sign::Plus {
        return Err(Error::domain(format!("cannot factor {n}: need n ≥ 1")));
    }
    if digit_count(n) > cfg.max_digits {
        return Err(Error::resource(format!(
            "{} digits exceeds the factoring limit of {}",
            digit_count(n),
            cfg.max_digits
        )));
    }
    let mut known = BTreeMap::new();
    let mut rest = n.clone();
    trial_divide(&mut rest, cfg.trial_bound, &mut known);

    let bound = BigInt::from(cfg.trial_bound);
    let mut leftovers = Vec::new();
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if &bound * &bound > m || is_prime(&m) {
            // Every factor below the trial bound is gone, so m below bound² is prime.
            *known.entry(m).or_insert(0) += 1;
            continue;
        }
        let root = m.sqrt();
        if &root * &root == m {
            stack.push(root.clone());
            stack.push(root);
            continue;
        }
        match rho_split(&m, cfg) {
            Some(d) => {
                stack.push(&m / &d);
                stack.push(d);
            }
            None => leftovers.push(m),
        }
    }

    // A prime found in one branch may also sit inside a leftover.
    let mut unfactored = Vec::new();
    for mut m in leftovers {
        for (p, e) in known.iter_mut() {
            while (&m % p).is_zero() {
                m /= p;
                *e += 1;
            }
        }
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *known.entry(m).or_insert(0) += 1;
        } else {
            unfactored.push(m);
        }
    }
    unfactored.sort();

    Ok(PartialFactorization {
        n: n.clone(),
        known: known.into_iter().collect(),
        unfactored,
    })
}

pub fn factorize_with(n: &BigInt, cfg: &FactorConfig) -> Result<Factorization> {
    let partial = factorize_partial(n, cfg)?;
    let leftover = partial.unfactored.first().cloned();
    partial.into_complete().ok_or_else(|| {
        Error::resource(format!(
            "could not split composite cofactor {} of {n}",
            leftover.unwrap_or_default()
        ))
    })
}

/// Complete factorization with the default configuration.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    factorize_with(n, &FactorConfig::default())
}
