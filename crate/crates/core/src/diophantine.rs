//! Solutions of `5x² + 4y² = z²`, sums of two squares, and alternating
//! bisquable sequences.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::divisors::{factorize, primality::jacobi, Factorization};
use crate::error::{Error, Result};
use crate::identities::invariant_quantity;
use crate::sequence::{g_iter_terms, SequenceParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    F1,
    F2,
    F3,
    F4,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::F1, Family::F2, Family::F3, Family::F4];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::F1 => "F1",
            Family::F2 => "F2",
            Family::F3 => "F3",
            Family::F4 => "F4",
        };
        f.write_str(name)
    }
}

/// Which `(l, m)` each family accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityRule {
    /// `l`, `m` odd and coprime for every family.
    AllOdd,
    /// `l`, `m` odd and coprime for F1/F2; only coprime for F3/F4.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiophSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
    pub family: Family,
    pub k: BigInt,
    pub l: BigInt,
    pub m: BigInt,
}

pub fn is_solution(x: &BigInt, y: &BigInt, z: &BigInt) -> bool {
    BigInt::from(5) * x * x + BigInt::from(4) * y * y == z * z
}

fn exact_div(n: BigInt, d: u32) -> Result<BigInt> {
    let (q, r) = n.div_rem(&BigInt::from(d));
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::InternalInvariant(format!(
            "{n} is not divisible by {d}"
        )))
    }
}

fn check_params(family: Family, l: &BigInt, m: &BigInt, rule: ParityRule) -> Result<()> {
    if !l.gcd(m).is_one() {
        return Err(Error::hypothesis(format!("gcd(l, m) = gcd({l}, {m}) ≠ 1")));
    }
    let needs_odd = match rule {
        ParityRule::AllOdd => true,
        ParityRule::Derived => matches!(family, Family::F1 | Family::F2),
    };
    if needs_odd && (l.is_even() || m.is_even()) {
        return Err(Error::hypothesis(format!(
            "{family} needs odd l and m, got l={l}, m={m}"
        )));
    }
    Ok(())
}

/// The family member with parameters `(k, l, m)`; `l`, `m` odd and coprime.
pub fn family_solution(
    family: Family,
    k: &BigInt,
    l: &BigInt,
    m: &BigInt,
) -> Result<DiophSolution> {
    family_solution_with(family, k, l, m, ParityRule::AllOdd)
}

pub fn family_solution_with(
    family: Family,
    k: &BigInt,
    l: &BigInt,
    m: &BigInt,
    rule: ParityRule,
) -> Result<DiophSolution> {
    check_params(family, l, m, rule)?;
    let l2 = l * l;
    let m2 = m * m;
    let five = BigInt::from(5);
    let klm = k * l * m;
    let (x, y, z) = match family {
        Family::F1 => (
            klm,
            k * exact_div(&five * &l2 - &m2, 4)?,
            k * exact_div(&five * &l2 + &m2, 2)?,
        ),
        Family::F2 => (
            klm,
            k * exact_div(&l2 - &five * &m2, 4)?,
            k * exact_div(&l2 + &five * &m2, 2)?,
        ),
        Family::F3 => (
            klm * 4,
            k * (&five * &l2 - &m2),
            k * (&five * &l2 + &m2) * 2,
        ),
        Family::F4 => (
            klm * 4,
            k * (&l2 - &five * &m2),
            k * (&l2 + &five * &m2) * 2,
        ),
    };
    Ok(DiophSolution {
        x,
        y,
        z,
        family,
        k: k.clone(),
        l: l.clone(),
        m: m.clone(),
    })
}

/// Every admissible family member with `1 ≤ k ≤ k_max`, `1 ≤ l, m ≤ param_bound`,
/// ordered by `(family, k, l, m)`.
pub fn family_solutions(k_max: u64, param_bound: u64, rule: ParityRule) -> Vec<DiophSolution> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for k in 1..=k_max {
            for l in 1..=param_bound {
                for m in 1..=param_bound {
                    let sol = family_solution_with(
                        family,
                        &BigInt::from(k),
                        &BigInt::from(l),
                        &BigInt::from(m),
                        rule,
                    );
                    if let Ok(sol) = sol {
                        out.push(sol);
                    }
                }
            }
        }
    }
    out
}

fn isqrt_exact(n: u64) -> Option<u64> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// All `(x, y, z)` with `x, y ≥ 0`, `1 ≤ z ≤ z_max`, sorted by `(z, x, y)`.
pub fn brute_force_solutions(z_max: u64) -> Vec<(u64, u64, u64)> {
    (1..=z_max)
        .into_par_iter()
        .flat_map_iter(|z| {
            let z2 = z * z;
            (0..)
                .take_while(move |x| 5 * x * x <= z2)
                .filter_map(move |x| {
                    let rest = z2 - 5 * x * x;
                    if rest % 4 != 0 {
                        return None;
                    }
                    isqrt_exact(rest / 4).map(|y| (x, y, z))
                })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessReport {
    pub z_max: u64,
    pub param_bound: u64,
    pub rule: ParityRule,
    pub total: usize,
    pub matched: usize,
    /// Solutions on the `x = 0` line, `(0, y, 2y)`.
    pub degenerate: Vec<(u64, u64, u64)>,
    pub unmatched: Vec<(u64, u64, u64)>,
}

impl CompletenessReport {
    pub fn is_complete(&self) -> bool {
        self.unmatched.is_empty()
    }
}

fn primitive(x: u64, y: u64, z: u64) -> ((u64, u64, u64), u64) {
    let g = x.gcd(&y).gcd(&z);
    ((x / g, y / g, z / g), g)
}

/// Compare the exhaustive solution list against the families.
///
/// A solution `c·P` (with `P` primitive) is matched when some family member
/// with `k = 1` equals `g·P` and `g | c`; the multiplier `k = c / g` then
/// reproduces it. Signs of `y` are ignored.
pub fn completeness_report(z_max: u64, param_bound: u64, rule: ParityRule) -> CompletenessReport {
    let mut reachable: BTreeMap<(u64, u64, u64), BTreeSet<u64>> = BTreeMap::new();
    for sol in family_solutions(1, param_bound, rule) {
        let (Some(x), Some(y), Some(z)) = (sol.x.to_u64(), sol.y.abs().to_u64(), sol.z.to_u64())
        else {
            continue;
        };
        if z > z_max {
            continue;
        }
        let (p, g) = primitive(x, y, z);
        reachable.entry(p).or_default().insert(g);
    }

    let solutions = brute_force_solutions(z_max);
    let mut degenerate = Vec::new();
    let mut unmatched = Vec::new();
    let mut matched = 0;
    for &(x, y, z) in &solutions {
        if x == 0 {
            degenerate.push((x, y, z));
            continue;
        }
        let (p, c) = primitive(x, y, z);
        let hit = reachable
            .get(&p)
            .is_some_and(|gs| gs.iter().any(|g| c % g == 0));
        if hit {
            matched += 1;
        } else {
            unmatched.push((x, y, z));
        }
    }
    CompletenessReport {
        z_max,
        param_bound,
        rule,
        total: solutions.len(),
        matched,
        degenerate,
        unmatched,
    }
}

/// Every solution with `z ≤ z_max` and `x ≠ 0` is a family member with
/// `l, m ≤ param_bound`.
pub fn completeness_check(z_max: u64, param_bound: u64) -> bool {
    completeness_report(z_max, param_bound, ParityRule::Derived).is_complete()
}

fn require_non_negative(n: &BigInt) -> Result<()> {
    if n.sign() == Sign::Minus {
        Err(Error::domain(format!("{n} is negative")))
    } else {
        Ok(())
    }
}

fn is_three_mod_four(p: &BigInt) -> bool {
    (p % 4u32).to_u32() == Some(3)
}

/// `n = r² + s²` for some integers `r, s`.
pub fn is_bisquare(n: &BigInt) -> Result<bool> {
    require_non_negative(n)?;
    if n.is_zero() {
        return Ok(true);
    }
    let f = factorize(n)?;
    Ok(f.factors()
        .iter()
        .all(|(p, e)| !is_three_mod_four(p) || e % 2 == 0))
}

/// `n = r² + s²` with `gcd(r, s) = 1`: no prime `3 (mod 4)` and `4 ∤ n`.
pub fn has_coprime_decomposition(n: &BigInt) -> Result<bool> {
    require_non_negative(n)?;
    if n.is_zero() {
        return Ok(false);
    }
    let f = factorize(n)?;
    Ok(f.factors().iter().all(|(p, e)| {
        if *p == BigInt::from(2) {
            *e == 1
        } else {
            !is_three_mod_four(p)
        }
    }))
}

const DIRECT_SEARCH_LIMIT: u64 = 10_000_000_000;

fn direct_decomposition(n: u64) -> Option<(u64, u64)> {
    (0..)
        .take_while(|r| 2 * r * r <= n)
        .find_map(|r| isqrt_exact(n - r * r).map(|s| (r, s)))
}

type Gaussian = (BigInt, BigInt);

fn gauss_mul(x: &Gaussian, y: &Gaussian) -> Gaussian {
    (&x.0 * &y.0 - &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}

fn gauss_pow(x: &Gaussian, e: u32) -> Gaussian {
    (0..e).fold((BigInt::one(), BigInt::zero()), |acc, _| gauss_mul(&acc, x))
}

/// `(r, s)` with `r² + s² = p` for a prime `p ≡ 1 (mod 4)` (Cornacchia).
fn prime_as_two_squares(p: &BigInt) -> Gaussian {
    let mut c = BigInt::from(2);
    while jacobi(&c, p) != -1 {
        c += 1;
    }
    let mut r0 = p.clone();
    let mut r1 = c.modpow(&((p - 1u32) >> 2u32), p);
    while &r1 * &r1 > *p {
        let next = &r0 % &r1;
        r0 = std::mem::replace(&mut r1, next);
    }
    let s = (p - &r1 * &r1).sqrt();
    (r1, s)
}

/// Every representation `r² + s² = n` with `0 ≤ r ≤ s`, built from the
/// Gaussian factorization; `None` when a prime `3 (mod 4)` has odd exponent.
fn all_decompositions(f: &Factorization) -> Option<BTreeSet<(BigInt, BigInt)>> {
    let mut base: Gaussian = (BigInt::one(), BigInt::zero());
    let mut choices: Vec<Vec<Gaussian>> = Vec::new();
    for (p, e) in f.factors() {
        if *p == BigInt::from(2) {
            base = gauss_mul(&base, &gauss_pow(&(BigInt::one(), BigInt::one()), *e));
        } else if is_three_mod_four(p) {
            if e % 2 == 1 {
                return None;
            }
            base = gauss_mul(&base, &(p.pow(e / 2), BigInt::zero()));
        } else {
            let pi = prime_as_two_squares(p);
            let conj = (pi.0.clone(), -pi.1.clone());
            choices.push(
                (0..=*e)
                    .map(|j| gauss_mul(&gauss_pow(&pi, j), &gauss_pow(&conj, e - j)))
                    .collect(),
            );
        }
    }
    let mut products = vec![base];
    for options in &choices {
        products = products
            .iter()
            .flat_map(|g| options.iter().map(move |o| gauss_mul(g, o)))
            .collect();
    }
    Some(
        products
            .into_iter()
            .map(|(r, s)| {
                let (r, s) = (r.abs(), s.abs());
                if r <= s {
                    (r, s)
                } else {
                    (s, r)
                }
            })
            .collect(),
    )
}

/// The decomposition `r² + s² = n` with `0 ≤ r ≤ s` and smallest `r`.
pub fn two_square_decomposition(n: &BigInt) -> Result<Option<(BigInt, BigInt)>> {
    require_non_negative(n)?;
    if let Some(small) = n.to_u64().filter(|&v| v <= DIRECT_SEARCH_LIMIT) {
        return Ok(direct_decomposition(small).map(|(r, s)| (BigInt::from(r), BigInt::from(s))));
    }
    let f = factorize(n)?;
    Ok(all_decompositions(&f).and_then(|set| set.into_iter().next()))
}

/// Every divisor of `n` is a bisquare; `n` must be `r² + s²` with `gcd(r, s) = 1`.
pub fn euler_divisor_check(n: &BigInt) -> Result<bool> {
    if n.sign() != Sign::Plus {
        return Err(Error::domain(format!("{n} is not positive")));
    }
    if !has_coprime_decomposition(n)? {
        return Err(Error::hypothesis(format!(
            "{n} has no decomposition r² + s² with gcd(r, s) = 1"
        )));
    }
    let divisors = factorize(n)?.divisors();
    for d in &divisors {
        if !is_bisquare(d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(u, v, t)` with `0 ≤ u, v ≤ bound` and `b u² + a u v - v² = t²`, sorted by `(u, v)`.
pub fn square_invariant_pairs(bound: u64, a: &BigInt, b: &BigInt) -> Vec<(BigInt, BigInt, BigInt)> {
    let mut out = Vec::new();
    for u in 0..=bound {
        for v in 0..=bound {
            let p = SequenceParams::new(u, v, a.clone(), b.clone());
            let d = invariant_quantity(&p);
            if d.sign() == Sign::Minus {
                continue;
            }
            let t = d.sqrt();
            if &t * &t == d {
                out.push((p.u, p.v, t));
            }
        }
    }
    out
}

/// `G_{2k} G_{2k+2} = G_{2k+1}² + t²` for `0 ≤ k ≤ k_max`.
pub fn check_even_product_bisquare(p: &SequenceParams, t: &BigInt, k_max: u64) -> bool {
    let g = g_iter_terms(p, 2 * k_max as usize + 3);
    (0..=k_max as usize).all(|k| &g[2 * k] * &g[2 * k + 2] == &g[2 * k + 1] * &g[2 * k + 1] + t * t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisquareWitness {
    pub n: u64,
    pub value: BigInt,
    pub decomposition: Option<(BigInt, BigInt)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisquableReport {
    pub parity: Parity,
    pub k_max: u64,
    pub terms: Vec<BisquareWitness>,
}

impl BisquableReport {
    pub fn holds(&self) -> bool {
        self.terms.iter().all(|w| w.decomposition.is_some())
    }

    pub fn first_failure(&self) -> Option<&BisquareWitness> {
        self.terms.iter().find(|w| w.decomposition.is_none())
    }
}

fn parity_indices(k_max: u64, parity: Parity) -> Vec<u64> {
    match parity {
        Parity::Even => (0..=k_max).map(|k| 2 * k).collect(),
        Parity::Odd => (1..=k_max).map(|k| 2 * k - 1).collect(),
    }
}

/// Decompose `G_{2k}` (`0 ≤ k ≤ k_max`) or `G_{2k-1}` (`1 ≤ k ≤ k_max`).
pub fn bisquable_terms(p: &SequenceParams, k_max: u64, parity: Parity) -> Result<BisquableReport> {
    let g = g_iter_terms(p, 2 * k_max as usize + 1);
    let mut terms = Vec::new();
    for n in parity_indices(k_max, parity) {
        let value = g[n as usize].clone();
        if value.sign() == Sign::Minus {
            return Err(Error::domain(format!("G_{n} = {value} is negative")));
        }
        let decomposition = two_square_decomposition(&value)?;
        terms.push(BisquareWitness {
            n,
            value,
            decomposition,
        });
    }
    Ok(BisquableReport {
        parity,
        k_max,
        terms,
    })
}

fn is_perfect_square(n: &BigInt) -> bool {
    n.sign() != Sign::Minus && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

/// Every term of the chosen parity up to `k_max` is a bisquare.
///
/// The determinant identity makes neighbouring products of that parity equal
/// a square plus `(-b)^n D`; the gate asks that this extra term be a square:
/// `D` for even indices, `-b D` for odd ones.
pub fn check_alternating_bisquable(p: &SequenceParams, k_max: u64, parity: Parity) -> Result<bool> {
    let d = invariant_quantity(p);
    let gate = match parity {
        Parity::Even => d.clone(),
        Parity::Odd => -&p.b * &d,
    };
    if !is_perfect_square(&gate) {
        return Err(Error::hypothesis(format!(
            "{gate} is not a perfect square (D = {d})"
        )));
    }
    Ok(bisquable_terms(p, k_max, parity)?.holds())
}
