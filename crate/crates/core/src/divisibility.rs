//! Coprimality lemmas for C-quences and divisibility-sequence scans.
//!
//! Divisibility follows the ring convention: `d | 0` for every `d`
//! (including `0`), and `0 | m` only for `m = 0`. Signs are irrelevant.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sequence::{f_fast, g_fast, g_iter_terms, is_cquence, SequenceParams};

pub fn divides(d: &BigInt, m: &BigInt) -> bool {
    if d.is_zero() {
        m.is_zero()
    } else {
        (m % d).is_zero()
    }
}

fn require_cquence(p: &SequenceParams) -> Result<()> {
    if is_cquence(p) {
        Ok(())
    } else {
        Err(Error::hypothesis(format!("{p} is not a C-quence")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No violation among indices up to the bound.
    Divisible,
    /// `n | m` but `G_n ∤ G_m`.
    Counterexample { n: u64, m: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibilityReport {
    pub params: SequenceParams,
    pub bound: u64,
    pub verdict: Verdict,
}

impl DivisibilityReport {
    pub fn is_divisible(&self) -> bool {
        self.verdict == Verdict::Divisible
    }

    pub fn witness(&self) -> Option<(u64, u64)> {
        match self.verdict {
            Verdict::Divisible => None,
            Verdict::Counterexample { n, m } => Some((n, m)),
        }
    }
}

/// `gcd(b, G_n) = 1` for `0 ≤ n ≤ n_max`.
pub fn check_b_coprime(p: &SequenceParams, n_max: u64) -> Result<bool> {
    require_cquence(p)?;
    let terms = g_iter_terms(p, n_max as usize + 1);
    Ok(terms.iter().all(|g| g.gcd(&p.b).is_one()))
}

/// `gcd(G_{n+1}, G_n) = 1` for `0 ≤ n ≤ n_max`.
pub fn check_consecutive_coprime(p: &SequenceParams, n_max: u64) -> Result<bool> {
    require_cquence(p)?;
    let terms = g_iter_terms(p, n_max as usize + 2);
    Ok(terms.windows(2).all(|w| w[0].gcd(&w[1]).is_one()))
}

/// `F_n | F_{nk}`.
pub fn check_f_divisible(a: &BigInt, b: &BigInt, n: u64, k: u64) -> bool {
    divides(&f_fast(a, b, n), &f_fast(a, b, n * k))
}

/// `gcd(F_m, F_n) = F_{gcd(m, n)}`; requires `b ≠ 0` and `gcd(a, b) = 1`.
pub fn gcd_identity_check(a: &BigInt, b: &BigInt, m: u64, n: u64) -> Result<bool> {
    if b.is_zero() || !a.gcd(b).is_one() {
        return Err(Error::hypothesis(format!(
            "gcd identity needs b ≠ 0 and gcd(a, b) = 1, got a={a}, b={b}"
        )));
    }
    let lhs = f_fast(a, b, m).gcd(&f_fast(a, b, n));
    let rhs = f_fast(a, b, m.gcd(&n));
    // gcd is non-negative; F_d may be negative when a < 0.
    Ok(lhs == rhs.abs())
}

/// Examine every `1 ≤ n ≤ m ≤ bound` with `n | m`, smallest `m` first.
pub fn check_divisible_sequence(p: &SequenceParams, bound: u64) -> DivisibilityReport {
    let terms = g_iter_terms(p, bound as usize + 1);
    let verdict = (1..=bound)
        .flat_map(|m| (1..=m).filter(move |n| m % n == 0).map(move |n| (n, m)))
        .find(|&(n, m)| !divides(&terms[n as usize], &terms[m as usize]))
        .map_or(Verdict::Divisible, |(n, m)| Verdict::Counterexample {
            n,
            m,
        });
    DivisibilityReport {
        params: p.clone(),
        bound,
        verdict,
    }
}

/// `G_m | F_m`, the criterion for a C-quence to be a divisibility sequence.
pub fn check_gm_divides_fm(p: &SequenceParams, m: u64) -> Result<bool> {
    require_cquence(p)?;
    Ok(divides(&g_fast(p, m), &f_fast(&p.a, &p.b, m)))
}

/// `gcd(G_m, F_{mq-1}) = 1` for a divisible C-quence.
pub fn check_ccop(p: &SequenceParams, m: u64, q: u64) -> Result<bool> {
    require_cquence(p)?;
    if m == 0 || q == 0 {
        return Err(Error::domain("m and q must be positive"));
    }
    let report = check_divisible_sequence(p, m * q);
    if let Some((n, k)) = report.witness() {
        return Err(Error::hypothesis(format!(
            "{p} is not divisible up to {}: G_{n} ∤ G_{k}",
            m * q
        )));
    }
    Ok(g_fast(p, m).gcd(&f_fast(&p.a, &p.b, m * q - 1)).is_one())
}

/// Candidates for the divisibility scan.
///
/// With `b ≠ 0` the C-quence conditions apply. With `b = 0` they are not
/// imposed and the seed criterion `u | v` decides membership alongside the
/// index scan; for `n ≥ 1` such a sequence is `v a^{n-1}` and passes the
/// index scan on its own.
fn scan_survives(p: &SequenceParams, bound: u64) -> Option<DivisibilityReport> {
    if p.b.is_zero() {
        if !divides(&p.u, &p.v) {
            return None;
        }
    } else if !is_cquence(p) {
        return None;
    }
    let report = check_divisible_sequence(p, bound);
    report.is_divisible().then_some(report)
}

/// Enumerate the grid and keep the divisible candidates, sorted by `(u, v, a, b)`.
pub fn scan_divisible(
    u_range: RangeInclusive<i64>,
    v_range: RangeInclusive<i64>,
    a_range: RangeInclusive<i64>,
    b_range: RangeInclusive<i64>,
    bound: u64,
) -> Vec<(SequenceParams, DivisibilityReport)> {
    let mut grid = Vec::new();
    for u in u_range {
        for v in v_range.clone() {
            for a in a_range.clone() {
                for b in b_range.clone() {
                    grid.push(SequenceParams::new(u, v, a, b));
                }
            }
        }
    }
    let mut out: Vec<_> = grid
        .into_par_iter()
        .filter_map(|p| scan_survives(&p, bound).map(|r| (p, r)))
        .collect();
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(u: i64, v: i64, a: i64, b: i64) -> SequenceParams {
        SequenceParams::new(u, v, a, b)
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn divisibility_convention() {
        assert!(divides(&big(0), &big(0)));
        assert!(divides(&big(5), &big(0)));
        assert!(!divides(&big(0), &big(5)));
        assert!(divides(&big(-3), &big(12)));
        assert!(divides(&big(3), &big(-12)));
    }

    #[test]
    fn coprime_lemmas() {
        // gcd(u, b) = gcd(0, 2) = 2, so (0, 1 | 1, 2) is outside the hypothesis;
        // the conclusion would fail anyway at n = 0 since gcd(2, F_0) = 2.
        assert!(matches!(
            check_b_coprime(&p(0, 1, 1, 2), 50),
            Err(Error::HypothesisViolation(_))
        ));
        assert_eq!(check_b_coprime(&p(0, 1, 1, 1), 50), Ok(true));
        assert_eq!(check_b_coprime(&p(1, 3, 1, 2), 50), Ok(true));
        assert_eq!(check_consecutive_coprime(&p(0, 1, 1, 1), 60), Ok(true));
        assert_eq!(check_consecutive_coprime(&p(0, 1, 3, 1), 1), Ok(true));
        assert_eq!(check_consecutive_coprime(&p(0, 1, -5, -1), 1), Ok(true));
        assert_eq!(check_consecutive_coprime(&p(2, 3, 1, 1), 40), Ok(true));
        assert!(matches!(
            check_b_coprime(&p(2, 4, 1, 1), 5),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(check_consecutive_coprime(&p(0, 1, 1, 0), 5).is_err());
    }

    #[test]
    fn coprime_lemmas_on_grid() {
        for u in -4..=4 {
            for v in -4..=4 {
                for a in 1..=4 {
                    for b in 1..=4 {
                        let q = p(u, v, a, b);
                        if q.is_cquence() {
                            assert_eq!(check_b_coprime(&q, 60), Ok(true), "{q}");
                            assert_eq!(check_consecutive_coprime(&q, 60), Ok(true), "{q}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn f_divisibility() {
        assert!(check_f_divisible(&big(1), &big(1), 6, 2));
        assert!(check_f_divisible(&big(4), &big(-7), 1, 9));
        assert!(check_f_divisible(&big(2), &big(1), 3, 3));
        assert_eq!(f_fast(&big(2), &big(1), 9), big(985));
        // F_0 = 0 divides only F_0 = 0.
        assert!(check_f_divisible(&big(1), &big(1), 0, 3));
    }

    #[test]
    fn gcd_identity() {
        assert_eq!(gcd_identity_check(&big(1), &big(1), 12, 18), Ok(true));
        assert_eq!(
            f_fast(&big(1), &big(1), 12).gcd(&f_fast(&big(1), &big(1), 18)),
            big(8)
        );
        assert_eq!(gcd_identity_check(&big(3), &big(2), 7, 7), Ok(true));
        assert_eq!(gcd_identity_check(&big(2), &big(1), 10, 15), Ok(true));
        assert_eq!(f_fast(&big(2), &big(1), 5), big(29));
        assert!(gcd_identity_check(&big(2), &big(4), 3, 6).is_err());
        assert!(gcd_identity_check(&big(2), &big(0), 3, 6).is_err());
        // Negative a is fine once signs are normalized.
        for m in 1..20 {
            for n in 1..20 {
                assert_eq!(gcd_identity_check(&big(-3), &big(2), m, n), Ok(true));
            }
        }
    }

    #[test]
    fn divisible_sequence_reports() {
        let r = check_divisible_sequence(&p(0, 1, 1, 1), 30);
        assert_eq!(r.verdict, Verdict::Divisible);
        let r = check_divisible_sequence(&p(1, 2, 1, 1), 30);
        let (n, m) = r.witness().expect("Lucas-like sequence is not divisible");
        let terms = g_iter_terms(&p(1, 2, 1, 1), 31);
        assert_eq!(m % n, 0);
        assert!(!divides(&terms[n as usize], &terms[m as usize]));
        // G = 1, 2, 3, 5, 8: index pair (2, 4) also fails, 3 ∤ 8.
        assert!(!divides(&terms[2], &terms[4]));
        assert!(check_divisible_sequence(&p(3, 6, 5, 0), 30).is_divisible());
    }

    #[test]
    fn gm_divides_fm() {
        assert_eq!(check_gm_divides_fm(&p(0, 1, 1, 1), 7), Ok(true));
        assert_eq!(check_gm_divides_fm(&p(1, 1, 1, 1), 1), Ok(true));
        assert_eq!(check_gm_divides_fm(&p(1, 1, 1, 1), 4), Ok(false));
        assert!(check_gm_divides_fm(&p(2, 4, 1, 1), 4).is_err());
    }

    #[test]
    fn gm_divides_fm_matches_divisibility() {
        for u in -3..=3 {
            for v in -3..=3 {
                for a in 1..=3 {
                    for b in 1..=3 {
                        let q = p(u, v, a, b);
                        if !q.is_cquence() {
                            continue;
                        }
                        let divisible = check_divisible_sequence(&q, 30).is_divisible();
                        let criterion = (1..=30).all(|m| check_gm_divides_fm(&q, m).unwrap());
                        assert_eq!(divisible, criterion, "{q}");
                    }
                }
            }
        }
    }

    #[test]
    fn ccop() {
        assert_eq!(check_ccop(&p(0, 1, 1, 1), 5, 2), Ok(true));
        assert_eq!(check_ccop(&p(0, 1, 1, 1), 1, 1), Ok(true));
        assert_eq!(check_ccop(&p(0, 1, 2, 1), 4, 2), Ok(true));
        assert!(matches!(
            check_ccop(&p(1, 2, 1, 1), 2, 2),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn scan_examples() {
        let survivors = scan_divisible(0..=3, 1..=3, 1..=2, 1..=2, 24);
        assert!(!survivors.is_empty());
        assert!(survivors.iter().all(|(q, _)| q.u.is_zero() && q.v.is_one()));

        let single = scan_divisible(0..=0, 1..=1, 1..=1, 1..=1, 24);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].0, p(0, 1, 1, 1));

        let b_zero: Vec<_> = scan_divisible(1..=2, 2..=4, 1..=1, 0..=0, 24)
            .into_iter()
            .map(|(q, _)| (q.u, q.v))
            .collect();
        let expected: Vec<_> = [(1, 2), (1, 3), (1, 4), (2, 2), (2, 4)]
            .into_iter()
            .map(|(u, v)| (big(u), big(v)))
            .collect();
        assert_eq!(b_zero, expected);
    }

    #[test]
    fn scan_is_sorted() {
        let out = scan_divisible(-2..=2, -2..=2, -2..=2, -2..=2, 12);
        assert!(out.windows(2).all(|w| w[0].0 < w[1].0));
    }
}
