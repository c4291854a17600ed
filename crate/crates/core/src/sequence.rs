//! Sequence parameters and exact evaluation of `G_n` and `F_n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// The quadruple `(u, v | a, b)`: seeds `G_0 = u`, `G_1 = v` and the
/// recurrence `G_n = a G_{n-1} + b G_{n-2}`.
///
/// Any integers are accepted. Checkers that depend on a theorem's
/// hypotheses test them on their own.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequenceParams {
    pub u: BigInt,
    pub v: BigInt,
    pub a: BigInt,
    pub b: BigInt,
}

impl SequenceParams {
    pub fn new(
        u: impl Into<BigInt>,
        v: impl Into<BigInt>,
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
    ) -> Self {
        SequenceParams {
            u: u.into(),
            v: v.into(),
            a: a.into(),
            b: b.into(),
        }
    }

    /// The sequence `F` with seeds `(0, 1)` sharing this recurrence.
    pub fn fibonacci(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        SequenceParams::new(0, 1, a, b)
    }

    /// The `F` companion of `self`.
    pub fn companion(&self) -> Self {
        SequenceParams::fibonacci(self.a.clone(), self.b.clone())
    }

    pub fn is_cquence(&self) -> bool {
        is_cquence(self)
    }
}

impl fmt::Display for SequenceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {} | {}, {})", self.u, self.v, self.a, self.b)
    }
}

/// A consecutive pair `(G_n, G_{n+1})` tagged with its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairState {
    pub index: u64,
    pub lo: BigInt,
    pub hi: BigInt,
}

impl PairState {
    pub fn seed(p: &SequenceParams) -> Self {
        PairState {
            index: 0,
            lo: p.u.clone(),
            hi: p.v.clone(),
        }
    }

    /// `(G_n, G_{n+1}) -> (G_{n+1}, a G_{n+1} + b G_n)`.
    pub fn advance(&mut self, p: &SequenceParams) {
        let next = &p.a * &self.hi + &p.b * &self.lo;
        self.lo = std::mem::replace(&mut self.hi, next);
        self.index += 1;
    }
}

/// True iff `b ≠ 0` and `gcd(u,v) = gcd(u,b) = gcd(a,b) = gcd(b,v) = 1`.
pub fn is_cquence(p: &SequenceParams) -> bool {
    if p.b.is_zero() {
        return false;
    }
    [(&p.u, &p.v), (&p.u, &p.b), (&p.a, &p.b), (&p.b, &p.v)]
        .into_iter()
        .all(|(x, y)| x.gcd(y).is_one())
}

/// `G_n` by direct recurrence.
pub fn g_iter(p: &SequenceParams, n: u64) -> BigInt {
    let mut state = PairState::seed(p);
    while state.index < n {
        state.advance(p);
    }
    state.lo
}

/// The first `len` terms `G_0, .., G_{len-1}`.
pub fn g_iter_terms(p: &SequenceParams, len: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(len);
    let mut state = PairState::seed(p);
    for _ in 0..len {
        out.push(state.lo.clone());
        state.advance(p);
    }
    out
}

/// `(F_n, F_{n+1})` by fast doubling.
///
/// From the addition formula with `G = F`:
/// `F_{2k+1} = F_{k+1}^2 + b F_k^2` and, using `b F_{k-1} = F_{k+1} - a F_k`,
/// `F_{2k} = F_k (2 F_{k+1} - a F_k)`.
pub fn f_pair_fast(a: &BigInt, b: &BigInt, n: u64) -> (BigInt, BigInt) {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::one();
    if n == 0 {
        return (lo, hi);
    }
    for bit in (0..64 - n.leading_zeros()).rev() {
        let even = &lo * ((&hi << 1u32) - a * &lo);
        let odd = &hi * &hi + b * &lo * &lo;
        if (n >> bit) & 1 == 1 {
            hi = a * &odd + b * &even;
            lo = odd;
        } else {
            lo = even;
            hi = odd;
        }
    }
    (lo, hi)
}

/// `F_n` for the recurrence `(a, b)`.
pub fn f_fast(a: &BigInt, b: &BigInt, n: u64) -> BigInt {
    f_pair_fast(a, b, n).0
}

/// `(G_n, G_{n+1})` in `O(log n)` doubling steps.
pub fn g_pair_fast(p: &SequenceParams, n: u64) -> PairState {
    let (f_n, f_next) = f_pair_fast(&p.a, &p.b, n);
    // G_n = v F_n + b u F_{n-1}, with b F_{n-1} = F_{n+1} - a F_n.
    let b_f_prev = &f_next - &p.a * &f_n;
    let lo = &p.v * &f_n + &p.u * b_f_prev;
    let hi = &p.v * &f_next + &p.u * &p.b * &f_n;
    PairState { index: n, lo, hi }
}

/// `G_n` in `O(log n)` big-integer operations.
pub fn g_fast(p: &SequenceParams, n: u64) -> BigInt {
    g_pair_fast(p, n).lo
}

type Mat2 = [[BigInt; 2]; 2];

fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [
            &x[0][0] * &y[0][0] + &x[0][1] * &y[1][0],
            &x[0][0] * &y[0][1] + &x[0][1] * &y[1][1],
        ],
        [
            &x[1][0] * &y[0][0] + &x[1][1] * &y[1][0],
            &x[1][0] * &y[0][1] + &x[1][1] * &y[1][1],
        ],
    ]
}

/// `G_n` by binary powering of the companion matrix `[[a, b], [1, 0]]`:
/// `(G_{n+1}, G_n)^T = M^n (v, u)^T`.
pub fn g_matrix(p: &SequenceParams, n: u64) -> BigInt {
    let mut acc: Mat2 = [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ];
    let mut base: Mat2 = [[p.a.clone(), p.b.clone()], [BigInt::one(), BigInt::zero()]];
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    &acc[1][0] * &p.v + &acc[1][1] * &p.u
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn cquence_examples() {
        assert!(SequenceParams::new(0, 1, 1, 1).is_cquence());
        assert!(!SequenceParams::new(2, 4, 1, 1).is_cquence());
        assert!(!SequenceParams::new(1, 1, 2, 4).is_cquence());
        assert!(!SequenceParams::new(0, 1, 1, 0).is_cquence());
        // gcd(0, x) = |x|
        assert!(SequenceParams::new(0, -1, 3, -1).is_cquence());
        assert!(!SequenceParams::new(0, 2, 1, 1).is_cquence());
    }

    #[test]
    fn iterated_values() {
        assert_eq!(g_iter(&SequenceParams::new(0, 1, 1, 1), 10), big(55));
        assert_eq!(g_iter(&SequenceParams::new(0, 1, 2, 1), 5), big(29));
        let p = SequenceParams::new(-4, 9, 3, -2);
        assert_eq!(g_iter(&p, 0), big(-4));
        assert_eq!(g_iter(&p, 1), big(9));
        assert_eq!(
            g_iter_terms(&SequenceParams::new(0, 1, 2, 1), 10),
            [0, 1, 2, 5, 12, 29, 70, 169, 408, 985].map(big)
        );
    }

    #[test]
    fn fast_values() {
        assert_eq!(
            g_fast(&SequenceParams::new(0, 1, 1, 1), 50),
            big(12_586_269_025)
        );
        assert_eq!(g_fast(&SequenceParams::new(3, 7, 1, 1), 1), big(7));
        let p = SequenceParams::new(2, 1, 3, 5);
        assert_eq!(g_fast(&p, 6), g_iter(&p, 6));
        assert_eq!(f_fast(&big(1), &big(1), 12), big(144));
        assert_eq!(f_fast(&big(7), &big(-3), 0), big(0));
        assert_eq!(f_fast(&big(1), &big(1), 2), big(1));
    }

    #[test]
    fn zero_coefficients() {
        for (a, b) in [(0, 0), (0, 3), (4, 0), (0, -2)] {
            let p = SequenceParams::new(5, -2, a, b);
            for n in 0..20 {
                assert_eq!(g_fast(&p, n), g_iter(&p, n), "{p} n={n}");
                assert_eq!(g_matrix(&p, n), g_iter(&p, n), "{p} n={n}");
            }
        }
    }

    #[test]
    fn pair_state_matches_fast_pair() {
        let p = SequenceParams::new(3, -1, 2, 7);
        let mut state = PairState::seed(&p);
        for _ in 0..40 {
            assert_eq!(g_pair_fast(&p, state.index), state);
            state.advance(&p);
        }
    }

    #[test]
    fn strictly_increasing_from_two() {
        for a in 1..=4 {
            for b in 1..=4 {
                let terms = g_iter_terms(&SequenceParams::fibonacci(a, b), 60);
                assert!(terms[2..].windows(2).all(|w| w[0] < w[1]), "a={a} b={b}");
            }
        }
    }

    proptest! {
        #[test]
        fn fast_and_matrix_match_iteration(
            u in -10i64..=10, v in -10i64..=10, a in -10i64..=10, b in -10i64..=10,
            n in 0u64..=200,
        ) {
            let p = SequenceParams::new(u, v, a, b);
            let expected = g_iter(&p, n);
            prop_assert_eq!(g_fast(&p, n), expected.clone());
            prop_assert_eq!(g_matrix(&p, n), expected);
        }

        #[test]
        fn recurrence_closure(
            u in -10i64..=10, v in -10i64..=10, a in -10i64..=10, b in -10i64..=10,
            n in 0u64..=150,
        ) {
            let p = SequenceParams::new(u, v, a, b);
            let g = |k| g_fast(&p, k);
            prop_assert_eq!(g(n + 2), &p.a * g(n + 1) + &p.b * g(n));
        }

        #[test]
        fn seed_decomposition(
            u in -10i64..=10, v in -10i64..=10, a in -10i64..=10, b in -10i64..=10,
            n in 1u64..=150,
        ) {
            let p = SequenceParams::new(u, v, a, b);
            let rhs = &p.v * f_fast(&p.a, &p.b, n) + &p.b * &p.u * f_fast(&p.a, &p.b, n - 1);
            prop_assert_eq!(g_fast(&p, n), rhs);
        }
    }
}
