//! The addition formula and the determinant (Cassini-type) identity.
//!
//! Single-instance checks evaluate both sides with [`g_fast`]; the `scan_*`
//! functions tabulate the sequence once and sweep a whole index grid.

use num_bigint::BigInt;
use num_traits::{pow, Zero};

use crate::sequence::{g_fast, g_iter_terms, SequenceParams};

/// Both evaluated sides of an identity instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentitySides {
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl IdentitySides {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Which constant multiplies `(-b)^n` on the right of the determinant identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantForm {
    /// `D = b u² + a u v - v²`, equal to `G_0 G_2 - G_1²` for every `(a, b)`.
    General,
    /// `u² + uv - v²`; agrees with `General` only when `a = b = 1`.
    Literal,
}

/// `D = b u² + a u v - v²`.
pub fn invariant_quantity(p: &SequenceParams) -> BigInt {
    &p.b * &p.u * &p.u + &p.a * &p.u * &p.v - &p.v * &p.v
}

/// `u² + uv - v²`.
pub fn literal_invariant(p: &SequenceParams) -> BigInt {
    &p.u * &p.u + &p.u * &p.v - &p.v * &p.v
}

fn invariant(p: &SequenceParams, form: InvariantForm) -> BigInt {
    match form {
        InvariantForm::General => invariant_quantity(p),
        InvariantForm::Literal => literal_invariant(p),
    }
}

fn signed_b_power(b: &BigInt, n: u64) -> BigInt {
    pow(-b.clone(), usize::try_from(n).expect("index fits in usize"))
}

/// `G_{m+n+1}` against `G_{m+1} F_{n+1} + b G_m F_n`.
pub fn addition_sides(p: &SequenceParams, m: u64, n: u64) -> IdentitySides {
    let f = p.companion();
    IdentitySides {
        lhs: g_fast(p, m + n + 1),
        rhs: g_fast(p, m + 1) * g_fast(&f, n + 1) + &p.b * g_fast(p, m) * g_fast(&f, n),
    }
}

pub fn check_addition(p: &SequenceParams, m: u64, n: u64) -> bool {
    addition_sides(p, m, n).holds()
}

/// `G_n G_{n+2} - G_{n+1}²` against `(-b)^n` times the chosen constant.
pub fn determinant_sides(p: &SequenceParams, n: u64, form: InvariantForm) -> IdentitySides {
    let g0 = g_fast(p, n);
    let g1 = g_fast(p, n + 1);
    let g2 = g_fast(p, n + 2);
    IdentitySides {
        lhs: g0 * g2 - &g1 * &g1,
        rhs: signed_b_power(&p.b, n) * invariant(p, form),
    }
}

pub fn check_determinant(p: &SequenceParams, n: u64) -> bool {
    determinant_sides(p, n, InvariantForm::General).holds()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditionViolation {
    pub m: u64,
    pub n: u64,
    pub sides: IdentitySides,
}

/// Every `(m, n)` in `[0, max_m] × [0, max_n]` where the addition formula fails.
pub fn scan_addition(p: &SequenceParams, max_m: u64, max_n: u64) -> Vec<AdditionViolation> {
    let g = g_iter_terms(p, (max_m + max_n + 2) as usize);
    let f = g_iter_terms(&p.companion(), (max_n + 2) as usize);
    let mut out = Vec::new();
    for m in 0..=max_m as usize {
        let g_m_b = &g[m] * &p.b;
        for n in 0..=max_n as usize {
            let rhs = &g[m + 1] * &f[n + 1] + &g_m_b * &f[n];
            if g[m + n + 1] != rhs {
                out.push(AdditionViolation {
                    m: m as u64,
                    n: n as u64,
                    sides: IdentitySides {
                        lhs: g[m + n + 1].clone(),
                        rhs,
                    },
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminantViolation {
    pub n: u64,
    pub sides: IdentitySides,
}

/// Every `n` in `[0, max_n]` where the determinant identity fails for `form`.
pub fn scan_determinant(
    p: &SequenceParams,
    max_n: u64,
    form: InvariantForm,
) -> Vec<DeterminantViolation> {
    let g = g_iter_terms(p, (max_n + 3) as usize);
    let constant = invariant(p, form);
    let minus_b = -p.b.clone();
    let mut scale = BigInt::from(1);
    let mut out = Vec::new();
    for n in 0..=max_n as usize {
        let lhs = &g[n] * &g[n + 2] - &g[n + 1] * &g[n + 1];
        let rhs = &scale * &constant;
        if lhs != rhs {
            out.push(DeterminantViolation {
                n: n as u64,
                sides: IdentitySides { lhs, rhs },
            });
        }
        scale *= &minus_b;
    }
    out
}

/// True iff `u² + uv - v²` and `D` coincide for these parameters.
pub fn literal_form_applies(p: &SequenceParams) -> bool {
    (invariant_quantity(p) - literal_invariant(p)).is_zero()
}
