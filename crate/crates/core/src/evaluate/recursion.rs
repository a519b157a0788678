//! Closed recurrences for the line and the cross chain.
//!
//! Both run over traces only: after slot retirement the live boundary of a
//! line is spanned by two words, so the sweep collapses to a pair `(P, Q)` of
//! scalars updated once per qubit.

use num_complex::Complex;

use super::{Counters, EvalError, EvalReport};
use crate::factorize::ProjectionSpec;
use crate::scalar::{inv_sqrt_pow2, Scalar};

/// The pair of traces carried between stages.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecursionState<T> {
    pub tr_p: Complex<T>,
    pub tr_q: Complex<T>,
    pub stage: usize,
}

/// Line of `n = spec.len() ≥ 3` qubits.
///
/// With 0-based coefficients: `P = C₁(C₀+S₀)`, `Q = S₁(C₀−S₀)`, then
/// `P' = C_k(P+Q)`, `Q' = S_k(P−Q)` for `k = 2..n−2`, and finally
/// `2^{-n/2}[(C_{n−1}+S_{n−1})P + (C_{n−1}−S_{n−1})Q]`.
pub fn line_recursion<T: Scalar>(spec: &ProjectionSpec<T>) -> Result<EvalReport<T>, EvalError> {
    let n = spec.len();
    if n < 3 {
        return Err(EvalError::TooSmall {
            what: "line recursion",
            min: 3,
            got: n,
        });
    }
    let mut ops = Counters::default();
    let mut state = line_head(spec, &mut ops);
    while state.stage < n - 2 {
        state = line_step(state, spec, &mut ops);
    }
    let (c, s) = spec.coeffs(n - 1);
    let value = (c + s) * state.tr_p + (c - s) * state.tr_q;
    ops.add += 3;
    ops.mul += 3;
    Ok(EvalReport {
        amplitude: value * inv_sqrt_pow2::<T>(n),
        max_live_terms: 2,
        add_count: ops.add,
        mul_count: ops.mul,
    })
}

fn line_head<T: Scalar>(spec: &ProjectionSpec<T>, ops: &mut Counters) -> RecursionState<T> {
    let (c0, s0) = spec.coeffs(0);
    let (c1, s1) = spec.coeffs(1);
    ops.add += 2;
    ops.mul += 2;
    RecursionState {
        tr_p: c1 * (c0 + s0),
        tr_q: s1 * (c0 - s0),
        stage: 1,
    }
}

fn line_step<T: Scalar>(
    prev: RecursionState<T>,
    spec: &ProjectionSpec<T>,
    ops: &mut Counters,
) -> RecursionState<T> {
    let k = prev.stage + 1;
    let (c, s) = spec.coeffs(k);
    ops.add += 2;
    ops.mul += 2;
    RecursionState {
        tr_p: c * (prev.tr_p + prev.tr_q),
        tr_q: s * (prev.tr_p - prev.tr_q),
        stage: k,
    }
}

/// Chain of `k ≥ 1` crosses, indexed as `build_cross_chain(k)`: top corners
/// `0..=k`, bottom corners `k+1..=2k+1`, centers `2k+2..`.
///
/// Corner pair `c` (top and bottom of column `c`) is merged into
/// `C̃ = C_t C_b + S_t S_b`, `S̃ = C_t S_b + S_t C_b`; center `j` enters
/// as `T^± = C' ± S'`. The recurrence
/// `p' = C̃_c(p T⁺ + q T⁻)`, `q' = S̃_c(p T⁻ + q T⁺)` walks pairs
/// `1..k−1` with the center to their left, and the last pair closes against
/// the last center.
pub fn cross_chain_recursion<T: Scalar>(
    spec: &ProjectionSpec<T>,
    k: usize,
) -> Result<EvalReport<T>, EvalError> {
    if k < 1 {
        return Err(EvalError::TooSmall {
            what: "cross chain",
            min: 1,
            got: k,
        });
    }
    let n = 3 * k + 2;
    if spec.len() != n {
        return Err(EvalError::SizeMismatch {
            spec: spec.len(),
            expected: n,
        });
    }
    let mut ops = Counters::default();
    let pair = |c: usize, ops: &mut Counters| {
        let (ct, st) = spec.coeffs(c);
        let (cb, sb) = spec.coeffs(k + 1 + c);
        ops.add += 2;
        ops.mul += 4;
        (ct * cb + st * sb, ct * sb + st * cb)
    };
    let center = |j: usize, ops: &mut Counters| {
        let (c, s) = spec.coeffs(2 * k + 2 + j);
        ops.add += 2;
        (c + s, c - s)
    };
    let (mut p, mut q) = pair(0, &mut ops);
    for c in 1..k {
        let (ct, st) = pair(c, &mut ops);
        let (tp, tm) = center(c - 1, &mut ops);
        let np = ct * (p * tp + q * tm);
        let nq = st * (p * tm + q * tp);
        ops.add += 2;
        ops.mul += 6;
        p = np;
        q = nq;
    }
    let (ct, st) = pair(k, &mut ops);
    let (tp, tm) = center(k - 1, &mut ops);
    let value = (ct * p + st * q) * tp + (ct * q + st * p) * tm;
    ops.add += 3;
    ops.mul += 7;
    Ok(EvalReport {
        amplitude: value * inv_sqrt_pow2::<T>(n),
        max_live_terms: 2,
        add_count: ops.add,
        mul_count: ops.mul,
    })
}
