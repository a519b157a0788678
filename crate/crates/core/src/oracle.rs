//! Brute-force references for the projection amplitude.
//!
//! Basis index bit `n−1−q` holds qubit `q`, so qubit 0 is the most
//! significant bit. The projection bra `⊗(C_p⟨0| + S_p⟨1|)` is applied as
//! written, without conjugating `C_p` or `S_p`; this is not the Hermitian
//! inner product with the ket `C_p|0⟩ + S_p|1⟩`.

use num_complex::Complex;
use thiserror::Error;

use crate::factorize::ProjectionSpec;
use crate::graph::{Bipartition, ClusterGraph, Qubit};
use crate::scalar::{cone, creal, czero, inv_sqrt_pow2, Scalar};

/// Environment variable overriding [`DEFAULT_STATEVEC_CAP`] (a qubit count).
pub const STATEVEC_CAP_ENV: &str = "LATTICEPROJ_STATEVEC_CAP";
/// Largest qubit count accepted by [`build_statevector`] by default.
pub const DEFAULT_STATEVEC_CAP: usize = 20;
/// Largest control count accepted by [`direct_sum`].
pub const MAX_DIRECT_SUM_CONTROLS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n} qubits exceed the state-vector cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("state has {state} qubits, projection has {spec}")]
    SizeMismatch { state: usize, spec: usize },
    #[error("edge ({0}, {1}) joins two qubits of the same class")]
    NotBipartite(Qubit, Qubit),
    #[error("{controls} controls exceed the direct-sum limit of {max}")]
    TooManyControls { controls: usize, max: usize },
}

/// The cap from [`STATEVEC_CAP_ENV`], falling back to the default when unset
/// or unparsable.
pub fn statevector_cap() -> usize {
    std::env::var(STATEVEC_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_STATEVEC_CAP)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex<T>>) -> Self {
        assert_eq!(amplitudes.len(), 1 << n, "length must be 2^n");
        StateVector { n, amplitudes }
    }

    /// `|+⟩^{⊗n}`.
    pub fn uniform(n: usize) -> Self {
        StateVector {
            n,
            amplitudes: vec![creal(inv_sqrt_pow2::<T>(n)); 1 << n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Negates every amplitude with qubits `a` and `b` both 1.
    pub fn apply_cz(&mut self, a: Qubit, b: Qubit) {
        let mask = (1usize << (self.n - 1 - a)) | (1usize << (self.n - 1 - b));
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }
}

pub fn build_statevector<T: Scalar>(g: &ClusterGraph) -> Result<StateVector<T>, OracleError> {
    build_statevector_with_cap(g, statevector_cap())
}

pub fn build_statevector_with_cap<T: Scalar>(
    g: &ClusterGraph,
    cap: usize,
) -> Result<StateVector<T>, OracleError> {
    if g.n() > cap {
        return Err(OracleError::TooLarge { n: g.n(), cap });
    }
    let mut sv = StateVector::uniform(g.n());
    for &(a, b) in g.edges() {
        sv.apply_cz(a, b);
    }
    Ok(sv)
}

/// `⊗(C_p⟨0| + S_p⟨1|) · sv`, contracting the least significant qubit first.
pub fn project_statevector<T: Scalar>(
    sv: &StateVector<T>,
    spec: &ProjectionSpec<T>,
) -> Result<Complex<T>, OracleError> {
    if spec.len() != sv.n() {
        return Err(OracleError::SizeMismatch {
            state: sv.n(),
            spec: spec.len(),
        });
    }
    let mut v = sv.amplitudes().to_vec();
    for q in (0..sv.n()).rev() {
        let (c, s) = spec.coeffs(q);
        let half = v.len() / 2;
        for i in 0..half {
            v[i] = c * v[2 * i] + s * v[2 * i + 1];
        }
        v.truncate(half);
    }
    Ok(v[0])
}

/// Sum over control bitstrings `j`:
/// `2^{-N/2} Σ_j ∏_s [(1−j_s)C_s + j_s S_s] · ∏_t [C_t + (−1)^{α_t} S_t]`
/// where `α_t` is the parity of set controls adjacent to target `t`.
pub fn direct_sum<T: Scalar>(
    g: &ClusterGraph,
    b: &Bipartition,
    spec: &ProjectionSpec<T>,
) -> Result<Complex<T>, OracleError> {
    if spec.len() != g.n() {
        return Err(OracleError::SizeMismatch {
            state: g.n(),
            spec: spec.len(),
        });
    }
    let k = b.controls.len();
    if k > MAX_DIRECT_SUM_CONTROLS {
        return Err(OracleError::TooManyControls {
            controls: k,
            max: MAX_DIRECT_SUM_CONTROLS,
        });
    }
    let mut control_bit = vec![None; g.n()];
    for (i, &c) in b.controls.iter().enumerate() {
        control_bit[c] = Some(i);
    }
    let mut target_masks = Vec::with_capacity(b.targets.len());
    for &t in &b.targets {
        let mut mask = 0u64;
        for &nb in g.neighbors(t) {
            match control_bit[nb] {
                Some(i) => mask |= 1 << i,
                None => return Err(OracleError::NotBipartite(t.min(nb), t.max(nb))),
            }
        }
        target_masks.push(mask);
    }
    let control_coeffs: Vec<_> = b.controls.iter().map(|&c| spec.coeffs(c)).collect();
    let target_coeffs: Vec<_> = b
        .targets
        .iter()
        .map(|&t| {
            let (c, s) = spec.coeffs(t);
            (c + s, c - s)
        })
        .collect();
    let mut total = czero::<T>();
    for j in 0u64..(1u64 << k) {
        let mut term = cone::<T>();
        for (i, &(c, s)) in control_coeffs.iter().enumerate() {
            term *= if j >> i & 1 == 1 { s } else { c };
        }
        for (&mask, &(plus, minus)) in target_masks.iter().zip(&target_coeffs) {
            term *= if (j & mask).count_ones() % 2 == 0 {
                plus
            } else {
                minus
            };
        }
        total += term;
    }
    Ok(total * inv_sqrt_pow2::<T>(g.n()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bipartition, build_cross_chain, build_from_edges, build_line};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn bell_state() {
        let sv: StateVector<f64> = build_statevector(&build_line(2).unwrap()).unwrap();
        let want = [0.5, 0.5, 0.5, -0.5];
        for (a, w) in sv.amplitudes().iter().zip(want) {
            assert!((a - Complex::new(w, 0.0)).norm() < 1e-15);
        }
        let one: StateVector<f64> = build_statevector(&build_line(1).unwrap()).unwrap();
        for a in one.amplitudes() {
            assert!((a.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn ghz_cross_state() {
        // (|0⟩|+⟩⁴ + |1⟩|−⟩⁴)/√2 with the center as qubit 4 (least significant).
        let sv: StateVector<f64> = build_statevector(&build_cross_chain(1).unwrap()).unwrap();
        for (i, a) in sv.amplitudes().iter().enumerate() {
            let center = i & 1;
            let leaves_ones = (i >> 1).count_ones();
            let sign = if center == 1 && leaves_ones % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            assert!((a.re - sign * 2f64.powf(-2.5)).abs() < 1e-15);
        }
        assert!((sv.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cap_enforced() {
        let g = build_line(6).unwrap();
        assert_eq!(
            build_statevector_with_cap::<f64>(&g, 5),
            Err(OracleError::TooLarge { n: 6, cap: 5 })
        );
    }

    #[test]
    fn cz_is_an_involution() {
        let g = build_from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let mut sv: StateVector<f64> = build_statevector(&g).unwrap();
        let before = sv.clone();
        sv.apply_cz(1, 3);
        assert_ne!(sv, before);
        sv.apply_cz(1, 3);
        assert_eq!(sv, before);
    }

    #[test]
    fn projection_examples() {
        let g = build_line(2).unwrap();
        let sv = build_statevector(&g).unwrap();
        let zero = ProjectionSpec::uniform(2, 0.0, 0.0).unwrap();
        assert!((project_statevector(&sv, &zero).unwrap() - Complex::new(0.5, 0.0)).norm() < 1e-15);
        let plus = ProjectionSpec::uniform(2, FRAC_PI_4, 0.0).unwrap();
        assert!((project_statevector(&sv, &plus).unwrap() - Complex::new(0.5, 0.0)).norm() < 1e-12);
        let g5 = build_cross_chain(1).unwrap();
        let sv5 = build_statevector(&g5).unwrap();
        let plus5 = ProjectionSpec::uniform(5, FRAC_PI_4, 0.0).unwrap();
        assert!(
            (project_statevector(&sv5, &plus5).unwrap() - Complex::new(0.5, 0.0)).norm() < 1e-12
        );
        assert!(project_statevector(&sv5, &plus).is_err());
    }

    #[test]
    fn bell_direct_sum_closed_form() {
        let g = build_line(2).unwrap();
        let b = bipartition(&g).unwrap();
        let spec = ProjectionSpec::new(vec![0.4, 1.3], vec![0.2, -0.8]).unwrap();
        let (c0, s0) = spec.coeffs(0);
        let (c1, s1) = spec.coeffs(1);
        let want = (c0 * (c1 + s1) + s0 * (c1 - s1)) * 0.5;
        assert!((direct_sum(&g, &b, &spec).unwrap() - want).norm() < 1e-15);
    }

    #[test]
    fn direct_sum_rejects_bad_split() {
        let g = build_line(3).unwrap();
        let wrong = Bipartition {
            controls: vec![0],
            targets: vec![1, 2],
        };
        let spec = ProjectionSpec::uniform(3, 0.1, 0.0).unwrap();
        assert_eq!(
            direct_sum(&g, &wrong, &spec),
            Err(OracleError::NotBipartite(1, 2))
        );
    }
}
