//! Column-block evaluation on cross lattices.
//!
//! The slots are the centers, one column of `m` slots per column of crosses.
//! Expanding `U = (I+Z)/2` and `D = (I−Z)/2`, every factor lives in the
//! algebra of `{I, Z}` words, where a product is an XOR of bit masks and the
//! trace keeps only the all-`I` coefficient. A corner column couples the two
//! center columns beside it through a `2^m × 2^m` kernel; a center column acts
//! slot-wise. Sweeping columns left to right carries one [`ColumnVector`].

use num_complex::Complex;

use super::{EvalError, EvalReport};
use crate::factorize::ProjectionSpec;
use crate::graph::{ClusterGraph, LatticeShape};
use crate::scalar::{cone, czero, inv_sqrt_pow2, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnOptions {
    /// Largest number of slots per column accepted.
    pub max_rows: usize,
}

impl Default for ColumnOptions {
    fn default() -> Self {
        ColumnOptions { max_rows: 10 }
    }
}

/// Coefficients over the `{I, Z}` words of one column's slots; bit `i` of
/// the index is `Z` on the slot in row `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnVector<T> {
    rows: usize,
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> ColumnVector<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Applies the center factors of one column. With the factor 1/2 of
    /// `U`, `D` folded into the trace, row `i` maps `v[w]` to
    /// `(C+S)·v[w] + (C−S)·v[w ⊕ e_i]`.
    fn apply_centers(&mut self, coeffs: &[(Complex<T>, Complex<T>)], muls: &mut u64) {
        for (i, &(c, s)) in coeffs.iter().enumerate() {
            let (tp, tm) = (c + s, c - s);
            let bit = 1usize << i;
            for w in 0..self.coeffs.len() {
                if w & bit == 0 {
                    let (a, b) = (self.coeffs[w], self.coeffs[w | bit]);
                    self.coeffs[w] = tp * a + tm * b;
                    self.coeffs[w | bit] = tm * a + tp * b;
                }
            }
            *muls += 2 * self.coeffs.len() as u64;
        }
    }
}

/// Kernel of corner column `c`: index `left | right << m`, where `left`
/// (`right`) is the word on center column `c−1` (`c`).
fn corner_kernel<T: Scalar>(
    shape: LatticeShape,
    spec: &ProjectionSpec<T>,
    c: usize,
    muls: &mut u64,
) -> Vec<Complex<T>> {
    let m = shape.rows;
    let mut k = vec![czero::<T>(); 1 << (2 * m)];
    k[0] = cone();
    for r in 0..=m {
        let rows = [r.checked_sub(1), (r < m).then_some(r)];
        let mut mask = 0usize;
        for i in rows.into_iter().flatten() {
            if c >= 1 {
                mask |= 1 << i;
            }
            if c < shape.cols {
                mask |= 1 << (m + i);
            }
        }
        let (cc, ss) = spec.coeffs(shape.corner(r, c));
        let mut next = vec![czero::<T>(); k.len()];
        for (w, &v) in k.iter().enumerate() {
            next[w] += cc * v;
            next[w ^ mask] += ss * v;
        }
        *muls += 2 * k.len() as u64;
        k = next;
    }
    k
}

pub fn column_evaluate<T: Scalar>(
    g: &ClusterGraph,
    spec: &ProjectionSpec<T>,
    options: &ColumnOptions,
) -> Result<EvalReport<T>, EvalError> {
    let shape = g.lattice_shape().ok_or(EvalError::NotALattice)?;
    if spec.len() != g.n() {
        return Err(EvalError::SizeMismatch {
            spec: spec.len(),
            expected: g.n(),
        });
    }
    let m = shape.rows;
    if m > options.max_rows {
        return Err(EvalError::ColumnTooWide {
            rows: m,
            cap: options.max_rows,
        });
    }
    let width = 1usize << m;
    let mut muls = 0u64;

    let k0 = corner_kernel(shape, spec, 0, &mut muls);
    // Column 0 has no left neighbour: its left word is always empty.
    let mut v = ColumnVector {
        rows: m,
        coeffs: (0..width).map(|w| k0[w << m]).collect(),
    };
    let mut value = czero::<T>();
    for j in 0..shape.cols {
        let centers: Vec<_> = (0..m).map(|i| spec.coeffs(shape.center(i, j))).collect();
        v.apply_centers(&centers, &mut muls);
        let k = corner_kernel(shape, spec, j + 1, &mut muls);
        if j + 1 < shape.cols {
            let mut next = vec![czero::<T>(); width];
            for (right, out) in next.iter_mut().enumerate() {
                for left in 0..width {
                    *out += v.coeffs[left] * k[left | right << m];
                }
            }
            muls += (width * width) as u64;
            v.coeffs = next;
        } else {
            for (c, kk) in v.coeffs.iter().zip(k) {
                value += *c * kk;
            }
            muls += width as u64;
        }
    }
    Ok(EvalReport {
        amplitude: value * inv_sqrt_pow2::<T>(g.n()),
        max_live_terms: width,
        add_count: muls,
        mul_count: muls + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_lattice, build_line};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn single_cross_plus() {
        let g = build_lattice(1, 1).unwrap();
        let spec = ProjectionSpec::uniform(5, FRAC_PI_4, 0.0).unwrap();
        let r = column_evaluate(&g, &spec, &ColumnOptions::default()).unwrap();
        assert!((r.amplitude - Complex::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn all_zero() {
        let g = build_lattice(2, 3).unwrap();
        let spec = ProjectionSpec::uniform(g.n(), 0.0, 0.0).unwrap();
        let r = column_evaluate(&g, &spec, &ColumnOptions::default()).unwrap();
        assert!((r.amplitude.re - 2f64.powf(-(g.n() as f64) / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn rejects_other_graphs() {
        let g = build_line(5).unwrap();
        let spec = ProjectionSpec::uniform(5, 0.0, 0.0).unwrap();
        assert_eq!(
            column_evaluate(&g, &spec, &ColumnOptions::default()),
            Err(EvalError::NotALattice)
        );
        let g = build_lattice(3, 1).unwrap();
        let spec = ProjectionSpec::uniform(g.n(), 0.0, 0.0).unwrap();
        assert_eq!(
            column_evaluate(&g, &spec, &ColumnOptions { max_rows: 2 }),
            Err(EvalError::ColumnTooWide { rows: 3, cap: 2 })
        );
    }
}
