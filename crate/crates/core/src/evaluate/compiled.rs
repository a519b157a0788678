//! The sweep with its word bookkeeping done once.
//!
//! Which words appear at each stage, and how they multiply and retire,
//! depends only on the graph, the slot assignment and the factor order. A
//! [`RecurrencePlan`] records that structure as a sparse recurrence: stage
//! `t` maps term vector `x_t` to `x_{t+1}` through entries
//! `x_{t+1}[dst] += ±coef·x_t[src]`, where `coef` is `C` or `S` of the
//! stage's qubit. Evaluating a new projection is then arithmetic only; for
//! the line this is exactly the two-term trace recursion.

use num_complex::Complex;
use rustc_hash::FxHashMap;

use super::{retirement_schedule, EvalError, EvalReport, LaneMap};
use crate::algebra::{Letter, PackedWord, Sign};
use crate::factorize::{FactorizedPolynomial, ProjectionSpec};
use crate::graph::Qubit;
use crate::scalar::{cone, czero, inv_sqrt_pow2, Scalar};

/// Traces the `(slot, lane)` pairs out of `w`; `None` when a `Z` kills it.
fn retire_lanes(
    mut w: PackedWord,
    retire: &[(usize, usize)],
    position: usize,
) -> Result<Option<PackedWord>, EvalError> {
    for &(slot, lane) in retire {
        match w.get(lane) {
            Letter::U | Letter::D => w = w.clear(lane),
            Letter::Z => return Ok(None),
            Letter::I => return Err(EvalError::RetirementBeforeOwner { slot, position }),
        }
    }
    Ok(Some(w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Entry {
    dst: u32,
    src: u32,
    s_branch: bool,
    negate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Stage {
    qubit: Qubit,
    entries: Vec<Entry>,
    width: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrencePlan {
    stages: Vec<Stage>,
    n: usize,
    /// Index of the all-`I` word in the final vector, if it survives.
    result: Option<u32>,
}

impl RecurrencePlan {
    /// Records the word structure of `poly`; the coefficients are ignored.
    pub fn compile<T: Scalar>(poly: &FactorizedPolynomial<T>) -> Result<Self, EvalError> {
        let schedule = retirement_schedule(poly);
        let mut lanes = LaneMap::new(poly.slot_count());
        let mut words = vec![PackedWord::IDENTITY];
        let mut stages = Vec::with_capacity(poly.factors().len());
        for (pos, f) in poly.factors().iter().enumerate() {
            let branches = [lanes.pack(&f.c_branch.word)?, lanes.pack(&f.s_branch.word)?];
            let retire: Vec<(usize, usize)> = schedule[pos]
                .iter()
                .filter_map(|&s| lanes.release(s).map(|l| (s, l)))
                .collect();
            let mut index: FxHashMap<PackedWord, u32> = FxHashMap::default();
            let mut next = Vec::new();
            let mut entries = Vec::new();
            for (src, &w) in words.iter().enumerate() {
                for (b, &bw) in branches.iter().enumerate() {
                    let Some((sign, nw)) = w.times(bw) else {
                        continue;
                    };
                    let Some(nw) = retire_lanes(nw, &retire, pos)? else {
                        continue;
                    };
                    let dst = *index.entry(nw).or_insert_with(|| {
                        next.push(nw);
                        (next.len() - 1) as u32
                    });
                    entries.push(Entry {
                        dst,
                        src: src as u32,
                        s_branch: b == 1,
                        negate: sign == Sign::Minus,
                    });
                }
            }
            stages.push(Stage {
                qubit: f.qubit,
                entries,
                width: next.len(),
            });
            words = next;
        }
        let residue = words.iter().filter(|w| !w.is_identity()).count();
        if residue > 0 {
            return Err(EvalError::NonScalarResidue { terms: residue });
        }
        let result = words.iter().position(|w| w.is_identity()).map(|i| i as u32);
        Ok(RecurrencePlan {
            stages,
            n: poly.norm_exponent(),
            result,
        })
    }

    /// Largest term vector over all stages.
    pub fn max_width(&self) -> usize {
        self.stages
            .iter()
            .map(|s| s.width)
            .max()
            .unwrap_or(1)
            .max(1)
    }

    /// Total recurrence entries, i.e. multiplies per evaluation.
    pub fn entry_count(&self) -> usize {
        self.stages.iter().map(|s| s.entries.len()).sum()
    }

    pub fn evaluate<T: Scalar>(
        &self,
        spec: &ProjectionSpec<T>,
    ) -> Result<EvalReport<T>, EvalError> {
        if spec.len() != self.n {
            return Err(EvalError::SizeMismatch {
                spec: spec.len(),
                expected: self.n,
            });
        }
        let mut cur: Vec<Complex<T>> = vec![cone()];
        let mut next: Vec<Complex<T>> = Vec::with_capacity(self.max_width());
        let (mut adds, mut muls) = (0u64, 0u64);
        for stage in &self.stages {
            let (c, s) = spec.coeffs(stage.qubit);
            next.clear();
            next.resize(stage.width, czero());
            for e in &stage.entries {
                let v = cur[e.src as usize] * if e.s_branch { s } else { c };
                let slot = &mut next[e.dst as usize];
                if e.negate {
                    *slot -= v;
                } else {
                    *slot += v;
                }
            }
            muls += stage.entries.len() as u64;
            adds += (stage.entries.len() - stage.width) as u64;
            std::mem::swap(&mut cur, &mut next);
        }
        let value = self.result.map_or_else(czero, |i| cur[i as usize]);
        Ok(EvalReport {
            amplitude: value * inv_sqrt_pow2::<T>(self.n),
            max_live_terms: self.max_width(),
            add_count: adds,
            mul_count: muls + 1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluate::sweep_evaluate;
    use crate::factorize::factorize;
    use crate::graph::{assign_slots, build_grid, build_line, SlotStrategy};

    #[test]
    fn line_plan_is_two_wide() {
        let g = build_line(9).unwrap();
        let a = assign_slots(&g, SlotStrategy::LineChain).unwrap();
        let spec = ProjectionSpec::uniform(9, 0.4, 0.3).unwrap();
        let plan = RecurrencePlan::compile(&factorize(&g, &a, &spec).unwrap()).unwrap();
        assert_eq!(plan.max_width(), 2);
    }

    #[test]
    fn matches_sweep() {
        let g = build_grid(3, 3).unwrap();
        let a = assign_slots(&g, SlotStrategy::Bipartite).unwrap();
        let spec = ProjectionSpec::new(
            (0..9).map(|k| 0.3 * k as f64).collect(),
            (0..9).map(|k| 1.0 - 0.2 * k as f64).collect(),
        )
        .unwrap();
        let poly = factorize(&g, &a, &spec).unwrap();
        let plan = RecurrencePlan::compile(&poly).unwrap();
        let want = sweep_evaluate(&poly).unwrap().amplitude;
        let got = plan.evaluate(&spec).unwrap().amplitude;
        assert!((got - want).norm() < 1e-12);
    }
}
