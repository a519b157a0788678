//! Evaluation of factorized polynomials.
//!
//! [`sweep_evaluate`] multiplies the factors left to right into a [`TermSum`]
//! and traces each slot out as soon as its last factor has been applied. The
//! submodules hold the shape-specific recurrences, the column-block evaluator
//! for lattices, a compiled form of the sweep that replays its word structure
//! with arithmetic only, and the profiling helpers.

use std::collections::hash_map::Entry;

use num_complex::Complex;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::algebra::{Letter, PackedWord, Sign, Slot, TensorWord, MAX_LANES};
use crate::factorize::{Factor, FactorizedPolynomial};
use crate::scalar::{cone, czero, inv_sqrt_pow2, Scalar};

pub mod column;
pub mod compiled;
pub mod profile;
pub mod recursion;

pub use column::{column_evaluate, ColumnOptions, ColumnVector};
pub use compiled::RecurrencePlan;
pub use profile::{profile, ProfileRow};
pub use recursion::{cross_chain_recursion, line_recursion, RecursionState};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("slot {slot} retired at factor {position} while still I: its owner never ran")]
    RetirementBeforeOwner { slot: Slot, position: usize },
    #[error("{terms} non-scalar terms left after the last factor")]
    NonScalarResidue { terms: usize },
    #[error("{what} needs at least {min}, got {got}")]
    TooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("{live} live terms exceed the bound {bound} set by the active slots")]
    LiveTermBoundExceeded { live: usize, bound: usize },
    #[error("more than {MAX_LANES} slots live at once")]
    TooManyLiveSlots,
    #[error("projection has {spec} qubits, expected {expected}")]
    SizeMismatch { spec: usize, expected: usize },
    #[error("graph is not a lattice built by build_lattice")]
    NotALattice,
    #[error("column of {rows} slots exceeds the cap of {cap}")]
    ColumnTooWide { rows: usize, cap: usize },
}

/// Amplitude plus the cost counters of one evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalReport<T> {
    pub amplitude: Complex<T>,
    pub max_live_terms: usize,
    pub add_count: u64,
    pub mul_count: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Counters {
    pub add: u64,
    pub mul: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions<T> {
    /// Drops terms with `|coefficient| <= epsilon` after each factor.
    /// Lossy: for profiling only.
    pub prune_epsilon: Option<T>,
}

impl<T> Default for SweepOptions<T> {
    fn default() -> Self {
        SweepOptions {
            prune_epsilon: None,
        }
    }
}

/// Assigns the at most 64 bit lanes of a [`PackedWord`] to live slots.
#[derive(Clone, Debug)]
pub(crate) struct LaneMap {
    lane_of: Vec<Option<usize>>,
    slot_of_lane: Vec<Option<Slot>>,
    free: Vec<usize>,
}

impl LaneMap {
    pub fn new(slot_count: usize) -> Self {
        LaneMap {
            lane_of: vec![None; slot_count],
            slot_of_lane: vec![None; MAX_LANES],
            free: (0..MAX_LANES).rev().collect(),
        }
    }

    pub fn lane(&self, slot: Slot) -> Option<usize> {
        self.lane_of[slot]
    }

    pub fn pack(&mut self, word: &TensorWord) -> Result<PackedWord, EvalError> {
        let mut packed = PackedWord::IDENTITY;
        for &(slot, letter) in word.entries() {
            let lane = match self.lane_of[slot] {
                Some(l) => l,
                None => {
                    let l = self.free.pop().ok_or(EvalError::TooManyLiveSlots)?;
                    self.lane_of[slot] = Some(l);
                    self.slot_of_lane[l] = Some(slot);
                    l
                }
            };
            packed = packed.with(lane, letter);
        }
        Ok(packed)
    }

    pub fn release(&mut self, slot: Slot) -> Option<usize> {
        let lane = self.lane_of[slot].take()?;
        self.slot_of_lane[lane] = None;
        self.free.push(lane);
        Some(lane)
    }

    pub fn unpack(&self, w: PackedWord) -> TensorWord {
        TensorWord::from_entries(
            self.slot_of_lane
                .iter()
                .enumerate()
                .filter_map(|(lane, s)| s.map(|s| (s, w.get(lane))))
                .filter(|&(_, l)| l != Letter::I),
        )
    }
}

/// Slots to retire after each factor position.
pub(crate) fn retirement_schedule<T: Scalar>(poly: &FactorizedPolynomial<T>) -> Vec<Vec<Slot>> {
    let mut at = vec![Vec::new(); poly.factors().len()];
    for (s, &(first, last)) in poly.activity().iter().enumerate() {
        if first <= last {
            at[last].push(s);
        }
    }
    at
}

/// Live boundary state of the sweep: a merged sum of coefficient-weighted
/// words.
#[derive(Clone, Debug)]
pub struct TermSum<T> {
    terms: FxHashMap<PackedWord, Complex<T>>,
    lanes: LaneMap,
}

impl<T: Scalar> TermSum<T> {
    /// The single term `1·I`.
    pub fn new(slot_count: usize) -> Self {
        let mut terms = FxHashMap::default();
        terms.insert(PackedWord::IDENTITY, cone());
        TermSum {
            terms,
            lanes: LaneMap::new(slot_count),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical word order.
    pub fn terms(&self) -> Vec<(TensorWord, Complex<T>)> {
        let mut out: Vec<_> = self
            .terms
            .iter()
            .map(|(&w, &c)| (self.lanes.unpack(w), c))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Multiplies every term by `factor`, dropping zero products and exact
    /// cancellations.
    fn apply(&mut self, factor: &Factor<T>, counters: &mut Counters) -> Result<(), EvalError> {
        let branches = [
            (
                factor.c_branch.coeff,
                self.lanes.pack(&factor.c_branch.word)?,
            ),
            (
                factor.s_branch.coeff,
                self.lanes.pack(&factor.s_branch.word)?,
            ),
        ];
        let zero = czero::<T>();
        let mut next =
            FxHashMap::with_capacity_and_hasher(2 * self.terms.len(), Default::default());
        for (w, a) in self.terms.drain() {
            for &(coeff, bw) in &branches {
                if coeff == zero {
                    continue;
                }
                let Some((sign, nw)) = w.times(bw) else {
                    continue;
                };
                let mut v = a * coeff;
                counters.mul += 1;
                if sign == Sign::Minus {
                    v = -v;
                }
                match next.entry(nw) {
                    Entry::Occupied(mut e) => {
                        *e.get_mut() += v;
                        counters.add += 1;
                    }
                    Entry::Vacant(e) => {
                        e.insert(v);
                    }
                }
            }
        }
        next.retain(|_, v| *v != zero);
        self.terms = next;
        Ok(())
    }

    /// Traces `slot` out: `U`/`D` contribute 1, `Z` annihilates the term.
    fn retire(
        &mut self,
        slot: Slot,
        position: usize,
        counters: &mut Counters,
    ) -> Result<(), EvalError> {
        let Some(lane) = self.lanes.lane(slot) else {
            return Ok(());
        };
        let mut next = FxHashMap::with_capacity_and_hasher(self.terms.len(), Default::default());
        for (w, a) in self.terms.drain() {
            match w.get(lane) {
                Letter::U | Letter::D => match next.entry(w.clear(lane)) {
                    Entry::Occupied(mut e) => {
                        *e.get_mut() += a;
                        counters.add += 1;
                    }
                    Entry::Vacant(e) => {
                        e.insert(a);
                    }
                },
                Letter::Z => {}
                Letter::I => return Err(EvalError::RetirementBeforeOwner { slot, position }),
            }
        }
        let zero = czero::<T>();
        next.retain(|_, v| *v != zero);
        self.terms = next;
        self.lanes.release(slot);
        Ok(())
    }

    fn prune(&mut self, epsilon: T) {
        self.terms.retain(|_, v| v.norm() > epsilon);
    }

    fn into_scalar(self) -> Result<Complex<T>, EvalError> {
        let residue = self.terms.keys().filter(|w| !w.is_identity()).count();
        if residue > 0 {
            return Err(EvalError::NonScalarResidue { terms: residue });
        }
        Ok(self
            .terms
            .get(&PackedWord::IDENTITY)
            .copied()
            .unwrap_or_else(czero))
    }
}

/// Sweeping contraction with eager slot retirement.
pub fn sweep_evaluate<T: Scalar>(
    poly: &FactorizedPolynomial<T>,
) -> Result<EvalReport<T>, EvalError> {
    sweep_evaluate_with(poly, &SweepOptions::default())
}

pub fn sweep_evaluate_with<T: Scalar>(
    poly: &FactorizedPolynomial<T>,
    options: &SweepOptions<T>,
) -> Result<EvalReport<T>, EvalError> {
    let schedule = retirement_schedule(poly);
    let mut sum = TermSum::new(poly.slot_count());
    let mut counters = Counters::default();
    let mut max_live = 1;
    for (pos, factor) in poly.factors().iter().enumerate() {
        sum.apply(factor, &mut counters)?;
        max_live = max_live.max(sum.len());
        for &slot in &schedule[pos] {
            sum.retire(slot, pos, &mut counters)?;
        }
        if let Some(eps) = options.prune_epsilon {
            sum.prune(eps);
        }
    }
    let value = sum.into_scalar()?;
    counters.mul += 1;
    Ok(EvalReport {
        amplitude: value * inv_sqrt_pow2::<T>(poly.norm_exponent()),
        max_live_terms: max_live,
        add_count: counters.add,
        mul_count: counters.mul,
    })
}
