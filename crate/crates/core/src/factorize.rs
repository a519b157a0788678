//! Turning a graph, a slot assignment and projection angles into the ordered
//! product of binomial factors whose trace gives the amplitude.
//!
//! Qubit `p` contributes `C_p·W_c + S_p·W_s`. `W_c` is `U` at `p`'s own slot
//! (or the empty word when `p` owns none). `W_s` is `D` at the own slot plus
//! `Z` at the slot tracking each incident edge owned by the other endpoint.
//! Tracing slot `a` then yields `(-1)^{j_a · Σ_b j_b}` over the edges it
//! tracks, which is the CZ phase.

use std::collections::BTreeSet;

use num_complex::Complex;
use thiserror::Error;

use crate::algebra::{Letter, Slot, TensorWord};
use crate::graph::{assign_slots, ClusterGraph, GraphError, Qubit, SlotAssignment, SlotStrategy};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorizeError {
    #[error("projection has {spec} qubits but the graph has {graph}")]
    SizeMismatch { spec: usize, graph: usize },
    #[error("angle for qubit {qubit} is not finite")]
    NonFinite { qubit: Qubit },
    #[error("ordering needs a lattice built by build_lattice")]
    NotALattice,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("angle file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Per-qubit projection angles `(θ_p, φ_p)`.
///
/// The bra on qubit `p` is `cos θ_p ⟨0| + e^{iφ_p} sin θ_p ⟨1|`, applied
/// without complex conjugation.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionSpec<T> {
    theta: Vec<T>,
    phi: Vec<T>,
}

impl<T: Scalar> ProjectionSpec<T> {
    pub fn new(theta: Vec<T>, phi: Vec<T>) -> Result<Self, FactorizeError> {
        if theta.len() != phi.len() {
            return Err(FactorizeError::SizeMismatch {
                spec: theta.len(),
                graph: phi.len(),
            });
        }
        if let Some(qubit) =
            (0..theta.len()).find(|&p| !theta[p].is_finite() || !phi[p].is_finite())
        {
            return Err(FactorizeError::NonFinite { qubit });
        }
        Ok(ProjectionSpec { theta, phi })
    }

    /// The same angles on every qubit.
    pub fn uniform(n: usize, theta: T, phi: T) -> Result<Self, FactorizeError> {
        Self::new(vec![theta; n], vec![phi; n])
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    pub fn phi(&self) -> &[T] {
        &self.phi
    }

    /// `(C_p, S_p)`.
    pub fn coeffs(&self, p: Qubit) -> (Complex<T>, Complex<T>) {
        let (s, c) = self.theta[p].sin_cos();
        (
            Complex::new(c, T::zero()),
            Complex::from_polar(s, self.phi[p]),
        )
    }

    pub fn check_size(&self, n: usize) -> Result<(), FactorizeError> {
        if self.len() == n {
            Ok(())
        } else {
            Err(FactorizeError::SizeMismatch {
                spec: self.len(),
                graph: n,
            })
        }
    }

    /// Parses one `theta phi` pair per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, FactorizeError> {
        let (mut theta, mut phi) = (Vec::new(), Vec::new());
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| FactorizeError::Parse {
                line: k + 1,
                msg: msg.to_string(),
            };
            let fields: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| err("expected two numbers"))?;
            let [t, f] = fields[..] else {
                return Err(err("expected `theta phi`"));
            };
            theta.push(T::lit(t));
            phi.push(T::lit(f));
        }
        Self::new(theta, phi)
    }

    pub fn to_text(&self) -> String {
        self.theta
            .iter()
            .zip(&self.phi)
            .map(|(t, f)| format!("{:e} {:e}\n", t.to_f64_lossy(), f.to_f64_lossy()))
            .collect()
    }
}

/// `(C_p, S_p)` for qubit `p` of `spec`.
pub fn coeffs<T: Scalar>(spec: &ProjectionSpec<T>, p: Qubit) -> (Complex<T>, Complex<T>) {
    spec.coeffs(p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch<T> {
    pub coeff: Complex<T>,
    pub word: TensorWord,
}

/// The binomial `C_p·W_c + S_p·W_s` of one qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor<T> {
    pub qubit: Qubit,
    pub c_branch: Branch<T>,
    pub s_branch: Branch<T>,
}

impl<T> Factor<T> {
    /// Slots either branch touches, ascending.
    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        // The S word always occupies a superset of the C word's slots.
        self.s_branch.word.occupied_slots()
    }
}

/// Words of the factor of qubit `p`, independent of angles.
pub fn factor_words(p: Qubit, a: &SlotAssignment, g: &ClusterGraph) -> (TensorWord, TensorWord) {
    let own = a.slot_of(p);
    let c_word = own.map_or_else(TensorWord::identity, |s| TensorWord::single(s, Letter::U));
    let mut s_entries: Vec<(Slot, Letter)> = own.map(|s| (s, Letter::D)).into_iter().collect();
    for &nb in g.neighbors(p) {
        let e = g.edge_index(p, nb).expect("neighbor implies edge");
        let owner = a.edge_owner(e);
        if owner != p {
            let s = a.slot_of(owner).expect("edge owners hold slots");
            s_entries.push((s, Letter::Z));
        }
    }
    (c_word, TensorWord::from_entries(s_entries))
}

pub fn build_factor<T: Scalar>(
    p: Qubit,
    a: &SlotAssignment,
    g: &ClusterGraph,
    spec: &ProjectionSpec<T>,
) -> Factor<T> {
    let (c, s) = spec.coeffs(p);
    let (c_word, s_word) = factor_words(p, a, g);
    Factor {
        qubit: p,
        c_branch: Branch {
            coeff: c,
            word: c_word,
        },
        s_branch: Branch {
            coeff: s,
            word: s_word,
        },
    }
}

/// Ordered factors plus per-slot activity intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizedPolynomial<T> {
    factors: Vec<Factor<T>>,
    slot_count: usize,
    activity: Vec<(usize, usize)>,
    norm_exponent: usize,
}

impl<T: Scalar> FactorizedPolynomial<T> {
    pub fn factors(&self) -> &[Factor<T>] {
        &self.factors
    }

    pub fn slot_count(&self) -> usize {
        self.slot_count
    }

    /// `(first, last)` factor positions touching each slot.
    pub fn activity(&self) -> &[(usize, usize)] {
        &self.activity
    }

    /// Qubit count `N` of the `2^{-N/2}` prefactor.
    pub fn norm_exponent(&self) -> usize {
        self.norm_exponent
    }

    /// Qubits in factor order.
    pub fn order(&self) -> Vec<Qubit> {
        self.factors.iter().map(|f| f.qubit).collect()
    }

    fn from_factors(factors: Vec<Factor<T>>, slot_count: usize, norm_exponent: usize) -> Self {
        let mut activity = vec![(usize::MAX, 0); slot_count];
        for (pos, f) in factors.iter().enumerate() {
            for s in f.slots() {
                let (first, last) = &mut activity[s];
                *first = (*first).min(pos);
                *last = (*last).max(pos);
            }
        }
        FactorizedPolynomial {
            factors,
            slot_count,
            activity,
            norm_exponent,
        }
    }

    /// Factors visited in the qubit order `perm`.
    pub fn reordered(&self, perm: &[Qubit]) -> Result<Self, FactorizeError> {
        check_permutation(perm, self.factors.len())?;
        let mut by_qubit: Vec<Option<&Factor<T>>> = vec![None; self.factors.len()];
        for f in &self.factors {
            by_qubit[f.qubit] = Some(f);
        }
        let factors = perm
            .iter()
            .map(|&q| by_qubit[q].expect("one factor per qubit").clone())
            .collect();
        Ok(Self::from_factors(
            factors,
            self.slot_count,
            self.norm_exponent,
        ))
    }
}

fn check_permutation(perm: &[Qubit], n: usize) -> Result<(), FactorizeError> {
    if perm.len() != n {
        return Err(FactorizeError::InvalidPermutation(format!(
            "length {} for {n} qubits",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &q in perm {
        if q >= n || std::mem::replace(&mut seen[q], true) {
            return Err(FactorizeError::InvalidPermutation(format!(
                "qubit {q} is out of range or repeated"
            )));
        }
    }
    Ok(())
}

/// Builds all factors in ascending qubit order.
pub fn factorize<T: Scalar>(
    g: &ClusterGraph,
    a: &SlotAssignment,
    spec: &ProjectionSpec<T>,
) -> Result<FactorizedPolynomial<T>, FactorizeError> {
    spec.check_size(g.n())?;
    let factors = (0..g.n()).map(|p| build_factor(p, a, g, spec)).collect();
    Ok(FactorizedPolynomial::from_factors(
        factors,
        a.slot_count(),
        g.n(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderStrategy {
    AsBuilt,
    /// Row by row over the lattice geometry; plain index order elsewhere.
    RowMajor,
    /// Corner anti-diagonals in boustrophedon order, each center right after
    /// its last corner. Lattices only.
    AntiDiagonal,
    /// Repeatedly picks the factor that opens the fewest new slots net of the
    /// slots it closes.
    Greedy,
    Custom(Vec<Qubit>),
}

impl OrderStrategy {
    /// The ordering used when none is requested: anti-diagonal on lattices,
    /// greedy elsewhere.
    pub fn default_for(g: &ClusterGraph) -> Self {
        if g.lattice_shape().is_some() {
            OrderStrategy::AntiDiagonal
        } else {
            OrderStrategy::Greedy
        }
    }
}

/// Qubit visit order for `strategy`.
pub fn factor_order(
    g: &ClusterGraph,
    a: &SlotAssignment,
    strategy: &OrderStrategy,
) -> Result<Vec<Qubit>, FactorizeError> {
    let n = g.n();
    match strategy {
        OrderStrategy::AsBuilt => Ok((0..n).collect()),
        OrderStrategy::RowMajor => Ok(match g.lattice_shape() {
            Some(shape) => {
                let mut order: Vec<Qubit> = (0..n).collect();
                order.sort_by_key(|&q| shape.position(q));
                order
            }
            None => (0..n).collect(),
        }),
        OrderStrategy::AntiDiagonal => {
            let shape = g.lattice_shape().ok_or(FactorizeError::NotALattice)?;
            let mut order = Vec::with_capacity(n);
            let mut placed = vec![false; n];
            for d in 0..=shape.rows + shape.cols {
                let mut rows: Vec<usize> = (0..=shape.rows)
                    .filter(|&r| d >= r && d - r <= shape.cols)
                    .collect();
                if d % 2 == 1 {
                    rows.reverse();
                }
                for r in rows {
                    let q = shape.corner(r, d - r);
                    order.push(q);
                    placed[q] = true;
                    for &x in g.neighbors(q) {
                        if !placed[x] && g.neighbors(x).iter().all(|&c| placed[c]) {
                            order.push(x);
                            placed[x] = true;
                        }
                    }
                }
            }
            Ok(order)
        }
        OrderStrategy::Greedy => Ok(greedy_order(g, a)),
        OrderStrategy::Custom(perm) => {
            check_permutation(perm, n)?;
            Ok(perm.clone())
        }
    }
}

fn greedy_order(g: &ClusterGraph, a: &SlotAssignment) -> Vec<Qubit> {
    let n = g.n();
    let touched: Vec<BTreeSet<Slot>> = (0..n)
        .map(|p| factor_words(p, a, g).1.occupied_slots().collect())
        .collect();
    let mut remaining = vec![0usize; a.slot_count()];
    for t in &touched {
        for &s in t {
            remaining[s] += 1;
        }
    }
    let mut open = vec![false; a.slot_count()];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let score = |p: Qubit| -> i64 {
            let opened = touched[p].iter().filter(|&&s| !open[s]).count() as i64;
            let closed = touched[p].iter().filter(|&&s| remaining[s] == 1).count() as i64;
            opened - closed
        };
        let best = (0..n)
            .filter(|&p| !done[p])
            .min_by_key(|&p| (score(p), p))
            .expect("an unplaced qubit remains");
        done[best] = true;
        for &s in &touched[best] {
            open[s] = true;
            remaining[s] -= 1;
        }
        order.push(best);
    }
    order
}

/// Reorders `poly` by `strategy`.
pub fn order_factors<T: Scalar>(
    poly: &FactorizedPolynomial<T>,
    g: &ClusterGraph,
    a: &SlotAssignment,
    strategy: &OrderStrategy,
) -> Result<FactorizedPolynomial<T>, FactorizeError> {
    poly.reordered(&factor_order(g, a, strategy)?)
}

/// Factorizes with bipartite slots (a greedy vertex cover when the graph has
/// an odd cycle) and orders by `strategy`.
pub fn prepare<T: Scalar>(
    g: &ClusterGraph,
    spec: &ProjectionSpec<T>,
    strategy: &OrderStrategy,
) -> Result<FactorizedPolynomial<T>, crate::Error> {
    let a = match assign_slots(g, SlotStrategy::Bipartite) {
        Err(GraphError::OddCycle(_)) => assign_slots(g, SlotStrategy::GreedyCover)?,
        other => other?,
    };
    let poly = factorize(g, &a, spec)?;
    Ok(order_factors(&poly, g, &a, strategy)?)
}

/// Largest number of slots whose activity intervals overlap one position.
pub fn max_active_slots<T: Scalar>(poly: &FactorizedPolynomial<T>) -> usize {
    let mut delta = vec![0i64; poly.factors().len() + 1];
    for &(first, last) in poly.activity() {
        if first <= last {
            delta[first] += 1;
            delta[last + 1] -= 1;
        }
    }
    let mut best = 0;
    let mut live = 0;
    for d in delta {
        live += d;
        best = best.max(live);
    }
    best as usize
}
