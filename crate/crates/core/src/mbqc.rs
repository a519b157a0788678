//! Small circuits as measurement patterns on cluster states.
//!
//! A measured qubit is projected on `⟨θ|_R = ⟨0|H e^{−iθZ}` with a fixed
//! outcome (post-selection, no feed-forward). Rotations use the full-angle
//! convention `R_Z(α) = e^{−iαZ}` and `R_X(α) = e^{−iαX}`. Wire 0 is the most
//! significant bit of every vector and matrix here.
//!
//! Every pattern carries its declared semantics as a gate list; checks compare
//! the simulated linear map with the gate matrix up to one nonzero scalar.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nalgebra::DMatrix;
use num_complex::Complex;
use thiserror::Error;

use crate::factorize::ProjectionSpec;
use crate::graph::{build_from_edges, ClusterGraph, GraphError, Qubit};

pub type C64 = Complex<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MbqcError {
    #[error("stage {stage}: {msg}")]
    ArityMismatch { stage: usize, msg: String },
    #[error("stage {stage}: wire {wire} used twice or out of range")]
    QubitCollision { stage: usize, wire: usize },
    #[error("post-selected branch vanishes for this input")]
    ZeroBranch,
    #[error("input has length {got}, expected {expected}")]
    InputSize { expected: usize, got: usize },
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("circuit line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no gates")]
    NoGates,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Rz { q: usize, theta: f64 },
    Rx { q: usize, theta: f64 },
    H { q: usize },
    Cz { a: usize, b: usize },
    Cnot { control: usize, target: usize },
    Cphase { a: usize, b: usize, theta: f64 },
}

impl Gate {
    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Gate::Rz { q, .. } | Gate::Rx { q, .. } | Gate::H { q } => vec![q],
            Gate::Cz { a, b } | Gate::Cphase { a, b, .. } => vec![a, b],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn validate(&self, n_wires: usize) -> Result<(), MbqcError> {
        let w = self.wires();
        if w.iter().any(|&q| q >= n_wires) {
            return Err(MbqcError::InvalidGate(format!(
                "{self:?} acts outside {n_wires} wires"
            )));
        }
        if w.len() == 2 && w[0] == w[1] {
            return Err(MbqcError::InvalidGate(format!(
                "{self:?} repeats an operand"
            )));
        }
        Ok(())
    }

    /// The same gate on wire `map[q]` for each operand `q`.
    pub fn remap(&self, map: &[usize]) -> Gate {
        match *self {
            Gate::Rz { q, theta } => Gate::Rz { q: map[q], theta },
            Gate::Rx { q, theta } => Gate::Rx { q: map[q], theta },
            Gate::H { q } => Gate::H { q: map[q] },
            Gate::Cz { a, b } => Gate::Cz {
                a: map[a],
                b: map[b],
            },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: map[control],
                target: map[target],
            },
            Gate::Cphase { a, b, theta } => Gate::Cphase {
                a: map[a],
                b: map[b],
                theta,
            },
        }
    }

    fn apply(&self, state: &mut [C64], n: usize) {
        let bit = |q: usize| 1usize << (n - 1 - q);
        match *self {
            Gate::Rz { q, theta } => {
                let (lo, hi) = (C64::from_polar(1.0, -theta), C64::from_polar(1.0, theta));
                for (i, a) in state.iter_mut().enumerate() {
                    *a *= if i & bit(q) == 0 { lo } else { hi };
                }
            }
            Gate::Rx { q, theta } => {
                let (c, s) = (C64::new(theta.cos(), 0.0), C64::new(0.0, -theta.sin()));
                pair_map(state, bit(q), [[c, s], [s, c]]);
            }
            Gate::H { q } => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                pair_map(state, bit(q), [[h, h], [h, -h]]);
            }
            Gate::Cz { a, b } => phase_both(state, bit(a) | bit(b), C64::new(-1.0, 0.0)),
            Gate::Cphase { a, b, theta } => {
                phase_both(state, bit(a) | bit(b), C64::from_polar(1.0, theta))
            }
            Gate::Cnot { control, target } => {
                let (c, t) = (bit(control), bit(target));
                for i in 0..state.len() {
                    if i & c != 0 && i & t == 0 {
                        state.swap(i, i | t);
                    }
                }
            }
        }
    }
}

fn pair_map(state: &mut [C64], bit: usize, m: [[C64; 2]; 2]) {
    for i in 0..state.len() {
        if i & bit == 0 {
            let (a, b) = (state[i], state[i | bit]);
            state[i] = m[0][0] * a + m[0][1] * b;
            state[i | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn phase_both(state: &mut [C64], mask: usize, phase: C64) {
    for (i, a) in state.iter_mut().enumerate() {
        if i & mask == mask {
            *a *= phase;
        }
    }
}

/// Unitary of `gates` applied in order to `n_wires` wires.
pub fn gate_matrix(gates: &[Gate], n_wires: usize) -> Result<DMatrix<C64>, MbqcError> {
    for g in gates {
        g.validate(n_wires)?;
    }
    let dim = 1usize << n_wires;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    let mut col = vec![C64::new(0.0, 0.0); dim];
    for x in 0..dim {
        col.iter_mut().for_each(|a| *a = C64::new(0.0, 0.0));
        col[x] = C64::new(1.0, 0.0);
        for g in gates {
            g.apply(&mut col, n_wires);
        }
        m.set_column(x, &nalgebra::DVector::from_column_slice(&col));
    }
    Ok(m)
}

/// The bra `⟨θ|_R = (e^{−iθ}, e^{iθ})/√2`.
pub fn rotation_bra(theta: f64) -> [C64; 2] {
    [
        C64::from_polar(FRAC_1_SQRT_2, -theta),
        C64::from_polar(FRAC_1_SQRT_2, theta),
    ]
}

/// `(θ_p, φ_p) = (π/4, 2θ)`: the projection-spec angles whose bra equals
/// `⟨θ|_R` times `e^{iθ}`.
pub fn rotation_projector_to_spec(theta: f64) -> (f64, f64) {
    (FRAC_PI_4, 2.0 * theta)
}

/// Graph, measured angles, inputs and outputs, and the declared gate list.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementPattern {
    graph: ClusterGraph,
    inputs: Vec<Qubit>,
    outputs: Vec<Qubit>,
    measurements: BTreeMap<Qubit, f64>,
    semantics: Vec<Gate>,
}

impl MeasurementPattern {
    /// Every qubit must be measured or an output, not both.
    pub fn new(
        graph: ClusterGraph,
        inputs: Vec<Qubit>,
        outputs: Vec<Qubit>,
        measurements: BTreeMap<Qubit, f64>,
        semantics: Vec<Gate>,
    ) -> Result<Self, MbqcError> {
        let n = graph.n();
        let distinct = |v: &[Qubit]| v.iter().collect::<BTreeSet<_>>().len() == v.len();
        if !distinct(&inputs) || !distinct(&outputs) {
            return Err(MbqcError::InvalidPattern(
                "repeated input or output qubit".into(),
            ));
        }
        if inputs.iter().chain(&outputs).any(|&q| q >= n) {
            return Err(MbqcError::InvalidPattern(
                "input or output outside the graph".into(),
            ));
        }
        for q in 0..n {
            let measured = measurements.contains_key(&q);
            if measured == outputs.contains(&q) {
                return Err(MbqcError::InvalidPattern(format!(
                    "qubit {q} must be exactly one of measured or output"
                )));
            }
        }
        if measurements.keys().any(|&q| q >= n) {
            return Err(MbqcError::InvalidPattern(
                "measured qubit outside the graph".into(),
            ));
        }
        for g in &semantics {
            g.validate(inputs.len().max(outputs.len()))?;
        }
        Ok(MeasurementPattern {
            graph,
            inputs,
            outputs,
            measurements,
            semantics,
        })
    }

    pub fn graph(&self) -> &ClusterGraph {
        &self.graph
    }

    pub fn inputs(&self) -> &[Qubit] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Qubit] {
        &self.outputs
    }

    pub fn measurements(&self) -> &BTreeMap<Qubit, f64> {
        &self.measurements
    }

    /// Declared gate list on wires `0..arity`.
    pub fn semantics(&self) -> &[Gate] {
        &self.semantics
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    /// Projection spec with measured qubits at their angles and outputs at
    /// `output_angles`, all through [`rotation_projector_to_spec`].
    pub fn projection_spec(&self, output_angles: &[f64]) -> Result<ProjectionSpec<f64>, MbqcError> {
        if output_angles.len() != self.outputs.len() {
            return Err(MbqcError::InputSize {
                expected: self.outputs.len(),
                got: output_angles.len(),
            });
        }
        let mut theta = vec![0.0; self.graph.n()];
        let mut phi = vec![0.0; self.graph.n()];
        let all = self.measurements.iter().map(|(&q, &t)| (q, t)).chain(
            self.outputs
                .iter()
                .copied()
                .zip(output_angles.iter().copied()),
        );
        for (q, t) in all {
            (theta[q], phi[q]) = rotation_projector_to_spec(t);
        }
        ProjectionSpec::new(theta, phi).map_err(|e| MbqcError::InvalidPattern(e.to_string()))
    }
}

/// Post-selected simulation: `input` on the input qubits, `|+⟩` elsewhere,
/// every edge as CZ, every measured qubit projected on its `⟨θ|_R`. Returns
/// the unnormalized vector on the outputs, in output order.
///
/// Qubits join in index order and leave as soon as all their neighbours have
/// joined, so only a boundary of the pattern is ever held in memory.
pub fn simulate_pattern(p: &MeasurementPattern, input: &[C64]) -> Result<Vec<C64>, MbqcError> {
    let expected = 1usize << p.inputs.len();
    if input.len() != expected {
        return Err(MbqcError::InputSize {
            expected,
            got: input.len(),
        });
    }
    let g = &p.graph;
    let mut live: Vec<Qubit> = p.inputs.clone();
    let mut v = input.to_vec();
    let mut present = vec![false; g.n()];
    for &q in &p.inputs {
        present[q] = true;
    }
    for &(a, b) in g.edges() {
        if present[a] && present[b] {
            apply_cz_live(&mut v, &live, a, b);
        }
    }
    let mut gone = vec![false; g.n()];
    measure_ready(p, &mut v, &mut live, &present, &mut gone);
    for q in 0..g.n() {
        if present[q] {
            continue;
        }
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        v = v.iter().flat_map(|&a| [a * h, a * h]).collect();
        live.push(q);
        present[q] = true;
        for &nb in g.neighbors(q) {
            if present[nb] {
                apply_cz_live(&mut v, &live, q, nb);
            }
        }
        measure_ready(p, &mut v, &mut live, &present, &mut gone);
    }
    // Reorder the surviving qubits into output order.
    let l = live.len();
    let pos: Vec<usize> = p
        .outputs
        .iter()
        .map(|o| live.iter().position(|x| x == o).expect("outputs stay live"))
        .collect();
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (idx, &a) in v.iter().enumerate() {
        let mut y = 0usize;
        for (k, &pk) in pos.iter().enumerate() {
            if idx >> (l - 1 - pk) & 1 == 1 {
                y |= 1 << (l - 1 - k);
            }
        }
        out[y] = a;
    }
    let in_norm: f64 = input.iter().map(|a| a.norm_sqr()).sum();
    let out_norm: f64 = out.iter().map(|a| a.norm_sqr()).sum();
    if out_norm <= 1e-28 * in_norm.max(f64::MIN_POSITIVE) {
        return Err(MbqcError::ZeroBranch);
    }
    Ok(out)
}

fn apply_cz_live(v: &mut [C64], live: &[Qubit], a: Qubit, b: Qubit) {
    let l = live.len();
    let bit = |q: Qubit| 1usize << (l - 1 - live.iter().position(|&x| x == q).expect("live"));
    let mask = bit(a) | bit(b);
    for (i, amp) in v.iter_mut().enumerate() {
        if i & mask == mask {
            *amp = -*amp;
        }
    }
}

fn measure_ready(
    p: &MeasurementPattern,
    v: &mut Vec<C64>,
    live: &mut Vec<Qubit>,
    present: &[bool],
    gone: &mut [bool],
) {
    loop {
        let ready = live.iter().position(|&q| {
            p.measurements.contains_key(&q) && p.graph.neighbors(q).iter().all(|&nb| present[nb])
        });
        let Some(k) = ready else { return };
        let q = live[k];
        let bra = rotation_bra(p.measurements[&q]);
        let b = live.len() - 1 - k;
        let low = (1usize << b) - 1;
        let next: Vec<C64> = (0..v.len() / 2)
            .map(|i| {
                let i0 = ((i & !low) << 1) | (i & low);
                bra[0] * v[i0] + bra[1] * v[i0 | (1 << b)]
            })
            .collect();
        *v = next;
        live.remove(k);
        gone[q] = true;
    }
}

/// The linear map of `p` as a matrix, one simulated basis input per column.
/// Columns whose branch vanishes are zero.
pub fn pattern_matrix(p: &MeasurementPattern) -> Result<DMatrix<C64>, MbqcError> {
    let din = 1usize << p.inputs.len();
    let dout = 1usize << p.outputs.len();
    let mut m = DMatrix::<C64>::zeros(dout, din);
    for x in 0..din {
        let mut e = vec![C64::new(0.0, 0.0); din];
        e[x] = C64::new(1.0, 0.0);
        match simulate_pattern(p, &e) {
            Ok(col) => m.set_column(x, &nalgebra::DVector::from_column_slice(&col)),
            Err(MbqcError::ZeroBranch) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(m)
}

/// Least-squares scalar `s` minimizing `‖a − s·b‖`, and the relative
/// residual `‖a − s·b‖ / ‖a‖`.
pub fn align_scalar(a: &DMatrix<C64>, b: &DMatrix<C64>) -> (C64, f64) {
    let bb: f64 = b.iter().map(|x| x.norm_sqr()).sum();
    let ab: C64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let s = if bb > 0.0 {
        ab / bb
    } else {
        C64::new(0.0, 0.0)
    };
    let resid: f64 = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (x - s * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let an: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    (s, if an > 0.0 { resid / an } else { f64::INFINITY })
}

/// Relative residual between the simulated map and the declared semantics
/// after scalar alignment.
pub fn semantics_residual(p: &MeasurementPattern) -> Result<f64, MbqcError> {
    let sim = pattern_matrix(p)?;
    let want = gate_matrix(&p.semantics, p.arity())?;
    let (s, r) = align_scalar(&sim, &want);
    if s.norm() == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(r)
}

fn line_pattern(angles: &[f64], semantics: Vec<Gate>) -> MeasurementPattern {
    let n = angles.len() + 1;
    let graph = build_from_edges(n, (0..n - 1).map(|k| (k, k + 1))).expect("line");
    let measurements = angles.iter().copied().enumerate().collect();
    MeasurementPattern::new(graph, vec![0], vec![n - 1], measurements, semantics)
        .expect("line pattern")
}

/// Two-qubit teleport; semantics `H·R_Z(θ)`.
pub fn compile_z_rotation(theta: f64) -> MeasurementPattern {
    line_pattern(&[theta], vec![Gate::Rz { q: 0, theta }, Gate::H { q: 0 }])
}

/// Four-qubit line; semantics `H·R_Z(ξ)·R_X(ζ)·R_Z(θ)`.
pub fn compile_rotation(theta: f64, zeta: f64, xi: f64) -> MeasurementPattern {
    line_pattern(
        &[theta, zeta, xi],
        vec![
            Gate::Rz { q: 0, theta },
            Gate::Rx { q: 0, theta: zeta },
            Gate::Rz { q: 0, theta: xi },
            Gate::H { q: 0 },
        ],
    )
}

/// Two three-qubit lines `0−1−2` and `3−4−5` joined by the rung `1−4`, all
/// non-outputs measured on `⟨+|`. Inputs `0, 3`, outputs `2, 5`.
///
/// Each wire passes two teleports around the rung's CZ, so the map is
/// `(H⊗H)·CZ·(H⊗H)`: a CNOT whose control sits in the X basis.
pub fn compile_cnot() -> MeasurementPattern {
    let graph = build_from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), (1, 4)]).expect("I shape");
    let measurements = [0, 1, 3, 4].into_iter().map(|q| (q, 0.0)).collect();
    let semantics = vec![
        Gate::H { q: 0 },
        Gate::H { q: 1 },
        Gate::Cz { a: 0, b: 1 },
        Gate::H { q: 0 },
        Gate::H { q: 1 },
    ];
    MeasurementPattern::new(graph, vec![0, 3], vec![2, 5], measurements, semantics)
        .expect("I shape")
}

/// Square `0−2−1−3−0` with tails `2−4` and `3−5`. The wires sit on the
/// diagonal pair `0, 1`, which are both inputs and outputs; the rest is
/// measured, with `θ/4` on qubit 3 and `−θ/4` on the tail 4.
///
/// The realized map is `CPhase(θ)` followed by `R_Z(−θ/4)` on both wires,
/// a local phase the pattern cannot shed since its wires are never measured.
pub fn compile_cphase(theta: f64) -> MeasurementPattern {
    let graph =
        build_from_edges(6, [(0, 2), (2, 1), (1, 3), (3, 0), (2, 4), (3, 5)]).expect("square");
    let measurements = BTreeMap::from([(2, 0.0), (3, theta / 4.0), (4, -theta / 4.0), (5, 0.0)]);
    let semantics = vec![
        Gate::Cphase { a: 0, b: 1, theta },
        Gate::Rz {
            q: 0,
            theta: -theta / 4.0,
        },
        Gate::Rz {
            q: 1,
            theta: -theta / 4.0,
        },
    ];
    MeasurementPattern::new(graph, vec![0, 1], vec![0, 1], measurements, semantics).expect("square")
}

/// One stage of a composition: a pattern and the logical wires its inputs
/// (and outputs, in the same order) act on.
#[derive(Clone, Debug)]
pub struct Placement<'a> {
    pub pattern: &'a MeasurementPattern,
    pub wires: Vec<usize>,
}

/// Glues stages left to right on `n_wires` logical wires: each stage's input
/// qubits are identified with the current output qubits of its wires. Edges
/// added twice cancel (CZ is an involution). Untouched wires become single
/// unmeasured qubits, so the empty composition is the identity.
pub fn compose(stages: &[Placement<'_>], n_wires: usize) -> Result<MeasurementPattern, MbqcError> {
    let mut count = 0usize;
    let mut fresh = || {
        count += 1;
        count - 1
    };
    let mut wire_input: Vec<Option<Qubit>> = vec![None; n_wires];
    let mut wire_head: Vec<Option<Qubit>> = vec![None; n_wires];
    let mut edges: BTreeSet<(Qubit, Qubit)> = BTreeSet::new();
    let mut measurements = BTreeMap::new();
    let mut semantics = Vec::new();
    for (k, st) in stages.iter().enumerate() {
        let p = st.pattern;
        if p.inputs.len() != p.outputs.len() || p.inputs.len() != st.wires.len() {
            return Err(MbqcError::ArityMismatch {
                stage: k,
                msg: format!(
                    "{} inputs, {} outputs, {} wires",
                    p.inputs.len(),
                    p.outputs.len(),
                    st.wires.len()
                ),
            });
        }
        let mut seen = BTreeSet::new();
        for &w in &st.wires {
            if w >= n_wires || !seen.insert(w) {
                return Err(MbqcError::QubitCollision { stage: k, wire: w });
            }
        }
        let mut map: Vec<Option<Qubit>> = vec![None; p.graph.n()];
        for (i, &q) in p.inputs.iter().enumerate() {
            let w = st.wires[i];
            let glued = match wire_head[w] {
                Some(h) => h,
                None => {
                    let h = fresh();
                    wire_input[w] = Some(h);
                    h
                }
            };
            map[q] = Some(glued);
        }
        let map: Vec<Qubit> = map
            .into_iter()
            .map(|m| m.unwrap_or_else(&mut fresh))
            .collect();
        for &(a, b) in p.graph.edges() {
            let e = (map[a].min(map[b]), map[a].max(map[b]));
            if !edges.remove(&e) {
                edges.insert(e);
            }
        }
        for (&q, &t) in &p.measurements {
            measurements.insert(map[q], t);
        }
        for (i, &o) in p.outputs.iter().enumerate() {
            wire_head[st.wires[i]] = Some(map[o]);
        }
        semantics.extend(p.semantics.iter().map(|g| g.remap(&st.wires)));
    }
    for w in 0..n_wires {
        if wire_head[w].is_none() {
            let q = fresh();
            wire_input[w] = Some(q);
            wire_head[w] = Some(q);
        }
    }
    let graph = build_from_edges(count, edges)?;
    MeasurementPattern::new(
        graph,
        wire_input
            .into_iter()
            .map(|q| q.expect("every wire starts"))
            .collect(),
        wire_head
            .into_iter()
            .map(|q| q.expect("every wire ends"))
            .collect(),
        measurements,
        semantics,
    )
}

/// `H` on wire 0 followed by `CPhase(θ_k)` on wires `(k, k+1)`, each as the
/// bare patterns above.
pub fn compile_cphase_chain(thetas: &[f64]) -> Result<MeasurementPattern, MbqcError> {
    let h = compile_z_rotation(0.0);
    let cps: Vec<MeasurementPattern> = thetas.iter().map(|&t| compile_cphase(t)).collect();
    let mut stages = vec![Placement {
        pattern: &h,
        wires: vec![0],
    }];
    stages.extend(cps.iter().enumerate().map(|(k, p)| Placement {
        pattern: p,
        wires: vec![k, k + 1],
    }));
    compose(&stages, thetas.len() + 1)
}

/// A parsed gate list.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n_wires: usize,
    pub gates: Vec<Gate>,
}

/// Parses one gate per line: `RZ q θ`, `RX q θ`, `H q`, `CZ a b`,
/// `CNOT a b`, `CPHASE a b θ`; `#` starts a comment.
pub fn parse_circuit(text: &str) -> Result<Circuit, MbqcError> {
    let mut gates = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| MbqcError::Parse { line: k + 1, msg };
        let f: Vec<&str> = line.split_whitespace().collect();
        let wire = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(format!("bad qubit index {s:?}")))
        };
        let angle = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err(format!("bad angle {s:?}")))
        };
        let gate = match (f[0].to_ascii_uppercase().as_str(), &f[1..]) {
            ("RZ", [q, t]) => Gate::Rz {
                q: wire(q)?,
                theta: angle(t)?,
            },
            ("RX", [q, t]) => Gate::Rx {
                q: wire(q)?,
                theta: angle(t)?,
            },
            ("H", [q]) => Gate::H { q: wire(q)? },
            ("CZ", [a, b]) => Gate::Cz {
                a: wire(a)?,
                b: wire(b)?,
            },
            ("CNOT", [a, b]) => Gate::Cnot {
                control: wire(a)?,
                target: wire(b)?,
            },
            ("CPHASE", [a, b, t]) => Gate::Cphase {
                a: wire(a)?,
                b: wire(b)?,
                theta: angle(t)?,
            },
            (name, _) => return Err(err(format!("unknown gate or wrong operand count: {name}"))),
        };
        let n = gate.wires().into_iter().max().unwrap_or(0) + 1;
        gate.validate(n).map_err(|e| err(e.to_string()))?;
        gates.push(gate);
    }
    if gates.is_empty() {
        return Err(MbqcError::NoGates);
    }
    let n_wires = gates.iter().flat_map(Gate::wires).max().unwrap_or(0) + 1;
    Ok(Circuit { n_wires, gates })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CompileMode {
    /// Extra teleports cancel every by-product, so the semantics is the
    /// circuit itself.
    #[default]
    Exact,
    /// Each gate becomes its bare pattern; the declared semantics lists the
    /// by-products (Hadamards, local phases).
    Native,
}

/// Compiles a circuit into one composed pattern.
pub fn compile_circuit(c: &Circuit, mode: CompileMode) -> Result<MeasurementPattern, MbqcError> {
    let h = compile_z_rotation(0.0);
    let ishape = compile_cnot();
    let mut owned: Vec<(MeasurementPattern, Vec<usize>)> = Vec::new();
    let mut push = |p: &MeasurementPattern, wires: Vec<usize>| owned.push((p.clone(), wires));
    for g in &c.gates {
        match (mode, *g) {
            (CompileMode::Native, Gate::Rz { q, theta }) => {
                push(&compile_z_rotation(theta), vec![q])
            }
            (CompileMode::Native, Gate::Rx { q, theta }) => {
                push(&compile_rotation(0.0, theta, 0.0), vec![q])
            }
            (_, Gate::H { q }) => push(&h, vec![q]),
            (CompileMode::Native, Gate::Cz { a, b }) => push(&ishape, vec![a, b]),
            (CompileMode::Native, Gate::Cnot { control, target }) => {
                push(&ishape, vec![control, target])
            }
            (_, Gate::Cphase { a, b, theta }) => {
                push(&compile_cphase(theta), vec![a, b]);
                if mode == CompileMode::Exact {
                    for w in [a, b] {
                        push(&compile_z_rotation(theta / 4.0), vec![w]);
                        push(&h, vec![w]);
                    }
                }
            }
            (CompileMode::Exact, Gate::Rz { q, theta }) => {
                push(&compile_z_rotation(theta), vec![q]);
                push(&h, vec![q]);
            }
            (CompileMode::Exact, Gate::Rx { q, theta }) => {
                push(&h, vec![q]);
                push(&compile_z_rotation(theta), vec![q]);
            }
            (CompileMode::Exact, Gate::Cz { a, b }) => {
                for w in [a, b] {
                    push(&h, vec![w]);
                }
                push(&ishape, vec![a, b]);
                for w in [a, b] {
                    push(&h, vec![w]);
                }
            }
            (CompileMode::Exact, Gate::Cnot { control, target }) => {
                push(&h, vec![control]);
                push(&ishape, vec![control, target]);
                push(&h, vec![control]);
            }
        }
    }
    let stages: Vec<Placement<'_>> = owned
        .iter()
        .map(|(p, w)| Placement {
            pattern: p,
            wires: w.clone(),
        })
        .collect();
    let mut p = compose(&stages, c.n_wires)?;
    if mode == CompileMode::Exact {
        p.semantics = c.gates.clone();
    }
    Ok(p)
}

/// `⟨θ_out|_R`-projected scalar of the pattern on `|+⟩` inputs, computed
/// by simulation.
pub fn projected_scalar(p: &MeasurementPattern, output_angles: &[f64]) -> Result<C64, MbqcError> {
    if output_angles.len() != p.outputs.len() {
        return Err(MbqcError::InputSize {
            expected: p.outputs.len(),
            got: output_angles.len(),
        });
    }
    let din = 1usize << p.inputs.len();
    let plus = vec![C64::new((din as f64).sqrt().recip(), 0.0); din];
    let out = simulate_pattern(p, &plus)?;
    let l = p.outputs.len();
    Ok(out
        .iter()
        .enumerate()
        .map(|(y, &a)| {
            (0..l).fold(a, |acc, k| {
                acc * rotation_bra(output_angles[k])[y >> (l - 1 - k) & 1]
            })
        })
        .sum())
}
