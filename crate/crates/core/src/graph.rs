//! Cluster-state graphs, their control/target split, and the assignment of
//! trace slots to owner qubits.
//!
//! Built graphs use one canonical indexing: lattice corners row-major first,
//! then cross centers row-major. The cross chain is the one-row lattice. Each
//! qubit also carries a human-readable label (`c(r,c)` for corners,
//! `x(i,j)` for centers) for diagnostics.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::Slot;

pub type Qubit = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("self-loop on qubit {0}")]
    SelfLoop(Qubit),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Qubit, Qubit),
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: Qubit, n: usize },
    #[error("graph is not bipartite: odd cycle through qubit {0}")]
    OddCycle(Qubit),
    #[error("graph file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Rows and columns of crosses of a lattice built by [`build_lattice`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeShape {
    pub rows: usize,
    pub cols: usize,
}

impl LatticeShape {
    pub fn qubits(self) -> usize {
        (self.rows + 1) * (self.cols + 1) + self.rows * self.cols
    }

    pub fn corner(self, r: usize, c: usize) -> Qubit {
        r * (self.cols + 1) + c
    }

    pub fn center(self, i: usize, j: usize) -> Qubit {
        (self.rows + 1) * (self.cols + 1) + i * self.cols + j
    }

    pub fn is_center(self, q: Qubit) -> bool {
        q >= (self.rows + 1) * (self.cols + 1)
    }

    /// Doubled coordinates `(y, x)`: corners on even points, centers on odd.
    pub fn position(self, q: Qubit) -> (usize, usize) {
        let ncorner = (self.rows + 1) * (self.cols + 1);
        if q < ncorner {
            (2 * (q / (self.cols + 1)), 2 * (q % (self.cols + 1)))
        } else {
            let k = q - ncorner;
            (2 * (k / self.cols) + 1, 2 * (k % self.cols) + 1)
        }
    }

    fn edges(self) -> Vec<(Qubit, Qubit)> {
        let mut edges = Vec::with_capacity(4 * self.rows * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.center(i, j);
                for (r, c) in [(i, j), (i, j + 1), (i + 1, j), (i + 1, j + 1)] {
                    edges.push((self.corner(r, c), x));
                }
            }
        }
        edges
    }
}

/// Undirected simple graph whose edges are the CZ gates of a cluster state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterGraph {
    n: usize,
    edges: Vec<(Qubit, Qubit)>,
    adj: Vec<Vec<Qubit>>,
    labels: Vec<String>,
    lattice: Option<LatticeShape>,
}

impl ClusterGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(low, high)` pairs in ascending order.
    pub fn edges(&self) -> &[(Qubit, Qubit)] {
        &self.edges
    }

    pub fn neighbors(&self, q: Qubit) -> &[Qubit] {
        &self.adj[q]
    }

    pub fn edge_index(&self, a: Qubit, b: Qubit) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    pub fn label(&self, q: Qubit) -> &str {
        &self.labels[q]
    }

    /// The cross-lattice shape, when this graph is (index for index) the
    /// output of [`build_lattice`].
    pub fn lattice_shape(&self) -> Option<LatticeShape> {
        if self.lattice.is_some() {
            return self.lattice;
        }
        for rows in 1..=self.n {
            for cols in 1..=self.n {
                let shape = LatticeShape { rows, cols };
                if shape.qubits() > self.n {
                    break;
                }
                if shape.qubits() == self.n {
                    let mut e: Vec<_> = shape.edges();
                    e.sort_unstable();
                    if e == self.edges {
                        return Some(shape);
                    }
                }
            }
        }
        None
    }

    /// Serializes to the text graph format.
    pub fn to_graph_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "{a} {b}");
        }
        s
    }

    fn from_validated(n: usize, mut edges: Vec<(Qubit, Qubit)>, labels: Vec<String>) -> Self {
        edges.sort_unstable();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        ClusterGraph {
            n,
            edges,
            adj,
            labels,
            lattice: None,
        }
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|q| q.to_string()).collect()
}

pub fn build_line(n: usize) -> Result<ClusterGraph, GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidSize(
            "line needs at least one qubit".into(),
        ));
    }
    let edges = (0..n - 1).map(|k| (k, k + 1)).collect();
    Ok(ClusterGraph::from_validated(n, edges, default_labels(n)))
}

pub fn build_cross_chain(k: usize) -> Result<ClusterGraph, GraphError> {
    if k == 0 {
        return Err(GraphError::InvalidSize(
            "cross chain needs at least one cross".into(),
        ));
    }
    build_lattice(1, k)
}

pub fn build_lattice(rows: usize, cols: usize) -> Result<ClusterGraph, GraphError> {
    if rows == 0 || cols == 0 {
        return Err(GraphError::InvalidSize(format!(
            "lattice needs at least one cross per side, got {rows}x{cols}"
        )));
    }
    let shape = LatticeShape { rows, cols };
    let n = shape.qubits();
    let mut labels = Vec::with_capacity(n);
    for r in 0..=rows {
        for c in 0..=cols {
            labels.push(format!("c({r},{c})"));
        }
    }
    for i in 0..rows {
        for j in 0..cols {
            labels.push(format!("x({i},{j})"));
        }
    }
    let mut g = ClusterGraph::from_validated(n, shape.edges(), labels);
    g.lattice = Some(shape);
    Ok(g)
}

/// Square grid of `rows × cols` qubits with nearest-neighbour edges, indexed
/// row-major.
pub fn build_grid(rows: usize, cols: usize) -> Result<ClusterGraph, GraphError> {
    if rows == 0 || cols == 0 {
        return Err(GraphError::InvalidSize(format!(
            "grid needs at least one qubit per side, got {rows}x{cols}"
        )));
    }
    let idx = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((idx(r, c), idx(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((idx(r, c), idx(r + 1, c)));
            }
        }
    }
    let labels = (0..rows * cols)
        .map(|q| format!("g({},{})", q / cols, q % cols))
        .collect();
    Ok(ClusterGraph::from_validated(rows * cols, edges, labels))
}

pub fn build_from_edges(
    n: usize,
    pairs: impl IntoIterator<Item = (Qubit, Qubit)>,
) -> Result<ClusterGraph, GraphError> {
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for (a, b) in pairs {
        for index in [a, b] {
            if index >= n {
                return Err(GraphError::IndexOutOfRange { index, n });
            }
        }
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        let e = (a.min(b), a.max(b));
        if !seen.insert(e) {
            return Err(GraphError::DuplicateEdge(e.0, e.1));
        }
        edges.push(e);
    }
    Ok(ClusterGraph::from_validated(n, edges, default_labels(n)))
}

/// Parses the text graph format: first line `n`, then one `a b` edge per
/// line, 0-indexed; `#` starts a comment.
pub fn parse_graph(text: &str) -> Result<ClusterGraph, GraphError> {
    let mut n = None;
    let mut pairs = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| GraphError::Parse { line: k + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(format!("expected a non-negative integer, got {s:?}")))
        };
        match (n, fields.as_slice()) {
            (None, [count]) => n = Some(parse(count)?),
            (None, _) => return Err(err("first line must hold the qubit count".into())),
            (Some(_), [a, b]) => pairs.push((parse(a)?, parse(b)?)),
            (Some(_), _) => return Err(err("expected an edge `a b`".into())),
        }
    }
    let n = n.ok_or(GraphError::Parse {
        line: 0,
        msg: "empty graph file".into(),
    })?;
    if n == 0 {
        return Err(GraphError::InvalidSize(
            "graph needs at least one qubit".into(),
        ));
    }
    build_from_edges(n, pairs)
}

/// Two-colouring into independent control and target sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub controls: Vec<Qubit>,
    pub targets: Vec<Qubit>,
}

impl Bipartition {
    pub fn is_control(&self, q: Qubit) -> bool {
        self.controls.binary_search(&q).is_ok()
    }
}

/// Splits a bipartite graph; controls are the smaller colour class (ties go
/// to the class holding qubit 0). Each component is coloured from its lowest
/// qubit with colour 0.
pub fn bipartition(g: &ClusterGraph) -> Result<Bipartition, GraphError> {
    let mut color: Vec<Option<bool>> = vec![None; g.n()];
    for start in 0..g.n() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            let cq = color[q].unwrap_or(false);
            for &nb in g.neighbors(q) {
                match color[nb] {
                    None => {
                        color[nb] = Some(!cq);
                        queue.push_back(nb);
                    }
                    Some(c) if c == cq => return Err(GraphError::OddCycle(nb)),
                    Some(_) => {}
                }
            }
        }
    }
    let (zero, one): (Vec<Qubit>, Vec<Qubit>) = (0..g.n()).partition(|&q| color[q] == Some(false));
    let (controls, targets) = if one.len() < zero.len() {
        (one, zero)
    } else {
        (zero, one)
    };
    Ok(Bipartition { controls, targets })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotStrategy {
    /// Owners are the controls of [`bipartition`].
    Bipartite,
    /// Owners are all qubits but the last, reproducing the per-edge line
    /// factorization.
    LineChain,
    /// Greedy vertex cover; works on any graph.
    GreedyCover,
}

/// Which qubits carry trace slots, and which endpoint tracks each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotAssignment {
    owners: Vec<Qubit>,
    slot_of: Vec<Option<Slot>>,
    edge_owner: Vec<Qubit>,
}

impl SlotAssignment {
    /// Owner qubits in ascending order; owner `k` holds slot `k`.
    pub fn owners(&self) -> &[Qubit] {
        &self.owners
    }

    pub fn slot_of(&self, q: Qubit) -> Option<Slot> {
        self.slot_of[q]
    }

    pub fn slot_count(&self) -> usize {
        self.owners.len()
    }

    /// Owner of slot `s`.
    pub fn owner_of(&self, s: Slot) -> Qubit {
        self.owners[s]
    }

    /// Endpoint tracking edge `e` (indexed as in [`ClusterGraph::edges`]).
    pub fn edge_owner(&self, e: usize) -> Qubit {
        self.edge_owner[e]
    }

    /// Builds an assignment from an explicit owner set, which must cover
    /// every edge.
    pub fn from_owners(g: &ClusterGraph, owners: &BTreeSet<Qubit>) -> Option<Self> {
        let mut slot_of = vec![None; g.n()];
        for (s, &q) in owners.iter().enumerate() {
            slot_of[q] = Some(s);
        }
        let edge_owner = g
            .edges()
            .iter()
            .map(|&(a, b)| match (slot_of[a], slot_of[b]) {
                (Some(_), _) => Some(a),
                (None, Some(_)) => Some(b),
                (None, None) => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(SlotAssignment {
            owners: owners.iter().copied().collect(),
            slot_of,
            edge_owner,
        })
    }
}

pub fn assign_slots(
    g: &ClusterGraph,
    strategy: SlotStrategy,
) -> Result<SlotAssignment, GraphError> {
    let owners: BTreeSet<Qubit> = match strategy {
        SlotStrategy::Bipartite => bipartition(g)?.controls.into_iter().collect(),
        SlotStrategy::LineChain => (0..g.n() - 1).collect(),
        SlotStrategy::GreedyCover => greedy_cover(g),
    };
    Ok(SlotAssignment::from_owners(g, &owners).expect("every strategy yields a vertex cover"))
}

fn greedy_cover(g: &ClusterGraph) -> BTreeSet<Qubit> {
    let mut uncovered: BTreeSet<usize> = (0..g.edges().len()).collect();
    let mut cover = BTreeSet::new();
    while !uncovered.is_empty() {
        let mut degree = vec![0usize; g.n()];
        for &e in &uncovered {
            let (a, b) = g.edges()[e];
            degree[a] += 1;
            degree[b] += 1;
        }
        // max_by_key keeps the last maximum; iterate in reverse for lowest index.
        let best = (0..g.n()).rev().max_by_key(|&q| degree[q]).unwrap_or(0);
        cover.insert(best);
        uncovered.retain(|&e| {
            let (a, b) = g.edges()[e];
            a != best && b != best
        });
    }
    cover
}
