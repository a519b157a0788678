//! Uniform front for every way of computing an amplitude.

use clap::ValueEnum;
use latticeproj::evaluate::{
    column_evaluate, cross_chain_recursion, line_recursion, sweep_evaluate, ColumnOptions,
    RecurrencePlan,
};
use latticeproj::factorize::{prepare, OrderStrategy};
use latticeproj::graph::{bipartition, build_line, Bipartition, ClusterGraph};
use latticeproj::oracle::{
    build_statevector, direct_sum, project_statevector, statevector_cap, MAX_DIRECT_SUM_CONTROLS,
};
use latticeproj::{Amplitude, Projection};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum EngineKind {
    Statevector,
    DirectSum,
    Sweep,
    LineRecursion,
    CrossRecursion,
    Column,
    /// The sweep compiled once per graph into a fixed recurrence.
    Recursion,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Statevector => "statevector",
            EngineKind::DirectSum => "direct-sum",
            EngineKind::Sweep => "sweep",
            EngineKind::LineRecursion => "line-recursion",
            EngineKind::CrossRecursion => "cross-recursion",
            EngineKind::Column => "column",
            EngineKind::Recursion => "recursion",
        }
    }

    pub const ALL: [EngineKind; 7] = [
        EngineKind::Statevector,
        EngineKind::DirectSum,
        EngineKind::Sweep,
        EngineKind::LineRecursion,
        EngineKind::CrossRecursion,
        EngineKind::Column,
        EngineKind::Recursion,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum OrderArg {
    /// Anti-diagonal on lattices, greedy elsewhere.
    #[default]
    Auto,
    AsBuilt,
    RowMajor,
    AntiDiagonal,
    Greedy,
}

impl OrderArg {
    pub fn strategy(self, g: &ClusterGraph) -> OrderStrategy {
        match self {
            OrderArg::Auto => OrderStrategy::default_for(g),
            OrderArg::AsBuilt => OrderStrategy::AsBuilt,
            OrderArg::RowMajor => OrderStrategy::RowMajor,
            OrderArg::AntiDiagonal => OrderStrategy::AntiDiagonal,
            OrderArg::Greedy => OrderStrategy::Greedy,
        }
    }
}

/// Amplitude plus the sweep-style counters, when the engine keeps them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outcome {
    pub amplitude: Amplitude,
    pub counters: Option<Counters>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counters {
    pub add: u64,
    pub mul: u64,
    pub max_live_terms: usize,
}

impl From<latticeproj::Report> for Outcome {
    fn from(r: latticeproj::Report) -> Self {
        Outcome {
            amplitude: r.amplitude,
            counters: Some(Counters {
                add: r.add_count,
                mul: r.mul_count,
                max_live_terms: r.max_live_terms,
            }),
        }
    }
}

enum Prepared {
    Statevector,
    DirectSum(Bipartition),
    Sweep(OrderStrategy),
    Line,
    Cross(usize),
    Column,
    Plan(RecurrencePlan),
}

/// An engine checked against one graph. Only the compiled recurrence keeps
/// per-graph work between calls; the others start from the graph and angles
/// every time.
pub struct Engine {
    kind: EngineKind,
    prepared: Prepared,
}

impl Engine {
    pub fn new(kind: EngineKind, g: &ClusterGraph, order: OrderArg) -> Result<Self, CliError> {
        let na =
            |why: String| CliError::Config(format!("engine {} does not apply: {why}", kind.name()));
        let prepared = match kind {
            EngineKind::Statevector => {
                let cap = statevector_cap();
                if g.n() > cap {
                    return Err(na(format!(
                        "{} qubits exceed the state-vector cap of {cap}",
                        g.n()
                    )));
                }
                Prepared::Statevector
            }
            EngineKind::DirectSum => {
                let b = bipartition(g).map_err(|e| na(e.to_string()))?;
                if b.controls.len() > MAX_DIRECT_SUM_CONTROLS {
                    return Err(na(format!(
                        "{} controls exceed the limit of {MAX_DIRECT_SUM_CONTROLS}",
                        b.controls.len()
                    )));
                }
                Prepared::DirectSum(b)
            }
            EngineKind::Sweep => Prepared::Sweep(order.strategy(g)),
            EngineKind::LineRecursion => {
                if g.n() < 3
                    || build_line(g.n())
                        .map(|l| l.edges() != g.edges())
                        .unwrap_or(true)
                {
                    return Err(na(
                        "graph is not a line 0-1-...-(n-1) of at least 3 qubits".into()
                    ));
                }
                Prepared::Line
            }
            EngineKind::CrossRecursion => match g.lattice_shape() {
                Some(s) if s.rows == 1 => Prepared::Cross(s.cols),
                _ => return Err(na("graph is not a single row of crosses".into())),
            },
            EngineKind::Column => {
                let s = g
                    .lattice_shape()
                    .ok_or_else(|| na("graph is not a lattice of crosses".into()))?;
                let cap = ColumnOptions::default().max_rows;
                if s.rows > cap {
                    return Err(na(format!(
                        "{} rows exceed the column cap of {cap}",
                        s.rows
                    )));
                }
                Prepared::Column
            }
            EngineKind::Recursion => {
                let zero = Projection::uniform(g.n(), 0.0, 0.0).expect("finite");
                let poly = prepare(g, &zero, &order.strategy(g))?;
                Prepared::Plan(RecurrencePlan::compile(&poly).map_err(latticeproj::Error::from)?)
            }
        };
        Ok(Engine { kind, prepared })
    }

    pub fn kind(&self) -> EngineKind {
        self.kind
    }

    pub fn evaluate(&self, g: &ClusterGraph, spec: &Projection) -> Result<Outcome, CliError> {
        use latticeproj::Error as E;
        let out = match &self.prepared {
            Prepared::Statevector => {
                let sv = build_statevector(g).map_err(E::from)?;
                Outcome {
                    amplitude: project_statevector(&sv, spec).map_err(E::from)?,
                    counters: None,
                }
            }
            Prepared::DirectSum(b) => Outcome {
                amplitude: direct_sum(g, b, spec).map_err(E::from)?,
                counters: None,
            },
            Prepared::Sweep(order) => sweep_evaluate(&prepare(g, spec, order)?)
                .map_err(E::from)?
                .into(),
            Prepared::Line => line_recursion(spec).map_err(E::from)?.into(),
            Prepared::Cross(k) => cross_chain_recursion(spec, *k).map_err(E::from)?.into(),
            Prepared::Column => column_evaluate(g, spec, &ColumnOptions::default())
                .map_err(E::from)?
                .into(),
            Prepared::Plan(plan) => plan.evaluate(spec).map_err(E::from)?.into(),
        };
        Ok(out)
    }
}

/// Every engine that applies to `g`, in [`EngineKind::ALL`] order.
pub fn applicable(g: &ClusterGraph, order: OrderArg) -> Vec<Engine> {
    EngineKind::ALL
        .iter()
        .filter_map(|&k| Engine::new(k, g, order).ok())
        .collect()
}
