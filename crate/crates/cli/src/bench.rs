//! Timing tables and the live-term growth table. Timing is sequential.

use std::hint::black_box;
use std::time::Instant;

use latticeproj::evaluate::profile;
use latticeproj::factorize::factorize;
use latticeproj::graph::{assign_slots, build_lattice, SlotStrategy};

use crate::config::{load_graphs, random_spec, NamedGraph};
use crate::engine::{applicable, Counters, Engine, EngineKind, OrderArg};
use crate::{csv_writer, BenchArgs, CliError};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub graph: String,
    pub qubits: usize,
    pub engine: EngineKind,
    pub trials: u64,
    pub median_s: f64,
    pub mean_s: f64,
    pub stddev_s: f64,
    /// Largest counters seen over the trials.
    pub counters: Option<Counters>,
}

/// Times each engine on the same `trials` random projections of `g`.
pub fn bench_graph(
    g: &NamedGraph,
    engines: &[Engine],
    seed: u64,
    trials: u64,
) -> Result<Vec<BenchRow>, CliError> {
    let mut samples = vec![Vec::with_capacity(trials as usize); engines.len()];
    let mut counters: Vec<Option<Counters>> = vec![None; engines.len()];
    for t in 0..trials {
        let spec = random_spec(g.graph.n(), seed, t);
        for (i, e) in engines.iter().enumerate() {
            let start = Instant::now();
            let out = black_box(e.evaluate(black_box(&g.graph), black_box(&spec))?);
            samples[i].push(start.elapsed().as_secs_f64());
            if let Some(c) = out.counters {
                let prev = counters[i].get_or_insert(c);
                prev.add = prev.add.max(c.add);
                prev.mul = prev.mul.max(c.mul);
                prev.max_live_terms = prev.max_live_terms.max(c.max_live_terms);
            }
        }
    }
    Ok(engines
        .iter()
        .zip(samples)
        .zip(counters)
        .map(|((e, s), c)| {
            let (median_s, mean_s, stddev_s) = summary(&s);
            BenchRow {
                graph: g.name.clone(),
                qubits: g.graph.n(),
                engine: e.kind(),
                trials,
                median_s,
                mean_s,
                stddev_s,
                counters: c,
            }
        })
        .collect())
}

/// Median, mean and sample standard deviation.
pub fn summary(xs: &[f64]) -> (f64, f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    };
    let mean = v.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    (median, mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthRow {
    pub height: usize,
    pub width: usize,
    pub qubits: usize,
    pub max_active_slots: usize,
    pub live_term_bound: usize,
    pub max_live_terms: usize,
    pub add_count: u64,
    pub mul_count: u64,
}

/// Sweep cost on `height × w` lattices of crosses for each width, one random
/// projection per lattice.
pub fn width_sweep(
    height: usize,
    widths: std::ops::RangeInclusive<usize>,
    order: OrderArg,
    seed: u64,
) -> Result<Vec<WidthRow>, CliError> {
    widths
        .map(|w| {
            let g = build_lattice(height, w).map_err(|e| CliError::Config(e.to_string()))?;
            let a = assign_slots(&g, SlotStrategy::Bipartite).map_err(latticeproj::Error::from)?;
            let spec = random_spec(g.n(), seed, 0);
            let poly = factorize(&g, &a, &spec).map_err(latticeproj::Error::from)?;
            let row = profile(&poly, &g, &a, &[order.strategy(&g)])?.remove(0);
            Ok(WidthRow {
                height,
                width: w,
                qubits: g.n(),
                max_active_slots: row.max_active_slots,
                live_term_bound: row.live_term_bound(),
                max_live_terms: row.report.max_live_terms,
                add_count: row.report.add_count,
                mul_count: row.report.mul_count,
            })
        })
        .collect()
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let bad = || CliError::Config(format!("--widths {s:?}: expected A..B"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b): (usize, usize) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    let mut w = csv_writer(args.out.as_ref())?;
    if args.width_sweep {
        let rows = width_sweep(
            args.height,
            parse_range(&args.widths)?,
            args.order,
            args.seed,
        )?;
        w.write_record([
            "height",
            "width",
            "qubits",
            "max_active_slots",
            "live_term_bound",
            "max_live_terms",
            "add_count",
            "mul_count",
        ])?;
        for r in rows {
            w.write_record([
                r.height.to_string(),
                r.width.to_string(),
                r.qubits.to_string(),
                r.max_active_slots.to_string(),
                r.live_term_bound.to_string(),
                r.max_live_terms.to_string(),
                r.add_count.to_string(),
                r.mul_count.to_string(),
            ])?;
        }
        w.flush().map_err(|e| CliError::Csv(e.into()))?;
        return Ok(());
    }
    if args.trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    let graphs = load_graphs(&args.graph.graphs, &args.graph.builders)?;
    w.write_record([
        "graph",
        "qubits",
        "engine",
        "trials",
        "median_s",
        "mean_s",
        "stddev_s",
        "add_count",
        "mul_count",
        "max_live_terms",
    ])?;
    for g in &graphs {
        let engines = if args.engines.is_empty() {
            applicable(&g.graph, args.order)
        } else {
            args.engines
                .iter()
                .map(|&k| Engine::new(k, &g.graph, args.order))
                .collect::<Result<_, _>>()?
        };
        for r in bench_graph(g, &engines, args.seed, args.trials)? {
            let c = |f: fn(&Counters) -> String| r.counters.as_ref().map(f).unwrap_or_default();
            w.write_record([
                r.graph.clone(),
                r.qubits.to_string(),
                r.engine.name().to_string(),
                r.trials.to_string(),
                format!("{:e}", r.median_s),
                format!("{:e}", r.mean_s),
                format!("{:e}", r.stddev_s),
                c(|c| c.add.to_string()),
                c(|c| c.mul.to_string()),
                c(|c| c.max_live_terms.to_string()),
            ])?;
        }
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}
