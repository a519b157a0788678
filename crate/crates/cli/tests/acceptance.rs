//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances and time budgets are pinned below.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use latticeproj::algebra::{
    letter_mul, letter_trace, word_trace, Letter, SignedLetter, TensorWord,
};
use latticeproj::evaluate::{
    column_evaluate, cross_chain_recursion, line_recursion, profile, sweep_evaluate, ColumnOptions,
};
use latticeproj::factorize::{factorize, max_active_slots, prepare, OrderStrategy};
use latticeproj::graph::{
    assign_slots, bipartition, build_cross_chain, build_grid, build_lattice, build_line,
    parse_graph, ClusterGraph, SlotStrategy,
};
use latticeproj::mbqc::{
    compile_cnot, compile_cphase, compile_cphase_chain, compile_rotation, compile_z_rotation,
    projected_scalar, semantics_residual, MeasurementPattern,
};
use latticeproj::oracle::{build_statevector, direct_sum, project_statevector, statevector_cap};
use latticeproj::{Amplitude, Projection};
use latticeproj_cli::bench::{bench_graph, width_sweep};
use latticeproj_cli::config::{random_spec, NamedGraph};
use latticeproj_cli::engine::{Engine, EngineKind, OrderArg};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SWEEP_TOL: f64 = 1e-9;
const DIRECT_SUM_TOL: f64 = 1e-10;
const CLOSED_FORM_TOL: f64 = 1e-12;
const RATIO_TOL: f64 = 0.10;
const PATTERN_TOL: f64 = 1e-9;
const TRIALS: u64 = 31;
const BENCH_TRIALS: u64 = 25;
const BUDGET_ALGEBRA: Duration = Duration::from_secs(1);
const BUDGET_FACTORIZATION: Duration = Duration::from_secs(120);
const BUDGET_MBQC: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> ClusterGraph {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    parse_graph(
        &std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display())),
    )
    .expect("fixture parses")
}

fn sweep(g: &ClusterGraph, spec: &Projection) -> Amplitude {
    sweep_evaluate(&prepare(g, spec, &OrderStrategy::default_for(g)).expect("factorizes"))
        .expect("sweeps")
        .amplitude
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Reference amplitude by an oracle: state vector when it fits, else the
/// direct sum.
struct Reference {
    sv: Option<latticeproj::State>,
}

impl Reference {
    fn new(g: &ClusterGraph) -> Self {
        Reference {
            sv: (g.n() <= statevector_cap()).then(|| build_statevector(g).expect("fits")),
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let diag = |l: Letter| -> [f64; 2] {
        match l {
            Letter::I => [1.0, 1.0],
            Letter::Z => [1.0, -1.0],
            Letter::U => [1.0, 0.0],
            Letter::D => [0.0, 1.0],
        }
    };
    for a in Letter::ALL {
        check(letter_trace(a) == diag(a)[0] + diag(a)[1], || {
            format!("trace of {a}")
        })?;
        for b in Letter::ALL {
            let want = [diag(a)[0] * diag(b)[0], diag(a)[1] * diag(b)[1]];
            let got = match letter_mul(a, b) {
                SignedLetter::Zero => [0.0, 0.0],
                SignedLetter::Signed(s, l) => {
                    let k = f64::from(s.as_i8());
                    [k * diag(l)[0], k * diag(l)[1]]
                }
            };
            check(got == want, || format!("{a}·{b}: {got:?} vs {want:?}"))?;
        }
    }
    let mut words = 0;
    for slots in 0..=6usize {
        let domain: BTreeSet<usize> = (0..slots).collect();
        for code in 0..4usize.pow(slots as u32) {
            let letters: Vec<Letter> = (0..slots)
                .map(|s| Letter::ALL[code / 4usize.pow(s as u32) % 4])
                .collect();
            let w = TensorWord::from_entries(letters.iter().copied().enumerate());
            let kron = letters.iter().fold(vec![1.0], |acc, &l| {
                acc.iter()
                    .flat_map(|&x| [x * diag(l)[0], x * diag(l)[1]])
                    .collect::<Vec<f64>>()
            });
            let want: f64 = kron.iter().sum();
            let got = word_trace(&w, &domain).map_err(|e| e.to_string())?;
            check(got == want, || format!("trace of {w}: {got} vs {want}"))?;
            words += 1;
        }
    }
    let t = start.elapsed();
    check(t < BUDGET_ALGEBRA, || format!("took {t:?}"))?;
    Ok(format!(
        "16 products, 4 traces, {words} words exact; {:.3} s",
        t.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut graphs: Vec<(String, ClusterGraph)> = Vec::new();
    for n in 2..=12 {
        graphs.push((format!("line {n}"), build_line(n).unwrap()));
    }
    for k in 1..=4 {
        graphs.push((format!("cross chain {k}"), build_cross_chain(k).unwrap()));
    }
    for (r, c) in [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (4, 4)] {
        graphs.push((format!("lattice {r}x{c}"), build_lattice(r, c).unwrap()));
    }
    for (r, c) in [(2, 2), (2, 3), (3, 4), (4, 4)] {
        graphs.push((format!("grid {r}x{c}"), build_grid(r, c).unwrap()));
    }
    graphs.push(("lattice_3x3 fixture".into(), fixture("lattice_3x3.graph")));
    graphs.push(("five-cross fixture".into(), fixture("fivecross_17.graph")));
    let (mut worst_sweep, mut worst_ds, mut by_direct) = (0.0f64, 0.0f64, 0);
    for (name, g) in &graphs {
        let reference = Reference::new(g);
        let b = bipartition(g).map_err(|e| format!("{name}: {e}"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(g.n() as u64);
        for t in 0..TRIALS {
            let spec = random_projection(g.n(), &mut rng);
            let ds = direct_sum(g, &b, &spec).map_err(|e| e.to_string())?;
            let sw = sweep(g, &spec);
            match &reference.sv {
                Some(sv) => {
                    let want = project_statevector(sv, &spec).map_err(|e| e.to_string())?;
                    worst_sweep = worst_sweep.max((sw - want).norm());
                    worst_ds = worst_ds.max((ds - want).norm());
                    check((sw - want).norm() <= SWEEP_TOL, || {
                        format!("{name} trial {t}: sweep off by {:e}", (sw - want).norm())
                    })?;
                    check((ds - want).norm() <= DIRECT_SUM_TOL, || {
                        format!(
                            "{name} trial {t}: direct sum off by {:e}",
                            (ds - want).norm()
                        )
                    })?;
                }
                None => {
                    worst_sweep = worst_sweep.max((sw - ds).norm());
                    check((sw - ds).norm() <= SWEEP_TOL, || {
                        format!(
                            "{name} trial {t}: sweep vs direct sum {:e}",
                            (sw - ds).norm()
                        )
                    })?;
                }
            }
        }
        if reference.sv.is_none() {
            by_direct += 1;
        }
    }
    let t = start.elapsed();
    check(t < BUDGET_FACTORIZATION, || format!("took {t:?}"))?;
    Ok(format!(
        "{} graphs x {TRIALS} trials; worst sweep {worst_sweep:.1e}, direct sum {worst_ds:.1e}; {by_direct} graphs past the state-vector cap checked against the direct sum; {:.1} s",
        graphs.len(),
        t.as_secs_f64()
    ))
}

fn random_projection(n: usize, rng: &mut ChaCha8Rng) -> Projection {
    let theta = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
    let phi = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
    Projection::new(theta, phi).unwrap()
}

fn criterion_3() -> Outcome {
    let plus = |n| Projection::uniform(n, FRAC_PI_4, 0.0).unwrap();
    let bell = sweep(&build_line(2).unwrap(), &plus(2));
    check(
        (bell - Amplitude::new(0.5, 0.0)).norm() <= CLOSED_FORM_TOL,
        || format!("Bell {bell}"),
    )?;
    let ghz = sweep(&build_cross_chain(1).unwrap(), &plus(5));
    check(
        (ghz - Amplitude::new(0.5, 0.0)).norm() <= CLOSED_FORM_TOL,
        || format!("GHZ cross {ghz}"),
    )?;
    let zero_graphs = [
        build_line(9).unwrap(),
        build_cross_chain(3).unwrap(),
        build_lattice(3, 3).unwrap(),
        build_grid(4, 4).unwrap(),
        fixture("fivecross_17.graph"),
        fixture("scaling_b7.graph"),
    ];
    for g in &zero_graphs {
        let got = sweep(g, &Projection::uniform(g.n(), 0.0, 0.0).unwrap());
        let want = 0.5f64.powf(g.n() as f64 / 2.0);
        check((got - want).norm() <= CLOSED_FORM_TOL, || {
            format!("all-zero on {} qubits: {got}", g.n())
        })?;
    }
    Ok(format!(
        "Bell {:.3}, GHZ cross {:.3}, all-<0| on {} graphs",
        bell.re,
        ghz.re,
        zero_graphs.len()
    ))
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    for n in 3..=12 {
        let g = build_line(n).unwrap();
        let sv = build_statevector(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(40 + n as u64);
        for _ in 0..TRIALS {
            let spec = random_projection(n, &mut rng);
            let rec = line_recursion(&spec).map_err(|e| e.to_string())?.amplitude;
            let want = project_statevector(&sv, &spec).unwrap();
            let sw = sweep(&g, &spec);
            worst = worst.max((rec - want).norm()).max((rec - sw).norm());
        }
    }
    check(worst <= SWEEP_TOL, || format!("worst deviation {worst:e}"))?;
    let counts: Vec<(u64, u64)> = [64, 128, 256]
        .iter()
        .map(|&n| {
            let r = line_recursion(&random_spec(n, 4, 0)).unwrap();
            (r.add_count, r.mul_count)
        })
        .collect();
    let mut ratios = Vec::new();
    for w in counts.windows(2) {
        for r in [w[1].0 as f64 / w[0].0 as f64, w[1].1 as f64 / w[0].1 as f64] {
            check((r - 2.0).abs() <= 2.0 * RATIO_TOL, || {
                format!("ratio {r} in {counts:?}")
            })?;
            ratios.push(r);
        }
    }
    Ok(format!(
        "n=3..12 worst {worst:.1e}; (add, mul) at 64/128/256 = {counts:?}, ratios {}",
        ratios
            .iter()
            .map(|r| format!("{r:.3}"))
            .collect::<Vec<_>>()
            .join(" ")
    ))
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0f64;
    for k in 1..=4 {
        let g = build_cross_chain(k).unwrap();
        let sv = build_statevector(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(50 + k as u64);
        for _ in 0..TRIALS {
            let spec = random_projection(g.n(), &mut rng);
            let got = cross_chain_recursion(&spec, k)
                .map_err(|e| e.to_string())?
                .amplitude;
            worst = worst.max((got - project_statevector(&sv, &spec).unwrap()).norm());
        }
    }
    check(worst <= SWEEP_TOL, || format!("worst deviation {worst:e}"))?;
    Ok(format!("k=1..4 x {TRIALS} trials, worst {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    let shapes = [
        (1, 1),
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 1),
        (2, 2),
        (2, 3),
        (3, 2),
        (3, 3),
    ];
    for (r, c) in shapes {
        let g = build_lattice(r, c).unwrap();
        let reference = Reference::new(&g);
        let b = bipartition(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(60 + (10 * r + c) as u64);
        for _ in 0..TRIALS {
            let spec = random_projection(g.n(), &mut rng);
            let col = column_evaluate(&g, &spec, &ColumnOptions::default())
                .map_err(|e| e.to_string())?
                .amplitude;
            let oracle = match &reference.sv {
                Some(sv) => project_statevector(sv, &spec).unwrap(),
                None => direct_sum(&g, &b, &spec).unwrap(),
            };
            worst = worst
                .max((col - oracle).norm())
                .max((col - sweep(&g, &spec)).norm());
            if r == 1 {
                // One row of crosses is the cross chain.
                let chain = cross_chain_recursion(&spec, c).unwrap().amplitude;
                worst = worst.max((col - chain).norm());
            }
        }
    }
    check(worst <= SWEEP_TOL, || format!("worst deviation {worst:e}"))?;
    Ok(format!(
        "{} shapes up to 3x3 incl. single rows, worst {worst:.1e}",
        shapes.len()
    ))
}

fn criterion_7() -> Outcome {
    let g = fixture("fivecross_17.graph");
    let a = assign_slots(&g, SlotStrategy::Bipartite).map_err(|e| e.to_string())?;
    let spec = random_spec(g.n(), 7, 0);
    let poly = factorize(&g, &a, &spec).map_err(|e| e.to_string())?;
    let shipped = OrderStrategy::default_for(&g);
    let row = profile(&poly, &g, &a, std::slice::from_ref(&shipped))
        .map_err(|e| e.to_string())?
        .remove(0);
    check(row.max_active_slots <= 5, || {
        format!("max active slots {}", row.max_active_slots)
    })?;
    check(row.report.max_live_terms <= 4usize.pow(5), || {
        format!("live terms {}", row.report.max_live_terms)
    })?;
    let ordered = prepare(&g, &spec, &shipped).map_err(|e| e.to_string())?;
    check(max_active_slots(&ordered) == row.max_active_slots, || {
        "profiler and ordering disagree".into()
    })?;
    Ok(format!(
        "{shipped:?} order: max active slots {}, max live terms {} <= 4^5",
        row.max_active_slots, row.report.max_live_terms
    ))
}

fn criterion_8() -> Outcome {
    let kinds = [
        EngineKind::Recursion,
        EngineKind::Sweep,
        EngineKind::Statevector,
    ];
    let mut medians = Vec::new();
    for name in ["scaling_a4.graph", "scaling_b7.graph", "scaling_c12.graph"] {
        let g = NamedGraph {
            name: name.into(),
            graph: fixture(name),
        };
        let engines: Vec<Engine> = kinds
            .iter()
            .map(|&k| Engine::new(k, &g.graph, OrderArg::Auto))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let rows = bench_graph(&g, &engines, 8, BENCH_TRIALS).map_err(|e| e.to_string())?;
        medians.push((
            g.graph.n(),
            rows.iter().map(|r| r.median_s).collect::<Vec<_>>(),
        ));
    }
    let fmt = |m: &[f64]| {
        m.iter()
            .map(|x| format!("{:.2e}", x))
            .collect::<Vec<_>>()
            .join("/")
    };
    let detail = medians
        .iter()
        .map(|(n, m)| format!("{n}q {}", fmt(m)))
        .collect::<Vec<_>>()
        .join(", ");
    let at12 = &medians[2].1;
    check(at12[0] <= at12[1] && at12[1] <= at12[2], || {
        format!("ordering at 12 qubits broken: {detail}")
    })?;
    let sv: Vec<f64> = medians.iter().map(|(_, m)| m[2].ln()).collect();
    let (low, high) = (sv[1] - sv[0], sv[2] - sv[1]);
    check(high > low, || {
        format!("state-vector log increase 7->12 ({high:.2}) not above 4->7 ({low:.2}); {detail}")
    })?;
    Ok(format!("median s recursion/sweep/statevector: {detail}; statevector log step {low:.2} then {high:.2}"))
}

fn criterion_9() -> Outcome {
    let a = width_sweep(2, 2..=6, OrderArg::Auto, 9).map_err(|e| e.to_string())?;
    let b = width_sweep(2, 2..=6, OrderArg::Auto, 9).map_err(|e| e.to_string())?;
    check(a == b, || "width sweep is not deterministic".into())?;
    check(a.len() == 5, || format!("{} rows", a.len()))?;
    let table = a
        .iter()
        .map(|r| format!("w{}:{}", r.width, r.max_live_terms))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(format!("height 2, max live terms by width: {table}"))
}

fn check_pattern(name: &str, p: &MeasurementPattern, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = semantics_residual(p).map_err(|e| format!("{name}: {e}"))?;
    check(r <= PATTERN_TOL, || {
        format!("{name}: semantics residual {r:e}")
    })?;
    let outputs: Vec<f64> = (0..p.outputs().len())
        .map(|_| rng.gen_range(0.0..TAU))
        .collect();
    let oracle = projected_scalar(p, &outputs).map_err(|e| format!("{name}: {e}"))?;
    let spec = p
        .projection_spec(&outputs)
        .map_err(|e| format!("{name}: {e}"))?;
    let engine = sweep(p.graph(), &spec);
    // Each projected qubit's spec bra is its rotation bra times e^{iθ}.
    let total: f64 = p.measurements().values().sum::<f64>() + outputs.iter().sum::<f64>();
    let want = engine * Amplitude::from_polar(1.0, -total);
    let scale = oracle.norm().max(engine.norm());
    check(
        scale > 0.0 && (want - oracle).norm() <= PATTERN_TOL * scale.max(1e-3),
        || format!("{name}: projected scalar {oracle} vs sweep {engine}"),
    )
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut count = 0;
    for theta in [0.0, FRAC_PI_4, -1.3] {
        check_pattern(
            &format!("z rotation {theta}"),
            &compile_z_rotation(theta),
            &mut rng,
        )?;
        count += 1;
    }
    for (t, z, x) in [(0.0, 0.0, 0.0), (0.4, 1.1, -0.6), (2.0, -0.3, 0.9)] {
        check_pattern("rotation", &compile_rotation(t, z, x), &mut rng)?;
        count += 1;
    }
    check_pattern("I shape", &compile_cnot(), &mut rng)?;
    count += 1;
    let mut thetas = vec![0.0, FRAC_PI_2, PI];
    thetas.extend((0..5).map(|_| rng.gen_range(0.0..TAU)));
    for theta in thetas {
        check_pattern(
            &format!("cphase {theta:.3}"),
            &compile_cphase(theta),
            &mut rng,
        )?;
        count += 1;
    }
    let chain: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..TAU)).collect();
    let composite = compile_cphase_chain(&chain).map_err(|e| e.to_string())?;
    check(composite.arity() == 5, || "composite arity".into())?;
    check_pattern("five-wire composite", &composite, &mut rng)?;
    count += 1;
    let t = start.elapsed();
    check(t < BUDGET_MBQC, || format!("took {t:?}"))?;
    Ok(format!(
        "{count} patterns match semantics and sweep projection; {:.2} s",
        t.as_secs_f64()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("algebra ground truth", criterion_1),
        ("factorization soundness", criterion_2),
        ("closed-form spot values", criterion_3),
        ("line recursion", criterion_4),
        ("cross-chain recursion", criterion_5),
        ("column evaluator", criterion_6),
        ("five-cross boundary size", criterion_7),
        ("scaling study", criterion_8),
        ("lattice width profiling", criterion_9),
        ("measurement patterns", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
