use rayon::prelude::*;

use crate::config::{load_single_graph, AngleSource};
use crate::engine::{applicable, Engine, EngineKind};
use crate::{csv_writer, CliError, VerifyArgs};

/// One verification trial: the amplitude from every engine, and the largest
/// distance to the reference (the first engine).
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRow {
    pub trial: u64,
    pub seed: u64,
    pub amplitudes: Vec<latticeproj::Amplitude>,
    pub max_abs_delta: f64,
}

/// Runs every trial against `engines`, trials in parallel. The reference is
/// the state vector when present, else the first engine.
pub fn verify_trials(
    g: &latticeproj::graph::ClusterGraph,
    engines: &mut Vec<Engine>,
    angles: &AngleSource,
    trials: u64,
) -> Result<Vec<TrialRow>, CliError> {
    if let Some(i) = engines
        .iter()
        .position(|e| e.kind() == EngineKind::Statevector)
    {
        let sv = engines.remove(i);
        engines.insert(0, sv);
    }
    let seed = match angles {
        AngleSource::Random { seed } => *seed,
        _ => 0,
    };
    let trials = if angles.is_random() { trials } else { 1 };
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let spec = angles.spec(g.n(), t)?;
            let amplitudes = engines
                .iter()
                .map(|e| e.evaluate(g, &spec).map(|o| o.amplitude))
                .collect::<Result<Vec<_>, _>>()?;
            let max_abs_delta = amplitudes
                .iter()
                .map(|a| (a - amplitudes[0]).norm())
                .fold(0.0, f64::max);
            Ok(TrialRow {
                trial: t,
                seed: seed.wrapping_add(t),
                amplitudes,
                max_abs_delta,
            })
        })
        .collect()
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    if args.trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    let g = load_single_graph(&args.graph.graphs, &args.graph.builders)?;
    let mut engines = if args.engines.is_empty() {
        applicable(&g.graph, args.order)
    } else {
        args.engines
            .iter()
            .map(|&k| Engine::new(k, &g.graph, args.order))
            .collect::<Result<_, _>>()?
    };
    if engines.len() < 2 {
        return Err(CliError::Config(
            "verification needs at least two engines".into(),
        ));
    }
    let angles = args.angles.source(false)?;
    let rows = verify_trials(&g.graph, &mut engines, &angles, args.trials)?;

    let mut w = csv_writer(args.out.as_ref())?;
    let mut header = vec!["trial".to_string(), "seed".to_string()];
    for e in &engines {
        header.push(format!("{}_re", e.kind().name()));
        header.push(format!("{}_im", e.kind().name()));
    }
    header.push("max_abs_delta".into());
    w.write_record(&header)?;
    for r in &rows {
        let mut rec = vec![r.trial.to_string(), r.seed.to_string()];
        for a in &r.amplitudes {
            rec.push(a.re.to_string());
            rec.push(a.im.to_string());
        }
        rec.push(format!("{:e}", r.max_abs_delta));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))?;

    let worst = rows.iter().map(|r| r.max_abs_delta).fold(0.0, f64::max);
    if worst > args.tol {
        let bad = rows.iter().filter(|r| r.max_abs_delta > args.tol).count();
        return Err(CliError::Verification(format!(
            "{bad} of {} trials exceed tolerance {:e} (worst {worst:e})",
            rows.len(),
            args.tol
        )));
    }
    Ok(())
}
