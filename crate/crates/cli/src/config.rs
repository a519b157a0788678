//! Graph and angle sources named on the command line.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use latticeproj::graph::{
    build_cross_chain, build_grid, build_lattice, build_line, parse_graph, ClusterGraph,
};
use latticeproj::Projection;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

/// A graph with the name it was requested under.
#[derive(Clone, Debug)]
pub struct NamedGraph {
    pub name: String,
    pub graph: ClusterGraph,
}

/// Parses `line:N`, `cross:K`, `lattice:MxN` or `grid:RxC`.
pub fn parse_builder(spec: &str) -> Result<NamedGraph, CliError> {
    let bad = |why: &str| CliError::Config(format!("builder {spec:?}: {why}"));
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| bad("expected KIND:ARGS"))?;
    let count = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| bad("expected a positive integer"))
    };
    let pair = |s: &str| -> Result<(usize, usize), CliError> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| bad("expected MxN"))?;
        Ok((count(a)?, count(b)?))
    };
    let graph = match kind {
        "line" => build_line(count(arg)?),
        "cross" => build_cross_chain(count(arg)?),
        "lattice" => {
            let (m, n) = pair(arg)?;
            build_lattice(m, n)
        }
        "grid" => {
            let (r, c) = pair(arg)?;
            build_grid(r, c)
        }
        _ => return Err(bad("unknown kind; use line, cross, lattice or grid")),
    }
    .map_err(|e| bad(&e.to_string()))?;
    Ok(NamedGraph {
        name: spec.to_string(),
        graph,
    })
}

pub fn load_graph_file(path: &Path) -> Result<NamedGraph, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let graph =
        parse_graph(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(NamedGraph { name, graph })
}

/// Files first, then builders, in the order given.
pub fn load_graphs(files: &[PathBuf], builders: &[String]) -> Result<Vec<NamedGraph>, CliError> {
    let mut out: Vec<NamedGraph> = files
        .iter()
        .map(|p| load_graph_file(p))
        .collect::<Result<_, _>>()?;
    for b in builders {
        out.push(parse_builder(b)?);
    }
    if out.is_empty() {
        return Err(CliError::Config(
            "no graph given; use --graph PATH or --builder SPEC".into(),
        ));
    }
    Ok(out)
}

/// Exactly one graph.
pub fn load_single_graph(files: &[PathBuf], builders: &[String]) -> Result<NamedGraph, CliError> {
    let mut all = load_graphs(files, builders)?;
    if all.len() > 1 {
        return Err(CliError::Config("this command takes a single graph".into()));
    }
    Ok(all.remove(0))
}

/// `all:θ,φ` or a path to an angles file.
#[derive(Clone, Debug, PartialEq)]
pub enum AngleSource {
    All(f64, f64),
    File(PathBuf),
    Random { seed: u64 },
}

impl AngleSource {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text.strip_prefix("all:") {
            Some(rest) => {
                let bad = || CliError::Config(format!("--angles {text:?}: expected all:THETA,PHI"));
                let (t, f) = rest.split_once(',').ok_or_else(bad)?;
                let t: f64 = t.trim().parse().map_err(|_| bad())?;
                let f: f64 = f.trim().parse().map_err(|_| bad())?;
                Ok(AngleSource::All(t, f))
            }
            None => Ok(AngleSource::File(PathBuf::from(text))),
        }
    }

    /// The projection for `trial`. Fixed sources ignore the trial index.
    pub fn spec(&self, n: usize, trial: u64) -> Result<Projection, CliError> {
        let spec = match self {
            AngleSource::All(t, f) => Projection::uniform(n, *t, *f),
            AngleSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
                let bad = |e: latticeproj::factorize::FactorizeError| {
                    CliError::Config(format!("{}: {e}", path.display()))
                };
                let spec = Projection::parse(&text).map_err(bad)?;
                spec.check_size(n).map_err(bad)?;
                return Ok(spec);
            }
            AngleSource::Random { seed } => return Ok(random_spec(n, *seed, trial)),
        };
        spec.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn is_random(&self) -> bool {
        matches!(self, AngleSource::Random { .. })
    }
}

/// Angles for `trial` under `seed`: a ChaCha8 stream seeded with
/// `seed + trial`, drawing `θ_q` then `φ_q` for each qubit, uniform on
/// `[0, 2π)`.
pub fn random_spec(n: usize, seed: u64, trial: u64) -> Projection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial));
    let (mut theta, mut phi) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        theta.push(rng.gen_range(0.0..TAU));
        phi.push(rng.gen_range(0.0..TAU));
    }
    Projection::new(theta, phi).expect("finite angles")
}
