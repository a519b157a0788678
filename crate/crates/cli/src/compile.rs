use std::fmt::Write as _;
use std::path::Path;

use latticeproj::mbqc::{
    compile_circuit, parse_circuit, semantics_residual, CompileMode, MbqcError, MeasurementPattern,
};

use crate::{CliError, CompileArgs};

/// Wires are checked against the declared semantics up to this count.
const CHECK_MAX_WIRES: usize = 8;
const CHECK_TOL: f64 = 1e-9;

/// `#`-commented text with inputs, outputs, measured angles and semantics.
pub fn pattern_text(p: &MeasurementPattern) -> String {
    let join = |v: &[usize]| {
        v.iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    let _ = writeln!(s, "qubits {}", p.graph().n());
    let _ = writeln!(s, "inputs {}", join(p.inputs()));
    let _ = writeln!(s, "outputs {}", join(p.outputs()));
    for (q, t) in p.measurements() {
        let _ = writeln!(s, "measure {q} {t:e}");
    }
    for g in p.semantics() {
        let _ = writeln!(s, "# semantics {g:?}");
    }
    s
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(CliError::io(path))
}

pub fn run(args: &CompileArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.circuit).map_err(CliError::io(&args.circuit))?;
    let circuit = parse_circuit(&text).map_err(|e| match e {
        MbqcError::NoGates => CliError::Config(format!("{}: no gates", args.circuit.display())),
        e => CliError::Config(format!("{}: {e}", args.circuit.display())),
    })?;
    let mode = if args.native {
        CompileMode::Native
    } else {
        CompileMode::Exact
    };
    let p = compile_circuit(&circuit, mode).map_err(latticeproj::Error::from)?;

    if circuit.n_wires <= CHECK_MAX_WIRES {
        let r = semantics_residual(&p).map_err(latticeproj::Error::from)?;
        if r > CHECK_TOL {
            return Err(CliError::Verification(format!(
                "compiled pattern misses its semantics (residual {r:e})"
            )));
        }
    }

    let outputs_plus = vec![0.0; p.outputs().len()];
    let spec = p
        .projection_spec(&outputs_plus)
        .map_err(latticeproj::Error::from)?;
    std::fs::create_dir_all(&args.out_dir).map_err(CliError::io(&args.out_dir))?;
    let stem = args.out_dir.join(&args.name);
    let graph_path = stem.with_extension("graph");
    let angles_path = stem.with_extension("angles");
    let pattern_path = stem.with_extension("pattern");
    write(
        &graph_path,
        &format!(
            "# compiled from {}\n{}",
            args.circuit.display(),
            p.graph().to_graph_text()
        ),
    )?;
    write(
        &angles_path,
        &format!(
            "# measured qubits at their angles, outputs on <+|\n{}",
            spec.to_text()
        ),
    )?;
    write(&pattern_path, &pattern_text(&p))?;

    println!(
        "qubits {} measured {}",
        p.graph().n(),
        p.measurements().len()
    );
    for (w, (i, o)) in p.inputs().iter().zip(p.outputs()).enumerate() {
        println!("wire {w}: input {i} -> output {o}");
    }
    for path in [&graph_path, &angles_path, &pattern_path] {
        println!("wrote {}", path.display());
    }
    Ok(())
}
