use crate::config::load_single_graph;
use crate::engine::Engine;
use crate::{CliError, ProjectArgs};

pub fn run(args: &ProjectArgs) -> Result<(), CliError> {
    let g = load_single_graph(&args.graph.graphs, &args.graph.builders)?;
    let spec = args.angles.source(true)?.spec(g.graph.n(), 0)?;
    let engine = Engine::new(args.engine, &g.graph, args.order)?;
    let out = engine.evaluate(&g.graph, &spec)?;
    println!(
        "{} {}",
        format_fixed(out.amplitude.re, args.digits),
        format_fixed(out.amplitude.im, args.digits)
    );
    Ok(())
}

/// `digits` decimals with trailing zeros trimmed to one, and no `-0.0`.
pub fn format_fixed(x: f64, digits: usize) -> String {
    let mut s = format!("{x:.digits$}");
    if s.contains('.') {
        while s.ends_with('0') && !s.ends_with(".0") {
            s.pop();
        }
    }
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s = s.trim_start_matches('-').to_string();
    }
    if !s.contains('.') {
        s.push_str(".0");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::format_fixed;

    #[test]
    fn fixed_format() {
        assert_eq!(format_fixed(0.5, 10), "0.5");
        assert_eq!(format_fixed(0.0, 10), "0.0");
        assert_eq!(format_fixed(-1e-17, 10), "0.0");
        assert_eq!(format_fixed(0.5f64.powf(2.5), 10), "0.1767766953");
        assert_eq!(format_fixed(-2.0, 3), "-2.0");
        assert_eq!(format_fixed(3.0, 0), "3.0");
    }
}
