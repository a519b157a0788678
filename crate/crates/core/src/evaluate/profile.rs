//! Cost measurements for the sweep under different factor orders.

use super::{sweep_evaluate, EvalError, EvalReport};
use crate::factorize::{factor_order, max_active_slots, FactorizedPolynomial, OrderStrategy};
use crate::graph::{ClusterGraph, SlotAssignment};
use crate::scalar::Scalar;
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileRow<T> {
    pub strategy: OrderStrategy,
    pub max_active_slots: usize,
    pub report: EvalReport<T>,
}

impl<T: Scalar> ProfileRow<T> {
    /// `4^{max_active_slots}`, the bound on live terms, saturating.
    pub fn live_term_bound(&self) -> usize {
        4usize
            .checked_pow(self.max_active_slots as u32)
            .unwrap_or(usize::MAX)
    }
}

/// Runs the sweep once per ordering strategy.
pub fn profile<T: Scalar>(
    poly: &FactorizedPolynomial<T>,
    g: &ClusterGraph,
    a: &SlotAssignment,
    strategies: &[OrderStrategy],
) -> Result<Vec<ProfileRow<T>>, Error> {
    strategies
        .iter()
        .map(|strategy| {
            let ordered = poly.reordered(&factor_order(g, a, strategy)?)?;
            let report = sweep_evaluate(&ordered)?;
            let width = max_active_slots(&ordered);
            let row = ProfileRow {
                strategy: strategy.clone(),
                max_active_slots: width,
                report,
            };
            if report.max_live_terms > row.live_term_bound() {
                // Live words are {U, D, Z, I}-valued on active slots only.
                return Err(Error::Eval(EvalError::LiveTermBoundExceeded {
                    live: report.max_live_terms,
                    bound: row.live_term_bound(),
                }));
            }
            Ok(row)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::{factorize, ProjectionSpec};
    use crate::graph::{assign_slots, build_lattice, build_line, SlotStrategy};

    #[test]
    fn rows_per_strategy() {
        let g = build_lattice(2, 2).unwrap();
        let a = assign_slots(&g, SlotStrategy::Bipartite).unwrap();
        let spec = ProjectionSpec::uniform(g.n(), 0.7, 0.2).unwrap();
        let poly = factorize(&g, &a, &spec).unwrap();
        let strategies = [
            OrderStrategy::AsBuilt,
            OrderStrategy::AntiDiagonal,
            OrderStrategy::Greedy,
        ];
        let rows = profile(&poly, &g, &a, &strategies).unwrap();
        assert_eq!(rows.len(), 3);
        let first = rows[0].report.amplitude;
        for r in &rows {
            assert!((r.report.amplitude - first).norm() < 1e-12);
            assert!(r.report.max_live_terms <= r.live_term_bound());
        }
    }

    #[test]
    fn line_mul_count_doubles() {
        let muls: Vec<u64> = [64, 128, 256]
            .iter()
            .map(|&n| {
                let g = build_line(n).unwrap();
                let a = assign_slots(&g, SlotStrategy::Bipartite).unwrap();
                let poly =
                    factorize(&g, &a, &ProjectionSpec::uniform(n, 0.3, 0.5).unwrap()).unwrap();
                profile(&poly, &g, &a, &[OrderStrategy::AsBuilt]).unwrap()[0]
                    .report
                    .mul_count
            })
            .collect();
        for w in muls.windows(2) {
            let ratio = w[1] as f64 / w[0] as f64;
            assert!((ratio - 2.0).abs() < 0.2, "ratio {ratio}");
        }
    }
}
