//! Local projections on cluster (graph) states.
//!
//! A cluster state is `∏ CZ_{m,n} |+⟩^{⊗N}` over the edges of a graph. A local
//! projection contracts it with a product bra `⊗_p (C_p⟨0| + S_p⟨1|)`, where
//! `C_p = cos θ_p` and `S_p = e^{iφ_p} sin θ_p`. This crate computes that
//! amplitude two ways:
//!
//! * brute-force references in [`oracle`] (dense state vector, and the direct
//!   sum over control bitstrings), and
//! * a factorized trace polynomial over the commuting diagonal letters
//!   `I, Z, U = (I+Z)/2, D = (I-Z)/2` ([`algebra`], [`factorize`]), evaluated by
//!   a boundary sweep, by specialized line / cross-chain recurrences, or by a
//!   column-block expansion on lattices ([`evaluate`]).
//!
//! [`mbqc`] compiles a few small gate circuits into measurement patterns and
//! checks them by post-selected simulation.
//!
//! The numeric types are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix `f64`, which is what the command-line tool uses.

pub mod algebra;
pub mod error;
pub mod evaluate;
pub mod factorize;
pub mod graph;
pub mod mbqc;
pub mod oracle;
pub mod scalar;

pub use error::Error;
pub use scalar::Scalar;

/// Double-precision complex amplitude.
pub type Amplitude = num_complex::Complex<f64>;
/// Double-precision projection angles.
pub type Projection = factorize::ProjectionSpec<f64>;
/// Double-precision factorized polynomial.
pub type Polynomial = factorize::FactorizedPolynomial<f64>;
/// Double-precision evaluation report.
pub type Report = evaluate::EvalReport<f64>;
/// Double-precision dense state vector.
pub type State = oracle::StateVector<f64>;
