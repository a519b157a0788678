use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::evaluate::EvalError;
use crate::factorize::FactorizeError;
use crate::graph::GraphError;
use crate::mbqc::MbqcError;
use crate::oracle::OracleError;

/// Any error raised by this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Factorize(#[from] FactorizeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Mbqc(#[from] MbqcError),
}

impl Error {
    /// `true` when the error signals a broken internal invariant rather than
    /// bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Eval(
                EvalError::RetirementBeforeOwner { .. }
                    | EvalError::NonScalarResidue { .. }
                    | EvalError::LiveTermBoundExceeded { .. }
            )
        )
    }
}
