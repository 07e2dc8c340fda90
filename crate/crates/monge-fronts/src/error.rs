use thiserror::Error;

use crate::scalar::Backend;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot differentiate a series of order 0")]
    ZeroOrder,

    #[error("1-form P du + Q dv is not closed: max |P_v - Q_u| = {max_abs:e}")]
    NotClosed { max_abs: f64 },

    #[error("{what} must have zero constant term")]
    NonzeroConstantTerm { what: &'static str },

    #[error("{what} must vanish to first order at the origin")]
    NonzeroLinearTerm { what: &'static str },

    #[error("the equation K = c requires c != 0 (c = 0 is the developable family)")]
    ZeroGaussCurvature,

    #[error("factorization residual requires c != 0")]
    ZeroFactorizationConstant,

    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("backend mismatch: expected {expected} coefficients, found {found}")]
    BackendMismatch { expected: Backend, found: Backend },

    #[error("no coordinate pair among (x,q), (y,p) is invertible at this point; cannot adapt chart")]
    NotAdaptable,

    #[error("differential has rank {rank} at ({u}, {v}), expected 1")]
    RankNotOne { rank: usize, u: f64, v: f64 },

    #[error("seed ({u}, {v}) is degenerate: |Delta| = {delta:e}, |grad Delta| = {grad:e}")]
    DegenerateSeed { u: f64, v: f64, delta: f64, grad: f64 },

    #[error("Newton corrector did not converge after {iters} iterations near ({u}, {v})")]
    NewtonDiverged { iters: usize, u: f64, v: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid series data: {0}")]
    InvalidSeries(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
