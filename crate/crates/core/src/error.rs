use thiserror::Error;

use crate::root_system::Family;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid rank {rank} for family {family}: {reason}")]
    InvalidRank {
        family: Family,
        rank: usize,
        reason: &'static str,
    },

    #[error("invalid root space descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point lies outside the closed positive chamber (root value {root_value:.3e})")]
    OutsideChamber { root_value: f64 },

    #[error("invalid time parameter: {0}")]
    InvalidTime(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integral diverges per proof chain: q = {q} must exceed 2")]
    Divergent { q: f64 },

    #[error("quadrature did not converge (residual estimate {residual:.3e}, tolerance {tolerance:.3e})")]
    QuadratureNotConverged { residual: f64, tolerance: f64 },

    #[error("exponent pair (1/p, 1/q) = ({inv_p}, {inv_q}) is not admissible for n = {n}")]
    NotAdmissible { inv_p: f64, inv_q: f64, n: usize },

    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("unknown space {0:?}; expected e.g. \"A:2\", \"C:3\" or \"A:1complex\"")]
    UnknownSpace(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
