//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by simulation, analysis, and table construction.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Chain length outside the supported range.
    #[error("chain of {n_sites} sites is outside the supported range [2, {cap}]")]
    ChainSize { n_sites: usize, cap: usize },

    /// Site index does not exist on the chain.
    #[error("site {site} out of range for a chain of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    /// Two state vectors (or a state and a map) live on different chains.
    #[error("chain-size mismatch: {left} vs {right} sites")]
    DimensionMismatch { left: usize, right: usize },

    /// Invalid model or request parameter.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// |cos(gamma_q)| exceeded 1 beyond tolerance, so the quasi-energy
    /// would be complex.
    #[error("quasi-energy domain error at q={q}: cos(gamma) = {cos_gamma} for tau = {tau}")]
    QuasiEnergyDomain { q: f64, tau: f64, cos_gamma: f64 },

    /// The closed-form tables are only defined for even chains.
    #[error("analytic tables require an even number of sites, got {n_sites}")]
    OddChainUnsupported { n_sites: usize },

    /// Requested a short-time prediction outside the tabulated set.
    #[error("no tabulated prediction for axis {axis}, separation {delta_l}, kick {n}")]
    UnsupportedHbcCase {
        axis: &'static str,
        delta_l: usize,
        n: usize,
    },

    /// A fit was requested over data it cannot represent.
    #[error("fit domain error: {0}")]
    FitDomain(String),

    /// Too few data points for the requested fit.
    #[error("insufficient data: needed {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
