//! Model parameters for the kicked transverse-field Ising chain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the chain length; 2^N amplitudes are held in memory.
pub const DEFAULT_MAX_SITES: usize = 24;

/// Absolute limit regardless of configuration (2^30 amplitudes = 16 GiB).
pub const ABSOLUTE_MAX_SITES: usize = 30;

/// Unit in which kick periods are quoted throughout: eps = pi/28.
pub const EPSILON: f64 = std::f64::consts::PI / 28.0;

/// Whether the longitudinal field term is present.
///
/// Without it the model maps to free fermions and the transverse OTOC has a
/// closed form; with it the map is nonintegrable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Integrable,
    Nonintegrable,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Variant::Integrable => write!(f, "integrable"),
            Variant::Nonintegrable => write!(f, "nonintegrable"),
        }
    }
}

/// Physical parameters of one chain: the single source of truth consumed by
/// every other component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Number of spins on the periodic ring.
    pub n_sites: usize,
    /// Nearest-neighbour Ising coupling along x.
    pub j_x: f64,
    /// Longitudinal field (must vanish for the integrable variant).
    pub h_x: f64,
    /// Transverse kick strength.
    pub h_z: f64,
    /// Kick period (hbar = 1).
    pub tau: f64,
    pub variant: Variant,
}

impl ModelConfig {
    /// Validate with the default site cap.
    pub fn new(
        n_sites: usize,
        j_x: f64,
        h_x: f64,
        h_z: f64,
        tau: f64,
        variant: Variant,
    ) -> Result<Self> {
        Self::with_cap(n_sites, j_x, h_x, h_z, tau, variant, DEFAULT_MAX_SITES)
    }

    /// Validate against an explicit site cap (the CLI threads the
    /// `FLOQ_OTOC_MAX_SITES` override through here).
    pub fn with_cap(
        n_sites: usize,
        j_x: f64,
        h_x: f64,
        h_z: f64,
        tau: f64,
        variant: Variant,
        cap: usize,
    ) -> Result<Self> {
        let cap = cap.min(ABSOLUTE_MAX_SITES);
        if n_sites < 2 || n_sites > cap {
            return Err(Error::ChainSize { n_sites, cap });
        }
        if variant == Variant::Integrable && h_x != 0.0 {
            return Err(Error::Config(format!(
                "integrable variant has no longitudinal term, got h_x = {h_x}"
            )));
        }
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::Config(format!("kick period must be >= 0, got {tau}")));
        }
        for (name, v) in [("j_x", j_x), ("h_x", h_x), ("h_z", h_z)] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(ModelConfig {
            n_sites,
            j_x,
            h_x,
            h_z,
            tau,
            variant,
        })
    }

    /// Integrable chain (no longitudinal field).
    pub fn integrable(n_sites: usize, j_x: f64, h_z: f64, tau: f64) -> Result<Self> {
        Self::new(n_sites, j_x, 0.0, h_z, tau, Variant::Integrable)
    }

    /// Nonintegrable chain with a longitudinal field.
    pub fn nonintegrable(n_sites: usize, j_x: f64, h_x: f64, h_z: f64, tau: f64) -> Result<Self> {
        Self::new(n_sites, j_x, h_x, h_z, tau, Variant::Nonintegrable)
    }

    /// The paper's standard point J_x = h_z = 1 (h_x = 1 when nonintegrable).
    pub fn standard(n_sites: usize, tau: f64, variant: Variant) -> Result<Self> {
        let h_x = match variant {
            Variant::Integrable => 0.0,
            Variant::Nonintegrable => 1.0,
        };
        Self::new(n_sites, 1.0, h_x, 1.0, tau, variant)
    }

    /// Effective longitudinal field actually applied by the kicks.
    pub fn effective_h_x(&self) -> f64 {
        match self.variant {
            Variant::Integrable => 0.0,
            Variant::Nonintegrable => self.h_x,
        }
    }
}
