//! Out-of-time-order correlators via a state-vector echo.
//!
//! F(n) = <A_n|B_n> with |A_n> = W U^n |init> and
//! |B_n> = U^n V U^{-n} W U^n V |init>, where W and V are the site-l and
//! site-m Pauli operators of the requested axis. Two forward chains
//! (U^n |init> and U^n V |init>) advance one kick per step; the
//! back-and-forth echo is recomputed per evaluated kick, so a full series
//! costs Theta(n_max^2 / stride) kicks beyond the chains. No operator is
//! ever stored.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::floquet::FloquetMap;
use crate::state::{build_initial_state, inner_product, InitialState, PauliAxis, SiteObservable};

/// Which Pauli pair the correlator probes.
///
/// `Transverse` uses sigma_z observables (TMOTOC), `Longitudinal` sigma_x
/// (LMOTOC), named for the spin direction relative to the Ising coupling
/// axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObservableAxis {
    #[serde(alias = "tm")]
    Transverse,
    #[serde(alias = "lm")]
    Longitudinal,
}

impl ObservableAxis {
    pub fn pauli(self) -> PauliAxis {
        match self {
            ObservableAxis::Transverse => PauliAxis::Z,
            ObservableAxis::Longitudinal => PauliAxis::X,
        }
    }

    /// The initial state the correlator pairs with by default: all-up for
    /// sigma_z observables, all-right for sigma_x.
    pub fn default_initial(self) -> InitialState {
        match self {
            ObservableAxis::Transverse => InitialState::AllUpZ,
            ObservableAxis::Longitudinal => InitialState::AllRightX,
        }
    }
}

impl std::fmt::Display for ObservableAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ObservableAxis::Transverse => write!(f, "tm"),
            ObservableAxis::Longitudinal => write!(f, "lm"),
        }
    }
}

/// One correlator computation: model, observable pair, horizon, sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OtocRequest {
    pub config: ModelConfig,
    pub axis: ObservableAxis,
    pub site_l: usize,
    pub site_m: usize,
    pub n_max: usize,
    pub stride: usize,
    pub initial: InitialState,
}

impl OtocRequest {
    /// Validated request with an explicit initial state.
    pub fn new(
        config: ModelConfig,
        axis: ObservableAxis,
        site_l: usize,
        site_m: usize,
        n_max: usize,
        stride: usize,
        initial: InitialState,
    ) -> Result<Self> {
        let n = config.n_sites;
        for site in [site_l, site_m] {
            if site >= n {
                return Err(Error::SiteOutOfRange { site, n_sites: n });
            }
        }
        if site_l == site_m {
            return Err(Error::Config(
                "observable sites l and m must differ".into(),
            ));
        }
        if stride == 0 {
            return Err(Error::Config("stride must be >= 1".into()));
        }
        Ok(OtocRequest {
            config,
            axis,
            site_l,
            site_m,
            n_max,
            stride,
            initial,
        })
    }

    /// Validated request using the axis' default initial state.
    pub fn with_default_initial(
        config: ModelConfig,
        axis: ObservableAxis,
        site_l: usize,
        site_m: usize,
        n_max: usize,
        stride: usize,
    ) -> Result<Self> {
        let initial = axis.default_initial();
        Self::new(config, axis, site_l, site_m, n_max, stride, initial)
    }

    /// |l - m|, the label used for reporting.
    pub fn separation(&self) -> usize {
        self.site_l.abs_diff(self.site_m)
    }

    /// min(|l - m|, N - |l - m|), the distance on the ring that governs
    /// the exponent symmetry.
    pub fn ring_distance(&self) -> usize {
        let d = self.separation();
        d.min(self.config.n_sites - d)
    }
}

/// Per-kick correlator values for one request.
///
/// `c_values[k] = 1 - Re(f_values[k])` always holds; `truncated` marks a
/// series cut short by a wall-clock budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OtocSeries {
    pub request: OtocRequest,
    pub kicks: Vec<usize>,
    pub f_values: Vec<Complex64>,
    pub c_values: Vec<f64>,
    pub truncated: bool,
}

impl OtocSeries {
    /// Assemble a series from kick indices and F values (the C column is
    /// derived). Intended for tests and for re-reading persisted runs.
    pub fn from_parts(request: OtocRequest, kicks: Vec<usize>, f_values: Vec<Complex64>) -> Result<Self> {
        if kicks.len() != f_values.len() {
            return Err(Error::Config(format!(
                "kick and value counts differ: {} vs {}",
                kicks.len(),
                f_values.len()
            )));
        }
        let c_values = f_values.iter().map(|f| 1.0 - f.re).collect();
        Ok(OtocSeries {
            request,
            kicks,
            f_values,
            c_values,
            truncated: false,
        })
    }

    pub fn len(&self) -> usize {
        self.kicks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kicks.is_empty()
    }

    /// Real parts of F, the quantity whose saturation trend is fitted.
    pub fn re_f(&self) -> Vec<f64> {
        self.f_values.iter().map(|f| f.re).collect()
    }
}

/// Compute the full series for a request.
pub fn compute_otoc_series(request: &OtocRequest) -> Result<OtocSeries> {
    compute_otoc_series_with_budget(request, None)
}

/// Compute the series, stopping early (with the truncation flag set) if the
/// wall-clock budget runs out between evaluations.
pub fn compute_otoc_series_with_budget(
    request: &OtocRequest,
    budget: Option<Duration>,
) -> Result<OtocSeries> {
    let started = Instant::now();
    let map = FloquetMap::new(request.config);
    let inv = map.inverted();
    let w_obs = SiteObservable {
        site: request.site_l,
        axis: request.axis.pauli(),
    };
    let v_obs = SiteObservable {
        site: request.site_m,
        axis: request.axis.pauli(),
    };

    let init = build_initial_state(request.initial, request.config.n_sites)?;
    let mut chain_plain = init.clone();
    let mut chain_v = init.apply_pauli(v_obs)?;

    let mut kicks = Vec::new();
    let mut f_values = Vec::new();
    let mut c_values = Vec::new();
    let mut truncated = false;

    for n in 0..=request.n_max {
        if n % request.stride == 0 {
            if let Some(limit) = budget {
                if started.elapsed() > limit && !kicks.is_empty() {
                    truncated = true;
                    break;
                }
            }
            let a = chain_plain.clone().apply_pauli(w_obs)?;
            let mut b = chain_v.clone().apply_pauli(w_obs)?;
            b = inv.evolve_n_kicks(b, n)?;
            b = b.apply_pauli(v_obs)?;
            b = map.evolve_n_kicks(b, n)?;
            let f = inner_product(&a, &b)?;
            kicks.push(n);
            f_values.push(f);
            c_values.push(1.0 - f.re);
        }
        if n < request.n_max {
            chain_plain = map.apply(chain_plain)?;
            chain_v = map.apply(chain_v)?;
        }
    }

    Ok(OtocSeries {
        request: *request,
        kicks,
        f_values,
        c_values,
        truncated,
    })
}

/// Single-point evaluation: F(n) for one kick count, no incremental state.
pub fn otoc_at_kick(request: &OtocRequest, n: usize) -> Result<Complex64> {
    let map = FloquetMap::new(request.config);
    let inv = map.inverted();
    let w_obs = SiteObservable {
        site: request.site_l,
        axis: request.axis.pauli(),
    };
    let v_obs = SiteObservable {
        site: request.site_m,
        axis: request.axis.pauli(),
    };
    let init = build_initial_state(request.initial, request.config.n_sites)?;
    let a = map.evolve_n_kicks(init.clone(), n)?.apply_pauli(w_obs)?;
    let mut b = init.apply_pauli(v_obs)?;
    b = map.evolve_n_kicks(b, n)?;
    b = b.apply_pauli(w_obs)?;
    b = inv.evolve_n_kicks(b, n)?;
    b = b.apply_pauli(v_obs)?;
    b = map.evolve_n_kicks(b, n)?;
    inner_product(&a, &b)
}
