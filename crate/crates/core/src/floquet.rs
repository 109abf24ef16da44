//! One-period Floquet maps composed from the two kick factors.
//!
//! The forward map applies the diagonal z-kick first (it is the rightmost
//! factor of the one-period operator) and the x-basis factor second; the
//! inverse applies the conjugate factors in reverse order. Early-kick OTOC
//! values depend on this ordering, so it is fixed here once.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::state::{self, StateVector};

/// Direction of a one-period map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Above this dimension the full per-index phase cache would exceed 2^20
/// entries and phases are looked up through the popcount tables instead.
const FULL_TABLE_LIMIT: usize = 1 << 20;

/// Diagonal phase factors, either fully cached per basis index or looked up
/// by popcount keys on the fly. Both paths read the same small table, so
/// their results are bit-identical.
#[derive(Debug, Clone)]
enum DiagonalPhase {
    ZCached(Vec<Complex64>),
    ZByPopcount(Vec<Complex64>),
    XCached(Vec<Complex64>),
    XByPopcount(Vec<Complex64>),
}

impl DiagonalPhase {
    fn z(n_sites: usize, h_z: f64, tau: f64) -> Self {
        let small = state::z_phase_by_popcount(n_sites, h_z, tau);
        let dim = 1usize << n_sites;
        if dim <= FULL_TABLE_LIMIT {
            let full = (0..dim)
                .map(|s| small[(s as u64).count_ones() as usize])
                .collect();
            DiagonalPhase::ZCached(full)
        } else {
            DiagonalPhase::ZByPopcount(small)
        }
    }

    fn x(n_sites: usize, j_x: f64, h_x: f64, tau: f64) -> Self {
        let small = state::x_phase_by_popcount(n_sites, j_x, h_x, tau);
        let dim = 1usize << n_sites;
        if dim <= FULL_TABLE_LIMIT {
            let stride = n_sites + 1;
            let mask = dim - 1;
            let full = (0..dim)
                .map(|s| {
                    let rot = ((s << 1) | (s >> (n_sites - 1))) & mask;
                    let pc_bond = ((s ^ rot) as u64).count_ones() as usize;
                    let pc = (s as u64).count_ones() as usize;
                    small[pc_bond * stride + pc]
                })
                .collect();
            DiagonalPhase::XCached(full)
        } else {
            DiagonalPhase::XByPopcount(small)
        }
    }

    fn apply(&self, n_sites: usize, amps: &mut [Complex64]) {
        match self {
            DiagonalPhase::ZCached(full) | DiagonalPhase::XCached(full) => {
                for (a, p) in amps.iter_mut().zip(full) {
                    *a *= p;
                }
            }
            DiagonalPhase::ZByPopcount(small) => {
                for (s, a) in amps.iter_mut().enumerate() {
                    *a *= small[(s as u64).count_ones() as usize];
                }
            }
            DiagonalPhase::XByPopcount(small) => {
                let stride = n_sites + 1;
                let mask = amps.len() - 1;
                for (s, a) in amps.iter_mut().enumerate() {
                    let rot = ((s << 1) | (s >> (n_sites - 1))) & mask;
                    let pc_bond = ((s ^ rot) as u64).count_ones() as usize;
                    let pc = (s as u64).count_ones() as usize;
                    *a *= small[pc_bond * stride + pc];
                }
            }
        }
    }

    fn conjugated(&self) -> Self {
        let conj = |v: &Vec<Complex64>| v.iter().map(Complex64::conj).collect();
        match self {
            DiagonalPhase::ZCached(v) => DiagonalPhase::ZCached(conj(v)),
            DiagonalPhase::ZByPopcount(v) => DiagonalPhase::ZByPopcount(conj(v)),
            DiagonalPhase::XCached(v) => DiagonalPhase::XCached(conj(v)),
            DiagonalPhase::XByPopcount(v) => DiagonalPhase::XByPopcount(conj(v)),
        }
    }
}

/// A one-period map for a fixed configuration, with its diagonal phase
/// tables precomputed so repeated kicks cost one transform pair and one
/// multiply pass each.
#[derive(Debug, Clone)]
pub struct FloquetMap {
    config: ModelConfig,
    direction: Direction,
    z_fwd: DiagonalPhase,
    x_fwd: DiagonalPhase,
    z_inv: DiagonalPhase,
    x_inv: DiagonalPhase,
}

impl FloquetMap {
    pub fn new(config: ModelConfig) -> Self {
        Self::with_direction(config, Direction::Forward)
    }

    pub fn with_direction(config: ModelConfig, direction: Direction) -> Self {
        let h_x = config.effective_h_x();
        let z_fwd = DiagonalPhase::z(config.n_sites, config.h_z, config.tau);
        let x_fwd = DiagonalPhase::x(config.n_sites, config.j_x, h_x, config.tau);
        let z_inv = z_fwd.conjugated();
        let x_inv = x_fwd.conjugated();
        FloquetMap {
            config,
            direction,
            z_fwd,
            x_fwd,
            z_inv,
            x_inv,
        }
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// The same map with the direction flipped.
    pub fn inverted(&self) -> FloquetMap {
        let mut map = self.clone();
        map.direction = match self.direction {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        };
        map
    }

    /// Apply one kick period.
    pub fn apply(&self, mut state: StateVector) -> Result<StateVector> {
        if state.n_sites() != self.config.n_sites {
            return Err(Error::DimensionMismatch {
                left: state.n_sites(),
                right: self.config.n_sites,
            });
        }
        state = match self.direction {
            Direction::Forward => self.kick_forward(state),
            Direction::Inverse => self.kick_inverse(state),
        };
        Ok(state)
    }

    /// Apply n kick periods; n = 0 is the identity.
    pub fn evolve_n_kicks(&self, mut state: StateVector, n: usize) -> Result<StateVector> {
        if state.n_sites() != self.config.n_sites {
            return Err(Error::DimensionMismatch {
                left: state.n_sites(),
                right: self.config.n_sites,
            });
        }
        for _ in 0..n {
            state = match self.direction {
                Direction::Forward => self.kick_forward(state),
                Direction::Inverse => self.kick_inverse(state),
            };
        }
        Ok(state)
    }

    fn kick_forward(&self, state: StateVector) -> StateVector {
        let n = self.config.n_sites;
        let mut amps = state.into_amplitudes();
        self.z_fwd.apply(n, &mut amps);
        state::walsh_hadamard_unnormalized(&mut amps);
        self.x_fwd.apply(n, &mut amps);
        state::walsh_hadamard_unnormalized(&mut amps);
        let scale = 1.0 / (1usize << n) as f64;
        for a in &mut amps {
            *a *= scale;
        }
        StateVector::from_amplitudes_unchecked(n, amps)
    }

    fn kick_inverse(&self, state: StateVector) -> StateVector {
        let n = self.config.n_sites;
        let mut amps = state.into_amplitudes();
        state::walsh_hadamard_unnormalized(&mut amps);
        self.x_inv.apply(n, &mut amps);
        state::walsh_hadamard_unnormalized(&mut amps);
        let scale = 1.0 / (1usize << n) as f64;
        for a in &mut amps {
            *a *= scale;
        }
        self.z_inv.apply(n, &mut amps);
        StateVector::from_amplitudes_unchecked(n, amps)
    }
}
