//! Bit-indexed state vectors and the primitive kernels applied to them.
//!
//! Basis convention: basis state `s` assigns site `l` the sigma_z eigenvalue
//! `+1` if bit `l` of `s` is 0 (spin up) and `-1` if it is 1, with site 0 in
//! the least significant bit. All kernels preserve this convention.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::config::ABSOLUTE_MAX_SITES;
use crate::error::{Error, Result};

/// Pauli direction of a single-site observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// A single-site Pauli observable (Hermitian and unitary).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiteObservable {
    pub site: usize,
    pub axis: PauliAxis,
}

impl SiteObservable {
    pub fn x(site: usize) -> Self {
        SiteObservable {
            site,
            axis: PauliAxis::X,
        }
    }
    pub fn y(site: usize) -> Self {
        SiteObservable {
            site,
            axis: PauliAxis::Y,
        }
    }
    pub fn z(site: usize) -> Self {
        SiteObservable {
            site,
            axis: PauliAxis::Z,
        }
    }
}

/// Supported initial states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InitialState {
    /// All spins up along z (basis index 0).
    AllUpZ,
    /// Product of +1 eigenstates of sigma_x (uniform amplitudes).
    AllRightX,
    /// Haar-random state, reproducible from the seed.
    HaarRandom { seed: u64 },
}

/// 2^N complex amplitudes over computational-basis bitstrings.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amps: Vec<Complex64>,
}

/// Build one of the named initial states.
///
/// Haar sampling draws i.i.d. complex Gaussians and normalizes, which is the
/// exact Haar measure on the unit sphere.
pub fn build_initial_state(kind: InitialState, n_sites: usize) -> Result<StateVector> {
    if n_sites < 2 || n_sites > ABSOLUTE_MAX_SITES {
        return Err(Error::ChainSize {
            n_sites,
            cap: ABSOLUTE_MAX_SITES,
        });
    }
    let dim = 1usize << n_sites;
    let amps = match kind {
        InitialState::AllUpZ => {
            let mut amps = vec![Complex64::ZERO; dim];
            amps[0] = Complex64::ONE;
            amps
        }
        InitialState::AllRightX => {
            let a = Complex64::new(2.0_f64.powf(-(n_sites as f64) / 2.0), 0.0);
            vec![a; dim]
        }
        InitialState::HaarRandom { seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut amps = Vec::with_capacity(dim);
            for _ in 0..dim {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                amps.push(Complex64::new(re, im));
            }
            let norm = l2_norm(&amps);
            for a in &mut amps {
                *a /= norm;
            }
            amps
        }
    };
    Ok(StateVector { n_sites, amps })
}

impl StateVector {
    /// Wrap raw amplitudes; the length must be a power of two matching a
    /// supported chain size.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::Config(format!(
                "amplitude count {dim} is not a power of two"
            )));
        }
        let n_sites = dim.trailing_zeros() as usize;
        if n_sites < 2 || n_sites > ABSOLUTE_MAX_SITES {
            return Err(Error::ChainSize {
                n_sites,
                cap: ABSOLUTE_MAX_SITES,
            });
        }
        Ok(StateVector { n_sites, amps })
    }

    pub(crate) fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub(crate) fn from_amplitudes_unchecked(n_sites: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << n_sites);
        StateVector { n_sites, amps }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    /// Apply a single-site Pauli operator.
    pub fn apply_pauli(mut self, obs: SiteObservable) -> Result<StateVector> {
        if obs.site >= self.n_sites {
            return Err(Error::SiteOutOfRange {
                site: obs.site,
                n_sites: self.n_sites,
            });
        }
        let bit = 1usize << obs.site;
        let dim = self.amps.len();
        match obs.axis {
            PauliAxis::Z => {
                for s in 0..dim {
                    if s & bit != 0 {
                        self.amps[s] = -self.amps[s];
                    }
                }
            }
            PauliAxis::X => {
                for s in 0..dim {
                    if s & bit == 0 {
                        self.amps.swap(s, s | bit);
                    }
                }
            }
            PauliAxis::Y => {
                // Y|0> = i|1>, Y|1> = -i|0>
                let i = Complex64::I;
                for s in 0..dim {
                    if s & bit == 0 {
                        let up = self.amps[s];
                        let down = self.amps[s | bit];
                        self.amps[s] = -i * down;
                        self.amps[s | bit] = i * up;
                    }
                }
            }
        }
        Ok(self)
    }

    /// Multiply each amplitude by exp(-i tau h_z m_z(s)), where m_z(s) is the
    /// total sigma_z eigenvalue of basis state s.
    pub fn apply_diagonal_z_kick(mut self, h_z: f64, tau: f64) -> StateVector {
        let phases = z_phase_by_popcount(self.n_sites, h_z, tau);
        for (s, a) in self.amps.iter_mut().enumerate() {
            *a *= phases[(s as u64).count_ones() as usize];
        }
        self
    }

    /// Apply exp(-i tau (J_x H_xx + h_x H_x)): rotate every site to the x
    /// basis with a Hadamard, multiply the diagonal bond/field phases, rotate
    /// back. Cost O(N 2^N).
    pub fn apply_x_basis_kick(mut self, j_x: f64, h_x: f64, tau: f64) -> StateVector {
        let n = self.n_sites;
        let phases = x_phase_by_popcount(n, j_x, h_x, tau);
        walsh_hadamard_unnormalized(&mut self.amps);
        let mask = (1usize << n) - 1;
        let stride = n + 1;
        for (s, a) in self.amps.iter_mut().enumerate() {
            let rot = ((s << 1) | (s >> (n - 1))) & mask;
            let pc_bond = ((s ^ rot) as u64).count_ones() as usize;
            let pc = (s as u64).count_ones() as usize;
            *a *= phases[pc_bond * stride + pc];
        }
        walsh_hadamard_unnormalized(&mut self.amps);
        let scale = 1.0 / (1usize << n) as f64;
        for a in &mut self.amps {
            *a *= scale;
        }
        self
    }

    /// Full per-site Hadamard rotation H^(x)N (normalized, self-inverse).
    pub fn apply_hadamard_all(mut self) -> StateVector {
        walsh_hadamard_unnormalized(&mut self.amps);
        let scale = 2.0_f64.powf(-(self.n_sites as f64) / 2.0);
        for a in &mut self.amps {
            *a *= scale;
        }
        self
    }

    /// Expectation value of a single-site Pauli observable.
    pub fn expectation(&self, obs: SiteObservable) -> Result<Complex64> {
        let transformed = self.clone().apply_pauli(obs)?;
        inner_product(self, &transformed)
    }

    /// Cyclically relabel sites l -> l + shift (mod N). Used to exercise
    /// translation covariance on the ring.
    pub fn rotate_sites(&self, shift: usize) -> StateVector {
        let n = self.n_sites;
        let shift = shift % n;
        if shift == 0 {
            return self.clone();
        }
        let dim = self.amps.len();
        let mask = dim - 1;
        let mut out = vec![Complex64::ZERO; dim];
        for (s, &a) in self.amps.iter().enumerate() {
            let rotated = ((s << shift) | (s >> (n - shift))) & mask;
            out[rotated] = a;
        }
        StateVector {
            n_sites: n,
            amps: out,
        }
    }
}

/// Diagonal z-kick phases indexed by bit population count.
pub(crate) fn z_phase_by_popcount(n_sites: usize, h_z: f64, tau: f64) -> Vec<Complex64> {
    (0..=n_sites)
        .map(|pc| {
            let m_z = n_sites as f64 - 2.0 * pc as f64;
            Complex64::from_polar(1.0, -tau * h_z * m_z)
        })
        .collect()
}

/// Diagonal x-basis phases indexed by (antiparallel-bond count, popcount),
/// flattened row-major with stride n_sites + 1.
pub(crate) fn x_phase_by_popcount(n_sites: usize, j_x: f64, h_x: f64, tau: f64) -> Vec<Complex64> {
    let stride = n_sites + 1;
    let mut out = vec![Complex64::ZERO; stride * stride];
    for pc_bond in 0..=n_sites {
        let bond_sum = n_sites as f64 - 2.0 * pc_bond as f64;
        for pc in 0..=n_sites {
            let spin_sum = n_sites as f64 - 2.0 * pc as f64;
            out[pc_bond * stride + pc] =
                Complex64::from_polar(1.0, -tau * (j_x * bond_sum + h_x * spin_sum));
        }
    }
    out
}

/// In-place unnormalized fast Walsh-Hadamard transform.
pub(crate) fn walsh_hadamard_unnormalized(amps: &mut [Complex64]) {
    let n = amps.len();
    let mut h = 1;
    while h < n {
        let step = h * 2;
        let mut base = 0;
        while base < n {
            for j in base..base + h {
                let a = amps[j];
                let b = amps[j + h];
                amps[j] = a + b;
                amps[j + h] = a - b;
            }
            base += step;
        }
        h = step;
    }
}

fn l2_norm(amps: &[Complex64]) -> f64 {
    pairwise_sum_f64(&mut amps.iter().map(|a| a.norm_sqr())).sqrt()
}

/// Block size at which pairwise reduction bottoms out into a sequential sum.
const REDUCE_BLOCK: usize = 1024;

/// <a|b> accumulated by a fixed-shape pairwise (tree) reduction so the result
/// does not depend on how the work is scheduled.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.n_sites != b.n_sites {
        return Err(Error::DimensionMismatch {
            left: a.n_sites,
            right: b.n_sites,
        });
    }
    Ok(pairwise_inner(&a.amps, &b.amps))
}

fn pairwise_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() <= REDUCE_BLOCK {
        let mut acc = Complex64::ZERO;
        for (x, y) in a.iter().zip(b) {
            acc += x.conj() * y;
        }
        acc
    } else {
        let mid = a.len() / 2;
        pairwise_inner(&a[..mid], &b[..mid]) + pairwise_inner(&a[mid..], &b[mid..])
    }
}

fn pairwise_sum_f64(values: &mut dyn Iterator<Item = f64>) -> f64 {
    // collect into a buffer, then reduce with the same fixed tree shape
    let buf: Vec<f64> = values.collect();
    fn reduce(v: &[f64]) -> f64 {
        if v.len() <= REDUCE_BLOCK {
            v.iter().sum()
        } else {
            let mid = v.len() / 2;
            reduce(&v[..mid]) + reduce(&v[mid..])
        }
    }
    reduce(&buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!(
            (a - b).norm() <= tol,
            "expected {b} within {tol}, got {a} (diff {})",
            (a - b).norm()
        );
    }

    #[test]
    fn all_up_is_basis_index_zero() {
        let v = build_initial_state(InitialState::AllUpZ, 3).unwrap();
        assert_eq!(v.amplitudes()[0], Complex64::ONE);
        assert!(v.amplitudes()[1..].iter().all(|a| *a == Complex64::ZERO));
    }

    #[test]
    fn all_right_is_uniform() {
        let v = build_initial_state(InitialState::AllRightX, 2).unwrap();
        for a in v.amplitudes() {
            assert_close(*a, Complex64::new(0.5, 0.0), 1e-15);
        }
    }

    #[test]
    fn haar_is_reproducible_and_normalized() {
        let v1 = build_initial_state(InitialState::HaarRandom { seed: 42 }, 4).unwrap();
        let v2 = build_initial_state(InitialState::HaarRandom { seed: 42 }, 4).unwrap();
        assert_eq!(v1.amplitudes(), v2.amplitudes());
        assert!((v1.norm() - 1.0).abs() < 1e-14);
        let v3 = build_initial_state(InitialState::HaarRandom { seed: 43 }, 4).unwrap();
        assert_ne!(v1.amplitudes(), v3.amplitudes());
    }

    #[test]
    fn initial_state_rejects_bad_sizes() {
        assert!(build_initial_state(InitialState::AllUpZ, 1).is_err());
        assert!(build_initial_state(InitialState::AllUpZ, 31).is_err());
    }

    #[test]
    fn pauli_z_on_all_up_is_identity() {
        let v = build_initial_state(InitialState::AllUpZ, 2).unwrap();
        let w = v.clone().apply_pauli(SiteObservable::z(0)).unwrap();
        assert_eq!(v.amplitudes(), w.amplitudes());
    }

    #[test]
    fn pauli_x_flips_bit() {
        let v = build_initial_state(InitialState::AllUpZ, 2).unwrap();
        let w = v.apply_pauli(SiteObservable::x(0)).unwrap();
        assert_eq!(w.amplitudes()[1], Complex64::ONE);
        assert_eq!(w.amplitudes()[0], Complex64::ZERO);
    }

    #[test]
    fn pauli_is_an_involution() {
        let v = build_initial_state(InitialState::HaarRandom { seed: 7 }, 5).unwrap();
        for axis in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z] {
            let obs = SiteObservable { site: 3, axis };
            let w = v
                .clone()
                .apply_pauli(obs)
                .unwrap()
                .apply_pauli(obs)
                .unwrap();
            for (a, b) in v.amplitudes().iter().zip(w.amplitudes()) {
                assert_close(*a, *b, 1e-15);
            }
        }
    }

    #[test]
    fn pauli_rejects_bad_site() {
        let v = build_initial_state(InitialState::AllUpZ, 2).unwrap();
        assert!(v.apply_pauli(SiteObservable::z(2)).is_err());
    }

    #[test]
    fn z_kick_phases_all_up() {
        // m_z = 3 on the all-up state: global phase exp(-0.3 i)
        let v = build_initial_state(InitialState::AllUpZ, 3).unwrap();
        let w = v.apply_diagonal_z_kick(1.0, 0.1);
        assert_close(w.amplitudes()[0], Complex64::from_polar(1.0, -0.3), 1e-15);
    }

    #[test]
    fn z_kick_zero_tau_is_identity() {
        let v = build_initial_state(InitialState::HaarRandom { seed: 1 }, 3).unwrap();
        let w = v.clone().apply_diagonal_z_kick(1.0, 0.0);
        assert_eq!(v.amplitudes(), w.amplitudes());
    }

    #[test]
    fn z_kick_phase_of_mixed_bitstring() {
        // s = 0b101 on N=3: two down spins, one up, m_z = -1
        let tau = 0.37;
        let mut amps = vec![Complex64::ZERO; 8];
        amps[0b101] = Complex64::ONE;
        let v = StateVector::from_amplitudes(amps).unwrap();
        let w = v.apply_diagonal_z_kick(1.0, tau);
        assert_close(w.amplitudes()[0b101], Complex64::from_polar(1.0, tau), 1e-15);
    }

    #[test]
    fn x_kick_zero_tau_is_identity() {
        let v = build_initial_state(InitialState::HaarRandom { seed: 2 }, 4).unwrap();
        let w = v.clone().apply_x_basis_kick(1.0, 0.3, 0.0);
        for (a, b) in v.amplitudes().iter().zip(w.amplitudes()) {
            assert_close(*a, *b, 1e-15);
        }
    }

    #[test]
    fn x_kick_on_all_right_is_a_global_phase() {
        // |right...right> is an H_xx eigenstate with eigenvalue 2 on the
        // 2-ring (both bonds), so the kick is the phase exp(-2 i tau).
        let tau = 0.19;
        let v = build_initial_state(InitialState::AllRightX, 2).unwrap();
        let w = v.clone().apply_x_basis_kick(1.0, 0.0, tau);
        let phase = Complex64::from_polar(1.0, -2.0 * tau);
        for (a, b) in v.amplitudes().iter().zip(w.amplitudes()) {
            assert_close(*b, phase * a, 1e-14);
        }
    }

    #[test]
    fn hadamard_is_an_involution() {
        let v = build_initial_state(InitialState::HaarRandom { seed: 3 }, 6).unwrap();
        let w = v.clone().apply_hadamard_all().apply_hadamard_all();
        for (a, b) in v.amplitudes().iter().zip(w.amplitudes()) {
            assert_close(*a, *b, 1e-13);
        }
    }

    #[test]
    fn hadamard_maps_all_up_to_all_right() {
        let v = build_initial_state(InitialState::AllUpZ, 3).unwrap();
        let w = v.apply_hadamard_all();
        let r = build_initial_state(InitialState::AllRightX, 3).unwrap();
        for (a, b) in w.amplitudes().iter().zip(r.amplitudes()) {
            assert_close(*a, *b, 1e-15);
        }
    }

    #[test]
    fn inner_product_examples() {
        let up = build_initial_state(InitialState::AllUpZ, 2).unwrap();
        let right = build_initial_state(InitialState::AllRightX, 2).unwrap();
        let haar = build_initial_state(InitialState::HaarRandom { seed: 4 }, 2).unwrap();
        assert_close(inner_product(&haar, &haar).unwrap(), Complex64::ONE, 1e-14);
        let flipped = up.clone().apply_pauli(SiteObservable::x(0)).unwrap();
        assert_close(inner_product(&up, &flipped).unwrap(), Complex64::ZERO, 1e-15);
        assert_close(
            inner_product(&right, &up).unwrap(),
            Complex64::new(0.5, 0.0),
            1e-15,
        );
    }

    #[test]
    fn inner_product_rejects_mismatched_chains() {
        let a = build_initial_state(InitialState::AllUpZ, 2).unwrap();
        let b = build_initial_state(InitialState::AllUpZ, 3).unwrap();
        assert!(inner_product(&a, &b).is_err());
    }

    #[test]
    fn z_kick_commutes_with_pauli_z_exactly() {
        let v = build_initialstate_haar(5, 11);
        let a = v
            .clone()
            .apply_diagonal_z_kick(0.9, 0.31)
            .apply_pauli(SiteObservable::z(2))
            .unwrap();
        let b = v
            .apply_pauli(SiteObservable::z(2))
            .unwrap()
            .apply_diagonal_z_kick(0.9, 0.31);
        assert_eq!(a.amplitudes(), b.amplitudes());
    }

    fn build_initialstate_haar(n: usize, seed: u64) -> StateVector {
        build_initial_state(InitialState::HaarRandom { seed }, n).unwrap()
    }

    #[test]
    fn rotate_sites_permutes_bits() {
        let mut amps = vec![Complex64::ZERO; 8];
        amps[0b001] = Complex64::ONE; // site 0 down
        let v = StateVector::from_amplitudes(amps).unwrap();
        let w = v.rotate_sites(1);
        assert_eq!(w.amplitudes()[0b010], Complex64::ONE); // now site 1 down
    }
}
