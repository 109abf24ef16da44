//! Dense-matrix oracles for small chains, independent of the production
//! kernels: operators are built as explicit 2^N x 2^N matrices and
//! exponentiated through a Hermitian eigendecomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

use floq_otoc::{ModelConfig, ObservableAxis, PauliAxis, StateVector};

pub type CMat = DMatrix<Complex64>;

pub fn pauli_matrix(axis: PauliAxis) -> CMat {
    let (z, o, i) = (
        Complex64::ZERO,
        Complex64::ONE,
        Complex64::I,
    );
    match axis {
        PauliAxis::X => CMat::from_row_slice(2, 2, &[z, o, o, z]),
        PauliAxis::Y => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        PauliAxis::Z => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Operator acting with `op` on `site` (site 0 = least significant bit).
pub fn site_operator(op: &CMat, site: usize, n_sites: usize) -> CMat {
    let low = identity(1 << site);
    let high = identity(1 << (n_sites - 1 - site));
    kron(&kron(&high, op), &low)
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// H_xx = sum_l X_l X_{l+1 mod N} (N bond terms, so the 2-ring counts its
/// bond twice).
pub fn h_xx(n_sites: usize) -> CMat {
    let x = pauli_matrix(PauliAxis::X);
    let mut h = CMat::zeros(1 << n_sites, 1 << n_sites);
    for l in 0..n_sites {
        h += site_operator(&x, l, n_sites) * site_operator(&x, (l + 1) % n_sites, n_sites);
    }
    h
}

pub fn h_x(n_sites: usize) -> CMat {
    let x = pauli_matrix(PauliAxis::X);
    let mut h = CMat::zeros(1 << n_sites, 1 << n_sites);
    for l in 0..n_sites {
        h += site_operator(&x, l, n_sites);
    }
    h
}

pub fn h_z(n_sites: usize) -> CMat {
    let z = pauli_matrix(PauliAxis::Z);
    let mut h = CMat::zeros(1 << n_sites, 1 << n_sites);
    for l in 0..n_sites {
        h += site_operator(&z, l, n_sites);
    }
    h
}

/// exp(-i t H) for Hermitian H via eigendecomposition.
pub fn expm_herm(h: &CMat, t: f64) -> CMat {
    let eig = h.clone().symmetric_eigen();
    let dim = h.nrows();
    let mut d = CMat::zeros(dim, dim);
    for k in 0..dim {
        d[(k, k)] = Complex64::from_polar(1.0, -t * eig.eigenvalues[k]);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Dense one-period map: exp(-i tau (J H_xx + h_x H_x)) exp(-i tau h_z H_z).
pub fn dense_floquet(config: &ModelConfig) -> CMat {
    let n = config.n_sites;
    let hj = h_xx(n) * Complex64::from(config.j_x)
        + h_x(n) * Complex64::from(config.effective_h_x());
    let u_x = expm_herm(&hj, config.tau);
    let u_z = expm_herm(&h_z(n), config.tau * config.h_z);
    u_x * u_z
}

pub fn to_vector(state: &StateVector) -> CMat {
    CMat::from_column_slice(state.dim(), 1, state.amplitudes())
}

pub fn max_deviation(state: &StateVector, reference: &CMat) -> f64 {
    state
        .amplitudes()
        .iter()
        .zip(reference.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// Dense Heisenberg-picture OTOC: F(n) = <init| W(n) V W(n) V |init> with
/// W(n) = U^{-n} W U^n formed by explicit matrix conjugation.
pub fn dense_otoc(
    config: &ModelConfig,
    axis: ObservableAxis,
    site_l: usize,
    site_m: usize,
    n: usize,
    init: &StateVector,
) -> Complex64 {
    let u = dense_floquet(config);
    let op = pauli_matrix(axis.pauli());
    let w = site_operator(&op, site_l, config.n_sites);
    let v = site_operator(&op, site_m, config.n_sites);
    let mut u_n = identity(1 << config.n_sites);
    for _ in 0..n {
        u_n = &u_n * &u;
    }
    let w_n = u_n.adjoint() * w * &u_n;
    let psi = to_vector(init);
    let rhs = &w_n * (&v * (&w_n * (&v * &psi)));
    (psi.adjoint() * rhs)[(0, 0)]
}
