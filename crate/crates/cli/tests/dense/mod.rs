//! Compact dense-matrix oracle used by the hygiene criterion: explicit
//! operators exponentiated through a Hermitian eigendecomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

use floq_otoc::{ModelConfig, ObservableAxis, PauliAxis, StateVector};

pub type CMat = DMatrix<Complex64>;

fn pauli_matrix(axis: PauliAxis) -> CMat {
    let (z, o, i) = (Complex64::ZERO, Complex64::ONE, Complex64::I);
    match axis {
        PauliAxis::X => CMat::from_row_slice(2, 2, &[z, o, o, z]),
        PauliAxis::Y => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        PauliAxis::Z => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

fn site_operator(op: &CMat, site: usize, n_sites: usize) -> CMat {
    let low = CMat::identity(1 << site, 1 << site);
    let high = CMat::identity(1 << (n_sites - 1 - site), 1 << (n_sites - 1 - site));
    high.kronecker(op).kronecker(&low)
}

fn expm_herm(h: &CMat, t: f64) -> CMat {
    let eig = h.clone().symmetric_eigen();
    let dim = h.nrows();
    let mut d = CMat::zeros(dim, dim);
    for k in 0..dim {
        d[(k, k)] = Complex64::from_polar(1.0, -t * eig.eigenvalues[k]);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

pub fn dense_floquet(config: &ModelConfig) -> CMat {
    let n = config.n_sites;
    let dim = 1 << n;
    let x = pauli_matrix(PauliAxis::X);
    let z = pauli_matrix(PauliAxis::Z);
    let mut h_j = CMat::zeros(dim, dim);
    let mut h_field = CMat::zeros(dim, dim);
    for l in 0..n {
        h_j += site_operator(&x, l, n) * site_operator(&x, (l + 1) % n, n);
        h_field += site_operator(&z, l, n);
    }
    let mut h_kick = h_j * Complex64::from(config.j_x);
    let hx = config.effective_h_x();
    if hx != 0.0 {
        let mut h_long = CMat::zeros(dim, dim);
        for l in 0..n {
            h_long += site_operator(&x, l, n);
        }
        h_kick += h_long * Complex64::from(hx);
    }
    expm_herm(&h_kick, config.tau) * expm_herm(&h_field, config.tau * config.h_z)
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
    let mut u_n = CMat::identity(1 << config.n_sites, 1 << config.n_sites);
    for _ in 0..n {
        u_n = &u_n * &u;
    }
    let w_n = u_n.adjoint() * w * &u_n;
    let psi = to_vector(init);
    let rhs = &w_n * (&v * (&w_n * (&v * &psi)));
    (psi.adjoint() * rhs)[(0, 0)]
}
