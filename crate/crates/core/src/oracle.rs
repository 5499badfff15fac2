//! Independent route to the dynamics and the concurrences.
//!
//! The subspace Hamiltonian is exponentiated through its spectral
//! decomposition, and concurrences are computed with the Wootters spin-flip
//! construction on reduced two-qubit density matrices obtained by an explicit
//! partial trace of the 16-dimensional four-qubit state. Nothing here reuses
//! the closed-form amplitudes or pairwise formulas.
//!
//! Frame: atomic basis states carry zero energy and one-photon states carry
//! `-2 delta`. In the rotating frame of the symmetric atomic state
//! `(|1> + |2>)/sqrt(2)` and the bright mode `(g_a |3> + g_b |4>)/G` with
//! `G = sqrt(g_a^2 + g_b^2)`, this is a two-level problem with splitting
//! `2 delta` and coupling `sqrt(2) G`, whose solution is exactly the closed
//! form with `Omega = sqrt(delta^2 + 2 G^2)`.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64 as C64;

use crate::dynamics::AmplitudeVector;
use crate::error::{Error, Result};
use crate::params::{ModelParams, PairId};

/// Hermiticity tolerance for density-matrix input.
pub const HERMITIAN_TOL: f64 = 1e-13;
/// Trace tolerance for density-matrix input.
pub const TRACE_TOL: f64 = 1e-9;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-12;
/// Eigenvalues of `rho` below this are treated as exact zeros when forming
/// `sqrt(rho)`; otherwise rounding noise of order 1e-17 would turn into
/// singular values of order 1e-9.
pub const RANK_TOL: f64 = 1e-13;

/// Real symmetric Hamiltonian on the basis `|1>..|4>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceHamiltonian {
    pub h: Matrix4<f64>,
}

/// Builds the interaction-picture Hamiltonian restricted to one excitation.
///
/// Diagonal `(0, 0, -2 delta, -2 delta)`; each atom couples to mode `a` with
/// `g_a` and to mode `b` with `g_b`. There is no atom-atom or mode-mode
/// element.
pub fn build_hamiltonian(params: &ModelParams) -> SubspaceHamiltonian {
    let (ga, gb) = (params.g_a(), params.g_b());
    let e = -2.0 * params.delta();
    #[rustfmt::skip]
    let h = Matrix4::new(
        0.0, 0.0, ga,  gb,
        0.0, 0.0, ga,  gb,
        ga,  ga,  e,   0.0,
        gb,  gb,  0.0, e,
    );
    SubspaceHamiltonian { h }
}

/// Applies `exp(-i h t)` to `(cos theta, sin theta, 0, 0)` via the spectral
/// decomposition of `h`.
pub fn propagate_exact(params: &ModelParams, t: f64) -> Result<AmplitudeVector> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    let SubspaceHamiltonian { h } = build_hamiltonian(params);
    let eig = SymmetricEigen::new(h);
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Internal(
            "eigendecomposition produced non-finite eigenvalues".into(),
        ));
    }
    let (s, c) = params.theta().sin_cos();
    let psi0 = Vector4::new(c, s, 0.0, 0.0);
    let mut psi = Vector4::<C64>::zeros();
    for k in 0..4 {
        let v = eig.eigenvectors.column(k);
        let overlap = v.dot(&psi0);
        let phase = C64::from_polar(overlap, -eig.eigenvalues[k] * t);
        for i in 0..4 {
            psi[i] += phase * v[i];
        }
    }
    Ok(AmplitudeVector::new(t, [psi[0], psi[1], psi[2], psi[3]]))
}

/// Reduced state of one qubit pair on the basis `{|ee>, |eg>, |ge>, |gg>}`.
/// Mode qubits map one photon to `e` and vacuum to `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    pub rho: Matrix4<C64>,
}

impl TwoQubitDensity {
    /// Checks Hermiticity and unit trace.
    pub fn new(rho: Matrix4<C64>) -> Result<Self> {
        let herm_err = (rho - rho.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if !(herm_err <= HERMITIAN_TOL) {
            return Err(Error::InvalidArgument(format!(
                "density matrix is not Hermitian (deviation {herm_err:e})"
            )));
        }
        let tr = rho.trace();
        if !((tr - 1.0).norm() <= TRACE_TOL) {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        Ok(Self { rho })
    }

    /// Density matrix of a pure two-qubit state (normalized internally).
    pub fn from_pure(psi: [C64; 4]) -> Result<Self> {
        let v = Vector4::from(psi);
        let n = v.norm();
        if !(n > 0.0) {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let v = v / C64::from(n);
        Self::new(v * v.adjoint())
    }
}

/// Index of a basis state in the 16-dimensional `(A, B, a, b)` product
/// space, with bit value 1 for the excited level.
fn product_index(bits: [u8; 4]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

fn embed(amps: &AmplitudeVector) -> [C64; 16] {
    let mut psi = [C64::new(0.0, 0.0); 16];
    psi[product_index([1, 0, 0, 0])] = amps.alpha[0];
    psi[product_index([0, 1, 0, 0])] = amps.alpha[1];
    psi[product_index([0, 0, 1, 0])] = amps.alpha[2];
    psi[product_index([0, 0, 0, 1])] = amps.alpha[3];
    psi
}

/// Traces the four-qubit pure state down to the qubits of `pair`.
pub fn reduced_density(amps: &AmplitudeVector, pair: PairId) -> Result<TwoQubitDensity> {
    amps.ensure_normalized()?;
    let psi = embed(amps);
    let (p, q) = pair.qubits();
    let (sp, sq) = (3 - p.slot(), 3 - q.slot());
    let local = |i: usize| 2 * (1 - ((i >> sp) & 1)) + (1 - ((i >> sq) & 1));
    let pair_mask = (1 << sp) | (1 << sq);
    let mut rho = Matrix4::<C64>::zeros();
    for i in 0..16 {
        if psi[i] == C64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..16 {
            if (i & !pair_mask) == (j & !pair_mask) {
                rho[(local(i), local(j))] += psi[i] * psi[j].conj();
            }
        }
    }
    TwoQubitDensity::new(rho)
}

/// `sigma_y (x) sigma_y` in the two-qubit product basis.
fn spin_flip() -> Matrix4<C64> {
    let one = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix4::new(
        z,    z,   z,   -one,
        z,    z,   one, z,
        z,    one, z,   z,
        -one, z,   z,   z,
    );
    m
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)`.
///
/// The `l_i` are the square roots of the eigenvalues of `rho rho~` with
/// `rho~ = Y rho* Y`, `Y = sigma_y (x) sigma_y`. They are obtained as the
/// singular values of `sqrt(rho) sqrt(rho~)`, which share those eigenvalues
/// after squaring but keep zero singular values accurate to rounding instead
/// of to its square root.
pub fn wootters_concurrence(state: &TwoQubitDensity) -> Result<f64> {
    let state = TwoQubitDensity::new(state.rho)?;
    let eig = SymmetricEigen::new(state.rho);
    let min_eig = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eig < PSD_TOL {
        return Err(Error::InvalidArgument(format!(
            "density matrix is not positive semidefinite (eigenvalue {min_eig:e})"
        )));
    }
    let roots = eig.eigenvalues.map(|v| {
        if v > RANK_TOL {
            C64::from(v.sqrt())
        } else {
            C64::from(0.0)
        }
    });
    let sqrt_rho = eig.eigenvectors * Matrix4::from_diagonal(&roots) * eig.eigenvectors.adjoint();
    let y = spin_flip();
    let sqrt_flipped = y * sqrt_rho.conjugate() * y;
    let product = sqrt_rho * sqrt_flipped;
    let mut lambdas: Vec<f64> = product.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}
