//! Closed-form evolution of the single-excitation amplitudes.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::{InitialWeights, ModelParams};

/// Tolerance used when an operation requires a normalized state as input.
pub const NORM_INPUT_TOL: f64 = 1e-9;

/// Amplitudes on the basis `|1>..|4>` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeVector {
    pub t: f64,
    pub alpha: [C64; 4],
}

impl AmplitudeVector {
    pub fn new(t: f64, alpha: [C64; 4]) -> Self {
        Self { t, alpha }
    }

    /// `sum |alpha_i|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.alpha.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Errors unless the total probability is within [`NORM_INPUT_TOL`] of one.
    pub fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_INPUT_TOL || !n.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "amplitudes are not normalized (norm^2 = {n})"
            )));
        }
        Ok(())
    }

    /// Largest per-component modulus of the difference between two vectors.
    pub fn max_deviation(&self, other: &AmplitudeVector) -> f64 {
        self.alpha
            .iter()
            .zip(&other.alpha)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// `u0 = (cos theta - sin theta) / 2`, `w0 = (cos theta + sin theta) / 2`.
pub fn initial_weights(theta: f64) -> Result<InitialWeights> {
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "theta must be finite, got {theta}"
        )));
    }
    let (s, c) = theta.sin_cos();
    Ok(InitialWeights {
        u0: 0.5 * (c - s),
        w0: 0.5 * (c + s),
    })
}

/// Detuned Rabi frequency `sqrt(delta^2 + 2 (g_a^2 + g_b^2))`.
pub fn rabi_frequency(params: &ModelParams) -> f64 {
    let (ga, gb, d) = (params.g_a(), params.g_b(), params.delta());
    (d * d + 2.0 * (ga * ga + gb * gb)).sqrt()
}

/// Evaluates the closed-form amplitudes at time `t >= 0`.
///
/// With `B(t) = e^{i delta t} [cos(Omega t) - i (delta / Omega) sin(Omega t)]`:
///
/// ```text
/// alpha_1 =  u0 + w0 B(t)
/// alpha_2 = -u0 + w0 B(t)
/// alpha_3 = -2i (w0 g_a / Omega) e^{i delta t} sin(Omega t)
/// alpha_4 = -2i (w0 g_b / Omega) e^{i delta t} sin(Omega t)
/// ```
pub fn amplitudes_closed_form(params: &ModelParams, t: f64) -> Result<AmplitudeVector> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    let InitialWeights { u0, w0 } = initial_weights(params.theta())?;
    let omega = rabi_frequency(params);
    let delta = params.delta();
    let phase = C64::from_polar(1.0, delta * t);
    let (s, c) = (omega * t).sin_cos();
    let bracket = phase * C64::new(c, -(delta / omega) * s);
    let emission = phase * C64::new(0.0, -2.0 * w0 * s / omega);
    Ok(AmplitudeVector::new(
        t,
        [
            u0 + w0 * bracket,
            -u0 + w0 * bracket,
            emission * params.g_a(),
            emission * params.g_b(),
        ],
    ))
}
