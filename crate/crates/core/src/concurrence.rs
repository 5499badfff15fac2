//! Analytic pairwise concurrences of the single-excitation state.

use serde::Serialize;

use crate::dynamics::{initial_weights, rabi_frequency, AmplitudeVector};
use crate::error::{Error, Result};
use crate::params::{ModelParams, PairId};

/// Overshoot above 1 that is silently clamped; anything larger is a bug.
pub const CLAMP_TOL: f64 = 1e-12;

/// The six pairwise concurrences at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcurrenceSet {
    pub t: f64,
    values: [f64; 6],
}

impl ConcurrenceSet {
    pub fn get(&self, pair: PairId) -> f64 {
        self.values[Self::slot(pair)]
    }

    /// Values in [`PairId::ALL`] order.
    pub fn values(&self) -> [f64; 6] {
        self.values
    }

    fn slot(pair: PairId) -> usize {
        PairId::ALL
            .iter()
            .position(|&p| p == pair)
            .expect("pair is listed in ALL")
    }
}

fn clamp_unit(v: f64, what: &str) -> Result<f64> {
    if !v.is_finite() || v > 1.0 + CLAMP_TOL {
        return Err(Error::Internal(format!(
            "{what} = {v} exceeds the unit interval"
        )));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// `C_ij = 2 |alpha_i alpha_j^*|` for each qubit pair.
pub fn pairwise_concurrences(amps: &AmplitudeVector) -> Result<ConcurrenceSet> {
    amps.ensure_normalized()?;
    let [a1, a2, a3, a4] = amps.alpha;
    let c = |x: num_complex::Complex64, y: num_complex::Complex64| 2.0 * (x * y.conj()).norm();
    let raw = [
        c(a1, a2),
        c(a3, a4),
        c(a3, a1),
        c(a4, a1),
        c(a2, a3),
        c(a2, a4),
    ];
    let mut values = [0.0; 6];
    for (k, (v, pair)) in raw.into_iter().zip(PairId::ALL).enumerate() {
        values[k] = clamp_unit(v, &format!("C_{pair}"))?;
    }
    Ok(ConcurrenceSet { t: amps.t, values })
}

/// Concurrences for a maximally entangled atomic pair, zero detuning and
/// equal couplings `g`: `cos^2(2gt)` for `AB`, `sin^2(2gt)` for `ab` and
/// `|sin(4gt)| / 2` for every atom-mode pair.
pub fn resonant_symmetric_case(g: f64, t: f64, pair: PairId) -> f64 {
    let x = 2.0 * g * t;
    match pair {
        PairId::AB => x.cos().powi(2),
        PairId::ab => x.sin().powi(2),
        _ => 0.5 * (2.0 * x).sin().abs(),
    }
}

/// Resonant expressions for `C_Aa` and `C_Ba`:
///
/// ```text
/// C_Aa = (4 g_a w0^2 / Omega) |sin(Omega t) [(u0 - w0)/w0 + 2 cos^2(Omega t / 2)]|
/// C_Ba = (4 g_a w0^2 / Omega) |sin(Omega t) [(u0 - w0)/w0 + 2 sin^2(Omega t / 2)]|
/// ```
///
/// One factor of `w0` is carried into the bracket so that `w0 = 0` is
/// well defined. At zero detuning these agree with the pairwise formulas
/// for every coupling ratio, not only for `g_a >> g_b`.
pub fn resonant_exact_aa_ba(params: &ModelParams, t: f64, pair: PairId) -> Result<f64> {
    if params.delta() != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "resonant expression requires delta = 0, got {}",
            params.delta()
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "time must be non-negative, got {t}"
        )));
    }
    let w = initial_weights(params.theta())?;
    let omega = rabi_frequency(params);
    let x = omega * t;
    let half = match pair {
        PairId::Aa => (0.5 * x).cos().powi(2),
        PairId::Ba => (0.5 * x).sin().powi(2),
        other => {
            return Err(Error::InvalidArgument(format!(
                "resonant expression covers Aa and Ba only, got {other}"
            )))
        }
    };
    let bracket = w.w0 * (w.u0 - w.w0) + 2.0 * w.w0 * w.w0 * half;
    let v = 4.0 * params.g_a() / omega * (x.sin() * bracket).abs();
    clamp_unit(v, &format!("C_{pair}"))
}

/// `C_AB^2 + C_Ab^2 + C_Ba^2 + C_ab^2`.
pub fn quartet_sum(cs: &ConcurrenceSet) -> f64 {
    [PairId::AB, PairId::Ab, PairId::Ba, PairId::ab]
        .iter()
        .map(|&p| cs.get(p).powi(2))
        .sum()
}
