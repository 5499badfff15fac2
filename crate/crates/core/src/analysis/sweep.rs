use rayon::prelude::*;
use serde::Serialize;

use super::peaks::{default_sup_horizon, sup_concurrence};
use crate::error::{Error, Result};
use crate::params::{ModelParams, PairId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub theta: f64,
    /// `g_b / g_a`.
    pub ratio: f64,
    pub sup: f64,
}

/// `sup_concurrence` over every `(theta, ratio)` combination at a fixed
/// half detuning, in row-major order (`theta` outer).
///
/// Couplings follow [`ModelParams::resonant_with_ratio`]: the larger one is
/// unity. Without an explicit `horizon` each point uses
/// [`default_sup_horizon`].
pub fn sup_sweep(
    pair: PairId,
    delta: f64,
    thetas: &[f64],
    ratios: &[f64],
    horizon: Option<f64>,
    n: usize,
) -> Result<Vec<SweepPoint>> {
    if thetas.is_empty() || ratios.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs at least one theta and one ratio".into(),
        ));
    }
    let grid: Vec<(f64, f64)> = thetas
        .iter()
        .flat_map(|&th| ratios.iter().map(move |&r| (th, r)))
        .collect();
    grid.par_iter()
        .map(|&(theta, ratio)| {
            let base = ModelParams::resonant_with_ratio(theta, ratio)?;
            let params = ModelParams::new(theta, delta, base.g_a(), base.g_b())?;
            let h = horizon.unwrap_or_else(|| default_sup_horizon(&params));
            Ok(SweepPoint {
                theta,
                ratio,
                sup: sup_concurrence(&params, pair, h, n)?,
            })
        })
        .collect()
}
