use crate::concurrence::{pairwise_concurrences, quartet_sum, ConcurrenceSet};
use crate::dynamics::{amplitudes_closed_form, AmplitudeVector};
use crate::error::{Error, Result};
use crate::params::{ModelParams, PairId};

/// One sample of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub amplitudes: AmplitudeVector,
    pub concurrences: ConcurrenceSet,
    /// Total probability `sum |alpha_i|^2`.
    pub norm: f64,
    pub quartet_sum: f64,
}

/// Closed-form dynamics sampled on an increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: ModelParams,
    pub times: Vec<f64>,
    pub rows: Vec<TrajectoryRow>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Concurrence of `pair` at every sample.
    pub fn series(&self, pair: PairId) -> Vec<f64> {
        self.rows.iter().map(|r| r.concurrences.get(pair)).collect()
    }
}

/// Samples `n` uniformly spaced points on `[0, t_max]`, both ends included.
pub fn sample_trajectory(params: &ModelParams, t_max: f64, n: usize) -> Result<Trajectory> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "t_max must be positive and finite, got {t_max}"
        )));
    }
    let last = (n - 1) as f64;
    let times: Vec<f64> = (0..n)
        .map(|i| {
            if i == n - 1 {
                t_max
            } else {
                t_max * i as f64 / last
            }
        })
        .collect();
    let rows = times
        .iter()
        .map(|&t| {
            let amplitudes = amplitudes_closed_form(params, t)?;
            let norm = amplitudes.norm_sqr();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::Internal(format!(
                    "norm drifted to {norm} at t = {t}"
                )));
            }
            let concurrences = pairwise_concurrences(&amplitudes)?;
            Ok(TrajectoryRow {
                amplitudes,
                concurrences,
                norm,
                quartet_sum: quartet_sum(&concurrences),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        params: *params,
        times,
        rows,
    })
}
