use std::f64::consts::PI;

use serde::Serialize;

use super::search::golden_section_max;
use super::trajectory::{sample_trajectory, Trajectory};
use crate::concurrence::pairwise_concurrences;
use crate::dynamics::{amplitudes_closed_form, rabi_frequency};
use crate::error::{Error, Result};
use crate::params::{ModelParams, PairId};

/// Local maxima at or below this value are rounding noise, not peaks.
pub const PEAK_FLOOR: f64 = 1e-12;

/// Refined peak values may overshoot 1 by at most this much before clamping.
const REFINE_OVERSHOOT: f64 = 1e-9;

/// Default refined-value threshold for calling a peak a complete transfer.
pub const DEFAULT_TRANSFER_THRESHOLD: f64 = 1.0 - 1e-6;

/// Grid density used by [`complete_transfer_times`], per `pi / Omega`.
const SAMPLES_PER_HALF_PERIOD: f64 = 256.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakRecord {
    pub pair: PairId,
    pub t_peak: f64,
    pub value: f64,
    /// Index of the sample the peak was found at.
    pub index: usize,
}

/// Strict interior local maxima of `ys`, refined by the parabola through the
/// sample and its two neighbours.
fn parabolic_peaks(times: &[f64], ys: &[f64]) -> Result<Vec<(usize, f64, f64)>> {
    let mut out = Vec::new();
    for i in 1..ys.len().saturating_sub(1) {
        let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
        if !(y1 > y0 && y1 > y2 && y1 > PEAK_FLOOR) {
            continue;
        }
        let h = 0.5 * (times[i + 1] - times[i - 1]);
        let curvature = y0 - 2.0 * y1 + y2;
        let offset = 0.5 * (y0 - y2) / curvature;
        let value = y1 - 0.25 * (y0 - y2) * offset;
        if value > 1.0 + REFINE_OVERSHOOT {
            return Err(Error::Internal(format!(
                "refined peak {value} exceeds 1 at t = {}",
                times[i]
            )));
        }
        out.push((i, times[i] + offset * h, value.min(1.0)));
    }
    Ok(out)
}

/// All strict interior local maxima of the concurrence of `pair`, sorted by
/// time, with parabolic refinement of position and height.
pub fn find_peaks(traj: &Trajectory, pair: PairId) -> Result<Vec<PeakRecord>> {
    if traj.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "peak search needs at least 3 samples, got {}",
            traj.len()
        )));
    }
    let ys = traj.series(pair);
    Ok(parabolic_peaks(&traj.times, &ys)?
        .into_iter()
        .map(|(index, t_peak, value)| PeakRecord {
            pair,
            t_peak,
            value,
            index,
        })
        .collect())
}

fn concurrence_at(params: &ModelParams, pair: PairId, t: f64) -> f64 {
    amplitudes_closed_form(params, t)
        .and_then(|a| pairwise_concurrences(&a))
        .map(|c| c.get(pair))
        .unwrap_or(f64::NAN)
}

/// Peaks of `traj` re-maximized by golden-section search on the closed form
/// between the neighbouring samples. Values are exact evaluations, so they
/// never exceed the true local maximum.
fn polished_peaks(
    params: &ModelParams,
    traj: &Trajectory,
    pair: PairId,
) -> Result<Vec<(f64, f64)>> {
    Ok(find_peaks(traj, pair)?
        .into_iter()
        .map(|peak| {
            let sample = (
                traj.times[peak.index],
                traj.rows[peak.index].concurrences.get(pair),
            );
            let (lo, hi) = (traj.times[peak.index - 1], traj.times[peak.index + 1]);
            let (t, v, _) = golden_section_max(|t| concurrence_at(params, pair, t), lo, hi, 1e-12);
            if v >= sample.1 {
                (t, v)
            } else {
                sample
            }
        })
        .collect())
}

/// Times within `(0, horizon)` at which the concurrence of `pair` has a
/// local maximum of at least `threshold`.
///
/// Peaks are located on a grid of 256 samples per `pi / Omega` and then
/// polished, so reported times and the threshold comparison use exact
/// evaluations rather than the parabolic estimate.
pub fn complete_transfer_times(
    params: &ModelParams,
    pair: PairId,
    threshold: f64,
    horizon: f64,
) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidArgument(format!(
            "threshold must lie in [0, 1], got {threshold}"
        )));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    let omega = rabi_frequency(params);
    let n = ((horizon * omega / PI * SAMPLES_PER_HALF_PERIOD).ceil() as usize).max(1000) + 1;
    let traj = sample_trajectory(params, horizon, n)?;
    Ok(polished_peaks(params, &traj, pair)?
        .into_iter()
        .filter(|&(t, v)| v >= threshold && t < horizon)
        .map(|(t, _)| t)
        .collect())
}

/// Twelve half Rabi periods, enough to cover several beats of the detuned
/// dynamics.
pub fn default_sup_horizon(params: &ModelParams) -> f64 {
    12.0 * PI / rabi_frequency(params)
}

/// Estimates `sup_t C_pair(t)` over `[0, horizon]` from `n` samples: the
/// largest of the endpoint values and the polished interior peaks.
///
/// Each located peak is exact to the golden-section tolerance, so the only
/// grid error left is a peak the samples miss entirely. Parabolic refinement
/// alone can overshoot sharp maxima by a few 1e-6 at `n = 1000`.
pub fn sup_concurrence(params: &ModelParams, pair: PairId, horizon: f64, n: usize) -> Result<f64> {
    let min_horizon = 3.0 * PI / rabi_frequency(params);
    if !(horizon >= min_horizon * (1.0 - 1e-12)) || !horizon.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} is shorter than three half Rabi periods ({min_horizon})"
        )));
    }
    if n < 1000 {
        return Err(Error::InvalidArgument(format!(
            "need at least 1000 samples, got {n}"
        )));
    }
    let traj = sample_trajectory(params, horizon, n)?;
    let ys = traj.series(pair);
    let ends = ys[0].max(ys[ys.len() - 1]);
    Ok(polished_peaks(params, &traj, pair)?
        .into_iter()
        .map(|(_, v)| v)
        .fold(ends, f64::max))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use super::*;

    fn symmetric() -> ModelParams {
        ModelParams::new(FRAC_PI_4, 0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn symmetric_mode_pair_peaks() {
        let traj = sample_trajectory(&symmetric(), PI, 1000).unwrap();
        let peaks = find_peaks(&traj, PairId::ab).unwrap();
        assert_eq!(peaks.len(), 2);
        assert!((peaks[0].t_peak - PI / 4.0).abs() < 1e-5);
        assert!((peaks[1].t_peak - 3.0 * PI / 4.0).abs() < 1e-5);
        for p in &peaks {
            assert!((p.value - 1.0).abs() < 1e-6 && p.value <= 1.0);
        }
    }

    #[test]
    fn no_photons_no_peaks() {
        let p = ModelParams::new(3.0 * FRAC_PI_4, 0.0, 1.0, 1.0).unwrap();
        let traj = sample_trajectory(&p, 20.0, 2000).unwrap();
        assert!(find_peaks(&traj, PairId::ab).unwrap().is_empty());
    }

    #[test]
    fn short_trajectory_rejected() {
        let traj = sample_trajectory(&symmetric(), 1.0, 2).unwrap();
        assert!(find_peaks(&traj, PairId::AB).is_err());
    }

    #[test]
    fn asymmetric_first_atom_mode_peak() {
        // independent check: maximize 2|a1 a3| on a 1e5-point grid of one period
        let p = ModelParams::new(PI / 10.0, 0.0, 1.0, 0.1).unwrap();
        let omega = rabi_frequency(&p);
        let brute = (0..100_000)
            .map(|k| {
                let t = PI / omega * k as f64 / 100_000.0;
                let a = amplitudes_closed_form(&p, t).unwrap();
                (t, 2.0 * (a.alpha[0] * a.alpha[2].conj()).norm())
            })
            .fold((0.0, 0.0), |best, x| if x.1 > best.1 { x } else { best });
        let traj = sample_trajectory(&p, 40.0, 4001).unwrap();
        let first = find_peaks(&traj, PairId::Aa).unwrap()[0];
        assert!((first.t_peak - brute.0).abs() < 1e-3);
        assert!((first.value - brute.1).abs() < 1e-6);
        assert!(first.value > 0.97);
    }

    #[test]
    fn transfer_times_symmetric() {
        let got = complete_transfer_times(&symmetric(), PairId::ab, 1.0 - 1e-9, 2.0 * PI).unwrap();
        let want: Vec<f64> = [1.0, 3.0, 5.0, 7.0].iter().map(|n| n * PI / 4.0).collect();
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-6, "{g} vs {w}");
        }
    }

    #[test]
    fn transfer_times_detuned_and_vacuous() {
        let detuned = ModelParams::new(FRAC_PI_4, 1.0, 1.0, 1.0).unwrap();
        assert!(complete_transfer_times(&detuned, PairId::ab, 0.999, 50.0)
            .unwrap()
            .is_empty());
        let all = complete_transfer_times(&detuned, PairId::ab, 0.0, 50.0).unwrap();
        let traj = sample_trajectory(&detuned, 50.0, 20_000).unwrap();
        assert_eq!(all.len(), find_peaks(&traj, PairId::ab).unwrap().len());
    }

    #[test]
    fn transfer_times_argument_checks() {
        let p = symmetric();
        assert!(complete_transfer_times(&p, PairId::ab, 1.5, 1.0).is_err());
        assert!(complete_transfer_times(&p, PairId::ab, 0.5, 0.0).is_err());
    }

    #[test]
    fn sup_examples() {
        let detuned = ModelParams::new(FRAC_PI_4, 1.0, 1.0, 1.0).unwrap();
        let s = sup_concurrence(&detuned, PairId::ab, default_sup_horizon(&detuned), 1000).unwrap();
        assert!((s - 0.8).abs() < 1e-3);

        let p = symmetric();
        let s = sup_concurrence(&p, PairId::ab, default_sup_horizon(&p), 1000).unwrap();
        assert!((s - 1.0).abs() < 1e-6);
        // C_AB starts at its maximum
        assert!(
            (sup_concurrence(&p, PairId::AB, default_sup_horizon(&p), 1000).unwrap() - 1.0).abs()
                < 1e-15
        );
    }

    #[test]
    fn sup_argument_checks() {
        let p = symmetric();
        assert!(sup_concurrence(&p, PairId::ab, 1.0, 1000).is_err());
        assert!(sup_concurrence(&p, PairId::ab, 10.0, 999).is_err());
    }

    #[test]
    fn sup_grid_convergence() {
        for (th, d, ga, gb) in [
            (FRAC_PI_4, 1.0, 1.0, 1.0),
            (0.3, 0.4, 1.0, 0.2),
            (1.0, 0.0, 0.5, 1.0),
        ] {
            let p = ModelParams::new(th, d, ga, gb).unwrap();
            let h = default_sup_horizon(&p);
            for pair in PairId::ALL {
                let mut prev = sup_concurrence(&p, pair, h, 1000).unwrap();
                for n in [2000, 4000, 8000] {
                    let s = sup_concurrence(&p, pair, h, n).unwrap();
                    assert!(
                        s >= prev - 1e-6,
                        "{th} {d} {ga} {gb} {pair} n={n}: {s} < {prev}"
                    );
                    prev = s;
                }
            }
        }
    }
}
