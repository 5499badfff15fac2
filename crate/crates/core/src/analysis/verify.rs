use std::f64::consts::{FRAC_PI_4, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::concurrence::{pairwise_concurrences, quartet_sum};
use crate::dynamics::{amplitudes_closed_form, initial_weights};
use crate::error::Result;
use crate::oracle::{propagate_exact, reduced_density, wootters_concurrence};
use crate::params::{ModelParams, PairId};

/// Closed form vs spectral propagator, per amplitude component.
pub const AMPLITUDE_TOL: f64 = 1e-10;
/// Pairwise formulas vs Wootters on reduced states.
pub const CONCURRENCE_TOL: f64 = 1e-9;

/// Largest disagreements between the closed-form and oracle routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleReport {
    pub cases: usize,
    pub max_amplitude_deviation: f64,
    pub max_concurrence_deviation: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.max_amplitude_deviation < AMPLITUDE_TOL
            && self.max_concurrence_deviation < CONCURRENCE_TOL
    }
}

/// Draws `theta` in `[0, 2pi)`, `delta` in `[-2, 2]`, couplings with the
/// larger one at unity, and `t` in `[0, 20]`.
pub fn random_case<R: Rng>(rng: &mut R) -> (ModelParams, f64) {
    loop {
        let theta = rng.gen_range(0.0..TAU);
        let delta = rng.gen_range(-2.0..=2.0);
        let (ga, gb): (f64, f64) = (rng.gen(), rng.gen());
        let scale = ga.max(gb);
        if scale < 1e-3 {
            continue;
        }
        let t = rng.gen_range(0.0..=20.0);
        if let Ok(p) = ModelParams::new(theta, delta, ga / scale, gb / scale) {
            return (p, t);
        }
    }
}

/// Compares both routes on the given cases.
pub fn compare_cases(cases: &[(ModelParams, f64)]) -> Result<OracleReport> {
    let mut report = OracleReport {
        cases: cases.len(),
        max_amplitude_deviation: 0.0,
        max_concurrence_deviation: 0.0,
    };
    for (params, t) in cases {
        let closed = amplitudes_closed_form(params, *t)?;
        let oracle = propagate_exact(params, *t)?;
        report.max_amplitude_deviation = report
            .max_amplitude_deviation
            .max(closed.max_deviation(&oracle));
        let analytic = pairwise_concurrences(&closed)?;
        for pair in PairId::ALL {
            let w = wootters_concurrence(&reduced_density(&oracle, pair)?)?;
            report.max_concurrence_deviation = report
                .max_concurrence_deviation
                .max((w - analytic.get(pair)).abs());
        }
    }
    Ok(report)
}

/// Runs [`compare_cases`] on `n_cases` draws from a ChaCha8 generator seeded
/// with `seed`.
pub fn verify_oracle(n_cases: usize, seed: u64) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<_> = (0..n_cases).map(|_| random_case(&mut rng)).collect();
    compare_cases(&cases)
}

/// Outcome of one named check in [`invariant_suite`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn below(name: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            measured,
            tolerance,
            passed: measured < tolerance,
        }
    }
}

/// Oracle agreement plus the dynamical invariants, each reported as the
/// worst deviation observed against its tolerance.
pub fn invariant_suite(n_cases: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let oracle = verify_oracle(n_cases, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));

    let mut norm_dev: f64 = 0.0;
    let mut frozen_dev: f64 = 0.0;
    let mut swap_dev: f64 = 0.0;
    let mut range_dev: f64 = 0.0;
    for _ in 0..1000 {
        let (p, t) = random_case(&mut rng);
        let a = amplitudes_closed_form(&p, t)?;
        norm_dev = norm_dev.max((a.norm_sqr() - 1.0).abs());
        let u0 = initial_weights(p.theta())?.u0;
        frozen_dev = frozen_dev.max((a.alpha[0] - a.alpha[1] - 2.0 * u0).norm());

        let cs = pairwise_concurrences(&a)?;
        let swapped =
            pairwise_concurrences(&amplitudes_closed_form(&p.with_swapped_couplings(), t)?)?;
        for pair in PairId::ALL {
            swap_dev = swap_dev.max((cs.get(pair) - swapped.get(pair.with_swapped_modes())).abs());
            let v = cs.get(pair);
            range_dev = range_dev.max((-v).max(v - 1.0).max(0.0));
        }
    }

    let symmetric = ModelParams::new(FRAC_PI_4, 0.0, 1.0, 1.0)?;
    let mut quartet_dev: f64 = 0.0;
    for k in 0..1001 {
        let t = PI * k as f64 / 1000.0;
        let cs = pairwise_concurrences(&amplitudes_closed_form(&symmetric, t)?)?;
        quartet_dev = quartet_dev.max((quartet_sum(&cs) - 1.0).abs());
    }

    Ok(vec![
        CheckOutcome::below(
            "oracle amplitude agreement",
            oracle.max_amplitude_deviation,
            AMPLITUDE_TOL,
        ),
        CheckOutcome::below(
            "oracle concurrence agreement",
            oracle.max_concurrence_deviation,
            CONCURRENCE_TOL,
        ),
        CheckOutcome::below("normalization", norm_dev, 1e-12),
        CheckOutcome::below("antisymmetric component constancy", frozen_dev, 1e-13),
        CheckOutcome::below("coupling-swap symmetry", swap_dev, 1e-12),
        CheckOutcome::below("concurrence range", range_dev, 1e-15),
        CheckOutcome::below(
            "quartet conservation (equal couplings, resonance)",
            quartet_dev,
            1e-12,
        ),
    ])
}
