//! Acceptance criteria. Runs every criterion, prints one verdict line each,
//! and exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::Instant;

use cavity_transfer::analysis::{
    complete_transfer_times, default_sup_horizon, find_peaks, invariant_suite, optimize_transfer,
    random_case, sample_trajectory, sup_concurrence, transfer_objective, verify_oracle,
};
use cavity_transfer::concurrence::{pairwise_concurrences, resonant_exact_aa_ba};
use cavity_transfer::dynamics::{amplitudes_closed_form, rabi_frequency};
use cavity_transfer::{ModelParams, PairId};
use cavity_transfer_cli::output::{csv_json_parity, trajectory_table};
use cavity_transfer_cli::run_cli;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Collects the sub-checks of one criterion.
struct Criterion {
    checks: Vec<(String, bool)>,
}

impl Criterion {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn oracle_equivalence(c: &mut Criterion) {
    let r = verify_oracle(500, 42).expect("oracle run");
    c.check(
        format!(
            "max amplitude deviation {:.3e} < 1e-10",
            r.max_amplitude_deviation
        ),
        r.max_amplitude_deviation < 1e-10,
    );
    c.check(
        format!(
            "max concurrence deviation {:.3e} < 1e-9",
            r.max_concurrence_deviation
        ),
        r.max_concurrence_deviation < 1e-9,
    );
}

fn equal_coupling_reproduction(c: &mut Criterion) {
    let p = ModelParams::new(FRAC_PI_4, 0.0, 1.0, 1.0).unwrap();
    let traj = sample_trajectory(&p, PI, 1001).unwrap();
    let (mut ab, mut modes, mut cross, mut cross_max, mut quartet) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (t, row) in traj.times.iter().zip(&traj.rows) {
        let cs = &row.concurrences;
        ab = ab.max((cs.get(PairId::AB) - (2.0 * t).cos().powi(2)).abs());
        modes = modes.max((cs.get(PairId::ab) - (2.0 * t).sin().powi(2)).abs());
        for pair in [PairId::Aa, PairId::Ab, PairId::Ba, PairId::Bb] {
            cross = cross.max((cs.get(pair) - 0.5 * (4.0 * t).sin().abs()).abs());
            cross_max = cross_max.max(cs.get(pair));
        }
        quartet = quartet.max((row.quartet_sum - 1.0).abs());
    }
    c.check(format!("|C_AB - cos^2 2t| = {ab:.3e} < 1e-12"), ab < 1e-12);
    c.check(
        format!("|C_ab - sin^2 2t| = {modes:.3e} < 1e-12"),
        modes < 1e-12,
    );
    c.check(
        format!("|C_cross - |sin 4t|/2| = {cross:.3e} < 1e-12"),
        cross < 1e-12,
    );
    c.check(
        format!("max cross-pair concurrence {cross_max:.15} <= 0.5 + 1e-12"),
        cross_max <= 0.5 + 1e-12,
    );
    c.check(
        format!("|quartet - 1| = {quartet:.3e} < 1e-12"),
        quartet < 1e-12,
    );
}

fn complete_transfer(c: &mut Criterion) {
    let p = ModelParams::new(FRAC_PI_4, 0.0, 1.0, 1.0).unwrap();
    let got = complete_transfer_times(&p, PairId::ab, 1.0 - 1e-9, 2.0 * PI).unwrap();
    let want: Vec<f64> = [1.0, 3.0, 5.0, 7.0].iter().map(|n| n * PI / 4.0).collect();
    c.check(
        format!("{} transfer times found, expected 4", got.len()),
        got.len() == 4,
    );
    let dev = got
        .iter()
        .zip(&want)
        .map(|(g, w)| (g - w).abs())
        .fold(0.0, f64::max);
    c.check(
        format!("max |t_n - n pi/4| = {dev:.3e} < 1e-6"),
        got.len() == 4 && dev < 1e-6,
    );
}

fn detuned_no_transfer(c: &mut Criterion) {
    let p = ModelParams::new(FRAC_PI_4, 1.0, 1.0, 1.0).unwrap();
    let sup = sup_concurrence(&p, PairId::ab, default_sup_horizon(&p), 2000).unwrap();
    c.check(
        format!("sup C_ab = {sup:.6} within 1e-3 of 0.8"),
        (sup - 0.8).abs() < 1e-3,
    );
    let times = complete_transfer_times(&p, PairId::ab, 0.999, 100.0).unwrap();
    c.check(
        format!("{} peaks above 0.999", times.len()),
        times.is_empty(),
    );
}

fn resonant_exactness(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut dev = 0.0f64;
    for _ in 0..200 {
        let (drawn, _) = random_case(&mut rng);
        let p = ModelParams::new(drawn.theta(), 0.0, drawn.g_a(), drawn.g_b()).unwrap();
        let period = 2.0 * PI / rabi_frequency(&p);
        for k in 0..50 {
            let t = 3.0 * period * k as f64 / 49.0;
            let cs = pairwise_concurrences(&amplitudes_closed_form(&p, t).unwrap()).unwrap();
            for pair in [PairId::Aa, PairId::Ba] {
                dev = dev.max((resonant_exact_aa_ba(&p, t, pair).unwrap() - cs.get(pair)).abs());
            }
        }
    }
    c.check(
        format!("max |resonant expression - pairwise| = {dev:.3e} < 1e-12"),
        dev < 1e-12,
    );
}

fn asymmetric_regime(c: &mut Criterion) {
    let p = ModelParams::new(PI / 10.0, 0.0, 1.0, 0.1).unwrap();
    let omega = rabi_frequency(&p);
    let traj = sample_trajectory(&p, 40.0, 4001).unwrap();
    let aa = find_peaks(&traj, PairId::Aa).unwrap();
    let ba = find_peaks(&traj, PairId::Ba).unwrap();
    let best = aa.iter().map(|p| p.value).fold(0.0, f64::max);
    c.check(
        format!("max refined C_Aa peak {best:.6} >= 0.97"),
        best >= 0.97,
    );

    let t_aa = PI / (3.0 * omega);
    let rel_aa = (aa[0].t_peak - t_aa).abs() / t_aa;
    c.check(
        format!(
            "first C_Aa peak at Omega t = {:.4}, {:.1}% from pi/3 (limit 5%)",
            aa[0].t_peak * omega,
            100.0 * rel_aa
        ),
        rel_aa <= 0.05,
    );
    let t_ba = 2.0 * PI / (3.0 * omega);
    let rel_ba = (ba[0].t_peak - t_ba).abs() / t_ba;
    c.check(
        format!(
            "first C_Ba peak at Omega t = {:.4} (value {:.3}), {:.1}% from 2pi/3 (limit 5%)",
            ba[0].t_peak * omega,
            ba[0].value,
            100.0 * rel_ba
        ),
        rel_ba <= 0.05,
    );

    for pair in [PairId::ab, PairId::Ab, PairId::Bb] {
        let max = traj.series(pair).into_iter().fold(0.0, f64::max);
        c.check(format!("max C_{pair} = {max:.4} < 0.2"), max < 0.2);
    }
}

fn optimizer_sanity(c: &mut Criterion) {
    let r = optimize_transfer(PairId::ab, (FRAC_PI_4, FRAC_PI_4), (1.0, 1.0), 100.0).unwrap();
    c.check(
        format!(
            "symmetric C_ab optimum {:.12} within 1e-9 of 1",
            r.value_best
        ),
        (r.value_best - 1.0).abs() < 1e-9,
    );

    let r = optimize_transfer(PairId::Aa, (0.0, FRAC_PI_4), (0.01, 1.0), 100.0).unwrap();
    c.check(
        format!(
            "C_Aa optimum {:.6} >= 0.97 (theta = {:.4}, ratio = {:.4}, t = {:.4})",
            r.value_best, r.theta_best, r.ratio_best, r.t_best
        ),
        r.value_best >= 0.97,
    );

    let (_, v) = transfer_objective(PairId::Aa, 0.0, 0.01, 100.0).unwrap();
    let derived = 2.0 * 2f64.sqrt() * 0.25 * (3.0 * 3f64.sqrt() / 4.0);
    c.check(
        format!("theta = 0 gives {v:.6}, derived {derived:.6}, within 0.01"),
        (v - derived).abs() <= 0.01,
    );
}

fn invariant_suite_and_cli(c: &mut Criterion) {
    for check in invariant_suite(500, 42).unwrap() {
        c.check(
            format!(
                "{}: {:.3e} < {:.0e}",
                check.name, check.measured, check.tolerance
            ),
            check.passed,
        );
    }
    let traj = sample_trajectory(
        &ModelParams::new(PI / 10.0, 0.0, 1.0, 0.1).unwrap(),
        40.0,
        4001,
    )
    .unwrap();
    let parity = csv_json_parity(&trajectory_table(&traj));
    c.check(
        format!("CSV/JSON parity {parity:.3e} < 1e-14"),
        parity < 1e-14,
    );

    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(
        [
            "cavity-transfer",
            "verify",
            "--cases",
            "500",
            "--seed",
            "42",
        ],
        &mut out,
        &mut err,
    );
    c.check(
        format!("`verify --cases 500 --seed 42` exit code {code}"),
        code == 0,
    );
}

type Check = fn(&mut Criterion);

fn main() -> ExitCode {
    let criteria: [(&str, Check); 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("equal-coupling reproduction", equal_coupling_reproduction),
        ("complete-transfer times", complete_transfer),
        ("detuned: no complete transfer", detuned_no_transfer),
        ("resonant C_Aa/C_Ba expressions exact", resonant_exactness),
        ("asymmetric-coupling regime", asymmetric_regime),
        ("optimizer sanity", optimizer_sanity),
        ("invariant suite and verify", invariant_suite_and_cli),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut c = Criterion::new();
        run(&mut c);
        let secs = start.elapsed().as_secs_f64();
        c.check(format!("runtime {secs:.2}s < 10s"), secs < 10.0);
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {name}", i + 1);
        for (what, ok) in &c.checks {
            println!("    [{}] {what}", if *ok { "ok" } else { "FAIL" });
        }
        if !c.passed() {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
