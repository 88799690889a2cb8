use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::check::CheckReport;
use crate::diffusion::{
    check_asymptotics, check_beamsplitter_compatibility, check_covariance_growth, check_route_agreement,
    check_scaling_bounds, evolve_ode, required_cutoff, DEFAULT_ODE_TOL, DEFAULT_ORDER,
};
use crate::epi::{
    blachman_replay, de_bruijn_residual, power_concavity_probe, qepi_power_check, qepi_prime_check, Register,
    DEBRUIJN_ABS_TOL, DEBRUIJN_STEP, DEFAULT_T_MAX,
};
use crate::error::{Error, Result};
use crate::fisher::{
    check_convexity, check_data_processing, check_fd_agreement, check_stam, check_weighted_convexity,
    fisher_directional_commutator, Direction, Processing, DEFAULT_STEP,
};
use crate::fock::{DensityMatrix, FockSpace, DEFAULT_BUDGET};
use crate::linalg::C64;
use crate::phase_space::random::random_gaussian_state;
use crate::phase_space::GaussianState;

use super::config::{RunConfig, Suite};

/// Tolerance of thermal Fisher information against `ln((N+1)/N)`.
pub const THERMAL_FISHER_TOL: f64 = 1e-4;

/// Thermal photon numbers with closed-form oracles.
const THERMAL_FIXTURES: [f64; 3] = [0.5, 1.0, 2.0];

/// Times of the scaling-bound fixtures.
const SCALING_TIMES: [f64; 3] = [2.5, 3.0, 4.0];

/// Horizon of the non-Gaussian replay fixture, which runs on a finite cutoff.
const FOCK_REPLAY_T_MAX: f64 = 0.1;

/// Unit of work inside a suite. Fixtures are deterministic and reported as trial 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Job {
    Fixture(usize),
    Trial(usize),
}

impl Job {
    pub fn trial(self) -> usize {
        match self {
            Job::Fixture(_) => 0,
            Job::Trial(k) => k,
        }
    }
}

/// Jobs of a concrete suite in report order.
pub fn jobs(suite: Suite, config: &RunConfig) -> Vec<Job> {
    let fixtures = match suite {
        Suite::GaussianEpi => gaussian_fixture_pairs().len(),
        Suite::FockEpi => FOCK_EPI_FIXTURES,
        Suite::Fisher => THERMAL_FIXTURES.len() + 1,
        Suite::DeBruijn => THERMAL_FIXTURES.len() * debruijn_times(config).len(),
        Suite::Diffusion => 3,
        Suite::Blachman => blachman_gaussian_pairs().len() + 1,
        Suite::ConjectureFuzz | Suite::All => 0,
    };
    (0..fixtures)
        .map(Job::Fixture)
        .chain((1..=config.trials).map(Job::Trial))
        .collect()
}

/// Generator of one trial: ChaCha20 seeded by the run seed, on a stream derived from the suite
/// and the trial index.
pub fn trial_rng(seed: u64, suite: Suite, trial: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream((suite.stream_id() << 32) | trial as u64);
    rng
}

/// Runs one job and applies the configured tolerance overrides.
pub fn run_job(suite: Suite, config: &RunConfig, job: Job) -> Result<Vec<CheckReport>> {
    let reports = match (suite, job) {
        (Suite::GaussianEpi, Job::Fixture(i)) => {
            let (x, y) = &gaussian_fixture_pairs()[i];
            epi_reports(x, y, config)?
        }
        (Suite::GaussianEpi, Job::Trial(k)) => {
            let mut rng = trial_rng(config.seed, suite, k);
            let n = rng.gen_range(1..=3);
            let x = random_gaussian_state(n, &mut rng);
            let y = random_gaussian_state(n, &mut rng);
            epi_reports(&x, &y, config)?
        }
        (Suite::FockEpi, Job::Fixture(i)) => fock_epi_fixture(config, i)?,
        (Suite::FockEpi, Job::Trial(k)) => {
            let mut rng = trial_rng(config.seed, suite, k);
            let space = FockSpace::new(1, config.cutoff)?;
            let x = random_fock(&space, &mut rng)?;
            let y = random_fock(&space, &mut rng)?;
            epi_reports(&x, &y, config)?
        }
        (Suite::Fisher, Job::Fixture(i)) => fisher_fixture(config, i)?,
        (Suite::Fisher, Job::Trial(k)) => fisher_trial(config, k)?,
        (Suite::DeBruijn, Job::Fixture(i)) => debruijn_fixture(config, i)?,
        (Suite::DeBruijn, Job::Trial(k)) => debruijn_trial(config, k)?,
        (Suite::Diffusion, Job::Fixture(i)) => diffusion_fixture(config, i)?,
        (Suite::Diffusion, Job::Trial(k)) => diffusion_trial(config, k)?,
        (Suite::Blachman, Job::Fixture(i)) => blachman_fixture(i)?,
        (Suite::Blachman, Job::Trial(k)) => {
            let mut rng = trial_rng(config.seed, suite, k);
            let n = rng.gen_range(1..=2);
            let x = random_gaussian_state(n, &mut rng);
            let y = random_gaussian_state(n, &mut rng);
            vec![blachman_replay(&x, &y, DEFAULT_T_MAX, 8)?.1]
        }
        (Suite::ConjectureFuzz, Job::Trial(k)) => {
            let mut rng = trial_rng(config.seed, suite, k);
            let n = rng.gen_range(1..=3);
            let x = random_gaussian_state(n, &mut rng);
            let y = random_gaussian_state(n, &mut rng);
            config
                .lambda_grid
                .iter()
                .map(|&l| power_concavity_probe(&x, &y, l))
                .collect::<Result<_>>()?
        }
        (Suite::ConjectureFuzz, Job::Fixture(_)) | (Suite::All, _) => Vec::new(),
    };
    Ok(reports
        .into_iter()
        .map(|r| match config.tolerances.get(&r.name) {
            Some(&tol) => r.with_tolerance(tol),
            None => r,
        })
        .collect())
}

fn epi_reports<R: Register>(x: &R, y: &R, config: &RunConfig) -> Result<Vec<CheckReport>> {
    let mut out = config
        .lambda_grid
        .iter()
        .map(|&l| qepi_prime_check(x, y, l))
        .collect::<Result<Vec<_>>>()?;
    out.push(qepi_power_check(x, y)?);
    Ok(out)
}

fn random_fock(space: &FockSpace, rng: &mut ChaCha20Rng) -> Result<DensityMatrix> {
    let seed = rng.gen::<u32>() as u64;
    let rank = rng.gen_range(1..=3);
    DensityMatrix::random_full_rank(space, seed, rank)
}

/// Extra levels above the smallest cutoff that keeps a diffused random state within budget.
const CUTOFF_MARGIN: usize = 8;

/// Random full-rank state on the smallest cutoff (from the configured one, in steps of four)
/// whose evolution to `t` stays within the truncation budget, plus [`CUTOFF_MARGIN`] levels.
fn fitted_random(config: &RunConfig, seed: u64, rank: usize, t: f64) -> Result<DensityMatrix> {
    let mut cutoff = config.cutoff;
    loop {
        let rho = DensityMatrix::random_full_rank(&FockSpace::new(1, cutoff)?, seed, rank)?;
        match evolve_ode(&rho, t, DEFAULT_ODE_TOL) {
            Ok(_) => {
                return DensityMatrix::random_full_rank(&FockSpace::new(1, cutoff + CUTOFF_MARGIN)?, seed, rank)
            }
            Err(Error::TruncationBudgetExceeded { .. }) if cutoff < MAX_FITTED_CUTOFF => cutoff += 4,
            Err(e) => return Err(e),
        }
    }
}

const MAX_FITTED_CUTOFF: usize = 160;

fn gaussian_fixture_pairs() -> Vec<(GaussianState, GaussianState)> {
    let th = |n| GaussianState::thermal(1, n).expect("non-negative photon number");
    vec![
        (GaussianState::vacuum(1), GaussianState::vacuum(1)),
        (th(0.5), th(2.0)),
        (GaussianState::squeezed_vacuum(0.5), th(1.0)),
        (GaussianState::squeezed_vacuum(0.5), GaussianState::squeezed_vacuum(-0.5)),
    ]
}

const FOCK_EPI_FIXTURES: usize = 9;

/// Fock 0–3, cats with α ∈ {1, 2} and thermal states, on the configured cutoff. The budget is
/// relaxed because the larger fixtures do not fit small cutoffs.
fn fock_fixture_states(cutoff: usize) -> Result<Vec<DensityMatrix>> {
    let space = FockSpace::new(1, cutoff)?.with_budget(1.0);
    let mut states = (0..4)
        .map(|k| DensityMatrix::fock(&space, k))
        .collect::<Result<Vec<_>>>()?;
    for alpha in [1.0, 2.0] {
        states.push(DensityMatrix::cat(&space, C64::new(alpha, 0.0), 0.0)?);
    }
    for n in THERMAL_FIXTURES {
        states.push(DensityMatrix::thermal(&space, n)?);
    }
    Ok(states)
}

fn fock_epi_fixture(config: &RunConfig, i: usize) -> Result<Vec<CheckReport>> {
    let states = fock_fixture_states(config.cutoff)?;
    let (x, y) = (&states[i], &states[(i + 1) % states.len()]);
    let tails = x.max_tail_mass().max(y.max_tail_mass());
    Ok(epi_reports(x, y, config)?
        .into_iter()
        .map(|r| r.input("budget", 1.0).diag("input_tail_mass", tails))
        .collect())
}

fn thermal_space(n: f64, t: f64, config: &RunConfig) -> Result<FockSpace> {
    FockSpace::new(1, config.cutoff.max(required_cutoff(n, t, DEFAULT_BUDGET)))
}

fn fisher_fixture(config: &RunConfig, i: usize) -> Result<Vec<CheckReport>> {
    if i == THERMAL_FIXTURES.len() {
        // Stam's bound is tight for identical thermal inputs.
        let th = DensityMatrix::thermal(&thermal_space(1.0, 0.0, config)?, 1.0)?;
        return Ok(vec![check_stam(&th, &th)?]);
    }
    let n = THERMAL_FIXTURES[i];
    let th = DensityMatrix::thermal(&thermal_space(n, 0.0, config)?, n)?;
    let beta = ((n + 1.0) / n).ln();
    let mut reports = Vec::new();
    for d in Direction::all(1) {
        let value = fisher_directional_commutator(&th, d)?;
        reports.push(
            CheckReport::new("fisher_thermal", -(value - beta).abs(), THERMAL_FISHER_TOL)
                .input("state", th.label())
                .input("direction", d)
                .diag("fisher", value)
                .diag("closed_form", beta),
        );
        reports.push(check_fd_agreement(&th, d, DEFAULT_STEP)?);
    }
    Ok(reports)
}

fn fisher_trial(config: &RunConfig, k: usize) -> Result<Vec<CheckReport>> {
    let mut rng = trial_rng(config.seed, Suite::Fisher, k);
    let space = FockSpace::new(1, config.cutoff)?;
    let x = random_fock(&space, &mut rng)?;
    let y = random_fock(&space, &mut rng)?;
    let ancilla = random_fock(&space, &mut rng)?;
    let lambda = config.lambda_grid[k % config.lambda_grid.len()];
    let (w_x, w_y) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));

    let mut reports = Vec::new();
    for d in Direction::all(1) {
        reports.push(check_fd_agreement(&x, d, DEFAULT_STEP)?);
    }
    let direction = if rng.gen::<bool>() { Direction::Q(0) } else { Direction::P(0) };
    let processing = Processing::Beamsplitter { lambda, ancilla };
    reports.push(check_data_processing(&x, direction, &processing)?.input("lambda", lambda));
    for &l in &config.lambda_grid {
        reports.push(check_convexity(&x, &y, l)?);
    }
    reports.push(check_weighted_convexity(&x, &y, lambda, w_x, w_y)?);
    reports.push(check_stam(&x, &y)?);
    Ok(reports)
}

/// Base times at which the de Bruijn difference quotient is admissible.
fn debruijn_times(config: &RunConfig) -> Vec<f64> {
    config.t_grid.iter().copied().filter(|&t| t >= 0.05).collect()
}

fn debruijn_fixture(config: &RunConfig, i: usize) -> Result<Vec<CheckReport>> {
    let times = debruijn_times(config);
    let (n, t) = (THERMAL_FIXTURES[i / times.len()], times[i % times.len()]);
    let space = thermal_space(n, t + DEBRUIJN_STEP, config)?;
    let th = DensityMatrix::thermal(&space, n)?;
    // diffused thermal states stay thermal with N + t/2 photons, and J = 2 ln((M+1)/M)
    let m = n + 0.5 * t;
    let closed = 2.0 * ((m + 1.0) / m).ln();
    let with_oracle = |r: CheckReport| {
        let residual = (r.diagnostics["entropy_rate"] - 0.25 * closed).abs();
        r.diag("closed_form_quarter", 0.25 * closed)
            .diag("closed_form_residual", residual)
    };
    let fock = with_oracle(de_bruijn_residual(&th, t, DEBRUIJN_STEP)?);
    let gaussian = with_oracle(de_bruijn_residual(&GaussianState::thermal(1, n)?, t, DEBRUIJN_STEP)?);
    let oracle = CheckReport::new(
        "debruijn_closed_form",
        -fock.diagnostics["closed_form_residual"],
        DEBRUIJN_ABS_TOL,
    )
    .input("state", th.label())
    .input("t", t)
    .input("cutoff", space.cutoff())
    .diag("entropy_rate", fock.diagnostics["entropy_rate"])
    .diag("closed_form_quarter", 0.25 * closed);
    Ok(vec![fock.input("cutoff", space.cutoff()), gaussian, oracle])
}

fn debruijn_trial(config: &RunConfig, k: usize) -> Result<Vec<CheckReport>> {
    let mut rng = trial_rng(config.seed, Suite::DeBruijn, k);
    let times = debruijn_times(config);
    if times.is_empty() {
        return Ok(Vec::new());
    }
    let t = times[rng.gen_range(0..times.len())];
    let seed = rng.gen::<u32>() as u64;
    let rank = rng.gen_range(1..=3);
    let rho = fitted_random(config, seed, rank, t + DEBRUIJN_STEP)?;
    let space = rho.space().clone();
    Ok(vec![de_bruijn_residual(&rho, t, DEBRUIJN_STEP)?.input("cutoff", space.cutoff())])
}

fn diffusion_fixture(config: &RunConfig, i: usize) -> Result<Vec<CheckReport>> {
    let t_max = SCALING_TIMES[SCALING_TIMES.len() - 1];
    let (mean, build): (f64, fn(&FockSpace) -> Result<DensityMatrix>) = match i {
        0 => (0.0, |s| Ok(DensityMatrix::vacuum(s))),
        1 => (1.0, |s| Ok(DensityMatrix::thermal(s, 1.0)?)),
        _ => (2.0, |s| DensityMatrix::fock(s, 2)),
    };
    let rho = build(&FockSpace::new(1, config.cutoff.max(required_cutoff(mean.max(2.0), t_max, DEFAULT_BUDGET)))?)?;
    let mut reports = SCALING_TIMES
        .iter()
        .map(|&t| check_scaling_bounds(&rho, t))
        .collect::<Result<Vec<_>>>()?;
    let times: Vec<f64> = config.t_grid.iter().copied().filter(|&t| t > 0.0 && t <= t_max).collect();
    if times.len() >= 2 {
        reports.push(check_asymptotics(&rho, &times)?);
    }
    Ok(reports)
}

fn diffusion_trial(config: &RunConfig, k: usize) -> Result<Vec<CheckReport>> {
    let mut rng = trial_rng(config.seed, Suite::Diffusion, k);
    let t = config.t_grid[rng.gen_range(0..config.t_grid.len())];
    let lambda = config.lambda_grid[k % config.lambda_grid.len()];
    let (t_x, t_y) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
    let (seed_x, rank_x) = (rng.gen::<u32>() as u64, rng.gen_range(1..=3));
    let (seed_y, rank_y) = (rng.gen::<u32>() as u64, rng.gen_range(1..=3));

    let rho = fitted_random(config, seed_x, rank_x, t)?;
    let cutoff = rho.space().cutoff();
    let mut reports = vec![
        check_covariance_growth(&rho, t)?.input("cutoff", cutoff),
        check_route_agreement(&rho, t, DEFAULT_ORDER)?.input("cutoff", cutoff),
    ];

    let x = fitted_random(config, seed_x, rank_x, t_x)?;
    let y = fitted_random(config, seed_y, rank_y, t_y)?;
    let cutoff = x.space().cutoff().max(y.space().cutoff());
    let (x, y) = (x.embed(cutoff)?, y.embed(cutoff)?);
    reports.push(check_beamsplitter_compatibility(&x, &y, lambda, t_x, t_y)?.input("cutoff", cutoff));
    Ok(reports)
}

fn blachman_gaussian_pairs() -> Vec<(GaussianState, GaussianState)> {
    let th = |modes, n| GaussianState::thermal(modes, n).expect("non-negative photon number");
    let sq = GaussianState::squeezed_vacuum;
    vec![
        (th(1, 0.8), th(1, 0.8)),
        (th(1, 0.5), th(1, 2.0)),
        (GaussianState::vacuum(1), th(1, 1.0)),
        (th(1, 3.0), GaussianState::vacuum(1)),
        (sq(0.5), GaussianState::vacuum(1)),
        (sq(0.5), sq(-0.5)),
        (sq(1.0), th(1, 0.5)),
        (sq(0.3), th(1, 2.0)),
        (th(2, 1.0), GaussianState::vacuum(2)),
    ]
}

fn blachman_fixture(i: usize) -> Result<Vec<CheckReport>> {
    let pairs = blachman_gaussian_pairs();
    if let Some((x, y)) = pairs.get(i) {
        return Ok(vec![blachman_replay(x, y, DEFAULT_T_MAX, 10)?.1]);
    }
    let space = FockSpace::new(1, 40)?;
    let one = DensityMatrix::fock(&space, 1)?;
    let th = DensityMatrix::thermal(&space, 1.0)?;
    Ok(vec![blachman_replay(&one, &th, FOCK_REPLAY_T_MAX, 4)?.1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_differ_by_suite_and_trial() {
        let a: u64 = trial_rng(7, Suite::Fisher, 1).gen();
        let b: u64 = trial_rng(7, Suite::Fisher, 2).gen();
        let c: u64 = trial_rng(7, Suite::DeBruijn, 1).gen();
        let again: u64 = trial_rng(7, Suite::Fisher, 1).gen();
        assert_eq!(a, again);
        assert!(a != b && a != c);
    }

    #[test]
    fn job_lists_put_fixtures_first() {
        let config = RunConfig {
            trials: 2,
            ..RunConfig::default()
        };
        let list = jobs(Suite::Blachman, &config);
        assert_eq!(list.len(), 12);
        assert_eq!(list[9], Job::Fixture(9));
        assert_eq!(list[10].trial(), 1);
        assert!(jobs(Suite::ConjectureFuzz, &config).iter().all(|j| matches!(j, Job::Trial(_))));
    }

    #[test]
    fn gaussian_trials_pass_and_honour_overrides() {
        let mut config = RunConfig::default();
        let reports = run_job(Suite::GaussianEpi, &config, Job::Trial(1)).unwrap();
        assert_eq!(reports.len(), config.lambda_grid.len() + 1);
        assert!(reports.iter().all(|r| r.passed));
        config.tolerances.insert("qepi_power".into(), 0.25);
        let reports = run_job(Suite::GaussianEpi, &config, Job::Trial(1)).unwrap();
        assert_eq!(reports.last().unwrap().tolerance, 0.25);
    }
}
