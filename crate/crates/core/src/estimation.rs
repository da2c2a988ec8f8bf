//! Synthetic round-trip estimation.
//!
//! A Goodwin trajectory is sampled on a regular grid and dressed with the
//! level series an econometrician would observe (productivity, labour force,
//! output, capital). Wage growth is the instantaneous Phillips-curve rate
//! plus optional Gaussian measurement noise. The fitting routines then try
//! to recover the generating parameters.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::model::{GoodwinParameters, State};
use crate::ols::fit_line;
use crate::simulation::{simulate_sampled, DEFAULT_DRIFT_TOLERANCE, DEFAULT_STEP};

/// Initial productivity level `q / l`.
const PRODUCTIVITY_0: f64 = 1.0;
/// Initial labour force.
const LABOUR_FORCE_0: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSeries {
    pub times: Vec<f64>,
    /// Real wage growth `w'/w` (per year).
    pub wage_growth: Vec<f64>,
    pub employment: Vec<f64>,
    pub wage_share: Vec<f64>,
    pub productivity: Vec<f64>,
    pub labour_force: Vec<f64>,
    pub output: Vec<f64>,
    pub capital: Vec<f64>,
}

impl SyntheticSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.times.len();
        let columns = [
            &self.wage_growth,
            &self.employment,
            &self.wage_share,
            &self.productivity,
            &self.labour_force,
            &self.output,
            &self.capital,
        ];
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::InsufficientData(
                "series columns have different lengths",
            ));
        }
        if self
            .employment
            .iter()
            .chain(&self.wage_share)
            .any(|&x| !(x > 0.0))
        {
            return Err(Error::Domain(
                "employment and wage share must be strictly positive",
            ));
        }
        Ok(())
    }

    /// Adds independent `N(0, noise_sd^2)` draws to the wage-growth column.
    pub fn with_noise(mut self, noise_sd: f64, seed: u64) -> Result<Self> {
        if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
            return Err(Error::Parameter {
                name: "noise_sd",
                reason: "must be finite and non-negative",
            });
        }
        if noise_sd > 0.0 {
            let normal = Normal::new(0.0, noise_sd).map_err(|_| Error::Parameter {
                name: "noise_sd",
                reason: "invalid standard deviation",
            })?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for g in &mut self.wage_growth {
                *g += normal.sample(&mut rng);
            }
        }
        Ok(self)
    }

    /// Multiplies the wage-growth and employment columns by fixed factors,
    /// e.g. 100 to express them in percent.
    pub fn rescaled(&self, wage_factor: f64, employment_factor: f64) -> Self {
        let mut out = self.clone();
        out.wage_growth.iter_mut().for_each(|g| *g *= wage_factor);
        out.employment
            .iter_mut()
            .for_each(|v| *v *= employment_factor);
        out
    }
}

/// Noiseless series on the grid `0, sampling, ..., horizon`.
pub fn noiseless_series(
    p: &GoodwinParameters,
    s0: State,
    horizon: f64,
    sampling: f64,
) -> Result<SyntheticSeries> {
    if !(sampling > 0.0 && sampling.is_finite() && horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::Config(
            "horizon and sampling must be positive and finite",
        ));
    }
    let count = libm::floor(horizon / sampling + 1e-9) as usize + 1;
    let traj = simulate_sampled(
        p,
        s0,
        sampling,
        count,
        DEFAULT_STEP,
        DEFAULT_DRIFT_TOLERANCE,
    )?;

    let mut series = SyntheticSeries {
        times: traj.times().to_vec(),
        wage_growth: Vec::with_capacity(count),
        employment: Vec::with_capacity(count),
        wage_share: Vec::with_capacity(count),
        productivity: Vec::with_capacity(count),
        labour_force: Vec::with_capacity(count),
        output: Vec::with_capacity(count),
        capital: Vec::with_capacity(count),
    };
    for (&t, s) in traj.times().iter().zip(traj.states()) {
        let a = PRODUCTIVITY_0 * libm::exp(p.alpha * t);
        let n = LABOUR_FORCE_0 * libm::exp(p.beta * t);
        let q = a * s.v * n;
        series.wage_growth.push(-p.gamma + p.rho * s.v);
        series.employment.push(s.v);
        series.wage_share.push(s.u);
        series.productivity.push(a);
        series.labour_force.push(n);
        series.output.push(q);
        series.capital.push(p.sigma * q);
    }
    Ok(series)
}

/// Simulated series with seeded Gaussian noise on wage growth.
pub fn generate_series(
    p: &GoodwinParameters,
    s0: State,
    horizon: f64,
    sampling: f64,
    noise_sd: f64,
    seed: u64,
) -> Result<SyntheticSeries> {
    noiseless_series(p, s0, horizon, sampling)?.with_noise(noise_sd, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhillipsFit {
    pub gamma: f64,
    pub rho: f64,
    /// Standard errors; `None` with only two observations.
    pub gamma_se: Option<f64>,
    pub rho_se: Option<f64>,
    pub n: usize,
}

/// Least-squares fit of `w'/w = -gamma + rho v`.
pub fn fit_phillips(series: &SyntheticSeries) -> Result<PhillipsFit> {
    series.validate()?;
    let line = fit_line(&series.employment, &series.wage_growth)?;
    Ok(PhillipsFit {
        gamma: -line.intercept,
        rho: line.slope,
        gamma_se: line.intercept_se,
        rho_se: line.slope_se,
        n: line.n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralFit {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
}

impl StructuralFit {
    pub fn with_phillips(&self, fit: &PhillipsFit) -> GoodwinParameters {
        GoodwinParameters::new(self.alpha, self.beta, self.sigma, fit.gamma, fit.rho)
    }
}

/// Growth rates from log-level trend regressions and sigma as the mean
/// capital-output ratio.
pub fn fit_structural(series: &SyntheticSeries) -> Result<StructuralFit> {
    series.validate()?;
    if series.len() < 2 {
        return Err(Error::InsufficientData("need at least two observations"));
    }
    let levels = series
        .productivity
        .iter()
        .chain(&series.labour_force)
        .chain(&series.output)
        .chain(&series.capital);
    if levels.into_iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Domain("level series must be strictly positive"));
    }
    let log = |xs: &[f64]| xs.iter().map(|&x| libm::log(x)).collect::<Vec<_>>();
    let alpha = fit_line(&series.times, &log(&series.productivity))?.slope;
    let beta = fit_line(&series.times, &log(&series.labour_force))?.slope;
    let sigma = series
        .capital
        .iter()
        .zip(&series.output)
        .map(|(k, q)| k / q)
        .sum::<f64>()
        / series.len() as f64;
    Ok(StructuralFit { alpha, beta, sigma })
}

/// Sampling behaviour of the Phillips-curve estimator over seeded
/// replications.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationSummary {
    pub replications: usize,
    /// Fraction of replications whose estimate lies within `k` standard
    /// errors of the truth.
    pub gamma_coverage: f64,
    pub rho_coverage: f64,
    pub gamma_mean: f64,
    pub gamma_sd: f64,
    pub rho_mean: f64,
    pub rho_sd: f64,
    pub k: f64,
}

#[allow(clippy::too_many_arguments)]
/// Replicates the noisy fit for seeds `first_seed .. first_seed + replications`.
pub fn replicate(
    p: &GoodwinParameters,
    s0: State,
    horizon: f64,
    sampling: f64,
    noise_sd: f64,
    first_seed: u64,
    replications: usize,
    k: f64,
) -> Result<ReplicationSummary> {
    if replications == 0 {
        return Err(Error::InsufficientData("need at least one replication"));
    }
    let base = noiseless_series(p, s0, horizon, sampling)?;
    let (mut g_in, mut r_in) = (0usize, 0usize);
    let mut gammas = Vec::with_capacity(replications);
    let mut rhos = Vec::with_capacity(replications);
    for i in 0..replications {
        let series = base
            .clone()
            .with_noise(noise_sd, first_seed.wrapping_add(i as u64))?;
        let fit = fit_phillips(&series)?;
        let within = |est: f64, truth: f64, se: Option<f64>| {
            se.is_some_and(|se| libm::fabs(est - truth) <= k * se)
        };
        g_in += within(fit.gamma, p.gamma, fit.gamma_se) as usize;
        r_in += within(fit.rho, p.rho, fit.rho_se) as usize;
        gammas.push(fit.gamma);
        rhos.push(fit.rho);
    }
    let (gamma_mean, gamma_sd) = mean_sd(&gammas);
    let (rho_mean, rho_sd) = mean_sd(&rhos);
    let n = replications as f64;
    Ok(ReplicationSummary {
        replications,
        gamma_coverage: g_in as f64 / n,
        rho_coverage: r_in as f64 / n,
        gamma_mean,
        gamma_sd,
        rho_mean,
        rho_sd,
        k,
    })
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, libm::sqrt(var))
}
