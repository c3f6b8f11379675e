//! Stochastic oracles for the test law.
//!
//! * [`direct_survival`] samples N uniforms per replica and evaluates the
//!   weighted statistic over the default window.
//! * [`ou_survival_curve`] integrates `dZ = -Z dτ + √2 dB` by Euler–Maruyama
//!   from a standard normal start with absorbing walls at `±k`.
//!
//! Replica `i` draws from its own ChaCha8 stream (`seed`, stream `i`), so
//! results are bit-identical for a given seed whatever the thread count, and
//! all reductions are integer counts.
//!
//! Absorption is checked only at the grid points, which overestimates the
//! survival by `O(√dt)`. [`ou_survival_dt_halving`] runs the same Brownian
//! paths at `dt` and `dt/2` and extrapolates away the leading term.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::QuantileWindow;
use crate::error::{Error, Result};
use crate::statistic::{weighted_ks_statistic, EmpiricalProcess};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub replicas: usize,
    pub seed: u64,
    /// Time step in log-quantile time.
    pub dt: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self { replicas: 10_000, seed: 0, dt: 1e-3 }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicas == 0 {
            return Err(Error::ConfigError("replicas must be >= 1".into()));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::ConfigError(format!("dt must be positive, got {}", self.dt)));
        }
        Ok(())
    }
}

/// Surviving fraction with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalEstimate {
    pub survival: f64,
    pub std_error: f64,
    pub replicas: usize,
}

impl SurvivalEstimate {
    /// Binomial estimate, `se = √(p(1-p)/R)`.
    pub fn from_counts(survivors: u64, replicas: usize) -> Self {
        let p = survivors as f64 / replicas as f64;
        Self { survival: p, std_error: (p * (1.0 - p) / replicas as f64).sqrt(), replicas }
    }

    /// Number of standard errors separating the estimate from `target`.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = self.survival - target;
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d == 0.0 {
            0.0
        } else {
            d.signum() * f64::INFINITY
        }
    }
}

fn replica_rng(seed: u64, replica: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica as u64);
    rng
}

/// Weighted statistics of `cfg.replicas` uniform samples of size `n`, in replica order.
pub fn direct_statistics(n: usize, cfg: &SimulationConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if n < 2 {
        return Err(Error::ConfigError(format!("sample size must be >= 2, got {n}")));
    }
    let window = QuantileWindow::for_sample_size(n as f64)?;
    (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = replica_rng(cfg.seed, r);
            let u: Vec<f64> = (0..n).map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
            let proc = EmpiricalProcess::from_uniforms(u)?;
            match weighted_ks_statistic(&proc, &window) {
                Ok(s) => Ok(s.k_obs),
                // No point inside [1/(N+1), N/(N+1)]: the supremum is taken at the
                // endpoints with F̂ constant on the window.
                Err(Error::EmptyWindow { .. }) => Ok(endpoint_gap(&proc, &window)),
                Err(e) => Err(e),
            }
        })
        .collect()
}

fn endpoint_gap(proc: &EmpiricalProcess, window: &QuantileWindow) -> f64 {
    let c = proc.ecdf(window.a());
    let g = |u: f64| (c - u).abs() / (u * (1.0 - u)).sqrt();
    (proc.len() as f64).sqrt() * g(window.a()).max(g(window.b()))
}

/// Fraction of null samples with `K ≤ k`, for each `k` in `k_grid`.
pub fn direct_survival(n: usize, k_grid: &[f64], cfg: &SimulationConfig) -> Result<Vec<SurvivalEstimate>> {
    if cfg.replicas < 100 {
        return Err(Error::ConfigError(format!("direct mode needs >= 100 replicas, got {}", cfg.replicas)));
    }
    let stats = direct_statistics(n, cfg)?;
    Ok(k_grid
        .iter()
        .map(|&k| {
            let below = stats.iter().filter(|&&s| s <= k).count() as u64;
            SurvivalEstimate::from_counts(below, cfg.replicas)
        })
        .collect())
}

fn check_ou_inputs(k: f64, horizons: &[f64], cfg: &SimulationConfig) -> Result<()> {
    cfg.validate()?;
    if !(k > 0.0) {
        return Err(Error::ConfigError(format!("wall half-width must be positive, got {k}")));
    }
    if horizons.is_empty() {
        return Err(Error::ConfigError("no horizons given".into()));
    }
    if let Some(t) = horizons.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
        return Err(Error::ConfigError(format!("horizon must be positive, got {t}")));
    }
    Ok(())
}

/// Number of Euler steps representing `horizon` (at least one).
fn steps_for(horizon: f64, dt: f64) -> u64 {
    ((horizon / dt).round() as u64).max(1)
}

/// Step at which the path first leaves `(-k, k)`, or `max_steps + 1` if it survives.
fn absorption_step<R: rand::Rng>(z0: f64, k: f64, dt: f64, max_steps: u64, rng: &mut R) -> u64 {
    let noise = (2.0 * dt).sqrt();
    let decay = 1.0 - dt;
    let mut z = z0;
    for step in 1..=max_steps {
        let xi: f64 = StandardNormal.sample(rng);
        z = decay * z + noise * xi;
        if z.abs() >= k {
            return step;
        }
    }
    max_steps + 1
}

/// Survival probability of the walled OU particle at each horizon, from one
/// set of paths.
pub fn ou_survival_curve(k: f64, horizons: &[f64], cfg: &SimulationConfig) -> Result<Vec<SurvivalEstimate>> {
    check_ou_inputs(k, horizons, cfg)?;
    let steps: Vec<u64> = horizons.iter().map(|&t| steps_for(t, cfg.dt)).collect();
    let max_steps = *steps.iter().max().unwrap_or(&1);

    let counts = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = replica_rng(cfg.seed, r);
            let z0: f64 = StandardNormal.sample(&mut rng);
            // Starting outside the walls counts as absorbed at τ = 0.
            let absorbed = if z0.abs() >= k { 0 } else { absorption_step(z0, k, cfg.dt, max_steps, &mut rng) };
            steps.iter().map(|&s| u64::from(absorbed > s)).collect::<Vec<_>>()
        })
        .reduce(|| vec![0; steps.len()], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());

    Ok(counts.into_iter().map(|c| SurvivalEstimate::from_counts(c, cfg.replicas)).collect())
}

/// Survival at a single horizon.
pub fn ou_survival(k: f64, horizon: f64, cfg: &SimulationConfig) -> Result<SurvivalEstimate> {
    Ok(ou_survival_curve(k, &[horizon], cfg)?[0])
}

/// Coupled `dt` / `dt/2` runs and their extrapolation in `√dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DtHalving {
    pub horizon: f64,
    pub coarse: SurvivalEstimate,
    pub fine: SurvivalEstimate,
    /// `(√2 S(dt/2) - S(dt)) / (√2 - 1)`; its standard error accounts for the coupling.
    pub extrapolated: SurvivalEstimate,
    /// Estimated discretisation bias of the coarse run, `S(dt) - extrapolated`.
    pub bias_estimate: f64,
}

/// Runs each path on the fine grid `dt/2` and, with pairwise-summed
/// increments, on the coarse grid `dt`.
pub fn ou_survival_dt_halving(k: f64, horizons: &[f64], cfg: &SimulationConfig) -> Result<Vec<DtHalving>> {
    check_ou_inputs(k, horizons, cfg)?;
    let dt = cfg.dt;
    let steps: Vec<u64> = horizons.iter().map(|&t| steps_for(t, dt)).collect();
    let max_steps = *steps.iter().max().unwrap_or(&1);

    // Per horizon: [both survive, coarse only, fine only].
    let counts = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = replica_rng(cfg.seed, r);
            let z0: f64 = StandardNormal.sample(&mut rng);
            let (coarse_abs, fine_abs) = if z0.abs() >= k {
                (0, 0)
            } else {
                coupled_absorption(z0, k, dt, max_steps, &mut rng)
            };
            steps
                .iter()
                .map(|&s| {
                    let c = coarse_abs > s;
                    let f = fine_abs > 2 * s;
                    [u64::from(c && f), u64::from(c && !f), u64::from(f && !c)]
                })
                .collect::<Vec<_>>()
        })
        .reduce(
            || vec![[0u64; 3]; steps.len()],
            |a, b| a.iter().zip(&b).map(|(x, y)| [x[0] + y[0], x[1] + y[1], x[2] + y[2]]).collect(),
        );

    let r = cfg.replicas as f64;
    let s2 = std::f64::consts::SQRT_2;
    Ok(horizons
        .iter()
        .zip(counts)
        .map(|(&horizon, [both, c_only, f_only])| {
            let coarse = SurvivalEstimate::from_counts(both + c_only, cfg.replicas);
            let fine = SurvivalEstimate::from_counts(both + f_only, cfg.replicas);
            // Per-path estimator X = (√2 I_f - I_c)/(√2 - 1) takes three nonzero values.
            let x_both = 1.0;
            let x_c = -1.0 / (s2 - 1.0);
            let x_f = s2 / (s2 - 1.0);
            let (pb, pc, pf) = (both as f64 / r, c_only as f64 / r, f_only as f64 / r);
            let mean = x_both * pb + x_c * pc + x_f * pf;
            let second = x_both * x_both * pb + x_c * x_c * pc + x_f * x_f * pf;
            let var = (second - mean * mean).max(0.0);
            let extrapolated = SurvivalEstimate { survival: mean, std_error: (var / r).sqrt(), replicas: cfg.replicas };
            DtHalving { horizon, coarse, fine, extrapolated, bias_estimate: coarse.survival - mean }
        })
        .collect())
}

/// Absorption steps `(coarse, fine)` of one coupled path, in units of the
/// respective grid. Both grids are followed until the coarse horizon ends.
fn coupled_absorption<R: rand::Rng>(z0: f64, k: f64, dt: f64, max_steps: u64, rng: &mut R) -> (u64, u64) {
    let half = 0.5 * dt;
    let noise_fine = (2.0 * half).sqrt();
    let noise_coarse = (2.0 * dt).sqrt();
    let (mut zc, mut zf) = (z0, z0);
    let mut coarse_abs = max_steps + 1;
    let mut fine_abs = 2 * max_steps + 1;
    for step in 1..=max_steps {
        let x1: f64 = StandardNormal.sample(rng);
        let x2: f64 = StandardNormal.sample(rng);
        if fine_abs > 2 * max_steps {
            zf = (1.0 - half) * zf + noise_fine * x1;
            if zf.abs() >= k {
                fine_abs = 2 * step - 1;
            } else {
                zf = (1.0 - half) * zf + noise_fine * x2;
                if zf.abs() >= k {
                    fine_abs = 2 * step;
                }
            }
        }
        if coarse_abs > max_steps {
            zc = (1.0 - dt) * zc + noise_coarse * (x1 + x2) * std::f64::consts::FRAC_1_SQRT_2;
            if zc.abs() >= k {
                coarse_abs = step;
            }
        }
        if coarse_abs <= max_steps && fine_abs <= 2 * max_steps {
            break;
        }
    }
    (coarse_abs, fine_abs)
}

/// Log-linear fit `ln S = ln Ã - θ T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub theta_hat: f64,
    pub prefactor_hat: f64,
}

/// Least-squares line through `(T, ln S)`. Points are weighted by
/// `(S / se)²` when every standard error is positive, uniformly otherwise.
pub fn exponent_fit(horizons: &[f64], estimates: &[SurvivalEstimate]) -> Result<ExponentFit> {
    if horizons.len() != estimates.len() {
        return Err(Error::InsufficientData(format!(
            "{} horizons but {} estimates",
            horizons.len(),
            estimates.len()
        )));
    }
    let pts: Vec<(f64, &SurvivalEstimate)> = horizons
        .iter()
        .copied()
        .zip(estimates)
        .filter(|(_, e)| e.survival > 0.0 && e.survival < 1.0)
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "need at least 4 horizons with survival in (0, 1), got {}",
            pts.len()
        )));
    }
    let weighted = pts.iter().all(|(_, e)| e.std_error > 0.0);
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (t, e) in &pts {
        let w = if weighted { (e.survival / e.std_error).powi(2) } else { 1.0 };
        let y = e.survival.ln();
        sw += w;
        sx += w * t;
        sy += w * y;
        sxx += w * t * t;
        sxy += w * t * y;
    }
    let det = sw * sxx - sx * sx;
    if !(det.abs() > 0.0) {
        return Err(Error::InsufficientData("horizons are not distinct".into()));
    }
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / sw;
    Ok(ExponentFit { theta_hat: -slope, prefactor_hat: intercept.exp() })
}
