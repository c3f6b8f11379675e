//! Dirichlet eigenproblem of the harmonic oscillator `-φ'' + z²/4 φ = (θ + 1/2) φ`
//! on `[-k, k]`.
//!
//! The ground rate `θ₀(k)` is the first zero in `θ` of `y₊(θ; k)`, the first
//! excited rate `θ₁(k)` the first zero of `y₋(θ; k)`. From the normalised
//! ground state we get the survival prefactor
//!
//! ```text
//! A(k) = (2π)^{-1/2} ∫_{-k}^{k} e^{-z²/4} φ̂₀(z; k) dz,    Ã(k) = √(2π) A(k)²
//! ```
//!
//! so that the OU particle started from a standard normal survives to time
//! `T` with probability `Ã(k) e^{-θ₀(k) T}` once `T Δ₁ ≫ 1`.

use std::collections::HashMap;
use std::f64::consts::{FRAC_2_PI, PI, SQRT_2};
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::roots::{self, Tolerance};
use crate::special::{self, erf};

/// Smallest wall half-width handled by [`ground_state`].
pub const K_MIN: f64 = 0.05;
/// Largest wall half-width handled by [`ground_state`].
pub const K_MAX: f64 = 7.0;

const SCAN_CEILING: f64 = 1e7;
const QUAD_TOL: f64 = 1e-12;
const ROOT_TOL: Tolerance = Tolerance { abs: 1e-10, rel: 1e-12, max_iter: 200 };
const CACHE_LIMIT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSolution {
    pub k: f64,
    pub theta0: f64,
    pub theta1: f64,
    /// `‖y₊(θ₀; ·)‖` over `[-k, k]`.
    pub norm_yplus: f64,
    pub a: f64,
    pub a_tilde: f64,
}

impl SpectralSolution {
    /// Spectral gap `Δ₁ = θ₁ - θ₀`.
    pub fn delta1(&self) -> f64 {
        self.theta1 - self.theta0
    }

    /// Normalised ground state `φ̂₀(z; k)`.
    pub fn ground_mode(&self, z: f64) -> Result<f64> {
        Ok(special::y_plus(self.theta0, z)? / self.norm_yplus)
    }

    /// `Ã(k) e^{-θ₀(k) T}`.
    pub fn survival(&self, horizon: f64) -> f64 {
        self.a_tilde * (-self.theta0 * horizon).exp()
    }
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::DomainError(format!("wall half-width must be positive and finite, got {k}")));
    }
    Ok(())
}

fn first_step(k: f64) -> f64 {
    (0.01 * theta0_asymptotic_large_k(k)).clamp(1e-300, 1e-8)
}

/// Ground absorption rate `θ₀(k)`.
pub fn theta0(k: f64) -> Result<f64> {
    check_k(k)?;
    // The potential is nonnegative, so θ₀ + 1/2 is at least the free-particle
    // level π²/(4k²): start the scan there.
    let origin = theta0_asymptotic_small_k(k).max(0.0);
    let f = |theta: f64| special::y_plus_shape(theta, k);
    let bracket = roots::scan_geometric(f, origin, first_step(k), SCAN_CEILING)?
        .ok_or(Error::BracketFailure { k, ceiling: SCAN_CEILING })?;
    roots::brent(f, bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi, ROOT_TOL)
}

/// First excited rate `θ₁(k)` (odd mode).
pub fn theta1(k: f64) -> Result<f64> {
    check_k(k)?;
    // y₋ has no zero for θ ≤ 1 (all series terms are positive), and θ₁ + 1/2
    // is bounded below by the second free-particle level π²/k².
    let origin = (PI * PI / (k * k) - 0.5).max(1.0);
    let f = |theta: f64| special::y_minus_shape(theta, k);
    let bracket = roots::scan_geometric(f, origin, 4.0 * first_step(k), SCAN_CEILING)?
        .ok_or(Error::BracketFailure { k, ceiling: SCAN_CEILING })?;
    roots::brent(f, bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi, ROOT_TOL)
}

/// Solves the ground state without touching the cache.
pub fn ground_state_uncached(k: f64) -> Result<SpectralSolution> {
    check_k(k)?;
    if !(K_MIN..=K_MAX).contains(&k) {
        return Err(Error::OutOfRange { k, min: K_MIN, max: K_MAX });
    }
    let t0 = theta0(k)?;
    let t1 = theta1(k)?;

    let norm_sq = quadrature::integrate_symmetric(
        |z| {
            let y = special::y_plus(t0, z)?;
            Ok(y * y)
        },
        k,
        QUAD_TOL,
    )?;
    let norm = norm_sq.sqrt();
    let overlap = quadrature::integrate_symmetric(
        |z| Ok((-0.25 * z * z).exp() * special::y_plus(t0, z)?),
        k,
        QUAD_TOL,
    )?;
    let a = overlap / (norm * (2.0 * PI).sqrt());
    let a_tilde = (2.0 * PI).sqrt() * a * a;

    Ok(SpectralSolution { k, theta0: t0, theta1: t1, norm_yplus: norm, a, a_tilde })
}

fn cache() -> &'static RwLock<HashMap<u64, SpectralSolution>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, SpectralSolution>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Memoised [`ground_state_uncached`], keyed on the exact value of `k`.
pub fn ground_state(k: f64) -> Result<SpectralSolution> {
    let key = k.to_bits();
    if let Some(sol) = cache().read().ok().and_then(|m| m.get(&key).copied()) {
        return Ok(sol);
    }
    let sol = ground_state_uncached(k)?;
    if let Ok(mut m) = cache().write() {
        if m.len() >= CACHE_LIMIT {
            m.clear();
        }
        m.insert(key, sol);
    }
    Ok(sol)
}

/// `θ₀(k) ≈ √(2/π) k e^{-k²/2}` for large k.
pub fn theta0_asymptotic_large_k(k: f64) -> f64 {
    FRAC_2_PI.sqrt() * k * (-0.5 * k * k).exp()
}

/// `θ₀(k) ≈ π²/(4k²) - 1/2` for small k.
pub fn theta0_asymptotic_small_k(k: f64) -> f64 {
    PI * PI / (4.0 * k * k) - 0.5
}

/// `Ã(k) ≈ erf(k/√2)²` for large k.
pub fn a_tilde_asymptotic_large_k(k: f64) -> f64 {
    let e = erf(k / SQRT_2);
    e * e
}

/// `Ã(k) ≈ 16k / (π² √(2π))` for small k.
pub fn a_tilde_asymptotic_small_k(k: f64) -> f64 {
    16.0 * k / (PI * PI * (2.0 * PI).sqrt())
}
