//! The test law of the weighted statistic and the classical KS law.
//!
//! Under the null, the weighted statistic over the quantile window `[a, b]`
//! stays below `k` with probability `Ã(k) e^{-θ₀(k) T}`, where
//! `T = ln √(b(1-a) / (a(1-b)))`. The default window `a = 1/(N+1)`,
//! `b = N/(N+1)` gives `T = ln N`, hence `S(N; k) = Ã(k) N^{-θ₀(k)}`.

use std::f64::consts::{FRAC_2_PI, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};
use crate::roots;
use crate::special::erf;
use crate::spectral::{self, K_MAX, K_MIN};

/// Sample size below which the asymptotic law is flagged.
pub const VALIDITY_MIN_N: f64 = 50.0;

const K_TOL: f64 = 1e-10;

/// The interval of quantiles under test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileWindow {
    a: f64,
    b: f64,
    horizon: f64,
}

impl QuantileWindow {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let horizon = horizon_t(a, b)?;
        Ok(Self { a, b, horizon })
    }

    /// `[1/(N+1), N/(N+1)]`, whose horizon is `ln N`.
    pub fn for_sample_size(n: f64) -> Result<Self> {
        if !(n >= 1.0) || !n.is_finite() {
            return Err(Error::DomainError(format!("sample size must be >= 1, got {n}")));
        }
        let a = 1.0 / (n + 1.0);
        let b = n / (n + 1.0);
        // Exact by construction; avoids rounding in the log ratio.
        Ok(Self { a, b, horizon: n.ln() })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn contains(&self, u: f64) -> bool {
        self.a <= u && u <= self.b
    }
}

/// Log-time horizon `T = ln √(b(1-a) / (a(1-b)))` of the window `[a, b]`.
pub fn horizon_t(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) || !(b > 0.0 && b < 1.0) {
        return Err(Error::DomainError(format!("window bounds must lie in (0, 1), got a={a}, b={b}")));
    }
    if a > b {
        return Err(Error::DomainError(format!("window lower bound {a} exceeds upper bound {b}")));
    }
    if a == b {
        return Ok(0.0);
    }
    Ok(0.5 * ((b.ln() - a.ln()) + ((-a).ln_1p() - (-b).ln_1p())))
}

/// Law of the weighted statistic after log-time `horizon`.
///
/// Outside the spectral solver's range the limiting forms of `θ₀` and `Ã`
/// are used; they are accurate to well below the probability resolution
/// that matters there (`S < 10⁻³⁰⁰` below `k = 0.05`, `1 - S < 10⁻⁹` above `k = 7`
/// for any horizon up to `ln 10¹²`).
pub fn survival_at_horizon(horizon: f64, k: f64) -> Result<f64> {
    if !(horizon >= 0.0) || !horizon.is_finite() {
        return Err(Error::DomainError(format!("horizon must be finite and >= 0, got {horizon}")));
    }
    if k.is_nan() {
        return Err(Error::DomainError("k is NaN".into()));
    }
    if k <= 0.0 {
        return Ok(0.0);
    }
    if horizon == 0.0 {
        return Ok(cdf_at_zero_horizon(k));
    }
    let (theta0, a_tilde) = if k < K_MIN {
        (spectral::theta0_asymptotic_small_k(k), spectral::a_tilde_asymptotic_small_k(k))
    } else if k > K_MAX {
        (spectral::theta0_asymptotic_large_k(k), spectral::a_tilde_asymptotic_large_k(k))
    } else {
        let g = spectral::ground_state(k)?;
        (g.theta0, g.a_tilde)
    };
    Ok((a_tilde * (-theta0 * horizon).exp()).clamp(0.0, 1.0))
}

fn check_n(n: f64) -> Result<()> {
    if !(n >= 2.0) || !n.is_finite() {
        return Err(Error::DomainError(format!("sample size must be >= 2, got {n}")));
    }
    Ok(())
}

/// `S(N; k) = Ã(k) N^{-θ₀(k)}`.
pub fn survival_cdf(n: f64, k: f64) -> Result<f64> {
    check_n(n)?;
    survival_at_horizon(n.ln(), k)
}

/// Probability under the null of a statistic larger than `k_obs`.
pub fn pvalue(n: f64, k_obs: f64) -> Result<f64> {
    Ok(1.0 - survival_cdf(n, k_obs)?)
}

/// Solves `S(T; k*) = 1 - alpha` by bisection in `k`.
pub fn critical_value_at_horizon(horizon: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let target = 1.0 - alpha;
    let lo = survival_at_horizon(horizon, K_MIN)?;
    let hi = survival_at_horizon(horizon, K_MAX)?;
    if !(lo < target && target < hi) {
        return Err(Error::NoSolution { target, lo, hi });
    }
    roots::bisect(|k| Ok(survival_at_horizon(horizon, k)? - target), K_MIN, K_MAX, K_TOL, 200)
}

/// Critical value `k*(N, alpha)` of the weighted test with the default window.
pub fn critical_value(n: f64, alpha: f64) -> Result<f64> {
    check_n(n)?;
    critical_value_at_horizon(n.ln(), alpha)
}

/// Critical value from the large-k shortcut `√(2/π) k e^{-k²/2} = -ln(1-alpha) / ln N`,
/// which neglects the prefactor `Ã`.
pub fn critical_value_asymptotic(n: f64, alpha: f64) -> Result<f64> {
    check_n(n)?;
    check_alpha(alpha)?;
    let rate = -(1.0 - alpha).ln() / n.ln();
    // The left side peaks at k = 1 with value √(2/π) e^{-1/2}.
    let peak = FRAC_2_PI.sqrt() * (-0.5f64).exp();
    if rate >= peak {
        return Err(Error::NoSolution { target: rate, lo: 0.0, hi: peak });
    }
    roots::bisect(|k| Ok(spectral::theta0_asymptotic_large_k(k) - rate), 1.0, 40.0, 1e-12, 200)
}

/// Leading-order growth `√(2 ln ln N)` of the critical value.
pub fn critical_value_doublelog(n: f64) -> Result<f64> {
    if !(n > std::f64::consts::E) || !n.is_finite() {
        return Err(Error::DomainError(format!("ln ln N must be positive, got N={n}")));
    }
    Ok((2.0 * n.ln().ln()).sqrt())
}

/// `P[K ≤ k]` when the horizon is zero: the standard normal starting point
/// lies inside the walls.
pub fn cdf_at_zero_horizon(k: f64) -> f64 {
    if k <= 0.0 {
        return 0.0;
    }
    erf(k / SQRT_2)
}

/// Kolmogorov's limiting law `1 - 2 Σ (-1)^{n-1} e^{-2n²k²}`.
pub fn ks_classical_cdf(k: f64) -> f64 {
    if k.is_nan() {
        return f64::NAN;
    }
    if k <= 0.0 {
        return 0.0;
    }
    let v = if k < 1.0 {
        // Same function in its Jacobi-dual form, which converges fast for small k:
        // √(2π)/k Σ_{j odd} e^{-j²π²/(8k²)}.
        let c = PI * PI / (8.0 * k * k);
        let mut s = 0.0;
        let mut j = 1.0;
        loop {
            let t = (-j * j * c).exp();
            s += t;
            if t < 1e-17 * s || t == 0.0 {
                break;
            }
            j += 2.0;
        }
        (2.0 * PI).sqrt() / k * s
    } else {
        let mut s = 0.0;
        let mut n = 1.0;
        let mut sign = 1.0;
        loop {
            let t = (-2.0 * n * n * k * k).exp();
            if t < 1e-16 {
                break;
            }
            s += sign * t;
            sign = -sign;
            n += 1.0;
        }
        1.0 - 2.0 * s
    };
    v.clamp(0.0, 1.0)
}

/// 1 - alpha quantile of Kolmogorov's law.
pub fn ks_classical_critical_value(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let target = 1.0 - alpha;
    roots::bisect(|k| Ok(ks_classical_cdf(k) - target), 0.05, 10.0, K_TOL, 200)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::DomainError(format!("significance level must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    Weighted,
    Classical,
}

/// A test law bound to a sample size and window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestLaw {
    n: f64,
    window: QuantileWindow,
    kind: LawKind,
}

impl TestLaw {
    /// Weighted law with the default window, `T = ln N`.
    pub fn weighted(n: f64) -> Result<Self> {
        check_n(n)?;
        Ok(Self { n, window: QuantileWindow::for_sample_size(n)?, kind: LawKind::Weighted })
    }

    /// Weighted law over an explicit window; `n` only feeds the diagnostics.
    pub fn weighted_with_window(n: f64, window: QuantileWindow) -> Result<Self> {
        if !(n >= 1.0) {
            return Err(Error::DomainError(format!("sample size must be >= 1, got {n}")));
        }
        Ok(Self { n, window, kind: LawKind::Weighted })
    }

    pub fn classical(n: f64) -> Result<Self> {
        check_n(n)?;
        Ok(Self { n, window: QuantileWindow::for_sample_size(n)?, kind: LawKind::Classical })
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn window(&self) -> QuantileWindow {
        self.window
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    pub fn cdf(&self, k: f64) -> Result<f64> {
        match self.kind {
            LawKind::Weighted => survival_at_horizon(self.window.horizon, k),
            LawKind::Classical => Ok(ks_classical_cdf(k)),
        }
    }

    pub fn pvalue(&self, k_obs: f64) -> Result<f64> {
        Ok(1.0 - self.cdf(k_obs)?)
    }

    pub fn critical_value(&self, alpha: f64) -> Result<f64> {
        match self.kind {
            LawKind::Weighted => critical_value_at_horizon(self.window.horizon, alpha),
            LawKind::Classical => ks_classical_critical_value(alpha),
        }
    }

    pub fn warnings(&self) -> Vec<Warning> {
        validity_warnings(self.n)
    }
}

/// Diagnostics for the large-sample assumption.
pub fn validity_warnings(n: f64) -> Vec<Warning> {
    if n < VALIDITY_MIN_N {
        vec![Warning::SmallSample { n, min: VALIDITY_MIN_N }]
    } else {
        Vec::new()
    }
}
