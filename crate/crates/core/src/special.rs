//! Special functions: Kummer's confluent hypergeometric series, the even and
//! odd parabolic-cylinder solutions of the harmonic oscillator, and the
//! error function.
//!
//! `y_plus` and `y_minus` solve `[-d²/dz² + z²/4] φ = (θ + 1/2) φ` with
//! initial data `φ(0) = 1, φ'(0) = 0` and `φ(0) = 0, φ'(0) = 1` respectively.
//! Normalisation over a box is left to [`crate::spectral`].

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Truncation control for the hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!("rel_tol must be > 0, got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::InvalidParameter("max_terms must be >= 1".into()));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { rel_tol: 1e-14, max_terms: 500 }
    }
}

/// Neumaier's compensated summation.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn is_nonpositive_integer(b: f64) -> bool {
    b <= 0.0 && b == b.floor()
}

/// Kummer's function `₁F₁(a; b; x) = Σ (a)ₙ/(b)ₙ · xⁿ/n!`.
///
/// The series is stopped once the current term is below `rel_tol` times the
/// running sum *and* every later term ratio is provably below 1/2, so a
/// Pochhammer factor that happens to be close to zero cannot end the sum early.
pub fn kummer_1f1(a: f64, b: f64, x: f64, ctrl: SeriesControl) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && x.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite argument a={a}, b={b}, x={x}")));
    }
    if is_nonpositive_integer(b) {
        return Err(Error::InvalidParameter(format!("b={b} is a non-positive integer")));
    }
    if x == 0.0 || a == 0.0 {
        return Ok(1.0);
    }

    let mut sum = CompensatedSum::default();
    sum.add(1.0);
    let mut term = 1.0_f64;
    for n in 0..ctrl.max_terms {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * x / (nf + 1.0);
        if term == 0.0 {
            // (a)ₙ hit an exact zero (terminating polynomial) or underflowed;
            // either way every later term is zero as well.
            return Ok(sum.value());
        }
        sum.add(term);

        let m = nf + 1.0;
        let ratio_bound = ((a.abs() + m) / (b + m)).max(1.0) * x.abs() / (m + 1.0);
        if ratio_bound < 0.5 && term.abs() <= ctrl.rel_tol * sum.value().abs() {
            return Ok(sum.value());
        }
    }
    Err(Error::NonConvergence { a, b, x, max_terms: ctrl.max_terms })
}

/// Even solution `e^{-z²/4} ₁F₁(-θ/2; 1/2; z²/2)`.
pub fn y_plus(theta: f64, z: f64) -> Result<f64> {
    let z = z.abs();
    let half_z2 = 0.5 * z * z;
    let f = kummer_1f1(-0.5 * theta, 0.5, half_z2, SeriesControl::default())?;
    Ok((-0.5 * half_z2).exp() * f)
}

/// Odd solution `z e^{-z²/4} ₁F₁((1-θ)/2; 3/2; z²/2)`.
pub fn y_minus(theta: f64, z: f64) -> Result<f64> {
    let sign = if z < 0.0 { -1.0 } else { 1.0 };
    let z = z.abs();
    let half_z2 = 0.5 * z * z;
    let f = kummer_1f1(0.5 * (1.0 - theta), 1.5, half_z2, SeriesControl::default())?;
    Ok(sign * z * (-0.5 * half_z2).exp() * f)
}

/// Sign-carrying part of `y_plus(theta, k)` without the positive Gaussian factor.
pub(crate) fn y_plus_shape(theta: f64, k: f64) -> Result<f64> {
    kummer_1f1(-0.5 * theta, 0.5, 0.5 * k * k, SeriesControl::default())
}

/// Sign-carrying part of `y_minus(theta, k)` for `k > 0`.
pub(crate) fn y_minus_shape(theta: f64, k: f64) -> Result<f64> {
    kummer_1f1(0.5 * (1.0 - theta), 1.5, 0.5 * k * k, SeriesControl::default())
}

const ERFC_CF_THRESHOLD: f64 = 2.0;

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax < ERFC_CF_THRESHOLD { erf_series(ax) } else { 1.0 - erfc_cf(ax) };
    v.copysign(x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= ERFC_CF_THRESHOLD {
        erfc_cf(x)
    } else if x <= -ERFC_CF_THRESHOLD {
        2.0 - erfc_cf(-x)
    } else {
        1.0 - erf(x)
    }
}

/// Standard normal cdf.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

// erf(x) = 2/√π e^{-x²} Σ 2ⁿ x^{2n+1} / (2n+1)!!, all terms positive.
fn erf_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

// erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz.
fn erfc_cf(x: f64) -> f64 {
    if x > 27.3 {
        return 0.0;
    }
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let an = 0.5 * n as f64;
        d = x + an * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}
