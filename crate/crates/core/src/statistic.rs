//! Observed weighted and classical Kolmogorov statistics.
//!
//! The weighted statistic is
//!
//! ```text
//! k_obs = √N · sup_{u ∈ [a, b]} |F̂(u) - u| / √(u(1-u))
//! ```
//!
//! with `F̂` the right-continuous empirical cdf of the probability-integral
//! transformed sample. Between two jumps `F̂ = c` is constant and
//! `(u - c)/√(u(1-u))` is monotone in `u`, so the supremum is attained at a
//! one-sided limit of a jump or at a window endpoint. Only those points are
//! evaluated.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distribution::{validity_warnings, QuantileWindow, TestLaw};
use crate::error::{Error, Result, Warning};
use crate::special::normal_cdf;

/// Transformed values at exactly 0 or 1 are moved this far inside.
pub const CLAMP_EPS: f64 = 1e-15;
/// Fraction of the sample allowed to collapse onto one clamped endpoint.
pub const MAX_CLAMPED_FRACTION: f64 = 0.10;

/// A fully specified null distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum NullDistribution {
    Uniform01,
    Normal { mu: f64, sigma: f64 },
    Exponential { rate: f64 },
    /// Data are already probability-integral transformed.
    Pit,
}

impl NullDistribution {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("normal null needs finite mu and sigma > 0, got ({mu}, {sigma})")));
        }
        Ok(Self::Normal { mu, sigma })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::InvalidParameter(format!("exponential null needs rate > 0, got {rate}")));
        }
        Ok(Self::Exponential { rate })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform01 | Self::Pit => x.clamp(0.0, 1.0),
            Self::Normal { mu, sigma } => normal_cdf((x - mu) / sigma),
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
        }
    }
}

impl fmt::Display for NullDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform01 => write!(f, "uniform"),
            Self::Normal { mu, sigma } => write!(f, "normal:{mu},{sigma}"),
            Self::Exponential { rate } => write!(f, "exp:{rate}"),
            Self::Pit => write!(f, "pit"),
        }
    }
}

/// Parses `uniform | normal:mu,sigma | exp:rate | pit`.
impl FromStr for NullDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (family, params) = match s.split_once(':') {
            Some((f, p)) => (f.trim(), Some(p)),
            None => (s, None),
        };
        let nums = |p: Option<&str>| -> Result<Vec<f64>> {
            p.map(|p| {
                p.split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidParameter(format!("bad number {v:?} in null spec {s:?}")))
                    })
                    .collect()
            })
            .unwrap_or_else(|| Ok(Vec::new()))
        };
        let p = nums(params)?;
        match (family.to_ascii_lowercase().as_str(), p.as_slice()) {
            ("uniform" | "uniform01", []) => Ok(Self::Uniform01),
            ("pit", []) => Ok(Self::Pit),
            ("normal", []) => Self::normal(0.0, 1.0),
            ("normal", [mu, sigma]) => Self::normal(*mu, *sigma),
            ("exp" | "exponential", [rate]) => Self::exponential(*rate),
            _ => Err(Error::InvalidParameter(format!(
                "unrecognised null spec {s:?} (expected uniform | normal:mu,sigma | exp:rate | pit)"
            ))),
        }
    }
}

/// Sorted transformed sample `u₍₁₎ ≤ … ≤ u₍N₎`, all strictly inside (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalProcess {
    sorted: Vec<f64>,
    clamped: usize,
}

impl EmpiricalProcess {
    /// Builds the process from values in `[0, 1]`, clamping exact endpoints.
    pub fn from_uniforms(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidData("empty sample".into()));
        }
        let (mut low, mut high) = (0usize, 0usize);
        for (i, v) in values.iter_mut().enumerate() {
            if !v.is_finite() || *v < 0.0 || *v > 1.0 {
                return Err(Error::InvalidData(format!("value #{} = {} is not in [0, 1]", i + 1, v)));
            }
            if *v == 0.0 {
                *v = CLAMP_EPS;
                low += 1;
            } else if *v == 1.0 {
                *v = 1.0 - CLAMP_EPS;
                high += 1;
            }
        }
        let n = values.len();
        let limit = MAX_CLAMPED_FRACTION * n as f64;
        if low as f64 > limit {
            return Err(Error::DegenerateNull { count: low, total: n, endpoint: "lower" });
        }
        if high as f64 > limit {
            return Err(Error::DegenerateNull { count: high, total: n, endpoint: "upper" });
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self { sorted: values, clamped: low + high })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn clamped(&self) -> usize {
        self.clamped
    }

    /// `F̂(u) = #{uᵢ ≤ u} / N`.
    pub fn ecdf(&self, u: f64) -> f64 {
        self.sorted.partition_point(|&x| x <= u) as f64 / self.len() as f64
    }
}

/// Maps data through the null cdf and sorts.
pub fn pit_transform(data: &[f64], null: &NullDistribution) -> Result<EmpiricalProcess> {
    if data.is_empty() {
        return Err(Error::InvalidData("empty sample".into()));
    }
    let mut u = Vec::with_capacity(data.len());
    for (i, &x) in data.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::InvalidData(format!("value #{} is not finite ({x})", i + 1)));
        }
        if matches!(null, NullDistribution::Pit) && !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidData(format!("value #{} = {x} is outside [0, 1] under the pit null", i + 1)));
        }
        u.push(null.cdf(x));
    }
    EmpiricalProcess::from_uniforms(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedStatistic {
    pub k_obs: f64,
    /// Quantile where the supremum is attained.
    pub arg_u: f64,
    pub n: usize,
    pub window: QuantileWindow,
}

#[inline]
fn weighted_gap(u: f64, c: f64) -> f64 {
    (c - u).abs() / (u * (1.0 - u)).sqrt()
}

/// Weighted supremum over `window`; fails if no order statistic lies in it.
pub fn weighted_ks_statistic(proc: &EmpiricalProcess, window: &QuantileWindow) -> Result<WeightedStatistic> {
    let u = proc.values();
    let n = u.len();
    if n == 0 {
        return Err(Error::InvalidData("empty sample".into()));
    }
    let (a, b) = (window.a(), window.b());
    let nf = n as f64;

    let first = u.partition_point(|&x| x < a);
    if first == n || u[first] > b {
        return Err(Error::EmptyWindow { a, b });
    }

    let mut best = 0.0;
    let mut arg = a;
    let mut consider = |x: f64, c: f64| {
        let g = weighted_gap(x, c);
        if g > best {
            best = g;
            arg = x;
        }
    };

    consider(a, proc.ecdf(a));
    consider(b, proc.ecdf(b));

    let mut i = first;
    while i < n && u[i] <= b {
        let v = u[i];
        let mut j = i;
        while j < n && u[j] == v {
            j += 1;
        }
        // #{u < v} = i, #{u ≤ v} = j
        consider(v, j as f64 / nf);
        if v > a {
            consider(v, i as f64 / nf);
        }
        i = j;
    }

    Ok(WeightedStatistic { k_obs: nf.sqrt() * best, arg_u: arg, n, window: *window })
}

/// Unweighted `√N · sup |F̂(u) - u|` over `[0, 1]`.
pub fn classical_ks_statistic(proc: &EmpiricalProcess) -> f64 {
    let nf = proc.len() as f64;
    let d = proc
        .values()
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let i = i as f64;
            ((i + 1.0) / nf - u).abs().max((i / nf - u).abs())
        })
        .fold(0.0, f64::max);
    nf.sqrt() * d
}

/// Outcome of a weighted goodness-of-fit test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub n: usize,
    pub window: QuantileWindow,
    pub k_obs: f64,
    pub arg_u: f64,
    pub pvalue: f64,
    pub k_star: f64,
    pub alpha: f64,
    /// `k_obs > k_star`.
    pub reject: bool,
    pub warnings: Vec<Warning>,
}

/// Transforms, evaluates the statistic and compares it with the test law.
/// Without an explicit window the default `[1/(N+1), N/(N+1)]` is used.
pub fn run_test(
    data: &[f64],
    null: &NullDistribution,
    alpha: f64,
    window: Option<QuantileWindow>,
) -> Result<TestReport> {
    let proc = pit_transform(data, null)?;
    let n = proc.len();
    let window = match window {
        Some(w) => w,
        None => QuantileWindow::for_sample_size(n as f64)?,
    };
    let stat = weighted_ks_statistic(&proc, &window)?;
    let law = TestLaw::weighted_with_window(n as f64, window)?;
    let pvalue = law.pvalue(stat.k_obs)?;
    let k_star = law.critical_value(alpha)?;

    let mut warnings = validity_warnings(n as f64);
    if proc.clamped() > 0 {
        warnings.push(Warning::ClampedValues { count: proc.clamped() });
    }
    Ok(TestReport {
        n,
        window,
        k_obs: stat.k_obs,
        arg_u: stat.arg_u,
        pvalue,
        k_star,
        alpha,
        reject: stat.k_obs > k_star,
        warnings,
    })
}
