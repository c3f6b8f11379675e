//! Adaptive Gauss–Legendre quadrature with interval halving.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 10;
const MAX_DEPTH: u32 = 40;

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

/// Nodes and weights on [-1, 1] from Newton iteration on P_n.
fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Rule { nodes, weights }
    })
}

/// (P_n(x), P_n'(x)) via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gauss<F: FnMut(f64) -> Result<f64>>(f: &mut F, lo: f64, hi: f64) -> Result<f64> {
    let r = rule();
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut s = 0.0;
    for (x, w) in r.nodes.iter().zip(r.weights.iter()) {
        s += w * f(mid + half * x)?;
    }
    Ok(s * half)
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol`.
///
/// Each panel is accepted when the 10-point rule on the whole panel and on its
/// two halves agree to within the panel's share of `tol`.
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("quadrature tolerance must be > 0, got {tol}")));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let whole = gauss(&mut f, lo, hi)?;
    refine(&mut f, lo, hi, whole, tol, 0)
}

fn refine<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    lo: f64,
    hi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let mid = 0.5 * (lo + hi);
    let left = gauss(f, lo, mid)?;
    let right = gauss(f, mid, hi)?;
    let halves = left + right;
    if (halves - whole).abs() <= tol {
        return Ok(halves);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::QuadratureFailure { lo, hi, tol });
    }
    Ok(refine(f, lo, mid, left, 0.5 * tol, depth + 1)? + refine(f, mid, hi, right, 0.5 * tol, depth + 1)?)
}

/// Integral of an even function over `[-half_width, half_width]`.
pub fn integrate_symmetric<F>(f: F, half_width: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok(2.0 * integrate(f, 0.0, half_width, 0.5 * tol)?)
}
