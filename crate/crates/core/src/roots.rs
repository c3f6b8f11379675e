//! Derivative-free bracketing root finders.

use crate::error::{Error, Result};

/// Stopping tolerance for [`brent`]: the bracket half-width must drop below
/// `min(abs, rel * |x|)` (plus a few ulps of `x`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_iter: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-10, rel: 1e-12, max_iter: 200 }
    }
}

/// Brent's method: inverse quadratic interpolation safeguarded by bisection.
///
/// `fa` and `fb` are the function values at the bracket ends and must have
/// opposite signs (or one of them be zero).
pub fn brent<F>(mut f: F, a: f64, b: f64, fa: f64, fb: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidParameter(format!(
            "brent: f({a})={fa} and f({b})={fb} do not bracket a root"
        )));
    }

    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..tol.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol.abs.min(tol.rel * b.abs()).max(f64::MIN_POSITIVE);
        let m = 0.5 * (c - b);
        if m.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }

        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                // secant
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::RootNotConverged { iterations: tol.max_iter })
}

/// Plain bisection for a monotone function; returns the midpoint of the final bracket.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidParameter(format!(
            "bisect: f({lo})={flo} and f({hi})={fhi} do not bracket a root"
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= 2.0 * xtol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::RootNotConverged { iterations: max_iter })
}

/// A bracket `[lo, hi]` with function values of opposite sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Scans `origin + step, origin + 1.5·step, ...` for the first sign change
/// relative to `f(origin)`, which must be nonzero. Fails past `ceiling`.
pub fn scan_geometric<F>(mut f: F, origin: f64, first_step: f64, ceiling: f64) -> Result<Option<Bracket>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f0 = f(origin)?;
    let (mut lo, mut f_lo) = (origin, f0);
    let mut step = first_step;
    loop {
        let probe = origin + step;
        if probe > ceiling {
            return Ok(None);
        }
        let fp = f(probe)?;
        if fp == 0.0 || fp.signum() != f0.signum() {
            return Ok(Some(Bracket { lo, hi: probe, f_lo, f_hi: fp }));
        }
        lo = probe;
        f_lo = fp;
        step *= 1.5;
    }
}
