//! Independent reference computations shared by the integration tests.
//!
//! None of these call into the library's root finders, quadrature or
//! statistic code.

#![allow(dead_code)]

/// Eigenvalues `λ₀ < λ₁ < …` of `-ψ'' + (z²/4) ψ = λ ψ` on `(-k, k)` with
/// Dirichlet walls, from the three-point finite-difference matrix on `m`
/// interior nodes. Each eigenvalue is isolated by Sturm-sequence bisection.
pub fn fd_eigenvalue(k: f64, m: usize, index: usize) -> f64 {
    let h = 2.0 * k / (m + 1) as f64;
    let off = -1.0 / (h * h);
    let diag: Vec<f64> = (1..=m)
        .map(|i| {
            let z = -k + i as f64 * h;
            2.0 / (h * h) + 0.25 * z * z
        })
        .collect();
    // Number of eigenvalues below x.
    let count_below = |x: f64| {
        let mut count = 0;
        let mut q = diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for d in &diag[1..] {
            let q_prev = if q == 0.0 { f64::EPSILON * h } else { q };
            q = d - x - off * off / q_prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let (mut lo, mut hi) = (0.0, 4.0 / (h * h) + 0.25 * k * k);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Richardson-extrapolated finite-difference eigenvalue (error `O(h²)` removed).
pub fn fd_eigenvalue_extrapolated(k: f64, m: usize, index: usize) -> f64 {
    // m and 2m+1 interior nodes give spacings h and h/2.
    let coarse = fd_eigenvalue(k, m, index);
    let fine = fd_eigenvalue(k, 2 * m + 1, index);
    (4.0 * fine - coarse) / 3.0
}

/// Composite Simpson rule on `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + i as f64 * h);
    }
    s * h / 3.0
}

/// Romberg integration from Simpson's rule with successive halving.
pub fn romberg<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let mut prev = simpson(&f, lo, hi, 64);
    for level in 1..12 {
        let next = simpson(&f, lo, hi, 64 << level);
        // Simpson error is O(h⁴).
        let extrapolated = (16.0 * next - prev) / 15.0;
        if (next - prev).abs() < 1e-15 {
            return extrapolated;
        }
        prev = next;
    }
    prev
}

/// Ã for a known (unnormalised) ground state `ψ` on `[-k, k]`:
/// `Ã = (∫ e^{-z²/4} ψ)² / (√(2π) ∫ ψ²)`.
pub fn a_tilde_from_mode<F: Fn(f64) -> f64>(psi: F, k: f64) -> f64 {
    let num = romberg(|z| (-0.25 * z * z).exp() * psi(z), -k, k);
    let den = romberg(|z| psi(z) * psi(z), -k, k);
    num * num / ((2.0 * std::f64::consts::PI).sqrt() * den)
}

/// `√N · sup |F̂(u) - u| / √(u(1-u))` over `[a, b]` by brute force: every
/// grid point `a, a + step, …, b`, plus both one-sided limits of `F̂` at each
/// data point inside the window. `F̂` is evaluated by counting.
/// Returns `None` when no data point lies in `[a, b]`.
pub fn brute_force_statistic(data: &[f64], a: f64, b: f64, step: f64) -> Option<f64> {
    let n = data.len() as f64;
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    if !sorted.iter().any(|&u| a <= u && u <= b) {
        return None;
    }
    let gap = |u: f64, c: f64| (c - u).abs() / (u * (1.0 - u)).sqrt();
    let mut best: f64 = 0.0;

    let steps = ((b - a) / step).floor() as usize;
    let mut at_or_below = 0usize;
    for i in 0..=steps + 1 {
        let x = if i > steps { b } else { a + i as f64 * step };
        if x > b {
            continue;
        }
        while at_or_below < sorted.len() && sorted[at_or_below] <= x {
            at_or_below += 1;
        }
        best = best.max(gap(x, at_or_below as f64 / n));
    }
    for &v in sorted.iter().filter(|&&v| a <= v && v <= b) {
        let below = sorted.iter().filter(|&&u| u < v).count() as f64;
        let upto = sorted.iter().filter(|&&u| u <= v).count() as f64;
        best = best.max(gap(v, upto / n));
        if v > a {
            best = best.max(gap(v, below / n));
        }
    }
    Some(n.sqrt() * best)
}

/// Classical Kolmogorov cdf from the alternating series only.
pub fn kolmogorov_alternating(k: f64) -> f64 {
    let mut s = 0.0;
    for j in 1..200 {
        let j = j as f64;
        let sign = if j as u64 % 2 == 1 { 1.0 } else { -1.0 };
        s += sign * (-2.0 * j * j * k * k).exp();
    }
    1.0 - 2.0 * s
}
