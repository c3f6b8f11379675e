//! Sampling the weighted statistic under the null and comparing its
//! distribution with S(N; k) = Ã(k) N^{-θ₀(k)}.
//!
//! The law is the Gaussian (Brownian-bridge) limit. Near the window edges
//! only a handful of points fall below `u ≈ 1/N`, the empirical process is
//! Poisson-like there, and at these sample sizes the simulated upper tail is
//! visibly heavier than the law. The gap closes only logarithmically in N.

use weighted_ks::distribution::survival_cdf;
use weighted_ks::montecarlo::{direct_survival, SimulationConfig};

fn main() -> Result<(), weighted_ks::error::Error> {
    let cfg = SimulationConfig { replicas: 4_000, seed: 1, dt: 1e-3 };
    let ks: Vec<f64> = (0..9).map(|i| 2.5 + 0.25 * i as f64).collect();
    for n in [100, 1_000, 10_000] {
        println!("N = {n}");
        let est = direct_survival(n, &ks, &cfg)?;
        for (k, e) in ks.iter().zip(&est) {
            let law = survival_cdf(n as f64, *k)?;
            println!(
                "  k = {k:4.2}   simulated {:.4} ± {:.4}   law {:.4}   z = {:+5.1}",
                e.survival,
                e.std_error,
                law,
                e.z_score(law)
            );
        }
    }
    Ok(())
}
