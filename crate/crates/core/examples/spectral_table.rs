//! Ground-state exponent θ₀, first gap and prefactor Ã across k,
//! next to their small- and large-k limits.

use weighted_ks::spectral::{
    a_tilde_asymptotic_large_k, a_tilde_asymptotic_small_k, ground_state, theta0_asymptotic_large_k,
    theta0_asymptotic_small_k,
};

fn main() -> Result<(), weighted_ks::error::Error> {
    println!("{:>5} {:>12} {:>12} {:>8} {:>9} {:>12} {:>12} {:>9}", "k", "theta0", "small-k", "large-k", "delta1", "a_tilde", "A small-k", "A large-k");
    for i in 0..=20 {
        let k = 0.1 + 0.3 * i as f64;
        let g = ground_state(k)?;
        println!(
            "{k:5.2} {:12.6e} {:12.6e} {:8.4} {:9.4} {:12.8} {:12.8} {:9.6}",
            g.theta0,
            theta0_asymptotic_small_k(k),
            theta0_asymptotic_large_k(k),
            g.delta1(),
            g.a_tilde,
            a_tilde_asymptotic_small_k(k),
            a_tilde_asymptotic_large_k(k),
        );
    }

    // Closed-form cases: θ₀(1) = 2, θ₁(√3) = 3.
    let g = ground_state(1.0)?;
    println!("\ntheta0(1)    = {:.12}", g.theta0);
    println!("theta1(sqrt3) = {:.12}", ground_state(3f64.sqrt())?.theta1);
    Ok(())
}
