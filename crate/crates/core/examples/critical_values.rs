//! 95% critical values of the weighted statistic versus sample size.

use weighted_ks::distribution::{
    critical_value, critical_value_asymptotic, critical_value_doublelog, ks_classical_critical_value,
};

fn main() -> Result<(), weighted_ks::error::Error> {
    println!("{:>9} {:>10} {:>12} {:>12}", "N", "exact", "large-k", "sqrt(2lnlnN)");
    for e in 2..=9 {
        let n = 10f64.powi(e);
        println!(
            "{:>9.0e} {:10.4} {:12.4} {:12.4}",
            n,
            critical_value(n, 0.05)?,
            critical_value_asymptotic(n, 0.05)?,
            critical_value_doublelog(n)?,
        );
    }
    println!("\nclassical KS at 95%: {:.4}", ks_classical_critical_value(0.05)?);
    Ok(())
}
