//! Kummer's function, the parabolic-cylinder solutions and erf.

use weighted_ks::special::{erf, erfc, kummer_1f1, y_minus, y_plus, SeriesControl};

fn main() -> Result<(), weighted_ks::error::Error> {
    let ctrl = SeriesControl::default();
    println!("1F1(1; 1; 1)        = {:.15}  (e = {:.15})", kummer_1f1(1.0, 1.0, 1.0, ctrl)?, std::f64::consts::E);
    println!("1F1(-2; 1/2; 1)     = {:.15}  (polynomial, exact -5/3)", kummer_1f1(-2.0, 0.5, 1.0, ctrl)?);
    println!("1F1(-1/2; 1/2; -4)  = {:.15}", kummer_1f1(-0.5, 0.5, -4.0, ctrl)?);

    // At θ = 2 the even solution is 1 - z², vanishing at z = 1.
    for z in [0.0, 0.5, 1.0, 1.5] {
        println!("y+(2, {z}) = {:+.12}   y-(3, {z}) = {:+.12}", y_plus(2.0, z)?, y_minus(3.0, z)?);
    }

    for x in [0.1, 1.0, 2.0, 4.0] {
        println!("erf({x}) = {:.16}  erfc({x}) = {:.6e}", erf(x), erfc(x));
    }
    Ok(())
}
