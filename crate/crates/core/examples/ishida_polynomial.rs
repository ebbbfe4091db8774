//! The quartic polynomial in the disk areas predicted for the homogenized functional,
//! and its homogeneity under rescaling of the disks.

use paramorphism::estimator::{ishida_polynomial_prediction, IshidaSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut spec = IshidaSpec::b_only([0.1; 4], 1.0);
    println!("b only, a_i = 0.1: {:e}", ishida_polynomial_prediction(&spec)?);
    spec.coefficients.insert("1133".into(), 0.5);
    spec.coefficients.insert("2234".into(), -0.25);
    for r in [0.5, 1.0, 2.0] {
        let scaled = IshidaSpec { scale: r, ..spec.clone() };
        println!("r = {r}: P = {:e}", ishida_polynomial_prediction(&scaled)?);
    }
    Ok(())
}
