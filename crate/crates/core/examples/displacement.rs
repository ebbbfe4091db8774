//! Energy-capacity check: a half turn about the x axis displaces a polar cap, and the
//! displacement lower bound sits below the L1 length.

use std::f64::consts::PI;

use paramorphism::estimator::nondeg_report;
use paramorphism::flows::rotation;
use paramorphism::sphere::{Disk, SpherePoint, Vec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for area in [0.01, 0.05, 0.2] {
        let cap = Disk::with_area(SpherePoint::north(), area)?;
        let r = nondeg_report(&rotation(Vec3::x(), PI), &cap, 400)?;
        println!("cap area {area:>5}: bound {:.5}, length {:.5}", r.constants["bound"], r.constants["length"]);
    }
    Ok(())
}
