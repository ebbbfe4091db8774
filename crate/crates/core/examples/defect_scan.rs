//! Additivity defect Phi(g f) - Phi(f) - Phi(g) for an eggbeater composed with tilted
//! rotations of growing angle, and the envelope C + D |g|_1.

use paramorphism::estimator::{property1_scan, EstimatorOptions};
use paramorphism::flows::{eggbeater_family, rotation, standard_disks, FullTwist, Isotopy};
use paramorphism::quasimorphisms::signature_qm;
use paramorphism::sphere::Vec3;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], 1.0)?;
    let tilt = Vec3::new(1.0, 0.0, 1.0).normalize();
    let pairs: Vec<(Isotopy, Isotopy)> = [0.05, 0.2, 0.5, 1.0, 2.0].iter().map(|&a| (f.clone(), rotation(tilt, a))).collect();
    let opts = EstimatorOptions::default().with_samples(600).with_seed(6);
    let r = property1_scan(&pairs, &signature_qm(4), 4, &opts)?;
    for p in &r.points {
        println!("|g|_1 = {:>8.4}  defect = {:>8.5} +- {:.5}", p.length.unwrap_or(0.0), p.value, p.stderr);
    }
    println!("{}", r.summary_line());
    Ok(())
}
