//! |Phi_4(f)| against the L1 length of f over tilted rotations and eggbeater iterates,
//! with the fitted constant A of |Phi| <= A (|f|_1 + 1).

use paramorphism::estimator::{property4_scan, EstimatorOptions};
use paramorphism::flows::{eggbeater_family, rotation, standard_disks, FullTwist, Isotopy};
use paramorphism::quasimorphisms::cross_linking_preset;
use paramorphism::sphere::Vec3;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tilt = Vec3::new(1.0, 0.5, 1.0).normalize();
    let mut flows: Vec<Isotopy> = (0..12).map(|i| rotation(tilt, 0.01 * 150f64.powf(i as f64 / 11.0))).collect();
    let egg = eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], 1.0)?;
    flows.extend((1..=8).map(|k| egg.iterate(k)));
    let opts = EstimatorOptions::default().with_samples(1000).with_seed(4);
    let r = property4_scan(&flows, &cross_linking_preset(4), 4, &opts)?;
    for p in &r.points {
        println!("length {:>10.4}  |Phi| {:.5} +- {:.5}", p.length.unwrap_or(0.0), p.value.abs(), p.stderr);
    }
    println!("{}", r.summary_line());
    Ok(())
}
