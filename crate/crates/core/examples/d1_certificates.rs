//! Lower-bound certificates |Phi_4(f^k)| for the distance from the identity along
//! eggbeater iterates, next to the L1-length upper bounds.

use paramorphism::estimator::{d1_lower_bound_report, EstimatorOptions};
use paramorphism::flows::{eggbeater_family, standard_disks, FullTwist, Isotopy};
use paramorphism::quasimorphisms::cross_linking_preset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let egg = eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], 1.0)?;
    let seq: Vec<Isotopy> = [1, 2, 4, 8].iter().map(|&k| egg.iterate(k)).collect();
    let opts = EstimatorOptions::default().with_samples(1000).with_seed(8);
    let r = d1_lower_bound_report(&seq, &cross_linking_preset(4), 4, &opts)?;
    for p in &r.points {
        println!("map {}: certificate {:.5}, length {:.4}", p.k_or_index, p.value, p.length.unwrap_or(0.0));
    }
    println!("{}", r.summary_line());
    Ok(())
}
