//! Maps preserving the equator against eggbeater iterates: |Phi_4| stays bounded on
//! the former and grows on the latter.

use paramorphism::estimator::{equator_family, property3_check, EstimatorOptions};
use paramorphism::flows::{eggbeater_family, standard_disks, FullTwist};
use paramorphism::quasimorphisms::cross_linking_preset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let egg = eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], 1.0)?;
    let opts = EstimatorOptions::default().with_samples(1000).with_seed(2);
    let r = property3_check(&equator_family()?, &egg, &[1, 2, 3, 4, 5], &cross_linking_preset(4), 4, &opts)?;
    for p in &r.points {
        println!("family parameter {:>7.3}: Phi = {:.5}", p.k_or_index, p.value);
    }
    println!("eggbeater iterates: {}", r.diagnostics["eggbeater"]);
    println!("{}", r.summary_line());
    Ok(())
}
