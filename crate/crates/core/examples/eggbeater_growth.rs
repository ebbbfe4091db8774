//! Growth of the estimated functional along eggbeater iterates: Phi_4(f^k) for
//! k = 1..20 with the cross-linking evaluator, and a linear fit.

use paramorphism::estimator::{phi_bar_estimate, EstimatorOptions, Trend};
use paramorphism::flows::{eggbeater_family, standard_disks, FullTwist};
use paramorphism::quasimorphisms::cross_linking_preset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let f = eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], 1.0)?;
    let qm = cross_linking_preset(4);
    let ks: Vec<usize> = (1..=20).collect();
    let opts = EstimatorOptions::default().with_samples(samples).with_seed(7).with_workers(num_workers());
    let report = phi_bar_estimate(&f, &qm, 4, &ks, Trend::Growth, &opts)?;
    for p in &report.points {
        println!("k = {:>2}  Phi = {:>9.5} +- {:.5}", p.k_or_index, p.value, p.stderr);
    }
    println!("{}", report.summary_line());
    Ok(())
}

fn num_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}
