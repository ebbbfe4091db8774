//! Stratified Monte Carlo estimate of Phi_n(f) for each evaluator, with the per-stratum
//! breakdown. Usage: `phi_estimate [n] [samples]`.

use paramorphism::estimator::{phi_estimate, EstimatorOptions};
use paramorphism::flows::{eggbeater_family, standard_disks, FullTwist};
use paramorphism::quasimorphisms::by_name;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>());
    let n = args.next().transpose()?.unwrap_or(5);
    let samples = args.next().transpose()?.unwrap_or(1500);
    let f = eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], 1.0)?.iterate(3);
    let opts = EstimatorOptions::default().with_samples(samples).with_seed(1);
    for name in ["exponent-sum", "cross-linking", "signature"] {
        let qm = by_name(name, n).ok_or("unknown evaluator")?;
        let e = phi_estimate(&f, &qm, n, &opts)?;
        println!("{name:>14}: Phi_{n} = {:.5} +- {:.5}", e.mean, e.stderr);
        for (k, m) in &e.stratum_means {
            println!("{:>18} k = {k}: mean {m:.5}, weight {:.4}", "", e.stratum_volumes[k]);
        }
    }
    Ok(())
}
