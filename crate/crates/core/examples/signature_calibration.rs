//! Samples the additivity defect of the closure signature on B_n, n = 2..8, with
//! 10^4 pairs of random length-20 words, and prints 1.25 times the worst case next
//! to the declared defect.

use paramorphism::quasimorphisms::{defect_estimate, signature_qm};
use paramorphism::sphere::stream_rng;

fn main() {
    println!("{:>3} {:>10} {:>10} {:>10}", "n", "observed", "x1.25", "declared");
    for n in 2..=8 {
        let qm = signature_qm(n);
        let mut rng = stream_rng(2024, n as u64);
        let observed = defect_estimate(&qm, &mut rng, n, 10_000, 20);
        println!("{n:>3} {observed:>10} {:>10} {:>10}", 1.25 * observed, qm.declared_defect);
    }
}
