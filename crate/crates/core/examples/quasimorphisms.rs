//! Evaluators on braid words: values, manifests, sampled defects and homogenization.

use paramorphism::braids::BraidWord;
use paramorphism::quasimorphisms::{by_name, defect_estimate, homogenize};
use paramorphism::sphere::stream_rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = BraidWord::parse_with_strands("s1 s1 s2 s2 s3^-1 s3^-1 s2 s1 s1 s2^-1", 4)?;
    for name in ["exponent-sum", "cross-linking", "signature"] {
        let qm = by_name(name, 4).ok_or("unknown evaluator")?;
        let sampled = defect_estimate(&qm, &mut stream_rng(1, 0), 4, 2000, 20);
        let h = homogenize(&qm, &w, 8, 0.05);
        println!("{}", qm.manifest());
        println!("  value {}  sampled defect {sampled}  homogenized {:.4} (converged {})", qm.evaluate(&w), h.value, h.converged);
    }
    Ok(())
}
