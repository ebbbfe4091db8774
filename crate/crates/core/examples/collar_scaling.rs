//! Length of the collar cutoff isotopy as the collar width shrinks.

use paramorphism::estimator::frag_report;
use paramorphism::flows::CircleFlow;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = frag_report(&CircleFlow::rotation(1.0), &[0.2, 0.1, 0.05, 0.025])?;
    for p in &r.points {
        println!("delta {:>6.3}: length {:.6}", p.k_or_index, p.value);
    }
    println!("{}", r.summary_line());
    Ok(())
}
