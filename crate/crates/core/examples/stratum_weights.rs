//! Configuration strata of the sphere: exact stratum volumes next to the frequencies
//! observed in area-uniform samples.

use paramorphism::sphere::{sample_configuration, stratum_volume, stream_rng, Hemisphere, Vec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 4;
    let draws = 100_000;
    let mut rng = stream_rng(1, 0);
    let mut counts = vec![0usize; n + 1];
    for _ in 0..draws {
        let x = sample_configuration(&mut rng, n, 1e-9)?;
        counts[x.count_in(&Vec3::z(), Hemisphere::Plus)] += 1;
    }
    println!("{:>2} {:>10} {:>10}", "k", "volume", "observed");
    for (k, c) in counts.iter().enumerate() {
        println!("{k:>2} {:>10.6} {:>10.6}", stratum_volume(n, k, 0.5), *c as f64 / draws as f64);
    }
    Ok(())
}
