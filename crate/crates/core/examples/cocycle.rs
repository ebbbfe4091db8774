//! The cocycle identity gamma(g f, x) = gamma(g, f(x)) gamma(f, x) on random
//! configurations, for an eggbeater followed by a tilted rotation.

use paramorphism::braids::{cocycle_check, ExtractionOptions};
use paramorphism::estimator::base_configuration;
use paramorphism::flows::{eggbeater_family, rotation, standard_disks, FullTwist};
use paramorphism::sphere::{sample_configuration, stream_rng, Vec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], 1.0)?;
    let g = rotation(Vec3::new(1.0, 0.0, 1.0).normalize(), 1.2);
    let z = base_configuration(4, 2);
    let mut rng = stream_rng(5, 0);
    for _ in 0..5 {
        let x = sample_configuration(&mut rng, 4, 0.05)?;
        let r = cocycle_check(&f, &g, &x, &z, &ExtractionOptions::default())?;
        println!("direct  {}\nproduct {}\ninvariants equal: {}\n", r.direct, r.product, r.invariants_equal);
    }
    Ok(())
}
