//! L1 lengths of isotopies: rigid rotations (theta pi^2 on the unit sphere), an
//! eggbeater and its iterates, and a random Fourier flow.

use std::f64::consts::PI;

use paramorphism::flows::{eggbeater_family, l1_length, rotation, standard_disks, FullTwist, Isotopy, RandomFourier};
use paramorphism::sphere::{stream_rng, Vec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for theta in [0.5, 1.0, 2.0] {
        let len = l1_length(&rotation(Vec3::z(), theta))?;
        println!("rotation {theta:>4}: {len:.6} (theta pi^2 = {:.6})", theta * PI * PI);
    }
    let egg = eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], 1.0)?;
    for k in [1, 2, 4] {
        println!("eggbeater^{k}:    {:.6}", l1_length(&egg.iterate(k))?);
    }
    let h = RandomFourier::sample(&mut stream_rng(3, 0xf0), 3.0, 6, 0.5);
    println!("random fourier:  {:.6}", l1_length(&Isotopy::from_hamiltonian(h))?);
    Ok(())
}
