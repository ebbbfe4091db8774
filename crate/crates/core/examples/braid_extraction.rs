//! Braids traced by configurations: a half turn exchanging two points, and the
//! closed braid of an eggbeater relative to a base configuration.

use std::f64::consts::PI;

use paramorphism::braids::{extract_braid, trace_braid, BraidInvariants, ExtractionOptions};
use paramorphism::estimator::base_configuration;
use paramorphism::flows::{eggbeater_family, rotation, standard_disks, FullTwist};
use paramorphism::sphere::{Configuration, SpherePoint, Vec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pair = Configuration::new(vec![SpherePoint::from_lat_lon(-1.2, 0.0), SpherePoint::from_lat_lon(-1.2, PI)])?;
    let half = trace_braid(&rotation(-Vec3::z(), PI), &pair, &ExtractionOptions::default())?;
    println!("half turn: {half}");

    let egg = eggbeater_family(&standard_disks(), &[FullTwist::new(1, 3)], 1.0)?;
    let x = Configuration::new(standard_disks().iter().map(|d| d.center).collect())?;
    let z = base_configuration(4, 2);
    let w = extract_braid(&egg, &x, &z)?;
    let inv = BraidInvariants::of(&w);
    println!("eggbeater at the disk centers: {w}");
    println!("lk13 = {}, exponent sum = {}, signature = {}", w.linking_number(1, 3), inv.exponent_sum, inv.signature);
    Ok(())
}
