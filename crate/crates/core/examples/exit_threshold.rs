//! EXIT decoding thresholds of the preset ensembles.

use gmacwt::ensembles::{presets, random_puncturing, PuncturingDistribution};
use gmacwt::exit::ExitSystem;

pub fn run() -> gmacwt::Result<Vec<(&'static str, f64)>> {
    let eq = presets::equal_power_mother();
    let none = PuncturingDistribution::zero();
    let pi = presets::equal_power_puncturing();
    let rnd = random_puncturing(0.25, &eq)?;

    let u1 = presets::unequal_power_mother_user1();
    let u2 = presets::unequal_power_mother_user2();
    let pi1 = presets::unequal_power_puncturing_user1();
    let pi2 = presets::unequal_power_puncturing_user2();

    let cases: [(&str, ExitSystem); 5] = [
        ("equal power, unpunctured", ExitSystem::new([&eq, &eq], [&none, &none], [1.0, 1.0])?),
        ("equal power, designed puncturing", ExitSystem::new([&eq, &eq], [&pi, &pi], [1.0, 1.0])?),
        ("equal power, random puncturing", ExitSystem::new([&eq, &eq], [&rnd, &rnd], [1.0, 1.0])?),
        ("unequal power, unpunctured", ExitSystem::new([&u1, &u2], [&none, &none], [1.5, 0.5])?),
        ("unequal power, designed puncturing", ExitSystem::new([&u1, &u2], [&pi1, &pi2], [1.5, 0.5])?),
    ];
    let mut out = Vec::new();
    for (name, sys) in &cases {
        let t = std::time::Instant::now();
        let sigma = sys.threshold()?;
        println!("{name:<36} sigma* = {sigma:.4}  ({:.1?})", t.elapsed());
        out.push((*name, sigma));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> gmacwt::Result<()> {
    run().map(|_| ())
}
