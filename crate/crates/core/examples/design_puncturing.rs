//! Designs puncturing distributions for both power scenarios by
//! alternating linear programs, then reports the EXIT threshold of each
//! design.
//!
//! ```text
//! cargo run --release --example design_puncturing -- [sigma_equal] [sigma_unequal]
//! ```

use gmacwt::ensembles::presets;
use gmacwt::exit::ExitSystem;
use gmacwt::optimizer::{alternate, AlternateOutcome, OptimizerConfig};

pub fn run(sigmas: [f64; 2], max_rounds: usize) -> gmacwt::Result<Vec<AlternateOutcome>> {
    let cfg = OptimizerConfig::default();
    let eq = presets::equal_power_mother();
    let u1 = presets::unequal_power_mother_user1();
    let u2 = presets::unequal_power_mother_user2();
    let scenarios = [("equal power", [&eq, &eq], [1.0, 1.0], sigmas[0]), ("unequal power", [&u1, &u2], [1.5, 0.5], sigmas[1])];
    let mut outcomes = Vec::new();
    for (name, ens, p, sigma) in scenarios {
        let t = std::time::Instant::now();
        let out = alternate(ens, p, sigma, max_rounds, &cfg)?;
        println!("{name} at sigma {sigma}: {} rounds, converged {}, {:.1?}", out.rounds, out.converged, t.elapsed());
        for j in 0..2 {
            let coeffs: Vec<String> = out.pi[j].iter().map(|(d, v)| format!("{d}:{v:.4}")).collect();
            println!("  user {}: R_p = {:.4}  pi = {{{}}}", j + 1, out.rates[j], coeffs.join(", "));
        }
        let sys = ExitSystem::new(ens, [&out.pi[0], &out.pi[1]], p)?;
        match sys.threshold() {
            Ok(s) => println!("  threshold of the design: {s:.4}"),
            Err(e) => println!("  threshold of the design unavailable: {e}"),
        }
        outcomes.push(out);
    }
    Ok(outcomes)
}

#[allow(dead_code)]
fn main() -> gmacwt::Result<()> {
    env_logger::init();
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let sigmas = [
        args.first().copied().unwrap_or(presets::EQUAL_POWER_DESIGN_SIGMA),
        args.get(1).copied().unwrap_or(presets::UNEQUAL_POWER_DESIGN_SIGMA),
    ];
    run(sigmas, 20).map(|_| ())
}
