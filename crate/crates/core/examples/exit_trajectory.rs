//! Coupled EXIT recursion of the equal-power design at one noise level,
//! written as CSV for plotting.
//!
//! ```text
//! cargo run --release --example exit_trajectory -- [sigma] [out.csv]
//! ```

use gmacwt::ensembles::presets;
use gmacwt::exit::{write_trajectory, ExitSystem};

pub fn run(sigma: f64, out: Option<&str>) -> gmacwt::Result<bool> {
    let ens = presets::equal_power_mother();
    let pi = presets::equal_power_puncturing();
    let sys = ExitSystem::new([&ens, &ens], [&pi, &pi], [1.0, 1.0])?;
    let (points, report) = sys.trajectory(sigma);
    println!(
        "sigma {sigma}: {} iterations, converged {}, final I_Ev = {:.6?}",
        report.iterations, report.converged, report.final_i_ev
    );
    for (it, pair) in points.iter().enumerate().step_by((points.len() / 10).max(1)) {
        println!("  {it:>4}: I_Av {:.4}  I_Es {:.4}  I_Ev {:.4}", pair[0].i_av, pair[0].i_es, pair[0].i_ev);
    }
    match out {
        Some(path) => write_trajectory(&points, std::fs::File::create(path)?)?,
        None => write_trajectory(&points, std::io::sink())?,
    }
    Ok(report.converged)
}

#[allow(dead_code)]
fn main() -> gmacwt::Result<()> {
    let mut args = std::env::args().skip(1);
    let sigma = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.8);
    let out = args.next();
    run(sigma, out.as_deref()).map(|_| ())
}
