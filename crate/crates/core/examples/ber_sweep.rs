//! Monte Carlo BER sweep driven by an experiment configuration.
//!
//! Without arguments a short built-in configuration is used; pass one of
//! the files in `configs/` for the full-length experiments.
//!
//! ```text
//! cargo run --release --example ber_sweep -- [config.toml] [out.csv]
//! ```

use std::path::Path;

use gmacwt::harness::{run_sweep, write_curves, BerCurve, ExperimentConfig};

pub const SMALL: &str = r#"
scenario = "small-equal-optimized"
n = 1000
powers = [1.0, 1.0]
secure_rates = [0.3333, 0.3333]
ensembles = ["preset:equal-mother", "preset:equal-mother"]
puncturing = "optimized"
puncturing_files = ["preset:equal-puncturing", "preset:equal-puncturing"]
sigma2 = [0.0, 0.2, 0.3, 0.4, 0.6, 1.0]
taps = ["bob"]
min_errors = 50
max_frames = 40
seed = 3
graph_seed = 1
"#;

pub fn run(config: Option<&Path>, out: Option<&Path>) -> gmacwt::Result<Vec<BerCurve>> {
    let cfg = match config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::parse(SMALL, Path::new("."))?,
    };
    let t = std::time::Instant::now();
    let curves = run_sweep(&cfg)?;
    for c in &curves {
        println!("{} user {} at {}:", c.scenario, c.user, c.tap.name());
        for p in &c.points {
            println!(
                "  sigma2 {:>7.4}  snr {:>6.2} dB  ber {:.3e} +- {:.1e}  fer {:.3}  ({} frames)",
                p.sigma2, p.snr_db, p.ber, p.ci_halfwidth, p.fer, p.trials
            );
        }
    }
    println!("{:.1?}", t.elapsed());
    if let Some(path) = out {
        write_curves(&curves, std::fs::File::create(path)?)?;
    }
    Ok(curves)
}

#[allow(dead_code)]
fn main() -> gmacwt::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let mut args = std::env::args().skip(1);
    let config = args.next();
    let out = args.next();
    run(config.as_deref().map(Path::new), out.as_deref().map(Path::new)).map(|_| ())
}
