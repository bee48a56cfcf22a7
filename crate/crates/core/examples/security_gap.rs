//! Security gap and SNR loss of short codes: Bob's reliability threshold
//! and Eve's confusion threshold measured on the same BER curve shape.

use std::path::Path;

use gmacwt::harness::{run_sweep, security_gap, snr_loss, BerCurve, ExperimentConfig};

fn config(n: usize, mode: &str, extra: &str, grid: &str, tap: &str) -> String {
    format!(
        r#"
scenario = "{mode}"
n = {n}
powers = [1.0, 1.0]
secure_rates = [0.3333, 0.3333]
ensembles = ["preset:equal-mother", "preset:equal-mother"]
puncturing = "{mode}"
{extra}
sigma2 = {grid}
taps = ["{tap}"]
min_errors = 100
min_frames = 4
max_frames = 60
seed = 9
graph_seed = 4
"#
    )
}

fn sweep(n: usize, mode: &str, extra: &str, grid: &str, tap: &str) -> gmacwt::Result<Vec<BerCurve>> {
    run_sweep(&ExperimentConfig::parse(&config(n, mode, extra, grid, tap), Path::new("."))?)
}

pub fn run(n: usize) -> gmacwt::Result<(f64, f64)> {
    let pi = r#"puncturing_files = ["preset:equal-puncturing", "preset:equal-puncturing"]"#;
    let bob_grid = "[0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.5, 0.6, 0.8, 1.0, 1.3]";
    let eve_grid = "[0.3, 0.4, 0.5, 0.7, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 300.0]";

    let opt_bob = sweep(n, "optimized", pi, bob_grid, "bob")?;
    let opt_eve = sweep(n, "optimized", pi, eve_grid, "eve")?;
    let unp_bob = sweep(n, "none", "", bob_grid, "bob")?;
    let unp_eve = sweep(n, "none", "", eve_grid, "eve")?;

    let p_b = 1e-3;
    let p_e = 0.45;
    let g_opt = security_gap(&opt_bob[0], &opt_eve[0], p_b, p_e)?;
    println!(
        "optimized:   sigma2_Bmax {:.4}  sigma2_Emin {:.4}  gap {:.2} dB",
        g_opt.sigma2_b_max, g_opt.sigma2_e_min, g_opt.gap_db
    );
    let g_unp = match security_gap(&unp_bob[0], &unp_eve[0], p_b, p_e) {
        Ok(g) => {
            println!(
                "unpunctured: sigma2_Bmax {:.4}  sigma2_Emin {:.4}  gap {:.2} dB",
                g.sigma2_b_max, g.sigma2_e_min, g.gap_db
            );
            g.gap_db
        }
        Err(e) => {
            println!("unpunctured: {e}");
            f64::INFINITY
        }
    };
    println!("SNR loss of puncturing: {:.2} dB", snr_loss(&opt_bob[0], &unp_bob[0], p_b)?);
    Ok((g_opt.gap_db, g_unp))
}

#[allow(dead_code)]
fn main() -> gmacwt::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2000);
    run(n).map(|_| ())
}
