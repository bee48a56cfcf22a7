//! Builds a PEG Tanner graph for an ensemble, derives a systematic encoder
//! and writes the parity-check matrix in alist format.
//!
//! ```text
//! cargo run --release --example build_code -- [n_vars] [out.alist]
//! ```

use std::time::Instant;

use gmacwt::codegraph::{build_systematic_encoder, construct_graph, write_alist};
use gmacwt::ensembles::presets;

pub fn run(n_vars: usize, out: Option<&str>) -> gmacwt::Result<()> {
    let ens = presets::equal_power_mother();
    let t = Instant::now();
    let g = construct_graph(&ens, n_vars, 1)?;
    println!(
        "graph: {} variables, {} checks, {} edges ({:.1?})",
        g.n_vars(),
        g.n_checks(),
        g.n_edges(),
        t.elapsed()
    );
    println!("variable degrees: {:?}", g.var_degree_histogram());
    println!("check degrees:    {:?}", g.check_degree_histogram());
    let sample = (0..g.n_vars()).step_by((g.n_vars() / 50).max(1));
    println!("girth over sampled nodes: {:?}", g.girth_over(sample));

    let t = Instant::now();
    let enc = build_systematic_encoder(&g)?;
    println!(
        "encoder: l = {}, rank gap {} ({:.1?})",
        enc.message_len(),
        enc.rank_gap(),
        t.elapsed()
    );
    let msg: Vec<u8> = (0..enc.message_len()).map(|i| (i % 7 == 3) as u8).collect();
    let x = enc.encode(&msg)?;
    println!("sample codeword satisfies all checks: {}", g.is_codeword(&x));

    if let Some(path) = out {
        write_alist(&g, path)?;
        println!("wrote {path}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gmacwt::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|a| a.parse().ok()).unwrap_or(13333);
    let out = args.next();
    run(n, out.as_deref())
}
