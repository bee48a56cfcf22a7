//! One frame through the two-user channel and the joint decoder, with a
//! per-iteration trace of both users.
//!
//! ```text
//! cargo run --release --example joint_decoding -- [n] [sigma2] [trace.csv]
//! ```

use gmacwt::channel::{bpsk, transmit, ChannelParams, Tap};
use gmacwt::decoder::write_trace;
use gmacwt::harness::build_user_code;
use gmacwt::harness::sweep::decoder_for;
use gmacwt::harness::PuncturingMode;
use gmacwt::ensembles::presets;
use gmacwt::rng::seeded;
use rand::Rng;

pub fn run(n: usize, sigma2: f64, trace_out: Option<&str>) -> gmacwt::Result<bool> {
    let ens = presets::equal_power_mother();
    let pi = presets::equal_power_puncturing();
    let codes = [0u64, 1].map(|j| {
        build_user_code(&ens, 0.3333, ens.code_rate(), n, PuncturingMode::Optimized, Some(&pi), 20 + j, j, None)
    });
    let [c1, c2] = codes;
    let codes = [c1?, c2?];

    let mut rng = seeded(42);
    let words: Vec<_> = codes
        .iter()
        .map(|c| {
            let secret: Vec<u8> = (0..c.encoder.secret_len()).map(|_| rng.random::<bool>() as u8).collect();
            c.encoder.encode(&secret, &mut rng)
        })
        .collect::<gmacwt::Result<_>>()?;

    let params = ChannelParams::symmetric(1.0, 1.0, sigma2)?;
    let y = transmit(&bpsk(&words[0].transmitted), &bpsk(&words[1].transmitted), &params, Tap::Bob, &mut rng)?;
    let mut dec = decoder_for(&codes, 100)?;
    let mut rows = Vec::new();
    let truth = [words[0].full.as_slice(), words[1].full.as_slice()];
    let out = dec.decode_traced(&y, &params, sigma2, Some(truth), &mut rows)?;
    println!("sigma2 {sigma2}: {} iterations, converged {}", out.iterations, out.converged);
    for j in 0..2 {
        let s = codes[j].encoder.extract_secret(&out.bits[j]);
        let errs = s.iter().zip(&words[j].secret).filter(|(a, b)| a != b).count();
        println!("user {}: {errs} of {} secret bits wrong", j + 1, s.len());
    }
    if let Some(path) = trace_out {
        write_trace(&rows, std::fs::File::create(path)?)?;
        println!("trace written to {path}");
    }
    Ok(out.converged)
}

#[allow(dead_code)]
fn main() -> gmacwt::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|a| a.parse().ok()).unwrap_or(10_000);
    let sigma2 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.3);
    let trace = args.next();
    run(n, sigma2, trace.as_deref()).map(|_| ())
}
