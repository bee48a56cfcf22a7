//! Stochastic encoding on a punctured mother code: the secret rides on the
//! punctured positions, the random message fills the rest of the
//! systematic part, and only the unpunctured bits reach the channel.

use gmacwt::codegraph::construct_graph;
use gmacwt::ensembles::presets;
use gmacwt::rng::seeded;
use gmacwt::secure::SecureEncoder;
use rand::Rng;

pub fn run(n_prime: usize) -> gmacwt::Result<()> {
    let ens = presets::equal_power_mother();
    let pi = presets::equal_power_puncturing();
    let g = construct_graph(&ens, n_prime, 3)?;
    let k = n_prime / 4;
    let enc = SecureEncoder::design(&g, &pi, k, 1)?;
    println!(
        "n' = {}  secret {}  random {}  transmitted {}",
        g.n_vars(),
        enc.secret_len(),
        enc.random_len(),
        enc.transmitted_len()
    );
    println!("punctured per degree: {:?}", enc.pattern().per_degree());

    let mut rng = seeded(7);
    let secret: Vec<u8> = (0..enc.secret_len()).map(|_| rng.random::<bool>() as u8).collect();
    // Same secret twice: the random message makes the channel words differ.
    let a = enc.encode(&secret, &mut rng)?;
    let b = enc.encode(&secret, &mut rng)?;
    let differ = a.transmitted.iter().zip(&b.transmitted).filter(|(x, y)| x != y).count();
    println!("two encodings of one secret differ in {differ} transmitted bits");
    println!("both are codewords: {}", g.is_codeword(&a.full) && g.is_codeword(&b.full));
    assert_eq!(enc.extract_secret(&a.full), secret);
    println!("secret recovered from the full codeword");
    Ok(())
}

#[allow(dead_code)]
fn main() -> gmacwt::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2000);
    run(n)
}
