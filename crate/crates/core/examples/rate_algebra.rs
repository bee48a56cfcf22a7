//! Rate bookkeeping for the punctured secrecy scheme: how the secure rate,
//! the mother-code rate and the frame length fix every other length.

use gmacwt::ensembles::{presets, puncturing_rate, RateSet};

pub fn run() -> gmacwt::Result<Vec<RateSet>> {
    let eq = presets::equal_power_mother();
    let u1 = presets::unequal_power_mother_user1();
    let u2 = presets::unequal_power_mother_user2();

    println!("mother code rates: equal {:.4}, unequal {:.4} / {:.4}", eq.code_rate(), u1.code_rate(), u2.code_rate());
    println!(
        "puncturing rate of the equal-power distribution: {:.4}",
        puncturing_rate(&presets::equal_power_puncturing(), &eq)?
    );

    let cases = [("equal", 0.3333, eq.code_rate()), ("unequal 1", 0.4451, u1.code_rate()), ("unequal 2", 0.2215, u2.code_rate())];
    let mut out = Vec::new();
    println!("{:<10} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}", "", "R_s", "R_p", "R_d", "k", "l", "n", "n'");
    for (name, r_s, r_m) in cases {
        let r = RateSet::derive(r_s, r_m, 10_000)?;
        println!(
            "{name:<10} {:>6.4} {:>6.4} {:>6.4} {:>6} {:>6} {:>6} {:>6}",
            r.r_s, r.r_p, r.r_d, r.k, r.l, r.n, r.n_prime
        );
        out.push(r);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> gmacwt::Result<()> {
    run().map(|_| ())
}
