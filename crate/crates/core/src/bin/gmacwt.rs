use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gmacwt::channel::Tap;
use gmacwt::ensembles::{presets, puncturing_rate, puncturing_to_string, random_puncturing, Ensemble, PuncturingAnnotation, PuncturingDistribution};
use gmacwt::exit::ExitSystem;
use gmacwt::harness::config::{ensemble_from_spec, puncturing_from_spec};
use gmacwt::harness::{self, ExperimentConfig};
use gmacwt::optimizer::{alternate, OptimizerConfig, Schedule};

#[derive(Parser)]
#[command(name = "gmacwt", version, about = "Punctured LDPC secrecy coding for the Gaussian multiple-access wiretap channel")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scenario {
    Equal,
    Unequal,
}

#[derive(clap::Args)]
struct SystemArgs {
    /// Preset ensembles and powers.
    #[arg(long, value_enum, default_value = "equal")]
    scenario: Scenario,
    /// Mother ensembles (file or preset:NAME), overriding the scenario.
    #[arg(long, num_args = 2)]
    ensembles: Option<Vec<String>>,
    /// Transmit powers, overriding the scenario.
    #[arg(long, num_args = 2)]
    powers: Option<Vec<f64>>,
}

impl SystemArgs {
    fn resolve(&self) -> gmacwt::Result<([Ensemble; 2], [f64; 2])> {
        let (ens, p) = match self.scenario {
            Scenario::Equal => ([presets::equal_power_mother(), presets::equal_power_mother()], [1.0, 1.0]),
            Scenario::Unequal => (
                [presets::unequal_power_mother_user1(), presets::unequal_power_mother_user2()],
                [1.5, 0.5],
            ),
        };
        let ens = match &self.ensembles {
            Some(v) => [ensemble_from_spec(&v[0], Path::new("."))?, ensemble_from_spec(&v[1], Path::new("."))?],
            None => ens,
        };
        let p = self.powers.as_ref().map_or(p, |v| [v[0], v[1]]);
        Ok((ens, p))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Optimise puncturing distributions and write them as files.
    Design {
        #[command(flatten)]
        system: SystemArgs,
        /// Target noise standard deviation.
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long, default_value_t = 20)]
        max_rounds: usize,
        /// Design the users in turn instead of letting the tool choose.
        #[arg(long)]
        sequential: bool,
        /// Output files are OUT_user1.toml and OUT_user2.toml.
        #[arg(long, default_value = "pi")]
        out: PathBuf,
    },
    /// EXIT decoding threshold of a pair of punctured ensembles.
    Threshold {
        #[command(flatten)]
        system: SystemArgs,
        /// Puncturing distributions (file, preset:NAME or none).
        #[arg(long, num_args = 2)]
        puncturing: Option<Vec<String>>,
        /// Puncture every degree with this fraction instead.
        #[arg(long, conflicts_with = "puncturing")]
        random: Option<f64>,
        #[arg(long, default_value_t = gmacwt::exit::THRESHOLD_LO)]
        lo: f64,
        #[arg(long, default_value_t = gmacwt::exit::THRESHOLD_HI)]
        hi: f64,
    },
    /// Monte Carlo BER sweep of an experiment configuration.
    Sweep {
        config: PathBuf,
        /// CSV output; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_frames: Option<u64>,
        #[arg(long)]
        min_errors: Option<u64>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Security gaps (and optionally SNR losses) from sweep CSVs.
    Gap {
        /// CSV files holding Bob and Eve curves.
        csv: Vec<PathBuf>,
        #[arg(long, default_value_t = 1e-4)]
        pb: f64,
        #[arg(long, default_value_t = 0.45)]
        pe: f64,
        /// Scenario whose Bob curves serve as the SNR-loss baseline.
        #[arg(long)]
        baseline: Option<String>,
    },
    /// Achieved sum secrecy rate against the Gaussian sum-rate proxy.
    Region {
        #[arg(long, num_args = 2, default_values_t = [1.0, 1.0])]
        powers: Vec<f64>,
        #[arg(long)]
        sigma2_bob: f64,
        #[arg(long)]
        sigma2_eve: f64,
        #[arg(long, num_args = 2)]
        rates: Vec<f64>,
    },
}

fn design(system: &SystemArgs, sigma: Option<f64>, max_rounds: usize, sequential: bool, out: &Path) -> gmacwt::Result<()> {
    let (ens, p) = system.resolve()?;
    let sigma = sigma.unwrap_or(match system.scenario {
        Scenario::Equal => presets::EQUAL_POWER_DESIGN_SIGMA,
        Scenario::Unequal => presets::UNEQUAL_POWER_DESIGN_SIGMA,
    });
    let mut cfg = OptimizerConfig::default();
    if sequential {
        cfg.schedule = Schedule::Sequential;
    }
    let res = alternate([&ens[0], &ens[1]], p, sigma, max_rounds, &cfg)?;
    println!("rounds {}  converged {}  non-monotone {}", res.rounds, res.converged, res.non_monotone);
    if let Some(s) = res.scaled {
        println!("final pair scaled by {s:.4} to pass joint verification");
    }
    for j in 0..2 {
        let note = PuncturingAnnotation { sigma_target: Some(sigma), puncturing_rate: Some(res.rates[j]) };
        let path = PathBuf::from(format!("{}_user{}.toml", out.display(), j + 1));
        std::fs::write(&path, puncturing_to_string(&res.pi[j], &note))?;
        println!("user {}: R_p = {:.4} -> {}", j + 1, res.rates[j], path.display());
    }
    Ok(())
}

fn threshold(system: &SystemArgs, puncturing: Option<&[String]>, random: Option<f64>, lo: f64, hi: f64) -> gmacwt::Result<()> {
    let (ens, p) = system.resolve()?;
    let pi: [PuncturingDistribution; 2] = match (puncturing, random) {
        (Some(v), _) => {
            let one = |s: &str| {
                if s == "none" {
                    Ok(PuncturingDistribution::zero())
                } else {
                    puncturing_from_spec(s, Path::new("."))
                }
            };
            [one(&v[0])?, one(&v[1])?]
        }
        (None, Some(r)) => [random_puncturing(r, &ens[0])?, random_puncturing(r, &ens[1])?],
        (None, None) => [PuncturingDistribution::zero(), PuncturingDistribution::zero()],
    };
    for j in 0..2 {
        println!("user {}: R = {:.4}  R_p = {:.4}", j + 1, ens[j].code_rate(), puncturing_rate(&pi[j], &ens[j])?);
    }
    let sys = ExitSystem::new([&ens[0], &ens[1]], [&pi[0], &pi[1]], p)?;
    let s = sys.threshold_in(lo, hi)?;
    println!("threshold sigma = {s:.4}  (sigma^2 = {:.4})", s * s);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    config: &Path,
    out: Option<&Path>,
    threads: Option<usize>,
    seed: Option<u64>,
    max_frames: Option<u64>,
    min_errors: Option<u64>,
    cache_dir: Option<PathBuf>,
) -> gmacwt::Result<()> {
    let mut cfg = ExperimentConfig::load(config)?;
    cfg.threads = threads.or(cfg.threads);
    cfg.seed = seed.unwrap_or(cfg.seed);
    cfg.max_frames = max_frames.unwrap_or(cfg.max_frames);
    cfg.min_errors = min_errors.unwrap_or(cfg.min_errors);
    if cache_dir.is_some() {
        cfg.cache_dir = cache_dir;
    }
    cfg.validate()?;
    let curves = harness::run_sweep(&cfg)?;
    match out {
        Some(path) => harness::write_curves(&curves, std::fs::File::create(path)?),
        None => harness::write_curves(&curves, std::io::stdout().lock()),
    }
}

fn gap(csv: &[PathBuf], pb: f64, pe: f64, baseline: Option<&str>) -> gmacwt::Result<()> {
    let mut curves = Vec::new();
    for path in csv {
        curves.extend(harness::read_curves_file(path)?);
    }
    let find = |scenario: &str, user: usize, tap: Tap| {
        curves.iter().find(|c| c.scenario == scenario && c.user == user && c.tap == tap)
    };
    let mut seen = Vec::new();
    for c in &curves {
        let key = (c.scenario.clone(), c.user);
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let label = format!("{} user {}", c.scenario, c.user);
        if let (Some(b), Some(e)) = (find(&c.scenario, c.user, Tap::Bob), find(&c.scenario, c.user, Tap::Eve)) {
            match harness::security_gap(b, e, pb, pe) {
                Ok(g) => println!(
                    "{label}: sigma2_Bmax {:.4}  sigma2_Emin {:.4}  gap {:.2} dB",
                    g.sigma2_b_max, g.sigma2_e_min, g.gap_db
                ),
                Err(err) => println!("{label}: gap unavailable ({err})"),
            }
        }
        if let (Some(name), Some(b)) = (baseline, find(&c.scenario, c.user, Tap::Bob)) {
            if name != c.scenario {
                if let Some(base) = find(name, c.user, Tap::Bob) {
                    match harness::snr_loss(b, base, pb) {
                        Ok(l) => println!("{label}: SNR loss vs {name} {l:.2} dB"),
                        Err(err) => println!("{label}: SNR loss unavailable ({err})"),
                    }
                }
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> gmacwt::Result<()> {
    match cli.cmd {
        Cmd::Design { system, sigma, max_rounds, sequential, out } => design(&system, sigma, max_rounds, sequential, &out),
        Cmd::Threshold { system, puncturing, random, lo, hi } => threshold(&system, puncturing.as_deref(), random, lo, hi),
        Cmd::Sweep { config, out, threads, seed, max_frames, min_errors, cache_dir } => {
            sweep(&config, out.as_deref(), threads, seed, max_frames, min_errors, cache_dir)
        }
        Cmd::Gap { csv, pb, pe, baseline } => gap(&csv, pb, pe, baseline.as_deref()),
        Cmd::Region { powers, sigma2_bob, sigma2_eve, rates } => {
            let r = harness::sum_rate_comparison(powers[0], powers[1], sigma2_bob, sigma2_eve, [rates[0], rates[1]])?;
            println!("{}", harness::SUM_RATE_LABEL);
            println!("bound {:.4} bits  achieved {:.4} bits  gap {:.4} bits", r.bound, r.achieved, r.gap);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
