use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use keller_lab::asymptotics::{self, CanonicalRational};
use keller_lab::domain::{BallNorm, CharacteristicDomain};
use keller_lab::experiment::{self, ExperimentConfig, ExperimentKind, Table};
use keller_lab::fiber::{geometric_degree, solve_fiber, FiberStatus};
use keller_lab::io::{map_to_json, read_map};
use keller_lab::metric;
use keller_lab::sampling::{Point, SEED_ENV};
use keller_lab::semigroup::{self, Side};
use keller_lab::{ExactMap, ParseError, RunError};

#[derive(Parser)]
#[command(name = "keller-lab", version, about = "Polynomial self-maps of C^2: fibers, degrees, metrics and domains")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Base seed for all random streams.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: usize,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Euclidean,
    Sup,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Isometry,
    Contraction,
    Bounds,
    DegreeMult,
    MetricAxioms,
    VolumeOracle,
}

#[derive(Subcommand)]
enum Command {
    /// Solve F(x, y) = (a, b).
    Fiber {
        #[arg(long)]
        map: PathBuf,
        /// a_re,a_im,b_re,b_im
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Estimate the geometric degree.
    Degree {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 25)]
        targets: usize,
    },
    /// Write F∘G.
    Compose {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Check det J ≡ 1 and the degree normalizations.
    Check {
        #[arg(long)]
        map: PathBuf,
        /// Also require deg_Y P = deg P and deg_Y Q = deg Q.
        #[arg(long)]
        strict: bool,
        /// Print the shear-normalized map instead.
        #[arg(long)]
        normalize: bool,
    },
    /// Substitute a canonical rational map into F.
    Asym {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        beta: u32,
        #[arg(long, default_value = "0")]
        phi: String,
    },
    /// Build a characteristic domain.
    Domain {
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        slices: usize,
        #[arg(long)]
        stars: usize,
        #[arg(long, value_enum, default_value = "euclidean")]
        norm: NormArg,
    },
    /// Estimate ρ_D(G1, G2).
    Metric {
        #[arg(long)]
        g1: PathBuf,
        #[arg(long)]
        g2: PathBuf,
        #[arg(long)]
        domain: PathBuf,
    },
    /// Injectivity probe of a composition operator.
    Probe {
        #[arg(value_enum)]
        side: SideArg,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Classify by geometric degree.
    Classify {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 25)]
        targets: usize,
    },
    /// Write the n-fold composite.
    Iterate {
        #[arg(long)]
        map: PathBuf,
        #[arg(short, long)]
        n: u32,
        #[arg(long, default_value_t = semigroup::DEFAULT_DEGREE_CAP)]
        cap: u128,
    },
    /// Run an experiment and write a CSV table.
    Experiment {
        #[arg(value_enum)]
        kind: KindArg,
        /// Map files, in the order the experiment expects.
        #[arg(long, num_args = 1..)]
        maps: Vec<PathBuf>,
        #[arg(long)]
        domain: Option<PathBuf>,
        /// Slack in combined standard errors.
        #[arg(long, default_value_t = metric::SIGMA_SLACK)]
        sigma: f64,
    },
}

fn parse_target(s: &str) -> Result<Point, ParseError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| ParseError::Target(s.into()))?;
    match v[..] {
        [a, b, c, d] => Ok((Complex64::new(a, b), Complex64::new(c, d))),
        _ => Err(ParseError::Target(s.into())),
    }
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), RunError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(ParseError::from)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn point_json(p: Point) -> serde_json::Value {
    serde_json::json!([p.0.re, p.0.im, p.1.re, p.1.im])
}

fn status(ok: bool) -> i32 {
    if ok {
        0
    } else {
        RunError::ASSERTION
    }
}

fn run(cli: Cli) -> Result<i32, RunError> {
    let g = &cli.global;
    let out = g.out.as_deref();
    match cli.command {
        Command::Fiber { map, target } => {
            let f = read_map(&map)?;
            let fiber = solve_fiber(&f, parse_target(&target)?)?;
            if fiber.status == FiberStatus::Degenerate {
                return Err(RunError::DegenerateOverflow(format!("fiber over {target}")));
            }
            let points: Vec<_> = fiber.points.iter().map(|&p| point_json(p)).collect();
            let mut t = Table::new(&["target", "count", "points", "residual_max"]);
            t.push(vec![
                target,
                fiber.count().to_string(),
                serde_json::Value::Array(points).to_string(),
                fiber.max_residual().to_string(),
            ]);
            t.emit(out)?;
            Ok(0)
        }
        Command::Degree { map, targets } => {
            let est = geometric_degree(&read_map(&map)?, targets, g.seed)?;
            let mut t = Table::new(&["d", "confident", "histogram", "n", "std_error", "seed"]);
            t.push(vec![
                est.d.to_string(),
                est.confident.to_string(),
                serde_json::to_string(&est.histogram).expect("histogram serializes"),
                est.samples.to_string(),
                "0".into(),
                g.seed.to_string(),
            ]);
            t.emit(out)?;
            Ok(0)
        }
        Command::Compose { f, g: inner } => {
            let h = read_map(&f)?.compose(&read_map(&inner)?);
            write_text(out, &(map_to_json(&h) + "\n"))?;
            Ok(0)
        }
        Command::Check { map, strict, normalize } => {
            let f = read_map(&map)?;
            if normalize {
                write_text(out, &(map_to_json(&f.normalize_by_shear()?) + "\n"))?;
                return Ok(0);
            }
            let r = f.keller_report(strict);
            let mut t = Table::new(&["det_one", "p_y_degree", "q_y_degree", "strict", "pass"]);
            t.push(vec![
                r.det_one.to_string(),
                r.p_y_degree.to_string(),
                r.q_y_degree.to_string(),
                strict.to_string(),
                r.passes().to_string(),
            ]);
            t.emit(out)?;
            Ok(status(r.passes()))
        }
        Command::Asym { map, alpha, beta, phi } => {
            let f = read_map(&map)?;
            let phi = CanonicalRational::phi_from_poly(&asymptotics::parse_poly(&phi)?)?;
            let r = CanonicalRational::validate(alpha, beta, phi)?;
            let pair = asymptotics::substitute(&f, &r);
            let mut text = format!(
                "P(R) = {}\nQ(R) = {}\npolynomial: {}\n",
                pair.first,
                pair.second,
                pair.is_polynomial()
            );
            if let Some(dual) = pair.to_map() {
                text += &map_to_json(&dual);
                text.push('\n');
            }
            write_text(out, &text)?;
            Ok(0)
        }
        Command::Domain { radius, slices, stars, norm } => {
            let norm = match norm {
                NormArg::Euclidean => BallNorm::Euclidean,
                NormArg::Sup => BallNorm::Sup,
            };
            let d = CharacteristicDomain::build(radius, slices, stars, norm)?;
            write_text(out, &(d.to_json() + "\n"))?;
            Ok(0)
        }
        Command::Metric { g1, g2, domain } => {
            let d = CharacteristicDomain::from_json(&std::fs::read_to_string(&domain).map_err(ParseError::from)?)?;
            let e = metric::rho(&read_map(&g1)?, &read_map(&g2)?, &d, g.samples, g.seed)?;
            let mut t = Table::new(&["value", "std_error", "n", "discarded", "seed", "g1_side", "g2_side", "resampled"]);
            t.push(vec![
                e.value.to_string(),
                e.std_error.to_string(),
                e.samples.to_string(),
                e.discarded.to_string(),
                e.seed.to_string(),
                e.g1_side.to_string(),
                e.g2_side.to_string(),
                e.resampled.to_string(),
            ]);
            t.emit(out)?;
            Ok(0)
        }
        Command::Probe { side, map, trials } => {
            let f = read_map(&map)?;
            let probe = match side {
                SideArg::Left => semigroup::left_injectivity_probe(&f, trials, g.seed),
                SideArg::Right => semigroup::right_injectivity_probe(&f, trials, g.seed),
            };
            let label = if probe.side == Side::Left { "left" } else { "right" };
            let mut t = Table::new(&["side", "trial", "g_degree", "h_degree", "differ", "seed"]);
            for (i, ((a, b), v)) in probe.pairs.iter().zip(&probe.verdicts).enumerate() {
                t.push(vec![
                    label.into(),
                    i.to_string(),
                    a.degree().to_string(),
                    b.degree().to_string(),
                    v.to_string(),
                    g.seed.to_string(),
                ]);
            }
            t.emit(out)?;
            if !probe.coincidences.is_empty() {
                eprintln!("{} coincidence points between colliding inputs", probe.coincidences.len());
            }
            Ok(status(probe.collisions() == 0))
        }
        Command::Classify { map, targets } => {
            let r = semigroup::primality_classify(&read_map(&map)?, targets, g.seed)?;
            let class = match r.classification {
                semigroup::Classification::Unit => "unit",
                semigroup::Classification::PrimeDegree => "prime-degree",
                semigroup::Classification::CompositeDegree => "composite-degree",
            };
            let mut t = Table::new(&["d", "classification", "n", "std_error", "seed"]);
            t.push(vec![
                r.d.to_string(),
                class.into(),
                r.estimate.samples.to_string(),
                "0".into(),
                g.seed.to_string(),
            ]);
            t.emit(out)?;
            Ok(0)
        }
        Command::Iterate { map, n, cap } => {
            let f: ExactMap = semigroup::iterate(&read_map(&map)?, n, cap)?;
            write_text(out, &(map_to_json(&f) + "\n"))?;
            Ok(0)
        }
        Command::Experiment { kind, maps, domain, sigma } => {
            let kind = match kind {
                KindArg::Isometry => ExperimentKind::Isometry,
                KindArg::Contraction => ExperimentKind::Contraction,
                KindArg::Bounds => ExperimentKind::Bounds,
                KindArg::DegreeMult => ExperimentKind::DegreeMult,
                KindArg::MetricAxioms => ExperimentKind::MetricAxioms,
                KindArg::VolumeOracle => ExperimentKind::VolumeOracle,
            };
            let cfg = ExperimentConfig {
                kind,
                maps,
                domain,
                samples: g.samples,
                seed: g.seed,
                sigma,
                out: g.out.clone(),
            };
            let outcome = experiment::run(&cfg)?;
            outcome.table.emit(cfg.out.as_deref())?;
            Ok(outcome.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(RunError::PRECONDITION as u8);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
