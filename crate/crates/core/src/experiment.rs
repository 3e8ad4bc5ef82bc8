//! Experiment orchestration for the command-line tool: configuration,
//! execution and CSV tables. Every numeric row carries the seed, the sample
//! count and a standard error, and identical configurations produce
//! byte-identical output.

use std::path::{Path, PathBuf};

use crate::domain::{BallNorm, CharacteristicDomain, Region};
use crate::error::{ParseError, RunError};
use crate::fiber::{geometric_degree, DEFAULT_TARGETS};
use crate::io::read_map;
use crate::map::ExactMap;
use crate::metric::{self, combined_sigma, MetricEstimate};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Isometry,
    Contraction,
    Bounds,
    DegreeMult,
    MetricAxioms,
    VolumeOracle,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Isometry => "isometry",
            ExperimentKind::Contraction => "contraction",
            ExperimentKind::Bounds => "bounds",
            ExperimentKind::DegreeMult => "degree-mult",
            ExperimentKind::MetricAxioms => "metric-axioms",
            ExperimentKind::VolumeOracle => "volume-oracle",
        }
    }

    /// Accepted numbers of map files.
    fn arity(self) -> std::ops::RangeInclusive<usize> {
        match self {
            ExperimentKind::Isometry | ExperimentKind::Contraction | ExperimentKind::MetricAxioms => 3..=3,
            ExperimentKind::Bounds | ExperimentKind::VolumeOracle => 1..=1,
            ExperimentKind::DegreeMult => 1..=2,
        }
    }
}

/// Domain used when the configuration names no domain file.
pub const DEFAULT_DOMAIN: (f64, usize, usize) = (1.0, 3, 10);

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub maps: Vec<PathBuf>,
    pub domain: Option<PathBuf>,
    pub samples: usize,
    pub seed: u64,
    /// Slack on stochastic inequalities, in combined standard errors.
    pub sigma: f64,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, maps: Vec<PathBuf>) -> Self {
        Self {
            kind,
            maps,
            domain: None,
            samples: 100_000,
            seed: 0,
            sigma: metric::SIGMA_SLACK,
            out: None,
        }
    }
}

/// A CSV table held in memory.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    /// Writes to `out`, or to stdout when `out` is `None`.
    pub fn emit(&self, out: Option<&Path>) -> Result<(), ParseError> {
        match out {
            Some(p) => std::fs::write(p, self.to_csv())?,
            None => print!("{}", self.to_csv()),
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub table: Table,
    pub passed: bool,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            RunError::ASSERTION
        }
    }
}

fn load_domain(path: Option<&Path>) -> Result<CharacteristicDomain, RunError> {
    match path {
        Some(p) => Ok(CharacteristicDomain::from_json(&std::fs::read_to_string(p).map_err(ParseError::from)?)?),
        None => {
            let (r, slices, stars) = DEFAULT_DOMAIN;
            Ok(CharacteristicDomain::build(r, slices, stars, BallNorm::Euclidean)?)
        }
    }
}

fn b(v: bool) -> String {
    v.to_string()
}

fn f(v: f64) -> String {
    v.to_string()
}

fn estimate_row(label: &str, e: &MetricEstimate, pass: bool) -> Vec<String> {
    vec![
        label.into(),
        f(e.value),
        f(e.std_error),
        e.samples.to_string(),
        e.discarded.to_string(),
        e.seed.to_string(),
        b(pass),
    ]
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    if !cfg.kind.arity().contains(&cfg.maps.len()) {
        return Err(RunError::Precondition(format!(
            "experiment {} takes {:?} map files, got {}",
            cfg.kind.name(),
            cfg.kind.arity(),
            cfg.maps.len()
        )));
    }
    let maps: Vec<ExactMap> = cfg.maps.iter().map(|p| read_map(p)).collect::<Result<_, _>>()?;
    let (n, seed, k) = (cfg.samples, cfg.seed, cfg.sigma);
    match cfg.kind {
        ExperimentKind::Isometry | ExperimentKind::Contraction => {
            let d = load_domain(cfg.domain.as_deref())?;
            let (fm, g1, g2) = (&maps[0], &maps[1], &maps[2]);
            let d_f = geometric_degree(fm, DEFAULT_TARGETS, seed)?.d;
            let jac = fm.jacobian_det();
            if cfg.kind == ExperimentKind::Isometry && (!jac.is_constant() || jac.is_zero() || d_f != 1) {
                return Err(RunError::Precondition("isometry needs an automorphism F".into()));
            }
            let before = metric::rho(g1, g2, &d, n, seed)?;
            let after = metric::rho(&fm.compose(g1), &fm.compose(g2), &d, n, seed)?;
            let sigma = combined_sigma(before.std_error, after.std_error);
            let diff = after.value - before.value;
            let ratio = if before.value == 0.0 && after.value == 0.0 {
                1.0
            } else {
                after.value / before.value
            };
            let pass = if cfg.kind == ExperimentKind::Isometry {
                diff.abs() <= k * sigma
            } else {
                diff <= k * sigma
            };
            let mut t = Table::new(&[
                "experiment", "rho_before", "rho_after", "ratio", "difference", "std_error", "n", "discarded", "d_f", "seed", "pass",
            ]);
            t.push(vec![
                cfg.kind.name().into(),
                f(before.value),
                f(after.value),
                f(ratio),
                f(diff),
                f(sigma),
                n.to_string(),
                (before.discarded + after.discarded).to_string(),
                d_f.to_string(),
                seed.to_string(),
                b(pass),
            ]);
            Ok(RunOutcome { table: t, passed: pass })
        }
        ExperimentKind::Bounds => {
            let d = load_domain(cfg.domain.as_deref())?;
            let fm = &maps[0];
            if !fm.keller_report(false).det_one {
                return Err(RunError::Precondition("det J_F is not identically 1".into()));
            }
            let region_vol = d.volume();
            let (image_vol, se) = metric::image_volume(fm, &d, n, seed)?;
            let d_f = geometric_degree(fm, DEFAULT_TARGETS, seed)?.d;
            let upper = image_vol <= region_vol + k * se;
            let lower = region_vol <= d_f as f64 * (image_vol + k * se);
            let mut t = Table::new(&["region_vol", "image_vol", "std_error", "d_f", "upper_holds", "lower_holds", "n", "seed", "pass"]);
            t.push(vec![
                f(region_vol),
                f(image_vol),
                f(se),
                d_f.to_string(),
                b(upper),
                b(lower),
                n.to_string(),
                seed.to_string(),
                b(upper && lower),
            ]);
            Ok(RunOutcome { table: t, passed: upper && lower })
        }
        ExperimentKind::DegreeMult => {
            let single = maps.len() == 1;
            let fm = &maps[0];
            let gm = maps.get(1).unwrap_or(fm);
            let d_f = geometric_degree(fm, DEFAULT_TARGETS, seed)?.d;
            let d_g = if single { d_f } else { geometric_degree(gm, DEFAULT_TARGETS, seed)?.d };
            let d_fg = geometric_degree(&fm.compose(gm), DEFAULT_TARGETS, seed)?.d;
            let pass = d_fg == d_f * d_g;
            let mut t = if single {
                Table::new(&["d_f", "d_ff", "product", "n", "std_error", "seed", "pass"])
            } else {
                Table::new(&["d_f", "d_g", "d_fg", "product", "n", "std_error", "seed", "pass"])
            };
            let mut row = vec![d_f.to_string()];
            if !single {
                row.push(d_g.to_string());
            }
            row.extend([
                d_fg.to_string(),
                (d_f * d_g).to_string(),
                DEFAULT_TARGETS.to_string(),
                f(0.0),
                seed.to_string(),
                b(pass),
            ]);
            t.push(row);
            Ok(RunOutcome { table: t, passed: pass })
        }
        ExperimentKind::MetricAxioms => {
            let d = load_domain(cfg.domain.as_deref())?;
            let (g1, g2, g3) = (&maps[0], &maps[1], &maps[2]);
            let zero = metric::rho(g1, g1, &d, n, seed)?;
            let r12 = metric::rho(g1, g2, &d, n, seed)?;
            let r21 = metric::rho(g2, g1, &d, n, seed)?;
            let r23 = metric::rho(g2, g3, &d, n, seed)?;
            let r13 = metric::rho(g1, g3, &d, n, seed)?;
            let identity = zero.value == 0.0;
            let symmetric = r12.value == r21.value && r12.std_error == r21.std_error;
            let slack = k * (r13.std_error.powi(2) + r12.std_error.powi(2) + r23.std_error.powi(2)).sqrt();
            let triangle = r13.value <= r12.value + r23.value + slack;
            let mut t = Table::new(&["check", "value", "std_error", "n", "discarded", "seed", "pass"]);
            t.push(estimate_row("rho(g1,g1)", &zero, identity));
            t.push(estimate_row("rho(g1,g2)", &r12, symmetric));
            t.push(estimate_row("rho(g2,g1)", &r21, symmetric));
            t.push(estimate_row("rho(g2,g3)", &r23, triangle));
            t.push(estimate_row("rho(g1,g3)", &r13, triangle));
            Ok(RunOutcome {
                table: t,
                passed: identity && symmetric && triangle,
            })
        }
        ExperimentKind::VolumeOracle => {
            let d = load_domain(cfg.domain.as_deref())?;
            let g = &maps[0];
            let report = metric::mult_volume(g, &d, n, seed)?;
            let (count_vol, count_se) = metric::mult_volume_by_counting(g, &d, n, seed)?;
            let sigma = combined_sigma(report.mult_std_error, count_se);
            let pass = (report.mult_vol - count_vol).abs() <= k * sigma;
            let mut t = Table::new(&[
                "mult_vol",
                "mult_std_error",
                "count_vol",
                "count_std_error",
                "geometric_vol",
                "geometric_std_error",
                "excess",
                "std_error",
                "n",
                "discarded",
                "seed",
                "pass",
            ]);
            t.push(vec![
                f(report.mult_vol),
                f(report.mult_std_error),
                f(count_vol),
                f(count_se),
                f(report.geometric_vol),
                f(report.geometric_std_error),
                f(report.excess),
                f(sigma),
                n.to_string(),
                report.discarded.to_string(),
                seed.to_string(),
                b(pass),
            ]);
            Ok(RunOutcome { table: t, passed: pass })
        }
    }
}
