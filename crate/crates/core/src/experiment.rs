//! Batch runs of the coloring algorithm with optional exact comparison.

use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{color_square_convex, ColorOptions};
use crate::convexity::recognize_convex;
use crate::error::{Error, Result};
use crate::generators::{self, gen_lower_bound_h, gen_named, gen_random_biconvex, gen_random_convex};
use crate::graph::{square, BipartiteGraph};
use crate::oracle::{self, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Side sizes are drawn from `1..=max_n_a` and `1..=max_n_b`, and `B` is shuffled.
    RandomConvex { max_n_a: usize, max_n_b: usize, max_len: usize },
    RandomBiconvex { max_n_a: usize, max_n_b: usize },
    /// One trial per listed `q`.
    LowerBoundH { qs: Vec<usize> },
    /// One trial per listed `n`, giving `K_{n,n}`.
    Complete { ns: Vec<usize> },
    /// One trial per listed figure name.
    Named { names: Vec<String> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::RandomConvex { .. } => "random_convex",
            Family::RandomBiconvex { .. } => "random_biconvex",
            Family::LowerBoundH { .. } => "lower_bound_H",
            Family::Complete { .. } => "complete",
            Family::Named { .. } => "named",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family: Family,
    /// Ignored by the list-driven families.
    pub trials: usize,
    pub seed: u64,
    pub with_exact: bool,
    pub budget: u64,
}

impl ExperimentConfig {
    pub fn new(family: Family) -> Self {
        ExperimentConfig { family, trials: 1, seed: 0, with_exact: false, budget: DEFAULT_BUDGET }
    }

    pub fn trial_count(&self) -> usize {
        match &self.family {
            Family::RandomConvex { .. } | Family::RandomBiconvex { .. } => self.trials,
            Family::LowerBoundH { qs } => qs.len(),
            Family::Complete { ns } => ns.len(),
            Family::Named { names } => names.len(),
        }
    }

    /// Seed of trial `i`.
    pub fn trial_seed(&self, i: usize) -> u64 {
        self.seed.wrapping_add(i as u64)
    }

    /// The instance of trial `i`.
    pub fn instance(&self, i: usize) -> Result<BipartiteGraph> {
        let seed = self.trial_seed(i);
        match &self.family {
            &Family::RandomConvex { max_n_a, max_n_b, max_len } => {
                let mut rng = generators::rng(seed);
                let n_a = rand::Rng::gen_range(&mut rng, 1..=max_n_a.max(1));
                let n_b = rand::Rng::gen_range(&mut rng, 1..=max_n_b.max(1));
                let g = gen_random_convex(n_a, n_b, max_len, seed)?;
                let mut perm: Vec<usize> = (0..n_b).collect();
                perm.shuffle(&mut rng);
                Ok(g.permute_b(&perm))
            }
            &Family::RandomBiconvex { max_n_a, max_n_b } => {
                let mut rng = generators::rng(seed);
                let n_a = rand::Rng::gen_range(&mut rng, 1..=max_n_a.max(1));
                let n_b = rand::Rng::gen_range(&mut rng, 1..=max_n_b.max(1));
                gen_random_biconvex(n_a, n_b, seed)
            }
            Family::LowerBoundH { qs } => gen_lower_bound_h(qs[i]),
            Family::Complete { ns } => Ok(BipartiteGraph::complete(ns[i], ns[i])),
            Family::Named { names } => gen_named(&names[i]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotConvex,
    BudgetExceeded,
    InvariantViolation,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::NotConvex => "not_convex",
            Status::BudgetExceeded => "budget_exceeded",
            Status::InvariantViolation => "invariant_violation",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub id: usize,
    pub family: String,
    pub seed: u64,
    pub n_a: usize,
    pub n_b: usize,
    pub max_degree: usize,
    pub omega: Option<usize>,
    pub bound: Option<usize>,
    pub alg_palette: Option<usize>,
    pub exact_chi: Option<usize>,
    pub ratio_to_omega: Option<f64>,
    pub ratio_to_chi: Option<f64>,
    pub runtime_ms: f64,
    pub status: Status,
    /// Set when the exact oracle ran out of budget after a successful coloring.
    pub exact_budget_exceeded: bool,
}

impl ExperimentRecord {
    /// A successful run whose palette respects `floor(3 omega / 2)`.
    pub fn is_valid(&self) -> bool {
        self.status == Status::Ok
            && matches!((self.alg_palette, self.bound), (Some(p), Some(b)) if p <= b.max(1))
    }
}

fn status_of(e: &Error) -> Status {
    match e {
        Error::NotConvex => Status::NotConvex,
        Error::BudgetExceeded { .. } => Status::BudgetExceeded,
        Error::AlgorithmInvariantViolation(_) => Status::InvariantViolation,
        _ => Status::Error,
    }
}

/// Colors one instance and optionally computes its exact chromatic number.
pub fn run_instance(id: usize, family: &str, seed: u64, g: &BipartiteGraph, with_exact: bool, budget: u64) -> ExperimentRecord {
    let mut rec = ExperimentRecord {
        id,
        family: family.to_string(),
        seed,
        n_a: g.n_a(),
        n_b: g.n_b(),
        max_degree: g.max_degree(),
        omega: None,
        bound: None,
        alg_palette: None,
        exact_chi: None,
        ratio_to_omega: None,
        ratio_to_chi: None,
        runtime_ms: 0.0,
        status: Status::Ok,
        exact_budget_exceeded: false,
    };
    let start = Instant::now();
    let layout = match recognize_convex(g) {
        Ok(l) => l,
        Err(_) => {
            rec.status = Status::NotConvex;
            return rec;
        }
    };
    let opts = ColorOptions { budget, ..ColorOptions::default() };
    let report = match color_square_convex(g, &layout, &opts) {
        Ok(r) => r,
        Err(e) => {
            rec.status = status_of(&e);
            return rec;
        }
    };
    rec.runtime_ms = start.elapsed().as_secs_f64() * 1000.0;
    let palette = report.coloring.palette;
    rec.omega = Some(report.omega);
    rec.bound = Some(report.bound);
    rec.alg_palette = Some(palette);
    if report.omega > 0 {
        rec.ratio_to_omega = Some(palette as f64 / report.omega as f64);
    }
    if with_exact {
        match oracle::exact_chromatic(&square(g), budget) {
            Ok(chi) => {
                rec.exact_chi = Some(chi);
                if chi > 0 {
                    rec.ratio_to_chi = Some(palette as f64 / chi as f64);
                }
            }
            Err(_) => rec.exact_budget_exceeded = true,
        }
    }
    rec
}

/// Runs every trial, in parallel, returning records in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Vec<ExperimentRecord> {
    (0..cfg.trial_count())
        .into_par_iter()
        .map(|i| {
            let seed = cfg.trial_seed(i);
            match cfg.instance(i) {
                Ok(g) => run_instance(i, cfg.family.name(), seed, &g, cfg.with_exact, cfg.budget),
                Err(e) => ExperimentRecord {
                    id: i,
                    family: cfg.family.name().to_string(),
                    seed,
                    n_a: 0,
                    n_b: 0,
                    max_degree: 0,
                    omega: None,
                    bound: None,
                    alg_palette: None,
                    exact_chi: None,
                    ratio_to_omega: None,
                    ratio_to_chi: None,
                    runtime_ms: 0.0,
                    status: status_of(&e),
                    exact_budget_exceeded: false,
                },
            }
        })
        .collect()
}

pub const CSV_HEADER: &str = "id,family,seed,n_a,n_b,max_degree,omega,bound,alg_palette,exact_chi,ratio_to_omega,ratio_to_chi,runtime_ms,status";

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_ratio(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

pub fn csv_row(r: &ExperimentRecord) -> String {
    let status = if r.exact_budget_exceeded { "ok_exact_budget_exceeded" } else { r.status.as_str() };
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{:.3},{}",
        r.id,
        r.family,
        r.seed,
        r.n_a,
        r.n_b,
        r.max_degree,
        opt(r.omega),
        opt(r.bound),
        opt(r.alg_palette),
        opt(r.exact_chi),
        opt_ratio(r.ratio_to_omega),
        opt_ratio(r.ratio_to_chi),
        r.runtime_ms,
        status
    )
}

/// Header plus one line per record.
pub fn to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in records {
        writeln!(out, "{}", csv_row(r)).unwrap();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioStats {
    pub count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl RatioStats {
    fn of(values: impl Iterator<Item = f64>) -> Option<RatioStats> {
        let v: Vec<f64> = values.collect();
        if v.is_empty() {
            return None;
        }
        Some(RatioStats {
            count: v.len(),
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            mean: v.iter().sum::<f64>() / v.len() as f64,
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub records: usize,
    pub valid: usize,
    pub budget_exceeded: usize,
    pub failures: usize,
    pub palette_over_omega: Option<RatioStats>,
    pub palette_over_chi: Option<RatioStats>,
    pub chi_over_omega: Option<RatioStats>,
}

pub fn summarize(records: &[ExperimentRecord]) -> SweepSummary {
    let exact = || {
        records
            .iter()
            .filter_map(|r| Some((r.alg_palette?, r.exact_chi?, r.omega?)))
            .filter(|&(_, chi, omega)| chi > 0 && omega > 0)
    };
    SweepSummary {
        records: records.len(),
        valid: records.iter().filter(|r| r.is_valid()).count(),
        budget_exceeded: records
            .iter()
            .filter(|r| r.status == Status::BudgetExceeded || r.exact_budget_exceeded)
            .count(),
        failures: records
            .iter()
            .filter(|r| !matches!(r.status, Status::Ok | Status::BudgetExceeded))
            .count(),
        palette_over_omega: RatioStats::of(records.iter().filter_map(|r| r.ratio_to_omega)),
        palette_over_chi: RatioStats::of(exact().map(|(p, chi, _)| p as f64 / chi as f64)),
        chi_over_omega: RatioStats::of(exact().map(|(_, chi, omega)| chi as f64 / omega as f64)),
    }
}

/// Plain-text table of a summary.
pub fn format_summary(s: &SweepSummary) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "records={} valid={} budget_exceeded={} failures={}",
        s.records, s.valid, s.budget_exceeded, s.failures
    )
    .unwrap();
    writeln!(out, "{:<20} {:>6} {:>8} {:>8} {:>8}", "ratio", "count", "min", "mean", "max").unwrap();
    for (name, st) in [
        ("palette/omega", s.palette_over_omega),
        ("palette/chi", s.palette_over_chi),
        ("chi/omega", s.chi_over_omega),
    ] {
        match st {
            Some(st) => writeln!(
                out,
                "{name:<20} {:>6} {:>8.4} {:>8.4} {:>8.4}",
                st.count, st.min, st.mean, st.max
            )
            .unwrap(),
            None => writeln!(out, "{name:<20} {:>6} {:>8} {:>8} {:>8}", 0, "-", "-", "-").unwrap(),
        }
    }
    out
}
