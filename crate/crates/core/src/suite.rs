//! Named check suites over parameter grids, and report serialization.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::charnum::{check_s_d_pa, check_s_d_projective, check_um_coefficient};
use crate::equivariant::{
    check_fiber_probe, check_fixed_point_models, check_pq_niceness, check_s_niceness,
};
use crate::error::{Error, Result};
use crate::moves::run_full_chain;
use crate::report::{CheckReport, Status};
use crate::symbol_chain::{
    default_field_order, forms_sampled_check, lemma16_check, p2_norm_form_check,
    psi1_symbolic_check, tower_form_sampled_check,
};
use crate::towers::{
    check_dims, cor22_check, crosscheck_degree_paths, thm16_pipeline, verify_cor_rtoch,
    verify_lem19, verify_lemma12, verify_part6_n2, verify_rem_indep,
};

pub const SUITES: &[&str] = &[
    "coefficient",
    "sd",
    "chow",
    "lemma12",
    "pipeline",
    "algebra",
    "forms",
    "moves",
    "equivariant",
    "dims",
    "fiber-probe",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    JsonLines,
    Table,
}

/// Everything that determines a run. Identical configs give identical
/// reports, apart from `runtime_ms` when `timings` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub suites: Vec<String>,
    pub p: Vec<u64>,
    pub n: Vec<u32>,
    pub r: Vec<u32>,
    pub m: Vec<u32>,
    /// Field order for sampled checks; defaults per `p`.
    pub field: Option<u64>,
    pub samples: usize,
    pub seed: u64,
    pub capacity: u64,
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            p: vec![3],
            n: vec![2, 3],
            r: vec![1, 2, 3],
            m: vec![1, 2, 3],
            field: None,
            samples: 100,
            seed: 0,
            capacity: 1 << 24,
            timings: false,
        }
    }
}

type Job = Box<dyn Fn() -> CheckReport + Send + Sync>;

fn jobs_for(suite: &str, c: &SuiteConfig) -> Result<Vec<Job>> {
    let mut jobs: Vec<Job> = Vec::new();
    let cap = c.capacity;
    let (samples, seed) = (c.samples, c.seed);
    match suite {
        "coefficient" => {
            for &p in &c.p {
                for &m in &c.m {
                    jobs.push(Box::new(move || check_um_coefficient(p, m)));
                }
            }
        }
        "sd" => {
            for &p in &c.p {
                for &n in c.n.iter().filter(|&&n| n >= 2) {
                    jobs.push(Box::new(move || check_s_d_pa(p, n)));
                }
                jobs.push(Box::new(move || check_s_d_projective(30, p)));
            }
        }
        "chow" => {
            for &p in &c.p {
                jobs.push(Box::new(move || verify_part6_n2(p, cap)));
                for &n in c.n.iter().filter(|&&n| n >= 2) {
                    jobs.push(Box::new(move || cor22_check(p, n)));
                }
            }
        }
        "lemma12" => {
            for &p in &c.p {
                for &n in c.n.iter().filter(|&&n| n >= 2) {
                    jobs.push(Box::new(move || verify_lemma12(p, n)));
                    jobs.push(Box::new(move || verify_cor_rtoch(p, n)));
                    jobs.push(Box::new(move || crosscheck_degree_paths(p, n, cap)));
                }
            }
        }
        "pipeline" => {
            for &p in &c.p {
                for &n in c.n.iter().filter(|&&n| n >= 2) {
                    jobs.push(Box::new(move || thm16_pipeline(p, n, cap)));
                }
            }
        }
        "algebra" => {
            for &p in &c.p {
                for &r in &c.r {
                    jobs.push(Box::new(move || verify_lem19(p, r)));
                    jobs.push(Box::new(move || verify_rem_indep(p, r, p * p - p, p)));
                }
            }
        }
        "forms" => {
            for &p in &c.p {
                let q = c.field.unwrap_or_else(|| default_field_order(p));
                let q_tower = c.field.unwrap_or(13);
                let r_max = c.r.iter().copied().max().unwrap_or(1);
                jobs.push(Box::new(move || psi1_symbolic_check(p)));
                jobs.push(Box::new(move || {
                    forms_sampled_check(p, q, r_max, samples, seed)
                }));
                jobs.push(Box::new(move || {
                    tower_form_sampled_check(p, q_tower, r_max, samples, seed)
                }));
                jobs.push(Box::new(move || lemma16_check(p, q)));
            }
            jobs.push(Box::new(move || p2_norm_form_check(samples, seed)));
        }
        "moves" => {
            for &p in &c.p {
                for &n in c.n.iter().filter(|&&n| n >= 2) {
                    jobs.push(Box::new(move || run_full_chain(p, n as usize).1));
                }
            }
        }
        "equivariant" => {
            for &p in &c.p {
                for &n in c.n.iter().filter(|&&n| n >= 2) {
                    jobs.push(Box::new(move || check_s_niceness(p, n as usize)));
                }
                for &r in &c.r {
                    jobs.push(Box::new(move || check_pq_niceness(p, r as usize)));
                }
                jobs.push(Box::new(move || check_fixed_point_models(p, 2)));
            }
        }
        "dims" => {
            for &p in &c.p {
                for &n in c.n.iter().filter(|&&n| n >= 2) {
                    for &r in c.r.iter().filter(|&&r| r >= 1) {
                        jobs.push(Box::new(move || check_dims(p, n, r)));
                    }
                }
            }
        }
        "fiber-probe" => {
            let q = c.field.unwrap_or(7);
            jobs.push(Box::new(move || {
                check_fiber_probe(q, q - 1, samples.min(8), seed)
            }));
        }
        other => return Err(Error::UnknownSuite(other.to_string())),
    }
    Ok(jobs)
}

/// Runs the configured suites in parallel and returns the reports in
/// canonical order.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut jobs: Vec<(String, Job)> = Vec::new();
    for s in &config.suites {
        for j in jobs_for(s, config)? {
            jobs.push((s.clone(), j));
        }
    }
    let timings = config.timings;
    let mut reports: Vec<CheckReport> = jobs
        .par_iter()
        .map(|(suite, job)| {
            let start = Instant::now();
            let mut r = job();
            r.suite = suite.clone();
            r.runtime_ms = timings.then(|| start.elapsed().as_millis() as u64);
            r
        })
        .collect();
    reports.sort_by_key(|r| r.sort_key());
    Ok(reports)
}

/// Nonzero iff some report failed.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}

pub fn emit_report(reports: &[CheckReport], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::JsonLines => {
            for r in reports {
                let line = serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?;
                writeln!(out, "{line}")?;
            }
        }
        Format::Table => {
            let mut sorted: Vec<&CheckReport> = reports.iter().collect();
            sorted.sort_by_key(|r| r.sort_key());
            writeln!(
                out,
                "{:<20} {:<12} {:<28} {:<32} {:<20} computed",
                "status", "suite", "check", "params", "citation"
            )?;
            for r in sorted {
                let params: Vec<String> =
                    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let mut line = format!(
                    "{:<20} {:<12} {:<28} {:<32} {:<20} {}",
                    r.status.to_string(),
                    r.suite,
                    r.check,
                    params.join(","),
                    r.citation,
                    r.computed
                );
                if let Some(ms) = r.runtime_ms {
                    line.push_str(&format!(" [{ms} ms]"));
                }
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(())
}

/// Parses json-lines output back into reports.
pub fn parse_json_lines(text: &str) -> Result<Vec<CheckReport>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })
        })
        .collect()
}
