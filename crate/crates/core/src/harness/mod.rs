//! Named verification suites and their reports.

mod random;
mod suites;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub use random::*;

pub const SUITES: &[&str] = &[
    "prop-ls-sp",
    "prop-ls-so",
    "cocycle-table",
    "proof-chain",
    "hilbert-laws",
    "weil-oracle",
    "bruhat",
    "levi-cover",
    "mp-associativity",
];

/// Every public operation a full run is expected to exercise.
pub const ALL_OPS: &[&str] = &[
    "square_class",
    "hilbert",
    "weil_index_oracle",
    "weil_index",
    "normalized_weil_index",
    "diagonalize",
    "invariants",
    "witt_equivalent",
    "weil_index_form",
    "kashiwara_form",
    "generator",
    "bruhat_decompose",
    "x_function",
    "cocycle_word",
    "cocycle_leray",
    "mp_multiply",
    "mp_invert",
    "lift_word",
    "ml_multiply",
    "wM_word",
    "root_vector",
    "exp_nilpotent",
    "ls_representative",
    "target_representative",
    "orth_space",
    "so_generator",
    "max_isotropic_dim",
    "run_suite",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub n_max: usize,
    /// Inclusive bounds on `k`, intersected with `1..=n`.
    pub k_range: Option<(usize, usize)>,
    pub primes: Vec<u64>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            n_max: 4,
            k_range: None,
            primes: vec![2, 3, 5],
            trials: 500,
            seed: 0,
        }
    }
}

impl SuiteParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_max == 0 {
            return Err(Error::Domain("n_max must be at least 1".into()));
        }
        if self.primes.is_empty() {
            return Err(Error::Domain("at least one prime is required".into()));
        }
        if let Some(&p) = self.primes.iter().find(|&&p| !crate::scalars::is_prime(p)) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(())
    }

    pub(crate) fn ks(&self, n: usize) -> impl Iterator<Item = usize> {
        let (lo, hi) = self.k_range.unwrap_or((1, n));
        lo.max(1)..=hi.min(n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub suite: String,
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: SuiteParams,
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
    pub pass: bool,
    pub ops: BTreeSet<String>,
    /// Wall-clock time; kept out of the JSON form so reports are
    /// reproducible byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for VerificationReport {
    fn eq(&self, other: &Self) -> bool {
        self.suite == other.suite
            && self.params == other.params
            && self.cases == other.cases
            && self.summary == other.summary
            && self.pass == other.pass
            && self.ops == other.ops
    }
}

impl VerificationReport {
    pub fn new(suite: &str, params: SuiteParams, cases: Vec<CaseRecord>, ops: BTreeSet<String>) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        let summary = Summary {
            total: cases.len(),
            passed,
            failed: cases.len() - passed,
        };
        Self {
            suite: suite.to_string(),
            params,
            pass: summary.failed == 0,
            cases,
            summary,
            ops,
            elapsed: Duration::ZERO,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

/// A deferred case: its key and the closure computing it.
pub(crate) struct Job {
    pub suite: &'static str,
    /// Position within its suite, fixed by the plan.
    pub index: usize,
    pub run: Box<dyn Fn(&mut ChaCha8Rng) -> CaseRecord + Send + Sync>,
}

pub(crate) struct SuitePlan {
    pub jobs: Vec<Job>,
    pub ops: &'static [&'static str],
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<VerificationReport> {
    params.validate()?;
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        other if SUITES.contains(&other) => vec![other],
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    let start = Instant::now();
    let mut jobs = Vec::new();
    let mut ops = BTreeSet::new();
    for n in names {
        let plan = suites::plan(n, params);
        ops.extend(plan.ops.iter().map(|s| s.to_string()));
        jobs.extend(plan.jobs);
    }
    ops.insert("run_suite".to_string());
    let seed = params.seed;
    let cases: Vec<CaseRecord> = jobs
        .par_iter()
        .map(|job| {
            let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, job.suite, job.index));
            (job.run)(&mut rng)
        })
        .collect();
    let mut report = VerificationReport::new(name, params.clone(), cases, ops);
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Mixes the run seed with the suite name and case position.
fn case_seed(seed: u64, suite: &str, index: usize) -> u64 {
    let tag = suite
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x1000_0000_01b3));
    seed ^ tag.rotate_left(17) ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn render_report(r: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(r),
    }
}

fn render_params(p: &BTreeMap<String, Value>) -> String {
    p.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "suite {}  n_max={} primes={:?} trials={} seed={}",
        r.suite, r.params.n_max, r.params.primes, r.params.trials, r.params.seed
    );
    for c in &r.cases {
        let mark = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{mark}  {:<18} {:<28} {}", c.suite, c.name, render_params(&c.params));
        if !c.pass {
            let _ = writeln!(out, "      expected: {}", c.expected);
            let _ = writeln!(out, "      computed: {}", c.computed);
            if let Some(d) = &c.diagnostic {
                let _ = writeln!(out, "      diagnostic: {d}");
            }
        }
    }
    let _ = writeln!(
        out,
        "{} cases, {} passed, {} failed in {:.2}s: {}",
        r.summary.total,
        r.summary.passed,
        r.summary.failed,
        r.elapsed.as_secs_f64(),
        if r.pass { "PASS" } else { "FAIL" }
    );
    out
}
