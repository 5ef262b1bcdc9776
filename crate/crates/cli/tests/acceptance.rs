//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use mpcore::harness::{run_suite, SuiteParams, VerificationReport};

const PRIMES: &[u64] = &[2, 3, 5];

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    check: fn() -> Result<String, String>,
}

fn params(n_max: usize, primes: &[u64]) -> SuiteParams {
    SuiteParams {
        n_max,
        primes: primes.to_vec(),
        ..SuiteParams::default()
    }
}

fn suite(name: &str, p: &SuiteParams) -> Result<VerificationReport, String> {
    run_suite(name, p).map_err(|e| e.to_string())
}

fn all_pass(r: &VerificationReport) -> Result<(), String> {
    match r.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!(
            "{} failing; first: {} {:?} expected {} computed {} ({})",
            r.summary.failed,
            c.name,
            c.params,
            c.expected,
            c.computed,
            c.diagnostic.as_deref().unwrap_or("")
        )),
    }
}

/// Requires a passing case with this name and at least `samples` checks.
fn has_case(r: &VerificationReport, name: &str, samples: usize) -> Result<(), String> {
    let found: Vec<_> = r.cases.iter().filter(|c| c.name == name).collect();
    if found.is_empty() {
        return Err(format!("no {name} case"));
    }
    for c in found {
        let n = c.params.get("samples").or_else(|| c.params.get("checks"));
        if !c.pass || n.and_then(|v| v.as_u64()).unwrap_or(u64::MAX) < samples as u64 {
            return Err(format!("{name}: {:?} {}", c.params, c.computed));
        }
    }
    Ok(())
}

fn ls_sp() -> Result<String, String> {
    let r = suite("prop-ls-sp", &params(4, PRIMES))?;
    all_pass(&r)?;
    let pairs = r.cases.iter().filter(|c| c.name == "ls-equals-target").count();
    if pairs != 10 * PRIMES.len() {
        return Err(format!("expected 30 (n, k, p) cases, found {pairs}"));
    }
    Ok(format!("{pairs} (n,k,p) cases exact"))
}

fn ls_so() -> Result<String, String> {
    let r = suite("prop-ls-so", &params(4, PRIMES))?;
    all_pass(&r)?;
    Ok(format!("{} cases exact", r.summary.total))
}

fn table() -> Result<String, String> {
    let r = suite("cocycle-table", &params(3, &[2, 3, 5, 7]))?;
    all_pass(&r)?;
    has_case(&r, "word-backend", 1)?;
    let checks: u64 = r.cases.iter().filter_map(|c| c.params["checks"].as_u64()).sum();
    Ok(format!("{checks} entries exact"))
}

fn chain() -> Result<String, String> {
    let r = suite("proof-chain", &params(4, PRIMES))?;
    all_pass(&r)?;
    for name in ["v-closed-form", "z-closed-form", "v-z-commute", "z-product", "v-product", "v-tail-cocycle"] {
        has_case(&r, name, 1)?;
    }
    Ok(format!("{} cases exact", r.summary.total))
}

fn hilbert() -> Result<String, String> {
    let r = suite("hilbert-laws", &params(4, PRIMES))?;
    all_pass(&r)?;
    has_case(&r, "symmetry", 1)?;
    has_case(&r, "bimultiplicativity", 1)?;
    has_case(&r, "product-formula", 1000)?;
    Ok(format!("{} cases exact", r.summary.total))
}

fn weil() -> Result<String, String> {
    let r = suite("weil-oracle", &params(4, PRIMES))?;
    all_pass(&r)?;
    for c in r.cases.iter().filter(|c| c.name == "closed-vs-oracle") {
        if c.params["residual_below_1e-6"] != true {
            return Err(format!("oracle residual too large at {:?}", c.params));
        }
    }
    has_case(&r, "normalized-vs-hilbert", 1)?;
    has_case(&r, "space-epsilon", 1)?;
    Ok(format!("{} cases exact", r.summary.total))
}

fn bruhat() -> Result<String, String> {
    let r = suite("bruhat", &params(4, PRIMES))?;
    all_pass(&r)?;
    has_case(&r, "reconstruction", 1000)?;
    has_case(&r, "x-invariance", 200)?;
    Ok(format!("{} cases exact", r.summary.total))
}

fn cover() -> Result<String, String> {
    let p = params(4, PRIMES);
    let levi = suite("levi-cover", &p)?;
    let assoc = suite("mp-associativity", &p)?;
    all_pass(&levi)?;
    all_pass(&assoc)?;
    has_case(&assoc, "cocycle-identity-word", 500)?;
    has_case(&levi, "levi-restriction", 500)?;
    has_case(&levi, "unipotent-splitting", 500)?;
    has_case(&levi, "central", 1)?;
    has_case(&assoc, "cross-backend", 500)?;
    let table = suite("cocycle-table", &params(3, PRIMES))?;
    has_case(&table, "leray-backend", 1)?;
    Ok(format!("{} cases exact", levi.summary.total + assoc.summary.total))
}

fn determinism() -> Result<String, String> {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_mpk"))
            .args(["verify", "--suite", "all", "--seed", "0", "--json"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() {
        return Err(format!("exit status {}", a.status));
    }
    if a.stdout != b.stdout {
        return Err("reports differ".into());
    }
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "LS representative, Mp side", budget: Some(Duration::from_secs(60)), check: ls_sp },
        Criterion { id: 2, title: "LS representative, SO side", budget: Some(Duration::from_secs(10)), check: ls_so },
        Criterion { id: 3, title: "sigma cocycle table", budget: Some(Duration::from_secs(30)), check: table },
        Criterion { id: 4, title: "representative factorization chain", budget: None, check: chain },
        Criterion { id: 5, title: "Hilbert symbol laws", budget: None, check: hilbert },
        Criterion { id: 6, title: "Weil index vs oracle", budget: None, check: weil },
        Criterion { id: 7, title: "Bruhat decomposition", budget: None, check: bruhat },
        Criterion { id: 8, title: "cover laws", budget: None, check: cover },
        Criterion { id: 9, title: "deterministic reports", budget: None, check: determinism },
    ];
    let mut ok = true;
    for c in criteria {
        let start = Instant::now();
        let mut result = (c.check)();
        let took = start.elapsed();
        if let (Ok(_), Some(b)) = (&result, c.budget) {
            if took > b {
                result = Err(format!("took {:.1}s, budget {}s", took.as_secs_f64(), b.as_secs()));
            }
        }
        let (mark, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        ok &= result.is_ok();
        println!("{mark} criterion {}: {} [{:.2}s] {detail}", c.id, c.title, took.as_secs_f64());
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
