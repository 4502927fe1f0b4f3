//! Acceptance criteria, one line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fldkit::classes::{closure_sigma, ClassSpec, Predicate};
use fldkit::verify::{phi_corpus, psi_corpus, run_suite, Suite, SuiteConfig, SuiteReport};

const SEED: u64 = 20_240_601;

struct Line {
    id: usize,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn suite(id: usize, name: &'static str, s: Suite, bound: usize, limit: Option<Duration>) -> Line {
    let start = Instant::now();
    let r: SuiteReport = run_suite(s, SuiteConfig { bound, seed: SEED, max_k: 3 }).expect("bound within range");
    let took = start.elapsed();
    let in_time = limit.is_none_or(|l| took <= l);
    let mut detail = format!("{} checks, {:.1}s", r.checks, took.as_secs_f64());
    if let Some(l) = limit {
        detail.push_str(&format!(" (limit {}s)", l.as_secs()));
    }
    if let Some(c) = &r.counterexample {
        detail.push_str(&format!("; counterexample {c}"));
    }
    Line { id, name, ok: r.passed && in_time, detail }
}

fn main() -> ExitCode {
    let mut lines = Vec::new();

    let psis = psi_corpus();
    let corpus_ok = psis.len() >= 20 && psis.iter().all(|p| p.quantifier_rank() <= 3) && phi_corpus().len() >= 5;
    let mut l = suite(1, "relativization, posets <= 4", Suite::Relativization, 4, Some(Duration::from_secs(60)));
    l.ok &= corpus_ok;
    lines.push(l);

    lines.push(suite(2, "block definability, posets <= 5", Suite::BlockDefinability, 5, Some(Duration::from_secs(120))));
    lines.push(suite(3, "finite transfer", Suite::Transfer, 5, None));
    lines.push(suite(4, "sum associativity", Suite::Associativity, 3, None));
    lines.push(suite(5, "sum composition under EF, k <= 3", Suite::SumComposition, 4, Some(Duration::from_secs(300))));

    let mut l = suite(6, "one-step closure and rooted identities", Suite::ClosureOnestep, 5, None);
    let singleton = closure_sigma(&ClassSpec::predicate(Predicate::SingletonOnly), 4).expect("bound within budget");
    let size_four = singleton.members().iter().filter(|f| f.to_poset().len() == 4).count();
    l.ok &= size_four == 16 && singleton.members().len() == 24;
    l.detail.push_str(&format!("; singleton sums give {size_four} posets of size 4"));
    lines.push(l);

    lines.push(suite(7, "class chain, posets <= 5", Suite::ClassChain, 5, None));
    lines.push(suite(8, "w-invariance, posets <= 4", Suite::WInvariance, 4, None));
    lines.push(suite(9, "EF chain thresholds, m, n <= 8", Suite::EfChains, 8, None));

    for l in &lines {
        println!("criterion {}: {} {} ({})", l.id, if l.ok { "PASS" } else { "FAIL" }, l.name, l.detail);
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.ok).map(|l| l.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", lines.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
