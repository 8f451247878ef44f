//! Seeded randomized property suites over generated systems, towers and
//! chains. Each case draws from its own generator derived from the suite
//! seed and the case index, so results do not depend on scheduling.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gen::{self, SystemShape};
use crate::oracle::Oracle;
use crate::ordinal::Ordinal;
use crate::poset::{canonical_extend, chain_infimum, extends};
use crate::stability::{landmarks, StabilitySystem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub parallel: bool,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        SuiteConfig { seed, parallel: true }
    }

    fn rng(&self, salt: u64, case: usize) -> ChaCha8Rng {
        let mixed = self
            .seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(salt << 32)
            .wrapping_add(case as u64);
        ChaCha8Rng::seed_from_u64(mixed)
    }
}

/// Per-case outcome: number of checks and failure messages.
type CaseResult = (usize, Vec<String>);

fn run<F>(name: &str, config: &SuiteConfig, cases: usize, case: F) -> SuiteReport
where
    F: Fn(usize) -> CaseResult + Sync + Send,
{
    let start = Instant::now();
    let results: Vec<CaseResult> = if config.parallel {
        (0..cases).into_par_iter().map(&case).collect()
    } else {
        (0..cases).map(&case).collect()
    };
    let mut report = SuiteReport {
        name: name.to_string(),
        cases,
        checks: 0,
        failures: Vec::new(),
        elapsed_ms: 0,
    };
    for (checks, failures) in results {
        report.checks += checks;
        report.failures.extend(failures);
    }
    report.elapsed_ms = start.elapsed().as_millis();
    report
}

/// The shared corpus of random valid systems with bound at most `ω^3·5`.
pub fn system_corpus(config: &SuiteConfig, cases: usize) -> Vec<StabilitySystem> {
    let shape = SystemShape::wide();
    let build = |i: usize| gen::valid_system(&mut config.rng(1, i), &shape);
    if config.parallel {
        (0..cases).into_par_iter().map(build).collect()
    } else {
        (0..cases).map(build).collect()
    }
}

fn probe_for(p: &StabilitySystem, rng: &mut ChaCha8Rng) -> Vec<Ordinal> {
    let shape = SystemShape::wide();
    let mut probe = landmarks(p);
    for _ in 0..6 {
        probe.push(gen::ordinal_below(rng, p.bound(), &shape));
    }
    probe
}

/// Tree-order facts at every level up to the depth, on landmarks plus
/// random points.
pub fn tree_order_suite(config: &SuiteConfig, corpus: &[StabilitySystem]) -> SuiteReport {
    run("tree-order", config, corpus.len(), |i| {
        let p = &corpus[i];
        let probe = probe_for(p, &mut config.rng(2, i));
        let mut checks = 0;
        let mut failures = Vec::new();
        for k in 0..=p.depth() {
            checks += 1;
            match p.check_tree_properties(k, &probe) {
                Ok(r) if r.passed() => {}
                Ok(r) => failures.push(format!("case {i} level {k}: {:?} on {}", r.violations, p.to_json())),
                Err(e) => failures.push(format!("case {i} level {k}: {e}")),
            }
        }
        (checks, failures)
    })
}

/// Largest-predecessor and unboundedness facts at every level.
pub fn predecessor_suite(config: &SuiteConfig, corpus: &[StabilitySystem]) -> SuiteReport {
    run("largest-predecessor", config, corpus.len(), |i| {
        let p = &corpus[i];
        let mut checks = 0;
        let mut failures = Vec::new();
        for k in 1..=p.depth() + 1 {
            match p.check_lemma2(k) {
                Ok(r) => {
                    checks += r.largest_predecessor_checked + r.unbounded_checked;
                    if !r.passed() {
                        failures.push(format!("case {i} level {k}: {:?} on {}", r.violations, p.to_json()));
                    }
                }
                Err(e) => failures.push(format!("case {i} level {k}: {e}")),
            }
        }
        (checks, failures)
    })
}

/// `r ≤ q ≤ p` implies `r ≤ p`.
pub fn transitivity_suite(config: &SuiteConfig, cases: usize) -> SuiteReport {
    let shape = SystemShape::wide();
    run("extension-transitivity", config, cases, |i| {
        let (ell, [p, q, r]) = gen::tower(&mut config.rng(3, i), &shape);
        let mut failures = Vec::new();
        let holds = |a: &StabilitySystem, b: &StabilitySystem| extends(a, b, ell).unwrap_or(false);
        if !holds(&q, &p) || !holds(&r, &q) {
            failures.push(format!("case {i}: generated tower does not descend at level {ell}"));
        } else if !holds(&r, &p) {
            failures.push(format!(
                "case {i}: r ≤ q ≤ p at level {ell} but not r ≤ p: p = {}, r = {}",
                p.to_json(),
                r.to_json()
            ));
        }
        (3, failures)
    })
}

/// Canonical raises are valid and extend at every level; chain infima
/// extend every member and equal the canonical raise of the last member.
pub fn chain_suite(config: &SuiteConfig, cases: usize) -> SuiteReport {
    let shape = SystemShape::wide();
    run("canonical-and-infimum", config, cases, |i| {
        let mut rng = config.rng(4, i);
        let chain = gen::chain(&mut rng, &shape);
        let mut checks = 0;
        let mut failures = Vec::new();
        for p in &chain.conditions {
            let top = p.top().expect("valid");
            let raise = Ordinal::omega_pow(rng.gen_range(0..=3), rng.gen_range(1..=3));
            let q = match canonical_extend(p, &top.add(&raise)) {
                Ok(q) => q,
                Err(e) => {
                    failures.push(format!("case {i}: canonical raise failed: {e}"));
                    continue;
                }
            };
            checks += 1;
            if !q.validate().valid {
                failures.push(format!("case {i}: canonical raise of {} is invalid", p.to_json()));
            }
            for ell in 1..=p.depth() + 2 {
                checks += 1;
                if !extends(&q, p, ell).unwrap_or(false) {
                    failures.push(format!("case {i}: canonical raise does not extend at level {ell}"));
                }
            }
        }
        let last = chain.conditions.last().expect("nonempty");
        match chain_infimum(&chain) {
            Ok(inf) => {
                checks += chain.conditions.len() + 1;
                for (n, p) in chain.conditions.iter().enumerate() {
                    if !extends(&inf, p, chain.ell).unwrap_or(false) {
                        failures.push(format!("case {i}: infimum does not extend member {n}"));
                    }
                }
                if canonical_extend(last, &chain.target).ok().as_ref() != Some(&inf) {
                    failures.push(format!("case {i}: infimum differs from the canonical raise"));
                }
            }
            Err(e) => failures.push(format!(
                "case {i}: {e} for {}",
                serde_json::to_string(&chain).unwrap_or_default()
            )),
        }
        (checks, failures)
    })
}

/// Every point `ω·m + n` below the bound with `n` up to two past the
/// largest finite part in the system.
pub fn complete_grid(p: &StabilitySystem) -> Vec<Ordinal> {
    let cap = p
        .all_exceptions()
        .flat_map(|(_, k, v)| [k.finite_part(), v.finite_part()])
        .chain([p.bound().finite_part()])
        .max()
        .unwrap_or(0)
        + 2;
    let blocks = p.bound().terms().iter().find(|t| t.exponent == 1).map_or(0, |t| t.coefficient);
    (0..=blocks)
        .flat_map(|m| (0..=cap).map(move |n| Ordinal::omega_times_plus(m, n)))
        .filter(|x| x < p.bound())
        .collect()
}

/// Differential comparison against the enumerating oracle on systems with
/// bound below `ω·12`, a quarter of them generated without validity.
pub fn oracle_suite(config: &SuiteConfig, cases: usize) -> SuiteReport {
    let shape = SystemShape::small();
    run("oracle-differential", config, cases, |i| {
        let mut rng = config.rng(5, i);
        let p = if rng.gen_bool(0.75) {
            gen::valid_system(&mut rng, &shape)
        } else {
            gen::raw_system(&mut rng, &shape)
        };
        compare_with_oracle(&p, &mut rng, i)
    })
}

fn compare_with_oracle(p: &StabilitySystem, rng: &mut ChaCha8Rng, case: usize) -> CaseResult {
    let mut checks = 0;
    let mut failures = Vec::new();
    let oracle = match Oracle::new(p) {
        Ok(o) => o,
        Err(e) => return (0, vec![format!("case {case}: {e}")]),
    };
    let mut fail = |what: String| failures.push(format!("case {case}: {what} on {}", p.to_json()));

    let core = p.validate();
    let brute = oracle.validate();
    checks += 1;
    if core.valid != brute.valid || core.signature() != brute.signature() {
        fail(format!("validate {:?} vs oracle {:?}", core.signature(), brute.signature()));
    }

    let grid = complete_grid(p);
    for k in 0..=p.depth() + 1 {
        for b in &grid {
            checks += 2;
            let mine = p.pred_set(k, b).expect("grid below bound");
            let theirs = oracle.pred_set(k, b).expect("grid below bound");
            if mine != theirs {
                fail(format!("pred_set({k}, {b}) = {mine} vs oracle {theirs}"));
            }
            let lim = p.is_k_limit(k, b).expect("grid below bound");
            if lim != oracle.is_k_limit(k, b).expect("grid below bound") {
                fail(format!("is_k_limit({k}, {b}) = {lim} disagrees"));
            }
            for a in &grid {
                checks += 1;
                let theirs = oracle.lt_k(k, a, b).expect("grid below bound");
                let core_lt = a < b && mine.member(a);
                if core_lt != theirs {
                    fail(format!("{a} <_{k} {b}: core {core_lt} vs oracle {theirs}"));
                }
            }
        }
        // direct calls on a sample of pairs
        for _ in 0..16 {
            let a = &grid[rng.gen_range(0..grid.len())];
            let b = &grid[rng.gen_range(0..grid.len())];
            checks += 1;
            let mine = p.lt_k(k, a, b).expect("grid below bound");
            if mine != oracle.lt_k(k, a, b).expect("grid below bound") {
                fail(format!("lt_k({k}, {a}, {b}) = {mine} disagrees"));
            }
        }
    }
    (checks, failures)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteSizes {
    pub systems: usize,
    pub towers: usize,
    pub chains: usize,
    pub oracle: usize,
}

impl SuiteSizes {
    pub fn full() -> Self {
        SuiteSizes {
            systems: 1000,
            towers: 500,
            chains: 200,
            oracle: 500,
        }
    }

    pub fn quick() -> Self {
        SuiteSizes {
            systems: 60,
            towers: 60,
            chains: 30,
            oracle: 40,
        }
    }
}

pub fn run_all(config: &SuiteConfig, sizes: &SuiteSizes) -> Vec<SuiteReport> {
    let corpus = system_corpus(config, sizes.systems);
    vec![
        tree_order_suite(config, &corpus),
        predecessor_suite(config, &corpus),
        transitivity_suite(config, sizes.towers),
        chain_suite(config, sizes.chains),
        oracle_suite(config, sizes.oracle),
    ]
}
