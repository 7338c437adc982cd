//! Acceptance criteria, one line each. Run with
//! `cargo test -p grassmann-harness --test acceptance`.

use std::time::Instant;

use grassmann_core::incidence::admissible;
use grassmann_core::{is_good, Algebra, GoodnessVerdict, PrimeField, Side, Subspace};
use grassmann_harness::suites::random_separable;
use grassmann_harness::{run_suite, toy_oracle_goodness, SuiteConfig, SuiteReport};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240601;
const CHAIN_CASES: [(usize, usize); 7] = [(3, 2), (4, 3), (5, 2), (5, 3), (7, 4), (8, 5), (9, 7)];

struct Line {
    ok: bool,
    summary: String,
}

fn config() -> SuiteConfig {
    SuiteConfig { seed: SEED, ..SuiteConfig::default() }
}

fn run(name: &str, cfg: &SuiteConfig) -> SuiteReport {
    run_suite(name, cfg).unwrap_or_else(|e| panic!("suite {name} could not run: {e}"))
}

fn failures(report: &SuiteReport) -> String {
    let mut out = String::new();
    for s in &report.suites {
        for c in s.cases.iter().filter(|c| !c.ok) {
            out += &format!(" [{}: {} failed, {} resamples / {}]", c.label, c.failed, c.resamples, c.trials);
        }
    }
    out
}

fn equivariance() -> Line {
    let cfg = SuiteConfig { cases: CHAIN_CASES.to_vec(), trials: 100, ..config() };
    let report = run("equivariance", &cfg);
    let suite = report.suite("equivariance").unwrap();
    let complete = suite.cases.len() == CHAIN_CASES.len() && suite.cases.iter().all(|c| c.trials == 100);
    let worst = suite.cases.iter().map(|c| c.resamples).max().unwrap_or(0);
    Line {
        ok: report.ok && complete,
        summary: format!(
            "equivariance of the composite: {} cases x 100 trials, {} exact matches, max resamples per case {worst} (limit 1){}",
            suite.cases.len(),
            suite.passed,
            failures(&report)
        ),
    }
}

fn dimension() -> Line {
    let cfg = SuiteConfig { max_n: 9, grid_trials: 10, ..config() };
    let report = run("dimension", &cfg);
    let suite = report.suite("dimension").unwrap();
    let tuples: u64 = suite.cases.iter().filter_map(|c| c.details["tuples"].as_u64()).sum();
    Line {
        ok: report.ok && suite.failed == 0 && suite.passed as u64 == tuples * 10,
        summary: format!(
            "tangent rank = r s u: {tuples} admissible tuples (n <= 9) x 10 points, {} passed, {} failed{}",
            suite.passed,
            suite.failed,
            failures(&report)
        ),
    }
}

fn duality() -> Line {
    // gcd(n, d) = d, so the roundtrip suite works at exactly these (n, d).
    let pairs = vec![(4, 2), (6, 2), (6, 3), (8, 4), (9, 3)];
    let cfg = SuiteConfig { cases: pairs.clone(), trials: 50, ..config() };
    let report = run("roundtrip", &cfg);
    let suite = report.suite("roundtrip").unwrap();
    let labels: Vec<String> = pairs.iter().map(|(n, d)| format!("n={n} d={d}")).collect();
    let complete = labels.iter().all(|l| suite.case(l).is_some_and(|c| c.trials == 50 && c.passed == 50));
    Line {
        ok: report.ok && complete,
        summary: format!(
            "duality roundtrip and equivariance: {} (n, d) pairs x 50 trials (each checks one roundtrip and one translation), {} passed{}",
            suite.cases.len(),
            suite.passed,
            failures(&report)
        ),
    }
}

fn identity() -> Line {
    let cfg = SuiteConfig { cases: vec![(6, 3), (6, 2), (8, 4)], trials: 50, ..config() };
    let report = run("identity", &cfg);
    let suite = report.suite("identity").unwrap();
    Line {
        ok: report.ok && suite.passed == 150 && suite.failed == 0 && suite.resamples == 0,
        summary: format!(
            "r | n gives the identity: 3 cases x 50, {} passed, {} failed, {} resamples{}",
            suite.passed,
            suite.failed,
            suite.resamples,
            failures(&report)
        ),
    }
}

fn fiber() -> Line {
    let cfg = SuiteConfig { cases: CHAIN_CASES.to_vec(), max_n: 9, grid_trials: 20, ..config() };
    let report = run("fiber", &cfg);
    let suite = report.suite("fiber").unwrap();
    let shapes: u64 = suite.cases.iter().filter_map(|c| c.details["step_shapes"].as_u64()).sum();
    let chains = suite.cases.iter().filter(|c| c.label.starts_with("chain")).count();
    Line {
        ok: report.ok && chains == CHAIN_CASES.len() && shapes > 0,
        summary: format!(
            "fiber roundtrips and dimensions: {shapes} step shapes (n <= 9) x 20 targets, {chains} chains with summed fiber dims = r(n-r) - d(n-d); {} passed, {} failed{}",
            suite.passed,
            suite.failed,
            failures(&report)
        ),
    }
}

fn witness() -> Line {
    let cfg = SuiteConfig { cases: vec![], max_n: 9, ..config() };
    let report = run("goodness-grid", &cfg);
    let suite = report.suite("goodness-grid").unwrap();
    let main: Vec<_> = suite.cases.iter().filter(|c| c.label.ends_with("s>=r")).collect();
    let mirror: Vec<_> = suite.cases.iter().filter(|c| c.label.ends_with("r>s")).collect();
    let checked: usize = main.iter().map(|c| c.trials).sum();
    let mirror_checked: usize = mirror.iter().map(|c| c.trials).sum();
    let mirror_ok = mirror.iter().all(|c| c.ok);
    Line {
        ok: main.len() == 9 && main.iter().all(|c| c.ok && c.failed == 0),
        summary: format!(
            "explicit witness in G(r, s, U): {checked} admissible tuples with s >= r (n <= 9), failures {}; mirror r > s: {mirror_checked} tuples, {}{}",
            main.iter().map(|c| c.failed).sum::<usize>(),
            if mirror_ok { "all pass" } else { "FAILURES" },
            failures(&report)
        ),
    }
}

fn stabilizer() -> Line {
    let cfg = SuiteConfig { max_n: 9, trials: 20, ..config() };
    let report = run("stabilizer", &cfg);
    let suite = report.suite("stabilizer").unwrap();
    Line {
        ok: report.ok && suite.failed == 0 && suite.cases.len() == (2..=9).map(|n| n - 1).sum::<usize>(),
        summary: format!(
            "generic stabilizer = K.1: {} (n, d) cases x 20 subspaces, {} passed, {} anomalies{}",
            suite.cases.len(),
            suite.passed,
            suite.failed,
            failures(&report)
        ),
    }
}

fn split3(field: PrimeField) -> Algebra {
    let mut c = vec![vec![vec![0; 3]; 3]; 3];
    for (i, plane) in c.iter_mut().enumerate() {
        plane[i][i] = 1;
    }
    Algebra::from_structure_constants(field, &c, &[1, 1, 1]).unwrap()
}

/// The certifier may give up where the oracle finds a point, but must never
/// certify where the oracle finds none.
fn agrees(alg: &Algebra, u: &Subspace, r: usize, s: usize, seed: u64) -> (bool, bool) {
    let oracle = toy_oracle_goodness(alg, u, r, s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let certified = matches!(is_good(alg, u, &[(r, s)], &mut rng, 64).unwrap()[0], GoodnessVerdict::Certified(_));
    (!certified || oracle, oracle)
}

fn oracle() -> Line {
    let start = Instant::now();
    let mut instances = 0;
    let mut contradictions = 0;
    let mut suite_failures = String::new();
    for p in [2u64, 3, 5, 7] {
        let cfg = SuiteConfig { prime: p, toy: true, max_n: 3, cases: vec![], ..config() };
        let report = run("goodness-grid", &cfg);
        let suite = report.suite("goodness-grid").unwrap();
        instances += suite.cases.iter().filter_map(|c| c.details["instances"].as_u64()).sum::<u64>();
        contradictions += suite.failed;
        suite_failures += &failures(&report);
    }

    // Named instances: t^3 - t - 1 over F_3 with U = span(1), and a collapsing U in F_3^3.
    let f3 = PrimeField::new(3).unwrap();
    let cubic = Algebra::etale_from_poly(f3, &[2, 2, 0]).unwrap();
    let one = Subspace::coordinate(f3, Side::Primal, 3, &[0]);
    let (ok_cubic, good_cubic) = agrees(&cubic, &one, 1, 1, SEED);
    let split = split3(f3);
    let e0 = Subspace::coordinate(f3, Side::Primal, 3, &[0]);
    let (ok_split, good_split) = agrees(&split, &e0, 1, 1, SEED);
    instances += 2;
    contradictions += (!ok_cubic) as usize + (!ok_split) as usize;

    // A few random monogenic instances over F_5 and F_7 with every admissible pair.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for p in [5u64, 7] {
        let f = PrimeField::new(p).unwrap();
        let alg = random_separable(f, 3, &mut rng, 64).unwrap();
        for u in 1..3 {
            let us = Subspace::random(f, Side::Primal, 3, u, &mut rng, 64).unwrap();
            for (r, s) in [(1, 1), (1, 2), (2, 1)] {
                if admissible(3, r, s, u) {
                    instances += 1;
                    contradictions += (!agrees(&alg, &us, r, s, SEED + instances).0) as usize;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Line {
        ok: instances >= 10 && contradictions == 0 && good_cubic && !good_split && secs < 120.0,
        summary: format!(
            "toy oracle agreement: {instances} instances (n <= 3, p <= 7), {contradictions} contradictions, t^3-t-1 over F_3 good: {good_cubic}, collapsing U in F_3^3 good: {good_split}, {secs:.2} s (limit 120){suite_failures}"
        ),
    }
}

fn main() {
    let start = Instant::now();
    let criteria: [(u32, fn() -> Line); 8] = [
        (1, equivariance),
        (2, dimension),
        (3, duality),
        (4, identity),
        (5, fiber),
        (6, witness),
        (7, stabilizer),
        (8, oracle),
    ];
    let mut all = true;
    for (k, check) in criteria {
        let t = Instant::now();
        let line = check();
        all &= line.ok;
        println!(
            "criterion {k}: {} {} ({:.2} s)",
            if line.ok { "PASS" } else { "FAIL" },
            line.summary,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} in {:.2} s",
        if all { "all criteria pass" } else { "FAILED" },
        start.elapsed().as_secs_f64()
    );
    if !all {
        std::process::exit(1);
    }
}
