//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::fs;
use std::process::Command;
use std::time::Instant;

use lplist::bench::{self, Algorithm, ExperimentConfig};
use lplist::datagen::{self, random_lplist, random_object, uniform_schema};
use lplist::dp::compute_lpl;
use lplist::ga::{self, GaConfig};
use lplist::oracle;
use lplist::rng::{self, derive_seed};
use lplist::Relation;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// 1. compute_lpo = brute_lpo on 200 random instances.
fn lpo_optimality() -> Outcome {
    let r = oracle::check_lpo(0, 200).expect("suite runs");
    outcome(
        r.passed == 200 && r.ok(),
        format!("{} of 200 instances agree", r.passed),
    )
}

/// 2. compute_lpl = brute_lpl on 100 instances, sublists agree on 50.
fn lpl_optimality() -> Outcome {
    let r = oracle::check_lpl(0, 100, 50).expect("suite runs");
    let (full, sub) = (&r[0], &r[1]);
    outcome(
        full.passed == 100 && sub.passed == 50 && full.ok() && sub.ok(),
        format!(
            "{}/100 full-length optima agree, {}/50 sublist optima agree",
            full.passed, sub.passed
        ),
    )
}

fn paper_scale(noise: f64) -> ExperimentConfig {
    ExperimentConfig {
        sizes: vec![10_000],
        repetitions: 5,
        base_seed: 0,
        noise,
        ..ExperimentConfig::default()
    }
}

/// 3. Noise-free recovery on the canonical instance (base seed 0, rep 0).
fn noise_free_recovery() -> Outcome {
    let cfg = paper_scale(0.0);
    let data = datagen::generate(&cfg.gen_config(10_000, 0)).expect("generate");
    let model = compute_lpl(&data.schema, &data.train).expect("dp").model;
    let train = bench::evaluate(&model, &data.train).unwrap();
    let test = bench::evaluate(&model, &data.test).unwrap();
    outcome(
        format!("{train:.4}") == "1.0000" && format!("{test:.4}") == "1.0000",
        format!("train {train:.4}, test {test:.4} (need both 1.0000)"),
    )
}

/// 4. Train accuracy never falls below the unflipped share of the train split.
fn noise_lower_bound() -> Outcome {
    let cfg = paper_scale(0.15);
    let mut worst_margin = f64::INFINITY;
    let mut pass = true;
    for rep in 0..5 {
        let data = datagen::generate(&cfg.gen_config(10_000, rep)).expect("generate");
        let sol = compute_lpl(&data.schema, &data.train).expect("dp");
        let bound = data.train.len() - data.train_flips();
        pass &= sol.count >= bound;
        worst_margin =
            worst_margin.min((sol.count as f64 - bound as f64) / data.train.len() as f64);
    }
    outcome(
        pass,
        format!("smallest margin over the bound: {worst_margin:+.4}"),
    )
}

/// 5. Mean test accuracy DPA >= GA >= Greedy and DPA - GA <= 0.02.
fn algorithm_ordering() -> Outcome {
    let cfg = ExperimentConfig {
        record_timing: false,
        ..paper_scale(0.15)
    };
    let records = bench::run_experiment(&cfg).expect("experiment");
    let mean = |a: Algorithm| {
        let v: Vec<f64> = records
            .iter()
            .filter(|r| r.algo == a)
            .map(|r| r.test_acc)
            .collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    let (dpa, ga, greedy) = (
        mean(Algorithm::Dpa),
        mean(Algorithm::Ga),
        mean(Algorithm::Greedy),
    );
    let checks = [
        ("DPA>=GA", dpa >= ga),
        ("GA>=Greedy", ga >= greedy),
        ("DPA-GA<=0.02", dpa - ga <= 0.02),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(
        failed.is_empty(),
        format!(
            "DPA {dpa:.4}, GA {ga:.4}, Greedy {greedy:.4}, DPA-GA {:.4}{}",
            dpa - ga,
            if failed.is_empty() {
                String::new()
            } else {
                format!("; violated: {}", failed.join(", "))
            }
        ),
    )
}

/// 6. GA best fitness never decreases over 100 generations, 20 seeded runs.
fn ga_monotonicity() -> Outcome {
    let mut violations = 0;
    for seed in 0..20u64 {
        let data = datagen::generate(&datagen::GenConfig {
            m: 1000,
            seed,
            ..Default::default()
        })
        .expect("generate");
        let cfg = GaConfig {
            seed,
            ..GaConfig::default()
        };
        let r = ga::evolve(&data.train, &data.schema, &cfg).expect("ga");
        assert_eq!(r.history.len(), 101);
        violations += r
            .history
            .windows(2)
            .filter(|w| w[1].best_fitness < w[0].best_fitness)
            .count();
    }
    outcome(
        violations == 0,
        format!("{violations} decreases across 20 runs"),
    )
}

/// 7. Comparison axioms over 10^4 random (L, o, o', o'') draws.
fn core_semantics() -> Outcome {
    let draws = 10_000u64;
    let mut violations = 0;
    for i in 0..draws {
        let pick = |k: u64, lo: u64, span: u64| (lo + derive_seed(7, &[i, k]) % span) as usize;
        let n = pick(0, 1, 6);
        let x = pick(1, 2, 3);
        let schema = uniform_schema(n, x).unwrap();
        let mut r = rng::stream(7, &[i]);
        let full = random_lplist(&schema, &mut r);
        let list = full.prefix(pick(2, 0, n as u64 + 1));
        let (a, b, c) = (
            random_object(&schema, &mut r),
            random_object(&schema, &mut r),
            random_object(&schema, &mut r),
        );
        let ab = list.compare(&a, &b).unwrap();
        let bc = list.compare(&b, &c).unwrap();
        let ok = ab == list.compare(&b, &a).unwrap().reverse()
            && list.compare(&a, &a).unwrap() == Relation::Equivalent
            && !(ab == Relation::Better
                && bc == Relation::Better
                && list.compare(&a, &c).unwrap() != Relation::Better)
            && !(ab == Relation::Equivalent
                && bc == Relation::Equivalent
                && list.compare(&a, &c).unwrap() != Relation::Equivalent)
            && ((full.compare(&a, &b).unwrap() == Relation::Equivalent) == (a == b));
        if !ok {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{violations} violations in {draws} draws"),
    )
}

/// 8. `bench` output is byte-identical across thread counts.
fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bench.json");
    fs::write(
        &config,
        r#"{"sizes":[1000,10000],"repetitions":2,"base_seed":11,"ga":{"generations":30}}"#,
    )
    .unwrap();
    let run = |threads: &str, name: &str, timed: bool| {
        let out = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_lplist"));
        cmd.args(["--threads", threads, "bench", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out);
        if !timed {
            cmd.arg("--no-timing");
        }
        let status = cmd.output().expect("run lplist");
        assert!(
            status.status.success(),
            "{}",
            String::from_utf8_lossy(&status.stderr)
        );
        fs::read_to_string(out.join("results.csv")).unwrap()
    };
    let one = run("1", "t1", false);
    let four = run("4", "t4", false);
    // with timing on, everything but the time columns must still agree
    let strip = |csv: &str| -> Vec<String> {
        csv.lines()
            .map(|l| l.split(',').take(5).collect::<Vec<_>>().join(","))
            .collect()
    };
    let timed_one = run("1", "timed1", true);
    let timed_three = run("3", "timed3", true);
    let pass = one == four
        && !one.is_empty()
        && strip(&timed_one) == strip(&timed_three)
        && strip(&one) == strip(&timed_one);
    outcome(
        pass,
        format!(
            "--threads 1 vs 4: {} ({} bytes); timed runs agree outside time columns: {}",
            if one == four {
                "identical"
            } else {
                "DIFFERENT"
            },
            one.len(),
            strip(&timed_one) == strip(&timed_three)
        ),
    )
}

fn main() {
    type Check = (&'static str, fn() -> Outcome);
    let criteria: [Check; 8] = [
        ("1 LPO optimality", lpo_optimality),
        ("2 LPL optimality", lpl_optimality),
        ("3 noise-free recovery", noise_free_recovery),
        ("4 noise lower bound", noise_lower_bound),
        ("5 algorithm ordering", algorithm_ordering),
        ("6 GA monotonicity", ga_monotonicity),
        ("7 core semantics", core_semantics),
        ("8 bench determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = check();
        println!(
            "{} criterion {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} criterion/criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
