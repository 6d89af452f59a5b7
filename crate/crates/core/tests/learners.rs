//! Learners checked against exhaustive search and against each other.

use lplist::datagen::{self, random_lplist, sample_examples, uniform_schema, GenConfig};
use lplist::dp::{compute_lpl, compute_lpo};
use lplist::ga::{self, GaConfig};
use lplist::greedy::greedy_lpl;
use lplist::oracle::{brute_lpl, brute_lpo, random_instance};
use lplist::rng;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lpo_matches_brute(x in 2usize..=5, m in 0usize..=200, seed in any::<u64>()) {
        let (schema, examples) = random_instance(1, x, m, &mut rng::stream(seed, &[])).unwrap();
        let (_, best) = brute_lpo(&schema, &examples, 0).unwrap();
        prop_assert_eq!(compute_lpo(&schema, &examples, 0).unwrap().count, best);
    }

    #[test]
    fn lpl_matches_brute(n in 1usize..=3, x in 2usize..=3, m in 0usize..=100, seed in any::<u64>()) {
        let (schema, examples) = random_instance(n, x, m, &mut rng::stream(seed, &[])).unwrap();
        let (_, best) = brute_lpl(&schema, &examples, false).unwrap();
        let sol = compute_lpl(&schema, &examples).unwrap();
        prop_assert_eq!(sol.count, best);
        prop_assert_eq!(sol.model.count_satisfied(&examples).unwrap(), sol.count);
    }

    #[test]
    fn heuristics_never_beat_dp(n in 2usize..=5, x in 2usize..=4, m in 0usize..=150, seed in any::<u64>()) {
        let (schema, examples) = random_instance(n, x, m, &mut rng::stream(seed, &[])).unwrap();
        let dp = compute_lpl(&schema, &examples).unwrap().count;
        let greedy = greedy_lpl(&schema, &examples).unwrap().count_satisfied(&examples).unwrap();
        prop_assert!(greedy <= dp);
        let cfg = GaConfig { generations: 10, population_size: 20, parent_count: 10, seed, ..GaConfig::default() };
        let ga = ga::evolve(&examples, &schema, &cfg).unwrap();
        prop_assert!(ga.best_fitness <= dp);
    }
}

#[test]
fn sublists_never_beat_full_lists() {
    for i in 0..50 {
        let mut r = rng::stream(500, &[i]);
        let (schema, examples) =
            random_instance(2 + (i % 2) as usize, 2 + (i / 2 % 2) as usize, 60, &mut r).unwrap();
        let (_, full) = brute_lpl(&schema, &examples, false).unwrap();
        let (_, any) = brute_lpl(&schema, &examples, true).unwrap();
        assert_eq!(full, any, "instance {i}");
    }
}

#[test]
fn ga_usually_reaches_the_optimum_on_tiny_instances() {
    let mut equal = 0;
    for seed in 0..50u64 {
        let (schema, examples) = random_instance(3, 3, 50, &mut rng::stream(seed, &[7])).unwrap();
        let dp = compute_lpl(&schema, &examples).unwrap().count;
        let ga = ga::evolve(
            &examples,
            &schema,
            &GaConfig {
                seed,
                ..GaConfig::default()
            },
        )
        .unwrap();
        assert!(ga.best_fitness <= dp);
        if ga.best_fitness == dp {
            equal += 1;
        }
    }
    assert!(equal >= 45, "GA matched the optimum in {equal}/50 runs");
}

#[test]
fn greedy_is_strictly_worse_somewhere() {
    let worse = (0..30u64).any(|seed| {
        let (schema, examples) = random_instance(3, 3, 50, &mut rng::stream(seed, &[8])).unwrap();
        let dp = compute_lpl(&schema, &examples).unwrap().count;
        greedy_lpl(&schema, &examples)
            .unwrap()
            .count_satisfied(&examples)
            .unwrap()
            < dp
    });
    assert!(worse);
}

#[test]
fn ga_fitness_of_hidden_model_is_perfect_on_clean_data() {
    let schema = uniform_schema(6, 4).unwrap();
    let hidden = random_lplist(&schema, &mut rng::stream(1, &[]));
    let clean = sample_examples(&schema, &hidden, 1000, &mut rng::stream(2, &[])).unwrap();
    let c = ga::Chromosome::new(hidden, &schema).unwrap();
    assert_eq!(ga::fitness(&c, &clean).unwrap(), 1000);
}

#[test]
fn dp_beats_hidden_model_on_noisy_train_split() {
    for seed in 0..3 {
        let d = datagen::generate(&GenConfig {
            m: 3000,
            seed,
            ..GenConfig::default()
        })
        .unwrap();
        let dp = compute_lpl(&d.schema, &d.train).unwrap();
        assert!(dp.count >= d.train.len() - d.train_flips());
        assert!(
            dp.count
                >= greedy_lpl(&d.schema, &d.train)
                    .unwrap()
                    .count_satisfied(&d.train)
                    .unwrap()
        );
    }
}
