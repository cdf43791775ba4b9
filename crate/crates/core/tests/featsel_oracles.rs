use asd_screen_core::featsel::{
    rank, rank_chi_squared, rank_correlation, rank_info_gain, rank_relief_f, top_k, ReliefOptions,
};
use asd_screen_core::screening::generate;
use asd_screen_core::stats::pearson_r;
use asd_screen_core::tabular::{AttributeSchema, Dataset, Record, Value};
use asd_screen_core::{AgeGroup, Error, RankingMethod, SynthConfig};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn numeric_dataset(columns: &[Vec<f64>], class: &[usize]) -> Dataset {
    let mut schema: Vec<AttributeSchema> =
        (0..columns.len()).map(|j| AttributeSchema::numeric(format!("x{j}"))).collect();
    schema.push(AttributeSchema::class("Class"));
    let records = (0..class.len())
        .map(|i| {
            let mut values: Vec<Value> = columns.iter().map(|c| Value::Numeric(c[i])).collect();
            values.push(Value::Nominal(class[i]));
            Record::new(values)
        })
        .collect();
    Dataset::new(schema, records, None).unwrap()
}

/// Plain ReliefF for tie-free numeric data: unique nearest hits and misses
/// found by sorting, weights updated one instance at a time.
fn relief_oracle(columns: &[Vec<f64>], class: &[usize], k: usize) -> Vec<f64> {
    let n = class.len();
    let ranges: Vec<f64> = columns
        .iter()
        .map(|c| c.iter().cloned().fold(f64::MIN, f64::max) - c.iter().cloned().fold(f64::MAX, f64::min))
        .collect();
    let diff = |a: usize, i: usize, j: usize| (columns[a][i] - columns[a][j]).abs() / ranges[a];
    let dist = |i: usize, j: usize| (0..columns.len()).map(|a| diff(a, i, j)).sum::<f64>();
    let mut w = vec![0.0; columns.len()];
    for i in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        others.sort_by(|&a, &b| dist(i, a).partial_cmp(&dist(i, b)).unwrap());
        let hits: Vec<usize> = others.iter().copied().filter(|&j| class[j] == class[i]).take(k).collect();
        let misses: Vec<usize> = others.iter().copied().filter(|&j| class[j] != class[i]).take(k).collect();
        for a in 0..columns.len() {
            for &h in &hits {
                w[a] -= diff(a, i, h) / (n * k) as f64;
            }
            for &m in &misses {
                w[a] += diff(a, i, m) / (n * k) as f64;
            }
        }
    }
    w
}

#[test]
fn relief_six_record_hand_dataset() {
    // x0 separates the classes, x1 is scattered; no distance ties
    let columns = vec![vec![0.0, 0.1, 0.25, 0.7, 0.85, 1.0], vec![0.45, 0.02, 0.93, 0.31, 0.97, 0.58]];
    let class = vec![0, 0, 0, 1, 1, 1];
    let ranking = rank_relief_f(&numeric_dataset(&columns, &class), &ReliefOptions { neighbors: 1, ..Default::default() }).unwrap();
    let oracle = relief_oracle(&columns, &class, 1);
    assert!((ranking.score_of("x0").unwrap() - oracle[0]).abs() < 1e-12);
    assert!((ranking.score_of("x1").unwrap() - oracle[1]).abs() < 1e-12);
    assert_eq!(ranking.entries[0].attribute, "x0");
}

#[test]
fn relief_matches_oracle_on_random_numeric_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let n = rng.random_range(8..20);
        let d = rng.random_range(1..4);
        let k = rng.random_range(1..3);
        let columns: Vec<Vec<f64>> = (0..d).map(|_| (0..n).map(|_| rng.random::<f64>()).collect()).collect();
        let mut class: Vec<usize> = (0..n).map(|i| i % 2).collect();
        class.shuffle(&mut rng);
        let ranking =
            rank_relief_f(&numeric_dataset(&columns, &class), &ReliefOptions { neighbors: k, ..Default::default() }).unwrap();
        let oracle = relief_oracle(&columns, &class, k);
        for (j, w) in oracle.iter().enumerate() {
            assert!((ranking.score_of(&format!("x{j}")).unwrap() - w).abs() < 1e-11);
        }
    }
}

#[test]
fn relief_sampling_is_seeded() {
    let data = generate(&SynthConfig::new(AgeGroup::Child, 200, 1)).unwrap();
    let opts = ReliefOptions { neighbors: 5, sample: Some(50), seed: 3 };
    assert_eq!(rank_relief_f(&data, &opts).unwrap(), rank_relief_f(&data, &opts).unwrap());
    assert!(rank_relief_f(&data, &ReliefOptions { sample: Some(0), ..opts }).is_err());
    assert!(rank_relief_f(&data, &ReliefOptions { sample: Some(201), ..opts }).is_err());
}

#[test]
fn relief_rejects_small_classes() {
    let columns = vec![vec![0.0, 0.2, 0.4, 0.6, 0.8]];
    let data = numeric_dataset(&columns, &[0, 0, 0, 1, 1]);
    let err = rank_relief_f(&data, &ReliefOptions { neighbors: 2, ..Default::default() }).unwrap_err();
    assert!(matches!(err, Error::TooFewSamples { needed: 3, got: 2 }));
}

#[test]
fn relief_ranks_items_above_demographics() {
    let mut wins = 0;
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rates: [f64; 10] = std::array::from_fn(|_| rng.random_range(0.3..0.7));
        let data = generate(&SynthConfig::new(AgeGroup::Adult, 1000, seed).with_rates(rates)).unwrap();
        let ranking = rank_relief_f(&data, &ReliefOptions::default()).unwrap();
        let top = top_k(&ranking, 10).unwrap();
        if top.iter().all(|a| a.starts_with('A') && a != "Age") {
            wins += 1;
        }
    }
    assert!(wins >= 4, "{wins} of 5");
}

#[test]
fn correlation_matches_stats_oracle() {
    let x = [0.3, 1.2, 0.7, 2.5, 1.9, 0.1];
    let class = [0, 1, 0, 1, 1, 0];
    let ranking = rank_correlation(&numeric_dataset(&[x.to_vec()], &class)).unwrap();
    let y: Vec<f64> = class.iter().map(|&c| c as f64).collect();
    let expected = pearson_r(&x, &y).unwrap().abs();
    assert!((ranking.score_of("x0").unwrap() - expected).abs() < 1e-12);
}

fn nominal_dataset_with(columns: &[Vec<usize>], class: &[usize]) -> Dataset {
    let mut schema: Vec<AttributeSchema> =
        (0..columns.len()).map(|j| AttributeSchema::binary_item(format!("A{}", j + 1))).collect();
    schema.push(AttributeSchema::class("Class"));
    let records = (0..class.len())
        .map(|i| {
            let mut values: Vec<Value> = columns.iter().map(|c| Value::Nominal(c[i])).collect();
            values.push(Value::Nominal(class[i]));
            Record::new(values)
        })
        .collect();
    Dataset::new(schema, records, None).unwrap()
}

#[test]
fn copied_class_ranks_first_and_constant_scores_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let class: Vec<usize> = (0..60).map(|i| i % 2).collect();
    let noise: Vec<usize> = (0..60).map(|_| rng.random_range(0..2)).collect();
    let columns = vec![noise, vec![1; 60], class.clone()];
    let data = nominal_dataset_with(&columns, &class);
    for method in RankingMethod::ALL {
        let ranking = rank(&data, method, &ReliefOptions::default()).unwrap();
        assert_eq!(ranking.entries[0].attribute, "A3", "{method}");
        // OneR scores accuracy, so a constant column earns the majority rate
        let floor = if method == RankingMethod::OneR { 0.5 } else { 0.0 };
        assert_eq!(ranking.score_of("A2").unwrap(), floor, "{method}");
    }
    assert_eq!(rank_info_gain(&data).unwrap().score_of("A3").unwrap(), 1.0);
    assert_eq!(rank_chi_squared(&data).unwrap().score_of("A3").unwrap(), 60.0);
    assert_eq!(rank_correlation(&data).unwrap().score_of("A3").unwrap(), 1.0);
}

#[test]
fn chi_squared_and_one_r_hand_table() {
    // contingency [[3, 1], [1, 3]]
    let item = [0, 0, 0, 0, 1, 1, 1, 1];
    let class = [0, 0, 0, 1, 1, 1, 1, 0];
    let data = nominal_dataset_with(&[item.to_vec()], &class);
    assert!((rank_chi_squared(&data).unwrap().score_of("A1").unwrap() - 2.0).abs() < 1e-12);
    let one_r = rank(&data, RankingMethod::OneR, &ReliefOptions::default()).unwrap();
    assert!((one_r.score_of("A1").unwrap() - 0.75).abs() < 1e-12);
    let ig = rank_info_gain(&data).unwrap().score_of("A1").unwrap();
    let h = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
    assert!((ig - (1.0 - h)).abs() < 1e-12);
}

#[test]
fn top_k_bounds() {
    let data = nominal_dataset(1);
    let ranking = rank_info_gain(&data).unwrap();
    assert_eq!(top_k(&ranking, 3).unwrap(), ranking.attributes()[..3].to_vec());
    assert!(top_k(&ranking, 0).is_err());
    assert!(top_k(&ranking, ranking.entries.len() + 1).is_err());
}

fn nominal_dataset(seed: u64) -> Dataset {
    generate(&SynthConfig::new(AgeGroup::Adolescent, 120, seed).with_noise(0.1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rankings_are_permutations(seed in 0u64..1000) {
        let data = nominal_dataset(seed);
        let mut names = data.feature_names();
        names.sort();
        for method in RankingMethod::ALL {
            let ranking = rank(&data, method, &ReliefOptions::default()).unwrap();
            let mut got = ranking.attributes();
            got.sort();
            prop_assert_eq!(&got, &names);
            for pair in ranking.entries.windows(2) {
                prop_assert!(pair[0].score >= pair[1].score);
            }
        }
    }

    #[test]
    fn rankings_ignore_record_order(seed in 0u64..1000) {
        let data = nominal_dataset(seed);
        let mut order: Vec<usize> = (0..data.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed + 1));
        let shuffled = data.subset(&order);
        for method in RankingMethod::ALL {
            let a = rank(&data, method, &ReliefOptions::default()).unwrap();
            let b = rank(&shuffled, method, &ReliefOptions::default()).unwrap();
            prop_assert_eq!(a.attributes(), b.attributes(), "{}", method);
            for (x, y) in a.entries.iter().zip(&b.entries) {
                prop_assert!((x.score - y.score).abs() <= 1e-12);
            }
        }
    }
}
