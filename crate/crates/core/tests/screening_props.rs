use asd_screen_core::screening::{
    demographic_summary, generate, item_columns, response_summary, score, Demographic,
};
use asd_screen_core::{AgeGroup, ClassLabel, Dataset, Error, GroupProfile, Record, SynthConfig, Value};
use proptest::prelude::*;

fn record_with_items(group: AgeGroup, items: &[usize; 10]) -> (GroupProfile, Record) {
    let data = generate(&SynthConfig::new(group, 1, 0)).unwrap();
    let profile = GroupProfile::for_group(group);
    let cols = item_columns(data.schema()).unwrap();
    let mut record = data.records()[0].clone();
    for (&col, &v) in cols.iter().zip(items) {
        record.values[col] = Value::Nominal(v);
    }
    (profile, record)
}

fn items_with_total(total: usize) -> [usize; 10] {
    let mut items = [0; 10];
    items.iter_mut().take(total).for_each(|v| *v = 1);
    items
}

#[test]
fn scoring_rule_examples() {
    let cases = [
        (AgeGroup::Child, 10, ClassLabel::Yes),
        (AgeGroup::Toddler, 3, ClassLabel::No),
        (AgeGroup::Toddler, 4, ClassLabel::Yes),
        (AgeGroup::Child, 7, ClassLabel::Yes),
        (AgeGroup::Child, 6, ClassLabel::No),
        (AgeGroup::Adolescent, 6, ClassLabel::No),
        (AgeGroup::Adult, 7, ClassLabel::Yes),
    ];
    for (group, total, label) in cases {
        let (profile, record) = record_with_items(group, &items_with_total(total));
        let s = score(&profile.template, &record, &profile).unwrap();
        assert_eq!((s.total as usize, s.label), (total, label), "{group} {total}");
    }
}

#[test]
fn missing_item_is_an_error() {
    let (profile, mut record) = record_with_items(AgeGroup::Adult, &items_with_total(5));
    let col = item_columns(&profile.template).unwrap()[3];
    record.values[col] = Value::Missing;
    assert!(matches!(score(&profile.template, &record, &profile), Err(Error::MissingValue { .. })));
}

#[test]
fn profiles_have_expected_shapes() {
    let expected = [
        (AgeGroup::Toddler, 4, 16),
        (AgeGroup::Child, 7, 17),
        (AgeGroup::Adolescent, 7, 17),
        (AgeGroup::Adult, 7, 17),
    ];
    for (group, cutoff, count) in expected {
        let p = GroupProfile::for_group(group);
        assert_eq!(p.cutoff, cutoff);
        assert_eq!(p.attribute_count(), count);
        assert_eq!(p.template.iter().any(|a| a.name == "Residence"), group != AgeGroup::Toddler);
    }
}

#[test]
fn noise_free_labels_follow_the_rule() {
    for group in AgeGroup::ALL {
        let data = generate(&SynthConfig::new(group, 100, 5)).unwrap();
        let profile = GroupProfile::for_group(group);
        profile.check(&data).unwrap();
        for (record, label) in data.records().iter().zip(data.labels().unwrap()) {
            assert_eq!(score(data.schema(), record, &profile).unwrap().label, label);
            assert!(!record.has_missing());
        }
    }
}

#[test]
fn generator_is_deterministic() {
    let cfg = SynthConfig::new(AgeGroup::Adolescent, 200, 42).with_noise(0.1);
    assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
    let other = SynthConfig { seed: 43, ..cfg.clone() };
    assert_ne!(generate(&cfg).unwrap(), generate(&other).unwrap());
}

#[test]
fn generator_rejects_bad_probabilities() {
    let mut rates = [0.5; 10];
    rates[2] = 1.5;
    let cfg = SynthConfig::new(AgeGroup::Child, 10, 0).with_rates(rates);
    assert!(matches!(generate(&cfg), Err(Error::InvalidProbability(_))));
    let cfg = SynthConfig::new(AgeGroup::Child, 10, 0).with_noise(1.0);
    assert!(matches!(generate(&cfg), Err(Error::InvalidProbability(_))));
    assert!(generate(&SynthConfig::new(AgeGroup::Child, 0, 0)).is_err());
}

/// `P(Bin(10, 1/2) >= 7)` by exact enumeration of the binomial coefficients.
fn binomial_tail() -> f64 {
    let choose = |n: u64, k: u64| (1..=k).fold(1u64, |acc, i| acc * (n + 1 - i) / i);
    let favourable: u64 = (7..=10).map(|k| choose(10, k)).sum();
    favourable as f64 / 1024.0
}

#[test]
fn positive_rate_matches_binomial_tail() {
    assert_eq!(binomial_tail(), 176.0 / 1024.0);
    let data = generate(&SynthConfig::new(AgeGroup::Child, 1000, 9)).unwrap();
    let (_, yes) = data.class_counts().unwrap();
    let rate = yes as f64 / 1000.0;
    assert!((rate - binomial_tail()).abs() <= 0.05, "{rate}");
}

fn tally_items(data: &Dataset) -> Vec<[usize; 4]> {
    let cols = item_columns(data.schema()).unwrap();
    let labels = data.labels().unwrap();
    let mut out = vec![[0usize; 4]; 10];
    for (i, &col) in cols.iter().enumerate() {
        for (record, label) in data.records().iter().zip(&labels) {
            let one = record.values[col] == Value::Nominal(1);
            let slot = match (one, *label == ClassLabel::Yes) {
                (true, true) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 3,
            };
            out[i][slot] += 1;
        }
    }
    out
}

#[test]
fn response_summary_matches_tally() {
    let data = generate(&SynthConfig::new(AgeGroup::Child, 50, 13)).unwrap();
    let summary = response_summary(&data).unwrap();
    let oracle = tally_items(&data);
    for (s, o) in summary.iter().zip(&oracle) {
        assert_eq!([s.one_yes, s.one_no, s.zero_yes, s.zero_no], *o);
        assert_eq!(s.total(), 50);
    }
}

#[test]
fn response_summary_single_record() {
    let data = generate(&SynthConfig::new(AgeGroup::Adult, 1, 0)).unwrap();
    let (_, mut record) = record_with_items(AgeGroup::Adult, &items_with_total(10));
    let class = data.class_index().unwrap();
    record.values[class] = Value::Nominal(1);
    let data = Dataset::new(data.schema().to_vec(), vec![record], None).unwrap();
    let summary = response_summary(&data).unwrap();
    assert_eq!(summary[0].item, "A1");
    assert_eq!((summary[0].one_yes, summary[0].one_no, summary[0].zero_yes, summary[0].zero_no), (1, 0, 0, 0));
}

#[test]
fn demographic_summary_matches_tally() {
    let data = generate(&SynthConfig::new(AgeGroup::Adolescent, 50, 17)).unwrap();
    let labels = data.labels().unwrap();
    for attr in Demographic::ALL {
        let summary = demographic_summary(&data, attr).unwrap();
        let col = attr.role().locate(data.schema()).unwrap();
        let schema = &data.schema()[col];
        assert_eq!(summary.len(), schema.level_count());
        let mut total = 0;
        for (level, cell) in summary.iter().enumerate() {
            assert_eq!(cell.category, schema.level_name(level).unwrap());
            let yes = data
                .records()
                .iter()
                .zip(&labels)
                .filter(|(r, l)| r.values[col] == Value::Nominal(level) && l.is_yes())
                .count();
            let no = data
                .records()
                .iter()
                .zip(&labels)
                .filter(|(r, l)| r.values[col] == Value::Nominal(level) && !l.is_yes())
                .count();
            assert_eq!((cell.yes, cell.no), (yes, no));
            total += yes + no;
        }
        assert_eq!(total, 50);
    }
}

#[test]
fn single_record_demographics_have_one_cell() {
    let data = generate(&SynthConfig::new(AgeGroup::Toddler, 1, 3)).unwrap();
    for attr in Demographic::ALL {
        let nonzero: usize = demographic_summary(&data, attr)
            .unwrap()
            .iter()
            .filter(|c| c.yes + c.no > 0)
            .count();
        assert_eq!(nonzero, 1);
    }
}

#[test]
fn noise_free_data_is_linearly_separable() {
    for group in AgeGroup::ALL {
        let data = generate(&SynthConfig::new(group, 300, 23)).unwrap();
        let profile = GroupProfile::for_group(group);
        let cols = item_columns(data.schema()).unwrap();
        for (record, label) in data.records().iter().zip(data.labels().unwrap()) {
            let sum: f64 = cols.iter().map(|&c| record.values[c].as_f64().unwrap()).sum();
            let side = sum - (f64::from(profile.cutoff) - 0.5) > 0.0;
            assert_eq!(side, label.is_yes());
        }
    }
}

proptest! {
    #[test]
    fn score_is_permutation_invariant_and_monotone(
        items in prop::array::uniform10(0usize..2),
        shift in 0usize..10,
        flip in 0usize..10,
    ) {
        for group in AgeGroup::ALL {
            let (profile, record) = record_with_items(group, &items);
            let base = score(&profile.template, &record, &profile).unwrap();
            let mut rotated = items;
            rotated.rotate_left(shift);
            let (_, r2) = record_with_items(group, &rotated);
            prop_assert_eq!(score(&profile.template, &r2, &profile).unwrap(), base);
            let mut raised = items;
            raised[flip] = 1;
            let (_, r3) = record_with_items(group, &raised);
            let up = score(&profile.template, &r3, &profile).unwrap();
            prop_assert!(up.total >= base.total);
            prop_assert!(!(base.label == ClassLabel::Yes && up.label == ClassLabel::No));
        }
    }
}
