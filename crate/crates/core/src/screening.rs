//! AQ-10 domain knowledge: group profiles, the scoring rule, attribute roles,
//! a synthetic dataset generator and response/demographic tallies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::{
    canonical_name, item_number, AgeGroup, AttributeKind, AttributeSchema, ClassLabel, Dataset,
    Record, Value,
};

pub const ITEM_COUNT: usize = 10;

const GENDERS: [&str; 2] = ["f", "m"];
const YES_NO: [&str; 2] = ["no", "yes"];
const ETHNICITIES: [&str; 10] = [
    "Asian",
    "Black",
    "Hispanic",
    "Latino",
    "Middle Eastern",
    "Pasifika",
    "South Asian",
    "Turkish",
    "White-European",
    "Others",
];
const RESIDENCES: [&str; 10] = [
    "Australia",
    "Brazil",
    "Canada",
    "Egypt",
    "India",
    "Jordan",
    "New Zealand",
    "United Arab Emirates",
    "United Kingdom",
    "United States",
];

/// Semantic role of a column, resolved through the spellings used by the
/// public screening files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Item(u8),
    Age,
    Gender,
    Ethnicity,
    Jaundice,
    FamilyAsd,
    Residence,
    Class,
}

impl Role {
    fn aliases(self) -> &'static [&'static str] {
        match self {
            Role::Item(_) | Role::Class => &[],
            Role::Age => &["age", "agemons", "ageyears"],
            Role::Gender => &["gender", "sex"],
            Role::Ethnicity => &["ethnicity"],
            Role::Jaundice => &["jaundice", "jundice", "bornwithjaundice"],
            Role::FamilyAsd => &[
                "familyasd",
                "austim",
                "autism",
                "familymemwithasd",
                "familymemberwithpdd",
            ],
            Role::Residence => &[
                "residence",
                "contryofres",
                "countryofres",
                "countryofresidence",
            ],
        }
    }

    pub fn locate(self, schema: &[AttributeSchema]) -> Option<usize> {
        match self {
            Role::Class => schema.iter().position(|a| a.kind == AttributeKind::Class),
            Role::Item(n) => schema
                .iter()
                .position(|a| a.kind != AttributeKind::Class && item_number(&a.name) == Some(n)),
            _ => schema
                .iter()
                .position(|a| self.aliases().contains(&canonical_name(&a.name).as_str())),
        }
    }
}

/// Demographic attributes with per-category summaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Demographic {
    Gender,
    Jaundice,
    FamilyAsd,
    Ethnicity,
}

impl Demographic {
    pub const ALL: [Demographic; 4] = [
        Demographic::Gender,
        Demographic::Jaundice,
        Demographic::FamilyAsd,
        Demographic::Ethnicity,
    ];

    pub fn role(self) -> Role {
        match self {
            Demographic::Gender => Role::Gender,
            Demographic::Jaundice => Role::Jaundice,
            Demographic::FamilyAsd => Role::FamilyAsd,
            Demographic::Ethnicity => Role::Ethnicity,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Demographic::Gender => "Gender",
            Demographic::Jaundice => "Jaundice",
            Demographic::FamilyAsd => "Family_ASD",
            Demographic::Ethnicity => "Ethnicity",
        }
    }
}

/// Scoring cutoff and post-preprocessing attribute layout of one age group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupProfile {
    pub group: AgeGroup,
    pub cutoff: u8,
    pub template: Vec<AttributeSchema>,
}

impl GroupProfile {
    pub fn for_group(group: AgeGroup) -> Self {
        let cutoff = match group {
            AgeGroup::Toddler => 4,
            AgeGroup::Child | AgeGroup::Adolescent | AgeGroup::Adult => 7,
        };
        let mut template: Vec<AttributeSchema> = (1..=ITEM_COUNT)
            .map(|i| AttributeSchema::binary_item(format!("A{i}")))
            .collect();
        template.push(AttributeSchema::numeric("Age"));
        template.push(AttributeSchema::categorical("Gender", GENDERS));
        template.push(AttributeSchema::categorical("Ethnicity", ETHNICITIES));
        template.push(AttributeSchema::categorical("Jaundice", YES_NO));
        template.push(AttributeSchema::categorical("Family_ASD", YES_NO));
        if group != AgeGroup::Toddler {
            template.push(AttributeSchema::categorical("Residence", RESIDENCES));
        }
        template.push(AttributeSchema::class("Class"));
        GroupProfile {
            group,
            cutoff,
            template,
        }
    }

    /// Attribute count after preprocessing, class included.
    pub fn attribute_count(&self) -> usize {
        self.template.len()
    }

    /// Synthetic age range (months for toddlers, years otherwise).
    fn age_range(&self) -> (u32, u32) {
        match self.group {
            AgeGroup::Toddler => (12, 36),
            AgeGroup::Child => (4, 11),
            AgeGroup::Adolescent => (12, 16),
            AgeGroup::Adult => (18, 64),
        }
    }

    /// Checks that a preprocessed dataset has this group's layout: every role
    /// present and the expected attribute count.
    pub fn check(&self, data: &Dataset) -> Result<()> {
        if data.schema().len() != self.attribute_count() {
            return Err(Error::SchemaMismatch(format!(
                "{} data should have {} attributes, found {}",
                self.group,
                self.attribute_count(),
                data.schema().len()
            )));
        }
        let mut roles: Vec<Role> = (1..=ITEM_COUNT as u8).map(Role::Item).collect();
        roles.extend([Role::Age, Role::Gender, Role::Ethnicity, Role::Jaundice, Role::FamilyAsd]);
        if self.group != AgeGroup::Toddler {
            roles.push(Role::Residence);
        }
        for role in roles {
            if role.locate(data.schema()).is_none() {
                return Err(Error::SchemaMismatch(format!("no attribute for {role:?}")));
            }
        }
        Ok(())
    }
}

/// Positions of A1..A10 in a schema.
pub fn item_columns(schema: &[AttributeSchema]) -> Result<[usize; ITEM_COUNT]> {
    let mut cols = [0; ITEM_COUNT];
    for (i, col) in cols.iter_mut().enumerate() {
        let n = i as u8 + 1;
        *col = Role::Item(n)
            .locate(schema)
            .ok_or_else(|| Error::UnknownAttribute(format!("A{n}")))?;
    }
    Ok(cols)
}

/// Summed AQ score and the label the cutoff assigns to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Score {
    pub total: u8,
    pub label: ClassLabel,
}

pub fn label_for(total: u8, profile: &GroupProfile) -> ClassLabel {
    if total >= profile.cutoff {
        ClassLabel::Yes
    } else {
        ClassLabel::No
    }
}

/// Scores one record: the sum of A1..A10, labelled `yes` iff it reaches the
/// group cutoff.
pub fn score(schema: &[AttributeSchema], record: &Record, profile: &GroupProfile) -> Result<Score> {
    let cols = item_columns(schema)?;
    let mut total = 0u8;
    for col in cols {
        match record.values.get(col).and_then(Value::as_f64) {
            Some(v) if v == 0.0 || v == 1.0 => total += v as u8,
            Some(v) => {
                return Err(Error::InvalidParameter(format!(
                    "item `{}` has non-binary value {v}",
                    schema[col].name
                )))
            }
            None => {
                return Err(Error::MissingValue {
                    attribute: schema[col].name.clone(),
                    record: 0,
                })
            }
        }
    }
    Ok(Score {
        total,
        label: label_for(total, profile),
    })
}

/// Synthetic dataset settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub group: AgeGroup,
    pub n: usize,
    pub seed: u64,
    /// Probability that each of A1..A10 is answered 1.
    pub item_rates: [f64; ITEM_COUNT],
    /// Probability of flipping each rule-derived label.
    pub label_noise: f64,
}

impl SynthConfig {
    pub fn new(group: AgeGroup, n: usize, seed: u64) -> Self {
        SynthConfig {
            group,
            n,
            seed,
            item_rates: [0.5; ITEM_COUNT],
            label_noise: 0.0,
        }
    }

    pub fn with_noise(mut self, label_noise: f64) -> Self {
        self.label_noise = label_noise;
        self
    }

    pub fn with_rates(mut self, item_rates: [f64; ITEM_COUNT]) -> Self {
        self.item_rates = item_rates;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("record count must be at least 1".into()));
        }
        if let Some(&p) = self.item_rates.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProbability(p));
        }
        if !(0.0..1.0).contains(&self.label_noise) {
            return Err(Error::InvalidProbability(self.label_noise));
        }
        Ok(())
    }
}

/// Draws a complete (missing-free) dataset in the group's preprocessed layout.
///
/// Items are independent Bernoulli draws; demographics are uniform over the
/// template categories; the label comes from [`score`] and is flipped with
/// probability `label_noise`. Deterministic per config.
pub fn generate(config: &SynthConfig) -> Result<Dataset> {
    config.validate()?;
    let profile = GroupProfile::for_group(config.group);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (age_lo, age_hi) = profile.age_range();

    let mut records = Vec::with_capacity(config.n);
    for _ in 0..config.n {
        let mut values = Vec::with_capacity(profile.template.len());
        let mut total = 0u8;
        for &p in &config.item_rates {
            let bit = rng.random::<f64>() < p;
            total += bit as u8;
            values.push(Value::Nominal(bit as usize));
        }
        values.push(Value::Numeric(rng.random_range(age_lo..=age_hi) as f64));
        for attr in &profile.template[ITEM_COUNT + 1..profile.template.len() - 1] {
            values.push(Value::Nominal(rng.random_range(0..attr.categories.len())));
        }
        let mut label = label_for(total, &profile);
        if rng.random::<f64>() < config.label_noise {
            label = match label {
                ClassLabel::No => ClassLabel::Yes,
                ClassLabel::Yes => ClassLabel::No,
            };
        }
        values.push(Value::Nominal(label.index()));
        records.push(Record::new(values));
    }
    Dataset::new(profile.template, records, Some(config.group))
}

/// Tally of one item split by answer and class.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ItemResponse {
    pub item: String,
    pub one_yes: usize,
    pub one_no: usize,
    pub zero_yes: usize,
    pub zero_no: usize,
}

impl ItemResponse {
    pub fn total(&self) -> usize {
        self.one_yes + self.one_no + self.zero_yes + self.zero_no
    }
}

/// Per-item (answer x class) counts for A1..A10.
pub fn response_summary(data: &Dataset) -> Result<Vec<ItemResponse>> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let cols = item_columns(data.schema())?;
    let labels = data.labels()?;
    let mut out: Vec<ItemResponse> = cols
        .iter()
        .map(|&c| ItemResponse {
            item: data.schema()[c].name.clone(),
            ..Default::default()
        })
        .collect();
    for (row, (record, label)) in data.records().iter().zip(&labels).enumerate() {
        for (summary, &col) in out.iter_mut().zip(&cols) {
            let answer = record.values[col].as_f64().ok_or_else(|| Error::MissingValue {
                attribute: summary.item.clone(),
                record: row,
            })?;
            let slot = match (answer != 0.0, label.is_yes()) {
                (true, true) => &mut summary.one_yes,
                (true, false) => &mut summary.one_no,
                (false, true) => &mut summary.zero_yes,
                (false, false) => &mut summary.zero_no,
            };
            *slot += 1;
        }
    }
    Ok(out)
}

/// Class split for one category of a demographic attribute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CategoryCount {
    pub category: String,
    pub yes: usize,
    pub no: usize,
}

/// Per-category (yes, no) counts, in declared category order.
pub fn demographic_summary(data: &Dataset, attr: Demographic) -> Result<Vec<CategoryCount>> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let col = attr
        .role()
        .locate(data.schema())
        .ok_or_else(|| Error::UnknownAttribute(attr.as_str().to_string()))?;
    let schema = &data.schema()[col];
    if !schema.is_nominal() {
        return Err(Error::SchemaMismatch(format!("`{}` is not nominal", schema.name)));
    }
    let labels = data.labels()?;
    let mut out: Vec<CategoryCount> = (0..schema.level_count())
        .map(|i| CategoryCount {
            category: schema.level_name(i).unwrap_or_default().to_string(),
            yes: 0,
            no: 0,
        })
        .collect();
    for (row, (record, label)) in data.records().iter().zip(&labels).enumerate() {
        let level = record.values[col].as_level().ok_or_else(|| Error::MissingValue {
            attribute: schema.name.clone(),
            record: row,
        })?;
        if label.is_yes() {
            out[level].yes += 1;
        } else {
            out[level].no += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items_record(profile: &GroupProfile, ones: usize) -> Record {
        let mut values: Vec<Value> = (0..ITEM_COUNT)
            .map(|i| Value::Nominal(usize::from(i < ones)))
            .collect();
        values.resize(profile.template.len(), Value::Nominal(0));
        values[ITEM_COUNT] = Value::Numeric(5.0);
        Record::new(values)
    }

    fn score_of(group: AgeGroup, ones: usize) -> Score {
        let profile = GroupProfile::for_group(group);
        score(&profile.template, &items_record(&profile, ones), &profile).unwrap()
    }

    #[test]
    fn cutoffs() {
        assert_eq!(GroupProfile::for_group(AgeGroup::Toddler).cutoff, 4);
        for g in [AgeGroup::Child, AgeGroup::Adolescent, AgeGroup::Adult] {
            assert_eq!(GroupProfile::for_group(g).cutoff, 7);
        }
    }

    #[test]
    fn scoring_examples() {
        assert_eq!(score_of(AgeGroup::Child, 10), Score { total: 10, label: ClassLabel::Yes });
        assert_eq!(score_of(AgeGroup::Toddler, 3).label, ClassLabel::No);
        assert_eq!(score_of(AgeGroup::Toddler, 4).label, ClassLabel::Yes);
        assert_eq!(score_of(AgeGroup::Child, 7), Score { total: 7, label: ClassLabel::Yes });
        assert_eq!(score_of(AgeGroup::Child, 6), Score { total: 6, label: ClassLabel::No });
    }

    #[test]
    fn missing_item_is_an_error() {
        let profile = GroupProfile::for_group(AgeGroup::Adult);
        let mut record = items_record(&profile, 5);
        record.values[3] = Value::Missing;
        assert!(matches!(
            score(&profile.template, &record, &profile),
            Err(Error::MissingValue { .. })
        ));
    }

    #[test]
    fn template_sizes() {
        assert_eq!(GroupProfile::for_group(AgeGroup::Toddler).attribute_count(), 16);
        for g in [AgeGroup::Child, AgeGroup::Adolescent, AgeGroup::Adult] {
            assert_eq!(GroupProfile::for_group(g).attribute_count(), 17);
        }
    }

    #[test]
    fn roles_resolve_public_spellings() {
        let schema = vec![
            AttributeSchema::binary_item("A1_Score"),
            AttributeSchema::numeric("age"),
            AttributeSchema::categorical("jundice", YES_NO),
            AttributeSchema::categorical("austim", YES_NO),
            AttributeSchema::categorical("contry_of_res", ["x"]),
            AttributeSchema::categorical("Sex", GENDERS),
            AttributeSchema::class("Class/ASD"),
        ];
        assert_eq!(Role::Item(1).locate(&schema), Some(0));
        assert_eq!(Role::Age.locate(&schema), Some(1));
        assert_eq!(Role::Jaundice.locate(&schema), Some(2));
        assert_eq!(Role::FamilyAsd.locate(&schema), Some(3));
        assert_eq!(Role::Residence.locate(&schema), Some(4));
        assert_eq!(Role::Gender.locate(&schema), Some(5));
        assert_eq!(Role::Class.locate(&schema), Some(6));
        assert_eq!(Role::Ethnicity.locate(&schema), None);
    }

    #[test]
    fn generator_without_noise_follows_the_rule() {
        let data = generate(&SynthConfig::new(AgeGroup::Child, 100, 1)).unwrap();
        let profile = GroupProfile::for_group(AgeGroup::Child);
        let labels = data.labels().unwrap();
        for (record, label) in data.records().iter().zip(labels) {
            assert_eq!(score(data.schema(), record, &profile).unwrap().label, label);
        }
        profile.check(&data).unwrap();
    }

    #[test]
    fn generator_is_deterministic() {
        let cfg = SynthConfig::new(AgeGroup::Adult, 50, 99).with_noise(0.1);
        assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
        let other = SynthConfig { seed: 100, ..cfg };
        assert_ne!(generate(&other).unwrap(), generate(&SynthConfig::new(AgeGroup::Adult, 50, 99).with_noise(0.1)).unwrap());
    }

    #[test]
    fn generator_rejects_bad_probabilities() {
        let mut rates = [0.5; ITEM_COUNT];
        rates[2] = 1.5;
        let cfg = SynthConfig::new(AgeGroup::Child, 10, 0).with_rates(rates);
        assert!(matches!(generate(&cfg), Err(Error::InvalidProbability(_))));
        let cfg = SynthConfig::new(AgeGroup::Child, 10, 0).with_noise(1.0);
        assert!(matches!(generate(&cfg), Err(Error::InvalidProbability(_))));
        assert!(generate(&SynthConfig::new(AgeGroup::Child, 0, 0)).is_err());
    }

    #[test]
    fn toddler_layout_has_no_residence() {
        let data = generate(&SynthConfig::new(AgeGroup::Toddler, 5, 3)).unwrap();
        assert_eq!(data.schema().len(), 16);
        assert!(Role::Residence.locate(data.schema()).is_none());
    }

    #[test]
    fn single_record_summaries() {
        let profile = GroupProfile::for_group(AgeGroup::Child);
        let mut record = items_record(&profile, 1);
        let class = profile.template.len() - 1;
        record.values[class] = Value::Nominal(1);
        let data = Dataset::new(profile.template.clone(), vec![record], None).unwrap();

        let responses = response_summary(&data).unwrap();
        assert_eq!(responses[0], ItemResponse { item: "A1".into(), one_yes: 1, ..Default::default() });
        assert!(responses.iter().all(|r| r.total() == 1));

        let gender = demographic_summary(&data, Demographic::Gender).unwrap();
        let nonzero: usize = gender.iter().filter(|c| c.yes + c.no > 0).count();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn summaries_reject_empty_data() {
        let data = generate(&SynthConfig::new(AgeGroup::Child, 3, 3)).unwrap().subset(&[]);
        assert!(matches!(response_summary(&data), Err(Error::EmptyDataset)));
        assert!(matches!(demographic_summary(&data, Demographic::Ethnicity), Err(Error::EmptyDataset)));
    }
}
