use asd_screen_core::screening::generate;
use asd_screen_core::tabular::{parse_arff, parse_csv, preprocess, preprocess_with_summary, serialize_csv};
use asd_screen_core::{AgeGroup, GroupProfile, SynthConfig, Value};

const CHILD_ARFF: &str = "\
@relation child
@attribute A1_Score {0,1}
@attribute A2_Score {0,1}
@attribute A3_Score {0,1}
@attribute A4_Score {0,1}
@attribute A5_Score {0,1}
@attribute A6_Score {0,1}
@attribute A7_Score {0,1}
@attribute A8_Score {0,1}
@attribute A9_Score {0,1}
@attribute A10_Score {0,1}
@attribute age numeric
@attribute gender {m,f}
@attribute ethnicity {Others,'Middle Eastern ',White-European,Asian}
@attribute jundice {no,yes}
@attribute austim {no,yes}
@attribute contry_of_res {Jordan,'United States',Egypt}
@attribute used_app_before {no,yes}
@attribute result numeric
@attribute age_desc {'4-11 years'}
@attribute relation {Parent,Self,Relative}
@attribute Class/ASD {NO,YES}
@data
1,1,0,0,1,1,0,1,0,0,6,m,Others,no,no,Jordan,no,5,'4-11 years',Parent,NO
1,1,0,0,1,1,0,1,0,0,6,m,'Middle Eastern ',no,no,Jordan,no,5,'4-11 years',Parent,NO
1,1,1,1,1,1,1,1,1,1,?,f,?,yes,no,Egypt,no,10,'4-11 years',?,YES
0,1,1,1,1,1,0,1,1,1,7,f,White-European,no,yes,'United States',yes,8,'4-11 years',Relative,YES
1,0,1,0,1,0,1,0,1,0,9,m,Asian,no,no,Egypt,no,5,'4-11 years',Self,NO
";

const TODDLER_ARFF: &str = "\
@relation toddler
@attribute Case_No numeric
@attribute A1 {0,1}
@attribute A2 {0,1}
@attribute A3 {0,1}
@attribute A4 {0,1}
@attribute A5 {0,1}
@attribute A6 {0,1}
@attribute A7 {0,1}
@attribute A8 {0,1}
@attribute A9 {0,1}
@attribute A10 {0,1}
@attribute Age_Mons numeric
@attribute Qchat-10-Score numeric
@attribute Sex {f,m}
@attribute Ethnicity {asian,black,'middle eastern'}
@attribute Jaundice {no,yes}
@attribute Family_mem_with_ASD {no,yes}
@attribute 'Who completed the test' {'family member','health care professional'}
@attribute 'Class/ASD Traits ' {No,Yes}
@data
1,0,0,0,0,0,0,1,1,0,1,28,3,f,'middle eastern',yes,no,'family member',No
2,1,1,0,0,0,1,1,0,0,0,36,4,m,asian,yes,no,'family member',Yes
3,1,0,0,0,0,0,1,1,0,1,36,4,m,black,yes,no,'health care professional',Yes
";

#[test]
fn child_layout_has_seventeen_attributes() {
    let raw = parse_arff(CHILD_ARFF).unwrap();
    assert_eq!(raw.schema().len(), 21);
    let (data, summary) = preprocess_with_summary(&raw).unwrap();
    assert_eq!(data.schema().len(), 17);
    assert_eq!(summary.dropped_attributes, ["used_app_before", "result", "age_desc", "relation"]);
    assert_eq!((summary.removed_records, data.len()), (1, 4));
    GroupProfile::for_group(AgeGroup::Child).check(&data).unwrap();
}

#[test]
fn toddler_layout_has_sixteen_attributes() {
    let (data, summary) = preprocess_with_summary(&parse_arff(TODDLER_ARFF).unwrap()).unwrap();
    assert_eq!(data.schema().len(), 16);
    assert_eq!(summary.dropped_attributes.len(), 3);
    assert_eq!(summary.removed_records, 0);
    GroupProfile::for_group(AgeGroup::Toddler).check(&data).unwrap();
}

#[test]
fn preprocess_is_idempotent() {
    let once = preprocess(&parse_arff(CHILD_ARFF).unwrap()).unwrap();
    let (twice, summary) = preprocess_with_summary(&once).unwrap();
    assert_eq!(once, twice);
    assert!(summary.dropped_attributes.is_empty());
    assert_eq!(summary.removed_records, 0);
}

#[test]
fn arff_to_csv_and_back() {
    let data = preprocess(&parse_arff(CHILD_ARFF).unwrap()).unwrap();
    let csv = serialize_csv(&data);
    let again = parse_csv(&csv, data.schema()).unwrap();
    assert_eq!(again, data);
    assert_eq!(serialize_csv(&again), csv);
    assert!(csv.starts_with("A1_Score,"));
    assert!(csv.lines().nth(2).unwrap().contains("Middle Eastern"));
}

#[test]
fn missing_cells_survive_csv() {
    let raw = parse_arff(CHILD_ARFF).unwrap();
    let again = parse_csv(&serialize_csv(&raw), raw.schema()).unwrap();
    assert_eq!(again, raw);
    assert_eq!(again.records()[2].values[10], Value::Missing);
}

#[test]
fn synthetic_data_round_trips_through_csv() {
    for group in AgeGroup::ALL {
        let data = generate(&SynthConfig::new(group, 50, 2)).unwrap();
        let again = parse_csv(&serialize_csv(&data), data.schema()).unwrap();
        assert_eq!(again.records(), data.records());
        assert_eq!(again.schema(), data.schema());
    }
}
