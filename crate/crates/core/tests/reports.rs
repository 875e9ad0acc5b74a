use cramanujan::generator::generate_with_config;
use cramanujan::rational::parse_grid;
use cramanujan::reports::{
    compare_sequences, compute_table1, emit_table1, emit_table2, parse_bfile, parse_table1_csv,
    parse_table2_csv, table1_row, table2_row, Format, Mismatch,
};
use cramanujan::{generate, RationalC, Semantics, TableConfig};
use proptest::prelude::*;

fn to_bfile(name: &str, values: &[u64]) -> String {
    let mut out = format!("# {name}\n# generated for round-trip tests\n\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{} {v}\n", i + 1));
    }
    out
}

#[test]
fn bfiles_for_the_three_sequences_round_trip() {
    for (name, c) in [("A104272", "1/2"), ("A193761", "1/4"), ("A193880", "3/4")] {
        let c: RationalC = c.parse().unwrap();
        let list = generate(&c, 1000).unwrap();
        let text = to_bfile(name, &list.values);
        let seq = parse_bfile(&text).unwrap();
        assert_eq!(seq.name, name);
        assert_eq!(seq.entries.len(), 1000);
        assert!(seq.is_increasing());
        assert_eq!(compare_sequences(&list, &seq, 1000).unwrap(), None);
    }
}

#[test]
fn first_mismatch_is_reported() {
    let c = RationalC::new(3, 4).unwrap();
    let list = generate(&c, 36).unwrap();
    let mut values = list.values.clone();
    values[20] += 2;
    values[30] += 2;
    let seq = parse_bfile(&to_bfile("A193880", &values)).unwrap();
    assert_eq!(
        compare_sequences(&list, &seq, 36).unwrap(),
        Some(Mismatch {
            index: 21,
            computed: list.values[20],
            reference: list.values[20] + 2,
        })
    );
    assert_eq!(compare_sequences(&list, &seq, 20).unwrap(), None);
}

#[test]
fn crlf_and_tabs_are_tolerated() {
    let seq = parse_bfile("# A104272\r\n1\t2\r\n2 \t 11   \r\n\r\n").unwrap();
    assert_eq!(seq.entries, vec![(1, 2), (2, 11)]);
}

#[test]
fn grid_order_is_preserved() {
    let grid = parse_grid("0.9,0.1,1/2").unwrap();
    let rows = compute_table1(&grid, 100_000, &TableConfig::default()).unwrap();
    let labels: Vec<String> = rows.iter().map(|r| table1_row(r).c).collect();
    assert_eq!(labels, ["0.90", "0.10", "0.50"]);
}

#[test]
fn generation_errors_name_the_parameter() {
    let grid = parse_grid("0.5,999999/1000000").unwrap();
    let err = compute_table1(&grid, 100_000, &TableConfig::default()).unwrap_err();
    assert!(err.to_string().starts_with("c = 999999/1000000: "), "{err}");
    assert!(matches!(err.root(), cramanujan::Error::ResourceLimit(_)));
}

#[test]
fn strict_and_integer_semantics_agree_for_one_half() {
    let c = RationalC::new(1, 2).unwrap();
    let (a, _) =
        generate_with_config(&c, 500, Semantics::IntegerSweep, &TableConfig::default()).unwrap();
    let (b, _) =
        generate_with_config(&c, 500, Semantics::StrictReal, &TableConfig::default()).unwrap();
    assert_eq!(a.values, b.values);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn table_csv_round_trips(k in 1u64..19, limit in 2_000u64..60_000) {
        let grid = vec![RationalC::new(k, 20).unwrap()];
        let rows = compute_table1(&grid, limit, &TableConfig::default()).unwrap();
        let csv = emit_table1(&rows, Format::Csv).unwrap();
        prop_assert_eq!(
            parse_table1_csv(&csv).unwrap(),
            rows.iter().map(table1_row).collect::<Vec<_>>()
        );

        let lo = limit / 4;
        let runs =
            cramanujan::reports::compute_table2(&grid, lo, limit, &TableConfig::default()).unwrap();
        let csv = emit_table2(&runs, Format::Csv).unwrap();
        prop_assert_eq!(
            parse_table2_csv(&csv).unwrap(),
            runs.iter().map(table2_row).collect::<Vec<_>>()
        );
    }
}
