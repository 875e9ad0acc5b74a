//! Reference sequences and tabular output.
//!
//! OEIS b-files are read as `index value` lines with `#` comments. Tables are
//! written as CSV (header row, LF endings, numeric fields only) or as a JSON
//! object with a `rows` array. Every printed decimal is rounded half-up; for
//! the density table the rounding is done on the exact fractions.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{for_c, Error, Result};
use crate::generator::{generate_in, interval_count, required_limit, RamanujanList, Semantics};
use crate::primes::{PrimeTable, TableConfig};
use crate::rational::RationalC;
use crate::stats::{density, run_report, DensityReport, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReferenceSequence {
    pub name: String,
    pub entries: Vec<(u64, u64)>,
}

impl ReferenceSequence {
    pub fn is_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].1 < w[1].1)
    }

    pub fn value_at(&self, index: u64) -> Option<u64> {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .ok()
            .map(|pos| self.entries[pos].1)
    }
}

/// Parses an OEIS b-file. A leading `# Axxxxxx` comment, if present, names
/// the sequence.
pub fn parse_bfile(content: &str) -> Result<ReferenceSequence> {
    let mut seq = ReferenceSequence::default();
    for (lineno, raw) in content.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if seq.name.is_empty() && seq.entries.is_empty() {
                if let Some(word) = comment.split_whitespace().next() {
                    if word.starts_with('A') && word[1..].chars().all(|ch| ch.is_ascii_digit()) {
                        seq.name = word.to_string();
                    }
                }
            }
            continue;
        }
        let line_no = lineno + 1;
        let mut fields = line.split_whitespace();
        let (Some(i), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `index value`, found `{line}`"),
            });
        };
        let parse = |s: &str| {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("`{s}` is not a non-negative integer"),
            })
        };
        let (index, value) = (parse(i)?, parse(v)?);
        if let Some(&(prev, _)) = seq.entries.last() {
            if index <= prev {
                return Err(Error::Validation(format!(
                    "line {line_no}: index {index} does not increase after {prev}"
                )));
            }
        }
        seq.entries.push((index, value));
    }
    Ok(seq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: u64,
    pub computed: u64,
    pub reference: u64,
}

/// First index in `1..=n_limit` where the two sequences differ.
pub fn compare_sequences(
    computed: &RamanujanList,
    reference: &ReferenceSequence,
    n_limit: u64,
) -> Result<Option<Mismatch>> {
    if computed.n_max < n_limit {
        return Err(Error::invalid(format!(
            "computed list is short: n_max = {} < {n_limit}",
            computed.n_max
        )));
    }
    let by_index: BTreeMap<u64, u64> = reference.entries.iter().copied().collect();
    for n in 1..=n_limit {
        let Some(&want) = by_index.get(&n) else {
            return Err(Error::invalid(format!(
                "reference sequence is short: no entry for index {n}"
            )));
        };
        let got = computed.get(n).expect("n <= n_max");
        if got != want {
            return Ok(Some(Mismatch {
                index: n,
                computed: got,
                reference: want,
            }));
        }
    }
    Ok(None)
}

/// `num/den` rounded half-up to `places` decimals, computed exactly.
pub fn round_half_up_ratio(num: u128, den: u128, places: u32) -> String {
    assert!(den > 0, "zero denominator");
    let scale = 10u128.pow(places);
    let scaled = (2 * num * scale + den) / (2 * den);
    let int = scaled / scale;
    let frac = scaled % scale;
    if places == 0 {
        int.to_string()
    } else {
        format!("{int}.{frac:0width$}", width = places as usize)
    }
}

/// Half-up rounding of a float to the nearest integer.
pub fn round_half_up(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

fn c_label(c: &RationalC) -> String {
    c.display_decimal(2)
}

fn shared_table(
    grid: &[RationalC],
    at: u64,
    config: &TableConfig,
) -> Result<(PrimeTable, Vec<u64>)> {
    if grid.is_empty() {
        return Err(Error::invalid("the c grid is empty"));
    }
    let probe = PrimeTable::build_with(at.max(2), config)?;
    let mut n_max = Vec::with_capacity(grid.len());
    let mut need = probe.limit();
    for c in grid {
        let n = interval_count(&probe, c, at).map_err(for_c(c))?.max(1);
        need = need.max(required_limit(c, n, Semantics::IntegerSweep).map_err(for_c(c))?);
        n_max.push(n);
    }
    if need <= probe.limit() {
        return Ok((probe, n_max));
    }
    drop(probe);
    Ok((PrimeTable::build_with(need, config)?, n_max))
}

/// Generates every c-Ramanujan prime up to `at` for each grid value, sharing
/// one prime table across worker threads. Output order follows the grid.
pub fn generate_grid(
    grid: &[RationalC],
    at: u64,
    config: &TableConfig,
) -> Result<(Vec<RamanujanList>, PrimeTable)> {
    let (table, n_max) = shared_table(grid, at, config)?;
    let lists = grid
        .par_iter()
        .zip(n_max.par_iter())
        .map(|(c, &n)| generate_in(&table, c, n, Semantics::IntegerSweep).map_err(for_c(c)))
        .collect::<Result<Vec<_>>>()?;
    Ok((lists, table))
}

pub fn compute_table1(
    grid: &[RationalC],
    limit: u64,
    config: &TableConfig,
) -> Result<Vec<DensityReport<f64>>> {
    let (lists, table) = generate_grid(grid, limit, config)?;
    lists
        .par_iter()
        .map(|list| density::<f64>(list, &table, limit).map_err(for_c(&list.c)))
        .collect()
}

pub fn compute_table2(
    grid: &[RationalC],
    lo: u64,
    hi: u64,
    config: &TableConfig,
) -> Result<Vec<RunReport<f64>>> {
    if lo >= hi {
        return Err(Error::invalid(format!("need lo < hi, got ({lo}, {hi})")));
    }
    let (lists, table) = generate_grid(grid, hi, config)?;
    lists
        .par_iter()
        .map(|list| run_report::<f64>(&table, list, lo, hi).map_err(for_c(&list.c)))
        .collect()
}

/// One printed density-table row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub c: String,
    pub expected_density: String,
    pub actual_density: String,
    pub ratio: String,
}

#[derive(Debug, Clone, Serialize)]
struct Table1JsonRow {
    #[serde(flatten)]
    printed: Table1Row,
    c_exact: String,
    expected_density_raw: f64,
    actual_density_raw: f64,
    ratio_raw: Option<f64>,
    pi_c: u64,
    pi: u64,
    r_last: Option<u64>,
    asymptotic_prime: Option<u64>,
}

pub fn table1_row(rep: &DensityReport<f64>) -> Table1Row {
    let c = rep.c;
    Table1Row {
        c: c_label(&c),
        expected_density: round_half_up_ratio(
            (c.denominator() - c.numerator()) as u128,
            c.denominator() as u128,
            4,
        ),
        actual_density: round_half_up_ratio(rep.pi_c as u128, rep.pi.max(1) as u128, 4),
        ratio: match (rep.r_last, rep.asymptotic_prime) {
            (Some(r), Some(p)) => round_half_up_ratio(r as u128, p as u128, 4),
            _ => "nan".to_string(),
        },
    }
}

#[derive(Serialize)]
struct JsonDoc<'a, R: Serialize> {
    #[serde(skip_serializing_if = "Option::is_none")]
    limit: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lo: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hi: Option<u64>,
    rows: &'a [R],
}

fn write_csv<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| Error::invalid(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::invalid(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report rows serialize");
    s.push('\n');
    s
}

pub fn emit_table1(rows: &[DensityReport<f64>], format: Format) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::invalid("no rows to emit"));
    }
    match format {
        Format::Csv => write_csv(&rows.iter().map(table1_row).collect::<Vec<_>>()),
        Format::Json => {
            let json_rows: Vec<Table1JsonRow> = rows
                .iter()
                .map(|r| Table1JsonRow {
                    printed: table1_row(r),
                    c_exact: r.c.to_string(),
                    expected_density_raw: r.expected_density,
                    actual_density_raw: r.actual_density,
                    ratio_raw: r.ratio_last,
                    pi_c: r.pi_c,
                    pi: r.pi,
                    r_last: r.r_last,
                    asymptotic_prime: r.asymptotic_prime,
                })
                .collect();
            Ok(to_json(&JsonDoc {
                limit: Some(rows[0].limit),
                lo: None,
                hi: None,
                rows: &json_rows,
            }))
        }
    }
}

/// One printed run-length row; expected values rounded half-up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Row {
    pub c: String,
    pub expected_ram: i64,
    pub actual_ram: u64,
    pub expected_nonram: i64,
    pub actual_nonram: u64,
}

#[derive(Debug, Clone, Serialize)]
struct Table2JsonRow {
    #[serde(flatten)]
    printed: Table2Row,
    c_exact: String,
    expected_ram_raw: f64,
    expected_nonram_raw: f64,
    variance_ram: f64,
    variance_nonram: f64,
    variance_remainder_bound: f64,
    n_primes: u64,
    n_ramanujan: u64,
    p_ramanujan: f64,
}

pub fn table2_row(rep: &RunReport<f64>) -> Table2Row {
    Table2Row {
        c: c_label(&rep.c),
        expected_ram: round_half_up(rep.longest_ram_expected),
        actual_ram: rep.longest_ram_actual,
        expected_nonram: round_half_up(rep.longest_nonram_expected),
        actual_nonram: rep.longest_nonram_actual,
    }
}

pub fn emit_table2(rows: &[RunReport<f64>], format: Format) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::invalid("no rows to emit"));
    }
    match format {
        Format::Csv => write_csv(&rows.iter().map(table2_row).collect::<Vec<_>>()),
        Format::Json => {
            let json_rows: Vec<Table2JsonRow> = rows
                .iter()
                .map(|r| Table2JsonRow {
                    printed: table2_row(r),
                    c_exact: r.c.to_string(),
                    expected_ram_raw: r.longest_ram_expected,
                    expected_nonram_raw: r.longest_nonram_expected,
                    variance_ram: r.variance_ram,
                    variance_nonram: r.variance_nonram,
                    variance_remainder_bound: r.variance_remainder_bound,
                    n_primes: r.n_primes,
                    n_ramanujan: r.n_ramanujan,
                    p_ramanujan: r.p_ramanujan,
                })
                .collect();
            Ok(to_json(&JsonDoc {
                limit: None,
                lo: Some(rows[0].lo),
                hi: Some(rows[0].hi),
                rows: &json_rows,
            }))
        }
    }
}

fn read_csv<R: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<R>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::Parse {
                line: i + 2,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn parse_table1_csv(text: &str) -> Result<Vec<Table1Row>> {
    read_csv(text)
}

pub fn parse_table2_csv(text: &str) -> Result<Vec<Table2Row>> {
    read_csv(text)
}
