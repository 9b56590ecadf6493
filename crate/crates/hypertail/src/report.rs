//! Grid verification of the soundness chain and deterministic report
//! serialization.
//!
//! A sweep walks (N, M, n, k) tuples in lexicographic order and records,
//! per tuple, the exact tail next to both analytic ceilings. A row is
//! sound when
//!
//! ```text
//! exact <= hoeffding + 1e-12  and  hoeffding <= relaxed + 1e-12
//! ```
//!
//! Reports serialize to CSV and JSON byte-reproducibly: fixed row order,
//! fixed column order, floats in Rust's shortest round-trip form (at most
//! 17 significant digits, '.' decimal point), exact rationals as `num/den`
//! strings.

use num::rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{BoundForm, TailSide, TailSpec};
use crate::dist::{ExactProb, Hypergeometric};
use crate::error::{Error, Result};
use crate::numeric;

/// Float tolerance on the bound side of every soundness comparison.
pub const SOUNDNESS_TOL: f64 = 1e-12;

/// How to pick whites (M) or draws (n) for each population size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueRule {
    /// Every value permitted by the urn invariants.
    AllValid,
    /// Only the listed values; entries invalid for a given N are skipped.
    Explicit(Vec<u64>),
}

/// How to pick thresholds for each (N, M, n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThresholdRule {
    /// Every integer threshold on the chosen side with deviation t >= 0.
    AllNonNegativeT,
    /// Only the listed thresholds; t < 0 rows are kept and flagged vacuous.
    Explicit(Vec<i64>),
}

/// A verification sweep: population range, value rules, and tail side.
///
/// Tuples with n = 0 are always skipped; no deviation is defined there.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    population_lo: u64,
    population_hi: u64,
    pub whites: ValueRule,
    pub draws: ValueRule,
    pub thresholds: ThresholdRule,
    pub side: TailSide,
}

impl GridSpec {
    /// A full sweep of the inclusive population range on the given side.
    pub fn exhaustive(population_lo: u64, population_hi: u64, side: TailSide) -> Result<Self> {
        if population_lo > population_hi {
            return Err(Error::EmptyRange {
                lo: population_lo,
                hi: population_hi,
            });
        }
        Ok(GridSpec {
            population_lo,
            population_hi,
            whites: ValueRule::AllValid,
            draws: ValueRule::AllValid,
            thresholds: ThresholdRule::AllNonNegativeT,
            side,
        })
    }

    pub fn population_range(&self) -> (u64, u64) {
        (self.population_lo, self.population_hi)
    }

    fn values(rule: &ValueRule, population: u64) -> Vec<u64> {
        match rule {
            ValueRule::AllValid => (0..=population).collect(),
            ValueRule::Explicit(list) => list
                .iter()
                .copied()
                .filter(|&v| v <= population)
                .collect(),
        }
    }

    fn thresholds(&self, params: &Hypergeometric) -> Vec<i64> {
        match &self.thresholds {
            ThresholdRule::Explicit(list) => list.clone(),
            ThresholdRule::AllNonNegativeT => {
                let n = params.draws() as u128;
                let m = params.whites() as u128;
                let population = params.population() as u128;
                // mean boundary n*M/N, as ceil and floor without rounding
                match self.side {
                    // k in [ceil(nM/N), n] has t = k/n - M/N >= 0
                    TailSide::Upper => {
                        let lo = ((n * m).div_ceil(population)) as i64;
                        (lo..=params.draws() as i64).collect()
                    }
                    // k' in [0, floor(nM/N)] has t = M/N - k'/n >= 0
                    TailSide::Lower => {
                        let hi = ((n * m) / population) as i64;
                        (0..=hi).collect()
                    }
                }
            }
        }
    }
}

/// One verified grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub population: u64,
    pub whites: u64,
    pub draws: u64,
    pub threshold: i64,
    pub t: BigRational,
    pub exact_tail: ExactProb,
    pub hoeffding: f64,
    pub relaxed: f64,
    pub vacuous: bool,
}

impl VerifyRow {
    pub fn t_f64(&self) -> f64 {
        numeric::ratio_to_f64(&self.t)
    }

    pub fn exact_f64(&self) -> f64 {
        self.exact_tail.to_f64()
    }

    /// Margin of the first chain link: hoeffding - exact.
    pub fn slack_hoeffding(&self) -> f64 {
        self.hoeffding - self.exact_f64()
    }

    /// Margin of the second chain link: relaxed - hoeffding.
    pub fn slack_relaxed(&self) -> f64 {
        self.relaxed - self.hoeffding
    }

    pub fn sound(&self) -> bool {
        self.exact_f64() <= self.hoeffding + SOUNDNESS_TOL
            && self.hoeffding <= self.relaxed + SOUNDNESS_TOL
    }
}

/// Aggregates of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub rows: u64,
    pub violations: u64,
    pub vacuous_rows: u64,
    pub max_slack_hoeffding: f64,
    pub max_slack_relaxed: f64,
}

/// The rows of a sweep, in lexicographic (N, M, n, k) order, plus their
/// summary.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    pub summary: Summary,
}

/// Runs the sweep. Rows are evaluated concurrently and emitted in
/// lexicographic (N, M, n, k) order; an empty grid yields an empty report
/// with zero counts.
pub fn grid_verify(spec: &GridSpec) -> VerifyReport {
    let mut tuples: Vec<(Hypergeometric, i64)> = Vec::new();
    for population in spec.population_lo..=spec.population_hi {
        for whites in GridSpec::values(&spec.whites, population) {
            for draws in GridSpec::values(&spec.draws, population) {
                if draws == 0 {
                    continue;
                }
                let params = Hypergeometric::new(population, whites, draws)
                    .expect("enumerated parameters are valid");
                for threshold in spec.thresholds(&params) {
                    tuples.push((params, threshold));
                }
            }
        }
    }
    let side = spec.side;
    let rows: Vec<VerifyRow> = tuples
        .into_par_iter()
        .map(|(params, threshold)| verify_row(params, threshold, side))
        .collect();

    let mut summary = Summary {
        rows: rows.len() as u64,
        violations: 0,
        vacuous_rows: 0,
        max_slack_hoeffding: 0.0,
        max_slack_relaxed: 0.0,
    };
    for row in &rows {
        if !row.sound() {
            summary.violations += 1;
        }
        if row.vacuous {
            summary.vacuous_rows += 1;
        }
        summary.max_slack_hoeffding = summary.max_slack_hoeffding.max(row.slack_hoeffding());
        summary.max_slack_relaxed = summary.max_slack_relaxed.max(row.slack_relaxed());
    }
    VerifyReport { rows, summary }
}

fn verify_row(params: Hypergeometric, threshold: i64, side: TailSide) -> VerifyRow {
    let spec = match side {
        TailSide::Upper => TailSpec::upper(params, threshold),
        TailSide::Lower => TailSpec::lower(params, threshold),
    }
    .expect("grid rows always have n >= 1");
    let hoeffding = spec.bound(BoundForm::Hoeffding);
    let relaxed = spec.bound(BoundForm::Relaxed);
    VerifyRow {
        population: params.population(),
        whites: params.whites(),
        draws: params.draws(),
        threshold,
        t: spec.t().clone(),
        exact_tail: spec.exact_tail(),
        hoeffding: hoeffding.value,
        relaxed: relaxed.value,
        vacuous: hoeffding.vacuous,
    }
}

/// Shortest round-trip float form; Rust guarantees <= 17 significant
/// digits and a locale-independent '.'.
fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

pub const CSV_HEADER: &str = "N,M,n,k,t_fraction,t,exact_fraction,exact,hoeffding,relaxed,\
                              slack_hoeffding,slack_relaxed,vacuous,sound";

/// CSV report: header plus one line per row. Every field is an integer, a
/// `num/den` fraction, a float, or a bare boolean; none can contain a
/// comma, quote, or newline, so no field ever needs quoting.
pub fn report_to_csv(report: &VerifyReport) -> String {
    let mut out = String::with_capacity(64 * (report.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.population,
            row.whites,
            row.draws,
            row.threshold,
            numeric::format_ratio(&row.t),
            fmt_f64(row.t_f64()),
            row.exact_tail.fraction(),
            fmt_f64(row.exact_f64()),
            fmt_f64(row.hoeffding),
            fmt_f64(row.relaxed),
            fmt_f64(row.slack_hoeffding()),
            fmt_f64(row.slack_relaxed()),
            row.vacuous,
            row.sound(),
        ));
    }
    out
}

#[derive(Serialize)]
struct RowRecord<'a> {
    #[serde(rename = "N")]
    population: u64,
    #[serde(rename = "M")]
    whites: u64,
    #[serde(rename = "n")]
    draws: u64,
    k: i64,
    t_fraction: &'a str,
    t: f64,
    exact_fraction: &'a str,
    exact: f64,
    hoeffding: f64,
    relaxed: f64,
    slack_hoeffding: f64,
    slack_relaxed: f64,
    vacuous: bool,
    sound: bool,
}

#[derive(Serialize)]
struct ReportRecord<'a> {
    rows: Vec<RowRecord<'a>>,
    summary: &'a Summary,
}

/// JSON report: `{"rows": [...], "summary": {...}}`, pretty-printed, with
/// a trailing newline.
pub fn report_to_json(report: &VerifyReport) -> String {
    let fractions: Vec<(String, String)> = report
        .rows
        .iter()
        .map(|row| (numeric::format_ratio(&row.t), row.exact_tail.fraction()))
        .collect();
    let rows: Vec<RowRecord> = report
        .rows
        .iter()
        .zip(&fractions)
        .map(|(row, (t_fraction, exact_fraction))| RowRecord {
            population: row.population,
            whites: row.whites,
            draws: row.draws,
            k: row.threshold,
            t_fraction,
            t: row.t_f64(),
            exact_fraction,
            exact: row.exact_f64(),
            hoeffding: row.hoeffding,
            relaxed: row.relaxed,
            slack_hoeffding: row.slack_hoeffding(),
            slack_relaxed: row.slack_relaxed(),
            vacuous: row.vacuous,
            sound: row.sound(),
        })
        .collect();
    let record = ReportRecord {
        rows,
        summary: &report.summary,
    };
    let mut out =
        serde_json::to_string_pretty(&record).expect("report serialization cannot fail");
    out.push('\n');
    out
}

/// Human-readable summary block.
pub fn summary_to_text(report: &VerifyReport, side: TailSide) -> String {
    let side = match side {
        TailSide::Upper => "upper",
        TailSide::Lower => "lower",
    };
    format!(
        "side: {side}\nrows: {}\nviolations: {}\nvacuous rows: {}\n\
         max slack hoeffding-exact: {}\nmax slack relaxed-hoeffding: {}\n",
        report.summary.rows,
        report.summary.violations,
        report.summary.vacuous_rows,
        fmt_f64(report.summary.max_slack_hoeffding),
        fmt_f64(report.summary.max_slack_relaxed),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::BigInt;
    use num::Signed;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn empty_range_is_rejected() {
        assert_eq!(
            GridSpec::exhaustive(5, 4, TailSide::Upper),
            Err(Error::EmptyRange { lo: 5, hi: 4 })
        );
    }

    #[test]
    fn small_exhaustive_grid_has_no_violations() {
        let spec = GridSpec::exhaustive(2, 10, TailSide::Upper).unwrap();
        let report = grid_verify(&spec);
        assert!(report.summary.rows > 0);
        assert_eq!(report.summary.violations, 0);
        assert_eq!(report.summary.vacuous_rows, 0);
        assert!(report.rows.iter().all(VerifyRow::sound));
    }

    #[test]
    fn pinned_row_matches_oracles() {
        let spec = GridSpec {
            whites: ValueRule::Explicit(vec![5]),
            draws: ValueRule::Explicit(vec![5]),
            thresholds: ThresholdRule::Explicit(vec![3]),
            ..GridSpec::exhaustive(10, 10, TailSide::Upper).unwrap()
        };
        let report = grid_verify(&spec);
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert_eq!(row.exact_tail.fraction(), "1/2");
        assert_eq!(row.t, rat(1, 10));
        assert!((row.relaxed - (-0.1f64).exp()).abs() < 1e-15);
        assert!(!row.vacuous);
        assert!(row.sound());
    }

    #[test]
    fn vacuous_thresholds_are_flagged_not_violations() {
        let spec = GridSpec {
            whites: ValueRule::Explicit(vec![5]),
            draws: ValueRule::Explicit(vec![5]),
            thresholds: ThresholdRule::Explicit(vec![-2, 0, 1]),
            ..GridSpec::exhaustive(10, 10, TailSide::Upper).unwrap()
        };
        let report = grid_verify(&spec);
        assert_eq!(report.rows.len(), 3);
        for row in &report.rows {
            assert!(row.t.is_negative());
            assert!(row.vacuous);
            assert_eq!(row.hoeffding, 1.0);
            assert_eq!(row.relaxed, 1.0);
            assert!(row.sound());
        }
        assert_eq!(report.summary.vacuous_rows, 3);
        assert_eq!(report.summary.violations, 0);
    }

    #[test]
    fn rows_are_lexicographic() {
        let spec = GridSpec::exhaustive(2, 6, TailSide::Lower).unwrap();
        let report = grid_verify(&spec);
        let keys: Vec<_> = report
            .rows
            .iter()
            .map(|r| (r.population, r.whites, r.draws, r.threshold))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        // and no duplicates
        sorted.dedup();
        assert_eq!(keys.len(), sorted.len());
    }

    #[test]
    fn csv_shape_and_fraction_round_trip() {
        let spec = GridSpec::exhaustive(2, 5, TailSide::Upper).unwrap();
        let report = grid_verify(&spec);
        let csv = report_to_csv(&report);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let mut body = 0;
        for (line, row) in lines.zip(&report.rows) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 14);
            // RFC-4180 quoting is unnecessary: no delimiters inside fields
            assert!(!line.contains('"'));
            assert_eq!(numeric::parse_ratio(fields[4]).unwrap(), row.t);
            assert_eq!(
                fields[6].parse::<ExactProb>().unwrap(),
                row.exact_tail
            );
            // floats round-trip
            assert_eq!(fields[8].parse::<f64>().unwrap(), row.hoeffding);
            body += 1;
        }
        assert_eq!(body as u64, report.summary.rows);
    }

    #[test]
    fn json_shape() {
        let spec = GridSpec {
            whites: ValueRule::Explicit(vec![5]),
            draws: ValueRule::Explicit(vec![5]),
            thresholds: ThresholdRule::Explicit(vec![3]),
            ..GridSpec::exhaustive(10, 10, TailSide::Upper).unwrap()
        };
        let report = grid_verify(&spec);
        let json = report_to_json(&report);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["rows"][0]["exact_fraction"], "1/2");
        assert_eq!(value["rows"][0]["t_fraction"], "1/10");
        assert_eq!(value["rows"][0]["N"], 10);
        assert_eq!(value["rows"][0]["exact"], 0.5);
        assert_eq!(value["summary"]["rows"], 1);
        assert_eq!(value["summary"]["violations"], 0);
        assert!(json.ends_with('\n'));
    }

    #[test]
    fn serialization_is_reproducible() {
        let spec = GridSpec::exhaustive(2, 8, TailSide::Upper).unwrap();
        let a = grid_verify(&spec);
        let b = grid_verify(&spec);
        assert_eq!(report_to_csv(&a), report_to_csv(&b));
        assert_eq!(report_to_json(&a), report_to_json(&b));
    }

    #[test]
    fn empty_explicit_grid_is_success() {
        let spec = GridSpec {
            whites: ValueRule::Explicit(vec![99]),
            ..GridSpec::exhaustive(2, 5, TailSide::Upper).unwrap()
        };
        let report = grid_verify(&spec);
        assert_eq!(report.summary.rows, 0);
        assert_eq!(report.summary.violations, 0);
        assert_eq!(report_to_csv(&report), format!("{CSV_HEADER}\n"));
    }
}
