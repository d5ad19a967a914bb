//! Deterministic table output.  Every sweep result renders to CSV with a
//! fixed column set and to a JSON mirror carrying the same keys; rows are
//! sorted lexicographically on their key columns so repeated runs emit
//! identical bytes regardless of generation order.

use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::bounds::{AsymptoticRow, BoundReport, InfimumStudy, ThresholdReport};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;

/// Output encodings supported by every table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidArgument(format!(
                "unknown output format `{other}`; expected `csv` or `json`"
            ))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputFormat::Csv => write!(f, "csv"),
            OutputFormat::Json => write!(f, "json"),
        }
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_from(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json_from<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(rows)
        .map_err(|e| Error::Numeric(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Orders bound reports on (kind, space, generator, k, n, r).
pub fn sort_bound_reports(rows: &mut [BoundReport]) {
    rows.sort_by(|a, b| {
        a.kind
            .cmp(&b.kind)
            .then(a.space.cmp(&b.space))
            .then_with(|| a.generator.cmp(&b.generator))
            .then(a.k.cmp(&b.k))
            .then(a.n.cmp(&b.n))
            .then_with(|| match (a.r, b.r) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(x), Some(y)) => x.total_cmp(&y),
            })
    });
}

#[derive(Serialize)]
struct BoundRow {
    kind: String,
    space: String,
    generator: String,
    k: Option<u32>,
    n: Option<usize>,
    r: Option<f64>,
    lhs: f64,
    rhs: f64,
    slack: f64,
    tight: bool,
}

impl From<&BoundReport> for BoundRow {
    fn from(rep: &BoundReport) -> Self {
        BoundRow {
            kind: rep.kind.to_string(),
            space: rep.space.to_string(),
            generator: rep.generator.clone(),
            k: rep.k,
            n: rep.n,
            r: rep.r,
            lhs: rep.lhs,
            rhs: rep.rhs,
            slack: rep.slack,
            tight: rep.tight,
        }
    }
}

pub const BOUND_HEADER: [&str; 10] = [
    "kind", "space", "generator", "k", "n", "r", "lhs", "rhs", "slack", "tight",
];

pub fn bound_reports_csv(rows: &[BoundReport]) -> String {
    let cells = rows
        .iter()
        .map(|rep| {
            vec![
                rep.kind.to_string(),
                rep.space.to_string(),
                rep.generator.clone(),
                fmt_opt(rep.k),
                fmt_opt(rep.n),
                fmt_opt(rep.r),
                fmt_f64(rep.lhs),
                fmt_f64(rep.rhs),
                fmt_f64(rep.slack),
                rep.tight.to_string(),
            ]
        })
        .collect();
    csv_from(&BOUND_HEADER, cells)
}

pub fn bound_reports_json(rows: &[BoundReport]) -> Result<String> {
    json_from(&rows.iter().map(BoundRow::from).collect::<Vec<_>>())
}

/// Orders threshold reports on (kind, threshold).
pub fn sort_threshold_reports(rows: &mut [ThresholdReport]) {
    rows.sort_by(|a, b| {
        a.kind
            .cmp(&b.kind)
            .then_with(|| a.threshold.total_cmp(&b.threshold))
    });
}

#[derive(Serialize)]
struct ThresholdRow {
    kind: String,
    threshold: f64,
    actual_divergence: f64,
    verdict: bool,
}

pub const THRESHOLD_HEADER: [&str; 4] = ["kind", "threshold", "actual_divergence", "verdict"];

pub fn threshold_reports_csv(rows: &[ThresholdReport]) -> String {
    let cells = rows
        .iter()
        .map(|rep| {
            vec![
                rep.kind.to_string(),
                fmt_f64(rep.threshold),
                fmt_f64(rep.actual_divergence),
                rep.verdict.to_string(),
            ]
        })
        .collect();
    csv_from(&THRESHOLD_HEADER, cells)
}

pub fn threshold_reports_json(rows: &[ThresholdReport]) -> Result<String> {
    json_from(
        &rows
            .iter()
            .map(|rep| ThresholdRow {
                kind: rep.kind.to_string(),
                threshold: rep.threshold,
                actual_divergence: rep.actual_divergence,
                verdict: rep.verdict,
            })
            .collect::<Vec<_>>(),
    )
}

/// Orders asymptotic rows on (generator, separation).
pub fn sort_asymptotic_rows(rows: &mut [AsymptoticRow]) {
    rows.sort_by(|a, b| {
        a.generator
            .cmp(&b.generator)
            .then_with(|| a.delta_alpha.total_cmp(&b.delta_alpha))
    });
}

pub const ASYMPTOTIC_HEADER: [&str; 5] = [
    "generator",
    "delta_alpha",
    "structural",
    "sqrt_triangular",
    "ratio",
];

pub fn asymptotic_rows_csv(rows: &[AsymptoticRow]) -> String {
    let cells = rows
        .iter()
        .map(|row| {
            vec![
                row.generator.clone(),
                fmt_f64(row.delta_alpha),
                fmt_f64(row.structural),
                fmt_f64(row.sqrt_triangular),
                fmt_f64(row.ratio),
            ]
        })
        .collect();
    csv_from(&ASYMPTOTIC_HEADER, cells)
}

pub fn asymptotic_rows_json(rows: &[AsymptoticRow]) -> Result<String> {
    json_from(rows)
}

/// Orders infimum studies on (generator, target distance).
pub fn sort_infimum_studies(rows: &mut [InfimumStudy]) {
    rows.sort_by(|a, b| {
        a.generator
            .cmp(&b.generator)
            .then_with(|| a.target_tv.total_cmp(&b.target_tv))
    });
}

pub const INFIMUM_HEADER: [&str; 7] = [
    "generator",
    "target_tv",
    "trials",
    "support_size",
    "min_found",
    "profile_value",
    "binary_value",
];

pub fn infimum_studies_csv(rows: &[InfimumStudy]) -> String {
    let cells = rows
        .iter()
        .map(|row| {
            vec![
                row.generator.clone(),
                fmt_f64(row.target_tv),
                row.trials.to_string(),
                row.support_size.to_string(),
                fmt_f64(row.min_found),
                fmt_f64(row.profile_value),
                fmt_f64(row.binary_value),
            ]
        })
        .collect();
    csv_from(&INFIMUM_HEADER, cells)
}

pub fn infimum_studies_json(rows: &[InfimumStudy]) -> Result<String> {
    json_from(rows)
}

/// Summary of every divergence the library computes for one measure pair.
/// The symmetric divergence may be infinite (disjoint supports under a
/// generator with unbounded slope), so it is carried as text; the structural
/// form is always a number in the unit interval.
#[derive(Clone, Debug, Serialize)]
pub struct DivergenceRow {
    pub generator: String,
    /// Symmetric divergence, or the marker `inf`.
    pub symmetric: String,
    pub total_variation: f64,
    pub triangular: f64,
    pub structural: f64,
}

impl DivergenceRow {
    pub fn new(
        generator: &str,
        symmetric: ExtendedReal,
        total_variation: f64,
        triangular: f64,
        structural: f64,
    ) -> Self {
        DivergenceRow {
            generator: generator.to_string(),
            symmetric: symmetric.to_string(),
            total_variation,
            triangular,
            structural,
        }
    }
}

/// Orders divergence rows on the generator name.
pub fn sort_divergence_rows(rows: &mut [DivergenceRow]) {
    rows.sort_by(|a, b| a.generator.cmp(&b.generator));
}

pub const DIVERGENCE_HEADER: [&str; 5] = [
    "generator",
    "symmetric",
    "total_variation",
    "triangular",
    "structural",
];

pub fn divergence_rows_csv(rows: &[DivergenceRow]) -> String {
    let cells = rows
        .iter()
        .map(|row| {
            vec![
                row.generator.clone(),
                row.symmetric.clone(),
                fmt_f64(row.total_variation),
                fmt_f64(row.triangular),
                fmt_f64(row.structural),
            ]
        })
        .collect();
    csv_from(&DIVERGENCE_HEADER, cells)
}

pub fn divergence_rows_json(rows: &[DivergenceRow]) -> Result<String> {
    json_from(rows)
}

/// Writes rendered table text to a file, or to stdout when no path is given.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{BoundKind, Space, ThresholdKind};

    fn sample_report(gen: &str, k: Option<u32>, r: f64, lhs: f64, rhs: f64) -> BoundReport {
        BoundReport {
            kind: if k.is_some() {
                BoundKind::MomentBound
            } else {
                BoundKind::GradientBound
            },
            space: Space::ParameterSpace,
            generator: gen.to_string(),
            k,
            n: Some(1),
            r: Some(r),
            lhs,
            rhs,
            slack: rhs - lhs,
            satisfied: true,
            tight: (rhs - lhs).abs() <= 1e-9,
            metadata: String::new(),
        }
    }

    #[test]
    fn csv_bytes_are_locked() {
        let rows = vec![
            sample_report("tv", None, 0.5, 0.5, 0.5),
            sample_report("js", Some(2), 0.25, 0.25, 0.25),
        ];
        let csv = bound_reports_csv(&rows);
        assert_eq!(
            csv,
            "kind,space,generator,k,n,r,lhs,rhs,slack,tight\n\
             gradient,theta,tv,,1,0.5,0.5,0.5,0,true\n\
             moment,theta,js,2,1,0.25,0.25,0.25,0,true\n"
        );
    }

    #[test]
    fn sorting_is_total_and_stable_under_shuffling() {
        let mut a = vec![
            sample_report("tv", Some(2), 0.75, 0.1, 0.2),
            sample_report("js", None, 0.5, 0.0, 0.0),
            sample_report("js", Some(1), 0.25, 0.1, 0.2),
            sample_report("js", Some(1), 0.125, 0.1, 0.2),
        ];
        let mut b: Vec<BoundReport> = a.iter().rev().cloned().collect();
        sort_bound_reports(&mut a);
        sort_bound_reports(&mut b);
        assert_eq!(bound_reports_csv(&a), bound_reports_csv(&b));
        assert_eq!(a[0].kind, BoundKind::GradientBound);
        assert!(a[1].r < a[2].r);
    }

    #[test]
    fn json_mirror_carries_the_csv_keys() {
        let rows = vec![sample_report("tv", Some(1), 0.5, 1.0, 1.0)];
        let json = bound_reports_json(&rows).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let obj = value[0].as_object().unwrap();
        for key in BOUND_HEADER {
            assert!(obj.contains_key(key), "missing key {key}");
        }
        assert_eq!(obj.len(), BOUND_HEADER.len());
        assert_eq!(obj["kind"], "moment");
        assert_eq!(obj["space"], "theta");
    }

    #[test]
    fn divergence_rows_render_the_infinity_marker() {
        let rows = vec![DivergenceRow::new(
            "jeffreys",
            ExtendedReal::INFINITY,
            1.0,
            1.0,
            1.0,
        )];
        let csv = divergence_rows_csv(&rows);
        assert!(csv.contains("jeffreys,inf,1,1,1"));
        let json = divergence_rows_json(&rows).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value[0]["symmetric"], "inf");
    }

    #[test]
    fn threshold_and_study_tables_render() {
        let mut thr = vec![
            ThresholdReport {
                kind: ThresholdKind::CcNecessary,
                threshold: 0.125,
                actual_divergence: 0.1,
                verdict: false,
            },
            ThresholdReport {
                kind: ThresholdKind::BpNecessary,
                threshold: 0.4,
                actual_divergence: 0.5,
                verdict: true,
            },
        ];
        sort_threshold_reports(&mut thr);
        let csv = threshold_reports_csv(&thr);
        assert!(csv.starts_with("kind,threshold,actual_divergence,verdict\nbp-necessary,0.4,0.5,true\n"));

        let format: OutputFormat = "json".parse().unwrap();
        assert_eq!(format, OutputFormat::Json);
        assert!("yaml".parse::<OutputFormat>().is_err());
    }
}
