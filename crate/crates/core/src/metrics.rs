//! Confusion matrices and the derived classification scores.
//!
//! The positive class is "grammatically correct" (label 1): a true positive
//! is a correct sentence predicted correct.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::corpus_io::{read_predictions, PredictionRecord};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, tn: u64, fp: u64, fn_: u64) -> Self {
        ConfusionMatrix { tp, tn, fp, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn record(&mut self, label: u8, pred: u8) {
        match (label, pred) {
            (1, 1) => self.tp += 1,
            (0, 0) => self.tn += 1,
            (0, _) => self.fp += 1,
            _ => self.fn_ += 1,
        }
    }
}

impl Add for ConfusionMatrix {
    type Output = ConfusionMatrix;

    fn add(self, rhs: Self) -> Self {
        ConfusionMatrix::new(
            self.tp + rhs.tp,
            self.tn + rhs.tn,
            self.fp + rhs.fp,
            self.fn_ + rhs.fn_,
        )
    }
}

impl Sum for ConfusionMatrix {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ConfusionMatrix::default(), Add::add)
    }
}

pub fn confusion<'a, I>(records: I) -> ConfusionMatrix
where
    I: IntoIterator<Item = &'a PredictionRecord>,
{
    let mut m = ConfusionMatrix::default();
    for r in records {
        m.record(r.label, r.pred);
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricsMode {
    PositiveClass,
    Macro,
}

impl FromStr for MetricsMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive" | "positive_class" => Ok(MetricsMode::PositiveClass),
            "macro" => Ok(MetricsMode::Macro),
            other => Err(format!("unknown metrics mode `{other}`")),
        }
    }
}

impl fmt::Display for MetricsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricsMode::PositiveClass => "positive_class",
            MetricsMode::Macro => "macro",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsReport {
    pub mode: MetricsMode,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Set when some ratio had a zero denominator and was reported as 0.
    pub undefined: bool,
}

struct Ratio {
    undefined: bool,
}

impl Ratio {
    fn div(&mut self, num: f64, den: f64) -> f64 {
        if den == 0.0 {
            self.undefined = true;
            0.0
        } else {
            num / den
        }
    }

    fn f1(&mut self, p: f64, r: f64) -> f64 {
        self.div(2.0 * p * r, p + r)
    }
}

/// Accuracy, precision, recall and F1 for the matrix. Zero denominators
/// yield 0 and set [`MetricsReport::undefined`].
pub fn compute_metrics(m: &ConfusionMatrix, mode: MetricsMode) -> Result<MetricsReport> {
    let total = m.total();
    if total == 0 {
        return Err(Error::EmptyMatrix);
    }
    let (tp, tn, fp, fn_) = (m.tp as f64, m.tn as f64, m.fp as f64, m.fn_ as f64);
    let accuracy = (tp + tn) / total as f64;
    let mut ratio = Ratio { undefined: false };
    let (precision, recall, f1) = match mode {
        MetricsMode::PositiveClass => {
            let p = ratio.div(tp, tp + fp);
            let r = ratio.div(tp, tp + fn_);
            (p, r, ratio.f1(p, r))
        }
        MetricsMode::Macro => {
            let p1 = ratio.div(tp, tp + fp);
            let r1 = ratio.div(tp, tp + fn_);
            let f1_1 = ratio.f1(p1, r1);
            let p0 = ratio.div(tn, tn + fn_);
            let r0 = ratio.div(tn, tn + fp);
            let f1_0 = ratio.f1(p0, r0);
            ((p0 + p1) / 2.0, (r0 + r1) / 2.0, (f1_0 + f1_1) / 2.0)
        }
    };
    if ratio.undefined {
        tracing::warn!(?m, %mode, "zero denominator in metrics, reported as 0");
    }
    Ok(MetricsReport {
        mode,
        accuracy,
        precision,
        recall,
        f1,
        undefined: ratio.undefined,
    })
}

/// Half-up rounding to `places` decimals, as printed in result tables.
pub fn round_half_up(x: f64, places: i32) -> f64 {
    let scale = 10f64.powi(places);
    // nudge values that are a binary hair below a half
    ((x * scale) + 0.5 + 1e-9).floor() / scale
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scores {
    pub matrix: ConfusionMatrix,
    pub positive_class: MetricsReport,
    #[serde(rename = "macro")]
    pub macro_avg: MetricsReport,
}

/// Reads a prediction JSONL file and scores it in both modes.
pub fn score_file(path: impl AsRef<Path>) -> Result<Scores> {
    let mut matrix = ConfusionMatrix::default();
    for record in read_predictions(path)? {
        let r = record?;
        matrix.record(r.label, r.pred);
    }
    Ok(Scores {
        matrix,
        positive_class: compute_metrics(&matrix, MetricsMode::PositiveClass)?,
        macro_avg: compute_metrics(&matrix, MetricsMode::Macro)?,
    })
}

/// `TP TN FP FN F1` row with the F1 rounded half-up to two decimals.
pub fn table_row(name: &str, m: &ConfusionMatrix, report: &MetricsReport) -> String {
    format!(
        "{name:<24} {:>6} {:>6} {:>6} {:>6} {:>6.2}",
        m.tp,
        m.tn,
        m.fp,
        m.fn_,
        round_half_up(report.f1, 2)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(label: u8, pred: u8) -> PredictionRecord {
        PredictionRecord {
            text: String::new(),
            label,
            pred,
        }
    }

    fn records(m: &ConfusionMatrix) -> Vec<PredictionRecord> {
        let mut out = Vec::new();
        out.extend((0..m.tp).map(|_| rec(1, 1)));
        out.extend((0..m.tn).map(|_| rec(0, 0)));
        out.extend((0..m.fp).map(|_| rec(0, 1)));
        out.extend((0..m.fn_).map(|_| rec(1, 0)));
        out
    }

    #[test]
    fn confusion_counts() {
        let target = ConfusionMatrix::new(255, 242, 3, 0);
        assert_eq!(confusion(&records(&target)), target);
        assert_eq!(confusion(&[]), ConfusionMatrix::default());
        let perfect = [rec(1, 1), rec(0, 0), rec(1, 1)];
        let m = confusion(&perfect);
        assert_eq!((m.fp, m.fn_), (0, 0));
    }

    #[test]
    fn published_f1_values() {
        let cases = [
            (ConfusionMatrix::new(119, 232, 16, 123), 0.63),
            (ConfusionMatrix::new(114, 235, 10, 141), 0.60),
            (ConfusionMatrix::new(238, 209, 36, 17), 0.90),
        ];
        for (m, f1) in cases {
            let r = compute_metrics(&m, MetricsMode::PositiveClass).unwrap();
            assert!((r.f1 - f1).abs() <= 0.005, "{m:?} -> {}", r.f1);
        }
    }

    #[test]
    fn perfect_classifier() {
        let m = ConfusionMatrix::new(17, 17, 0, 0);
        for mode in [MetricsMode::PositiveClass, MetricsMode::Macro] {
            let r = compute_metrics(&m, mode).unwrap();
            assert_eq!(
                (r.accuracy, r.precision, r.recall, r.f1),
                (1.0, 1.0, 1.0, 1.0)
            );
            assert!(!r.undefined);
        }
    }

    #[test]
    fn zero_denominators_flagged() {
        let r = compute_metrics(
            &ConfusionMatrix::new(0, 5, 0, 0),
            MetricsMode::PositiveClass,
        )
        .unwrap();
        assert_eq!(r.f1, 0.0);
        assert!(r.undefined);
        assert!(matches!(
            compute_metrics(&ConfusionMatrix::default(), MetricsMode::Macro),
            Err(Error::EmptyMatrix)
        ));
    }

    #[test]
    fn rounding() {
        assert_eq!(round_half_up(0.625, 2), 0.63);
        assert_eq!(round_half_up(0.885, 2), 0.89);
        assert_eq!(round_half_up(0.6312, 2), 0.63);
        assert_eq!(round_half_up(0.994, 2), 0.99);
    }

    #[test]
    fn macro_by_hand() {
        // class 1: p = 3/4, r = 3/5; class 0: p = 4/6, r = 4/5
        let m = ConfusionMatrix::new(3, 4, 1, 2);
        let r = compute_metrics(&m, MetricsMode::Macro).unwrap();
        let f1_1 = 2.0 * 0.75 * 0.6 / 1.35;
        let f1_0 = 2.0 * (4.0 / 6.0) * 0.8 / (4.0 / 6.0 + 0.8);
        assert!((r.precision - (0.75 + 4.0 / 6.0) / 2.0).abs() < 1e-12);
        assert!((r.recall - 0.7).abs() < 1e-12);
        assert!((r.f1 - (f1_0 + f1_1) / 2.0).abs() < 1e-12);
        assert_eq!(r.accuracy, 0.7);
    }

    #[test]
    fn score_file_single_record() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.jsonl");
        std::fs::write(&path, "{\"text\":\"a\",\"label\":1,\"pred\":1}\n").unwrap();
        let s = score_file(&path).unwrap();
        assert_eq!(s.positive_class.accuracy, 1.0);
        std::fs::write(&path, "{\"text\":\"a\",\"label\":1,\"pred\":2}\n").unwrap();
        let err = score_file(&path).unwrap_err();
        assert!(err.to_string().contains(":1:"), "{err}");
    }

    fn arb_records() -> impl Strategy<Value = Vec<PredictionRecord>> {
        proptest::collection::vec((0u8..2, 0u8..2).prop_map(|(l, p)| rec(l, p)), 1..200)
    }

    proptest! {
        #[test]
        fn order_independent(mut rs in arb_records()) {
            let before = confusion(&rs);
            rs.reverse();
            prop_assert_eq!(confusion(&rs), before);
        }

        #[test]
        fn modes_share_accuracy(rs in arb_records()) {
            let m = confusion(&rs);
            let p = compute_metrics(&m, MetricsMode::PositiveClass).unwrap();
            let q = compute_metrics(&m, MetricsMode::Macro).unwrap();
            prop_assert_eq!(p.accuracy, q.accuracy);
            for v in [p.precision, p.recall, p.f1, q.precision, q.recall, q.f1] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            if p.precision + p.recall > 0.0 {
                let f1 = 2.0 * p.precision * p.recall / (p.precision + p.recall);
                prop_assert!((p.f1 - f1).abs() < 1e-12);
            }
        }

        #[test]
        fn label_swap_mirrors_matrix(rs in arb_records()) {
            let m = confusion(&rs);
            let swapped: Vec<_> = rs.iter().map(|r| rec(1 - r.label, 1 - r.pred)).collect();
            let s = confusion(&swapped);
            prop_assert_eq!((s.tp, s.tn, s.fp, s.fn_), (m.tn, m.tp, m.fn_, m.fp));
            let a = compute_metrics(&m, MetricsMode::PositiveClass).unwrap().accuracy;
            let b = compute_metrics(&s, MetricsMode::PositiveClass).unwrap().accuracy;
            prop_assert_eq!(a, b);
        }
    }
}
