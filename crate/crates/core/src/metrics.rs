//! Prediction-quality metrics and the Vargha-Delaney effect size.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        Self { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn record(&mut self, truth: Label, predicted: Label) {
        match (truth.is_positive(), predicted.is_positive()) {
            (true, true) => self.tp += 1,
            (true, false) => self.fn_ += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fp += 1,
        }
    }

    /// Same counts with the positive class swapped.
    pub fn flipped(&self) -> Self {
        Self::new(self.tn, self.fn_, self.tp, self.fp)
    }
}

/// Counts predictions against the truth; both maps must cover the same ids.
pub fn confusion(truth: &BTreeMap<String, Label>, predicted: &BTreeMap<String, Label>) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(Error::LengthMismatch(format!(
            "{} truth labels vs {} predictions",
            truth.len(),
            predicted.len()
        )));
    }
    let mut cm = ConfusionMatrix::default();
    for (id, &t) in truth {
        let &p = predicted.get(id).ok_or_else(|| Error::UnmatchedMutant(id.clone()))?;
        cm.record(t, p);
    }
    Ok(cm)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn precision(cm: &ConfusionMatrix) -> f64 {
    ratio(cm.tp, cm.tp + cm.fp)
}

pub fn recall(cm: &ConfusionMatrix) -> f64 {
    ratio(cm.tp, cm.tp + cm.fn_)
}

pub fn f_measure(cm: &ConfusionMatrix) -> f64 {
    let (p, r) = (precision(cm), recall(cm));
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

pub fn mcc(cm: &ConfusionMatrix) -> f64 {
    let (tp, fp, tn, fn_) = (cm.tp as f64, cm.fp as f64, cm.tn as f64, cm.fn_ as f64);
    let den = (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_);
    if den == 0.0 {
        0.0
    } else {
        (tp * tn - fp * fn_) / den.sqrt()
    }
}

/// True when some metric fell back to a zero-denominator convention.
pub fn degenerate(cm: &ConfusionMatrix) -> bool {
    cm.tp + cm.fp == 0 || cm.tp + cm.fn_ == 0 || cm.tn + cm.fp == 0 || cm.tn + cm.fn_ == 0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricRow {
    pub mcc: f64,
    pub f: f64,
    pub precision: f64,
    pub recall: f64,
}

impl MetricRow {
    pub fn from_confusion(cm: &ConfusionMatrix) -> Self {
        Self {
            mcc: mcc(cm),
            f: f_measure(cm),
            precision: precision(cm),
            recall: recall(cm),
        }
    }
}

/// Probability that a draw from `x` exceeds one from `y`, ties counted half.
pub fn vargha_delaney_a12(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = y.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut wins = 0.0;
    for &xi in x {
        let below = sorted.partition_point(|&v| v < xi);
        let not_above = sorted.partition_point(|&v| v <= xi);
        wins += below as f64 + 0.5 * (not_above - below) as f64;
    }
    Ok(wins / (x.len() as f64 * y.len() as f64))
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Median with the midpoint convention for even counts.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: MetricRow,
    pub median: MetricRow,
}

pub fn aggregate_report(folds: &[MetricRow]) -> Result<Summary> {
    if folds.is_empty() {
        return Err(Error::EmptySample);
    }
    let col = |f: fn(&MetricRow) -> f64| folds.iter().map(f).collect::<Vec<_>>();
    let (m, fm, p, r) = (col(|x| x.mcc), col(|x| x.f), col(|x| x.precision), col(|x| x.recall));
    Ok(Summary {
        mean: MetricRow {
            mcc: mean(&m),
            f: mean(&fm),
            precision: mean(&p),
            recall: mean(&r),
        },
        median: MetricRow {
            mcc: median(&m),
            f: median(&fm),
            precision: median(&p),
            recall: median(&r),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labels(ls: &[Label]) -> BTreeMap<String, Label> {
        ls.iter().enumerate().map(|(i, &l)| (format!("m{i}"), l)).collect()
    }

    #[test]
    fn direct_count() {
        use Label::*;
        let cm = confusion(&labels(&[S, S, N]), &labels(&[S, N, N])).unwrap();
        assert_eq!(cm, ConfusionMatrix::new(1, 0, 1, 1));
        let all = confusion(&labels(&[S, N]), &labels(&[S, N])).unwrap();
        assert_eq!((all.fp, all.fn_), (0, 0));
    }

    #[test]
    fn id_mismatch() {
        let t = labels(&[Label::S]);
        let mut p = BTreeMap::new();
        p.insert("other".to_string(), Label::S);
        assert!(confusion(&t, &p).is_err());
        assert!(confusion(&t, &BTreeMap::new()).is_err());
    }

    #[test]
    fn formula_cases() {
        let perfect = ConfusionMatrix::new(5, 0, 5, 0);
        assert_eq!(
            MetricRow::from_confusion(&perfect),
            MetricRow {
                mcc: 1.0,
                f: 1.0,
                precision: 1.0,
                recall: 1.0
            }
        );
        assert_eq!(mcc(&ConfusionMatrix::new(0, 5, 0, 5)), -1.0);
        let ones = ConfusionMatrix::new(1, 1, 1, 1);
        assert_eq!(
            MetricRow::from_confusion(&ones),
            MetricRow {
                mcc: 0.0,
                f: 0.5,
                precision: 0.5,
                recall: 0.5
            }
        );
    }

    #[test]
    fn zero_denominators() {
        let none_predicted = ConfusionMatrix::new(0, 0, 3, 2);
        assert_eq!(precision(&none_predicted), 0.0);
        assert_eq!(f_measure(&none_predicted), 0.0);
        assert_eq!(mcc(&none_predicted), 0.0);
        assert!(degenerate(&none_predicted));
        assert_eq!(recall(&ConfusionMatrix::default()), 0.0);
    }

    #[test]
    fn a12_cases() {
        assert_eq!(vargha_delaney_a12(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.5);
        assert_eq!(vargha_delaney_a12(&[5.0, 6.0], &[1.0, 2.0]).unwrap(), 1.0);
        assert_eq!(vargha_delaney_a12(&[1.0, 2.0], &[1.0, 3.0]).unwrap(), 0.375);
        assert!(vargha_delaney_a12(&[], &[1.0]).is_err());
    }

    #[test]
    fn aggregate_cases() {
        let row = |v| MetricRow {
            mcc: v,
            f: v,
            precision: v,
            recall: v,
        };
        let s = aggregate_report(&[row(0.4), row(0.5)]).unwrap();
        assert!((s.mean.mcc - 0.45).abs() < 1e-12);
        assert!((s.median.mcc - 0.45).abs() < 1e-12);
        let one = aggregate_report(&[row(0.7)]).unwrap();
        assert_eq!((one.mean.f, one.median.f), (0.7, 0.7));
        assert!(aggregate_report(&[]).is_err());
    }

    fn cm_strategy() -> impl Strategy<Value = ConfusionMatrix> {
        (0u64..50, 0u64..50, 0u64..50, 0u64..50).prop_map(|(a, b, c, d)| ConfusionMatrix::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn confusion_matches_counting_loop(pairs in prop::collection::vec((any::<bool>(), any::<bool>()), 1..1000)) {
            let truth = labels(&pairs.iter().map(|p| Label::from_bool(p.0)).collect::<Vec<_>>());
            let pred = labels(&pairs.iter().map(|p| Label::from_bool(p.1)).collect::<Vec<_>>());
            let cm = confusion(&truth, &pred).unwrap();
            let count = |a: bool, b: bool| pairs.iter().filter(|p| p.0 == a && p.1 == b).count() as u64;
            prop_assert_eq!(cm, ConfusionMatrix::new(count(true, true), count(false, true), count(false, false), count(true, false)));
        }

        #[test]
        fn mcc_symmetric_and_f_harmonic(cm in cm_strategy()) {
            prop_assert!((mcc(&cm) - mcc(&cm.flipped())).abs() < 1e-12);
            let (p, r) = (precision(&cm), recall(&cm));
            if p + r > 0.0 {
                prop_assert!((f_measure(&cm) - 2.0 * p * r / (p + r)).abs() < 1e-12);
            }
            prop_assert!((-1.0..=1.0).contains(&mcc(&cm)));
        }

        #[test]
        fn a12_complement_and_pairwise(x in prop::collection::vec(-100i32..100, 1..20), y in prop::collection::vec(-100i32..100, 1..20)) {
            let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
            let yf: Vec<f64> = y.iter().map(|&v| v as f64).collect();
            let a = vargha_delaney_a12(&xf, &yf).unwrap();
            let mut wins = 0.0;
            for &xi in &xf {
                for &yi in &yf {
                    wins += if xi > yi { 1.0 } else if xi == yi { 0.5 } else { 0.0 };
                }
            }
            prop_assert!((a - wins / (xf.len() * yf.len()) as f64).abs() < 1e-12);
            prop_assert!((a + vargha_delaney_a12(&yf, &xf).unwrap() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn median_matches_sorting(v in prop::collection::vec(-1e3f64..1e3, 5)) {
            let mut s = v.clone();
            s.sort_by(|a, b| a.partial_cmp(b).unwrap());
            prop_assert_eq!(median(&v), s[2]);
        }
    }
}
