//! Sequence classifier behind a translation interface: an annotated input
//! line goes in, the same line with a label in the annotation slot comes out.

mod model;
mod vocab;

pub use model::{
    loss_and_gradient, sigmoid, train, ClassifierModel, Design, LearnerConfig, TrainingPair, TrainingReport, BACKEND,
};
pub use vocab::{Vocabulary, PAD, PAD_INDEX, UNK, UNK_INDEX};

use serde::Serialize;

use crate::abstraction::{render, AnnotatedSequence, ANNOTATION_CLOSE, ANNOTATION_SEP};
use crate::corpus::Label;

/// Anything that rewrites an annotated token line.
pub trait Translator {
    fn translate(&self, input: &[String]) -> Vec<String>;
}

impl Translator for ClassifierModel {
    /// Inserts the predicted label after `]MSP[`, leaving every other token alone.
    fn translate(&self, input: &[String]) -> Vec<String> {
        let label = Label::from_bool(self.score_tokens(input) > 0.5);
        let mut out = input.to_vec();
        if let Some(sep) = input
            .windows(2)
            .position(|w| w[0] == ANNOTATION_SEP && w[1] == ANNOTATION_CLOSE)
        {
            out.insert(sep + 1, label.as_str().to_string());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub mutant_id: String,
    pub label: Label,
    /// Rendered translator output.
    pub emitted: String,
    pub malformed: bool,
}

/// Reads the label from the translator's output. Any edit besides one `S`
/// or `N` in the label slot yields `N` with `malformed` set.
pub fn predict<T: Translator + ?Sized>(translator: &T, seq: &AnnotatedSequence) -> Prediction {
    let emitted = translator.translate(&seq.tokens);
    let slot = seq.label_slot();
    let well_formed = emitted.len() == seq.tokens.len() + 1
        && emitted[..slot] == seq.tokens[..slot]
        && emitted[slot + 1..] == seq.tokens[slot..];
    let label = if well_formed {
        emitted[slot].parse::<Label>().ok()
    } else {
        None
    };
    Prediction {
        mutant_id: seq.mutant_id.clone(),
        label: label.unwrap_or(Label::N),
        emitted: render(&emitted),
        malformed: label.is_none(),
    }
}

/// Confidence that `seq` is labeled `S`; above 0.5 exactly when predict says `S`.
pub fn score(model: &ClassifierModel, seq: &AnnotatedSequence) -> f64 {
    model.score_tokens(&seq.tokens)
}

pub fn malformed_rate(predictions: &[Prediction]) -> f64 {
    if predictions.is_empty() {
        return 0.0;
    }
    predictions.iter().filter(|p| p.malformed).count() as f64 / predictions.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{confusion, mcc};
    use crate::planted;
    use rand::Rng;
    use std::collections::BTreeMap;

    struct Corrupting;

    impl Translator for Corrupting {
        fn translate(&self, input: &[String]) -> Vec<String> {
            let mut out = input.to_vec();
            out[0] = format!("{}_x", out[0]);
            let sep = out.iter().position(|t| t == ANNOTATION_SEP).unwrap();
            out.insert(sep + 1, "S".into());
            out
        }
    }

    struct BadSlot;

    impl Translator for BadSlot {
        fn translate(&self, input: &[String]) -> Vec<String> {
            let mut out = input.to_vec();
            let sep = out.iter().position(|t| t == ANNOTATION_SEP).unwrap();
            out.insert(sep + 1, "maybe".into());
            out
        }
    }

    fn pairs(seqs: &[AnnotatedSequence]) -> Vec<TrainingPair> {
        seqs.iter().filter_map(TrainingPair::from_labeled).collect()
    }

    #[test]
    fn untrained_scores_half() {
        let m = ClassifierModel::untrained(LearnerConfig::new(1));
        let seq = &planted::token_sequences(1, 25, 3)[0];
        assert_eq!(score(&m, seq), 0.5);
        assert_eq!(predict(&m, seq).label, Label::N);
    }

    #[test]
    fn memorizes_one_pair_per_class() {
        let seqs = planted::token_sequences(40, 25, 5);
        let pos = seqs.iter().find(|s| s.label == Some(Label::S)).unwrap();
        let neg = seqs.iter().find(|s| s.label == Some(Label::N)).unwrap();
        let train_set = pairs(&[pos.clone(), neg.clone()]);
        let (m, _) = train(&train_set, None, &LearnerConfig::new(9)).unwrap();
        assert_eq!(predict(&m, pos).label, Label::S);
        assert_eq!(predict(&m, neg).label, Label::N);
    }

    #[test]
    fn rejects_single_class_and_empty() {
        let seqs = planted::token_sequences(40, 25, 5);
        let only_s: Vec<_> = pairs(&seqs).into_iter().filter(|p| p.label() == Label::S).collect();
        assert!(matches!(
            train(&only_s, None, &LearnerConfig::new(1)),
            Err(crate::Error::SingleClass)
        ));
        assert!(matches!(
            train(&[], None, &LearnerConfig::new(1)),
            Err(crate::Error::EmptyTrainingSet)
        ));
    }

    #[test]
    fn planted_corpus_is_learned() {
        let seqs = planted::token_sequences(2000, 50, 11);
        let (tr, te) = seqs.split_at(1600);
        let (m, report) = train(&pairs(tr), Some(&pairs(te)), &LearnerConfig::new(4)).unwrap();
        assert_eq!(report.epoch_loss.len(), 15);
        assert_eq!(report.valid_mcc.len(), 15);
        let truth: BTreeMap<_, _> = te.iter().map(|s| (s.mutant_id.clone(), s.label.unwrap())).collect();
        let pred: BTreeMap<_, _> = te.iter().map(|s| (s.mutant_id.clone(), predict(&m, s).label)).collect();
        assert!(mcc(&confusion(&truth, &pred).unwrap()) >= 0.9);
        for w in report.epoch_loss.windows(2) {
            assert!(w[1] <= w[0], "loss rose: {:?}", report.epoch_loss);
        }
        for s in te.iter().take(100) {
            let p = predict(&m, s);
            assert!(!p.malformed);
            assert_eq!(p.label == Label::S, score(&m, s) > 0.5);
        }
    }

    #[test]
    fn deterministic_model_bytes() {
        let seqs = planted::token_sequences(200, 25, 2);
        let p = pairs(&seqs);
        let a = train(&p, None, &LearnerConfig::new(8)).unwrap().0;
        let b = train(&p, None, &LearnerConfig::new(8)).unwrap().0;
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let back = ClassifierModel::from_json(&a.to_json().unwrap()).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_json().unwrap(), a.to_json().unwrap());
    }

    #[test]
    fn corrupting_translator_falls_back() {
        for s in planted::token_sequences(50, 25, 6) {
            let p = predict(&Corrupting, &s);
            assert_eq!((p.label, p.malformed), (Label::N, true));
            let q = predict(&BadSlot, &s);
            assert_eq!((q.label, q.malformed), (Label::N, true));
        }
    }

    #[test]
    fn unseen_tokens_map_to_unknown() {
        let seqs = planted::token_sequences(100, 25, 2);
        let (m, _) = train(&pairs(&seqs), None, &LearnerConfig::new(1)).unwrap();
        assert_eq!(m.vocabulary().index_of("never_seen_token"), UNK_INDEX);
        assert!(m.vocabulary().contains("MST["));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = crate::seed::rng(77);
        let width = 12;
        let rows: Vec<Vec<usize>> = (0..30)
            .map(|_| (0..width).filter(|_| rng.gen_bool(0.3)).collect())
            .collect();
        let targets = (0..30).map(|_| rng.gen_range(0..2) as f64).collect();
        let data = Design { rows, targets, width };
        let h = 1e-5;
        for point in 0..50 {
            let params: Vec<f64> = (0..=width).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let l2 = if point % 2 == 0 { 0.0 } else { 0.05 };
            let (_, analytic) = loss_and_gradient(&params, &data, l2);
            let numeric: Vec<f64> = (0..=width)
                .map(|j| {
                    let mut up = params.clone();
                    let mut down = params.clone();
                    up[j] += h;
                    down[j] -= h;
                    (loss_and_gradient(&up, &data, l2).0 - loss_and_gradient(&down, &data, l2).0) / (2.0 * h)
                })
                .collect();
            let diff: f64 = analytic
                .iter()
                .zip(&numeric)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            let norm: f64 = analytic
                .iter()
                .map(|a| a * a)
                .sum::<f64>()
                .sqrt()
                .max(numeric.iter().map(|a| a * a).sum::<f64>().sqrt());
            assert!(diff / norm.max(1e-12) < 1e-5, "point {point}: {}", diff / norm);
        }
    }
}
