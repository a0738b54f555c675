//! Synthetic data sets with a known, learnable signal.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::abstraction::{AnnotatedSequence, ANNOTATION_CLOSE, ANNOTATION_OPEN, ANNOTATION_SEP, ANNOTATION_SPAN};
use crate::corpus::{FeatureSet, FeatureVector, Label};
use crate::seed;

pub const TRIGGER: &str = "trigger_tok";

const FILLER: &[&str] = &[
    "if", "(", ")", "{", "}", ";", "=", "==", "!=", "<", ">", "+", "-", "*", "return", "null", "0", "1", "while",
    "for", "int", "char", "String", "fn_1", "fn_2", "fn_3", "vr_1", "vr_2", "vr_3", "vr_4", "vr_5", "vr_6", "tp_1",
    "tp_2", "lr_1", "lr_2", "&&", "||", "[", "]", ",", ".", "new", "else", "break",
];

const OPERATORS: &[&str] = &["ROR", "AOR", "LCR", "ReturnValsMutator", "UOI"];

/// `n` windowed sequences of exactly `budget` tokens, half of them carrying
/// [`TRIGGER`] somewhere in the context; label `S` iff the trigger is present.
pub fn token_sequences(n: usize, budget: usize, seed: u64) -> Vec<AnnotatedSequence> {
    assert!(budget > ANNOTATION_SPAN, "budget must leave room for context");
    let mut rng = seed::rng(seed);
    (0..n)
        .map(|i| {
            let context = budget - ANNOTATION_SPAN;
            let mut tokens: Vec<String> = (0..context)
                .map(|_| FILLER.choose(&mut rng).unwrap().to_string())
                .collect();
            let positive = rng.gen_bool(0.5);
            if positive {
                let at = rng.gen_range(0..context);
                tokens[at] = TRIGGER.to_string();
            }
            let start = rng.gen_range(0..=context);
            let op = OPERATORS.choose(&mut rng).unwrap();
            let annotation = [ANNOTATION_OPEN, op, ANNOTATION_SEP, ANNOTATION_CLOSE].map(String::from);
            tokens.splice(start..start, annotation);
            AnnotatedSequence {
                mutant_id: format!("p{i:05}"),
                tokens,
                annotation_start: start,
                length_budget: Some(budget),
                label: Some(Label::from_bool(positive)),
            }
        })
        .collect()
}

/// `n` feature vectors over `names` with uniform values in [0, 1); the label
/// is `S` iff the feature at `signal` exceeds 0.5.
pub fn feature_set(n: usize, names: &[&str], signal: usize, seed: u64) -> (FeatureSet, Vec<Label>) {
    let mut rng = seed::rng(seed);
    let mut vectors = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let values: Vec<f64> = names.iter().map(|_| rng.gen::<f64>()).collect();
        labels.push(Label::from_bool(values[signal] > 0.5));
        vectors.push(FeatureVector {
            mutant_id: format!("f{i:05}"),
            values,
        });
    }
    let set =
        FeatureSet::new(names.iter().map(|s| s.to_string()).collect(), vectors).expect("generated ids are unique");
    (set, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequences_fill_budget_and_match_label() {
        for s in token_sequences(200, 50, 1) {
            assert_eq!(s.tokens.len(), 50);
            assert_eq!(s.tokens[s.annotation_start], ANNOTATION_OPEN);
            assert_eq!(s.label == Some(Label::S), s.tokens.iter().any(|t| t == TRIGGER));
        }
    }
}
