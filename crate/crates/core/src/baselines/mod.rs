//! Baseline selectors: a boosted-tree classifier over mutant features and
//! uniform random ranking.

mod gbdt;

pub use gbdt::{predict_proba, train_ensemble, Column, EnsembleConfig, Node, Tree, TreeEnsemble};

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::corpus::FeatureVector;
use crate::error::{Error, Result};
use crate::seed;

/// Probability above which a mutant is selected.
pub const THRESHOLD: f64 = 0.5;

/// Mutant ids, highest priority first, with non-increasing scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ranking {
    pub ids: Vec<String>,
    pub scores: Vec<f64>,
}

impl Ranking {
    /// Sorts by descending score; equal scores fall back to ascending id.
    pub fn from_scores(mut scored: Vec<(String, f64)>) -> Self {
        scored.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.0.cmp(&b.0))
        });
        let (ids, scores) = scored.into_iter().unzip();
        Self { ids, scores }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Ids scored strictly above [`THRESHOLD`].
    pub fn selected(&self) -> Vec<&str> {
        self.ids
            .iter()
            .zip(&self.scores)
            .filter(|(_, &s)| s > THRESHOLD)
            .map(|(id, _)| id.as_str())
            .collect()
    }
}

pub fn rank_by_probability<'a, I>(ensemble: &TreeEnsemble, candidates: I) -> Result<Ranking>
where
    I: IntoIterator<Item = &'a FeatureVector>,
{
    let scored = candidates
        .into_iter()
        .map(|v| Ok((v.mutant_id.clone(), predict_proba(ensemble, &v.values)?)))
        .collect::<Result<Vec<_>>>()?;
    if scored.is_empty() {
        return Err(Error::EmptySelection);
    }
    Ok(Ranking::from_scores(scored))
}

/// Uniform permutation of `candidates`; scores fall linearly from 1 with position.
pub fn random_rank<S: AsRef<str>>(candidates: &[S], seed: u64) -> Result<Ranking> {
    if candidates.is_empty() {
        return Err(Error::EmptySelection);
    }
    let mut ids: Vec<String> = candidates.iter().map(|s| s.as_ref().to_string()).collect();
    ids.shuffle(&mut seed::rng(seed));
    let n = ids.len() as f64;
    let scores = (0..ids.len()).map(|i| 1.0 - i as f64 / n).collect();
    Ok(Ranking { ids, scores })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{FeatureSet, Label, FEATURE_NAMES};
    use crate::planted;
    use proptest::prelude::*;
    use rand::Rng;
    use std::collections::{BTreeMap, HashMap};

    fn label_map(set: &FeatureSet, labels: &[Label]) -> BTreeMap<String, Label> {
        set.vectors()
            .iter()
            .zip(labels)
            .map(|(v, &l)| (v.mutant_id.clone(), l))
            .collect()
    }

    #[test]
    fn planted_threshold_feature() {
        let (set, labels) = planted::feature_set(800, &FEATURE_NAMES, 3, 21);
        let (train_v, test_v) = set.vectors().split_at(600);
        let train_set = FeatureSet::new(set.names().to_vec(), train_v.to_vec()).unwrap();
        let model = train_ensemble(&train_set, &label_map(&set, &labels), &EnsembleConfig::new(3)).unwrap();
        let correct = test_v
            .iter()
            .zip(&labels[600..])
            .filter(|(v, l)| (predict_proba(&model, &v.values).unwrap() > THRESHOLD) == l.is_positive())
            .count();
        assert!(correct as f64 / test_v.len() as f64 >= 0.95, "accuracy {correct}/200");
        for w in model.training_loss.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!(model
            .trees
            .iter()
            .flat_map(Tree::columns)
            .all(|c| c < model.columns.len()));
    }

    #[test]
    fn zero_rounds_is_prior() {
        let (set, labels) = planted::feature_set(100, &FEATURE_NAMES, 0, 4);
        let cfg = EnsembleConfig {
            rounds: 0,
            ..EnsembleConfig::new(1)
        };
        let m = train_ensemble(&set, &label_map(&set, &labels), &cfg).unwrap();
        let prior = labels.iter().filter(|l| l.is_positive()).count() as f64 / 100.0;
        for v in set.vectors().iter().take(5) {
            assert!((predict_proba(&m, &v.values).unwrap() - prior).abs() < 1e-12);
        }
    }

    #[test]
    fn balanced_intercept_only_is_half() {
        let (set, _) = planted::feature_set(4, &FEATURE_NAMES, 0, 4);
        let labels = [Label::S, Label::N, Label::S, Label::N];
        let cfg = EnsembleConfig {
            rounds: 0,
            ..EnsembleConfig::new(1)
        };
        let m = train_ensemble(&set, &label_map(&set, &labels), &cfg).unwrap();
        assert_eq!(predict_proba(&m, &set.vectors()[0].values).unwrap(), 0.5);
    }

    #[test]
    fn same_seed_same_ensemble_and_schema_checks() {
        let (set, labels) = planted::feature_set(200, &FEATURE_NAMES, 5, 8);
        let lm = label_map(&set, &labels);
        let a = train_ensemble(&set, &lm, &EnsembleConfig::new(5)).unwrap();
        let b = train_ensemble(&set, &lm, &EnsembleConfig::new(5)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(matches!(predict_proba(&a, &[0.1, 0.2]), Err(Error::SchemaMismatch(_))));
        let single: BTreeMap<_, _> = lm.keys().map(|k| (k.clone(), Label::N)).collect();
        assert!(matches!(
            train_ensemble(&set, &single, &EnsembleConfig::new(5)),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn one_hot_mode_expands_categoricals() {
        let names: Vec<String> = FEATURE_NAMES.iter().map(|s| s.to_string()).collect();
        let mut rng = seed::rng(2);
        let mut labels = BTreeMap::new();
        let mut vectors = Vec::new();
        let op = names.iter().position(|n| n == "MutantType").unwrap();
        for i in 0..300 {
            let mut values: Vec<f64> = (0..16).map(|_| rng.gen_range(0..3) as f64).collect();
            values[op] = rng.gen_range(0..6) as f64;
            // Code 4 alone marks positives: not a threshold-contiguous set.
            labels.insert(format!("m{i:03}"), Label::from_bool(values[op] == 4.0));
            vectors.push(crate::corpus::FeatureVector {
                mutant_id: format!("m{i:03}"),
                values,
            });
        }
        let set = FeatureSet::new(names, vectors).unwrap();
        let cfg = EnsembleConfig {
            one_hot: true,
            ..EnsembleConfig::new(1)
        };
        let m = train_ensemble(&set, &labels, &cfg).unwrap();
        assert!(m.columns.len() > 16);
        let acc = set
            .vectors()
            .iter()
            .filter(|v| (predict_proba(&m, &v.values).unwrap() > THRESHOLD) == labels[&v.mutant_id].is_positive())
            .count();
        assert_eq!(acc, 300);
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let r = Ranking::from_scores(vec![("a".into(), 0.9), ("b".into(), 0.2), ("c".into(), 0.9)]);
        assert_eq!(r.ids, ["a", "c", "b"]);
        let r = Ranking::from_scores(vec![("z".into(), 0.5), ("x".into(), 0.5), ("y".into(), 0.5)]);
        assert_eq!(r.ids, ["x", "y", "z"]);
        assert!(r.selected().is_empty());
    }

    #[test]
    fn random_rank_basics() {
        assert_eq!(random_rank(&["only"], 1).unwrap().ids, ["only"]);
        assert_eq!(
            random_rank(&["a", "b", "c", "d"], 9).unwrap(),
            random_rank(&["a", "b", "c", "d"], 9).unwrap()
        );
        assert!(random_rank::<&str>(&[], 1).is_err());
    }

    #[test]
    fn random_rank_is_uniform() {
        let draws = 10_000;
        let mut counts: HashMap<Vec<String>, usize> = HashMap::new();
        for s in 0..draws {
            *counts.entry(random_rank(&["a", "b", "c"], s).unwrap().ids).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let p = 1.0 / 6.0;
        let expected = draws as f64 * p;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for c in counts.values() {
            assert!((*c as f64 - expected).abs() <= 3.0 * sigma, "{counts:?}");
        }
    }

    proptest! {
        #[test]
        fn rankings_are_sorted_permutations(scores in prop::collection::vec(0u8..5, 1..40), seed in any::<u64>()) {
            let scored: Vec<(String, f64)> = scores.iter().enumerate().map(|(i, &s)| (format!("m{i}"), s as f64 / 4.0)).collect();
            let r = Ranking::from_scores(scored.clone());
            let mut a = r.ids.clone();
            a.sort();
            let mut b: Vec<String> = scored.iter().map(|s| s.0.clone()).collect();
            b.sort();
            prop_assert_eq!(&a, &b);
            prop_assert!(r.scores.windows(2).all(|w| w[0] >= w[1]));
            let rr = random_rank(&b, seed).unwrap();
            let mut c = rr.ids.clone();
            c.sort();
            prop_assert_eq!(c, b);
            prop_assert!(rr.scores.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn probabilities_in_unit_interval(vals in prop::collection::vec(prop::collection::vec(-1e3f64..1e3, 16), 1..50)) {
            let (set, labels) = planted::feature_set(60, &FEATURE_NAMES, 2, 1);
            let cfg = EnsembleConfig { rounds: 10, ..EnsembleConfig::new(1) };
            let m = train_ensemble(&set, &label_map(&set, &labels), &cfg).unwrap();
            for v in vals {
                let p = predict_proba(&m, &v).unwrap();
                prop_assert!((0.0..=1.0).contains(&p));
            }
        }
    }
}
