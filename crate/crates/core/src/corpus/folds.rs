use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Assignment of whole projects to cross-validation folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSplit {
    pub fold_count: usize,
    pub assignments: BTreeMap<String, usize>,
}

/// Test / train / validation folds for one cross-validation round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub test: usize,
    pub train: Vec<usize>,
    pub valid: usize,
}

impl FoldSplit {
    pub fn fold_of(&self, project_id: &str) -> Option<usize> {
        self.assignments.get(project_id).copied()
    }

    pub fn projects_in(&self, fold: usize) -> Vec<&str> {
        self.assignments
            .iter()
            .filter(|(_, &f)| f == fold)
            .map(|(p, _)| p.as_str())
            .collect()
    }

    /// The round where `test_fold` is held out; the remaining folds are
    /// split with [`split_train_valid`].
    pub fn plan(&self, test_fold: usize) -> Result<FoldPlan> {
        let rest: Vec<usize> = (0..self.fold_count).filter(|&f| f != test_fold).collect();
        let (train, valid) = split_train_valid(&rest)?;
        Ok(FoldPlan {
            test: test_fold,
            train,
            valid,
        })
    }
}

/// Partitions `project_ids` into `k` folds of near-equal size. Projects are
/// sorted, shuffled with `seed`, then dealt round-robin.
pub fn make_folds<S: AsRef<str>>(project_ids: &[S], k: usize, seed: u64) -> Result<FoldSplit> {
    if k == 0 || k > project_ids.len() {
        return Err(Error::TooFewProjects {
            projects: project_ids.len(),
            folds: k,
        });
    }
    let mut ids: Vec<&str> = project_ids.iter().map(AsRef::as_ref).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() != project_ids.len() {
        return Err(Error::InvalidCorpus("duplicate project ids".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);
    let assignments = ids
        .into_iter()
        .enumerate()
        .map(|(i, p)| (p.to_string(), i % k))
        .collect();
    Ok(FoldSplit {
        fold_count: k,
        assignments,
    })
}

/// Reserves the last training fold for validation.
pub fn split_train_valid<T: Clone>(train_folds: &[T]) -> Result<(Vec<T>, T)> {
    match train_folds.split_last() {
        Some((last, rest)) if !rest.is_empty() => Ok((rest.to_vec(), last.clone())),
        _ => Err(Error::TooFewTrainingFolds(train_folds.len())),
    }
}
