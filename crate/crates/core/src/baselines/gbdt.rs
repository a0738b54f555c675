use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::corpus::{FeatureSet, Label, CATEGORICAL_FEATURES};
use crate::error::{Error, Result};
use crate::learner::sigmoid;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub seed: u64,
    #[serde(default = "default_rounds")]
    pub rounds: usize,
    #[serde(default = "default_depth")]
    pub max_depth: usize,
    #[serde(default = "default_lr")]
    pub learning_rate: f64,
    #[serde(default = "default_subsample")]
    pub subsample: f64,
    #[serde(default = "default_min_leaf")]
    pub min_samples_leaf: usize,
    /// Expand categorical features into one indicator column per seen code.
    #[serde(default)]
    pub one_hot: bool,
}

fn default_rounds() -> usize {
    100
}
fn default_depth() -> usize {
    3
}
fn default_lr() -> f64 {
    0.1
}
fn default_subsample() -> f64 {
    0.8
}
fn default_min_leaf() -> usize {
    2
}

impl EnsembleConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rounds: default_rounds(),
            max_depth: default_depth(),
            learning_rate: default_lr(),
            subsample: default_subsample(),
            min_samples_leaf: default_min_leaf(),
            one_hot: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Column {
    Raw { feature: usize },
    Indicator { feature: usize, code: f64 },
}

impl Column {
    fn value(&self, x: &[f64]) -> f64 {
        match *self {
            Column::Raw { feature } => x[feature],
            Column::Indicator { feature, code } => (x[feature] == code) as u8 as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Node {
    Leaf {
        value: f64,
    },
    Split {
        column: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Regression tree stored as an arena; node 0 is the root and rows with
/// `x[column] <= threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value } => return value,
                Node::Split {
                    column,
                    threshold,
                    left,
                    right,
                } => {
                    i = if x[column] <= threshold { left } else { right };
                }
            }
        }
    }

    fn scale(&mut self, factor: f64) {
        for n in &mut self.nodes {
            if let Node::Leaf { value } = n {
                *value *= factor;
            }
        }
    }

    /// Columns referenced by splits.
    pub fn columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            Node::Split { column, .. } => Some(*column),
            Node::Leaf { .. } => None,
        })
    }
}

/// Stochastic gradient-boosted trees for binary logistic loss.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeEnsemble {
    pub feature_names: Vec<String>,
    pub columns: Vec<Column>,
    /// Prior log-odds of the positive class.
    pub intercept: f64,
    pub learning_rate: f64,
    pub trees: Vec<Tree>,
    /// Mean training loss after the intercept and after each round.
    pub training_loss: Vec<f64>,
}

impl TreeEnsemble {
    fn expand(&self, x: &[f64]) -> Vec<f64> {
        self.columns.iter().map(|c| c.value(x)).collect()
    }

    pub fn logit(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.feature_names.len() {
            return Err(Error::SchemaMismatch(format!(
                "expected {} features, got {}",
                self.feature_names.len(),
                values.len()
            )));
        }
        let row = self.expand(values);
        Ok(self.intercept + self.trees.iter().map(|t| t.eval(&row)).sum::<f64>())
    }

    /// Checks that `features` uses this model's schema.
    pub fn check_schema(&self, features: &FeatureSet) -> Result<()> {
        if features.names() != self.feature_names.as_slice() {
            return Err(Error::SchemaMismatch(format!(
                "model features {:?} vs input {:?}",
                self.feature_names,
                features.names()
            )));
        }
        Ok(())
    }
}

pub fn predict_proba(ensemble: &TreeEnsemble, values: &[f64]) -> Result<f64> {
    Ok(sigmoid(ensemble.logit(values)?))
}

fn mean_loss(f: &[f64], y: &[f64]) -> f64 {
    f.iter()
        .zip(y)
        .map(|(&z, &t)| {
            let softplus = if z > 0.0 {
                z + (-z).exp().ln_1p()
            } else {
                z.exp().ln_1p()
            };
            softplus - t * z
        })
        .sum::<f64>()
        / f.len() as f64
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    residual: &'a [f64],
    hessian: &'a [f64],
    cfg: &'a EnsembleConfig,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn leaf(&self, rows: &[usize]) -> Node {
        let num: f64 = rows.iter().map(|&r| self.residual[r]).sum();
        let den: f64 = rows.iter().map(|&r| self.hessian[r]).sum();
        Node::Leaf {
            value: self.cfg.learning_rate * num / den.max(1e-12),
        }
    }

    /// Best least-squares split of `rows`: (column, threshold, gain).
    fn best_split(&self, rows: &[usize]) -> Option<(usize, f64, f64)> {
        let min_leaf = self.cfg.min_samples_leaf.max(1);
        let n = rows.len();
        if n < 2 * min_leaf {
            return None;
        }
        let total: f64 = rows.iter().map(|&r| self.residual[r]).sum();
        let base = total * total / n as f64;
        let mut best: Option<(usize, f64, f64)> = None;
        let width = self.x[0].len();
        let mut sorted = rows.to_vec();
        for c in 0..width {
            sorted.sort_by(|&a, &b| self.x[a][c].total_cmp(&self.x[b][c]).then(a.cmp(&b)));
            let mut left = 0.0;
            for i in 0..n - 1 {
                left += self.residual[sorted[i]];
                let (v, next) = (self.x[sorted[i]][c], self.x[sorted[i + 1]][c]);
                if v == next || i + 1 < min_leaf || n - i - 1 < min_leaf {
                    continue;
                }
                let nl = (i + 1) as f64;
                let nr = (n - i - 1) as f64;
                let right = total - left;
                let gain = left * left / nl + right * right / nr - base;
                if gain > 1e-12 && best.is_none_or(|b| gain > b.2) {
                    best = Some((c, v + (next - v) / 2.0, gain));
                }
            }
        }
        best
    }

    fn grow(&mut self, rows: &[usize], depth: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { value: 0.0 });
        let split = if depth < self.cfg.max_depth {
            self.best_split(rows)
        } else {
            None
        };
        match split {
            None => self.nodes[id] = self.leaf(rows),
            Some((column, threshold, _)) => {
                let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| self.x[i][column] <= threshold);
                let left = self.grow(&l, depth + 1);
                let right = self.grow(&r, depth + 1);
                self.nodes[id] = Node::Split {
                    column,
                    threshold,
                    left,
                    right,
                };
            }
        }
        id
    }
}

fn columns_for(features: &FeatureSet, one_hot: bool) -> Vec<Column> {
    let mut out = Vec::new();
    for (f, name) in features.names().iter().enumerate() {
        if one_hot && CATEGORICAL_FEATURES.contains(&name.as_str()) {
            let codes: BTreeSet<u64> = features.vectors().iter().map(|v| v.values[f].to_bits()).collect();
            let mut codes: Vec<f64> = codes.into_iter().map(f64::from_bits).collect();
            codes.sort_by(f64::total_cmp);
            out.extend(codes.into_iter().map(|code| Column::Indicator { feature: f, code }));
        } else {
            out.push(Column::Raw { feature: f });
        }
    }
    out
}

/// Fits a boosted ensemble on every vector of `features` that has a label.
///
/// Each round fits a least-squares tree to the residuals of a row
/// subsample, sets leaves to Newton steps, and halves the tree until the
/// full training loss does not rise, so the recorded loss never increases.
pub fn train_ensemble(
    features: &FeatureSet,
    labels: &BTreeMap<String, Label>,
    config: &EnsembleConfig,
) -> Result<TreeEnsemble> {
    let mut raw = Vec::new();
    let mut y = Vec::new();
    for v in features.vectors() {
        let label = labels
            .get(&v.mutant_id)
            .ok_or_else(|| Error::UnmatchedMutant(v.mutant_id.clone()))?;
        raw.push(v.values.clone());
        y.push(label.is_positive() as u8 as f64);
    }
    if y.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let pos: f64 = y.iter().sum();
    if pos == 0.0 || pos == y.len() as f64 {
        return Err(Error::SingleClass);
    }
    let n = y.len();
    let prior = pos / n as f64;
    let mut ensemble = TreeEnsemble {
        feature_names: features.names().to_vec(),
        columns: columns_for(features, config.one_hot),
        intercept: (prior / (1.0 - prior)).ln(),
        learning_rate: config.learning_rate,
        trees: Vec::new(),
        training_loss: Vec::new(),
    };
    let x: Vec<Vec<f64>> = raw.iter().map(|r| ensemble.expand(r)).collect();
    let mut f = vec![ensemble.intercept; n];
    let mut loss = mean_loss(&f, &y);
    ensemble.training_loss.push(loss);

    let mut rng = seed::rng(config.seed);
    let take = ((config.subsample.clamp(0.0, 1.0) * n as f64).round() as usize).clamp(1, n);
    for _ in 0..config.rounds {
        let mut rows = sample(&mut rng, n, take).into_vec();
        rows.sort_unstable();
        let p: Vec<f64> = f.iter().map(|&z| sigmoid(z)).collect();
        let residual: Vec<f64> = y.iter().zip(&p).map(|(t, q)| t - q).collect();
        let hessian: Vec<f64> = p.iter().map(|q| q * (1.0 - q)).collect();
        let mut builder = Builder {
            x: &x,
            residual: &residual,
            hessian: &hessian,
            cfg: config,
            nodes: Vec::new(),
        };
        builder.grow(&rows, 0);
        let mut tree = Tree { nodes: builder.nodes };

        let step: Vec<f64> = x.iter().map(|r| tree.eval(r)).collect();
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let trial: Vec<f64> = f.iter().zip(&step).map(|(a, s)| a + scale * s).collect();
            let l = mean_loss(&trial, &y);
            if l <= loss {
                accepted = Some((trial, l));
                break;
            }
            scale /= 2.0;
        }
        match accepted {
            Some((trial, l)) => {
                tree.scale(scale);
                f = trial;
                loss = l;
            }
            None => tree.scale(0.0),
        }
        ensemble.trees.push(tree);
        ensemble.training_loss.push(loss);
    }
    Ok(ensemble)
}
