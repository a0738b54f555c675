use std::collections::HashMap;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::abstraction::{AnnotatedSequence, ANNOTATION_OPEN};
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::metrics::{mcc, ConfusionMatrix};
use crate::seed;

use super::vocab::Vocabulary;

pub const BACKEND: &str = "ngram-logistic";

/// An annotated input line paired with the same line carrying its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingPair {
    pub mutant_id: String,
    pub input: Vec<String>,
    pub output: Vec<String>,
    pub label_slot: usize,
    pub budget: Option<usize>,
}

impl TrainingPair {
    pub fn new(seq: &AnnotatedSequence, label: Label) -> Self {
        Self {
            mutant_id: seq.mutant_id.clone(),
            input: seq.tokens.clone(),
            output: seq.output_tokens(label),
            label_slot: seq.label_slot(),
            budget: seq.length_budget,
        }
    }

    /// Pair from a sequence that already carries its label.
    pub fn from_labeled(seq: &AnnotatedSequence) -> Option<Self> {
        seq.label.map(|l| Self::new(seq, l))
    }

    pub fn label(&self) -> Label {
        if self.output[self.label_slot] == Label::S.as_str() {
            Label::S
        } else {
            Label::N
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub seed: u64,
    #[serde(default = "default_lr")]
    pub learning_rate: f64,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default)]
    pub l2: f64,
    #[serde(default = "default_max_ngram")]
    pub max_ngram: usize,
    /// Tokens before the annotation that also yield local features.
    #[serde(default = "default_radius")]
    pub context_radius: usize,
}

fn default_lr() -> f64 {
    0.1
}
fn default_epochs() -> usize {
    15
}
fn default_max_ngram() -> usize {
    3
}
fn default_radius() -> usize {
    8
}

impl LearnerConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            learning_rate: default_lr(),
            epochs: default_epochs(),
            l2: 0.0,
            max_ngram: default_max_ngram(),
            context_radius: default_radius(),
        }
    }
}

// Feature keys are index tuples tagged by family.
const GLOBAL: u32 = 0;
const LOCAL: u32 = 1;
const OP_LOCAL: u32 = 2;

fn feature_keys(ids: &[u32], annotation_start: Option<usize>, cfg: &LearnerConfig, mut emit: impl FnMut(Vec<u32>)) {
    for n in 1..=cfg.max_ngram {
        for w in ids.windows(n) {
            let mut k = Vec::with_capacity(n + 1);
            k.push(GLOBAL);
            k.extend_from_slice(w);
            emit(k);
        }
    }
    let Some(start) = annotation_start else { return };
    let op = ids.get(start + 1).copied().unwrap_or(super::vocab::UNK_INDEX);
    let local = &ids[start.saturating_sub(cfg.context_radius)..start];
    for n in 1..=2.min(cfg.max_ngram) {
        for w in local.windows(n) {
            let mut k = vec![LOCAL];
            k.extend_from_slice(w);
            emit(k);
        }
    }
    for &t in local {
        emit(vec![OP_LOCAL, op, t]);
    }
}

/// Binary feature extractor: presence of token n-grams over the window,
/// n-grams of the tokens just before the annotation, and operator/context
/// conjunctions.
#[derive(Debug, Clone, Default)]
struct Featurizer {
    keys: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl Featurizer {
    fn from_keys(keys: Vec<Vec<u32>>) -> Self {
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        Self { keys, index }
    }

    fn fit(&mut self, ids: &[u32], start: Option<usize>, cfg: &LearnerConfig) {
        feature_keys(ids, start, cfg, |k| {
            if !self.index.contains_key(&k) {
                self.index.insert(k.clone(), self.keys.len());
                self.keys.push(k);
            }
        });
    }

    fn transform(&self, ids: &[u32], start: Option<usize>, cfg: &LearnerConfig) -> Vec<usize> {
        let mut out = Vec::new();
        feature_keys(ids, start, cfg, |k| {
            if let Some(&i) = self.index.get(&k) {
                out.push(i);
            }
        });
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn annotation_start(tokens: &[String]) -> Option<usize> {
    tokens.iter().position(|t| t == ANNOTATION_OPEN)
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Logistic loss `-log p(y)` computed from the logit without overflow.
fn logistic_loss(z: f64, y: f64) -> f64 {
    // log(1 + e^z) - y z
    let softplus = if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    };
    softplus - y * z
}

/// Sparse binary design matrix with 0/1 targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub rows: Vec<Vec<usize>>,
    pub targets: Vec<f64>,
    pub width: usize,
}

/// Mean logistic loss and its gradient. `params` holds the feature weights
/// followed by the bias; `l2` penalizes the weights (not the bias) by
/// `l2 / 2 · ‖w‖²`.
pub fn loss_and_gradient(params: &[f64], data: &Design, l2: f64) -> (f64, Vec<f64>) {
    let w = data.width;
    assert_eq!(params.len(), w + 1, "params must hold width weights plus bias");
    let n = data.rows.len().max(1) as f64;
    let mut grad = vec![0.0; w + 1];
    let mut loss = 0.0;
    for (row, &y) in data.rows.iter().zip(&data.targets) {
        let z = params[w] + row.iter().map(|&j| params[j]).sum::<f64>();
        loss += logistic_loss(z, y);
        let g = sigmoid(z) - y;
        for &j in row {
            grad[j] += g;
        }
        grad[w] += g;
    }
    loss /= n;
    for g in &mut grad {
        *g /= n;
    }
    if l2 > 0.0 {
        for j in 0..w {
            loss += 0.5 * l2 * params[j] * params[j];
            grad[j] += l2 * params[j];
        }
    }
    (loss, grad)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TrainingReport {
    /// Mean training loss after each epoch.
    pub epoch_loss: Vec<f64>,
    /// Validation MCC after each epoch, when a validation set was given.
    pub valid_mcc: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    backend: String,
    budget: Option<usize>,
    config: LearnerConfig,
    vocabulary: Vocabulary,
    features: Vec<Vec<u32>>,
    weights: Vec<f64>,
    bias: f64,
}

/// Reference sequence classifier: logistic regression over binary token
/// n-gram features.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "ModelFile", try_from = "ModelFile")]
pub struct ClassifierModel {
    pub budget: Option<usize>,
    pub config: LearnerConfig,
    vocabulary: Vocabulary,
    featurizer: Featurizer,
    weights: Vec<f64>,
    bias: f64,
}

impl From<ClassifierModel> for ModelFile {
    fn from(m: ClassifierModel) -> Self {
        ModelFile {
            backend: BACKEND.to_string(),
            budget: m.budget,
            config: m.config,
            vocabulary: m.vocabulary,
            features: m.featurizer.keys,
            weights: m.weights,
            bias: m.bias,
        }
    }
}

impl TryFrom<ModelFile> for ClassifierModel {
    type Error = String;

    fn try_from(f: ModelFile) -> std::result::Result<Self, String> {
        if f.backend != BACKEND {
            return Err(format!("unsupported backend `{}`", f.backend));
        }
        if f.features.len() != f.weights.len() {
            return Err(format!("{} features but {} weights", f.features.len(), f.weights.len()));
        }
        Ok(Self {
            budget: f.budget,
            config: f.config,
            vocabulary: f.vocabulary,
            featurizer: Featurizer::from_keys(f.features),
            weights: f.weights,
            bias: f.bias,
        })
    }
}

impl PartialEq for ClassifierModel {
    fn eq(&self, other: &Self) -> bool {
        self.budget == other.budget
            && self.config == other.config
            && self.vocabulary == other.vocabulary
            && self.featurizer.keys == other.featurizer.keys
            && self.weights == other.weights
            && self.bias == other.bias
    }
}

impl ClassifierModel {
    /// Model with no features and zero bias; scores every input at 0.5.
    pub fn untrained(config: LearnerConfig) -> Self {
        Self {
            budget: None,
            config,
            vocabulary: Vocabulary::default(),
            featurizer: Featurizer::default(),
            weights: Vec::new(),
            bias: 0.0,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn feature_count(&self) -> usize {
        self.weights.len()
    }

    fn encode(&self, tokens: &[String]) -> Vec<usize> {
        let ids = self.vocabulary.encode(tokens);
        self.featurizer.transform(&ids, annotation_start(tokens), &self.config)
    }

    fn logit(&self, row: &[usize]) -> f64 {
        self.bias + row.iter().map(|&j| self.weights[j]).sum::<f64>()
    }

    /// Probability that the input's label is `S`.
    pub fn score_tokens(&self, tokens: &[String]) -> f64 {
        sigmoid(self.logit(&self.encode(tokens)))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Trains the reference backend by seeded SGD, one example at a time.
pub fn train(
    pairs: &[TrainingPair],
    valid: Option<&[TrainingPair]>,
    config: &LearnerConfig,
) -> Result<(ClassifierModel, TrainingReport)> {
    if pairs.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let positives = pairs.iter().filter(|p| p.label() == Label::S).count();
    if positives == 0 || positives == pairs.len() {
        return Err(Error::SingleClass);
    }
    let budget = pairs[0].budget;
    if let Some(p) = pairs.iter().find(|p| p.budget != budget) {
        return Err(Error::SchemaMismatch(format!(
            "pair `{}` windowed to {:?}, expected {:?}",
            p.mutant_id, p.budget, budget
        )));
    }

    let vocabulary = Vocabulary::build(pairs.iter().map(|p| p.input.as_slice()));
    let mut featurizer = Featurizer::default();
    let encoded: Vec<(Vec<u32>, Option<usize>)> = pairs
        .iter()
        .map(|p| (vocabulary.encode(&p.input), annotation_start(&p.input)))
        .collect();
    for (ids, start) in &encoded {
        featurizer.fit(ids, *start, config);
    }
    let design = Design {
        rows: encoded
            .iter()
            .map(|(ids, start)| featurizer.transform(ids, *start, config))
            .collect(),
        targets: pairs.iter().map(|p| p.label().is_positive() as u8 as f64).collect(),
        width: featurizer.keys.len(),
    };

    let mut model = ClassifierModel {
        budget,
        config: config.clone(),
        vocabulary,
        featurizer,
        weights: vec![0.0; design.width],
        bias: 0.0,
    };
    let valid_rows: Option<Vec<(Vec<usize>, Label)>> =
        valid.map(|v| v.iter().map(|p| (model.encode(&p.input), p.label())).collect());

    let mut rng = seed::rng(config.seed);
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    let mut report = TrainingReport::default();
    let lr = config.learning_rate;
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let row = &design.rows[i];
            let g = sigmoid(model.logit(row)) - design.targets[i];
            model.bias -= lr * g;
            for &j in row {
                model.weights[j] -= lr * (g + config.l2 * model.weights[j]);
            }
        }
        let mut params = model.weights.clone();
        params.push(model.bias);
        report.epoch_loss.push(loss_and_gradient(&params, &design, config.l2).0);
        if let Some(rows) = &valid_rows {
            let mut cm = ConfusionMatrix::default();
            for (row, truth) in rows {
                cm.record(*truth, Label::from_bool(sigmoid(model.logit(row)) > 0.5));
            }
            report.valid_mcc.push(mcc(&cm));
        }
    }
    Ok((model, report))
}
