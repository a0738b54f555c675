//! Canonical data model for mutation corpora: mutants, source units, kill
//! matrices, ground-truth labels, feature vectors and cross-validation folds.
//!
//! On disk a corpus is a directory with a `manifest.json` naming the other
//! files (see [`Manifest`]). In memory it is an immutable [`Corpus`].

mod folds;
mod io;
mod matrix;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use folds::{make_folds, split_train_valid, FoldPlan, FoldSplit};
pub use io::{read_features, read_labels, write_features, write_labels, Manifest, ProjectEntry};
pub use matrix::KillMatrix;

/// Binary ground-truth / prediction label: subsuming (`S`) or not (`N`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    S,
    N,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::S => "S",
            Label::N => "N",
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::S
    }

    pub fn from_bool(subsuming: bool) -> Self {
        if subsuming {
            Label::S
        } else {
            Label::N
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "S" => Ok(Label::S),
            "N" => Ok(Label::N),
            other => Err(format!("label must be S or N, got `{other}`")),
        }
    }
}

/// One mutant: where it lives and which operator produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutantRecord {
    pub mutant_id: String,
    pub project_id: String,
    /// Source-unit identifier; also the unit's path relative to the corpus root.
    pub unit_path: String,
    /// 0-based index of the mutated statement in the unit's token stream.
    pub statement_index: usize,
    pub operator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
}

/// The 16 mutant features used by the decision-tree baseline, in column order.
pub const FEATURE_NAMES: [&str; 16] = [
    "statementComplexity",
    "expressionComplexity",
    "MutantType",
    "BlockDepth",
    "CfgDepth",
    "CfgPredNum",
    "CfgSuccNum",
    "NumInBlock",
    "NumOutDataDeps",
    "NumInDataDeps",
    "NumOutCtrlDeps",
    "NumInCtrlDeps",
    "AstNodeParentType",
    "NumberOfAstParents",
    "AstNodeType",
    "NumberOfAstChildren",
];

/// Integer-coded categorical columns among [`FEATURE_NAMES`].
pub const CATEGORICAL_FEATURES: [&str; 3] = ["MutantType", "AstNodeParentType", "AstNodeType"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub mutant_id: String,
    pub values: Vec<f64>,
}

/// Feature vectors sharing one schema.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    names: Vec<String>,
    vectors: Vec<FeatureVector>,
    index: HashMap<String, usize>,
}

impl FeatureSet {
    pub fn new(names: Vec<String>, vectors: Vec<FeatureVector>) -> Result<Self> {
        let mut index = HashMap::with_capacity(vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            if v.values.len() != names.len() {
                return Err(Error::SchemaMismatch(format!(
                    "mutant `{}` has {} values, schema has {} names",
                    v.mutant_id,
                    v.values.len(),
                    names.len()
                )));
            }
            if index.insert(v.mutant_id.clone(), i).is_some() {
                return Err(Error::DuplicateId(v.mutant_id.clone()));
            }
        }
        Ok(Self { names, vectors, index })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vectors(&self) -> &[FeatureVector] {
        &self.vectors
    }

    pub fn get(&self, mutant_id: &str) -> Option<&FeatureVector> {
        self.index.get(mutant_id).map(|&i| &self.vectors[i])
    }
}

/// A fully cross-linked corpus. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    projects: Vec<ProjectEntry>,
    units: BTreeMap<String, String>,
    mutants: Vec<MutantRecord>,
    matrix: KillMatrix,
    features: Option<FeatureSet>,
    mutant_index: HashMap<String, usize>,
}

impl Corpus {
    /// Assembles and validates a corpus. The kill matrix rows must follow
    /// the order of `mutants`.
    pub fn new(
        projects: Vec<ProjectEntry>,
        units: BTreeMap<String, String>,
        mutants: Vec<MutantRecord>,
        matrix: KillMatrix,
        features: Option<FeatureSet>,
    ) -> Result<Self> {
        let mut unit_project = HashMap::new();
        let mut seen_projects = HashMap::new();
        for p in &projects {
            if seen_projects.insert(p.id.clone(), ()).is_some() {
                return Err(Error::DuplicateId(p.id.clone()));
            }
            for u in &p.units {
                if !units.contains_key(u) {
                    return Err(Error::UnknownUnit(u.clone()));
                }
                if unit_project.insert(u.clone(), p.id.clone()).is_some() {
                    return Err(Error::InvalidCorpus(format!(
                        "unit `{u}` listed under more than one project"
                    )));
                }
            }
        }

        let mut statement_counts: HashMap<&str, usize> = HashMap::new();
        for (path, source) in &units {
            let tokens = crate::abstraction::tokenize(source)
                .map_err(|e| Error::InvalidCorpus(format!("unit `{path}` does not tokenize: {e}")))?;
            statement_counts.insert(path, crate::abstraction::statement_count(&tokens));
        }

        let mut mutant_index = HashMap::with_capacity(mutants.len());
        for (i, m) in mutants.iter().enumerate() {
            if mutant_index.insert(m.mutant_id.clone(), i).is_some() {
                return Err(Error::DuplicateId(m.mutant_id.clone()));
            }
            let owner = unit_project
                .get(&m.unit_path)
                .ok_or_else(|| Error::UnknownUnit(m.unit_path.clone()))?;
            if owner != &m.project_id {
                return Err(Error::InvalidCorpus(format!(
                    "mutant `{}` claims project `{}` but unit `{}` belongs to `{owner}`",
                    m.mutant_id, m.project_id, m.unit_path
                )));
            }
            let count = statement_counts[m.unit_path.as_str()];
            if m.statement_index >= count {
                return Err(Error::StatementOutOfRange {
                    index: m.statement_index,
                    count,
                });
            }
        }

        if matrix.mutant_ids().len() != mutants.len()
            || matrix.mutant_ids().iter().zip(&mutants).any(|(a, m)| a != &m.mutant_id)
        {
            return Err(Error::InvalidCorpus(
                "kill-matrix rows do not follow the mutant list".into(),
            ));
        }

        if let Some(fs) = &features {
            for v in fs.vectors() {
                if !mutant_index.contains_key(&v.mutant_id) {
                    return Err(Error::UnmatchedMutant(v.mutant_id.clone()));
                }
            }
            if let Some(m) = mutants.iter().find(|m| fs.get(&m.mutant_id).is_none()) {
                return Err(Error::InvalidCorpus(format!(
                    "mutant `{}` has no feature vector",
                    m.mutant_id
                )));
            }
        }

        Ok(Self {
            projects,
            units,
            mutants,
            matrix,
            features,
            mutant_index,
        })
    }

    pub fn projects(&self) -> &[ProjectEntry] {
        &self.projects
    }

    pub fn project_ids(&self) -> Vec<&str> {
        self.projects.iter().map(|p| p.id.as_str()).collect()
    }

    pub fn units(&self) -> &BTreeMap<String, String> {
        &self.units
    }

    pub fn unit_source(&self, path: &str) -> Option<&str> {
        self.units.get(path).map(String::as_str)
    }

    pub fn mutants(&self) -> &[MutantRecord] {
        &self.mutants
    }

    pub fn mutant(&self, id: &str) -> Option<&MutantRecord> {
        self.mutant_index.get(id).map(|&i| &self.mutants[i])
    }

    pub fn mutant_position(&self, id: &str) -> Option<usize> {
        self.mutant_index.get(id).copied()
    }

    pub fn matrix(&self) -> &KillMatrix {
        &self.matrix
    }

    pub fn features(&self) -> Option<&FeatureSet> {
        self.features.as_ref()
    }

    /// Row indices of the mutants belonging to `project_id`, in corpus order.
    pub fn project_rows(&self, project_id: &str) -> Vec<usize> {
        self.mutants
            .iter()
            .enumerate()
            .filter(|(_, m)| m.project_id == project_id)
            .map(|(i, _)| i)
            .collect()
    }

    /// Replaces ground-truth labels. Every id must name a corpus mutant.
    pub fn with_labels(mut self, labels: &BTreeMap<String, Label>) -> Result<Self> {
        for id in labels.keys() {
            if !self.mutant_index.contains_key(id) {
                return Err(Error::UnmatchedMutant(id.clone()));
            }
        }
        for m in &mut self.mutants {
            m.label = labels.get(&m.mutant_id).copied();
        }
        Ok(self)
    }

    pub fn labels(&self) -> BTreeMap<String, Label> {
        self.mutants
            .iter()
            .filter_map(|m| m.label.map(|l| (m.mutant_id.clone(), l)))
            .collect()
    }

    pub fn load(root: impl AsRef<std::path::Path>) -> Result<Self> {
        io::load_corpus(root.as_ref())
    }

    pub fn save(&self, root: impl AsRef<std::path::Path>) -> Result<()> {
        io::save_corpus(self, root.as_ref())
    }
}

/// Loads the corpus rooted at `root` (see [`Manifest`]).
pub fn load_corpus(root: impl AsRef<std::path::Path>) -> Result<Corpus> {
    Corpus::load(root)
}
