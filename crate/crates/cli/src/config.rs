use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use mutsel_core::abstraction::BUDGETS;
use mutsel_core::baselines::EnsembleConfig;
use mutsel_core::learner::LearnerConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Learner,
    Tree,
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Learner, Strategy::Tree, Strategy::Random];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Learner => "learner",
            Strategy::Tree => "tree",
            Strategy::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerSection {
    pub learning_rate: Option<f64>,
    pub epochs: Option<usize>,
    pub l2: Option<f64>,
    pub max_ngram: Option<usize>,
    pub context_radius: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeSection {
    pub rounds: Option<usize>,
    pub max_depth: Option<usize>,
    pub learning_rate: Option<f64>,
    pub subsample: Option<f64>,
    pub min_samples_leaf: Option<usize>,
    pub one_hot: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub target_ms: Option<f64>,
    pub repetitions: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub rate: Option<f64>,
    pub of_all_mutants: Option<bool>,
}

/// On-disk configuration; every field is optional so flags can fill gaps.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub corpus: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub budget: Option<usize>,
    pub abstraction: Option<bool>,
    pub allowlist: Option<PathBuf>,
    pub folds: Option<usize>,
    pub strategies: Option<Vec<Strategy>>,
    #[serde(default)]
    pub learner: LearnerSection,
    #[serde(default)]
    pub tree: TreeSection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub noise: NoiseSection,
}

impl FileConfig {
    /// Reads a TOML file; relative paths inside it resolve against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.corpus, &mut cfg.out, &mut cfg.allowlist]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub corpus: PathBuf,
    pub out: PathBuf,
    pub budget: usize,
    pub abstraction: bool,
    pub allowlist: Option<PathBuf>,
    pub folds: usize,
    pub strategies: Vec<Strategy>,
    pub learner: LearnerConfig,
    pub tree: EnsembleConfig,
    pub target_ms: f64,
    pub repetitions: usize,
    pub noise_rate: f64,
    pub noise_of_all: bool,
}

/// Values given on the command line; they win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub corpus: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub budget: Option<usize>,
    pub no_abstraction: bool,
    pub allowlist: Option<PathBuf>,
    pub noise: Option<f64>,
    pub target_ms: Option<f64>,
    pub reps: Option<usize>,
    pub strategies: Vec<Strategy>,
}

impl RunConfig {
    pub fn resolve(file: FileConfig, flags: Overrides) -> Result<Self> {
        let Some(seed) = flags.seed.or(file.seed) else {
            bail!("a master seed is required (`seed` in the config or --seed)");
        };
        let corpus = flags
            .corpus
            .or(file.corpus)
            .unwrap_or_else(|| PathBuf::from("data/toy"));
        let out = flags.out.or(file.out).unwrap_or_else(|| PathBuf::from("out"));
        let budget = flags.budget.or(file.budget).unwrap_or(50);
        if !BUDGETS.contains(&budget) {
            bail!("budget must be one of {BUDGETS:?}, got {budget}");
        }
        let allowlist = flags.allowlist.or(file.allowlist);
        if let Some(a) = &allowlist {
            if !a.is_file() {
                bail!("allowlist not found: {}", a.display());
            }
        }
        let mut strategies = if flags.strategies.is_empty() {
            file.strategies.unwrap_or_else(|| Strategy::ALL.to_vec())
        } else {
            flags.strategies
        };
        strategies.sort();
        strategies.dedup();

        let mut learner = LearnerConfig::new(seed);
        let l = &file.learner;
        learner.learning_rate = l.learning_rate.unwrap_or(learner.learning_rate);
        learner.epochs = l.epochs.unwrap_or(learner.epochs);
        learner.l2 = l.l2.unwrap_or(learner.l2);
        learner.max_ngram = l.max_ngram.unwrap_or(learner.max_ngram);
        learner.context_radius = l.context_radius.unwrap_or(learner.context_radius);

        let mut tree = EnsembleConfig::new(seed);
        let t = &file.tree;
        tree.rounds = t.rounds.unwrap_or(tree.rounds);
        tree.max_depth = t.max_depth.unwrap_or(tree.max_depth);
        tree.learning_rate = t.learning_rate.unwrap_or(tree.learning_rate);
        tree.subsample = t.subsample.unwrap_or(tree.subsample);
        tree.min_samples_leaf = t.min_samples_leaf.unwrap_or(tree.min_samples_leaf);
        tree.one_hot = t.one_hot.unwrap_or(tree.one_hot);

        let target_ms = flags.target_ms.or(file.simulation.target_ms).unwrap_or(1.0);
        if !(target_ms > 0.0 && target_ms <= 1.0) {
            bail!("target MS* must lie in (0, 1], got {target_ms}");
        }
        let repetitions = flags.reps.or(file.simulation.repetitions).unwrap_or(1000);
        if repetitions == 0 {
            bail!("repetitions must be at least 1");
        }
        let noise_rate = flags.noise.or(file.noise.rate).unwrap_or(0.0);
        if !(0.0..=1.0).contains(&noise_rate) {
            bail!("noise rate must lie in [0, 1], got {noise_rate}");
        }

        Ok(Self {
            seed,
            corpus,
            out,
            budget,
            abstraction: file.abstraction.unwrap_or(true) && !flags.no_abstraction,
            allowlist,
            folds: file.folds.unwrap_or(5),
            strategies,
            learner,
            tree,
            target_ms,
            repetitions,
            noise_rate,
            noise_of_all: file.noise.of_all_mutants.unwrap_or(false),
        })
    }

    pub fn require_corpus(&self) -> Result<()> {
        if !self.corpus.join("manifest.json").is_file() {
            return Err(crate::pipeline::Tagged {
                kind: "CorpusNotFound",
                message: format!("corpus not found: {} has no manifest.json", self.corpus.display()),
            }
            .into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str(
            "seed = 1\nbudget = 25\nstrategies = [\"random\"]\n[simulation]\nrepetitions = 7\n[tree]\nrounds = 3\n",
        )
        .unwrap();
        let flags = Overrides {
            seed: Some(9),
            budget: Some(100),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(file, flags).unwrap();
        assert_eq!((cfg.seed, cfg.budget, cfg.repetitions, cfg.tree.rounds), (9, 100, 7, 3));
        assert_eq!(cfg.strategies, [Strategy::Random]);
        assert_eq!(cfg.learner.seed, 9);
    }

    #[test]
    fn seed_is_mandatory_and_values_checked() {
        assert!(RunConfig::resolve(FileConfig::default(), Overrides::default()).is_err());
        let bad_budget = Overrides {
            seed: Some(1),
            budget: Some(30),
            ..Default::default()
        };
        assert!(RunConfig::resolve(FileConfig::default(), bad_budget).is_err());
        let bad_noise = Overrides {
            seed: Some(1),
            noise: Some(2.0),
            ..Default::default()
        };
        assert!(RunConfig::resolve(FileConfig::default(), bad_noise).is_err());
        assert!(toml::from_str::<FileConfig>("sed = 1").is_err());
    }
}
