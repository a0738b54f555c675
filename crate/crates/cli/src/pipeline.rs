//! Pipeline stages. Each stage reads its inputs from the corpus and the
//! output directory and writes its artifacts back there.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use mutsel_core::abstraction::{sequence_for, Abstractor, Allowlist, AnnotatedSequence};
use mutsel_core::baselines::{predict_proba, train_ensemble, Ranking, TreeEnsemble, THRESHOLD};
use mutsel_core::corpus::{make_folds, read_labels, write_labels, Corpus, FeatureSet, FoldSplit, Label};
use mutsel_core::learner::{self, ClassifierModel, TrainingPair};
use mutsel_core::metrics::{self, aggregate_report, confusion, vargha_delaney_a12, MetricRow};
use mutsel_core::seed::{derive_seed, rng, stream_id};
use mutsel_core::simulation::{inject_noise, repeat_simulations, NoiseConfig, Selection, SimulationConfig};
use mutsel_core::subsumption::label_corpus;

use crate::config::{RunConfig, Strategy};

fn load_corpus(cfg: &RunConfig) -> Result<Corpus> {
    cfg.require_corpus()?;
    Corpus::load(&cfg.corpus).with_context(|| format!("cannot load corpus {}", cfg.corpus.display()))
}

/// A CLI-level failure with a stable machine-readable kind.
#[derive(Debug)]
pub struct Tagged {
    pub kind: &'static str,
    pub message: String,
}

impl std::fmt::Display for Tagged {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Tagged {}

fn tagged(kind: &'static str, message: String) -> anyhow::Error {
    Tagged { kind, message }.into()
}

fn upstream(path: PathBuf, producer: &str) -> Result<PathBuf> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(tagged(
            "MissingArtifact",
            format!(
                "missing upstream artifact {} (run `mutsel {producer}` first)",
                path.display()
            ),
        ))
    }
}

fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    Ok(())
}

fn csv_writer(path: &Path, delimiter: u8) -> Result<csv::Writer<fs::File>> {
    create_parent(path)?;
    csv::WriterBuilder::new()
        .delimiter(delimiter)
        .quote_style(csv::QuoteStyle::Never)
        .from_path(path)
        .with_context(|| format!("cannot write {}", path.display()))
}

fn csv_reader(path: &Path, delimiter: u8) -> Result<csv::Reader<fs::File>> {
    csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .quoting(false)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    create_parent(path)?;
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn sequences_path(cfg: &RunConfig) -> PathBuf {
    cfg.out.join("sequences.tsv")
}

fn labels_path(cfg: &RunConfig) -> PathBuf {
    cfg.out.join("labels.csv")
}

fn fold_dir(cfg: &RunConfig, fold: usize) -> PathBuf {
    cfg.out.join("dataset").join(format!("fold{fold}"))
}

fn model_path(cfg: &RunConfig, strategy: Strategy, fold: usize) -> PathBuf {
    cfg.out
        .join("models")
        .join(format!("{}_fold{fold}.json", strategy.name()))
}

fn predictions_path(cfg: &RunConfig, strategy: Strategy) -> PathBuf {
    cfg.out.join(strategy.name()).join("predictions.csv")
}

/// Writes `sequences.tsv`: one windowed, annotated input line per mutant.
pub fn cmd_abstract(cfg: &RunConfig) -> Result<String> {
    let corpus = load_corpus(cfg)?;
    let abstractor = if !cfg.abstraction {
        Abstractor::unabstracted()
    } else if let Some(path) = &cfg.allowlist {
        Abstractor::new(Allowlist::from_file(path)?)
    } else {
        Abstractor::default()
    };
    let path = sequences_path(cfg);
    let mut w = csv_writer(&path, b'\t')?;
    w.write_record(["mutant_id", "input_line"])?;
    for m in corpus.mutants() {
        let src = corpus.unit_source(&m.unit_path).expect("corpus validated units");
        let seq = sequence_for(&abstractor, src, m, cfg.budget)
            .with_context(|| format!("cannot build the sequence of mutant `{}`", m.mutant_id))?;
        w.write_record([m.mutant_id.as_str(), seq.input_line().as_str()])?;
    }
    w.flush()?;
    Ok(format!(
        "wrote {} sequences to {}",
        corpus.mutants().len(),
        path.display()
    ))
}

/// Writes `labels.csv` and `graph.json`, labeling each project on its own rows.
pub fn cmd_label(cfg: &RunConfig) -> Result<String> {
    let corpus = load_corpus(cfg)?;
    let (labeling, graphs) = label_corpus(&corpus);
    let path = labels_path(cfg);
    create_parent(&path)?;
    write_labels(&path, &labeling.labels())?;
    write_json(&cfg.out.join("graph.json"), &graphs)?;
    let s = labeling.subsuming_rows().len();
    Ok(format!(
        "labeled {} mutants ({s} subsuming) into {}",
        labeling.len(),
        path.display()
    ))
}

fn read_sequences(path: &Path) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, rec) in csv_reader(path, b'\t')?.records().enumerate() {
        let rec = rec?;
        let (Some(id), Some(line)) = (rec.get(0), rec.get(1)) else {
            bail!("{}:{}: expected mutant_id and input_line", path.display(), i + 2);
        };
        out.insert(id.to_string(), line.to_string());
    }
    Ok(out)
}

#[derive(Serialize)]
struct DatasetMeta {
    budget: usize,
    abstraction: bool,
}

/// Writes `folds.json` and per-fold train/valid/test pair files.
pub fn cmd_dataset(cfg: &RunConfig) -> Result<String> {
    let corpus = load_corpus(cfg)?;
    let sequences = read_sequences(&upstream(sequences_path(cfg), "abstract")?)?;
    let labels = read_labels(&upstream(labels_path(cfg), "label")?)?;
    let split = make_folds(
        &corpus.project_ids(),
        cfg.folds,
        derive_seed(cfg.seed, stream_id("folds")),
    )?;
    write_json(&cfg.out.join("folds.json"), &split)?;
    write_json(
        &cfg.out.join("dataset").join("meta.json"),
        &DatasetMeta {
            budget: cfg.budget,
            abstraction: cfg.abstraction,
        },
    )?;

    for fold in 0..split.fold_count {
        let plan = split.plan(fold)?;
        let parts = [
            ("train", plan.train.clone()),
            ("valid", vec![plan.valid]),
            ("test", vec![plan.test]),
        ];
        for (name, folds) in parts {
            let path = fold_dir(cfg, fold).join(format!("{name}.tsv"));
            let mut w = csv_writer(&path, b'\t')?;
            w.write_record(["mutant_id", "input_line", "output_line"])?;
            for m in corpus.mutants() {
                if !folds.contains(&split.fold_of(&m.project_id).expect("every project has a fold")) {
                    continue;
                }
                let input = sequences
                    .get(&m.mutant_id)
                    .ok_or_else(|| anyhow!("sequences.tsv lacks mutant `{}`", m.mutant_id))?;
                let label = *labels
                    .get(&m.mutant_id)
                    .ok_or_else(|| anyhow!("labels.csv lacks mutant `{}`", m.mutant_id))?;
                let seq = AnnotatedSequence::parse_line(&m.mutant_id, input)?;
                w.write_record([m.mutant_id.as_str(), input.as_str(), seq.output_line(label).as_str()])?;
            }
            w.flush()?;
        }
    }
    Ok(format!(
        "wrote {} folds under {}",
        split.fold_count,
        cfg.out.join("dataset").display()
    ))
}

fn read_folds(cfg: &RunConfig) -> Result<FoldSplit> {
    let path = upstream(cfg.out.join("folds.json"), "dataset")?;
    serde_json::from_str(&fs::read_to_string(&path)?).with_context(|| format!("invalid {}", path.display()))
}

fn read_pairs(path: &Path, budget: usize) -> Result<Vec<TrainingPair>> {
    let mut out = Vec::new();
    for rec in csv_reader(path, b'\t')?.records() {
        let rec = rec?;
        let id = &rec[0];
        let mut seq = AnnotatedSequence::parse_line(id, &rec[1])?;
        seq.length_budget = Some(budget);
        let label = AnnotatedSequence::parse_line(id, &rec[2])?
            .label
            .ok_or_else(|| anyhow!("{}: output line of `{id}` has no label", path.display()))?;
        out.push(TrainingPair::new(&seq, label));
    }
    Ok(out)
}

fn read_test_inputs(path: &Path, budget: usize) -> Result<Vec<AnnotatedSequence>> {
    let mut out = Vec::new();
    for rec in csv_reader(path, b'\t')?.records() {
        let rec = rec?;
        let mut seq = AnnotatedSequence::parse_line(&rec[0], &rec[1])?;
        seq.length_budget = Some(budget);
        seq.label = None;
        out.push(seq);
    }
    Ok(out)
}

fn dataset_budget(cfg: &RunConfig) -> Result<usize> {
    let path = upstream(cfg.out.join("dataset").join("meta.json"), "dataset")?;
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    meta["budget"]
        .as_u64()
        .map(|b| b as usize)
        .ok_or_else(|| anyhow!("dataset/meta.json has no budget"))
}

fn features_of(corpus: &Corpus, keep: impl Fn(&str) -> bool) -> Result<FeatureSet> {
    let fs = corpus
        .features()
        .ok_or_else(|| anyhow!("the corpus has no features.csv; the tree strategy needs one"))?;
    let vectors = fs.vectors().iter().filter(|v| keep(&v.mutant_id)).cloned().collect();
    Ok(FeatureSet::new(fs.names().to_vec(), vectors)?)
}

/// Trains one model per fold and strategy (the random strategy has none).
pub fn cmd_train(cfg: &RunConfig) -> Result<String> {
    let split = read_folds(cfg)?;
    let budget = dataset_budget(cfg)?;
    let mut written = 0;
    for &strategy in &cfg.strategies {
        match strategy {
            Strategy::Learner => {
                for fold in 0..split.fold_count {
                    let dir = fold_dir(cfg, fold);
                    let train = read_pairs(&upstream(dir.join("train.tsv"), "dataset")?, budget)?;
                    let valid = read_pairs(&upstream(dir.join("valid.tsv"), "dataset")?, budget)?;
                    let (model, report) = learner::train(&train, Some(&valid), &cfg.learner)
                        .with_context(|| format!("training the learner on fold {fold}"))?;
                    let path = model_path(cfg, strategy, fold);
                    create_parent(&path)?;
                    model.save(&path)?;
                    write_json(&path.with_file_name(format!("learner_fold{fold}_report.json")), &report)?;
                    written += 1;
                }
            }
            Strategy::Tree => {
                let corpus = load_corpus(cfg)?;
                let labels = read_labels(&upstream(labels_path(cfg), "label")?)?;
                for fold in 0..split.fold_count {
                    let plan = split.plan(fold)?;
                    let train_projects: BTreeSet<&str> = plan
                        .train
                        .iter()
                        .chain([&plan.valid])
                        .flat_map(|&f| split.projects_in(f))
                        .collect();
                    let features = features_of(&corpus, |id| {
                        corpus
                            .mutant(id)
                            .is_some_and(|m| train_projects.contains(m.project_id.as_str()))
                    })?;
                    let model = train_ensemble(&features, &labels, &cfg.tree)
                        .with_context(|| format!("training the tree ensemble on fold {fold}"))?;
                    write_json(&model_path(cfg, strategy, fold), &model)?;
                    written += 1;
                }
            }
            Strategy::Random => {}
        }
    }
    Ok(format!(
        "trained {written} models under {}",
        cfg.out.join("models").display()
    ))
}

#[derive(Debug, Clone)]
struct PredictionRow {
    mutant_id: String,
    label: Label,
    score: f64,
    malformed: bool,
}

fn require_model(path: PathBuf) -> Result<PathBuf> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(tagged(
            "ModelNotFound",
            format!("model not found: {} (run `mutsel train` first)", path.display()),
        ))
    }
}

fn write_predictions(path: &Path, rows: &[PredictionRow]) -> Result<()> {
    let mut w = csv_writer(path, b',')?;
    w.write_record(["mutant_id", "label", "score", "malformed"])?;
    for r in rows {
        w.write_record([
            r.mutant_id.as_str(),
            r.label.as_str(),
            &r.score.to_string(),
            if r.malformed { "true" } else { "false" },
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn read_predictions(path: &Path) -> Result<Vec<PredictionRow>> {
    let mut out = Vec::new();
    for (i, rec) in csv_reader(path, b',')?.records().enumerate() {
        let rec = rec?;
        let bad = || anyhow!("{}:{}: malformed prediction row", path.display(), i + 2);
        out.push(PredictionRow {
            mutant_id: rec.get(0).ok_or_else(bad)?.to_string(),
            label: rec.get(1).ok_or_else(bad)?.parse().map_err(|_| bad())?,
            score: rec.get(2).ok_or_else(bad)?.parse().map_err(|_| bad())?,
            malformed: rec.get(3).ok_or_else(bad)? == "true",
        });
    }
    Ok(out)
}

/// Writes `<strategy>/predictions.csv` over every mutant, each predicted by
/// the model of the fold that holds its project out.
pub fn cmd_predict(cfg: &RunConfig) -> Result<String> {
    for &strategy in &cfg.strategies {
        if strategy != Strategy::Random {
            require_model(model_path(cfg, strategy, 0))?;
        }
    }
    let corpus = load_corpus(cfg)?;
    let split = read_folds(cfg)?;
    let budget = dataset_budget(cfg)?;
    let order: BTreeMap<&str, usize> = corpus
        .mutants()
        .iter()
        .enumerate()
        .map(|(i, m)| (m.mutant_id.as_str(), i))
        .collect();
    let mut summary = Vec::new();
    for &strategy in &cfg.strategies {
        let mut rows = Vec::new();
        match strategy {
            Strategy::Learner => {
                for fold in 0..split.fold_count {
                    let model = ClassifierModel::load(&require_model(model_path(cfg, strategy, fold))?)?;
                    for seq in read_test_inputs(&upstream(fold_dir(cfg, fold).join("test.tsv"), "dataset")?, budget)? {
                        let p = learner::predict(&model, &seq);
                        rows.push(PredictionRow {
                            mutant_id: seq.mutant_id.clone(),
                            label: p.label,
                            score: learner::score(&model, &seq),
                            malformed: p.malformed,
                        });
                    }
                }
            }
            Strategy::Tree => {
                for fold in 0..split.fold_count {
                    let path = require_model(model_path(cfg, strategy, fold))?;
                    let model: TreeEnsemble = serde_json::from_str(&fs::read_to_string(&path)?)
                        .with_context(|| format!("invalid model {}", path.display()))?;
                    let test_projects: BTreeSet<&str> = split.projects_in(fold).into_iter().collect();
                    let features = features_of(&corpus, |id| {
                        corpus
                            .mutant(id)
                            .is_some_and(|m| test_projects.contains(m.project_id.as_str()))
                    })?;
                    model.check_schema(&features)?;
                    for v in features.vectors() {
                        let score = predict_proba(&model, &v.values)?;
                        rows.push(PredictionRow {
                            mutant_id: v.mutant_id.clone(),
                            label: Label::from_bool(score > THRESHOLD),
                            score,
                            malformed: false,
                        });
                    }
                }
            }
            Strategy::Random => {
                use rand::Rng;
                let mut r = rng(derive_seed(cfg.seed, stream_id("random-scores")));
                for m in corpus.mutants() {
                    let score: f64 = r.gen();
                    rows.push(PredictionRow {
                        mutant_id: m.mutant_id.clone(),
                        label: Label::from_bool(score > THRESHOLD),
                        score,
                        malformed: false,
                    });
                }
            }
        }
        rows.sort_by_key(|r| order.get(r.mutant_id.as_str()).copied().unwrap_or(usize::MAX));
        let path = predictions_path(cfg, strategy);
        write_predictions(&path, &rows)?;
        let s = rows.iter().filter(|r| r.label == Label::S).count();
        summary.push(format!("{}: {s}/{} predicted S", strategy.name(), rows.len()));
    }
    Ok(summary.join("; "))
}

/// Runs the simulation for each strategy and writes `sim_results.csv` and
/// `trajectory.csv`. Every strategy analyzes as many mutants as the learner
/// selects when learner predictions exist.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<String> {
    let corpus = load_corpus(cfg)?;
    let (mut labeling, _) = label_corpus(&corpus);
    if cfg.noise_rate > 0.0 {
        let noise = NoiseConfig {
            rate: cfg.noise_rate,
            seed: derive_seed(cfg.seed, stream_id("noise")),
            of_all_mutants: cfg.noise_of_all,
        };
        labeling = inject_noise(&labeling, &noise)?;
    }
    let learner_path = predictions_path(cfg, Strategy::Learner);
    let shared_k = if learner_path.is_file() {
        Some(
            read_predictions(&learner_path)?
                .iter()
                .filter(|r| r.label == Label::S)
                .count(),
        )
    } else {
        None
    };
    let sim = SimulationConfig {
        target_ms: cfg.target_ms,
        repetitions: cfg.repetitions,
        master_seed: derive_seed(cfg.seed, stream_id("simulate")),
    };

    let results_path = cfg.out.join("sim_results.csv");
    let mut results = csv_writer(&results_path, b',')?;
    results.write_record([
        "strategy",
        "rep",
        "final_ms_star",
        "analyzed",
        "equivalents_analyzed",
        "test_executions",
        "reached_target",
    ])?;
    let mut trajectory = csv_writer(&cfg.out.join("trajectory.csv"), b',')?;
    trajectory.write_record(["strategy", "rep", "step", "ms_star"])?;

    let mut summary = Vec::new();
    for &strategy in &cfg.strategies {
        let rows = read_predictions(&upstream(predictions_path(cfg, strategy), "predict")?)?;
        let own_k = rows.iter().filter(|r| r.label == Label::S).count();
        let k = shared_k.unwrap_or(own_k);
        let selection = match strategy {
            Strategy::Learner => Selection::Set(
                rows.iter()
                    .filter(|r| r.label == Label::S)
                    .map(|r| r.mutant_id.clone())
                    .collect(),
            ),
            Strategy::Tree => {
                let mut ranking = Ranking::from_scores(rows.iter().map(|r| (r.mutant_id.clone(), r.score)).collect());
                ranking.ids.truncate(k);
                Selection::Ranking(ranking.ids)
            }
            Strategy::Random => Selection::Random {
                candidates: rows.iter().map(|r| r.mutant_id.clone()).collect(),
                k,
            },
        };
        let res = repeat_simulations(&selection, corpus.matrix(), &labeling, &sim)
            .with_context(|| format!("simulating the {} strategy", strategy.name()))?;
        for r in &res.records {
            results.write_record([
                strategy.name(),
                &r.rep.to_string(),
                &r.final_ms_star.to_string(),
                &r.analyzed.to_string(),
                &r.equivalents_analyzed.to_string(),
                &r.test_executions.to_string(),
                &r.reached_target.to_string(),
            ])?;
            for (step, ms) in r.trajectory.iter().enumerate() {
                trajectory.write_record([
                    strategy.name(),
                    &r.rep.to_string(),
                    &(step + 1).to_string(),
                    &ms.to_string(),
                ])?;
            }
        }
        summary.push(format!(
            "{}: mean MS* {:.4} over {} reps (k={k})",
            strategy.name(),
            res.mean_final_ms(),
            res.records.len()
        ));
    }
    results.flush()?;
    trajectory.flush()?;
    Ok(summary.join("; "))
}

#[derive(Serialize)]
struct StrategyReport {
    strategy: &'static str,
    malformed_rate: f64,
    degenerate_folds: Vec<usize>,
    mean_final_ms_star: Option<f64>,
}

fn read_final_scores(path: &Path) -> Result<BTreeMap<String, Vec<f64>>> {
    let mut out: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for rec in csv_reader(path, b',')?.records() {
        let rec = rec?;
        out.entry(rec[0].to_string()).or_default().push(rec[2].parse()?);
    }
    Ok(out)
}

fn metric_record(strategy: &str, key: &str, m: &MetricRow) -> [String; 6] {
    [
        strategy.to_string(),
        key.to_string(),
        m.mcc.to_string(),
        m.f.to_string(),
        m.precision.to_string(),
        m.recall.to_string(),
    ]
}

/// Writes per-fold `metrics.csv`, `summary.csv`, `effect_sizes.csv` (when
/// simulation results exist) and `report.json`.
pub fn cmd_report(cfg: &RunConfig) -> Result<String> {
    let corpus = load_corpus(cfg)?;
    let split = read_folds(cfg)?;
    let truth = read_labels(&upstream(labels_path(cfg), "label")?)?;
    let sim_path = cfg.out.join("sim_results.csv");
    let finals = if sim_path.is_file() {
        read_final_scores(&sim_path)?
    } else {
        BTreeMap::new()
    };

    let mut metrics_w = csv_writer(&cfg.out.join("metrics.csv"), b',')?;
    metrics_w.write_record(["strategy", "fold", "mcc", "f", "precision", "recall"])?;
    let mut summary_w = csv_writer(&cfg.out.join("summary.csv"), b',')?;
    summary_w.write_record(["strategy", "statistic", "mcc", "f", "precision", "recall"])?;
    let mut reports = Vec::new();
    let mut lines = Vec::new();

    for &strategy in &cfg.strategies {
        let rows = read_predictions(&upstream(predictions_path(cfg, strategy), "predict")?)?;
        let predicted: BTreeMap<&str, Label> = rows.iter().map(|r| (r.mutant_id.as_str(), r.label)).collect();
        let mut per_fold = Vec::new();
        let mut degenerate = Vec::new();
        for fold in 0..split.fold_count {
            let projects: BTreeSet<&str> = split.projects_in(fold).into_iter().collect();
            let ids: Vec<&str> = corpus
                .mutants()
                .iter()
                .filter(|m| projects.contains(m.project_id.as_str()))
                .map(|m| m.mutant_id.as_str())
                .collect();
            let pick = |src: &dyn Fn(&str) -> Option<Label>| -> Result<BTreeMap<String, Label>> {
                ids.iter()
                    .map(|&id| {
                        Ok((
                            id.to_string(),
                            src(id).ok_or_else(|| anyhow!("no label for mutant `{id}`"))?,
                        ))
                    })
                    .collect()
            };
            let t = pick(&|id| truth.get(id).copied())?;
            let p = pick(&|id| predicted.get(id).copied())?;
            let cm = confusion(&t, &p)?;
            if metrics::degenerate(&cm) {
                degenerate.push(fold);
            }
            let row = MetricRow::from_confusion(&cm);
            metrics_w.write_record(metric_record(strategy.name(), &fold.to_string(), &row))?;
            per_fold.push(row);
        }
        let s = aggregate_report(&per_fold)?;
        summary_w.write_record(metric_record(strategy.name(), "mean", &s.mean))?;
        summary_w.write_record(metric_record(strategy.name(), "median", &s.median))?;
        lines.push(format!("{}: mean MCC {:.3}", strategy.name(), s.mean.mcc));
        reports.push(StrategyReport {
            strategy: strategy.name(),
            malformed_rate: rows.iter().filter(|r| r.malformed).count() as f64 / rows.len().max(1) as f64,
            degenerate_folds: degenerate,
            mean_final_ms_star: finals.get(strategy.name()).map(|v| metrics::mean(v)),
        });
    }
    metrics_w.flush()?;
    summary_w.flush()?;

    if !finals.is_empty() {
        let mut w = csv_writer(&cfg.out.join("effect_sizes.csv"), b',')?;
        w.write_record(["strategy_a", "strategy_b", "a12", "mean_a", "mean_b"])?;
        let names: Vec<&String> = finals.keys().collect();
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                let (xa, xb) = (&finals[*a], &finals[*b]);
                w.write_record([
                    a.as_str(),
                    b.as_str(),
                    &vargha_delaney_a12(xa, xb)?.to_string(),
                    &metrics::mean(xa).to_string(),
                    &metrics::mean(xb).to_string(),
                ])?;
            }
        }
        w.flush()?;
    }
    write_json(&cfg.out.join("report.json"), &reports)?;
    Ok(lines.join("; "))
}

/// Every stage in dependency order.
pub fn cmd_run(cfg: &RunConfig) -> Result<String> {
    type Stage = fn(&RunConfig) -> Result<String>;
    let stages: [(&str, Stage); 7] = [
        ("abstract", cmd_abstract),
        ("label", cmd_label),
        ("dataset", cmd_dataset),
        ("train", cmd_train),
        ("predict", cmd_predict),
        ("simulate", cmd_simulate),
        ("report", cmd_report),
    ];
    let mut out = Vec::new();
    for (name, stage) in stages {
        out.push(format!("{name}: {}", stage(cfg)?));
    }
    Ok(out.join("\n"))
}
