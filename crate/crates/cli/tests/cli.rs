use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn toy() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/toy")
}

fn mutsel(args: &[&str], corpus: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mutsel"))
        .args(args)
        .arg("--corpus")
        .arg(corpus)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn error_json(out: &Output) -> serde_json::Value {
    assert!(!out.status.success());
    serde_json::from_slice(&out.stderr).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn predict_without_model() {
    let dir = tempfile::tempdir().unwrap();
    let err = error_json(&mutsel(&["predict", "--seed", "1"], &toy(), dir.path()));
    assert_eq!(err["kind"], "ModelNotFound");
    assert!(err["error"].as_str().unwrap().contains("model not found"));
}

#[test]
fn seed_is_required() {
    let dir = tempfile::tempdir().unwrap();
    let err = error_json(&mutsel(&["label"], &toy(), dir.path()));
    assert!(err["error"].as_str().unwrap().contains("seed"));
}

#[test]
fn missing_corpus_and_upstream() {
    let dir = tempfile::tempdir().unwrap();
    let err = error_json(&mutsel(&["label", "--seed", "1"], &dir.path().join("none"), dir.path()));
    assert_eq!(err["kind"], "CorpusNotFound");
    let err = error_json(&mutsel(&["dataset", "--seed", "1"], &toy(), dir.path()));
    assert_eq!(err["kind"], "MissingArtifact");
}

#[test]
fn bad_budget_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let err = error_json(&mutsel(
        &["abstract", "--seed", "1", "--budget", "40"],
        &toy(),
        dir.path(),
    ));
    assert!(err["error"].as_str().unwrap().contains("budget"));
}

#[test]
fn stages_write_documented_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let ok = |args: &[&str]| {
        let o = mutsel(args, &toy(), out);
        assert!(o.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&o.stderr));
    };
    for stage in ["abstract", "label", "dataset", "train", "predict", "simulate", "report"] {
        ok(&[stage, "--seed", "5", "--reps", "20"]);
    }
    assert_eq!(header(&out.join("sequences.tsv")), "mutant_id\tinput_line");
    assert_eq!(header(&out.join("labels.csv")), "mutant_id,label");
    assert_eq!(
        header(&out.join("dataset/fold0/train.tsv")),
        "mutant_id\tinput_line\toutput_line"
    );
    assert_eq!(
        header(&out.join("learner/predictions.csv")),
        "mutant_id,label,score,malformed"
    );
    assert_eq!(
        header(&out.join("sim_results.csv")),
        "strategy,rep,final_ms_star,analyzed,equivalents_analyzed,test_executions,reached_target"
    );
    assert_eq!(header(&out.join("trajectory.csv")), "strategy,rep,step,ms_star");
    assert_eq!(header(&out.join("metrics.csv")), "strategy,fold,mcc,f,precision,recall");
    assert!(out.join("models/learner_fold4.json").is_file());
    assert!(out.join("models/tree_fold4.json").is_file());

    // Every mutant is predicted exactly once per strategy.
    for s in ["learner", "tree", "random"] {
        let rows = fs::read_to_string(out.join(s).join("predictions.csv"))
            .unwrap()
            .lines()
            .count()
            - 1;
        assert_eq!(rows, 436, "{s}");
    }
    let sims = fs::read_to_string(out.join("sim_results.csv")).unwrap().lines().count() - 1;
    assert_eq!(sims, 60);

    // Output lines differ from input lines only by the label token.
    let pairs = fs::read_to_string(out.join("dataset/fold0/test.tsv")).unwrap();
    for line in pairs.lines().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        let label = if cols[2].contains("]MSP[ S ]") { "S" } else { "N" };
        assert_eq!(cols[2], cols[1].replacen("]MSP[ ]", &format!("]MSP[ {label} ]"), 1));
    }
}

#[test]
fn unabstracted_sequences_keep_names() {
    let dir = tempfile::tempdir().unwrap();
    let o = mutsel(
        &["abstract", "--seed", "1", "--no-abstraction", "--budget", "100"],
        &toy(),
        dir.path(),
    );
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("sequences.tsv")).unwrap();
    assert!(!text.contains("vr_1"));
    assert!(text.lines().skip(1).all(|l| l.matches("MST[").count() == 1));
}

#[test]
fn noise_lowers_or_keeps_scores() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("base");
    let noisy = dir.path().join("noisy");
    let args = ["run", "--seed", "3", "--reps", "30", "--strategy", "learner"];
    assert!(mutsel(&args, &toy(), &base).status.success());
    let mut with_noise = args.to_vec();
    with_noise.extend(["--noise", "0.1"]);
    assert!(mutsel(&with_noise, &toy(), &noisy).status.success());
    let mean = |p: &Path| {
        let text = fs::read_to_string(p.join("sim_results.csv")).unwrap();
        let v: Vec<f64> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
            .collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    assert!(mean(&noisy) <= mean(&base));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        format!("seed = 8\ncorpus = {:?}\n[simulation]\nrepetitions = 4\n", toy()),
    )
    .unwrap();
    let out = dir.path().join("o");
    let o = Command::new(env!("CARGO_BIN_EXE_mutsel"))
        .args(["run", "--strategy", "random", "--reps", "3", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let sims = fs::read_to_string(out.join("sim_results.csv")).unwrap();
    assert_eq!(sims.lines().count(), 4);
    assert!(!out.join("models").exists());

    fs::write(&cfg, "seed = 8\nunknown_key = 1\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_mutsel"))
        .args(["label", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(error_json(&o)["error"].as_str().unwrap().contains("unknown"));
}

#[test]
fn gen_toy_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a", "b"] {
        let o = Command::new(env!("CARGO_BIN_EXE_mutsel"))
            .args(["gen-toy", "--seed", "2024", "--out"])
            .arg(dir.path().join(name))
            .output()
            .unwrap();
        assert!(o.status.success());
    }
    for file in ["manifest.json", "mutants.jsonl", "kills.csv", "features.csv"] {
        let a = fs::read(dir.path().join("a").join(file)).unwrap();
        assert_eq!(a, fs::read(dir.path().join("b").join(file)).unwrap(), "{file}");
        assert_eq!(a, fs::read(toy().join(file)).unwrap(), "bundled {file} is stale");
    }
}
