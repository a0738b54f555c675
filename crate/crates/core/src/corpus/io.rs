//! On-disk corpus layout.
//!
//! ```text
//! root/
//!   manifest.json   projects (with their units), test ids, file names
//!   mutants.jsonl   one MutantRecord per line
//!   kills.csv       mutant_id,test_id   (one row per killing pair)
//!   labels.csv      mutant_id,label     (optional, label ∈ {S,N})
//!   features.csv    mutant_id,<16 feature names>   (optional)
//!   <unit paths>    source units, paths relative to root
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Corpus, FeatureSet, FeatureVector, KillMatrix, Label, MutantRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectEntry {
    pub id: String,
    pub units: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub projects: Vec<ProjectEntry>,
    /// Test-pool ids, in matrix column order.
    pub tests: Vec<String>,
    pub mutants: String,
    pub kills: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<String>,
}

fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

fn malformed(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::MalformedLine {
        path: path.to_path_buf(),
        line,
        reason: reason.into(),
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(open(path)?))
}

/// Iterates records with their 1-based line numbers, checking field counts.
fn csv_records(path: &Path, expected_header: &[&str]) -> Result<Vec<(usize, csv::StringRecord)>> {
    let mut rdr = csv_reader(path)?;
    let header = rdr.headers()?.clone();
    if header.iter().ne(expected_header.iter().copied()) {
        return Err(malformed(
            path,
            1,
            format!("expected header `{}`", expected_header.join(",")),
        ));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() != expected_header.len() {
            return Err(malformed(
                path,
                line,
                format!("expected {} fields, found {}", expected_header.len(), rec.len()),
            ));
        }
        out.push((line, rec));
    }
    Ok(out)
}

pub(super) fn load_corpus(root: &Path) -> Result<Corpus> {
    let manifest_path = root.join("manifest.json");
    let manifest: Manifest = serde_json::from_reader(open(&manifest_path)?)
        .map_err(|e| malformed(&manifest_path, e.line(), e.to_string()))?;

    let mut units = BTreeMap::new();
    for p in &manifest.projects {
        for u in &p.units {
            let path = root.join(u);
            let text = fs::read_to_string(&path).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => Error::MissingFile(path.clone()),
                _ => Error::Io(e),
            })?;
            units.insert(u.clone(), text);
        }
    }

    let mutants = read_mutants(&root.join(&manifest.mutants))?;
    let mutant_ids: Vec<String> = mutants.iter().map(|m| m.mutant_id.clone()).collect();
    let matrix = read_kills(&root.join(&manifest.kills), mutant_ids, manifest.tests.clone())?;

    let features = manifest
        .features
        .as_ref()
        .map(|f| read_features(&root.join(f)))
        .transpose()?;

    let corpus = Corpus::new(manifest.projects, units, mutants, matrix, features)?;
    match &manifest.labels {
        Some(l) => {
            let labels = read_labels(&root.join(l))?;
            corpus.with_labels(&labels)
        }
        None => Ok(corpus),
    }
}

fn read_mutants(path: &Path) -> Result<Vec<MutantRecord>> {
    let reader = BufReader::new(open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: MutantRecord = serde_json::from_str(&line).map_err(|e| malformed(path, i + 1, e.to_string()))?;
        out.push(rec);
    }
    Ok(out)
}

fn read_kills(path: &Path, mutant_ids: Vec<String>, test_ids: Vec<String>) -> Result<KillMatrix> {
    let mut matrix = KillMatrix::new(mutant_ids, test_ids)?;
    for (line, rec) in csv_records(path, &["mutant_id", "test_id"])? {
        matrix.set_kill_by_id(&rec[0], &rec[1]).map_err(|e| match e {
            Error::UnmatchedMutant(id) => malformed(path, line, format!("unmatched mutant id `{id}`")),
            Error::UnmatchedTest(id) => malformed(path, line, format!("unmatched test id `{id}`")),
            other => other,
        })?;
    }
    Ok(matrix)
}

pub fn read_labels(path: &Path) -> Result<BTreeMap<String, Label>> {
    let mut out = BTreeMap::new();
    for (line, rec) in csv_records(path, &["mutant_id", "label"])? {
        let label: Label = rec[1].parse().map_err(|e: String| malformed(path, line, e))?;
        if out.insert(rec[0].to_string(), label).is_some() {
            return Err(malformed(path, line, format!("duplicate mutant id `{}`", &rec[0])));
        }
    }
    Ok(out)
}

pub fn write_labels(path: &Path, labels: &BTreeMap<String, Label>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["mutant_id", "label"])?;
    for (id, l) in labels {
        w.write_record([id.as_str(), l.as_str()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_features(path: &Path) -> Result<FeatureSet> {
    let mut rdr = csv_reader(path)?;
    let header = rdr.headers()?.clone();
    if header.get(0) != Some("mutant_id") || header.len() < 2 {
        return Err(malformed(path, 1, "expected header `mutant_id,<feature names>`"));
    }
    let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut vectors = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() != header.len() {
            return Err(malformed(
                path,
                line,
                format!("expected {} fields, found {}", header.len(), rec.len()),
            ));
        }
        let values = rec
            .iter()
            .skip(1)
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| malformed(path, line, format!("bad number `{v}`: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        vectors.push(FeatureVector {
            mutant_id: rec[0].to_string(),
            values,
        });
    }
    FeatureSet::new(names, vectors)
}

pub fn write_features(path: &Path, features: &FeatureSet) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["mutant_id".to_string()];
    header.extend(features.names().iter().cloned());
    w.write_record(&header)?;
    for v in features.vectors() {
        let mut rec = vec![v.mutant_id.clone()];
        rec.extend(v.values.iter().map(|x| x.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn create_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    Ok(())
}

pub(super) fn save_corpus(corpus: &Corpus, root: &Path) -> Result<()> {
    fs::create_dir_all(root)?;
    let labels = corpus.labels();
    let manifest = Manifest {
        projects: corpus.projects().to_vec(),
        tests: corpus.matrix().test_ids().to_vec(),
        mutants: "mutants.jsonl".into(),
        kills: "kills.csv".into(),
        features: corpus.features().map(|_| "features.csv".into()),
        labels: (!labels.is_empty()).then(|| "labels.csv".into()),
    };
    let mut f = fs::File::create(root.join("manifest.json"))?;
    serde_json::to_writer_pretty(&mut f, &manifest)?;
    writeln!(f)?;

    for (path, text) in corpus.units() {
        let dest: PathBuf = root.join(path);
        create_parent(&dest)?;
        fs::write(dest, text)?;
    }

    let mut f = std::io::BufWriter::new(fs::File::create(root.join(&manifest.mutants))?);
    for m in corpus.mutants() {
        let unlabeled = MutantRecord {
            label: None,
            ..m.clone()
        };
        serde_json::to_writer(&mut f, &unlabeled)?;
        writeln!(f)?;
    }
    f.flush()?;

    let mut w = csv::Writer::from_path(root.join(&manifest.kills))?;
    w.write_record(["mutant_id", "test_id"])?;
    for (m, t) in corpus.matrix().pairs() {
        w.write_record([m, t])?;
    }
    w.flush()?;

    if let Some(name) = &manifest.labels {
        write_labels(&root.join(name), &labels)?;
    }
    if let (Some(name), Some(fs)) = (&manifest.features, corpus.features()) {
        write_features(&root.join(name), fs)?;
    }
    Ok(())
}
