//! Mutation-guided test design simulation.
//!
//! A simulated tester walks the selected mutants in order. For each one still
//! alive it either writes a test (a random pool test that kills it) or, if no
//! pool test kills it, judges it equivalent. Every generated test is run on
//! the surviving selected mutants. MS* is measured against the subsuming set
//! of the whole labeling, not just the selection.

mod noise;

pub use noise::{inject_noise, NoiseConfig};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::corpus::KillMatrix;
use crate::error::{Error, Result};
use crate::seed;
use crate::subsumption::GroundTruthLabeling;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    #[serde(default = "default_target")]
    pub target_ms: f64,
    #[serde(default = "default_reps")]
    pub repetitions: usize,
    pub master_seed: u64,
}

fn default_target() -> f64 {
    1.0
}
fn default_reps() -> usize {
    1000
}

impl SimulationConfig {
    pub fn new(master_seed: u64) -> Self {
        Self {
            target_ms: default_target(),
            repetitions: default_reps(),
            master_seed,
        }
    }
}

/// How the mutants of a strategy are ordered in each repetition.
#[derive(Debug, Clone, PartialEq)]
pub enum Selection {
    /// Unordered set; shuffled anew per repetition.
    Set(Vec<String>),
    /// Fixed priority order, used as is.
    Ranking(Vec<String>),
    /// `k` mutants drawn uniformly from `candidates` per repetition.
    Random { candidates: Vec<String>, k: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepetitionRecord {
    pub rep: usize,
    pub seed: u64,
    pub final_ms_star: f64,
    pub analyzed: usize,
    pub equivalents_analyzed: usize,
    pub test_executions: usize,
    pub reached_target: bool,
    /// Analyzed mutants in order.
    pub analyzed_ids: Vec<String>,
    /// Generated tests, one per killable analyzed mutant, in order.
    pub tests: Vec<String>,
    /// MS* after each analyzed mutant.
    pub trajectory: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub records: Vec<RepetitionRecord>,
}

impl SimulationResult {
    pub fn final_scores(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.final_ms_star).collect()
    }

    pub fn mean_final_ms(&self) -> f64 {
        crate::metrics::mean(&self.final_scores())
    }
}

/// One run over `selected` in the given order, stopping once MS* reaches
/// `target` or no selected mutant survives.
pub fn simulate<S: AsRef<str>>(
    selected: &[S],
    matrix: &KillMatrix,
    labeling: &GroundTruthLabeling,
    target: f64,
    seed: u64,
) -> Result<RepetitionRecord> {
    if selected.is_empty() {
        return Err(Error::EmptySelection);
    }
    if labeling.len() != matrix.mutant_count() {
        return Err(Error::LengthMismatch(format!(
            "labeling has {} mutants, matrix {}",
            labeling.len(),
            matrix.mutant_count()
        )));
    }
    let subsuming = labeling.subsuming_mask();
    let total = subsuming.count_ones();
    if total == 0 {
        return Err(Error::NoSubsumingMutants);
    }
    let order = selected
        .iter()
        .map(|id| {
            matrix
                .mutant_position(id.as_ref())
                .ok_or_else(|| Error::UnmatchedMutant(id.as_ref().to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let columns = matrix.columns();

    let mut alive = BitRow::new(matrix.mutant_count());
    for &m in &order {
        alive.set(m, true);
    }
    let mut killed = BitRow::new(matrix.mutant_count());
    let mut rng = seed::rng(seed);
    let mut rec = RepetitionRecord {
        rep: 0,
        seed,
        final_ms_star: 0.0,
        analyzed: 0,
        equivalents_analyzed: 0,
        test_executions: 0,
        reached_target: false,
        analyzed_ids: Vec::new(),
        tests: Vec::new(),
        trajectory: Vec::new(),
    };
    let mut ms = 0.0;
    let mut cursor = 0;
    while ms < target {
        while cursor < order.len() && !alive.get(order[cursor]) {
            cursor += 1;
        }
        let Some(&m) = order.get(cursor) else { break };
        rec.analyzed += 1;
        rec.analyzed_ids.push(matrix.mutant_ids()[m].clone());
        let killers: Vec<usize> = matrix.row(m).ones().collect();
        match killers.choose(&mut rng) {
            Some(&t) => {
                rec.test_executions += alive.count_ones();
                rec.tests.push(matrix.test_ids()[t].clone());
                killed.union_with(&columns[t]);
                alive.difference_with(&columns[t]);
            }
            None => {
                rec.equivalents_analyzed += 1;
                alive.set(m, false);
            }
        }
        ms = killed.intersection_count(&subsuming) as f64 / total as f64;
        rec.trajectory.push(ms);
    }
    rec.final_ms_star = ms;
    rec.reached_target = ms >= target;
    Ok(rec)
}

/// Order used by repetition `rep` for `selection`.
fn order_for(selection: &Selection, rep_seed: u64) -> Vec<String> {
    let mut rng = seed::rng(seed::derive_seed(rep_seed, seed::stream_id("order")));
    match selection {
        Selection::Ranking(ids) => ids.clone(),
        Selection::Set(ids) => {
            let mut v = ids.clone();
            v.shuffle(&mut rng);
            v
        }
        Selection::Random { candidates, k } => {
            let mut v = candidates.clone();
            v.shuffle(&mut rng);
            v.truncate(*k);
            v
        }
    }
}

/// Runs `config.repetitions` independent simulations; repetition `i` is
/// seeded with `derive_seed(master_seed, i)`.
pub fn repeat_simulations(
    selection: &Selection,
    matrix: &KillMatrix,
    labeling: &GroundTruthLabeling,
    config: &SimulationConfig,
) -> Result<SimulationResult> {
    let records = (0..config.repetitions.max(1))
        .map(|i| {
            let rep_seed = seed::derive_seed(config.master_seed, i as u64);
            let order = order_for(selection, rep_seed);
            let mut rec = simulate(&order, matrix, labeling, config.target_ms, rep_seed)?;
            rec.rep = i;
            Ok(rec)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimulationResult { records })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Effort {
    pub reached: bool,
    pub analyzed: usize,
    pub test_executions: usize,
    pub ms_star: f64,
}

/// Cost of reaching `target` when analyzing mutants in `ranking` order.
pub fn effort_to_reach<S: AsRef<str>>(
    ranking: &[S],
    matrix: &KillMatrix,
    labeling: &GroundTruthLabeling,
    target: f64,
    seed: u64,
) -> Result<Effort> {
    let rec = simulate(ranking, matrix, labeling, target, seed)?;
    Ok(Effort {
        reached: rec.reached_target,
        analyzed: rec.analyzed,
        test_executions: rec.test_executions,
        ms_star: rec.final_ms_star,
    })
}
