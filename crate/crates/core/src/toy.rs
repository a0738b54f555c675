//! Generator for the bundled toy corpus.
//!
//! Units are small functions built from statement templates. Each mutant's
//! kill set follows a role fixed by its operator and statement shape:
//! stubborn mutants get a dedicated test and end up subsuming, easy ones are
//! killed by a stubborn mutant's test plus others and end up subsumed, and
//! the rest are never killed. A small fraction of roles is drawn at random.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, KillMatrix, MutantRecord, ProjectEntry};
use crate::error::Result;
use crate::features::extract_features;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToyConfig {
    pub seed: u64,
    #[serde(default = "default_projects")]
    pub projects: usize,
    #[serde(default = "default_units")]
    pub units_per_project: usize,
    /// Probability that a mutant's role ignores the planted rule.
    #[serde(default = "default_noise")]
    pub role_noise: f64,
}

fn default_projects() -> usize {
    5
}
fn default_units() -> usize {
    5
}
fn default_noise() -> f64 {
    0.08
}

impl ToyConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            projects: default_projects(),
            units_per_project: default_units(),
            role_noise: default_noise(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Stubborn,
    Easy,
    Silent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Header,
    Decl,
    Sum,
    Product,
    BranchEq,
    BranchLess,
    Loop,
    ReturnLiteral,
    ReturnVar,
    Call,
    Text,
    Close,
}

fn operators(shape: Shape) -> &'static [(&'static str, Role)] {
    use Role::*;
    match shape {
        Shape::Decl => &[("CRCR", Stubborn), ("ABS", Silent)],
        Shape::Sum => &[("AOR", Easy), ("UOI", Silent)],
        Shape::Product => &[("AOR", Stubborn), ("UOI", Easy)],
        Shape::BranchEq => &[("ROR", Stubborn), ("COR", Easy)],
        Shape::BranchLess => &[("ROR", Easy), ("COR", Silent)],
        Shape::Loop => &[("ROR", Easy)],
        Shape::ReturnLiteral => &[("ReturnValsMutator", Stubborn)],
        Shape::ReturnVar => &[("ReturnValsMutator", Easy)],
        Shape::Call => &[("SDL", Silent), ("VoidMethodCall", Easy)],
        Shape::Text => &[("SDL", Easy)],
        Shape::Header | Shape::Close => &[],
    }
}

const VARIABLES: &[&str] = &[
    "total", "count", "limit", "offset", "width", "height", "index", "step", "acc", "delta", "base", "scale", "left",
    "right", "size", "mask", "depth", "score", "level", "span",
];
const FUNCTIONS: &[&str] = &[
    "compute_sum",
    "clamp_value",
    "find_max",
    "scale_range",
    "merge_runs",
    "count_bits",
    "parse_flag",
    "update_state",
    "next_power",
    "checksum",
    "blend",
    "pick_slot",
    "fold_left",
    "rotate",
    "measure",
];
const CALLEES: &[&str] = &["log_value", "emit", "trace_point", "record"];
const MESSAGES: &[&str] = &["\"done\"", "\"overflow\"", "\"empty input\"", "\"retry\""];

struct UnitBuilder<'r> {
    rng: &'r mut ChaCha8Rng,
    lines: Vec<(String, Shape, usize)>,
    vars: Vec<String>,
    depth: usize,
}

impl UnitBuilder<'_> {
    fn push(&mut self, text: String, shape: Shape) {
        self.lines.push((text, shape, self.depth));
    }

    fn var(&mut self) -> String {
        self.vars.choose(self.rng).unwrap().clone()
    }

    fn fresh(&mut self) -> Option<String> {
        let unused: Vec<&&str> = VARIABLES
            .iter()
            .filter(|v| !self.vars.iter().any(|u| u == **v))
            .collect();
        let v = unused.choose(self.rng)?.to_string();
        self.vars.push(v.clone());
        Some(v)
    }

    fn simple(&mut self) {
        match self.rng.gen_range(0..6) {
            0 => {
                let a = self.var();
                match self.fresh() {
                    Some(v) => {
                        let k = self.rng.gen_range(1..9);
                        self.push(format!("int {v} = {a} + {k} ;"), Shape::Decl)
                    }
                    None => self.push(format!("{a} = {a} + 1 ;"), Shape::Sum),
                }
            }
            1 => {
                let (x, a, b) = (self.var(), self.var(), self.var());
                self.push(format!("{x} = {a} + {b} ;"), Shape::Sum);
            }
            2 => {
                let (x, a, b) = (self.var(), self.var(), self.var());
                self.push(format!("{x} = {a} * {b} ;"), Shape::Product);
            }
            3 => {
                let (f, a) = (*CALLEES.choose(self.rng).unwrap(), self.var());
                self.push(format!("{f} ( {a} ) ;"), Shape::Call);
            }
            4 => {
                let m = *MESSAGES.choose(self.rng).unwrap();
                self.push(format!("String msg = {m} ;"), Shape::Text);
            }
            _ => {
                let (x, a) = (self.var(), self.var());
                self.push(format!("{x} = {a} - 1 ;"), Shape::Sum);
            }
        }
    }

    fn block(&mut self, head: String, shape: Shape) {
        self.push(head, shape);
        self.depth += 1;
        for _ in 0..self.rng.gen_range(1..=2) {
            if self.rng.gen_bool(0.3) {
                if self.rng.gen_bool(0.5) {
                    let k = self.rng.gen_range(0..3);
                    self.push(format!("return {k} ;"), Shape::ReturnLiteral);
                } else {
                    let v = self.var();
                    self.push(format!("return {v} ;"), Shape::ReturnVar);
                }
                break;
            }
            self.simple();
        }
        self.depth -= 1;
        self.push("}".into(), Shape::Close);
    }

    fn body(&mut self) {
        for _ in 0..self.rng.gen_range(5..9) {
            match self.rng.gen_range(0..5) {
                0 => {
                    let (a, b) = (self.var(), self.var());
                    self.block(format!("if ( {a} == {b} ) {{"), Shape::BranchEq);
                }
                1 => {
                    let (a, b) = (self.var(), self.var());
                    self.block(format!("if ( {a} < {b} ) {{"), Shape::BranchLess);
                }
                2 => {
                    let (a, b) = (self.var(), self.var());
                    self.block(format!("while ( {a} > {b} ) {{"), Shape::Loop);
                }
                _ => self.simple(),
            }
        }
        if self.rng.gen_bool(0.5) {
            self.push("return 0 ;".into(), Shape::ReturnLiteral);
        } else {
            let v = self.var();
            self.push(format!("return {v} ;"), Shape::ReturnVar);
        }
    }
}

struct Draft {
    record: MutantRecord,
    role: Role,
}

/// Builds the toy corpus, features included, labels not.
pub fn generate(config: &ToyConfig) -> Result<Corpus> {
    let mut rng = seed::rng(config.seed);
    let mut projects = Vec::new();
    let mut units = BTreeMap::new();
    let mut drafts: Vec<Draft> = Vec::new();

    for p in 0..config.projects {
        let pid = format!("proj{}", (b'a' + p as u8) as char);
        let mut entry = ProjectEntry {
            id: pid.clone(),
            units: Vec::new(),
        };
        for u in 0..config.units_per_project {
            let path = format!("{pid}/unit{u}.c");
            let fname = *FUNCTIONS.choose(&mut rng).unwrap();
            let mut params: Vec<String> = VARIABLES.choose_multiple(&mut rng, 2).map(|s| s.to_string()).collect();
            params.sort();
            let mut b = UnitBuilder {
                rng: &mut rng,
                lines: Vec::new(),
                vars: params.clone(),
                depth: 0,
            };
            b.push(
                format!("int {fname} ( int {} , int {} ) {{", params[0], params[1]),
                Shape::Header,
            );
            b.depth = 1;
            b.body();
            b.depth = 0;
            b.push("}".into(), Shape::Close);
            let lines = std::mem::take(&mut b.lines);

            let mut source = String::new();
            for (stmt, (text, shape, depth)) in lines.iter().enumerate() {
                source.push_str(&"  ".repeat(*depth));
                source.push_str(text);
                source.push('\n');
                for &(op, planted) in operators(*shape) {
                    if !rng.gen_bool(0.85) {
                        continue;
                    }
                    let role = if rng.gen_bool(config.role_noise) {
                        *[Role::Stubborn, Role::Easy, Role::Silent].choose(&mut rng).unwrap()
                    } else {
                        planted
                    };
                    drafts.push(Draft {
                        record: MutantRecord {
                            mutant_id: String::new(),
                            project_id: pid.clone(),
                            unit_path: path.clone(),
                            statement_index: stmt,
                            operator: op.to_string(),
                            label: None,
                        },
                        role,
                    });
                }
            }
            units.insert(path.clone(), source);
            entry.units.push(path);
        }
        projects.push(entry);
    }
    for (i, d) in drafts.iter_mut().enumerate() {
        d.record.mutant_id = format!("{}-m{i:04}", d.record.project_id);
    }

    // Kill sets, project by project.
    let mut tests: Vec<String> = Vec::new();
    let mut kills: Vec<(usize, usize)> = Vec::new();
    for p in &projects {
        let rows: Vec<usize> = (0..drafts.len())
            .filter(|&i| drafts[i].record.project_id == p.id)
            .collect();
        if !rows.iter().any(|&i| drafts[i].role == Role::Stubborn) {
            if let Some(&i) = rows.iter().find(|&&i| drafts[i].role == Role::Easy) {
                drafts[i].role = Role::Stubborn;
            }
        }
        let new_test = |tests: &mut Vec<String>| {
            tests.push(format!("{}-t{:03}", p.id, tests.len()));
            tests.len() - 1
        };
        let mut dedicated: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for &i in &rows {
            if drafts[i].role != Role::Stubborn {
                continue;
            }
            let unit = drafts[i].record.unit_path.as_str();
            let reuse = dedicated
                .get(unit)
                .filter(|_| rng.gen_bool(0.1))
                .and_then(|ts| ts.choose(&mut rng).copied());
            let t = reuse.unwrap_or_else(|| new_test(&mut tests));
            dedicated.entry(unit).or_default().push(t);
            kills.push((i, t));
        }
        let project_tests: Vec<usize> = dedicated.values().flatten().copied().collect();
        let mut shared = Vec::new();
        for _ in 0..3 {
            shared.push(new_test(&mut tests));
        }
        for &i in &rows {
            if drafts[i].role != Role::Easy {
                continue;
            }
            let unit = drafts[i].record.unit_path.as_str();
            let pool = dedicated
                .get(unit)
                .filter(|_| rng.gen_bool(0.8))
                .unwrap_or(&project_tests);
            let anchor = *pool.choose(&mut rng).expect("project has a stubborn mutant");
            kills.push((i, anchor));
            let extra = *shared.choose(&mut rng).unwrap();
            kills.push((i, extra));
            if rng.gen_bool(0.4) {
                let other = *project_tests.choose(&mut rng).unwrap();
                if other != anchor {
                    kills.push((i, other));
                }
            }
        }
    }

    let mutants: Vec<MutantRecord> = drafts.into_iter().map(|d| d.record).collect();
    let mutant_ids: Vec<String> = mutants.iter().map(|m| m.mutant_id.clone()).collect();
    let mut matrix = KillMatrix::new(mutant_ids, tests)?;
    for (m, t) in kills {
        matrix.set_kill(m, t, true);
    }
    let features = extract_features(&units, &mutants)?;
    Corpus::new(projects, units, mutants, matrix, Some(features))
}
