//! Kill sets, indistinguishable groups, the subsumption graph and the
//! subsuming mutation score (MS*).
//!
//! Mutant `a` subsumes `b` when `killset(a) ⊆ killset(b)`, both non-empty.
//! Subsuming mutants are the killable mutants whose kill set is minimal under
//! strict inclusion; every member of a minimal indistinguishable group counts.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::corpus::{Corpus, KillMatrix, Label};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KillSet {
    pub mutant_id: String,
    pub tests: BTreeSet<String>,
}

impl KillSet {
    /// An empty kill set marks the mutant as equivalent.
    pub fn is_equivalent(&self) -> bool {
        self.tests.is_empty()
    }
}

pub fn kill_sets(matrix: &KillMatrix) -> Vec<KillSet> {
    matrix
        .mutant_ids()
        .iter()
        .enumerate()
        .map(|(m, id)| KillSet {
            mutant_id: id.clone(),
            tests: matrix.row(m).ones().map(|t| matrix.test_ids()[t].clone()).collect(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MutantClass {
    Subsuming,
    Subsumed,
    Equivalent,
}

impl MutantClass {
    pub fn label(self) -> Label {
        Label::from_bool(self == MutantClass::Subsuming)
    }
}

impl fmt::Display for MutantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutantClass::Subsuming => "subsuming",
            MutantClass::Subsumed => "subsumed",
            MutantClass::Equivalent => "equivalent",
        })
    }
}

/// Ground-truth class per mutant, aligned with kill-matrix rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruthLabeling {
    mutant_ids: Vec<String>,
    classes: Vec<MutantClass>,
    index: HashMap<String, usize>,
}

impl GroundTruthLabeling {
    pub fn new(mutant_ids: Vec<String>, classes: Vec<MutantClass>) -> Result<Self> {
        if mutant_ids.len() != classes.len() {
            return Err(Error::LengthMismatch(format!(
                "{} ids vs {} classes",
                mutant_ids.len(),
                classes.len()
            )));
        }
        let mut index = HashMap::with_capacity(mutant_ids.len());
        for (i, id) in mutant_ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        Ok(Self {
            mutant_ids,
            classes,
            index,
        })
    }

    pub fn mutant_ids(&self) -> &[String] {
        &self.mutant_ids
    }

    pub fn classes(&self) -> &[MutantClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_at(&self, row: usize) -> MutantClass {
        self.classes[row]
    }

    pub fn get(&self, mutant_id: &str) -> Option<MutantClass> {
        self.index.get(mutant_id).map(|&i| self.classes[i])
    }

    pub(crate) fn set_class(&mut self, row: usize, class: MutantClass) {
        self.classes[row] = class;
    }

    fn rows_of(&self, class: MutantClass) -> impl Iterator<Item = usize> + '_ {
        self.classes
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == class)
            .map(|(i, _)| i)
    }

    pub fn subsuming_rows(&self) -> Vec<usize> {
        self.rows_of(MutantClass::Subsuming).collect()
    }

    pub fn equivalent_rows(&self) -> Vec<usize> {
        self.rows_of(MutantClass::Equivalent).collect()
    }

    pub fn subsuming_mask(&self) -> BitRow {
        self.classes.iter().map(|&c| c == MutantClass::Subsuming).collect()
    }

    pub fn ids_of(&self, class: MutantClass) -> BTreeSet<&str> {
        self.rows_of(class).map(|i| self.mutant_ids[i].as_str()).collect()
    }

    /// Binary S/N view (`S` iff subsuming).
    pub fn labels(&self) -> BTreeMap<String, Label> {
        self.mutant_ids
            .iter()
            .zip(&self.classes)
            .map(|(id, c)| (id.clone(), c.label()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    /// Indistinguishable mutants, in matrix row order.
    pub mutants: Vec<String>,
    /// Their shared kill set, in matrix column order.
    pub tests: Vec<String>,
}

/// Indistinguishable groups of killable mutants plus the cover relation of
/// strict kill-set inclusion: edge `(a, b)` means `killset(a) ⊂ killset(b)`
/// with no group strictly in between.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsumptionGraph {
    pub groups: Vec<Group>,
    pub edges: Vec<(usize, usize)>,
    pub equivalent: Vec<String>,
}

impl SubsumptionGraph {
    /// Groups with no incoming edge.
    pub fn sources(&self) -> Vec<usize> {
        let mut has_in = vec![false; self.groups.len()];
        for &(_, b) in &self.edges {
            has_in[b] = true;
        }
        (0..self.groups.len()).filter(|&g| !has_in[g]).collect()
    }
}

/// Computes the ground-truth labeling and the subsumption graph.
pub fn subsuming_mutants(matrix: &KillMatrix) -> (GroundTruthLabeling, SubsumptionGraph) {
    let rows = matrix.rows();

    let mut group_of_row: HashMap<&BitRow, usize> = HashMap::new();
    let mut group_rows: Vec<Vec<usize>> = Vec::new();
    let mut equivalent = Vec::new();
    for (m, row) in rows.iter().enumerate() {
        if row.none() {
            equivalent.push(m);
            continue;
        }
        let g = *group_of_row.entry(row).or_insert_with(|| {
            group_rows.push(Vec::new());
            group_rows.len() - 1
        });
        group_rows[g].push(m);
    }
    let killsets: Vec<&BitRow> = group_rows.iter().map(|r| &rows[r[0]]).collect();
    let g = killsets.len();

    // supersets[a] = groups whose kill set strictly contains a's.
    let mut supersets = vec![BitRow::new(g); g];
    let mut has_subset = vec![false; g];
    for a in 0..g {
        for b in 0..g {
            if a != b && killsets[a].is_strict_subset(killsets[b]) {
                supersets[a].set(b, true);
                has_subset[b] = true;
            }
        }
    }

    let mut edges = Vec::new();
    for a in 0..g {
        let mut indirect = BitRow::new(g);
        for c in supersets[a].ones() {
            indirect.union_with(&supersets[c]);
        }
        let mut direct = supersets[a].clone();
        direct.difference_with(&indirect);
        edges.extend(direct.ones().map(|b| (a, b)));
    }

    let mut classes = vec![MutantClass::Equivalent; matrix.mutant_count()];
    for (gi, members) in group_rows.iter().enumerate() {
        let class = if has_subset[gi] {
            MutantClass::Subsumed
        } else {
            MutantClass::Subsuming
        };
        for &m in members {
            classes[m] = class;
        }
    }

    let ids = matrix.mutant_ids();
    let graph = SubsumptionGraph {
        groups: group_rows
            .iter()
            .zip(&killsets)
            .map(|(members, ks)| Group {
                mutants: members.iter().map(|&m| ids[m].clone()).collect(),
                tests: ks.ones().map(|t| matrix.test_ids()[t].clone()).collect(),
            })
            .collect(),
        edges,
        equivalent: equivalent.iter().map(|&m| ids[m].clone()).collect(),
    };
    let labeling = GroundTruthLabeling::new(ids.to_vec(), classes).expect("matrix ids are unique");
    (labeling, graph)
}

fn suite_columns<'a, I>(suite: I, matrix: &KillMatrix) -> Result<BitRow>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut killed = BitRow::new(matrix.mutant_count());
    let cols = matrix.columns();
    for t in suite {
        let ti = matrix
            .test_position(t)
            .ok_or_else(|| Error::UnmatchedTest(t.to_string()))?;
        killed.union_with(&cols[ti]);
    }
    Ok(killed)
}

/// MS*: fraction of subsuming mutants killed by at least one suite test.
pub fn subsuming_score<'a, I>(labeling: &GroundTruthLabeling, suite: I, matrix: &KillMatrix) -> Result<f64>
where
    I: IntoIterator<Item = &'a str>,
{
    let subsuming = labeling.subsuming_mask();
    let total = subsuming.count_ones();
    if total == 0 {
        return Err(Error::NoSubsumingMutants);
    }
    let killed = suite_columns(suite, matrix)?;
    Ok(killed.intersection_count(&subsuming) as f64 / total as f64)
}

/// Plain mutation score over all mutants (equivalents included).
pub fn plain_score<'a, I>(suite: I, matrix: &KillMatrix) -> Result<f64>
where
    I: IntoIterator<Item = &'a str>,
{
    if matrix.mutant_count() == 0 {
        return Ok(0.0);
    }
    let killed = suite_columns(suite, matrix)?;
    Ok(killed.count_ones() as f64 / matrix.mutant_count() as f64)
}

/// Labels of one project computed on that project's own rows.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectGraph {
    pub project_id: String,
    #[serde(flatten)]
    pub graph: SubsumptionGraph,
}

/// Labels every project of `corpus` separately and stitches the result back
/// into corpus row order.
pub fn label_corpus(corpus: &Corpus) -> (GroundTruthLabeling, Vec<ProjectGraph>) {
    let matrix = corpus.matrix();
    let mut classes = vec![MutantClass::Equivalent; matrix.mutant_count()];
    let mut graphs = Vec::new();
    for p in corpus.projects() {
        let rows = corpus.project_rows(&p.id);
        let sub = matrix.select_rows(&rows);
        let (lab, graph) = subsuming_mutants(&sub);
        for (i, &r) in rows.iter().enumerate() {
            classes[r] = lab.class_at(i);
        }
        graphs.push(ProjectGraph {
            project_id: p.id.clone(),
            graph,
        });
    }
    let labeling = GroundTruthLabeling::new(matrix.mutant_ids().to_vec(), classes).expect("matrix ids are unique");
    (labeling, graphs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn three_mutant_example() {
        let m = fixtures::three_mutant_matrix();
        let ks = kill_sets(&m);
        let sets: Vec<Vec<&str>> = ks
            .iter()
            .map(|k| k.tests.iter().map(String::as_str).collect())
            .collect();
        assert_eq!(sets, vec![vec!["t1"], vec!["t1", "t2"], vec!["t3"]]);

        let (lab, graph) = subsuming_mutants(&m);
        assert_eq!(lab.ids_of(MutantClass::Subsuming), ["M1", "M3"].into());
        assert_eq!(lab.ids_of(MutantClass::Subsumed), ["M2"].into());
        assert_eq!(graph.edges, vec![(0, 1)]);
        assert_eq!(graph.sources(), vec![0, 2]);
    }

    #[test]
    fn scores_on_three_mutant_example() {
        let m = fixtures::three_mutant_matrix();
        let (lab, _) = subsuming_mutants(&m);
        assert_eq!(subsuming_score(&lab, ["t1", "t2"], &m).unwrap(), 0.5);
        assert_eq!(plain_score(["t1", "t2"], &m).unwrap(), 2.0 / 3.0);
        assert_eq!(subsuming_score(&lab, [], &m).unwrap(), 0.0);
        assert_eq!(plain_score([], &m).unwrap(), 0.0);
        assert_eq!(subsuming_score(&lab, ["t1", "t2", "t3"], &m).unwrap(), 1.0);
        assert!(matches!(
            subsuming_score(&lab, ["t9"], &m),
            Err(Error::UnmatchedTest(_))
        ));
    }

    #[test]
    fn zero_subsuming_is_an_error() {
        let m = KillMatrix::new(vec!["a".into()], vec!["t".into()]).unwrap();
        let (lab, _) = subsuming_mutants(&m);
        assert_eq!(lab.class_at(0), MutantClass::Equivalent);
        assert!(matches!(
            subsuming_score(&lab, ["t"], &m),
            Err(Error::NoSubsumingMutants)
        ));
    }

    #[test]
    fn all_false_row_is_empty_set() {
        let m = KillMatrix::new(vec!["a".into()], vec!["t1".into(), "t2".into()]).unwrap();
        assert!(kill_sets(&m)[0].is_equivalent());
    }

    #[test]
    fn single_killable_mutant_subsumes() {
        let m = KillMatrix::from_pairs(vec!["a".into(), "b".into()], vec!["t".into()], [("a", "t")]).unwrap();
        let (lab, _) = subsuming_mutants(&m);
        assert_eq!(lab.class_at(0), MutantClass::Subsuming);
        assert_eq!(lab.class_at(1), MutantClass::Equivalent);
    }

    #[test]
    fn max_example() {
        let m = fixtures::max_matrix();
        let (lab, graph) = subsuming_mutants(&m);
        assert_eq!(lab.ids_of(MutantClass::Subsuming), ["M3", "M4", "M7"].into());
        assert_eq!(lab.ids_of(MutantClass::Equivalent), ["M1", "M6"].into());
        // M5 and M8 (and, under this pool, M9) share a kill set.
        let g = graph.groups.iter().find(|g| g.mutants.contains(&"M5".into())).unwrap();
        assert!(g.mutants.contains(&"M8".to_string()));
    }

    #[test]
    fn mutual_subsumption_keeps_all_peers() {
        let m = KillMatrix::from_dense(
            vec!["a".into(), "b".into(), "c".into()],
            vec!["t1".into(), "t2".into()],
            &[vec![true, false], vec![true, false], vec![true, true]],
        )
        .unwrap();
        let (lab, graph) = subsuming_mutants(&m);
        assert_eq!(lab.ids_of(MutantClass::Subsuming), ["a", "b"].into());
        assert_eq!(graph.groups.len(), 2);
    }

    fn random_matrix() -> impl Strategy<Value = KillMatrix> {
        (1usize..=12, 1usize..=8).prop_flat_map(|(nm, nt)| {
            prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.35), nt), nm).prop_map(move |d| {
                let ids = (0..nm).map(|i| format!("m{i}")).collect();
                let tids = (0..nt).map(|i| format!("t{i}")).collect();
                KillMatrix::from_dense(ids, tids, &d).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn agrees_with_pairwise_oracle(m in random_matrix()) {
            let sets: Vec<BTreeSet<usize>> = (0..m.mutant_count())
                .map(|r| (0..m.test_count()).filter(|&t| m.kills(r, t)).collect())
                .collect();
            for (k, s) in kill_sets(&m).iter().zip(&sets) {
                let names: BTreeSet<String> = s.iter().map(|&t| format!("t{t}")).collect();
                prop_assert_eq!(&k.tests, &names);
            }
            let (lab, graph) = subsuming_mutants(&m);
            for (a, sa) in sets.iter().enumerate() {
                let expected = if sa.is_empty() {
                    MutantClass::Equivalent
                } else if sets.iter().any(|sb| !sb.is_empty() && sb.len() < sa.len() && sb.is_subset(sa)) {
                    MutantClass::Subsumed
                } else {
                    MutantClass::Subsuming
                };
                prop_assert_eq!(lab.class_at(a), expected);
            }

            let suite: Vec<String> = lab.subsuming_rows().iter().map(|&r| {
                let t = sets[r].iter().next().unwrap();
                format!("t{t}")
            }).collect();
            let killed: BTreeSet<usize> = (0..m.mutant_count())
                .filter(|&r| suite.iter().any(|t| m.kills(r, m.test_position(t).unwrap())))
                .collect();
            let killable: BTreeSet<usize> = (0..m.mutant_count()).filter(|&r| !sets[r].is_empty()).collect();
            prop_assert_eq!(killed, killable);

            let group_tests: Vec<BTreeSet<&String>> = graph.groups.iter().map(|g| g.tests.iter().collect()).collect();
            for &(a, b) in &graph.edges {
                prop_assert!(group_tests[a].len() < group_tests[b].len() && group_tests[a].is_subset(&group_tests[b]));
                for &(b2, c) in &graph.edges {
                    if b2 == b {
                        prop_assert!(group_tests[a].is_subset(&group_tests[c]) && group_tests[a] != group_tests[c]);
                    }
                }
            }
            let grouped: usize = graph.groups.iter().map(|g| g.mutants.len()).sum();
            prop_assert_eq!(grouped + graph.equivalent.len(), m.mutant_count());
            for g in &graph.groups {
                prop_assert!(g.mutants.iter().all(|id| !graph.equivalent.contains(id)));
            }

            let half: Vec<String> = (0..m.test_count()).step_by(2).map(|t| format!("t{t}")).collect();
            let scan = (0..m.mutant_count())
                .filter(|&r| (0..m.test_count()).step_by(2).any(|t| m.kills(r, t)))
                .count() as f64 / m.mutant_count() as f64;
            prop_assert_eq!(plain_score(half.iter().map(String::as_str), &m).unwrap(), scan);
        }
    }
}
