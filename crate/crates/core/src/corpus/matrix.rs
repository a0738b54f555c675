use std::collections::HashMap;

use crate::bits::BitRow;
use crate::error::{Error, Result};

/// Mutants × tests kill incidence, stored as one bit row per mutant.
#[derive(Debug, Clone)]
pub struct KillMatrix {
    mutant_ids: Vec<String>,
    test_ids: Vec<String>,
    rows: Vec<BitRow>,
    mutant_index: HashMap<String, usize>,
    test_index: HashMap<String, usize>,
}

impl PartialEq for KillMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.mutant_ids == other.mutant_ids && self.test_ids == other.test_ids && self.rows == other.rows
    }
}

fn index_of(ids: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::DuplicateId(id.clone()));
        }
    }
    Ok(index)
}

impl KillMatrix {
    /// An all-false matrix over the given axes.
    pub fn new(mutant_ids: Vec<String>, test_ids: Vec<String>) -> Result<Self> {
        let mutant_index = index_of(&mutant_ids)?;
        let test_index = index_of(&test_ids)?;
        let rows = vec![BitRow::new(test_ids.len()); mutant_ids.len()];
        Ok(Self {
            mutant_ids,
            test_ids,
            rows,
            mutant_index,
            test_index,
        })
    }

    /// Builds a matrix from a list of killing `(mutant_id, test_id)` pairs.
    pub fn from_pairs<'a, I>(mutant_ids: Vec<String>, test_ids: Vec<String>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut matrix = Self::new(mutant_ids, test_ids)?;
        for (m, t) in pairs {
            matrix.set_kill_by_id(m, t)?;
        }
        Ok(matrix)
    }

    /// Builds a matrix from dense boolean rows.
    pub fn from_dense(mutant_ids: Vec<String>, test_ids: Vec<String>, dense: &[Vec<bool>]) -> Result<Self> {
        if dense.len() != mutant_ids.len() || dense.iter().any(|r| r.len() != test_ids.len()) {
            return Err(Error::LengthMismatch(format!(
                "dense matrix shape does not match {}×{} ids",
                mutant_ids.len(),
                test_ids.len()
            )));
        }
        let mut matrix = Self::new(mutant_ids, test_ids)?;
        for (m, row) in dense.iter().enumerate() {
            matrix.rows[m] = row.iter().copied().collect();
        }
        Ok(matrix)
    }

    pub fn mutant_ids(&self) -> &[String] {
        &self.mutant_ids
    }

    pub fn test_ids(&self) -> &[String] {
        &self.test_ids
    }

    pub fn mutant_count(&self) -> usize {
        self.mutant_ids.len()
    }

    pub fn test_count(&self) -> usize {
        self.test_ids.len()
    }

    pub fn mutant_position(&self, id: &str) -> Option<usize> {
        self.mutant_index.get(id).copied()
    }

    pub fn test_position(&self, id: &str) -> Option<usize> {
        self.test_index.get(id).copied()
    }

    pub fn kills(&self, mutant: usize, test: usize) -> bool {
        self.rows[mutant].get(test)
    }

    pub fn set_kill(&mut self, mutant: usize, test: usize, value: bool) {
        self.rows[mutant].set(test, value);
    }

    pub fn set_kill_by_id(&mut self, mutant_id: &str, test_id: &str) -> Result<()> {
        let m = self
            .mutant_position(mutant_id)
            .ok_or_else(|| Error::UnmatchedMutant(mutant_id.to_string()))?;
        let t = self
            .test_position(test_id)
            .ok_or_else(|| Error::UnmatchedTest(test_id.to_string()))?;
        self.rows[m].set(t, true);
        Ok(())
    }

    pub fn row(&self, mutant: usize) -> &BitRow {
        &self.rows[mutant]
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    /// Mutants killed by `test`, as a bit row over mutants.
    pub fn column(&self, test: usize) -> BitRow {
        self.rows.iter().map(|r| r.get(test)).collect()
    }

    pub fn columns(&self) -> Vec<BitRow> {
        let mut cols = vec![BitRow::new(self.mutant_count()); self.test_count()];
        for (m, row) in self.rows.iter().enumerate() {
            for t in row.ones() {
                cols[t].set(m, true);
            }
        }
        cols
    }

    /// Killing pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(m, row)| {
            row.ones()
                .map(move |t| (self.mutant_ids[m].as_str(), self.test_ids[t].as_str()))
        })
    }

    /// Sub-matrix over the given mutant rows (all tests kept).
    pub fn select_rows(&self, rows: &[usize]) -> KillMatrix {
        let mutant_ids: Vec<String> = rows.iter().map(|&r| self.mutant_ids[r].clone()).collect();
        let mutant_index = mutant_ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        KillMatrix {
            mutant_ids,
            test_ids: self.test_ids.clone(),
            rows: rows.iter().map(|&r| self.rows[r].clone()).collect(),
            mutant_index,
            test_index: self.test_index.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    #[test]
    fn pairs_round_trip() {
        let m = KillMatrix::from_pairs(
            ids("M", 3),
            ids("t", 3),
            [("M1", "t1"), ("M2", "t1"), ("M2", "t2"), ("M3", "t3")],
        )
        .unwrap();
        let pairs: Vec<_> = m.pairs().collect();
        assert_eq!(pairs, vec![("M1", "t1"), ("M2", "t1"), ("M2", "t2"), ("M3", "t3")]);
        assert!(m.kills(1, 1));
        assert_eq!(m.column(0).ones().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(m.columns()[0], m.column(0));
    }

    #[test]
    fn rejects_duplicates_and_unknown_ids() {
        assert!(matches!(
            KillMatrix::new(vec!["a".into(), "a".into()], vec![]),
            Err(Error::DuplicateId(_))
        ));
        assert!(matches!(
            KillMatrix::from_pairs(ids("M", 1), ids("t", 1), [("M9", "t1")]),
            Err(Error::UnmatchedMutant(_))
        ));
        assert!(matches!(
            KillMatrix::from_pairs(ids("M", 1), ids("t", 1), [("M1", "t9")]),
            Err(Error::UnmatchedTest(_))
        ));
    }
}
