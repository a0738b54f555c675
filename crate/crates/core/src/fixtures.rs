//! Small reference fixtures shared by unit, integration and acceptance tests.

use std::collections::BTreeMap;

use crate::corpus::{Corpus, KillMatrix, MutantRecord, ProjectEntry};

fn ids(prefix: &str, range: std::ops::Range<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

/// Three mutants and three tests: M1 killed by {t1}, M2 by {t1, t2}, M3 by {t3}.
pub fn three_mutant_matrix() -> KillMatrix {
    KillMatrix::from_pairs(
        ids("M", 1..4),
        ids("t", 1..4),
        [("M1", "t1"), ("M2", "t1"), ("M2", "t2"), ("M3", "t3")],
    )
    .expect("fixture is valid")
}

pub const THREE_MUTANT_UNIT: &str =
    "int f ( int a , int b ) {\n  if ( a > b ) {\n    return a ;\n  }\n  return b ;\n}\n";

/// The three-mutant matrix wrapped in a one-project corpus.
pub fn three_mutant_corpus() -> Corpus {
    let mutants = [(1, 1, "ROR"), (2, 2, "ReturnValsMutator"), (3, 4, "ReturnValsMutator")]
        .into_iter()
        .map(|(i, stmt, op)| MutantRecord {
            mutant_id: format!("M{i}"),
            project_id: "demo".into(),
            unit_path: "demo/f.c".into(),
            statement_index: stmt,
            operator: op.into(),
            label: None,
        })
        .collect();
    Corpus::new(
        vec![ProjectEntry {
            id: "demo".into(),
            units: vec!["demo/f.c".into()],
        }],
        BTreeMap::from([("demo/f.c".to_string(), THREE_MUTANT_UNIT.to_string())]),
        mutants,
        three_mutant_matrix(),
        None,
    )
    .expect("fixture is valid")
}

/// Inputs of the six tests of the `max` example, `t1`..`t6`.
pub const MAX_TESTS: [(i32, i32, i32); 6] = [(1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (0, 1, 2), (2, 0, 2)];

/// Kill pairs of the eleven `max` mutants `M0`..`M10` under [`MAX_TESTS`].
const MAX_KILLS: [(&str, &[&str]); 11] = [
    ("M0", &["t1", "t2"]),
    ("M1", &[]),
    ("M2", &["t1", "t3"]),
    ("M3", &["t1"]),
    ("M4", &["t2", "t6"]),
    ("M5", &["t1", "t4"]),
    ("M6", &[]),
    ("M7", &["t5"]),
    ("M8", &["t1", "t4"]),
    ("M9", &["t1", "t4"]),
    ("M10", &["t3", "t5"]),
];

pub fn max_matrix() -> KillMatrix {
    KillMatrix::from_pairs(
        ids("M", 0..11),
        ids("t", 1..7),
        MAX_KILLS.iter().flat_map(|(m, ts)| ts.iter().map(move |t| (*m, *t))),
    )
    .expect("fixture is valid")
}

/// Reference `max(a, b, c)` and its mutants; `mutant = None` runs the original.
pub fn run_max(mutant: Option<usize>, a: i32, b: i32, c: i32) -> i32 {
    let m = |k| mutant == Some(k);
    let first = if m(0) {
        a < b && a >= c
    } else if m(1) {
        a >= b && a > c
    } else if m(2) {
        a >= b || a >= c
    } else if m(3) {
        a >= c
    } else {
        a >= b && a >= c
    };
    if first {
        return if m(4) { b } else { a };
    }
    let second = if m(5) {
        b < a && b >= c
    } else if m(6) {
        b >= a && b > c
    } else if m(7) {
        b >= a || b >= c
    } else if m(8) {
        false
    } else {
        b >= a && b >= c
    };
    if second {
        return if m(9) { a } else { b };
    }
    if m(10) {
        0
    } else {
        c
    }
}

/// Declarations that precede the `getOptionValue` method so its names take
/// the numbers `fn_3`, `tp_1`, `vr_3`, `fn_4`, `vr_5`.
pub const OPTION_PREFIX: &str = "public boolean hasOption ( final String opt , final int flags ) {
  // resolve first, then test
  final Option option = resolve ( opt ) ;
  final boolean found = option != null && flags > 0 ;
  return found ;
}
";

pub const OPTION_METHOD: &str = "public String getOptionValue (
 final Option option ) {
 if ( option == null ) {
  return null ;
 }
 final String [] values =
  getOptionValues ( option ) ;
 return ( values == null ) ?
  null : values [ 0 ] ;
}
";

pub const OPTION_METHOD_ABSTRACTED: &str = "public String fn_3 ( final tp_1 vr_3 ) { if ( vr_3 == null ) { return null ; } final String [] vr_5 = fn_4 ( vr_3 ) ; return ( vr_5 == null ) ? null : vr_5 [ 0 ] ; }";

/// Full unit: prefix followed by the `getOptionValue` method.
pub fn option_unit() -> String {
    format!("{OPTION_PREFIX}{OPTION_METHOD}")
}
