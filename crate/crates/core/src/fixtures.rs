//! The aeroplane-seat net used throughout the tests and docs.
//!
//! Variables, in order: A flight length (a short, ā long-haul), B term time
//! (b term, b̄ holiday), C class (c economy, c̄ business, c̄̄ first), D paid
//! Wi-Fi (d no, d̄ yes). Edges A→C, B→C, C→D.
//!
//! CPT(A) is a ≻ ā, CPT(B) is b ≻ b̄ and CPT(C) is:
//!
//! | A B | order      | positions |
//! |-----|------------|-----------|
//! | a b | c ≻ c̄ ≻ c̄̄ | (1,2,3)   |
//! | a b̄ | c̄ ≻ c̄̄ ≻ c | (3,1,2)   |
//! | ā b | c̄̄ ≻ c ≻ c̄ | (2,3,1)   |
//! | ā b̄ | c̄̄ ≻ c̄ ≻ c | (3,2,1)   |
//!
//! CPT(D) is d ≻ d̄ under c and d̄ ≻ d under c̄ and under c̄̄. These are the
//! only rows consistent with the reference ranks checked in the tests.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{CpNet, CptRow, Outcome, PreferenceMode, RawNet, Value};

fn row(parents: &[Value], positions: &[u16]) -> CptRow {
    CptRow { parents: parents.to_vec(), positions: positions.to_vec() }
}

/// The four-variable example net.
pub fn example_net() -> CpNet {
    let raw = RawNet {
        domain_sizes: vec![2, 2, 3, 2],
        adjacency: vec![
            vec![false, false, true, false],
            vec![false, false, true, false],
            vec![false, false, false, true],
            vec![false, false, false, false],
        ],
        cpts: vec![
            vec![row(&[], &[1, 2])],
            vec![row(&[], &[1, 2])],
            vec![
                row(&[1, 1], &[1, 2, 3]),
                row(&[1, 2], &[3, 1, 2]),
                row(&[2, 1], &[2, 3, 1]),
                row(&[2, 2], &[3, 2, 1]),
            ],
            vec![row(&[1], &[1, 2]), row(&[2], &[2, 1]), row(&[3], &[2, 1])],
        ],
    };
    CpNet::new(raw, PreferenceMode::Strict).expect("example net is valid")
}

/// Shorthand for an outcome of the example net.
pub fn outcome(values: &[Value]) -> Outcome {
    Outcome::new(values.to_vec())
}

/// The plausibility constraints ¬ā, ¬(b ∧ c), ¬(b̄ ∧ c̄), ¬(b̄ ∧ c̄̄ ∧ d̄) as a
/// predicate over outcomes of [`example_net`].
pub fn example_constraints(o: &Outcome) -> bool {
    let v = o.values();
    let (a, b, c, d) = (v[0], v[1], v[2], v[3]);
    a != 2 && !(b == 1 && c == 1) && !(b == 2 && c == 2) && !(b == 2 && c == 3 && d == 2)
}

/// The single-variable row `x1 ≻ x2 ∼ x3 ∼ x4 ≻ x5 ≻ x6 ∼ x7 ≻ x8` as a
/// one-variable net.
pub fn tied_row_net() -> CpNet {
    let raw = RawNet {
        domain_sizes: vec![8],
        adjacency: vec![vec![false]],
        cpts: vec![vec![row(&[], &[1, 2, 2, 2, 3, 4, 4, 5])]],
    };
    CpNet::new(raw, PreferenceMode::Indifference).expect("tied row net is valid")
}

/// Every outcome of `net`, collected.
pub fn all_outcomes(net: &CpNet) -> Vec<Outcome> {
    net.outcomes().collect()
}
