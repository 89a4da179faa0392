//! Consistent orderings induced by outcome ranks.
//!
//! Sorting outcomes by descending rank never inverts an entailed pair, so
//! the result is a consistent ordering of whatever set was ranked. Outcomes
//! of equal rank form tie groups; a strict ordering breaks ties by ascending
//! lexicographic order of the value tuples.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{CpNet, ModelError, Outcome};
use crate::rank::{Rank, Ranker};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderingError {
    BudgetExceeded { outcomes: Option<u128>, budget: usize },
    InvalidOutcome(ModelError),
    EmptyConstraints,
}

impl fmt::Display for OrderingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingError::BudgetExceeded { outcomes: Some(count), budget } => {
                write!(f, "ordering: {count} outcomes exceed the enumeration budget of {budget}")
            }
            OrderingError::BudgetExceeded { outcomes: None, budget } => {
                write!(f, "ordering: outcome count overflows the enumeration budget of {budget}")
            }
            OrderingError::InvalidOutcome(e) => write!(f, "ordering: {e}"),
            OrderingError::EmptyConstraints => f.write_str("ordering: no outcome satisfies the constraints"),
        }
    }
}

impl core::error::Error for OrderingError {}

impl From<ModelError> for OrderingError {
    fn from(e: ModelError) -> Self {
        OrderingError::InvalidOutcome(e)
    }
}

/// The permitted outcomes of a constrained net.
pub enum ConstraintSet {
    Explicit(Vec<Outcome>),
    Predicate(Box<dyn Fn(&Outcome) -> bool + Send + Sync>),
}

impl ConstraintSet {
    pub fn predicate<F: Fn(&Outcome) -> bool + Send + Sync + 'static>(f: F) -> Self {
        ConstraintSet::Predicate(Box::new(f))
    }

    pub fn permits(&self, o: &Outcome) -> bool {
        match self {
            ConstraintSet::Explicit(list) => list.contains(o),
            ConstraintSet::Predicate(f) => f(o),
        }
    }
}

impl fmt::Debug for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintSet::Explicit(list) => f.debug_tuple("Explicit").field(list).finish(),
            ConstraintSet::Predicate(_) => f.write_str("Predicate(..)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedOutcome {
    pub outcome: Outcome,
    pub rank: Rank,
    /// Set in strict orderings when the entry's place relative to an
    /// equal-rank neighbour was decided by the tie-break rule.
    pub tie_broken: bool,
}

/// Outcomes sharing one rank, in tie-break order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieGroup<'a> {
    pub rank: &'a Rank,
    pub entries: &'a [RankedOutcome],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistentOrdering {
    entries: Vec<RankedOutcome>,
    strict: bool,
}

impl ConsistentOrdering {
    fn from_ranked(mut entries: Vec<RankedOutcome>, strict: bool) -> Self {
        entries.sort_by(|x, y| y.rank.cmp(&x.rank).then_with(|| x.outcome.cmp(&y.outcome)));
        entries.dedup_by(|x, y| x.outcome == y.outcome);
        if strict {
            for i in 0..entries.len() {
                let tied = (i > 0 && entries[i - 1].rank == entries[i].rank)
                    || (i + 1 < entries.len() && entries[i + 1].rank == entries[i].rank);
                entries[i].tie_broken = tied;
            }
        }
        ConsistentOrdering { entries, strict }
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn entries(&self) -> &[RankedOutcome] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Outcomes, most preferred first.
    pub fn outcomes(&self) -> Vec<Outcome> {
        self.entries.iter().map(|e| e.outcome.clone()).collect()
    }

    /// Maximal runs of equal rank.
    pub fn groups(&self) -> Vec<TieGroup<'_>> {
        self.entries
            .chunk_by(|x, y| x.rank == y.rank)
            .map(|chunk| TieGroup { rank: &chunk[0].rank, entries: chunk })
            .collect()
    }
}

fn enumerate_all(net: &CpNet, budget: usize) -> Result<impl Iterator<Item = Outcome> + '_, OrderingError> {
    let count = net.outcome_count();
    match count {
        Some(c) if c <= budget as u128 => Ok(net.outcomes()),
        _ => Err(OrderingError::BudgetExceeded { outcomes: count, budget }),
    }
}

fn rank_all<I: IntoIterator<Item = Outcome>>(ranker: &Ranker<'_>, outcomes: I) -> Vec<RankedOutcome> {
    outcomes
        .into_iter()
        .map(|o| RankedOutcome { rank: ranker.rank(&o), outcome: o, tie_broken: false })
        .collect()
}

/// Orders `subset` (or every outcome, if `None`) by descending rank. Only
/// members of the subset are ranked; enumerating all outcomes is refused when
/// there are more than `budget` of them.
pub fn consistent_order(
    ranker: &Ranker<'_>,
    subset: Option<&[Outcome]>,
    strict: bool,
    budget: usize,
) -> Result<ConsistentOrdering, OrderingError> {
    let net = ranker.net();
    let ranked = match subset {
        Some(list) => {
            for o in list {
                net.check_outcome(o)?;
            }
            rank_all(ranker, list.iter().cloned())
        }
        None => rank_all(ranker, enumerate_all(net, budget)?),
    };
    Ok(ConsistentOrdering::from_ranked(ranked, strict))
}

/// Orders the outcomes permitted by `constraints`. A predicate is evaluated
/// over every outcome, so it is subject to `budget`; an explicit list is not.
pub fn constrained_order(
    ranker: &Ranker<'_>,
    constraints: &ConstraintSet,
    strict: bool,
    budget: usize,
) -> Result<ConsistentOrdering, OrderingError> {
    let permitted: Vec<Outcome> = match constraints {
        ConstraintSet::Explicit(list) => list.clone(),
        ConstraintSet::Predicate(f) => enumerate_all(ranker.net(), budget)?.filter(|o| f(o)).collect(),
    };
    if permitted.is_empty() {
        return Err(OrderingError::EmptyConstraints);
    }
    consistent_order(ranker, Some(&permitted), strict, budget)
}
