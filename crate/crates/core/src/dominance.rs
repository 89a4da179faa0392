//! Dominance queries: does `N ⊨ o ≻ o′` hold?
//!
//! The search grows a tree rooted at `o′`. Each leaf is expanded into its
//! improving flips (and, in indifference mode, its indifferent flips);
//! outcomes already in the tree are never added again. The search answers
//! true as soon as `o` is added through a path with at least one improving
//! flip, and false once no leaves remain.
//!
//! Three pruning measures may be combined:
//!
//! - rank: a candidate `o*` is discarded when `r(o*) + L_D(o, o*) > r(o)`,
//!   because every outcome that can still reach `o` is at least that far
//!   below it. In indifference mode `o*` is discarded when
//!   `r_G(o*) > r_G(o)`, or when `r_G(o*) < r_G(o)` and
//!   `r_G(o*) + M_D(o*, o) > r_G(o)`.
//! - suffix: once a leaf agrees with `o` on every variable from some index
//!   onwards, flips of those variables are discarded.
//! - penalty: `o*` is discarded when `pen(o*) − pen(o) − HD(o*, o) < 0`.
//!
//! All measures are sound, so every combination returns the same answer.

use alloc::collections::{BTreeSet, BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::model::{CpNet, ModelError, Outcome, PreferenceMode, Value};
use crate::rank::Ranker;

/// A set of pruning measures.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Measures {
    pub rank: bool,
    pub penalty: bool,
    pub suffix: bool,
}

impl Measures {
    pub const NONE: Measures = Measures { rank: false, penalty: false, suffix: false };
    pub const RANK: Measures = Measures { rank: true, penalty: false, suffix: false };
    pub const PENALTY: Measures = Measures { rank: false, penalty: true, suffix: false };
    pub const SUFFIX: Measures = Measures { rank: false, penalty: false, suffix: true };
    pub const ALL: Measures = Measures { rank: true, penalty: true, suffix: true };

    /// All eight subsets, starting with the empty one.
    pub fn all_subsets() -> [Measures; 8] {
        core::array::from_fn(|i| Measures { rank: i & 1 != 0, penalty: i & 2 != 0, suffix: i & 4 != 0 })
    }

    /// The seven non-empty subsets.
    pub fn combinations() -> [Measures; 7] {
        core::array::from_fn(|i| Measures::all_subsets()[i + 1])
    }

    pub fn union(self, other: Measures) -> Measures {
        Measures {
            rank: self.rank || other.rank,
            penalty: self.penalty || other.penalty,
            suffix: self.suffix || other.suffix,
        }
    }

    pub fn is_subset_of(self, other: Measures) -> bool {
        (!self.rank || other.rank) && (!self.penalty || other.penalty) && (!self.suffix || other.suffix)
    }

    pub fn count(self) -> usize {
        self.rank as usize + self.penalty as usize + self.suffix as usize
    }
}

/// `rank+penalty+suffix` style, members in evaluation order; `none` for the empty set.
impl fmt::Display for Measures {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = [(self.rank, "rank"), (self.suffix, "suffix"), (self.penalty, "penalty")];
        let mut first = true;
        for (_, name) in names.iter().filter(|(on, _)| *on) {
            if !first {
                f.write_str("+")?;
            }
            f.write_str(name)?;
            first = false;
        }
        if first {
            f.write_str("none")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasuresParseError {
    pub token: alloc::string::String,
}

impl fmt::Display for MeasuresParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown pruning measure `{}` (expected rank, penalty, suffix or none)", self.token)
    }
}

impl core::error::Error for MeasuresParseError {}

/// Accepts members separated by `,` or `+`, or `none`.
impl FromStr for Measures {
    type Err = MeasuresParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut m = Measures::NONE;
        for token in s.split([',', '+']).map(str::trim) {
            match token {
                "rank" => m.rank = true,
                "penalty" => m.penalty = true,
                "suffix" => m.suffix = true,
                "none" | "" => {}
                other => return Err(MeasuresParseError { token: other.into() }),
            }
        }
        Ok(m)
    }
}

/// Which leaf is expanded next.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LeafStrategy {
    /// Oldest leaf first, so the tree grows layer by layer.
    #[default]
    Fifo,
    /// Highest-rank leaf first, oldest first among equal ranks.
    RankPriority,
}

impl fmt::Display for LeafStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeafStrategy::Fifo => "fifo",
            LeafStrategy::RankPriority => "rank-priority",
        })
    }
}

impl FromStr for LeafStrategy {
    type Err = MeasuresParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fifo" => Ok(LeafStrategy::Fifo),
            "rank-priority" => Ok(LeafStrategy::RankPriority),
            other => Err(MeasuresParseError { token: other.into() }),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PruningConfig {
    pub measures: Measures,
    pub leaf_strategy: LeafStrategy,
    pub mode: PreferenceMode,
}

impl PruningConfig {
    pub fn new(measures: Measures) -> Self {
        PruningConfig { measures, ..Default::default() }
    }

    pub fn with_strategy(self, leaf_strategy: LeafStrategy) -> Self {
        PruningConfig { leaf_strategy, ..self }
    }

    pub fn with_mode(self, mode: PreferenceMode) -> Self {
        PruningConfig { mode, ..self }
    }
}

/// Why a query was answered without adding any outcome to the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeroTraversalReason {
    EqualOutcomes,
    PenaltyInitial,
    RankInitial,
}

impl fmt::Display for ZeroTraversalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZeroTraversalReason::EqualOutcomes => "equal-outcomes",
            ZeroTraversalReason::PenaltyInitial => "penalty-initial",
            ZeroTraversalReason::RankInitial => "rank-initial",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DominanceError {
    InvalidOutcome(ModelError),
    /// Strict-mode search was requested on a net with tied CPT rows.
    TiesInStrictMode,
    /// Penalty pruning is only defined for strict CPTs.
    IndifferenceUnsupported,
}

impl fmt::Display for DominanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DominanceError::InvalidOutcome(e) => write!(f, "dominance: {e}"),
            DominanceError::TiesInStrictMode => {
                f.write_str("dominance: the net has indifferences; use indifference mode")
            }
            DominanceError::IndifferenceUnsupported => {
                f.write_str("dominance: penalty pruning is not defined in indifference mode")
            }
        }
    }
}

impl core::error::Error for DominanceError {}

impl From<ModelError> for DominanceError {
    fn from(e: ModelError) -> Self {
        DominanceError::InvalidOutcome(e)
    }
}

/// One node of the search tree. The root is `o′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchNode {
    pub outcome: Outcome,
    pub parent: Option<usize>,
    pub depth: usize,
    /// Whether the path from the root contains an improving flip.
    pub improved: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub answer: bool,
    /// Nodes added to the tree, root excluded.
    pub outcomes_traversed: usize,
    /// The flipping sequence from `o′` to `o`, both included, when `answer` is true.
    pub witness: Option<Vec<Outcome>>,
    pub zero_traversal_reason: Option<ZeroTraversalReason>,
    /// Every node in insertion order; empty when the query was settled
    /// before the root was created.
    pub tree: Vec<SearchNode>,
}

impl SearchResult {
    fn settled(answer: bool, reason: ZeroTraversalReason) -> Self {
        SearchResult {
            answer,
            outcomes_traversed: 0,
            witness: None,
            zero_traversal_reason: Some(reason),
            tree: Vec::new(),
        }
    }

    /// Outcomes added at `depth` (depth 1 holds the root's children).
    pub fn layer(&self, depth: usize) -> Vec<Outcome> {
        self.tree.iter().filter(|n| n.depth == depth).map(|n| n.outcome.clone()).collect()
    }

    /// Outcomes added to the tree, root excluded.
    pub fn traversed(&self) -> impl Iterator<Item = &Outcome> {
        self.tree.iter().skip(1).map(|n| &n.outcome)
    }
}

/// Penalty weights `w_X` and the evaluation `pen(o) = Σ w_X p_X`, where
/// `p_X` is the number of values strictly preferred to `o[X]` in the row
/// selected by `o`.
///
/// The weights follow `w_X = 1 + Σ_{Y ∈ Ch(X)} w_Y (n_Y − 1)`. With this
/// choice a single improving flip lowers `pen` by at least one, which is
/// what makes `f(o*) < 0` a sound reason to discard `o*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PenaltyTable {
    weights: Vec<BigInt>,
}

impl PenaltyTable {
    pub fn new(net: &CpNet) -> Result<Self, DominanceError> {
        if net.mode() == PreferenceMode::Indifference {
            return Err(DominanceError::IndifferenceUnsupported);
        }
        let n = net.variable_count();
        let mut weights = vec![BigInt::zero(); n];
        for x in (0..n).rev() {
            let below: BigInt = net
                .children(x)
                .iter()
                .map(|&y| &weights[y] * BigInt::from(net.domain_size(y) - 1))
                .sum();
            weights[x] = below + 1;
        }
        Ok(PenaltyTable { weights })
    }

    /// A table with caller-supplied weights.
    pub fn with_weights(weights: Vec<BigInt>) -> Self {
        PenaltyTable { weights }
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    pub fn penalty(&self, net: &CpNet, o: &Outcome) -> BigInt {
        (0..net.variable_count())
            .map(|x| &self.weights[x] * BigInt::from(net.position(x, o) - 1))
            .sum()
    }

    /// `f(o*) = pen(o*) − pen(target) − HD(o*, target)`.
    pub fn eval_f(&self, net: &CpNet, target: &Outcome, candidate: &Outcome) -> BigInt {
        self.penalty(net, candidate) - self.penalty(net, target) - BigInt::from(candidate.hamming_distance(target))
    }
}

/// `F(o)`: outcomes reachable by one improving flip, by variable then value.
pub fn improving_flips(net: &CpNet, o: &Outcome) -> Vec<Outcome> {
    flips(net, o, |candidate, current| candidate < current).map(|(_, f)| f).collect()
}

/// Outcomes reachable by one flip to a tied value.
pub fn indifferent_flips(net: &CpNet, o: &Outcome) -> Vec<Outcome> {
    flips(net, o, |candidate, current| candidate == current).map(|(_, f)| f).collect()
}

fn flips<'a, F>(net: &'a CpNet, o: &'a Outcome, keep: F) -> impl Iterator<Item = (usize, Outcome)> + 'a
where
    F: Fn(u16, u16) -> bool + Copy + 'a,
{
    (0..net.variable_count()).flat_map(move |var| {
        let positions = net.positions(var, net.row_index(var, o));
        let current_value = o.value(var);
        let current = positions[current_value as usize - 1];
        positions.iter().enumerate().filter_map(move |(i, &pos)| {
            let value = i as Value + 1;
            (value != current_value && keep(pos, current)).then(|| (var, o.with_value(var, value)))
        })
    })
}

/// Smallest `k` with `leaf[k..] == target[k..]` (0-based; `n` when the last
/// variables differ).
pub fn shared_suffix_start(leaf: &Outcome, target: &Outcome) -> usize {
    let n = leaf.len();
    (0..n).rev().find(|&i| leaf.value(i) != target.value(i)).map_or(0, |i| i + 1)
}

/// True iff `candidate` changes a variable inside the suffix `leaf` already
/// shares with `target`.
pub fn suffix_prunes(leaf: &Outcome, candidate: &Outcome, target: &Outcome) -> bool {
    let k = shared_suffix_start(leaf, target);
    (k..leaf.len()).any(|j| leaf.value(j) != candidate.value(j))
}

enum Frontier {
    Fifo(VecDeque<usize>),
    Ranked(BinaryHeap<(BigInt, Reverse<usize>)>),
}

impl Frontier {
    fn pop(&mut self) -> Option<usize> {
        match self {
            Frontier::Fifo(q) => q.pop_front(),
            Frontier::Ranked(h) => h.pop().map(|(_, Reverse(i))| i),
        }
    }
}

/// Answers dominance queries on one net. Immutable and `Sync`; distinct
/// queries may run concurrently.
#[derive(Clone, Debug)]
pub struct DominanceEngine<'a> {
    ranker: Ranker<'a>,
    penalty: Option<PenaltyTable>,
}

impl<'a> DominanceEngine<'a> {
    pub fn new(net: &'a CpNet) -> Self {
        Self::with_ranker(Ranker::new(net))
    }

    pub fn with_ranker(ranker: Ranker<'a>) -> Self {
        let penalty = PenaltyTable::new(ranker.net()).ok();
        DominanceEngine { ranker, penalty }
    }

    pub fn net(&self) -> &'a CpNet {
        self.ranker.net()
    }

    pub fn ranker(&self) -> &Ranker<'a> {
        &self.ranker
    }

    pub fn penalty_table(&self) -> Option<&PenaltyTable> {
        self.penalty.as_ref()
    }

    /// Decides `N ⊨ o ≻ o′` by growing a search tree from `o′`.
    pub fn dominates(
        &self,
        o: &Outcome,
        o_prime: &Outcome,
        config: &PruningConfig,
    ) -> Result<SearchResult, DominanceError> {
        let net = self.net();
        net.check_outcome(o)?;
        net.check_outcome(o_prime)?;
        let indifference = config.mode == PreferenceMode::Indifference;
        if !indifference && net.mode() == PreferenceMode::Indifference {
            return Err(DominanceError::TiesInStrictMode);
        }
        let penalty = match (config.measures.penalty, indifference) {
            (false, _) => None,
            (true, true) => return Err(DominanceError::IndifferenceUnsupported),
            (true, false) => Some(self.penalty.as_ref().ok_or(DominanceError::IndifferenceUnsupported)?),
        };

        if o == o_prime {
            return Ok(SearchResult::settled(false, ZeroTraversalReason::EqualOutcomes));
        }
        let target_rank = self.ranker.scaled_rank(o);
        let target_pen = penalty.map(|p| p.penalty(net, o));
        let f = |candidate: &Outcome| -> BigInt {
            penalty.expect("penalty enabled").penalty(net, candidate)
                - target_pen.as_ref().expect("penalty enabled")
                - BigInt::from(candidate.hamming_distance(o))
        };

        if penalty.is_some() && f(o_prime) < BigInt::zero() {
            return Ok(SearchResult::settled(false, ZeroTraversalReason::PenaltyInitial));
        }
        if config.measures.rank {
            let gap = &target_rank - self.ranker.scaled_rank(o_prime);
            let bound = if indifference {
                self.ranker.scaled_min_rank_difference(o, o_prime).expect("outcomes differ")
            } else {
                self.ranker.scaled_least_rank_difference(o, o_prime)
            };
            if gap < bound {
                return Ok(SearchResult::settled(false, ZeroTraversalReason::RankInitial));
            }
        }

        let rank_prunes = |candidate: &Outcome, candidate_rank: &BigInt| -> bool {
            if indifference {
                match candidate_rank.cmp(&target_rank) {
                    core::cmp::Ordering::Greater => true,
                    core::cmp::Ordering::Equal => false,
                    core::cmp::Ordering::Less => {
                        let m = self.ranker.scaled_min_rank_difference(candidate, o).expect("outcomes differ");
                        candidate_rank + m > target_rank
                    }
                }
            } else {
                candidate_rank + self.ranker.scaled_least_rank_difference(o, candidate) > target_rank
            }
        };
        let need_rank = config.measures.rank || config.leaf_strategy == LeafStrategy::RankPriority;

        let mut tree = vec![SearchNode { outcome: o_prime.clone(), parent: None, depth: 0, improved: false }];
        let mut visited: BTreeSet<(Outcome, bool)> = BTreeSet::new();
        visited.insert((o_prime.clone(), false));
        let mut frontier = match config.leaf_strategy {
            LeafStrategy::Fifo => Frontier::Fifo(VecDeque::from([0])),
            LeafStrategy::RankPriority => {
                Frontier::Ranked(BinaryHeap::from([(self.ranker.scaled_rank(o_prime), Reverse(0))]))
            }
        };

        while let Some(leaf_idx) = frontier.pop() {
            let leaf = tree[leaf_idx].outcome.clone();
            let leaf_improved = tree[leaf_idx].improved;
            let depth = tree[leaf_idx].depth + 1;
            let suffix_start = shared_suffix_start(&leaf, o);
            let indifferent = if indifference {
                flips(net, &leaf, |c, cur| c == cur).map(|(v, f)| (v, f, leaf_improved)).collect()
            } else {
                Vec::new()
            };
            let improving = flips(net, &leaf, |c, cur| c < cur).map(|(v, f)| (v, f, true));
            let mut candidates: Vec<(usize, Outcome, bool)> = improving.chain(indifferent).collect();
            candidates.sort_by_key(|(var, c, _)| (*var, c.value(*var)));

            for (var, candidate, improved) in candidates {
                if visited.contains(&(candidate.clone(), improved)) {
                    continue;
                }
                let candidate_rank = if need_rank { self.ranker.scaled_rank(&candidate) } else { BigInt::zero() };
                if config.measures.rank && rank_prunes(&candidate, &candidate_rank) {
                    continue;
                }
                if config.measures.suffix && var >= suffix_start {
                    continue;
                }
                if penalty.is_some() && f(&candidate) < BigInt::zero() {
                    continue;
                }
                visited.insert((candidate.clone(), improved));
                let idx = tree.len();
                let reached = candidate == *o;
                tree.push(SearchNode { outcome: candidate, parent: Some(leaf_idx), depth, improved });
                if reached {
                    if improved {
                        let witness = path_to(&tree, idx);
                        return Ok(SearchResult {
                            answer: true,
                            outcomes_traversed: tree.len() - 1,
                            witness: Some(witness),
                            zero_traversal_reason: None,
                            tree,
                        });
                    }
                    // Only indifferent flips lead here, so o ∼ o′.
                    continue;
                }
                match &mut frontier {
                    Frontier::Fifo(q) => q.push_back(idx),
                    Frontier::Ranked(h) => h.push((candidate_rank, Reverse(idx))),
                }
            }
        }
        Ok(SearchResult {
            answer: false,
            outcomes_traversed: tree.len() - 1,
            witness: None,
            zero_traversal_reason: None,
            tree,
        })
    }

    /// Decides whether `o` and `o′` are joined by indifferent flips alone.
    /// Outcomes of different generalised rank are never indifferent, so that
    /// case returns false without searching.
    pub fn indifference_query(&self, o: &Outcome, o_prime: &Outcome) -> Result<bool, DominanceError> {
        let net = self.net();
        net.check_outcome(o)?;
        net.check_outcome(o_prime)?;
        if o == o_prime {
            return Ok(true);
        }
        if self.ranker.scaled_rank(o) != self.ranker.scaled_rank(o_prime) {
            return Ok(false);
        }
        let mut visited = BTreeSet::from([o_prime.clone()]);
        let mut queue = VecDeque::from([o_prime.clone()]);
        while let Some(leaf) = queue.pop_front() {
            for candidate in indifferent_flips(net, &leaf) {
                if candidate == *o {
                    return Ok(true);
                }
                if visited.insert(candidate.clone()) {
                    queue.push_back(candidate);
                }
            }
        }
        Ok(false)
    }
}

fn path_to(tree: &[SearchNode], mut idx: usize) -> Vec<Outcome> {
    let mut path = vec![tree[idx].outcome.clone()];
    while let Some(parent) = tree[idx].parent {
        path.push(tree[parent].outcome.clone());
        idx = parent;
    }
    path.reverse();
    path
}

/// Checks that consecutive outcomes of `witness` differ in one variable and
/// that each step is an improving flip, or, when `allow_indifferent`, an
/// indifferent one; at least one step must improve.
pub fn validate_witness(net: &CpNet, witness: &[Outcome], allow_indifferent: bool) -> bool {
    let mut improved = false;
    for pair in witness.windows(2) {
        let (from, to) = (&pair[0], &pair[1]);
        let changed: Vec<usize> = from.differing_variables(to).collect();
        if changed.len() != 1 {
            return false;
        }
        let var = changed[0];
        let positions = net.positions(var, net.row_index(var, from));
        let (old, new) = (positions[from.value(var) as usize - 1], positions[to.value(var) as usize - 1]);
        if new < old {
            improved = true;
        } else if !(allow_indifferent && new == old) {
            return false;
        }
    }
    improved
}

/// Weighted sum helper kept for callers that want `pen` without an engine.
pub fn penalty(net: &CpNet, o: &Outcome) -> Result<BigInt, DominanceError> {
    Ok(PenaltyTable::new(net)?.penalty(net, o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, outcome};
    use crate::model::{CptRow, RawNet};
    use alloc::string::ToString;
    use num_traits::One;

    fn sorted(mut v: Vec<Outcome>) -> Vec<Outcome> {
        v.sort();
        v
    }

    fn chain_with_flip() -> CpNet {
        // X → Y; x ≻ x̄; y ≻ ȳ under x, ȳ ≻ y under x̄.
        let raw = RawNet {
            domain_sizes: vec![2, 2],
            adjacency: vec![vec![false, true], vec![false, false]],
            cpts: vec![
                vec![CptRow { parents: vec![], positions: vec![1, 2] }],
                vec![
                    CptRow { parents: vec![1], positions: vec![1, 2] },
                    CptRow { parents: vec![2], positions: vec![2, 1] },
                ],
            ],
        };
        CpNet::new(raw, PreferenceMode::Strict).unwrap()
    }

    #[test]
    fn example_flip_sets() {
        let net = fixtures::example_net();
        assert_eq!(
            sorted(improving_flips(&net, &outcome(&[2, 1, 2, 2]))),
            sorted(vec![outcome(&[1, 1, 2, 2]), outcome(&[2, 1, 1, 2]), outcome(&[2, 1, 3, 2])])
        );
        assert_eq!(
            sorted(improving_flips(&net, &outcome(&[2, 1, 1, 1]))),
            sorted(vec![outcome(&[1, 1, 1, 1]), outcome(&[2, 1, 3, 1])])
        );
        assert!(improving_flips(&net, &outcome(&[1, 1, 1, 1])).is_empty());
        assert!(indifferent_flips(&net, &outcome(&[2, 1, 2, 2])).is_empty());
    }

    #[test]
    fn tied_flips() {
        let net = fixtures::tied_row_net();
        assert_eq!(indifferent_flips(&net, &outcome(&[6])), vec![outcome(&[7])]);
        assert_eq!(indifferent_flips(&net, &outcome(&[2])), vec![outcome(&[3]), outcome(&[4])]);
        assert_eq!(improving_flips(&net, &outcome(&[3])), vec![outcome(&[1])]);
    }

    #[test]
    fn example_rank_pruned_trace() {
        let net = fixtures::example_net();
        let engine = DominanceEngine::new(&net);
        let (o, o_prime) = (outcome(&[2, 1, 3, 1]), outcome(&[2, 1, 2, 2]));
        let r = engine.dominates(&o, &o_prime, &PruningConfig::new(Measures::RANK)).unwrap();
        assert!(r.answer);
        assert_eq!(r.layer(1), vec![outcome(&[2, 1, 1, 2])]);
        assert_eq!(r.layer(2), vec![outcome(&[2, 1, 1, 1])]);
        assert_eq!(r.outcomes_traversed, 3);
        assert_eq!(
            r.witness.unwrap(),
            vec![o_prime.clone(), outcome(&[2, 1, 1, 2]), outcome(&[2, 1, 1, 1]), o.clone()]
        );
    }

    #[test]
    fn initial_conditions() {
        let net = fixtures::example_net();
        let engine = DominanceEngine::new(&net);
        let o = outcome(&[2, 2, 1, 1]);
        let r = engine.dominates(&o, &o, &PruningConfig::new(Measures::ALL)).unwrap();
        assert_eq!((r.answer, r.outcomes_traversed), (false, 0));
        assert_eq!(r.zero_traversal_reason, Some(ZeroTraversalReason::EqualOutcomes));
        let r = engine.dominates(&o, &outcome(&[1, 1, 2, 2]), &PruningConfig::new(Measures::RANK)).unwrap();
        assert_eq!(r.zero_traversal_reason, Some(ZeroTraversalReason::RankInitial));
        assert_eq!((r.answer, r.outcomes_traversed), (false, 0));
        let r = engine.dominates(&o, &outcome(&[1, 1, 2, 2]), &PruningConfig::new(Measures::PENALTY)).unwrap();
        assert_eq!(r.zero_traversal_reason, Some(ZeroTraversalReason::PenaltyInitial));
    }

    #[test]
    fn example_penalties() {
        let net = fixtures::example_net();
        let table = PenaltyTable::new(&net).unwrap();
        let w: Vec<BigInt> = [5, 5, 2, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(table.weights(), &w[..]);
        assert_eq!(table.penalty(&net, &outcome(&[1, 1, 1, 1])), BigInt::zero());
        assert_eq!(table.penalty(&net, &outcome(&[2, 2, 1, 2])), BigInt::from(15));
        let o = outcome(&[2, 1, 3, 1]);
        assert_eq!(table.eval_f(&net, &o, &o), BigInt::zero());
        assert_eq!(penalty(&fixtures::tied_row_net(), &outcome(&[1])), Err(DominanceError::IndifferenceUnsupported));
    }

    #[test]
    fn weights_without_offset_prune_a_true_query() {
        let net = chain_with_flip();
        let (best, worst) = (outcome(&[1, 1]), outcome(&[2, 2]));
        let engine = DominanceEngine::new(&net);
        let r = engine.dominates(&best, &worst, &PruningConfig::new(Measures::PENALTY)).unwrap();
        assert!(r.answer);
        // w_X = Σ w_Y (n_Y − 1) with sinks at 1 gives (1, 1): f(x̄ȳ) = 1 − 0 − 2.
        let plain = PenaltyTable::with_weights(vec![BigInt::one(), BigInt::one()]);
        assert_eq!(plain.eval_f(&net, &best, &worst), BigInt::from(-1));
    }

    #[test]
    fn suffix_rule() {
        let t = outcome(&[1, 1, 1]);
        assert_eq!(shared_suffix_start(&t, &t), 0);
        assert!(suffix_prunes(&t, &outcome(&[2, 1, 1]), &t));
        let leaf = outcome(&[2, 2, 1]);
        assert!(suffix_prunes(&leaf, &outcome(&[2, 2, 2]), &t));
        assert!(!suffix_prunes(&leaf, &outcome(&[2, 1, 1]), &t));
        let apart = outcome(&[1, 1, 2]);
        assert_eq!(shared_suffix_start(&apart, &t), 3);
        assert!(!suffix_prunes(&apart, &outcome(&[2, 1, 2]), &t));
    }

    #[test]
    fn mode_and_measure_checks() {
        let net = fixtures::tied_row_net();
        let engine = DominanceEngine::new(&net);
        let (o, p) = (outcome(&[1]), outcome(&[3]));
        assert_eq!(engine.dominates(&o, &p, &PruningConfig::new(Measures::NONE)), Err(DominanceError::TiesInStrictMode));
        let ind = PruningConfig::new(Measures::PENALTY).with_mode(PreferenceMode::Indifference);
        assert_eq!(engine.dominates(&o, &p, &ind), Err(DominanceError::IndifferenceUnsupported));
        let ind = PruningConfig::new(Measures::RANK).with_mode(PreferenceMode::Indifference);
        assert!(engine.dominates(&o, &p, &ind).unwrap().answer);
        assert!(!engine.dominates(&outcome(&[2]), &p, &ind).unwrap().answer);
    }

    #[test]
    fn indifference_queries() {
        let net = fixtures::tied_row_net();
        let engine = DominanceEngine::new(&net);
        assert!(engine.indifference_query(&outcome(&[2]), &outcome(&[4])).unwrap());
        assert!(engine.indifference_query(&outcome(&[5]), &outcome(&[5])).unwrap());
        assert!(!engine.indifference_query(&outcome(&[1]), &outcome(&[2])).unwrap());
        let strict = fixtures::example_net();
        let engine = DominanceEngine::new(&strict);
        assert!(!engine.indifference_query(&outcome(&[1, 2, 2, 2]), &outcome(&[2, 1, 3, 2])).unwrap());
    }

    #[test]
    fn measure_labels() {
        assert_eq!(Measures::ALL.to_string(), "rank+suffix+penalty");
        assert_eq!(Measures::NONE.to_string(), "none");
        assert_eq!("rank,penalty".parse::<Measures>().unwrap(), Measures { rank: true, penalty: true, suffix: false });
        assert!("speed".parse::<Measures>().is_err());
        assert_eq!(Measures::combinations().len(), 7);
    }

    #[test]
    fn witnesses_validate() {
        let net = fixtures::example_net();
        assert!(validate_witness(&net, &[outcome(&[2, 1, 2, 2]), outcome(&[2, 1, 1, 2])], false));
        assert!(!validate_witness(&net, &[outcome(&[2, 1, 1, 2]), outcome(&[2, 1, 2, 2])], false));
        assert!(!validate_witness(&net, &[outcome(&[2, 1, 2, 2])], false));
    }
}
