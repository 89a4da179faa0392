//! Explicit preference graph over all outcomes, used as ground truth.
//!
//! Nodes are indexed in the order of [`CpNet::outcomes`]. A directed edge
//! `u → v` means `v` is obtained from `u` by a single improving flip; an
//! undirected edge joins outcomes related by an indifferent flip. Only small
//! nets are supported: construction refuses nets with more outcomes than the
//! given budget.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{CpNet, Outcome};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// The net has more outcomes than the enumeration budget allows.
    BudgetExceeded { outcomes: Option<u128>, budget: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::BudgetExceeded { outcomes: Some(count), budget } => {
                write!(f, "oracle: net has {count} outcomes, budget is {budget}")
            }
            OracleError::BudgetExceeded { outcomes: None, budget } => {
                write!(f, "oracle: outcome count overflows, budget is {budget}")
            }
        }
    }
}

impl core::error::Error for OracleError {}

/// How two outcomes are related by the net.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entailment {
    /// The two outcomes are the same.
    Equal,
    /// `N ⊨ o ≻ o′`: a path from `o′` to `o` using at least one directed edge.
    StrictlyPreferred,
    /// `N ⊨ o′ ≻ o`.
    Reverse,
    /// A path of indifferent flips only joins the two outcomes.
    Indifferent,
    Incomparable,
}

impl fmt::Display for Entailment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entailment::Equal => "equal",
            Entailment::StrictlyPreferred => "strictly-preferred",
            Entailment::Reverse => "reverse",
            Entailment::Indifferent => "indifferent",
            Entailment::Incomparable => "incomparable",
        })
    }
}

/// An entailed pair found in the wrong order: `better` is entailed over
/// `worse` but was placed after it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingViolation {
    pub better: Outcome,
    pub worse: Outcome,
    pub better_position: usize,
    pub worse_position: usize,
}

#[derive(Clone, Debug)]
pub struct PreferenceGraph<'a> {
    net: &'a CpNet,
    improving: Vec<Vec<u32>>,
    indifferent: Vec<Vec<u32>>,
    /// Nodes outside a constraint set; they have no edges.
    excluded: Option<Vec<bool>>,
}

impl<'a> PreferenceGraph<'a> {
    pub fn build(net: &'a CpNet, budget: usize) -> Result<Self, OracleError> {
        let count = net.outcome_count();
        let size = match count {
            Some(c) if c <= budget as u128 => c as usize,
            _ => return Err(OracleError::BudgetExceeded { outcomes: count, budget }),
        };
        let mut improving = vec![Vec::new(); size];
        let mut indifferent = vec![Vec::new(); size];
        for (idx, o) in net.outcomes().enumerate() {
            for var in 0..net.variable_count() {
                let positions = net.positions(var, net.row_index(var, &o));
                let current = positions[o.value(var) as usize - 1];
                for (w, &pos) in positions.iter().enumerate() {
                    let w = w as u16 + 1;
                    if w == o.value(var) {
                        continue;
                    }
                    let target = net.outcome_index(&o.with_value(var, w)) as u32;
                    if pos < current {
                        improving[idx].push(target);
                    } else if pos == current {
                        indifferent[idx].push(target);
                    }
                }
            }
        }
        Ok(PreferenceGraph { net, improving, indifferent, excluded: None })
    }

    /// The induced subgraph on the outcomes satisfying `permitted`.
    pub fn restricted<F: Fn(&Outcome) -> bool>(&self, permitted: F) -> Self {
        let keep: Vec<bool> = self.net.outcomes().map(|o| permitted(&o)).collect();
        let filter = |edges: &Vec<Vec<u32>>| -> Vec<Vec<u32>> {
            edges
                .iter()
                .enumerate()
                .map(|(u, out)| {
                    if keep[u] {
                        out.iter().copied().filter(|&v| keep[v as usize]).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect()
        };
        PreferenceGraph {
            net: self.net,
            improving: filter(&self.improving),
            indifferent: filter(&self.indifferent),
            excluded: Some(keep.iter().map(|k| !k).collect()),
        }
    }

    pub fn net(&self) -> &'a CpNet {
        self.net
    }

    pub fn node_count(&self) -> usize {
        self.improving.len()
    }

    pub fn contains(&self, o: &Outcome) -> bool {
        let idx = self.net.outcome_index(o);
        idx < self.node_count() && !self.excluded.as_ref().is_some_and(|e| e[idx])
    }

    /// Outcomes reachable from `o` by one improving flip.
    pub fn improving_neighbours(&self, o: &Outcome) -> Vec<Outcome> {
        self.improving[self.net.outcome_index(o)].iter().map(|&v| self.net.outcome_at(v as usize)).collect()
    }

    /// Outcomes reachable from `o` by one indifferent flip.
    pub fn indifferent_neighbours(&self, o: &Outcome) -> Vec<Outcome> {
        self.indifferent[self.net.outcome_index(o)].iter().map(|&v| self.net.outcome_at(v as usize)).collect()
    }

    pub fn directed_edge_count(&self) -> usize {
        self.improving.iter().map(Vec::len).sum()
    }

    pub fn undirected_edge_count(&self) -> usize {
        self.indifferent.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// For every node, the pair of flags (reachable by indifferent edges
    /// only, reachable using at least one directed edge), starting at `from`.
    fn reach(&self, from: usize) -> (Vec<bool>, Vec<bool>) {
        let n = self.node_count();
        let mut plain = vec![false; n];
        let mut strict = vec![false; n];
        let mut queue = VecDeque::new();
        plain[from] = true;
        queue.push_back((from, false));
        while let Some((u, used)) = queue.pop_front() {
            for &v in &self.improving[u] {
                let v = v as usize;
                if !strict[v] {
                    strict[v] = true;
                    queue.push_back((v, true));
                }
            }
            for &v in &self.indifferent[u] {
                let v = v as usize;
                let seen = if used { &mut strict[v] } else { &mut plain[v] };
                if !*seen {
                    *seen = true;
                    queue.push_back((v, used));
                }
            }
        }
        (plain, strict)
    }

    /// Outcomes `o` with `N ⊨ o ≻ from`, as a membership vector over node indices.
    pub fn strictly_better_than(&self, from: &Outcome) -> Vec<bool> {
        self.reach(self.net.outcome_index(from)).1
    }

    /// Classifies the pair `(o, o′)`.
    pub fn entails(&self, o: &Outcome, o_prime: &Outcome) -> Entailment {
        if o == o_prime {
            return Entailment::Equal;
        }
        let (i, j) = (self.net.outcome_index(o), self.net.outcome_index(o_prime));
        let (plain, strict) = self.reach(j);
        if strict[i] {
            return Entailment::StrictlyPreferred;
        }
        let (_, back) = self.reach(i);
        if back[j] {
            Entailment::Reverse
        } else if plain[i] {
            Entailment::Indifferent
        } else {
            Entailment::Incomparable
        }
    }

    /// True iff no outcome is strictly preferred to itself. Holds for every
    /// valid acyclic net.
    pub fn is_consistent(&self) -> bool {
        let n = self.node_count();
        // Collapse indifference classes, then look for a directed cycle
        // between classes or a directed edge inside one.
        let mut class = vec![usize::MAX; n];
        let mut classes = 0;
        for start in 0..n {
            if class[start] != usize::MAX {
                continue;
            }
            class[start] = classes;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &v in &self.indifferent[u] {
                    if class[v as usize] == usize::MAX {
                        class[v as usize] = classes;
                        stack.push(v as usize);
                    }
                }
            }
            classes += 1;
        }
        let mut out = vec![Vec::new(); classes];
        let mut indegree = vec![0usize; classes];
        for u in 0..n {
            for &v in &self.improving[u] {
                let (a, b) = (class[u], class[v as usize]);
                if a == b {
                    return false;
                }
                out[a].push(b);
                indegree[b] += 1;
            }
        }
        let mut ready: Vec<usize> = (0..classes).filter(|&c| indegree[c] == 0).collect();
        let mut done = 0;
        while let Some(c) = ready.pop() {
            done += 1;
            for &d in &out[c] {
                indegree[d] -= 1;
                if indegree[d] == 0 {
                    ready.push(d);
                }
            }
        }
        done == classes
    }

    /// Checks that `ordering` (most preferred first) never places an outcome
    /// before one entailed to be strictly better.
    pub fn verify_consistent_ordering(&self, ordering: &[Outcome]) -> Result<(), OrderingViolation> {
        let mut position = vec![usize::MAX; self.node_count()];
        for (p, o) in ordering.iter().enumerate() {
            position[self.net.outcome_index(o)] = p;
        }
        for (p, o) in ordering.iter().enumerate() {
            let better = self.strictly_better_than(o);
            if let Some(q) = (0..self.node_count())
                .filter(|&v| better[v] && position[v] != usize::MAX && position[v] > p)
                .map(|v| position[v])
                .min()
            {
                return Err(OrderingViolation {
                    better: ordering[q].clone(),
                    worse: o.clone(),
                    better_position: q,
                    worse_position: p,
                });
            }
        }
        Ok(())
    }
}
