//! Outcome ranks and the rank-difference bounds used for pruning.
//!
//! The weight of variable `X` taking value `x` under parent assignment `u` is
//! `AF_X · (d_X + 1) · P_P{X = x | u}`, where `AF_X` is the product of
//! `1/|Dom(Y)|` over the ancestors `Y` of `X`, `d_X` counts the directed paths
//! leaving `X`, and `P_P = ((n - ℓ) - k + 1) / (n - ℓ)` for a value in
//! preference position `k` of a row with `ℓ` positions absorbed by ties. The
//! rank of an outcome is the sum of its variables' weights.
//!
//! All arithmetic is exact. [`Ranker`] scales every weight by one common
//! denominator so that ranks and bounds are compared as big integers.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::model::{CpNet, Outcome, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankError {
    VariableOutOfRange { variable: usize, variables: usize },
    MissingRow { variable: usize, parents: Vec<Value> },
    ValueOutOfRange { variable: usize, value: Value },
    /// `M_D` is undefined for identical outcomes.
    EqualOutcomes,
}

impl fmt::Display for RankError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankError::VariableOutOfRange { variable, variables } => {
                write!(f, "variable {} out of range 1..={variables}", variable + 1)
            }
            RankError::MissingRow { variable, parents } => {
                write!(f, "CPT of variable {} has no row for parent assignment {:?}", variable + 1, parents)
            }
            RankError::ValueOutOfRange { variable, value } => {
                write!(f, "value {value} is not in the domain of variable {}", variable + 1)
            }
            RankError::EqualOutcomes => f.write_str("EqualOutcomes: outcomes do not differ on any variable"),
        }
    }
}

impl core::error::Error for RankError {}

/// An exact, reduced, positive rational rank.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(BigRational);

impl Rank {
    pub fn new(value: BigRational) -> Self {
        Rank(value)
    }

    /// `numer / denom`, reduced.
    pub fn from_fraction(numer: i64, denom: i64) -> Self {
        Rank(BigRational::new(numer.into(), denom.into()))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Nearest `f64`; for display only.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.0)
    }
}

impl fmt::Display for Rank {
    /// Always `p/q`, even when `q = 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Shift both sides down until they fit.
            let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

fn check_var(net: &CpNet, var: usize) -> Result<(), RankError> {
    if var < net.variable_count() {
        Ok(())
    } else {
        Err(RankError::VariableOutOfRange { variable: var, variables: net.variable_count() })
    }
}

/// `Anc(X_var)` by accumulating `A^k` applied to column `var` of the
/// adjacency matrix until the vector vanishes.
///
/// Entries count paths, saturating at `u64::MAX`; only non-zero-ness is read.
pub fn ancestors(net: &CpNet, var: usize) -> Result<Vec<usize>, RankError> {
    check_var(net, var)?;
    let a = net.adjacency();
    let n = net.variable_count();
    let mut acc = vec![0u64; n];
    let mut col: Vec<u64> = (0..n).map(|j| a[j][var] as u64).collect();
    while col.iter().any(|&c| c > 0) {
        for (acc_j, c) in acc.iter_mut().zip(&col) {
            *acc_j = acc_j.saturating_add(*c);
        }
        col = (0..n)
            .map(|j| (0..n).filter(|&k| a[j][k]).fold(0u64, |s, k| s.saturating_add(col[k])))
            .collect();
    }
    Ok((0..n).filter(|&j| acc[j] != 0).collect())
}

/// `d_X`: the number of directed paths of any length leaving `X_var`, by
/// summing row `var` of `A^k` for `k = 1, 2, …`.
pub fn descendent_paths(net: &CpNet, var: usize) -> Result<BigUint, RankError> {
    check_var(net, var)?;
    let a = net.adjacency();
    let n = net.variable_count();
    let mut row: Vec<BigUint> = (0..n).map(|j| BigUint::from(a[var][j] as u8)).collect();
    let mut d = BigUint::zero();
    loop {
        let sum: BigUint = row.iter().sum();
        if sum.is_zero() {
            return Ok(d);
        }
        d += sum;
        row = (0..n)
            .map(|j| (0..n).filter(|&k| a[k][j]).map(|k| &row[k]).sum())
            .collect();
    }
}

/// Per-variable structural quantities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableStats {
    pub ancestors: Vec<Vec<usize>>,
    pub descendent_paths: Vec<BigUint>,
    pub ancestral_factor: Vec<BigRational>,
}

impl VariableStats {
    /// One pass over the DAG: `Anc(X)` is the union over parents `P` of
    /// `{P} ∪ Anc(P)`, and `d_X = Σ_{Y ∈ Ch(X)} (d_Y + 1)`.
    pub fn new(net: &CpNet) -> Self {
        let n = net.variable_count();
        let mut member = vec![vec![false; n]; n];
        for x in 0..n {
            for &p in net.parents(x) {
                member[x][p] = true;
                let (head, tail) = member.split_at_mut(x);
                for (slot, &m) in tail[0].iter_mut().zip(&head[p]) {
                    *slot |= m;
                }
            }
        }
        let ancestors: Vec<Vec<usize>> =
            member.iter().map(|row| (0..n).filter(|&j| row[j]).collect()).collect();

        let mut descendent_paths = vec![BigUint::zero(); n];
        for x in (0..n).rev() {
            let d: BigUint = net.children(x).iter().map(|&c| &descendent_paths[c] + 1u32).sum();
            descendent_paths[x] = d;
        }
        Self::assemble(net, ancestors, descendent_paths)
    }

    /// Same quantities via the matrix-power procedures [`ancestors`] and
    /// [`descendent_paths`].
    pub fn by_matrix(net: &CpNet) -> Self {
        let n = net.variable_count();
        let ancestors = (0..n).map(|x| ancestors(net, x).expect("in range")).collect();
        let paths = (0..n).map(|x| descendent_paths(net, x).expect("in range")).collect();
        Self::assemble(net, ancestors, paths)
    }

    fn assemble(net: &CpNet, ancestors: Vec<Vec<usize>>, descendent_paths: Vec<BigUint>) -> Self {
        let ancestral_factor = ancestors
            .iter()
            .map(|anc| {
                let denom: BigInt = anc.iter().map(|&y| BigInt::from(net.domain_size(y))).product();
                BigRational::new(BigInt::one(), denom)
            })
            .collect();
        VariableStats { ancestors, descendent_paths, ancestral_factor }
    }
}

/// `P_P` for a value whose row has the given positions:
/// `((n - ℓ) - k + 1) / (n - ℓ)` with `k = positions[value - 1]`.
pub fn preference_position_in_row(positions: &[u16], value: Value) -> BigRational {
    let levels = positions.iter().copied().max().unwrap_or(1) as i64;
    let k = positions[value as usize - 1] as i64;
    BigRational::new((levels - k + 1).into(), levels.into())
}

/// `P_P{X_var = value | Pa(X_var) = parents}`.
pub fn preference_position(
    net: &CpNet,
    var: usize,
    value: Value,
    parents: &[Value],
) -> Result<BigRational, RankError> {
    check_var(net, var)?;
    if value == 0 || value > net.domain_size(var) {
        return Err(RankError::ValueOutOfRange { variable: var, value });
    }
    let row = net
        .row_index_for(var, parents)
        .ok_or_else(|| RankError::MissingRow { variable: var, parents: parents.to_vec() })?;
    Ok(preference_position_in_row(net.positions(var, row), value))
}

/// Rank computed term by term in rationals, recomputing ancestor sets and
/// path counts per variable with the matrix procedures. Slow; kept as an
/// independent route for checking [`Ranker::rank`].
pub fn rank_reference(net: &CpNet, o: &Outcome) -> Rank {
    let mut total = BigRational::zero();
    for var in 0..net.variable_count() {
        let anc = ancestors(net, var).expect("in range");
        let af = anc
            .iter()
            .fold(BigRational::one(), |acc, &y| acc / BigRational::from_integer(net.domain_size(y).into()));
        let d = descendent_paths(net, var).expect("in range");
        let parents: Vec<Value> = net.parents(var).iter().map(|&p| o.value(p)).collect();
        let pp = preference_position(net, var, o.value(var), &parents).expect("valid outcome");
        total += af * BigRational::from_integer(BigInt::from(d) + 1) * pp;
    }
    Rank(total)
}

/// `L(X)` for every variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeastRankTable {
    values: Vec<BigRational>,
}

impl LeastRankTable {
    pub fn get(&self, var: usize) -> &BigRational {
        &self.values[var]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }
}

/// Rank evaluator for one net, holding the cached structural statistics.
///
/// Every weight is stored multiplied by a common denominator `D`, chosen so
/// that all weights and all `L(X)` become integers. `Ranker` is immutable and
/// `Sync`.
#[derive(Clone, Debug)]
pub struct Ranker<'a> {
    net: &'a CpNet,
    stats: VariableStats,
    scale: BigInt,
    /// `per_level[X][m - 1] = D · AF_X · (d_X + 1) / m`.
    per_level: Vec<Vec<BigInt>>,
    /// `D · L(X)`.
    least: Vec<BigInt>,
    least_table: LeastRankTable,
}

impl<'a> Ranker<'a> {
    pub fn new(net: &'a CpNet) -> Self {
        Self::with_stats(net, VariableStats::new(net))
    }

    pub fn with_stats(net: &'a CpNet, stats: VariableStats) -> Self {
        let n = net.variable_count();
        let mut scale = BigInt::one();
        for var in 0..n {
            let levels_lcm = (1..=net.domain_size(var) as u64).fold(1u64, |acc, m| acc.lcm(&m));
            let term = stats.ancestral_factor[var].denom() * BigInt::from(levels_lcm);
            scale = scale.lcm(&term);
        }
        let per_level: Vec<Vec<BigInt>> = (0..n)
            .map(|var| {
                let paths = BigInt::from(stats.descendent_paths[var].clone()) + 1;
                let unit: BigInt = &scale / stats.ancestral_factor[var].denom() * paths;
                (1..=net.domain_size(var) as u32)
                    .map(|m| {
                        let (q, r) = unit.div_rem(&BigInt::from(m));
                        debug_assert!(r.is_zero());
                        q
                    })
                    .collect()
            })
            .collect();
        let least: Vec<BigInt> = (0..n)
            .map(|x| {
                let gain = per_level[x][net.domain_size(x) as usize - 1].clone();
                net.children(x).iter().fold(gain, |acc, &y| {
                    let n_y = net.domain_size(y) as usize;
                    acc - &per_level[y][n_y - 1] * BigInt::from(n_y - 1)
                })
            })
            .collect();
        let least_table =
            LeastRankTable { values: least.iter().map(|l| BigRational::new(l.clone(), scale.clone())).collect() };
        Ranker { net, stats, scale, per_level, least, least_table }
    }

    pub fn net(&self) -> &'a CpNet {
        self.net
    }

    pub fn stats(&self) -> &VariableStats {
        &self.stats
    }

    /// The common denominator `D`.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// `D · r(o)`. `o` must be a valid outcome of the net.
    pub fn scaled_rank(&self, o: &Outcome) -> BigInt {
        let mut total = BigInt::zero();
        for var in 0..self.net.variable_count() {
            let row = self.net.row_index(var, o);
            let m = self.net.levels(var, row);
            let k = self.net.positions(var, row)[o.value(var) as usize - 1];
            total += &self.per_level[var][m as usize - 1] * BigInt::from(m - k + 1);
        }
        total
    }

    /// `r(o)`, or the generalised rank `r_G(o)` when the net has ties.
    pub fn rank(&self, o: &Outcome) -> Rank {
        Rank(BigRational::new(self.scaled_rank(o), self.scale.clone()))
    }

    /// Largest attainable rank, `Σ_X AF_X (d_X + 1)`.
    pub fn max_rank(&self) -> Rank {
        let total: BigInt = (0..self.net.variable_count()).map(|v| &self.per_level[v][0]).sum();
        Rank(BigRational::new(total, self.scale.clone()))
    }

    /// `L(X) = AF_X (d_X + 1) / n_X − Σ_{Y ∈ Ch(X)} AF_Y (d_Y + 1) (n_Y − 1) / n_Y`.
    pub fn least_rank_improvement(&self) -> &LeastRankTable {
        &self.least_table
    }

    /// `D · L(X)`.
    pub fn scaled_least_improvement(&self, var: usize) -> &BigInt {
        &self.least[var]
    }

    /// `D · L_D(o1, o2)`.
    pub fn scaled_least_rank_difference(&self, o1: &Outcome, o2: &Outcome) -> BigInt {
        o1.differing_variables(o2).map(|x| &self.least[x]).sum()
    }

    /// `L_D(o1, o2) = Σ_{X ∈ D} L(X)` over the variables where the outcomes differ.
    pub fn least_rank_difference(&self, o1: &Outcome, o2: &Outcome) -> BigRational {
        BigRational::new(self.scaled_least_rank_difference(o1, o2), self.scale.clone())
    }

    /// `D · M_D(o1, o2)`, `None` when the outcomes are equal.
    pub fn scaled_min_rank_difference(&self, o1: &Outcome, o2: &Outcome) -> Option<BigInt> {
        o1.differing_variables(o2).map(|x| &self.least[x]).min().cloned()
    }

    /// `M_D(o1, o2) = min_{X ∈ D} L(X)`.
    pub fn min_rank_difference(&self, o1: &Outcome, o2: &Outcome) -> Result<BigRational, RankError> {
        self.scaled_min_rank_difference(o1, o2)
            .map(|m| BigRational::new(m, self.scale.clone()))
            .ok_or(RankError::EqualOutcomes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, outcome};
    use crate::model::{CptRow, PreferenceMode, RawNet};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn chain(len: usize) -> CpNet {
        let mut adjacency = vec![vec![false; len]; len];
        let mut cpts = vec![vec![CptRow { parents: vec![], positions: vec![1, 2] }]];
        for i in 1..len {
            adjacency[i - 1][i] = true;
            cpts.push(vec![
                CptRow { parents: vec![1], positions: vec![1, 2] },
                CptRow { parents: vec![2], positions: vec![2, 1] },
            ]);
        }
        CpNet::new(RawNet { domain_sizes: vec![2; len], adjacency, cpts }, PreferenceMode::Strict).unwrap()
    }

    #[test]
    fn example_structure() {
        let net = fixtures::example_net();
        assert_eq!(ancestors(&net, 2).unwrap(), vec![0, 1]);
        assert!(ancestors(&net, 0).unwrap().is_empty());
        assert!(ancestors(&net, 1).unwrap().is_empty());
        assert_eq!(ancestors(&net, 3).unwrap(), vec![0, 1, 2]);
        let d: Vec<u32> = (0..4).map(|i| descendent_paths(&net, i).unwrap().try_into().unwrap()).collect();
        assert_eq!(d, vec![2, 2, 1, 0]);
        let stats = VariableStats::new(&net);
        assert_eq!(stats.ancestral_factor, vec![q(1, 1), q(1, 1), q(1, 4), q(1, 12)]);
        assert_eq!(stats, VariableStats::by_matrix(&net));
        assert_eq!(ancestors(&net, 4), Err(RankError::VariableOutOfRange { variable: 4, variables: 4 }));
    }

    #[test]
    fn chain_paths() {
        let net = chain(3);
        assert_eq!(descendent_paths(&net, 0).unwrap(), BigUint::from(2u8));
        assert_eq!(descendent_paths(&net, 2).unwrap(), BigUint::zero());
    }

    #[test]
    fn tied_row_positions() {
        let net = fixtures::tied_row_net();
        let expected = [q(5, 5), q(4, 5), q(4, 5), q(4, 5), q(3, 5), q(2, 5), q(2, 5), q(1, 5)];
        for (value, want) in (1..=8).zip(expected) {
            assert_eq!(preference_position(&net, 0, value, &[]).unwrap(), want, "x{value}");
        }
        assert!(matches!(preference_position(&net, 0, 9, &[]), Err(RankError::ValueOutOfRange { .. })));
    }

    #[test]
    fn most_preferred_value_has_position_one() {
        let net = fixtures::example_net();
        for var in 0..net.variable_count() {
            for row in 0..net.row_count(var) {
                let positions = net.positions(var, row);
                let best = positions.iter().position(|&p| p == 1).unwrap() as Value + 1;
                let parents = net.row_parents(var, row);
                assert_eq!(preference_position(&net, var, best, &parents).unwrap(), BigRational::one());
            }
        }
    }

    #[test]
    fn example_ranks() {
        let net = fixtures::example_net();
        let ranker = Ranker::new(&net);
        let cases = [
            (outcome(&[2, 1, 3, 2]), q(61, 12)),
            (outcome(&[1, 1, 2, 2]), q(77, 12)),
            (outcome(&[2, 2, 1, 1]), q(39, 12)),
            (outcome(&[2, 1, 3, 1]), q(121, 24)),
            (outcome(&[2, 1, 2, 2]), q(114, 24)),
            (outcome(&[1, 1, 2, 2]), q(154, 24)),
            (outcome(&[2, 1, 1, 2]), q(117, 24)),
            (outcome(&[2, 1, 3, 2]), q(122, 24)),
            (outcome(&[1, 1, 1, 2]), q(157, 24)),
            (outcome(&[2, 1, 1, 1]), q(118, 24)),
        ];
        for (o, want) in cases {
            assert_eq!(ranker.rank(&o).as_ratio(), &want, "rank of {o}");
            assert_eq!(rank_reference(&net, &o).as_ratio(), &want);
        }
        assert_eq!(alloc::format!("{}", ranker.rank(&outcome(&[2, 1, 3, 1]))), "121/24");
    }

    #[test]
    fn example_least_improvements() {
        let net = fixtures::example_net();
        let ranker = Ranker::new(&net);
        assert_eq!(ranker.least_rank_improvement().values(), &[q(7, 6), q(7, 6), q(1, 8), q(1, 24)]);
        let (o, o2) = (outcome(&[2, 1, 3, 1]), outcome(&[2, 1, 2, 2]));
        assert_eq!(ranker.least_rank_difference(&o, &o2), q(1, 6));
        assert_eq!(ranker.least_rank_difference(&o, &o), BigRational::zero());
        assert_eq!(ranker.least_rank_difference(&outcome(&[1, 1, 1, 1]), &outcome(&[2, 2, 2, 2])), q(5, 2));
        assert_eq!(ranker.min_rank_difference(&o, &o2).unwrap(), q(1, 24));
        assert_eq!(ranker.min_rank_difference(&outcome(&[1, 1, 1, 1]), &outcome(&[2, 2, 1, 1])).unwrap(), q(7, 6));
        assert_eq!(ranker.min_rank_difference(&outcome(&[1, 1, 1, 1]), &outcome(&[1, 1, 2, 1])).unwrap(), q(1, 8));
        assert_eq!(ranker.min_rank_difference(&o, &o), Err(RankError::EqualOutcomes));
    }

    #[test]
    fn single_variable_least_improvement() {
        let net = CpNet::new(
            RawNet {
                domain_sizes: vec![2],
                adjacency: vec![vec![false]],
                cpts: vec![vec![CptRow { parents: vec![], positions: vec![2, 1] }]],
            },
            PreferenceMode::Strict,
        )
        .unwrap();
        assert_eq!(Ranker::new(&net).least_rank_improvement().get(0), &q(1, 2));
    }

    #[test]
    fn max_rank_bounds_every_outcome() {
        let net = fixtures::example_net();
        let ranker = Ranker::new(&net);
        let max = ranker.max_rank();
        assert_eq!(max.as_ratio(), &q(79, 12));
        for o in net.outcomes() {
            let r = ranker.rank(&o);
            assert!(r.as_ratio() > &BigRational::zero() && r <= max);
        }
        assert_eq!(ranker.rank(&outcome(&[1, 1, 1, 1])), max);
    }

    #[test]
    fn display_is_always_a_fraction() {
        assert_eq!(alloc::format!("{}", Rank::from_fraction(39, 12)), "13/4");
        assert_eq!(alloc::format!("{}", Rank::from_fraction(6, 1)), "6/1");
        assert!((Rank::from_fraction(61, 12).to_f64() - 5.083333).abs() < 1e-6);
    }
}
