//! CP-net structure, conditional preference tables and outcomes.
//!
//! Variables are identified by their 0-based position in a fixed topological
//! order. Values are 1-based: value `k` of variable `i` is the `k`-th element
//! of its domain. A CPT row maps a parent assignment to a tuple of preference
//! positions, one per domain value, where position 1 is the most preferred.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// A 1-based domain value index.
pub type Value = u16;

/// One value per variable, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(Vec<Value>);

impl Outcome {
    pub fn new(values: Vec<Value>) -> Self {
        Outcome(values)
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value taken by variable `var`.
    pub fn value(&self, var: usize) -> Value {
        self.0[var]
    }

    /// Copy of `self` with `var` set to `value`.
    pub fn with_value(&self, var: usize, value: Value) -> Outcome {
        let mut values = self.0.clone();
        values[var] = value;
        Outcome(values)
    }

    /// Variables on which the two outcomes disagree, in index order.
    pub fn differing_variables<'a>(&'a self, other: &'a Outcome) -> impl Iterator<Item = usize> + 'a {
        self.0
            .iter()
            .zip(other.0.iter())
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
    }

    pub fn hamming_distance(&self, other: &Outcome) -> usize {
        self.differing_variables(other).count()
    }
}

impl From<Vec<Value>> for Outcome {
    fn from(values: Vec<Value>) -> Self {
        Outcome(values)
    }
}

impl From<&[Value]> for Outcome {
    fn from(values: &[Value]) -> Self {
        Outcome(values.to_vec())
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeParseError {
    pub token: String,
}

impl fmt::Display for OutcomeParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid outcome value `{}` (expected a positive integer)", self.token)
    }
}

impl core::error::Error for OutcomeParseError {}

impl FromStr for Outcome {
    type Err = OutcomeParseError;

    /// Parses the comma-separated form, e.g. `2,1,3,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|tok| {
                let tok = tok.trim();
                match tok.parse::<Value>() {
                    Ok(v) if v >= 1 => Ok(v),
                    _ => Err(OutcomeParseError { token: tok.into() }),
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Outcome)
    }
}

/// Whether CPT rows must be strict total orders or may contain ties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum PreferenceMode {
    #[default]
    Strict,
    Indifference,
}

impl fmt::Display for PreferenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PreferenceMode::Strict => "strict",
            PreferenceMode::Indifference => "indifference",
        })
    }
}

impl FromStr for PreferenceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(PreferenceMode::Strict),
            "indifference" => Ok(PreferenceMode::Indifference),
            other => Err(alloc::format!("unknown mode `{other}` (expected strict|indifference)")),
        }
    }
}

/// One row of a conditional preference table as it appears in input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CptRow {
    /// Parent assignment, parents ordered by variable index. Empty for roots.
    pub parents: Vec<Value>,
    /// `positions[k - 1]` is the preference position of value `k`.
    pub positions: Vec<u16>,
}

/// Unvalidated CP-net parts, as produced by a parser or generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawNet {
    pub domain_sizes: Vec<u16>,
    /// `adjacency[i][j]` is true iff there is an edge from variable `i` to `j`.
    pub adjacency: Vec<Vec<bool>>,
    pub cpts: Vec<Vec<CptRow>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    Shape(String),
    DomainTooSmall { variable: usize, size: u16 },
    CyclicStructure { variables: Vec<usize> },
    NonTopologicalOrder { from: usize, to: usize },
    MissingCptRow { variable: usize, parents: Vec<Value> },
    DuplicateCptRow { variable: usize, parents: Vec<Value> },
    InvalidCptRow { variable: usize, parents: Vec<Value> },
    MalformedPositions { variable: usize, parents: Vec<Value>, positions: Vec<u16>, mode: PreferenceMode },
    IndifferenceInconsistency { child: usize, parent: usize, tied: (Value, Value), parents: Vec<Value> },
    OutcomeLength { expected: usize, found: usize },
    OutcomeValue { variable: usize, value: Value, domain_size: u16 },
}

struct Tuple<'a>(&'a [Value]);

impl fmt::Display for Tuple<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        fmt::Display::fmt(&Outcome(self.0.to_vec()), f)
    }
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Shape(msg) => write!(f, "malformed net: {msg}"),
            ModelError::DomainTooSmall { variable, size } => {
                write!(f, "variable {} has domain size {size}, need at least 2", variable + 1)
            }
            ModelError::CyclicStructure { variables } => {
                f.write_str("CyclicStructure: the structure has a directed cycle through variables")?;
                for v in variables {
                    write!(f, " {}", v + 1)?;
                }
                Ok(())
            }
            ModelError::NonTopologicalOrder { from, to } => write!(
                f,
                "NonTopologicalOrder: edge {} -> {} points to an earlier variable",
                from + 1,
                to + 1
            ),
            ModelError::MissingCptRow { variable, parents } => {
                write!(f, "MissingCPTRow: CPT of variable {} has no row for {}", variable + 1, Tuple(parents))
            }
            ModelError::DuplicateCptRow { variable, parents } => {
                write!(f, "CPT of variable {} repeats the row for {}", variable + 1, Tuple(parents))
            }
            ModelError::InvalidCptRow { variable, parents } => write!(
                f,
                "CPT of variable {} has a row for {}, which is not an assignment to its parents",
                variable + 1,
                Tuple(parents)
            ),
            ModelError::MalformedPositions { variable, parents, positions, mode } => write!(
                f,
                "MalformedPositions: CPT of variable {} row {} has positions ({}) invalid in {mode} mode",
                variable + 1,
                Tuple(parents),
                Outcome(positions.clone())
            ),
            ModelError::IndifferenceInconsistency { child, parent, tied, parents } => write!(
                f,
                "IndifferenceInconsistency: values {} and {} of variable {} can be tied, but CPT of variable {} \
                 differs between them (at parent assignment {})",
                tied.0,
                tied.1,
                parent + 1,
                child + 1,
                Tuple(parents)
            ),
            ModelError::OutcomeLength { expected, found } => {
                write!(f, "outcome has {found} values, the net has {expected} variables")
            }
            ModelError::OutcomeValue { variable, value, domain_size } => write!(
                f,
                "outcome value {value} of variable {} is outside 1..={domain_size}",
                variable + 1
            ),
        }
    }
}

impl core::error::Error for ModelError {}

/// Summary returned by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub variables: usize,
    pub edges: usize,
    /// `None` if `|Ω|` overflows `u128`.
    pub outcome_count: Option<u128>,
    /// Number of CPT rows containing at least one tie.
    pub tied_rows: usize,
}

impl ValidationReport {
    /// `Strict` when no row has ties.
    pub fn effective_mode(&self) -> PreferenceMode {
        if self.tied_rows == 0 {
            PreferenceMode::Strict
        } else {
            PreferenceMode::Indifference
        }
    }
}

fn parents_of(adjacency: &[Vec<bool>], var: usize) -> Vec<usize> {
    (0..adjacency.len()).filter(|&p| adjacency[p][var]).collect()
}

/// Number of distinct preference positions, or `None` if the tuple is malformed.
fn position_levels(positions: &[u16], mode: PreferenceMode) -> Option<u16> {
    let n = positions.len();
    let distinct: BTreeSet<u16> = positions.iter().copied().collect();
    let m = distinct.len();
    if distinct.first() != Some(&1) || distinct.last() != Some(&(m as u16)) {
        return None;
    }
    match mode {
        PreferenceMode::Strict if m != n => None,
        _ => Some(m as u16),
    }
}

/// Checks a raw net: shapes, acyclicity, topological order, CPT completeness
/// and positions, and in indifference mode the requirement that tied parent
/// values never change a child's preference order.
///
/// The tie check is conservative: if two values of `X` are tied in any row of
/// `CPT(X)`, every child row must be identical across those two values.
pub fn validate(raw: &RawNet, mode: PreferenceMode) -> Result<ValidationReport, ModelError> {
    let n = raw.domain_sizes.len();
    if n == 0 {
        return Err(ModelError::Shape("a net needs at least one variable".into()));
    }
    if raw.adjacency.len() != n {
        return Err(ModelError::Shape(alloc::format!(
            "adjacency matrix has {} rows, expected {n}",
            raw.adjacency.len()
        )));
    }
    if let Some((i, row)) = raw.adjacency.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(ModelError::Shape(alloc::format!(
            "adjacency row {} has {} entries, expected {n}",
            i + 1,
            row.len()
        )));
    }
    if raw.cpts.len() != n {
        return Err(ModelError::Shape(alloc::format!("{} CPTs given for {n} variables", raw.cpts.len())));
    }
    for (i, &size) in raw.domain_sizes.iter().enumerate() {
        if size < 2 {
            return Err(ModelError::DomainTooSmall { variable: i, size });
        }
    }

    // Kahn's algorithm; whatever is left over sits on or behind a cycle.
    let mut indegree: Vec<usize> = (0..n).map(|j| (0..n).filter(|&i| raw.adjacency[i][j]).count()).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
    let mut removed = vec![false; n];
    while let Some(i) = ready.pop() {
        removed[i] = true;
        for j in 0..n {
            if raw.adjacency[i][j] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
    }
    if removed.iter().any(|r| !r) {
        let variables = (0..n).filter(|&i| !removed[i]).collect();
        return Err(ModelError::CyclicStructure { variables });
    }
    for i in 0..n {
        for j in 0..n {
            if raw.adjacency[i][j] && i >= j {
                return Err(ModelError::NonTopologicalOrder { from: i, to: j });
            }
        }
    }

    let mut tied_rows = 0;
    let mut edges = 0;
    // Per variable, the pairs of its values tied somewhere in its CPT.
    let mut tied_pairs: Vec<BTreeSet<(Value, Value)>> = vec![BTreeSet::new(); n];
    for var in 0..n {
        let parents = parents_of(&raw.adjacency, var);
        edges += parents.len();
        let radices: Vec<usize> = parents.iter().map(|&p| raw.domain_sizes[p] as usize).collect();
        let expected_rows: usize = radices.iter().product();
        let mut seen = vec![false; expected_rows];
        for row in &raw.cpts[var] {
            let idx = mixed_radix_index(&row.parents, &radices)
                .ok_or_else(|| ModelError::InvalidCptRow { variable: var, parents: row.parents.clone() })?;
            if core::mem::replace(&mut seen[idx], true) {
                return Err(ModelError::DuplicateCptRow { variable: var, parents: row.parents.clone() });
            }
            let malformed = || ModelError::MalformedPositions {
                variable: var,
                parents: row.parents.clone(),
                positions: row.positions.clone(),
                mode,
            };
            if row.positions.len() != raw.domain_sizes[var] as usize {
                return Err(malformed());
            }
            let levels = position_levels(&row.positions, mode).ok_or_else(malformed)?;
            if levels as usize != row.positions.len() {
                tied_rows += 1;
                for a in 0..row.positions.len() {
                    for b in a + 1..row.positions.len() {
                        if row.positions[a] == row.positions[b] {
                            tied_pairs[var].insert((a as Value + 1, b as Value + 1));
                        }
                    }
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(ModelError::MissingCptRow { variable: var, parents: unrank_mixed_radix(missing, &radices) });
        }
    }

    if tied_rows > 0 {
        check_indifference_consistency(raw, &tied_pairs)?;
    }

    let outcome_count = raw.domain_sizes.iter().try_fold(1u128, |acc, &s| acc.checked_mul(s as u128));
    Ok(ValidationReport { variables: n, edges, outcome_count, tied_rows })
}

fn check_indifference_consistency(raw: &RawNet, tied_pairs: &[BTreeSet<(Value, Value)>]) -> Result<(), ModelError> {
    let n = raw.domain_sizes.len();
    for child in 0..n {
        let parents = parents_of(&raw.adjacency, child);
        let radices: Vec<usize> = parents.iter().map(|&p| raw.domain_sizes[p] as usize).collect();
        let mut rows: Vec<Option<&[u16]>> = vec![None; radices.iter().product()];
        for row in &raw.cpts[child] {
            if let Some(idx) = mixed_radix_index(&row.parents, &radices) {
                rows[idx] = Some(&row.positions);
            }
        }
        for (slot, &parent) in parents.iter().enumerate() {
            for &(a, b) in &tied_pairs[parent] {
                for (idx, row) in rows.iter().enumerate() {
                    let assignment = unrank_mixed_radix(idx, &radices);
                    if assignment[slot] != a {
                        continue;
                    }
                    let mut other = assignment.clone();
                    other[slot] = b;
                    let other_idx = mixed_radix_index(&other, &radices).expect("in range");
                    if *row != rows[other_idx] {
                        return Err(ModelError::IndifferenceInconsistency {
                            child,
                            parent,
                            tied: (a, b),
                            parents: assignment,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Row index of a 1-based assignment; the first entry is most significant.
fn mixed_radix_index(values: &[Value], radices: &[usize]) -> Option<usize> {
    if values.len() != radices.len() {
        return None;
    }
    let mut idx = 0usize;
    for (&v, &r) in values.iter().zip(radices) {
        if v == 0 || v as usize > r {
            return None;
        }
        idx = idx * r + (v as usize - 1);
    }
    Some(idx)
}

fn unrank_mixed_radix(mut idx: usize, radices: &[usize]) -> Vec<Value> {
    let mut values = vec![0; radices.len()];
    for (slot, &r) in radices.iter().enumerate().rev() {
        values[slot] = (idx % r) as Value + 1;
        idx /= r;
    }
    values
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Cpt {
    /// Preference positions per row, rows in mixed-radix order of the parent assignment.
    rows: Vec<Vec<u16>>,
    /// Distinct positions per row (`n_X - ℓ`).
    levels: Vec<u16>,
}

/// A validated, immutable CP-net.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpNet {
    domain_sizes: Vec<u16>,
    adjacency: Vec<Vec<bool>>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    radices: Vec<Vec<usize>>,
    cpts: Vec<Cpt>,
    mode: PreferenceMode,
}

impl CpNet {
    /// Validates `raw` under `mode` and builds the net. A net accepted in
    /// indifference mode that happens to have no ties reports `Strict` from
    /// [`CpNet::mode`].
    pub fn new(raw: RawNet, mode: PreferenceMode) -> Result<CpNet, ModelError> {
        let report = validate(&raw, mode)?;
        let n = raw.domain_sizes.len();
        let parents: Vec<Vec<usize>> = (0..n).map(|i| parents_of(&raw.adjacency, i)).collect();
        let children: Vec<Vec<usize>> =
            (0..n).map(|i| (0..n).filter(|&j| raw.adjacency[i][j]).collect()).collect();
        let radices: Vec<Vec<usize>> = parents
            .iter()
            .map(|ps| ps.iter().map(|&p| raw.domain_sizes[p] as usize).collect())
            .collect();
        let cpts = raw
            .cpts
            .into_iter()
            .enumerate()
            .map(|(var, table)| {
                let count: usize = radices[var].iter().product();
                let mut rows = vec![Vec::new(); count];
                let mut levels = vec![0; count];
                for row in table {
                    let idx = mixed_radix_index(&row.parents, &radices[var]).expect("validated");
                    levels[idx] = position_levels(&row.positions, PreferenceMode::Indifference).expect("validated");
                    rows[idx] = row.positions;
                }
                Cpt { rows, levels }
            })
            .collect();
        Ok(CpNet {
            domain_sizes: raw.domain_sizes,
            adjacency: raw.adjacency,
            parents,
            children,
            radices,
            cpts,
            mode: report.effective_mode(),
        })
    }

    pub fn variable_count(&self) -> usize {
        self.domain_sizes.len()
    }

    pub fn domain_size(&self, var: usize) -> u16 {
        self.domain_sizes[var]
    }

    pub fn domain_sizes(&self) -> &[u16] {
        &self.domain_sizes
    }

    pub fn adjacency(&self) -> &[Vec<bool>] {
        &self.adjacency
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.adjacency[from][to]
    }

    pub fn parents(&self, var: usize) -> &[usize] {
        &self.parents[var]
    }

    pub fn children(&self, var: usize) -> &[usize] {
        &self.children[var]
    }

    pub fn edge_count(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    /// `Strict` iff no CPT row contains a tie.
    pub fn mode(&self) -> PreferenceMode {
        self.mode
    }

    pub fn row_count(&self, var: usize) -> usize {
        self.cpts[var].rows.len()
    }

    /// Row of `CPT(var)` selected by the parent values in `o`.
    pub fn row_index(&self, var: usize, o: &Outcome) -> usize {
        self.parents[var]
            .iter()
            .zip(&self.radices[var])
            .fold(0, |idx, (&p, &r)| idx * r + (o.value(p) as usize - 1))
    }

    /// Row of `CPT(var)` for an explicit parent assignment.
    pub fn row_index_for(&self, var: usize, parent_values: &[Value]) -> Option<usize> {
        mixed_radix_index(parent_values, &self.radices[var])
    }

    /// Parent assignment belonging to a row index.
    pub fn row_parents(&self, var: usize, row: usize) -> Vec<Value> {
        unrank_mixed_radix(row, &self.radices[var])
    }

    pub fn positions(&self, var: usize, row: usize) -> &[u16] {
        &self.cpts[var].rows[row]
    }

    /// Number of distinct preference positions in a row.
    pub fn levels(&self, var: usize, row: usize) -> u16 {
        self.cpts[var].levels[row]
    }

    /// Preference position of `o[var]` given `o`'s parent values.
    pub fn position(&self, var: usize, o: &Outcome) -> u16 {
        let row = self.row_index(var, o);
        self.cpts[var].rows[row][o.value(var) as usize - 1]
    }

    pub fn check_outcome(&self, o: &Outcome) -> Result<(), ModelError> {
        if o.len() != self.variable_count() {
            return Err(ModelError::OutcomeLength { expected: self.variable_count(), found: o.len() });
        }
        for (var, (&value, &size)) in o.values().iter().zip(&self.domain_sizes).enumerate() {
            if value == 0 || value > size {
                return Err(ModelError::OutcomeValue { variable: var, value, domain_size: size });
            }
        }
        Ok(())
    }

    /// `|Ω|`, or `None` on `u128` overflow.
    pub fn outcome_count(&self) -> Option<u128> {
        self.domain_sizes.iter().try_fold(1u128, |acc, &s| acc.checked_mul(s as u128))
    }

    /// Lazily enumerates `Ω` in lexicographic order of value tuples.
    pub fn outcomes(&self) -> Outcomes<'_> {
        Outcomes { sizes: &self.domain_sizes, next: Some(vec![1; self.domain_sizes.len()]) }
    }

    /// Position of `o` in the [`CpNet::outcomes`] order.
    pub fn outcome_index(&self, o: &Outcome) -> usize {
        o.values()
            .iter()
            .zip(&self.domain_sizes)
            .fold(0, |idx, (&v, &s)| idx * s as usize + (v as usize - 1))
    }

    pub fn outcome_at(&self, idx: usize) -> Outcome {
        let radices: Vec<usize> = self.domain_sizes.iter().map(|&s| s as usize).collect();
        Outcome(unrank_mixed_radix(idx, &radices))
    }

    /// The raw form, CPT rows in lexicographic order of parent assignments.
    pub fn to_raw(&self) -> RawNet {
        let cpts = (0..self.variable_count())
            .map(|var| {
                self.cpts[var]
                    .rows
                    .iter()
                    .enumerate()
                    .map(|(idx, positions)| CptRow {
                        parents: unrank_mixed_radix(idx, &self.radices[var]),
                        positions: positions.clone(),
                    })
                    .collect()
            })
            .collect();
        RawNet { domain_sizes: self.domain_sizes.clone(), adjacency: self.adjacency.clone(), cpts }
    }
}

/// Iterator returned by [`CpNet::outcomes`].
pub struct Outcomes<'a> {
    sizes: &'a [u16],
    next: Option<Vec<Value>>,
}

impl Iterator for Outcomes<'_> {
    type Item = Outcome;

    fn next(&mut self) -> Option<Outcome> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for var in (0..succ.len()).rev() {
            if succ[var] < self.sizes[var] {
                succ[var] += 1;
                self.next = Some(succ);
                break;
            }
            succ[var] = 1;
        }
        Some(Outcome(current))
    }
}
