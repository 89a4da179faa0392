//! Random CP-net and query generation, and the pruning benchmark.
//!
//! Nets are generated over a fixed topological order: every candidate edge
//! `i → j` with `i < j` is kept with probability `edge_density`, at most
//! `max_parents` per variable. Domain sizes are uniform on `2..=d_U` and each
//! CPT row is a uniformly random preference order. Every kept edge must be
//! relevant (some pair of parent assignments that differ only on that
//! parent selects different rows); a child's rows are re-rolled until this
//! holds, and an edge that still fails after repeated attempts is dropped.
//!
//! With `indifference_rate > 0`, adjacent positions in a row are merged with
//! that probability. Values of a parent that are tied in any of its rows
//! form one class, and child rows are drawn per tuple of parent classes, so
//! switching between tied parent values never changes a child's row.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use cpnet_core::dominance::{DominanceEngine, DominanceError, LeafStrategy, Measures, PruningConfig};
use cpnet_core::model::{CpNet, CptRow, Outcome, PreferenceMode, RawNet, Value};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Re-roll attempts per variable before an irrelevant edge is dropped.
const RELEVANCE_ATTEMPTS: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    #[serde(rename = "d_U")]
    pub d_u: u16,
    pub seed: u64,
    /// Probability of keeping each candidate edge; `None` picks a density
    /// giving about two parents per variable.
    pub edge_density: Option<f64>,
    pub indifference_rate: f64,
    pub max_parents: usize,
}

impl GenSpec {
    pub fn new(n: usize, d_u: u16, seed: u64) -> Self {
        GenSpec { n, d_u, seed, edge_density: None, indifference_rate: 0.0, max_parents: 5 }
    }

    pub fn with_indifference(self, rate: f64) -> Self {
        GenSpec { indifference_rate: rate, ..self }
    }

    pub fn with_edge_density(self, density: f64) -> Self {
        GenSpec { edge_density: Some(density), ..self }
    }

    pub fn density(&self) -> f64 {
        self.edge_density.unwrap_or(if self.n <= 1 { 0.0 } else { (4.0 / (self.n - 1) as f64).min(1.0) })
    }

    pub fn mode(&self) -> PreferenceMode {
        if self.indifference_rate > 0.0 {
            PreferenceMode::Indifference
        } else {
            PreferenceMode::Strict
        }
    }
}

/// RNG for one net of a benchmark cell; independent of scheduling.
pub fn instance_rng(seed: u64, n: usize, d_u: u16, net_id: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(n as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(d_u as u64).to_le_bytes());
    key[24..].copy_from_slice(&(net_id as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Generates a net from `spec.seed`.
pub fn generate_net(spec: &GenSpec) -> CpNet {
    generate_net_with(spec, &mut ChaCha8Rng::seed_from_u64(spec.seed))
}

/// A random preference row over `m` values: `positions[v]` for each value,
/// with adjacent positions merged at `tie_rate`.
fn random_row<R: Rng>(rng: &mut R, m: usize, tie_rate: f64) -> Vec<u16> {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut positions = vec![0u16; m];
    let mut level = 1u16;
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && !(tie_rate > 0.0 && rng.random_bool(tie_rate)) {
            level += 1;
        }
        positions[v] = level;
    }
    positions
}

/// Tie classes of a variable: values tied in any row share a class.
fn tie_classes(rows: &[Vec<u16>], m: usize) -> Vec<usize> {
    let mut class: Vec<usize> = (0..m).collect();
    fn find(class: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while class[r] != r {
            r = class[r];
        }
        class[x] = r;
        r
    }
    for row in rows {
        for a in 0..m {
            for b in a + 1..m {
                if row[a] == row[b] {
                    let (ra, rb) = (find(&mut class, a), find(&mut class, b));
                    class[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    // relabel densely
    let mut ids = BTreeMap::new();
    (0..m)
        .map(|v| {
            let root = find(&mut class, v);
            let next = ids.len();
            *ids.entry(root).or_insert(next)
        })
        .collect()
}

fn class_count(classes: &[usize]) -> usize {
    classes.iter().max().map_or(0, |&c| c + 1)
}

fn mixed_index(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d)
}

fn unrank(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        out[i] = idx % radices[i];
        idx /= radices[i];
    }
    out
}

/// Parents (by position in `radices`) whose class never changes the row.
fn irrelevant_parents(rows: &[Vec<u16>], radices: &[usize]) -> Vec<usize> {
    (0..radices.len())
        .filter(|&p| {
            (0..rows.len()).all(|r| {
                let mut digits = unrank(r, radices);
                let base = digits[p];
                (0..radices[p]).filter(|&c| c != base).all(|c| {
                    digits[p] = c;
                    let same = rows[mixed_index(&digits, radices)] == rows[r];
                    digits[p] = base;
                    same
                })
            })
        })
        .collect()
}

/// Generates a net from the given RNG. The net always validates.
pub fn generate_net_with<R: Rng>(spec: &GenSpec, rng: &mut R) -> CpNet {
    let n = spec.n;
    let d_u = spec.d_u.max(2);
    let density = spec.density();
    let tie_rate = spec.indifference_rate;
    let sizes: Vec<u16> = (0..n).map(|_| rng.random_range(2..=d_u)).collect();
    let mut adjacency = vec![vec![false; n]; n];
    let mut classes: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut cpts: Vec<Vec<CptRow>> = Vec::with_capacity(n);

    for j in 0..n {
        let mut candidates: Vec<usize> = (0..j).collect();
        candidates.shuffle(rng);
        let mut parents: Vec<usize> = candidates
            .into_iter()
            .filter(|_| rng.random_bool(density))
            .take(spec.max_parents)
            .collect();
        parents.retain(|&p| class_count(&classes[p]) >= 2);
        parents.sort_unstable();

        let m = sizes[j] as usize;
        let class_rows = loop {
            let radices: Vec<usize> = parents.iter().map(|&p| class_count(&classes[p])).collect();
            let tuples: usize = radices.iter().product();
            let mut found = None;
            for _ in 0..RELEVANCE_ATTEMPTS {
                let mut rows: Vec<Vec<u16>> = Vec::with_capacity(tuples);
                for _ in 0..tuples {
                    let mut row = random_row(rng, m, tie_rate);
                    rows.push(row.clone());
                    // keep at least two tie classes so the variable can be a parent
                    if class_count(&tie_classes(&rows, m)) < 2 {
                        row = random_row(rng, m, 0.0);
                        *rows.last_mut().unwrap() = row;
                    }
                }
                if irrelevant_parents(&rows, &radices).is_empty() {
                    found = Some(rows);
                    break;
                }
            }
            match found {
                Some(rows) => break rows,
                None => {
                    parents.remove(rng.random_range(0..parents.len()));
                }
            }
        };

        let radices: Vec<usize> = parents.iter().map(|&p| class_count(&classes[p])).collect();
        let value_radices: Vec<usize> = parents.iter().map(|&p| sizes[p] as usize).collect();
        let rows: Vec<CptRow> = (0..value_radices.iter().product::<usize>())
            .map(|r| {
                let values = unrank(r, &value_radices);
                let class_digits: Vec<usize> =
                    parents.iter().zip(&values).map(|(&p, &v)| classes[p][v]).collect();
                CptRow {
                    parents: values.iter().map(|&v| v as Value + 1).collect(),
                    positions: class_rows[mixed_index(&class_digits, &radices)].clone(),
                }
            })
            .collect();
        for &p in &parents {
            adjacency[p][j] = true;
        }
        classes.push(tie_classes(&class_rows, m));
        cpts.push(rows);
    }
    let raw = RawNet { domain_sizes: sizes, adjacency, cpts };
    CpNet::new(raw, spec.mode()).expect("generated nets are valid")
}

/// Finds an edge `parent → child` whose parent never changes the child's
/// row, by exhaustive comparison of CPT rows.
pub fn audit_relevance(net: &CpNet) -> Result<(), (usize, usize)> {
    for child in 0..net.variable_count() {
        for (slot, &parent) in net.parents(child).iter().enumerate() {
            let relevant = (0..net.row_count(child)).any(|r| {
                let mut values = net.row_parents(child, r);
                let base = values[slot];
                (1..=net.domain_size(parent)).filter(|&v| v != base).any(|v| {
                    values[slot] = v;
                    let other = net.row_index_for(child, &values).expect("complete CPT");
                    values[slot] = base;
                    net.positions(child, other) != net.positions(child, r)
                })
            });
            if !relevant {
                return Err((parent, child));
            }
        }
    }
    Ok(())
}

pub fn random_outcome<R: Rng>(net: &CpNet, rng: &mut R) -> Outcome {
    Outcome::new(net.domain_sizes().iter().map(|&s| rng.random_range(1..=s)).collect())
}

/// `count` independent uniformly random pairs `(o, o′)`; pairs may coincide.
pub fn generate_queries_with<R: Rng>(net: &CpNet, count: usize, rng: &mut R) -> Vec<(Outcome, Outcome)> {
    (0..count).map(|_| (random_outcome(net, rng), random_outcome(net, rng))).collect()
}

pub fn generate_queries(net: &CpNet, count: usize, seed: u64) -> Vec<(Outcome, Outcome)> {
    generate_queries_with(net, count, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// The net and queries of one benchmark instance.
pub fn generate_instance(spec: &ExperimentSpec, n: usize, d_u: u16, net_id: usize) -> (CpNet, Vec<(Outcome, Outcome)>) {
    let mut rng = instance_rng(spec.seed, n, d_u, net_id);
    let mut gen = GenSpec::new(n, d_u, spec.seed);
    gen.edge_density = spec.edge_density;
    let net = generate_net_with(&gen, &mut rng);
    let queries = generate_queries_with(&net, spec.queries_per_net, &mut rng);
    (net, queries)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// `(n, d_U)` cells.
    pub grid: Vec<(usize, u16)>,
    pub nets_per_cell: usize,
    pub queries_per_net: usize,
    #[serde(with = "measure_labels")]
    pub methods: Vec<Measures>,
    pub seed: u64,
    #[serde(with = "strategy_label")]
    pub leaf_strategy: LeafStrategy,
    pub edge_density: Option<f64>,
    /// Run on one worker thread for low-noise timings.
    pub single_thread: bool,
}

impl ExperimentSpec {
    /// Strict binary nets for `n` in `ns`, all seven measure combinations.
    pub fn binary(ns: impl IntoIterator<Item = usize>, nets_per_cell: usize, queries_per_net: usize, seed: u64) -> Self {
        ExperimentSpec {
            grid: ns.into_iter().map(|n| (n, 2)).collect(),
            nets_per_cell,
            queries_per_net,
            methods: Measures::combinations().to_vec(),
            seed,
            leaf_strategy: LeafStrategy::Fifo,
            edge_density: None,
            single_thread: false,
        }
    }
}

mod measure_labels {
    use cpnet_core::dominance::Measures;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Measures], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Measures>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

mod strategy_label {
    use cpnet_core::dominance::LeafStrategy;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(l: &LeafStrategy, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(l)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<LeafStrategy, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub n: usize,
    #[serde(rename = "d_U")]
    pub d_u: u16,
    pub cpnet_id: usize,
    pub query_id: usize,
    pub method: String,
    pub answer: bool,
    pub outcomes_traversed: u64,
    pub time_ns: u64,
    /// Empty when the query was not settled by an initial condition.
    pub zero_reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub n: usize,
    #[serde(rename = "d_U")]
    pub d_u: u16,
    pub method: String,
    pub mean_ot: f64,
    pub se_ot: f64,
    pub mean_time_ns: f64,
    pub se_time_ns: f64,
    /// Proportion of queries settled by an initial condition.
    pub z_p: f64,
    pub prop_false: f64,
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(
        "methods disagree on n={n}, d_U={d_u}, net {cpnet_id}, query {query_id} ({o} vs {o_prime}): {answers:?}"
    )]
    MethodDisagreement {
        n: usize,
        d_u: u16,
        cpnet_id: usize,
        query_id: usize,
        o: Outcome,
        o_prime: Outcome,
        answers: Vec<(String, bool)>,
    },
    #[error(transparent)]
    Dominance(#[from] DominanceError),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub records: Vec<QueryRecord>,
    pub stats: Vec<BatchStats>,
}

fn run_instance(spec: &ExperimentSpec, n: usize, d_u: u16, net_id: usize) -> Result<Vec<QueryRecord>, ExperimentError> {
    let (net, queries) = generate_instance(spec, n, d_u, net_id);
    let engine = DominanceEngine::new(&net);
    let mut per_method: Vec<Vec<QueryRecord>> = Vec::with_capacity(spec.methods.len());
    for &measures in &spec.methods {
        let config = PruningConfig::new(measures).with_strategy(spec.leaf_strategy);
        let label = measures.to_string();
        if let Some((o, p)) = queries.first() {
            engine.dominates(o, p, &config)?;
        }
        let mut records = Vec::with_capacity(queries.len());
        for (query_id, (o, p)) in queries.iter().enumerate() {
            let start = Instant::now();
            let result = engine.dominates(o, p, &config)?;
            let time_ns = start.elapsed().as_nanos() as u64;
            records.push(QueryRecord {
                n,
                d_u,
                cpnet_id: net_id,
                query_id,
                method: label.clone(),
                answer: result.answer,
                outcomes_traversed: result.outcomes_traversed as u64,
                time_ns,
                zero_reason: result.zero_traversal_reason.map(|r| r.to_string()).unwrap_or_default(),
            });
        }
        per_method.push(records);
    }
    for (query_id, (o, p)) in queries.iter().enumerate() {
        let answers: Vec<(String, bool)> =
            per_method.iter().map(|r| (r[query_id].method.clone(), r[query_id].answer)).collect();
        if answers.iter().any(|a| a.1 != answers[0].1) {
            return Err(ExperimentError::MethodDisagreement {
                n,
                d_u,
                cpnet_id: net_id,
                query_id,
                o: o.clone(),
                o_prime: p.clone(),
                answers,
            });
        }
    }
    Ok(per_method.into_iter().flatten().collect())
}

fn mean_se(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let count = values.clone().count() as f64;
    if count == 0.0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / count;
    if count < 2.0 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0);
    (mean, (var / count).sqrt())
}

/// Per `(n, d_U, method)` statistics, cells in grid order, methods in spec order.
pub fn aggregate(spec: &ExperimentSpec, records: &[QueryRecord]) -> Vec<BatchStats> {
    let mut stats = Vec::new();
    for &(n, d_u) in &spec.grid {
        for method in spec.methods.iter().map(ToString::to_string) {
            let rows: Vec<&QueryRecord> =
                records.iter().filter(|r| r.n == n && r.d_u == d_u && r.method == method).collect();
            if rows.is_empty() {
                continue;
            }
            let count = rows.len() as f64;
            let (mean_ot, se_ot) = mean_se(rows.iter().map(|r| r.outcomes_traversed as f64));
            let (mean_time_ns, se_time_ns) = mean_se(rows.iter().map(|r| r.time_ns as f64));
            stats.push(BatchStats {
                n,
                d_u,
                method,
                mean_ot,
                se_ot,
                mean_time_ns,
                se_time_ns,
                z_p: rows.iter().filter(|r| !r.zero_reason.is_empty()).count() as f64 / count,
                prop_false: rows.iter().filter(|r| !r.answer).count() as f64 / count,
            });
        }
    }
    stats
}

/// Runs every method on every query of every generated net. Fails on the
/// first query where two methods give different answers.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Experiment, ExperimentError> {
    let jobs: Vec<(usize, u16, usize)> = spec
        .grid
        .iter()
        .flat_map(|&(n, d_u)| (0..spec.nets_per_cell).map(move |id| (n, d_u, id)))
        .collect();
    let run = || -> Result<Vec<Vec<QueryRecord>>, ExperimentError> {
        jobs.par_iter().map(|&(n, d_u, id)| run_instance(spec, n, d_u, id)).collect()
    };
    let batches = if spec.single_thread {
        rayon::ThreadPoolBuilder::new().num_threads(1).build()?.install(run)?
    } else {
        run()?
    };
    let records: Vec<QueryRecord> = batches.into_iter().flatten().collect();
    let stats = aggregate(spec, &records);
    Ok(Experiment { records, stats })
}

/// Pooled statistics of one method over all cells of an experiment.
pub fn pooled(records: &[QueryRecord], method: &str) -> BatchStats {
    let rows: Vec<&QueryRecord> = records.iter().filter(|r| r.method == method).collect();
    let count = rows.len() as f64;
    let (mean_ot, se_ot) = mean_se(rows.iter().map(|r| r.outcomes_traversed as f64));
    let (mean_time_ns, se_time_ns) = mean_se(rows.iter().map(|r| r.time_ns as f64));
    BatchStats {
        n: rows.iter().map(|r| r.n).max().unwrap_or(0),
        d_u: rows.iter().map(|r| r.d_u).max().unwrap_or(0),
        method: method.to_string(),
        mean_ot,
        se_ot,
        mean_time_ns,
        se_time_ns,
        z_p: rows.iter().filter(|r| !r.zero_reason.is_empty()).count() as f64 / count,
        prop_false: rows.iter().filter(|r| !r.answer).count() as f64 / count,
    }
}

pub fn write_raw_csv<W: Write>(records: &[QueryRecord], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregate_csv<W: Write>(stats: &[BatchStats], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    for s in stats {
        w.serialize(s)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_aggregate_csv(path: &Path) -> Result<Vec<BatchStats>, ExperimentError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<Vec<BatchStats>, _>>()?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub spec: ExperimentSpec,
    pub records: usize,
    pub raw_csv: String,
    pub aggregate_csv: String,
}

/// Writes `<stem>.raw.csv`, `<stem>.agg.csv` and `<stem>.manifest.json` into `dir`.
pub fn write_outputs(dir: &Path, stem: &str, spec: &ExperimentSpec, exp: &Experiment) -> Result<Manifest, ExperimentError> {
    std::fs::create_dir_all(dir)?;
    let raw = format!("{stem}.raw.csv");
    let agg = format!("{stem}.agg.csv");
    write_raw_csv(&exp.records, std::fs::File::create(dir.join(&raw))?)?;
    write_aggregate_csv(&exp.stats, std::fs::File::create(dir.join(&agg))?)?;
    let manifest = Manifest {
        tool: "cpnet".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        spec: spec.clone(),
        records: exp.records.len(),
        raw_csv: raw,
        aggregate_csv: agg,
    };
    let file = std::fs::File::create(dir.join(format!("{stem}.manifest.json")))?;
    serde_json::to_writer_pretty(file, &manifest)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cpnet_core::model::validate;

    #[test]
    fn generated_nets_validate_and_are_relevant() {
        for seed in 0..200 {
            for &(n, d_u) in &[(1, 2), (5, 2), (6, 5), (8, 3)] {
                let spec = GenSpec::new(n, d_u, seed);
                let net = generate_net(&spec);
                assert!(validate(&net.to_raw(), PreferenceMode::Strict).is_ok());
                assert_eq!(audit_relevance(&net), Ok(()), "seed {seed} n {n}");
                assert!(net.domain_sizes().iter().all(|&s| (2..=d_u).contains(&s)));
            }
        }
    }

    #[test]
    fn single_variable_has_no_edges() {
        let net = generate_net(&GenSpec::new(1, 2, 7));
        assert_eq!(net.variable_count(), 1);
        assert_eq!(net.edge_count(), 0);
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GenSpec::new(7, 4, 99);
        assert_eq!(generate_net(&spec), generate_net(&spec));
        let net = generate_net(&spec);
        assert_eq!(generate_queries(&net, 10, 3), generate_queries(&net, 10, 3));
        assert_eq!(generate_queries(&net, 10, 3).len(), 10);
    }

    #[test]
    fn indifference_nets_pass_the_consistency_check() {
        let mut tied = 0;
        for seed in 0..200 {
            let spec = GenSpec::new(5, 3, seed).with_indifference(0.4);
            let net = generate_net(&spec);
            assert!(validate(&net.to_raw(), PreferenceMode::Indifference).is_ok());
            assert_eq!(audit_relevance(&net), Ok(()));
            tied += (net.mode() == PreferenceMode::Indifference) as usize;
        }
        assert!(tied > 150, "only {tied} nets had ties");
    }

    #[test]
    fn standard_error_uses_sample_deviation() {
        let (mean, se) = mean_se([1.0, 2.0, 3.0, 4.0].into_iter());
        assert_eq!(mean, 2.5);
        assert!((se - (1.666_666_666_666_666_7f64 / 4.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_se([5.0].into_iter()), (5.0, 0.0));
    }

    #[test]
    fn small_experiment_agrees_and_aggregates() {
        let spec = ExperimentSpec::binary([3, 4], 3, 5, 11);
        let exp = run_experiment(&spec).unwrap();
        assert_eq!(exp.records.len(), 2 * 3 * 5 * 7);
        assert_eq!(exp.stats.len(), 2 * 7);
        let again = run_experiment(&ExperimentSpec { single_thread: true, ..spec.clone() }).unwrap();
        let ot = |e: &Experiment| e.records.iter().map(|r| (r.method.clone(), r.outcomes_traversed)).collect::<Vec<_>>();
        assert_eq!(ot(&exp), ot(&again));
        let mut csv = Vec::new();
        write_aggregate_csv(&exp.stats, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("n,d_U,method,mean_ot,se_ot,mean_time_ns,se_time_ns,z_p,prop_false\n"));
        let mut csv = Vec::new();
        write_raw_csv(&exp.records, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("n,d_U,cpnet_id,query_id,method,answer,outcomes_traversed,time_ns,zero_reason\n"));
    }
}
