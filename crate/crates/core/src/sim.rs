//! Simulation-based long-range influence: threshold shares, default cascades
//! and attribution of cascaded defaults to the initial defaulters.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{ExposureNetwork, Thresholds};
use crate::matrix::SquareMatrix;
use crate::paths::{weighted_vector, InfluenceMatrix, Provenance};
use crate::scalar::Scalar;

/// Largest initial set [`pivotal_initiators`] accepts; attribution scans all subsets.
pub const ATTRIBUTION_LIMIT: usize = 20;
pub const DEFAULT_RUNS: usize = 5000;
pub const DEFAULT_K0_MAX: usize = 5;
const MAX_REJECTIONS: usize = 100_000;

/// `c_ij = min(1, a_ij / q_i)`; rows of nodes without a threshold are zero.
pub fn share_matrix<T: Scalar>(net: &ExposureNetwork<T>, thresholds: &Thresholds<T>) -> InfluenceMatrix<T> {
    let n = net.node_count();
    let mut values = SquareMatrix::filled(n, T::zero());
    for (i, j, a) in net.edges() {
        if let Some(q) = thresholds.get(i) {
            values[(i, j)] = if a.at_least(q) { T::one() } else { a / q };
        }
    }
    InfluenceMatrix::new(values, Provenance::Shares)
}

/// Newly defaulted nodes per stage; only nonempty stages are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeTrace {
    pub initial: Vec<usize>,
    pub stages: Vec<Vec<usize>>,
    pub limit: Option<usize>,
}

impl CascadeTrace {
    /// Initial and cascaded defaults, ascending.
    pub fn defaulted(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.initial.iter().chain(self.stages.iter().flatten()).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn cascaded(&self) -> impl Iterator<Item = usize> + '_ {
        self.stages.iter().flatten().copied()
    }
}

// Runs the synchronous cascade in place, calling `stage` with each new stage.
fn propagate<T: Scalar>(c: &InfluenceMatrix<T>, down: &mut [bool], limit: Option<usize>, mut stage: impl FnMut(Vec<usize>)) {
    let threshold = T::one();
    let mut stages = 0;
    while limit.is_none_or(|s| stages < s) {
        let fresh: Vec<usize> = (0..c.dim())
            .filter(|&i| !down[i])
            .filter(|&i| {
                let lost: T = c.successors(i).iter().filter(|&&(k, _)| down[k]).map(|&(_, v)| v).sum();
                lost.at_least(threshold) && !c.successors(i).is_empty()
            })
            .collect();
        if fresh.is_empty() {
            break;
        }
        for &i in &fresh {
            down[i] = true;
        }
        stage(fresh);
        stages += 1;
    }
}

fn mask<T: Scalar>(c: &InfluenceMatrix<T>, nodes: &[usize]) -> Result<Vec<bool>> {
    let mut down = vec![false; c.dim()];
    for &x in nodes {
        if x >= c.dim() {
            return Err(Error::NodeIndexOutOfRange(x));
        }
        down[x] = true;
    }
    Ok(down)
}

/// Stage-by-stage defaults seeded by `initial`; `limit` caps the number of stages.
pub fn cascade<T: Scalar>(c: &InfluenceMatrix<T>, initial: &[usize], limit: Option<usize>) -> Result<CascadeTrace> {
    if initial.is_empty() {
        return Err(Error::EmptyInitialSet);
    }
    let mut down = mask(c, initial)?;
    let mut stages = Vec::new();
    propagate(c, &mut down, limit, |s| stages.push(s));
    let mut initial = initial.to_vec();
    initial.sort_unstable();
    initial.dedup();
    Ok(CascadeTrace { initial, stages, limit })
}

fn defaults_of<T: Scalar>(c: &InfluenceMatrix<T>, seeds: &[usize], limit: Option<usize>) -> Vec<bool> {
    let mut down = vec![false; c.dim()];
    for &x in seeds {
        down[x] = true;
    }
    if !seeds.is_empty() {
        propagate(c, &mut down, limit, |_| {});
    }
    down
}

// Defaults for every subset of `set`, indexed by bitmask over positions in `set`.
fn subset_defaults<T: Scalar>(c: &InfluenceMatrix<T>, set: &[usize], limit: Option<usize>) -> Vec<Vec<bool>> {
    (0..1usize << set.len())
        .map(|m| {
            let seeds: Vec<usize> = (0..set.len()).filter(|&b| m >> b & 1 == 1).map(|b| set[b]).collect();
            defaults_of(c, &seeds, limit)
        })
        .collect()
}

// Bitmask of the members of `set` lying in some inclusion-minimal subset whose cascade defaults `node`.
fn pivotal_mask(table: &[Vec<bool>], k: usize, node: usize) -> usize {
    let mut union = 0usize;
    for m in 1..table.len() {
        if table[m][node] && (0..k).filter(|&b| m >> b & 1 == 1).all(|b| !table[m ^ (1 << b)][node]) {
            union |= m;
        }
    }
    union
}

/// Members of `initial` belonging to at least one minimal subset of `initial`
/// whose cascade still defaults `node`.
pub fn pivotal_initiators<T: Scalar>(
    c: &InfluenceMatrix<T>,
    initial: &[usize],
    node: usize,
    limit: Option<usize>,
) -> Result<Vec<usize>> {
    let mut set = initial.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.is_empty() {
        return Err(Error::EmptyInitialSet);
    }
    if set.len() > ATTRIBUTION_LIMIT {
        return Err(Error::InitialSetTooLarge { size: set.len(), limit: ATTRIBUTION_LIMIT });
    }
    mask(c, &set)?;
    if node >= c.dim() {
        return Err(Error::NodeIndexOutOfRange(node));
    }
    let table = subset_defaults(c, &set, limit);
    if !table[table.len() - 1][node] || set.contains(&node) {
        return Err(Error::NotDefaulted(node.to_string()));
    }
    let union = pivotal_mask(&table, set.len(), node);
    Ok((0..set.len()).filter(|&b| union >> b & 1 == 1).map(|b| set[b]).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub enum SamplingMode {
    /// Every nonempty subset of at most `k0_max` nodes, once.
    Exhaustive,
    /// `runs` seeded draws.
    Random { runs: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan<T> {
    pub mode: SamplingMode,
    pub k0_max: usize,
    /// Per-node default probabilities. When absent, sets are uniform over all
    /// nonempty subsets of size at most `k0_max`; when present, each node joins
    /// independently and draws outside the size range are rejected.
    pub probabilities: Option<Vec<T>>,
    /// Cascade stage limit.
    pub stages: Option<usize>,
}

impl<T: Scalar> SimulationPlan<T> {
    pub fn exhaustive(k0_max: usize) -> Self {
        Self { mode: SamplingMode::Exhaustive, k0_max, probabilities: None, stages: None }
    }

    pub fn random(runs: usize, seed: u64, k0_max: usize) -> Self {
        Self { mode: SamplingMode::Random { runs, seed }, k0_max, probabilities: None, stages: None }
    }

    pub fn with_probabilities(mut self, probabilities: Vec<T>) -> Self {
        self.probabilities = Some(probabilities);
        self
    }

    pub fn with_stage_limit(mut self, stages: Option<usize>) -> Self {
        self.stages = stages;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.k0_max == 0 {
            return Err(Error::InvalidPlan("k0_max must be at least 1".into()));
        }
        if self.k0_max > ATTRIBUTION_LIMIT {
            return Err(Error::InitialSetTooLarge { size: self.k0_max, limit: ATTRIBUTION_LIMIT });
        }
        if let SamplingMode::Random { runs: 0, .. } = self.mode {
            return Err(Error::InvalidPlan("random mode needs at least one run".into()));
        }
        if let Some(p) = &self.probabilities {
            if p.len() != n {
                return Err(Error::InvalidPlan(format!("{} probabilities for {} nodes", p.len(), n)));
            }
            if p.iter().any(|&x| !(x >= T::zero() && x <= T::one())) {
                return Err(Error::InvalidPlan("probabilities must lie in [0, 1]".into()));
            }
            if p.iter().all(|&x| x == T::zero()) {
                return Err(Error::InvalidPlan("at least one probability must be positive".into()));
            }
        }
        Ok(())
    }

    /// The initial sets to evaluate, each ascending.
    pub fn draw(&self, n: usize) -> Result<Vec<Vec<usize>>> {
        self.validate(n)?;
        let k = self.k0_max.min(n);
        match self.mode {
            SamplingMode::Exhaustive => Ok((1..=k).flat_map(|r| combinations(n, r)).collect()),
            SamplingMode::Random { runs, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..runs)
                    .map(|_| match &self.probabilities {
                        None => Ok(uniform_subset(&mut rng, n, k)),
                        Some(p) => bernoulli_subset(&mut rng, p, k),
                    })
                    .collect()
            }
        }
    }
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..r).collect();
    if r == 0 || r > n {
        return out;
    }
    loop {
        out.push(current.clone());
        let Some(pos) = (0..r).rev().find(|&p| current[p] < n - r + p) else {
            return out;
        };
        current[pos] += 1;
        for q in pos + 1..r {
            current[q] = current[q - 1] + 1;
        }
    }
}

fn binomial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

// Uniform over all nonempty subsets of at most `k` of `n` nodes.
fn uniform_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let sizes: Vec<f64> = (1..=k).map(|r| binomial(n, r)).collect();
    let total: f64 = sizes.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    let mut r = k;
    for (idx, &w) in sizes.iter().enumerate() {
        if u < w {
            r = idx + 1;
            break;
        }
        u -= w;
    }
    let mut set = index::sample(rng, n, r).into_vec();
    set.sort_unstable();
    set
}

fn bernoulli_subset<T: Scalar>(rng: &mut ChaCha8Rng, p: &[T], k: usize) -> Result<Vec<usize>> {
    for _ in 0..MAX_REJECTIONS {
        let set: Vec<usize> = p.iter().enumerate().filter(|&(_, &x)| rng.gen::<f64>() < x.to_f64_lossy()).map(|(i, _)| i).collect();
        if !set.is_empty() && set.len() <= k {
            return Ok(set);
        }
    }
    Err(Error::InvalidPlan(format!(
        "no admissible initial set after {MAX_REJECTIONS} draws; probabilities rarely give 1..={k} defaults"
    )))
}

/// Credit and exposure counts accumulated over the evaluated initial sets.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    /// `credit[(i, j)]`: cascaded defaults of `i` attributed to `j`.
    pub credit: SquareMatrix<u64>,
    /// `count[(i, j)]`: evaluated sets containing `j` but not `i`.
    pub count: SquareMatrix<u64>,
    pub sets: usize,
}

impl SimulationResult {
    fn zeros(n: usize) -> Self {
        Self { credit: SquareMatrix::filled(n, 0), count: SquareMatrix::filled(n, 0), sets: 0 }
    }

    fn merge(mut self, other: Self) -> Self {
        let n = self.credit.dim();
        for i in 0..n {
            for j in 0..n {
                self.credit[(i, j)] += other.credit[(i, j)];
                self.count[(i, j)] += other.count[(i, j)];
            }
        }
        self.sets += other.sets;
        self
    }

    /// `credit / count`; `None` where no evaluated set exposed `i` to `j`.
    /// The diagonal is 0.
    pub fn cstar<T: Scalar>(&self) -> SquareMatrix<Option<T>> {
        SquareMatrix::from_fn(self.credit.dim(), |i, j| {
            if i == j {
                Some(T::zero())
            } else {
                match self.count[(i, j)] {
                    0 => None,
                    count => Some(T::from_f64_lossy(self.credit[(i, j)] as f64 / count as f64)),
                }
            }
        })
    }
}

fn evaluate<T: Scalar>(c: &InfluenceMatrix<T>, set: &[usize], limit: Option<usize>, acc: &mut SimulationResult) {
    let n = c.dim();
    let table = subset_defaults(c, set, limit);
    let full = &table[table.len() - 1];
    for i in (0..n).filter(|i| !set.contains(i)) {
        for &j in set {
            acc.count[(i, j)] += 1;
        }
        if full[i] {
            let union = pivotal_mask(&table, set.len(), i);
            for (b, &j) in set.iter().enumerate() {
                if union >> b & 1 == 1 {
                    acc.credit[(i, j)] += 1;
                }
            }
        }
    }
    acc.sets += 1;
}

/// Runs every planned initial set through the cascade and accumulates the
/// attribution counts. Sets are drawn sequentially and evaluated in parallel;
/// counts are integers, so the result does not depend on scheduling.
pub fn simulate<T: Scalar>(c: &InfluenceMatrix<T>, plan: &SimulationPlan<T>) -> Result<SimulationResult> {
    let n = c.dim();
    let sets = plan.draw(n)?;
    Ok(sets
        .par_iter()
        .fold(
            || SimulationResult::zeros(n),
            |mut acc, set| {
                evaluate(c, set, plan.stages, &mut acc);
                acc
            },
        )
        .reduce(|| SimulationResult::zeros(n), SimulationResult::merge))
}

pub fn lric_sim_vector<T: Scalar>(net: &ExposureNetwork<T>, cstar: &SquareMatrix<Option<T>>) -> Vec<T> {
    weighted_vector(net, |i, j| cstar[(i, j)])
}
