//! Path-based long-range influence.
//!
//! Direct influence `c_ij` is the loan `a_ij` over the smallest critical group
//! of `i` in which `j` is pivotal. Indirect influence of `j` on `i` aggregates
//! the simple paths `i -> ... -> j` whose every step has positive influence.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::ExposureNetwork;
use crate::groups::GroupFinder;
use crate::matrix::SquareMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Loans over minimal pivotal group totals.
    Paths,
    /// Loans over the lender's threshold, capped at 1.
    Shares,
}

/// Square matrix of direct influences in `[0, 1]`; rows lend, columns borrow.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceMatrix<T> {
    values: SquareMatrix<T>,
    successors: Vec<Vec<(usize, T)>>,
    provenance: Provenance,
}

impl<T: Scalar> InfluenceMatrix<T> {
    pub fn new(values: SquareMatrix<T>, provenance: Provenance) -> Self {
        let successors = values
            .rows()
            .map(|row| row.iter().enumerate().filter(|&(_, &c)| c > T::zero()).map(|(j, &c)| (j, c)).collect())
            .collect();
        Self { values, successors, provenance }
    }

    pub fn dim(&self) -> usize {
        self.values.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[(i, j)]
    }

    /// Positive entries of row `i`, by column.
    pub fn successors(&self, i: usize) -> &[(usize, T)] {
        &self.successors[i]
    }

    pub fn values(&self) -> &SquareMatrix<T> {
        &self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

/// `c_ij = a_ij / minimal pivotal sum`, zero where `j` is pivotal nowhere.
pub fn influence_matrix<T: Scalar>(finder: &GroupFinder<'_, T>) -> Result<InfluenceMatrix<T>> {
    let net = finder.network();
    let n = net.node_count();
    let rows: Vec<Vec<(usize, T)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            if !net.is_lender(i) {
                return Ok(Vec::new());
            }
            let sums = finder.minimal_pivotal_sums(i)?;
            Ok(sums
                .into_iter()
                .filter_map(|(j, total)| total.map(|t| (j, (net.weight(i, j) / t).min(T::one()))))
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut values = SquareMatrix::filled(n, T::zero());
    for (i, row) in rows.into_iter().enumerate() {
        for (j, c) in row {
            values[(i, j)] = c;
        }
    }
    Ok(InfluenceMatrix::new(values, Provenance::Paths))
}

/// One grade band: values up to `upper` (inclusive or not) that exceed the previous band.
#[derive(Debug, Clone, PartialEq)]
pub struct Grade<T> {
    pub upper: T,
    pub inclusive: bool,
    pub label: String,
}

/// Ordered positive grades for direct influence values; grade 0 is `c = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradeSchema<T> {
    grades: Vec<Grade<T>>,
}

impl<T: Scalar> GradeSchema<T> {
    pub fn new(grades: Vec<Grade<T>>) -> Result<Self> {
        if grades.is_empty() {
            return Err(Error::InvalidGradeSchema("at least one positive grade is required".into()));
        }
        for pair in grades.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let increasing = a.upper < b.upper || (a.upper == b.upper && !a.inclusive && b.inclusive);
            if !increasing {
                return Err(Error::InvalidGradeSchema(format!(
                    "bound {} of grade '{}' does not exceed the previous one",
                    b.upper, b.label
                )));
            }
        }
        let last = grades.last().unwrap();
        if grades[0].upper <= T::zero() || last.upper != T::one() || !last.inclusive {
            return Err(Error::InvalidGradeSchema("bounds must be positive and the last must be 1, inclusive".into()));
        }
        Ok(Self { grades })
    }

    fn build(bands: &[(f64, bool, &str)]) -> Self {
        let grades = bands
            .iter()
            .map(|&(upper, inclusive, label)| Grade { upper: T::from_f64_lossy(upper), inclusive, label: label.into() })
            .collect();
        Self::new(grades).expect("built-in schema is valid")
    }

    /// Four positive grades with inclusive upper bounds 0.25, 0.5, 0.8 and 1.
    pub fn standard() -> Self {
        Self::build(&[(0.25, true, "low"), (0.5, true, "moderate"), (0.8, true, "high"), (1.0, true, "very high")])
    }

    /// Seven positive grades for empirical runs: half-open bands up to 1, then exactly 1.
    pub fn empirical() -> Self {
        Self::build(&[
            (0.25, false, "very low influence"),
            (0.5, false, "low influence"),
            (0.75, false, "moderate influence"),
            (0.85, false, "average influence"),
            (0.92, false, "high influence"),
            (1.0, false, "very high influence"),
            (1.0, true, "ultimately high influence"),
        ])
    }

    pub fn grades(&self) -> &[Grade<T>] {
        &self.grades
    }

    /// Number of positive grades.
    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    /// Grade of `c`, 1 being the lowest positive grade and 0 meaning `c <= 0`.
    pub fn grade_of(&self, c: T) -> usize {
        if c <= T::zero() {
            return 0;
        }
        let eps = T::from_f64_lossy(1e-12).max(T::epsilon() * T::from_f64_lossy(4.0));
        for (k, g) in self.grades.iter().enumerate() {
            let inside = if g.inclusive { c <= g.upper + eps } else { c < g.upper - eps };
            if inside {
                return k + 1;
            }
        }
        self.grades.len()
    }
}

impl<T: Scalar> Default for GradeSchema<T> {
    fn default() -> Self {
        Self::standard()
    }
}

/// A simple path as its node sequence; `len()` counts steps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RhoPath {
    pub nodes: Vec<usize>,
}

impl RhoPath {
    pub fn len(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn steps<T: Scalar>(&self, c: &InfluenceMatrix<T>) -> Vec<T> {
        self.nodes.windows(2).map(|w| c.get(w[0], w[1])).collect()
    }
}

/// Bound on path length; `None` allows every simple path.
pub fn effective_limit(limit: Option<usize>, nodes: usize) -> usize {
    let longest = nodes.saturating_sub(1);
    limit.map_or(longest, |s| s.min(longest)).max(1)
}

/// Every simple path `source -> target` with at most `limit` steps, in
/// lexicographic order of node sequences.
pub fn simple_paths<T: Scalar>(c: &InfluenceMatrix<T>, source: usize, target: usize, limit: Option<usize>) -> Vec<RhoPath> {
    let s = effective_limit(limit, c.dim());
    let mut found = Vec::new();
    if source == target {
        return found;
    }
    let mut on_path = vec![false; c.dim()];
    let mut stack = vec![source];
    on_path[source] = true;
    collect_paths(c, target, s, &mut stack, &mut on_path, &mut found);
    found
}

fn collect_paths<T: Scalar>(
    c: &InfluenceMatrix<T>,
    target: usize,
    s: usize,
    stack: &mut Vec<usize>,
    on_path: &mut [bool],
    found: &mut Vec<RhoPath>,
) {
    let u = *stack.last().unwrap();
    for &(v, _) in c.successors(u) {
        if on_path[v] {
            continue;
        }
        stack.push(v);
        if v == target {
            found.push(RhoPath { nodes: stack.clone() });
        } else if stack.len() <= s {
            on_path[v] = true;
            collect_paths(c, target, s, stack, on_path, found);
            on_path[v] = false;
        }
        stack.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMode {
    Product,
    Min,
}

/// Product or minimum of the step influences.
pub fn path_influence<T: Scalar>(steps: &[T], mode: PathMode) -> T {
    match mode {
        PathMode::Product => steps.iter().fold(T::one(), |acc, &c| acc * c),
        PathMode::Min => steps.iter().copied().fold(T::infinity(), T::min),
    }
}

/// Threshold-rule score `Σ_l v_l (s+1)^(m-l) + s - n`, where `v_l` counts the
/// steps of grade `l`. Lower is a more vulnerable channel.
pub fn path_score_v<T: Scalar>(steps: &[T], schema: &GradeSchema<T>, s: usize) -> Result<u128> {
    let m = schema.len();
    let overflow = || Error::ScoreOverflow { steps: steps.len(), grades: m, limit: s };
    let mut counts = vec![0u128; m + 1];
    for &c in steps {
        counts[schema.grade_of(c)] += 1;
    }
    let base = s as u128 + 1;
    let mut score = (s as u128).checked_sub(steps.len() as u128).ok_or_else(overflow)?;
    for (l, &count) in counts.iter().enumerate().skip(1) {
        let weight = base.checked_pow((m - l) as u32).ok_or_else(overflow)?;
        score = count.checked_mul(weight).and_then(|t| score.checked_add(t)).ok_or_else(overflow)?;
    }
    Ok(score)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathMethod {
    SumPaths,
    MaxPath,
    MaxMin,
    MultT,
    MaxT,
}

impl PathMethod {
    pub const ALL: [PathMethod; 5] =
        [PathMethod::SumPaths, PathMethod::MaxPath, PathMethod::MaxMin, PathMethod::MultT, PathMethod::MaxT];

    pub fn name(self) -> &'static str {
        match self {
            PathMethod::SumPaths => "sumpaths",
            PathMethod::MaxPath => "maxpath",
            PathMethod::MaxMin => "maxmin",
            PathMethod::MultT => "multt",
            PathMethod::MaxT => "maxt",
        }
    }

    pub fn mode(self) -> PathMode {
        match self {
            PathMethod::SumPaths | PathMethod::MaxPath | PathMethod::MultT => PathMode::Product,
            PathMethod::MaxMin | PathMethod::MaxT => PathMode::Min,
        }
    }
}

impl fmt::Display for PathMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PathMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        PathMethod::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown path method '{s}'"))
    }
}

/// A path with its step influences, as fed to [`aggregate_paths`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPath<T> {
    pub nodes: Vec<usize>,
    pub steps: Vec<T>,
}

/// Running aggregates over the paths into one target, for every method at once.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Summary<T> {
    sum_product: T,
    max_product: T,
    max_min: T,
    // (score, steps, product, min) of the chosen threshold-rule path
    chosen: Option<(u128, usize, T, T)>,
}

impl<T: Scalar> Summary<T> {
    fn empty() -> Self {
        Self { sum_product: T::zero(), max_product: T::zero(), max_min: T::zero(), chosen: None }
    }

    // Paths must arrive in lexicographic order so that the earliest one wins ties.
    fn add(&mut self, product: T, min: T, score: u128, steps: usize) {
        self.sum_product += product;
        self.max_product = self.max_product.max(product);
        self.max_min = self.max_min.max(min);
        let better = self.chosen.is_none_or(|(v, len, _, _)| (score, steps) < (v, len));
        if better {
            self.chosen = Some((score, steps, product, min));
        }
    }

    fn value(&self, method: PathMethod) -> T {
        match method {
            PathMethod::SumPaths => self.sum_product.min(T::one()),
            PathMethod::MaxPath => self.max_product,
            PathMethod::MaxMin => self.max_min,
            PathMethod::MultT => self.chosen.map_or(T::zero(), |(_, _, p, _)| p),
            PathMethod::MaxT => self.chosen.map_or(T::zero(), |(_, _, _, m)| m),
        }
    }
}

/// Aggregates the given paths with `method`; lexicographically smallest node
/// sequence breaks threshold-rule ties after the shorter path. No path gives 0.
pub fn aggregate_paths<T: Scalar>(
    paths: &[WeightedPath<T>],
    method: PathMethod,
    schema: &GradeSchema<T>,
    s: usize,
) -> Result<T> {
    let mut ordered: Vec<&WeightedPath<T>> = paths.iter().collect();
    ordered.sort_by(|a, b| a.nodes.cmp(&b.nodes));
    let mut summary = Summary::empty();
    for p in ordered {
        let score = path_score_v(&p.steps, schema, s)?;
        summary.add(path_influence(&p.steps, PathMode::Product), path_influence(&p.steps, PathMode::Min), score, p.steps.len());
    }
    Ok(summary.value(method))
}

/// `C*(s)` for every method, from one enumeration of the paths.
#[derive(Debug, Clone, PartialEq)]
pub struct PathMatrices<T> {
    summaries: SquareMatrix<Summary<T>>,
}

impl<T: Scalar> PathMatrices<T> {
    pub fn compute(c: &InfluenceMatrix<T>, schema: &GradeSchema<T>, limit: Option<usize>) -> Result<Self> {
        let n = c.dim();
        let s = effective_limit(limit, n);
        let rows: Vec<Vec<Summary<T>>> =
            (0..n).into_par_iter().map(|i| summarize_source(c, schema, s, i)).collect::<Result<_>>()?;
        let summaries = SquareMatrix::from_fn(n, |i, j| rows[i][j]);
        Ok(Self { summaries })
    }

    pub fn matrix(&self, method: PathMethod) -> SquareMatrix<T> {
        self.summaries.map(|s| s.value(method))
    }
}

struct Walk<'a, T> {
    c: &'a InfluenceMatrix<T>,
    schema: &'a GradeSchema<T>,
    s: usize,
    on_path: Vec<bool>,
    counts: Vec<usize>,
    out: Vec<Summary<T>>,
}

impl<T: Scalar> Walk<'_, T> {
    fn score(&self, steps: usize) -> Result<u128> {
        let m = self.schema.len();
        let overflow = || Error::ScoreOverflow { steps, grades: m, limit: self.s };
        let base = self.s as u128 + 1;
        let mut score = (self.s - steps) as u128;
        for l in 1..=m {
            let weight = base.checked_pow((m - l) as u32).ok_or_else(overflow)?;
            score = (self.counts[l] as u128)
                .checked_mul(weight)
                .and_then(|t| score.checked_add(t))
                .ok_or_else(overflow)?;
        }
        Ok(score)
    }

    fn descend(&mut self, u: usize, steps: usize, product: T, min: T) -> Result<()> {
        let c = self.c;
        for &(v, cv) in c.successors(u) {
            if self.on_path[v] {
                continue;
            }
            let (p, m) = (product * cv, min.min(cv));
            let grade = self.schema.grade_of(cv);
            self.counts[grade] += 1;
            let score = self.score(steps + 1)?;
            self.out[v].add(p, m, score, steps + 1);
            if steps + 1 < self.s {
                self.on_path[v] = true;
                self.descend(v, steps + 1, p, m)?;
                self.on_path[v] = false;
            }
            self.counts[grade] -= 1;
        }
        Ok(())
    }
}

fn summarize_source<T: Scalar>(c: &InfluenceMatrix<T>, schema: &GradeSchema<T>, s: usize, source: usize) -> Result<Vec<Summary<T>>> {
    let n = c.dim();
    let mut walk = Walk {
        c,
        schema,
        s,
        on_path: vec![false; n],
        counts: vec![0; schema.len() + 1],
        out: vec![Summary::empty(); n],
    };
    walk.on_path[source] = true;
    walk.descend(source, 0, T::one(), T::infinity())?;
    walk.out[source] = Summary::empty();
    Ok(walk.out)
}

/// `C*(s)` for one method.
pub fn lric_paths_matrix<T: Scalar>(
    c: &InfluenceMatrix<T>,
    method: PathMethod,
    schema: &GradeSchema<T>,
    limit: Option<usize>,
) -> Result<SquareMatrix<T>> {
    Ok(PathMatrices::compute(c, schema, limit)?.matrix(method))
}

/// `Σ_i w_i c*_ij` with loan-size weights, normalized to sum 1. Missing
/// entries count as zero; an all-zero total stays all zero.
pub fn weighted_vector<T: Scalar>(net: &ExposureNetwork<T>, entry: impl Fn(usize, usize) -> Option<T>) -> Vec<T> {
    let n = net.node_count();
    let weights = net.lender_weights();
    let mut total = vec![T::zero(); n];
    for (i, &w) in weights.iter().enumerate() {
        if w == T::zero() {
            continue;
        }
        for (j, t) in total.iter_mut().enumerate() {
            if let Some(c) = entry(i, j) {
                *t += w * c;
            }
        }
    }
    let sum: T = total.iter().copied().sum();
    if sum > T::zero() {
        for t in total.iter_mut() {
            *t /= sum;
        }
    }
    total
}

pub fn lric_paths_vector<T: Scalar>(net: &ExposureNetwork<T>, cstar: &SquareMatrix<T>) -> Vec<T> {
    weighted_vector(net, |i, j| Some(cstar[(i, j)]))
}
