//! Rankings from score vectors and rank correlation between them.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::scalar::Scalar;

const TIE_TOLERANCE: f64 = 1e-12;

/// Competition ranking: tied scores share a rank and the next rank skips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    /// `(node id, rank)` by ascending rank, then by the input order.
    pub entries: Vec<(String, usize)>,
}

impl Ranking {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rank_of(&self, id: &str) -> Option<usize> {
        self.entries.iter().find(|(n, _)| n == id).map(|&(_, r)| r)
    }

    /// Builds a ranking from explicit ranks; smaller is better.
    pub fn from_ranks(mut entries: Vec<(String, usize)>) -> Self {
        entries.sort_by_key(|&(_, r)| r);
        Self { entries }
    }

    // Ranks aligned with `other`'s node order.
    fn aligned(&self, other: &Ranking) -> Result<(Vec<usize>, Vec<usize>)> {
        if self.len() != other.len() {
            return Err(Error::MismatchedRankings);
        }
        let mut a: Vec<(&str, usize)> = self.entries.iter().map(|(n, r)| (n.as_str(), *r)).collect();
        let mut b: Vec<(&str, usize)> = other.entries.iter().map(|(n, r)| (n.as_str(), *r)).collect();
        a.sort_unstable();
        b.sort_unstable();
        if a.windows(2).any(|w| w[0].0 == w[1].0) || a.iter().zip(&b).any(|(x, y)| x.0 != y.0) {
            return Err(Error::MismatchedRankings);
        }
        Ok((a.into_iter().map(|x| x.1).collect(), b.into_iter().map(|x| x.1).collect()))
    }
}

/// Ranks `scores[k]` of node `ids[k]` in descending order of score.
pub fn rank<T: Scalar>(ids: &[String], scores: &[T]) -> Ranking {
    let tol = T::from_f64_lossy(TIE_TOLERANCE);
    let mut order: Vec<usize> = (0..ids.len().min(scores.len())).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    let mut entries = Vec::with_capacity(order.len());
    let mut current = 0;
    for (pos, &k) in order.iter().enumerate() {
        if pos == 0 || (scores[order[pos - 1]] - scores[k]).abs() > tol {
            current = pos + 1;
        }
        entries.push((ids[k].clone(), current));
    }
    Ranking { entries }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct PairCounts {
    concordant: u64,
    discordant: u64,
    ties_first: u64,
    ties_second: u64,
}

fn pair_counts(a: &[usize], b: &[usize]) -> PairCounts {
    let mut counts = PairCounts::default();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            match (a[i].cmp(&a[j]), b[i].cmp(&b[j])) {
                (Ordering::Equal, Ordering::Equal) => {}
                (Ordering::Equal, _) => counts.ties_first += 1,
                (_, Ordering::Equal) => counts.ties_second += 1,
                (x, y) if x == y => counts.concordant += 1,
                _ => counts.discordant += 1,
            }
        }
    }
    counts
}

/// Tie-corrected Kendall τ_b.
pub fn kendall_tau(r1: &Ranking, r2: &Ranking) -> Result<f64> {
    let (a, b) = r1.aligned(r2)?;
    let c = pair_counts(&a, &b);
    let (nc, nd) = (c.concordant as f64, c.discordant as f64);
    let denom = ((nc + nd + c.ties_first as f64) * (nc + nd + c.ties_second as f64)).sqrt();
    if denom == 0.0 {
        return Err(Error::AllPairsTied);
    }
    Ok((nc - nd) / denom)
}

/// Goodman-Kruskal γ; pairs tied in either ranking are ignored.
pub fn gk_gamma(r1: &Ranking, r2: &Ranking) -> Result<f64> {
    let (a, b) = r1.aligned(r2)?;
    let c = pair_counts(&a, &b);
    let (nc, nd) = (c.concordant as f64, c.discordant as f64);
    if nc + nd == 0.0 {
        return Err(Error::AllPairsTied);
    }
    Ok((nc - nd) / (nc + nd))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    KendallTau,
    Gamma,
}

impl Coefficient {
    pub fn compute(self, r1: &Ranking, r2: &Ranking) -> Result<f64> {
        match self {
            Coefficient::KendallTau => kendall_tau(r1, r2),
            Coefficient::Gamma => gk_gamma(r1, r2),
        }
    }
}

/// Symmetric coefficient matrix with unit diagonal.
pub fn comparison_matrix(rankings: &[Ranking], coefficient: Coefficient) -> Result<SquareMatrix<f64>> {
    if rankings.len() < 2 {
        return Err(Error::TooFewRankings(rankings.len()));
    }
    let k = rankings.len();
    let mut m = SquareMatrix::filled(k, 1.0);
    for i in 0..k {
        for j in i + 1..k {
            let v = coefficient.compute(&rankings[i], &rankings[j])?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}
