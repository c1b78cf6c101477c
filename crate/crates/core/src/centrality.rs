//! Classical node centralities on weighted digraphs.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::ExposureNetwork;
use crate::scalar::Scalar;

pub const DEFAULT_DAMPING: f64 = 0.85;
const EIGEN_TOLERANCE: f64 = 1e-10;
const EIGEN_MAX_ITERATIONS: usize = 100_000;
const PAGERANK_TOLERANCE: f64 = 1e-12;
const PAGERANK_MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Distances from every other node toward this one.
    In,
    /// Distances from this node to every other one.
    Out,
}

/// Raw weighted degree measures, one entry per node.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeMeasures<T> {
    pub win: Vec<T>,
    pub wout: Vec<T>,
    pub wdiff: Vec<T>,
    pub wdeg: Vec<T>,
}

pub fn degree_measures<T: Scalar>(net: &ExposureNetwork<T>) -> DegreeMeasures<T> {
    let n = net.node_count();
    let win: Vec<T> = (0..n).map(|i| net.in_strength(i)).collect();
    let wout: Vec<T> = (0..n).map(|i| net.out_strength(i)).collect();
    let wdiff = wout.iter().zip(&win).map(|(&o, &i)| o - i).collect();
    let wdeg = wout.iter().zip(&win).map(|(&o, &i)| o + i).collect();
    DegreeMeasures { win, wout, wdiff, wdeg }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapEntry<T> {
    dist: T,
    node: usize,
}

impl<T: PartialEq> Eq for HeapEntry<T> {}

impl<T: PartialOrd> Ord for HeapEntry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl<T: PartialOrd> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra<T: Scalar>(net: &ExposureNetwork<T>, source: usize, direction: Direction) -> Vec<Option<T>> {
    let mut dist: Vec<Option<T>> = vec![None; net.node_count()];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(T::zero());
    heap.push(HeapEntry { dist: T::zero(), node: source });
    while let Some(HeapEntry { dist: d, node }) = heap.pop() {
        if dist[node].is_some_and(|best| d > best) {
            continue;
        }
        let edges = match direction {
            Direction::Out => net.out_edges(node),
            Direction::In => net.in_edges(node),
        };
        for &(next, w) in edges {
            let candidate = d + w;
            if dist[next].is_none_or(|cur| candidate < cur) {
                dist[next] = Some(candidate);
                heap.push(HeapEntry { dist: candidate, node: next });
            }
        }
    }
    dist
}

/// `1 / Σ_j d(i, j)` with weights as distances. An unreachable node counts as
/// distance `n` (the vertex count); a graph with one node gives 0.
pub fn closeness<T: Scalar>(net: &ExposureNetwork<T>, direction: Direction) -> Vec<T> {
    let n = net.node_count();
    let penalty = T::from_usize_lossy(n);
    (0..n)
        .into_par_iter()
        .map(|i| {
            if n < 2 {
                return T::zero();
            }
            let farness: T = dijkstra(net, i, direction)
                .into_iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, d)| d.unwrap_or(penalty))
                .sum();
            if farness > T::zero() {
                T::one() / farness
            } else {
                T::zero()
            }
        })
        .collect()
}

fn close<T: Scalar>(a: T, b: T) -> bool {
    let scale = T::one().max(a.abs()).max(b.abs());
    (a - b).abs() <= T::tolerance() * scale
}

/// Brandes accumulation from one source. Geodesics are the paths with the
/// fewest steps; among those, the ones carrying the largest total weight.
fn source_dependencies<T: Scalar>(net: &ExposureNetwork<T>, source: usize) -> Vec<T> {
    let n = net.node_count();
    let mut hops: Vec<Option<usize>> = vec![None; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    hops[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &(v, _) in net.out_edges(u) {
            if hops[v].is_none() {
                hops[v] = Some(hops[u].unwrap() + 1);
                queue.push_back(v);
            }
        }
    }

    // BFS order visits layers in sequence, so every predecessor is final
    // before its successors are relaxed.
    let mut best: Vec<T> = vec![T::zero(); n];
    let mut sigma: Vec<T> = vec![T::zero(); n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    sigma[source] = T::one();
    for &v in order.iter().skip(1) {
        let layer = hops[v].unwrap();
        let candidates: Vec<(usize, T)> = net
            .in_edges(v)
            .iter()
            .filter(|&&(u, _)| hops[u] == Some(layer - 1))
            .map(|&(u, w)| (u, best[u] + w))
            .collect();
        let top = candidates.iter().map(|&(_, t)| t).fold(T::neg_infinity(), T::max);
        best[v] = top;
        for (u, t) in candidates {
            if close(t, top) {
                preds[v].push(u);
                let through = sigma[u];
                sigma[v] += through;
            }
        }
    }

    let mut delta: Vec<T> = vec![T::zero(); n];
    for &w in order.iter().rev() {
        for &u in &preds[w] {
            let share = sigma[u] / sigma[w] * (T::one() + delta[w]);
            delta[u] += share;
        }
    }
    delta[source] = T::zero();
    delta
}

/// Unnormalized betweenness over ordered pairs of distinct reachable nodes.
pub fn betweenness<T: Scalar>(net: &ExposureNetwork<T>) -> Vec<T> {
    let n = net.node_count();
    let per_source: Vec<Vec<T>> = (0..n).into_par_iter().map(|s| source_dependencies(net, s)).collect();
    let mut total = vec![T::zero(); n];
    for delta in per_source {
        for (t, d) in total.iter_mut().zip(delta) {
            *t += d;
        }
    }
    total
}

/// Principal eigenvector of the symmetrised weight matrix `A + Aᵀ`, scaled so
/// that its largest entry is 1.
pub fn eigenvector<T: Scalar>(net: &ExposureNetwork<T>) -> Result<Vec<T>> {
    let n = net.node_count();
    if net.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let mut neighbours: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    for (i, j, w) in net.edges() {
        neighbours[i].push((j, w));
        neighbours[j].push((i, w));
    }
    // Shifting by the largest row sum makes the spectrum nonnegative, which
    // rules out the oscillation power iteration shows on bipartite graphs.
    let shift = neighbours
        .iter()
        .map(|row| row.iter().map(|&(_, w)| w).sum::<T>())
        .fold(T::zero(), T::max);
    let tolerance = T::from_f64_lossy(EIGEN_TOLERANCE).max(T::epsilon() * T::from_f64_lossy(16.0));

    let mut x = vec![T::one(); n];
    let mut residual = T::infinity();
    for _ in 0..EIGEN_MAX_ITERATIONS {
        let mut next: Vec<T> = (0..n)
            .map(|i| shift * x[i] + neighbours[i].iter().map(|&(j, w)| w * x[j]).sum::<T>())
            .collect();
        let top = next.iter().copied().fold(T::zero(), T::max);
        for v in next.iter_mut() {
            *v /= top;
        }
        residual = next.iter().zip(&x).map(|(&a, &b)| (a - b).abs()).fold(T::zero(), T::max);
        x = next;
        if residual <= tolerance {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { iterations: EIGEN_MAX_ITERATIONS, residual: residual.to_f64_lossy() })
}

/// Weighted PageRank with uniform redistribution of dangling mass.
pub fn pagerank<T: Scalar>(net: &ExposureNetwork<T>, damping: T) -> Result<Vec<T>> {
    if !(damping > T::zero() && damping < T::one()) {
        return Err(Error::InvalidDamping(damping.to_f64_lossy()));
    }
    let n = net.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let nf = T::from_usize_lossy(n);
    let strengths: Vec<T> = (0..n).map(|i| net.out_strength(i)).collect();
    let tolerance = T::from_f64_lossy(PAGERANK_TOLERANCE).max(T::epsilon() * nf);
    let mut rank = vec![T::one() / nf; n];
    for _ in 0..PAGERANK_MAX_ITERATIONS {
        let dangling: T = (0..n).filter(|&i| strengths[i] == T::zero()).map(|i| rank[i]).sum();
        let base = (T::one() - damping) / nf + damping * dangling / nf;
        let mut next = vec![base; n];
        for (i, j, w) in net.edges() {
            next[j] += damping * rank[i] * w / strengths[i];
        }
        let total: T = next.iter().copied().sum();
        for v in next.iter_mut() {
            *v /= total;
        }
        let change: T = next.iter().zip(&rank).map(|(&a, &b)| (a - b).abs()).sum();
        rank = next;
        if change <= tolerance {
            break;
        }
    }
    Ok(rank)
}

/// Every classical measure for every node.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityTable<T> {
    pub degrees: DegreeMeasures<T>,
    pub clos_in: Vec<T>,
    pub clos_out: Vec<T>,
    pub betw: Vec<T>,
    pub eig: Vec<T>,
    pub pagerank: Vec<T>,
}

impl<T: Scalar> CentralityTable<T> {
    pub fn compute(net: &ExposureNetwork<T>) -> Result<Self> {
        Ok(Self {
            degrees: degree_measures(net),
            clos_in: closeness(net, Direction::In),
            clos_out: closeness(net, Direction::Out),
            betw: betweenness(net),
            eig: eigenvector(net)?,
            pagerank: pagerank(net, T::from_f64_lossy(DEFAULT_DAMPING))?,
        })
    }
}
