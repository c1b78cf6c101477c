//! Weighted directed exposure networks.
//!
//! An edge `i -> j` with weight `a_ij` is a loan from lender `i` to borrower
//! `j`. Stored weights are strictly positive; zero means "no edge". Node
//! indices follow a natural ordering of the ids (numeric ids numerically,
//! everything else lexicographically), so results are independent of the order
//! records arrive in.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One `from,to,weight` input row.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord<T> {
    pub from: String,
    pub to: String,
    pub weight: T,
}

impl<T> EdgeRecord<T> {
    pub fn new(from: impl Into<String>, to: impl Into<String>, weight: T) -> Self {
        Self { from: from.into(), to: to.into(), weight }
    }
}

/// Ordering used for node indices: integer ids first, by value, then the rest.
pub fn compare_ids(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExposureNetwork<T> {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    // Both adjacency lists are sorted by neighbour index.
    out_edges: Vec<Vec<(usize, T)>>,
    in_edges: Vec<Vec<(usize, T)>>,
    attributes: BTreeMap<String, Vec<Option<T>>>,
}

impl<T: Scalar> ExposureNetwork<T> {
    pub fn empty() -> Self {
        NetworkBuilder::new().build()
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_edges.iter().map(Vec::len).sum()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, node: usize) -> &str {
        &self.ids[node]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    pub(crate) fn check_index(&self, node: usize) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeIndexOutOfRange(node))
        }
    }

    /// Outgoing loans of `node` as `(borrower, amount)`, sorted by borrower.
    pub fn out_edges(&self, node: usize) -> &[(usize, T)] {
        &self.out_edges[node]
    }

    /// Incoming loans of `node` as `(lender, amount)`, sorted by lender.
    pub fn in_edges(&self, node: usize) -> &[(usize, T)] {
        &self.in_edges[node]
    }

    /// All edges as `(lender, borrower, amount)` in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.out_edges
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, w)| (i, j, w)))
    }

    /// `a_ij`, zero when there is no edge.
    pub fn weight(&self, from: usize, to: usize) -> T {
        let row = &self.out_edges[from];
        match row.binary_search_by_key(&to, |&(j, _)| j) {
            Ok(pos) => row[pos].1,
            Err(_) => T::zero(),
        }
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out_edges[from].binary_search_by_key(&to, |&(j, _)| j).is_ok()
    }

    pub fn out_strength(&self, node: usize) -> T {
        self.out_edges[node].iter().map(|&(_, w)| w).sum()
    }

    pub fn in_strength(&self, node: usize) -> T {
        self.in_edges[node].iter().map(|&(_, w)| w).sum()
    }

    pub fn out_strength_of(&self, id: &str) -> Result<T> {
        Ok(self.out_strength(self.require(id)?))
    }

    pub fn in_strength_of(&self, id: &str) -> Result<T> {
        Ok(self.in_strength(self.require(id)?))
    }

    pub fn is_lender(&self, node: usize) -> bool {
        !self.out_edges[node].is_empty()
    }

    /// Loan-size weights `out(i) / sum_k out(k)`; all zero on an edgeless network.
    pub fn lender_weights(&self) -> Vec<T> {
        let strengths: Vec<T> = (0..self.node_count()).map(|i| self.out_strength(i)).collect();
        let total: T = strengths.iter().copied().sum();
        if total > T::zero() {
            strengths.into_iter().map(|s| s / total).collect()
        } else {
            vec![T::zero(); self.node_count()]
        }
    }

    pub fn attribute_names(&self) -> impl Iterator<Item = &str> {
        self.attributes.keys().map(String::as_str)
    }

    pub fn attribute(&self, name: &str, node: usize) -> Option<T> {
        self.attributes.get(name).and_then(|values| values[node])
    }

    pub fn attribute_column(&self, name: &str) -> Option<&[Option<T>]> {
        self.attributes.get(name).map(Vec::as_slice)
    }

    /// True when no pair carries loans in both directions.
    pub fn is_netted(&self) -> bool {
        self.edges().all(|(i, j, _)| !self.has_edge(j, i))
    }

    /// Replaces every mutual pair `a_ij, a_ji` by `max(0, a_ij - a_ji)` on one side.
    pub fn net_mutual_exposures(&self) -> Self {
        let mut builder = self.skeleton();
        for (i, j, w) in self.edges() {
            let net = w - self.weight(j, i);
            if net > T::zero() {
                builder.push_edge(i, j, net);
            }
        }
        builder.finish()
    }

    /// Divides each loan by its lender's attribute value, keeping the attributes.
    pub fn normalize_by_attribute(&self, name: &str) -> Result<Self> {
        let mut builder = self.skeleton();
        for i in 0..self.node_count() {
            if !self.is_lender(i) {
                continue;
            }
            let scale = self.positive_attribute(name, i)?;
            for &(j, w) in self.out_edges(i) {
                builder.push_edge(i, j, w / scale);
            }
        }
        Ok(builder.finish())
    }

    /// Multiplies every weight by `factor > 0`.
    pub fn scaled(&self, factor: T) -> Self {
        let mut builder = self.skeleton();
        for (i, j, w) in self.edges() {
            builder.push_edge(i, j, w * factor);
        }
        builder.finish()
    }

    pub(crate) fn positive_attribute(&self, name: &str, node: usize) -> Result<T> {
        match self.attribute(name, node) {
            Some(v) if v > T::zero() => Ok(v),
            _ => Err(Error::MissingAttribute {
                attribute: name.to_string(),
                node: self.ids[node].clone(),
            }),
        }
    }

    fn skeleton(&self) -> IndexedBuilder<T> {
        IndexedBuilder {
            ids: self.ids.clone(),
            index: self.index.clone(),
            attributes: self.attributes.clone(),
            edges: Vec::new(),
        }
    }
}

impl<T: Scalar> Default for ExposureNetwork<T> {
    fn default() -> Self {
        Self::empty()
    }
}

// Rebuilds a network over an existing, already ordered node set.
struct IndexedBuilder<T> {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    attributes: BTreeMap<String, Vec<Option<T>>>,
    edges: Vec<(usize, usize, T)>,
}

impl<T: Scalar> IndexedBuilder<T> {
    fn push_edge(&mut self, from: usize, to: usize, weight: T) {
        self.edges.push((from, to, weight));
    }

    fn finish(self) -> ExposureNetwork<T> {
        let n = self.ids.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (i, j, w) in self.edges {
            out_edges[i].push((j, w));
            in_edges[j].push((i, w));
        }
        for row in out_edges.iter_mut().chain(in_edges.iter_mut()) {
            row.sort_by_key(|&(k, _)| k);
        }
        ExposureNetwork { ids: self.ids, index: self.index, out_edges, in_edges, attributes: self.attributes }
    }
}

/// Accumulates edges, extra nodes and attributes, then orders the node set.
#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder<T> {
    nodes: BTreeMap<String, ()>,
    edges: BTreeMap<(String, String), T>,
    attributes: BTreeMap<String, HashMap<String, T>>,
}

impl<T: Scalar> NetworkBuilder<T> {
    pub fn new() -> Self {
        Self { nodes: BTreeMap::new(), edges: BTreeMap::new(), attributes: BTreeMap::new() }
    }

    pub fn add_node(&mut self, id: impl Into<String>) -> &mut Self {
        self.nodes.insert(id.into(), ());
        self
    }

    /// Adds a loan; parallel records are summed and zero weights only register the nodes.
    pub fn add_edge(&mut self, from: &str, to: &str, weight: T) -> Result<&mut Self> {
        if !weight.is_finite() {
            return Err(Error::NonFiniteWeight { from: from.to_string(), to: to.to_string() });
        }
        if weight < T::zero() {
            return Err(Error::NegativeWeight {
                from: from.to_string(),
                to: to.to_string(),
                weight: weight.to_f64_lossy(),
            });
        }
        if from == to {
            return Err(Error::SelfLoop(from.to_string()));
        }
        self.add_node(from);
        self.add_node(to);
        if weight > T::zero() {
            *self.edges.entry((from.to_string(), to.to_string())).or_insert_with(T::zero) += weight;
        }
        Ok(self)
    }

    pub fn set_attribute(&mut self, node: &str, name: &str, value: T) -> &mut Self {
        self.add_node(node);
        self.attributes.entry(name.to_string()).or_default().insert(node.to_string(), value);
        self
    }

    /// Registers an attribute column even when every cell is missing.
    pub fn declare_attribute(&mut self, name: &str) -> &mut Self {
        self.attributes.entry(name.to_string()).or_default();
        self
    }

    pub fn build(self) -> ExposureNetwork<T> {
        let mut ids: Vec<String> = self.nodes.into_keys().collect();
        ids.sort_by(|a, b| compare_ids(a, b));
        let index: HashMap<String, usize> = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        let attributes = self
            .attributes
            .into_iter()
            .map(|(name, values)| {
                let mut column = vec![None; ids.len()];
                for (node, v) in values {
                    column[index[&node]] = Some(v);
                }
                (name, column)
            })
            .collect();
        let edges = self.edges.into_iter().map(|((f, t), w)| (index[&f], index[&t], w)).collect();
        IndexedBuilder { ids, index, attributes, edges }.finish()
    }
}

/// Builds a network from edge records, summing duplicate `(from, to)` pairs.
pub fn ingest_edges<T: Scalar>(records: &[EdgeRecord<T>]) -> Result<ExposureNetwork<T>> {
    let mut builder = NetworkBuilder::new();
    for r in records {
        builder.add_edge(&r.from, &r.to, r.weight)?;
    }
    Ok(builder.build())
}

/// Rule producing each lender's critical loan amount `q_i`.
#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdPolicy<T> {
    /// `q_i = fraction * out_strength(i)`.
    OutShareQuota(T),
    /// `q_i = fraction * attribute(i)`.
    AttributeShare { attribute: String, fraction: T },
    /// Explicit `q_i` per node id.
    Absolute(HashMap<String, T>),
}

impl<T: Scalar> ThresholdPolicy<T> {
    fn check_fraction(fraction: T) -> Result<()> {
        if fraction > T::zero() && fraction <= T::one() {
            Ok(())
        } else {
            Err(Error::InvalidFraction(fraction.to_f64_lossy()))
        }
    }

    /// `q_i`, or `None` for nodes that lend nothing (they can never cascade-default).
    pub fn threshold(&self, net: &ExposureNetwork<T>, node: usize) -> Result<Option<T>> {
        net.check_index(node)?;
        if !net.is_lender(node) {
            return Ok(None);
        }
        match self {
            ThresholdPolicy::OutShareQuota(fraction) => {
                Self::check_fraction(*fraction)?;
                Ok(Some(*fraction * net.out_strength(node)))
            }
            ThresholdPolicy::AttributeShare { attribute, fraction } => {
                Self::check_fraction(*fraction)?;
                Ok(Some(*fraction * net.positive_attribute(attribute, node)?))
            }
            ThresholdPolicy::Absolute(values) => match values.get(net.id(node)) {
                Some(&q) if q > T::zero() => Ok(Some(q)),
                _ => Err(Error::MissingAttribute {
                    attribute: "absolute threshold".to_string(),
                    node: net.id(node).to_string(),
                }),
            },
        }
    }

    /// Evaluates the policy for every node, failing on the first infeasible lender.
    pub fn resolve(&self, net: &ExposureNetwork<T>) -> Result<Thresholds<T>> {
        let values = (0..net.node_count()).map(|i| self.threshold(net, i)).collect::<Result<_>>()?;
        Ok(Thresholds { values })
    }
}

/// Resolved per-node thresholds; `None` marks nodes without a threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds<T> {
    values: Vec<Option<T>>,
}

impl<T: Scalar> Thresholds<T> {
    pub fn from_values(values: Vec<Option<T>>) -> Self {
        Self { values }
    }

    pub fn get(&self, node: usize) -> Option<T> {
        self.values.get(node).copied().flatten()
    }

    pub fn values(&self) -> &[Option<T>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Divides each threshold by the node's attribute, matching a network
    /// passed through [`ExposureNetwork::normalize_by_attribute`].
    pub fn normalized_by(&self, net: &ExposureNetwork<T>, attribute: &str) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, q)| match q {
                Some(q) => Ok(Some(*q / net.positive_attribute(attribute, i)?)),
                None => Ok(None),
            })
            .collect::<Result<_>>()?;
        Ok(Self { values })
    }
}
