//! Key Borrower Index: short-range, pivotality-weighted loan shares.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::ExposureNetwork;
use crate::groups::GroupFinder;
use crate::scalar::Scalar;

/// How a co-member `j` of a critical group contributes to pivotal member `i`.
///
/// Both variants only count co-members with a loan `j -> i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KbiVariant {
    /// `min(p_Lj, p_ji)`: the direct share of `j`, capped by the indirect intensity.
    #[default]
    CappedIndirect,
    /// `p_Lj`: the direct share of `j` alone.
    EdgeGatedDirect,
}

/// Loan shares of one lender and the indirect intensities among its borrowers.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityProfile<T> {
    pub lender: usize,
    /// `(borrower, p_Lk)`, summing to 1.
    pub direct: Vec<(usize, T)>,
    /// `(via j, borrower i, p_ji)` for borrower pairs with a loan `j -> i`.
    pub indirect: Vec<(usize, usize, T)>,
}

fn require_lender<T: Scalar>(net: &ExposureNetwork<T>, lender: usize) -> Result<T> {
    net.check_index(lender)?;
    let total = net.out_strength(lender);
    if total > T::zero() {
        Ok(total)
    } else {
        Err(Error::NotALender(net.id(lender).to_string()))
    }
}

/// `p_Lk = a_Lk / Σ_m a_Lm` for each direct borrower `k`.
pub fn direct_intensity<T: Scalar>(net: &ExposureNetwork<T>, lender: usize) -> Result<Vec<(usize, T)>> {
    let total = require_lender(net, lender)?;
    Ok(net.out_edges(lender).iter().map(|&(k, a)| (k, a / total)).collect())
}

/// `p_ji`: the loan `j -> i` relative to the lender's total, capped at the
/// lender's own loan to `i`; zero unless the lender lends to `j` and `j` lends to `i`.
pub fn indirect_intensity<T: Scalar>(net: &ExposureNetwork<T>, lender: usize, via: usize, borrower: usize) -> Result<T> {
    let total = require_lender(net, lender)?;
    net.check_index(via)?;
    net.check_index(borrower)?;
    if via == borrower || !net.has_edge(lender, via) {
        return Ok(T::zero());
    }
    Ok(net.weight(via, borrower).min(net.weight(lender, borrower)) / total)
}

pub fn intensity_profile<T: Scalar>(net: &ExposureNetwork<T>, lender: usize) -> Result<IntensityProfile<T>> {
    let direct = direct_intensity(net, lender)?;
    let mut indirect = Vec::new();
    for &(j, _) in &direct {
        for &(i, _) in &direct {
            if i != j && net.has_edge(j, i) {
                indirect.push((j, i, indirect_intensity(net, lender, j, i)?));
            }
        }
    }
    Ok(IntensityProfile { lender, direct, indirect })
}

/// Normalized index of one lender's borrowers, dense over all nodes.
///
/// Each critical group contributes, for every pivotal member `i`, the share
/// of `i` plus the contributions of co-members lending to `i`, divided by the
/// group size. Zero everywhere when the lender has no critical group.
pub fn kbi_for_lender<T: Scalar>(finder: &GroupFinder<'_, T>, lender: usize, variant: KbiVariant) -> Result<Vec<T>> {
    let net = finder.network();
    let total = require_lender(net, lender)?;
    let q = finder.threshold(lender)?;
    let mut alpha = vec![T::zero(); net.node_count()];
    finder.for_each_critical_group(lender, |members, loans, group_total| {
        let size = T::from_usize_lossy(members.len());
        for (&i, &a_li) in members.iter().zip(loans) {
            if !(group_total - a_li).below(q) {
                continue;
            }
            let mut intensity = a_li / total;
            for (&j, &a_lj) in members.iter().zip(loans) {
                let a_ji = net.weight(j, i);
                if j == i || a_ji == T::zero() {
                    continue;
                }
                let p_lj = a_lj / total;
                intensity += match variant {
                    KbiVariant::CappedIndirect => p_lj.min(a_ji.min(a_li) / total),
                    KbiVariant::EdgeGatedDirect => p_lj,
                };
            }
            alpha[i] += intensity / size;
        }
    })?;
    let sum: T = alpha.iter().copied().sum();
    if sum > T::zero() {
        for v in alpha.iter_mut() {
            *v /= sum;
        }
    }
    Ok(alpha)
}

/// `Σ_L w_L · kbi_for_lender(L)` with loan-size weights `w_L`.
pub fn kbi<T: Scalar>(finder: &GroupFinder<'_, T>, variant: KbiVariant) -> Result<Vec<T>> {
    let net = finder.network();
    let weights = net.lender_weights();
    let rows: Vec<(usize, Vec<T>)> = (0..net.node_count())
        .into_par_iter()
        .filter(|&l| net.is_lender(l))
        .map(|l| kbi_for_lender(finder, l, variant).map(|row| (l, row)))
        .collect::<Result<_>>()?;
    let mut total = vec![T::zero(); net.node_count()];
    for (l, row) in rows {
        for (t, v) in total.iter_mut().zip(row) {
            *t += weights[l] * v;
        }
    }
    Ok(total)
}
