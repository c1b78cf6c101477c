//! Critical groups of a lender's direct borrowers and their pivotal members.
//!
//! A subset of borrowers is critical when the lender's combined loans to it
//! reach the lender's threshold; a member is pivotal when removing it drops the
//! total strictly below the threshold.

use crate::error::{Error, Result};
use crate::graph::{ExposureNetwork, Thresholds};
use crate::scalar::Scalar;

pub const DEFAULT_ENUMERATION_CAP: usize = 25;

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalGroup<T> {
    pub lender: usize,
    /// Member indices, ascending.
    pub members: Vec<usize>,
    pub total: T,
    /// Pivotal member indices, ascending.
    pub pivotal: Vec<usize>,
}

impl<T> CriticalGroup<T> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_pivotal(&self, node: usize) -> bool {
        self.pivotal.binary_search(&node).is_ok()
    }
}

/// Exact subset enumeration over one network and a resolved threshold vector.
#[derive(Debug, Clone, Copy)]
pub struct GroupFinder<'a, T> {
    net: &'a ExposureNetwork<T>,
    thresholds: &'a Thresholds<T>,
    cap: usize,
}

impl<'a, T: Scalar> GroupFinder<'a, T> {
    pub fn new(net: &'a ExposureNetwork<T>, thresholds: &'a Thresholds<T>) -> Self {
        Self { net, thresholds, cap: DEFAULT_ENUMERATION_CAP }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn network(&self) -> &'a ExposureNetwork<T> {
        self.net
    }

    pub fn threshold(&self, lender: usize) -> Result<T> {
        self.net.check_index(lender)?;
        self.thresholds
            .get(lender)
            .ok_or_else(|| Error::NotALender(self.net.id(lender).to_string()))
    }

    fn loans(&self, lender: usize, group: &[usize]) -> Result<Vec<T>> {
        group
            .iter()
            .map(|&m| {
                self.net.check_index(m)?;
                if self.net.has_edge(lender, m) {
                    Ok(self.net.weight(lender, m))
                } else {
                    Err(Error::NotADirectBorrower {
                        lender: self.net.id(lender).to_string(),
                        member: self.net.id(m).to_string(),
                    })
                }
            })
            .collect()
    }

    pub fn is_critical(&self, lender: usize, group: &[usize]) -> Result<bool> {
        let q = self.threshold(lender)?;
        let total: T = self.loans(lender, group)?.into_iter().sum();
        Ok(!group.is_empty() && total.at_least(q))
    }

    pub fn pivotal_members(&self, lender: usize, group: &[usize]) -> Result<Vec<usize>> {
        let q = self.threshold(lender)?;
        let loans = self.loans(lender, group)?;
        let total: T = loans.iter().copied().sum();
        if group.is_empty() || total.below(q) {
            return Err(Error::NotCritical(self.net.id(lender).to_string()));
        }
        let mut pivotal: Vec<usize> = group
            .iter()
            .zip(&loans)
            .filter(|&(_, &a)| (total - a).below(q))
            .map(|(&m, _)| m)
            .collect();
        pivotal.sort_unstable();
        pivotal.dedup();
        Ok(pivotal)
    }

    fn borrowers(&self, lender: usize) -> Result<&'a [(usize, T)]> {
        let borrowers = self.net.out_edges(lender);
        if borrowers.len() > self.cap {
            return Err(Error::EnumerationCap {
                lender: self.net.id(lender).to_string(),
                degree: borrowers.len(),
                cap: self.cap,
            });
        }
        Ok(borrowers)
    }

    /// Calls `visit(members, loans, total)` once per critical group, in no
    /// particular order; `members` and `loans` are parallel slices.
    pub fn for_each_critical_group(
        &self,
        lender: usize,
        mut visit: impl FnMut(&[usize], &[T], T),
    ) -> Result<()> {
        let q = self.threshold(lender)?;
        let borrowers = self.borrowers(lender)?;
        // suffix[k] = total loans to borrowers k.., used to prune hopeless branches
        let mut suffix = vec![T::zero(); borrowers.len() + 1];
        for k in (0..borrowers.len()).rev() {
            suffix[k] = suffix[k + 1] + borrowers[k].1;
        }
        let mut members = Vec::with_capacity(borrowers.len());
        let mut loans = Vec::with_capacity(borrowers.len());
        descend(borrowers, &suffix, q, 0, T::zero(), &mut members, &mut loans, &mut visit);
        Ok(())
    }

    /// Every critical group of `lender`, ordered by size and then members.
    pub fn critical_groups(&self, lender: usize) -> Result<Vec<CriticalGroup<T>>> {
        let q = self.threshold(lender)?;
        let mut groups = Vec::new();
        self.for_each_critical_group(lender, |members, loans, total| {
            let pivotal = members
                .iter()
                .zip(loans)
                .filter(|&(_, &a)| (total - a).below(q))
                .map(|(&m, _)| m)
                .collect();
            groups.push(CriticalGroup { lender, members: members.to_vec(), total, pivotal });
        })?;
        groups.sort_by(|a, b| a.members.len().cmp(&b.members.len()).then_with(|| a.members.cmp(&b.members)));
        Ok(groups)
    }

    /// For each direct borrower (in `out_edges` order), the smallest total of a
    /// critical group in which it is pivotal.
    pub fn minimal_pivotal_sums(&self, lender: usize) -> Result<Vec<(usize, Option<T>)>> {
        let q = self.threshold(lender)?;
        let borrowers = self.borrowers(lender)?;
        let mut best: Vec<Option<T>> = vec![None; borrowers.len()];
        let position = |node: usize| borrowers.binary_search_by_key(&node, |&(j, _)| j).ok();
        self.for_each_critical_group(lender, |members, loans, total| {
            for (&m, &a) in members.iter().zip(loans) {
                if (total - a).below(q) {
                    let slot = &mut best[position(m).expect("member is a borrower")];
                    if slot.is_none_or(|b| total < b) {
                        *slot = Some(total);
                    }
                }
            }
        })?;
        Ok(borrowers.iter().map(|&(j, _)| j).zip(best).collect())
    }

    pub fn minimal_pivotal_sum(&self, lender: usize, borrower: usize) -> Result<Option<T>> {
        self.loans(lender, &[borrower])?;
        Ok(self
            .minimal_pivotal_sums(lender)?
            .into_iter()
            .find(|&(j, _)| j == borrower)
            .and_then(|(_, s)| s))
    }
}

#[allow(clippy::too_many_arguments)]
fn descend<T: Scalar>(
    borrowers: &[(usize, T)],
    suffix: &[T],
    q: T,
    k: usize,
    total: T,
    members: &mut Vec<usize>,
    loans: &mut Vec<T>,
    visit: &mut impl FnMut(&[usize], &[T], T),
) {
    if (total + suffix[k]).below(q) {
        return;
    }
    if k == borrowers.len() {
        if !members.is_empty() && total.at_least(q) {
            visit(members, loans, total);
        }
        return;
    }
    let (j, a) = borrowers[k];
    members.push(j);
    loans.push(a);
    descend(borrowers, suffix, q, k + 1, total + a, members, loans, visit);
    members.pop();
    loans.pop();
    descend(borrowers, suffix, q, k + 1, total, members, loans, visit);
}
