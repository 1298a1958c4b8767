//! Coverings restricted to an explicit list of (path, fault-set) pairs.
//!
//! When the pairs to protect are known in advance, far fewer subgraphs
//! suffice: a strong hash family guarantees that at least half its functions
//! separate each listed pair, so a greedy hitting set over the per-pair
//! separator sets picks `O(log k)` functions that together separate
//! everything. Instantiating just those functions with range subsets gives a
//! covering for the list — not a universal one, and a pair outside the list
//! may well be uncovered.

use crate::dso::greedy_hitting_set;
use crate::graph::{EdgeId, Graph};
use crate::hm::{build_rs_hm, subset_by_rank, subsets_up_to, HashFamily, Provenance};
use crate::rpc::{RestrictedCoord, RpcFamily, RpcMode, RpcSource};
use crate::{Budget, Error, Result};
use serde::{Deserialize, Serialize};

/// One pair to protect: a path (as edge ids) and a disjoint fault set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPair {
    pub path: Vec<EdgeId>,
    pub faults: Vec<EdgeId>,
}

/// The input list for restricted coverings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CriticalList(pub Vec<CriticalPair>);

impl CriticalList {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks sizes and per-pair disjointness against the covering bounds.
    pub fn validate(&self, hop_bound: usize, fault_bound: usize) -> Result<()> {
        for (i, pair) in self.0.iter().enumerate() {
            if pair.path.is_empty() || pair.path.len() > hop_bound {
                return Err(Error::InvalidParameter(format!(
                    "pair {i}: path must have 1..={hop_bound} edges, has {}",
                    pair.path.len()
                )));
            }
            if pair.faults.len() > fault_bound {
                return Err(Error::InvalidParameter(format!(
                    "pair {i}: {} faults exceed the bound {fault_bound}",
                    pair.faults.len()
                )));
            }
            if pair.path.iter().any(|e| pair.faults.contains(e)) {
                return Err(Error::InvalidParameter(format!(
                    "pair {i}: path and fault set overlap"
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<CriticalList> {
        Ok(serde_json::from_value(value.clone())?)
    }
}

/// Indices of hash functions such that every listed pair is separated by at
/// least one of them. Greedy hitting set over the per-pair separator sets,
/// which the strong property makes at least half the family each; the result
/// has at most `ceil(2 ln k) + 1` functions.
pub fn select_function_subset(family: &HashFamily, list: &CriticalList) -> Result<Vec<u64>> {
    let len = family.len() as usize;
    let strong = matches!(
        family.provenance(),
        Provenance::ReedSolomon { strong: true, .. }
    );
    if !strong {
        return Err(Error::InvalidParameter(
            "function selection needs a strong Reed-Solomon family".to_owned(),
        ));
    }
    let mut separator_sets: Vec<Vec<usize>> = Vec::with_capacity(list.len());
    for (idx, pair) in list.0.iter().enumerate() {
        let separators: Vec<usize> = (0..family.len())
            .filter(|&i| {
                pair.path.iter().all(|&x| {
                    pair.faults
                        .iter()
                        .all(|&y| family.evaluate(i, x as u64) != family.evaluate(i, y as u64))
                })
            })
            .map(|i| i as usize)
            .collect();
        if 2 * separators.len() < len {
            return Err(Error::InvalidParameter(format!(
                "pair {idx} separated by {} of {len} functions; family is not strong for it",
                separators.len()
            )));
        }
        separator_sets.push(separators);
    }
    if separator_sets.is_empty() {
        return Ok(Vec::new());
    }
    let chosen = greedy_hitting_set(&separator_sets, len, len.div_ceil(2))?;
    Ok(chosen.into_iter().map(|i| i as u64).collect())
}

/// Builds a covering for the listed pairs only. Requires
/// `hop_bound >= fault_bound`.
///
/// Eager mode instantiates every selected function with all range subsets of
/// size at most `fault_bound`; lazy mode uses only the images of the fault
/// sets actually present in the list (plus the empty set), which tracks the
/// randomized covering value more closely.
pub fn build_restricted_rpc(
    graph: &Graph,
    hop_bound: usize,
    fault_bound: usize,
    list: &CriticalList,
    lazy: bool,
    budget: Budget,
) -> Result<RpcFamily> {
    if hop_bound < fault_bound {
        return Err(Error::WrongRegime {
            expected: "hop_bound >= fault_bound".to_owned(),
            actual: format!("hop_bound={hop_bound}, fault_bound={fault_bound}"),
        });
    }
    list.validate(hop_bound, fault_bound)?;
    let item_count = graph.edge_count();
    let family = build_rs_hm(item_count.max(1) as u64, hop_bound, fault_bound.max(1), true)?;
    let selected = select_function_subset(&family, list)?;

    let per_coord: Vec<RestrictedCoord> = selected
        .iter()
        .map(|&coord| {
            let subsets: Vec<Vec<u64>> = if lazy {
                let mut subsets: Vec<Vec<u64>> = vec![Vec::new()];
                for pair in &list.0 {
                    let mut image: Vec<u64> = pair
                        .faults
                        .iter()
                        .map(|&y| family.evaluate(coord, y as u64))
                        .collect();
                    image.sort_unstable();
                    image.dedup();
                    subsets.push(image);
                }
                subsets.sort();
                subsets.dedup();
                subsets
            } else {
                let total = subsets_up_to(family.alphabet(), fault_bound);
                (0..total)
                    .map(|rank| subset_by_rank(family.alphabet(), fault_bound, rank))
                    .collect()
            };
            RestrictedCoord { coord, subsets }
        })
        .collect();

    crate::rpc::assemble(
        RpcMode::Edge,
        hop_bound,
        fault_bound,
        item_count,
        RpcSource::Restricted { family, per_coord },
        budget,
    )
}

/// Whether some subgraph covers the pair: contains the whole path and none
/// of the faults.
pub fn covers_pair(covering: &RpcFamily, pair: &CriticalPair) -> bool {
    covering
        .subgraphs()
        .iter()
        .any(|sub| sub.contains_all(&pair.path) && sub.avoids_all(&pair.faults))
}

#[derive(Debug, Clone, Serialize)]
pub struct RestrictedReport {
    pub pairs_checked: usize,
    pub uncovered: Vec<usize>,
    pub selected_functions: usize,
}

impl RestrictedReport {
    pub fn passed(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Checks that every listed pair is covered.
pub fn verify_restricted_rpc(covering: &RpcFamily, list: &CriticalList) -> Result<RestrictedReport> {
    let selected_functions = match covering.source() {
        RpcSource::Restricted { per_coord, .. } => per_coord.len(),
        other => {
            return Err(Error::WrongRegime {
                expected: "input-list covering".to_owned(),
                actual: format!("{other:?}"),
            })
        }
    };
    let mut report = RestrictedReport {
        pairs_checked: 0,
        uncovered: Vec::new(),
        selected_functions,
    };
    for (i, pair) in list.0.iter().enumerate() {
        report.pairs_checked += 1;
        if !covers_pair(covering, pair) {
            report.uncovered.push(i);
        }
    }
    Ok(report)
}

/// Subgraphs of a restricted covering avoiding a fixed fault set entirely.
pub fn subgraphs_avoiding(covering: &RpcFamily, faults: &[EdgeId]) -> Vec<usize> {
    covering
        .subgraphs()
        .iter()
        .filter(|sub| sub.avoids_all(faults))
        .map(|sub| sub.index)
        .collect()
}

/// The selected function indices of a restricted covering.
pub fn selected_functions(covering: &RpcFamily) -> Option<Vec<u64>> {
    match covering.source() {
        RpcSource::Restricted { per_coord, .. } => {
            Some(per_coord.iter().map(|c| c.coord).collect())
        }
        _ => None,
    }
}
