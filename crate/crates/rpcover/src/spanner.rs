//! Vertex-fault-tolerant spanners by covering conversion.
//!
//! Running a fault-free spanner algorithm inside every subgraph of a
//! vertex-mode covering and taking the union yields a fault-tolerant
//! spanner: for any surviving edge of a replacement path there is a subgraph
//! containing both endpoints and none of the faults, and the per-subgraph
//! spanner preserves the edge up to its stretch. The multiplicative
//! conversion covers single edges (vertex bound 2); the nearly-additive one
//! covers `L`-edge segments of unweighted paths (vertex bound `L + 2` is not
//! needed — segments of `L` edges have `L + 1` vertices).

use crate::graph::{sssp, EdgeId, Graph, VertexId, Weight, INFINITY};
use crate::hm::for_each_index_subset;
use crate::rpc::{build_rpc, FamilyKind, RpcFamily, RpcMode};
use crate::{Budget, Error, Result};
use serde::Serialize;

/// Stretch guarantee carried by a spanner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StretchContract {
    /// `dist_H <= factor * dist_G` under every admissible fault set.
    Multiplicative { factor: u64 },
    /// `dist_H <= (mult + eps_num/eps_den) * dist_G + additive`.
    NearlyAdditive {
        mult: u64,
        eps_num: u64,
        eps_den: u64,
        additive: u64,
    },
}

/// A fault-tolerant spanner: the kept edges, the promised stretch, and which
/// covering subgraph contributed which edges.
#[derive(Debug, Clone)]
pub struct SpannerResult {
    pub edges: Vec<EdgeId>,
    pub contract: StretchContract,
    pub fault_bound: usize,
    pub covering_value: usize,
    pub per_subgraph: Vec<Vec<EdgeId>>,
}

impl SpannerResult {
    pub fn stats_json(&self) -> serde_json::Value {
        serde_json::json!({
            "edges": self.edges.len(),
            "covering_value": self.covering_value,
            "fault_bound": self.fault_bound,
            "contract": self.contract,
        })
    }
}

fn require_undirected_positive(graph: &Graph) -> Result<()> {
    if graph.is_directed() {
        return Err(Error::InvalidParameter(
            "spanners are built on undirected graphs".to_owned(),
        ));
    }
    if graph.edges().iter().any(|e| e.weight == 0) {
        return Err(Error::InvalidParameter(
            "spanner construction needs positive weights".to_owned(),
        ));
    }
    Ok(())
}

/// Classic greedy `(2k-1)`-spanner: scan edges by nondecreasing weight
/// (edge-id tie-break) and keep an edge iff the spanner built so far has no
/// route of weight at most `(2k-1) * w(e)` between its endpoints.
pub fn greedy_spanner(graph: &Graph, k: usize) -> Result<Vec<EdgeId>> {
    if k == 0 {
        return Err(Error::InvalidParameter("spanner parameter k >= 1".to_owned()));
    }
    require_undirected_positive(graph)?;
    let factor = (2 * k - 1) as u64;
    let mut order: Vec<&crate::graph::Edge> = graph.edges().iter().collect();
    order.sort_by_key(|e| (e.weight, e.id));
    let mut kept: Vec<EdgeId> = Vec::new();
    let mut partial = Graph::new(graph.vertex_count(), false);
    for e in order {
        let dist = sssp(&partial, e.u)[e.v];
        let allowance = factor.saturating_mul(e.weight).min(INFINITY);
        if dist > allowance {
            kept.push(e.id);
            partial.add_edge(e.u, e.v, e.weight)?;
        }
    }
    kept.sort_unstable();
    Ok(kept)
}

fn union_spanner(
    graph: &Graph,
    covering: &RpcFamily,
    fault_bound: usize,
    contract: StretchContract,
    base: &mut dyn FnMut(&Graph) -> Result<Vec<EdgeId>>,
) -> Result<SpannerResult> {
    let mut per_subgraph = Vec::with_capacity(covering.covering_value());
    let mut union: Vec<EdgeId> = Vec::new();
    for sub in covering.subgraphs() {
        let piece = base(&sub.materialize(graph, RpcMode::Vertex))?;
        union.extend_from_slice(&piece);
        per_subgraph.push(piece);
    }
    union.sort_unstable();
    union.dedup();
    Ok(SpannerResult {
        edges: union,
        contract,
        fault_bound,
        covering_value: covering.covering_value(),
        per_subgraph,
    })
}

/// Fault-tolerant `(2k-1)`-spanner: run the greedy spanner inside every
/// subgraph of a vertex covering with bound 2 (single edges plus their
/// endpoints) and union the outputs.
pub fn ft_multiplicative_spanner(
    graph: &Graph,
    k: usize,
    fault_bound: usize,
    budget: Budget,
) -> Result<SpannerResult> {
    require_undirected_positive(graph)?;
    let covering = build_rpc(
        graph,
        2,
        fault_bound,
        RpcMode::Vertex,
        FamilyKind::ReedSolomon,
        fault_bound > 2,
        budget,
    )?;
    let contract = StretchContract::Multiplicative {
        factor: (2 * k - 1) as u64,
    };
    union_spanner(graph, &covering, fault_bound, contract, &mut |g| {
        greedy_spanner(g, k)
    })
}

/// Fault-tolerant nearly-additive spanner from a pluggable `(mult,
/// additive)` base algorithm. With `L = ceil(additive / eps) + 1`, a vertex
/// covering of bound `L + 1` preserves every `L`-edge segment, and summing
/// segment stretches gives `(mult + eps, additive)` overall. Requires
/// `fault_bound <= L` and an unweighted graph (the segment count argument
/// measures distance in edges).
pub fn ft_additive_spanner(
    graph: &Graph,
    fault_bound: usize,
    eps_num: u64,
    eps_den: u64,
    base_mult: u64,
    base_additive: u64,
    base: &mut dyn FnMut(&Graph) -> Result<Vec<EdgeId>>,
    budget: Budget,
) -> Result<SpannerResult> {
    require_undirected_positive(graph)?;
    if eps_num == 0 || eps_den == 0 {
        return Err(Error::InvalidParameter("eps must be positive".to_owned()));
    }
    if graph.edges().iter().any(|e| e.weight != 1) {
        return Err(Error::InvalidParameter(
            "nearly-additive conversion needs an unweighted graph".to_owned(),
        ));
    }
    let segment_len = (base_additive.saturating_mul(eps_den)).div_ceil(eps_num) as usize + 1;
    if fault_bound > segment_len {
        return Err(Error::InvalidParameter(format!(
            "fault bound {fault_bound} exceeds the segment length {segment_len}"
        )));
    }
    let covering = build_rpc(
        graph,
        segment_len + 1,
        fault_bound,
        RpcMode::Vertex,
        FamilyKind::ReedSolomon,
        false,
        budget,
    )?;
    let contract = StretchContract::NearlyAdditive {
        mult: base_mult,
        eps_num,
        eps_den,
        additive: base_additive,
    };
    union_spanner(graph, &covering, fault_bound, contract, base)
}

#[derive(Debug, Clone, Serialize)]
pub struct StretchViolation {
    pub source: VertexId,
    pub target: VertexId,
    pub faults: Vec<VertexId>,
    pub graph_distance: Weight,
    pub spanner_distance: Weight,
}

#[derive(Debug, Clone, Serialize)]
pub struct StretchReport {
    pub fault_sets_checked: u64,
    pub pairs_checked: u64,
    /// Largest observed `(dist_H - additive) / dist_G` over finite pairs.
    pub worst_stretch: f64,
    pub violations: Vec<StretchViolation>,
}

impl StretchReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively checks the stretch contract over every vertex fault set of
/// size at most the result's fault bound and every vertex pair.
pub fn verify_ft_spanner(
    graph: &Graph,
    result: &SpannerResult,
    budget: Budget,
) -> Result<StretchReport> {
    let n = graph.vertex_count();
    let spanner = graph.restrict_edges(|e| result.edges.binary_search(&e.id).is_ok());
    for id in &result.edges {
        if graph.edge(*id).is_none() {
            return Err(Error::InvalidParameter(format!(
                "spanner edge {id} does not exist in the graph"
            )));
        }
    }
    let fault_sets: u128 = (0..=result.fault_bound as u64)
        .map(|j| crate::hm::binomial(n as u64, j))
        .sum();
    budget.check(
        fault_sets
            .saturating_mul((n * n) as u128)
            .min(u64::MAX as u128) as u64,
        "spanner stretch verification",
    )?;

    let mut report = StretchReport {
        fault_sets_checked: 0,
        pairs_checked: 0,
        worst_stretch: 0.0,
        violations: Vec::new(),
    };
    let mut check_fault_set = |faults: &[usize]| {
        report.fault_sets_checked += 1;
        let mut retained = vec![true; n];
        for &v in faults {
            retained[v] = false;
        }
        let g_stripped = graph.induced(&retained);
        let h_stripped = spanner.induced(&retained);
        for s in 0..n {
            if faults.contains(&s) {
                continue;
            }
            let dg = sssp(&g_stripped, s);
            let dh = sssp(&h_stripped, s);
            for t in (s + 1)..n {
                if faults.contains(&t) || dg[t] >= INFINITY {
                    continue;
                }
                report.pairs_checked += 1;
                let ok = match result.contract {
                    StretchContract::Multiplicative { factor } => {
                        dh[t] <= factor.saturating_mul(dg[t])
                    }
                    StretchContract::NearlyAdditive {
                        mult,
                        eps_num,
                        eps_den,
                        additive,
                    } => {
                        // eps_den * dist_H <= (eps_den*mult + eps_num) * dist_G
                        //                     + eps_den * additive, exactly.
                        let lhs = (eps_den as u128).saturating_mul(dh[t] as u128);
                        let rhs = (eps_den as u128 * mult as u128 + eps_num as u128)
                            .saturating_mul(dg[t] as u128)
                            + eps_den as u128 * additive as u128;
                        lhs <= rhs
                    }
                };
                if dh[t] < INFINITY && dg[t] > 0 {
                    let additive = match result.contract {
                        StretchContract::Multiplicative { .. } => 0,
                        StretchContract::NearlyAdditive { additive, .. } => additive,
                    };
                    let excess = dh[t].saturating_sub(additive) as f64 / dg[t] as f64;
                    if excess > report.worst_stretch {
                        report.worst_stretch = excess;
                    }
                }
                if !ok {
                    report.violations.push(StretchViolation {
                        source: s,
                        target: t,
                        faults: faults.to_vec(),
                        graph_distance: dg[t],
                        spanner_distance: dh[t],
                    });
                }
            }
        }
    };
    check_fault_set(&[]);
    for_each_index_subset(n, result.fault_bound, &mut check_fault_set);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FaultSet;
    use crate::rpc::RpcSource;

    #[test]
    fn greedy_drops_shortcut_edges() {
        // Triangle 1,1,3 with k=1: the weight-3 edge has a 2-weight detour,
        // 2 <= 1*3, so it is dropped.
        let mut g = Graph::new(3, false);
        g.add_edge(0, 1, 1).unwrap();
        g.add_edge(1, 2, 1).unwrap();
        g.add_edge(0, 2, 3).unwrap();
        assert_eq!(greedy_spanner(&g, 1).unwrap(), vec![0, 1]);
        // With unique weights and no shortcuts, k=1 keeps everything.
        let mut h = Graph::new(3, false);
        h.add_edge(0, 1, 1).unwrap();
        h.add_edge(1, 2, 2).unwrap();
        assert_eq!(greedy_spanner(&h, 1).unwrap(), vec![0, 1]);
    }

    #[test]
    fn greedy_stretch_verified_against_apsp() {
        for seed in 0..50u64 {
            let n = 6 + (seed % 5) as usize;
            let g = Graph::random(n, 3 * n, 9, false, seed);
            for k in 1..=3usize {
                let spanner_edges = greedy_spanner(&g, k).unwrap();
                let h = g.restrict_edges(|e| spanner_edges.binary_search(&e.id).is_ok());
                let factor = (2 * k - 1) as u64;
                for s in 0..n {
                    let dg = sssp(&g, s);
                    let dh = sssp(&h, s);
                    for t in 0..n {
                        if dg[t] < INFINITY {
                            assert!(
                                dh[t] <= factor * dg[t],
                                "seed={seed} k={k} s={s} t={t}"
                            );
                        }
                    }
                }
                // Size bound n * (1 + n^(1/k)).
                let cap = n as f64 * (1.0 + (n as f64).powf(1.0 / k as f64));
                assert!((spanner_edges.len() as f64) < cap);
            }
        }
    }

    #[test]
    fn zero_faults_reduces_to_plain_greedy() {
        let g = Graph::random(8, 16, 7, false, 3);
        let result = ft_multiplicative_spanner(&g, 2, 0, Budget::default()).unwrap();
        assert_eq!(result.covering_value, 1);
        assert_eq!(result.edges, greedy_spanner(&g, 2).unwrap());
    }

    #[test]
    fn multiplicative_spanner_verifies_exhaustively() {
        for seed in [1u64, 7] {
            let g = Graph::random(8, 15, 6, false, seed);
            for k in [1usize, 2] {
                for f in [1usize, 2] {
                    let result =
                        ft_multiplicative_spanner(&g, k, f, Budget::default()).unwrap();
                    let report = verify_ft_spanner(&g, &result, Budget::default()).unwrap();
                    assert!(
                        report.passed(),
                        "seed={seed} k={k} f={f}: {:?}",
                        report.violations.first()
                    );
                    assert!(report.worst_stretch <= (2 * k - 1) as f64 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn single_edge_coverage_core_property() {
        // The mechanism behind the conversion: a vertex covering with bound
        // 2 covers every single edge against every fault set.
        let g = Graph::random(7, 13, 5, false, 13);
        for f in [1usize, 2, 3] {
            let covering = build_rpc(
                &g,
                2,
                f,
                RpcMode::Vertex,
                FamilyKind::ReedSolomon,
                f > 2,
                Budget::default(),
            )
            .unwrap();
            for e in g.edges() {
                for_each_index_subset(7, f, &mut |faults| {
                    if faults.contains(&e.u) || faults.contains(&e.v) {
                        return;
                    }
                    let covered = covering.subgraphs().iter().any(|sub| {
                        sub.retains(e.u) && sub.retains(e.v) && sub.avoids_all(faults)
                    });
                    assert!(covered, "edge {:?} faults {faults:?}", (e.u, e.v));
                });
            }
        }
    }

    #[test]
    fn per_subgraph_vertex_bound_in_path_regime() {
        let g = Graph::random(9, 18, 4, false, 19);
        let f = 3;
        let covering = build_rpc(
            &g,
            2,
            f,
            RpcMode::Vertex,
            FamilyKind::ReedSolomon,
            true,
            Budget::default(),
        )
        .unwrap();
        let q = match covering.source() {
            RpcSource::Family { family, .. } => family.alphabet(),
            _ => unreachable!(),
        };
        let cap = (9u64.div_ceil(q)) * covering.hit_cap() as u64;
        for sub in covering.subgraphs() {
            assert!(sub.retained_count() as u64 <= cap);
        }
    }

    #[test]
    fn additive_conversion_on_unweighted_graphs() {
        for seed in [2u64, 9] {
            let g = Graph::random(8, 14, 1, false, seed);
            for (num, den) in [(1u64, 1u64), (1, 2)] {
                for f in [0usize, 1] {
                    let k = 2;
                    let result = ft_additive_spanner(
                        &g,
                        f,
                        num,
                        den,
                        (2 * k - 1) as u64,
                        0,
                        &mut |sub| greedy_spanner(sub, k),
                        Budget::default(),
                    )
                    .unwrap();
                    let report = verify_ft_spanner(&g, &result, Budget::default()).unwrap();
                    assert!(
                        report.passed(),
                        "seed={seed} eps={num}/{den} f={f}: {:?}",
                        report.violations.first()
                    );
                }
            }
        }
    }

    #[test]
    fn additive_conversion_rejects_bad_inputs() {
        let weighted = Graph::random(6, 10, 5, false, 4);
        assert!(ft_additive_spanner(
            &weighted,
            1,
            1,
            1,
            3,
            0,
            &mut |g| greedy_spanner(g, 2),
            Budget::default()
        )
        .is_err());
        // additive=0 makes the segment length 1; two faults exceed it.
        let unweighted = Graph::random(6, 10, 1, false, 4);
        assert!(ft_additive_spanner(
            &unweighted,
            2,
            1,
            1,
            3,
            0,
            &mut |g| greedy_spanner(g, 2),
            Budget::default()
        )
        .is_err());
    }

    #[test]
    fn whole_graph_passes_and_missing_bridge_fails() {
        let mut g = Graph::new(4, false);
        g.add_edge(0, 1, 1).unwrap();
        g.add_edge(1, 2, 1).unwrap();
        g.add_edge(2, 3, 1).unwrap();
        let all = SpannerResult {
            edges: vec![0, 1, 2],
            contract: StretchContract::Multiplicative { factor: 3 },
            fault_bound: 1,
            covering_value: 1,
            per_subgraph: vec![vec![0, 1, 2]],
        };
        assert!(verify_ft_spanner(&g, &all, Budget::default())
            .unwrap()
            .passed());
        // Dropping the bridge (1,2) disconnects 0 from 3 in H.
        let missing = SpannerResult {
            edges: vec![0, 2],
            contract: StretchContract::Multiplicative { factor: 3 },
            fault_bound: 0,
            covering_value: 1,
            per_subgraph: vec![vec![0, 2]],
        };
        let report = verify_ft_spanner(&g, &missing, Budget::default()).unwrap();
        assert!(!report.passed());
        let v = &report.violations[0];
        assert!(v.spanner_distance >= INFINITY);
    }

    #[test]
    fn union_with_more_edges_never_hurts_stretch() {
        let g = Graph::random(8, 15, 6, false, 21);
        let result = ft_multiplicative_spanner(&g, 2, 1, Budget::default()).unwrap();
        let report = verify_ft_spanner(&g, &result, Budget::default()).unwrap();
        let mut widened = result.clone();
        widened.edges = g.edges().iter().map(|e| e.id).collect();
        let wider_report = verify_ft_spanner(&g, &widened, Budget::default()).unwrap();
        assert!(wider_report.worst_stretch <= report.worst_stretch + 1e-12);
    }

    #[test]
    fn spanner_edges_exist_with_original_weights() {
        let g = Graph::random(9, 18, 8, false, 6);
        let result = ft_multiplicative_spanner(&g, 2, 2, Budget::default()).unwrap();
        for id in &result.edges {
            assert!(g.edge(*id).is_some());
        }
        // Vertex faults on the spanner behave like the contract says even
        // through the graph-level fault API.
        let h = g.restrict_edges(|e| result.edges.binary_search(&e.id).is_ok());
        let faults = FaultSet::Vertices(vec![0]);
        let _ = h.without_faults(&faults);
    }
}
