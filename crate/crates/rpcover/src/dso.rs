//! Exact distance sensitivity oracle built on a replacement-path covering.
//!
//! Preprocessing computes, for every ordered vertex pair, a fault-tolerant
//! tree whose nodes are labeled `(path, fault set)`: the stored path is a
//! hop-limited shortest path avoiding the fault set, and each child extends
//! the fault set by one edge of the parent path. Descending along failed
//! edges answers hop-limited replacement distances in `O(f^2 log L)`. Long
//! queries route through a hitting set of the "critical" stored paths (hop
//! count within `[ceil(L/4), L]`): a dense auxiliary graph on the hitting
//! set plus the endpoints, weighted by tree answers, carries some exact
//! shortest path, so the minimum of the short and long answers is exact.

use crate::graph::{
    apsp_hop_limited, path_vertices, sssp, FaultSet, Graph, HopTable, VertexId, Weight, INFINITY,
};
use crate::rpc::{build_rpc, FamilyKind, RpcFamily, RpcMode};
use crate::{Budget, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};

pub type EdgeId = usize;

/// Oracle JSON layout version.
pub const FORMAT_VERSION: u32 = 1;

/// One node of a fault-tolerant tree: a path that avoids `faults`, with one
/// child per failed path edge that still leaves the endpoints connected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FtTreeNode {
    /// Edge ids in path order from source to target.
    pub path: Vec<EdgeId>,
    /// The same ids sorted, for membership tests during descent.
    path_sorted: Vec<EdgeId>,
    /// Weight of the stored path.
    pub weight: Weight,
    /// Fault set this node's path avoids, sorted.
    pub faults: Vec<EdgeId>,
    /// Children keyed by the additional failed edge.
    pub children: BTreeMap<EdgeId, FtTreeNode>,
}

impl FtTreeNode {
    pub fn node_count(&self) -> usize {
        1 + self.children.values().map(FtTreeNode::node_count).sum::<usize>()
    }

    fn smallest_failed_path_edge(&self, faults_sorted: &[EdgeId]) -> Option<EdgeId> {
        faults_sorted
            .iter()
            .copied()
            .find(|e| self.path_sorted.binary_search(e).is_ok())
    }

    fn for_each_node(&self, f: &mut dyn FnMut(&FtTreeNode)) {
        f(self);
        for child in self.children.values() {
            child.for_each_node(f);
        }
    }
}

/// All fault-tolerant trees, keyed by ordered vertex pair.
#[derive(Debug, Clone, Default)]
pub struct Forest {
    trees: BTreeMap<(VertexId, VertexId), FtTreeNode>,
}

impl Forest {
    pub fn tree(&self, s: VertexId, t: VertexId) -> Option<&FtTreeNode> {
        self.trees.get(&(s, t))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(VertexId, VertexId), &FtTreeNode)> {
        self.trees.iter()
    }

    pub fn total_nodes(&self) -> u64 {
        self.trees.values().map(|t| t.node_count() as u64).sum()
    }

    pub fn max_tree_nodes(&self) -> usize {
        self.trees.values().map(FtTreeNode::node_count).max().unwrap_or(0)
    }
}

/// Hop-limited replacement distance from precomputed per-subgraph tables:
/// the minimum table entry over the subgraphs avoiding the fault set, with
/// the witness taken from the smallest-index minimizer.
pub fn triplet_distance(
    rpc: &RpcFamily,
    tables: &[HopTable],
    graph: &Graph,
    s: VertexId,
    t: VertexId,
    faults: &[EdgeId],
) -> Result<(Weight, Option<Vec<EdgeId>>)> {
    if s == t {
        return Ok((0, Some(Vec::new())));
    }
    let mut best = INFINITY;
    let mut best_index = None;
    for sub in rpc.subgraphs_avoiding_faults(faults)? {
        let d = tables[sub.index].distance(s, t);
        if d < best {
            best = d;
            best_index = Some(sub.index);
        }
    }
    match best_index {
        Some(index) if best < INFINITY => {
            let sub = &rpc.subgraphs()[index];
            let path = tables[index]
                .path_edges(s, t, &sub.materialize(graph, RpcMode::Edge))
                .expect("finite entry has a witness");
            Ok((best, Some(path)))
        }
        _ => Ok((INFINITY, None)),
    }
}

/// Builds the fault-tolerant trees for every ordered pair, together with the
/// covering and tables they were computed from.
pub fn build_ft_trees(
    graph: &Graph,
    hop_bound: usize,
    fault_bound: usize,
    budget: Budget,
) -> Result<(Forest, RpcFamily, Vec<HopTable>)> {
    if hop_bound < fault_bound {
        return Err(Error::WrongRegime {
            expected: "hop_bound >= fault_bound for fault lookups".to_owned(),
            actual: format!("hop_bound={hop_bound}, fault_bound={fault_bound}"),
        });
    }
    let n = graph.vertex_count() as u64;
    let tree_budget = (hop_bound as u128)
        .checked_pow(fault_bound as u32)
        .unwrap_or(u128::MAX)
        .saturating_mul((n * n) as u128);
    budget.check(
        tree_budget.min(u64::MAX as u128) as u64,
        "fault-tolerant forest construction",
    )?;

    let rpc = build_rpc(
        graph,
        hop_bound,
        fault_bound,
        RpcMode::Edge,
        FamilyKind::ReedSolomon,
        false,
        budget,
    )?;
    let tables: Vec<HopTable> = rpc
        .subgraphs()
        .iter()
        .map(|sub| apsp_hop_limited(&sub.materialize(graph, RpcMode::Edge), hop_bound))
        .collect::<Result<_>>()?;

    let mut forest = Forest::default();
    for s in 0..graph.vertex_count() {
        for t in 0..graph.vertex_count() {
            if s == t {
                continue;
            }
            if let Some(root) =
                grow_tree(&rpc, &tables, graph, s, t, Vec::new(), fault_bound)?
            {
                forest.trees.insert((s, t), root);
            }
        }
    }
    Ok((forest, rpc, tables))
}

fn grow_tree(
    rpc: &RpcFamily,
    tables: &[HopTable],
    graph: &Graph,
    s: VertexId,
    t: VertexId,
    faults: Vec<EdgeId>,
    fault_bound: usize,
) -> Result<Option<FtTreeNode>> {
    let (weight, path) = triplet_distance(rpc, tables, graph, s, t, &faults)?;
    let Some(path) = path else {
        return Ok(None);
    };
    let mut path_sorted = path.clone();
    path_sorted.sort_unstable();
    let mut node = FtTreeNode {
        path: path.clone(),
        path_sorted,
        weight,
        faults: faults.clone(),
        children: BTreeMap::new(),
    };
    if faults.len() < fault_bound {
        for &edge in &path {
            let mut extended = faults.clone();
            extended.push(edge);
            extended.sort_unstable();
            if let Some(child) =
                grow_tree(rpc, tables, graph, s, t, extended, fault_bound)?
            {
                node.children.insert(edge, child);
            }
        }
    }
    Ok(Some(node))
}

/// Descends a tree along failed edges. Returns the stored path that avoids
/// the faults together with its weight; the weight equals the hop-limited
/// replacement distance whenever the fault set is within the build bound.
pub fn query_ft_tree<'a>(
    tree: Option<&'a FtTreeNode>,
    faults_sorted: &[EdgeId],
) -> (Weight, Option<&'a FtTreeNode>) {
    let mut node = match tree {
        Some(node) => node,
        None => return (INFINITY, None),
    };
    loop {
        match node.smallest_failed_path_edge(faults_sorted) {
            None => return (node.weight, Some(node)),
            Some(edge) => match node.children.get(&edge) {
                Some(child) => node = child,
                None => return (INFINITY, None),
            },
        }
    }
}

/// Stored paths with hop count in `[ceil(L/4), L]`, deduplicated by vertex
/// sequence, emitted as vertex sets for the hitting-set step.
pub fn compute_critical_paths(
    forest: &Forest,
    graph: &Graph,
    hop_bound: usize,
) -> Vec<Vec<VertexId>> {
    let low = hop_bound.div_ceil(4);
    let mut seen: HashSet<Vec<VertexId>> = HashSet::new();
    let mut out = Vec::new();
    for (&(s, _t), root) in forest.iter() {
        root.for_each_node(&mut |node| {
            let hops = node.path.len();
            if hops < low || hops > hop_bound {
                return;
            }
            let sequence = path_vertices(graph, s, &node.path);
            if seen.insert(sequence.clone()) {
                let mut set = sequence;
                set.sort_unstable();
                set.dedup();
                out.push(set);
            }
        });
    }
    out
}

/// Greedy hitting set: repeatedly take the vertex covering the most unhit
/// sets (smallest id on ties). Every input set must have at least `min_size`
/// elements; the result size is at most `ceil((n / min_size) * ln(#sets)) + 1`.
pub fn greedy_hitting_set(
    sets: &[Vec<VertexId>],
    universe: usize,
    min_size: usize,
) -> Result<Vec<VertexId>> {
    if min_size == 0 {
        return Err(Error::InvalidParameter(
            "hitting-set minimum size must be >= 1".to_owned(),
        ));
    }
    for (i, set) in sets.iter().enumerate() {
        if set.len() < min_size {
            return Err(Error::InvalidParameter(format!(
                "set {i} has {} < {min_size} elements",
                set.len()
            )));
        }
        if set.iter().any(|&v| v >= universe) {
            return Err(Error::InvalidParameter(format!(
                "set {i} contains a vertex outside the universe"
            )));
        }
    }
    let mut unhit: Vec<usize> = (0..sets.len()).collect();
    let mut chosen = Vec::new();
    while !unhit.is_empty() {
        let mut counts = vec![0u64; universe];
        for &i in &unhit {
            for &v in &sets[i] {
                counts[v] += 1;
            }
        }
        let best = (0..universe)
            .max_by_key(|&v| (counts[v], std::cmp::Reverse(v)))
            .expect("nonempty universe since sets are nonempty");
        chosen.push(best);
        unhit.retain(|&i| !sets[i].contains(&best));
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// The assembled oracle: forest, hitting set, and the parameters needed to
/// answer queries against the original graph.
#[derive(Debug, Clone)]
pub struct DsoOracle {
    pub hop_bound: usize,
    pub fault_bound: usize,
    vertex_count: usize,
    graph_checksum: String,
    forest: Forest,
    hitting_set: Vec<VertexId>,
    pub covering_value: usize,
}

/// Statistics reported by preprocessing.
#[derive(Debug, Clone, Serialize)]
pub struct DsoStats {
    pub covering_value: usize,
    pub forest_nodes: u64,
    pub max_tree_nodes: usize,
    pub critical_paths: usize,
    pub hitting_set_size: usize,
}

fn graph_checksum(graph: &Graph) -> String {
    let mut hash = 0xcbf29ce484222325u64;
    for byte in graph.to_edge_list().bytes() {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x00000100000001b3);
    }
    format!("{hash:016x}")
}

/// Full deterministic preprocessing: forest, critical paths, hitting set.
pub fn dso_preprocess(
    graph: &Graph,
    hop_bound: usize,
    fault_bound: usize,
    budget: Budget,
) -> Result<(DsoOracle, DsoStats)> {
    let (forest, rpc, _tables) = build_ft_trees(graph, hop_bound, fault_bound, budget)?;
    let critical = compute_critical_paths(&forest, graph, hop_bound);
    let min_size = hop_bound.div_ceil(4);
    // A path of h edges visits h+1 distinct vertices, so the sets are
    // strictly larger than the window's lower end.
    let hitting_set = greedy_hitting_set(&critical, graph.vertex_count(), min_size.max(1))?;
    let stats = DsoStats {
        covering_value: rpc.covering_value(),
        forest_nodes: forest.total_nodes(),
        max_tree_nodes: forest.max_tree_nodes(),
        critical_paths: critical.len(),
        hitting_set_size: hitting_set.len(),
    };
    Ok((
        DsoOracle {
            hop_bound,
            fault_bound,
            vertex_count: graph.vertex_count(),
            graph_checksum: graph_checksum(graph),
            forest,
            hitting_set,
            covering_value: rpc.covering_value(),
        },
        stats,
    ))
}

impl DsoOracle {
    pub fn hitting_set(&self) -> &[VertexId] {
        &self.hitting_set
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    /// Exact replacement distance under at most `fault_bound` faults.
    ///
    /// Vertex faults are expanded to their incident edges before descending
    /// the trees; the expansion must itself fit the fault budget, which a
    /// high-degree vertex can exceed — callers needing many vertex faults
    /// should build with a larger bound.
    pub fn query(&self, graph: &Graph, s: VertexId, t: VertexId, faults: &FaultSet) -> Result<Weight> {
        if graph_checksum(graph) != self.graph_checksum {
            return Err(Error::Corrupt(
                "query graph differs from the preprocessed graph".to_owned(),
            ));
        }
        if faults.len() > self.fault_bound {
            return Err(Error::InvalidParameter(format!(
                "{} faults exceed the bound {}",
                faults.len(),
                self.fault_bound
            )));
        }
        let edge_faults = match faults {
            FaultSet::Edges(ids) => {
                let mut ids = ids.clone();
                ids.sort_unstable();
                ids.dedup();
                ids
            }
            FaultSet::Vertices(vs) => {
                if vs.contains(&s) || vs.contains(&t) {
                    return Ok(INFINITY);
                }
                let mut ids: Vec<EdgeId> = graph
                    .edges()
                    .iter()
                    .filter(|e| vs.contains(&e.u) || vs.contains(&e.v))
                    .map(|e| e.id)
                    .collect();
                ids.sort_unstable();
                ids.dedup();
                if ids.len() > self.fault_bound {
                    return Err(Error::InvalidParameter(format!(
                        "vertex faults expand to {} incident edges, over the bound {}",
                        ids.len(),
                        self.fault_bound
                    )));
                }
                ids
            }
        };
        if s == t {
            return Ok(0);
        }

        let (short, _) = query_ft_tree(self.forest.tree(s, t), &edge_faults);

        // Dense auxiliary graph on the hitting set plus the endpoints.
        let mut hubs: Vec<VertexId> = Vec::with_capacity(self.hitting_set.len() + 2);
        hubs.push(s);
        if t != s {
            hubs.push(t);
        }
        for &r in &self.hitting_set {
            if r != s && r != t {
                hubs.push(r);
            }
        }
        let mut dense = Graph::new(hubs.len(), true);
        for (xi, &x) in hubs.iter().enumerate() {
            for (yi, &y) in hubs.iter().enumerate() {
                if xi == yi {
                    continue;
                }
                let (w, _) = query_ft_tree(self.forest.tree(x, y), &edge_faults);
                if w < INFINITY {
                    dense.add_edge(xi, yi, w)?;
                }
            }
        }
        let long = sssp(&dense, 0)[1.min(hubs.len() - 1)];

        Ok(short.min(long))
    }

    /// Serializes the oracle; the graph itself is referenced by checksum.
    pub fn to_json(&self) -> serde_json::Value {
        let trees: Vec<serde_json::Value> = self
            .forest
            .trees
            .iter()
            .map(|(&(s, t), root)| {
                serde_json::json!({ "s": s, "t": t, "root": root })
            })
            .collect();
        serde_json::json!({
            "format_version": FORMAT_VERSION,
            "hop_bound": self.hop_bound,
            "fault_bound": self.fault_bound,
            "vertex_count": self.vertex_count,
            "graph_checksum": self.graph_checksum,
            "covering_value": self.covering_value,
            "hitting_set": self.hitting_set,
            "trees": trees,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<DsoOracle> {
        if value["format_version"].as_u64() != Some(FORMAT_VERSION as u64) {
            return Err(Error::Corrupt(format!(
                "unsupported oracle format version {:?}",
                value["format_version"]
            )));
        }
        let mut forest = Forest::default();
        for entry in value["trees"]
            .as_array()
            .ok_or_else(|| Error::Corrupt("missing trees".to_owned()))?
        {
            let s = entry["s"]
                .as_u64()
                .ok_or_else(|| Error::Corrupt("tree missing s".to_owned()))? as usize;
            let t = entry["t"]
                .as_u64()
                .ok_or_else(|| Error::Corrupt("tree missing t".to_owned()))? as usize;
            let root: FtTreeNode = serde_json::from_value(entry["root"].clone())?;
            forest.trees.insert((s, t), root);
        }
        Ok(DsoOracle {
            hop_bound: value["hop_bound"]
                .as_u64()
                .ok_or_else(|| Error::Corrupt("missing hop_bound".to_owned()))?
                as usize,
            fault_bound: value["fault_bound"]
                .as_u64()
                .ok_or_else(|| Error::Corrupt("missing fault_bound".to_owned()))?
                as usize,
            vertex_count: value["vertex_count"]
                .as_u64()
                .ok_or_else(|| Error::Corrupt("missing vertex_count".to_owned()))?
                as usize,
            graph_checksum: value["graph_checksum"]
                .as_str()
                .ok_or_else(|| Error::Corrupt("missing graph_checksum".to_owned()))?
                .to_owned(),
            covering_value: value["covering_value"].as_u64().unwrap_or(0) as usize,
            hitting_set: serde_json::from_value(value["hitting_set"].clone())?,
            forest,
        })
    }
}
