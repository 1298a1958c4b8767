//! Lower-bound instances for covering value.
//!
//! The tower graph is built inductively: level 1 is a unit-weight path with
//! terminal edges of weight `6 + 2(d - i)`, and level `f` hangs `d` copies of
//! level `f - 1` off a fresh path, attaching copy `i` by a single edge of
//! weight `(d - i) * depth(level f - 1)`. The weights make every canonical
//! root-to-leaf path strictly heavier than all later ones, while the single
//! attachment edges keep the hop diameter at `O(f * d)`. Adding a hub vertex
//! and a complete bipartite block between the leaves and a filler set yields
//! a graph on exactly `n` vertices in which every block edge is forced into
//! any fault-tolerant single-source distance preserver, which in turn floors
//! the covering value of any `(f*d, f)` covering.

use crate::graph::{sssp, EdgeId, Graph, VertexId, Weight, INFINITY};
use crate::{Budget, Error, Result};
use serde::Serialize;

/// Which part of the construction a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentTag {
    /// The recursive tower.
    Tower,
    /// The filler side of the bipartite block.
    Block,
    /// The collector vertex joining the path end to the block side.
    Hub,
}

/// The generated instance with everything the checkers need.
#[derive(Debug, Clone)]
pub struct LowerBoundGraph {
    pub graph: Graph,
    /// Source vertex: the start of the top-level path.
    pub root: VertexId,
    /// Leaves in left-to-right construction order.
    pub leaves: Vec<VertexId>,
    /// Per-leaf fault label: at most one path edge per level.
    pub labels: Vec<Vec<EdgeId>>,
    /// Per-leaf canonical root-to-leaf path (edge ids in path order).
    pub canonical_paths: Vec<Vec<EdgeId>>,
    /// Edges of the top-level path, in order.
    pub top_path_edges: Vec<EdgeId>,
    /// Complete bipartite block edges (leaf, block vertex), when present.
    pub block_edges: Vec<EdgeId>,
    /// The hub vertex and its attachment edge to the path end.
    pub hub: Option<VertexId>,
    pub hub_attachment: Option<EdgeId>,
    pub block_vertices: Vec<VertexId>,
    pub component: Vec<ComponentTag>,
    /// Max weighted distance from the root within the tower.
    pub depth_weight: Weight,
    pub fault_budget: usize,
    pub branching: usize,
}

struct TowerParts {
    root: VertexId,
    path_edges: Vec<EdgeId>,
    leaves: Vec<VertexId>,
    labels: Vec<Vec<EdgeId>>,
    canonical: Vec<Vec<EdgeId>>,
}

fn build_level(graph: &mut Graph, level: usize, branching: usize) -> Result<TowerParts> {
    let d = branching;
    if level == 1 {
        let base = graph.vertex_count();
        let mut g2 = rebuild_with_vertices(graph, base + 2 * d);
        std::mem::swap(graph, &mut g2);
        let path_vertices: Vec<VertexId> = (base..base + d).collect();
        let mut path_edges = Vec::new();
        for w in path_vertices.windows(2) {
            path_edges.push(graph.add_edge(w[0], w[1], 1)?);
        }
        let mut leaves = Vec::new();
        let mut labels = Vec::new();
        let mut canonical = Vec::new();
        for i in 1..=d {
            let leaf = base + d + (i - 1);
            let weight = 6 + 2 * (d - i) as Weight;
            let terminal = graph.add_edge(path_vertices[i - 1], leaf, weight)?;
            leaves.push(leaf);
            labels.push(if i < d {
                vec![path_edges[i - 1]]
            } else {
                Vec::new()
            });
            let mut path: Vec<EdgeId> = path_edges[..i - 1].to_vec();
            path.push(terminal);
            canonical.push(path);
        }
        return Ok(TowerParts {
            root: path_vertices[0],
            path_edges,
            leaves,
            labels,
            canonical,
        });
    }

    // Copies are disjoint until attached, so the depth of the first one
    // (max root distance, needed for the attachment weights) is read off
    // the graph under construction directly.
    let mut copies = Vec::with_capacity(d);
    for _ in 0..d {
        copies.push(build_level(graph, level - 1, d)?);
    }
    let depth_below = {
        let dist = sssp(graph, copies[0].root);
        dist.iter().copied().filter(|&x| x < INFINITY).max().unwrap_or(0)
    };

    let base = graph.vertex_count();
    let mut g2 = rebuild_with_vertices(graph, base + d);
    std::mem::swap(graph, &mut g2);
    let path_vertices: Vec<VertexId> = (base..base + d).collect();
    let mut path_edges = Vec::new();
    for w in path_vertices.windows(2) {
        path_edges.push(graph.add_edge(w[0], w[1], 1)?);
    }
    let mut leaves = Vec::new();
    let mut labels = Vec::new();
    let mut canonical = Vec::new();
    for (idx, copy) in copies.iter().enumerate() {
        let i = idx + 1;
        let weight = (d - i) as Weight * depth_below;
        let attachment = graph.add_edge(path_vertices[idx], copy.root, weight)?;
        let prefix: Vec<EdgeId> = path_edges[..i - 1].to_vec();
        for (leaf_idx, &leaf) in copy.leaves.iter().enumerate() {
            leaves.push(leaf);
            let mut label = if i < d {
                vec![path_edges[i - 1]]
            } else {
                Vec::new()
            };
            label.extend_from_slice(&copy.labels[leaf_idx]);
            labels.push(label);
            let mut path = prefix.clone();
            path.push(attachment);
            path.extend_from_slice(&copy.canonical[leaf_idx]);
            canonical.push(path);
        }
    }
    Ok(TowerParts {
        root: path_vertices[0],
        path_edges,
        leaves,
        labels,
        canonical,
    })
}

// Graph has a fixed vertex count; the recursive builder grows it by
// rebuilding the container around the accumulated edges.
fn rebuild_with_vertices(graph: &Graph, vertex_count: usize) -> Graph {
    let mut out = Graph::new(vertex_count, false);
    for e in graph.edges() {
        out.add_edge(e.u, e.v, e.weight).expect("existing edges stay valid");
    }
    out
}

/// Builds the tower alone.
pub fn build_gfd(levels: usize, branching: usize) -> Result<LowerBoundGraph> {
    if levels == 0 || branching == 0 {
        return Err(Error::InvalidParameter(
            "tower needs levels >= 1 and branching >= 1".to_owned(),
        ));
    }
    let mut graph = Graph::new(0, false);
    let parts = build_level(&mut graph, levels, branching)?;
    let depth_weight = {
        let dist = sssp(&graph, parts.root);
        dist.iter().copied().filter(|&x| x < INFINITY).max().unwrap_or(0)
    };
    let component = vec![ComponentTag::Tower; graph.vertex_count()];
    Ok(LowerBoundGraph {
        graph,
        root: parts.root,
        leaves: parts.leaves,
        labels: parts.labels,
        canonical_paths: parts.canonical,
        top_path_edges: parts.path_edges,
        block_edges: Vec::new(),
        hub: None,
        hub_attachment: None,
        block_vertices: Vec::new(),
        component,
        depth_weight,
        fault_budget: levels,
        branching,
    })
}

/// Builds the full instance on exactly `n` vertices: tower, hub, filler
/// vertices, and the complete bipartite block between fillers and leaves.
pub fn build_lower_bound_graph(
    levels: usize,
    branching: usize,
    n: usize,
) -> Result<LowerBoundGraph> {
    let tower = build_gfd(levels, branching)?;
    let tower_size = tower.graph.vertex_count();
    if n < tower_size + 2 {
        return Err(Error::InvalidParameter(format!(
            "need n >= {} for the tower plus hub plus one filler vertex",
            tower_size + 2
        )));
    }
    let filler_count = n - tower_size - 1;
    let mut graph = rebuild_with_vertices(&tower.graph, n);
    let hub = tower_size;
    let block_vertices: Vec<VertexId> = (tower_size + 1..n).collect();
    // The hub joins the end of the top-level path to every filler vertex.
    let path_end = tower.root + branching - 1;
    let hub_attachment = graph.add_edge(path_end, hub, 1)?;
    for &x in &block_vertices {
        graph.add_edge(hub, x, 1)?;
    }
    let mut block_edges = Vec::with_capacity(filler_count * tower.leaves.len());
    for &x in &block_vertices {
        for &leaf in &tower.leaves {
            block_edges.push(graph.add_edge(leaf, x, 1)?);
        }
    }
    let mut component = vec![ComponentTag::Tower; tower_size];
    component.push(ComponentTag::Hub);
    component.extend(std::iter::repeat(ComponentTag::Block).take(filler_count));
    Ok(LowerBoundGraph {
        graph,
        root: tower.root,
        leaves: tower.leaves,
        labels: tower.labels,
        canonical_paths: tower.canonical_paths,
        top_path_edges: tower.top_path_edges,
        block_edges,
        hub: Some(hub),
        hub_attachment: Some(hub_attachment),
        block_vertices,
        component,
        depth_weight: tower.depth_weight,
        fault_budget: levels,
        branching,
    })
}

impl LowerBoundGraph {
    /// Leaf labels and structure as JSON, the CLI sidecar format.
    pub fn labels_json(&self) -> serde_json::Value {
        serde_json::json!({
            "root": self.root,
            "levels": self.fault_budget,
            "branching": self.branching,
            "leaves": self.leaves,
            "labels": self.labels,
            "block_edges": self.block_edges,
            "hub": self.hub,
            "depth_weight": self.depth_weight,
        })
    }

    /// Floor on the covering value implied by the block: any covering whose
    /// shortest-path trees reproduce all replacement distances from the root
    /// must keep every block edge, and each tree has at most `n - 1` edges.
    pub fn covering_value_floor(&self) -> usize {
        let n = self.graph.vertex_count();
        self.block_edges.len().div_ceil(n.saturating_sub(1).max(1))
    }

    /// Hop diameter (max edge count of shortest hop paths) of the tower.
    pub fn tower_hop_diameter(&self) -> usize {
        let tower = self
            .graph
            .restrict_edges(|e| {
                self.component[e.u] == ComponentTag::Tower
                    && self.component[e.v] == ComponentTag::Tower
            });
        let unit = {
            let mut g = Graph::new(tower.vertex_count(), false);
            for e in tower.edges() {
                g.add_edge(e.u, e.v, 1).expect("valid");
            }
            g
        };
        let mut best = 0usize;
        for v in 0..unit.vertex_count() {
            if self.component[v] != ComponentTag::Tower {
                continue;
            }
            for (u, &dist) in sssp(&unit, v).iter().enumerate() {
                if self.component[u] == ComponentTag::Tower && dist < INFINITY {
                    best = best.max(dist as usize);
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertiesReport {
    pub leaf_count: usize,
    pub pairs_checked: u64,
    pub violations: Vec<String>,
}

impl PropertiesReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies the four structural properties of the tower: each canonical
/// root-to-leaf path is the unique one, it survives its own label, labels
/// destroy all later canonical paths, and canonical weights strictly
/// decrease left to right.
pub fn check_replacement_path_properties(
    instance: &LowerBoundGraph,
    budget: Budget,
) -> Result<PropertiesReport> {
    let tower = instance.graph.restrict_edges(|e| {
        instance.component[e.u] == ComponentTag::Tower
            && instance.component[e.v] == ComponentTag::Tower
    });
    let leaf_count = instance.leaves.len();
    budget.check(
        (leaf_count as u64).saturating_mul(leaf_count as u64)
            + tower.edge_count() as u64 * leaf_count as u64,
        "tower property check",
    )?;
    let mut report = PropertiesReport {
        leaf_count,
        pairs_checked: 0,
        violations: Vec::new(),
    };

    let adjacency = tower.adjacency();
    for (j, (&leaf, canonical)) in instance
        .leaves
        .iter()
        .zip(&instance.canonical_paths)
        .enumerate()
    {
        // (1) uniqueness, by exhaustive simple-path enumeration.
        let count = count_simple_paths(&adjacency, instance.root, leaf, budget)?;
        if count != 1 {
            report
                .violations
                .push(format!("leaf {j}: {count} root paths, expected exactly 1"));
        }
        // (2) the canonical path survives its own label.
        let label = &instance.labels[j];
        if canonical.iter().any(|e| label.contains(e)) {
            report
                .violations
                .push(format!("leaf {j}: canonical path hits its own label"));
        }
        if label.len() > instance.fault_budget {
            report
                .violations
                .push(format!("leaf {j}: label larger than the fault budget"));
        }
    }

    // (3) every label breaks all later canonical paths; (4) weights strictly
    // decrease.
    let weights: Vec<Weight> = instance
        .canonical_paths
        .iter()
        .map(|p| crate::graph::path_weight(&instance.graph, p))
        .collect();
    for j in 0..leaf_count {
        for i in (j + 1)..leaf_count {
            report.pairs_checked += 1;
            let destroyed = instance.canonical_paths[i]
                .iter()
                .any(|e| instance.labels[j].contains(e));
            if !destroyed {
                report.violations.push(format!(
                    "label of leaf {j} leaves the canonical path of later leaf {i} intact"
                ));
            }
            if weights[j] <= weights[i] {
                report.violations.push(format!(
                    "weights not strictly decreasing: leaf {j} ({}) vs leaf {i} ({})",
                    weights[j], weights[i]
                ));
            }
        }
    }
    Ok(report)
}

fn count_simple_paths(
    adjacency: &[Vec<(VertexId, Weight, EdgeId)>],
    from: VertexId,
    to: VertexId,
    budget: Budget,
) -> Result<u64> {
    struct Dfs<'a> {
        adjacency: &'a [Vec<(VertexId, Weight, EdgeId)>],
        to: VertexId,
        visited: Vec<bool>,
        count: u64,
        steps: u64,
        budget: Budget,
    }
    impl Dfs<'_> {
        fn run(&mut self, at: VertexId) -> Result<()> {
            self.steps += 1;
            self.budget.check(self.steps, "path enumeration")?;
            if at == self.to {
                self.count += 1;
                return Ok(());
            }
            self.visited[at] = true;
            for &(next, _, _) in &self.adjacency[at] {
                if !self.visited[next] {
                    self.run(next)?;
                }
            }
            self.visited[at] = false;
            Ok(())
        }
    }
    let mut dfs = Dfs {
        adjacency,
        to,
        visited: vec![false; adjacency.len()],
        count: 0,
        steps: 0,
        budget,
    };
    dfs.run(from)?;
    Ok(dfs.count)
}

#[derive(Debug, Clone, Serialize)]
pub struct NecessityWitness {
    pub block_edge: EdgeId,
    pub faults: Vec<EdgeId>,
    pub with_edge: Weight,
    pub without_edge: Weight,
}

#[derive(Debug, Clone, Serialize)]
pub struct NecessityReport {
    pub block_edges_checked: usize,
    pub witnesses: Vec<NecessityWitness>,
    pub failures: Vec<EdgeId>,
    pub covering_value_floor: usize,
}

impl NecessityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every block edge, exhibits a fault set of at most `f` edges under
/// which deleting the edge strictly increases the replacement distance from
/// the root to its block endpoint — so no fault-tolerant single-source
/// preserver may omit it.
///
/// The fault set is the leaf's label; when the label contains no top-level
/// path edge (leaves of the last copy) the hub attachment is added, since
/// otherwise the short route through the hub survives and the block edge is
/// not forced.
pub fn check_ftbfs_necessity(
    instance: &LowerBoundGraph,
    budget: Budget,
) -> Result<NecessityReport> {
    let hub_attachment = instance.hub_attachment.ok_or_else(|| {
        Error::InvalidParameter("necessity check needs the full instance with the hub".to_owned())
    })?;
    budget.check(
        (instance.block_edges.len() as u64)
            .saturating_mul(2 * instance.graph.edge_count() as u64),
        "block-edge necessity check",
    )?;
    let leaf_position = |v: VertexId| instance.leaves.iter().position(|&z| z == v);
    let mut report = NecessityReport {
        block_edges_checked: 0,
        witnesses: Vec::new(),
        failures: Vec::new(),
        covering_value_floor: instance.covering_value_floor(),
    };
    for &edge_id in &instance.block_edges {
        report.block_edges_checked += 1;
        let edge = instance.graph.edge(edge_id).expect("block edge exists");
        let (leaf, block_vertex) = if leaf_position(edge.u).is_some() {
            (edge.u, edge.v)
        } else {
            (edge.v, edge.u)
        };
        let j = leaf_position(leaf).expect("block edges touch a leaf");
        let mut faults = instance.labels[j].clone();
        if !faults.iter().any(|e| instance.top_path_edges.contains(e)) {
            faults.push(hub_attachment);
        }
        debug_assert!(faults.len() <= instance.fault_budget);

        let without_faults = instance
            .graph
            .restrict_edges(|e| !faults.contains(&e.id));
        let with_edge = sssp(&without_faults, instance.root)[block_vertex];
        let also_without_edge = without_faults.restrict_edges(|e| e.id != edge_id);
        let without_edge = sssp(&also_without_edge, instance.root)[block_vertex];
        if without_edge > with_edge {
            report.witnesses.push(NecessityWitness {
                block_edge: edge_id,
                faults,
                with_edge,
                without_edge,
            });
        } else {
            report.failures.push(edge_id);
        }
    }
    Ok(report)
}
