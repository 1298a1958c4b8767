//! Graph representation, shortest paths, and brute-force replacement-path
//! oracles.
//!
//! Weights are nonnegative integers. Distances use a saturating sentinel
//! [`INFINITY`] chosen large enough that no real path weight can reach it.
//! Edge ids are stable: they are assigned in input order and survive
//! restriction to subgraphs, so path witnesses always refer to edges of the
//! original graph.

use crate::{Budget, Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type Weight = u64;

/// Unreachable sentinel; arithmetic saturates at it.
pub const INFINITY: Weight = u64::MAX / 4;

/// Saturating addition over path weights.
pub fn weight_add(a: Weight, b: Weight) -> Weight {
    if a >= INFINITY || b >= INFINITY {
        INFINITY
    } else {
        a + b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Weight,
}

/// A weighted graph, directed or undirected, with stable edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    directed: bool,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(vertex_count: usize, directed: bool) -> Self {
        Graph {
            vertex_count,
            directed,
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Looks an edge up by id; restriction keeps ids sparse, hence the scan
    /// fallback when the id does not sit at its own index.
    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        match self.edges.get(id) {
            Some(e) if e.id == id => Some(e),
            _ => self.edges.iter().find(|e| e.id == id),
        }
    }

    /// Appends an edge with the next id. Self-loops are rejected.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, weight: Weight) -> Result<EdgeId> {
        if u == v {
            return Err(Error::InvalidParameter(format!("self-loop at vertex {u}")));
        }
        if u >= self.vertex_count || v >= self.vertex_count {
            return Err(Error::InvalidParameter(format!(
                "edge ({u},{v}) out of range for {} vertices",
                self.vertex_count
            )));
        }
        if weight >= INFINITY / (self.vertex_count.max(2) as u64) {
            return Err(Error::InvalidParameter(format!(
                "weight {weight} too large for the saturating sentinel"
            )));
        }
        let id = self.edges.len();
        self.edges.push(Edge { id, u, v, weight });
        Ok(id)
    }

    /// Subgraph with the same vertex set and the edges passing `keep`,
    /// original ids preserved.
    pub fn restrict_edges<F: Fn(&Edge) -> bool>(&self, keep: F) -> Graph {
        Graph {
            vertex_count: self.vertex_count,
            directed: self.directed,
            edges: self.edges.iter().copied().filter(|e| keep(e)).collect(),
        }
    }

    /// Induced subgraph on the vertices with `retained[v]` true. The vertex
    /// set keeps its indexing; dropped vertices simply lose all edges.
    pub fn induced(&self, retained: &[bool]) -> Graph {
        self.restrict_edges(|e| retained[e.u] && retained[e.v])
    }

    /// Graph with a fault set removed. Vertex faults delete all incident
    /// edges.
    pub fn without_faults(&self, faults: &FaultSet) -> Graph {
        match faults {
            FaultSet::Edges(ids) => self.restrict_edges(|e| !ids.contains(&e.id)),
            FaultSet::Vertices(vs) => self.restrict_edges(|e| !vs.contains(&e.u) && !vs.contains(&e.v)),
        }
    }

    /// Out-adjacency lists (both directions for undirected graphs).
    pub fn adjacency(&self) -> Vec<Vec<(VertexId, Weight, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.u].push((e.v, e.weight, e.id));
            if !self.directed {
                adj[e.v].push((e.u, e.weight, e.id));
            }
        }
        adj
    }

    /// Seeded random graph with distinct vertex pairs and weights in
    /// `1..=max_weight`. The edge count is capped by the number of available
    /// pairs.
    pub fn random(
        vertex_count: usize,
        edge_count: usize,
        max_weight: Weight,
        directed: bool,
        seed: u64,
    ) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for u in 0..vertex_count {
            for v in 0..vertex_count {
                if u == v {
                    continue;
                }
                if directed || u < v {
                    pairs.push((u, v));
                }
            }
        }
        // Fisher-Yates prefix shuffle driven by the seeded generator.
        let m = edge_count.min(pairs.len());
        for i in 0..m {
            let j = rng.gen_range(i..pairs.len());
            pairs.swap(i, j);
        }
        let mut g = Graph::new(vertex_count, directed);
        for &(u, v) in pairs.iter().take(m) {
            let w = rng.gen_range(1..=max_weight.max(1));
            g.add_edge(u, v, w).expect("generated pairs are valid");
        }
        g
    }

    /// Parses the edge-list text format: a header `n m directed|undirected`
    /// followed by `m` lines `u v w`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut graph: Option<Graph> = None;
        let mut expected_edges = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match graph {
                None => {
                    if fields.len() != 3 {
                        return Err(Error::GraphParse {
                            line: lineno + 1,
                            message: "header must be `n m directed|undirected`".to_owned(),
                        });
                    }
                    let n: usize = fields[0].parse().map_err(|_| Error::GraphParse {
                        line: lineno + 1,
                        message: format!("bad vertex count {:?}", fields[0]),
                    })?;
                    expected_edges = fields[1].parse().map_err(|_| Error::GraphParse {
                        line: lineno + 1,
                        message: format!("bad edge count {:?}", fields[1]),
                    })?;
                    let directed = match fields[2] {
                        "directed" => true,
                        "undirected" => false,
                        other => {
                            return Err(Error::GraphParse {
                                line: lineno + 1,
                                message: format!("bad orientation {other:?}"),
                            })
                        }
                    };
                    graph = Some(Graph::new(n, directed));
                }
                Some(ref mut g) => {
                    if fields.len() != 3 {
                        return Err(Error::GraphParse {
                            line: lineno + 1,
                            message: "edge line must be `u v w`".to_owned(),
                        });
                    }
                    let parse = |s: &str| -> std::result::Result<u64, Error> {
                        s.parse().map_err(|_| Error::GraphParse {
                            line: lineno + 1,
                            message: format!("bad number {s:?}"),
                        })
                    };
                    let (u, v, w) = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
                    g.add_edge(u as usize, v as usize, w)
                        .map_err(|e| Error::GraphParse {
                            line: lineno + 1,
                            message: e.to_string(),
                        })?;
                }
            }
        }
        let g = graph.ok_or_else(|| Error::GraphParse {
            line: 0,
            message: "empty input".to_owned(),
        })?;
        if g.edge_count() != expected_edges {
            return Err(Error::GraphParse {
                line: 0,
                message: format!(
                    "header announced {expected_edges} edges, found {}",
                    g.edge_count()
                ),
            });
        }
        Ok(g)
    }

    /// Inverse of [`Graph::parse`]; output is stable for byte-level diffs.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} {} {}\n",
            self.vertex_count,
            self.edges.len(),
            if self.directed { "directed" } else { "undirected" }
        ));
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.weight));
        }
        out
    }
}

/// Faults are either edge ids or vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaultSet {
    Edges(Vec<EdgeId>),
    Vertices(Vec<VertexId>),
}

impl FaultSet {
    pub fn len(&self) -> usize {
        match self {
            FaultSet::Edges(v) => v.len(),
            FaultSet::Vertices(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn none() -> FaultSet {
        FaultSet::Edges(Vec::new())
    }
}

/// Single-source shortest path distances (Dijkstra, nonnegative weights,
/// deterministic tie-breaks via the vertex order in the heap).
pub fn sssp(graph: &Graph, source: VertexId) -> Vec<Weight> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let adj = graph.adjacency();
    let mut dist = vec![INFINITY; graph.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0;
    heap.push(Reverse((0u64, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w, _) in &adj[u] {
            let nd = weight_add(d, w);
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

/// Hop-limited single-source distances by dynamic programming over hop
/// counts: `d_h(v) = min(d_{h-1}(v), min over in-edges (u,v) of d_{h-1}(u)+w)`.
///
/// This is the independent oracle the min-plus tables are checked against.
pub fn hop_limited_distances(graph: &Graph, source: VertexId, hop_bound: usize) -> Vec<Weight> {
    let mut current = vec![INFINITY; graph.vertex_count()];
    current[source] = 0;
    let mut next = current.clone();
    for _ in 0..hop_bound {
        for e in graph.edges() {
            let forward = weight_add(current[e.u], e.weight);
            if forward < next[e.v] {
                next[e.v] = forward;
            }
            if !graph.is_directed() {
                let backward = weight_add(current[e.v], e.weight);
                if backward < next[e.u] {
                    next[e.u] = backward;
                }
            }
        }
        current.copy_from_slice(&next);
    }
    current
}

/// Brute-force replacement distance: delete the faults, then run plain or
/// hop-limited shortest paths. Intended for exhaustive verification, not for
/// production queries.
pub fn replacement_distance_oracle(
    graph: &Graph,
    source: VertexId,
    target: VertexId,
    faults: &FaultSet,
    hop_bound: Option<usize>,
) -> Weight {
    if let FaultSet::Vertices(vs) = faults {
        if vs.contains(&source) || vs.contains(&target) {
            return INFINITY;
        }
    }
    let stripped = graph.without_faults(faults);
    match hop_bound {
        Some(limit) => hop_limited_distances(&stripped, source, limit)[target],
        None => sssp(&stripped, source)[target],
    }
}

/// All-pairs hop-limited distance table with path witnesses.
///
/// Built from min-plus products of the one-hop matrix (zero diagonal), with
/// the hop budget decomposed in binary so the bound is exactly `hop_bound`,
/// not a power-of-two relaxation. Ties take the smallest midpoint vertex,
/// and the smallest edge id among parallel edges at the base level.
#[derive(Debug, Clone)]
pub struct HopTable {
    vertex_count: usize,
    hop_bound: usize,
    levels: Vec<Level>,
    root: usize,
}

#[derive(Debug, Clone)]
struct Level {
    dist: Vec<Weight>,
    kind: LevelKind,
}

#[derive(Debug, Clone)]
enum LevelKind {
    Base { edge_pick: Vec<Option<EdgeId>> },
    Product { left: usize, right: usize, mid: Vec<u32> },
}

/// Computes the hop-limited all-pairs table for `graph`.
pub fn apsp_hop_limited(graph: &Graph, hop_bound: usize) -> Result<HopTable> {
    if hop_bound == 0 {
        return Err(Error::InvalidParameter("hop bound must be >= 1".to_owned()));
    }
    let n = graph.vertex_count();
    let mut dist = vec![INFINITY; n * n];
    let mut edge_pick = vec![None; n * n];
    for i in 0..n {
        dist[i * n + i] = 0;
    }
    let mut relax = |u: usize, v: usize, w: Weight, id: EdgeId| {
        let cell = u * n + v;
        if w < dist[cell] || (w == dist[cell] && edge_pick[cell].map_or(true, |old| id < old)) {
            dist[cell] = w;
            edge_pick[cell] = Some(id);
        }
    };
    for e in graph.edges() {
        relax(e.u, e.v, e.weight, e.id);
        if !graph.is_directed() {
            relax(e.v, e.u, e.weight, e.id);
        }
    }
    let mut table = HopTable {
        vertex_count: n,
        hop_bound,
        levels: vec![Level {
            dist,
            kind: LevelKind::Base { edge_pick },
        }],
        root: 0,
    };

    // Square-and-multiply over the min-plus semiring; zero diagonals make
    // hop budgets compose additively, so the binary decomposition of the
    // bound lands on it exactly.
    let mut acc: Option<usize> = None;
    let mut power = 0usize; // index of base^(2^bit)
    let mut remaining = hop_bound;
    while remaining > 0 {
        if remaining & 1 == 1 {
            acc = Some(match acc {
                None => power,
                Some(a) => table.product(a, power),
            });
        }
        remaining >>= 1;
        if remaining > 0 {
            power = table.product(power, power);
        }
    }
    table.root = acc.expect("hop_bound >= 1");
    Ok(table)
}

impl HopTable {
    pub fn hop_bound(&self) -> usize {
        self.hop_bound
    }

    fn product(&mut self, left: usize, right: usize) -> usize {
        let n = self.vertex_count;
        let mut dist = vec![INFINITY; n * n];
        let mut mid = vec![0u32; n * n];
        {
            let a = &self.levels[left].dist;
            let b = &self.levels[right].dist;
            for i in 0..n {
                for j in 0..n {
                    let mut best = INFINITY;
                    let mut best_mid = 0u32;
                    for k in 0..n {
                        let candidate = weight_add(a[i * n + k], b[k * n + j]);
                        if candidate < best {
                            best = candidate;
                            best_mid = k as u32;
                        }
                    }
                    dist[i * n + j] = best;
                    mid[i * n + j] = best_mid;
                }
            }
        }
        self.levels.push(Level {
            dist,
            kind: LevelKind::Product { left, right, mid },
        });
        self.levels.len() - 1
    }

    /// Minimum weight of a path from `s` to `t` with at most `hop_bound`
    /// edges, or [`INFINITY`].
    pub fn distance(&self, s: VertexId, t: VertexId) -> Weight {
        self.levels[self.root].dist[s * self.vertex_count + t]
    }

    /// Witness path as edge ids, already simplified (zero-weight cycles that
    /// min-plus walks can pick up are spliced out). `None` when unreachable;
    /// `Some(vec![])` for `s == t`.
    pub fn path_edges(&self, s: VertexId, t: VertexId, graph: &Graph) -> Option<Vec<EdgeId>> {
        if self.distance(s, t) >= INFINITY {
            return None;
        }
        let mut edges = Vec::new();
        self.collect(self.root, s, t, &mut edges);
        Some(simplify_walk(graph, s, &edges))
    }

    fn collect(&self, level: usize, i: VertexId, j: VertexId, out: &mut Vec<EdgeId>) {
        if i == j {
            return;
        }
        let n = self.vertex_count;
        match &self.levels[level].kind {
            LevelKind::Base { edge_pick } => {
                out.push(edge_pick[i * n + j].expect("finite base entry has an edge"));
            }
            LevelKind::Product { left, right, mid } => {
                let k = mid[i * n + j] as usize;
                self.collect(*left, i, k, out);
                self.collect(*right, k, j, out);
            }
        }
    }
}

/// Removes cycles from a walk given as edge ids starting at `start`. Any
/// cycle on a minimum-weight walk has total weight zero, so splicing it out
/// preserves the weight while making the path simple.
fn simplify_walk(graph: &Graph, start: VertexId, edges: &[EdgeId]) -> Vec<EdgeId> {
    let mut vertices = vec![start];
    let mut kept: Vec<EdgeId> = Vec::with_capacity(edges.len());
    for &id in edges {
        let e = graph.edge(id).expect("witness edges exist in the graph");
        let here = *vertices.last().expect("nonempty");
        let next = if e.u == here { e.v } else { e.u };
        if let Some(pos) = vertices.iter().position(|&v| v == next) {
            let dropped: Weight = kept[pos..]
                .iter()
                .map(|&k| graph.edge(k).expect("kept edge").weight)
                .sum::<Weight>()
                + e.weight;
            debug_assert_eq!(dropped, 0, "spliced cycle must weigh zero");
            vertices.truncate(pos + 1);
            kept.truncate(pos);
        } else {
            vertices.push(next);
            kept.push(id);
        }
    }
    kept
}

/// Weight of a path given by edge ids.
pub fn path_weight(graph: &Graph, edges: &[EdgeId]) -> Weight {
    edges
        .iter()
        .map(|&id| graph.edge(id).expect("edge exists").weight)
        .fold(0, weight_add)
}

/// Vertex sequence of a path given as edge ids from `start`.
pub fn path_vertices(graph: &Graph, start: VertexId, edges: &[EdgeId]) -> Vec<VertexId> {
    let mut seq = vec![start];
    for &id in edges {
        let e = graph.edge(id).expect("edge exists");
        let here = *seq.last().expect("nonempty");
        seq.push(if e.u == here { e.v } else { e.u });
    }
    seq
}

/// Enumerates all fault sets of size `<= max_faults` over the item range
/// `0..item_count`, calling `f` on each (including the empty set).
pub fn for_each_fault_set(
    item_count: usize,
    max_faults: usize,
    budget: Budget,
    f: &mut dyn FnMut(&[usize]),
) -> Result<()> {
    let total: u128 = (0..=max_faults as u64).map(|j| crate::hm::binomial(item_count as u64, j)).sum();
    budget.check(total.min(u64::MAX as u128) as u64, "fault-set enumeration")?;
    f(&[]);
    crate::hm::for_each_index_subset(item_count, max_faults, &mut |set| f(set));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path_graph(n: usize) -> Graph {
        let mut g = Graph::new(n, false);
        for i in 0..n - 1 {
            g.add_edge(i, i + 1, 1).unwrap();
        }
        g
    }

    #[test]
    fn hop_bound_cuts_off_long_paths() {
        let g = path_graph(3);
        let t1 = apsp_hop_limited(&g, 1).unwrap();
        assert_eq!(t1.distance(0, 2), INFINITY);
        let t2 = apsp_hop_limited(&g, 2).unwrap();
        assert_eq!(t2.distance(0, 2), 2);
        assert_eq!(t2.path_edges(0, 2, &g).unwrap(), vec![0, 1]);
    }

    #[test]
    fn diagonal_is_zero_with_empty_witness() {
        let g = path_graph(4);
        let t = apsp_hop_limited(&g, 3).unwrap();
        for v in 0..4 {
            assert_eq!(t.distance(v, v), 0);
            assert_eq!(t.path_edges(v, v, &g).unwrap(), Vec::<EdgeId>::new());
        }
    }

    #[test]
    fn table_matches_dp_oracle_on_random_graphs() {
        for seed in 0..25u64 {
            let n = 4 + (seed % 7) as usize;
            let g = Graph::random(n, 2 * n, 9, seed % 2 == 0, seed);
            for hop in 1..=6usize {
                let table = apsp_hop_limited(&g, hop).unwrap();
                for s in 0..n {
                    let oracle = hop_limited_distances(&g, s, hop);
                    for t in 0..n {
                        assert_eq!(
                            table.distance(s, t),
                            oracle[t],
                            "seed={seed} hop={hop} s={s} t={t}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn witness_weight_and_hops_match_entry() {
        for seed in 100..120u64 {
            let n = 5 + (seed % 5) as usize;
            let g = Graph::random(n, 3 * n, 7, false, seed);
            for hop in 1..=5usize {
                let table = apsp_hop_limited(&g, hop).unwrap();
                for s in 0..n {
                    for t in 0..n {
                        let d = table.distance(s, t);
                        if d < INFINITY {
                            let path = table.path_edges(s, t, &g).unwrap();
                            assert!(path.len() <= hop);
                            assert_eq!(path_weight(&g, &path), d);
                            // The path must be walkable from s to t.
                            let seq = path_vertices(&g, s, &path);
                            assert_eq!(*seq.last().unwrap(), t);
                            // And simple.
                            let mut sorted = seq.clone();
                            sorted.sort_unstable();
                            sorted.dedup();
                            assert_eq!(sorted.len(), seq.len(), "witness not simple");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_in_hop_bound_and_agrees_with_sssp() {
        for seed in 200..215u64 {
            let n = 6;
            let g = Graph::random(n, 12, 9, false, seed);
            let full = apsp_hop_limited(&g, n - 1).unwrap();
            let mut prev: Option<HopTable> = None;
            for hop in 1..n {
                let t = apsp_hop_limited(&g, hop).unwrap();
                if let Some(p) = &prev {
                    for s in 0..n {
                        for u in 0..n {
                            assert!(t.distance(s, u) <= p.distance(s, u));
                        }
                    }
                }
                prev = Some(t);
            }
            for s in 0..n {
                let d = sssp(&g, s);
                for t in 0..n {
                    assert_eq!(full.distance(s, t), d[t], "seed={seed}");
                }
            }
        }
    }

    #[test]
    fn replacement_oracle_examples() {
        let mut g = Graph::new(3, false);
        let e01 = g.add_edge(0, 1, 1).unwrap();
        g.add_edge(1, 2, 1).unwrap();
        g.add_edge(0, 2, 1).unwrap();
        assert_eq!(
            replacement_distance_oracle(&g, 0, 1, &FaultSet::none(), None),
            1
        );
        assert_eq!(
            replacement_distance_oracle(&g, 0, 1, &FaultSet::Edges(vec![e01]), None),
            2
        );
        // All edges incident to 0 gone.
        assert_eq!(
            replacement_distance_oracle(&g, 0, 1, &FaultSet::Edges(vec![0, 2]), None),
            INFINITY
        );
        // Vertex fault removes the middle of the 2-hop detour.
        assert_eq!(
            replacement_distance_oracle(&g, 0, 1, &FaultSet::Vertices(vec![2]), None),
            1
        );
        assert_eq!(
            replacement_distance_oracle(
                &g,
                0,
                1,
                &FaultSet::Edges(vec![e01]),
                Some(1)
            ),
            INFINITY
        );
    }

    #[test]
    fn single_vertex_and_disconnected() {
        let g = Graph::new(1, false);
        assert_eq!(sssp(&g, 0), vec![0]);
        let g2 = Graph::new(2, false);
        assert_eq!(sssp(&g2, 0)[1], INFINITY);
    }

    #[test]
    fn hop_oracle_with_fault_upper_bounds_true_distance() {
        for seed in 300..312u64 {
            let g = Graph::random(7, 14, 5, false, seed);
            for f in 0..g.edge_count() {
                let faults = FaultSet::Edges(vec![f]);
                for hop in 1..=4 {
                    for s in 0..7 {
                        for t in 0..7 {
                            let limited =
                                replacement_distance_oracle(&g, s, t, &faults, Some(hop));
                            let free = replacement_distance_oracle(&g, s, t, &faults, None);
                            assert!(limited >= free);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parse_and_roundtrip() {
        let text = "# demo\n3 2 undirected\n0 1 4\n1 2 5 # tail comment\n";
        let g = Graph::parse(text).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(!g.is_directed());
        let again = Graph::parse(&g.to_edge_list()).unwrap();
        assert_eq!(g, again);

        assert!(Graph::parse("3 1 undirected\n0 0 1\n").is_err());
        assert!(Graph::parse("3 2 undirected\n0 1 1\n").is_err());
        assert!(Graph::parse("").is_err());
    }

    #[test]
    fn restriction_preserves_edge_ids() {
        let g = Graph::random(6, 10, 9, false, 42);
        let keep: Vec<EdgeId> = g.edges().iter().map(|e| e.id).step_by(2).collect();
        let r = g.restrict_edges(|e| keep.contains(&e.id));
        for e in r.edges() {
            let orig = g.edge(e.id).unwrap();
            assert_eq!((orig.u, orig.v, orig.weight), (e.u, e.v, e.weight));
        }
    }

    proptest! {
        #[test]
        fn random_graph_is_deterministic(seed in any::<u64>()) {
            let a = Graph::random(8, 15, 9, false, seed);
            let b = Graph::random(8, 15, 9, false, seed);
            prop_assert_eq!(a, b);
        }
    }
}
