//! `(L,f)`-replacement-path coverings.
//!
//! A covering is a list of subgraphs such that every replacement path with at
//! most `hop_bound` edges avoiding at most `fault_bound` faults lies entirely
//! inside some subgraph that contains none of the faults. Deterministic
//! coverings come from Boolean hit-and-miss families: each subgraph keeps the
//! items on one side of a function `(coordinate i, range subset S)`. Only one
//! polarity is emitted per regime — items whose value avoids `S` when
//! `hop_bound >= fault_bound` (fault lookups enumerate `S` from the fault
//! images), items whose value lands in `S` otherwise (path lookups enumerate
//! `S` from the path images, and a strong family keeps half the candidates
//! clear of any fault set).

use crate::codes::{index_to_message, RsCode};
use crate::graph::{
    apsp_hop_limited, for_each_fault_set, hop_limited_distances, Graph, HopTable, VertexId,
    Weight, INFINITY,
};
use crate::hm::{
    build_prime_modulus_hm, build_rs_hm, rank_of_subset, subset_by_rank, subsets_up_to,
    BooleanHashFamily, HashFamily, Provenance,
};
use crate::{Budget, Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Whether covering items are edge ids or vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RpcMode {
    Edge,
    Vertex,
}

/// Which side of each `(i, S)` function the subgraphs keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolarityScheme {
    /// Keep items whose value avoids `S`; supports fault lookups (`hop_bound
    /// >= fault_bound`).
    SingleAvoid,
    /// Keep items whose value lands in `S`; supports path lookups
    /// (`hop_bound < fault_bound`, strong family).
    SingleContain,
    /// Both polarities, for families given only as Boolean evaluators.
    Both,
}

/// Family construction to use for deterministic coverings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    ReedSolomon,
    PrimeModulus,
}

/// Reproducible description of where the subgraphs came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RpcSource {
    /// Single subgraph equal to the whole graph (`fault_bound = 0`).
    Trivial,
    /// Alphabet-reduced hash family, one subgraph per `(i, S)` (and
    /// polarity, under `Both`).
    Family {
        family: HashFamily,
        hit_cap: usize,
        scheme: PolarityScheme,
    },
    /// Seeded random sampling with `oversample` as the constant factor of
    /// the subgraph count; the vertex count feeds the log term of that
    /// count and is recorded so reloads regenerate identically.
    Randomized {
        seed: u64,
        oversample: u32,
        vertex_count: usize,
    },
    /// Input-list covering: only hash functions selected for a given
    /// critical list, each paired with an explicit subset collection
    /// (either all small subsets or just the fault images seen in the
    /// list). Subgraphs keep items whose value avoids the subset.
    Restricted {
        family: HashFamily,
        per_coord: Vec<RestrictedCoord>,
    },
}

/// One selected hash function of a restricted covering and the range
/// subsets it is instantiated with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictedCoord {
    pub coord: u64,
    pub subsets: Vec<Vec<u64>>,
}

/// One subgraph: which items it retains plus how that set was derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphRef {
    pub index: usize,
    pub provenance: SubgraphProvenance,
    retained: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubgraphProvenance {
    Hash {
        coord: u64,
        subset: Vec<u64>,
        polarity: u8,
    },
    Random {
        draw: u64,
    },
    Whole,
}

impl SubgraphRef {
    pub fn retains(&self, item: usize) -> bool {
        self.retained[item]
    }

    pub fn retained_count(&self) -> usize {
        self.retained.iter().filter(|&&b| b).count()
    }

    pub fn retained_items(&self) -> Vec<usize> {
        (0..self.retained.len())
            .filter(|&i| self.retained[i])
            .collect()
    }

    pub fn avoids_all(&self, items: &[usize]) -> bool {
        items.iter().all(|&i| !self.retained[i])
    }

    pub fn contains_all(&self, items: &[usize]) -> bool {
        items.iter().all(|&i| self.retained[i])
    }

    /// The subgraph as a graph: edge restriction or vertex-induced depending
    /// on the covering mode.
    pub fn materialize(&self, graph: &Graph, mode: RpcMode) -> Graph {
        match mode {
            RpcMode::Edge => graph.restrict_edges(|e| self.retained[e.id]),
            RpcMode::Vertex => graph.induced(&self.retained),
        }
    }
}

/// An `(hop_bound, fault_bound)` covering of a fixed item universe.
///
/// `hop_bound` counts covered path *items*: edges in edge mode, vertices
/// (endpoints included) in vertex mode. A vertex-mode covering with bound
/// `t` therefore covers paths of at most `t - 1` edges — which is why the
/// spanner conversions ask for bound 2 to cover single edges and `L + 1` to
/// cover `L`-edge segments.
#[derive(Debug, Clone)]
pub struct RpcFamily {
    pub mode: RpcMode,
    pub hop_bound: usize,
    pub fault_bound: usize,
    item_count: usize,
    source: RpcSource,
    subset_count: u128,
    subgraphs: Vec<SubgraphRef>,
}

impl RpcFamily {
    pub fn covering_value(&self) -> usize {
        self.subgraphs.len()
    }

    pub fn item_count(&self) -> usize {
        self.item_count
    }

    pub fn source(&self) -> &RpcSource {
        &self.source
    }

    pub fn subgraphs(&self) -> &[SubgraphRef] {
        &self.subgraphs
    }

    /// Closed-form covering value for family-backed constructions:
    /// `len * sum_{j<=hit_cap} C(q, j)`, doubled under `Both`.
    pub fn expected_covering_value(&self) -> Option<u128> {
        match &self.source {
            RpcSource::Family {
                family,
                hit_cap,
                scheme,
            } => {
                let single = family.len() as u128 * subsets_up_to(family.alphabet(), *hit_cap);
                Some(match scheme {
                    PolarityScheme::Both => 2 * single,
                    _ => single,
                })
            }
            _ => None,
        }
    }

    /// `min(hop_bound, fault_bound)`, the subset size cap of the family.
    pub fn hit_cap(&self) -> usize {
        self.hop_bound.min(self.fault_bound)
    }

    fn family(&self) -> Option<&HashFamily> {
        match &self.source {
            RpcSource::Family { family, .. } => Some(family),
            _ => None,
        }
    }

    /// The subgraphs avoiding a fault set: per coordinate `i`, the subgraph
    /// whose subset is exactly the image of the faults under function `i`.
    /// Every returned subgraph excludes all of `faults`, and any path of at
    /// most `hop_bound` edges avoiding `faults` survives in one of them.
    pub fn subgraphs_avoiding_faults(&self, faults: &[usize]) -> Result<Vec<&SubgraphRef>> {
        if matches!(self.source, RpcSource::Trivial) && faults.is_empty() {
            return Ok(self.subgraphs.iter().collect());
        }
        let family = self.lookup_family("fault lookup", PolarityScheme::SingleAvoid)?;
        if faults.len() > self.fault_bound {
            return Err(Error::InvalidParameter(format!(
                "{} faults exceed the bound {}",
                faults.len(),
                self.fault_bound
            )));
        }
        let refs = (0..family.len())
            .map(|i| {
                let image = image_subset(family, i, faults);
                &self.subgraphs[self.subgraph_index(i, &image)]
            })
            .collect();
        Ok(refs)
    }

    /// The subgraphs fully containing a path (item set of at most
    /// `hop_bound` items): per coordinate, the subgraph whose subset is the
    /// image of the path. At least half of them avoid any disjoint fault set
    /// of at most `fault_bound` items, by the strong separation property.
    pub fn subgraphs_containing_path(&self, path_items: &[usize]) -> Result<Vec<&SubgraphRef>> {
        let family = self.lookup_family("path lookup", PolarityScheme::SingleContain)?;
        if path_items.len() > self.hop_bound {
            return Err(Error::InvalidParameter(format!(
                "{} path items exceed the bound {}",
                path_items.len(),
                self.hop_bound
            )));
        }
        let refs = (0..family.len())
            .map(|i| {
                let image = image_subset(family, i, path_items);
                &self.subgraphs[self.subgraph_index(i, &image)]
            })
            .collect();
        Ok(refs)
    }

    fn lookup_family(&self, what: &str, want: PolarityScheme) -> Result<&HashFamily> {
        let (family, scheme) = match &self.source {
            RpcSource::Family { family, scheme, .. } => (family, *scheme),
            RpcSource::Trivial => {
                return Err(Error::WrongRegime {
                    expected: format!("code-derived covering for {what}"),
                    actual: "trivial single-subgraph covering".to_owned(),
                })
            }
            RpcSource::Randomized { .. } => {
                return Err(Error::WrongRegime {
                    expected: format!("code-derived covering for {what}"),
                    actual: "randomized covering".to_owned(),
                })
            }
            RpcSource::Restricted { .. } => {
                return Err(Error::WrongRegime {
                    expected: format!("full covering for {what}"),
                    actual: "input-list covering".to_owned(),
                })
            }
        };
        if !matches!(family.provenance(), Provenance::ReedSolomon { .. }) {
            return Err(Error::WrongRegime {
                expected: format!("Reed-Solomon provenance for {what}"),
                actual: format!("{:?}", family.provenance()),
            });
        }
        if scheme != want {
            return Err(Error::WrongRegime {
                expected: format!("{want:?} polarity for {what}"),
                actual: format!("{scheme:?}"),
            });
        }
        Ok(family)
    }

    fn subgraph_index(&self, coord: u64, subset: &[u64]) -> usize {
        let family = self.family().expect("family-backed covering");
        let rank = rank_of_subset(family.alphabet(), subset);
        coord as usize * self.subset_count as usize + rank as usize
    }

    /// FNV-1a over the packed retained bitmaps, in subgraph order.
    pub fn checksum(&self) -> String {
        let mut hash = 0xcbf29ce484222325u64;
        let mut feed = |byte: u8| {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x00000100000001b3);
        };
        for sub in &self.subgraphs {
            let mut acc = 0u8;
            let mut bits = 0;
            for &b in &sub.retained {
                acc = (acc << 1) | u8::from(b);
                bits += 1;
                if bits == 8 {
                    feed(acc);
                    acc = 0;
                    bits = 0;
                }
            }
            if bits > 0 {
                feed(acc << (8 - bits));
            }
        }
        format!("{hash:016x}")
    }

    /// Provenance-only persistence; bitmaps are regenerated on load and
    /// checked against the stored checksum.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "format_version": 1,
            "mode": self.mode,
            "hop_bound": self.hop_bound,
            "fault_bound": self.fault_bound,
            "item_count": self.item_count,
            "source": self.source,
            "covering_value": self.covering_value(),
            "checksum": self.checksum(),
        })
    }

    pub fn from_json(value: &serde_json::Value, budget: Budget) -> Result<RpcFamily> {
        let version = value["format_version"].as_u64();
        if version != Some(1) {
            return Err(Error::Corrupt(format!(
                "unsupported covering format version {version:?}"
            )));
        }
        let mode: RpcMode = serde_json::from_value(value["mode"].clone())?;
        let hop_bound = value["hop_bound"]
            .as_u64()
            .ok_or_else(|| Error::Corrupt("missing hop_bound".to_owned()))?
            as usize;
        let fault_bound = value["fault_bound"]
            .as_u64()
            .ok_or_else(|| Error::Corrupt("missing fault_bound".to_owned()))?
            as usize;
        let item_count = value["item_count"]
            .as_u64()
            .ok_or_else(|| Error::Corrupt("missing item_count".to_owned()))?
            as usize;
        let source: RpcSource = serde_json::from_value(value["source"].clone())?;
        let rebuilt = assemble(mode, hop_bound, fault_bound, item_count, source, budget)?;
        let stored = value["checksum"].as_str().unwrap_or_default();
        let actual = rebuilt.checksum();
        if stored != actual {
            return Err(Error::Corrupt(format!(
                "covering checksum mismatch: stored {stored}, regenerated {actual}"
            )));
        }
        Ok(rebuilt)
    }
}

fn image_subset(family: &HashFamily, coord: u64, items: &[usize]) -> Vec<u64> {
    let mut image: Vec<u64> = items
        .iter()
        .map(|&x| family.evaluate(coord, x as u64))
        .collect();
    image.sort_unstable();
    image.dedup();
    image
}

/// Builds a deterministic covering of `graph`.
///
/// The family domain is the edge set or the vertex set depending on `mode`.
/// When `hop_bound < fault_bound` a strong Reed-Solomon family is required:
/// the construction keeps the path side, and only the strong property keeps
/// half the candidates clear of faults.
pub fn build_rpc(
    graph: &Graph,
    hop_bound: usize,
    fault_bound: usize,
    mode: RpcMode,
    kind: FamilyKind,
    strong: bool,
    budget: Budget,
) -> Result<RpcFamily> {
    if hop_bound == 0 {
        return Err(Error::InvalidParameter("hop bound must be >= 1".to_owned()));
    }
    if mode == RpcMode::Vertex && hop_bound < 2 {
        return Err(Error::InvalidParameter(
            "vertex-mode bound counts path vertices; need >= 2 to cover an edge".to_owned(),
        ));
    }
    let item_count = match mode {
        RpcMode::Edge => graph.edge_count(),
        RpcMode::Vertex => graph.vertex_count(),
    };
    let source = if fault_bound == 0 || item_count == 0 {
        RpcSource::Trivial
    } else {
        let miss_cap = hop_bound.max(fault_bound);
        let hit_cap = hop_bound.min(fault_bound);
        let path_side = hop_bound < fault_bound;
        if path_side && !strong {
            return Err(Error::InvalidParameter(
                "hop_bound < fault_bound requires a strong family".to_owned(),
            ));
        }
        let family = match kind {
            FamilyKind::ReedSolomon => build_rs_hm(item_count as u64, miss_cap, hit_cap, strong)?,
            FamilyKind::PrimeModulus => {
                if strong {
                    return Err(Error::InvalidParameter(
                        "no strong prime-modulus family exists; use Reed-Solomon".to_owned(),
                    ));
                }
                build_prime_modulus_hm(item_count as u64, miss_cap, hit_cap)?
            }
        };
        let scheme = if path_side {
            PolarityScheme::SingleContain
        } else {
            PolarityScheme::SingleAvoid
        };
        RpcSource::Family {
            family,
            hit_cap,
            scheme,
        }
    };
    assemble(mode, hop_bound, fault_bound, item_count, source, budget)
}

/// Generic covering from an arbitrary Boolean family: one subgraph per
/// function and polarity, `2 * len` in total.
pub fn build_rpc_from_boolean(
    graph: &Graph,
    hop_bound: usize,
    fault_bound: usize,
    mode: RpcMode,
    family: &BooleanHashFamily,
    budget: Budget,
) -> Result<RpcFamily> {
    let item_count = match mode {
        RpcMode::Edge => graph.edge_count(),
        RpcMode::Vertex => graph.vertex_count(),
    };
    if family.source().domain_size() != item_count as u64 {
        return Err(Error::InvalidParameter(format!(
            "family domain {} does not match item count {item_count}",
            family.source().domain_size()
        )));
    }
    let source = RpcSource::Family {
        family: family.source().clone(),
        hit_cap: family.hit_cap(),
        scheme: PolarityScheme::Both,
    };
    assemble(mode, hop_bound, fault_bound, item_count, source, budget)
}

/// Randomized baseline covering: with `L = hop_bound`, `f = fault_bound`,
/// `ceil(c * f * L^f * log2 n)` subgraphs keeping each item with probability
/// `1 - 1/L` when `L >= f`, else `ceil(c * f^(L+1) * log2 n)` subgraphs
/// keeping with probability `1/f`. Fully determined by the seed.
pub fn build_randomized_rpc(
    graph: &Graph,
    hop_bound: usize,
    fault_bound: usize,
    mode: RpcMode,
    seed: u64,
    oversample: u32,
    budget: Budget,
) -> Result<RpcFamily> {
    if hop_bound == 0 {
        return Err(Error::InvalidParameter("hop bound must be >= 1".to_owned()));
    }
    let item_count = match mode {
        RpcMode::Edge => graph.edge_count(),
        RpcMode::Vertex => graph.vertex_count(),
    };
    let source = if fault_bound == 0 || item_count == 0 {
        RpcSource::Trivial
    } else {
        RpcSource::Randomized {
            seed,
            oversample,
            vertex_count: graph.vertex_count(),
        }
    };
    assemble(mode, hop_bound, fault_bound, item_count, source, budget)
}

fn randomized_count(
    hop_bound: usize,
    fault_bound: usize,
    vertex_count: usize,
    oversample: u32,
) -> Result<u64> {
    let lg = (vertex_count.max(2) as f64).log2();
    let base = if hop_bound >= fault_bound {
        (hop_bound as f64).powi(fault_bound as i32) * fault_bound as f64
    } else {
        (fault_bound as f64).powi(hop_bound as i32 + 1)
    };
    let r = (oversample as f64 * base * lg).ceil();
    if !r.is_finite() || r > 1e12 {
        return Err(Error::InvalidParameter(
            "randomized covering size overflows".to_owned(),
        ));
    }
    Ok((r as u64).max(1))
}

/// Regenerates the subgraph bitmaps from a source description. Shared by the
/// builders and by persistence loading, so both paths are bit-identical.
pub(crate) fn assemble(
    mode: RpcMode,
    hop_bound: usize,
    fault_bound: usize,
    item_count: usize,
    source: RpcSource,
    budget: Budget,
) -> Result<RpcFamily> {
    let mut subgraphs = Vec::new();
    let mut subset_count = 0u128;
    match &source {
        RpcSource::Trivial => {
            subgraphs.push(SubgraphRef {
                index: 0,
                provenance: SubgraphProvenance::Whole,
                retained: vec![true; item_count],
            });
        }
        RpcSource::Family {
            family,
            hit_cap,
            scheme,
        } => {
            subset_count = subsets_up_to(family.alphabet(), *hit_cap);
            let polarities: &[u8] = match scheme {
                PolarityScheme::SingleAvoid => &[1],
                PolarityScheme::SingleContain => &[0],
                PolarityScheme::Both => &[0, 1],
            };
            let cv = family.len() as u128 * subset_count * polarities.len() as u128;
            let work = cv.saturating_mul(item_count.max(1) as u128);
            budget.check(
                work.min(u64::MAX as u128) as u64,
                "covering materialization",
            )?;
            let mut values = vec![0u64; item_count];
            for coord in 0..family.len() {
                for (x, slot) in values.iter_mut().enumerate() {
                    *slot = family.evaluate(coord, x as u64);
                }
                for rank in 0..subset_count {
                    let subset = subset_by_rank(family.alphabet(), *hit_cap, rank);
                    for &polarity in polarities {
                        let retained: Vec<bool> = values
                            .iter()
                            .map(|v| {
                                let inside = subset.binary_search(v).is_ok();
                                inside == (polarity == 0)
                            })
                            .collect();
                        subgraphs.push(SubgraphRef {
                            index: subgraphs.len(),
                            provenance: SubgraphProvenance::Hash {
                                coord,
                                subset: subset.clone(),
                                polarity,
                            },
                            retained,
                        });
                    }
                }
            }
        }
        RpcSource::Restricted { family, per_coord } => {
            let cv: u128 = per_coord.iter().map(|c| c.subsets.len() as u128).sum();
            budget.check(
                cv.saturating_mul(item_count.max(1) as u128)
                    .min(u64::MAX as u128) as u64,
                "restricted covering materialization",
            )?;
            for entry in per_coord {
                let mut values = vec![0u64; item_count];
                for (x, slot) in values.iter_mut().enumerate() {
                    *slot = family.evaluate(entry.coord, x as u64);
                }
                for subset in &entry.subsets {
                    let retained: Vec<bool> = values
                        .iter()
                        .map(|v| subset.binary_search(v).is_err())
                        .collect();
                    subgraphs.push(SubgraphRef {
                        index: subgraphs.len(),
                        provenance: SubgraphProvenance::Hash {
                            coord: entry.coord,
                            subset: subset.clone(),
                            polarity: 1,
                        },
                        retained,
                    });
                }
            }
        }
        RpcSource::Randomized {
            seed,
            oversample,
            vertex_count,
        } => {
            let r = randomized_count(hop_bound, fault_bound, *vertex_count, *oversample)?;
            budget.check(
                (r as u128 * item_count.max(1) as u128).min(u64::MAX as u128) as u64,
                "randomized covering materialization",
            )?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let keep_paths = hop_bound >= fault_bound;
            for draw in 0..r {
                let retained: Vec<bool> = (0..item_count)
                    .map(|_| {
                        if keep_paths {
                            rng.gen_range(0..hop_bound as u64) != 0
                        } else {
                            rng.gen_range(0..fault_bound as u64) == 0
                        }
                    })
                    .collect();
                subgraphs.push(SubgraphRef {
                    index: subgraphs.len(),
                    provenance: SubgraphProvenance::Random { draw },
                    retained,
                });
            }
        }
    }
    Ok(RpcFamily {
        mode,
        hop_bound,
        fault_bound,
        item_count,
        source,
        subset_count,
        subgraphs,
    })
}

/// Items of the domain whose Reed-Solomon codeword has a coordinate value in
/// `subset`, by preimage enumeration: fix the free digits, solve for the
/// constant digit. Returns a sorted list; linear in the preimage size rather
/// than the domain.
pub fn rs_preimage_items(
    code: &RsCode,
    coord: u64,
    subset: &[u64],
    item_count: usize,
) -> Vec<usize> {
    let q = code.alphabet();
    let k = code.message_len();
    let field = crate::codes::PrimeField::new(q).expect("code alphabet is prime");
    let mut out: Vec<usize> = Vec::new();
    let rest_total = q.checked_pow(k - 1).expect("desk-scale domain");
    for rest in 0..rest_total {
        let rest_digits = index_to_message(rest, q, k - 1).unwrap_or_default();
        // Value of the non-constant part at the coordinate point.
        let mut tail = 0u64;
        for (t, &c) in rest_digits.iter().enumerate() {
            let power = field.pow(coord, t as u64 + 1);
            tail = field.add(tail, field.mul(c, power));
        }
        for &target in subset {
            let constant = field.sub(target, tail);
            let item = constant + q * rest;
            if (item as usize) < item_count {
                out.push(item as usize);
            }
        }
    }
    out.sort_unstable();
    out
}

/// One covering violation: a fault set and pair whose hop-limited optimum
/// survives in no fault-free subgraph.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub source: VertexId,
    pub target: VertexId,
    pub faults: Vec<usize>,
    pub expected: Weight,
    pub best_covered: Weight,
}

/// Outcome of exhaustive covering verification.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub fault_sets_checked: u64,
    pub pairs_checked: u64,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively verifies the covering property of `family` on `graph`: for
/// every fault set of at most `fault_bound` items and every ordered pair with
/// a finite hop-limited replacement distance, some subgraph must avoid all
/// faults and preserve that exact distance (which certifies a surviving
/// optimal path — the correct relaxation when shortest paths tie).
pub fn verify_rpc(graph: &Graph, family: &RpcFamily, budget: Budget) -> Result<VerifyReport> {
    verify_rpc_impl(graph, family, None, budget)
}

/// Same check restricted to pairs with a fixed source vertex.
pub fn verify_rpc_from_source(
    graph: &Graph,
    family: &RpcFamily,
    source: VertexId,
    budget: Budget,
) -> Result<VerifyReport> {
    verify_rpc_impl(graph, family, Some(source), budget)
}

fn verify_rpc_impl(
    graph: &Graph,
    family: &RpcFamily,
    fixed_source: Option<VertexId>,
    budget: Budget,
) -> Result<VerifyReport> {
    let n = graph.vertex_count();
    let item_count = family.item_count;
    // In vertex mode the bound counts path vertices, so h edges need h+1
    // items.
    let hop = match family.mode {
        RpcMode::Edge => family.hop_bound,
        RpcMode::Vertex => family.hop_bound.saturating_sub(1).max(1),
    };
    let fault_sets: u128 = (0..=family.fault_bound as u64)
        .map(|j| crate::hm::binomial(item_count as u64, j))
        .sum();
    let work = fault_sets
        .saturating_mul((graph.edge_count() * hop + n * family.covering_value()) as u128);
    budget.check(work.min(u64::MAX as u128) as u64, "covering verification")?;

    // Per-subgraph distances, computed once. With a fixed source only that
    // row is needed, and the hop-count DP gets it much cheaper than the
    // all-pairs product tables.
    enum SubgraphDistances {
        Tables(Vec<HopTable>),
        SourceRows(Vec<Vec<Weight>>),
    }
    let distances = match fixed_source {
        None => SubgraphDistances::Tables(
            family
                .subgraphs
                .iter()
                .map(|sub| apsp_hop_limited(&sub.materialize(graph, family.mode), hop))
                .collect::<Result<_>>()?,
        ),
        Some(s) => SubgraphDistances::SourceRows(
            family
                .subgraphs
                .iter()
                .map(|sub| hop_limited_distances(&sub.materialize(graph, family.mode), s, hop))
                .collect(),
        ),
    };
    let subgraph_distance = |index: usize, s: VertexId, t: VertexId| match &distances {
        SubgraphDistances::Tables(tables) => tables[index].distance(s, t),
        SubgraphDistances::SourceRows(rows) => rows[index][t],
    };

    let sources: Vec<VertexId> = match fixed_source {
        Some(s) => vec![s],
        None => (0..n).collect(),
    };

    let mut report = VerifyReport {
        fault_sets_checked: 0,
        pairs_checked: 0,
        violations: Vec::new(),
    };
    for_each_fault_set(item_count, family.fault_bound, budget, &mut |faults| {
        report.fault_sets_checked += 1;
        let stripped = match family.mode {
            RpcMode::Edge => graph.restrict_edges(|e| !faults.contains(&e.id)),
            RpcMode::Vertex => {
                let mut retained = vec![true; n];
                for &v in faults {
                    retained[v] = false;
                }
                graph.induced(&retained)
            }
        };
        let avoiding: Vec<usize> = family
            .subgraphs
            .iter()
            .filter(|sub| sub.avoids_all(faults))
            .map(|sub| sub.index)
            .collect();
        for &s in &sources {
            if family.mode == RpcMode::Vertex && faults.contains(&s) {
                continue;
            }
            let oracle = hop_limited_distances(&stripped, s, hop);
            for t in 0..n {
                if t == s || (family.mode == RpcMode::Vertex && faults.contains(&t)) {
                    continue;
                }
                let expected = oracle[t];
                if expected >= INFINITY {
                    continue;
                }
                report.pairs_checked += 1;
                // A subgraph avoiding the faults is contained in the
                // stripped graph, so its distance can only be larger;
                // scanning until one matches is an existence check with an
                // early exit.
                let mut best = INFINITY;
                let mut covered = false;
                for &i in &avoiding {
                    let d = subgraph_distance(i, s, t);
                    if d < best {
                        best = d;
                    }
                    if d == expected {
                        covered = true;
                        break;
                    }
                }
                if !covered {
                    report.violations.push(Violation {
                        source: s,
                        target: t,
                        faults: faults.to_vec(),
                        expected,
                        best_covered: best,
                    });
                }
            }
        }
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hm::reduce_to_boolean;

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::new(n, false);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n, 1).unwrap();
        }
        g
    }

    #[test]
    fn zero_faults_gives_the_whole_graph() {
        let g = cycle(4);
        let family = build_rpc(
            &g,
            3,
            0,
            RpcMode::Edge,
            FamilyKind::ReedSolomon,
            false,
            Budget::default(),
        )
        .unwrap();
        assert_eq!(family.covering_value(), 1);
        assert_eq!(family.subgraphs()[0].retained_count(), 4);
        let report = verify_rpc(&g, &family, Budget::default()).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn rs_covering_on_cycle_verifies() {
        let g = cycle(4);
        let family = build_rpc(
            &g,
            2,
            1,
            RpcMode::Edge,
            FamilyKind::ReedSolomon,
            false,
            Budget::default(),
        )
        .unwrap();
        assert_eq!(
            family.covering_value() as u128,
            family.expected_covering_value().unwrap()
        );
        let report = verify_rpc(&g, &family, Budget::default()).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn prime_modulus_covering_verifies() {
        let g = Graph::random(7, 12, 5, false, 7);
        let family = build_rpc(
            &g,
            3,
            1,
            RpcMode::Edge,
            FamilyKind::PrimeModulus,
            false,
            Budget::default(),
        )
        .unwrap();
        assert_eq!(
            family.covering_value() as u128,
            family.expected_covering_value().unwrap()
        );
        let report = verify_rpc(&g, &family, Budget::default()).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn generic_boolean_covering_emits_both_polarities() {
        let g = cycle(5);
        let base = crate::hm::build_rs_hm(5, 2, 1, false).unwrap();
        let boolean = reduce_to_boolean(&base, 1).unwrap();
        let family =
            build_rpc_from_boolean(&g, 2, 1, RpcMode::Edge, &boolean, Budget::default()).unwrap();
        assert_eq!(family.covering_value() as u128, 2 * boolean.len());
        let report = verify_rpc(&g, &family, Budget::default()).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn empty_subgraphs_fail_with_witness() {
        let g = cycle(4);
        let mut family = build_rpc(
            &g,
            2,
            1,
            RpcMode::Edge,
            FamilyKind::ReedSolomon,
            false,
            Budget::default(),
        )
        .unwrap();
        for sub in &mut family.subgraphs {
            sub.retained = vec![false; 4];
        }
        let report = verify_rpc(&g, &family, Budget::default()).unwrap();
        assert!(!report.passed());
        assert!(!report.violations.is_empty());
    }

    #[test]
    fn deleting_an_edge_from_the_single_subgraph_breaks_covering() {
        let mut g = Graph::new(3, false);
        g.add_edge(0, 1, 1).unwrap();
        g.add_edge(1, 2, 1).unwrap();
        let mut family = build_rpc(
            &g,
            2,
            0,
            RpcMode::Edge,
            FamilyKind::ReedSolomon,
            false,
            Budget::default(),
        )
        .unwrap();
        assert!(verify_rpc(&g, &family, Budget::default()).unwrap().passed());
        family.subgraphs[0].retained[1] = false;
        assert!(!verify_rpc(&g, &family, Budget::default()).unwrap().passed());
    }

    #[test]
    fn fault_lookup_returns_fault_free_covers() {
        let g = Graph::random(8, 14, 6, false, 11);
        let m = g.edge_count();
        let family = build_rpc(
            &g,
            3,
            2,
            RpcMode::Edge,
            FamilyKind::ReedSolomon,
            false,
            Budget::default(),
        )
        .unwrap();
        let ell = match family.source() {
            RpcSource::Family { family, .. } => family.len(),
            _ => unreachable!(),
        };
        // Empty fault set: every coordinate yields the full graph.
        let full = family.subgraphs_avoiding_faults(&[]).unwrap();
        assert_eq!(full.len() as u64, ell);
        for sub in &full {
            assert_eq!(sub.retained_count(), m);
        }
        let tables: Vec<HopTable> = family
            .subgraphs()
            .iter()
            .map(|sub| apsp_hop_limited(&sub.materialize(&g, RpcMode::Edge), 3).unwrap())
            .collect();
        for f1 in 0..m {
            for f2 in (f1 + 1)..m {
                let faults = [f1, f2];
                let refs = family.subgraphs_avoiding_faults(&faults).unwrap();
                assert!(refs.len() as u64 <= ell);
                for sub in &refs {
                    assert!(sub.avoids_all(&faults));
                }
                // Coverage: the minimum over the returned subgraphs equals
                // the brute-force hop-limited replacement distance.
                let stripped = g.restrict_edges(|e| e.id != f1 && e.id != f2);
                for s in 0..8 {
                    let oracle = hop_limited_distances(&stripped, s, 3);
                    for t in 0..8 {
                        if s == t || oracle[t] >= INFINITY {
                            continue;
                        }
                        let best = refs
                            .iter()
                            .map(|sub| tables[sub.index].distance(s, t))
                            .min()
                            .unwrap();
                        assert_eq!(best, oracle[t], "s={s} t={t} faults={faults:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn path_lookup_contains_and_half_avoids() {
        let g = Graph::random(6, 10, 4, false, 3);
        let m = g.edge_count();
        let family = build_rpc(
            &g,
            2,
            3,
            RpcMode::Edge,
            FamilyKind::ReedSolomon,
            true,
            Budget::default(),
        )
        .unwrap();
        let (q, ell) = match family.source() {
            RpcSource::Family { family, .. } => (family.alphabet(), family.len()),
            _ => unreachable!(),
        };
        // Single-edge paths: one candidate per coordinate, all containing
        // the edge and obeying the 1-wise-independence size bound.
        for e in 0..m {
            let refs = family.subgraphs_containing_path(&[e]).unwrap();
            assert_eq!(refs.len() as u64, ell);
            for sub in &refs {
                assert!(sub.retains(e));
                let cap = (m as u64).div_ceil(q) * family.hit_cap() as u64;
                assert!(sub.retained_count() as u64 <= cap);
            }
        }
        // Half-avoidance under exhaustive fault enumeration.
        for e1 in 0..m {
            for e2 in (e1 + 1)..m {
                let path = [e1, e2];
                let refs = family.subgraphs_containing_path(&path).unwrap();
                for_each_fault_set(m, 3, Budget::default(), &mut |faults| {
                    if faults.iter().any(|f| path.contains(f)) {
                        return;
                    }
                    let clear = refs.iter().filter(|sub| sub.avoids_all(faults)).count();
                    assert!(
                        2 * clear >= refs.len(),
                        "path={path:?} faults={faults:?} clear={clear}/{}",
                        refs.len()
                    );
                })
                .unwrap();
            }
        }
    }

    #[test]
    fn wrong_regime_lookups_error() {
        let g = cycle(5);
        let avoid = build_rpc(
            &g,
            3,
            1,
            RpcMode::Edge,
            FamilyKind::ReedSolomon,
            false,
            Budget::default(),
        )
        .unwrap();
        assert!(avoid.subgraphs_containing_path(&[0]).is_err());
        let contain = build_rpc(
            &g,
            1,
            2,
            RpcMode::Edge,
            FamilyKind::ReedSolomon,
            true,
            Budget::default(),
        )
        .unwrap();
        assert!(contain.subgraphs_avoiding_faults(&[0]).is_err());
        // Equal bounds default to the fault-lookup side.
        let equal = build_rpc(
            &g,
            2,
            2,
            RpcMode::Edge,
            FamilyKind::ReedSolomon,
            false,
            Budget::default(),
        )
        .unwrap();
        assert!(equal.subgraphs_avoiding_faults(&[0]).is_ok());
        assert!(equal.subgraphs_containing_path(&[0]).is_err());
        // Prime-modulus coverings do not support code lookups.
        let pm = build_rpc(
            &g,
            3,
            1,
            RpcMode::Edge,
            FamilyKind::PrimeModulus,
            false,
            Budget::default(),
        )
        .unwrap();
        assert!(pm.subgraphs_avoiding_faults(&[0]).is_err());
        // hop_bound < fault_bound without strength is rejected.
        assert!(build_rpc(
            &g,
            1,
            2,
            RpcMode::Edge,
            FamilyKind::ReedSolomon,
            false,
            Budget::default()
        )
        .is_err());
    }

    #[test]
    fn bitmaps_match_preimage_enumeration() {
        let g = Graph::random(6, 12, 4, false, 9);
        let family = build_rpc(
            &g,
            2,
            3,
            RpcMode::Edge,
            FamilyKind::ReedSolomon,
            true,
            Budget::default(),
        )
        .unwrap();
        let code = match family.source() {
            RpcSource::Family { family, .. } => match family.provenance() {
                Provenance::ReedSolomon { code, .. } => *code,
                _ => unreachable!(),
            },
            _ => unreachable!(),
        };
        for sub in family.subgraphs() {
            let SubgraphProvenance::Hash {
                coord,
                subset,
                polarity,
            } = &sub.provenance
            else {
                panic!("family subgraphs carry hash provenance");
            };
            let preimage = rs_preimage_items(&code, *coord, subset, family.item_count());
            let from_provenance: Vec<usize> = if *polarity == 0 {
                preimage
            } else {
                (0..family.item_count())
                    .filter(|x| preimage.binary_search(x).is_err())
                    .collect()
            };
            assert_eq!(sub.retained_items(), from_provenance);
        }
    }

    #[test]
    fn randomized_covering_is_seed_deterministic() {
        let g = Graph::random(7, 13, 6, false, 21);
        let a = build_randomized_rpc(&g, 3, 1, RpcMode::Edge, 99, 4, Budget::default()).unwrap();
        let b = build_randomized_rpc(&g, 3, 1, RpcMode::Edge, 99, 4, Budget::default()).unwrap();
        assert_eq!(a.covering_value(), b.covering_value());
        for (x, y) in a.subgraphs().iter().zip(b.subgraphs()) {
            assert_eq!(x.retained, y.retained);
        }
        let c = build_randomized_rpc(&g, 3, 1, RpcMode::Edge, 100, 4, Budget::default()).unwrap();
        assert!(a
            .subgraphs()
            .iter()
            .zip(c.subgraphs())
            .any(|(x, y)| x.retained != y.retained));
    }

    #[test]
    fn randomized_hop_bound_one_gives_empty_subgraphs() {
        let g = cycle(4);
        let family =
            build_randomized_rpc(&g, 1, 1, RpcMode::Edge, 5, 4, Budget::default()).unwrap();
        for sub in family.subgraphs() {
            assert_eq!(sub.retained_count(), 0);
        }
    }

    #[test]
    fn vertex_mode_covering_verifies() {
        // Bounds count vertices: 2 covers single edges, 3 covers two-edge
        // paths.
        for (bound, faults) in [(2usize, 1usize), (3, 1), (3, 2)] {
            let g = Graph::random(7, 12, 5, false, 31);
            let family = build_rpc(
                &g,
                bound,
                faults,
                RpcMode::Vertex,
                FamilyKind::ReedSolomon,
                false,
                Budget::default(),
            )
            .unwrap();
            let report = verify_rpc(&g, &family, Budget::default()).unwrap();
            assert!(
                report.passed(),
                "bound={bound} faults={faults}: {:?}",
                report.violations
            );
        }
        assert!(build_rpc(
            &Graph::new(3, false),
            1,
            1,
            RpcMode::Vertex,
            FamilyKind::ReedSolomon,
            false,
            Budget::default()
        )
        .is_err());
    }

    #[test]
    fn persistence_roundtrip_and_checksum_guard() {
        let g = Graph::random(6, 11, 5, false, 17);
        for kind in [FamilyKind::ReedSolomon, FamilyKind::PrimeModulus] {
            let family =
                build_rpc(&g, 2, 2, RpcMode::Edge, kind, false, Budget::default()).unwrap();
            let json = family.to_json();
            let loaded = RpcFamily::from_json(&json, Budget::default()).unwrap();
            assert_eq!(loaded.covering_value(), family.covering_value());
            assert_eq!(loaded.checksum(), family.checksum());
        }
        let family =
            build_randomized_rpc(&g, 2, 1, RpcMode::Edge, 3, 4, Budget::default()).unwrap();
        let mut json = family.to_json();
        let loaded = RpcFamily::from_json(&json, Budget::default()).unwrap();
        assert_eq!(loaded.checksum(), family.checksum());
        json["checksum"] = "deadbeefdeadbeef".into();
        assert!(matches!(
            RpcFamily::from_json(&json, Budget::default()),
            Err(Error::Corrupt(_))
        ));
    }
}
