//! GKM graphs: regular multigraphs labeled by lattice weights.
//!
//! An n-valent graph with an axial function assigns to each oriented edge
//! (dart) a nonzero weight in Z^r, with the two orientations of an edge
//! carrying opposite weights. Writing L_p for the multiset of dart weights
//! leaving a vertex p, the axioms are:
//!
//!   1. every vertex has the same valence (regularity),
//!   2. the weights in L_p are pairwise linearly independent,
//!   3. along every edge e = (p, q) there is a bijection s: L_p -> L_q
//!      with s(w) = w (mod a(e)) for each w, and s(a(e)) = -a(e).
//!
//! Effectiveness additionally asks each L_p to generate the full lattice
//! Z^r over Z.
//!
//! Edges are stored once with a chosen orientation; the reverse dart is
//! synthesized with the negated weight. Vertices are ordered by name and
//! edges by (from, to, weight, id), so equal graphs have equal JSON.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::lattice::{congruent, generates_lattice, pairwise_independent, IntegerMatrix, Weight};
use crate::linalg::RationalMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("malformed graph document: {0}")]
    Malformed(String),
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdgeId(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge `{edge}` has weight of rank {found}, expected {expected}")]
    WeightRankMismatch {
        edge: String,
        expected: usize,
        found: usize,
    },
    #[error("no edge with id `{0}`")]
    UnknownEdge(String),
    #[error("no vertex named `{0}`")]
    UnknownVertexName(String),
    #[error("edge `{0}` has zero weight")]
    ZeroWeightEdge(String),
    #[error("torus ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("no vertex carries a spanning weight set")]
    NoSpanningVertex,
}

/// One stored (oriented) edge; the reverse dart carries -weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmGraph {
    torus_rank: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

/// Wire format. Unknown keys are rejected so typos fail loudly instead of
/// silently validating a different graph.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    torus_rank: usize,
    vertices: Vec<String>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: String,
    from: String,
    to: String,
    weight: Weight,
}

/// A dart (oriented edge) leaving a fixed vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dart {
    pub edge: usize,
    pub to: usize,
    pub weight: Weight,
}

impl GkmGraph {
    pub fn new(
        torus_rank: usize,
        vertices: Vec<String>,
        edges: Vec<(String, String, String, Weight)>,
    ) -> Result<Self, GraphError> {
        let mut names = vertices;
        names.sort();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateVertex(pair[0].clone()));
            }
        }
        let index: BTreeMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut seen_ids = BTreeSet::new();
        let mut built = Vec::with_capacity(edges.len());
        for (id, from, to, weight) in edges {
            if !seen_ids.insert(id.clone()) {
                return Err(GraphError::DuplicateEdgeId(id));
            }
            let &from = index
                .get(from.as_str())
                .ok_or_else(|| GraphError::UnknownVertex {
                    edge: id.clone(),
                    vertex: from.clone(),
                })?;
            let &to = index
                .get(to.as_str())
                .ok_or_else(|| GraphError::UnknownVertex {
                    edge: id.clone(),
                    vertex: to.clone(),
                })?;
            if weight.rank() != torus_rank {
                return Err(GraphError::WeightRankMismatch {
                    edge: id,
                    expected: torus_rank,
                    found: weight.rank(),
                });
            }
            built.push(Edge {
                id,
                from,
                to,
                weight,
            });
        }
        built.sort_by(|a, b| {
            (a.from, a.to, &a.weight, &a.id).cmp(&(b.from, b.to, &b.weight, &b.id))
        });
        Ok(GkmGraph {
            torus_rank,
            vertices: names,
            edges: built,
        })
    }

    pub fn from_json(input: &str) -> Result<Self, GraphError> {
        let doc: GraphDoc =
            serde_json::from_str(input).map_err(|e| GraphError::Malformed(e.to_string()))?;
        GkmGraph::new(
            doc.torus_rank,
            doc.vertices,
            doc.edges
                .into_iter()
                .map(|e| (e.id, e.from, e.to, e.weight))
                .collect(),
        )
    }

    fn doc(&self) -> GraphDoc {
        GraphDoc {
            torus_rank: self.torus_rank,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    from: self.vertices[e.from].clone(),
                    to: self.vertices[e.to].clone(),
                    weight: e.weight.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.doc()).expect("graph serialization")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.doc()).expect("graph serialization")
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Darts leaving v, sorted by weight (ties broken by edge index). A
    /// self-loop contributes two darts.
    pub fn darts_at(&self, v: usize) -> Vec<Dart> {
        let mut darts = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from == v {
                darts.push(Dart {
                    edge: i,
                    to: e.to,
                    weight: e.weight.clone(),
                });
            }
            if e.to == v {
                darts.push(Dart {
                    edge: i,
                    to: e.from,
                    weight: -&e.weight,
                });
            }
        }
        darts.sort_by(|a, b| (&a.weight, a.edge).cmp(&(&b.weight, b.edge)));
        darts
    }

    /// The weight multiset L_v, sorted.
    pub fn vertex_weights(&self, v: usize) -> Vec<Weight> {
        self.darts_at(v).into_iter().map(|d| d.weight).collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.from == v) + usize::from(e.to == v))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ZeroWeight {
        edge: String,
    },
    NotRegular {
        vertex: String,
        valence: usize,
        expected: usize,
    },
    DependentWeights {
        vertex: String,
        first: Weight,
        second: Weight,
    },
    NoConnection {
        edge: String,
    },
    NotEffective {
        vertex: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Common valence when the graph is regular.
    pub valence: Option<usize>,
    pub effectiveness_checked: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the axioms; with `check_effective` also require every vertex
/// weight set to generate the lattice. Connection checks are skipped when
/// zero weights or dependent pairs are present, since the congruence test
/// is not meaningful there.
pub fn validate(g: &GkmGraph, check_effective: bool) -> ValidationReport {
    let mut violations = Vec::new();

    for e in g.edges() {
        if e.weight.is_zero() {
            violations.push(Violation::ZeroWeight { edge: e.id.clone() });
        }
    }

    let valences: Vec<usize> = (0..g.num_vertices()).map(|v| g.valence(v)).collect();
    let expected = {
        // Mode of the valences, smaller value on ties.
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &d in &valences {
            *counts.entry(d).or_insert(0) += 1;
        }
        counts
            .iter()
            .max_by_key(|(d, c)| (**c, std::cmp::Reverse(**d)))
            .map(|(d, _)| *d)
    };
    if let Some(expected) = expected {
        for (v, &d) in valences.iter().enumerate() {
            if d != expected {
                violations.push(Violation::NotRegular {
                    vertex: g.vertex_name(v).to_string(),
                    valence: d,
                    expected,
                });
            }
        }
    }
    let regular = valences.iter().all(|&d| Some(d) == expected);

    for v in 0..g.num_vertices() {
        let weights = g.vertex_weights(v);
        'pairs: for i in 0..weights.len() {
            for j in (i + 1)..weights.len() {
                let pair = [weights[i].clone(), weights[j].clone()];
                if !pairwise_independent(&pair).unwrap_or(true) {
                    violations.push(Violation::DependentWeights {
                        vertex: g.vertex_name(v).to_string(),
                        first: pair[0].clone(),
                        second: pair[1].clone(),
                    });
                    break 'pairs; // first offending pair per vertex
                }
            }
        }
    }

    let weights_clean = violations.iter().all(|v| {
        !matches!(
            v,
            Violation::ZeroWeight { .. } | Violation::DependentWeights { .. }
        )
    });
    if weights_clean {
        for e in g.edges() {
            let conns = connections_along(g, &e.id).expect("edge exists and is nonzero");
            if conns.is_empty() {
                violations.push(Violation::NoConnection { edge: e.id.clone() });
            }
        }
    }

    if check_effective {
        for v in 0..g.num_vertices() {
            let weights = g.vertex_weights(v);
            if !generates_lattice(&weights).unwrap_or(false) {
                violations.push(Violation::NotEffective {
                    vertex: g.vertex_name(v).to_string(),
                });
            }
        }
    }

    ValidationReport {
        valence: if regular { expected } else { None },
        effectiveness_checked: check_effective,
        violations,
    }
}

/// A connection along an edge (p, q): the bijection L_p -> L_q written as
/// sorted (source, target) pairs.
pub type Connection = Vec<(Weight, Weight)>;

/// All bijections L_p -> L_q that are congruences mod the edge weight and
/// send the edge's own dart to its reverse. Deterministic order.
pub fn connections_along(g: &GkmGraph, edge_id: &str) -> Result<Vec<Connection>, GraphError> {
    let idx = g
        .edge_index(edge_id)
        .ok_or_else(|| GraphError::UnknownEdge(edge_id.to_string()))?;
    let e = &g.edges()[idx];
    if e.weight.is_zero() {
        return Err(GraphError::ZeroWeightEdge(edge_id.to_string()));
    }
    let p = e.from;
    let q = e.to;
    let sources = g.darts_at(p);
    let targets = g.darts_at(q);
    if sources.len() != targets.len() {
        return Ok(Vec::new());
    }
    let w = &e.weight;
    let neg_w = -w;

    // The edge's own darts are forced onto each other.
    let Some(src_self) = sources.iter().position(|d| d.edge == idx && d.weight == *w) else {
        return Ok(Vec::new());
    };
    let Some(tgt_self) = targets
        .iter()
        .position(|d| d.edge == idx && d.weight == neg_w)
    else {
        return Ok(Vec::new());
    };

    fn search(
        sources: &[Dart],
        targets: &[Dart],
        w: &Weight,
        si: usize,
        used: &mut Vec<bool>,
        partial: &mut Vec<(Weight, Weight)>,
        forced: (usize, usize),
        out: &mut BTreeSet<Connection>,
    ) {
        if si == sources.len() {
            let mut conn = partial.clone();
            conn.sort();
            out.insert(conn);
            return;
        }
        if si == forced.0 {
            partial.push((sources[si].weight.clone(), targets[forced.1].weight.clone()));
            search(sources, targets, w, si + 1, used, partial, forced, out);
            partial.pop();
            return;
        }
        for ti in 0..targets.len() {
            if used[ti] || ti == forced.1 {
                continue;
            }
            let fits = congruent(&targets[ti].weight, &sources[si].weight, w)
                .map_or(false, |k| k.is_some());
            if !fits {
                continue;
            }
            used[ti] = true;
            partial.push((sources[si].weight.clone(), targets[ti].weight.clone()));
            search(sources, targets, w, si + 1, used, partial, forced, out);
            partial.pop();
            used[ti] = false;
        }
    }

    let mut out = BTreeSet::new();
    let mut used = vec![false; targets.len()];
    search(
        &sources,
        &targets,
        w,
        0,
        &mut used,
        &mut Vec::new(),
        (src_self, tgt_self),
        &mut out,
    );
    Ok(out.into_iter().collect())
}

/// An isomorphism g1 -> g2: a vertex bijection together with a unimodular
/// change of lattice basis psi applied to all weights (the identity when a
/// lattice-fixed isomorphism was requested).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIsomorphism {
    pub vertex_map: Vec<usize>,
    pub psi: IntegerMatrix,
}

/// Dart-weight multisets per ordered vertex pair, the invariant an
/// isomorphism must transport.
fn pair_multisets(
    g: &GkmGraph,
    psi: Option<&IntegerMatrix>,
) -> BTreeMap<(usize, usize), Vec<Weight>> {
    let mut map: BTreeMap<(usize, usize), Vec<Weight>> = BTreeMap::new();
    for e in g.edges() {
        let w = match psi {
            Some(m) => m.apply(&e.weight),
            None => e.weight.clone(),
        };
        map.entry((e.from, e.to)).or_default().push(w.clone());
        map.entry((e.to, e.from)).or_default().push(-&w);
    }
    for v in map.values_mut() {
        v.sort();
    }
    map
}

fn transformed_vertex_weights(g: &GkmGraph, v: usize, psi: Option<&IntegerMatrix>) -> Vec<Weight> {
    let mut ws: Vec<Weight> = g
        .vertex_weights(v)
        .into_iter()
        .map(|w| match psi {
            Some(m) => m.apply(&w),
            None => w,
        })
        .collect();
    ws.sort();
    ws
}

/// Greedily pick a maximal Q-independent subset of the weights at v; Some
/// when it reaches full rank.
fn spanning_subset(weights: &[Weight], rank: usize) -> Option<Vec<Weight>> {
    let mut chosen: Vec<Weight> = Vec::new();
    for w in weights {
        if chosen.len() == rank {
            break;
        }
        let mut candidate = chosen.clone();
        candidate.push(w.clone());
        let rows: Vec<Vec<BigRational>> = candidate
            .iter()
            .map(|c| {
                c.coords()
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        if RationalMatrix::from_rows(rows).rank() == candidate.len() {
            chosen = candidate;
        }
    }
    (chosen.len() == rank).then_some(chosen)
}

/// Invert an n x n rational matrix; None when singular.
fn invert_rational(m: &RationalMatrix) -> Option<RationalMatrix> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut aug = RationalMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, crate::linalg::integer(1));
    }
    let pivots = aug.rref();
    if pivots != (0..n).collect::<Vec<_>>() {
        return None;
    }
    let mut inv = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, aug.get(i, n + j).clone());
        }
    }
    Some(inv)
}

fn rational_from_weights_cols(ws: &[Weight]) -> RationalMatrix {
    let n = ws.first().map_or(0, Weight::rank);
    let mut m = RationalMatrix::zeros(n, ws.len());
    for (j, w) in ws.iter().enumerate() {
        for i in 0..n {
            m.set(i, j, BigRational::from_integer(w.coord(i).clone()));
        }
    }
    m
}

/// Unimodular matrices psi that could carry some vertex of g1 onto some
/// vertex of g2, solved from a base vertex of g1 whose weights span Q^n.
fn psi_candidates(g1: &GkmGraph, g2: &GkmGraph) -> Result<Vec<IntegerMatrix>, GraphError> {
    let n = g1.torus_rank();
    if n == 0 {
        return Ok(vec![IntegerMatrix::identity(0)]);
    }
    let mut base: Option<(usize, Vec<Weight>)> = None;
    for v in 0..g1.num_vertices() {
        if let Some(basis) = spanning_subset(&g1.vertex_weights(v), n) {
            base = Some((v, basis));
            break;
        }
    }
    let Some((base_vertex, basis)) = base else {
        return Err(GraphError::NoSpanningVertex);
    };
    let base_weights = transformed_vertex_weights(g1, base_vertex, None);
    let b_inv = invert_rational(&rational_from_weights_cols(&basis)).expect("basis spans");

    let mut out: BTreeSet<Vec<Vec<num_bigint::BigInt>>> = BTreeSet::new();
    for v2 in 0..g2.num_vertices() {
        let targets = g2.vertex_weights(v2);
        if targets.len() != base_weights.len() {
            continue;
        }
        // Every injective assignment of the basis weights to target darts.
        let mut selection = vec![usize::MAX; n];
        assign(
            g2,
            v2,
            &targets,
            &basis,
            &base_weights,
            &b_inv,
            0,
            &mut selection,
            &mut out,
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        g2: &GkmGraph,
        v2: usize,
        targets: &[Weight],
        basis: &[Weight],
        base_weights: &[Weight],
        b_inv: &RationalMatrix,
        i: usize,
        selection: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<Vec<num_bigint::BigInt>>>,
    ) {
        let n = basis.len();
        if i == n {
            // psi = [images] * basis^{-1}; keep it only if integral,
            // unimodular, and carrying the whole weight multiset over.
            let images: Vec<Weight> = selection.iter().map(|&t| targets[t].clone()).collect();
            let img = rational_from_weights_cols(&images);
            let mut psi_rat = RationalMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    let mut acc = crate::linalg::integer(0);
                    for k in 0..n {
                        acc += img.get(r, k) * b_inv.get(k, c);
                    }
                    psi_rat.set(r, c, acc);
                }
            }
            let mut psi = IntegerMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    let q = psi_rat.get(r, c);
                    if !q.is_integer() {
                        return;
                    }
                    psi.set(r, c, q.to_integer());
                }
            }
            if !psi.is_unimodular() {
                return;
            }
            let mut mapped: Vec<Weight> = base_weights.iter().map(|w| psi.apply(w)).collect();
            mapped.sort();
            if mapped != transformed_vertex_weights(g2, v2, None) {
                return;
            }
            let data: Vec<Vec<num_bigint::BigInt>> = (0..n)
                .map(|r| (0..n).map(|c| psi.get(r, c).clone()).collect())
                .collect();
            out.insert(data);
            return;
        }
        for t in 0..targets.len() {
            if selection[..i].contains(&t) {
                continue;
            }
            selection[i] = t;
            assign(
                g2,
                v2,
                targets,
                basis,
                base_weights,
                b_inv,
                i + 1,
                selection,
                out,
            );
            selection[i] = usize::MAX;
        }
    }

    Ok(out
        .into_iter()
        .map(|rows| IntegerMatrix::from_rows(rows))
        .collect())
}

fn vertex_map_search(
    g1: &GkmGraph,
    g2: &GkmGraph,
    psi: &IntegerMatrix,
    collect_all: bool,
    found: &mut Vec<GraphIsomorphism>,
) {
    let n1 = g1.num_vertices();
    let pairs1 = pair_multisets(g1, Some(psi));
    let pairs2 = pair_multisets(g2, None);
    let lambda1: Vec<Vec<Weight>> = (0..n1)
        .map(|v| transformed_vertex_weights(g1, v, Some(psi)))
        .collect();
    let lambda2: Vec<Vec<Weight>> = (0..g2.num_vertices())
        .map(|v| transformed_vertex_weights(g2, v, None))
        .collect();

    fn backtrack(
        g1: &GkmGraph,
        psi: &IntegerMatrix,
        pairs1: &BTreeMap<(usize, usize), Vec<Weight>>,
        pairs2: &BTreeMap<(usize, usize), Vec<Weight>>,
        lambda1: &[Vec<Weight>],
        lambda2: &[Vec<Weight>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        collect_all: bool,
        found: &mut Vec<GraphIsomorphism>,
    ) -> bool {
        let u = map.len();
        if u == lambda1.len() {
            found.push(GraphIsomorphism {
                vertex_map: map.clone(),
                psi: psi.clone(),
            });
            return !collect_all;
        }
        for v in 0..lambda2.len() {
            if used[v] || lambda1[u] != lambda2[v] {
                continue;
            }
            let empty: Vec<Weight> = Vec::new();
            let consistent = (0..u).all(|u2| {
                let fwd = pairs1.get(&(u, u2)).unwrap_or(&empty)
                    == pairs2.get(&(v, map[u2])).unwrap_or(&empty);
                let bwd = pairs1.get(&(u2, u)).unwrap_or(&empty)
                    == pairs2.get(&(map[u2], v)).unwrap_or(&empty);
                fwd && bwd
            }) && pairs1.get(&(u, u)).unwrap_or(&empty)
                == pairs2.get(&(v, v)).unwrap_or(&empty);
            if !consistent {
                continue;
            }
            used[v] = true;
            map.push(v);
            let stop = backtrack(
                g1,
                psi,
                pairs1,
                pairs2,
                lambda1,
                lambda2,
                map,
                used,
                collect_all,
                found,
            );
            map.pop();
            used[v] = false;
            if stop {
                return true;
            }
        }
        false
    }

    backtrack(
        g1,
        psi,
        &pairs1,
        &pairs2,
        &lambda1,
        &lambda2,
        &mut Vec::new(),
        &mut vec![false; g2.num_vertices()],
        collect_all,
        found,
    );
}

/// Search for an isomorphism g1 -> g2. With `allow_lattice_change` the
/// witness may include any unimodular change of basis; otherwise psi is
/// pinned to the identity.
pub fn isomorphic(
    g1: &GkmGraph,
    g2: &GkmGraph,
    allow_lattice_change: bool,
) -> Result<Option<GraphIsomorphism>, GraphError> {
    if g1.torus_rank() != g2.torus_rank() {
        return Err(GraphError::RankMismatch(g1.torus_rank(), g2.torus_rank()));
    }
    if g1.num_vertices() != g2.num_vertices() || g1.edges().len() != g2.edges().len() {
        return Ok(None);
    }
    let candidates = if allow_lattice_change {
        psi_candidates(g1, g2)?
    } else {
        vec![IntegerMatrix::identity(g1.torus_rank())]
    };
    for psi in &candidates {
        let mut found = Vec::new();
        vertex_map_search(g1, g2, psi, false, &mut found);
        if let Some(iso) = found.into_iter().next() {
            return Ok(Some(iso));
        }
    }
    Ok(None)
}

/// All isomorphisms g1 -> g2 allowing lattice change; the automorphism
/// group machinery builds on this.
pub fn all_isomorphisms(g1: &GkmGraph, g2: &GkmGraph) -> Result<Vec<GraphIsomorphism>, GraphError> {
    if g1.torus_rank() != g2.torus_rank() {
        return Err(GraphError::RankMismatch(g1.torus_rank(), g2.torus_rank()));
    }
    if g1.num_vertices() != g2.num_vertices() || g1.edges().len() != g2.edges().len() {
        return Ok(Vec::new());
    }
    let mut found = Vec::new();
    for psi in psi_candidates(g1, g2)? {
        vertex_map_search(g1, g2, &psi, true, &mut found);
    }
    found.sort_by(|a, b| {
        let ka = (&a.vertex_map, format!("{:?}", a.psi));
        let kb = (&b.vertex_map, format!("{:?}", b.psi));
        ka.cmp(&kb)
    });
    found.dedup();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(coords: &[i64]) -> Weight {
        Weight::from_ints(coords)
    }

    /// Two vertices, three edges: the weight triple (a, b, a+b) pattern.
    fn two_vertex_graph(ws: [Weight; 3]) -> GkmGraph {
        GkmGraph::new(
            2,
            vec!["n".to_string(), "s".to_string()],
            vec![
                (
                    "e1".to_string(),
                    "n".to_string(),
                    "s".to_string(),
                    ws[0].clone(),
                ),
                (
                    "e2".to_string(),
                    "n".to_string(),
                    "s".to_string(),
                    ws[1].clone(),
                ),
                (
                    "e3".to_string(),
                    "s".to_string(),
                    "n".to_string(),
                    ws[2].clone(),
                ),
            ],
        )
        .unwrap()
    }

    fn sphere() -> GkmGraph {
        two_vertex_graph([w(&[1, 0]), w(&[0, 1]), w(&[1, 1])])
    }

    #[test]
    fn parse_normative_document() {
        let doc = r#"{"torus_rank":2,"vertices":["p1","p2"],"edges":[{"id":"e1","from":"p1","to":"p2","weight":[1,0]}]}"#;
        let g = GkmGraph::from_json(doc).unwrap();
        assert_eq!(g.torus_rank(), 2);
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.to_json(), doc);
    }

    #[test]
    fn unknown_keys_rejected() {
        let doc = r#"{"torus_rank":2,"vertices":["p1","p2"],"edges":[],"extra":1}"#;
        assert!(matches!(
            GkmGraph::from_json(doc).unwrap_err(),
            GraphError::Malformed(_)
        ));
        let doc = r#"{"torus_rank":2,"vertices":["p1","p2"],"edges":[{"id":"e1","from":"p1","to":"p2","weight":[1,0],"color":"red"}]}"#;
        assert!(matches!(
            GkmGraph::from_json(doc).unwrap_err(),
            GraphError::Malformed(_)
        ));
    }

    #[test]
    fn structural_errors() {
        let dup_vertex = GkmGraph::new(2, vec!["p".into(), "p".into()], vec![]);
        assert!(matches!(dup_vertex, Err(GraphError::DuplicateVertex(_))));
        let dup_edge = GkmGraph::new(
            2,
            vec!["p".into(), "q".into()],
            vec![
                ("e1".into(), "p".into(), "q".into(), w(&[1, 0])),
                ("e1".into(), "q".into(), "p".into(), w(&[0, 1])),
            ],
        );
        assert!(matches!(dup_edge, Err(GraphError::DuplicateEdgeId(_))));
        let bad_endpoint = GkmGraph::new(
            2,
            vec!["p".into()],
            vec![("e1".into(), "p".into(), "q".into(), w(&[1, 0]))],
        );
        assert!(matches!(
            bad_endpoint,
            Err(GraphError::UnknownVertex { .. })
        ));
        let bad_rank = GkmGraph::new(
            2,
            vec!["p".into(), "q".into()],
            vec![("e1".into(), "p".into(), "q".into(), w(&[1, 0, 0]))],
        );
        assert!(matches!(
            bad_rank,
            Err(GraphError::WeightRankMismatch {
                expected: 2,
                found: 3,
                ..
            })
        ));
    }

    #[test]
    fn canonical_ordering() {
        // Vertices and edges come back sorted regardless of input order.
        let g = GkmGraph::new(
            2,
            vec!["zz".into(), "aa".into()],
            vec![
                ("e2".into(), "zz".into(), "aa".into(), w(&[1, 1])),
                ("e1".into(), "aa".into(), "zz".into(), w(&[1, 0])),
                ("e3".into(), "aa".into(), "zz".into(), w(&[0, 1])),
            ],
        )
        .unwrap();
        assert_eq!(g.vertex_names(), &["aa".to_string(), "zz".to_string()]);
        let ids: Vec<&str> = g.edges().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, vec!["e3", "e1", "e2"]);
    }

    #[test]
    fn validate_sphere() {
        let report = validate(&sphere(), true);
        assert!(report.is_valid());
        assert_eq!(report.valence, Some(3));
    }

    #[test]
    fn validate_catches_zero_weight() {
        let g = two_vertex_graph([w(&[0, 0]), w(&[0, 1]), w(&[1, 1])]);
        let report = validate(&g, false);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ZeroWeight { .. })));
    }

    #[test]
    fn validate_catches_dependent_weights() {
        let g = two_vertex_graph([w(&[1, 0]), w(&[2, 0]), w(&[1, 1])]);
        let report = validate(&g, false);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DependentWeights { .. })));
        // Connection search is skipped entirely in that case.
        assert!(!report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NoConnection { .. })));
    }

    #[test]
    fn validate_catches_missing_connection() {
        // (1,0), (0,1), (1,2): along e1 the weight (0,1) has no congruent
        // partner, so no connection exists.
        let g = two_vertex_graph([w(&[1, 0]), w(&[0, 1]), w(&[1, 2])]);
        let report = validate(&g, false);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NoConnection { .. })));
    }

    #[test]
    fn validate_catches_irregular() {
        let g = GkmGraph::new(
            2,
            vec!["p".into(), "q".into(), "r".into()],
            vec![
                ("e1".into(), "p".into(), "q".into(), w(&[1, 0])),
                ("e2".into(), "p".into(), "r".into(), w(&[0, 1])),
            ],
        )
        .unwrap();
        let report = validate(&g, false);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotRegular { .. })));
        assert_eq!(report.valence, None);
    }

    #[test]
    fn validate_effectiveness() {
        // Index-two sublattice: weights (1,1), (1,-1), (2,0)-ish pattern.
        let g = two_vertex_graph([w(&[1, 1]), w(&[1, -1]), w(&[2, 0])]);
        let no_check = validate(&g, false);
        let checked = validate(&g, true);
        assert!(!no_check
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotEffective { .. })));
        assert!(checked
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotEffective { .. })));
    }

    #[test]
    fn sphere_connection_unique() {
        let g = sphere();
        // e1 is n->s with weight (1,0) after sorting.
        let conns = connections_along(&g, "e1").unwrap();
        assert_eq!(conns.len(), 1);
        let expect: Connection = vec![
            (w(&[-1, -1]), w(&[0, -1])),
            (w(&[0, 1]), w(&[1, 1])),
            (w(&[1, 0]), w(&[-1, 0])),
        ];
        assert_eq!(conns[0], expect);
    }

    #[test]
    fn ambiguous_connection_counted() {
        // L_p = {(1,0),(0,1),(1,1)}, L_q = {(-1,0),(-1,1),(-2,1)} along
        // w = (1,0): two bijections qualify.
        let g = GkmGraph::new(
            2,
            vec![
                "p".into(),
                "q".into(),
                "r1".into(),
                "r2".into(),
                "s1".into(),
                "s2".into(),
            ],
            vec![
                ("e1".into(), "p".into(), "q".into(), w(&[1, 0])),
                ("e2".into(), "p".into(), "r1".into(), w(&[0, 1])),
                ("e3".into(), "p".into(), "r2".into(), w(&[1, 1])),
                ("e4".into(), "q".into(), "s1".into(), w(&[-1, 1])),
                ("e5".into(), "q".into(), "s2".into(), w(&[-2, 1])),
            ],
        )
        .unwrap();
        let conns = connections_along(&g, "e1").unwrap();
        assert_eq!(conns.len(), 2);
        for conn in &conns {
            assert!(conn.contains(&(w(&[1, 0]), w(&[-1, 0]))));
        }
    }

    #[test]
    fn unknown_edge_error() {
        assert_eq!(
            connections_along(&sphere(), "nope").unwrap_err(),
            GraphError::UnknownEdge("nope".to_string())
        );
    }

    #[test]
    fn isomorphic_lattice_fixed() {
        let g1 = sphere();
        let g2 = GkmGraph::new(
            2,
            vec!["x".to_string(), "y".to_string()],
            vec![
                (
                    "f1".to_string(),
                    "x".to_string(),
                    "y".to_string(),
                    w(&[0, 1]),
                ),
                (
                    "f2".to_string(),
                    "x".to_string(),
                    "y".to_string(),
                    w(&[1, 0]),
                ),
                (
                    "f3".to_string(),
                    "y".to_string(),
                    "x".to_string(),
                    w(&[1, 1]),
                ),
            ],
        )
        .unwrap();
        let iso = isomorphic(&g1, &g2, false).unwrap().unwrap();
        assert_eq!(iso.psi, IntegerMatrix::identity(2));
        assert_eq!(iso.vertex_map, vec![0, 1]);
    }

    #[test]
    fn isomorphic_needs_lattice_change() {
        // (1,0),(1,1),(2,1) is (a, b, a+b) after the shear b -> a+b.
        let g1 = sphere();
        let g2 = two_vertex_graph([w(&[1, 0]), w(&[1, 1]), w(&[2, 1])]);
        assert!(isomorphic(&g1, &g2, false).unwrap().is_none());
        let iso = isomorphic(&g1, &g2, true).unwrap().unwrap();
        assert!(iso.psi.is_unimodular());
        // The witness transports the whole weight multiset at each vertex.
        for v in 0..2 {
            let mut mapped: Vec<Weight> = g1
                .vertex_weights(v)
                .iter()
                .map(|x| iso.psi.apply(x))
                .collect();
            mapped.sort();
            assert_eq!(mapped, g2.vertex_weights(iso.vertex_map[v]));
        }
    }

    #[test]
    fn isomorphic_absent() {
        let g1 = sphere();
        let g2 = two_vertex_graph([w(&[1, 0]), w(&[0, 1]), w(&[1, 2])]);
        assert!(isomorphic(&g1, &g2, true).unwrap().is_none());
    }

    #[test]
    fn self_isomorphisms_of_sphere() {
        // The sphere pattern (a, b, a+b) has automorphisms: identity and
        // the flip n<->s with psi = -1, plus lattice symmetries permuting
        // the three weights up to sign.
        let g = sphere();
        let all = all_isomorphisms(&g, &g).unwrap();
        assert!(all.len() >= 2);
        assert!(all
            .iter()
            .any(|iso| iso.vertex_map == vec![0, 1] && iso.psi == IntegerMatrix::identity(2)));
        let minus = IntegerMatrix::from_int_rows(&[&[-1, 0], &[0, -1]]);
        assert!(all
            .iter()
            .any(|iso| iso.vertex_map == vec![1, 0] && iso.psi == minus));
    }
}
