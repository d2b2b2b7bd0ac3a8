//! Graph catalog and surgeries.
//!
//! The catalog holds the reference six-vertex families P1, P2, P3, Q1, Q2,
//! S(a, b, k) on four vertices, and the two-vertex pattern S6 with weights
//! (a, b, a+b). Surgeries are the combinatorial blow-ups: a vertex is
//! replaced by a copy per dart, an edge by a copy per transverse dart pair,
//! and two S6 patterns can be glued along weight-matched edges into an
//! S(a, b, k) shape.
//!
//! All constructors produce graphs in canonical order with edge ids
//! regenerated as e1, e2, .. along that order.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::graph::{connections_along, validate, GkmGraph, GraphError, Violation};
use crate::lattice::{pairwise_independent, Weight};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("parameters produce an invalid graph: {0:?}")]
    InvalidParameters(Vec<Violation>),
    #[error("blow-up of `{vertex}` fails: weight differences are not pairwise independent")]
    DependentDifferences { vertex: String },
    #[error("vertex `{vertex}` carries a repeated weight")]
    RepeatedWeight { vertex: String },
    #[error("edge `{edge}` is a self-loop")]
    SelfLoopEdge { edge: String },
    #[error("edge `{edge}` admits {count} connections; pass an explicit connection index")]
    AmbiguousConnection { edge: String, count: usize },
    #[error("connection index {index} out of range ({count} available)")]
    ConnectionIndexOutOfRange { index: usize, count: usize },
    #[error("no connection exists along `{edge}`")]
    NoConnection { edge: String },
    #[error("gluing expects two-vertex, three-edge graphs")]
    WrongShape,
    #[error("no pair of edges carries matching weight sums")]
    SumMismatch,
    #[error("weight-matched edges fail the congruence precondition")]
    CongruenceMismatch,
}

/// The reference families. Weights may have any common rank; validation
/// decides whether the chosen parameters give a genuine example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogId {
    P1 { a: Weight, b: Weight, c: Weight },
    P2 { a: Weight, b: Weight },
    P3 { a: Weight, b: Weight },
    Q1 { a: Weight, b: Weight },
    Q2 { a: Weight, b: Weight },
    S { a: Weight, b: Weight, k: i64 },
    S6 { a: Weight, b: Weight },
}

fn assemble(
    torus_rank: usize,
    vertices: &[&str],
    edges: Vec<(&str, &str, Weight)>,
) -> Result<GkmGraph, GraphError> {
    GkmGraph::new(
        torus_rank,
        vertices.iter().map(|s| s.to_string()).collect(),
        edges
            .into_iter()
            .enumerate()
            .map(|(i, (f, t, w))| (format!("e{}", i + 1), f.to_string(), t.to_string(), w))
            .collect(),
    )
}

/// Build a catalog graph and check the axioms; parameter choices that
/// break them are rejected.
pub fn catalog(id: &CatalogId) -> Result<GkmGraph, ConstructionError> {
    let g = match id {
        CatalogId::P1 { a, b, c } => assemble(
            a.rank(),
            &["p1", "p2", "p3", "p4"],
            vec![
                ("p1", "p2", a.clone()),
                ("p1", "p3", b.clone()),
                ("p1", "p4", c.clone()),
                ("p2", "p3", b - a),
                ("p3", "p4", c - b),
                ("p4", "p2", a - c),
            ],
        )?,
        CatalogId::P2 { a, b } => assemble(
            a.rank(),
            &["p1", "p2", "p3", "p4"],
            vec![
                ("p2", "p1", a.clone()),
                ("p3", "p1", b.clone()),
                ("p4", "p1", -&(a + b)),
                ("p2", "p3", b - a),
                ("p3", "p4", -&(a + &b.scaled(&BigInt::from(2)))),
                ("p4", "p2", &a.scaled(&BigInt::from(2)) + b),
            ],
        )?,
        CatalogId::P3 { a, b } => assemble(
            a.rank(),
            &["p1", "p2", "p3", "p4"],
            vec![
                ("p1", "p2", a.clone()),
                ("p1", "p3", b.clone()),
                ("p1", "p4", -&(a + b)),
                ("p2", "p3", a - b),
                ("p2", "p4", b.clone()),
                ("p3", "p4", a.clone()),
            ],
        )?,
        CatalogId::Q1 { a, b } => assemble(
            a.rank(),
            &["p1", "p2", "p3", "p4"],
            vec![
                ("p1", "p2", a - b),
                ("p1", "p3", a + b),
                ("p1", "p4", a.clone()),
                ("p2", "p3", b.clone()),
                ("p2", "p4", a + b),
                ("p3", "p4", a - b),
            ],
        )?,
        CatalogId::Q2 { a, b } => assemble(
            a.rank(),
            &["p1", "p2", "p3", "p4"],
            vec![
                ("p1", "p2", a - b),
                ("p1", "p3", a + b),
                ("p4", "p1", a.clone()),
                ("p3", "p2", b.clone()),
                ("p2", "p4", a + b),
                ("p3", "p4", a - b),
            ],
        )?,
        CatalogId::S { a, b, k } => {
            let w = a + b;
            let kk = BigInt::from(*k);
            let c = a - &w.scaled(&kk);
            let d = b + &w.scaled(&kk);
            assemble(
                a.rank(),
                &["p1", "p2", "p3", "p4"],
                vec![
                    ("p2", "p1", w.clone()),
                    ("p1", "p3", a.clone()),
                    ("p1", "p3", b.clone()),
                    ("p4", "p2", c),
                    ("p4", "p2", d),
                    ("p3", "p4", w),
                ],
            )?
        }
        CatalogId::S6 { a, b } => assemble(
            a.rank(),
            &["n", "s"],
            vec![
                ("n", "s", a.clone()),
                ("n", "s", b.clone()),
                ("s", "n", a + b),
            ],
        )?,
    };
    let report = validate(&g, false);
    if !report.is_valid() {
        return Err(ConstructionError::InvalidParameters(report.violations));
    }
    Ok(g)
}

/// Rebuild with edge ids e1, e2, .. assigned along the canonical order.
pub(crate) fn renumber(
    torus_rank: usize,
    vertices: Vec<String>,
    edges: Vec<(String, String, Weight)>,
) -> Result<GkmGraph, GraphError> {
    let tmp = GkmGraph::new(
        torus_rank,
        vertices,
        edges
            .into_iter()
            .enumerate()
            .map(|(i, (f, t, w))| (format!("tmp{i}"), f, t, w))
            .collect(),
    )?;
    let finals = tmp
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            (
                format!("e{}", i + 1),
                tmp.vertex_name(e.from).to_string(),
                tmp.vertex_name(e.to).to_string(),
                e.weight.clone(),
            )
        })
        .collect();
    GkmGraph::new(torus_rank, tmp.vertex_names().to_vec(), finals)
}

/// Replace vertex v by one copy per dart. Copy i keeps dart i's edge and
/// receives the weight differences to the remaining darts:
/// L(v.i) = {u_i} + {u_j - u_i : j != i}. Copies are numbered along the
/// sorted dart order.
pub fn blowup_vertex(g: &GkmGraph, vertex: &str) -> Result<GkmGraph, ConstructionError> {
    let v = g
        .vertex_index(vertex)
        .ok_or_else(|| GraphError::UnknownVertexName(vertex.to_string()))?;
    let darts = g.darts_at(v);
    let m = darts.len();
    for i in 0..m {
        let mut lam = vec![darts[i].weight.clone()];
        for (j, d) in darts.iter().enumerate() {
            if j != i {
                lam.push(&d.weight - &darts[i].weight);
            }
        }
        if !pairwise_independent(&lam).unwrap_or(false) {
            return Err(ConstructionError::DependentDifferences {
                vertex: vertex.to_string(),
            });
        }
    }
    let copy = |i: usize| format!("{vertex}.{}", i + 1);

    let mut vertices: Vec<String> = g
        .vertex_names()
        .iter()
        .filter(|n| n.as_str() != vertex)
        .cloned()
        .collect();
    vertices.extend((0..m).map(copy));

    let mut edges: Vec<(String, String, Weight)> = Vec::new();
    for e in g.edges() {
        if e.from != v && e.to != v {
            edges.push((
                g.vertex_name(e.from).to_string(),
                g.vertex_name(e.to).to_string(),
                e.weight.clone(),
            ));
        }
    }
    for (i, d) in darts.iter().enumerate() {
        // self-loop darts are impossible here: the dependence check above
        // rejects any vertex carrying both w and -w
        edges.push((copy(i), g.vertex_name(d.to).to_string(), d.weight.clone()));
    }
    for i in 0..m {
        for j in (i + 1)..m {
            edges.push((copy(i), copy(j), &darts[j].weight - &darts[i].weight));
        }
    }
    Ok(renumber(g.torus_rank(), vertices, edges)?)
}

fn check_distinct_weights(g: &GkmGraph, v: usize) -> Result<(), ConstructionError> {
    let ws = g.vertex_weights(v);
    for pair in ws.windows(2) {
        if pair[0] == pair[1] {
            return Err(ConstructionError::RepeatedWeight {
                vertex: g.vertex_name(v).to_string(),
            });
        }
    }
    Ok(())
}

/// Replace edge e = (p, q) by a copy pair per transverse dart: copy p.i
/// keeps dart u_i, its partner q.i keeps v_i, the image of u_i under the
/// chosen connection along e. When several connections exist the caller
/// must pick one by index into the deterministic connection list.
pub fn blowup_edge(
    g: &GkmGraph,
    edge_id: &str,
    connection: Option<usize>,
) -> Result<GkmGraph, ConstructionError> {
    let ei = g
        .edge_index(edge_id)
        .ok_or_else(|| GraphError::UnknownEdge(edge_id.to_string()))?;
    let e = g.edges()[ei].clone();
    if e.from == e.to {
        return Err(ConstructionError::SelfLoopEdge { edge: e.id });
    }
    for f in g.edges() {
        if f.from == f.to && (f.from == e.from || f.from == e.to) {
            return Err(ConstructionError::SelfLoopEdge { edge: f.id.clone() });
        }
    }
    let (p, q, w) = (e.from, e.to, e.weight.clone());
    check_distinct_weights(g, p)?;
    check_distinct_weights(g, q)?;

    let conns = connections_along(g, edge_id)?;
    let conn = match (conns.len(), connection) {
        (0, _) => {
            return Err(ConstructionError::NoConnection {
                edge: edge_id.to_string(),
            })
        }
        (count, Some(index)) => {
            if index >= count {
                return Err(ConstructionError::ConnectionIndexOutOfRange { index, count });
            }
            &conns[index]
        }
        (1, None) => &conns[0],
        (count, None) => {
            return Err(ConstructionError::AmbiguousConnection {
                edge: edge_id.to_string(),
                count,
            })
        }
    };
    let sigma: BTreeMap<&Weight, &Weight> = conn
        .iter()
        .filter(|(s, _)| *s != w)
        .map(|(s, t)| (s, t))
        .collect();

    // u_i: non-edge dart weights at p, sorted; v_i = sigma(u_i).
    let u: Vec<Weight> = g
        .darts_at(p)
        .into_iter()
        .filter(|d| d.edge != ei)
        .map(|d| d.weight)
        .collect();
    let v: Vec<Weight> = u
        .iter()
        .map(|ui| (*sigma.get(ui).expect("connection covers darts")).clone())
        .collect();
    let m = u.len();

    let p_name = g.vertex_name(p).to_string();
    let q_name = g.vertex_name(q).to_string();
    let p_copy = |i: usize| format!("{p_name}.{}", i + 1);
    let q_copy = |i: usize| format!("{q_name}.{}", i + 1);

    let mut vertices: Vec<String> = g
        .vertex_names()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != p && i != q)
        .map(|(_, n)| n.clone())
        .collect();
    vertices.extend((0..m).map(p_copy));
    vertices.extend((0..m).map(q_copy));

    let resolve = |x: usize, dart_weight: &Weight| -> String {
        if x == p {
            let i = u
                .iter()
                .position(|ui| ui == dart_weight)
                .expect("dart at p");
            p_copy(i)
        } else if x == q {
            let i = v
                .iter()
                .position(|vi| vi == dart_weight)
                .expect("dart at q");
            q_copy(i)
        } else {
            g.vertex_name(x).to_string()
        }
    };

    let mut edges: Vec<(String, String, Weight)> = Vec::new();
    for i in 0..m {
        edges.push((p_copy(i), q_copy(i), w.clone()));
    }
    for i in 0..m {
        for j in (i + 1)..m {
            edges.push((p_copy(i), p_copy(j), &u[j] - &u[i]));
            edges.push((q_copy(i), q_copy(j), &v[j] - &v[i]));
        }
    }
    for (fi, f) in g.edges().iter().enumerate() {
        if fi == ei {
            continue;
        }
        let from = resolve(f.from, &f.weight);
        let to = resolve(f.to, &-&f.weight);
        edges.push((from, to, f.weight.clone()));
    }
    Ok(renumber(g.torus_rank(), vertices, edges)?)
}

/// Glue two two-vertex, three-edge patterns along a pair of edges with
/// equal weight (up to orientation), cutting both and cross-connecting.
/// The first weight-matched, congruence-compatible pair in canonical edge
/// order is used. Vertex names get the suffix ".1" (first input) or ".2".
pub fn glue_s6(g1: &GkmGraph, g2: &GkmGraph) -> Result<GkmGraph, ConstructionError> {
    if g1.torus_rank() != g2.torus_rank() {
        return Err(GraphError::RankMismatch(g1.torus_rank(), g2.torus_rank()).into());
    }
    for g in [g1, g2] {
        if g.num_vertices() != 2 || g.edges().len() != 3 || g.edges().iter().any(|e| e.from == e.to)
        {
            return Err(ConstructionError::WrongShape);
        }
        let report = validate(g, false);
        if !report.is_valid() {
            return Err(ConstructionError::InvalidParameters(report.violations));
        }
    }

    // Remove one occurrence of `w` from the multiset.
    fn minus(mut ws: Vec<Weight>, w: &Weight) -> Vec<Weight> {
        if let Some(i) = ws.iter().position(|x| x == w) {
            ws.remove(i);
        }
        ws
    }
    fn pairs_mod(xs: &[Weight], ys: &[Weight], w: &Weight) -> bool {
        use crate::lattice::congruent;
        let fits = |x: &Weight, y: &Weight| congruent(y, x, w).map_or(false, |k| k.is_some());
        (fits(&xs[0], &ys[0]) && fits(&xs[1], &ys[1]))
            || (fits(&xs[0], &ys[1]) && fits(&xs[1], &ys[0]))
    }

    let mut saw_weight_match = false;
    for f1 in g1.edges() {
        let w = f1.weight.clone();
        let (s1, n1) = (f1.from, f1.to);
        for f2 in g2.edges() {
            for flip in [false, true] {
                let matched = if flip {
                    -&f2.weight == w
                } else {
                    f2.weight == w
                };
                if !matched {
                    continue;
                }
                saw_weight_match = true;
                let (s2, n2) = if flip {
                    (f2.to, f2.from)
                } else {
                    (f2.from, f2.to)
                };
                // New edge s2 -> n1 with weight w must admit a connection:
                // the leftover darts must pair off congruently mod w. The
                // mirror edge s1 -> n2 then does too.
                let xs = minus(g2.vertex_weights(s2), &w);
                let ys = minus(g1.vertex_weights(n1), &-&w);
                if xs.len() != 2 || ys.len() != 2 || !pairs_mod(&xs, &ys, &w) {
                    continue;
                }

                let rename1 = |v: usize| format!("{}.1", g1.vertex_name(v));
                let rename2 = |v: usize| format!("{}.2", g2.vertex_name(v));
                let mut vertices: Vec<String> =
                    (0..2).map(rename1).chain((0..2).map(rename2)).collect();
                vertices.sort();
                let mut edges: Vec<(String, String, Weight)> = Vec::new();
                for f in g1.edges() {
                    if f.id != f1.id {
                        edges.push((rename1(f.from), rename1(f.to), f.weight.clone()));
                    }
                }
                for f in g2.edges() {
                    if f.id != f2.id {
                        edges.push((rename2(f.from), rename2(f.to), f.weight.clone()));
                    }
                }
                edges.push((rename2(s2), rename1(n1), w.clone()));
                edges.push((rename1(s1), rename2(n2), w.clone()));
                return Ok(renumber(g1.torus_rank(), vertices, edges)?);
            }
        }
    }
    Err(if saw_weight_match {
        ConstructionError::CongruenceMismatch
    } else {
        ConstructionError::SumMismatch
    })
}
