//! Enumeration of GKM graphs supported by prescribed fixed-point weight data.
//!
//! The input is four multisets of three weights each, one per fixed point of
//! a 6-dimensional action with exactly four fixed points. Six parameter
//! families of such data are built in (cases A through F, rank 1 or rank 2).
//! Given the data, [`enumerate_graphs`] searches every perfect pairing of the
//! 12 weight slots into 6 edges: a slot (p, w) may pair with (q, -w) for
//! q != p, and the pairing must admit a full congruence bijection
//! Λ_p ≡ Λ_q (mod w). Every pairing whose multigraph satisfies the GKM
//! axioms is emitted, deduplicated up to isomorphism.
//!
//! Two integrals separate the families: with c_1 = e_1(Λ_p) and
//! c_2 = e_2(Λ_p) at each fixed point, localization evaluates ∫ c_1 c_2 and
//! ∫ c_1^3 directly from the data. [`distinctness_certificate`] tabulates the
//! pairs and checks they are mutually distinct across the families.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chern::{self, ChernError};
use crate::constructions::renumber;
use crate::graph::{self, validate, GkmGraph, GraphError};
use crate::lattice::{congruent, pairwise_independent, LatticeError, Weight};
use crate::poly::elementary_symmetric;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error("malformed weight data document: {0}")]
    Malformed(String),
    #[error("fixed point {index} carries {found} weights, expected 3")]
    WrongMultisetSize { index: usize, found: usize },
    #[error("fixed point {index} carries a zero weight")]
    ZeroWeight { index: usize },
    #[error("fixed point {index} has a weight of rank {found}, expected {expected}")]
    WeightRankMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("fixed point {index} carries linearly dependent weights")]
    DependentWeights { index: usize },
    #[error("case {case} parameters rejected: {reason}")]
    BadParameters { case: char, reason: String },
}

/// Weight multisets of a four-fixed-point action: one multiset of three
/// nonzero weights per fixed point. At rank >= 2 each multiset must be
/// pairwise linearly independent; rank-1 data cannot satisfy that and is
/// accepted as-is (it supports localization but never a valid graph).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightData {
    torus_rank: usize,
    multisets: [Vec<Weight>; 4],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightDataDoc {
    torus_rank: usize,
    multisets: [Vec<Weight>; 4],
}

impl WeightData {
    pub fn new(torus_rank: usize, multisets: [Vec<Weight>; 4]) -> Result<Self, ClassifyError> {
        for (index, ms) in multisets.iter().enumerate() {
            if ms.len() != 3 {
                return Err(ClassifyError::WrongMultisetSize {
                    index,
                    found: ms.len(),
                });
            }
            for w in ms {
                if w.rank() != torus_rank {
                    return Err(ClassifyError::WeightRankMismatch {
                        index,
                        expected: torus_rank,
                        found: w.rank(),
                    });
                }
                if w.is_zero() {
                    return Err(ClassifyError::ZeroWeight { index });
                }
            }
            if torus_rank >= 2 && !pairwise_independent(ms)? {
                return Err(ClassifyError::DependentWeights { index });
            }
        }
        let mut multisets = multisets;
        for ms in &mut multisets {
            ms.sort();
        }
        Ok(WeightData {
            torus_rank,
            multisets,
        })
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    /// The four multisets, each sorted; the outer order is the input order.
    pub fn multisets(&self) -> &[Vec<Weight>; 4] {
        &self.multisets
    }

    pub fn from_json(input: &str) -> Result<Self, ClassifyError> {
        let doc: WeightDataDoc =
            serde_json::from_str(input).map_err(|e| ClassifyError::Malformed(e.to_string()))?;
        WeightData::new(doc.torus_rank, doc.multisets)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(WeightDataDoc {
            torus_rank: self.torus_rank,
            multisets: self.multisets.clone(),
        })
        .expect("weight data serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("weight data serializes")
    }
}

/// The six built-in families of fixed-point weight data. Cases A, B, D, E, F
/// take weight parameters of any common rank (integers as rank 1); case C is
/// a rank-1 family with a single integer parameter.
#[derive(Debug, Clone)]
pub enum Case {
    A {
        a: Weight,
        b: Weight,
        c: Weight,
    },
    B {
        a: Weight,
        b: Weight,
    },
    C {
        a: BigInt,
    },
    D {
        a: Weight,
        b: Weight,
        c: Weight,
        d: Weight,
    },
    E {
        a: Weight,
        b: Weight,
    },
    F {
        a: Weight,
        b: Weight,
    },
}

impl Case {
    /// Case D specialized to c = k(a+b) - a, d = -b - k(a+b): the data of
    /// the twisted sphere family with twist k.
    pub fn d_twisted(a: Weight, b: Weight, k: i64) -> Case {
        let ks = (&a + &b).scaled(&BigInt::from(k));
        Case::D {
            c: &ks - &a,
            d: &(-&b) - &ks,
            a,
            b,
        }
    }

    pub fn label(&self) -> char {
        match self {
            Case::A { .. } => 'A',
            Case::B { .. } => 'B',
            Case::C { .. } => 'C',
            Case::D { .. } => 'D',
            Case::E { .. } => 'E',
            Case::F { .. } => 'F',
        }
    }
}

/// a*u + b*v.
fn comb(a: i64, u: &Weight, b: i64, v: &Weight) -> Weight {
    &u.scaled(&BigInt::from(a)) + &v.scaled(&BigInt::from(b))
}

fn common_rank(case: char, weights: &[&Weight]) -> Result<usize, ClassifyError> {
    let rank = weights[0].rank();
    if rank == 0 {
        return Err(ClassifyError::BadParameters {
            case,
            reason: "weights must have rank at least 1".into(),
        });
    }
    for w in weights {
        if w.rank() != rank {
            return Err(ClassifyError::BadParameters {
                case,
                reason: format!("mixed weight ranks {} and {}", rank, w.rank()),
            });
        }
    }
    Ok(rank)
}

/// Rank-1 parameters must be positive integers; returns them when so.
fn positive_ints(case: char, weights: &[&Weight]) -> Result<Vec<BigInt>, ClassifyError> {
    let mut out = Vec::with_capacity(weights.len());
    for w in weights {
        let v = w.coord(0);
        if !v.is_positive() {
            return Err(ClassifyError::BadParameters {
                case,
                reason: format!("rank-1 parameters must be positive, got {v}"),
            });
        }
        out.push(v.clone());
    }
    Ok(out)
}

fn require_coprime(case: char, values: &[BigInt]) -> Result<(), ClassifyError> {
    let mut g = BigInt::zero();
    for v in values {
        g = num_integer::Integer::gcd(&g, v);
    }
    if !g.is_one() {
        let list = values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        return Err(ClassifyError::BadParameters {
            case,
            reason: format!("rank-1 parameters {list} must be coprime"),
        });
    }
    Ok(())
}

/// The four weight multisets of the given case. Rank-1 parameters are
/// checked against the integer constraints of the corresponding family
/// (positivity, coprimality, distinctness for case A); higher-rank
/// parameters only need to produce pairwise independent multisets.
pub fn case_weights(case: &Case) -> Result<WeightData, ClassifyError> {
    let (rank, multisets) = match case {
        Case::A { a, b, c } => {
            let rank = common_rank('A', &[a, b, c])?;
            if rank == 1 {
                let v = positive_ints('A', &[a, b, c])?;
                if v[0] == v[1] || v[0] == v[2] || v[1] == v[2] {
                    return Err(ClassifyError::BadParameters {
                        case: 'A',
                        reason: "rank-1 parameters must be mutually distinct".into(),
                    });
                }
                require_coprime('A', &v)?;
            }
            (
                rank,
                [
                    vec![a.clone(), b.clone(), c.clone()],
                    vec![-a, b - a, c - a],
                    vec![-b, a - b, c - b],
                    vec![-c, a - c, b - c],
                ],
            )
        }
        Case::B { a, b } => {
            let rank = common_rank('B', &[a, b])?;
            if rank == 1 {
                require_coprime('B', &positive_ints('B', &[a, b])?)?;
            }
            (
                rank,
                [
                    vec![a.clone(), a + b, comb(1, a, 2, b)],
                    vec![-a, b.clone(), comb(1, a, 2, b)],
                    vec![comb(-1, a, -2, b), -b, a.clone()],
                    vec![comb(-1, a, -2, b), -(&(a + b)), -a],
                ],
            )
        }
        Case::C { a } => {
            if !a.is_positive() {
                return Err(ClassifyError::BadParameters {
                    case: 'C',
                    reason: format!("parameter must be a positive integer, got {a}"),
                });
            }
            let w = |v: BigInt| Weight::new(vec![v]);
            (
                1,
                [
                    vec![w(1.into()), w(2.into()), w(3.into())],
                    vec![w((-1).into()), w(1.into()), w(a.clone())],
                    vec![w((-1).into()), w(-a.clone()), w(1.into())],
                    vec![w((-1).into()), w((-2).into()), w((-3).into())],
                ],
            )
        }
        Case::D { a, b, c, d } => {
            let rank = common_rank('D', &[a, b, c, d])?;
            if rank == 1 {
                let v = positive_ints('D', &[a, b, c, d])?;
                require_coprime('D', &v[..2])?;
                require_coprime('D', &v[2..])?;
            }
            (
                rank,
                [
                    vec![-(&(a + b)), a.clone(), b.clone()],
                    vec![-(&(c + d)), c.clone(), d.clone()],
                    vec![-a, -b, a + b],
                    vec![-c, -d, c + d],
                ],
            )
        }
        Case::E { a, b } => {
            let rank = common_rank('E', &[a, b])?;
            if rank == 1 {
                require_coprime('E', &positive_ints('E', &[a, b])?)?;
            }
            (
                rank,
                [
                    vec![comb(-3, a, -1, b), a.clone(), b.clone()],
                    vec![comb(-2, a, -1, b), comb(3, a, 1, b), comb(3, a, 2, b)],
                    vec![-a, -(&(a + b)), comb(2, a, 1, b)],
                    vec![-b, comb(-3, a, -2, b), a + b],
                ],
            )
        }
        Case::F { a, b } => {
            let rank = common_rank('F', &[a, b])?;
            if rank == 1 {
                require_coprime('F', &positive_ints('F', &[a, b])?)?;
            }
            (
                rank,
                [
                    vec![-(&(a + b)), comb(2, a, 1, b), b.clone()],
                    vec![comb(-2, a, -1, b), a.clone(), b.clone()],
                    vec![-b, comb(-2, a, -1, b), a + b],
                    vec![-a, -b, comb(2, a, 1, b)],
                ],
            )
        }
    };
    WeightData::new(rank, multisets)
}

/// Does some bijection Λ_p -> Λ_q reduce to the identity mod w while carrying
/// one w-slot to a (-w)-slot? Used to prune pairings before the full
/// validation pass.
fn congruence_pairable(lp: &[Weight], lq: &[Weight], w: &Weight) -> bool {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let minus_w = -w;
    'perms: for perm in PERMS {
        for i in 0..3 {
            match congruent(&lq[perm[i]], &lp[i], w) {
                Ok(Some(_)) => {}
                _ => continue 'perms,
            }
        }
        if (0..3).any(|i| lp[i] == *w && lq[perm[i]] == minus_w) {
            return true;
        }
    }
    false
}

/// Backtracking over perfect pairings of the 12 weight slots. Slot 3p+i is
/// the i-th weight of fixed point p; a pair (s, s') is an edge between the
/// two fixed points. Pairings are explored in sorted slot order and each
/// edge multiset is produced exactly once.
fn extend_pairings(wd: &WeightData, partner: &mut [usize; 12], out: &mut Vec<Vec<(usize, usize)>>) {
    let Some(s) = partner.iter().position(|&x| x == usize::MAX) else {
        let pairs = (0..12)
            .filter(|&s| partner[s] > s)
            .map(|s| (s, partner[s]))
            .collect();
        out.push(pairs);
        return;
    };
    let p = s / 3;
    let w = &wd.multisets()[p][s % 3];
    let minus_w = -w;
    for s2 in s + 1..12 {
        if partner[s2] != usize::MAX {
            continue;
        }
        let q = s2 / 3;
        if q == p || wd.multisets()[q][s2 % 3] != minus_w {
            continue;
        }
        // Equal free slots at the same point give identical multigraphs;
        // keep only the first.
        if (q * 3..s2).any(|s3| partner[s3] == usize::MAX && wd.multisets()[q][s3 % 3] == minus_w) {
            continue;
        }
        if !congruence_pairable(&wd.multisets()[p], &wd.multisets()[q], w) {
            continue;
        }
        partner[s] = s2;
        partner[s2] = s;
        extend_pairings(wd, partner, out);
        partner[s] = usize::MAX;
        partner[s2] = usize::MAX;
    }
}

/// Every GKM graph whose fixed points p1..p4 carry exactly the given weight
/// multisets, up to isomorphism: lattice-fixed by default, up to a common
/// unimodular change of basis when `allow_lattice_change` is set. The output
/// order is the deterministic search order; an empty result means the data
/// supports no graph.
pub fn enumerate_graphs(
    wd: &WeightData,
    allow_lattice_change: bool,
) -> Result<Vec<GkmGraph>, ClassifyError> {
    let mut pairings = Vec::new();
    extend_pairings(wd, &mut [usize::MAX; 12], &mut pairings);

    let mut classes: Vec<GkmGraph> = Vec::new();
    let mut seen = BTreeSet::new();
    for pairing in pairings {
        let edges = pairing
            .iter()
            .map(|&(s, s2)| {
                (
                    format!("p{}", s / 3 + 1),
                    format!("p{}", s2 / 3 + 1),
                    wd.multisets()[s / 3][s % 3].clone(),
                )
            })
            .collect();
        let vertices = (1..=4).map(|i| format!("p{i}")).collect();
        let g = renumber(wd.torus_rank(), vertices, edges)?;
        if !validate(&g, false).is_valid() {
            continue;
        }
        // Distinct pairings can normalize to one document; skip those before
        // the quadratic isomorphism pass.
        if !seen.insert(g.to_json()) {
            continue;
        }
        let mut known = false;
        for h in &classes {
            if graph::isomorphic(h, &g, allow_lattice_change)?.is_some() {
                known = true;
                break;
            }
        }
        if !known {
            classes.push(g);
        }
    }
    Ok(classes)
}

/// (∫ c_1 c_2, ∫ c_1^3) evaluated by localization directly on the weight
/// data, with c_i the i-th elementary symmetric polynomial of each multiset.
pub fn localization_pair(wd: &WeightData) -> Result<(BigRational, BigRational), ClassifyError> {
    let c1c2: Vec<_> = wd
        .multisets()
        .iter()
        .map(|ms| {
            let c1 = elementary_symmetric(ms, 1);
            let c2 = elementary_symmetric(ms, 2);
            (&c1 * &c2, ms.clone())
        })
        .collect();
    let c1cubed: Vec<_> = wd
        .multisets()
        .iter()
        .map(|ms| (elementary_symmetric(ms, 1).pow(3), ms.clone()))
        .collect();
    Ok((chern::localize(&c1c2)?, chern::localize(&c1cubed)?))
}

/// One row of the certificate: a case at representative parameters, its
/// localization pair, and the closed-form pair it must equal.
#[derive(Debug, Clone)]
pub struct CertificateEntry {
    pub label: String,
    pub c1_c2: BigRational,
    pub c1_cubed: BigRational,
    pub expected_c1_c2: BigRational,
    pub expected_c1_cubed: BigRational,
}

impl CertificateEntry {
    pub fn matches_expected(&self) -> bool {
        self.c1_c2 == self.expected_c1_c2 && self.c1_cubed == self.expected_c1_cubed
    }
}

/// Certificate that the integral pair (∫ c_1 c_2, ∫ c_1^3) separates the
/// weight families: cases A, B, D, E, F plus case C at a = 1, 4, 5. Case C
/// at a = 2 reproduces case A's pair; that expected coincidence is recorded
/// separately rather than counted against distinctness.
#[derive(Debug, Clone)]
pub struct DistinctnessCertificate {
    pub entries: Vec<CertificateEntry>,
    pub table_matches: bool,
    pub pairwise_distinct: bool,
    pub c2_coincides_with_a: bool,
}

impl DistinctnessCertificate {
    pub fn ok(&self) -> bool {
        self.table_matches && self.pairwise_distinct && self.c2_coincides_with_a
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "entries": self.entries.iter().map(|e| {
                serde_json::json!({
                    "label": e.label,
                    "c1_c2": e.c1_c2.to_string(),
                    "c1_cubed": e.c1_cubed.to_string(),
                    "matches_expected": e.matches_expected(),
                })
            }).collect::<Vec<_>>(),
            "table_matches": self.table_matches,
            "pairwise_distinct": self.pairwise_distinct,
            "c2_coincides_with_a": self.c2_coincides_with_a,
            "ok": self.ok(),
        })
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn case_c(a: i64) -> Case {
    Case::C { a: a.into() }
}

/// Build the distinctness certificate from rank-1 representatives of each
/// family. Parameters are immaterial to the pair except in case C, where
/// ∫ c_1^3 = 72 - 2a².
pub fn distinctness_certificate() -> Result<DistinctnessCertificate, ClassifyError> {
    let w = |v: i64| Weight::from_ints(&[v]);
    let reps: Vec<(String, Case, (BigRational, BigRational))> = vec![
        (
            "A".into(),
            Case::A {
                a: w(1),
                b: w(2),
                c: w(3),
            },
            (int(24), int(64)),
        ),
        ("B".into(), Case::B { a: w(1), b: w(1) }, (int(24), int(54))),
        (
            "D".into(),
            Case::D {
                a: w(1),
                b: w(1),
                c: w(1),
                d: w(1),
            },
            (int(0), int(0)),
        ),
        ("E".into(), Case::E { a: w(1), b: w(1) }, (int(0), int(-8))),
        ("F".into(), Case::F { a: w(1), b: w(1) }, (int(0), int(-2))),
        ("C(a=1)".into(), case_c(1), (int(24), int(70))),
        ("C(a=4)".into(), case_c(4), (int(24), int(40))),
        ("C(a=5)".into(), case_c(5), (int(24), int(22))),
    ];

    let mut entries = Vec::with_capacity(reps.len());
    for (label, case, (e12, e111)) in reps {
        let (c1_c2, c1_cubed) = localization_pair(&case_weights(&case)?)?;
        entries.push(CertificateEntry {
            label,
            c1_c2,
            c1_cubed,
            expected_c1_c2: e12,
            expected_c1_cubed: e111,
        });
    }
    let table_matches = entries.iter().all(CertificateEntry::matches_expected);
    let mut pairs: Vec<_> = entries
        .iter()
        .map(|e| (e.c1_c2.clone(), e.c1_cubed.clone()))
        .collect();
    pairs.sort();
    let pairwise_distinct = pairs.windows(2).all(|p| p[0] != p[1]);

    let a_pair = (entries[0].c1_c2.clone(), entries[0].c1_cubed.clone());
    let c2_coincides_with_a = localization_pair(&case_weights(&case_c(2))?)? == a_pair;

    Ok(DistinctnessCertificate {
        entries,
        table_matches,
        pairwise_distinct,
        c2_coincides_with_a,
    })
}
