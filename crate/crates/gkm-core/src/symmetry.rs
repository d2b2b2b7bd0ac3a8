//! Automorphisms of a graph with axial weights and their action on
//! cohomology.
//!
//! An automorphism is a vertex permutation phi together with a unimodular
//! integer matrix psi such that every edge weight transforms by
//! alpha(phi(e)) = psi alpha(e). On an effective graph psi is determined
//! by phi, so the automorphisms form a finite group under
//! (phi2, psi2) (phi1, psi1) = (phi2 phi1, psi2 psi1).
//!
//! The induced action on a class substitutes the torus variables by psi
//! and pulls vertex values back along phi; on ordinary cohomology this
//! gives one rational matrix per degree. Aut* collects the elements whose
//! matrices are the identity in degrees 2, 4 and 6.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cohomology::{
    class_space_basis, component_rank, ordinary_image, Class, CohomologyError,
};
use crate::graph::{all_isomorphisms, validate, GkmGraph, GraphError, GraphIsomorphism, Violation};
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymmetryError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("the weights do not generate the full lattice at every vertex")]
    NotEffective,
    #[error("the graph violates the axioms: {0:?}")]
    InvalidGraph(Vec<Violation>),
}

#[derive(Debug, Clone)]
pub struct AutomorphismGroup {
    /// All automorphisms, in the canonical deterministic order.
    pub elements: Vec<GraphIsomorphism>,
    /// Indices into `elements` of a small generating set (greedy choice;
    /// empty for the trivial group).
    pub generator_indices: Vec<usize>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = &GraphIsomorphism> {
        self.generator_indices.iter().map(|&i| &self.elements[i])
    }
}

fn iso_key(a: &GraphIsomorphism) -> (Vec<usize>, Vec<BigInt>) {
    let n = a.psi.rows();
    let mut flat = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..a.psi.cols() {
            flat.push(a.psi.get(i, j).clone());
        }
    }
    (a.vertex_map.clone(), flat)
}

/// (a compose b): apply b first. Vertex maps compose as functions and the
/// lattice matrices multiply.
pub fn compose(a: &GraphIsomorphism, b: &GraphIsomorphism) -> GraphIsomorphism {
    GraphIsomorphism {
        vertex_map: b.vertex_map.iter().map(|&v| a.vertex_map[v]).collect(),
        psi: a.psi.mul(&b.psi),
    }
}

fn closure(elements: &[GraphIsomorphism], generators: &[usize]) -> BTreeSet<usize> {
    let index: BTreeMap<(Vec<usize>, Vec<BigInt>), usize> = elements
        .iter()
        .enumerate()
        .map(|(i, a)| (iso_key(a), i))
        .collect();
    let identity = elements
        .iter()
        .position(|a| a.vertex_map.iter().enumerate().all(|(i, &v)| i == v) && a.psi.is_identity())
        .expect("automorphism group contains the identity");
    let mut reached = BTreeSet::from([identity]);
    let mut frontier = vec![identity];
    while let Some(current) = frontier.pop() {
        for &gi in generators {
            let next = compose(&elements[gi], &elements[current]);
            let &ni = index
                .get(&iso_key(&next))
                .expect("closed under composition");
            if reached.insert(ni) {
                frontier.push(ni);
            }
        }
    }
    reached
}

/// All weight-compatible symmetries of an effective graph.
pub fn gkm_automorphisms(g: &GkmGraph) -> Result<AutomorphismGroup, SymmetryError> {
    let report = validate(g, true);
    if !report.is_valid() {
        let only_effectiveness = report
            .violations
            .iter()
            .all(|v| matches!(v, Violation::NotEffective { .. }));
        return Err(if only_effectiveness {
            SymmetryError::NotEffective
        } else {
            SymmetryError::InvalidGraph(report.violations)
        });
    }
    let elements = all_isomorphisms(g, g)?;
    let mut generator_indices = Vec::new();
    let mut reached = closure(&elements, &generator_indices);
    for i in 0..elements.len() {
        if reached.len() == elements.len() {
            break;
        }
        if !reached.contains(&i) {
            generator_indices.push(i);
            reached = closure(&elements, &generator_indices);
        }
    }
    Ok(AutomorphismGroup {
        elements,
        generator_indices,
    })
}

/// Pull a class back along an automorphism: the value at p is the value
/// at phi^(-1)(p) with t_i replaced by the i-th column form of psi, so
/// that the form of a weight w becomes the form of psi w.
pub fn transform_class(g: &GkmGraph, a: &GraphIsomorphism, class: &Class) -> Class {
    let n = g.torus_rank();
    let images: Vec<Polynomial> = (0..n)
        .map(|i| {
            let mut p = Polynomial::zero(n);
            for j in 0..n {
                let c = a.psi.get(j, i);
                if !c.is_zero() {
                    p = &p + &Polynomial::var(n, j).scale(&BigRational::from(c.clone()));
                }
            }
            p
        })
        .collect();
    let mut inverse = vec![0usize; a.vertex_map.len()];
    for (v, &image) in a.vertex_map.iter().enumerate() {
        inverse[image] = v;
    }
    let values = (0..g.num_vertices())
        .map(|p| class.value(inverse[p]).substitute_all(&images))
        .collect();
    Class::new(g, values).expect("transform preserves shape")
}

/// A set of classes representing a basis of ordinary cohomology in one
/// degree: greedily chosen from the class-space basis, independent modulo
/// the boundary piece t_i * (degree - 2 classes).
pub fn ordinary_representatives(
    g: &GkmGraph,
    degree: usize,
) -> Result<Vec<Class>, CohomologyError> {
    let full = class_space_basis(g, degree)?;
    let mut reps: Vec<Class> = Vec::new();
    for candidate in full {
        let mut trial = reps.clone();
        trial.push(candidate.clone());
        match ordinary_image(g, &candidate, &trial) {
            Ok(_) => reps.push(candidate),
            Err(CohomologyError::BasisDependent) => {}
            Err(CohomologyError::BasisNotSpanning) => reps.push(candidate),
            Err(e) => return Err(e),
        }
    }
    Ok(reps)
}

/// Matrix of the induced action on ordinary cohomology in one degree,
/// with respect to `ordinary_representatives`: column j holds the
/// coordinates of the transformed j-th representative.
pub fn induced_action(
    g: &GkmGraph,
    a: &GraphIsomorphism,
    degree: usize,
) -> Result<Vec<Vec<BigRational>>, SymmetryError> {
    let reps = ordinary_representatives(g, degree)?;
    let size = reps.len();
    let mut matrix = vec![vec![BigRational::zero(); size]; size];
    for (j, rep) in reps.iter().enumerate() {
        let transformed = transform_class(g, a, rep);
        let coords = ordinary_image(g, &transformed, &reps)?;
        for (i, c) in coords.into_iter().enumerate() {
            matrix[i][j] = c;
        }
    }
    Ok(matrix)
}

fn is_identity_matrix(m: &[Vec<BigRational>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
    })
}

/// The subgroup acting trivially on ordinary cohomology in degrees 2, 4
/// and 6.
pub fn aut_star(g: &GkmGraph) -> Result<AutomorphismGroup, SymmetryError> {
    let group = gkm_automorphisms(g)?;
    let mut kept = Vec::new();
    'element: for a in group.elements {
        for degree in [2usize, 4, 6] {
            if component_rank(g, degree)? == 0 {
                continue;
            }
            if !is_identity_matrix(&induced_action(g, &a, degree)?) {
                continue 'element;
            }
        }
        kept.push(a);
    }
    let mut generator_indices = Vec::new();
    let mut reached = closure(&kept, &generator_indices);
    for i in 0..kept.len() {
        if reached.len() == kept.len() {
            break;
        }
        if !reached.contains(&i) {
            generator_indices.push(i);
            reached = closure(&kept, &generator_indices);
        }
    }
    Ok(AutomorphismGroup {
        elements: kept,
        generator_indices,
    })
}

/// Disjoint cycle notation over the vertex names, fixed points omitted;
/// the identity prints as "()".
pub fn cycle_notation(vertex_map: &[usize], names: &[String]) -> String {
    let mut seen = vec![false; vertex_map.len()];
    let mut out = String::new();
    for start in 0..vertex_map.len() {
        if seen[start] || vertex_map[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            cycle.push(names[v].as_str());
            v = vertex_map[v];
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{catalog, CatalogId};
    use crate::lattice::{IntegerMatrix, Weight};

    fn w(coords: &[i64]) -> Weight {
        Weight::from_ints(coords)
    }

    fn std_s(k: i64) -> GkmGraph {
        catalog(&CatalogId::S {
            a: w(&[1, 0]),
            b: w(&[0, 1]),
            k,
        })
        .unwrap()
    }

    #[test]
    fn automorphism_orders() {
        let p2 = catalog(&CatalogId::P2 {
            a: w(&[1, 0]),
            b: w(&[0, 1]),
        })
        .unwrap();
        assert_eq!(gkm_automorphisms(&p2).unwrap().order(), 6);

        let q1 = catalog(&CatalogId::Q1 {
            a: w(&[1, 0]),
            b: w(&[0, 1]),
        })
        .unwrap();
        assert_eq!(gkm_automorphisms(&q1).unwrap().order(), 8);

        // With rank-2 parameters the triple (a, b, c) admits exactly the
        // dihedral symmetries: order 8. The full order-24 group needs
        // rank-3 parameters, where no accidental relations bind a, b, c.
        let p1 = catalog(&CatalogId::P1 {
            a: w(&[1, 0]),
            b: w(&[0, 1]),
            c: w(&[1, 1]),
        })
        .unwrap();
        assert_eq!(gkm_automorphisms(&p1).unwrap().order(), 8);

        assert_eq!(gkm_automorphisms(&std_s(0)).unwrap().order(), 8);
        assert_eq!(gkm_automorphisms(&std_s(1)).unwrap().order(), 4);
    }

    #[test]
    fn group_laws_and_unique_psi() {
        let g = std_s(0);
        let group = gkm_automorphisms(&g).unwrap();
        let keys: BTreeSet<_> = group.elements.iter().map(iso_key).collect();
        // Closure under composition.
        for a in &group.elements {
            for b in &group.elements {
                assert!(keys.contains(&iso_key(&compose(a, b))));
            }
        }
        // The doubled edges admit a weight swap over the identity
        // permutation, so here two lattice maps share each vertex map.
        let maps: BTreeSet<_> = group
            .elements
            .iter()
            .map(|a| a.vertex_map.clone())
            .collect();
        assert_eq!(maps.len(), 4);
        assert_eq!(group.order(), 8);
        // Generators generate.
        assert_eq!(
            closure(&group.elements, &group.generator_indices).len(),
            group.order()
        );

        // On a simple graph the vertex permutation alone pins the lattice
        // map.
        for id in [
            CatalogId::P2 {
                a: w(&[1, 0]),
                b: w(&[0, 1]),
            },
            CatalogId::Q1 {
                a: w(&[1, 0]),
                b: w(&[0, 1]),
            },
        ] {
            let g = catalog(&id).unwrap();
            let group = gkm_automorphisms(&g).unwrap();
            let maps: BTreeSet<_> = group
                .elements
                .iter()
                .map(|a| a.vertex_map.clone())
                .collect();
            assert_eq!(maps.len(), group.order());
        }
    }

    #[test]
    fn identity_acts_trivially() {
        let g = std_s(0);
        let group = gkm_automorphisms(&g).unwrap();
        let id = group
            .elements
            .iter()
            .find(|a| a.vertex_map == vec![0, 1, 2, 3] && a.psi.is_identity())
            .unwrap();
        for degree in [0usize, 2, 4, 6] {
            assert!(is_identity_matrix(&induced_action(&g, id, degree).unwrap()));
        }
    }

    #[test]
    fn horizontal_reflection_negates_h2() {
        // Vertices sort as p1, p2, p3, p4; the top-bottom flip swaps
        // p1 <-> p3 and p2 <-> p4 with psi = -identity.
        for k in [0i64, 1] {
            let g = std_s(k);
            let group = gkm_automorphisms(&g).unwrap();
            let minus_one = {
                let mut m = IntegerMatrix::identity(2);
                m.set(0, 0, BigInt::from(-1));
                m.set(1, 1, BigInt::from(-1));
                m
            };
            let flip = group
                .elements
                .iter()
                .find(|a| a.vertex_map == vec![2, 3, 0, 1] && a.psi == minus_one)
                .unwrap_or_else(|| panic!("k = {k}: flip not found"));
            let action = induced_action(&g, flip, 2).unwrap();
            assert_eq!(action, vec![vec![BigRational::from_integer((-1).into())]]);
        }
    }

    #[test]
    fn aut_star_orders() {
        assert_eq!(aut_star(&std_s(0)).unwrap().order(), 4);
        assert_eq!(aut_star(&std_s(1)).unwrap().order(), 2);
    }

    #[test]
    fn induced_action_is_homomorphism() {
        let g = std_s(0);
        let group = gkm_automorphisms(&g).unwrap();
        for a in group.elements.iter().take(4) {
            for b in group.elements.iter().take(4) {
                let ab = compose(a, b);
                let left = induced_action(&g, &ab, 2).unwrap();
                let ma = induced_action(&g, a, 2).unwrap();
                let mb = induced_action(&g, b, 2).unwrap();
                let rows = ma.len();
                let mut product = vec![vec![BigRational::zero(); rows]; rows];
                for i in 0..rows {
                    for j in 0..rows {
                        for (l, mb_row) in mb.iter().enumerate() {
                            product[i][j] += &ma[i][l] * &mb_row[j];
                        }
                    }
                }
                assert_eq!(left, product);
            }
        }
    }

    #[test]
    fn non_effective_graph_rejected() {
        let g = catalog(&CatalogId::S6 {
            a: w(&[1, 1]),
            b: w(&[1, -1]),
        })
        .unwrap();
        assert!(matches!(
            gkm_automorphisms(&g).unwrap_err(),
            SymmetryError::NotEffective
        ));
    }

    #[test]
    fn cycle_notation_examples() {
        let names: Vec<String> = ["p1", "p2", "p3", "p4"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(cycle_notation(&[0, 1, 2, 3], &names), "()");
        assert_eq!(cycle_notation(&[2, 3, 0, 1], &names), "(p1 p3)(p2 p4)");
        assert_eq!(cycle_notation(&[1, 2, 0, 3], &names), "(p1 p2 p3)");
    }

    #[test]
    fn transformed_classes_stay_classes() {
        use crate::cohomology::is_class;
        let g = std_s(1);
        let group = gkm_automorphisms(&g).unwrap();
        for degree in [2usize, 4] {
            for class in class_space_basis(&g, degree).unwrap() {
                for a in &group.elements {
                    assert!(is_class(&g, &transform_class(&g, a, &class)).unwrap());
                }
            }
        }
    }
}
