//! Equivariant Chern classes and exact integration by localization.
//!
//! At a vertex p with weights w_1, .., w_m the i-th equivariant Chern
//! class restricts to the elementary symmetric polynomial e_i of the
//! linear forms ell(w_j). Integration localizes to the fixed points:
//!
//! ```text
//! integral(f) = sum over p of f_p / E_p,   E_p = prod_j ell(w_j)
//! ```
//!
//! computed exactly as one fraction: N = sum of f_p times the product of
//! all other Euler classes, then N divided by every dart form in turn.
//! For a genuine class the quotient is a constant; anything else raises
//! an error instead of a silently wrong number. The same routine serves
//! torus ranks one and two: nothing in it assumes a graph, only a list
//! of fixed points with values and weights.

use num_rational::BigRational;
use num_traits::Zero;

use crate::cohomology::{Class, CohomologyError};
use crate::graph::{GkmGraph, GraphError};
use crate::lattice::Weight;
use crate::poly::{divide_by_linear, elementary_symmetric, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChernError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("localization did not produce a constant: {0}")]
    NonConstant(String),
    #[error("integral is not an integer: {0}")]
    NotInteger(BigRational),
    #[error("localization needs at least one fixed point")]
    Empty,
}

/// The i-th equivariant Chern class: e_i of the weights at each vertex.
pub fn equivariant_chern(g: &GkmGraph, i: usize) -> Result<Class, ChernError> {
    let values = (0..g.num_vertices())
        .map(|v| elementary_symmetric(&g.vertex_weights(v), i))
        .collect();
    Ok(Class::new(g, values)?)
}

/// Equivariant first Pontryagin class, c1^2 - 2 c2.
pub fn equivariant_pontryagin(g: &GkmGraph) -> Result<Class, ChernError> {
    let c1 = equivariant_chern(g, 1)?;
    let c2 = equivariant_chern(g, 2)?;
    let two = BigRational::from_integer(2.into());
    Ok(&(&c1 * &c1) - &c2.scale(&two))
}

/// Localization sum over abstract fixed-point data: pairs of a restricted
/// value and the weight multiset at that point.
pub fn localize(points: &[(Polynomial, Vec<Weight>)]) -> Result<BigRational, ChernError> {
    if points.is_empty() {
        return Err(ChernError::Empty);
    }
    for (_, weights) in points {
        for w in weights {
            if w.is_zero() {
                return Err(GraphError::ZeroWeightEdge("fixed-point weight".to_string()).into());
            }
        }
    }
    let nvars = points[0].0.nvars();
    let eulers: Vec<Polynomial> = points
        .iter()
        .map(|(_, weights)| {
            weights.iter().fold(Polynomial::one(nvars), |acc, w| {
                &acc * &crate::poly::linear_form(w)
            })
        })
        .collect();

    // N = sum of f_p times the product of all E_q with q != p, via prefix
    // and suffix products.
    let m = points.len();
    let mut prefix = vec![Polynomial::one(nvars); m + 1];
    for i in 0..m {
        prefix[i + 1] = &prefix[i] * &eulers[i];
    }
    let mut suffix = vec![Polynomial::one(nvars); m + 1];
    for i in (0..m).rev() {
        suffix[i] = &suffix[i + 1] * &eulers[i];
    }
    let mut numerator = Polynomial::zero(nvars);
    for (i, (value, _)) in points.iter().enumerate() {
        numerator = &numerator + &(&(&prefix[i] * &suffix[i + 1]) * value);
    }
    if numerator.is_zero() {
        return Ok(BigRational::zero());
    }
    for (_, weights) in points {
        for w in weights {
            numerator = divide_by_linear(&numerator, w).ok_or_else(|| {
                ChernError::NonConstant(format!("numerator is not divisible by the form of {w}"))
            })?;
        }
    }
    numerator
        .as_constant()
        .ok_or_else(|| ChernError::NonConstant(format!("quotient {numerator} has positive degree")))
}

/// Integrate a class over the graph. With `expect_integer` the exact
/// rational result must be an integer.
pub fn integrate(
    g: &GkmGraph,
    class: &Class,
    expect_integer: bool,
) -> Result<BigRational, ChernError> {
    if class.values().len() != g.num_vertices() || class.nvars() != g.torus_rank() {
        return Err(CohomologyError::ShapeMismatch(
            "class does not match the graph's vertex count or torus rank".to_string(),
        )
        .into());
    }
    let points: Vec<(Polynomial, Vec<Weight>)> = (0..g.num_vertices())
        .map(|v| (class.value(v).clone(), g.vertex_weights(v)))
        .collect();
    let value = localize(&points)?;
    if expect_integer && !value.is_integer() {
        return Err(ChernError::NotInteger(value));
    }
    Ok(value)
}

/// The classifying Chern numbers of a three-valent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernNumbers {
    pub c1_cubed: BigRational,
    pub c1_c2: BigRational,
    pub c3: BigRational,
}

pub fn chern_numbers(g: &GkmGraph) -> Result<ChernNumbers, ChernError> {
    let c1 = equivariant_chern(g, 1)?;
    let c2 = equivariant_chern(g, 2)?;
    let c3 = equivariant_chern(g, 3)?;
    let c1_cubed = integrate(g, &(&(&c1 * &c1) * &c1), true)?;
    let c1_c2 = integrate(g, &(&c1 * &c2), true)?;
    let c3 = integrate(g, &c3, true)?;
    Ok(ChernNumbers {
        c1_cubed,
        c1_c2,
        c3,
    })
}

/// Todd genus by localization: integral of c1 c2 over 24.
pub fn todd(g: &GkmGraph) -> Result<BigRational, ChernError> {
    let c1 = equivariant_chern(g, 1)?;
    let c2 = equivariant_chern(g, 2)?;
    let value = integrate(g, &(&c1 * &c2), false)?;
    Ok(value / BigRational::from_integer(24.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{catalog, CatalogId};

    fn w(coords: &[i64]) -> Weight {
        Weight::from_ints(coords)
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn p1() -> GkmGraph {
        catalog(&CatalogId::P1 {
            a: w(&[1, 0]),
            b: w(&[0, 1]),
            c: w(&[1, 1]),
        })
        .unwrap()
    }

    #[test]
    fn chern_number_goldens() {
        let cases: Vec<(&str, GkmGraph, i64, i64, i64)> = vec![
            ("P1", p1(), 64, 24, 4),
            (
                "Q1",
                catalog(&CatalogId::Q1 {
                    a: w(&[1, 0]),
                    b: w(&[0, 1]),
                })
                .unwrap(),
                54,
                24,
                4,
            ),
            (
                "P2",
                catalog(&CatalogId::P2 {
                    a: w(&[1, 0]),
                    b: w(&[0, 1]),
                })
                .unwrap(),
                -8,
                0,
                4,
            ),
            (
                "S6",
                catalog(&CatalogId::S6 {
                    a: w(&[1, 0]),
                    b: w(&[0, 1]),
                })
                .unwrap(),
                0,
                0,
                2,
            ),
        ];
        for (name, g, c1c, c1c2, c3) in cases {
            let numbers = chern_numbers(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(numbers.c1_cubed, int(c1c), "{name} c1^3");
            assert_eq!(numbers.c1_c2, int(c1c2), "{name} c1c2");
            assert_eq!(numbers.c3, int(c3), "{name} c3");
        }
    }

    #[test]
    fn todd_examples() {
        let g = p1();
        assert_eq!(todd(&g).unwrap(), int(1));
        let g = catalog(&CatalogId::P3 {
            a: w(&[1, 0]),
            b: w(&[0, 1]),
        })
        .unwrap();
        assert_eq!(todd(&g).unwrap(), int(0));
    }

    #[test]
    fn low_degree_classes_integrate_to_zero() {
        let g = p1();
        assert_eq!(integrate(&g, &Class::one(&g), false).unwrap(), int(0));
        let c1 = equivariant_chern(&g, 1).unwrap();
        assert_eq!(integrate(&g, &(&c1 * &c1), false).unwrap(), int(0));
    }

    #[test]
    fn non_class_is_rejected() {
        let g = p1();
        // x^3 at one vertex only: not a class, and its localization sum
        // is not a polynomial.
        let n = g.torus_rank();
        let mut values = vec![Polynomial::zero(n); 4];
        values[0] = Polynomial::var(n, 0).pow(3);
        let fake = Class::new(&g, values).unwrap();
        assert!(matches!(
            integrate(&g, &fake, false).unwrap_err(),
            ChernError::NonConstant(_)
        ));
    }

    #[test]
    fn integrality_expectation() {
        let g = p1();
        let c3 = equivariant_chern(&g, 3).unwrap();
        let third = BigRational::new(1.into(), 3.into());
        let scaled = c3.scale(&third);
        assert_eq!(
            integrate(&g, &scaled, true).unwrap_err(),
            ChernError::NotInteger(BigRational::new(4.into(), 3.into()))
        );
        assert_eq!(
            integrate(&g, &scaled, false).unwrap(),
            BigRational::new(4.into(), 3.into())
        );
    }

    #[test]
    fn rank_one_localization() {
        // Circle-weight fixed point data: four points, weights as stated,
        // values e1^3 and e1*e2 of the weights.
        let multisets: Vec<Vec<Weight>> = vec![
            vec![w(&[1]), w(&[2]), w(&[3])],
            vec![w(&[-1]), w(&[1]), w(&[4])],
            vec![w(&[-1]), w(&[-4]), w(&[1])],
            vec![w(&[-1]), w(&[-2]), w(&[-3])],
        ];
        let c1_cubed: Vec<(Polynomial, Vec<Weight>)> = multisets
            .iter()
            .map(|ws| (elementary_symmetric(ws, 1).pow(3), ws.clone()))
            .collect();
        assert_eq!(localize(&c1_cubed).unwrap(), int(40));
        let c1_c2: Vec<(Polynomial, Vec<Weight>)> = multisets
            .iter()
            .map(|ws| {
                (
                    &elementary_symmetric(ws, 1) * &elementary_symmetric(ws, 2),
                    ws.clone(),
                )
            })
            .collect();
        assert_eq!(localize(&c1_c2).unwrap(), int(24));
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(localize(&[]).unwrap_err(), ChernError::Empty);
    }
}
