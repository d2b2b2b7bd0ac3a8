//! One test per headline guarantee, each printing a pass/fail line.
//!
//! The suite exercises the public API end to end: Chern numbers of the
//! catalog graphs, weight-family localization values, presentation
//! verification, surgeries, automorphism groups, enumeration from weight
//! data, and the octonion models.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};

use gkm_core::chern::{chern_numbers, equivariant_chern, equivariant_pontryagin, integrate, todd};
use gkm_core::classify::{
    case_weights, distinctness_certificate, enumerate_graphs, localization_pair, Case,
};
use gkm_core::cohomology::{
    class_space_basis, component_rank, evaluate_class_expression, free_module_rank, is_class,
    ordinary_image, ordinary_poincare, verify_presentation, Class, Generator, Presentation,
};
use gkm_core::constructions::{blowup_edge, blowup_vertex, catalog, glue_s6, CatalogId};
use gkm_core::graph::{isomorphic, validate, GkmGraph};
use gkm_core::octonion::{
    self, basis_product, iso_13, mul, phi, psi, s2s4_tangent_J, s6_tangent_J, sphere_factors,
    MulVariant, Octonion,
};
use gkm_core::poly::{divide_by_linear, Polynomial};
use gkm_core::symmetry::{aut_star, gkm_automorphisms, induced_action};
use gkm_core::{IntegerMatrix, Weight};

fn criterion(number: usize, name: &str, body: impl FnOnce()) {
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
    println!("criterion {number} ({name}): {status}");
    if let Err(cause) = outcome {
        resume_unwind(cause);
    }
}

fn w(coords: &[i64]) -> Weight {
    Weight::from_ints(coords)
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn graph(id: CatalogId) -> GkmGraph {
    catalog(&id).expect("catalog graph")
}

fn std_ab() -> (Weight, Weight) {
    (w(&[1, 0]), w(&[0, 1]))
}

fn p1_std() -> GkmGraph {
    let (a, b) = std_ab();
    graph(CatalogId::P1 {
        a,
        b,
        c: w(&[1, 1]),
    })
}

fn p2_std() -> GkmGraph {
    let (a, b) = std_ab();
    graph(CatalogId::P2 { a, b })
}

fn p3_std() -> GkmGraph {
    let (a, b) = std_ab();
    graph(CatalogId::P3 { a, b })
}

fn q1_std() -> GkmGraph {
    let (a, b) = std_ab();
    graph(CatalogId::Q1 { a, b })
}

fn q2_std() -> GkmGraph {
    let (a, b) = std_ab();
    graph(CatalogId::Q2 { a, b })
}

fn s_std(k: i64) -> GkmGraph {
    let (a, b) = std_ab();
    graph(CatalogId::S { a, b, k })
}

fn s6_std() -> GkmGraph {
    let (a, b) = std_ab();
    graph(CatalogId::S6 { a, b })
}

fn all_catalog() -> Vec<(&'static str, GkmGraph)> {
    vec![
        ("P1", p1_std()),
        ("P2", p2_std()),
        ("P3", p3_std()),
        ("Q1", q1_std()),
        ("Q2", q2_std()),
        ("S0", s_std(0)),
        ("S1", s_std(1)),
        ("S2", s_std(2)),
        ("S6", s6_std()),
    ]
}

/// Vertex table in the graph's canonical vertex order.
fn cls(g: &GkmGraph, values: &[&str]) -> Class {
    let polys = values
        .iter()
        .map(|text| Polynomial::parse(text, g.torus_rank()).expect("polynomial"))
        .collect();
    Class::new(g, polys).expect("class")
}

fn rational_coefficient(rng: &mut impl Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(-5i64..=5)),
        BigInt::from(rng.gen_range(1i64..=3)),
    )
}

/// A random rational combination of the class-space basis in one degree.
fn random_class(g: &GkmGraph, degree: usize, rng: &mut impl Rng) -> Class {
    let basis = class_space_basis(g, degree).expect("basis");
    let mut out = Class::zero(g);
    for b in &basis {
        out = &out + &b.scale(&rational_coefficient(rng));
    }
    out
}

#[test]
fn a01_chern_number_goldens() {
    criterion(1, "Chern number goldens", || {
        let cases: Vec<(&str, GkmGraph, i64, i64)> = vec![
            ("P1", p1_std(), 64, 24),
            ("Q1", q1_std(), 54, 24),
            ("P3", p3_std(), 0, 0),
            ("P2", p2_std(), -8, 0),
            ("Q2", q2_std(), -2, 0),
            ("S0", s_std(0), 0, 0),
            ("S1", s_std(1), 0, 0),
            ("S2", s_std(2), 0, 0),
        ];
        for (name, g, c1_cubed, c1_c2) in cases {
            let numbers = chern_numbers(&g).expect(name);
            assert_eq!(numbers.c1_cubed, int(c1_cubed), "{name} c1^3");
            assert_eq!(numbers.c1_c2, int(c1_c2), "{name} c1 c2");
            assert_eq!(numbers.c3, int(4), "{name} c3");
        }
    });
}

#[test]
fn a02_rank_one_family_c_values() {
    criterion(2, "rank-one family C localization values", || {
        for (a, expected) in [(1i64, 70i64), (4, 40), (5, 22)] {
            let data = case_weights(&Case::C { a: BigInt::from(a) }).expect("case C");
            let (c1_c2, c1_cubed) = localization_pair(&data).expect("localization");
            assert_eq!(c1_cubed, int(expected), "a = {a}");
            assert_eq!(c1_c2, int(24), "a = {a}");
        }
    });
}

#[test]
fn a03_todd_genus() {
    criterion(3, "Todd genus", || {
        for (name, g, expected) in [
            ("P1", p1_std(), 1),
            ("Q1", q1_std(), 1),
            ("P2", p2_std(), 0),
            ("P3", p3_std(), 0),
            ("Q2", q2_std(), 0),
            ("S0", s_std(0), 0),
            ("S1", s_std(1), 0),
            ("S2", s_std(2), 0),
        ] {
            assert_eq!(todd(&g).expect(name), int(expected), "{name}");
        }
    });
}

#[test]
fn a04_localization_vanishing_and_euler() {
    criterion(4, "low-degree integrals vanish, c3 counts vertices", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x41);
        for (name, g) in all_catalog() {
            for trial in 0..50 {
                let degree = 2 * (trial % 3);
                let class = random_class(&g, degree, &mut rng);
                let value = integrate(&g, &class, false).expect(name);
                assert!(value.is_zero(), "{name} degree {degree}: got {value}");
            }
            let c3 = equivariant_chern(&g, 3).expect(name);
            let total = integrate(&g, &c3, true).expect(name);
            assert_eq!(total, int(g.num_vertices() as i64), "{name} vertex count");
        }
    });
}

struct PresentationCase {
    name: &'static str,
    g: GkmGraph,
    generators: Vec<(&'static str, usize, Vec<&'static str>)>,
    relations: Vec<String>,
    /// Expected equivariant first Chern class over the generators.
    c1_expression: &'static str,
    c1_coefficient: i64,
    p1_coefficient: i64,
    /// Generator powers spanning ordinary degree 2 and 4.
    h2_basis: &'static str,
    h4_basis: &'static str,
}

fn presentation_cases() -> Vec<PresentationCase> {
    // The type-S parameters with one twist: c = a - (a+b), d = b + (a+b).
    let ab_minus_cd = Polynomial::parse("t1*t2 - (-t2)*(t1 + 2*t2)", 2).unwrap();
    let delta = divide_by_linear(&ab_minus_cd, &w(&[1, 1])).expect("exact division");
    assert_eq!(delta, Polynomial::parse("2*t2", 2).unwrap());
    let s_eta_relation = format!("eta*eta - (-t2)*(t1 + 2*t2)*eta - ({delta})*xi*eta");

    vec![
        PresentationCase {
            name: "P1",
            g: p1_std(),
            generators: vec![("xi", 2, vec!["0", "-t1", "-t2", "-t1 - t2"])],
            relations: vec!["xi*(xi + t1)*(xi + t2)*(xi + t1 + t2)".to_string()],
            c1_expression: "4*xi + 2*t1 + 2*t2",
            c1_coefficient: 4,
            p1_coefficient: 4,
            h2_basis: "xi",
            h4_basis: "xi*xi",
        },
        PresentationCase {
            name: "P2",
            g: p2_std(),
            generators: vec![("xi", 2, vec!["0", "t1", "t2", "-t1 - t2"])],
            relations: vec!["xi*(xi - t1)*(xi - t2)*(xi + t1 + t2)".to_string()],
            c1_expression: "-2*xi",
            c1_coefficient: -2,
            p1_coefficient: 4,
            h2_basis: "xi",
            h4_basis: "xi*xi",
        },
        PresentationCase {
            name: "P3",
            g: p3_std(),
            generators: vec![("xi", 2, vec!["0", "t1", "t2", "t1 + t2"])],
            relations: vec!["xi*(xi - t1)*(xi - t2)*(xi - t1 - t2)".to_string()],
            c1_expression: "0",
            c1_coefficient: 0,
            p1_coefficient: 4,
            h2_basis: "xi",
            h4_basis: "xi*xi",
        },
        PresentationCase {
            name: "Q1",
            g: q1_std(),
            generators: vec![
                ("xi", 2, vec!["t1", "t2", "-t2", "-t1"]),
                ("eta", 4, vec!["t1*(t1 + t2)", "t2*(t1 + t2)", "0", "0"]),
            ],
            relations: vec![
                "2*eta - (xi + t1)*(xi + t2)".to_string(),
                "eta*(eta - (t1 + t2)*xi)".to_string(),
            ],
            c1_expression: "3*xi",
            c1_coefficient: 3,
            p1_coefficient: 1,
            h2_basis: "xi",
            h4_basis: "xi*xi",
        },
        PresentationCase {
            name: "Q2",
            g: q2_std(),
            generators: vec![
                ("xi", 2, vec!["-t1", "-t2", "t2", "t1"]),
                ("eta", 4, vec!["t1*(t1 + t2)", "t2*(t1 + t2)", "0", "0"]),
            ],
            relations: vec![
                "2*eta - (xi - t1)*(xi - t2)".to_string(),
                "eta*(eta + (t1 + t2)*xi)".to_string(),
            ],
            c1_expression: "-xi",
            c1_coefficient: -1,
            p1_coefficient: 1,
            h2_basis: "xi",
            h4_basis: "xi*xi",
        },
        PresentationCase {
            name: "S1",
            g: s_std(1),
            generators: vec![
                ("xi", 2, vec!["t1 + t2", "0", "t1 + t2", "0"]),
                ("eta", 4, vec!["0", "0", "t1*t2", "(-t2)*(t1 + 2*t2)"]),
            ],
            relations: vec!["xi*xi - (t1 + t2)*xi".to_string(), s_eta_relation],
            c1_expression: "0",
            c1_coefficient: 0,
            p1_coefficient: 0,
            h2_basis: "xi",
            h4_basis: "eta",
        },
    ]
}

#[test]
fn a05_presentations_and_ordinary_cohomology() {
    criterion(5, "ring presentations and ordinary cohomology", || {
        for case in presentation_cases() {
            let g = &case.g;
            let mut env = BTreeMap::new();
            let generators: Vec<Generator> = case
                .generators
                .iter()
                .map(|(name, degree, table)| {
                    let class = cls(g, table);
                    env.insert(name.to_string(), class.clone());
                    Generator {
                        name: name.to_string(),
                        degree: *degree,
                        class,
                    }
                })
                .collect();
            let presentation = Presentation {
                generators,
                relations: case.relations.clone(),
            };
            let report = verify_presentation(g, &presentation, 12).expect(case.name);
            assert!(report.ok, "{}: {:?}", case.name, report.failures);

            let c1 = equivariant_chern(g, 1).expect(case.name);
            let expected = evaluate_class_expression(g, &env, case.c1_expression).expect(case.name);
            assert_eq!(c1, expected, "{}: equivariant c1", case.name);

            assert_eq!(
                ordinary_poincare(g, 6).expect(case.name),
                vec![1, 0, 1, 0, 1, 0, 1],
                "{}",
                case.name
            );

            let h2 = evaluate_class_expression(g, &env, case.h2_basis).expect(case.name);
            let coeff = ordinary_image(g, &c1, &[h2]).expect(case.name);
            assert_eq!(
                coeff,
                vec![int(case.c1_coefficient)],
                "{} c1 image",
                case.name
            );

            let p1 = equivariant_pontryagin(g).expect(case.name);
            let h4 = evaluate_class_expression(g, &env, case.h4_basis).expect(case.name);
            let coeff = ordinary_image(g, &p1, &[h4]).expect(case.name);
            assert_eq!(
                coeff,
                vec![int(case.p1_coefficient)],
                "{} p1 image",
                case.name
            );
        }

        // The two-vertex sphere: one degree-6 generator.
        let s6 = s6_std();
        let omega = cls(&s6, &["0", "-t1*t2*(t1 + t2)"]);
        let presentation = Presentation {
            generators: vec![Generator {
                name: "omega".to_string(),
                degree: 6,
                class: omega,
            }],
            relations: vec!["omega*omega + t1*t2*(t1 + t2)*omega".to_string()],
        };
        let report = verify_presentation(&s6, &presentation, 12).expect("S6");
        assert!(report.ok, "S6: {:?}", report.failures);
        assert_eq!(
            ordinary_poincare(&s6, 6).expect("S6"),
            vec![1, 0, 0, 0, 0, 0, 1]
        );
    });
}

#[test]
fn a06_surgeries() {
    criterion(6, "vertex and edge blow-ups, gluing", || {
        let s6 = s6_std();

        let blown = blowup_vertex(&s6, "n").expect("vertex blow-up");
        assert!(validate(&blown, true).is_valid());
        assert!(
            isomorphic(&blown, &p2_std(), false)
                .expect("search")
                .is_some(),
            "vertex blow-up is the P2 graph"
        );

        let ab_edge = s6
            .edges()
            .iter()
            .find(|e| e.weight == w(&[1, 1]))
            .expect("weight a+b edge")
            .id
            .clone();
        let cut = blowup_edge(&s6, &ab_edge, None).expect("edge blow-up");
        assert!(validate(&cut, true).is_valid());
        assert!(
            isomorphic(&cut, &q2_std(), false)
                .expect("search")
                .is_some(),
            "edge blow-up is the Q2 graph"
        );

        let (a, b) = std_ab();
        for k in [0i64, 1] {
            let kk = BigInt::from(k);
            let c = &a - &(&a + &b).scaled(&kk);
            let d = &b + &(&a + &b).scaled(&kk);
            let second = graph(CatalogId::S6 { a: c, b: d });
            let glued = glue_s6(&s6, &second).expect("gluing");
            assert!(validate(&glued, true).is_valid());
            assert!(
                isomorphic(&glued, &s_std(k), true)
                    .expect("search")
                    .is_some(),
                "glued pair of spheres is the k = {k} twisted graph"
            );
        }
    });
}

#[test]
fn a07_automorphism_groups() {
    criterion(7, "automorphism group orders and induced actions", || {
        let p1_rank3 = graph(CatalogId::P1 {
            a: w(&[1, 0, 0]),
            b: w(&[0, 1, 0]),
            c: w(&[0, 0, 1]),
        });
        for (name, g, order) in [
            ("P1 rank 3", p1_rank3, 24usize),
            ("P2", p2_std(), 6),
            ("P3", p3_std(), 8),
            ("Q1", q1_std(), 8),
            ("Q2", q2_std(), 8),
        ] {
            assert_eq!(gkm_automorphisms(&g).expect(name).order(), order, "{name}");
        }

        assert_eq!(aut_star(&s_std(0)).expect("S0").order(), 4);
        assert_eq!(aut_star(&s_std(1)).expect("S1").order(), 2);

        // Swapping the two sphere halves (p1 <-> p3, p2 <-> p4) acts as -1
        // on ordinary degree 2.
        let s1 = s_std(1);
        let group = gkm_automorphisms(&s1).expect("S1");
        let swap = group
            .elements
            .iter()
            .find(|a| a.vertex_map == vec![2, 3, 0, 1])
            .expect("half-swap automorphism");
        let action = induced_action(&s1, swap, 2).expect("degree 2 action");
        assert_eq!(action, vec![vec![int(-1)]]);
    });
}

#[test]
fn a08_classification_from_weight_data() {
    criterion(8, "enumeration from fixed-point weight data", || {
        let (a, b) = std_ab();
        let ab = &a + &b;

        let unique: Vec<(&str, Case, GkmGraph)> = vec![
            (
                "A",
                Case::A {
                    a: a.clone(),
                    b: b.clone(),
                    c: ab.clone(),
                },
                p1_std(),
            ),
            (
                "B",
                Case::B {
                    a: a.clone(),
                    b: b.clone(),
                },
                graph(CatalogId::Q1 {
                    a: ab.clone(),
                    b: b.clone(),
                }),
            ),
            (
                "E",
                Case::E {
                    a: a.clone(),
                    b: b.clone(),
                },
                graph(CatalogId::P2 {
                    a: a.clone(),
                    b: ab.clone(),
                }),
            ),
            (
                "F",
                Case::F {
                    a: a.clone(),
                    b: b.clone(),
                },
                graph(CatalogId::Q2 {
                    a: a.clone(),
                    b: ab.clone(),
                }),
            ),
        ];
        for (name, case, expected) in unique {
            let data = case_weights(&case).expect(name);
            let classes = enumerate_graphs(&data, false).expect(name);
            assert_eq!(classes.len(), 1, "{name}: one isomorphism class");
            assert!(
                isomorphic(&classes[0], &expected, false)
                    .expect("search")
                    .is_some(),
                "{name} matches its catalog graph"
            );
        }

        for k in [0i64, 1] {
            let data = case_weights(&Case::d_twisted(a.clone(), b.clone(), k)).expect("case D");
            let classes = enumerate_graphs(&data, false).expect("case D");
            assert!(
                classes
                    .iter()
                    .any(|g| { isomorphic(g, &s_std(k), false).expect("search").is_some() }),
                "k = {k} twisted graph realizes its weight data"
            );
        }

        let p3_data = case_weights(&Case::D {
            a: a.clone(),
            b: b.clone(),
            c: -&a,
            d: b.clone(),
        })
        .expect("P3 data");
        let classes = enumerate_graphs(&p3_data, false).expect("P3 data");
        assert!(
            classes
                .iter()
                .any(|g| { isomorphic(g, &p3_std(), false).expect("search").is_some() }),
            "P3 weight data realizes the P3 graph"
        );

        let certificate = distinctness_certificate().expect("certificate");
        assert!(certificate.ok(), "{certificate:?}");
    });
}

#[test]
fn a09_octonion_models() {
    criterion(9, "octonion tables, isomorphism, symmetries", || {
        for variant in [MulVariant::I, MulVariant::II] {
            for i in 0..8 {
                for j in 0..8 {
                    let product = mul(&Octonion::basis(i), &Octonion::basis(j), variant);
                    assert_eq!(
                        product,
                        basis_product(i, j, variant),
                        "{variant:?} e{i} e{j}"
                    );
                }
            }
        }

        for i in 0..8 {
            for j in 0..8 {
                let x = Octonion::basis(i);
                let y = Octonion::basis(j);
                assert_eq!(
                    iso_13(&mul(&x, &y, MulVariant::I)),
                    mul(&iso_13(&x), &iso_13(&y), MulVariant::II),
                    "e{i} e{j}"
                );
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0x09);
        for _ in 0..100 {
            let s = octonion::sample_unit_quaternion(&mut rng);
            let t = octonion::sample_unit_quaternion(&mut rng);
            let x = octonion::sample_octonion(&mut rng);
            let y = octonion::sample_octonion(&mut rng);
            let product = mul(&x, &y, MulVariant::I);
            assert_eq!(
                phi(&s, &product).unwrap(),
                mul(&phi(&s, &x).unwrap(), &phi(&s, &y).unwrap(), MulVariant::I)
            );
            assert_eq!(
                psi(&t, &product).unwrap(),
                mul(&psi(&t, &x).unwrap(), &psi(&t, &y).unwrap(), MulVariant::I)
            );
            assert_eq!(
                mul(&x, &y, MulVariant::I).norm_sq(),
                x.norm_sq() * y.norm_sq()
            );
            assert_eq!(
                mul(&x, &y, MulVariant::II).norm_sq(),
                x.norm_sq() * y.norm_sq()
            );
        }

        for _ in 0..100 {
            let u = octonion::sample_s6_point(&mut rng);
            let v = octonion::sample_s6_tangent(&u, &mut rng);
            let jv = s6_tangent_J(&u, &v).expect("tangent map");
            assert!(jv.is_imaginary() && u.inner(&jv).is_zero(), "stays tangent");
            assert_eq!(s6_tangent_J(&u, &jv).expect("tangent map"), -&v);

            let u = octonion::sample_s2s4_point(&mut rng);
            let v = octonion::sample_s2s4_tangent(&u, &mut rng);
            let jv = s2s4_tangent_J(&u, &v).expect("tangent map");
            let (n1, n2) = sphere_factors(&u);
            assert!(
                n1.inner(&jv).is_zero() && n2.inner(&jv).is_zero(),
                "stays tangent"
            );
            assert_eq!(s2s4_tangent_J(&u, &jv).expect("tangent map"), -&v);
        }
    });
}

#[test]
fn a10_structural_properties() {
    criterion(
        10,
        "validation equivariance, products, Hilbert series",
        || {
            let unimodular = [
                IntegerMatrix::from_int_rows(&[&[1, 1], &[0, 1]]),
                IntegerMatrix::from_int_rows(&[&[0, -1], &[1, 0]]),
                IntegerMatrix::from_int_rows(&[&[1, 0], &[1, 1]]),
            ];
            let mut rng = ChaCha8Rng::seed_from_u64(0x0a);
            for (name, g) in all_catalog() {
                // Weight-lattice changes preserve validity and isomorphism type.
                for u in &unimodular {
                    let edges = g
                        .edges()
                        .iter()
                        .map(|e| {
                            (
                                e.id.clone(),
                                g.vertex_name(e.from).to_string(),
                                g.vertex_name(e.to).to_string(),
                                u.apply(&e.weight),
                            )
                        })
                        .collect();
                    let moved = GkmGraph::new(g.torus_rank(), g.vertex_names().to_vec(), edges)
                        .expect(name);
                    assert!(validate(&moved, true).is_valid(), "{name}");
                    assert!(
                        isomorphic(&g, &moved, true).expect("search").is_some(),
                        "{name}"
                    );
                }

                // Products of classes are classes.
                for _ in 0..5 {
                    let f = random_class(&g, 2, &mut rng);
                    let h = random_class(&g, 4, &mut rng);
                    assert!(is_class(&g, &(&f * &h)).expect(name), "{name}");
                }

                // Graded ranks agree with a free module on the Betti generators.
                let generator_degrees: &[usize] = if g.num_vertices() == 2 {
                    &[0, 6]
                } else {
                    &[0, 2, 4, 6]
                };
                for degree in (0..=12).step_by(2) {
                    assert_eq!(
                        component_rank(&g, degree).expect(name),
                        free_module_rank(g.torus_rank(), generator_degrees, degree),
                        "{name} degree {degree}"
                    );
                }
            }
        },
    );
}
