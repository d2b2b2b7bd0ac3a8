//! Equivariant graph cohomology with rational coefficients.
//!
//! A class assigns a polynomial in Q[t1, .., tn] to every vertex so that
//! across each edge of weight w the two values agree modulo the linear
//! form of w. Classes of fixed degree form a finite-dimensional Q-vector
//! space: the divisibility condition along an edge is equivalent to the
//! difference vanishing under the substitution that eliminates one
//! variable via ell(w) = 0, which is linear in the coefficients. All
//! degrees are topological: a polynomial of (algebraic) degree k sits in
//! degree 2k.
//!
//! Ordinary (non-equivariant) data comes from two routes that are kept
//! separate so they can be compared: the quotient by the ideal generated
//! by positive-degree polynomials in t (`ordinary_rank`), and the
//! alternating-sum Betti formula valid for free modules
//! (`poincare_from_ranks`), which fails loudly when freeness would be
//! violated.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::expr::{evaluate, parse_expr, torus_variable, ExprAlgebra, ExprError};
use crate::graph::{GkmGraph, GraphError};
use crate::lattice::Weight;
use crate::linalg::{integer_matrix_from_rational_rows, solve_in_column_span, RationalMatrix};
use crate::poly::{divide_by_linear, monomials_of_degree, Monomial, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("{0}")]
    ShapeMismatch(String),
    #[error("{0} is not a cohomology class")]
    NotAClass(String),
    #[error("{0}")]
    Inhomogeneous(String),
    #[error("basis classes are dependent modulo the module boundary")]
    BasisDependent,
    #[error("basis classes do not span ordinary cohomology in their degree")]
    BasisNotSpanning,
    #[error("rank data is inconsistent with a free module in degree {degree}")]
    NotFree { degree: usize },
}

/// One polynomial per vertex, indexed like the graph's sorted vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    nvars: usize,
    values: Vec<Polynomial>,
}

impl Class {
    pub fn new(g: &GkmGraph, values: Vec<Polynomial>) -> Result<Self, CohomologyError> {
        if values.len() != g.num_vertices() {
            return Err(CohomologyError::ShapeMismatch(format!(
                "expected {} vertex values, found {}",
                g.num_vertices(),
                values.len()
            )));
        }
        if let Some(p) = values.iter().find(|p| p.nvars() != g.torus_rank()) {
            return Err(CohomologyError::ShapeMismatch(format!(
                "value in {} variables on a rank-{} graph",
                p.nvars(),
                g.torus_rank()
            )));
        }
        Ok(Class {
            nvars: g.torus_rank(),
            values,
        })
    }

    /// The same polynomial at every vertex; always a class.
    pub fn constant(g: &GkmGraph, p: Polynomial) -> Self {
        assert_eq!(p.nvars(), g.torus_rank());
        Class {
            nvars: g.torus_rank(),
            values: vec![p; g.num_vertices()],
        }
    }

    pub fn zero(g: &GkmGraph) -> Self {
        Class::constant(g, Polynomial::zero(g.torus_rank()))
    }

    pub fn one(g: &GkmGraph) -> Self {
        Class::constant(g, Polynomial::one(g.torus_rank()))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn values(&self) -> &[Polynomial] {
        &self.values
    }

    pub fn value(&self, vertex: usize) -> &Polynomial {
        &self.values[vertex]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Polynomial::is_zero)
    }

    pub fn scale(&self, k: &BigRational) -> Class {
        Class {
            nvars: self.nvars,
            values: self.values.iter().map(|p| p.scale(k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Class {
        let mut out = Class {
            nvars: self.nvars,
            values: vec![Polynomial::one(self.nvars); self.values.len()],
        };
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Parse a vertex-name-to-polynomial table against the graph. The
    /// table must name every vertex exactly once.
    pub fn from_table(
        g: &GkmGraph,
        table: &BTreeMap<String, String>,
    ) -> Result<Self, CohomologyError> {
        for name in table.keys() {
            if g.vertex_index(name).is_none() {
                return Err(CohomologyError::ShapeMismatch(format!(
                    "table names unknown vertex `{name}`"
                )));
            }
        }
        let mut values = Vec::with_capacity(g.num_vertices());
        for name in g.vertex_names() {
            let text = table.get(name).ok_or_else(|| {
                CohomologyError::ShapeMismatch(format!("table misses vertex `{name}`"))
            })?;
            values.push(Polynomial::parse(text, g.torus_rank())?);
        }
        Class::new(g, values)
    }

    pub fn to_table(&self, g: &GkmGraph) -> BTreeMap<String, String> {
        g.vertex_names()
            .iter()
            .cloned()
            .zip(self.values.iter().map(|p| p.to_string()))
            .collect()
    }

    /// Common topological degree of the vertex values: `None` for the zero
    /// class, an error when values are inhomogeneous or of mixed degrees.
    pub fn topological_degree(&self) -> Result<Option<usize>, CohomologyError> {
        let mut degree: Option<u32> = None;
        for p in &self.values {
            if p.is_zero() {
                continue;
            }
            let d = p.homogeneous_degree().ok_or_else(|| {
                CohomologyError::Inhomogeneous("vertex value is not homogeneous".to_string())
            })?;
            match degree {
                None => degree = Some(d),
                Some(prev) if prev == d => {}
                Some(prev) => {
                    return Err(CohomologyError::Inhomogeneous(format!(
                        "vertex values of degrees {} and {}",
                        2 * prev,
                        2 * d
                    )))
                }
            }
        }
        Ok(degree.map(|d| 2 * d as usize))
    }
}

macro_rules! class_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait for &Class {
            type Output = Class;
            fn $method(self, rhs: &Class) -> Class {
                assert_eq!(self.nvars, rhs.nvars);
                assert_eq!(self.values.len(), rhs.values.len());
                Class {
                    nvars: self.nvars,
                    values: self
                        .values
                        .iter()
                        .zip(&rhs.values)
                        .map(|(a, b)| a $op b)
                        .collect(),
                }
            }
        }
    };
}
class_binop!(Add, add, +);
class_binop!(Sub, sub, -);
class_binop!(Mul, mul, *);

impl std::ops::Neg for &Class {
    type Output = Class;
    fn neg(self) -> Class {
        Class {
            nvars: self.nvars,
            values: self.values.iter().map(|p| -p).collect(),
        }
    }
}

fn ensure_no_zero_weights(g: &GkmGraph) -> Result<(), CohomologyError> {
    for e in g.edges() {
        if e.weight.is_zero() {
            return Err(GraphError::ZeroWeightEdge(e.id.clone()).into());
        }
    }
    Ok(())
}

fn check_shape(g: &GkmGraph, class: &Class) -> Result<(), CohomologyError> {
    if class.values.len() != g.num_vertices() || class.nvars != g.torus_rank() {
        return Err(CohomologyError::ShapeMismatch(
            "class does not match the graph's vertex count or torus rank".to_string(),
        ));
    }
    Ok(())
}

/// Does the table satisfy the divisibility condition across every edge?
pub fn is_class(g: &GkmGraph, class: &Class) -> Result<bool, CohomologyError> {
    ensure_no_zero_weights(g)?;
    check_shape(g, class)?;
    for e in g.edges() {
        let diff = &class.values[e.from] - &class.values[e.to];
        if !diff.is_zero() && divide_by_linear(&diff, &e.weight).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Substitution that eliminates the pivot variable on ell(w) = 0:
/// t_pivot evaluates to -(1/w_pivot) * sum of the other coordinates.
fn hyperplane_image(w: &Weight, nvars: usize) -> (usize, Polynomial) {
    let pivot = w
        .coords()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero weight");
    let wp = BigRational::from(w.coord(pivot).clone());
    let mut image = Polynomial::zero(nvars);
    for (j, c) in w.coords().iter().enumerate() {
        if j != pivot && !c.is_zero() {
            let coeff = -BigRational::from(c.clone()) / &wp;
            image = &image + &Polynomial::var(nvars, j).scale(&coeff);
        }
    }
    (pivot, image)
}

/// Linear constraint rows cutting out the degree-2k class space inside the
/// vertex-major coefficient space over `monos`.
fn constraint_rows(g: &GkmGraph, k: u32, monos: &[Monomial]) -> Vec<Vec<BigRational>> {
    let n = g.torus_rank();
    let width = g.num_vertices() * monos.len();
    let mut rows = Vec::new();
    for e in g.edges() {
        let (pivot, image) = hyperplane_image(&e.weight, n);
        let mut image_pows = Vec::with_capacity(k as usize + 1);
        image_pows.push(Polynomial::one(n));
        for _ in 0..k {
            image_pows.push(&image_pows[image_pows.len() - 1] * &image);
        }
        let reduced: Vec<&Monomial> = monos.iter().filter(|m| m[pivot] == 0).collect();
        let rmap: BTreeMap<&Monomial, usize> =
            reduced.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut block = vec![vec![BigRational::zero(); width]; reduced.len()];
        for (mi, m) in monos.iter().enumerate() {
            let mut rest = m.clone();
            rest[pivot] = 0;
            let reduced_poly =
                &Polynomial::monomial(n, rest, BigRational::one()) * &image_pows[m[pivot] as usize];
            for (rm, coeff) in reduced_poly.terms() {
                let r = rmap[rm];
                block[r][e.from * monos.len() + mi] += coeff;
                block[r][e.to * monos.len() + mi] -= coeff;
            }
        }
        rows.extend(block);
    }
    rows
}

fn space_dims(g: &GkmGraph, degree: usize) -> Option<(u32, Vec<Monomial>)> {
    if degree % 2 != 0 {
        return None;
    }
    let k = (degree / 2) as u32;
    Some((k, monomials_of_degree(g.torus_rank(), k)))
}

/// Dimension of the space of classes in one topological degree.
pub fn component_rank(g: &GkmGraph, degree: usize) -> Result<usize, CohomologyError> {
    ensure_no_zero_weights(g)?;
    let Some((k, monos)) = space_dims(g, degree) else {
        return Ok(0);
    };
    let width = g.num_vertices() * monos.len();
    let rows = constraint_rows(g, k, &monos);
    if rows.is_empty() {
        return Ok(width);
    }
    Ok(width - RationalMatrix::from_rows(rows).rank())
}

/// Deterministic basis of the degree-`degree` class space.
pub fn class_space_basis(g: &GkmGraph, degree: usize) -> Result<Vec<Class>, CohomologyError> {
    ensure_no_zero_weights(g)?;
    let Some((k, monos)) = space_dims(g, degree) else {
        return Ok(Vec::new());
    };
    let width = g.num_vertices() * monos.len();
    if width == 0 {
        return Ok(Vec::new());
    }
    let mut rows = constraint_rows(g, k, &monos);
    if rows.is_empty() {
        rows.push(vec![BigRational::zero(); width]);
    }
    let kernel = RationalMatrix::from_rows(rows).nullspace_basis();
    Ok(kernel
        .into_iter()
        .map(|x| assemble_class(g, &monos, &x))
        .collect())
}

fn assemble_class(g: &GkmGraph, monos: &[Monomial], coeffs: &[BigRational]) -> Class {
    let n = g.torus_rank();
    let values = (0..g.num_vertices())
        .map(|v| {
            let mut p = Polynomial::zero(n);
            for (mi, m) in monos.iter().enumerate() {
                let c = &coeffs[v * monos.len() + mi];
                if !c.is_zero() {
                    p = &p + &Polynomial::monomial(n, m.clone(), c.clone());
                }
            }
            p
        })
        .collect();
    Class { nvars: n, values }
}

/// Vertex-major coefficient vector of a class whose values are zero or
/// homogeneous of algebraic degree k.
fn vectorize(g: &GkmGraph, class: &Class, k: u32, monos: &[Monomial]) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(g.num_vertices() * monos.len());
    for p in &class.values {
        assert!(
            p.is_zero() || p.homogeneous_degree() == Some(k),
            "vectorize expects homogeneous degree {k}"
        );
        for m in monos {
            out.push(p.coefficient(m));
        }
    }
    out
}

/// Second route to the component rank: the same constraints cleared to an
/// integer matrix, with the kernel computed by exact column reduction over
/// the integers. Returns whether both ranks agree and every integral
/// kernel vector passes the divisibility test.
pub fn integral_rank_consistent(g: &GkmGraph, degree: usize) -> Result<bool, CohomologyError> {
    ensure_no_zero_weights(g)?;
    let Some((k, monos)) = space_dims(g, degree) else {
        return Ok(true);
    };
    let width = g.num_vertices() * monos.len();
    if width == 0 {
        return Ok(true);
    }
    let mut rows = constraint_rows(g, k, &monos);
    if rows.is_empty() {
        rows.push(vec![BigRational::zero(); width]);
    }
    let rational_rank = width - RationalMatrix::from_rows(rows.clone()).rank();
    let integral = integer_matrix_from_rational_rows(&rows);
    let kernel = crate::lattice::integer_kernel_basis(&integral);
    if kernel.len() != rational_rank {
        return Ok(false);
    }
    for vec in &kernel {
        let coeffs: Vec<BigRational> = vec.iter().cloned().map(BigRational::from).collect();
        let class = assemble_class(g, &monos, &coeffs);
        if !is_class(g, &class)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut out = 1u128;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}

/// Rank of the free module with generators in the given topological
/// degrees over polynomials in `torus_rank` variables.
pub fn free_module_rank(torus_rank: usize, generator_degrees: &[usize], degree: usize) -> usize {
    let mut total = 0usize;
    for &gd in generator_degrees {
        if degree >= gd && (degree - gd) % 2 == 0 {
            let m = (degree - gd) / 2;
            total += binomial(
                m + torus_rank.saturating_sub(1),
                torus_rank.saturating_sub(1),
            ) as usize;
        }
    }
    total
}

/// Betti numbers from component ranks under the freeness assumption:
/// b_d = sum over i of (-1)^i C(n, i) rank_(d - 2i). `ranks[d]` must hold
/// the component rank in topological degree d for d up to the slice end.
/// A negative intermediate value proves the ranks do not come from a free
/// module.
pub fn poincare_from_ranks(
    torus_rank: usize,
    ranks: &[usize],
) -> Result<Vec<usize>, CohomologyError> {
    let mut betti = vec![0usize; ranks.len()];
    for (d, slot) in betti.iter_mut().enumerate() {
        if d % 2 != 0 {
            continue;
        }
        let mut b: i128 = 0;
        for i in 0..=(d / 2).min(torus_rank) {
            let term = binomial(torus_rank, i) as i128 * ranks[d - 2 * i] as i128;
            if i % 2 == 0 {
                b += term;
            } else {
                b -= term;
            }
        }
        if b < 0 {
            return Err(CohomologyError::NotFree { degree: d });
        }
        *slot = b as usize;
    }
    Ok(betti)
}

/// Betti numbers of the underlying space in degrees 0..=max_degree.
pub fn ordinary_poincare(g: &GkmGraph, max_degree: usize) -> Result<Vec<usize>, CohomologyError> {
    let mut ranks = vec![0usize; max_degree + 1];
    for d in (0..=max_degree).step_by(2) {
        ranks[d] = component_rank(g, d)?;
    }
    poincare_from_ranks(g.torus_rank(), &ranks)
}

/// Spanning vectors of the degree-d boundary piece: t_i times every basis
/// class of degree d - 2, in the degree-d coordinate space.
fn boundary_vectors(
    g: &GkmGraph,
    degree: usize,
    k: u32,
    monos: &[Monomial],
) -> Result<Vec<Vec<BigRational>>, CohomologyError> {
    if degree < 2 {
        return Ok(Vec::new());
    }
    let n = g.torus_rank();
    let mut vecs = Vec::new();
    for class in class_space_basis(g, degree - 2)? {
        for i in 0..n {
            let ti = Class::constant(g, Polynomial::var(n, i));
            vecs.push(vectorize(g, &(&ti * &class), k, monos));
        }
    }
    Ok(vecs)
}

/// Quotient-model rank of ordinary cohomology in one degree: classes
/// modulo the span of t_i-multiples of lower-degree classes.
pub fn ordinary_rank(g: &GkmGraph, degree: usize) -> Result<usize, CohomologyError> {
    let Some((k, monos)) = space_dims(g, degree) else {
        return Ok(0);
    };
    let total = component_rank(g, degree)?;
    let boundary = boundary_vectors(g, degree, k, &monos)?;
    if boundary.is_empty() {
        return Ok(total);
    }
    Ok(total - RationalMatrix::from_rows(boundary).rank())
}

/// Coordinates of `class` in ordinary cohomology with respect to `basis`,
/// all in one homogeneous degree. The basis must be independent modulo
/// the boundary piece and together with it span the whole degree.
pub fn ordinary_image(
    g: &GkmGraph,
    class: &Class,
    basis: &[Class],
) -> Result<Vec<BigRational>, CohomologyError> {
    ensure_no_zero_weights(g)?;
    check_shape(g, class)?;
    if !is_class(g, class)? {
        return Err(CohomologyError::NotAClass("the input".to_string()));
    }
    for (i, b) in basis.iter().enumerate() {
        check_shape(g, b)?;
        if !is_class(g, b)? {
            return Err(CohomologyError::NotAClass(format!("basis element {i}")));
        }
        if b.is_zero() {
            return Err(CohomologyError::BasisDependent);
        }
    }

    let class_degree = class.topological_degree()?;
    let mut degree = class_degree;
    for b in basis {
        let bd = b.topological_degree()?.expect("nonzero basis element");
        match degree {
            None => degree = Some(bd),
            Some(d) if d == bd => {}
            Some(d) => {
                return Err(CohomologyError::Inhomogeneous(format!(
                    "degree {bd} basis element against degree {d}"
                )))
            }
        }
    }
    let Some(degree) = degree else {
        // Zero class against an empty basis: representable only when the
        // whole ordinary cohomology it lives in is trivial, which is
        // vacuously fine with no coordinates to report.
        return Ok(Vec::new());
    };

    let (k, monos) = space_dims(g, degree).expect("even degree");
    let boundary = boundary_vectors(g, degree, k, &monos)?;
    let boundary_rank = if boundary.is_empty() {
        0
    } else {
        RationalMatrix::from_rows(boundary.clone()).rank()
    };
    let mut all = boundary.clone();
    for b in basis {
        all.push(vectorize(g, b, k, &monos));
    }
    let all_rank = if all.is_empty() {
        0
    } else {
        RationalMatrix::from_rows(all.clone()).rank()
    };
    if all_rank != boundary_rank + basis.len() {
        return Err(CohomologyError::BasisDependent);
    }
    if all_rank != component_rank(g, degree)? {
        return Err(CohomologyError::BasisNotSpanning);
    }

    let target = vectorize(g, class, k, &monos);
    let solution = solve_in_column_span(&all, &target)
        .expect("a class lies in the span of boundary and basis");
    Ok(solution[boundary.len()..].to_vec())
}

/// Evaluation of relation strings into classes: torus variables become
/// constant classes, other identifiers resolve to presentation generators.
struct ClassAlgebra<'a> {
    g: &'a GkmGraph,
    env: &'a BTreeMap<String, Class>,
}

impl ExprAlgebra for ClassAlgebra<'_> {
    type Value = Class;

    fn integer(&self, n: &num_bigint::BigInt) -> Class {
        Class::constant(
            self.g,
            Polynomial::constant(self.g.torus_rank(), BigRational::from(n.clone())),
        )
    }

    fn ident(&self, name: &str) -> Result<Class, ExprError> {
        if let Some(i) = torus_variable(name, self.g.torus_rank()) {
            return Ok(Class::constant(
                self.g,
                Polynomial::var(self.g.torus_rank(), i),
            ));
        }
        self.env
            .get(name)
            .cloned()
            .ok_or_else(|| ExprError::UnknownIdentifier(name.to_string()))
    }

    fn add(&self, a: &Class, b: &Class) -> Class {
        a + b
    }

    fn sub(&self, a: &Class, b: &Class) -> Class {
        a - b
    }

    fn mul(&self, a: &Class, b: &Class) -> Class {
        a * b
    }

    fn neg(&self, a: &Class) -> Class {
        -a
    }

    fn div(&self, a: &Class, b: &Class) -> Result<Class, ExprError> {
        let mut constant: Option<BigRational> = None;
        for p in &b.values {
            let c = p.as_constant().ok_or(ExprError::NonConstantDivisor)?;
            match &constant {
                None => constant = Some(c),
                Some(prev) if *prev == c => {}
                Some(_) => return Err(ExprError::NonConstantDivisor),
            }
        }
        let c = constant.ok_or(ExprError::NonConstantDivisor)?;
        if c.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(a.scale(&c.recip()))
    }

    fn one(&self) -> Class {
        Class::one(self.g)
    }
}

/// Evaluate an expression over generator names into a class.
pub fn evaluate_class_expression(
    g: &GkmGraph,
    env: &BTreeMap<String, Class>,
    input: &str,
) -> Result<Class, CohomologyError> {
    let expr = parse_expr(input)?;
    Ok(evaluate(&expr, &ClassAlgebra { g, env })?)
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    /// Topological degree, positive and even.
    pub degree: usize,
    pub class: Class,
}

#[derive(Debug, Clone)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, serde::Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields)]
struct GeneratorDoc {
    name: String,
    degree: usize,
    classes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, serde::Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields)]
struct PresentationDoc {
    generators: Vec<GeneratorDoc>,
    #[serde(default)]
    relations: Vec<String>,
}

impl Presentation {
    /// Parse `{"generators": [{"name", "degree", "classes"}], "relations"}`.
    pub fn from_json(g: &GkmGraph, text: &str) -> Result<Self, CohomologyError> {
        let doc: PresentationDoc = serde_json::from_str(text)
            .map_err(|e| CohomologyError::ShapeMismatch(format!("malformed presentation: {e}")))?;
        let mut generators = Vec::with_capacity(doc.generators.len());
        for gen in doc.generators {
            generators.push(Generator {
                class: Class::from_table(g, &gen.classes)?,
                name: gen.name,
                degree: gen.degree,
            });
        }
        Ok(Presentation {
            generators,
            relations: doc.relations,
        })
    }

    pub fn to_json_value(&self, g: &GkmGraph) -> serde_json::Value {
        serde_json::json!({
            "generators": self.generators.iter().map(|gen| serde_json::json!({
                "name": gen.name,
                "degree": gen.degree,
                "classes": gen.class.to_table(g),
            })).collect::<Vec<_>>(),
            "relations": self.relations,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSpan {
    pub degree: usize,
    pub spanned: usize,
    pub expected: usize,
}

#[derive(Debug, Clone)]
pub struct PresentationReport {
    pub ok: bool,
    pub failures: Vec<String>,
    pub spans: Vec<DegreeSpan>,
}

/// Exponent vectors over the generators with weighted topological degree
/// at most `limit`.
fn generator_exponents(degrees: &[usize], limit: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; degrees.len()];
    fn rec(
        degrees: &[usize],
        limit: usize,
        pos: usize,
        used: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pos == degrees.len() {
            out.push(current.clone());
            return;
        }
        let mut e = 0u32;
        loop {
            let cost = used + e as usize * degrees[pos];
            if cost > limit {
                break;
            }
            current[pos] = e;
            rec(degrees, limit, pos + 1, cost, current, out);
            e += 1;
        }
        current[pos] = 0;
    }
    rec(degrees, limit, 0, 0, &mut current, &mut out);
    out
}

/// Check a presentation against the graph: every generator restricts to a
/// genuine class of its stated degree, every relation vanishes at every
/// vertex, and products of generators over the polynomial coefficients
/// span the full class space in each even degree up to `max_degree`.
pub fn verify_presentation(
    g: &GkmGraph,
    presentation: &Presentation,
    max_degree: usize,
) -> Result<PresentationReport, CohomologyError> {
    ensure_no_zero_weights(g)?;
    let mut failures = Vec::new();

    let mut env = BTreeMap::new();
    for gen in &presentation.generators {
        if gen.degree == 0 || gen.degree % 2 != 0 {
            return Err(CohomologyError::ShapeMismatch(format!(
                "generator `{}` must have positive even degree",
                gen.name
            )));
        }
        check_shape(g, &gen.class)?;
        if !is_class(g, &gen.class)? {
            failures.push(format!("generator `{}` is not a class", gen.name));
        }
        match gen.class.topological_degree() {
            Ok(Some(d)) if d == gen.degree => {}
            Ok(None) => failures.push(format!("generator `{}` is zero", gen.name)),
            Ok(Some(d)) => failures.push(format!(
                "generator `{}` has degree {d}, stated {}",
                gen.name, gen.degree
            )),
            Err(_) => failures.push(format!("generator `{}` is inhomogeneous", gen.name)),
        }
        env.insert(gen.name.clone(), gen.class.clone());
    }

    for (i, relation) in presentation.relations.iter().enumerate() {
        match evaluate_class_expression(g, &env, relation) {
            Ok(value) => {
                if !value.is_zero() {
                    failures.push(format!("relation {i} does not vanish: `{relation}`"));
                }
            }
            Err(e) => failures.push(format!("relation {i} fails to evaluate: {e}")),
        }
    }

    let mut spans = Vec::new();
    if failures.is_empty() {
        let degrees: Vec<usize> = presentation
            .generators
            .iter()
            .map(|gen| gen.degree)
            .collect();
        let exponents = generator_exponents(&degrees, max_degree);
        let n = g.torus_rank();
        for degree in (0..=max_degree).step_by(2) {
            let expected = component_rank(g, degree)?;
            let (k, monos) = space_dims(g, degree).expect("even degree");
            let mut vectors = Vec::new();
            for exps in &exponents {
                let used: usize = exps
                    .iter()
                    .zip(&degrees)
                    .map(|(&e, &d)| e as usize * d)
                    .sum();
                if used > degree {
                    continue;
                }
                let mut product = Class::one(g);
                for (gen, &e) in presentation.generators.iter().zip(exps) {
                    product = &product * &gen.class.pow(e);
                }
                let t_degree = ((degree - used) / 2) as u32;
                for m in monomials_of_degree(n, t_degree) {
                    let scaled = &product
                        * &Class::constant(g, Polynomial::monomial(n, m, BigRational::one()));
                    vectors.push(vectorize(g, &scaled, k, &monos));
                }
            }
            let spanned = if vectors.is_empty() {
                0
            } else {
                RationalMatrix::from_rows(vectors).rank()
            };
            if spanned != expected {
                failures.push(format!(
                    "degree {degree}: generators span {spanned} of {expected}"
                ));
            }
            spans.push(DegreeSpan {
                degree,
                spanned,
                expected,
            });
        }
    }

    Ok(PresentationReport {
        ok: failures.is_empty(),
        failures,
        spans,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{catalog, CatalogId};

    fn w(coords: &[i64]) -> Weight {
        Weight::from_ints(coords)
    }

    fn p1() -> GkmGraph {
        catalog(&CatalogId::P1 {
            a: w(&[1, 0]),
            b: w(&[0, 1]),
            c: w(&[1, 1]),
        })
        .unwrap()
    }

    fn q1() -> GkmGraph {
        catalog(&CatalogId::Q1 {
            a: w(&[1, 0]),
            b: w(&[0, 1]),
        })
        .unwrap()
    }

    fn s6() -> GkmGraph {
        catalog(&CatalogId::S6 {
            a: w(&[1, 0]),
            b: w(&[0, 1]),
        })
        .unwrap()
    }

    fn table(g: &GkmGraph, entries: &[(&str, &str)]) -> Class {
        let map: BTreeMap<String, String> = entries
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Class::from_table(g, &map).unwrap()
    }

    #[test]
    fn component_ranks_match_free_module() {
        let g = p1();
        assert_eq!(component_rank(&g, 0).unwrap(), 1);
        assert_eq!(component_rank(&g, 2).unwrap(), 3);
        assert_eq!(component_rank(&g, 3).unwrap(), 0);
        for d in (0..=12).step_by(2) {
            assert_eq!(
                component_rank(&g, d).unwrap(),
                free_module_rank(2, &[0, 2, 4, 6], d),
                "degree {d}"
            );
        }
    }

    #[test]
    fn component_ranks_s6() {
        let g = s6();
        assert_eq!(component_rank(&g, 2).unwrap(), 2);
        for d in (0..=12).step_by(2) {
            assert_eq!(
                component_rank(&g, d).unwrap(),
                free_module_rank(2, &[0, 6], d),
                "degree {d}"
            );
        }
    }

    #[test]
    fn integral_route_agrees() {
        for g in [p1(), q1(), s6()] {
            for d in (0..=8).step_by(2) {
                assert!(integral_rank_consistent(&g, d).unwrap(), "degree {d}");
            }
        }
    }

    #[test]
    fn is_class_examples() {
        let g = p1();
        // Restrictions of the degree-2 generator: 0, a, b, c at the
        // vertices p1..p4 written in the t-variables.
        let xi = table(
            &g,
            &[("p1", "0"), ("p2", "t1"), ("p3", "t2"), ("p4", "t1 + t2")],
        );
        assert!(is_class(&g, &xi).unwrap());
        let bad = table(
            &g,
            &[
                ("p1", "0"),
                ("p2", "t1"),
                ("p3", "t2"),
                ("p4", "2*t1 + 2*t2"),
            ],
        );
        assert!(!is_class(&g, &bad).unwrap());

        let g = q1();
        let eta = table(
            &g,
            &[
                ("p1", "t1*(t1 + t2)"),
                ("p2", "t2*(t1 + t2)"),
                ("p3", "0"),
                ("p4", "0"),
            ],
        );
        assert!(is_class(&g, &eta).unwrap());
    }

    #[test]
    fn class_space_basis_members_are_classes() {
        let g = q1();
        for d in (0..=6).step_by(2) {
            let basis = class_space_basis(&g, d).unwrap();
            assert_eq!(basis.len(), component_rank(&g, d).unwrap());
            for c in &basis {
                assert!(is_class(&g, c).unwrap());
                if !c.is_zero() {
                    assert_eq!(c.topological_degree().unwrap(), Some(d));
                }
            }
        }
    }

    fn p1_presentation(g: &GkmGraph) -> Presentation {
        // Standard choice with xi restricting to 0, -a, -b, -c.
        let xi = table(
            g,
            &[
                ("p1", "0"),
                ("p2", "0 - t1"),
                ("p3", "0 - t2"),
                ("p4", "0 - t1 - t2"),
            ],
        );
        Presentation {
            generators: vec![Generator {
                name: "x".to_string(),
                degree: 2,
                class: xi,
            }],
            relations: vec!["x*(x + t1)*(x + t2)*(x + t1 + t2)".to_string()],
        }
    }

    #[test]
    fn verify_p1_presentation() {
        let g = p1();
        let pres = p1_presentation(&g);
        let report = verify_presentation(&g, &pres, 12).unwrap();
        assert!(report.ok, "{:?}", report.failures);
        assert_eq!(report.spans.len(), 7);
    }

    #[test]
    fn verify_detects_broken_relation() {
        let g = p1();
        let mut pres = p1_presentation(&g);
        pres.relations = vec!["x*x".to_string()];
        let report = verify_presentation(&g, &pres, 6).unwrap();
        assert!(!report.ok);
        assert!(report.failures[0].contains("relation 0"));
    }

    #[test]
    fn verify_detects_span_gap() {
        // S with k = 0: dropping the degree-4 generator leaves a gap,
        // since x^2 reduces to (t1 + t2)*x and spans nothing new.
        let g = catalog(&CatalogId::S {
            a: w(&[1, 0]),
            b: w(&[0, 1]),
            k: 0,
        })
        .unwrap();
        let xi = table(
            &g,
            &[
                ("p1", "t1 + t2"),
                ("p2", "0"),
                ("p3", "t1 + t2"),
                ("p4", "0"),
            ],
        );
        let pres = Presentation {
            generators: vec![Generator {
                name: "x".to_string(),
                degree: 2,
                class: xi,
            }],
            relations: vec![],
        };
        let report = verify_presentation(&g, &pres, 4).unwrap();
        assert!(!report.ok);
        assert!(report.failures.iter().any(|f| f.contains("degree 4")));
        assert_eq!(
            report.spans,
            vec![
                DegreeSpan {
                    degree: 0,
                    spanned: 1,
                    expected: 1
                },
                DegreeSpan {
                    degree: 2,
                    spanned: 3,
                    expected: 3
                },
                DegreeSpan {
                    degree: 4,
                    spanned: 5,
                    expected: 6
                },
            ]
        );
    }

    #[test]
    fn ordinary_poincare_examples() {
        let g = p1();
        assert_eq!(ordinary_poincare(&g, 6).unwrap(), vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(ordinary_poincare(&g, 0).unwrap(), vec![1]);
        let g = s6();
        assert_eq!(ordinary_poincare(&g, 6).unwrap(), vec![1, 0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn quotient_route_agrees_with_betti() {
        for g in [p1(), q1(), s6()] {
            let betti = ordinary_poincare(&g, 8).unwrap();
            for d in (0..=8).step_by(2) {
                assert_eq!(ordinary_rank(&g, d).unwrap(), betti[d], "degree {d}");
            }
        }
    }

    #[test]
    fn rank_sequence_without_free_model_errors() {
        // rank_0 = 1 but rank_2 = 0 forces b_2 = -n < 0.
        assert_eq!(
            poincare_from_ranks(1, &[1, 0, 0]).unwrap_err(),
            CohomologyError::NotFree { degree: 2 }
        );
    }

    #[test]
    fn ordinary_image_examples() {
        let g = p1();
        let pres = p1_presentation(&g);
        let x = pres.generators[0].class.clone();
        // Sum of weights at each vertex: the equivariant first Chern
        // class, which is 4x plus the constant class (a + b + c).
        let c1 = {
            use crate::poly::elementary_symmetric;
            let values = (0..g.num_vertices())
                .map(|v| elementary_symmetric(&g.vertex_weights(v), 1))
                .collect();
            Class::new(&g, values).unwrap()
        };
        let coords = ordinary_image(&g, &c1, &[x.clone()]).unwrap();
        assert_eq!(coords, vec![BigRational::from_integer(4.into())]);

        // Dependent basis: x and its negative.
        let err = ordinary_image(&g, &c1, &[x.clone(), -&x]).unwrap_err();
        assert_eq!(err, CohomologyError::BasisDependent);
        // Empty basis in a degree with b_2 = 1 cannot span.
        let err = ordinary_image(&g, &c1, &[]).unwrap_err();
        assert_eq!(err, CohomologyError::BasisNotSpanning);
    }

    #[test]
    fn ordinary_image_invariant_under_boundary_shift() {
        let g = p1();
        let pres = p1_presentation(&g);
        let x = pres.generators[0].class.clone();
        let x2 = &x * &x;
        let basis = vec![x2.clone()];
        let base = ordinary_image(&g, &x2, &basis).unwrap();
        // Shift by t1 times a degree-2 class: same image.
        let shift = {
            let t1 = Class::constant(&g, Polynomial::var(2, 0));
            &x2 + &(&t1 * &x)
        };
        let shifted = ordinary_image(&g, &shift, &basis).unwrap();
        assert_eq!(base, shifted);
    }

    #[test]
    fn evaluate_expression_rejects_unknown_names() {
        let g = p1();
        let env = BTreeMap::new();
        let err = evaluate_class_expression(&g, &env, "y + t1").unwrap_err();
        assert!(matches!(
            err,
            CohomologyError::Expr(ExprError::UnknownIdentifier(_))
        ));
    }

    #[test]
    fn presentation_json_round_trip() {
        let g = p1();
        let pres = p1_presentation(&g);
        let text = pres.to_json_value(&g).to_string();
        let parsed = Presentation::from_json(&g, &text).unwrap();
        assert_eq!(parsed.generators[0].name, "x");
        assert_eq!(parsed.generators[0].class, pres.generators[0].class);
        assert_eq!(parsed.relations, pres.relations);
        let report = verify_presentation(&g, &parsed, 12).unwrap();
        assert!(report.ok);
    }
}
