//! Finite-dimensional commutative unital complex algebras given by structure
//! constants, and their elements.
//!
//! An algebra of dimension `n` is stored as the tensor `c[i][j][k]` with
//! `e_i * e_j = sum_k c[i][j][k] e_k`, together with the coefficient vector of
//! its unit. Every element carries the [`AlgebraId`] fingerprint of the
//! algebra it was built for so that mixing elements of different algebras is
//! caught.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Axiom, Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ONE, ZERO};

pub const COMMUTATIVITY_BOUND: f64 = 1e-12;
pub const ASSOCIATIVITY_BOUND: f64 = 1e-10;
pub const UNIT_BOUND: f64 = 1e-10;
pub const SEMISIMPLE_TOL: f64 = 1e-8;

/// Fingerprint of an algebra's structure constants and unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AlgebraId(pub u64);

/// Axiom residuals of a structure tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub commutativity: f64,
    pub associativity: f64,
    pub unit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Algebra {
    basis: Vec<String>,
    structure: Vec<C64>,
    unit: Vec<C64>,
    id: AlgebraId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    coeffs: Vec<C64>,
    algebra: AlgebraId,
}

/// Outcome of the trace-form semisimplicity test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Semisimplicity {
    pub semisimple: bool,
    /// Singular values of the trace form, descending.
    pub singular_values: Vec<f64>,
}

fn index(dim: usize, i: usize, j: usize, k: usize) -> usize {
    (i * dim + j) * dim + k
}

fn tensor_mul(dim: usize, structure: &[C64], a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; dim];
    for (i, &ai) in a.iter().enumerate() {
        if ai == ZERO {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj == ZERO {
                continue;
            }
            let w = ai * bj;
            let row = &structure[index(dim, i, j, 0)..index(dim, i, j, 0) + dim];
            for (o, &cijk) in out.iter_mut().zip(row) {
                *o += w * cijk;
            }
        }
    }
    out
}

/// Computes the axiom residuals of a raw structure tensor and rejects it when
/// any residual exceeds its bound.
pub fn validate_algebra(dim: usize, structure: &[C64], unit: &[C64]) -> Result<Diagnostics> {
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    if structure.len() != dim * dim * dim {
        return Err(Error::DimensionMismatch { expected: dim * dim * dim, found: structure.len() });
    }
    if unit.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: unit.len() });
    }

    let mut commutativity = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let r = (structure[index(dim, i, j, k)] - structure[index(dim, j, i, k)]).norm();
                commutativity = commutativity.max(r);
            }
        }
    }

    let basis_vec = |i: usize| {
        let mut v = vec![ZERO; dim];
        v[i] = ONE;
        v
    };
    let products: Vec<Vec<Vec<C64>>> = (0..dim)
        .map(|i| (0..dim).map(|j| structure[index(dim, i, j, 0)..index(dim, i, j, 0) + dim].to_vec()).collect())
        .collect();

    let mut associativity = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            for l in 0..dim {
                let left = tensor_mul(dim, structure, &products[i][j], &basis_vec(l));
                let right = tensor_mul(dim, structure, &basis_vec(i), &products[j][l]);
                associativity = associativity.max(linalg::sup_distance(&left, &right));
            }
        }
    }

    let mut unit_residual = 0.0f64;
    for i in 0..dim {
        let e = basis_vec(i);
        let left = tensor_mul(dim, structure, unit, &e);
        let right = tensor_mul(dim, structure, &e, unit);
        unit_residual = unit_residual.max(linalg::sup_distance(&left, &e)).max(linalg::sup_distance(&right, &e));
    }

    let diagnostics = Diagnostics { commutativity, associativity, unit: unit_residual };
    for (axiom, residual, bound) in [
        (Axiom::Commutativity, commutativity, COMMUTATIVITY_BOUND),
        (Axiom::Associativity, associativity, ASSOCIATIVITY_BOUND),
        (Axiom::Unit, unit_residual, UNIT_BOUND),
    ] {
        // NaN must be rejected too
        if !(residual <= bound) {
            return Err(Error::AxiomViolation { axiom, max_residual: residual });
        }
    }
    Ok(diagnostics)
}

fn fingerprint(structure: &[C64], unit: &[C64]) -> AlgebraId {
    let mut h = DefaultHasher::new();
    unit.len().hash(&mut h);
    for z in structure.iter().chain(unit) {
        z.re.to_bits().hash(&mut h);
        z.im.to_bits().hash(&mut h);
    }
    AlgebraId(h.finish())
}

impl Algebra {
    /// Builds and validates an algebra. `structure` is the flattened tensor
    /// `c[i][j][k]` in row-major order.
    pub fn new(basis: Vec<String>, structure: Vec<C64>, unit: Vec<C64>) -> Result<Self> {
        let dim = basis.len();
        validate_algebra(dim, &structure, &unit)?;
        let id = fingerprint(&structure, &unit);
        Ok(Self { basis, structure, unit, id })
    }

    /// Builds an algebra from a product rule on basis indices.
    pub fn from_products(
        basis: Vec<String>,
        unit: Vec<C64>,
        product: impl Fn(usize, usize) -> Vec<C64>,
    ) -> Result<Self> {
        let dim = basis.len();
        let mut structure = vec![ZERO; dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let p = product(i, j);
                if p.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
                }
                structure[index(dim, i, j, 0)..index(dim, i, j, 0) + dim].copy_from_slice(&p);
            }
        }
        Self::new(basis, structure, unit)
    }

    /// The one-dimensional algebra `C`.
    pub fn scalar() -> Self {
        Self::new(vec!["1".into()], vec![ONE], vec![ONE]).expect("C is a valid algebra")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn id(&self) -> AlgebraId {
        self.id
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    /// Structure constant `c[i][j][k]`.
    pub fn structure(&self, i: usize, j: usize, k: usize) -> C64 {
        self.structure[index(self.dim(), i, j, k)]
    }

    pub fn structure_tensor(&self) -> &[C64] {
        &self.structure
    }

    pub fn unit_coeffs(&self) -> &[C64] {
        &self.unit
    }

    pub fn diagnostics(&self) -> Diagnostics {
        validate_algebra(self.dim(), &self.structure, &self.unit).expect("validated at construction")
    }

    pub fn element(&self, coeffs: Vec<C64>) -> Result<Element> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: coeffs.len() });
        }
        Ok(Element { coeffs, algebra: self.id })
    }

    pub fn unit(&self) -> Element {
        Element { coeffs: self.unit.clone(), algebra: self.id }
    }

    pub fn zero(&self) -> Element {
        Element { coeffs: vec![ZERO; self.dim()], algebra: self.id }
    }

    /// `lambda * 1`.
    pub fn scalar_element(&self, lambda: C64) -> Element {
        self.unit().scale(lambda)
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut coeffs = vec![ZERO; self.dim()];
        coeffs[i] = ONE;
        Element { coeffs, algebra: self.id }
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        (0..self.dim()).map(|i| self.basis_element(i)).collect()
    }

    fn check(&self, a: &Element) -> Result<()> {
        if a.algebra != self.id {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(Element { coeffs: tensor_mul(self.dim(), &self.structure, &a.coeffs, &b.coeffs), algebra: self.id })
    }

    /// Matrix of `x -> a * x` in the coefficient basis.
    pub fn regular_repr(&self, a: &Element) -> Result<CMatrix> {
        self.check(a)?;
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai == ZERO {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] += ai * self.structure(i, j, k);
                }
            }
        }
        Ok(m)
    }

    /// Inverse of `a`, or `NotInvertible` when the smallest singular value of
    /// the regular representation is at most `rel_tol * max(||L_a||, ||1||)`.
    pub fn invert(&self, a: &Element, rel_tol: f64) -> Result<Element> {
        let l = self.regular_repr(a)?;
        let sv = linalg::singular_values(&l);
        let smax = sv.first().copied().unwrap_or(0.0);
        let smin = sv.last().copied().unwrap_or(0.0);
        if !(smin > rel_tol * smax.max(1.0)) {
            return Err(Error::NotInvertible { smallest_singular_value: smin });
        }
        let rhs = CVector::from_column_slice(&self.unit);
        let lu = l.clone().lu();
        let mut x = lu.solve(&rhs).ok_or(Error::NotInvertible { smallest_singular_value: smin })?;
        for _ in 0..3 {
            let r = &rhs - &l * &x;
            if r.norm() == 0.0 {
                break;
            }
            x += lu.solve(&r).ok_or(Error::NotInvertible { smallest_singular_value: smin })?;
        }
        let inv = Element { coeffs: x.iter().copied().collect(), algebra: self.id };
        let residual = self.norm(&(self.mul(a, &inv)? - self.unit()));
        if residual > 1e-9 {
            return Err(Error::NotInvertible { smallest_singular_value: smin });
        }
        Ok(inv)
    }

    /// Trace form `B(e_i, e_j) = tr(L_{e_i} L_{e_j})`.
    pub fn trace_form(&self) -> CMatrix {
        let n = self.dim();
        let reps: Vec<CMatrix> =
            (0..n).map(|i| self.regular_repr(&self.basis_element(i)).expect("own element")).collect();
        CMatrix::from_fn(n, n, |i, j| (&reps[i] * &reps[j]).trace())
    }

    /// Semisimplicity via nonsingularity of the trace form.
    pub fn is_semisimple(&self, tol: f64) -> Semisimplicity {
        let sv = linalg::singular_values(&self.trace_form());
        let smax = sv.first().copied().unwrap_or(0.0);
        let smin = sv.last().copied().unwrap_or(0.0);
        Semisimplicity { semisimple: smax > 0.0 && smin > tol * smax, singular_values: sv }
    }

    /// Operator 2-norm of the regular representation.
    pub fn norm(&self, a: &Element) -> f64 {
        linalg::spectral_norm(&self.regular_repr(a).expect("element of this algebra"))
    }
}

impl Element {
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn algebra_id(&self) -> AlgebraId {
        self.algebra
    }

    pub fn scale(&self, s: C64) -> Element {
        Element { coeffs: self.coeffs.iter().map(|z| z * s).collect(), algebra: self.algebra }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn zip_with(a: &Element, b: &Element, op: impl Fn(C64, C64) -> C64) -> Element {
    assert_eq!(a.algebra, b.algebra, "elements of different algebras");
    Element { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| op(x, y)).collect(), algebra: a.algebra }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-ONE)
    }
}

impl Mul<C64> for &Element {
    type Output = Element;
    fn mul(self, s: C64) -> Element {
        self.scale(s)
    }
}
