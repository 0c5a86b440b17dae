//! Algebra-valued functions on a finite point set.
//!
//! For a finite set `X` and an algebra `A`, the algebra `C(X, A)` of all
//! functions `X -> A` is realized as the direct product `A^X` (see
//! [`make_cxa`]), with coefficient vectors laid out point by point. Scalar
//! functions embed into it through `lambda -> lambda 1`.
//!
//! The vector-valued spectrum `SP(f)` is the set of scalar functions `lambda`
//! for which `1` is not in the ideal generated by `lambda(x) 1 - f(x)`. It is
//! computed here both from characters (`{phi o f}`) and by the ideal test,
//! and non-membership is witnessed by an explicit [`Certificate`].

use serde::Serialize;

use crate::algebra::{Algebra, AlgebraId, Element};
use crate::error::{Error, LiftFailure, Result};
use crate::gallery;
use crate::gelfand::{self, Character, CharacterSet};
use crate::linalg::{self, CMatrix, CVector, C64, ZERO};
use crate::set::{SpectralPoint, SpectrumSet};
use crate::tolerance::Tolerances;

/// Largest realization `|X| * dim(A)` built by [`make_cxa`] by default.
pub const DEFAULT_SIZE_CAP: usize = 64;
/// Coefficients whose norm falls below this are dropped from certificates.
pub const PRUNE_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteSpace {
    points: Vec<String>,
}

impl FiniteSpace {
    pub fn new(points: Vec<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSpace("a point set needs at least one point".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidSpace(format!("duplicate point label {p:?}")));
            }
        }
        Ok(Self { points })
    }

    /// Points `x0, x1, ..., x{n-1}`.
    pub fn indexed(n: usize) -> Self {
        Self { points: (0..n.max(1)).map(|i| format!("x{i}")).collect() }
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }
}

/// A function `X -> C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFunction {
    space: FiniteSpace,
    values: Vec<C64>,
}

impl ScalarFunction {
    pub fn new(space: FiniteSpace, values: Vec<C64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch { expected: space.len(), found: values.len() });
        }
        Ok(Self { space, values })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// `||lambda||_X`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, op: impl Fn(C64) -> C64) -> Self {
        Self { space: self.space.clone(), values: self.values.iter().map(|&z| op(z)).collect() }
    }

    pub fn zip_with(&self, other: &Self, op: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect(),
        }
    }
}

impl SpectralPoint for ScalarFunction {
    fn distance(&self, other: &Self) -> f64 {
        linalg::sup_distance(&self.values, &other.values)
    }
}

/// A function `X -> A`.
#[derive(Debug, Clone, PartialEq)]
pub struct AValuedFunction {
    space: FiniteSpace,
    algebra: AlgebraId,
    values: Vec<Element>,
}

impl AValuedFunction {
    pub fn new(space: FiniteSpace, alg: &Algebra, values: Vec<Element>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch { expected: space.len(), found: values.len() });
        }
        if values.iter().any(|v| v.algebra_id() != alg.id()) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self { space, algebra: alg.id(), values })
    }

    /// The constant function `x -> a`.
    pub fn constant(space: &FiniteSpace, alg: &Algebra, a: &Element) -> Result<Self> {
        Self::new(space.clone(), alg, vec![a.clone(); space.len()])
    }

    /// `x -> lambda(x) 1`.
    pub fn embed(lambda: &ScalarFunction, alg: &Algebra) -> Self {
        let values = lambda.values.iter().map(|&l| alg.scalar_element(l)).collect();
        Self { space: lambda.space.clone(), algebra: alg.id(), values }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn algebra_id(&self) -> AlgebraId {
        self.algebra
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Element {
        &self.values[i]
    }

    /// `phi o f`.
    pub fn compose(&self, phi: &Character) -> ScalarFunction {
        ScalarFunction { space: self.space.clone(), values: self.values.iter().map(|v| phi.eval(v)).collect() }
    }

    pub fn zip_with(&self, other: &Self, op: impl Fn(&Element, &Element) -> Element) -> Self {
        assert_eq!(self.algebra, other.algebra, "functions into different algebras");
        Self {
            space: self.space.clone(),
            algebra: self.algebra,
            values: self.values.iter().zip(&other.values).map(|(a, b)| op(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            space: self.space.clone(),
            algebra: self.algebra,
            values: self.values.iter().map(|v| v.scale(s)).collect(),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, alg: &Algebra, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::InvalidSpace("functions live on different point sets".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| alg.mul(a, b)).collect::<Result<_>>()?;
        Ok(Self { space: self.space.clone(), algebra: self.algebra, values })
    }

    /// Coefficient vector in the realization of `C(X, A)`.
    pub fn stacked(&self) -> Vec<C64> {
        self.values.iter().flat_map(|v| v.coeffs().iter().copied()).collect()
    }

    pub fn to_cxa(&self, cxa: &Algebra) -> Result<Element> {
        cxa.element(self.stacked())
    }

    pub fn from_stacked(space: &FiniteSpace, alg: &Algebra, coeffs: &[C64]) -> Result<Self> {
        let n = alg.dim();
        if coeffs.len() != n * space.len() {
            return Err(Error::DimensionMismatch { expected: n * space.len(), found: coeffs.len() });
        }
        let values = coeffs.chunks(n).map(|c| alg.element(c.to_vec())).collect::<Result<_>>()?;
        Self::new(space.clone(), alg, values)
    }
}

fn check_function(alg: &Algebra, f: &AValuedFunction) -> Result<()> {
    if f.algebra != alg.id() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

/// `C(X, A)` as the product algebra `A^X`, of dimension `|X| dim(A)`.
pub fn make_cxa(alg: &Algebra, space: &FiniteSpace, cap: usize) -> Result<Algebra> {
    let size = alg.dim() * space.len();
    if size > cap {
        return Err(Error::SizeOverflow { size, cap });
    }
    let factors: Vec<(String, &Algebra)> = space.points().iter().map(|p| (p.clone(), alg)).collect();
    gallery::direct_product(&factors)
}

/// `C(X) = C^X`, the scalar functions, with the point-indicator basis.
pub fn scalar_function_algebra(space: &FiniteSpace) -> Algebra {
    make_cxa(&Algebra::scalar(), space, usize::MAX).expect("no cap")
}

/// `||f||_X = max_x ||f(x)||`.
pub fn uniform_norm(alg: &Algebra, f: &AValuedFunction) -> f64 {
    f.values.iter().map(|v| alg.norm(v)).fold(0.0, f64::max)
}

/// `SP(f) = {phi o f : phi in M(A)}`, identified at `dedup` in sup norm.
pub fn vv_spectrum_chars(f: &AValuedFunction, chars: &CharacterSet, dedup: f64) -> SpectrumSet<ScalarFunction> {
    SpectrumSet::new(chars.characters().iter().map(|phi| f.compose(phi)), dedup)
}

/// `phi -> phi o f` over the character set, in its order.
pub fn f_tilde(f: &AValuedFunction, chars: &CharacterSet) -> Vec<ScalarFunction> {
    chars.characters().iter().map(|phi| f.compose(phi)).collect()
}

/// `f~` as a `C(X)`-valued function on the finite set `M(A)`, whose points are
/// labelled `phi0, phi1, ...`. Returns the algebra `C(X)` with it.
pub fn f_tilde_function(f: &AValuedFunction, chars: &CharacterSet) -> (Algebra, AValuedFunction) {
    let frak = scalar_function_algebra(&f.space);
    let labels =
        FiniteSpace::new((0..chars.len().max(1)).map(|i| format!("phi{i}")).collect()).expect("distinct labels");
    let values = f_tilde(f, chars).into_iter().map(|l| frak.element(l.values).expect("|X| coordinates")).collect();
    let func = AValuedFunction::new(labels, &frak, values).expect("one value per character");
    (frak, func)
}

/// Both routes to `lambda in SP(f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Distance from `1` to the ideal generated by `lambda(x) 1 - f(x)`.
    pub residual: f64,
    pub ideal_rank: usize,
    /// `min_phi ||phi o f - lambda||_X`.
    pub character_distance: f64,
}

fn generators(alg: &Algebra, f: &AValuedFunction, lambda: &ScalarFunction) -> Vec<Element> {
    f.values.iter().zip(&lambda.values).map(|(v, &l)| &alg.scalar_element(l) - v).collect()
}

fn check_lambda(f: &AValuedFunction, lambda: &ScalarFunction) -> Result<()> {
    if f.space != lambda.space {
        return Err(Error::InvalidSpace("function and lambda live on different point sets".into()));
    }
    Ok(())
}

/// Decides `lambda in SP(f)` by the ideal test over all of `X`, and checks the
/// answer against the character image.
pub fn vv_spectrum_membership(
    alg: &Algebra,
    f: &AValuedFunction,
    lambda: &ScalarFunction,
    chars: &CharacterSet,
    tol: &Tolerances,
) -> Result<Membership> {
    check_function(alg, f)?;
    check_lambda(f, lambda)?;
    let scale = gelfand::shift_scale(alg, lambda.values(), f.values());
    let test = gelfand::proper_ideal(alg, &generators(alg, f, lambda), scale, tol)?;
    let character_distance =
        chars.characters().iter().map(|phi| f.compose(phi).distance(lambda)).fold(f64::INFINITY, f64::min);
    let by_characters = character_distance <= tol.dedup;
    if test.proper != by_characters {
        return Err(Error::OracleDisagreement(format!(
            "ideal test says member={}, character image says member={by_characters} (distance {character_distance:e})",
            test.proper
        )));
    }
    Ok(Membership { member: test.proper, residual: test.residual, ideal_rank: test.rank, character_distance })
}

/// Witness `1 = sum_i a_i (lambda(x_i) 1 - f(x_i))` of `lambda notin SP(f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub points: Vec<String>,
    pub coefficients: Vec<Element>,
    pub residual: f64,
}

impl Certificate {
    /// Recomputes `||1 - sum_i a_i (lambda(x_i) 1 - f(x_i))||` with the
    /// algebra's multiplication.
    pub fn evaluate(&self, alg: &Algebra, f: &AValuedFunction, lambda: &ScalarFunction) -> Result<f64> {
        check_function(alg, f)?;
        check_lambda(f, lambda)?;
        let mut total = alg.zero();
        for (label, a) in self.points.iter().zip(&self.coefficients) {
            let x = f
                .space
                .index_of(label)
                .ok_or_else(|| Error::InvalidSpace(format!("certificate point {label:?} not in the space")))?;
            let g = &alg.scalar_element(lambda.values[x]) - &f.values[x];
            total = &total + &alg.mul(a, &g)?;
        }
        Ok(alg.norm(&(&alg.unit() - &total)))
    }

    /// `sum_i ||a_i||`.
    pub fn coefficient_mass(&self, alg: &Algebra) -> f64 {
        self.coefficients.iter().map(|a| alg.norm(a)).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertificateOutcome {
    Certificate(Certificate),
    /// `lambda = phi o f` for the character at this index of the set.
    InSpectrum {
        character: usize,
    },
}

fn solve_certificate(alg: &Algebra, gens: &[(usize, Element)], tol: &Tolerances) -> Result<(Vec<Element>, f64)> {
    let n = alg.dim();
    let mut m = CMatrix::zeros(n, n * gens.len());
    for (c, (_, g)) in gens.iter().enumerate() {
        m.columns_mut(c * n, n).copy_from(&alg.regular_repr(g)?);
    }
    let rhs = CVector::from_column_slice(alg.unit_coeffs());
    let sol = linalg::least_squares(&m, &rhs, tol.rank);
    let residual_vec: Vec<C64> = (&rhs - &m * &sol).iter().copied().collect();
    let residual = alg.norm(&alg.element(residual_vec)?);
    let coeffs =
        (0..gens.len()).map(|c| alg.element(sol.rows(c * n, n).iter().copied().collect())).collect::<Result<_>>()?;
    Ok((coeffs, residual))
}

/// Produces a certificate of `lambda notin SP(f)`, or the character that puts
/// `lambda` in the spectrum.
///
/// The system `sum_x a_x (lambda(x) 1 - f(x)) = 1` is solved by least squares
/// over all of `A^X`; points with negligible coefficients are then dropped
/// and the remaining points removed greedily while a solution survives.
pub fn certificate(
    alg: &Algebra,
    f: &AValuedFunction,
    lambda: &ScalarFunction,
    chars: &CharacterSet,
    tol: &Tolerances,
) -> Result<CertificateOutcome> {
    let membership = vv_spectrum_membership(alg, f, lambda, chars, tol)?;
    if membership.member {
        let character = chars
            .characters()
            .iter()
            .enumerate()
            .map(|(i, phi)| (i, f.compose(phi).distance(lambda)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
            .expect("member implies a nearby character");
        return Ok(CertificateOutcome::InSpectrum { character });
    }

    let gens = generators(alg, f, lambda);
    let mut active: Vec<(usize, Element)> = gens.iter().cloned().enumerate().collect();
    let (mut coeffs, mut residual) = solve_certificate(alg, &active, tol)?;
    let classify = |residual: f64| -> Result<()> {
        if residual <= tol.certificate {
            Ok(())
        } else if tol.is_ambiguous(residual, tol.certificate) {
            Err(Error::NumericalFailure { residual })
        } else {
            Err(Error::OracleDisagreement(format!(
                "ideal test excludes lambda but no certificate exists (residual {residual:e})"
            )))
        }
    };
    classify(residual)?;

    let negligible: Vec<usize> =
        coeffs.iter().zip(&active).filter(|(a, _)| alg.norm(a) < PRUNE_THRESHOLD).map(|(_, (x, _))| *x).collect();
    if !negligible.is_empty() && negligible.len() < active.len() {
        let trial: Vec<(usize, Element)> = active.iter().filter(|(x, _)| !negligible.contains(x)).cloned().collect();
        let (c, r) = solve_certificate(alg, &trial, tol)?;
        if r <= tol.certificate {
            active = trial;
            coeffs = c;
            residual = r;
        }
    }

    let mut order: Vec<usize> = (0..active.len()).collect();
    order.sort_by(|&i, &j| alg.norm(&coeffs[i]).total_cmp(&alg.norm(&coeffs[j])));
    let mut drop: Vec<usize> = order.iter().map(|&i| active[i].0).collect();
    drop.reverse();
    while let Some(x) = drop.pop() {
        if active.len() == 1 {
            break;
        }
        let trial: Vec<(usize, Element)> = active.iter().filter(|(y, _)| *y != x).cloned().collect();
        let (c, r) = solve_certificate(alg, &trial, tol)?;
        if r <= tol.certificate {
            active = trial;
            coeffs = c;
            residual = r;
        }
    }

    let mut cert = Certificate {
        points: active.iter().map(|(x, _)| f.space.points[*x].clone()).collect(),
        coefficients: coeffs,
        residual,
    };
    cert.residual = cert.evaluate(alg, f, lambda)?;
    classify(cert.residual)?;
    Ok(CertificateOutcome::Certificate(cert))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ACharacterKind {
    /// `f -> f(x)` for the point with this label.
    Evaluation(String),
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ACharacterResiduals {
    pub homomorphism: f64,
    pub unit: f64,
    pub compatibility: f64,
    /// Entrywise distance to the nearest evaluation homomorphism.
    pub evaluation: f64,
}

/// An algebra homomorphism `Psi: C(X, A) -> A` with `Psi(1) = 1` and
/// `phi(Psi f) = Psi(phi o f)`, as a `dim(A) x |X| dim(A)` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ACharacter {
    matrix: CMatrix,
    kind: ACharacterKind,
    residuals: ACharacterResiduals,
    space: FiniteSpace,
    algebra: AlgebraId,
}

impl ACharacter {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> &ACharacterKind {
        &self.kind
    }

    pub fn residuals(&self) -> &ACharacterResiduals {
        &self.residuals
    }

    pub fn apply(&self, alg: &Algebra, f: &AValuedFunction) -> Result<Element> {
        check_function(alg, f)?;
        if f.space != self.space {
            return Err(Error::InvalidSpace("function lives on another point set".into()));
        }
        let v = &self.matrix * CVector::from_vec(f.stacked());
        alg.element(v.iter().copied().collect())
    }

    /// The restriction to scalar functions, as the value vector of a character
    /// of `C(X)` on the point indicators, with the largest distance of
    /// `Psi(delta_x 1)` from `C 1`.
    pub fn restriction(&self, alg: &Algebra) -> (Vec<C64>, f64) {
        let unit = alg.unit_coeffs();
        let uu: C64 = unit.iter().map(|u| u.norm_sqr()).sum::<f64>().into();
        let mut worst = 0.0f64;
        let values = (0..self.space.len())
            .map(|x| {
                let mut lambda = ScalarFunction::new(self.space.clone(), vec![ZERO; self.space.len()]).expect("sized");
                lambda.values[x] = C64::new(1.0, 0.0);
                let image = self.apply(alg, &AValuedFunction::embed(&lambda, alg)).expect("same algebra");
                let coef: C64 = unit.iter().zip(image.coeffs()).map(|(u, v)| u.conj() * v).sum::<C64>() / uu;
                let off = linalg::sup_distance(image.coeffs(), alg.scalar_element(coef).coeffs());
                worst = worst.max(off);
                coef
            })
            .collect();
        (values, worst)
    }
}

fn standard_basis(alg: &Algebra, space: &FiniteSpace) -> Vec<AValuedFunction> {
    let n = alg.dim();
    (0..space.len() * n)
        .map(|c| {
            let mut coeffs = vec![ZERO; space.len() * n];
            coeffs[c] = C64::new(1.0, 0.0);
            AValuedFunction::from_stacked(space, alg, &coeffs).expect("sized")
        })
        .collect()
}

fn evaluation_matrix(n: usize, points: usize, x: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n * points);
    for i in 0..n {
        m[(i, x * n + i)] = C64::new(1.0, 0.0);
    }
    m
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn a_character_residuals(
    alg: &Algebra,
    space: &FiniteSpace,
    matrix: &CMatrix,
    chars: &CharacterSet,
) -> Result<(ACharacterResiduals, Option<usize>)> {
    let n = alg.dim();
    let apply = |f: &AValuedFunction| -> Result<Element> {
        alg.element((matrix * CVector::from_vec(f.stacked())).iter().copied().collect())
    };
    let basis = standard_basis(alg, space);
    let images = basis.iter().map(&apply).collect::<Result<Vec<_>>>()?;

    let mut homomorphism = 0.0f64;
    for p in 0..basis.len() {
        for q in p..basis.len() {
            let lhs = apply(&basis[p].mul(alg, &basis[q])?)?;
            let rhs = alg.mul(&images[p], &images[q])?;
            homomorphism = homomorphism.max(linalg::sup_distance(lhs.coeffs(), rhs.coeffs()));
        }
    }
    let one = AValuedFunction::constant(space, alg, &alg.unit())?;
    let unit = linalg::sup_distance(apply(&one)?.coeffs(), alg.unit_coeffs());

    let mut compatibility = 0.0f64;
    for phi in chars.characters() {
        for (f, image) in basis.iter().zip(&images) {
            let lhs = alg.scalar_element(phi.eval(image));
            let rhs = apply(&AValuedFunction::embed(&f.compose(phi), alg))?;
            compatibility = compatibility.max(linalg::sup_distance(lhs.coeffs(), rhs.coeffs()));
        }
    }

    let (nearest, evaluation) = (0..space.len())
        .map(|x| (x, max_abs(&(matrix - evaluation_matrix(n, space.len(), x)))))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty space");
    Ok((ACharacterResiduals { homomorphism, unit, compatibility, evaluation }, Some(nearest)))
}

fn require_semisimple(alg: &Algebra, chars: &CharacterSet, tol: &Tolerances) -> Result<()> {
    if !alg.is_semisimple(tol.rank).semisimple || chars.len() != alg.dim() {
        return Err(Error::SemisimplicityRequired);
    }
    Ok(())
}

/// Solves `phi(a) = values[phi]` for all characters; `None` when inconsistent
/// beyond `tol.certificate`.
fn reconstruct(alg: &Algebra, chars: &CharacterSet, values: &[C64], tol: &Tolerances) -> Result<(Element, f64)> {
    let phi = chars.matrix();
    let rhs = CVector::from_column_slice(values);
    let a = linalg::least_squares(&phi, &rhs, tol.rank);
    let residual = (&phi * &a - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok((alg.element(a.iter().copied().collect())?, residual))
}

/// Lifts a character `psi` of `C(X)` to the A-character `Psi` of `C(X, A)`
/// with `phi(Psi f) = psi(phi o f)` for every `phi in M(A)`.
///
/// `f_basis` must span `C(X, A)`; `Psi` is determined on it by inverting the
/// Gelfand transform of `A`, which requires `A` to be semisimple.
pub fn lift_character(
    alg: &Algebra,
    space: &FiniteSpace,
    psi: &Character,
    f_basis: &[AValuedFunction],
    chars: &CharacterSet,
    tol: &Tolerances,
) -> Result<ACharacter> {
    require_semisimple(alg, chars, tol)?;
    if psi.algebra_id() != scalar_function_algebra(space).id() {
        return Err(Error::AlgebraMismatch);
    }
    let n = alg.dim();
    let big = n * space.len();
    let mut stacked = CMatrix::zeros(big, f_basis.len());
    let mut images = CMatrix::zeros(n, f_basis.len());
    for (c, f) in f_basis.iter().enumerate() {
        check_function(alg, f)?;
        if f.space != *space {
            return Err(Error::InvalidSpace("basis function lives on another point set".into()));
        }
        let targets: Vec<C64> = chars.characters().iter().map(|phi| psi.eval_coeffs(f.compose(phi).values())).collect();
        let (a, residual) = reconstruct(alg, chars, &targets, tol)?;
        if residual > tol.certificate {
            return Err(Error::LiftFailure(LiftFailure::NoSolution { residual }));
        }
        stacked.column_mut(c).copy_from_slice(&f.stacked());
        images.column_mut(c).copy_from_slice(a.coeffs());
    }
    let rank = linalg::rank(&stacked, tol.rank);
    if rank != big {
        return Err(Error::LiftFailure(LiftFailure::NotSpanning { rank, dim: big }));
    }
    let pinv = linalg::pseudo_inverse(&stacked, tol.rank);
    let matrix = &images * pinv;
    let consistency = max_abs(&(&matrix * &stacked - &images));
    if consistency > tol.certificate {
        return Err(Error::LiftFailure(LiftFailure::NoSolution { residual: consistency }));
    }

    let (residuals, nearest) = a_character_residuals(alg, space, &matrix, chars)?;
    for (law, residual) in
        [("homomorphism", residuals.homomorphism), ("unit", residuals.unit), ("compatibility", residuals.compatibility)]
    {
        if !(residual <= tol.residual) {
            return Err(Error::LiftFailure(LiftFailure::InvariantViolated { law, residual }));
        }
    }
    let kind = match nearest {
        Some(x) if residuals.evaluation <= tol.residual => ACharacterKind::Evaluation(space.points[x].clone()),
        _ => ACharacterKind::General,
    };
    Ok(ACharacter { matrix, kind, residuals, space: space.clone(), algebra: alg.id() })
}

/// All A-characters of `C(X, A)`: every character of `C(X)` lifted through
/// [`lift_character`]. Each must come out as an evaluation homomorphism.
/// The result is ordered by evaluation point.
pub fn enumerate_a_characters(
    alg: &Algebra,
    space: &FiniteSpace,
    chars_a: &CharacterSet,
    chars_frak: &CharacterSet,
    tol: &Tolerances,
) -> Result<Vec<ACharacter>> {
    let basis = standard_basis(alg, space);
    let mut out = chars_frak
        .characters()
        .iter()
        .map(|psi| lift_character(alg, space, psi, &basis, chars_a, tol))
        .collect::<Result<Vec<_>>>()?;
    for psi in &out {
        if psi.kind == ACharacterKind::General {
            return Err(Error::OracleDisagreement(format!(
                "lifted A-character is not an evaluation (distance {:e})",
                psi.residuals.evaluation
            )));
        }
    }
    out.sort_by_key(|psi| match &psi.kind {
        ACharacterKind::Evaluation(label) => space.index_of(label).unwrap_or(usize::MAX),
        ACharacterKind::General => usize::MAX,
    });
    Ok(out)
}

/// `SP_A(f)` together with the chain `f(X) <= {Psi(f)} <= SP_A(f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AValuedSpectrum {
    pub set: Vec<Element>,
    pub a_character_images: Vec<Element>,
    pub range: Vec<Element>,
    /// `sup_{r in f(X)} dist(r, {Psi(f)})`.
    pub range_excess: f64,
    /// `sup_{a in {Psi(f)}} dist(a, SP_A(f))`.
    pub image_excess: f64,
    /// Hausdorff distance between `{Psi(f)}` and `SP_A(f)`.
    pub image_hausdorff: f64,
    /// Points of `SP(f~)` examined, and those with no preimage in `A`.
    pub candidates: usize,
    pub excluded: usize,
}

/// `SP_A(f) = {a in A : a^ in SP(f~)}`.
pub fn a_valued_spectrum(
    alg: &Algebra,
    f: &AValuedFunction,
    chars_a: &CharacterSet,
    chars_frak: &CharacterSet,
    tol: &Tolerances,
) -> Result<AValuedSpectrum> {
    check_function(alg, f)?;
    require_semisimple(alg, chars_a, tol)?;
    let dist = |a: &Element, b: &Element| alg.norm(&(a - b));

    let (frak, tilde) = f_tilde_function(f, chars_a);
    let sp_tilde = vv_spectrum_chars(&tilde, chars_frak, tol.dedup);
    for lambda in sp_tilde.points() {
        let m = vv_spectrum_membership(&frak, &tilde, lambda, chars_frak, tol)?;
        if !m.member {
            return Err(Error::OracleDisagreement("SP(f~) point rejected by the ideal test".into()));
        }
    }

    let mut candidates = Vec::new();
    let mut excluded = 0;
    for lambda in sp_tilde.points() {
        let (a, residual) = reconstruct(alg, chars_a, lambda.values(), tol)?;
        if residual <= tol.certificate {
            candidates.push(a);
        } else {
            excluded += 1;
        }
    }
    let set = SpectrumSet::with_distance(candidates, tol.dedup, dist).into_points();

    let a_chars = enumerate_a_characters(alg, &f.space, chars_a, chars_frak, tol)?;
    let images = a_chars.iter().map(|psi| psi.apply(alg, f)).collect::<Result<Vec<_>>>()?;
    let images = SpectrumSet::with_distance(images, tol.dedup, dist).into_points();
    let range = SpectrumSet::with_distance(f.values.clone(), tol.dedup, dist).into_points();

    let range_excess = linalg::excess(&range, &images, dist);
    let image_excess = linalg::excess(&images, &set, dist);
    if !(range_excess <= tol.dedup && image_excess <= tol.dedup) {
        return Err(Error::OracleDisagreement(format!(
            "inclusion chain broken: f(X) excess {range_excess:e}, Psi(f) excess {image_excess:e}"
        )));
    }
    let image_hausdorff = linalg::hausdorff(&images, &set, dist);
    Ok(AValuedSpectrum {
        set,
        a_character_images: images,
        range,
        range_excess,
        image_excess,
        image_hausdorff,
        candidates: sp_tilde.len(),
        excluded,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// Dimension of the generated subalgebra.
    pub dim: usize,
    /// Largest distance of an embedded `phi o f` from the subalgebra.
    pub worst_escape: f64,
}

/// Closes `span(generators)` under pointwise multiplication, checks that the
/// result is a function algebra (contains the constants, separates points),
/// and tests `phi o f in` it for every generator `f` and character `phi`.
pub fn is_admissible(
    alg: &Algebra,
    space: &FiniteSpace,
    generators: &[AValuedFunction],
    chars: &CharacterSet,
    tol: &Tolerances,
) -> Result<Admissibility> {
    if generators.is_empty() {
        return Err(Error::InvalidArgument("no generators".into()));
    }
    for g in generators {
        check_function(alg, g)?;
        if g.space != *space {
            return Err(Error::InvalidSpace("generator lives on another point set".into()));
        }
    }
    let big = alg.dim() * space.len();
    let to_matrix = |fs: &[AValuedFunction]| {
        let mut m = CMatrix::zeros(big, fs.len());
        for (c, f) in fs.iter().enumerate() {
            m.column_mut(c).copy_from_slice(&f.stacked());
        }
        m
    };
    let mut basis = linalg::column_space(&to_matrix(generators), tol.rank);
    loop {
        let funcs: Vec<AValuedFunction> = (0..basis.ncols())
            .map(|c| AValuedFunction::from_stacked(space, alg, basis.column(c).as_slice()).expect("sized"))
            .collect();
        let mut all = funcs.clone();
        for i in 0..funcs.len() {
            for j in i..funcs.len() {
                all.push(funcs[i].mul(alg, &funcs[j])?);
            }
        }
        let next = linalg::column_space(&to_matrix(&all), tol.rank);
        let grown = next.ncols() > basis.ncols();
        basis = next;
        if !grown {
            break;
        }
    }
    let span = |v: &[C64]| {
        let v = CVector::from_column_slice(v);
        let proj = &basis * (basis.adjoint() * &v);
        (&v - proj).norm() / v.norm().max(1.0)
    };

    for a in alg.basis_elements() {
        if span(&AValuedFunction::constant(space, alg, &a)?.stacked()) > tol.residual {
            return Err(Error::NotAFunctionAlgebra(crate::error::FunctionAlgebraDefect::ConstantsMissing));
        }
    }
    let n = alg.dim();
    for x in 0..space.len() {
        for y in x + 1..space.len() {
            let separated = (0..basis.ncols()).any(|c| {
                let col = basis.column(c);
                (0..n).any(|i| (col[x * n + i] - col[y * n + i]).norm() > tol.residual)
            });
            if !separated {
                return Err(Error::NotAFunctionAlgebra(crate::error::FunctionAlgebraDefect::PointsNotSeparated));
            }
        }
    }

    let mut worst_escape = 0.0f64;
    for g in generators {
        for phi in chars.characters() {
            let embedded = AValuedFunction::embed(&g.compose(phi), alg);
            worst_escape = worst_escape.max(span(&embedded.stacked()));
        }
    }
    Ok(Admissibility { admissible: worst_escape <= tol.residual, dim: basis.ncols(), worst_escape })
}
