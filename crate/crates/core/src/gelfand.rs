//! Characters, Gelfand transforms, spectra and joint spectra.
//!
//! Every spectrum is available through two independent routes: as the image
//! of the character space, and through ideal membership (`1` lies in the
//! ideal generated by `lambda_i 1 - a_i` or it does not). The routines that
//! return spectra run both and fail with [`Error::OracleDisagreement`] when
//! they differ.

use rand::Rng;
use serde::Serialize;

use crate::algebra::{Algebra, AlgebraId, Element};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::random;
use crate::set::SpectrumSet;
use crate::tolerance::Tolerances;

/// Extra seeds tried when the generic element has colliding eigenvalues.
pub const CHARACTER_RETRIES: usize = 5;
/// Random non-member probes per joint-spectrum cross-check.
pub const PROBES_PER_INSTANCE: usize = 32;
/// Gaussian radius of the probes.
pub const PROBE_RADIUS: f64 = 0.5;

const NEWTON_ITERATIONS: usize = 40;

/// A multiplicative linear functional, stored by its values on the basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Character {
    values: Vec<C64>,
    #[serde(skip)]
    algebra: AlgebraId,
}

impl Character {
    /// Wraps a value vector without checking multiplicativity; see
    /// [`Character::residual`].
    pub fn new(alg: &Algebra, values: Vec<C64>) -> Result<Self> {
        if values.len() != alg.dim() {
            return Err(Error::DimensionMismatch { expected: alg.dim(), found: values.len() });
        }
        Ok(Self { values, algebra: alg.id() })
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn algebra_id(&self) -> AlgebraId {
        self.algebra
    }

    /// `phi(a)`.
    ///
    /// # Panics
    ///
    /// Panics if `a` belongs to another algebra.
    pub fn eval(&self, a: &Element) -> C64 {
        assert_eq!(a.algebra_id(), self.algebra, "element of a different algebra");
        self.eval_coeffs(a.coeffs())
    }

    pub fn eval_coeffs(&self, coeffs: &[C64]) -> C64 {
        coeffs.iter().zip(&self.values).map(|(a, p)| a * p).sum()
    }

    /// Max of `|phi(1) - 1|` and `|phi(e_i) phi(e_j) - sum_k c_ijk phi(e_k)|`.
    pub fn residual(&self, alg: &Algebra) -> f64 {
        multiplicativity_residual(alg, &self.values)
    }
}

fn multiplicativity_residual(alg: &Algebra, phi: &[C64]) -> f64 {
    let n = alg.dim();
    let mut worst = (dot(phi, alg.unit_coeffs()) - 1.0).norm();
    for i in 0..n {
        for j in i..n {
            let lin: C64 = (0..n).map(|k| alg.structure(i, j, k) * phi[k]).sum();
            worst = worst.max((phi[i] * phi[j] - lin).norm());
        }
    }
    worst
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Diagnostics collected while solving for characters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterStats {
    pub attempts: usize,
    pub worst_residual: f64,
    /// Dimension of the radical (kernel of the trace form).
    pub radical_dim: usize,
}

/// The character space `M(A)`, ordered lexicographically by value vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterSet {
    characters: Vec<Character>,
    dedup_radius: f64,
    stats: CharacterStats,
    #[serde(skip)]
    algebra: AlgebraId,
}

impl CharacterSet {
    /// Assembles a set from precomputed characters, merging those within
    /// `dedup_radius` of each other.
    pub fn from_characters(alg: &Algebra, characters: Vec<Character>, dedup_radius: f64) -> Result<Self> {
        if characters.iter().any(|c| c.algebra != alg.id()) {
            return Err(Error::AlgebraMismatch);
        }
        let worst_residual = characters.iter().map(|c| c.residual(alg)).fold(0.0, f64::max);
        let mut kept =
            SpectrumSet::with_distance(characters, dedup_radius, |a, b| linalg::sup_distance(&a.values, &b.values))
                .into_points();
        kept.sort_by(|a, b| linalg::lex_cmp(&a.values, &b.values));
        let radical_dim = alg.dim() - kept.len().min(alg.dim());
        Ok(Self {
            characters: kept,
            dedup_radius,
            stats: CharacterStats { attempts: 0, worst_residual, radical_dim },
            algebra: alg.id(),
        })
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn dedup_radius(&self) -> f64 {
        self.dedup_radius
    }

    pub fn stats(&self) -> &CharacterStats {
        &self.stats
    }

    pub fn algebra_id(&self) -> AlgebraId {
        self.algebra
    }

    /// `true` when the radical is trivial.
    pub fn semisimple(&self) -> bool {
        self.stats.radical_dim == 0
    }

    /// Character matrix: row `r` holds the values of character `r`.
    pub fn matrix(&self) -> CMatrix {
        let n = self.characters.first().map_or(0, |c| c.values.len());
        CMatrix::from_fn(self.characters.len(), n, |r, c| self.characters[r].values[c])
    }

    /// Replaces the characters with perturbed copies. Used to exercise
    /// failure paths.
    pub fn corrupted(&self, shift: C64) -> Self {
        let mut out = self.clone();
        if let Some(first) = out.characters.first_mut() {
            for v in &mut first.values {
                *v += shift;
            }
        }
        out
    }
}

fn check_same(alg: &Algebra, chars: &CharacterSet) -> Result<()> {
    if chars.algebra != alg.id() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

/// Damped Newton iteration on `phi_i phi_j = sum_k c_ijk phi_k`, `phi(1) = 1`.
fn newton_refine(alg: &Algebra, mut phi: Vec<C64>) -> Vec<C64> {
    let n = alg.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let unit = alg.unit_coeffs();
    let system = |phi: &[C64]| -> CVector {
        let mut f = CVector::zeros(pairs.len() + 1);
        for (r, &(i, j)) in pairs.iter().enumerate() {
            let lin: C64 = (0..n).map(|k| alg.structure(i, j, k) * phi[k]).sum();
            f[r] = phi[i] * phi[j] - lin;
        }
        f[pairs.len()] = dot(phi, unit) - 1.0;
        f
    };
    let mut f = system(&phi);
    for _ in 0..NEWTON_ITERATIONS {
        let fnorm = f.norm();
        if fnorm < 1e-15 {
            break;
        }
        let mut jac = CMatrix::zeros(pairs.len() + 1, n);
        for (r, &(i, j)) in pairs.iter().enumerate() {
            for m in 0..n {
                jac[(r, m)] = -alg.structure(i, j, m);
            }
            jac[(r, i)] += phi[j];
            jac[(r, j)] += phi[i];
        }
        for m in 0..n {
            jac[(pairs.len(), m)] = unit[m];
        }
        let step = linalg::least_squares(&jac, &(-&f), 1e-13);
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-6 {
            let trial: Vec<C64> = phi.iter().zip(step.iter()).map(|(p, s)| p + s * t).collect();
            let ft = system(&trial);
            if ft.norm() < fnorm {
                phi = trial;
                f = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    phi
}

/// Computes every character of `alg`.
///
/// A seeded random element `g` is drawn and the left eigenvectors of its
/// regular representation, taken modulo the radical (the kernel of the trace
/// form), supply one candidate per character. Candidates are normalised to
/// `phi(1) = 1` and polished by Newton's method on the multiplicativity
/// equations. When two eigenvalues of `g` collide, or a candidate fails to
/// converge, a fresh seed is drawn, at most [`CHARACTER_RETRIES`] times.
pub fn characters(alg: &Algebra, tol: &Tolerances, seed: u64) -> Result<CharacterSet> {
    let (quotient, radical) = linalg::range_and_kernel(&alg.trace_form(), tol.rank);
    let r = quotient.ncols();
    let mut worst_residual = 0.0f64;
    let mut rng = random::seeded(seed);

    for attempt in 1..=CHARACTER_RETRIES + 1 {
        let g = random::element(&mut rng, alg);
        let lg = alg.regular_repr(&g)?;
        let reduced = quotient.adjoint() * &lg * &quotient;
        let eig = linalg::eigenvalues(&reduced);
        let scale = eig.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let collides =
            eig.iter().enumerate().any(|(i, a)| eig[i + 1..].iter().any(|b| (a - b).norm() <= tol.collision * scale));
        if collides {
            continue;
        }

        let mut found = Vec::with_capacity(r);
        let mut ok = true;
        for &mu in &eig {
            let shifted = reduced.transpose() - CMatrix::identity(r, r) * mu;
            let (y, _) = linalg::null_vector(&shifted);
            // phi = y^T U^H vanishes on the radical
            let mut phi: Vec<C64> =
                (0..alg.dim()).map(|i| (0..r).map(|j| y[j] * quotient[(i, j)].conj()).sum()).collect();
            let at_unit = dot(&phi, alg.unit_coeffs());
            if at_unit.norm() < 1e-12 {
                ok = false;
                break;
            }
            for v in &mut phi {
                *v /= at_unit;
            }
            let phi = newton_refine(alg, phi);
            let residual = multiplicativity_residual(alg, &phi);
            worst_residual = worst_residual.max(residual);
            if !(residual <= tol.residual) {
                ok = false;
                break;
            }
            found.push(Character { values: phi, algebra: alg.id() });
        }
        if !ok {
            continue;
        }
        let mut set = CharacterSet::from_characters(alg, found, tol.dedup)?;
        if set.len() != r {
            continue;
        }
        set.stats = CharacterStats {
            attempts: attempt,
            worst_residual: set.characters.iter().map(|c| c.residual(alg)).fold(0.0, f64::max),
            radical_dim: radical.ncols(),
        };
        return Ok(set);
    }
    Err(Error::CharacterSolveFailure { attempts: CHARACTER_RETRIES + 1, worst_residual })
}

/// `a^(phi) = phi(a)` for every character, in the order of `chars`.
pub fn gelfand_transform(a: &Element, chars: &CharacterSet) -> Result<Vec<C64>> {
    if a.algebra_id() != chars.algebra {
        return Err(Error::AlgebraMismatch);
    }
    Ok(chars.characters.iter().map(|c| c.eval(a)).collect())
}

/// Functional norm of a character with respect to [`Algebra::norm`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalNorm {
    /// Largest observed `|phi(a)| / ||a||` over a seeded sample.
    pub sampled: f64,
    /// `||phi||_2 ||1||_2`, a bound from the coefficient representation.
    pub induced: f64,
    /// Upper bound used in inequalities. `|phi(a)|` is an eigenvalue of
    /// `L_a`, so it never exceeds `||L_a||`; the bound is therefore 1.
    pub bound: f64,
}

pub fn character_norm(alg: &Algebra, phi: &Character, seed: u64) -> FunctionalNorm {
    let mut rng = random::seeded(seed);
    let mut sample = alg.basis_elements();
    sample.push(alg.unit());
    sample.extend((0..64).map(|_| random::element(&mut rng, alg)));
    let sampled = sample
        .iter()
        .filter_map(|a| {
            let n = alg.norm(a);
            (n > 0.0).then(|| phi.eval(a).norm() / n)
        })
        .fold(0.0, f64::max);
    let induced = linalg::norm2(&phi.values) * linalg::norm2(alg.unit_coeffs());
    FunctionalNorm { sampled, induced, bound: induced.min(1.0) }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub set: SpectrumSet<C64>,
    /// Eigenvalues of the regular representation.
    pub eigenvalues: Vec<C64>,
    pub semisimple: bool,
    /// Hausdorff distance between the character image and the deduplicated
    /// eigenvalues (semisimple case) or the largest `sigma_min(L_a - z)` over
    /// the character image, relative to `||L_a||` (otherwise).
    pub oracle_gap: f64,
}

/// `sp(a) = {phi(a)}`, checked against the eigenvalues of `L_a`.
pub fn spectrum(alg: &Algebra, a: &Element, chars: &CharacterSet, tol: &Tolerances) -> Result<SpectrumReport> {
    check_same(alg, chars)?;
    let image = gelfand_transform(a, chars)?;
    let set = SpectrumSet::new(image, tol.dedup);
    let la = alg.regular_repr(a)?;
    let eigenvalues = linalg::eigenvalues(&la);
    let semisimple = chars.semisimple();
    let oracle_gap = if semisimple {
        let eig_set = SpectrumSet::new(eigenvalues.iter().copied(), tol.dedup);
        let gap = set.hausdorff(eig_set.points());
        if !(gap <= tol.dedup) {
            return Err(Error::OracleDisagreement(format!(
                "character image and eigenvalues differ by {gap:e} (Hausdorff)"
            )));
        }
        gap
    } else {
        let scale = linalg::spectral_norm(&la).max(1.0);
        let n = alg.dim();
        let mut worst = 0.0f64;
        for &z in set.points() {
            let shifted = &la - CMatrix::identity(n, n) * z;
            let smin = linalg::singular_values(&shifted).last().copied().unwrap_or(0.0) / scale;
            worst = worst.max(smin);
        }
        if !(worst <= tol.rank) {
            return Err(Error::OracleDisagreement(format!(
                "character value is not an eigenvalue (relative sigma_min {worst:e})"
            )));
        }
        worst
    };
    Ok(SpectrumReport { set, eigenvalues, semisimple, oracle_gap })
}

/// Orthonormal basis of a linear subspace of an algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    vectors: CMatrix,
    tolerance: f64,
}

impl SubspaceBasis {
    /// Basis vectors as columns.
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn rank(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Euclidean distance from `v` to the subspace.
    pub fn distance(&self, v: &[C64]) -> f64 {
        let v = CVector::from_column_slice(v);
        if self.rank() == 0 {
            return v.norm();
        }
        let proj = &self.vectors * (self.vectors.adjoint() * &v);
        (v - proj).norm()
    }
}

/// `span{e_i s : i < dim, s in generators}`, the ideal generated by
/// `generators`.
pub fn ideal_span(alg: &Algebra, generators: &[Element], rank_tol: f64) -> Result<SubspaceBasis> {
    ideal_span_at_scale(alg, generators, rank_tol, 0.0)
}

/// [`ideal_span`] for generators obtained by cancellation between terms of
/// size `scale`: singular values below `rank_tol * max(sigma_max, scale)` are
/// dropped.
pub fn ideal_span_at_scale(alg: &Algebra, generators: &[Element], rank_tol: f64, scale: f64) -> Result<SubspaceBasis> {
    if generators.is_empty() {
        return Err(Error::InvalidArgument("ideal_span needs at least one generator".into()));
    }
    let n = alg.dim();
    let mut cols = CMatrix::zeros(n, n * generators.len());
    for (g, s) in generators.iter().enumerate() {
        let ls = alg.regular_repr(s)?;
        cols.columns_mut(g * n, n).copy_from(&ls);
    }
    Ok(SubspaceBasis { vectors: linalg::column_space_at_scale(&cols, rank_tol, scale), tolerance: rank_tol })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitMembership {
    pub contains: bool,
    /// `||1 - proj(1)||_2`.
    pub residual: f64,
}

pub fn contains_unit(span: &SubspaceBasis, alg: &Algebra, tol: f64) -> UnitMembership {
    let residual = span.distance(alg.unit_coeffs());
    UnitMembership { contains: residual <= tol, residual }
}

/// Result of the membership route: is the ideal generated by the given
/// elements proper?
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdealTest {
    pub proper: bool,
    pub residual: f64,
    pub rank: usize,
}

/// `1 notin ideal(generators)`, refusing to classify ambiguous residuals.
/// `scale` is the size of the terms the generators were formed from (see
/// [`ideal_span_at_scale`]).
pub fn proper_ideal(alg: &Algebra, generators: &[Element], scale: f64, tol: &Tolerances) -> Result<IdealTest> {
    let span = ideal_span_at_scale(alg, generators, tol.rank, scale)?;
    let m = contains_unit(&span, alg, tol.residual);
    if tol.is_ambiguous(m.residual, tol.residual) {
        return Err(Error::NumericalFailure { residual: m.residual });
    }
    Ok(IdealTest { proper: !m.contains, residual: m.residual, rank: span.rank() })
}

fn shifted_generators(alg: &Algebra, lambda: &[C64], tuple: &[Element]) -> Vec<Element> {
    lambda.iter().zip(tuple).map(|(&l, a)| &alg.scalar_element(l) - a).collect()
}

/// `max(1, |lambda_i|, ||a_i||)`, the size of the terms in `lambda_i 1 - a_i`.
pub fn shift_scale(alg: &Algebra, lambda: &[C64], elements: &[Element]) -> f64 {
    lambda.iter().map(|z| z.norm()).chain(elements.iter().map(|a| alg.norm(a))).fold(1.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointSpectrumReport {
    pub set: SpectrumSet<Vec<C64>>,
    /// Membership checks run on members and random probes.
    pub members_checked: usize,
    pub probes_checked: usize,
    /// Probes that the character image classified as members.
    pub probes_in_spectrum: usize,
    /// Smallest unit-distance residual among members (should be large).
    pub min_member_residual: f64,
    /// Largest unit-distance residual among non-member probes (should be ~0).
    pub max_nonmember_residual: f64,
}

/// `SP(a_1, ..., a_n) = {(phi(a_1), ..., phi(a_n))}`, cross-checked against
/// ideal membership on every member and on [`PROBES_PER_INSTANCE`] random
/// probes.
pub fn joint_spectrum(
    alg: &Algebra,
    tuple: &[Element],
    chars: &CharacterSet,
    tol: &Tolerances,
    seed: u64,
) -> Result<JointSpectrumReport> {
    check_same(alg, chars)?;
    if tuple.is_empty() {
        return Err(Error::InvalidArgument("joint spectrum of an empty tuple".into()));
    }
    let transforms = tuple.iter().map(|a| gelfand_transform(a, chars)).collect::<Result<Vec<_>>>()?;
    let image = (0..chars.len()).map(|c| transforms.iter().map(|t| t[c]).collect::<Vec<C64>>());
    let set = SpectrumSet::new(image, tol.dedup);

    let mut report = JointSpectrumReport {
        set: set.clone(),
        members_checked: 0,
        probes_checked: 0,
        probes_in_spectrum: 0,
        min_member_residual: f64::INFINITY,
        max_nonmember_residual: 0.0,
    };
    for lambda in set.points() {
        let t = proper_ideal(alg, &shifted_generators(alg, lambda, tuple), shift_scale(alg, lambda, tuple), tol)?;
        if !t.proper {
            return Err(Error::OracleDisagreement(format!(
                "character image point {lambda:?} generates the whole algebra"
            )));
        }
        report.members_checked += 1;
        report.min_member_residual = report.min_member_residual.min(t.residual);
    }

    let mut rng = random::seeded(seed);
    for _ in 0..PROBES_PER_INSTANCE {
        let base = &set.points()[rng.random_range(0..set.len())];
        let probe: Vec<C64> = base.iter().map(|z| z + random::complex_gaussian(&mut rng) * PROBE_RADIUS).collect();
        let by_characters = set.contains(&probe);
        let t = proper_ideal(alg, &shifted_generators(alg, &probe, tuple), shift_scale(alg, &probe, tuple), tol)?;
        if t.proper != by_characters {
            return Err(Error::OracleDisagreement(format!(
                "probe {probe:?}: character image says {by_characters}, ideal test says {}",
                t.proper
            )));
        }
        report.probes_checked += 1;
        if by_characters {
            report.probes_in_spectrum += 1;
        } else {
            report.max_nonmember_residual = report.max_nonmember_residual.max(t.residual);
        }
    }
    Ok(report)
}
