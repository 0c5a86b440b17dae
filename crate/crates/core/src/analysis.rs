//! Perturbation experiments: equicontinuity transfer, boundedness of
//! `SP(f)`, and the quantitative upper semicontinuity of `f -> SP(f)`.

use rand::Rng;
use serde::Serialize;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::gelfand::{self, CharacterSet};
use crate::lipschitz::{self, FiniteMetric};
use crate::random;
use crate::set::SpectralPoint;
use crate::tolerance::Tolerances;
use crate::vvfa::{self, AValuedFunction, Certificate, ScalarFunction};

/// Largest fitted constant accepted by [`usc_experiment`].
pub const USC_CONSTANT_BOUND: f64 = 10.0;
/// Relative slack on inequalities between computed norms.
const NORM_SLACK: f64 = 1e-12;

fn within(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs * (1.0 + NORM_SLACK) + NORM_SLACK
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equicontinuity {
    /// `max ||f(x) - f(y)|| / d(x, y)` over the family.
    pub modulus: f64,
    /// The same quantity for `{phi o f}`.
    pub transferred: f64,
    /// Largest functional norm bound among the characters.
    pub kappa: f64,
}

/// Modulus of the family, with the check that composing with characters
/// does not increase it beyond the functional norms.
pub fn equicontinuity_modulus(
    alg: &Algebra,
    family: &[AValuedFunction],
    m: &FiniteMetric,
    chars: &CharacterSet,
    seed: u64,
) -> Result<Equicontinuity> {
    let mut modulus = 0.0f64;
    for f in family {
        modulus = modulus.max(lipschitz::lip_constant(alg, f, m)?);
    }
    let mut transferred = 0.0f64;
    let mut kappa = 0.0f64;
    for (i, phi) in chars.characters().iter().enumerate() {
        let k = gelfand::character_norm(alg, phi, seed).bound;
        kappa = kappa.max(k);
        let mut worst = 0.0f64;
        for f in family {
            worst = worst.max(lipschitz::scalar_lip_constant(&f.compose(phi), m)?);
        }
        if !within(worst, k * modulus) {
            return Err(Error::AssertionFailure {
                step: i,
                detail: format!("character {i}: transferred modulus {worst:e} exceeds {k} x {modulus:e}"),
            });
        }
        transferred = transferred.max(worst);
    }
    Ok(Equicontinuity { modulus, transferred, kappa })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Compactness {
    pub size: usize,
    pub characters: usize,
    /// `||f||_X`.
    pub bound: f64,
    /// `max ||phi o f||_X` over the spectrum.
    pub largest: f64,
    pub kappa: f64,
    pub finite: bool,
    pub bounded: bool,
    /// A finite subset of `C(X)` is closed.
    pub closed: bool,
}

/// Finiteness, uniform boundedness by `||f||_X` and closedness of `SP(f)`.
pub fn compactness_report(
    alg: &Algebra,
    f: &AValuedFunction,
    chars: &CharacterSet,
    tol: &Tolerances,
    seed: u64,
) -> Result<Compactness> {
    let sp = vvfa::vv_spectrum_chars(f, chars, tol.dedup);
    let bound = vvfa::uniform_norm(alg, f);
    if sp.len() > chars.len() {
        return Err(Error::AssertionFailure {
            step: 0,
            detail: format!("{} spectral points from {} characters", sp.len(), chars.len()),
        });
    }
    let mut largest = 0.0f64;
    let mut kappa = 0.0f64;
    for (i, phi) in chars.characters().iter().enumerate() {
        let k = gelfand::character_norm(alg, phi, seed).bound;
        kappa = kappa.max(k);
        let size = f.compose(phi).sup_norm();
        if !within(size, k * bound) {
            return Err(Error::AssertionFailure {
                step: i,
                detail: format!("||phi o f||_X = {size:e} exceeds {k} x ||f||_X = {bound:e}"),
            });
        }
        largest = largest.max(size);
    }
    Ok(Compactness {
        size: sp.len(),
        characters: chars.len(),
        bound,
        largest,
        kappa,
        finite: true,
        bounded: true,
        closed: true,
    })
}

/// Direction of the perturbations `g_k`.
#[derive(Debug, Clone, PartialEq)]
pub enum Perturbation {
    /// Entrywise complex Gaussian.
    Gaussian,
    /// Pointwise Gaussian combinations of the given elements.
    Span(Vec<Element>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct UscConfig {
    pub steps: usize,
    pub decay: f64,
    pub seed: u64,
    pub perturbation: Perturbation,
}

impl UscConfig {
    pub fn new(steps: usize, decay: f64, seed: u64) -> Self {
        Self { steps, decay, seed, perturbation: Perturbation::Gaussian }
    }

    pub fn with_span(mut self, span: Vec<Element>) -> Self {
        self.perturbation = Perturbation::Span(span);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UscFailure {
    pub step: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UscReport {
    /// `delta_k = decay^k` for `k = 1..=steps`.
    pub delta: Vec<f64>,
    /// `max_{lambda in SP(f_k)} dist(lambda, SP(f))`.
    pub dist: Vec<f64>,
    /// `max_k dist_k / delta_k` over steps with `delta_k > 0`.
    pub fitted_c: f64,
    pub c_bound: f64,
    /// Nearest-neighbour chains followed through the run.
    pub chains: usize,
    /// Largest distance from a chain's limit candidate to `SP(f)`.
    pub limit_gap: f64,
    pub pass: bool,
    pub failure: Option<UscFailure>,
}

impl UscReport {
    pub fn check(&self) -> Result<()> {
        match &self.failure {
            None => Ok(()),
            Some(f) => Err(Error::AssertionFailure { step: f.step, detail: f.detail.clone() }),
        }
    }
}

fn perturbation(
    rng: &mut impl Rng,
    alg: &Algebra,
    f: &AValuedFunction,
    kind: &Perturbation,
) -> Result<AValuedFunction> {
    let values = match kind {
        Perturbation::Gaussian => (0..f.space().len()).map(|_| random::element(rng, alg)).collect(),
        Perturbation::Span(span) => (0..f.space().len())
            .map(|_| span.iter().fold(alg.zero(), |acc, b| &acc + &b.scale(random::complex_gaussian(rng))))
            .collect(),
    };
    let g = AValuedFunction::new(f.space().clone(), alg, values)?;
    let size = vvfa::uniform_norm(alg, &g);
    Ok(if size > 0.0 { g.scale((1.0 / size).into()) } else { g })
}

/// Runs `f_k = f + delta_k g_k` with `||g_k||_X = 1` and measures how far
/// `SP(f_k)` strays from `SP(f)`.
///
/// Passes when `dist_k <= C delta_k` for a constant `C <= USC_CONSTANT_BOUND`
/// (and `dist_k = 0` when `delta_k = 0`), and when every nearest-neighbour
/// chain `lambda_k in SP(f_k)` has a limit candidate in `SP(f)`: the chain's
/// final character applied to `f`, confirmed by the ideal test.
pub fn usc_experiment(alg: &Algebra, f: &AValuedFunction, config: &UscConfig, tol: &Tolerances) -> Result<UscReport> {
    if !(0.0..1.0).contains(&config.decay) {
        return Err(Error::InvalidArgument(format!("decay {} outside [0, 1)", config.decay)));
    }
    if config.steps == 0 {
        return Err(Error::InvalidArgument("at least one step is required".into()));
    }
    if f.algebra_id() != alg.id() {
        return Err(Error::AlgebraMismatch);
    }
    let chars = gelfand::characters(alg, tol, config.seed)?;
    let base: Vec<ScalarFunction> = vvfa::f_tilde(f, &chars);
    let sp = vvfa::vv_spectrum_chars(f, &chars, tol.dedup);

    let mut rng = random::seeded(config.seed);
    let mut delta = Vec::with_capacity(config.steps);
    let mut dist = Vec::with_capacity(config.steps);
    let mut images: Vec<Vec<ScalarFunction>> = Vec::with_capacity(config.steps);
    for k in 1..=config.steps {
        let d = config.decay.powi(k as i32);
        let g = perturbation(&mut rng, alg, f, &config.perturbation)?;
        let fk = f.zip_with(&g.scale(d.into()), |a, b| a + b);
        let image = vvfa::f_tilde(&fk, &chars);
        let worst = image.iter().map(|l| sp.distance_to(l)).fold(0.0, f64::max);
        delta.push(d);
        dist.push(worst);
        images.push(image);
    }

    let mut failure = None;
    let mut fitted_c = 0.0f64;
    for (k, (&d, &e)) in delta.iter().zip(&dist).enumerate() {
        if d > 0.0 {
            fitted_c = fitted_c.max(e / d);
            if e / d > USC_CONSTANT_BOUND && failure.is_none() {
                failure = Some(UscFailure {
                    step: k + 1,
                    detail: format!("dist {e:e} exceeds {USC_CONSTANT_BOUND} x delta {d:e}"),
                });
            }
        } else if e > 0.0 && failure.is_none() {
            failure = Some(UscFailure { step: k + 1, detail: format!("dist {e:e} with zero perturbation") });
        }
    }

    let mut limit_gap = 0.0f64;
    let mut chains = 0;
    for start in 0..images[0].len() {
        let mut current = start;
        for k in 1..images.len() {
            let here = &images[k - 1][current];
            let next = &images[k];
            current = (0..next.len())
                .min_by(|&a, &b| next[a].distance(here).total_cmp(&next[b].distance(here)))
                .expect("characters exist");
        }
        chains += 1;
        let candidate = &base[current];
        let gap = sp.distance_to(candidate);
        limit_gap = limit_gap.max(gap);
        let membership = vvfa::vv_spectrum_membership(alg, f, candidate, &chars, tol)?;
        if (!membership.member || gap > tol.dedup) && failure.is_none() {
            failure = Some(UscFailure {
                step: config.steps,
                detail: format!("chain from character {start} ends {gap:e} away from SP(f)"),
            });
        }
    }

    Ok(UscReport {
        delta,
        dist,
        fitted_c,
        c_bound: USC_CONSTANT_BOUND,
        chains,
        limit_gap,
        pass: failure.is_none(),
        failure,
    })
}

/// `1 / (2 sum_i ||a_i||)`: perturbations of `(f, lambda)` smaller than this
/// keep `lambda` outside the spectrum.
pub fn protected_radius(alg: &Algebra, cert: &Certificate) -> f64 {
    1.0 / (2.0 * cert.coefficient_mass(alg))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeighborhoodReport {
    pub epsilon: f64,
    pub trials: usize,
    /// Trials whose perturbed `lambda'` stayed outside `SP(f')`.
    pub protected: usize,
    /// Largest `||f' - f||_X + ||lambda' - lambda||_X` used.
    pub largest_perturbation: f64,
}

/// Perturbs a certified non-member `(f, lambda)` within the protected radius
/// and checks that every perturbed pair remains a non-member.
#[allow(clippy::too_many_arguments)]
pub fn neighborhood_trials(
    alg: &Algebra,
    f: &AValuedFunction,
    lambda: &ScalarFunction,
    cert: &Certificate,
    chars: &CharacterSet,
    tol: &Tolerances,
    trials: usize,
    seed: u64,
) -> Result<NeighborhoodReport> {
    let epsilon = protected_radius(alg, cert);
    let mut rng = random::seeded(seed);
    let mut protected = 0;
    let mut largest_perturbation = 0.0f64;
    for _ in 0..trials {
        let total = epsilon * rng.random_range(0.0..0.99);
        let share: f64 = rng.random();
        let g = perturbation(&mut rng, alg, f, &Perturbation::Gaussian)?;
        let h = random::scalar_function(&mut rng, f.space());
        let h = h.map(|z| z / h.sup_norm());
        let f2 = f.zip_with(&g.scale((share * total).into()), |a, b| a + b);
        let l2 = lambda.zip_with(&h, |a, b| a + b * (1.0 - share) * total);
        largest_perturbation =
            largest_perturbation.max(vvfa::uniform_norm(alg, &f.zip_with(&f2, |a, b| b - a)) + l2.distance(lambda));
        if !vvfa::vv_spectrum_membership(alg, &f2, &l2, chars, tol)?.member {
            protected += 1;
        }
    }
    Ok(NeighborhoodReport { epsilon, trials, protected, largest_perturbation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::gelfand::characters;
    use crate::linalg::real;
    use crate::vvfa::{CertificateOutcome, FiniteSpace};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn point() -> FiniteSpace {
        FiniteSpace::new(vec!["p".into()]).unwrap()
    }

    fn pq_metric() -> FiniteMetric {
        FiniteMetric::new(FiniteSpace::new(vec!["p".into(), "q".into()]).unwrap(), vec![vec![0.0, 2.0], vec![2.0, 0.0]])
            .unwrap()
    }

    fn el(alg: &Algebra, v: &[f64]) -> Element {
        alg.element(v.iter().map(|&x| real(x)).collect()).unwrap()
    }

    #[test]
    fn equicontinuity_of_small_families() {
        let c2 = gallery::pointwise(2);
        let chars = characters(&c2, &tol(), 0).unwrap();
        let m = pq_metric();
        let s = m.space().clone();
        let k = AValuedFunction::constant(&s, &c2, &el(&c2, &[1.0, 2.0])).unwrap();
        let e = equicontinuity_modulus(&c2, std::slice::from_ref(&k), &m, &chars, 0).unwrap();
        assert_eq!((e.modulus, e.transferred), (0.0, 0.0));

        let f = AValuedFunction::new(s.clone(), &c2, vec![el(&c2, &[0.0, 0.0]), el(&c2, &[2.0, 6.0])]).unwrap();
        let g = AValuedFunction::new(s, &c2, vec![el(&c2, &[0.0, 0.0]), el(&c2, &[-8.0, 1.0])]).unwrap();
        let single = equicontinuity_modulus(&c2, std::slice::from_ref(&f), &m, &chars, 0).unwrap();
        assert_eq!(single.modulus, lipschitz::lip_constant(&c2, &f, &m).unwrap());
        let both = equicontinuity_modulus(&c2, &[f, g, k], &m, &chars, 0).unwrap();
        assert!((both.modulus - 4.0).abs() < 1e-12);
        assert!(both.transferred <= both.modulus + 1e-12);
    }

    #[test]
    fn compactness_facts() {
        let c2 = gallery::pointwise(2);
        let chars = characters(&c2, &tol(), 0).unwrap();
        let f = AValuedFunction::new(FiniteSpace::indexed(2), &c2, vec![el(&c2, &[1.0, -3.0]), el(&c2, &[2.0, 0.5])])
            .unwrap();
        let r = compactness_report(&c2, &f, &chars, &tol(), 0).unwrap();
        assert_eq!(r.size, 2);
        assert!(r.largest <= r.bound + 1e-12);

        let c1 = Algebra::scalar();
        let chars = characters(&c1, &tol(), 0).unwrap();
        let f = AValuedFunction::new(FiniteSpace::indexed(3), &c1, vec![c1.unit(), c1.zero(), c1.unit()]).unwrap();
        assert_eq!(compactness_report(&c1, &f, &chars, &tol(), 0).unwrap().size, 1);
    }

    #[test]
    fn usc_on_pointwise_algebra() {
        let c2 = gallery::pointwise(2);
        let f = AValuedFunction::new(point(), &c2, vec![el(&c2, &[1.0, 2.0])]).unwrap();
        let r = usc_experiment(&c2, &f, &UscConfig::new(10, 0.5, 7), &tol()).unwrap();
        assert!(r.pass, "{r:?}");
        for (d, e) in r.delta.iter().zip(&r.dist) {
            assert!(*e <= 2.0 * d);
        }
        let frozen = usc_experiment(&c2, &f, &UscConfig::new(5, 0.0, 7), &tol()).unwrap();
        assert!(frozen.dist.iter().all(|&d| d == 0.0));
        assert!(frozen.pass);
        assert!(usc_experiment(&c2, &f, &UscConfig::new(5, 1.0, 7), &tol()).is_err());
    }

    #[test]
    fn usc_with_nilpotent_perturbations() {
        let dual = gallery::dual();
        let f =
            AValuedFunction::new(FiniteSpace::indexed(2), &dual, vec![el(&dual, &[1.0, 2.0]), el(&dual, &[-1.0, 0.0])])
                .unwrap();
        let config = UscConfig::new(10, 0.5, 3).with_span(vec![dual.basis_element(1)]);
        let r = usc_experiment(&dual, &f, &config, &tol()).unwrap();
        assert!(r.dist.iter().all(|&d| d == 0.0), "{:?}", r.dist);
        assert!(r.pass);
    }

    #[test]
    fn protected_neighborhoods() {
        let c2 = gallery::pointwise(2);
        let chars = characters(&c2, &tol(), 0).unwrap();
        let f = AValuedFunction::new(point(), &c2, vec![el(&c2, &[1.0, 2.0])]).unwrap();
        let lambda = ScalarFunction::new(point(), vec![real(0.0)]).unwrap();
        let CertificateOutcome::Certificate(cert) = vvfa::certificate(&c2, &f, &lambda, &chars, &tol()).unwrap() else {
            panic!("expected a certificate");
        };
        assert!((protected_radius(&c2, &cert) - 0.5).abs() < 1e-12);
        let r = neighborhood_trials(&c2, &f, &lambda, &cert, &chars, &tol(), 50, 1).unwrap();
        assert_eq!(r.protected, r.trials);
        assert!(r.largest_perturbation < r.epsilon);
    }
}
