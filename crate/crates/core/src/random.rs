//! Seeded generators for algebras, elements, functions and metrics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{Algebra, Element};
use crate::gallery;
use crate::linalg::{self, CMatrix, C64};
use crate::lipschitz::FiniteMetric;
use crate::vvfa::{AValuedFunction, FiniteSpace, ScalarFunction};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (independent real and imaginary parts).
pub fn complex_gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn complex_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Random invertible matrix with condition number at most `max_cond`.
pub fn well_conditioned_matrix(rng: &mut impl Rng, n: usize, max_cond: f64) -> CMatrix {
    loop {
        let m = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
        let sv = linalg::singular_values(&m);
        let (top, bottom) = (sv[0], sv[n - 1]);
        if bottom > 0.0 && top / bottom <= max_cond {
            return m;
        }
    }
}

const MAX_COND: f64 = 30.0;

/// `C^dim` presented in a random basis. Every semisimple commutative algebra
/// of dimension `dim` is isomorphic to this one.
pub fn semisimple_algebra(rng: &mut impl Rng, dim: usize) -> Algebra {
    let change = well_conditioned_matrix(rng, dim, MAX_COND);
    gallery::change_basis(&gallery::pointwise(dim), &change).expect("well-conditioned change of basis")
}

/// Product of truncated polynomial algebras `C[t]/(t^k)` over `blocks`,
/// presented in a random basis. Semisimple exactly when every block is 1.
pub fn algebra_with_blocks(rng: &mut impl Rng, blocks: &[usize]) -> Algebra {
    let factors: Vec<Algebra> = blocks.iter().map(|&k| gallery::truncated_polynomial(k)).collect();
    let labelled: Vec<(String, &Algebra)> = factors.iter().enumerate().map(|(i, a)| (format!("b{i}"), a)).collect();
    let product = gallery::direct_product(&labelled).expect("nonempty product");
    let change = well_conditioned_matrix(rng, product.dim(), MAX_COND);
    gallery::change_basis(&product, &change).expect("well-conditioned change of basis")
}

pub fn element(rng: &mut impl Rng, alg: &Algebra) -> Element {
    alg.element(complex_vector(rng, alg.dim())).expect("dimension matches")
}

pub fn function(rng: &mut impl Rng, alg: &Algebra, space: &FiniteSpace) -> AValuedFunction {
    let values = (0..space.len()).map(|_| element(rng, alg)).collect();
    AValuedFunction::new(space.clone(), alg, values).expect("values match the space")
}

pub fn scalar_function(rng: &mut impl Rng, space: &FiniteSpace) -> ScalarFunction {
    ScalarFunction::new(space.clone(), complex_vector(rng, space.len())).expect("values match the space")
}

/// Euclidean metric on `n` uniformly random points of the unit square.
pub fn metric(rng: &mut impl Rng, n: usize) -> FiniteMetric {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect();
    let d =
        pts.iter().map(|p| pts.iter().map(|q| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()).collect()).collect();
    FiniteMetric::new(FiniteSpace::indexed(n), d).expect("distinct random points form a metric")
}
