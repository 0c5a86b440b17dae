//! Seeded fixtures shared by the benchmarks.

use gelfand_core::{random, AValuedFunction, Algebra, Element, FiniteSpace};

/// A random semisimple algebra with one random element.
pub fn algebra_and_element(dim: usize, seed: u64) -> (Algebra, Element) {
    let mut rng = random::seeded(seed);
    let alg = random::semisimple_algebra(&mut rng, dim);
    let a = random::element(&mut rng, &alg);
    (alg, a)
}

/// A random semisimple algebra with a random function on `points` points.
pub fn algebra_and_function(dim: usize, points: usize, seed: u64) -> (Algebra, AValuedFunction) {
    let mut rng = random::seeded(seed);
    let alg = random::semisimple_algebra(&mut rng, dim);
    let f = random::function(&mut rng, &alg, &FiniteSpace::indexed(points));
    (alg, f)
}
