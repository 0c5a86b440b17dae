//! Lipschitz algebras `Lip(X, A)` over finite metric spaces.
//!
//! On a finite set every function is Lipschitz, so `Lip(X, A)` has the same
//! realization as `C(X, A)`; only the norm `||f||_L = ||f||_X + L(f)` differs.

use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::gelfand;
use crate::linalg;
use crate::tolerance::Tolerances;
use crate::vvfa::{self, AValuedFunction, FiniteSpace, ScalarFunction};

/// Slack allowed in the triangle inequality and in symmetry.
pub const METRIC_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMetric {
    space: FiniteSpace,
    distances: Vec<Vec<f64>>,
}

impl FiniteMetric {
    pub fn new(space: FiniteSpace, distances: Vec<Vec<f64>>) -> Result<Self> {
        let n = space.len();
        if distances.len() != n || distances.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMetric(format!("distance matrix must be {n}x{n}")));
        }
        for x in 0..n {
            if distances[x][x] != 0.0 {
                return Err(Error::InvalidMetric(format!(
                    "d({0},{0}) = {1} is not zero",
                    space.points()[x],
                    distances[x][x]
                )));
            }
            for y in 0..n {
                let d = distances[x][y];
                if x != y && !(d > 0.0 && d.is_finite()) {
                    return Err(Error::InvalidMetric(format!(
                        "d({},{}) = {d} must be positive and finite",
                        space.points()[x],
                        space.points()[y]
                    )));
                }
                if (d - distances[y][x]).abs() > METRIC_SLACK * d.max(1.0) {
                    return Err(Error::InvalidMetric(format!(
                        "asymmetric distance between {} and {}",
                        space.points()[x],
                        space.points()[y]
                    )));
                }
                for z in 0..n {
                    let slack = distances[x][z] - distances[x][y] - distances[y][z];
                    if slack > METRIC_SLACK * distances[x][z].max(1.0) {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails for {}, {}, {} by {slack:e}",
                            space.points()[x],
                            space.points()[y],
                            space.points()[z]
                        )));
                    }
                }
            }
        }
        Ok(Self { space, distances })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn distance(&self, x: usize, y: usize) -> f64 {
        self.distances[x][y]
    }

    pub fn distances(&self) -> &[Vec<f64>] {
        &self.distances
    }
}

fn check_space(f_space: &FiniteSpace, m: &FiniteMetric) -> Result<()> {
    if f_space != m.space() {
        return Err(Error::InvalidSpace("function and metric live on different point sets".into()));
    }
    Ok(())
}

/// Largest `gap(x, y) / d(x, y)` over distinct pairs.
pub fn max_quotient(m: &FiniteMetric, gap: impl Fn(usize, usize) -> f64) -> f64 {
    let n = m.space().len();
    let mut best = 0.0f64;
    for x in 0..n {
        for y in x + 1..n {
            best = best.max(gap(x, y) / m.distance(x, y));
        }
    }
    best
}

/// `L(f) = max_{x != y} ||f(x) - f(y)|| / d(x, y)`.
pub fn lip_constant(alg: &Algebra, f: &AValuedFunction, m: &FiniteMetric) -> Result<f64> {
    check_space(f.space(), m)?;
    if f.algebra_id() != alg.id() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(max_quotient(m, |x, y| alg.norm(&(f.value(x) - f.value(y)))))
}

/// `||f||_L = ||f||_X + L(f)`.
pub fn lip_norm(alg: &Algebra, f: &AValuedFunction, m: &FiniteMetric) -> Result<f64> {
    Ok(vvfa::uniform_norm(alg, f) + lip_constant(alg, f, m)?)
}

/// `L(lambda)` for a scalar function.
pub fn scalar_lip_constant(lambda: &ScalarFunction, m: &FiniteMetric) -> Result<f64> {
    check_space(lambda.space(), m)?;
    Ok(max_quotient(m, |x, y| (lambda.values()[x] - lambda.values()[y]).norm()))
}

pub fn scalar_lip_norm(lambda: &ScalarFunction, m: &FiniteMetric) -> Result<f64> {
    Ok(lambda.sup_norm() + scalar_lip_constant(lambda, m)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Naturality {
    pub natural: bool,
    pub characters: usize,
    /// For each character, the point whose evaluation it matches.
    pub matched: Vec<Option<String>>,
    pub worst_distance: f64,
}

/// Checks that every character of the realization of `Lip(X) = C^X` is a
/// point evaluation, one per point.
pub fn lip_natural_check(m: &FiniteMetric, alg_scalar: &Algebra, tol: &Tolerances, seed: u64) -> Result<Naturality> {
    let reference = vvfa::scalar_function_algebra(m.space());
    if alg_scalar.structure_tensor() != reference.structure_tensor()
        || alg_scalar.unit_coeffs() != reference.unit_coeffs()
    {
        return Err(Error::InvalidArgument("algebra is not the point-indicator realization of C^X".into()));
    }
    let chars = gelfand::characters(alg_scalar, tol, seed)?;
    let n = m.space().len();
    let mut used = vec![false; n];
    let mut matched = Vec::with_capacity(chars.len());
    let mut worst_distance = 0.0f64;
    for phi in chars.characters() {
        let (x, d) = (0..n)
            .map(|x| {
                let eval: Vec<_> = (0..n).map(|y| if x == y { linalg::ONE } else { linalg::ZERO }).collect();
                (x, linalg::sup_distance(phi.values(), &eval))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty space");
        worst_distance = worst_distance.max(d);
        if d <= tol.dedup && !used[x] {
            used[x] = true;
            matched.push(Some(m.space().points()[x].clone()));
        } else {
            matched.push(None);
        }
    }
    let natural = chars.len() == n && used.iter().all(|&u| u);
    Ok(Naturality { natural, characters: chars.len(), matched, worst_distance })
}
