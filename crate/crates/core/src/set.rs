//! Finite point sets with tolerance-aware identification.

use serde::Serialize;

use crate::linalg::{self, C64};

/// Distance used to identify and compare spectral points.
pub trait SpectralPoint {
    fn distance(&self, other: &Self) -> f64;
}

impl SpectralPoint for C64 {
    fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

impl SpectralPoint for Vec<C64> {
    fn distance(&self, other: &Self) -> f64 {
        linalg::sup_distance(self, other)
    }
}

/// A finite set whose points are pairwise farther apart than `radius`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSet<T> {
    points: Vec<T>,
    radius: f64,
}

impl<T> SpectrumSet<T> {
    /// Keeps the first point of every cluster of points within `radius`,
    /// preserving input order.
    pub fn with_distance(points: impl IntoIterator<Item = T>, radius: f64, dist: impl Fn(&T, &T) -> f64) -> Self {
        let mut kept: Vec<T> = Vec::new();
        for p in points {
            if kept.iter().all(|q| dist(q, &p) > radius) {
                kept.push(p);
            }
        }
        Self { points: kept, radius }
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn into_points(self) -> Vec<T> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn distance_to_with(&self, p: &T, dist: impl Fn(&T, &T) -> f64) -> f64 {
        self.points.iter().map(|q| dist(q, p)).fold(f64::INFINITY, f64::min)
    }

    pub fn hausdorff_with(&self, other: &[T], dist: impl Fn(&T, &T) -> f64) -> f64 {
        linalg::hausdorff(&self.points, other, dist)
    }
}

impl<T: SpectralPoint> SpectrumSet<T> {
    pub fn new(points: impl IntoIterator<Item = T>, radius: f64) -> Self {
        Self::with_distance(points, radius, T::distance)
    }

    pub fn distance_to(&self, p: &T) -> f64 {
        self.distance_to_with(p, T::distance)
    }

    pub fn contains(&self, p: &T) -> bool {
        self.distance_to(p) <= self.radius
    }

    pub fn hausdorff(&self, other: &[T]) -> f64 {
        self.hausdorff_with(other, T::distance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;

    #[test]
    fn near_duplicates_collapse() {
        let s = SpectrumSet::new(vec![real(1.0), real(1.0 + 1e-9), real(2.0)], 1e-7);
        assert_eq!(s.points(), &[real(1.0), real(2.0)]);
        assert!(s.contains(&real(2.0 + 5e-8)));
        assert!(!s.contains(&real(3.0)));
    }
}
