use serde::Serialize;

/// Numerical thresholds shared by every spectral computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Absolute bound on multiplicativity, homomorphism and membership residuals.
    pub residual: f64,
    /// Radius below which two spectral points are identified.
    pub dedup: f64,
    /// Relative singular-value cutoff for rank decisions.
    pub rank: f64,
    /// Bound on certificate residuals.
    pub certificate: f64,
    /// Residuals in `(t, ambiguity_factor * t)` are reported, never classified.
    pub ambiguity_factor: f64,
    /// Relative eigenvalue separation required of the generic element.
    pub collision: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { residual: 1e-9, dedup: 1e-7, rank: 1e-8, certificate: 1e-8, ambiguity_factor: 1e4, collision: 1e-6 }
    }
}

impl Tolerances {
    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual = residual;
        self
    }

    pub fn with_dedup(mut self, dedup: f64) -> Self {
        self.dedup = dedup;
        self
    }

    /// `true` when `residual` can be classified neither as zero nor as nonzero.
    pub fn is_ambiguous(&self, residual: f64, tol: f64) -> bool {
        residual > tol && residual < tol * self.ambiguity_factor
    }
}
