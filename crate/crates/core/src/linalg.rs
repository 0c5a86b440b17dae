//! Dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn to_faer(m: &CMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin SVD `m = u diag(s) v_t` with singular values in descending order.
pub struct ThinSvd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v_t: CMatrix,
}

pub fn thin_svd(m: &CMatrix) -> ThinSvd {
    let k = m.nrows().min(m.ncols());
    if k == 0 {
        return ThinSvd { u: CMatrix::zeros(m.nrows(), 0), s: Vec::new(), v_t: CMatrix::zeros(0, m.ncols()) };
    }
    let svd = to_faer(m).thin_svd().expect("SVD iteration converges");
    let (u, v, d) = (svd.U(), svd.V(), svd.S().column_vector());
    ThinSvd {
        u: CMatrix::from_fn(m.nrows(), k, |i, j| u[(i, j)]),
        s: (0..k).map(|i| d[i].re).collect(),
        v_t: CMatrix::from_fn(k, m.ncols(), |i, j| v[(j, i)].conj()),
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    to_faer(m).singular_values().expect("SVD iteration converges")
}

/// Largest singular value (operator 2-norm).
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Numerical rank with a cutoff relative to the largest singular value.
pub fn rank(m: &CMatrix, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let Some(&top) = sv.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn column_space(m: &CMatrix, rel_tol: f64) -> CMatrix {
    column_space_at_scale(m, rel_tol, 0.0)
}

/// Like [`column_space`], but singular values are measured against
/// `max(sigma_max, scale)`, so a matrix made of roundoff relative to `scale`
/// has rank zero.
pub fn column_space_at_scale(m: &CMatrix, rel_tol: f64, scale: f64) -> CMatrix {
    let n = m.nrows();
    if n == 0 || m.ncols() == 0 {
        return CMatrix::zeros(n, 0);
    }
    let svd = thin_svd(m);
    let top = svd.s.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return CMatrix::zeros(n, 0);
    }
    let cutoff = rel_tol * top.max(scale);
    let keep: Vec<usize> = (0..svd.s.len()).filter(|&i| svd.s[i] > cutoff).collect();
    CMatrix::from_fn(n, keep.len(), |r, c| svd.u[(r, keep[c])])
}

/// Orthonormal bases of the row-space complement split: `(range, kernel)` of a
/// square matrix, both as columns, using a relative cutoff.
pub fn range_and_kernel(m: &CMatrix, rel_tol: f64) -> (CMatrix, CMatrix) {
    let n = m.ncols();
    let svd = thin_svd(m);
    let v = svd.v_t.adjoint();
    let top = svd.s.first().copied().unwrap_or(0.0);
    let r = if top == 0.0 { 0 } else { svd.s.iter().filter(|&&s| s > rel_tol * top).count() };
    let range = v.columns(0, r).into_owned();
    let kernel = v.columns(r, n - r).into_owned();
    (range, kernel)
}

/// Unit vector spanning the (approximate) kernel of a square matrix: the right
/// singular vector of the smallest singular value.
pub fn null_vector(m: &CMatrix) -> (CVector, f64) {
    let n = m.ncols();
    let svd = thin_svd(m);
    let idx = n - 1;
    let v = CVector::from_fn(n, |r, _| svd.v_t[(idx, r)].conj());
    (v, svd.s[idx])
}

/// Minimum-norm least-squares solution of `m x = b`.
pub fn least_squares(m: &CMatrix, b: &CVector, rel_tol: f64) -> CVector {
    if m.ncols() == 0 {
        return CVector::zeros(0);
    }
    let svd = thin_svd(m);
    let top = svd.s.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return CVector::zeros(m.ncols());
    }
    let mut coords = svd.u.adjoint() * b;
    for (i, s) in svd.s.iter().enumerate() {
        coords[i] = if *s > rel_tol * top { coords[i] / *s } else { ZERO };
    }
    svd.v_t.adjoint() * coords
}

/// Moore-Penrose pseudo-inverse, dropping singular values at or below
/// `rel_tol * sigma_max`.
pub fn pseudo_inverse(m: &CMatrix, rel_tol: f64) -> CMatrix {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMatrix::zeros(m.ncols(), m.nrows());
    }
    let svd = thin_svd(m);
    let top = svd.s.iter().copied().fold(0.0, f64::max);
    let mut u_h = svd.u.adjoint();
    for (i, s) in svd.s.iter().enumerate() {
        let inv = if top > 0.0 && *s > rel_tol * top { 1.0 / *s } else { 0.0 };
        u_h.row_mut(i).scale_mut(inv);
    }
    svd.v_t.adjoint() * u_h
}

/// Eigenvalues of a square complex matrix.
pub fn eigenvalues(m: &CMatrix) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    to_faer(m).eigenvalues().expect("eigenvalue iteration converges")
}

/// Euclidean norm of a coefficient vector.
pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Sup-norm distance between two equally long vectors.
pub fn sup_distance(a: &[C64], b: &[C64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Orders complex vectors lexicographically by `(re, im)` of each entry.
pub fn lex_cmp(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o.is_ne() {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// One-sided distance `sup_{a in from} inf_{b in to} d(a, b)`.
pub fn excess<T>(from: &[T], to: &[T], dist: impl Fn(&T, &T) -> f64) -> f64 {
    from.iter().map(|a| to.iter().map(|b| dist(a, b)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between finite sets. Empty vs empty is 0;
/// empty vs nonempty is infinite.
pub fn hausdorff<T>(a: &[T], b: &[T], dist: impl Fn(&T, &T) -> f64) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    excess(a, b, &dist).max(excess(b, a, &dist))
}
