//! Built-in algebras and constructions used to build new ones.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ONE, ZERO};

/// Names accepted by [`gallery`].
pub const GALLERY_NAMES: [&str; 6] = ["C1", "C2", "C3", "dual", "split", "Z4"];

/// Looks up a built-in algebra by name.
///
/// | name    | algebra          | basis            |
/// |---------|------------------|------------------|
/// | `C1`    | `C`              | `1`              |
/// | `C2`    | `C^2` pointwise  | idempotents      |
/// | `C3`    | `C^3` pointwise  | idempotents      |
/// | `dual`  | `C[t]/(t^2)`     | `1, t`           |
/// | `split` | `C[t]/(t^2 - 1)` | `1, t`           |
/// | `Z4`    | group algebra    | `g^0, ..., g^3`  |
pub fn gallery(name: &str) -> Result<Algebra> {
    match name {
        "C1" => Ok(Algebra::scalar()),
        "C2" => Ok(pointwise(2)),
        "C3" => Ok(pointwise(3)),
        "dual" => Ok(dual()),
        "split" => Ok(split()),
        "Z4" => Ok(cyclic_group_algebra(4)),
        _ => Err(Error::UnknownGallery(name.to_string())),
    }
}

fn unit_vector(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[i] = ONE;
    v
}

/// `C^n` with the idempotent basis `e_i e_j = delta_ij e_i`.
pub fn pointwise(n: usize) -> Algebra {
    let basis = (0..n).map(|i| format!("e{i}")).collect();
    Algebra::from_products(basis, vec![ONE; n], |i, j| if i == j { unit_vector(n, i) } else { vec![ZERO; n] })
        .expect("pointwise algebra is valid")
}

/// `C[t]/(t^k)` with basis `1, t, ..., t^(k-1)`.
pub fn truncated_polynomial(k: usize) -> Algebra {
    let basis = (0..k).map(|i| if i == 0 { "1".to_string() } else { format!("t^{i}") }).collect();
    Algebra::from_products(
        basis,
        unit_vector(k, 0),
        |i, j| if i + j < k { unit_vector(k, i + j) } else { vec![ZERO; k] },
    )
    .expect("truncated polynomial algebra is valid")
}

/// `C[t]/(t^2)`.
pub fn dual() -> Algebra {
    let a = truncated_polynomial(2);
    rename(&a, vec!["1".into(), "t".into()])
}

/// `C[t]/(t^2 - 1)` with basis `1, t`.
pub fn split() -> Algebra {
    Algebra::from_products(vec!["1".into(), "t".into()], vec![ONE, ZERO], |i, j| unit_vector(2, (i + j) % 2))
        .expect("split algebra is valid")
}

/// Group algebra of the cyclic group of order `n`.
pub fn cyclic_group_algebra(n: usize) -> Algebra {
    let basis = (0..n).map(|i| format!("g{i}")).collect();
    Algebra::from_products(basis, unit_vector(n, 0), |i, j| unit_vector(n, (i + j) % n))
        .expect("group algebra is valid")
}

fn rename(a: &Algebra, basis: Vec<String>) -> Algebra {
    Algebra::new(basis, a.structure_tensor().to_vec(), a.unit_coeffs().to_vec()).expect("renaming keeps validity")
}

/// Direct product `A_1 x ... x A_m` with the concatenated basis. Basis names
/// are `"{label}.{name}"`.
pub fn direct_product(factors: &[(String, &Algebra)]) -> Result<Algebra> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("direct product of zero factors".into()));
    }
    let offsets: Vec<usize> = factors
        .iter()
        .scan(0, |acc, (_, a)| {
            let o = *acc;
            *acc += a.dim();
            Some(o)
        })
        .collect();
    let n: usize = factors.iter().map(|(_, a)| a.dim()).sum();
    let mut owner = Vec::with_capacity(n);
    let mut basis = Vec::with_capacity(n);
    let mut unit = Vec::with_capacity(n);
    for (f, (label, a)) in factors.iter().enumerate() {
        for (i, name) in a.basis_names().iter().enumerate() {
            owner.push((f, i));
            basis.push(format!("{label}.{name}"));
        }
        unit.extend_from_slice(a.unit_coeffs());
    }
    Algebra::from_products(basis, unit, |p, q| {
        let mut out = vec![ZERO; n];
        let ((fp, i), (fq, j)) = (owner[p], owner[q]);
        if fp == fq {
            let a = factors[fp].1;
            for k in 0..a.dim() {
                out[offsets[fp] + k] = a.structure(i, j, k);
            }
        }
        out
    })
}

/// Re-expresses `a` in the basis whose `i`-th vector has coordinates
/// `change[:, i]` in the old basis. `change` must be invertible.
pub fn change_basis(a: &Algebra, change: &CMatrix) -> Result<Algebra> {
    let n = a.dim();
    if change.nrows() != n || change.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: change.nrows() });
    }
    let inverse =
        change.clone().try_inverse().ok_or_else(|| Error::InvalidArgument("basis change is singular".into()))?;
    let column = |i: usize| a.element(change.column(i).iter().copied().collect()).expect("dimension checked");
    let new_coords = |e: &[C64]| -> Vec<C64> { (0..n).map(|k| (0..n).map(|p| inverse[(k, p)] * e[p]).sum()).collect() };
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in i..n {
            let prod = a.mul(&column(i), &column(j)).expect("same algebra");
            let coords = new_coords(prod.coeffs());
            table[i][j] = coords.clone();
            table[j][i] = coords;
        }
    }
    let unit = new_coords(a.unit_coeffs());
    Algebra::from_products(a.basis_names().iter().map(|b| format!("{b}'")).collect(), unit, |i, j| table[i][j].clone())
}
