//! Numerical Gelfand theory for finite-dimensional commutative unital complex
//! algebras, and vector-valued spectra of algebra-valued functions on finite
//! point sets.
//!
//! Every spectrum is computed two ways, from characters and from ideal
//! membership, and the two answers are checked against each other.

pub mod algebra;
pub mod analysis;
pub mod error;
pub mod gallery;
pub mod gelfand;
pub mod io;
pub mod linalg;
pub mod lipschitz;
pub mod random;
pub mod set;
pub mod tolerance;
pub mod vvfa;

pub use algebra::{Algebra, AlgebraId, Diagnostics, Element, Semisimplicity};
pub use error::{Error, Result};
pub use gelfand::{Character, CharacterSet, SubspaceBasis};
pub use linalg::C64;
pub use lipschitz::FiniteMetric;
pub use set::{SpectralPoint, SpectrumSet};
pub use tolerance::Tolerances;
pub use vvfa::{ACharacter, AValuedFunction, Certificate, FiniteSpace, ScalarFunction};
