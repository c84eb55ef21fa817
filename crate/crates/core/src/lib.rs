//! Twisted first Betti numbers of complexified real line arrangements.
//!
//! Geometry is exact over `Q`; linear algebra is generic over [`Field`], with `Q(zeta_d)` for
//! exact results and `Complex<f64>` as a floating-point cross-check.

pub mod analysis;
pub mod bounds;
pub mod field;
pub mod fuzz;
pub mod geometry;
pub mod homology;
pub mod local_system;
pub mod oracle;
pub mod samples;

pub use field::{Cyclo, Field, FieldError, Matrix};

pub type Rational = num_rational::BigRational;
pub type ExactMatrix = Matrix<Cyclo>;
pub type FloatMatrix = Matrix<num_complex::Complex64>;
pub type ExactInstance = homology::Instance<Cyclo>;
pub type FloatInstance = homology::Instance<num_complex::Complex64>;
