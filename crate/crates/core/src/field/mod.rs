//! Exact and floating-point scalar fields used by every matrix computation.
//!
//! The [`Field`] trait abstracts over `Q(zeta_d)` ([`Cyclo`]), `Q`
//! (`BigRational`) and `Complex<f32/f64>`. Exact fields compute rank by
//! fraction-free elimination; floating-point fields by partial pivoting with
//! a relative tolerance.

mod cyclo;
mod matrix;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, One, Zero};
use thiserror::Error;

pub use cyclo::{cyclotomic_polynomial, euler_phi, Cyclo, CycloCtx};
pub use matrix::{Matrix, DEFAULT_FLOAT_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("cyclotomic orders differ: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix mixes exact and floating-point scalars")]
    ModeMismatch,
    #[error("zeta_{0}^{1} is not representable in this field")]
    Unrepresentable(u32, i64),
}

/// A commutative field with the operations the homology engine needs.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True for fields with exact equality.
    const EXACT: bool;

    fn inverse(&self) -> Result<Self, FieldError>;

    fn from_i64(n: i64) -> Self;

    /// `zeta_order^exponent`, where `zeta_order = exp(2 pi i / order)`.
    fn root_of_unity(order: u32, exponent: i64) -> Result<Self, FieldError>;

    /// Embeds an arbitrary complex number; only floating-point fields accept this.
    fn from_complex(_z: num_complex::Complex64) -> Result<Self, FieldError> {
        Err(FieldError::ModeMismatch)
    }

    /// Rank of a matrix over this field.
    fn rank_of(matrix: &Matrix<Self>) -> usize;

    /// Equality up to the field's notion of tolerance.
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    /// Nonzero factor that makes every entry of `row` integral, when meaningful.
    fn integral_scale(_row: &[Self]) -> Self {
        Self::one()
    }
}

impl Field for Cyclo {
    const EXACT: bool = true;

    fn inverse(&self) -> Result<Self, FieldError> {
        Cyclo::inverse(self)
    }

    fn from_i64(n: i64) -> Self {
        Cyclo::from_integer(n)
    }

    fn root_of_unity(order: u32, exponent: i64) -> Result<Self, FieldError> {
        Ok(Cyclo::root_of_unity(order, exponent))
    }

    fn rank_of(matrix: &Matrix<Self>) -> usize {
        matrix.bareiss_rank()
    }

    fn integral_scale(row: &[Self]) -> Self {
        let lcm = row
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()));
        Cyclo::from_rational(BigRational::from_integer(lcm))
    }
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }

    fn root_of_unity(order: u32, exponent: i64) -> Result<Self, FieldError> {
        let k = exponent.rem_euclid(order as i64);
        if k == 0 {
            Ok(Self::one())
        } else if 2 * k == order as i64 {
            Ok(-Self::one())
        } else {
            Err(FieldError::Unrepresentable(order, exponent))
        }
    }

    fn rank_of(matrix: &Matrix<Self>) -> usize {
        matrix.bareiss_rank()
    }

    fn integral_scale(row: &[Self]) -> Self {
        let lcm = row
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
        BigRational::from_integer(lcm)
    }
}

impl<T> Field for Complex<T>
where
    T: Float + FloatConst + Debug + Send + Sync + 'static,
{
    const EXACT: bool = false;

    fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.inv())
        }
    }

    fn from_i64(n: i64) -> Self {
        Complex::new(T::from(n).expect("integer fits the float type"), T::zero())
    }

    fn root_of_unity(order: u32, exponent: i64) -> Result<Self, FieldError> {
        let k = exponent.rem_euclid(order as i64);
        let turn = T::from(k).unwrap() / T::from(order).unwrap();
        Ok(Complex::from_polar(T::one(), T::TAU() * turn))
    }

    fn from_complex(z: num_complex::Complex64) -> Result<Self, FieldError> {
        Ok(Complex::new(T::from(z.re).unwrap(), T::from(z.im).unwrap()))
    }

    fn rank_of(matrix: &Matrix<Self>) -> usize {
        matrix.pivoted_rank(default_tolerance::<T>())
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let scale = T::one().max(self.norm()).max(other.norm());
        (*self - *other).norm() <= default_tolerance::<T>() * scale
    }
}

/// Relative pivot tolerance: `1e-9`, loosened to `1e3 * epsilon` for short floats.
pub fn default_tolerance<T: Float>() -> T {
    let base = T::from(DEFAULT_FLOAT_TOLERANCE).unwrap();
    base.max(T::epsilon() * T::from(1e3).unwrap())
}

/// A scalar tagged with its arithmetic mode, for callers that mix both at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldScalar {
    Exact(Cyclo),
    Float(num_complex::Complex64),
}

/// Rank of a matrix of tagged scalars; every entry must share one mode.
pub fn rank_tagged(rows: &[Vec<FieldScalar>]) -> Result<usize, FieldError> {
    let exact = rows
        .iter()
        .flatten()
        .next()
        .map(|s| matches!(s, FieldScalar::Exact(_)));
    let cols = rows.first().map_or(0, Vec::len);
    match exact {
        None => Ok(0),
        Some(true) => {
            let mut order: Option<u32> = None;
            let mut m = Matrix::zeros(0, cols);
            for row in rows {
                let mut out = Vec::with_capacity(row.len());
                for s in row {
                    match s {
                        FieldScalar::Exact(c) => {
                            if euler_phi(c.order()) > 1 {
                                match order {
                                    Some(d) if d != c.order() => {
                                        return Err(FieldError::OrderMismatch(d, c.order()))
                                    }
                                    _ => order = Some(c.order()),
                                }
                            }
                            out.push(c.clone());
                        }
                        FieldScalar::Float(_) => return Err(FieldError::ModeMismatch),
                    }
                }
                m.push_row(out);
            }
            Ok(m.rank())
        }
        Some(false) => {
            let mut m = Matrix::zeros(0, cols);
            for row in rows {
                let out = row
                    .iter()
                    .map(|s| match s {
                        FieldScalar::Float(z) => Ok(*z),
                        FieldScalar::Exact(_) => Err(FieldError::ModeMismatch),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                m.push_row(out);
            }
            Ok(m.rank())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::{Complex32, Complex64};

    #[test]
    fn rational_roots_of_unity() {
        assert_eq!(BigRational::root_of_unity(2, 3).unwrap(), BigRational::from_i64(-1));
        assert_eq!(BigRational::root_of_unity(6, 6).unwrap(), BigRational::one());
        assert_eq!(
            BigRational::root_of_unity(3, 1),
            Err(FieldError::Unrepresentable(3, 1))
        );
    }

    #[test]
    fn complex_roots_of_unity() {
        let w = Complex64::root_of_unity(3, 1).unwrap();
        let one = w * w * w;
        assert!(one.approx_eq(&Complex64::one()));
        let w32 = Complex32::root_of_unity(4, 1).unwrap();
        assert!((w32 - Complex32::i()).norm() < 1e-6);
    }

    #[test]
    fn tagged_rank_rejects_mixed_modes() {
        let rows = vec![
            vec![FieldScalar::Exact(Cyclo::one()), FieldScalar::Exact(Cyclo::zero())],
            vec![FieldScalar::Float(Complex64::one()), FieldScalar::Exact(Cyclo::zero())],
        ];
        assert_eq!(rank_tagged(&rows), Err(FieldError::ModeMismatch));
    }

    #[test]
    fn tagged_rank_rejects_mixed_orders() {
        let rows = vec![vec![
            FieldScalar::Exact(Cyclo::zeta(3)),
            FieldScalar::Exact(Cyclo::zeta(4)),
        ]];
        assert_eq!(rank_tagged(&rows), Err(FieldError::OrderMismatch(3, 4)));
    }

    #[test]
    fn tagged_rank_both_modes() {
        let exact = vec![
            vec![FieldScalar::Exact(Cyclo::one()), FieldScalar::Exact(Cyclo::zeta(3))],
            vec![
                FieldScalar::Exact(Cyclo::zeta(3)),
                FieldScalar::Exact(Cyclo::root_of_unity(3, 2)),
            ],
        ];
        assert_eq!(rank_tagged(&exact), Ok(1));
        let float = vec![vec![FieldScalar::Float(Complex64::one())]];
        assert_eq!(rank_tagged(&float), Ok(1));
        assert_eq!(rank_tagged(&[]), Ok(0));
    }
}
