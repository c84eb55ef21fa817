use num_traits::{One, Zero};

use super::line::{int, Line, ProjPoint};
use crate::Rational;

pub type Mat3 = [[Rational; 3]; 3];

/// An invertible real projective transformation, acting on column vectors of homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projectivity {
    matrix: Mat3,
    inverse: Mat3,
}

impl Projectivity {
    pub fn identity() -> Self {
        let id = identity3();
        Projectivity {
            matrix: id.clone(),
            inverse: id,
        }
    }

    /// `None` when the matrix is singular.
    pub fn new(matrix: Mat3) -> Option<Self> {
        let det = det3(&matrix);
        if det.is_zero() {
            return None;
        }
        let mut inverse = identity3();
        for (i, row) in inverse.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = cofactor(&matrix, j, i) / &det;
            }
        }
        Some(Projectivity { matrix, inverse })
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Option<Self> {
        Projectivity::new(m.map(|row| row.map(int)))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Mat3 {
        &self.inverse
    }

    pub fn inverse(&self) -> Projectivity {
        Projectivity {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    /// The map "apply `first`, then `self`".
    pub fn after(&self, first: &Projectivity) -> Projectivity {
        Projectivity {
            matrix: mul3(&self.matrix, &first.matrix),
            inverse: mul3(&first.inverse, &self.inverse),
        }
    }

    pub fn apply_point(&self, p: &ProjPoint) -> ProjPoint {
        let v = [&p.x, &p.y, &p.z];
        let out: Vec<Rational> = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect();
        let [x, y, z]: [Rational; 3] = out.try_into().unwrap();
        ProjPoint::new(x, y, z).expect("invertible map sends points to points")
    }

    /// Image of a line: the row vector `l * T^-1`.
    pub fn apply_line(&self, l: &Line) -> Line {
        let v = l.coefficients();
        let coef = |j: usize| -> Rational { (0..3).map(|i| v[i] * &self.inverse[i][j]).sum() };
        Line::new(coef(0), coef(1), coef(2)).expect("invertible map sends lines to lines")
    }

    /// The line sent to the line at infinity.
    pub fn line_sent_to_infinity(&self) -> Line {
        let [a, b, c] = self.matrix[2].clone();
        Line::new(a, b, c).expect("invertible")
    }
}

fn identity3() -> Mat3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { Rational::one() } else { Rational::zero() })
    })
}

fn mul3(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum()))
}

fn minor(m: &Mat3, i: usize, j: usize) -> Rational {
    let r: Vec<usize> = (0..3).filter(|&k| k != i).collect();
    let c: Vec<usize> = (0..3).filter(|&k| k != j).collect();
    &m[r[0]][c[0]] * &m[r[1]][c[1]] - &m[r[0]][c[1]] * &m[r[1]][c[0]]
}

fn cofactor(m: &Mat3, i: usize, j: usize) -> Rational {
    let v = minor(m, i, j);
    if (i + j).is_multiple_of(2) {
        v
    } else {
        -v
    }
}

pub fn det3(m: &Mat3) -> Rational {
    (0..3).map(|j| &m[0][j] * cofactor(m, 0, j)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Projectivity {
        Projectivity::from_ints([[2, 1, 0], [0, 1, 3], [1, 0, 1]]).unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let t = sample();
        let p = ProjPoint::affine(int(3), int(-5));
        assert_eq!(t.inverse().apply_point(&t.apply_point(&p)), p);
        assert_eq!(t.after(&t.inverse()), Projectivity::identity());
    }

    #[test]
    fn incidence_is_preserved() {
        let t = sample();
        let l = Line::from_ints(1, -2, 7).unwrap();
        let p = ProjPoint::affine(int(1), int(4));
        assert_eq!(l.eval(&p), int(0));
        assert_eq!(t.apply_line(&l).eval(&t.apply_point(&p)), int(0));
    }

    #[test]
    fn singular_matrix_rejected() {
        assert!(Projectivity::from_ints([[1, 2, 3], [2, 4, 6], [0, 0, 1]]).is_none());
    }

    #[test]
    fn line_at_infinity_preimage() {
        let t = sample();
        let l = t.line_sent_to_infinity();
        assert!(t.apply_line(&l).is_at_infinity());
    }
}
