//! Small fixed arrangements used in tests, docs and the CLI.

use crate::geometry::Arrangement;

/// The reflection arrangement of type `A_3` realized as a complete quadrilateral.
///
/// Lines in increasing slope order `y = -2x`, `y = -2`, `4y = x - 9`, `2y = x - 3`, `y = x`,
/// `y = 2x`. The triple points are `(0,0)`, `(-3,-3)`, `(1,-2)` and `(-1,-2)`.
pub fn a3() -> Arrangement {
    Arrangement::from_ints(&A3_LINES).expect("valid arrangement")
}

pub const A3_LINES: [(i64, i64, i64); 6] = [
    (2, 1, 0),
    (0, 1, 2),
    (1, -4, -9),
    (1, -2, -3),
    (1, -1, 0),
    (2, -1, 0),
];

/// Three lines in general position bounding the triangle with vertices `(0,0)`, `(2,0)`, `(1,1)`.
pub fn generic_triangle() -> Arrangement {
    Arrangement::from_ints(&[(0, 1, 0), (1, -1, 0), (1, 1, -2)]).expect("valid arrangement")
}

/// `n` lines through the origin.
pub fn pencil(n: usize) -> Arrangement {
    let lines: Vec<(i64, i64, i64)> = (0..n as i64).map(|k| (-k, 1, 0)).collect();
    Arrangement::from_ints(&lines).expect("valid arrangement")
}

/// Three lines through the origin and one generic line.
pub fn near_pencil() -> Arrangement {
    Arrangement::from_ints(&[(0, 1, 0), (1, -1, 0), (2, -1, 0), (1, 1, -3)]).expect("valid arrangement")
}
