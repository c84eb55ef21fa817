use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// A real line `a x + b y + c z = 0` in the projective plane, with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Line {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Line {
    /// Returns `None` for the zero triple.
    pub fn new(a: Rational, b: Rational, c: Rational) -> Option<Self> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            None
        } else {
            Some(Line { a, b, c })
        }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Option<Self> {
        Line::new(int(a), int(b), int(c))
    }

    /// The affine line `y = slope * x + intercept`.
    pub fn from_slope_intercept(slope: Rational, intercept: Rational) -> Self {
        Line {
            a: -slope,
            b: Rational::one(),
            c: -intercept,
        }
    }

    /// The affine line through two distinct affine points.
    pub fn through(p: (&Rational, &Rational), q: (&Rational, &Rational)) -> Option<Self> {
        let a = q.1 - p.1;
        let b = p.0 - q.0;
        let c = -(&a * p.0 + &b * p.1);
        Line::new(a, b, c)
    }

    pub fn coefficients(&self) -> [&Rational; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// True for the line at infinity `z = 0`.
    pub fn is_at_infinity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero() && !self.a.is_zero()
    }

    /// `s` in `y = s x + b0`; `None` for vertical lines and the line at infinity.
    pub fn slope(&self) -> Option<Rational> {
        (!self.b.is_zero()).then(|| -&self.a / &self.b)
    }

    /// `b0` in `y = s x + b0`.
    pub fn intercept(&self) -> Option<Rational> {
        (!self.b.is_zero()).then(|| -&self.c / &self.b)
    }

    /// The homogeneous form at a projective point.
    pub fn eval(&self, p: &ProjPoint) -> Rational {
        &self.a * &p.x + &self.b * &p.y + &self.c * &p.z
    }

    /// The affine form `a x + b y + c` at `(x, y)`.
    pub fn eval_affine(&self, x: &Rational, y: &Rational) -> Rational {
        &self.a * x + &self.b * y + &self.c
    }

    /// `Q_l(x, y) = y - s x - b0` for a non-vertical line.
    pub fn q_value(&self, x: &Rational, y: &Rational) -> Rational {
        self.eval_affine(x, y) / &self.b
    }

    /// Representative with first nonzero coefficient equal to one.
    pub fn canonical(&self) -> Line {
        let lead = [&self.a, &self.b, &self.c]
            .into_iter()
            .find(|c| !c.is_zero())
            .expect("nonzero line")
            .clone();
        Line {
            a: &self.a / &lead,
            b: &self.b / &lead,
            c: &self.c / &lead,
        }
    }

    pub fn same_as(&self, other: &Line) -> bool {
        self.canonical() == other.canonical()
    }

    /// Intersection point, or `None` when the lines coincide.
    pub fn meet(&self, other: &Line) -> Option<ProjPoint> {
        let x = &self.b * &other.c - &self.c * &other.b;
        let y = &self.c * &other.a - &self.a * &other.c;
        let z = &self.a * &other.b - &self.b * &other.a;
        ProjPoint::new(x, y, z)
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// A point of the real projective plane, stored with its last nonzero coordinate equal to one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl ProjPoint {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Option<Self> {
        let lead = [&z, &y, &x].into_iter().find(|c| !c.is_zero())?.clone();
        Some(ProjPoint {
            x: x / &lead,
            y: y / &lead,
            z: z / &lead,
        })
    }

    pub fn affine(x: Rational, y: Rational) -> Self {
        ProjPoint {
            x,
            y,
            z: Rational::one(),
        }
    }

    pub fn is_finite(&self) -> bool {
        !self.z.is_zero()
    }

    /// Affine coordinates when the point is finite.
    pub fn xy(&self) -> Option<(&Rational, &Rational)> {
        self.is_finite().then_some((&self.x, &self.y))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "({}, {})", self.x, self.y)
        } else {
            write!(f, "[{} : {} : 0]", self.x, self.y)
        }
    }
}

pub(crate) fn int(n: i64) -> Rational {
    BigRational::from_integer(n.into())
}

pub(crate) fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}
