//! Rank-one local systems given by their monodromy around each line.

use num_complex::Complex64;
use num_integer::Integer;
use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::geometry::Arrangement;

const UNIT_TOLERANCE: f64 = 1e-12;
const PRODUCT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalSystemError {
    #[error("local system has {got} monodromy values for {expected} lines")]
    LengthMismatch { expected: usize, got: usize },
    #[error("monodromy product over all lines is not 1")]
    NotALocalSystem,
    #[error("monodromy around line {0} is trivial")]
    TrivialOnLine(usize),
    #[error("monodromy value on line {0} is not of modulus one")]
    NotUnitary(usize),
    #[error("order must be positive")]
    ZeroOrder,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Monodromy {
    /// `m(l) = zeta_order^exponents[l]`, exponents reduced into `0..order`.
    Exact { order: u32, exponents: Vec<u32> },
    Float { values: Vec<Complex64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalSystem {
    monodromy: Monodromy,
}

impl LocalSystem {
    pub fn exact(order: u32, exponents: &[i64]) -> Result<Self, LocalSystemError> {
        if order == 0 {
            return Err(LocalSystemError::ZeroOrder);
        }
        let exponents = exponents
            .iter()
            .map(|k| k.rem_euclid(order as i64) as u32)
            .collect();
        Ok(LocalSystem {
            monodromy: Monodromy::Exact { order, exponents },
        })
    }

    /// The constant system `zeta_order^exponent` on `n` lines.
    pub fn constant(order: u32, exponent: i64, n: usize) -> Result<Self, LocalSystemError> {
        LocalSystem::exact(order, &vec![exponent; n])
    }

    /// Per-line roots of unity `exp(2 pi i k / d)` given as `(k, d)`; the common order is the lcm.
    pub fn from_roots(roots: &[(i64, u32)]) -> Result<Self, LocalSystemError> {
        if roots.iter().any(|&(_, d)| d == 0) {
            return Err(LocalSystemError::ZeroOrder);
        }
        let order = roots.iter().fold(1u32, |acc, &(_, d)| acc.lcm(&d));
        let exps: Vec<i64> = roots
            .iter()
            .map(|&(k, d)| k * (order / d) as i64)
            .collect();
        LocalSystem::exact(order, &exps)
    }

    pub fn float(values: Vec<Complex64>) -> Self {
        LocalSystem {
            monodromy: Monodromy::Float { values },
        }
    }

    pub fn monodromy(&self) -> &Monodromy {
        &self.monodromy
    }

    pub fn len(&self) -> usize {
        match &self.monodromy {
            Monodromy::Exact { exponents, .. } => exponents.len(),
            Monodromy::Float { values } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.monodromy, Monodromy::Exact { .. })
    }

    /// Common order `d` in exact mode.
    pub fn order(&self) -> Option<u32> {
        match &self.monodromy {
            Monodromy::Exact { order, .. } => Some(*order),
            Monodromy::Float { .. } => None,
        }
    }

    pub fn exponents(&self) -> Option<&[u32]> {
        match &self.monodromy {
            Monodromy::Exact { exponents, .. } => Some(exponents),
            Monodromy::Float { .. } => None,
        }
    }

    /// The same system on a reordered or restricted set of lines: entry `i` of the result is
    /// entry `lines[i]` of `self`.
    pub fn restrict(&self, lines: &[usize]) -> LocalSystem {
        let monodromy = match &self.monodromy {
            Monodromy::Exact { order, exponents } => Monodromy::Exact {
                order: *order,
                exponents: lines.iter().map(|&l| exponents[l]).collect(),
            },
            Monodromy::Float { values } => Monodromy::Float {
                values: lines.iter().map(|&l| values[l]).collect(),
            },
        };
        LocalSystem { monodromy }
    }

    /// `m(l)` for every line, embedded in `F`.
    pub fn values<F: Field>(&self) -> Result<Vec<F>, FieldError> {
        match &self.monodromy {
            Monodromy::Exact { order, exponents } => exponents
                .iter()
                .map(|&k| F::root_of_unity(*order, k as i64))
                .collect(),
            Monodromy::Float { values } => values.iter().map(|&z| F::from_complex(z)).collect(),
        }
    }

    /// Numeric monodromy values, whatever the mode.
    pub fn complex_values(&self) -> Vec<Complex64> {
        self.values::<Complex64>().expect("complex embedding always exists")
    }

    /// True when the monodromy product over `lines` is one.
    pub fn product_is_one(&self, lines: &[usize]) -> bool {
        match &self.monodromy {
            Monodromy::Exact { order, exponents } => {
                lines.iter().map(|&l| exponents[l] as u64).sum::<u64>() % *order as u64 == 0
            }
            Monodromy::Float { values } => {
                let prod: Complex64 = lines.iter().map(|&l| values[l]).product();
                (prod - Complex64::new(1.0, 0.0)).norm() <= PRODUCT_TOLERANCE
            }
        }
    }

    fn is_trivial_on(&self, l: usize) -> bool {
        match &self.monodromy {
            Monodromy::Exact { exponents, .. } => exponents[l] == 0,
            Monodromy::Float { values } => (values[l] - Complex64::new(1.0, 0.0)).norm() <= PRODUCT_TOLERANCE,
        }
    }
}

/// Checks the product-one constraint and nontriviality on every line.
pub fn validate(ls: &LocalSystem, arr: &Arrangement) -> Result<(), LocalSystemError> {
    if ls.len() != arr.len() {
        return Err(LocalSystemError::LengthMismatch {
            expected: arr.len(),
            got: ls.len(),
        });
    }
    if let Monodromy::Float { values } = &ls.monodromy {
        if let Some(l) = values.iter().position(|z| (z.norm() - 1.0).abs() > UNIT_TOLERANCE) {
            return Err(LocalSystemError::NotUnitary(l));
        }
    }
    let all: Vec<usize> = (0..ls.len()).collect();
    if !ls.product_is_one(&all) {
        return Err(LocalSystemError::NotALocalSystem);
    }
    if let Some(l) = (0..ls.len()).find(|&l| ls.is_trivial_on(l)) {
        return Err(LocalSystemError::TrivialOnLine(l));
    }
    Ok(())
}

/// Resonant points: multiplicity at least three and trivial local monodromy product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonantSet {
    pub points: Vec<usize>,
    /// For each line, the resonant points on it, in the line's point order.
    pub per_line: Vec<Vec<usize>>,
}

impl ResonantSet {
    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    pub fn on_line(&self, l: usize) -> &[usize] {
        &self.per_line[l]
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn resonant_points(arr: &Arrangement, ls: &LocalSystem) -> ResonantSet {
    let points: Vec<usize> = arr
        .points()
        .iter()
        .filter(|p| p.multiplicity() >= 3 && ls.product_is_one(&p.lines))
        .map(|p| p.id)
        .collect();
    let per_line = (0..arr.len())
        .map(|l| {
            arr.points_on(l)
                .iter()
                .copied()
                .filter(|p| points.binary_search(p).is_ok())
                .collect()
        })
        .collect();
    ResonantSet { points, per_line }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Cyclo;
    use num_traits::One;

    fn near_pencil() -> Arrangement {
        Arrangement::from_ints(&[(0, 1, 0), (1, -1, 0), (2, -1, 0), (1, 1, -3)]).unwrap()
    }

    #[test]
    fn constant_system_admissibility() {
        let arr = near_pencil();
        assert_eq!(validate(&LocalSystem::constant(4, 1, 4).unwrap(), &arr), Ok(()));
        assert_eq!(
            validate(&LocalSystem::constant(3, 1, 4).unwrap(), &arr),
            Err(LocalSystemError::NotALocalSystem)
        );
    }

    #[test]
    fn mixed_exponents() {
        let arr = Arrangement::from_ints(&[(0, 1, 0), (1, -1, 0), (1, 1, -2)]).unwrap();
        let ls = LocalSystem::exact(6, &[1, 1, -2]).unwrap();
        assert_eq!(validate(&ls, &arr), Ok(()));
        let trivial = LocalSystem::exact(6, &[1, 5, 0]).unwrap();
        assert_eq!(validate(&trivial, &arr), Err(LocalSystemError::TrivialOnLine(2)));
        let short = LocalSystem::exact(6, &[1, 5]).unwrap();
        assert!(matches!(validate(&short, &arr), Err(LocalSystemError::LengthMismatch { .. })));
    }

    #[test]
    fn generic_lines_have_no_resonance() {
        let arr = Arrangement::from_ints(&[(0, 1, 0), (1, -1, 0), (1, 1, -2)]).unwrap();
        let ls = LocalSystem::constant(3, 1, 3).unwrap();
        assert!(resonant_points(&arr, &ls).is_empty());
    }

    #[test]
    fn near_pencil_with_zeta4_is_not_resonant() {
        let arr = near_pencil();
        let ls = LocalSystem::constant(4, 1, 4).unwrap();
        assert!(resonant_points(&arr, &ls).is_empty());
        // with exponents making the triple point's product trivial it becomes resonant
        let ls = LocalSystem::exact(4, &[1, 1, 2, 0]).unwrap();
        let r = resonant_points(&arr, &ls);
        assert_eq!(r.points.len(), 1);
        assert_eq!(r.on_line(3), &[] as &[usize]);
        assert_eq!(r.on_line(0), r.points.as_slice());
    }

    #[test]
    fn constant_resonance_rule() {
        // p resonant iff mult >= 3 and d | mult
        let arr = Arrangement::from_ints(&[(0, 1, 0), (1, -1, 0), (2, -1, 0), (3, -1, 0), (1, 1, -3), (1, 2, -3)])
            .unwrap();
        for d in 2..=6u32 {
            let ls = LocalSystem::constant(d, 1, arr.len()).unwrap();
            let r = resonant_points(&arr, &ls);
            for p in arr.points() {
                let expect = p.multiplicity() >= 3 && (p.multiplicity() as u32).is_multiple_of(d);
                assert_eq!(r.contains(p.id), expect);
            }
        }
    }

    #[test]
    fn float_mode() {
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let ls = LocalSystem::float(vec![w, w, w]);
        let arr = Arrangement::from_ints(&[(0, 1, 0), (1, -1, 0), (2, -1, 0)]).unwrap();
        assert_eq!(validate(&ls, &arr), Ok(()));
        assert_eq!(resonant_points(&arr, &ls).points, vec![0]);
        assert_eq!(ls.values::<Cyclo>(), Err(FieldError::ModeMismatch));
        let bad = LocalSystem::float(vec![w * 1.1, w, w]);
        assert_eq!(validate(&bad, &arr), Err(LocalSystemError::NotUnitary(0)));
    }

    #[test]
    fn lcm_of_orders() {
        let ls = LocalSystem::from_roots(&[(1, 2), (1, 3), (1, 6)]).unwrap();
        assert_eq!(ls.order(), Some(6));
        assert_eq!(ls.exponents(), Some(&[3u32, 2, 1][..]));
        let vals: Vec<Cyclo> = ls.values().unwrap();
        let prod = vals.into_iter().fold(Cyclo::one(), |a, b| a * b);
        assert_eq!(prod, Cyclo::one());
    }
}
