//! Combinatorial upper bounds for `h_1` and the neighbor certificate behind the `#R_0 - 1` bound.

use std::collections::BTreeMap;

use num_integer::Integer;
use thiserror::Error;

use crate::field::{Field, Matrix};
use crate::geometry::{sharp_pairs, Arrangement, NormalizeOptions, Profile};
use crate::homology::{HomologyError, Instance};
use crate::local_system::{resonant_points, validate, LocalSystem, LocalSystemError, Monodromy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    LocalSystem(#[from] LocalSystemError),
    #[error("line {0} is not in the arrangement")]
    UnknownLine(usize),
    #[error("the arrangement is a pencil; the bound does not apply")]
    PencilNotCovered,
}

fn check_line(arr: &Arrangement, l0: usize) -> Result<(), BoundsError> {
    if l0 >= arr.len() {
        Err(BoundsError::UnknownLine(l0))
    } else {
        Ok(())
    }
}

/// Resonant points on `l0`.
pub fn resonant_on_line(arr: &Arrangement, ls: &LocalSystem, l0: usize) -> Vec<usize> {
    resonant_points(arr, ls).on_line(l0).to_vec()
}

/// `sum over resonant p on l0 of (mult(p) - 2)`.
pub fn cdo_bound(arr: &Arrangement, ls: &LocalSystem, l0: usize) -> Result<usize, BoundsError> {
    check_line(arr, l0)?;
    validate(ls, arr)?;
    Ok(resonant_on_line(arr, ls, l0)
        .iter()
        .map(|&p| arr.point(p).multiplicity() - 2)
        .sum())
}

/// `max(0, #R_0 - 1)`; only meaningful when the arrangement has more than one point.
pub fn r0_bound(arr: &Arrangement, ls: &LocalSystem, l0: usize) -> Result<usize, BoundsError> {
    check_line(arr, l0)?;
    validate(ls, arr)?;
    if arr.points().len() <= 1 {
        return Err(BoundsError::PencilNotCovered);
    }
    Ok(resonant_on_line(arr, ls, l0).len().saturating_sub(1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBounds {
    pub line: usize,
    pub resonant_points: usize,
    pub cdo: usize,
    /// `None` for pencils.
    pub r0: Option<usize>,
}

pub fn line_bounds(arr: &Arrangement, ls: &LocalSystem) -> Result<Vec<LineBounds>, BoundsError> {
    (0..arr.len())
        .map(|l| {
            let r0 = match r0_bound(arr, ls, l) {
                Ok(b) => Some(b),
                Err(BoundsError::PencilNotCovered) => None,
                Err(e) => return Err(e),
            };
            Ok(LineBounds {
                line: l,
                resonant_points: resonant_on_line(arr, ls, l).len(),
                cdo: cdo_bound(arr, ls, l)?,
                r0,
            })
        })
        .collect()
}

/// Smallest bound over all lines, using both formulas where they apply.
pub fn best_bound(bounds: &[LineBounds]) -> Option<usize> {
    bounds
        .iter()
        .map(|b| b.r0.map_or(b.cdo, |r| r.min(b.cdo)))
        .min()
}

#[derive(Clone, Debug)]
pub struct BetaCertificate<F> {
    pub line: usize,
    /// Resonant points on the line, in the adapted frame's x order.
    pub r0: Vec<usize>,
    /// Lines other than `l0` through a point of `r0`.
    pub a_prime: Vec<usize>,
    /// `(l, q(l))` for every line other than `l0`.
    pub neighbor_of: Vec<(usize, usize)>,
    /// The points `q(l)` for `l` in `a_prime`, sorted.
    pub n_set: Vec<usize>,
    /// `beta(q)` for each `q` in `n_set`, in the angle basis of the adapted frame.
    pub betas: Vec<(usize, Vec<F>)>,
    /// Pairwise differences `alpha(l_i) - alpha(l_j)` at non-resonant neighbors.
    pub differences: Vec<(usize, usize, Vec<F>)>,
    pub relation_rank: usize,
    pub dim_a: usize,
    pub betas_in_k: bool,
    pub differences_in_k: bool,
    pub family_rank: usize,
    /// `K + A' = A`, so `h_1 = dim A' - dim (K n A')`.
    pub reduces_to_line: bool,
    pub h1: usize,
}

impl<F> BetaCertificate<F> {
    pub fn independent(&self) -> bool {
        self.family_rank == self.n_set.len()
    }

    /// `#N >= #A' - #R_0 + 1` when `R_0` is nonempty.
    pub fn count_ok(&self) -> bool {
        self.r0.is_empty() || self.n_set.len() + self.r0.len() > self.a_prime.len()
    }

    /// `#A' - #N`, an upper bound for `h_1`.
    pub fn dimension_bound(&self) -> usize {
        self.a_prime.len().saturating_sub(self.n_set.len())
    }

    pub fn holds(&self) -> bool {
        self.betas_in_k
            && self.differences_in_k
            && self.independent()
            && self.count_ok()
            && self.reduces_to_line
            && self.h1 <= self.dimension_bound()
    }
}

fn rank_with<F: Field>(base: &Matrix<F>, extra: &[&[F]]) -> usize {
    let mut m = base.clone();
    for row in extra {
        m.push_row(row.to_vec());
    }
    m.rank()
}

fn axpy<F: Field>(acc: &mut [F], c: &F, v: &[F]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = a.clone() + c.clone() * x.clone();
    }
}

/// Builds and checks the neighbor certificate for `l0` in a frame where `l0` is `y = 0`, every
/// slope is non-negative and every point has `y >= 0`.
pub fn beta_certificate<F: Field>(
    arr: &Arrangement,
    ls: &LocalSystem,
    l0: usize,
    seed: u64,
) -> Result<BetaCertificate<F>, BoundsError> {
    check_line(arr, l0)?;
    validate(ls, arr)?;
    if arr.points().len() <= 1 {
        return Err(BoundsError::PencilNotCovered);
    }
    let inst = Instance::<F>::with_profile(arr, ls, Profile::LineAdapted(l0), seed, &NormalizeOptions::default())?;
    let a = &inst.arrangement;
    let dim = inst.basis.dim();
    let (_, k) = inst.relation_matrix()?;
    let relation_rank = k.rank();

    let r0 = inst.resonant.on_line(l0).to_vec();
    let mut alpha: BTreeMap<usize, Vec<F>> = BTreeMap::new();
    for &p in &r0 {
        let lines = &a.point(p).lines;
        debug_assert_eq!(lines[0], l0);
        let mut acc = vec![F::zero(); dim];
        for (i, &l) in lines.iter().enumerate().skip(1) {
            let col = inst.basis.column(p, i - 1).expect("angle at resonant point");
            acc[col] = F::one();
            alpha.insert(l, acc.clone());
        }
    }
    let a_prime: Vec<usize> = alpha.keys().copied().collect();
    let zero = vec![F::zero(); dim];
    let alpha_of = |l: usize| alpha.get(&l).unwrap_or(&zero);

    let neighbor_of: Vec<(usize, usize)> = (0..a.len())
        .filter(|&l| l != l0)
        .map(|l| {
            let q = a
                .points_on(l)
                .iter()
                .copied()
                .filter(|&p| !a.point(p).contains(l0))
                .min_by(|&p, &q| a.point(p).xy().1.cmp(a.point(q).xy().1))
                .expect("non-pencil: every line has a point off l0");
            (l, q)
        })
        .collect();
    let mut n_set: Vec<usize> = neighbor_of
        .iter()
        .filter(|(l, _)| alpha.contains_key(l))
        .map(|&(_, q)| q)
        .collect();
    n_set.sort_unstable();
    n_set.dedup();

    let mut betas = Vec::new();
    let mut differences = Vec::new();
    for &q in &n_set {
        let lines = &a.point(q).lines;
        let mut beta = vec![F::zero(); dim];
        if inst.resonant.contains(q) {
            let mut prefix = F::one();
            for &l in lines {
                let m = inst.value(l).clone();
                prefix = prefix * m.clone();
                let c = (m - F::one()) * prefix.inverse().map_err(HomologyError::from)?;
                axpy(&mut beta, &c, alpha_of(l));
            }
        } else {
            let kq = F::from_i64(lines.len() as i64);
            axpy(&mut beta, &kq, alpha_of(lines[0]));
            for &l in lines {
                axpy(&mut beta, &-F::one(), alpha_of(l));
            }
            for (i, &li) in lines.iter().enumerate() {
                for &lj in &lines[i + 1..] {
                    let mut d = alpha_of(li).clone();
                    axpy(&mut d, &-F::one(), alpha_of(lj));
                    differences.push((li, lj, d));
                }
            }
        }
        betas.push((q, beta));
    }

    let betas_in_k = betas.iter().all(|(_, b)| rank_with(&k, &[b]) == relation_rank);
    let differences_in_k = differences.iter().all(|(_, _, d)| rank_with(&k, &[d]) == relation_rank);
    let family_rank = Matrix::from_rows(betas.iter().map(|(_, b)| b.clone()).collect(), dim).rank();
    let alpha_rows: Vec<&[F]> = alpha.values().map(Vec::as_slice).collect();
    let reduces_to_line = rank_with(&k, &alpha_rows) == dim;

    Ok(BetaCertificate {
        line: l0,
        r0,
        a_prime,
        neighbor_of,
        n_set,
        betas,
        differences,
        relation_rank,
        dim_a: dim,
        betas_in_k,
        differences_in_k,
        family_rank,
        reduces_to_line,
        h1: dim - relation_rank,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpPairReport {
    pub pairs: Vec<(usize, usize)>,
    pub h1: usize,
    /// Some sharp pair exists, so `h_1 <= 1` is expected.
    pub at_most_one_applies: bool,
    pub at_most_one_holds: bool,
    /// Effective order of a constant system, if the system is constant.
    pub constant_order: Option<u32>,
    /// Sharp pair, constant system of even order `d` with `d | n`, so `h_1 = 0` is expected.
    pub vanishing_applies: bool,
    pub vanishing_holds: bool,
}

impl SharpPairReport {
    pub fn holds(&self) -> bool {
        (!self.at_most_one_applies || self.at_most_one_holds) && (!self.vanishing_applies || self.vanishing_holds)
    }
}

/// The order of `zeta` when every line carries the same value `zeta`.
pub fn constant_order(ls: &LocalSystem) -> Option<u32> {
    match ls.monodromy() {
        Monodromy::Exact { order, exponents } => {
            let k = *exponents.first()?;
            if exponents.iter().all(|&e| e == k) && k != 0 {
                Some(order / order.gcd(&k))
            } else {
                None
            }
        }
        Monodromy::Float { .. } => None,
    }
}

/// Checks the sharp-pair statements against an already computed `h1`. In a pencil every pair is
/// vacuously sharp, so the statements are only applied when there are at least two points.
pub fn sharp_pair_report(arr: &Arrangement, ls: &LocalSystem, h1: usize) -> SharpPairReport {
    let pairs = sharp_pairs(arr);
    let applies = !pairs.is_empty() && arr.points().len() > 1;
    let order = constant_order(ls);
    let vanishing_applies =
        applies && order.is_some_and(|d| d >= 2 && d % 2 == 0 && arr.len().is_multiple_of(d as usize));
    SharpPairReport {
        pairs,
        h1,
        at_most_one_applies: applies,
        at_most_one_holds: h1 <= 1,
        constant_order: order,
        vanishing_applies,
        vanishing_holds: h1 == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Cyclo;
    use crate::homology::h1;
    use crate::samples::{a3, generic_triangle, pencil};

    #[test]
    fn a3_line_bounds() {
        let arr = a3();
        let ls = LocalSystem::constant(3, 1, 6).unwrap();
        for b in line_bounds(&arr, &ls).unwrap() {
            assert_eq!(b.resonant_points, 2);
            assert_eq!(b.cdo, 2);
            assert_eq!(b.r0, Some(1));
        }
        let trivial = LocalSystem::constant(2, 1, 6).unwrap();
        assert_eq!(cdo_bound(&arr, &trivial, 0), Ok(0));
        assert_eq!(r0_bound(&arr, &trivial, 0), Ok(0));
    }

    #[test]
    fn pencil_bound_not_covered() {
        let arr = pencil(4);
        let ls = LocalSystem::constant(4, 1, 4).unwrap();
        assert_eq!(r0_bound(&arr, &ls, 0), Err(BoundsError::PencilNotCovered));
        assert_eq!(cdo_bound(&arr, &ls, 0), Ok(2));
        assert_eq!(h1::<Cyclo>(&arr, &ls, 0).unwrap().h1, 2);
        assert_eq!(cdo_bound(&arr, &ls, 9), Err(BoundsError::UnknownLine(9)));
    }

    #[test]
    fn three_resonant_points_on_a_line() {
        // l0 = {y = 0} meets three triple points
        let arr = Arrangement::from_ints(&[
            (0, 1, 0),
            (1, -1, 0),
            (1, 1, 0),
            (1, -1, -4),
            (1, 1, -4),
            (1, -1, 4),
            (1, 1, 4),
        ])
        .unwrap();
        let ls = LocalSystem::exact(4, &[2, 1, 1, 3, 3, 1, 1]).unwrap();
        assert_eq!(resonant_on_line(&arr, &ls, 0).len(), 3);
        assert_eq!(r0_bound(&arr, &ls, 0), Ok(2));
        assert_eq!(cdo_bound(&arr, &ls, 0), Ok(3));
    }

    #[test]
    fn a3_certificate_every_line() {
        let arr = a3();
        let ls = LocalSystem::constant(3, 1, 6).unwrap();
        for l0 in 0..6 {
            let cert = beta_certificate::<Cyclo>(&arr, &ls, l0, 1).unwrap();
            assert_eq!(cert.r0.len(), 2);
            assert_eq!(cert.a_prime.len(), 4);
            assert!(cert.holds(), "line {l0}: {cert:?}");
            assert_eq!(cert.h1, 1);
            assert!(cert.dimension_bound() <= 1);
        }
    }

    #[test]
    fn certificate_without_resonance() {
        let arr = generic_triangle();
        let ls = LocalSystem::constant(3, 1, 3).unwrap();
        let cert = beta_certificate::<Cyclo>(&arr, &ls, 0, 0).unwrap();
        assert!(cert.a_prime.is_empty() && cert.n_set.is_empty());
        assert_eq!(cert.dim_a, 0);
        assert!(cert.holds());
    }

    #[test]
    fn resonant_neighbor_with_constant_monodromy() {
        // beta(q) = sum (z - 1) / z^i alpha(l_i) for constant z
        let arr = a3();
        let ls = LocalSystem::constant(3, 1, 6).unwrap();
        let cert = beta_certificate::<Cyclo>(&arr, &ls, 0, 0).unwrap();
        let z = Cyclo::zeta(3);
        let one = Cyclo::from_integer(1);
        let inst =
            Instance::<Cyclo>::with_profile(&arr, &ls, Profile::LineAdapted(0), 0, &NormalizeOptions::default()).unwrap();
        let mut resonant_seen = 0;
        for (q, beta) in &cert.betas {
            if !inst.resonant.contains(*q) {
                continue;
            }
            resonant_seen += 1;
            let mut expected = vec![Cyclo::from_integer(0); cert.dim_a];
            let mut zi = one.clone();
            for &l in &inst.arrangement.point(*q).lines {
                zi = zi * z.clone();
                let c = (z.clone() - one.clone()) * zi.inverse().unwrap();
                for &p in &cert.r0 {
                    let lines = &inst.arrangement.point(p).lines;
                    if let Some(i) = lines.iter().position(|&x| x == l).filter(|&i| i > 0) {
                        for j in 0..i {
                            let col = inst.basis.column(p, j).unwrap();
                            expected[col] = expected[col].clone() + c.clone();
                        }
                    }
                }
            }
            assert_eq!(beta, &expected);
        }
        assert!(resonant_seen > 0);
    }

    #[test]
    fn sharp_pair_statements() {
        let arr = generic_triangle();
        let ls = LocalSystem::constant(3, 1, 3).unwrap();
        let h = h1::<Cyclo>(&arr, &ls, 0).unwrap().h1;
        let rep = sharp_pair_report(&arr, &ls, h);
        assert_eq!(rep.pairs.len(), 3);
        assert!(rep.at_most_one_applies && rep.at_most_one_holds);
        assert!(!rep.vanishing_applies);
        assert!(rep.holds());

        let arr = a3();
        let rep = sharp_pair_report(&arr, &LocalSystem::constant(3, 1, 6).unwrap(), 1);
        // every pair of lines through a triple point is sharp, and no other pair is
        assert_eq!(rep.pairs.len(), 12);
        for &(a, b) in &rep.pairs {
            assert_eq!(arr.point(arr.meeting_point(a, b)).multiplicity(), 3);
        }
        assert!(rep.at_most_one_applies && rep.holds());
        let even = LocalSystem::constant(2, 1, 6).unwrap();
        let rep = sharp_pair_report(&arr, &even, h1::<Cyclo>(&arr, &even, 0).unwrap().h1);
        assert!(rep.vanishing_applies && rep.vanishing_holds);

        let arr = pencil(4);
        let rep = sharp_pair_report(&arr, &LocalSystem::constant(4, 1, 4).unwrap(), 2);
        assert_eq!(rep.pairs.len(), 6);
        assert!(!rep.at_most_one_applies && rep.holds());

        assert_eq!(constant_order(&LocalSystem::constant(6, 3, 4).unwrap()), Some(2));
        assert_eq!(constant_order(&LocalSystem::exact(6, &[1, 5]).unwrap()), None);
    }
}
