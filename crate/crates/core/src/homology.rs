//! The chamber/angle presentation of `H_1(M(A), L)`.
//!
//! Generators are the angles at resonant points. Relations come from each resonant point
//! (`alpha(p)^+`, `alpha(p)^-`) and from each bounded chamber (`alpha(Delta)`); `h_1` is the
//! number of angles minus the rank of the relations.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::field::{Field, FieldError, Matrix};
use crate::geometry::{
    chambers, normalize_with, zaslavsky_bounded_count, Arrangement, Chamber, GeometryError,
    NormalizationRecord, NormalizeOptions, Profile,
};
use crate::local_system::{resonant_points, validate, LocalSystem, LocalSystemError, ResonantSet};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    LocalSystem(#[from] LocalSystemError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("point {0} is not resonant")]
    NotResonant(usize),
    #[error("chamber {1} does not have point {0} as a vertex")]
    NotAdjacent(usize, usize),
    #[error("chamber {0} is unbounded")]
    UnboundedChamber(usize),
    #[error("no interior point of chamber {1} off the vertical through point {0}")]
    NoSample(usize, usize),
}

/// The oriented arc `(lines[index], lines[index + 1])` of `RP^1` at a resonant point; the last
/// index wraps around through the vertical direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Angle {
    pub point: usize,
    pub index: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, Default)]
pub struct AngleBasis {
    angles: Vec<Angle>,
    /// Resonant point id to `(first column, number of angles)`.
    offsets: HashMap<usize, (usize, usize)>,
}

impl AngleBasis {
    pub fn dim(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    /// Column of angle `index` at point `p`.
    pub fn column(&self, p: usize, index: usize) -> Option<usize> {
        self.offsets
            .get(&p)
            .filter(|&&(_, k)| index < k)
            .map(|&(o, _)| o + index)
    }

    /// Number of angles at `p`; zero for non-resonant points.
    pub fn count_at(&self, p: usize) -> usize {
        self.offsets.get(&p).map_or(0, |&(_, k)| k)
    }
}

/// Angles ordered by resonant point id, then by index.
pub fn angle_basis(arr: &Arrangement, resonant: &ResonantSet) -> AngleBasis {
    let mut basis = AngleBasis::default();
    for &p in &resonant.points {
        let lines = &arr.point(p).lines;
        let k = lines.len();
        basis.offsets.insert(p, (basis.angles.len(), k));
        for i in 0..k {
            basis.angles.push(Angle {
                point: p,
                index: i,
                from: lines[i],
                to: lines[(i + 1) % k],
            });
        }
    }
    basis
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowKind {
    PointPlus(usize),
    PointMinus(usize),
    Chamber(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationRow<F> {
    pub kind: RowKind,
    /// Sparse `(column, coefficient)` pairs with nonzero coefficients.
    pub entries: Vec<(usize, F)>,
}

impl<F: Field> RelationRow<F> {
    pub fn dense(&self, dim: usize) -> Vec<F> {
        let mut out = vec![F::zero(); dim];
        for (c, v) in &self.entries {
            out[*c] = out[*c].clone() + v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Everything the relation rows depend on, in one normalized frame.
#[derive(Clone, Debug)]
pub struct Instance<F> {
    pub arrangement: Arrangement,
    pub record: NormalizationRecord,
    pub system: LocalSystem,
    pub values: Vec<F>,
    pub resonant: ResonantSet,
    pub basis: AngleBasis,
    pub chambers: Vec<Chamber>,
}

impl<F: Field> Instance<F> {
    /// Validates the system, normalizes with the Basic profile and enumerates chambers.
    pub fn new(arr: &Arrangement, ls: &LocalSystem, seed: u64) -> Result<Self, HomologyError> {
        Instance::with_profile(arr, ls, Profile::Basic, seed, &NormalizeOptions::default())
    }

    pub fn with_profile(
        arr: &Arrangement,
        ls: &LocalSystem,
        profile: Profile,
        seed: u64,
        opts: &NormalizeOptions,
    ) -> Result<Self, HomologyError> {
        validate(ls, arr)?;
        let (arrangement, record) = normalize_with(arr, profile, seed, opts)?;
        let values = ls.values::<F>()?;
        let resonant = resonant_points(&arrangement, ls);
        let basis = angle_basis(&arrangement, &resonant);
        let chambers = chambers(&arrangement)?;
        Ok(Instance {
            arrangement,
            record,
            system: ls.clone(),
            values,
            resonant,
            basis,
            chambers,
        })
    }

    fn require_resonant(&self, p: usize) -> Result<(), HomologyError> {
        if self.resonant.contains(p) {
            Ok(())
        } else {
            Err(HomologyError::NotResonant(p))
        }
    }

    /// `m(l_1) ... m(l_j)` for the first `j` lines at `p` in slope order.
    fn prefix_product(&self, p: usize, j: usize) -> F {
        self.arrangement.point(p).lines[..j]
            .iter()
            .fold(F::one(), |acc, &l| acc * self.values[l].clone())
    }

    /// `alpha(p)^+`: coefficient one on every angle at `p`.
    pub fn row_alpha_plus(&self, p: usize) -> Result<RelationRow<F>, HomologyError> {
        self.require_resonant(p)?;
        let k = self.arrangement.point(p).multiplicity();
        let entries = (0..k)
            .map(|i| (self.basis.column(p, i).unwrap(), F::one()))
            .collect();
        Ok(RelationRow {
            kind: RowKind::PointPlus(p),
            entries,
        })
    }

    /// `alpha(p)^-`: coefficient `m(l_1) ... m(l_i)` on `(l_i, l_{i+1})`.
    pub fn row_alpha_minus(&self, p: usize) -> Result<RelationRow<F>, HomologyError> {
        self.require_resonant(p)?;
        let k = self.arrangement.point(p).multiplicity();
        let entries = (0..k)
            .map(|i| (self.basis.column(p, i).unwrap(), self.prefix_product(p, i + 1)))
            .collect();
        Ok(RelationRow {
            kind: RowKind::PointMinus(p),
            entries,
        })
    }

    /// An interior point of the chamber off the vertical line through `p`, relative to `p`.
    fn offset_from(&self, p: usize, chamber: &Chamber) -> Result<(Rational, Rational), HomologyError> {
        if !chamber.has_vertex(p) {
            return Err(HomologyError::NotAdjacent(p, chamber.id));
        }
        let (px, py) = self.arrangement.point(p).xy();
        chamber
            .interior_points(&self.arrangement)
            .into_iter()
            .map(|(x, y)| (x - px, y - py))
            .find(|(x0, _)| !x0.is_zero())
            .ok_or(HomologyError::NoSample(p, chamber.id))
    }

    /// Index of the angle at `p` subtended by the chamber.
    pub fn angle_at(&self, p: usize, chamber: &Chamber) -> Result<usize, HomologyError> {
        let (x0, y0) = self.offset_from(p, chamber)?;
        Ok(angle_of_direction(&self.arrangement, p, &x0, &y0))
    }

    /// `lambda_p(Delta)`: one when the chamber lies to the right of `p`, otherwise the product of
    /// `m(l)` over lines at `p` with `s(l) x0 > y0`.
    pub fn lambda(&self, p: usize, chamber: &Chamber) -> Result<F, HomologyError> {
        let (x0, y0) = self.offset_from(p, chamber)?;
        Ok(self.lambda_at_offset(p, &x0, &y0))
    }

    pub fn lambda_at_offset(&self, p: usize, x0: &Rational, y0: &Rational) -> F {
        if x0.is_positive() {
            return F::one();
        }
        self.arrangement
            .point(p)
            .lines
            .iter()
            .filter(|&&l| self.arrangement.slope(l) * x0 > *y0)
            .fold(F::one(), |acc, &l| acc * self.values[l].clone())
    }

    /// `alpha(Delta) = sum over resonant vertices p of lambda_p(Delta) alpha_p(Delta)`.
    pub fn row_alpha_chamber(&self, chamber: &Chamber) -> Result<RelationRow<F>, HomologyError> {
        if !chamber.bounded {
            return Err(HomologyError::UnboundedChamber(chamber.id));
        }
        let mut entries = Vec::new();
        for &p in &chamber.vertices {
            if !self.resonant.contains(p) {
                continue;
            }
            let (x0, y0) = self.offset_from(p, chamber)?;
            let col = self
                .basis
                .column(p, angle_of_direction(&self.arrangement, p, &x0, &y0))
                .unwrap();
            entries.push((col, self.lambda_at_offset(p, &x0, &y0)));
        }
        entries.sort_by_key(|e| e.0);
        Ok(RelationRow {
            kind: RowKind::Chamber(chamber.id),
            entries,
        })
    }

    /// Point rows for each resonant point in id order, then one row per bounded chamber.
    pub fn relation_rows(&self) -> Result<Vec<RelationRow<F>>, HomologyError> {
        let mut rows = Vec::new();
        for &p in &self.resonant.points {
            rows.push(self.row_alpha_plus(p)?);
            rows.push(self.row_alpha_minus(p)?);
        }
        for c in self.chambers.iter().filter(|c| c.bounded) {
            rows.push(self.row_alpha_chamber(c)?);
        }
        Ok(rows)
    }

    pub fn relation_matrix(&self) -> Result<(Vec<RowKind>, Matrix<F>), HomologyError> {
        let rows = self.relation_rows()?;
        let dim = self.basis.dim();
        let kinds = rows.iter().map(|r| r.kind).collect();
        let dense = rows.iter().map(|r| r.dense(dim)).collect();
        Ok((kinds, Matrix::from_rows(dense, dim)))
    }

    /// Sums of `lambda_p(Delta) alpha_p(Delta)` over all chambers at `p` on the positive and on the
    /// negative side of the slope-minimal line through `p`, as dense vectors over the angles at `p`.
    pub fn sector_sums(&self, p: usize) -> Result<(Vec<F>, Vec<F>), HomologyError> {
        self.require_resonant(p)?;
        let point = self.arrangement.point(p);
        let l1 = self.arrangement.line(point.lines[0]);
        let k = point.multiplicity();
        let mut plus = vec![F::zero(); k];
        let mut minus = vec![F::zero(); k];
        for c in self.chambers.iter().filter(|c| c.has_vertex(p)) {
            let (sx, sy) = &c.sample;
            let side = l1.q_value(sx, sy);
            let i = self.angle_at(p, c)?;
            let lam = self.lambda(p, c)?;
            let target = if side.is_positive() { &mut plus } else { &mut minus };
            target[i] = target[i].clone() + lam;
        }
        Ok((plus, minus))
    }

    /// `m(l)` embedded in the field.
    pub fn value(&self, l: usize) -> &F {
        &self.values[l]
    }
}

/// The component of `RP^1` minus the slopes at `p` containing the direction `[x0 : y0]`.
pub fn angle_of_direction(arr: &Arrangement, p: usize, x0: &Rational, y0: &Rational) -> usize {
    let lines = &arr.point(p).lines;
    let k = lines.len();
    if x0.is_zero() {
        return k - 1;
    }
    let t = y0 / x0;
    (0..k - 1)
        .find(|&i| arr.slope(lines[i]) < t && t < arr.slope(lines[i + 1]))
        .unwrap_or(k - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub dim_a: usize,
    pub num_rows: usize,
    pub point_rows: usize,
    pub chamber_rows: usize,
    /// Chamber rows with no resonant vertex; kept in the matrix.
    pub zero_chamber_rows: Vec<usize>,
    pub rank: usize,
    pub h1: usize,
    pub bounded_chambers: usize,
    pub zaslavsky_ok: bool,
}

impl<F: Field> Instance<F> {
    pub fn report(&self) -> Result<HomologyReport, HomologyError> {
        let (kinds, m) = self.relation_matrix()?;
        let rank = m.rank();
        let dim_a = self.basis.dim();
        let bounded = self.chambers.iter().filter(|c| c.bounded).count();
        let zero_chamber_rows = kinds
            .iter()
            .enumerate()
            .filter_map(|(i, k)| match k {
                RowKind::Chamber(c) if m.row(i).iter().all(Zero::is_zero) => Some(*c),
                _ => None,
            })
            .collect();
        Ok(HomologyReport {
            dim_a,
            num_rows: kinds.len(),
            point_rows: 2 * self.resonant.points.len(),
            chamber_rows: bounded,
            zero_chamber_rows,
            rank,
            h1: dim_a - rank,
            bounded_chambers: bounded,
            zaslavsky_ok: bounded as i64 == zaslavsky_bounded_count(&self.arrangement),
        })
    }
}

/// `h_1(M(A), L)` in the field `F`.
pub fn h1<F: Field>(arr: &Arrangement, ls: &LocalSystem, seed: u64) -> Result<HomologyReport, HomologyError> {
    Instance::<F>::new(arr, ls, seed)?.report()
}

/// Relation matrix in the Basic frame chosen by `seed`.
pub fn relation_matrix<F: Field>(
    arr: &Arrangement,
    ls: &LocalSystem,
    seed: u64,
) -> Result<(AngleBasis, Vec<RowKind>, Matrix<F>), HomologyError> {
    let inst = Instance::<F>::new(arr, ls, seed)?;
    let (kinds, m) = inst.relation_matrix()?;
    Ok((inst.basis, kinds, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Cyclo;
    use crate::samples;
    use num_complex::Complex64;
    use num_traits::One;

    fn w(k: i64) -> Cyclo {
        Cyclo::root_of_unity(3, k)
    }

    fn a3() -> Instance<Cyclo> {
        Instance::new(&samples::a3(), &LocalSystem::constant(3, 1, 6).unwrap(), 0).unwrap()
    }

    /// Entries of a row keyed by `(from, to)` with 1-based line labels.
    fn labelled(inst: &Instance<Cyclo>, row: &RelationRow<Cyclo>) -> Vec<((usize, usize), Cyclo)> {
        let mut out: Vec<_> = row
            .entries
            .iter()
            .map(|(c, v)| {
                let a = &inst.basis.angles()[*c];
                ((a.from + 1, a.to + 1), v.clone())
            })
            .collect();
        out.sort_by_key(|e| e.0);
        out
    }

    #[test]
    fn a3_census() {
        let inst = a3();
        assert_eq!(inst.resonant.points.len(), 4);
        let rep = inst.report().unwrap();
        assert_eq!((rep.dim_a, rep.num_rows, rep.rank, rep.h1), (12, 14, 11, 1));
        assert_eq!(rep.point_rows, 8);
        assert_eq!(rep.chamber_rows, 6);
        assert!(rep.zero_chamber_rows.is_empty());
        assert!(rep.zaslavsky_ok);
    }

    #[test]
    fn a3_point_rows() {
        let inst = a3();
        // the origin is p1 = {l1, l5, l6}
        let p1 = inst
            .resonant
            .points
            .iter()
            .copied()
            .find(|&p| inst.arrangement.point(p).lines == vec![0, 4, 5])
            .unwrap();
        let minus = inst.row_alpha_minus(p1).unwrap();
        assert_eq!(
            labelled(&inst, &minus),
            vec![((1, 5), w(1)), ((5, 6), w(2)), ((6, 1), w(0))]
        );
        let plus = inst.row_alpha_plus(p1).unwrap();
        assert!(plus.entries.iter().all(|(_, v)| v.is_one()));
    }

    #[test]
    fn a3_has_the_delta1_row() {
        let inst = a3();
        let rows = inst.relation_rows().unwrap();
        let target = vec![((5, 6), w(2)), ((6, 2), w(0))];
        assert!(rows[8..].iter().any(|r| labelled(&inst, r) == target));
    }

    #[test]
    fn empty_resonance_gives_zero() {
        let arr = samples::generic_triangle();
        let rep = h1::<Cyclo>(&arr, &LocalSystem::constant(3, 1, 3).unwrap(), 0).unwrap();
        assert_eq!((rep.dim_a, rep.h1), (0, 0));
        assert_eq!(rep.zero_chamber_rows, vec![0]);
    }

    #[test]
    fn pencil_has_point_rows_only() {
        // a resonant triple point on an admissible near-pencil would force trivial monodromy on
        // the fourth line, so the point-rows-only case is the pencil itself
        let near = samples::near_pencil();
        let ls = LocalSystem::exact(3, &[1, 1, 1, 0]).unwrap();
        assert!(matches!(
            h1::<Cyclo>(&near, &ls, 0),
            Err(HomologyError::LocalSystem(LocalSystemError::TrivialOnLine(3)))
        ));
        let ls = LocalSystem::constant(3, 1, 3).unwrap();
        let (basis, kinds, m) = relation_matrix::<Cyclo>(&samples::pencil(3), &ls, 0).unwrap();
        assert_eq!(basis.dim(), 3);
        assert_eq!(kinds, vec![RowKind::PointPlus(0), RowKind::PointMinus(0)]);
        assert_eq!((m.rows(), m.cols(), m.rank()), (2, 3, 2));
        assert_eq!(m.row(1).to_vec(), vec![w(1), w(2), w(0)]);
    }

    #[test]
    fn errors() {
        let inst = a3();
        let double = inst
            .arrangement
            .points()
            .iter()
            .find(|p| p.multiplicity() == 2)
            .unwrap()
            .id;
        assert_eq!(inst.row_alpha_plus(double), Err(HomologyError::NotResonant(double)));
        let unbounded = inst.chambers.iter().find(|c| !c.bounded).unwrap();
        assert_eq!(
            inst.row_alpha_chamber(unbounded),
            Err(HomologyError::UnboundedChamber(unbounded.id))
        );
        let p = inst.resonant.points[0];
        let far = inst.chambers.iter().find(|c| !c.has_vertex(p)).unwrap();
        assert_eq!(inst.lambda(p, far), Err(HomologyError::NotAdjacent(p, far.id)));
    }

    #[test]
    fn lambda_rules() {
        let inst = a3();
        for &p in &inst.resonant.points {
            let k = inst.arrangement.point(p).multiplicity();
            let around: Vec<_> = inst.chambers.iter().filter(|c| c.has_vertex(p)).collect();
            assert_eq!(around.len(), 2 * k);
            for c in around {
                let (px, py) = inst.arrangement.point(p).xy();
                let samples = c.interior_points(&inst.arrangement);
                let mut seen = Vec::new();
                for (x, y) in samples {
                    let (x0, y0) = (x - px, y - py);
                    if x0.is_zero() {
                        continue;
                    }
                    if x0.is_positive() {
                        assert!(inst.lambda_at_offset(p, &x0, &y0).is_one());
                    }
                    seen.push(inst.lambda_at_offset(p, &x0, &y0));
                }
                assert!(seen.windows(2).all(|s| s[0] == s[1]));
            }
        }
    }

    #[test]
    fn sector_sums_reproduce_point_rows() {
        let inst = a3();
        for &p in &inst.resonant.points {
            let (plus, minus) = inst.sector_sums(p).unwrap();
            let k = plus.len();
            let off = inst.basis.column(p, 0).unwrap();
            let dp = inst.row_alpha_plus(p).unwrap().dense(inst.basis.dim());
            let dm = inst.row_alpha_minus(p).unwrap().dense(inst.basis.dim());
            assert_eq!(plus, dp[off..off + k].to_vec());
            assert_eq!(minus, dm[off..off + k].to_vec());
        }
    }

    #[test]
    fn float_mode_matches() {
        let arr = samples::a3();
        let ls = LocalSystem::constant(3, 1, 6).unwrap();
        let rep = h1::<Complex64>(&arr, &ls, 0).unwrap();
        assert_eq!(rep.h1, 1);
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let fl = LocalSystem::float(vec![w; 6]);
        assert_eq!(h1::<Complex64>(&arr, &fl, 0).unwrap().h1, 1);
        assert!(matches!(h1::<Cyclo>(&arr, &fl, 0), Err(HomologyError::Field(FieldError::ModeMismatch))));
    }

    #[test]
    fn seed_and_frame_invariance() {
        let arr = samples::a3();
        let ls = LocalSystem::constant(3, 1, 6).unwrap();
        let opts = NormalizeOptions {
            identity_first: false,
            ..Default::default()
        };
        for seed in 0..5 {
            let inst = Instance::<Cyclo>::with_profile(&arr, &ls, Profile::Basic, seed, &opts).unwrap();
            assert_eq!(inst.report().unwrap().h1, 1);
        }
    }
}
