use std::collections::HashMap;

use super::line::{sign, Line, ProjPoint};
use super::transform::Projectivity;
use super::GeometryError;
use crate::Rational;

/// A point of `L_2(A)` with its incident lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionPoint {
    pub id: usize,
    pub point: ProjPoint,
    /// Sorted by increasing slope when every incident line has a finite slope, by id otherwise.
    pub lines: Vec<usize>,
}

impl IntersectionPoint {
    pub fn multiplicity(&self) -> usize {
        self.lines.len()
    }

    pub fn contains(&self, line: usize) -> bool {
        self.lines.contains(&line)
    }

    /// Affine coordinates; panics for a point at infinity.
    pub fn xy(&self) -> (&Rational, &Rational) {
        self.point.xy().expect("intersection point at infinity")
    }
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    lines: Vec<Line>,
    points: Vec<IntersectionPoint>,
    line_points: Vec<Vec<usize>>,
    normalized: bool,
}

impl Arrangement {
    pub fn new(lines: Vec<Line>) -> Result<Self, GeometryError> {
        if let Some(i) = lines.iter().position(Line::is_at_infinity) {
            return Err(GeometryError::LineAtInfinity(i));
        }
        let points = intersections(&lines)?;
        let normalized = lines.iter().all(|l| !l.is_vertical())
            && points.iter().all(|p| p.point.is_finite());
        let mut line_points = vec![Vec::new(); lines.len()];
        for p in &points {
            for &l in &p.lines {
                line_points[l].push(p.id);
            }
        }
        if normalized {
            for list in &mut line_points {
                list.sort_by(|&a, &b| points[a].point.x.cmp(&points[b].point.x));
            }
        }
        Ok(Arrangement {
            lines,
            points,
            line_points,
            normalized,
        })
    }

    pub fn from_ints(coeffs: &[(i64, i64, i64)]) -> Result<Self, GeometryError> {
        let lines = coeffs
            .iter()
            .enumerate()
            .map(|(i, &(a, b, c))| Line::from_ints(a, b, c).ok_or(GeometryError::ZeroLine(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Arrangement::new(lines)
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn line(&self, id: usize) -> &Line {
        &self.lines[id]
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn points(&self) -> &[IntersectionPoint] {
        &self.points
    }

    pub fn point(&self, id: usize) -> &IntersectionPoint {
        &self.points[id]
    }

    /// Points on a line, ordered by `x` when the arrangement is normalized.
    pub fn points_on(&self, line: usize) -> &[usize] {
        &self.line_points[line]
    }

    /// True when all lines are non-vertical with distinct slopes and no point lies at infinity.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn slope(&self, line: usize) -> Rational {
        self.lines[line].slope().expect("non-vertical line")
    }

    /// The point where two distinct lines meet.
    pub fn meeting_point(&self, l1: usize, l2: usize) -> usize {
        let pts = &self.line_points[l1];
        *pts.iter()
            .find(|&&p| self.points[p].contains(l2))
            .expect("every pair of lines meets")
    }

    /// Image of the arrangement under a projectivity; line ids and point ids are preserved.
    pub fn transform(&self, t: &Projectivity) -> Result<Self, GeometryError> {
        Arrangement::new(self.lines.iter().map(|l| t.apply_line(l)).collect())
    }

    /// Sorted list of incident-line sets; equal for arrangements with the same intersection poset.
    pub fn incidence_signature(&self) -> Vec<Vec<usize>> {
        let mut sig: Vec<Vec<usize>> = self
            .points
            .iter()
            .map(|p| {
                let mut ls = p.lines.clone();
                ls.sort_unstable();
                ls
            })
            .collect();
        sig.sort();
        sig
    }
}

/// All pairwise intersections, merged by coincidence.
///
/// Point ids follow the order in which points are first met when scanning the pairs
/// `(0,1), (0,2), ..., (1,2), ...`, so they only depend on the incidence data.
pub fn intersections(lines: &[Line]) -> Result<Vec<IntersectionPoint>, GeometryError> {
    let mut index: HashMap<ProjPoint, usize> = HashMap::new();
    let mut points: Vec<IntersectionPoint> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let p = lines[i]
                .meet(&lines[j])
                .ok_or(GeometryError::DuplicateLine(i, j))?;
            let id = *index.entry(p.clone()).or_insert_with(|| {
                points.push(IntersectionPoint {
                    id: points.len(),
                    point: p,
                    lines: Vec::new(),
                });
                points.len() - 1
            });
            for l in [i, j] {
                if !points[id].lines.contains(&l) {
                    points[id].lines.push(l);
                }
            }
        }
    }
    for p in &mut points {
        let slopes: Option<Vec<Rational>> = p.lines.iter().map(|&l| lines[l].slope()).collect();
        match slopes {
            Some(s) if p.point.is_finite() => {
                let mut keyed: Vec<(Rational, usize)> = s.into_iter().zip(p.lines.iter().copied()).collect();
                keyed.sort();
                p.lines = keyed.into_iter().map(|(_, l)| l).collect();
            }
            _ => p.lines.sort_unstable(),
        }
    }
    Ok(points)
}

/// Unordered pairs `(l, l')` with `l < l'` such that one component of `RP^2 - (l u l')`
/// contains no intersection point.
pub fn sharp_pairs(arr: &Arrangement) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..arr.len() {
        for j in i + 1..arr.len() {
            if is_sharp(arr, i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// The product `f_l(q) f_l'(q)` has a well-defined sign on each component, so a pair is sharp
/// exactly when that sign is constant over the points off both lines.
pub fn is_sharp(arr: &Arrangement, l: usize, l2: usize) -> bool {
    let (f, g) = (arr.line(l), arr.line(l2));
    let mut seen = 0i8;
    for p in arr.points() {
        if p.contains(l) || p.contains(l2) {
            continue;
        }
        let s = sign(&(f.eval(&p.point) * g.eval(&p.point)));
        if seen == 0 {
            seen = s;
        } else if s != seen {
            return false;
        }
    }
    true
}

/// `e(M(A)) = 3 - 2n + sum_p (mult(p) - 1)`.
pub fn euler_characteristic(arr: &Arrangement) -> i64 {
    let n = arr.len() as i64;
    let excess: i64 = arr.points().iter().map(|p| p.multiplicity() as i64 - 1).sum();
    3 - 2 * n + excess
}

/// Number of bounded chambers of an affine arrangement with no parallel lines.
pub fn zaslavsky_bounded_count(arr: &Arrangement) -> i64 {
    if arr.is_empty() {
        return 0;
    }
    let excess: i64 = arr.points().iter().map(|p| p.multiplicity() as i64 - 1).sum();
    excess - arr.len() as i64 + 1
}
