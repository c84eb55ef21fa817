use num_traits::Zero;

use super::arrangement::Arrangement;
use super::line::{int, sign};
use super::GeometryError;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryVertex {
    Point(usize),
    Infinity,
}

/// One edge of a chamber boundary: it leaves `vertex` along `line`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryStep {
    pub vertex: BoundaryVertex,
    pub line: usize,
    /// Sign of `Q_line` on the chamber.
    pub side: i8,
}

#[derive(Clone, Debug)]
pub struct Chamber {
    pub id: usize,
    pub bounded: bool,
    /// Counterclockwise. For an unbounded chamber the arc at infinity closes the list.
    pub boundary: Vec<BoundaryStep>,
    pub vertices: Vec<usize>,
    pub sample: (Rational, Rational),
    /// Points on the two boundary rays of an unbounded chamber, one unit of `x` from their vertex.
    pub ray_points: Vec<(Rational, Rational)>,
}

impl Chamber {
    pub fn has_vertex(&self, p: usize) -> bool {
        self.vertices.contains(&p)
    }

    /// A handful of distinct interior points, the sample first.
    pub fn interior_points(&self, arr: &Arrangement) -> Vec<(Rational, Rational)> {
        let half = Rational::new(1.into(), 2.into());
        let mut out = vec![self.sample.clone()];
        let anchors = self
            .vertices
            .iter()
            .map(|&v| {
                let (x, y) = arr.point(v).xy();
                (x.clone(), y.clone())
            })
            .chain(self.ray_points.iter().cloned());
        for (x, y) in anchors {
            out.push((
                (&self.sample.0 + x) * &half,
                (&self.sample.1 + y) * &half,
            ));
        }
        out
    }

    /// Sign of every `Q_l` at the sample point.
    pub fn sign_vector(&self, arr: &Arrangement) -> Vec<i8> {
        (0..arr.len())
            .map(|l| sign(&arr.line(l).q_value(&self.sample.0, &self.sample.1)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
struct HalfEdge {
    origin: usize,
    dest: usize,
    line: Option<usize>,
    twin: usize,
    rightward: bool,
}

/// All chambers of the real figure; bounded ones first, each group ordered by sample point.
pub fn chambers(arr: &Arrangement) -> Result<Vec<Chamber>, GeometryError> {
    if !arr.is_normalized() {
        return Err(GeometryError::NotNormalized);
    }
    let n = arr.len();
    if n == 0 {
        return Ok(vec![Chamber {
            id: 0,
            bounded: false,
            boundary: vec![],
            vertices: vec![],
            sample: (int(0), int(0)),
            ray_points: vec![],
        }]);
    }
    if n == 1 {
        return Ok(single_line(arr));
    }
    let np = arr.points().len();
    let right_end = |l: usize| np + 2 * l;
    let left_end = |l: usize| np + 2 * l + 1;
    let slopes: Vec<Rational> = (0..n).map(|l| arr.slope(l)).collect();

    let mut edges: Vec<HalfEdge> = Vec::new();
    let mut add = |origin: usize, dest: usize, line: Option<usize>, rightward: bool| {
        let k = edges.len();
        edges.push(HalfEdge { origin, dest, line, twin: k + 1, rightward });
        edges.push(HalfEdge { origin: dest, dest: origin, line, twin: k, rightward: !rightward });
        k
    };
    let mut ray_in = vec![0usize; 2 * n];
    for l in 0..n {
        let pts = arr.points_on(l);
        let first = *pts.first().expect("distinct slopes give every line a point");
        let last = *pts.last().unwrap();
        ray_in[2 * l + 1] = add(left_end(l), first, Some(l), true);
        for w in pts.windows(2) {
            add(w[0], w[1], Some(l), true);
        }
        ray_in[2 * l] = add(right_end(l), last, Some(l), false);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| slopes[a].cmp(&slopes[b]));
    let ring: Vec<usize> = order
        .iter()
        .map(|&l| right_end(l))
        .chain(order.iter().map(|&l| left_end(l)))
        .collect();
    let arc_ccw: Vec<usize> = (0..ring.len())
        .map(|i| add(ring[i], ring[(i + 1) % ring.len()], None, false))
        .collect();

    let nodes = np + 2 * n;
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (i, r) in ring.iter().enumerate() {
        let prev = arc_ccw[(i + ring.len() - 1) % ring.len()];
        out[*r] = vec![arc_ccw[i], ray_in[*r - np], edges[prev].twin];
    }
    for (k, e) in edges.iter().enumerate() {
        if e.origin < np {
            out[e.origin].push(k);
        }
    }
    for list in out.iter_mut().take(np) {
        list.sort_by(|&a, &b| {
            let ka = (!edges[a].rightward, &slopes[edges[a].line.unwrap()]);
            let kb = (!edges[b].rightward, &slopes[edges[b].line.unwrap()]);
            ka.cmp(&kb)
        });
    }
    let mut pos = vec![0usize; edges.len()];
    for list in &out {
        for (i, &e) in list.iter().enumerate() {
            pos[e] = i;
        }
    }
    let next = |e: usize| -> usize {
        let t = edges[e].twin;
        let list = &out[edges[t].origin];
        list[(pos[t] + list.len() - 1) % list.len()]
    };

    let mut visited = vec![false; edges.len()];
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for start in 0..edges.len() {
        if visited[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut e = start;
        while !visited[e] {
            visited[e] = true;
            face.push(e);
            e = next(e);
        }
        faces.push(face);
    }

    let mut result = Vec::new();
    for face in faces {
        if face.iter().all(|&e| edges[e].line.is_none()) {
            continue;
        }
        let bounded = face.iter().all(|&e| edges[e].line.is_some());
        let start = if bounded {
            0
        } else {
            face.iter()
                .position(|&e| edges[e].origin >= np && edges[e].line.is_some())
                .expect("unbounded face enters from infinity")
        };
        let mut boundary = Vec::new();
        let mut vertices = Vec::new();
        let mut ray_points = Vec::new();
        for k in 0..face.len() {
            let e = edges[face[(start + k) % face.len()]];
            let Some(line) = e.line else { continue };
            let vertex = if e.origin < np {
                vertices.push(e.origin);
                BoundaryVertex::Point(e.origin)
            } else {
                BoundaryVertex::Infinity
            };
            boundary.push(BoundaryStep {
                vertex,
                line,
                side: if e.rightward { 1 } else { -1 },
            });
            let (fin, inf) = if e.origin >= np { (e.dest, e.origin) } else { (e.origin, e.dest) };
            if inf >= np {
                let (x, y) = arr.point(fin).xy();
                let s = &slopes[line];
                let step = if (inf - np).is_multiple_of(2) { int(1) } else { int(-1) };
                ray_points.push((x + &step, y + &step * s));
            }
        }
        let sample = centroid(arr, &vertices, &ray_points);
        result.push(Chamber {
            id: 0,
            bounded,
            boundary,
            vertices,
            sample,
            ray_points,
        });
    }
    for c in &result {
        let signs = c.sign_vector(arr);
        if signs.contains(&0) || c.boundary.iter().any(|b| signs[b.line] != b.side) {
            return Err(GeometryError::Internal(format!(
                "sample point {:?} is not interior",
                c.sample
            )));
        }
    }
    result.sort_by(|a, b| (!a.bounded, &a.sample).cmp(&(!b.bounded, &b.sample)));
    for (i, c) in result.iter_mut().enumerate() {
        c.id = i;
    }
    Ok(result)
}

fn centroid(arr: &Arrangement, vertices: &[usize], extra: &[(Rational, Rational)]) -> (Rational, Rational) {
    let mut sx = Rational::zero();
    let mut sy = Rational::zero();
    for &v in vertices {
        let (x, y) = arr.point(v).xy();
        sx += x;
        sy += y;
    }
    for (x, y) in extra {
        sx += x;
        sy += y;
    }
    let k = int((vertices.len() + extra.len()) as i64);
    (sx / &k, sy / k)
}

fn single_line(arr: &Arrangement) -> Vec<Chamber> {
    let b0 = arr.line(0).intercept().unwrap();
    [-1i8, 1]
        .into_iter()
        .enumerate()
        .map(|(id, side)| Chamber {
            id,
            bounded: false,
            boundary: vec![BoundaryStep {
                vertex: BoundaryVertex::Infinity,
                line: 0,
                side,
            }],
            vertices: vec![],
            sample: (Rational::zero(), &b0 + int(side as i64)),
            ray_points: vec![],
        })
        .collect()
}

/// True when `(x, y)` lies strictly inside the chamber.
pub fn is_interior(arr: &Arrangement, chamber: &Chamber, x: &Rational, y: &Rational) -> bool {
    let target = chamber.sign_vector(arr);
    (0..arr.len()).all(|l| sign(&arr.line(l).q_value(x, y)) == target[l])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{normalize, zaslavsky_bounded_count, Profile};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn census(arr: &Arrangement) -> (usize, usize) {
        let cs = chambers(arr).unwrap();
        (cs.len(), cs.iter().filter(|c| c.bounded).count())
    }

    #[test]
    fn generic_triangle() {
        let arr = Arrangement::from_ints(&[(0, 1, 0), (1, -1, 0), (1, 1, -2)]).unwrap();
        assert_eq!(census(&arr), (7, 1));
        let cs = chambers(&arr).unwrap();
        let tri = &cs[0];
        assert!(tri.bounded);
        assert_eq!(tri.vertices.len(), 3);
        assert_eq!(tri.sample, (int(1), Rational::new(1.into(), 3.into())));
    }

    #[test]
    fn pencil_has_no_bounded_chamber() {
        for n in 2..6i64 {
            let lines: Vec<(i64, i64, i64)> = (0..n).map(|k| (-k, 1, 0)).collect();
            let arr = Arrangement::from_ints(&lines).unwrap();
            assert_eq!(census(&arr), (2 * n as usize, 0));
        }
    }

    #[test]
    fn single_line_halves() {
        let arr = Arrangement::from_ints(&[(1, -1, 3)]).unwrap();
        assert_eq!(census(&arr), (2, 0));
    }

    #[test]
    fn rejects_unnormalized() {
        let arr = Arrangement::from_ints(&[(1, 0, 0), (0, 1, 0)]).unwrap();
        assert_eq!(chambers(&arr).unwrap_err(), GeometryError::NotNormalized);
    }

    #[test]
    fn quadrilateral_has_six_bounded() {
        let arr = Arrangement::from_ints(&[(0, 1, 0), (1, 0, 0), (1, -1, 0), (1, 0, -1), (0, 1, -1), (1, 1, -1)])
            .unwrap();
        let (norm, _) = normalize(&arr, Profile::Basic, 5).unwrap();
        let (_, bounded) = census(&norm);
        assert_eq!(bounded, 6);
    }

    fn random_arrangement(rng: &mut ChaCha8Rng, n: usize) -> Option<Arrangement> {
        let mut lines = Vec::new();
        let mut used = std::collections::HashSet::new();
        while lines.len() < n {
            let s: i64 = rng.gen_range(-6..=6);
            let b: i64 = rng.gen_range(-3..=3);
            if used.insert(s) {
                lines.push((-s, 1, -b));
            }
        }
        Arrangement::from_ints(&lines).ok()
    }

    #[test]
    fn random_subdivisions_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(2..=9);
            let arr = random_arrangement(&mut rng, n).unwrap();
            let cs = chambers(&arr).unwrap();
            let bounded = cs.iter().filter(|c| c.bounded).count() as i64;
            assert_eq!(bounded, zaslavsky_bounded_count(&arr));
            // V - E + F = 2 on the one-point compactification
            let v = arr.points().len() as i64 + 1;
            let e: i64 = (0..n).map(|l| arr.points_on(l).len() as i64 + 1).sum();
            assert_eq!(v - e + cs.len() as i64, 2);
            let sides: i64 = cs.iter().map(|c| c.boundary.len() as i64).sum();
            assert_eq!(sides, 2 * e);
            // distinct chambers have distinct sign vectors
            let mut sv: Vec<Vec<i8>> = cs.iter().map(|c| c.sign_vector(&arr)).collect();
            sv.sort();
            sv.dedup();
            assert_eq!(sv.len(), cs.len());
            for c in &cs {
                for (x, y) in c.interior_points(&arr) {
                    assert!(is_interior(&arr, c, &x, &y));
                }
                if c.bounded {
                    assert!(c.boundary.iter().all(|b| b.vertex != BoundaryVertex::Infinity));
                }
            }
        }
    }
}
