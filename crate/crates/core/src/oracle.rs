//! Independent computation of `h_1` from a presentation of the fundamental group.
//!
//! One line is sent to infinity, the remaining affine lines are swept left to right as a wiring
//! diagram, and every multiple point contributes the cyclic relations among the meridians of
//! its wires. Fox derivatives of the relators, evaluated at the monodromy character, give the
//! twisted chain complex of the presentation 2-complex.
//!
//! Meridians are loops in a fiber `x = const` based far above the real axis, reaching each wire
//! along a vertical path. Passing a crossing slightly above the real `x` axis turns the local
//! block of wires half a revolution clockwise, so the wire at block position `m` (counted from
//! the bottom, local meridians `g_1, ..., g_k`) leaves with meridian `W g_m W^-1`,
//! `W = g_1 ... g_{m-1}`, and the block order reverses.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Field, FieldError, Matrix};
use crate::geometry::{Arrangement, GeometryError, Line, Projectivity};
use crate::local_system::{validate, LocalSystem, LocalSystemError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    LocalSystem(#[from] LocalSystemError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("no generic sweep direction found (seed {0})")]
    NoGenericChart(u64),
    #[error("no line with id {0}")]
    UnknownLine(usize),
}

/// An affine arrangement obtained by sending one line to infinity.
#[derive(Clone, Debug)]
pub struct Deconed {
    /// Affine lines, none vertical; line `i` of the result is line `source[i]` of the input.
    pub lines: Vec<Line>,
    pub source: Vec<usize>,
    pub removed: usize,
    pub system: LocalSystem,
    pub transform: Projectivity,
}

/// Sends line `l` to infinity by a projectivity whose last row is `l`, picking the other rows at
/// random until no affine line is vertical and all affine crossings have distinct `x`.
pub fn decone(arr: &Arrangement, ls: &LocalSystem, l: usize, seed: u64) -> Result<Deconed, OracleError> {
    if l >= arr.len() {
        return Err(OracleError::UnknownLine(l));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = arr.line(l);
    let source: Vec<usize> = (0..arr.len()).filter(|&i| i != l).collect();
    for _ in 0..256 {
        let mut row = || -> [Rational; 3] { std::array::from_fn(|_| Rational::from_integer(rng.gen_range(-4..=4).into())) };
        let m = [row(), row(), [f.a.clone(), f.b.clone(), f.c.clone()]];
        let Some(t) = Projectivity::new(m) else { continue };
        let lines: Vec<Line> = source.iter().map(|&i| t.apply_line(arr.line(i))).collect();
        if lines.iter().any(|x| x.is_vertical()) || !distinct_crossings(&lines) {
            continue;
        }
        return Ok(Deconed {
            lines,
            system: ls.restrict(&source),
            source,
            removed: l,
            transform: t,
        });
    }
    Err(OracleError::NoGenericChart(seed))
}

fn crossing_xs(lines: &[Line]) -> Vec<(Rational, Rational)> {
    let mut pts = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(p) = lines[i].meet(&lines[j]) {
                if let Some((x, y)) = p.xy() {
                    pts.push((x.clone(), y.clone()));
                }
            }
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

fn distinct_crossings(lines: &[Line]) -> bool {
    let pts = crossing_xs(lines);
    pts.windows(2).all(|w| w[0].0 != w[1].0)
}

/// Crossing of a contiguous block of wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub x: Rational,
    pub y: Rational,
    /// Lowest position of the block just before the crossing.
    pub start: usize,
    /// Affine line indices, bottom to top just before the crossing.
    pub wires: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WiringDiagram {
    /// Affine line indices ordered bottom to top on the base fiber, left of every crossing.
    pub initial: Vec<usize>,
    pub crossings: Vec<Crossing>,
}

/// The wiring diagram of an affine arrangement with no vertical line and distinct crossing `x`.
pub fn wiring_diagram(lines: &[Line]) -> WiringDiagram {
    let pts = crossing_xs(lines);
    let x0 = pts
        .first()
        .map(|(x, _)| x - Rational::from_integer(1.into()))
        .unwrap_or_else(Rational::zero);
    let height = |i: usize, x: &Rational| -> Rational {
        lines[i].slope().unwrap() * x + lines[i].intercept().unwrap()
    };
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by_key(|&a| height(a, &x0));
    let initial = order.clone();
    let mut crossings = Vec::new();
    for (x, y) in pts {
        let on: Vec<usize> = (0..order.len())
            .filter(|&pos| lines[order[pos]].eval_affine(&x, &y).is_zero())
            .collect();
        let start = on[0];
        debug_assert!(on.windows(2).all(|w| w[1] == w[0] + 1), "crossing wires are adjacent");
        let wires: Vec<usize> = on.iter().map(|&p| order[p]).collect();
        order[start..start + wires.len()].reverse();
        crossings.push(Crossing { x, y, start, wires });
    }
    WiringDiagram { initial, crossings }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Node {
    Gen(usize),
    Mul(usize, usize),
    Inv(usize),
}

/// A finitely presented group whose words are shared nodes of a straight-line program.
#[derive(Clone, Debug, Default)]
pub struct GroupPresentation {
    generators: usize,
    nodes: Vec<Node>,
    relators: Vec<usize>,
}

impl GroupPresentation {
    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    fn push(&mut self, n: Node) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn mul(&mut self, a: usize, b: usize) -> usize {
        self.push(Node::Mul(a, b))
    }

    fn inv(&mut self, a: usize) -> usize {
        self.push(Node::Inv(a))
    }

    fn product(&mut self, words: &[usize]) -> Option<usize> {
        let mut it = words.iter();
        let first = *it.next()?;
        Some(it.fold(first, |acc, &w| self.mul(acc, w)))
    }

    fn commutator(&mut self, a: usize, b: usize) -> usize {
        let ai = self.inv(a);
        let bi = self.inv(b);
        let ab = self.mul(a, b);
        let abai = self.mul(ab, ai);
        self.mul(abai, bi)
    }

    /// Fox Jacobian of the relators and the images of the generators under a character.
    pub fn fox_jacobian<F: Field>(&self, character: &[F]) -> Result<Matrix<F>, FieldError> {
        let g = self.generators;
        let mut rho: Vec<F> = Vec::with_capacity(self.nodes.len());
        let mut deriv: Vec<Vec<F>> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let (r, d) = match *node {
                Node::Gen(j) => {
                    let mut d = vec![F::zero(); g];
                    d[j] = F::one();
                    (character[j].clone(), d)
                }
                Node::Mul(a, b) => {
                    let ra = rho[a].clone();
                    let d = deriv[a]
                        .iter()
                        .zip(&deriv[b])
                        .map(|(x, y)| x.clone() + ra.clone() * y.clone())
                        .collect();
                    (ra * rho[b].clone(), d)
                }
                Node::Inv(a) => {
                    let ri = rho[a].inverse()?;
                    let d = deriv[a].iter().map(|x| -(ri.clone() * x.clone())).collect();
                    (ri, d)
                }
            };
            rho.push(r);
            deriv.push(d);
        }
        let rows = self.relators.iter().map(|&r| deriv[r].clone()).collect();
        Ok(Matrix::from_rows(rows, g))
    }
}

/// Presentation read off the wiring diagram: generators are the meridians on the base fiber.
pub fn randell_presentation(diagram: &WiringDiagram) -> GroupPresentation {
    let mut pres = GroupPresentation {
        generators: diagram.initial.len(),
        ..Default::default()
    };
    let mut meridian: Vec<usize> = (0..diagram.initial.len()).map(|j| pres.push(Node::Gen(j))).collect();
    for c in &diagram.crossings {
        let local: Vec<usize> = c.wires.iter().map(|&w| meridian[w]).collect();
        let p = pres.product(&local).expect("crossing has wires");
        for &a in &local[..local.len() - 1] {
            let r = pres.commutator(a, p);
            pres.relators.push(r);
        }
        let mut below: Option<usize> = None;
        for (m, &w) in c.wires.iter().enumerate() {
            if let Some(wd) = below {
                let wi = pres.inv(wd);
                let t = pres.mul(wd, local[m]);
                meridian[w] = pres.mul(t, wi);
                below = Some(t);
            } else {
                below = Some(local[m]);
            }
        }
    }
    pres
}

/// The two boundary maps of the twisted chain complex of a presentation 2-complex.
#[derive(Clone, Debug)]
pub struct TwistedComplex<F> {
    /// Relators by generators.
    pub d2: Matrix<F>,
    /// Generators by one: `rho(g_j) - 1`.
    pub d1: Matrix<F>,
}

impl<F: Field> TwistedComplex<F> {
    pub fn new(pres: &GroupPresentation, character: &[F]) -> Result<Self, FieldError> {
        let d2 = pres.fox_jacobian(character)?;
        let d1 = Matrix::from_rows(character.iter().map(|c| vec![c.clone() - F::one()]).collect(), 1);
        Ok(TwistedComplex { d2, d1 })
    }

    /// `dim ker d1 - rank d2`.
    pub fn h1(&self) -> usize {
        let g = self.d1.rows();
        g - self.d1.rank() - self.d2.rank()
    }
}

/// `h_1(M(A), L)` via the presentation obtained by deconing along line `l`.
pub fn oracle_h1_along<F: Field>(
    arr: &Arrangement,
    ls: &LocalSystem,
    l: usize,
    seed: u64,
) -> Result<usize, OracleError> {
    validate(ls, arr)?;
    let dec = decone(arr, ls, l, seed)?;
    let diagram = wiring_diagram(&dec.lines);
    let pres = randell_presentation(&diagram);
    let character = dec.system.values::<F>()?;
    Ok(TwistedComplex::new(&pres, &character)?.h1())
}

/// `h_1(M(A), L)` deconing along the last line.
pub fn oracle_h1<F: Field>(arr: &Arrangement, ls: &LocalSystem, seed: u64) -> Result<usize, OracleError> {
    let l = arr.len().checked_sub(1).ok_or(OracleError::UnknownLine(0))?;
    oracle_h1_along::<F>(arr, ls, l, seed)
}
