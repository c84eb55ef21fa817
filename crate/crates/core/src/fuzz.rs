//! Random arrangements and admissible local systems for property tests.

use std::collections::HashSet;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::geometry::{is_sharp, sharp_pairs, Arrangement, Line, Projectivity};
use crate::local_system::{resonant_points, LocalSystem};
use crate::Rational;

#[derive(Clone, Debug)]
pub struct FuzzInstance {
    pub arrangement: Arrangement,
    pub system: LocalSystem,
    /// A pair known to be sharp, for instances drawn from the sharp family.
    pub sharp: Option<(usize, usize)>,
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn add_unique(lines: &mut Vec<Line>, seen: &mut HashSet<Line>, l: Option<Line>) {
    if let Some(l) = l {
        if !l.is_at_infinity() && seen.insert(l.canonical()) {
            lines.push(l);
        }
    }
}

/// `n` distinct lines, either through a few hub points or joining points of a small grid, so
/// that multiple points are common. Grid lines are often parallel.
pub fn random_arrangement<R: Rng>(rng: &mut R, n: usize) -> Arrangement {
    if n >= 6 && rng.gen_bool(0.35) {
        return quadrilateral_arrangement(rng, n);
    }
    if rng.gen_bool(0.4) {
        if let Some(arr) = grid_arrangement(rng, n) {
            return arr;
        }
    }
    loop {
        let hubs: Vec<(i64, i64)> = (0..rng.gen_range(2..=4))
            .map(|_| (rng.gen_range(-3..=3), rng.gen_range(-3..=3)))
            .collect();
        let mut lines = Vec::new();
        let mut seen = HashSet::new();
        let mut guard = 0;
        while lines.len() < n && guard < 200 {
            guard += 1;
            let cand = match rng.gen_range(0..10) {
                0..=4 => {
                    let a = hubs.choose(rng).unwrap();
                    let b = hubs.choose(rng).unwrap();
                    Line::through((&r(a.0), &r(a.1)), (&r(b.0), &r(b.1)))
                }
                5..=7 => {
                    let a = hubs.choose(rng).unwrap();
                    let (dx, dy) = (rng.gen_range(-3..=3i64), rng.gen_range(-3..=3i64));
                    Line::through((&r(a.0), &r(a.1)), (&r(a.0 + dx), &r(a.1 + dy)))
                }
                _ => Line::from_ints(rng.gen_range(-4..=4), rng.gen_range(-4..=4), rng.gen_range(-6..=6)),
            };
            add_unique(&mut lines, &mut seen, cand);
        }
        if lines.len() == n {
            if let Ok(arr) = Arrangement::new(lines) {
                return arr;
            }
        }
    }
}

/// The six joins of four random points in general position (a complete quadrilateral), plus
/// lines joining existing intersection points until there are `n` lines.
pub fn quadrilateral_arrangement<R: Rng>(rng: &mut R, n: usize) -> Arrangement {
    assert!(n >= 6);
    loop {
        let pts: Vec<(Rational, Rational)> = (0..4)
            .map(|_| (r(rng.gen_range(-4..=4)), r(rng.gen_range(-4..=4))))
            .collect();
        let collinear = |a: &(Rational, Rational), b: &(Rational, Rational), c: &(Rational, Rational)| {
            (&b.0 - &a.0) * (&c.1 - &a.1) == (&b.1 - &a.1) * (&c.0 - &a.0)
        };
        let degenerate = (0..4).any(|i| {
            (i + 1..4).any(|j| (j + 1..4).any(|k| collinear(&pts[i], &pts[j], &pts[k])))
        });
        if degenerate {
            continue;
        }
        let mut lines = Vec::new();
        let mut seen = HashSet::new();
        for i in 0..4 {
            for j in i + 1..4 {
                add_unique(&mut lines, &mut seen, Line::through((&pts[i].0, &pts[i].1), (&pts[j].0, &pts[j].1)));
            }
        }
        let mut guard = 0;
        while lines.len() < n && guard < 100 {
            guard += 1;
            let Ok(arr) = Arrangement::new(lines.clone()) else { break };
            let finite: Vec<(Rational, Rational)> = arr
                .points()
                .iter()
                .filter_map(|p| p.point.xy().map(|(x, y)| (x.clone(), y.clone())))
                .collect();
            let a = finite.choose(rng).unwrap();
            let b = finite.choose(rng).unwrap();
            add_unique(&mut lines, &mut seen, Line::through((&a.0, &a.1), (&b.0, &b.1)));
        }
        if lines.len() == n {
            if let Ok(arr) = Arrangement::new(lines) {
                return arr;
            }
        }
    }
}

fn grid_arrangement<R: Rng>(rng: &mut R, n: usize) -> Option<Arrangement> {
    let (w, h) = (rng.gen_range(2..=4i64), rng.gen_range(2..=3i64));
    let pts: Vec<(i64, i64)> = (0..w).flat_map(|x| (0..h).map(move |y| (x, y))).collect();
    let mut lines = Vec::new();
    let mut seen = HashSet::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            add_unique(&mut lines, &mut seen, Line::through((&r(a.0), &r(a.1)), (&r(b.0), &r(b.1))));
        }
    }
    if lines.len() < n {
        return None;
    }
    lines.shuffle(rng);
    lines.truncate(n);
    Arrangement::new(lines).ok()
}

/// A non-pencil arrangement with a known sharp pair. Usually built around `y = 0` and `y = x`
/// with all other points in the wedge `x >= y > 0` or on `y = 0` left of the origin, then moved
/// by a random projectivity with the lines shuffled; sometimes a complete quadrilateral with
/// extra lines that happens to keep a sharp pair.
pub fn random_sharp_arrangement<R: Rng>(rng: &mut R, n: usize) -> (Arrangement, (usize, usize)) {
    assert!(n >= 3, "two lines always form a pencil");
    if n >= 6 && rng.gen_bool(0.3) {
        for _ in 0..20 {
            let arr = quadrilateral_arrangement(rng, n);
            let pairs = sharp_pairs(&arr);
            if let Some(&pair) = pairs.choose(rng) {
                return (arr, pair);
            }
        }
    }
    loop {
        // l0 = {y = 0}, l0' = {y = x}; other points go in x >= y > 0 or on l0 with x <= 0
        let mut hubs: Vec<(i64, i64)> = Vec::new();
        for _ in 0..rng.gen_range(2..=4) {
            if rng.gen_bool(0.3) {
                hubs.push((-rng.gen_range(0..=4), 0));
            } else {
                let y = rng.gen_range(1..=4);
                hubs.push((y + rng.gen_range(0..=4), y));
            }
        }
        let mut lines = vec![Line::from_ints(0, 1, 0).unwrap(), Line::from_ints(1, -1, 0).unwrap()];
        let mut seen: HashSet<Line> = lines.iter().map(Line::canonical).collect();
        let mut guard = 0;
        while lines.len() < n && guard < 300 {
            guard += 1;
            let a = *hubs.choose(rng).unwrap();
            let cand = if rng.gen_bool(0.5) {
                let b = *hubs.choose(rng).unwrap();
                Line::through((&r(a.0), &r(a.1)), (&r(b.0), &r(b.1)))
            } else {
                let s = Rational::new(rng.gen_range(1..=7).into(), 8.into());
                Some(Line::from_slope_intercept(s.clone(), r(a.1) - s * r(a.0)))
            };
            let before = lines.len();
            add_unique(&mut lines, &mut seen, cand);
            if lines.len() > before {
                let ok = Arrangement::new(lines.clone()).map(|a| is_sharp(&a, 0, 1)).unwrap_or(false);
                if !ok {
                    let l = lines.pop().unwrap();
                    seen.remove(&l.canonical());
                }
            }
        }
        // a pencil has every pair vacuously sharp and is not what this family is for
        if lines.len() < n || Arrangement::new(lines.clone()).map_or(true, |a| a.points().len() <= 1) {
            continue;
        }
        let t = loop {
            let m: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-3..=3)));
            if let Some(t) = Projectivity::from_ints(m) {
                break t;
            }
        };
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let moved: Vec<Line> = perm.iter().map(|&i| t.apply_line(&lines[i])).collect();
        if moved.iter().any(Line::is_at_infinity) {
            continue;
        }
        let Ok(arr) = Arrangement::new(moved) else { continue };
        let a = perm.iter().position(|&i| i == 0).unwrap();
        let b = perm.iter().position(|&i| i == 1).unwrap();
        return (arr, (a.min(b), a.max(b)));
    }
}

/// The constant system `zeta_d^k` with the smallest `k` making it admissible, if any.
pub fn constant_system(n: usize, d: u32) -> Option<LocalSystem> {
    (1..d as i64)
        .find(|&k| (k * n as i64) % d as i64 == 0)
        .map(|k| LocalSystem::constant(d, k, n).unwrap())
}

/// Exponents in `1..d` summing to zero mod `d`; with `resonate` the lines through `point` are
/// given a trivial product first.
pub fn random_exponents<R: Rng>(rng: &mut R, n: usize, d: u32, resonate: Option<&[usize]>) -> Option<LocalSystem> {
    if d < 2 || n < 2 {
        return None;
    }
    let d64 = d as i64;
    for _ in 0..200 {
        let mut k = vec![0i64; n];
        let mut fixed = vec![false; n];
        if let Some(lines) = resonate {
            let (last, rest) = lines.split_last()?;
            let mut s = 0;
            for &l in rest {
                k[l] = rng.gen_range(1..d64);
                s += k[l];
                fixed[l] = true;
            }
            k[*last] = (-s).rem_euclid(d64);
            fixed[*last] = true;
            if k[*last] == 0 {
                continue;
            }
        }
        let free: Vec<usize> = (0..n).filter(|&l| !fixed[l]).collect();
        if let Some((&last, rest)) = free.split_last() {
            for &l in rest {
                k[l] = rng.gen_range(1..d64);
            }
            let s: i64 = (0..n).filter(|&l| l != last).map(|l| k[l]).sum();
            k[last] = (-s).rem_euclid(d64);
        }
        if k.iter().all(|&x| x.rem_euclid(d64) != 0) && k.iter().sum::<i64>().rem_euclid(d64) == 0 {
            return Some(LocalSystem::exact(d, &k).unwrap());
        }
    }
    None
}

/// Among `tries` admissible exponent vectors, one with the most resonant points.
pub fn resonant_heavy_system<R: Rng>(rng: &mut R, arr: &Arrangement, d: u32, tries: usize) -> Option<LocalSystem> {
    let n = arr.len();
    (0..tries)
        .filter_map(|_| random_exponents(rng, n, d, None))
        .map(|ls| (resonant_points(arr, &ls).points.len(), ls))
        .max_by_key(|(count, _)| *count)
        .map(|(_, ls)| ls)
}

/// A constant system (when one exists) 40% of the time; otherwise random exponents, either
/// forced resonant at one multiple point or chosen to maximize the number of resonant points.
pub fn random_system<R: Rng>(rng: &mut R, arr: &Arrangement, d: u32) -> Option<LocalSystem> {
    let n = arr.len();
    if rng.gen_bool(0.4) {
        if let Some(ls) = resonant_heavy_system(rng, arr, d, 256) {
            return Some(ls);
        }
    }
    if rng.gen_bool(0.4) {
        if let Some(ls) = constant_system(n, d) {
            return Some(ls);
        }
    }
    let multiple: Vec<&[usize]> = arr
        .points()
        .iter()
        .filter(|p| p.multiplicity() >= 3)
        .map(|p| p.lines.as_slice())
        .collect();
    let target = if !multiple.is_empty() && rng.gen_bool(0.7) {
        multiple.choose(rng).copied()
    } else {
        None
    };
    random_exponents(rng, n, d, target).or_else(|| random_exponents(rng, n, d, None))
}

/// Effective order of the constant system `zeta_d^k`.
pub fn effective_order(d: u32, k: u32) -> u32 {
    d / d.gcd(&k)
}

pub fn random_instance<R: Rng>(rng: &mut R, n: usize, d: u32, sharp: bool) -> Option<FuzzInstance> {
    for _ in 0..50 {
        let (arr, pair) = if sharp {
            let (a, p) = random_sharp_arrangement(rng, n);
            (a, Some(p))
        } else {
            (random_arrangement(rng, n), None)
        };
        if let Some(system) = random_system(rng, &arr, d) {
            return Some(FuzzInstance {
                arrangement: arr,
                system,
                sharp: pair,
            });
        }
    }
    None
}
