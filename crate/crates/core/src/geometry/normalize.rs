use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::arrangement::{is_sharp, Arrangement};
use super::line::{int, Line};
use super::transform::Projectivity;
use super::GeometryError;
use crate::Rational;

/// Which coordinate assumptions `normalize` must establish.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// Distinct finite slopes and no intersection point at infinity.
    Basic,
    /// Basic, plus `l0 = {y = 0}`, all slopes non-negative and every point with `y >= 0`.
    LineAdapted(usize),
    /// Basic, plus `l0 = {y = 0}`, `l0' = {y = x}`, slopes in `[0, 1]`, and every point either
    /// on `l0` with `x <= 0` or with `x >= y > 0`.
    SharpPairAdapted(usize, usize),
}

#[derive(Clone, Debug)]
pub struct NormalizeOptions {
    /// Return the identity when the input already satisfies the profile's basic part.
    pub identity_first: bool,
    pub max_retries: usize,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            identity_first: true,
            max_retries: 64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NormalizationRecord {
    pub transform: Projectivity,
    /// The line of the input sent to infinity.
    pub line_at_infinity: Line,
    pub seed: u64,
    pub profile: Profile,
}

pub fn normalize(
    arr: &Arrangement,
    profile: Profile,
    seed: u64,
) -> Result<(Arrangement, NormalizationRecord), GeometryError> {
    normalize_with(arr, profile, seed, &NormalizeOptions::default())
}

pub fn normalize_with(
    arr: &Arrangement,
    profile: Profile,
    seed: u64,
    opts: &NormalizeOptions,
) -> Result<(Arrangement, NormalizationRecord), GeometryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fail = |reason: String| GeometryError::NormalizationFailed { seed, reason };
    for &l in profile_lines(profile).iter() {
        if l >= arr.len() {
            return Err(GeometryError::UnknownLine(l));
        }
    }
    let basic = basic_transform(arr, &mut rng, opts).ok_or_else(|| fail("no generic frame found".into()))?;
    let mid = arr.transform(&basic)?;
    let extra = match profile {
        Profile::Basic => Some(Projectivity::identity()),
        Profile::LineAdapted(l0) => {
            (0..opts.max_retries).find_map(|_| line_adapted(&mid, l0, &mut rng))
        }
        Profile::SharpPairAdapted(l0, l1) => {
            if l0 == l1 || !is_sharp(arr, l0, l1) {
                return Err(GeometryError::NotSharp(l0, l1));
            }
            (0..opts.max_retries).find_map(|_| sharp_adapted(&mid, l0, l1, &mut rng))
        }
    }
    .ok_or_else(|| fail(format!("{profile:?} frame could not be verified")))?;
    let transform = extra.after(&basic);
    let out = arr.transform(&transform)?;
    let record = NormalizationRecord {
        line_at_infinity: transform.line_sent_to_infinity(),
        transform,
        seed,
        profile,
    };
    Ok((out, record))
}

fn profile_lines(profile: Profile) -> Vec<usize> {
    match profile {
        Profile::Basic => vec![],
        Profile::LineAdapted(l) => vec![l],
        Profile::SharpPairAdapted(a, b) => vec![a, b],
    }
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.gen_range(-4i64..=4);
    let den = *[1i64, 2, 3].choose(rng).unwrap();
    Rational::new(num.into(), den.into())
}

fn basic_transform(arr: &Arrangement, rng: &mut ChaCha8Rng, opts: &NormalizeOptions) -> Option<Projectivity> {
    if opts.identity_first && arr.is_normalized() {
        return Some(Projectivity::identity());
    }
    let affine_ok = arr.points().iter().all(|p| p.point.is_finite());
    for attempt in 0..opts.max_retries {
        let t = if affine_ok && attempt < opts.max_retries / 2 {
            // shear-rotate composition; keeps the line at infinity in place
            let (s, u) = (small_rational(rng), small_rational(rng));
            let shear_x = Projectivity::new([
                [Rational::one(), s, Rational::zero()],
                [Rational::zero(), Rational::one(), Rational::zero()],
                [Rational::zero(), Rational::zero(), Rational::one()],
            ]);
            let shear_y = Projectivity::new([
                [Rational::one(), Rational::zero(), Rational::zero()],
                [u, Rational::one(), Rational::zero()],
                [Rational::zero(), Rational::zero(), Rational::one()],
            ]);
            let swap = if rng.gen_bool(0.5) {
                Projectivity::from_ints([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
            } else {
                Some(Projectivity::identity())
            };
            match (shear_x, shear_y, swap) {
                (Some(a), Some(b), Some(c)) => a.after(&b).after(&c),
                _ => continue,
            }
        } else {
            let m: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-3..=3)));
            match Projectivity::from_ints(m) {
                Some(t) => t,
                None => continue,
            }
        };
        if arr.transform(&t).map(|a| a.is_normalized()).unwrap_or(false) {
            return Some(t);
        }
    }
    None
}

fn fraction(rng: &mut ChaCha8Rng) -> Rational {
    let choices = [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5)];
    let (n, d) = *choices.choose(rng).unwrap();
    Rational::new(n.into(), d.into())
}

/// Starting from a Basic frame, sends a line beyond all points to infinity so that every point
/// lies on one side of `l0`, then shears until every slope is non-negative.
fn line_adapted(arr: &Arrangement, l0: usize, rng: &mut ChaCha8Rng) -> Option<Projectivity> {
    let f = arr.line(l0).clone();
    let values: Vec<Rational> = arr
        .points()
        .iter()
        .map(|p| {
            let (x, y) = p.xy();
            f.eval_affine(x, y)
        })
        .collect();
    let min_pos = values.iter().filter(|v| v.is_positive()).min().cloned();
    let delta = min_pos.unwrap_or_else(Rational::one) * fraction(rng);
    let zero = Rational::zero();
    let one = Rational::one();
    let lift = Projectivity::new([
        [one.clone(), zero.clone(), zero.clone()],
        [f.a.clone(), f.b.clone(), f.c.clone()],
        [f.a.clone(), f.b.clone(), &f.c - &delta],
    ])?;
    let lifted = arr.transform(&lift).ok()?;
    let slopes: Vec<Option<Rational>> = lifted.lines().iter().map(Line::slope).collect();
    let max_neg = slopes
        .iter()
        .flatten()
        .filter(|s| s.is_negative())
        .max()
        .cloned();
    let r = match max_neg {
        Some(s) => s * fraction(rng),
        None => -one.clone(),
    };
    let shear = Projectivity::new([
        [-r, one.clone(), zero.clone()],
        [zero.clone(), one.clone(), zero.clone()],
        [zero.clone(), zero.clone(), one.clone()],
    ])?;
    let t = shear.after(&lift);
    let out = arr.transform(&t).ok()?;
    check_line_adapted(&out, l0).then_some(t)
}

pub(crate) fn check_line_adapted(arr: &Arrangement, l0: usize) -> bool {
    arr.is_normalized()
        && arr.line(l0).canonical() == Line::from_ints(0, 1, 0).unwrap()
        && arr.lines().iter().all(|l| !l.slope().unwrap().is_negative())
        && arr.points().iter().all(|p| !p.xy().1.is_negative())
}

/// In coordinates `(g, f0)` given by the two sharp lines, the points off both lines sit in one
/// pair of opposite open quadrants; the target frame is read off from that picture.
fn sharp_adapted(arr: &Arrangement, l0: usize, l1: usize, rng: &mut ChaCha8Rng) -> Option<Projectivity> {
    let f = arr.line(l0).clone();
    let mut g = arr.line(l1).clone();
    let coords = |g: &Line| -> Vec<(Rational, Rational)> {
        arr.points()
            .iter()
            .map(|p| {
                let (x, y) = p.xy();
                (g.eval_affine(x, y), f.eval_affine(x, y))
            })
            .collect()
    };
    let mut uv = coords(&g);
    if uv.iter().any(|(u, v)| (u * v).is_negative()) {
        g = Line::new(-&g.a, -&g.b, -&g.c).unwrap();
        uv = coords(&g);
    }
    let min_ratio = uv
        .iter()
        .filter(|(u, v)| !u.is_zero() && !v.is_zero())
        .map(|(u, v)| v / u)
        .min();
    let m = min_ratio.unwrap_or_else(Rational::one) * fraction(rng);
    let min_h = uv
        .iter()
        .filter(|(u, v)| !(u.is_zero() && v.is_zero()))
        .map(|(u, v)| (v - &m * u).abs())
        .min();
    let eps = min_h.unwrap_or_else(Rational::one) * fraction(rng);
    let t = Projectivity::new([
        [&f.a + &g.a, &f.b + &g.b, &f.c + &g.c],
        [f.a.clone(), f.b.clone(), f.c.clone()],
        [&f.a - &m * &g.a, &f.b - &m * &g.b, &f.c - &m * &g.c - &eps],
    ])?;
    let out = arr.transform(&t).ok()?;
    check_sharp_adapted(&out, l0, l1).then_some(t)
}

pub(crate) fn check_sharp_adapted(arr: &Arrangement, l0: usize, l1: usize) -> bool {
    if !arr.is_normalized()
        || arr.line(l0).canonical() != Line::from_ints(0, 1, 0).unwrap()
        || arr.line(l1).canonical() != Line::from_ints(1, -1, 0).unwrap()
    {
        return false;
    }
    let one = int(1);
    let slopes_ok = arr.lines().iter().all(|l| {
        let s = l.slope().unwrap();
        !s.is_negative() && s <= one
    });
    let points_ok = arr.points().iter().all(|p| {
        let (x, y) = p.xy();
        (y.is_zero() && !x.is_positive()) || (x >= y && y.is_positive())
    });
    slopes_ok && points_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sharp_pairs;

    fn quadrilateral() -> Arrangement {
        Arrangement::from_ints(&[(0, 1, 0), (1, 0, 0), (1, -1, 0), (1, 0, -1), (0, 1, -1), (1, 1, -1)])
            .unwrap()
    }

    #[test]
    fn normalized_input_gets_identity() {
        let arr = Arrangement::from_ints(&[(0, 1, 0), (1, -1, 0), (1, 1, -2)]).unwrap();
        assert!(arr.is_normalized());
        let (out, rec) = normalize(&arr, Profile::Basic, 7).unwrap();
        assert_eq!(rec.transform, Projectivity::identity());
        assert_eq!(out.lines(), arr.lines());
    }

    #[test]
    fn vertical_line_removed() {
        let arr = Arrangement::from_ints(&[(1, 0, 0), (0, 1, 0), (1, 1, -3)]).unwrap();
        assert!(!arr.is_normalized());
        let (out, _) = normalize(&arr, Profile::Basic, 1).unwrap();
        assert!(out.is_normalized());
        assert!(out.lines().iter().all(|l| !l.is_vertical()));
        assert_eq!(out.incidence_signature(), arr.incidence_signature());
    }

    #[test]
    fn quadrilateral_normalizes_with_same_poset() {
        let arr = quadrilateral();
        for seed in 0..10 {
            let (out, rec) = normalize(&arr, Profile::Basic, seed).unwrap();
            assert!(out.is_normalized());
            assert_eq!(out.incidence_signature(), arr.incidence_signature());
            let replay = arr.transform(&rec.transform).unwrap();
            assert_eq!(replay.lines(), out.lines());
            assert!(rec.transform.apply_line(&rec.line_at_infinity).is_at_infinity());
        }
    }

    #[test]
    fn line_adapted_frames() {
        let arr = quadrilateral();
        for l0 in 0..arr.len() {
            for seed in 0..4 {
                let (out, _) = normalize(&arr, Profile::LineAdapted(l0), seed).unwrap();
                assert!(check_line_adapted(&out, l0));
                assert_eq!(out.incidence_signature(), arr.incidence_signature());
            }
        }
    }

    #[test]
    fn sharp_adapted_frames() {
        let arr = quadrilateral();
        let pairs = sharp_pairs(&arr);
        assert!(!pairs.is_empty());
        for &(a, b) in &pairs {
            for (l0, l1) in [(a, b), (b, a)] {
                let (out, _) = normalize(&arr, Profile::SharpPairAdapted(l0, l1), 3).unwrap();
                assert!(check_sharp_adapted(&out, l0, l1));
                assert_eq!(out.incidence_signature(), arr.incidence_signature());
            }
        }
    }

    #[test]
    fn non_sharp_pair_rejected() {
        let arr = quadrilateral();
        let pairs = sharp_pairs(&arr);
        let bad = (0..6)
            .flat_map(|i| (i + 1..6).map(move |j| (i, j)))
            .find(|p| !pairs.contains(p))
            .unwrap();
        let err = normalize(&arr, Profile::SharpPairAdapted(bad.0, bad.1), 0).unwrap_err();
        assert_eq!(err, GeometryError::NotSharp(bad.0, bad.1));
    }

    #[test]
    fn deterministic_given_seed() {
        let arr = quadrilateral();
        let a = normalize(&arr, Profile::Basic, 99).unwrap().1;
        let b = normalize(&arr, Profile::Basic, 99).unwrap().1;
        assert_eq!(a.transform, b.transform);
    }
}
