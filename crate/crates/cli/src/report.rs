//! JSON reports. Keys are sorted (serde_json's default map), rationals are strings, so output is
//! byte-stable for a fixed input and seed.

use serde_json::{json, Value};
use twisted_betti::analysis::Analysis;
use twisted_betti::bounds::{BetaCertificate, LineBounds, SharpPairReport};
use twisted_betti::geometry::{Arrangement, Mat3, NormalizationRecord, Profile};
use twisted_betti::Field;

use crate::input::rational_string;

fn matrix(m: &Mat3) -> Value {
    m.iter().map(|row| row.iter().map(rational_string).collect::<Vec<_>>()).collect()
}

fn lines(arr: &Arrangement) -> Value {
    arr.lines()
        .iter()
        .map(|l| l.coefficients().map(rational_string).to_vec())
        .collect()
}

pub fn normalization(record: &NormalizationRecord, normalized: &Arrangement) -> Value {
    let profile = match record.profile {
        Profile::Basic => json!({"kind": "basic"}),
        Profile::LineAdapted(l) => json!({"kind": "line_adapted", "line": l}),
        Profile::SharpPairAdapted(a, b) => json!({"kind": "sharp_pair_adapted", "lines": [a, b]}),
    };
    json!({
        "seed": record.seed,
        "profile": profile,
        "transform": matrix(record.transform.matrix()),
        "line_at_infinity": record.line_at_infinity.coefficients().map(rational_string).to_vec(),
        "normalized_lines": lines(normalized),
    })
}

pub fn census(normalized: &Arrangement, resonant: &[usize], bounded: usize, zaslavsky_ok: bool) -> Value {
    let points: Vec<Value> = normalized
        .points()
        .iter()
        .map(|p| {
            let (x, y) = p.xy();
            json!({
                "id": p.id,
                "x": rational_string(x),
                "y": rational_string(y),
                "lines": p.lines,
                "multiplicity": p.multiplicity(),
                "resonant": resonant.contains(&p.id),
            })
        })
        .collect();
    let mut counts = std::collections::BTreeMap::new();
    for p in normalized.points() {
        *counts.entry(p.multiplicity().to_string()).or_insert(0usize) += 1;
    }
    json!({
        "points": points,
        "multiplicities": counts,
        "resonant": resonant,
        "bounded_chambers": bounded,
        "zaslavsky_ok": zaslavsky_ok,
    })
}

pub fn line_bounds(bounds: &[LineBounds]) -> Value {
    bounds
        .iter()
        .map(|b| {
            json!({
                "line": b.line,
                "resonant_points": b.resonant_points,
                "cdo": b.cdo,
                "r0": b.r0.map_or(json!("not applicable"), |r| json!(r)),
            })
        })
        .collect()
}

fn check(applicable: bool, satisfied: bool) -> Value {
    json!({"applicable": applicable, "satisfied": if applicable { json!(satisfied) } else { Value::Null }})
}

pub fn sharp(rep: &SharpPairReport) -> Value {
    json!({
        "pairs": rep.pairs.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
        "h1": rep.h1,
        "constant_order": rep.constant_order,
        "at_most_one": check(rep.at_most_one_applies, rep.at_most_one_holds),
        "vanishing": check(rep.vanishing_applies, rep.vanishing_holds),
    })
}

pub fn analysis(a: &Analysis) -> Value {
    let h = &a.homology;
    let r0 = a.r0_holds();
    json!({
        "mode": if a.exact { "exact" } else { "float" },
        "normalization": normalization(&a.record, &a.normalized),
        "census": census(&a.normalized, &a.resonant, h.bounded_chambers, h.zaslavsky_ok),
        "matrix": {
            "rows": h.num_rows,
            "cols": h.dim_a,
            "point_rows": h.point_rows,
            "chamber_rows": h.chamber_rows,
            "zero_chamber_rows": h.zero_chamber_rows,
        },
        "dim_a": h.dim_a,
        "rank": h.rank,
        "h1": h.h1,
        "bounds": {
            "per_line": line_bounds(&a.line_bounds),
            "best": a.best_bound,
        },
        "sharp_pairs": a.sharp.pairs.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>(),
        "checks": {
            "cdo_bound": check(true, a.cdo_holds()),
            "resonant_count_bound": check(r0.is_some(), r0 == Some(true)),
            "sharp_pair_at_most_one": check(a.sharp.at_most_one_applies, a.sharp.at_most_one_holds),
            "sharp_pair_vanishing": check(a.sharp.vanishing_applies, a.sharp.vanishing_holds),
        },
        "oracle": a.oracle.map(|o| json!({"h1": o, "agrees": o == h.h1})),
        "float_check": a.float_rank.map(|r| json!({"rank": r, "agrees": r == h.rank})),
        "euler_characteristic": a.euler,
        "h2": a.h2(),
        "consistent": a.consistent(),
        "failures": a.failures(),
    })
}

pub fn certificate<F: Field>(c: &BetaCertificate<F>) -> Value {
    let bound = c.dimension_bound();
    json!({
        "line": c.line,
        "r0": c.r0,
        "a_prime": c.a_prime,
        "neighbors": c.neighbor_of.iter().map(|&(l, q)| json!({"line": l, "point": q})).collect::<Vec<_>>(),
        "n": c.n_set,
        "beta_count": c.betas.len(),
        "difference_count": c.differences.len(),
        "betas_in_k": c.betas_in_k,
        "differences_in_k": c.differences_in_k,
        "family_rank": c.family_rank,
        "independent": c.independent(),
        "count_ok": c.count_ok(),
        "reduces_to_line": c.reduces_to_line,
        "dimension_bound": bound,
        "h1": c.h1,
        "holds": c.holds(),
    })
}

pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use std::str::FromStr;

    use twisted_betti::analysis::{analyze, AnalysisOptions};
    use twisted_betti::geometry::{Line, Projectivity};
    use twisted_betti::Rational;

    use super::*;
    use crate::input::parse_str;

    fn rational(v: &Value) -> Rational {
        Rational::from_str(v.as_str().unwrap()).unwrap()
    }

    #[test]
    fn normalization_record_round_trips() {
        let text = r#"{"lines": [[2, 1, 0], [0, 1, 2], [1, -4, -9], [1, -2, -3], [1, -1, 0], [2, -1, 0]],
                       "local_system": {"order": 3, "exponents": [1, 1, 1, 1, 1, 1]}}"#;
        let input = parse_str(text).unwrap();
        for seed in [0, 7, 123] {
            let opts = AnalysisOptions { seed, ..AnalysisOptions::default() };
            let a = analyze(&input.arrangement, &input.system, &opts).unwrap();
            let report = analysis(&a);
            let norm = &report["normalization"];
            let m: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| rational(&norm["transform"][i][j])));
            let t = Projectivity::new(m).unwrap();
            let expected: Vec<Line> = norm["normalized_lines"]
                .as_array()
                .unwrap()
                .iter()
                .map(|l| Line::new(rational(&l[0]), rational(&l[1]), rational(&l[2])).unwrap())
                .collect();
            let mapped: Vec<Line> = input.arrangement.lines().iter().map(|l| t.apply_line(l)).collect();
            assert_eq!(mapped, expected, "seed {seed}");
        }
    }

    #[test]
    fn reports_are_byte_stable() {
        let text = r#"{"lines": [[0, 1, 0], [1, -1, 0], [1, 1, -2], ["1/2", 1, -3]],
                       "local_system": {"order": 2, "exponents": [1, 1, 1, 1]}}"#;
        let input = parse_str(text).unwrap();
        let run = || to_string(&analysis(&analyze(&input.arrangement, &input.system, &AnalysisOptions::default()).unwrap()));
        assert_eq!(run(), run());
    }
}
