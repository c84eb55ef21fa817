//! Arrangement files: `{"lines": [[a, b, c], ...], "local_system": {...}}`.

use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use twisted_betti::geometry::{Arrangement, Line};
use twisted_betti::local_system::{LocalSystem, Monodromy};
use twisted_betti::Rational;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Exact { order: u32, exponents: Vec<i64> },
    Float { values: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrangementFile {
    /// Each coefficient is a JSON integer or a string such as `"3/2"`.
    pub lines: Vec<[Value; 3]>,
    pub local_system: SystemSpec,
}

#[derive(Debug)]
pub struct Input {
    pub arrangement: Arrangement,
    pub system: LocalSystem,
}

fn coefficient(v: &Value, at: &str) -> Result<Rational, CliError> {
    let bad = |why: &str| CliError::Parse(format!("{at}: {why}"));
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| bad("coefficients must be integers or rational strings")),
        Value::String(s) => {
            Rational::from_str(s.trim()).map_err(|e| bad(&format!("cannot parse {s:?} as a rational ({e})")))
        }
        _ => Err(bad("coefficients must be integers or rational strings")),
    }
}

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_str(text: &str) -> Result<Input, CliError> {
    let file: ArrangementFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    from_file(&file)
}

pub fn from_file(file: &ArrangementFile) -> Result<Input, CliError> {
    let mut lines = Vec::with_capacity(file.lines.len());
    for (i, row) in file.lines.iter().enumerate() {
        let c: Vec<Rational> = row
            .iter()
            .enumerate()
            .map(|(j, v)| coefficient(v, &format!("lines[{i}][{j}]")))
            .collect::<Result<_, _>>()?;
        let [a, b, c]: [Rational; 3] = c.try_into().expect("three coefficients");
        let line = Line::new(a, b, c).ok_or_else(|| CliError::Parse(format!("lines[{i}]: all coefficients are zero")))?;
        lines.push(line);
    }
    let values = match &file.local_system {
        SystemSpec::Exact { exponents, .. } => exponents.len(),
        SystemSpec::Float { values } => values.len(),
    };
    if values != lines.len() {
        return Err(CliError::Parse(format!(
            "local_system: {values} monodromy values for {} lines",
            lines.len()
        )));
    }
    let arrangement = Arrangement::new(lines).map_err(|e| CliError::Parse(format!("lines: {e}")))?;
    let system = match &file.local_system {
        SystemSpec::Exact { order, exponents } => {
            LocalSystem::exact(*order, exponents).map_err(|e| CliError::Parse(format!("local_system: {e}")))?
        }
        SystemSpec::Float { values } => LocalSystem::float(values.iter().map(|&[re, im]| Complex64::new(re, im)).collect()),
    };
    Ok(Input { arrangement, system })
}

pub fn read(path: &Path) -> Result<Input, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_str(&text)
}

/// Serializes an instance back to the file format, with rational coefficients as strings.
pub fn to_file(arr: &Arrangement, ls: &LocalSystem) -> ArrangementFile {
    let lines = arr
        .lines()
        .iter()
        .map(|l| l.coefficients().map(|c| Value::String(rational_string(c))))
        .collect();
    let local_system = match ls.monodromy() {
        Monodromy::Exact { order, exponents } => SystemSpec::Exact {
            order: *order,
            exponents: exponents.iter().map(|&k| k as i64).collect(),
        },
        Monodromy::Float { values } => SystemSpec::Float {
            values: values.iter().map(|z| [z.re, z.im]).collect(),
        },
    };
    ArrangementFile { lines, local_system }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_and_fractions() {
        let text = r#"{"lines": [[0, 1, 0], ["1", "-1", 0], ["1/2", 1, "-3/2"]],
                       "local_system": {"order": 3, "exponents": [1, 1, 1]}}"#;
        let input = parse_str(text).unwrap();
        assert_eq!(input.arrangement.len(), 3);
        assert_eq!(input.system.order(), Some(3));
    }

    #[test]
    fn rejects_bad_coefficients() {
        let zero_den = r#"{"lines": [[0, 1, 0], ["3/0", 1, 0]], "local_system": {"order": 2, "exponents": [1, 1]}}"#;
        let err = parse_str(zero_den).unwrap_err();
        assert!(matches!(&err, CliError::Parse(m) if m.starts_with("lines[1][0]")), "{err:?}");
        let float = r#"{"lines": [[0, 1.5, 0]], "local_system": {"order": 2, "exponents": [1]}}"#;
        assert!(matches!(parse_str(float), Err(CliError::Parse(_))));
        let dup = r#"{"lines": [[0, 1, 0], [0, 2, 0]], "local_system": {"order": 2, "exponents": [1, 1]}}"#;
        assert!(matches!(parse_str(dup), Err(CliError::Parse(_))));
        let short = r#"{"lines": [[0, 1, 0], [1, 0, 0]], "local_system": {"order": 2, "exponents": [1]}}"#;
        assert!(matches!(parse_str(short), Err(CliError::Parse(m)) if m.starts_with("local_system")));
    }

    #[test]
    fn float_values() {
        let text = r#"{"lines": [[0, 1, 0], [1, -1, 0]], "local_system": {"values": [[-1, 0], [-1, 0]]}}"#;
        let input = parse_str(text).unwrap();
        assert!(!input.system.is_exact());
    }

    #[test]
    fn round_trip() {
        let text = r#"{"lines": [[0, 1, 0], ["1/2", -1, 0], [1, 1, -2]], "local_system": {"order": 3, "exponents": [1, 1, 1]}}"#;
        let input = parse_str(text).unwrap();
        let back = serde_json::to_string(&to_file(&input.arrangement, &input.system)).unwrap();
        let again = parse_str(&back).unwrap();
        assert_eq!(again.arrangement.lines(), input.arrangement.lines());
        assert_eq!(again.system, input.system);
    }
}
