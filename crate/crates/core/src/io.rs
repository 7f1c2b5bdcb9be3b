//! Frame files and result documents.
//!
//! A frame file is JSON:
//!
//! ```json
//! {"field": "R", "n": 2, "unit_norm": true, "vectors": [[1, 0], [0, 1]]}
//! ```
//!
//! Complex frames use `"field": "C"` and write each entry as `[re, im]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::frame::{Field, Frame};

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

/// Parses and validates a frame file.
///
/// With `"unit_norm": true` every vector must have norm within
/// `cfg.tau_unit` of 1. `renormalize` instead divides every vector by its
/// norm and flags the frame unit-norm, whatever the file says.
pub fn parse_frame(text: &str, cfg: &Config, renormalize: bool) -> Result<Frame> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| parse_error(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let Value::Object(doc) = value else {
        return Err(parse_error("$", "expected an object"));
    };
    if let Some(key) = doc
        .keys()
        .find(|k| !matches!(k.as_str(), "field" | "n" | "unit_norm" | "vectors"))
    {
        return Err(parse_error(format!("$.{key}"), "unknown field"));
    }
    let field = match required(&doc, "field")? {
        Value::String(s) if s == "R" => Field::Real,
        Value::String(s) if s == "C" => Field::Complex,
        _ => return Err(parse_error("$.field", "expected \"R\" or \"C\"")),
    };
    let n = required(&doc, "n")?
        .as_u64()
        .ok_or_else(|| parse_error("$.n", "expected a non-negative integer"))? as usize;
    let unit_norm = match doc.get("unit_norm") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(parse_error("$.unit_norm", "expected a boolean")),
    };
    let Value::Array(rows) = required(&doc, "vectors")? else {
        return Err(parse_error("$.vectors", "expected an array of vectors"));
    };

    let mut vectors = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let Value::Array(entries) = row else {
            return Err(parse_error(format!("$.vectors[{i}]"), "expected an array"));
        };
        if entries.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: entries.len(),
            });
        }
        let mut v = Vec::with_capacity(n);
        for (j, entry) in entries.iter().enumerate() {
            let at = || format!("$.vectors[{i}][{j}]");
            let z = match (field, entry) {
                (Field::Real, Value::Number(x)) => Complex64::new(x.as_f64().unwrap_or(f64::NAN), 0.0),
                (Field::Complex, Value::Array(pair)) if pair.len() == 2 => {
                    let part = |p: &Value| p.as_f64().ok_or_else(|| parse_error(at(), "expected a number"));
                    Complex64::new(part(&pair[0])?, part(&pair[1])?)
                }
                (Field::Real, _) => return Err(parse_error(at(), "expected a number")),
                (Field::Complex, _) => return Err(parse_error(at(), "expected [re, im]")),
            };
            v.push(z);
        }
        vectors.push(v);
    }
    if vectors.is_empty() {
        return Err(parse_error("$.vectors", "a frame needs at least one vector"));
    }

    let frame = Frame::new(field, vectors)?;
    if renormalize {
        frame.normalized()
    } else if unit_norm {
        frame.into_unit_norm(cfg.tau_unit)
    } else {
        Ok(frame)
    }
}

fn required<'a>(doc: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    doc.get(key)
        .ok_or_else(|| parse_error(format!("$.{key}"), "missing field"))
}

/// Serializes a frame in the file format accepted by [`parse_frame`].
pub fn emit_frame(frame: &Frame) -> String {
    let vectors: Vec<Value> = frame
        .vectors()
        .iter()
        .map(|v| match frame.field() {
            Field::Real => Value::from(v.iter().map(|z| z.re).collect::<Vec<_>>()),
            Field::Complex => Value::from(v.iter().map(|z| vec![z.re, z.im]).collect::<Vec<_>>()),
        })
        .collect();
    let doc = serde_json::json!({
        "field": frame.field(),
        "n": frame.n(),
        "unit_norm": frame.is_unit_norm(),
        "vectors": vectors,
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("plain JSON values");
    out.push('\n');
    out
}

/// Hex SHA-256 of the raw input bytes.
pub fn input_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Coefficients supplied for verification. Extra fields are ignored, so a
/// result document can be passed back in directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub coefficients: Vec<f64>,
    #[serde(default)]
    pub lambda: Option<f64>,
}

pub fn parse_coefficients(text: &str) -> Result<CoefficientFile> {
    serde_json::from_str(text).map_err(|e| {
        parse_error(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })
}

/// Machine-readable output of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input_digest: Option<String>,
    pub verdict: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Value>,
    pub tolerances: Config,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl ResultDocument {
    pub fn new(command: &str, verdict: &str, exit_code: i32, tolerances: Config) -> Self {
        Self {
            tool: "framescale".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input_digest: None,
            verdict: verdict.into(),
            exit_code,
            coefficients: None,
            lambda: None,
            certificate: None,
            residuals: None,
            tolerances,
            details: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plain JSON values");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn parse(text: &str) -> Result<Frame> {
        parse_frame(text, &Config::default(), false)
    }

    #[test]
    fn minimal_basis() {
        let f = parse(r#"{"field": "R", "n": 2, "unit_norm": true, "vectors": [[1, 0], [0, 1]]}"#).unwrap();
        assert_eq!((f.k(), f.n()), (2, 2));
        assert!(f.is_unit_norm());
    }

    #[test]
    fn short_vector_is_a_norm_violation() {
        let text = r#"{"field": "R", "n": 2, "unit_norm": true, "vectors": [[1, 0], [0.9, 0]]}"#;
        assert_eq!(parse(text), Err(Error::NormViolation { index: 1, norm: 0.9 }));
        let fixed = parse_frame(text, &Config::default(), true).unwrap();
        assert_eq!(fixed.real_vector(1), vec![1.0, 0.0]);
    }

    #[test]
    fn complex_entries() {
        let f = parse(r#"{"field": "C", "n": 2, "unit_norm": true, "vectors": [[[0, 1], [0, 0]], [[0, 0], [1, 0]]]}"#)
            .unwrap();
        assert_eq!(f.field(), Field::Complex);
        assert_eq!(f.vector(0)[0], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn errors_carry_locations() {
        let bad = |text: &str| match parse(text) {
            Err(Error::Parse { location, .. }) => location,
            other => panic!("{other:?}"),
        };
        assert_eq!(bad(r#"{"field": "R", "n": 2, "vectors": [[1, "x"]]}"#), "$.vectors[0][1]");
        assert_eq!(bad(r#"{"field": "Q", "n": 2, "vectors": []}"#), "$.field");
        assert_eq!(bad(r#"{"field": "R", "n": 2, "vectors": [], "extra": 1}"#), "$.extra");
        assert!(bad("{\n\"field\": ").starts_with("line 2"));
        assert_eq!(
            parse(r#"{"field": "R", "n": 3, "vectors": [[1, 0]]}"#),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn round_trip() {
        let f = samples::union_of_two_bases();
        assert_eq!(parse(&emit_frame(&f)).unwrap(), f);
        let c = Frame::from_complex(vec![vec![Complex64::new(0.6, 0.8), Complex64::new(0.0, 0.0)]; 2])
            .unwrap()
            .into_unit_norm(1e-12)
            .unwrap();
        assert_eq!(parse(&emit_frame(&c)).unwrap(), c);
    }

    #[test]
    fn coefficients_accept_result_documents() {
        let c = parse_coefficients(r#"{"tool": "x", "coefficients": [1, 2], "lambda": 2.5}"#).unwrap();
        assert_eq!(c.coefficients, vec![1.0, 2.0]);
        assert_eq!(c.lambda, Some(2.5));
        assert!(parse_coefficients(r#"{"coefficients": [1]}"#).unwrap().lambda.is_none());
    }
}
