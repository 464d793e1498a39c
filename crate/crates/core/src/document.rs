//! JSON cone documents.
//!
//! ```json
//! {"name": "quadrant2", "ambient_dim": 2, "generators": [["1", "0"], ["0", "1"]]}
//! {"name": "wedge", "ambient_dim": 2, "inequalities": [["1", "0"], ["-1", "2"]]}
//! {"builtin": {"lorentz": 3}}
//! {"builtin": {"siegel": {"u_dim": 1, "k": {"generators": [["1"]]}, "b": [[["1"]]]}}}
//! ```
//!
//! Vectors hold rational strings (`"p/q"` or integers). Exactly one of
//! `generators`, `inequalities` and `builtin` must be present. The base cone `k`
//! of a Siegel cone holds exactly one of `generators`, `inequalities` or
//! `lorentz`; its dimension is the length of its vectors.

use std::path::Path;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::curvedcones::{BaseCone, LorentzCone, SiegelCone, SiegelData};
use crate::polycone::Cone;
use crate::ratlin::{format_rational, parse_rational, to_f64, QVector, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocumentError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

fn schema(path: &str, message: impl Into<String>) -> DocumentError {
    DocumentError::Schema { path: path.to_string(), message: message.into() }
}

/// Which representation a polyhedral document was given in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Generators,
    Inequalities,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConeKind {
    Polyhedral { cone: Cone, given_as: Representation },
    Lorentz(LorentzCone),
    Siegel(SiegelCone),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeDocument {
    pub name: String,
    pub ambient_dim: usize,
    pub kind: ConeKind,
}

impl ConeDocument {
    pub fn polyhedral(&self) -> Option<&Cone> {
        match &self.kind {
            ConeKind::Polyhedral { cone, .. } => Some(cone),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ConeKind::Polyhedral { .. } => "polyhedral",
            ConeKind::Lorentz(_) => "lorentz",
            ConeKind::Siegel(_) => "siegel",
        }
    }

    /// The document in its canonical JSON form (generators for polyhedral cones).
    pub fn to_json(&self) -> Value {
        let vecs = |vs: &[QVector]| -> Value {
            Value::Array(vs.iter().map(|v| Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())).collect())
        };
        let mut m = Map::new();
        m.insert("name".into(), Value::String(self.name.clone()));
        m.insert("ambient_dim".into(), Value::from(self.ambient_dim));
        match &self.kind {
            ConeKind::Polyhedral { cone, given_as: Representation::Inequalities } => {
                m.insert("inequalities".into(), vecs(cone.inequalities()));
            }
            ConeKind::Polyhedral { cone, .. } => {
                m.insert("generators".into(), vecs(&generator_list(cone)));
            }
            ConeKind::Lorentz(l) => {
                m.insert("builtin".into(), serde_json::json!({ "lorentz": l.ambient_dim }));
            }
            ConeKind::Siegel(sc) => {
                let d = &sc.data;
                let k = match &d.k {
                    BaseCone::Polyhedral(c) => serde_json::json!({ "generators": vecs(&generator_list(c)) }),
                    BaseCone::Lorentz(l) => serde_json::json!({ "lorentz": l.ambient_dim }),
                };
                // every finite f64 is a dyadic rational, so the strings reparse to the same floats
                let exact = |x: f64| Value::String(Rational::from_float(x).map_or_else(|| "0".into(), |q| format_rational(&q)));
                let b: Vec<Value> = d
                    .b
                    .iter()
                    .map(|rows| Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(|&x| exact(x)).collect())).collect()))
                    .collect();
                m.insert("builtin".into(), serde_json::json!({ "siegel": { "u_dim": d.u_dim, "k": k, "b": b } }));
            }
        }
        Value::Object(m)
    }
}

/// Generators followed by both signs of each lineality vector.
fn generator_list(cone: &Cone) -> Vec<QVector> {
    let mut gens = cone.generators().to_vec();
    for l in cone.lineality() {
        gens.push(l.clone());
        gens.push(l.iter().map(|x| -x).collect());
    }
    gens
}

pub fn parse_cone_file(path: &Path) -> Result<ConeDocument, DocumentError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| DocumentError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_cone(&text)
}

pub fn parse_cone(text: &str) -> Result<ConeDocument, DocumentError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DocumentError::Json(e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    for key in obj.keys() {
        if !["name", "ambient_dim", "generators", "inequalities", "builtin"].contains(&key.as_str()) {
            return Err(schema(&format!("$.{key}"), "unknown field"));
        }
    }
    let name = match obj.get("name") {
        None => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(schema("$.name", "expected a string")),
    };
    let ambient_dim = match obj.get("ambient_dim") {
        None => None,
        Some(v) => {
            Some(v.as_u64().filter(|&n| n >= 1).ok_or_else(|| schema("$.ambient_dim", "expected a positive integer"))? as usize)
        }
    };
    let present: Vec<&str> = ["generators", "inequalities", "builtin"].into_iter().filter(|k| obj.contains_key(*k)).collect();
    match present.as_slice() {
        [] => Err(schema("$", "one of generators, inequalities or builtin is required")),
        [_, _, ..] => Err(schema("$", format!("fields {} are mutually exclusive", present.join(", ")))),
        ["builtin"] => {
            let kind = parse_builtin(&obj["builtin"], "$.builtin")?;
            let dim = match &kind {
                ConeKind::Lorentz(l) => l.ambient_dim,
                ConeKind::Siegel(s) => s.ambient_dim(),
                ConeKind::Polyhedral { cone, .. } => cone.ambient_dim(),
            };
            if let Some(n) = ambient_dim.filter(|&n| n != dim) {
                return Err(schema("$.ambient_dim", format!("is {n} but the builtin cone lives in dimension {dim}")));
            }
            let default_name = match &kind {
                ConeKind::Lorentz(l) => format!("lorentz{}", l.ambient_dim),
                _ => "siegel".to_string(),
            };
            Ok(ConeDocument { name: name.unwrap_or(default_name), ambient_dim: dim, kind })
        }
        [field] => {
            let n = ambient_dim.ok_or_else(|| schema("$.ambient_dim", "required with generators or inequalities"))?;
            let path = format!("$.{field}");
            let vectors = parse_vectors(&obj[*field], &path, Some(n))?;
            let cone = build_polyhedral(field, n, &vectors, &path)?;
            let given_as = if *field == "generators" { Representation::Generators } else { Representation::Inequalities };
            Ok(ConeDocument {
                name: name.unwrap_or_else(|| "cone".into()),
                ambient_dim: n,
                kind: ConeKind::Polyhedral { cone, given_as },
            })
        }
    }
}

fn build_polyhedral(field: &str, n: usize, vectors: &[QVector], path: &str) -> Result<Cone, DocumentError> {
    let built = if field == "generators" { Cone::from_generators(n, vectors) } else { Cone::from_inequalities(n, vectors) };
    built.map_err(|e| match e {
        crate::polycone::ConeError::ZeroVector { index } => schema(&format!("{path}[{index}]"), "zero vector"),
        other => schema(path, other.to_string()),
    })
}

fn parse_vectors(v: &Value, path: &str, dim: Option<usize>) -> Result<Vec<QVector>, DocumentError> {
    let rows = v.as_array().ok_or_else(|| schema(path, "expected a list of vectors"))?;
    if rows.is_empty() {
        return Err(schema(path, "must not be empty"));
    }
    let mut out = Vec::with_capacity(rows.len());
    let expected = dim.or_else(|| rows[0].as_array().map(Vec::len));
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let entries = row.as_array().ok_or_else(|| schema(&rp, "expected a list of rational strings"))?;
        if let Some(n) = expected.filter(|&n| n != entries.len()) {
            return Err(schema(&rp, format!("has length {}, expected {n}", entries.len())));
        }
        out.push(entries.iter().enumerate().map(|(j, x)| parse_entry(x, &format!("{rp}[{j}]"))).collect::<Result<QVector, _>>()?);
    }
    Ok(out)
}

fn parse_entry(x: &Value, path: &str) -> Result<crate::ratlin::Rational, DocumentError> {
    match x {
        Value::String(s) => parse_rational(s).map_err(|e| schema(path, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(crate::ratlin::int(n.as_i64().expect("checked"))),
        _ => Err(schema(path, "expected a rational string such as \"3/4\"")),
    }
}

fn single_key<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<(&'a str, &'a Value), DocumentError> {
    let obj = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
    if obj.len() != 1 {
        return Err(schema(path, format!("expected exactly one of {}", allowed.join(", "))));
    }
    let (k, inner) = obj.iter().next().expect("one entry");
    if !allowed.contains(&k.as_str()) {
        return Err(schema(&format!("{path}.{k}"), format!("unknown kind, expected one of {}", allowed.join(", "))));
    }
    Ok((k.as_str(), inner))
}

fn parse_lorentz(v: &Value, path: &str) -> Result<LorentzCone, DocumentError> {
    let n = v.as_u64().ok_or_else(|| schema(path, "expected an integer dimension"))? as usize;
    LorentzCone::new(n).map_err(|e| schema(path, e.to_string()))
}

fn parse_builtin(v: &Value, path: &str) -> Result<ConeKind, DocumentError> {
    let (kind, inner) = single_key(v, path, &["lorentz", "siegel"])?;
    let path = format!("{path}.{kind}");
    if kind == "lorentz" {
        return Ok(ConeKind::Lorentz(parse_lorentz(inner, &path)?));
    }
    let obj = inner.as_object().ok_or_else(|| schema(&path, "expected an object with u_dim, k and b"))?;
    let u_dim = obj
        .get("u_dim")
        .and_then(Value::as_u64)
        .filter(|&u| u >= 1)
        .ok_or_else(|| schema(&format!("{path}.u_dim"), "expected a positive integer"))? as usize;
    let k_path = format!("{path}.k");
    let (k_kind, k_inner) = single_key(
        obj.get("k").ok_or_else(|| schema(&k_path, "required"))?,
        &k_path,
        &["generators", "inequalities", "lorentz"],
    )?;
    let k_path = format!("{k_path}.{k_kind}");
    let k = if k_kind == "lorentz" {
        BaseCone::Lorentz(parse_lorentz(k_inner, &k_path)?)
    } else {
        let vectors = parse_vectors(k_inner, &k_path, None)?;
        BaseCone::Polyhedral(build_polyhedral(k_kind, vectors[0].len(), &vectors, &k_path)?)
    };
    let b_path = format!("{path}.b");
    let b_val = obj.get("b").and_then(Value::as_array).ok_or_else(|| schema(&b_path, "expected a list of matrices"))?;
    let mut b = Vec::with_capacity(b_val.len());
    for (i, m) in b_val.iter().enumerate() {
        let mp = format!("{b_path}[{i}]");
        let rows = parse_vectors(m, &mp, Some(u_dim))?;
        if rows.len() != u_dim {
            return Err(schema(&mp, format!("expected {u_dim} rows, got {}", rows.len())));
        }
        b.push(rows.iter().map(|r| r.iter().map(to_f64).collect()).collect());
    }
    let data = SiegelData::new(u_dim, k, b).map_err(|e| schema(&b_path, e.to_string()))?;
    Ok(ConeKind::Siegel(SiegelCone::new(data)))
}
