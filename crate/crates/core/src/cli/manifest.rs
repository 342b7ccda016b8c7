//! JSON manifests: one object or an array of objects, each naming a family
//! and its parameters.

use serde_json::{json, Map, Value};

use crate::catalog::{Family, PolarizedPair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestError {
    /// Position in the manifest array, `None` for a single-object manifest.
    pub entry: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ManifestError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.entry {
            Some(i) => write!(f, "manifest entry {i}: {}", self.message),
            None => write!(f, "manifest: {}", self.message),
        }
    }
}

impl std::error::Error for ManifestError {}

const FAMILIES: &str = "projective_space, hypersurface, complete_intersection, scroll, product";

pub fn parse_manifest(text: &str) -> Result<Vec<PolarizedPair>, ManifestError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ManifestError {
        entry: None,
        message: format!("invalid JSON: {e}"),
    })?;
    match value {
        Value::Array(items) => {
            if items.is_empty() {
                return Err(ManifestError {
                    entry: None,
                    message: "manifest array is empty".into(),
                });
            }
            items
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    parse_entry(v).map_err(|message| ManifestError {
                        entry: Some(i),
                        message,
                    })
                })
                .collect()
        }
        v => parse_entry(&v)
            .map(|p| vec![p])
            .map_err(|message| ManifestError {
                entry: None,
                message,
            }),
    }
}

fn parse_entry(v: &Value) -> Result<PolarizedPair, String> {
    let obj = v.as_object().ok_or("each entry must be a JSON object")?;
    let family = match obj.get("family") {
        Some(Value::String(s)) => s.as_str(),
        Some(_) => return Err("family must be a string".into()),
        None => return Err(format!("family is required (one of {FAMILIES})")),
    };
    let allowed: &[&str] = match family {
        "projective_space" => &["n", "twist"],
        "hypersurface" => &["n", "degree"],
        "complete_intersection" => &["n", "degrees"],
        "scroll" => &["a"],
        "product" => &["factors", "multidegree"],
        other => return Err(format!("family `{other}` is not one of {FAMILIES}")),
    };
    for key in obj.keys() {
        if key != "family" && !allowed.contains(&key.as_str()) {
            return Err(format!(
                "{key} is not a parameter of {family} (expected {})",
                allowed.join(", ")
            ));
        }
    }
    let fam = match family {
        "projective_space" => Family::ProjectiveSpace {
            n: required_uint(obj, "n", family)?,
            twist: optional_uint(obj, "twist")?.unwrap_or(1),
        },
        "hypersurface" => Family::Hypersurface {
            n: required_uint(obj, "n", family)?,
            degree: required_uint(obj, "degree", family)?,
        },
        "complete_intersection" => Family::CompleteIntersection {
            n: required_uint(obj, "n", family)?,
            degrees: required_list(obj, "degrees", family)?,
        },
        "scroll" => Family::Scroll {
            a: required_list(obj, "a", family)?,
        },
        _ => Family::Product {
            factors: required_list(obj, "factors", family)?,
            multidegree: required_list(obj, "multidegree", family)?,
        },
    };
    PolarizedPair::new(fam).map_err(|e| e.to_string())
}

fn as_uint(v: &Value, field: &str) -> Result<u32, String> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| format!("{field} must be a non-negative integer below 2^32, got {v}"))
}

fn optional_uint(obj: &Map<String, Value>, field: &str) -> Result<Option<u32>, String> {
    obj.get(field).map(|v| as_uint(v, field)).transpose()
}

fn required_uint(obj: &Map<String, Value>, field: &str, family: &str) -> Result<u32, String> {
    optional_uint(obj, field)?.ok_or_else(|| format!("{field} is required for {family}"))
}

fn required_list(obj: &Map<String, Value>, field: &str, family: &str) -> Result<Vec<u32>, String> {
    let v = obj
        .get(field)
        .ok_or_else(|| format!("{field} is required for {family}"))?;
    let items = v
        .as_array()
        .ok_or_else(|| format!("{field} must be an array of integers"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| as_uint(x, &format!("{field}[{i}]")))
        .collect()
}

/// Manifest object for one pair; parsing it gives the pair back.
pub fn entry_json(pair: &PolarizedPair) -> Value {
    match pair.family() {
        Family::ProjectiveSpace { n, twist } => {
            json!({"family": "projective_space", "n": n, "twist": twist})
        }
        Family::Hypersurface { n, degree } => {
            json!({"family": "hypersurface", "n": n, "degree": degree})
        }
        Family::CompleteIntersection { n, degrees } => {
            json!({"family": "complete_intersection", "n": n, "degrees": degrees})
        }
        Family::Scroll { a } => json!({"family": "scroll", "a": a}),
        Family::Product {
            factors,
            multidegree,
        } => {
            json!({"family": "product", "factors": factors, "multidegree": multidegree})
        }
    }
}

/// Canonical manifest text: always an array, fields in a fixed order.
pub fn serialize_manifest(pairs: &[PolarizedPair]) -> String {
    let v = Value::Array(pairs.iter().map(entry_json).collect());
    serde_json::to_string_pretty(&v).expect("manifest values serialize")
}
