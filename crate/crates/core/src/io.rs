//! JSON persistence for atlases and cable results.
//!
//! Atlas files look like
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "name": "unknot",
//!   "peaks": [{ "tb": -1, "rot": 0 }],
//!   "width": 0,
//!   "lower_width": "infinity",
//!   "legendrian_simple": true,
//!   "utp": false
//! }
//! ```
//!
//! `width` is an integer or `"unknown"`; `lower_width` is an integer,
//! `"infinity"` or `"unknown"`. Integers are unbounded. A cable result adds
//! `cable`, `regime`, `reason` and `level_n`, and carries the atlas fields only
//! when the cable was classified.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{Map, Number, Value};
use thiserror::Error;

use crate::atlas::{AtlasDraft, KnotAtlas, LowerWidth, Peak, Violations, Width};
use crate::cabling::{CableResult, ReasonCode, Regime};
use crate::slope::CableSpec;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("input is not UTF-8")]
    NotUtf8,
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("unsupported schema_version {0:?}, expected \"1\"")]
    SchemaVersion(String),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("invalid atlas:\n{0}")]
    Validation(Violations),
}

fn field_err(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Field {
        path: path.into(),
        message: message.into(),
    }
}

fn int_value(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integer literal"))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, FormatError> {
    obj.get(key).ok_or_else(|| field_err(key, "missing field"))
}

fn as_int(v: &Value, path: &str) -> Result<BigInt, FormatError> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| field_err(path, format!("{n} is not an integer"))),
        _ => Err(field_err(path, "expected an integer")),
    }
}

fn as_bool(v: &Value, path: &str) -> Result<bool, FormatError> {
    v.as_bool()
        .ok_or_else(|| field_err(path, "expected a boolean"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, FormatError> {
    v.as_str()
        .ok_or_else(|| field_err(path, "expected a string"))
}

fn parse_object(bytes: &[u8]) -> Result<Map<String, Value>, FormatError> {
    let text = std::str::from_utf8(bytes).map_err(|_| FormatError::NotUtf8)?;
    let value: Value =
        serde_json::from_str(text).map_err(|e| FormatError::Syntax(e.to_string()))?;
    let Value::Object(obj) = value else {
        return Err(FormatError::Syntax("top level must be an object".into()));
    };
    let version = as_str(get(&obj, "schema_version")?, "schema_version")?;
    if version != SCHEMA_VERSION {
        return Err(FormatError::SchemaVersion(version.to_string()));
    }
    Ok(obj)
}

fn draft_from_object(obj: &Map<String, Value>) -> Result<AtlasDraft, FormatError> {
    let name = as_str(get(obj, "name")?, "name")?.to_string();
    let Value::Array(raw_peaks) = get(obj, "peaks")? else {
        return Err(field_err("peaks", "expected an array"));
    };
    let mut peaks = Vec::with_capacity(raw_peaks.len());
    for (i, p) in raw_peaks.iter().enumerate() {
        let path = format!("peaks[{i}]");
        let Value::Object(p) = p else {
            return Err(field_err(path, "expected an object with tb and rot"));
        };
        let tb = as_int(
            get(p, "tb").map_err(|_| field_err(format!("{path}.tb"), "missing field"))?,
            &format!("{path}.tb"),
        )?;
        let rot = as_int(
            get(p, "rot").map_err(|_| field_err(format!("{path}.rot"), "missing field"))?,
            &format!("{path}.rot"),
        )?;
        peaks.push(Peak { tb, rot });
    }
    let width = match get(obj, "width")? {
        Value::String(s) if s == "unknown" => Width::Unknown,
        v @ Value::Number(_) => Width::Known(as_int(v, "width")?),
        _ => return Err(field_err("width", "expected an integer or \"unknown\"")),
    };
    let lower_width = match get(obj, "lower_width")? {
        Value::String(s) if s == "unknown" => LowerWidth::Unknown,
        Value::String(s) if s == "infinity" => LowerWidth::Infinity,
        v @ Value::Number(_) => LowerWidth::Known(as_int(v, "lower_width")?),
        _ => {
            return Err(field_err(
                "lower_width",
                "expected an integer, \"infinity\" or \"unknown\"",
            ))
        }
    };
    Ok(AtlasDraft {
        name,
        peaks,
        width,
        lower_width,
        legendrian_simple: as_bool(get(obj, "legendrian_simple")?, "legendrian_simple")?,
        utp: as_bool(get(obj, "utp")?, "utp")?,
    })
}

/// Parses and validates an atlas file.
pub fn parse_atlas_file(bytes: &[u8]) -> Result<KnotAtlas, FormatError> {
    let obj = parse_object(bytes)?;
    draft_from_object(&obj)?
        .validate()
        .map_err(FormatError::Validation)
}

fn atlas_fields(atlas: &KnotAtlas, obj: &mut Map<String, Value>) {
    obj.insert("name".into(), Value::String(atlas.name().to_string()));
    let peaks = atlas
        .peaks()
        .iter()
        .map(|p| {
            let mut m = Map::new();
            m.insert("tb".into(), int_value(&p.tb));
            m.insert("rot".into(), int_value(&p.rot));
            Value::Object(m)
        })
        .collect();
    obj.insert("peaks".into(), Value::Array(peaks));
    obj.insert(
        "width".into(),
        match atlas.width() {
            Width::Known(w) => int_value(w),
            Width::Unknown => Value::String("unknown".into()),
        },
    );
    obj.insert(
        "lower_width".into(),
        match atlas.lower_width() {
            LowerWidth::Known(w) => int_value(w),
            LowerWidth::Infinity => Value::String("infinity".into()),
            LowerWidth::Unknown => Value::String("unknown".into()),
        },
    );
    obj.insert(
        "legendrian_simple".into(),
        Value::Bool(atlas.is_legendrian_simple()),
    );
    obj.insert("utp".into(), Value::Bool(atlas.is_utp()));
}

pub fn atlas_to_value(atlas: &KnotAtlas) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "schema_version".into(),
        Value::String(SCHEMA_VERSION.into()),
    );
    atlas_fields(atlas, &mut obj);
    Value::Object(obj)
}

fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn serialize_atlas(atlas: &KnotAtlas) -> String {
    to_text(&atlas_to_value(atlas))
}

pub fn cable_result_to_value(result: &CableResult) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "schema_version".into(),
        Value::String(SCHEMA_VERSION.into()),
    );
    obj.insert("cable".into(), Value::String(result.spec.to_string()));
    obj.insert(
        "regime".into(),
        Value::String(result.regime.as_str().into()),
    );
    obj.insert(
        "reason".into(),
        match result.regime.reason() {
            Some(r) => Value::String(r.as_str().into()),
            None => Value::Null,
        },
    );
    obj.insert(
        "level_n".into(),
        result.level_n.as_ref().map_or(Value::Null, int_value),
    );
    if let Some(atlas) = &result.atlas {
        atlas_fields(atlas, &mut obj);
    }
    Value::Object(obj)
}

pub fn serialize_cable_result(result: &CableResult) -> String {
    to_text(&cable_result_to_value(result))
}

pub fn serialize_cable_results(results: &[CableResult]) -> String {
    to_text(&Value::Array(
        results.iter().map(cable_result_to_value).collect(),
    ))
}

pub fn parse_cable_result(bytes: &[u8]) -> Result<CableResult, FormatError> {
    let obj = parse_object(bytes)?;
    let spec: CableSpec = as_str(get(&obj, "cable")?, "cable")?
        .parse()
        .map_err(|e| field_err("cable", format!("{e}")))?;
    let regime = match as_str(get(&obj, "regime")?, "regime")? {
        "sufficiently_positive" => Regime::SufficientlyPositive,
        "sufficiently_negative" => Regime::SufficientlyNegative,
        "uncovered" => {
            let code = as_str(get(&obj, "reason")?, "reason")?;
            Regime::Uncovered(
                ReasonCode::parse(code)
                    .ok_or_else(|| field_err("reason", format!("unknown reason code {code:?}")))?,
            )
        }
        other => return Err(field_err("regime", format!("unknown regime {other:?}"))),
    };
    let level_n = match obj.get("level_n") {
        None | Some(Value::Null) => None,
        Some(v) => Some(as_int(v, "level_n")?),
    };
    let atlas = if regime.is_covered() {
        Some(
            draft_from_object(&obj)?
                .validate()
                .map_err(FormatError::Validation)?,
        )
    } else {
        None
    };
    Ok(CableResult {
        spec,
        regime,
        atlas,
        level_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin_atlas;
    use crate::cabling::classify_cable;

    #[test]
    fn unknot_round_trip() {
        let u = builtin_atlas("unknot").unwrap();
        let text = serialize_atlas(&u);
        assert_eq!(parse_atlas_file(text.as_bytes()).unwrap(), u);
        assert!(text.starts_with("{\n  \"schema_version\": \"1\""));
    }

    #[test]
    fn unknown_width_parses() {
        let text = r#"{"schema_version": "1", "name": "t", "peaks": [{"tb": 1, "rot": 0}],
            "width": "unknown", "lower_width": "unknown", "legendrian_simple": true, "utp": false}"#;
        let a = parse_atlas_file(text.as_bytes()).unwrap();
        assert_eq!(a.width(), &Width::Unknown);
        assert_eq!(a.width_bounds(), (BigInt::from(1), BigInt::from(2)));
    }

    #[test]
    fn rejects_bad_files() {
        let base = |peaks: &str, version: &str| {
            format!(
                r#"{{"schema_version": "{version}", "name": "t", "peaks": {peaks},
                "width": "unknown", "lower_width": "unknown", "legendrian_simple": true, "utp": false}}"#
            )
        };
        assert!(matches!(
            parse_atlas_file(base("[]", "1").as_bytes()),
            Err(FormatError::Validation(_))
        ));
        assert!(matches!(
            parse_atlas_file(base("[]", "2").as_bytes()),
            Err(FormatError::SchemaVersion(_))
        ));
        let err = parse_atlas_file(base(r#"[{"tb": 1.5, "rot": 0}]"#, "1").as_bytes()).unwrap_err();
        assert_eq!(
            err,
            FormatError::Field {
                path: "peaks[0].tb".into(),
                message: "1.5 is not an integer".into()
            }
        );
        assert!(matches!(
            parse_atlas_file(b"{"),
            Err(FormatError::Syntax(_))
        ));
        assert!(matches!(
            parse_atlas_file(&[0xff, 0xfe]),
            Err(FormatError::NotUtf8)
        ));
    }

    #[test]
    fn huge_integers_are_exact() {
        let text = r#"{"schema_version": "1", "name": "big",
            "peaks": [{"tb": 123456789012345678901234567891, "rot": 0}],
            "width": 123456789012345678901234567891, "lower_width": "unknown",
            "legendrian_simple": true, "utp": false}"#;
        let a = parse_atlas_file(text.as_bytes()).unwrap();
        assert_eq!(a.max_tb().to_string(), "123456789012345678901234567891");
        assert_eq!(parse_atlas_file(serialize_atlas(&a).as_bytes()).unwrap(), a);
    }

    #[test]
    fn cable_results_round_trip() {
        let u = builtin_atlas("unknot").unwrap();
        for cable in ["2/3", "-3/2", "-1/2"] {
            let r = classify_cable(&u, &cable.parse().unwrap()).unwrap();
            let text = serialize_cable_result(&r);
            assert_eq!(parse_cable_result(text.as_bytes()).unwrap(), r, "{text}");
        }
    }
}
