//! Atlases shipped with the library.

use num_bigint::BigInt;
use thiserror::Error;

use crate::atlas::{AtlasDraft, KnotAtlas, LowerWidth, Peak, Width};

pub const BUILTIN_NAMES: &[&str] = &["unknot"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuiltinError {
    #[error("no built-in atlas {name:?}; available: {available}{hint}")]
    Unknown {
        name: String,
        available: String,
        hint: String,
    },
}

/// The unknot: a single class at `tb = −1`, `ω = 0`, `ℓw = ∞`.
pub fn unknot() -> KnotAtlas {
    AtlasDraft::new("unknot", [Peak::new(-1, 0)])
        .width(Width::Known(BigInt::from(0)))
        .lower_width(LowerWidth::Infinity)
        .validate()
        .expect("unknot atlas is valid")
}

pub fn builtin_atlas(name: &str) -> Result<KnotAtlas, BuiltinError> {
    match name {
        "unknot" => Ok(unknot()),
        _ => Err(BuiltinError::Unknown {
            name: name.to_string(),
            available: BUILTIN_NAMES.join(", "),
            hint: torus_hint(name).unwrap_or_default(),
        }),
    }
}

// "torus-2-3" -> classify --builtin unknot --cable 2/3
fn torus_hint(name: &str) -> Option<String> {
    let rest = name.strip_prefix("torus-")?;
    let (p, q) = rest.rsplit_once('-')?;
    let p = p
        .strip_prefix('m')
        .map_or_else(|| p.to_string(), |n| format!("-{n}"));
    p.parse::<i64>().ok()?;
    q.parse::<i64>().ok()?;
    Some(format!(
        " (torus knots are derived by cabling: try `classify --builtin unknot --cable {p}/{q}`)"
    ))
}
