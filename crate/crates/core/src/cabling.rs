//! Classification of `(p, q)`-cables of a Legendrian simple knot type.
//!
//! Two regimes are covered. When `p/q` exceeds the contact width, every
//! non-destabilizable class `K` of the companion yields one of the cable, a
//! ruling curve of slope `q/p` on the standard neighbourhood of `K`, with
//!
//! ```text
//! tb = pq − (1/tb(K) • q/p) = pq − |p − q·tb(K)|,   rot = q·rot(K).
//! ```
//!
//! When `p/q` lies below the lower width, the maximal representatives are
//! Legendrian divides with `tb = pq` and `rot = ±(p + q(n + rot(K)))` where
//! `tb(K) = −n` and `−n − 1 < p/q < −n`. Everything else is left unclassified.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::atlas::{
    rot_values_at, AtlasDraft, AtlasError, KnotAtlas, LowerWidth, Peak, Violations, Width,
};
use crate::slope::{intersection_number, CableSpec, Slope};

/// Why a cable falls outside both classification regimes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReasonCode {
    /// Both widths are known integers and `ℓw <= p/q <= ω`.
    SlopeInGap,
    /// The lower width is not known to be an integer.
    WidthNotInteger,
    /// `tb̄ < p/q <= tb̄ + 1` with the width only known to lie in `[tb̄, tb̄ + 1]`.
    WidthUnknown,
    /// `p/q < ℓw` but the companion has no class at `tb = −n`.
    LevelMissing,
}

impl ReasonCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReasonCode::SlopeInGap => "slope_in_gap",
            ReasonCode::WidthNotInteger => "width_not_integer",
            ReasonCode::WidthUnknown => "width_unknown",
            ReasonCode::LevelMissing => "level_missing",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            ReasonCode::SlopeInGap,
            ReasonCode::WidthNotInteger,
            ReasonCode::WidthUnknown,
            ReasonCode::LevelMissing,
        ]
        .into_iter()
        .find(|r| r.as_str() == s)
    }
}

impl fmt::Display for ReasonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    SufficientlyPositive,
    SufficientlyNegative,
    Uncovered(ReasonCode),
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::SufficientlyPositive => "sufficiently_positive",
            Regime::SufficientlyNegative => "sufficiently_negative",
            Regime::Uncovered(_) => "uncovered",
        }
    }

    pub fn is_covered(&self) -> bool {
        !matches!(self, Regime::Uncovered(_))
    }

    pub fn reason(&self) -> Option<ReasonCode> {
        match self {
            Regime::Uncovered(r) => Some(*r),
            _ => None,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Uncovered(r) => write!(f, "uncovered ({r})"),
            other => f.write_str(other.as_str()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CableResult {
    pub spec: CableSpec,
    pub regime: Regime,
    /// The cable's classification; present iff the regime is covered.
    pub atlas: Option<KnotAtlas>,
    /// The level `n` with `−n − 1 < p/q < −n`; present iff sufficiently negative.
    pub level_n: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CablingError {
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error("cable {spec} is in regime {actual}, not {expected}")]
    RegimeMismatch {
        spec: CableSpec,
        expected: &'static str,
        actual: Regime,
    },
    #[error("cable {0} satisfies both the positive and the negative hypotheses")]
    RegimeOverlap(CableSpec),
    #[error("no companion class at tb = {tb}")]
    EmptyLevel { tb: BigInt },
    #[error("classification of cable {spec} is not a valid atlas:\n{violations}")]
    InvalidOutput {
        spec: CableSpec,
        violations: Violations,
    },
    #[error("atlas {0:?} is not flagged UTP")]
    NotUtp(String),
}

/// The integer `n` with `−n − 1 < p/q < −n`.
pub fn level_for(spec: &CableSpec) -> BigInt {
    (-spec.p()).div_floor(spec.q())
}

/// Decides which regime, if any, classifies the cable.
///
/// Strict inequalities throughout. With an unknown width the positive regime
/// is entered only when `p/q > tb̄ + 1`, so the decision holds for either
/// possible width.
pub fn cable_regime(atlas: &KnotAtlas, spec: &CableSpec) -> Result<Regime, CablingError> {
    let (_, width_hi) = atlas.width_bounds();
    let positive = spec.ratio_exceeds(&width_hi);

    let below_lower = match atlas.lower_width() {
        LowerWidth::Known(l) => Some(spec.ratio_below(l)),
        LowerWidth::Infinity => Some(true),
        LowerWidth::Unknown => None,
    };
    let level_present = if below_lower == Some(true) {
        !rot_values_at(atlas, &-level_for(spec))?.is_empty()
    } else {
        false
    };
    let negative = below_lower == Some(true) && level_present;

    match (positive, negative) {
        (true, true) => Err(CablingError::RegimeOverlap(spec.clone())),
        (true, false) => Ok(Regime::SufficientlyPositive),
        (false, true) => Ok(Regime::SufficientlyNegative),
        (false, false) => {
            let reason = if *atlas.width() == Width::Unknown && spec.ratio_exceeds(atlas.max_tb()) {
                ReasonCode::WidthUnknown
            } else if below_lower.is_none() {
                ReasonCode::WidthNotInteger
            } else if below_lower == Some(true) {
                ReasonCode::LevelMissing
            } else {
                ReasonCode::SlopeInGap
            };
            Ok(Regime::Uncovered(reason))
        }
    }
}

fn cable_name(atlas: &KnotAtlas, spec: &CableSpec) -> String {
    format!("{}_({},{})", atlas.name(), spec.p(), spec.q())
}

fn require_regime(
    atlas: &KnotAtlas,
    spec: &CableSpec,
    expected: Regime,
) -> Result<(), CablingError> {
    if !atlas.is_legendrian_simple() {
        return Err(AtlasError::NotSimple(atlas.name().to_string()).into());
    }
    let actual = cable_regime(atlas, spec)?;
    if actual != expected {
        return Err(CablingError::RegimeMismatch {
            spec: spec.clone(),
            expected: expected.as_str(),
            actual,
        });
    }
    Ok(())
}

fn finish(draft: AtlasDraft, spec: &CableSpec) -> Result<KnotAtlas, CablingError> {
    draft
        .validate()
        .map_err(|violations| CablingError::InvalidOutput {
            spec: spec.clone(),
            violations,
        })
}

/// `tb` of the `(p, q)` ruling curve on a standard neighbourhood of a class
/// with Thurston–Bennequin number `tb`.
pub fn ruling_curve_tb(tb: &BigInt, spec: &CableSpec) -> BigInt {
    // tb = 0 gives dividing slope ∞, which is still a valid curve here
    let dividing = Slope::new(1, tb.clone()).expect("numerator is 1");
    spec.pq() - intersection_number(&dividing, &spec.cable_slope())
}

/// Classification of a sufficiently positive cable.
pub fn positive_cable(atlas: &KnotAtlas, spec: &CableSpec) -> Result<CableResult, CablingError> {
    require_regime(atlas, spec, Regime::SufficientlyPositive)?;
    let peaks = atlas
        .peaks()
        .iter()
        .map(|k| Peak::new(ruling_curve_tb(&k.tb, spec), spec.q() * &k.rot));
    let draft = AtlasDraft::new(cable_name(atlas, spec), peaks);
    let out = finish(draft, spec)?;
    Ok(CableResult {
        spec: spec.clone(),
        regime: Regime::SufficientlyPositive,
        atlas: Some(out),
        level_n: None,
    })
}

/// Classification of a sufficiently negative cable.
pub fn negative_cable(atlas: &KnotAtlas, spec: &CableSpec) -> Result<CableResult, CablingError> {
    require_regime(atlas, spec, Regime::SufficientlyNegative)?;
    let n = level_for(spec);
    let rots = rot_values_at(atlas, &-&n)?;
    if rots.is_empty() {
        return Err(CablingError::EmptyLevel { tb: -n });
    }
    let pq = spec.pq();
    let mut out_rots = BTreeSet::new();
    for r in &rots {
        let v = spec.p() + spec.q() * (&n + r);
        out_rots.insert(-&v);
        out_rots.insert(v);
    }
    let draft = AtlasDraft::new(
        cable_name(atlas, spec),
        out_rots.into_iter().map(|r| Peak::new(pq.clone(), r)),
    )
    .width(Width::Known(pq.clone()));
    let out = finish(draft, spec)?;
    Ok(CableResult {
        spec: spec.clone(),
        regime: Regime::SufficientlyNegative,
        atlas: Some(out),
        level_n: Some(n),
    })
}

/// Rotation number of a cable built from a meridian disk `D` and a Seifert
/// surface of the companion: `p·rot(∂D) + q·rot(∂Σ)`.
pub fn cable_rotation(spec: &CableSpec, rot_disk: &BigInt, rot_seifert: &BigInt) -> BigInt {
    spec.p() * rot_disk + spec.q() * rot_seifert
}

pub fn classify_cable(atlas: &KnotAtlas, spec: &CableSpec) -> Result<CableResult, CablingError> {
    if !atlas.is_legendrian_simple() {
        return Err(AtlasError::NotSimple(atlas.name().to_string()).into());
    }
    match cable_regime(atlas, spec)? {
        Regime::SufficientlyPositive => positive_cable(atlas, spec),
        Regime::SufficientlyNegative => negative_cable(atlas, spec),
        regime @ Regime::Uncovered(_) => Ok(CableResult {
            spec: spec.clone(),
            regime,
            atlas: None,
            level_n: None,
        }),
    }
}

/// Cables repeatedly, each step taking the previous cable as companion.
/// Stops after the first uncovered step, which is included in the output.
pub fn iterate_cables(
    atlas: &KnotAtlas,
    specs: &[CableSpec],
) -> Result<Vec<CableResult>, CablingError> {
    let mut out = Vec::with_capacity(specs.len());
    let mut current = atlas.clone();
    for spec in specs {
        let result = classify_cable(&current, spec)?;
        let next = result.atlas.clone();
        out.push(result);
        match next {
            Some(a) => current = a,
            None => break,
        }
    }
    Ok(out)
}

/// Range of cables swept by [`utp_consistency_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtpGrid {
    pub p_max: i64,
    pub q_min: i64,
    pub q_max: i64,
}

impl Default for UtpGrid {
    fn default() -> Self {
        UtpGrid {
            p_max: 10,
            q_min: 2,
            q_max: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtpReport {
    pub checked: usize,
    pub positive: usize,
    pub negative: usize,
    pub uncovered: Vec<(CableSpec, ReasonCode)>,
}

impl UtpReport {
    pub fn full_coverage(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// For a uniformly thick companion, `ω = tb̄ = ℓw` is an integer and `p/q`
/// never is, so every cable must land in one of the two regimes.
pub fn utp_consistency_check(atlas: &KnotAtlas, grid: &UtpGrid) -> Result<UtpReport, CablingError> {
    if !atlas.is_utp() {
        return Err(CablingError::NotUtp(atlas.name().to_string()));
    }
    let mut report = UtpReport {
        checked: 0,
        positive: 0,
        negative: 0,
        uncovered: Vec::new(),
    };
    for q in grid.q_min.max(2)..=grid.q_max {
        for p in -grid.p_max..=grid.p_max {
            let Ok(spec) = CableSpec::new(p, q) else {
                continue;
            };
            report.checked += 1;
            match cable_regime(atlas, &spec)? {
                Regime::SufficientlyPositive => report.positive += 1,
                Regime::SufficientlyNegative => report.negative += 1,
                Regime::Uncovered(reason) => report.uncovered.push((spec, reason)),
            }
        }
    }
    Ok(report)
}
