//! Legendrian classifications ("atlases") of knot types and the objects read
//! off them: mountain ranges, rotation numbers at a given tb level and the
//! transverse self-linking numbers.
//!
//! Only Legendrian simple knot types carry a mountain range here, so a range is
//! a plain set of `(tb, rot)` pairs: the union of the downward stabilization
//! cones of the non-destabilizable peaks.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use thiserror::Error;

/// How far below the maximal tb a range is cut when no floor is given.
pub const DEFAULT_FLOOR_DEPTH: u32 = 8;
/// Number of sl steps listed when no depth is given.
pub const DEFAULT_SL_DEPTH: u32 = 8;

/// A non-destabilizable Legendrian class, recorded by its classical invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Peak {
    pub tb: BigInt,
    pub rot: BigInt,
}

impl Peak {
    pub fn new(tb: impl Into<BigInt>, rot: impl Into<BigInt>) -> Self {
        Peak {
            tb: tb.into(),
            rot: rot.into(),
        }
    }

    /// `other` is reached from `self` by stabilizations.
    pub fn covers(&self, other: &Peak) -> bool {
        let drop = &self.tb - &other.tb;
        let shift = (&self.rot - &other.rot).abs();
        drop.is_positive() && shift <= drop && (drop - shift).is_even()
    }

    fn parity(&self) -> bool {
        (&self.tb + &self.rot).is_odd()
    }
}

impl fmt::Display for Peak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.tb, self.rot)
    }
}

/// Contact width: an integer, or unknown and then confined to `[tb̄, tb̄ + 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Width {
    Known(BigInt),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LowerWidth {
    Known(BigInt),
    Infinity,
    Unknown,
}

/// An atlas as read from a file or assembled by hand, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasDraft {
    pub name: String,
    pub peaks: Vec<Peak>,
    pub width: Width,
    pub lower_width: LowerWidth,
    pub legendrian_simple: bool,
    pub utp: bool,
}

impl AtlasDraft {
    /// A Legendrian simple, non-UTP draft with unknown widths.
    pub fn new(name: impl Into<String>, peaks: impl IntoIterator<Item = Peak>) -> Self {
        AtlasDraft {
            name: name.into(),
            peaks: peaks.into_iter().collect(),
            width: Width::Unknown,
            lower_width: LowerWidth::Unknown,
            legendrian_simple: true,
            utp: false,
        }
    }

    pub fn width(mut self, width: Width) -> Self {
        self.width = width;
        self
    }

    pub fn lower_width(mut self, lower_width: LowerWidth) -> Self {
        self.lower_width = lower_width;
        self
    }

    pub fn utp(mut self, utp: bool) -> Self {
        self.utp = utp;
        self
    }

    pub fn legendrian_simple(mut self, simple: bool) -> Self {
        self.legendrian_simple = simple;
        self
    }

    pub fn validate(self) -> Result<KnotAtlas, Violations> {
        validate_atlas(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("peak set is empty")]
    EmptyPeaks,
    #[error("peak {peak} listed twice")]
    DuplicatePeak { index: usize, peak: Peak },
    #[error("peak {peak} has tb + rot parity different from the first peak")]
    MixedParity { index: usize, peak: Peak },
    #[error("peak {peak} is a stabilization of peak {by}")]
    DominatedPeak { index: usize, peak: Peak, by: Peak },
    #[error("width {width} outside [{max_tb}, {max_tb} + 1]")]
    WidthOutOfRange { width: BigInt, max_tb: BigInt },
    #[error("UTP requires width = max tb = {max_tb}")]
    UtpWidthMismatch { max_tb: BigInt },
    #[error("UTP requires lower width = max tb = {max_tb}")]
    UtpLowerWidthMismatch { max_tb: BigInt },
}

impl Violation {
    /// Location of the offending field in the atlas file.
    pub fn field_path(&self) -> String {
        match self {
            Violation::EmptyPeaks => "peaks".into(),
            Violation::DuplicatePeak { index, .. }
            | Violation::MixedParity { index, .. }
            | Violation::DominatedPeak { index, .. } => format!("peaks[{index}]"),
            Violation::WidthOutOfRange { .. } | Violation::UtpWidthMismatch { .. } => {
                "width".into()
            }
            Violation::UtpLowerWidthMismatch { .. } => "lower_width".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct Violations(pub Vec<Violation>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {v}", v.field_path())?;
        }
        Ok(())
    }
}

/// A validated Legendrian classification of a knot type.
///
/// Peaks are kept sorted by decreasing tb, then increasing rot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotAtlas {
    name: String,
    peaks: Vec<Peak>,
    width: Width,
    lower_width: LowerWidth,
    legendrian_simple: bool,
    utp: bool,
}

/// Checks every atlas invariant and reports all violations at once.
pub fn validate_atlas(draft: AtlasDraft) -> Result<KnotAtlas, Violations> {
    let mut errs = Vec::new();
    let peaks = &draft.peaks;
    let Some(max_tb) = peaks.iter().map(|p| p.tb.clone()).max() else {
        return Err(Violations(vec![Violation::EmptyPeaks]));
    };

    let parity = peaks[0].parity();
    for (i, p) in peaks.iter().enumerate() {
        if peaks[..i].contains(p) {
            errs.push(Violation::DuplicatePeak {
                index: i,
                peak: p.clone(),
            });
            continue;
        }
        if p.parity() != parity {
            errs.push(Violation::MixedParity {
                index: i,
                peak: p.clone(),
            });
            continue;
        }
        if let Some(by) = peaks.iter().find(|q| q.covers(p)) {
            errs.push(Violation::DominatedPeak {
                index: i,
                peak: p.clone(),
                by: by.clone(),
            });
        }
    }

    if let Width::Known(w) = &draft.width {
        if w < &max_tb || w > &(&max_tb + 1) {
            errs.push(Violation::WidthOutOfRange {
                width: w.clone(),
                max_tb: max_tb.clone(),
            });
        }
    }
    if draft.utp {
        if draft.width != Width::Known(max_tb.clone()) {
            errs.push(Violation::UtpWidthMismatch {
                max_tb: max_tb.clone(),
            });
        }
        if draft.lower_width != LowerWidth::Known(max_tb.clone()) {
            errs.push(Violation::UtpLowerWidthMismatch {
                max_tb: max_tb.clone(),
            });
        }
    }

    if !errs.is_empty() {
        return Err(Violations(errs));
    }
    let mut peaks = draft.peaks;
    peaks.sort_by(|a, b| b.tb.cmp(&a.tb).then_with(|| a.rot.cmp(&b.rot)));
    Ok(KnotAtlas {
        name: draft.name,
        peaks,
        width: draft.width,
        lower_width: draft.lower_width,
        legendrian_simple: draft.legendrian_simple,
        utp: draft.utp,
    })
}

impl KnotAtlas {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn peaks(&self) -> &[Peak] {
        &self.peaks
    }

    pub fn width(&self) -> &Width {
        &self.width
    }

    pub fn lower_width(&self) -> &LowerWidth {
        &self.lower_width
    }

    pub fn is_legendrian_simple(&self) -> bool {
        self.legendrian_simple
    }

    pub fn is_utp(&self) -> bool {
        self.utp
    }

    pub fn max_tb(&self) -> &BigInt {
        &self.peaks[0].tb
    }

    /// Smallest and largest admissible contact width.
    pub fn width_bounds(&self) -> (BigInt, BigInt) {
        match &self.width {
            Width::Known(w) => (w.clone(), w.clone()),
            Width::Unknown => (self.max_tb().clone(), self.max_tb() + 1),
        }
    }

    /// Distinct tb values carrying peaks, highest first.
    pub fn peak_levels(&self) -> Vec<BigInt> {
        let mut levels: Vec<BigInt> = self.peaks.iter().map(|p| p.tb.clone()).collect();
        levels.dedup();
        levels
    }

    pub fn peaks_at(&self, tb: &BigInt) -> impl Iterator<Item = &Peak> + '_ {
        let tb = tb.clone();
        self.peaks.iter().filter(move |p| p.tb == tb)
    }

    /// The peak set is invariant under `rot ↦ −rot`.
    pub fn is_rot_symmetric(&self) -> bool {
        self.peaks
            .iter()
            .all(|p| self.peaks.contains(&Peak::new(p.tb.clone(), -&p.rot)))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn to_draft(&self) -> AtlasDraft {
        AtlasDraft {
            name: self.name.clone(),
            peaks: self.peaks.clone(),
            width: self.width.clone(),
            lower_width: self.lower_width.clone(),
            legendrian_simple: self.legendrian_simple,
            utp: self.utp,
        }
    }

    fn require_simple(&self) -> Result<(), AtlasError> {
        if self.legendrian_simple {
            Ok(())
        } else {
            Err(AtlasError::NotSimple(self.name.clone()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AtlasError {
    #[error("atlas {0:?} is not Legendrian simple")]
    NotSimple(String),
    #[error("floor {floor} lies above the maximal tb {max_tb}")]
    FloorAboveMax { floor: BigInt, max_tb: BigInt },
}

/// Realized `(tb, rot)` pairs with `tb >= floor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MountainRange {
    entries: BTreeSet<(BigInt, BigInt)>,
    floor: BigInt,
}

impl MountainRange {
    pub fn from_entries(entries: BTreeSet<(BigInt, BigInt)>, floor: BigInt) -> Self {
        MountainRange { entries, floor }
    }

    pub fn entries(&self) -> &BTreeSet<(BigInt, BigInt)> {
        &self.entries
    }

    pub fn floor(&self) -> &BigInt {
        &self.floor
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, tb: &BigInt, rot: &BigInt) -> bool {
        self.entries.contains(&(tb.clone(), rot.clone()))
    }

    pub fn max_tb(&self) -> Option<&BigInt> {
        self.entries.iter().map(|(t, _)| t).max()
    }

    /// Entries that are not a stabilization of another entry.
    pub fn peaks(&self) -> Vec<(BigInt, BigInt)> {
        self.entries
            .iter()
            .filter(|(t, r)| {
                let up = t + 1;
                !self.contains(&up, &(r - 1)) && !self.contains(&up, &(r + 1))
            })
            .cloned()
            .collect()
    }
}

// Rotation numbers at level `tb`: a union of step-2 runs, one per peak above.
fn level_rots(peaks: &[Peak], tb: &BigInt) -> Vec<BigInt> {
    let mut runs: Vec<(BigInt, BigInt)> = peaks
        .iter()
        .filter(|p| &p.tb >= tb)
        .map(|p| {
            let reach = &p.tb - tb;
            (&p.rot - &reach, &p.rot + &reach)
        })
        .collect();
    runs.sort();
    let mut merged: Vec<(BigInt, BigInt)> = Vec::new();
    for (lo, hi) in runs {
        match merged.last_mut() {
            Some(last) if lo <= &last.1 + 2 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    let mut out = Vec::new();
    for (lo, hi) in merged {
        let mut r = lo;
        while r <= hi {
            out.push(r.clone());
            r += 2;
        }
    }
    out
}

/// The union of stabilization cones of all peaks, cut at `floor`.
pub fn mountain_range(atlas: &KnotAtlas, floor: &BigInt) -> Result<MountainRange, AtlasError> {
    atlas.require_simple()?;
    if floor > atlas.max_tb() {
        return Err(AtlasError::FloorAboveMax {
            floor: floor.clone(),
            max_tb: atlas.max_tb().clone(),
        });
    }
    let mut entries = BTreeSet::new();
    let mut tb = atlas.max_tb().clone();
    while &tb >= floor {
        for r in level_rots(&atlas.peaks, &tb) {
            entries.insert((tb.clone(), r));
        }
        tb -= 1;
    }
    Ok(MountainRange {
        entries,
        floor: floor.clone(),
    })
}

pub fn default_floor(atlas: &KnotAtlas) -> BigInt {
    atlas.max_tb() - DEFAULT_FLOOR_DEPTH
}

pub fn rot_values_at(atlas: &KnotAtlas, tb: &BigInt) -> Result<BTreeSet<BigInt>, AtlasError> {
    atlas.require_simple()?;
    Ok(level_rots(&atlas.peaks, tb).into_iter().collect())
}

/// Self-linking numbers of the transverse push-offs, `sl = tb − rot`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransverseClassification {
    sl_max: BigInt,
    sl_values: Vec<BigInt>,
}

impl TransverseClassification {
    pub fn sl_max(&self) -> &BigInt {
        &self.sl_max
    }

    /// `sl_max, sl_max − 2, ...`, descending.
    pub fn sl_values(&self) -> &[BigInt] {
        &self.sl_values
    }
}

/// Negative stabilization keeps `tb − rot` fixed and positive stabilization
/// lowers it by two, so a Legendrian simple type has one transverse class per
/// value `max(tb − rot) − 2k`.
pub fn transverse_classes(
    atlas: &KnotAtlas,
    depth: u32,
) -> Result<TransverseClassification, AtlasError> {
    atlas.require_simple()?;
    let sl_max = atlas
        .peaks
        .iter()
        .map(|p| &p.tb - &p.rot)
        .max()
        .expect("validated atlas has peaks");
    let two = BigInt::one() + 1;
    let sl_values = (0..=depth).map(|k| &sl_max - &two * k).collect();
    Ok(TransverseClassification { sl_max, sl_values })
}
