//! Self-check harness: every closed form against an independent brute force.
//!
//! Suites run on their own threads and are reported in a fixed order.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::thread;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::atlas::{
    mountain_range, transverse_classes, AtlasDraft, KnotAtlas, LowerWidth, Peak, Width,
};
use crate::builtin::unknot;
use crate::cabling::{negative_cable, positive_cable, utp_consistency_check, UtpGrid};
use crate::farey::{bypass_slope, bypass_slope_oracle, AttachmentSide, FareyError};
use crate::slope::{CableSpec, Slope};

pub const SUITE_NAMES: [&str; 4] = [
    "farey-oracle",
    "mountain-range-bfs",
    "torus-knot-grid",
    "utp-coverage",
];

const MAX_REPORTED: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Entry bound for the Farey sweep.
    pub farey_bound: i64,
    /// Fixed oracle search bound; `None` picks one large enough per case.
    pub oracle_bound: Option<u64>,
    pub seed: u64,
    pub random_atlases: usize,
    /// Depth of the random mountain ranges below their top.
    pub range_depth: i64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            farey_bound: 12,
            oracle_bound: None,
            seed: 0x5eed,
            random_atlases: 50,
            range_depth: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// The first few failures, for display.
    pub examples: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            cases: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(describe());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failures += 1;
        if self.examples.len() < MAX_REPORTED {
            self.examples.push(msg);
        }
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.cases += other.cases;
        self.failures += other.failures;
        for e in other.examples {
            if self.examples.len() < MAX_REPORTED {
                self.examples.push(e);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<20} {} cases, {} failures",
            self.name, self.cases, self.failures
        )?;
        for e in &self.examples {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        let failed = self.suites.iter().filter(|s| !s.passed()).count();
        write!(
            f,
            "{} of {} suites passed",
            self.suites.len() - failed,
            self.suites.len()
        )
    }
}

pub fn run_verify(config: &VerifyConfig) -> VerifyReport {
    let suites = thread::scope(|scope| {
        let handles = [
            scope.spawn(|| farey_oracle_suite(config)),
            scope.spawn(|| mountain_range_suite(config)),
            scope.spawn(torus_grid_suite),
            scope.spawn(utp_coverage_suite),
        ];
        handles
            .into_iter()
            .zip(SUITE_NAMES)
            .map(|(h, name)| {
                h.join().unwrap_or_else(|_| {
                    let mut r = SuiteReport::new(name);
                    r.fail("suite panicked".into());
                    r
                })
            })
            .collect()
    });
    VerifyReport { suites }
}

/// All slopes with `|numerator|, denominator <= bound`, plus infinity.
pub fn bounded_slopes(bound: i64) -> Vec<Slope> {
    let mut out = vec![Slope::infinity()];
    for d in 1..=bound {
        for n in -bound..=bound {
            if n.gcd(&d) == 1 {
                out.push(Slope::new(n, d).expect("nonzero denominator"));
            }
        }
    }
    out
}

/// Large enough that the oracle sees the answer: the result is a Farey
/// neighbour of `s` between `r` and `s`, never larger than their entry sums.
pub fn oracle_bound_for(s: &Slope, r: &Slope) -> u64 {
    let size = |x: &Slope| -> (u64, u64) {
        let n: i64 = x.numerator().try_into().unwrap_or(i64::MAX);
        let d: i64 = x.denominator().try_into().unwrap_or(i64::MAX);
        (n.unsigned_abs(), d.unsigned_abs())
    };
    let ((ns, ds), (nr, dr)) = (size(s), size(r));
    (ns + nr).max(ds + dr).max(1)
}

pub fn farey_oracle_suite(config: &VerifyConfig) -> SuiteReport {
    let slopes = bounded_slopes(config.farey_bound);
    let workers = thread::available_parallelism()
        .map_or(4, |n| n.get())
        .min(16);
    let chunk = slopes.len().div_ceil(workers);
    let parts: Vec<SuiteReport> = thread::scope(|scope| {
        let handles: Vec<_> = slopes
            .chunks(chunk)
            .map(|sources| {
                let slopes = &slopes;
                scope.spawn(move || {
                    let mut rep = SuiteReport::new(SUITE_NAMES[0]);
                    for s in sources {
                        for r in slopes {
                            if s == r {
                                continue;
                            }
                            let bound = config
                                .oracle_bound
                                .unwrap_or_else(|| oracle_bound_for(s, r));
                            for side in [AttachmentSide::Front, AttachmentSide::Back] {
                                let fast = bypass_slope(s, r, side);
                                let slow = bypass_slope_oracle(s, r, side, bound);
                                match (fast, slow) {
                                    (Ok(a), Ok(b)) if a == b => rep.check(true, String::new),
                                    (a, b) => rep.check(false, || {
                                        format!(
                                            "s={s} r={r} {side:?}: fast {}, oracle {}",
                                            shown(&a),
                                            shown(&b)
                                        )
                                    }),
                                }
                            }
                        }
                    }
                    rep
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("farey worker panicked"))
            .collect()
    });
    let mut report = SuiteReport::new(SUITE_NAMES[0]);
    for p in parts {
        report.absorb(p);
    }
    report
}

fn shown(r: &Result<Slope, FareyError>) -> String {
    match r {
        Ok(x) => x.to_string(),
        Err(e) => format!("error ({e})"),
    }
}

/// Breadth-first closure of the peaks under both stabilizations, cut at `floor`.
pub fn stabilization_closure(peaks: &[Peak], floor: &BigInt) -> BTreeSet<(BigInt, BigInt)> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<(BigInt, BigInt)> = peaks
        .iter()
        .filter(|p| &p.tb >= floor)
        .map(|p| (p.tb.clone(), p.rot.clone()))
        .collect();
    while let Some(v) = queue.pop_front() {
        if !seen.insert(v.clone()) {
            continue;
        }
        let (tb, rot) = v;
        if &tb - 1 < *floor {
            continue;
        }
        for step in [-1, 1] {
            let next = (&tb - 1, &rot + step);
            if !seen.contains(&next) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// A valid Legendrian simple atlas with between one and `max_peaks` peaks.
pub fn random_atlas(rng: &mut impl Rng, max_peaks: usize) -> KnotAtlas {
    let top: i64 = rng.gen_range(-6..=6);
    let odd = |tb: i64, rot: i64| {
        if (tb + rot).rem_euclid(2) == 1 {
            rot
        } else {
            rot + 1
        }
    };
    let mut peaks = vec![Peak::new(top, odd(top, rng.gen_range(-5..=5)))];
    let want = rng.gen_range(1..=max_peaks);
    let mut attempts = 0;
    while peaks.len() < want && attempts < 100 {
        attempts += 1;
        let tb = rng.gen_range(top - 6..=top);
        let p = Peak::new(tb, odd(tb, rng.gen_range(-8..=8)));
        if peaks
            .iter()
            .all(|q| q != &p && !q.covers(&p) && !p.covers(q))
        {
            peaks.push(p);
        }
    }
    let width = if rng.gen_bool(0.5) {
        Width::Known(BigInt::from(top + rng.gen_range(0..=1)))
    } else {
        Width::Unknown
    };
    AtlasDraft::new("random", peaks)
        .width(width)
        .lower_width(LowerWidth::Unknown)
        .validate()
        .expect("generator only produces valid atlases")
}

pub fn mountain_range_suite(config: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(SUITE_NAMES[1]);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for i in 0..config.random_atlases {
        let atlas = random_atlas(&mut rng, 4);
        let floor = atlas.max_tb() - config.range_depth;
        let bfs = stabilization_closure(atlas.peaks(), &floor);
        match mountain_range(&atlas, &floor) {
            Ok(range) => report.check(range.entries() == &bfs, || {
                format!(
                    "atlas #{i} {:?}: closed form {} entries, BFS {}",
                    atlas
                        .peaks()
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>(),
                    range.len(),
                    bfs.len()
                )
            }),
            Err(e) => report.fail(format!("atlas #{i}: {e}")),
        }
    }
    report
}

fn coprime(p: i64, q: i64) -> bool {
    p.gcd(&q) == 1
}

pub fn torus_grid_suite() -> SuiteReport {
    let mut report = SuiteReport::new(SUITE_NAMES[2]);
    let u = unknot();
    let big = BigInt::from;
    for p in 2..=10i64 {
        for q in 2..=10i64 {
            if !coprime(p, q) {
                continue;
            }
            let expect = big(p * q - p - q);
            let spec = CableSpec::new(p, q).expect("coprime");
            let flip = CableSpec::new(q, p).expect("coprime");
            match (positive_cable(&u, &spec), positive_cable(&u, &flip)) {
                (Ok(a), Ok(b)) => {
                    let (a, b) = (a.atlas.expect("covered"), b.atlas.expect("covered"));
                    report.check(a.peaks() == [Peak::new(expect.clone(), 0)], || {
                        format!("T({p},{q}): peaks {:?}", a.peaks())
                    });
                    report.check(a.peaks() == b.peaks(), || {
                        format!("T({p},{q}) differs from T({q},{p})")
                    });
                    match transverse_classes(&a, 0) {
                        Ok(t) => report.check(t.sl_max() == &expect, || {
                            format!("T({p},{q}): sl_max {}", t.sl_max())
                        }),
                        Err(e) => report.fail(format!("T({p},{q}): {e}")),
                    }
                }
                (a, b) => report.fail(format!("T({p},{q}): {a:?} / {b:?}")),
            }
        }
    }
    for q in [2i64, 3, 5] {
        for p in -40..-q {
            if !coprime(p, q) {
                continue;
            }
            let spec = CableSpec::new(p, q).expect("coprime");
            match negative_cable(&u, &spec) {
                Ok(r) => {
                    let a = r.atlas.expect("covered");
                    report.check(
                        a.max_tb() == &big(p * q) && a.width() == &Width::Known(big(p * q)),
                        || format!("T({p},{q}): tb̄ {} width {:?}", a.max_tb(), a.width()),
                    );
                    let rots: BTreeSet<i64> = a
                        .peaks()
                        .iter()
                        .map(|pk| i64::try_from(&pk.rot).unwrap_or(i64::MAX))
                        .collect();
                    let spot: Option<&[i64]> = match (p, q) {
                        (-3, 2) => Some(&[-1, 1]),
                        (-5, 2) => Some(&[-3, -1, 1, 3]),
                        _ => None,
                    };
                    if let Some(want) = spot {
                        report.check(rots.iter().copied().eq(want.iter().copied()), || {
                            format!("T({p},{q}): rot set {rots:?}")
                        });
                    }
                }
                Err(e) => report.fail(format!("T({p},{q}): {e}")),
            }
        }
    }
    report
}

/// The left-handed trefoil, which is uniformly thick: `ω = ℓw = tb̄ = −6`.
pub fn left_trefoil() -> KnotAtlas {
    AtlasDraft::new("left-trefoil", [Peak::new(-6, -1), Peak::new(-6, 1)])
        .width(Width::Known(BigInt::from(-6)))
        .lower_width(LowerWidth::Known(BigInt::from(-6)))
        .utp(true)
        .validate()
        .expect("left trefoil atlas is valid")
}

pub fn utp_coverage_suite() -> SuiteReport {
    let mut report = SuiteReport::new(SUITE_NAMES[3]);
    match utp_consistency_check(&left_trefoil(), &UtpGrid::default()) {
        Ok(r) => {
            report.cases = r.checked;
            for (spec, reason) in &r.uncovered {
                report.fail(format!("{spec}: uncovered ({reason})"));
            }
        }
        Err(e) => report.fail(e.to_string()),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_unknot() {
        let bfs = stabilization_closure(&[Peak::new(-1, 0)], &BigInt::from(-3));
        let range = mountain_range(&unknot(), &BigInt::from(-3)).unwrap();
        assert_eq!(&bfs, range.entries());
    }

    #[test]
    fn random_atlases_are_seeded() {
        let a: Vec<_> = (0..5)
            .map(|_| random_atlas(&mut ChaCha8Rng::seed_from_u64(7), 4))
            .collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((0..200).all(|_| random_atlas(&mut rng, 4).peaks().len() <= 4));
    }

    #[test]
    fn zero_bound_is_caught() {
        let config = VerifyConfig {
            farey_bound: 2,
            oracle_bound: Some(0),
            ..VerifyConfig::default()
        };
        let r = farey_oracle_suite(&config);
        assert!(!r.passed());
        assert_eq!(r.failures, r.cases);
        assert_eq!(r.examples.len(), MAX_REPORTED);
    }

    #[test]
    fn small_sweep_passes() {
        let config = VerifyConfig {
            farey_bound: 4,
            random_atlases: 10,
            ..VerifyConfig::default()
        };
        let report = run_verify(&config);
        assert!(report.passed(), "{report}");
        let names: Vec<_> = report.suites.iter().map(|s| s.name).collect();
        assert_eq!(names, SUITE_NAMES);
    }
}
