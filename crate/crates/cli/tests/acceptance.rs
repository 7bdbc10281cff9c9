//! Acceptance checks, one line per criterion. Runs without the libtest harness
//! so the lines always appear in the output.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use cabling_core::atlas::{transverse_classes, Peak, Width};
use cabling_core::builtin::unknot;
use cabling_core::cabling::{negative_cable, positive_cable, utp_consistency_check, UtpGrid};
use cabling_core::io::{parse_atlas_file, parse_cable_result, serialize_atlas};
use cabling_core::slope::CableSpec;
use cabling_core::verify::{farey_oracle_suite, left_trefoil, mountain_range_suite, VerifyConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn cabling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cabling"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn coprime(a: i64, b: i64) -> bool {
    num_integer::gcd(a, b) == 1
}

fn trefoil_from_unknot() -> Outcome {
    let start = Instant::now();
    let out = cabling(&["classify", "--builtin", "unknot", "--cable", "2/3"]);
    let took = within(Duration::from_millis(100), start)?;
    ensure(out.status.code() == Some(0), || {
        format!("exit {:?}", out.status.code())
    })?;
    let result = parse_cable_result(&out.stdout).map_err(|e| e.to_string())?;
    ensure(result.regime.as_str() == "sufficiently_positive", || {
        format!("regime {}", result.regime)
    })?;
    let atlas = result.atlas.ok_or("no atlas")?;
    ensure(atlas.peaks() == [Peak::new(1, 0)], || {
        format!("peaks {:?}", atlas.peaks())
    })?;
    Ok(format!("peaks {{(1, 0)}} in {took:?}"))
}

fn positive_grid() -> Outcome {
    let start = Instant::now();
    let u = unknot();
    let mut n = 0;
    for p in 2..=10i64 {
        for q in 2..=10i64 {
            if !coprime(p, q) {
                continue;
            }
            let a = positive_cable(&u, &CableSpec::new(p, q).unwrap())
                .map_err(|e| e.to_string())?
                .atlas
                .unwrap();
            let b = positive_cable(&u, &CableSpec::new(q, p).unwrap())
                .map_err(|e| e.to_string())?
                .atlas
                .unwrap();
            ensure(a.max_tb() == &BigInt::from(p * q - p - q), || {
                format!("T({p},{q}) tb̄ {}", a.max_tb())
            })?;
            let rots: BTreeSet<_> = a.peaks().iter().map(|pk| pk.rot.clone()).collect();
            ensure(rots == BTreeSet::from([BigInt::from(0)]), || {
                format!("T({p},{q}) rot set {rots:?}")
            })?;
            ensure(a.peaks() == b.peaks(), || {
                format!("T({p},{q}) != T({q},{p})")
            })?;
            n += 1;
        }
    }
    let took = within(Duration::from_secs(1), start)?;
    Ok(format!("{n} cables in {took:?}"))
}

fn negative_torus_knots() -> Outcome {
    let start = Instant::now();
    let u = unknot();
    let mut n = 0;
    for q in [2i64, 3, 5] {
        for p in -60..-q {
            if !coprime(p, q) {
                continue;
            }
            let a = negative_cable(&u, &CableSpec::new(p, q).unwrap())
                .map_err(|e| format!("T({p},{q}): {e}"))?
                .atlas
                .unwrap();
            let pq = BigInt::from(p * q);
            ensure(
                a.max_tb() == &pq && a.width() == &Width::Known(pq.clone()),
                || format!("T({p},{q}) tb̄ {} width {:?}", a.max_tb(), a.width()),
            )?;
            let rots: BTreeSet<BigInt> = a.peaks().iter().map(|pk| pk.rot.clone()).collect();
            let want: Option<BTreeSet<BigInt>> = match (p, q) {
                (-3, 2) => Some([-1, 1].into_iter().map(BigInt::from).collect()),
                (-5, 2) => Some([-3, -1, 1, 3].into_iter().map(BigInt::from).collect()),
                _ => None,
            };
            if let Some(want) = want {
                ensure(rots == want, || format!("T({p},{q}) rot set {rots:?}"))?;
            }
            n += 1;
        }
    }
    let took = within(Duration::from_secs(1), start)?;
    Ok(format!("{n} cables in {took:?}"))
}

fn refuses_cable_of_trefoil() -> Outcome {
    let atlas = fixtures().join("right-trefoil.json");
    let out = cabling(&[
        "classify",
        "--atlas",
        atlas.to_str().unwrap(),
        "--cable",
        "2/3",
    ]);
    ensure(out.status.code() == Some(1), || {
        format!("exit {:?}", out.status.code())
    })?;
    let result = parse_cable_result(&out.stdout).map_err(|e| e.to_string())?;
    ensure(
        !result.regime.is_covered() && result.atlas.is_none(),
        || format!("regime {}", result.regime),
    )?;
    Ok(format!("exit 1, {}", result.regime))
}

fn farey_equivalence() -> Outcome {
    let start = Instant::now();
    let report = farey_oracle_suite(&VerifyConfig::default());
    let took = within(Duration::from_secs(30), start)?;
    ensure(report.passed(), || report.to_string())?;
    Ok(format!("{} cases in {took:?}", report.cases))
}

fn mountain_range_equivalence() -> Outcome {
    let start = Instant::now();
    let report = mountain_range_suite(&VerifyConfig::default());
    let took = within(Duration::from_secs(5), start)?;
    ensure(report.passed() && report.cases == 50, || report.to_string())?;
    Ok(format!("{} atlases in {took:?}", report.cases))
}

fn utp_recovery() -> Outcome {
    let start = Instant::now();
    let report =
        utp_consistency_check(&left_trefoil(), &UtpGrid::default()).map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(1), start)?;
    ensure(report.full_coverage(), || {
        format!("uncovered {:?}", report.uncovered)
    })?;
    Ok(format!(
        "{} specs ({} positive, {} negative) in {took:?}",
        report.checked, report.positive, report.negative
    ))
}

fn transverse_layer() -> Outcome {
    let u = unknot();
    let mut n = 0;
    for p in 2..=10i64 {
        for q in 2..=10i64 {
            if !coprime(p, q) {
                continue;
            }
            let a = positive_cable(&u, &CableSpec::new(p, q).unwrap())
                .map_err(|e| e.to_string())?
                .atlas
                .unwrap();
            let t = transverse_classes(&a, 0).map_err(|e| e.to_string())?;
            ensure(t.sl_max() == &BigInt::from(p * q - p - q), || {
                format!("T({p},{q}) sl_max {}", t.sl_max())
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} cables"))
}

fn persistence_and_determinism() -> Outcome {
    let mut files: Vec<_> = std::fs::read_dir(fixtures())
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    ensure(!files.is_empty(), || "no fixtures".into())?;
    for f in &files {
        let bytes = std::fs::read(f).map_err(|e| e.to_string())?;
        let atlas = parse_atlas_file(&bytes).map_err(|e| format!("{}: {e}", f.display()))?;
        let text = serialize_atlas(&atlas);
        ensure(text.as_bytes() == bytes, || {
            format!("{} is not canonical", f.display())
        })?;
        let again = parse_atlas_file(text.as_bytes()).map_err(|e| e.to_string())?;
        ensure(again == atlas, || {
            format!("{} changed on round trip", f.display())
        })?;
    }
    let unknot = fixtures().join("unknot.json");
    let unknot = unknot.to_str().unwrap();
    for args in [
        &["render", "--atlas", unknot, "--floor", "-6"][..],
        &["classify", "--atlas", unknot, "--cable", "-5/2"][..],
        &["classify", "--builtin", "unknot", "--cable", "2/3"][..],
    ] {
        let (a, b) = (cabling(args), cabling(args));
        ensure(
            a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty(),
            || format!("{args:?} differs between runs"),
        )?;
    }
    Ok(format!(
        "{} fixtures, render and classify stable",
        files.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("trefoil from the unknot", trefoil_from_unknot),
        ("positive torus-knot grid", positive_grid),
        ("negative torus knots", negative_torus_knots),
        (
            "refusal on the cable of the trefoil",
            refuses_cable_of_trefoil,
        ),
        ("Farey oracle equivalence", farey_equivalence),
        (
            "mountain-range oracle equivalence",
            mountain_range_equivalence,
        ),
        ("UTP recovery", utp_recovery),
        ("transverse layer", transverse_layer),
        ("persistence and determinism", persistence_and_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
