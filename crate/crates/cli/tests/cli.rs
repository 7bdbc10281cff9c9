use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cabling"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn classify_negative_cable() {
    let o = run(&["classify", "--builtin", "unknot", "--cable", "-5/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("\"regime\": \"sufficiently_negative\""));
    assert!(out.contains("\"level_n\": 2"));
    assert!(out.contains("\"width\": -10"));
}

#[test]
fn classify_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t23.json");
    let o = run(&[
        "classify",
        "--builtin",
        "unknot",
        "--cable",
        "2/3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"name\": \"unknot_(2,3)\""));
}

#[test]
fn uncovered_is_exit_one() {
    let atlas = fixture("right-trefoil.json");
    let o = run(&[
        "classify",
        "--atlas",
        atlas.to_str().unwrap(),
        "--cable",
        "2/3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"reason\": \"width_not_integer\""));
}

#[test]
fn input_errors_are_exit_two() {
    for args in [
        &["classify", "--builtin", "unknot", "--cable", "3/1"][..],
        &["classify", "--builtin", "unknot", "--cable", "4/2"][..],
        &["classify", "--builtin", "nope", "--cable", "2/3"][..],
        &[
            "classify",
            "--atlas",
            "/does/not/exist.json",
            "--cable",
            "2/3",
        ][..],
        &["classify", "--cable", "2/3"][..],
        &["range", "--builtin", "unknot", "--floor", "5"][..],
        &[
            "farey", "bypass", "--s", "1/2", "--r", "2/4", "--side", "front",
        ][..],
        &[
            "farey", "bypass", "--s", "0/0", "--r", "1", "--side", "front",
        ][..],
        &["transverse"][..],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn bad_atlas_reports_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"schema_version": "1", "name": "x", "peaks": [{"tb": 1, "rot": 0}, {"tb": -1, "rot": 0}],
            "width": "unknown", "lower_width": "unknown", "legendrian_simple": true, "utp": false}"#,
    )
    .unwrap();
    let o = run(&[
        "classify",
        "--atlas",
        path.to_str().unwrap(),
        "--cable",
        "2/3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("peaks[1]"), "{}", stderr(&o));
}

#[test]
fn torus_name_hint() {
    let o = run(&["range", "--builtin", "torus-2-3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("classify --builtin unknot --cable 2/3"));
}

#[test]
fn iterate_chain() {
    let o = run(&[
        "iterate",
        "--builtin",
        "unknot",
        "--cable",
        "-3/2",
        "--cable",
        "-11/2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.trim_start().starts_with('['));
    // The first cable has tb̄ = ω = −6, so −11/2 lies above its width.
    assert_eq!(
        out.matches("\"regime\": \"sufficiently_negative\"").count(),
        1
    );
    assert_eq!(
        out.matches("\"regime\": \"sufficiently_positive\"").count(),
        1
    );

    let o = run(&[
        "iterate",
        "--builtin",
        "unknot",
        "--cable",
        "2/3",
        "--cable",
        "2/3",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn range_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("u.svg");
    let o = run(&[
        "range",
        "--builtin",
        "unknot",
        "--floor",
        "-3",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let lines: Vec<_> = stdout(&o).lines().skip(1).map(String::from).collect();
    assert_eq!(
        lines,
        ["-1 0 peak", "-2 1", "-2 -1", "-3 2", "-3 0", "-3 -2"]
    );
    let svg = std::fs::read_to_string(svg).unwrap();
    assert_eq!(svg.matches("class=\"marker").count(), 6);
}

#[test]
fn render_to_stdout() {
    let o = run(&[
        "render",
        "--builtin",
        "unknot",
        "--floor",
        "-1",
        "--no-labels",
    ]);
    assert!(o.status.success());
    let svg = stdout(&o);
    assert!(svg.contains("<svg"));
    assert_eq!(svg.matches("class=\"marker peak\"").count(), 1);
}

#[test]
fn transverse_of_left_trefoil() {
    let atlas = fixture("left-trefoil.json");
    let o = run(&[
        "transverse",
        "--atlas",
        atlas.to_str().unwrap(),
        "--depth",
        "2",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "sl_max -5\nsl -5 -7 -9\n");
}

#[test]
fn farey_bypass() {
    let o = run(&[
        "farey", "bypass", "--s", "-1", "--r", "-1/3", "--side", "back",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "-1/2\n");
    let o = run(&[
        "farey", "bypass", "--s", "inf", "--r", "0", "--side", "front",
    ]);
    assert_eq!(stdout(&o), "0/1\n");
}

#[test]
fn verify_fault_injection() {
    let o = run(&["verify", "--oracle-bound", "0"]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    let heads: Vec<_> = out
        .lines()
        .filter(|l| !l.starts_with(' '))
        .map(|l| l.split_whitespace().take(2).collect::<Vec<_>>().join(" "))
        .collect();
    assert_eq!(
        heads,
        [
            "FAIL farey-oracle",
            "PASS mountain-range-bfs",
            "PASS torus-knot-grid",
            "PASS utp-coverage",
            "3 of"
        ]
    );
}
