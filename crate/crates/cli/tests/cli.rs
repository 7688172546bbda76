//! End-to-end tests of the binary: exit codes, file formats, round trips.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isolens"))
}

#[test]
fn solve_golden_example_emits_six_solutions() {
    let output = bin()
        .args(["solve", "--k", "1.92", "--w", "0+0.67i"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(doc["count"], 6);
    assert_eq!(doc["counts_by_orientation"]["preserving"], 3);
    assert_eq!(doc["counts_by_orientation"]["reversing"], 3);
    assert_eq!(doc["k"], 1.92);
    assert_eq!(doc["w"]["im"], 0.67);
    // solutions parse back to the same floating-point values
    let zs: Vec<(f64, f64)> = doc["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["z"]["re"].as_f64().unwrap(), s["z"]["im"].as_f64().unwrap()))
        .collect();
    assert!(zs
        .iter()
        .any(|&(re, im)| (re - 1.4617539).abs() < 5e-7 && (im - 0.7738876).abs() < 5e-7));
    let text = serde_json::to_string(&doc["solutions"]).unwrap();
    let back: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["solutions"], back);
}

#[test]
fn cusps_respects_lemma_counts() {
    for (k, expect) in [("1.1", 4), ("1.92", 8)] {
        let output = bin().args(["cusps", "--k", k]).output().unwrap();
        assert!(output.status.success());
        let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
        assert_eq!(doc["count"], expect, "k={k}");
    }
}

#[test]
fn invalid_usage_exits_two() {
    let output = bin().args(["solve", "--k", "1.0"]).output().unwrap(); // missing --w
    assert_eq!(output.status.code(), Some(2));
    let output = bin()
        .args(["solve", "--k", "-3", "--w", "0"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let output = bin()
        .args(["solve", "--k", "1", "--w", "zebra"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let output = bin()
        .args(["critical", "--k", "1.0", "--format", "bmp"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn critical_csv_has_provenance_and_header() {
    let output = bin()
        .args(["critical", "--k", "2.01", "--samples", "64"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let mut lines = text.lines();
    let provenance = lines.next().unwrap();
    assert!(provenance.starts_with("# isolens k=2.01"));
    assert_eq!(lines.next().unwrap(), "t,re_z,im_z,arc_id");
    // four arcs for k >= 2
    let max_arc: u32 = text
        .lines()
        .skip(2)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .max()
        .unwrap();
    assert_eq!(max_arc, 3);
}

#[test]
fn caustic_svg_has_solid_and_dotted_paths() {
    let output = bin()
        .args(["caustic", "--k", "1.1", "--samples", "64", "--format", "svg"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.starts_with("<svg"));
    assert!(text.contains("stroke-dasharray"));
    assert!(text.contains("<circle"));
}

#[test]
fn basins_writes_deterministic_ppm_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.ppm");
    let args = [
        "basins",
        "--k",
        "1.92",
        "--w",
        "0+0.67i",
        "--window",
        "-3,3,-3,3",
        "--width",
        "24",
        "--height",
        "16",
        "--out",
    ];
    let output = bin()
        .args(args)
        .arg(path.to_str().unwrap())
        .output()
        .unwrap();
    assert!(output.status.success());
    let meta: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(meta["attractors"].as_array().unwrap().len(), 3);
    let bytes1 = std::fs::read(&path).unwrap();
    assert!(bytes1.starts_with(b"P6\n24 16\n255\n"));
    assert_eq!(bytes1.len(), "P6\n24 16\n255\n".len() + 3 * 24 * 16);
    let output = bin()
        .args(args)
        .arg(path.to_str().unwrap())
        .output()
        .unwrap();
    assert!(output.status.success());
    assert_eq!(bytes1, std::fs::read(&path).unwrap());
}

#[test]
fn classify_golden_is_consistent() {
    let output = bin()
        .args(["classify", "--k", "1.92", "--w", "0.67i"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(doc["m_predicted"], 3);
    assert_eq!(doc["n_predicted"], 3);
    assert_eq!(doc["consistent"], true);
}

#[test]
fn sweep_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("grid");
    let output = bin()
        .args([
            "sweep",
            "--k",
            "1.1",
            "--window",
            "-1.5,1.5,-1.5,1.5",
            "--resolution",
            "16",
            "--out",
        ])
        .arg(prefix.to_str().unwrap())
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let csv = std::fs::read_to_string(prefix.with_extension("csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("re_w,im_w,m,n,on_curve"));
    assert_eq!(csv.lines().count(), 2 + 16 * 16);
    let svg = std::fs::read_to_string(prefix.with_extension("svg")).unwrap();
    assert!(svg.contains("<rect"));
}

#[test]
fn verify_single_fast_criterion() {
    let output = bin()
        .args(["verify", "--criteria", "4"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("criterion  4 [PASS]"));
    // unknown suite is a usage error
    let output = bin()
        .args(["verify", "--suite", "nope"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
