use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn isoconn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoconn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

#[test]
fn spectrum_of_dense_fixture() {
    let out = isoconn(&[
        "spectrum",
        "--matrix",
        fixture("l4_prime.json").to_str().unwrap(),
    ]);
    let v = json_of(&out);
    assert_eq!(floats(&v["eigenvalues"]), vec![0.0, 4.0, 5.2679, 8.7321]);
}

#[test]
fn full_precision_keeps_digits() {
    let m = fixture("l4_prime.json");
    let out = isoconn(&[
        "spectrum",
        "--matrix",
        m.to_str().unwrap(),
        "--precision",
        "full",
    ]);
    let v = json_of(&out);
    let third = floats(&v["eigenvalues"])[2];
    assert!((third - (7.0 - 3f64.sqrt())).abs() < 1e-12);
}

#[test]
fn enumeration_lists_six_relabelings() {
    let out = isoconn(&[
        "isospectral",
        "--matrix",
        fixture("l1.json").to_str().unwrap(),
        "--enumerate",
        "--dedupe",
    ]);
    let v = json_of(&out);
    assert_eq!(v["count"], 6);
    let l2: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("l2.json")).unwrap()).unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert!(entries.iter().any(|e| e["result"] == l2));
    assert!(entries
        .iter()
        .all(|e| e["isospectral"] == true && e["laplacian_structured"] == true));
}

#[test]
fn comparison_of_two_matrices() {
    let out = isoconn(&[
        "isospectral",
        "--matrix",
        fixture("l1.json").to_str().unwrap(),
        "--matrix",
        fixture("l3.json").to_str().unwrap(),
    ]);
    assert_eq!(json_of(&out)["isospectral"], true);
}

#[test]
fn rotation_transform_reports_structure() {
    let m = fixture("path4.json");
    let out = isoconn(&[
        "transform",
        "--matrix",
        m.to_str().unwrap(),
        "--theta",
        "0.5235987755982988",
    ]);
    let v = json_of(&out);
    assert_eq!(v["isospectral"], true);
    assert_eq!(v["laplacian_structured"], false);
    assert_eq!(v["perm"], Value::Null);
}

#[test]
fn mirror_move_and_parametric() {
    let cfg = fixture("two_neighbors.json");
    let v = json_of(&isoconn(&[
        "moves",
        "--input",
        cfg.to_str().unwrap(),
        "--mobile",
        "m",
    ]));
    assert_eq!(v["kind"], "reflection");
    assert_eq!(v["alternatives"][0], serde_json::json!([1.0, -2.0]));

    let v = json_of(&isoconn(&["parametric", "--alpha", "3", "--beta", "4"]));
    assert_eq!(floats(&v["closed_form"]), vec![0.0, 4.0, 6.3542, 11.6458]);
}

#[test]
fn integrate_and_zone() {
    let cfg = fixture("five_agents.json");
    let cfg = cfg.to_str().unwrap();
    let v = json_of(&isoconn(&[
        "integrate",
        "--input",
        cfg,
        "--mobile",
        "e",
        "--path",
        "1.4,1.0;1.0,1.5",
    ]));
    assert_eq!(v["reliable"], true);
    assert!(v["error"].as_f64().unwrap() < 1e-5);

    let v = json_of(&isoconn(&[
        "zone",
        "--input",
        cfg,
        "--mobile",
        "e",
        "--grid",
        "0,3,0,3,12,12",
        "--tol",
        "0.01",
    ]));
    let target = v["target"].as_f64().unwrap();
    for p in v["accepted"].as_array().unwrap() {
        assert!((p["lambda2"].as_f64().unwrap() - target).abs() <= 0.01 + 1e-4);
    }
}

#[test]
fn unknown_agent_is_a_domain_error() {
    let path = fixture("five_agents.json");
    let out = isoconn(&[
        "integrate",
        "--input",
        path.to_str().unwrap(),
        "--mobile",
        "nobody",
        "--path",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "UnknownAgent");
}

#[test]
fn malformed_input_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let target = dir.path().join("out.json");
    let out = isoconn(&[
        "spectrum",
        "--matrix",
        bad.to_str().unwrap(),
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!target.exists());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "Parse");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn help_and_unknown_flags() {
    for sub in [
        "spectrum",
        "connectivity",
        "isospectral",
        "transform",
        "moves",
        "integrate",
        "zone",
        "parametric",
        "render",
    ] {
        assert_eq!(isoconn(&[sub, "--help"]).status.code(), Some(0), "{sub}");
        assert_eq!(
            isoconn(&[sub, "--no-such-flag"]).status.code(),
            Some(2),
            "{sub}"
        );
    }
    assert_eq!(isoconn(&["--help"]).status.code(), Some(0));
    assert_eq!(isoconn(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn unsupported_format_is_a_usage_error() {
    let out = isoconn(&[
        "parametric",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--format",
        "svg",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let l1 = fixture("l1.json");
    let cfg = fixture("five_agents.json");
    let runs: Vec<Vec<&str>> = vec![
        vec![
            "isospectral",
            "--matrix",
            l1.to_str().unwrap(),
            "--enumerate",
        ],
        vec!["connectivity", "--input", cfg.to_str().unwrap()],
        vec![
            "zone",
            "--input",
            cfg.to_str().unwrap(),
            "--mobile",
            "e",
            "--grid",
            "0,3,0,3,8,8",
        ],
        vec!["render", "--input", cfg.to_str().unwrap(), "--mobile", "e"],
    ];
    for (k, args) in runs.iter().enumerate() {
        let a = dir.path().join(format!("{k}a"));
        let b = dir.path().join(format!("{k}b"));
        for target in [&a, &b] {
            let mut full = args.clone();
            full.extend(["--output", target.to_str().unwrap()]);
            assert!(isoconn(&full).status.success(), "{args:?}");
        }
        let (a, b) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(a, b, "{args:?}");
        if args[0] != "render" {
            let v: Value = serde_json::from_slice(&a).unwrap();
            let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
            assert_eq!(serde_json::from_str::<Value>(&again).unwrap(), v);
        }
    }
}

#[test]
fn svg_is_well_formed() {
    let cfg = fixture("two_neighbors.json");
    let out = isoconn(&["render", "--input", cfg.to_str().unwrap(), "--mobile", "m"]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    // Tag balance of a document without nested text content.
    let opens =
        svg.matches("<g").count() + svg.matches("<text").count() + svg.matches("<svg").count();
    let closes = svg.matches("</g>").count()
        + svg.matches("</text>").count()
        + svg.matches("</svg>").count();
    assert_eq!(opens, closes);
    assert_eq!(svg.matches("stroke-dasharray").count(), 1);
}

#[test]
fn csv_output_for_spectrum() {
    let m = fixture("l4_prime.json");
    let out = isoconn(&[
        "spectrum",
        "--matrix",
        m.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,eigenvalue,v_0,v_1,v_2,v_3"));
    assert!(lines.next().unwrap().starts_with("1,0.0000,0.5000"));
}
