use std::path::PathBuf;
use std::process::{Command, Output};

use billiard_bounds_cli::table::read_csv;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_billiard-bounds"));
    c.env_remove("BILLIARD_BOUNDS_CELL_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("billiard-bounds-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Int,
    Num,
    Str,
    Bool,
    Arr,
    Obj,
}

fn kind_ok(v: &Value, k: Kind) -> bool {
    match k {
        Kind::Int => v.is_u64() || v.is_i64(),
        Kind::Num => v.is_number(),
        Kind::Str => v.is_string(),
        Kind::Bool => v.is_boolean(),
        Kind::Arr => v.is_array(),
        Kind::Obj => v.is_object(),
    }
}

/// Required members and their types, addressed by JSON pointer.
fn check_layout(v: &Value, layout: &[(&str, Kind)]) {
    for &(ptr, kind) in layout {
        let got = v
            .pointer(ptr)
            .unwrap_or_else(|| panic!("missing {ptr} in {v}"));
        assert!(kind_ok(got, kind), "{ptr} should be {kind:?}, got {got}");
    }
}

const BOUNDS: &[(&str, Kind)] = &[
    ("/B", Kind::Int),
    ("/m", Kind::Int),
    ("/bt2", Kind::Int),
    ("/bt3", Kind::Int),
    ("/provenance", Kind::Arr),
];
const RD2: &[(&str, Kind)] = &[
    ("/m", Kind::Int),
    ("/dims", Kind::Arr),
    ("/betti", Kind::Arr),
    ("/sum", Kind::Int),
];
const ASSEMBLY: &[(&str, Kind)] = &[
    ("/total", Kind::Int),
    ("/contributions", Kind::Obj),
    ("/match", Kind::Bool),
    ("/spec/k", Kind::Arr),
];
const DOLD: &[(&str, Kind)] = &[
    ("/power", Kind::Int),
    ("/betti/values", Kind::Arr),
    ("/total", Kind::Int),
    ("/quotient", Kind::Obj),
];
const POWER: &[(&str, Kind)] = &[
    ("/config/cap", Kind::Int),
    ("/homology/betti/values", Kind::Arr),
    ("/homology/orbit_dims", Kind::Arr),
    ("/homology/burnside/free", Kind::Bool),
];
const BILLIARDS: &[(&str, Kind)] = &[
    ("/shape/kind", Kind::Str),
    ("/period", Kind::Int),
    ("/orbits/0/length", Kind::Num),
    ("/orbits/0/generic", Kind::Bool),
    ("/bound/verdict", Kind::Str),
];

type Layout = &'static [(&'static str, Kind)];

const CASES: &[(&[&str], Layout)] = &[
    (&["bounds", "--B", "2", "--m", "3"], BOUNDS),
    (&["bounds", "--betti", "1,2,1"], BOUNDS),
    (&["rd2-sphere", "--m", "2"], RD2),
    (&["rd3-assembly", "--m", "2", "--k", "2,1"], ASSEMBLY),
    (&["rd3-assembly", "--m", "3", "--period", "2"], ASSEMBLY),
    (&["dold", "--m", "1", "--p", "3"], DOLD),
    (&["power", "--polygon", "3", "--p", "2"], POWER),
    (
        &["billiards", "--shape", "ellipse:2,1", "--period", "2"],
        BILLIARDS,
    ),
];

#[test]
fn documented_examples() {
    let v = json_of(&["bounds", "--B", "2", "--m", "3"]);
    assert_eq!((v["bt2"].as_u64(), v["bt3"].as_u64()), (Some(4), Some(6)));
    let v = json_of(&["rd2-sphere", "--m", "2"]);
    assert_eq!(v["betti"], serde_json::json!([0, 0, 1, 1, 1]));
}

#[test]
fn every_subcommand_has_its_layout() {
    for (args, layout) in CASES {
        check_layout(&json_of(args), layout);
    }
}

#[test]
fn csv_output_round_trips_to_the_json() {
    for (args, _) in CASES {
        let json = json_of(args);
        let mut with_csv = args.to_vec();
        with_csv.push("--csv");
        let out = run(&with_csv);
        assert!(out.status.success());
        assert!(out.stdout.starts_with(b"path,value\n"));
        assert_eq!(read_csv(out.stdout.as_slice()).unwrap(), json, "{args:?}");
    }
}

#[test]
fn manifests_are_deterministic() {
    let digest_of = |name: &str| {
        let path = scratch(name);
        let p = path.to_str().unwrap();
        json_of(&["dold", "--m", "1", "--p", "2", "--manifest", p]);
        let m: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(m["subcommand"], "dold");
        assert_eq!(m["parameters"]["p"], 2);
        assert_eq!(m["tool_version"], env!("CARGO_PKG_VERSION"));
        assert!(m["wall_time_ms"].is_u64());
        m["result_digest"].as_str().unwrap().to_string()
    };
    let a = digest_of("a.json");
    assert_eq!(a.len(), 64);
    assert_eq!(a, digest_of("b.json"));
}

#[test]
fn billiard_orbits_file() {
    let path = scratch("orbits.json");
    json_of(&[
        "billiards",
        "--shape",
        "ellipse:2,1",
        "--period",
        "2",
        "--json",
        path.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let lengths: Vec<f64> = v["orbits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["length"].as_f64().unwrap())
        .collect();
    assert_eq!(lengths.len(), 2);
    assert!((lengths[0] - 8.0).abs() < 1e-8 && (lengths[1] - 4.0).abs() < 1e-8);
}

#[test]
fn complex_file_input() {
    let path = scratch("square.txt");
    std::fs::write(&path, "# a square\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    let v = json_of(&["power", "--complex", path.to_str().unwrap(), "--p", "2"]);
    assert_eq!(
        v["homology"]["betti"]["values"],
        serde_json::json!([0, 1, 1])
    );
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &[][..],
        &["frobnicate"],
        &["bounds"],
        &["bounds", "--B", "3", "--m", "1"],
        &["bounds", "--betti", "1,2,3"],
        &["rd2-sphere"],
        &["rd3-assembly", "--m", "2", "--k", "2,2"],
        &["dold", "--m", "1", "--p", "4"],
        &["billiards", "--shape", "blob:1", "--period", "2"],
        &["power", "--complex", "/nonexistent/facets.txt"],
        &["reproduce-paper", "--only", "12"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn cell_cap_from_environment() {
    let out = bin()
        .args(["power", "--polygon", "3", "--p", "3"])
        .env("BILLIARD_BOUNDS_CELL_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    let out = bin()
        .args(["power", "--polygon", "3"])
        .env("BILLIARD_BOUNDS_CELL_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["power", "--polygon", "3", "--p", "3"])
        .env("BILLIARD_BOUNDS_CELL_CAP", "100000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reproduce_rows() {
    let out = run(&["reproduce-paper", "--only", "1,2,3,4,5"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 5);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(
        stderr.lines().filter(|l| l.starts_with("[PASS]")).count(),
        5
    );
}
