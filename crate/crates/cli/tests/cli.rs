use std::path::PathBuf;
use std::process::{Command, Output};

fn cosets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosets"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn crate_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cosets-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = cosets(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn cyclic_six_normal_family_is_two_circles() {
    let r = json(&["analyze", "cyclic:6", "--family", "normal", "--json", "-"]);
    let fam = &r["families"][0];
    assert_eq!(fam["name"], "normal-proper");
    assert_eq!(fam["complexes"][0]["summary"], "H1=Z^2");
    assert_eq!(r["wedge"]["code"], "1:2");
    assert_eq!(r["wedge"]["verified"], true);
    assert_eq!(r["wedge"]["trace"][0]["step"], "ProductStep");
    assert_eq!(r["wedge"]["trace"][0]["large_cosets"], 2);
}

#[test]
fn klein_four_zeta_and_bouc() {
    let r = json(&["analyze", "product:cyclic:2,cyclic:2", "--json", "-"]);
    assert_eq!(r["zeta"]["p_at_minus_one"], "3");
    assert_eq!(r["zeta"]["bouc_holds"], true);
    assert_eq!(r["zeta"]["series"], "1 - 3*2^-s + 2*4^-s");
    assert_eq!(r["wedge"]["code"], "1:3");
}

#[test]
fn trivial_group_has_empty_wedge() {
    let r = json(&["analyze", "cyclic:1", "--json", "-"]);
    assert_eq!(r["wedge"]["code"], "empty");
    assert_eq!(r["families"][0]["cosets"], 0);
    assert_eq!(r["zeta"]["p_at_minus_one"], "1");
}

#[test]
fn reports_validate_against_schema() {
    let schema: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(crate_path("schema/report.schema.json")).unwrap(),
    )
    .unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let runs: &[&[&str]] = &[
        &["analyze", "cyclic:6", "--json", "-"],
        &["analyze", "cyclic:1", "--json", "-"],
        &[
            "analyze",
            "symmetric:3",
            "--complex",
            "order,nerve,delta",
            "--json",
            "-",
            "--timings",
        ],
        &["analyze", "dihedral:6", "--family", "normal", "--json", "-"],
        &[
            "analyze",
            "q8",
            "--family",
            "maximal",
            "--complex",
            "nerve",
            "--json",
            "-",
        ],
    ];
    for args in runs {
        let r = json(args);
        let errors: Vec<String> = validator.iter_errors(&r).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    let mut broken = json(&["analyze", "cyclic:2", "--json", "-"]);
    broken["wedge"]["code"] = "three circles".into();
    assert!(!validator.is_valid(&broken));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &[
            "analyze",
            "alternating:4",
            "--complex",
            "order,nerve",
            "--json",
            "-",
        ][..],
        &["analyze", "dihedral:4"][..],
        &["fp", "low-index", "infinite-dihedral", "--max-index", "8"][..],
        &[
            "verify",
            crate_path("corpus/acceptance.txt").to_str().unwrap(),
            "--json",
            "-",
        ][..],
    ] {
        let a = cosets(args);
        let b = cosets(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exported_complexes_are_written() {
    let dir = scratch_dir("export");
    let o = cosets(&[
        "analyze",
        "cyclic:6",
        "--family",
        "normal",
        "--complex",
        "order,nerve",
        "--export",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let order = std::fs::read_to_string(dir.join("normal-proper-order.txt")).unwrap();
    let nerve = std::fs::read_to_string(dir.join("normal-proper-nerve.txt")).unwrap();
    assert!(!order.is_empty() && !nerve.is_empty());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn json_to_file() {
    let dir = scratch_dir("json");
    let path = dir.join("report.json");
    let o = cosets(&["analyze", "cyclic:4", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("group cyclic:4"));
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["wedge"]["code"], "0:1");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn fp_enumerate_symmetric_three() {
    let o = cosets(&[
        "fp",
        "enumerate",
        "gens: a,b ; rels: a^2, b^2, (a*b)^3",
        "--subgroup",
        "",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order 6"));
    let o = cosets(&["fp", "enumerate", "s3", "--subgroup", "a", "--tsv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4, "{}", stdout(&o));
}

#[test]
fn fp_low_index_integers() {
    let o = cosets(&["fp", "low-index", "gens: a ; rels:", "--max-index", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(String::from).collect();
    assert_eq!(rows.len(), 6);
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split('\t').collect();
        assert_eq!(cells[0], (i + 1).to_string());
        assert_eq!(cells[1], "true");
    }
}

#[test]
fn fp_maximal_counts_infinite_dihedral() {
    let r = json(&[
        "fp",
        "maximal-counts",
        "gens: s,t ; rels: s^2,t^2",
        "--max-index",
        "10",
        "--json",
        "-",
    ]);
    assert_eq!(r, serde_json::json!({"2": 3, "3": 3, "5": 5, "7": 7}));
}

#[test]
fn fp_simple_quotients_free_group() {
    let r = json(&[
        "fp",
        "simple-quotients",
        "free2",
        "--max-index",
        "6",
        "--json",
        "-",
    ]);
    assert_eq!(r["Z2"], 3);
    assert_eq!(r["Z3"], 4);
    assert_eq!(r["Z5"], 6);
}

#[test]
fn fp_complements_integers() {
    let r = json(&[
        "fp",
        "complements",
        "integers",
        "--max-index",
        "8",
        "--json",
        "-",
    ]);
    assert_eq!(r["total"], 7);
    assert_eq!(r["covered"], 7);
}

#[test]
fn exit_codes() {
    assert_eq!(cosets(&["analyze", "cyclic:"]).status.code(), Some(2));
    assert_eq!(cosets(&["analyze", "wreath:3"]).status.code(), Some(2));
    assert_eq!(
        cosets(&["fp", "enumerate", "gens: a ; rels: a^"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cosets(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        cosets(&["verify", "/nonexistent/corpus.txt"]).status.code(),
        Some(2)
    );
    assert_eq!(cosets(&["--help"]).status.code(), Some(0));

    let o = cosets(&["fp", "enumerate", "integers"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("overflow"));
    assert_eq!(
        cosets(&["fp", "enumerate", "s3", "--max-cosets", "3"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        cosets(&[
            "analyze",
            "symmetric:3",
            "--complex",
            "delta",
            "--cap-simplices",
            "10"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        cosets(&["fp", "low-index", "free2", "--max-index", "1000"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn caps_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cosets"))
        .args(["analyze", "symmetric:3", "--complex", "delta"])
        .env("COSET_CAPS", "simplices=10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_cosets"))
        .args(["analyze", "cyclic:2"])
        .env("COSET_CAPS", "simplices=ten")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn shipped_corpus_passes() {
    let o = cosets(&[
        "verify",
        crate_path("corpus/acceptance.txt").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains(" 0 failed"));
}

#[test]
fn empty_corpus_passes_with_warning() {
    let dir = scratch_dir("empty");
    let path = dir.join("empty.txt");
    std::fs::write(&path, "# nothing here\n").unwrap();
    let o = cosets(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn wrong_betti_names_the_check() {
    let dir = scratch_dir("negative");
    let path = dir.join("bad.txt");
    std::fs::write(&path, "cyclic:6 | normal-betti=1:3\n").unwrap();
    let o = cosets(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("wedge-verify:cyclic:6"));
    let _ = std::fs::remove_dir_all(&dir);
}
