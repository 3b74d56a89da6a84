use std::path::Path;
use std::process::{Command, Output};

use gcx_core::diagram::build::{chords, tripod};
use gcx_core::gluing::GluingPlan;
use gcx_core::io::BasisFile;
use gcx_core::{Cochain, Convention, Ring};

fn gcx(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcx"))
        .args(args)
        .env("GCX_CACHE", cache)
        .output()
        .expect("gcx runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_gamma2(dir: &Path) -> String {
    let c = Cochain::from_int_terms(Ring::Z, [(&chords(Convention::Odd, &[(1, 3), (2, 4)]), 1), (&tripod(), -1)])
        .unwrap();
    let p = dir.join("gamma2.json");
    std::fs::write(&p, serde_json::to_string(&c).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn basis_emits_four_diagrams_with_a_valid_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = gcx(dir.path(), &["basis", "-m", "1", "-n", "2", "-k", "0", "--convention", "odd", "--ring", "Z"]);
    assert!(o.status.success());
    let b: BasisFile = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(b.manifest.count, 4);
    assert_eq!(b.diagrams.len(), 4);
    b.validate().unwrap();
    assert_eq!(gcx_core::io::to_json(&b).unwrap(), stdout(&o));
}

#[test]
fn glue_then_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = write_gamma2(dir.path());
    let plan = dir.path().join("plan.json");
    let o = gcx(dir.path(), &["glue", "--cocycle", &g2, "-d", "5", "--out", plan.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = gcx(dir.path(), &["verify", "--plan", plan.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));

    let text = std::fs::read_to_string(&plan).unwrap();
    let mut p: GluingPlan = serde_json::from_str(&text).unwrap();
    assert_eq!(gcx_core::io::to_json(&p).unwrap(), text);
    p.pairings[0].identification.signature.flips.push(9);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&p).unwrap()).unwrap();
    let o = gcx(dir.path(), &["verify", "--plan", bad.to_str().unwrap(), "--format", "text"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("pairing 0:"));
}

#[test]
fn coboundary_of_gamma2_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = write_gamma2(dir.path());
    let o = gcx(dir.path(), &["d", "--in", &g2]);
    assert!(o.status.success());
    let c: Cochain = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(c.is_zero());
    let o = gcx(dir.path(), &["d", "--in", &g2, "--format", "text"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn outputs_are_identical_with_cold_and_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let runs: &[&[&str]] = &[
        &["basis", "-m", "3", "-n", "2", "-k", "0"],
        &["matrix", "-m", "1", "-n", "2", "-k", "0", "--ring", "Z2"],
        &["cocycles", "-m", "1", "-n", "2", "-k", "0"],
        &["cohomology", "-m", "1", "-n", "2", "-k", "0", "--convention", "even"],
        &["minimal", "-m", "1", "-n", "2", "-k", "0"],
    ];
    for args in runs {
        let cold = gcx(&cache, args);
        let warm = gcx(&cache, args);
        let off: Vec<&str> = args.iter().copied().chain(["--no-cache", "--jobs", "4"]).collect();
        let none = gcx(&cache, &off);
        assert!(cold.status.success(), "{args:?}: {}", String::from_utf8_lossy(&cold.stderr));
        assert_eq!(cold.stdout, warm.stdout, "{args:?}");
        assert_eq!(cold.stdout, none.stdout, "{args:?}");
    }
    assert!(std::fs::read_dir(&cache).unwrap().count() >= runs.len());
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = gcx(dir.path(), &["basis", "-m", "1", "-n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--k"));
    let o = gcx(dir.path(), &["basis", "-m", "1", "-n", "2", "-k", "0", "--ring", "F3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--ring"));
    let o = gcx(dir.path(), &["minimal"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one_with_an_error_object() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = write_gamma2(dir.path());
    let o = gcx(dir.path(), &["glue", "--cocycle", &g2, "-d", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let e: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "gluing");

    let single = Cochain::from_int_terms(Ring::Z, [(&tripod(), 1)]).unwrap();
    let p = dir.path().join("tripod.json");
    std::fs::write(&p, serde_json::to_string(&single).unwrap()).unwrap();
    let o = gcx(dir.path(), &["glue", "--cocycle", p.to_str().unwrap(), "-d", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let e: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(e["error"]["message"].as_str().unwrap().starts_with("unpairable class"));

    let o = gcx(dir.path(), &["faces", "--in", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(dir.path().join("junk.json"), "{\"convention\": 3}").unwrap();
    let o = gcx(dir.path(), &["faces", "--in", dir.path().join("junk.json").to_str().unwrap()]);
    let e: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "parse");
}

#[test]
fn diagram_commands_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("tripod.json");
    std::fs::write(&d, serde_json::to_string(&tripod()).unwrap()).unwrap();
    let ds = d.to_str().unwrap();
    let cases: &[&[&str]] = &[
        &["grading", "--in", ds],
        &["faces", "--in", ds],
        &["certify", "--in", ds, "-d", "3", "--jobs", "2"],
        &["certify", "--in", ds, "-d", "4", "--vertices", "1,2,3,4"],
        &["corners", "--in", ds, "--include-infinity"],
        &["poincare", "--in", ds, "-d", "3", "--mode", "ambient"],
        &["poincare", "--in", ds, "-d", "3"],
    ];
    for args in cases {
        let o = gcx(dir.path(), args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
        let t: Vec<&str> = args.iter().copied().chain(["--format", "text"]).collect();
        let o = gcx(dir.path(), &t);
        assert!(o.status.success() && !o.stdout.is_empty(), "{args:?}");
    }
    let o = gcx(dir.path(), &["grading", "--in", ds, "--format", "text"]);
    assert_eq!(stdout(&o), "order 2 defect 0\n");
}

#[test]
fn plan_family_commands() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = write_gamma2(dir.path());
    let plan = dir.path().join("plan.json");
    assert!(gcx(dir.path(), &["glue", "--cocycle", &g2, "-d", "3", "--out", plan.to_str().unwrap()]).status.success());
    let ps = plan.to_str().unwrap();
    for args in [
        &["signatures", "--plan", ps][..],
        &["collapse-analysis", "--plan", ps, "--jobs", "3"],
        &["collapse-analysis", "--plan", ps, "--pairing", "1"],
        &["glue-mod2", "--cocycle", &g2, "-d", "4"],
        &["orient", "--in", &g2],
        &["dims", "--in", &g2, "-d", "3"],
        &["extend", "--in", &g2],
    ] {
        let o = gcx(dir.path(), args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = gcx(dir.path(), &["collapse-analysis", "--plan", ps, "--jobs", "3"]);
    let one = gcx(dir.path(), &["collapse-analysis", "--plan", ps]);
    assert_eq!(o.stdout, one.stdout);

    let c = dir.path().join("chord.json");
    std::fs::write(&c, serde_json::to_string(&chords(Convention::Odd, &[(1, 2)])).unwrap()).unwrap();
    let o = gcx(dir.path(), &["glue-chord", "--in", c.to_str().unwrap()]);
    let p: GluingPlan = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(p.principal_folds.len(), 1);
    assert!(p.verification.pass);
}
