use std::process::{Command, Output};

fn gcw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcw")).args(args).output().expect("gcw runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn cells_lists_dimension_and_name() {
    let o = gcw(&["cells", "--n", "3", "--k", "1"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], "0 (~1)");
    assert_eq!(lines[7..], ["2 (13)", "2 (~13)"]);
}

#[test]
fn oriented_cells_double() {
    let o = gcw(&["cells", "--n", "4", "--k", "2", "--variant", "oriented", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 84);
}

#[test]
fn covers_json_has_signs() {
    let o = gcw(&["covers", "--n", "3", "--k", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r["incidence"].as_i64().unwrap().abs() == 1 && r["type"].is_string()));
}

#[test]
fn homology_of_rp2() {
    let o = gcw(&["homology", "--n", "3", "--k", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "H_0 = Z\nH_1 = Z/2\nH_2 = 0\nbetti (1,0,0)\n");
    let o = gcw(&["homology", "--n", "4", "--k", "2", "--coeff", "mod2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ranks: Vec<u64> = v["groups"].as_array().unwrap().iter().map(|g| g["free_rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 1, 2, 1, 1]);
}

#[test]
fn complex_json_round_trips() {
    let o = gcw(&["complex", "--n", "4", "--k", "2", "--variant", "projective", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["variant"], "projective");
    assert_eq!(v["cells"].as_array().unwrap().len(), 21);
}

#[test]
fn verify_and_oracle_pass() {
    let o = gcw(&["verify", "--n", "4", "--k", "2", "--steps", "200"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| !l.starts_with("FAIL")));
    let o = gcw(&["oracle", "--n", "4", "--k", "2", "--seed", "5", "--samples", "200"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["cells", "--n", "3", "--k", "4"],
        vec!["complex", "--n", "5", "--k", "2", "--variant", "projective"],
        vec!["homology", "--n", "3"],
        vec!["cells", "--n", "3", "--k", "1", "--variant", "twisted"],
    ] {
        let o = gcw(&args);
        assert_eq!(o.status.code(), Some(2), "{:?}", args);
        assert!(!o.stderr.is_empty());
    }
}
