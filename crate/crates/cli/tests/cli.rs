use std::process::{Command, Output};

use systolic_cli::{exit, BoundsRow, TrigReport, VerificationReport};

fn systolic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_systolic")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bounds_for_genus_two() {
    let o = systolic(&["bounds", "--genus", "2", "--format", "json"]);
    assert_eq!(code(&o), exit::OK);
    let row: BoundsRow = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(row.schema, "systolic/1");
    assert!((row.bounds.bavard_diam_lower_cosh - 3.2743).abs() < 5e-4);
    assert_eq!(row.bounds.jenni_sys_upper, Some(2.0 * (1.0 + 2f64.sqrt()).acosh()));
    assert!(stdout(&systolic(&["bounds", "--genus", "2"])).contains("bavard_diam_lower_cosh: 3.2743"));
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["bounds", "--genus", "1"][..],
        &["table", "--genus-min", "5", "--genus-max", "3"],
        &["trig", "same", "--alpha", "4", "--beta", "1", "--d", "1"],
        &["verify", "--fn", "2,2,-1,0,0,0"],
        &["systole", "--fn", "1,2"],
        &["diameter", "--grid", "1"],
        &["verify", "--surface", "klein"],
        &["frobnicate"],
    ] {
        let o = systolic(args);
        assert_eq!(code(&o), exit::INVALID_INPUT, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn table_is_csv_with_a_header() {
    let o = systolic(&["table", "--genus-min", "2", "--genus-max", "2"]);
    assert_eq!(code(&o), exit::OK);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    let o = systolic(&["table", "--genus-max", "40"]);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let header = rdr.headers().unwrap().clone();
    let col = header.iter().position(|h| h == "ratio_upper").unwrap();
    let ratios: Vec<f64> = rdr.records().map(|r| r.unwrap()[col].parse().unwrap()).collect();
    assert_eq!(ratios.len(), 39);
    assert!(ratios.iter().all(|r| *r < 2.0));
}

#[test]
fn trig_examples() {
    let json = |args: &[&str]| -> TrigReport {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        serde_json::from_str(&stdout(&systolic(&a))).unwrap()
    };
    let r = json(&["trig", "same", "--alpha", "3.14159265", "--beta", "3.14159265", "--d", "1"]);
    assert!((r.length.unwrap() - 2.0).abs() < 1e-6);
    assert!(r.oracle_diff.unwrap() < 1e-9);
    let r = json(&["trig", "opposite", "--alpha", "1.5708", "--beta", "1.5708", "--d", "2"]);
    assert!((r.cosh_half - (0.5 + 0.5 * 2f64.cosh())).abs() < 1e-4);
    let r = json(&["trig", "same", "--alpha", "1.5708", "--beta", "1.5708", "--d", "0.5"]);
    assert_eq!(r.length, None);
    assert!(stdout(&systolic(&["trig", "same", "--alpha", "1.5708", "--beta", "1.5708", "--d", "0.5"]))
        .contains("length: none"));
}

#[test]
fn verify_bolza_passes_and_round_trips() {
    let o = systolic(&["verify", "--surface", "bolza", "--grid", "16", "--format", "json"]);
    assert_eq!(code(&o), exit::OK);
    let text = stdout(&o);
    let r: VerificationReport = serde_json::from_str(&text).unwrap();
    assert!(r.pass);
    assert!((r.sys - 3.0571).abs() < 1e-4);
    assert_eq!(serde_json::from_str::<VerificationReport>(&serde_json::to_string(&r).unwrap()).unwrap(), r);
}

#[test]
fn verify_short_curve_is_loose() {
    let o = systolic(&["verify", "--fn", "0.1,2,2,0,0,0", "--grid", "8", "--format", "json"]);
    assert_eq!(code(&o), exit::OK, "{}", String::from_utf8_lossy(&o.stderr));
    let r: VerificationReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.pass);
    assert!((r.sys - 0.1).abs() < 1e-8);
    assert!(r.slacks.main > 50.0);
}

#[test]
fn element_cap_exits_three() {
    let o = Command::new(env!("CARGO_BIN_EXE_systolic"))
        .args(["systole", "--surface", "bolza"])
        .env("SYSTOLIC_ELEMENT_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(code(&o), exit::RESOURCE);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap of 5"));
    let o = Command::new(env!("CARGO_BIN_EXE_systolic"))
        .args(["bounds", "--genus", "2"])
        .env("SYSTOLIC_ELEMENT_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&o), exit::INVALID_INPUT);
}

#[test]
fn random_sweep_is_deterministic() {
    let args = ["verify", "--random", "3", "--seed", "9", "--grid", "4", "--format", "json"];
    let a = systolic(&args);
    let b = systolic(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(code(&a), exit::OK);
    assert_eq!(a.stdout, b.stdout);
    let reports: Vec<VerificationReport> = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(reports.len(), 3);
    let other = systolic(&["verify", "--random", "3", "--seed", "10", "--grid", "4", "--format", "json"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn out_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("systolic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("diam.csv");
    let o = systolic(&["diameter", "--grid", "6", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), exit::OK);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("schema,surface.kind,lower,upper,"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn systole_reports_its_certificate() {
    let o = systolic(&["systole", "--fn", "0.1,2,2,0,0,0", "--format", "json"]);
    assert_eq!(code(&o), exit::OK);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["length"].as_f64().unwrap() - 0.1).abs() < 1e-8);
    assert_eq!(v["l0_source"], "known_element");
    let o = systolic(&["systole", "--radius-slack", "0.5"]);
    assert_eq!(code(&o), exit::INVALID_INPUT);
}
