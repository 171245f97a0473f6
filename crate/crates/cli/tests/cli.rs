use std::path::PathBuf;
use std::process::{Command, Output};

fn parergo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parergo")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("parergo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bounds_on_werner_state_csv() {
    let o = parergo(&["bounds", "--werner", "0.5", "--antiferro", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("# schema: bounds/1"));
    assert!(text.lines().any(|l| l.starts_with("e_global,")));
}

#[test]
fn bounds_json_output_parses() {
    let o = parergo(&["--format", "json", "bounds", "--werner", "0.5", "--antiferro", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "bounds/1");
    assert!(v["rows"].as_array().is_some_and(|r| r.len() == 1));
}

#[test]
fn threshold_scan_replays_identically() {
    let out = scratch("scan.csv");
    let o = parergo(&["--seed", "3", "--out", out.to_str().unwrap(), "threshold-scan", "--grid", "0.3,0.55,0.6"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = parergo(&["replay", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn input_errors_exit_with_code_two() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"dims\": [2, 2],\n \"rho\": oops}").unwrap();
    let o = parergo(&["bounds", "--state", bad.to_str().unwrap(), "--antiferro", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = parergo(&["--dps-level", "1", "bounds", "--werner", "0.5", "--antiferro", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = parergo(&["bounds", "--werner", "1.5", "--antiferro", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tampered_replay_exits_with_code_four() {
    let out = scratch("tampered.csv");
    let o = parergo(&["--out", out.to_str().unwrap(), "threshold-scan", "--grid", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    std::fs::write(&out, text.replace("0.3,", "0.31,")).unwrap();
    let o = parergo(&["replay", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}
