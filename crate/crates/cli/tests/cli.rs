use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ejq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ejq"))
        .args(args)
        .env_remove("EJQ_SEED")
        .output()
        .expect("spawn ejq")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(name: &str, text: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const PURE: &str = r#"{"algebra":{"kind":"spin","d":3},"data":{"s":0.5,"v":[0.5,0,0]}}"#;

#[test]
fn entropy_of_pure_state_is_zero() {
    let f = write("pure_state.json", PURE);
    let o = ejq(&["entropy", path(&f)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "0.000000000000\n");
}

#[test]
fn spectrum_table() {
    let f = write(
        "diag.json",
        r#"{"algebra":{"kind":"herm","base":"R","n":2},"data":[[[0.75],[0]],[[0],[0.25]]]}"#,
    );
    let o = ejq(&["spectrum", path(&f), "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "eigenvalue,multiplicity\n0.750000000000,1\n0.250000000000,1\n");
}

#[test]
fn divergence_to_pure_state_is_inf() {
    let rho = write(
        "mixed_state.json",
        r#"{"algebra":{"kind":"spin","d":3},"data":{"s":0.5,"v":[0.1,0.2,0]}}"#,
    );
    let sigma = write("pure_for_div.json", PURE);
    let o = ejq(&["div", path(&rho), path(&sigma)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "inf\n");
    let o = ejq(&["div", path(&rho), path(&rho), "--alpha", "2"]);
    assert_eq!(stdout(&o), "0.000000000000\n");
}

#[test]
fn square_point_report() {
    let o = ejq(&["square", "--point", "1/2,1/4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# spectrum\nindex  value\n0      1/2\n1      1/4\n2      1/4\n"), "{text}");
    let o = ejq(&["square", "--point", "2,0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = ejq(&["square", "--point", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn polygon_file_probe() {
    let f = write(
        "triangle.json",
        r#"{"vertices":[["0","0"],["1","0"],["0","1"]]}"#,
    );
    let o = ejq(&["probe-polygon", path(&f), "--grid", "6", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["probe"][0]["spectral"], true);
    assert_eq!(v["probe"][0]["rank"], 3);
    assert!(v.get("witness").is_none());
}

#[test]
fn minimax_sources() {
    let o = ejq(&["minimax", "--fixture", "interval", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("value,0,value,1.00000000000\n"));
    let g = write("game.json", r#"{"payoff":[[0,1],[1,0]]}"#);
    let o = ejq(&["minimax", "--game", path(&g), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["value"][0]["value"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    // exactly one source
    let o = ejq(&["minimax", "--fixture", "interval", "--game", path(&g)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn randomized_commands_require_a_seed() {
    let o = ejq(&["check", "concavity", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--seed"));
    let o = Command::new(env!("CARGO_BIN_EXE_ejq"))
        .args(["check", "concavity", "--trials", "3", "--algebra", "spin:3"])
        .env("EJQ_SEED", "5")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn flag_seed_wins_over_env() {
    let args = ["check", "locality", "--trials", "4", "--algebra", "herm:C:2", "--format", "csv"];
    let with_flag = Command::new(env!("CARGO_BIN_EXE_ejq"))
        .args(args)
        .args(["--seed", "9"])
        .env("EJQ_SEED", "1")
        .output()
        .unwrap();
    let plain = ejq(&[&args[..], &["--seed", "9"]].concat());
    assert_eq!(with_flag.stdout, plain.stdout);
}

#[test]
fn identical_seeds_give_identical_bytes() {
    let args = ["check", "dpi", "--seed", "77", "--trials", "40", "--algebra", "all"];
    let a = ejq(&args);
    let b = ejq(&args);
    let seq = ejq(&[&args[..], &["--sequential"]].concat());
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, seq.stdout);
}

#[test]
fn usage_errors_exit_two() {
    let o = ejq(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    let o = ejq(&["entropy", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
    let f = write("truncated.json", r#"{"algebra":{"kind":"spin","d":3}}"#);
    let o = ejq(&["entropy", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing field \"data\""), "{}", stderr(&o));
    let o = ejq(&["check", "dpi", "--seed", "1", "--algebra", "herm:O:3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_state_list_is_rejected_with_path() {
    let f = write(
        "bad_states.json",
        r#"{"algebra":{"kind":"spin","d":2},"states":[{"s":0.5,"v":[0,0.5]},{"s":0.5,"v":[0,2]}]}"#,
    );
    let o = ejq(&["capacity", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("$.states[1]"), "{}", stderr(&o));
}

#[test]
fn help_exits_zero() {
    let o = ejq(&["--help"]);
    assert!(o.status.success());
    for cmd in ["spectrum", "entropy", "div", "capacity", "minimax", "check", "square", "probe-polygon"] {
        assert!(stdout(&o).contains(cmd), "{cmd}");
    }
}
