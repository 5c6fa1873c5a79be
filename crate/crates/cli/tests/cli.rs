use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"
[model]
kind = "burgers_riemann"
u_left = 2.0
u_right = 1.0

[grid]
x_min = -1.0
x_max = 1.0
n_cells = 80

[solver]
final_time = 0.2

[uq]
mode = "gpc"
points = 6
probe_x = 0.1

[output]
prefix = "small"
surface = true
"#;

fn stochcol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stochcol")).args(args).output().unwrap()
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8(out.stdout.clone()).unwrap().lines().map(str::to_string).collect()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn selftest_passes() {
    let out = stochcol(&["selftest"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert!(!lines.is_empty() && lines.iter().all(|l| l.starts_with("ok ")), "{lines:?}");
}

#[test]
fn moments_writes_artifacts_and_reruns_are_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), SMALL);
    let run = |dir: &str, jobs: &str| {
        let out_dir = tmp.path().join(dir);
        let out = stochcol(&["--jobs", jobs, "moments", "--config", &config, "--out", out_dir.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        stdout_lines(&out)
    };
    let first = run("a", "1");
    let second = run("b", "2");
    let names = |paths: &[String]| -> Vec<String> {
        paths
            .iter()
            .map(|p| Path::new(p).file_name().unwrap().to_str().unwrap().to_string())
            .collect()
    };
    assert_eq!(
        names(&first),
        vec![
            "small_gpc_moments-u_6.csv",
            "small_gpc_slice-u_6.csv",
            "small_gpc_surface-u_6.csv",
            "small_manifest_6.toml"
        ]
    );
    assert_eq!(names(&first), names(&second));
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), "{a}");
    }
    let moments = std::fs::read_to_string(&first[0]).unwrap();
    assert!(moments.starts_with("x,mean,stddev\n"));
    assert_eq!(moments.lines().count(), 81);
}

#[test]
fn flags_override_the_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), SMALL);
    let out_dir = tmp.path().join("o");
    let out = stochcol(&[
        "moments",
        "--config",
        &config,
        "--out",
        out_dir.to_str().unwrap(),
        "--mode",
        "spline",
        "--node-rule",
        "uniform",
        "--points",
        "5",
        "--n-cells",
        "40",
        "--prefix",
        "flagged",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let moments = out_dir.join("flagged_sp_spline_moments-u_5.csv");
    assert_eq!(std::fs::read_to_string(moments).unwrap().lines().count(), 41);
}

#[test]
fn invalid_config_fails_with_one_error_line() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), &SMALL.replace("n_cells = 80", "n_cells = 0"));
    let out = stochcol(&["moments", "--config", &config]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.starts_with("error code="), "{stderr}");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_config_keys_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), &SMALL.replace("[grid]", "[grid]\ndx = 0.1"));
    let out = stochcol(&["moments", "--config", &config]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error code=config"));
}

#[test]
fn zero_jobs_is_an_error() {
    let out = stochcol(&["--jobs", "0", "selftest"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error code=config"));
}

#[test]
fn solve_writes_a_snapshot() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("s");
    let out = stochcol(&[
        "solve",
        "--xi",
        "-0.5",
        "--n-cells",
        "50",
        "--final-time",
        "0.1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(out_dir.join("run_snapshot.csv")).unwrap();
    assert!(text.starts_with("x,u\n"));
    assert_eq!(text.lines().count(), 51);
}

#[test]
fn solve_rejects_xi_outside_the_random_space() {
    let out = stochcol(&["solve", "--xi", "1.5", "--n-cells", "20"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error code=out_of_range"));
}
