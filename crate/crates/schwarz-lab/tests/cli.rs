use std::process::{Command, Output};

fn sdl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn center_prints_the_parameter() {
    let o = sdl(&["center", "--family", "s", "--period", "3", "--seed", "0.2,0"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    let v: f64 = line.trim().strip_prefix("a=").unwrap().parse().unwrap();
    assert!((v - 0.1875).abs() < 1e-10);
}

#[test]
fn chi_of_zero_is_minus_one() {
    let o = sdl(&["chi", "--a", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("a=0") && out.contains("c=-1"), "{out}");
}

#[test]
fn solver_failure_exits_two() {
    let o = sdl(&["center", "--family", "s", "--period", "5", "--seed", "40,40"]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "solver_failure");
}

#[test]
fn invalid_input_exits_three() {
    assert_eq!(sdl(&["chi", "--c", "0.3,0.2"]).status.code(), Some(3));
    assert_eq!(sdl(&["render-cs", "--resolution", "0"]).status.code(), Some(3));
    assert_eq!(sdl(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(sdl(&["--help"]).status.code(), Some(0));
}

#[test]
fn scan_writes_a_csv_grid() {
    let o = sdl(&["scan", "--grid", "0,0,1,1,3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "re_a,im_a,depth,address,r,g,b");
    assert_eq!(lines.len(), 10);
    assert!(lines[1..].iter().all(|l| l.split(',').nth(3).is_some_and(|a| a.starts_with('2'))));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = std::env::temp_dir().join(format!("sdl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "family=s\nperiod=3\nseed=0.2,0\n").unwrap();
    let o = sdl(&["--config", cfg.to_str().unwrap(), "center"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("a=0.187"));
    std::fs::remove_dir_all(&dir).ok();
}
