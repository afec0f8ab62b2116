use std::fs;
use std::path::PathBuf;

use clap::Parser;
use softtrack::config::parse_config;
use softtrack_cli::{exit_code_for, run, Cli, EXIT_FAILED_CHECKS, EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK};

fn paper_cfg() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/paper.cfg")
}

fn invoke(args: &[&str]) -> (u8, String, String) {
    let mut argv = vec!["softtrack"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).expect("arguments parse");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&cli, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_cfg(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn shipped_config_round_trips() {
    let text = fs::read_to_string(paper_cfg()).unwrap();
    let once = parse_config(&text).unwrap();
    let again = parse_config(&once.to_canonical()).unwrap();
    assert_eq!(once, again);
    assert_eq!(once.to_canonical(), again.to_canonical());
}

#[test]
fn table3_passes() {
    let (code, out, _) = invoke(&["table3"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("all quantities within tolerance"));
    assert!(out.contains("K_p: printed 1.7"));
    assert!(out.contains("2.88206"));
}

#[test]
fn table3_verbatim_mode_fails_compaction_row() {
    let (code, out, _) = invoke(&["table3", "--compaction-mode", "verbatim-eq8"]);
    assert_eq!(code, EXIT_FAILED_CHECKS);
    assert!(out.contains("verbatim-eq8"));
}

#[test]
fn evaluate_text_and_csv() {
    let cfg = paper_cfg().display().to_string();
    let (code, out, _) = invoke(&["evaluate", "--config", &cfg]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("F         = 3597.94 N"));

    let (code, out, _) = invoke(&["evaluate", "--config", &cfg, "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert!(!out.contains('\r'));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    let header: Vec<&str> = lines[0].split(',').collect();
    let row: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(header.len(), row.len());
    let f = header.iter().position(|h| *h == "F").unwrap();
    let thrust: f64 = row[f].parse().unwrap();
    assert!((thrust - 3597.9).abs() / 3597.9 < 0.005);
}

#[test]
fn kp_flag_overrides_config() {
    let cfg = paper_cfg().display().to_string();
    let (_, out, _) = invoke(&["evaluate", "--config", &cfg, "--kp", "3"]);
    assert!(out.contains("K_p       = 3 (override)"));
}

#[test]
fn check_passes_and_fails_on_short_reach() {
    let cfg = paper_cfg().display().to_string();
    let (code, out, _) = invoke(&["check", "--config", &cfg]);
    assert_eq!(code, EXIT_OK, "{out}");

    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(paper_cfg()).unwrap().replace("robot_reach = 2.3 m", "robot_reach = 1.0 m");
    let short = write_cfg(&dir, "short.cfg", &text);
    let (code, out, _) = invoke(&["check", "--config", &short]);
    assert_eq!(code, EXIT_FAILED_CHECKS);
    assert!(out.contains("FAILED (reach_longest)"), "{out}");
}

#[test]
fn malformed_config_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_cfg(&dir, "bad.cfg", "[terrain]\nthis line is broken\n");
    let (code, _, err) = invoke(&["evaluate", "--config", &bad]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 2"), "{err}");

    let (code, _, err) = invoke(&["evaluate"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("--config"));

    let (code, _, _) = invoke(&["evaluate", "--config", "/nonexistent/x.cfg"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn error_kinds_map_to_exit_codes() {
    let quad = softtrack::Error::Quadrature { a: 0.0, b: 1.0, depth: 30, estimate: 1.0, previous: 2.0 };
    let staged = softtrack::Error::Stage { stage: "compaction_resistance", source: Box::new(quad.clone()) };
    assert_eq!(exit_code_for(&quad), EXIT_NUMERICAL);
    assert_eq!(exit_code_for(&staged), EXIT_NUMERICAL);
    assert_eq!(exit_code_for(&softtrack::Error::Config("x".into())), EXIT_INPUT);
}

#[test]
fn sweep_summary_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("dump.csv");
    let text = fs::read_to_string(paper_cfg()).unwrap().replace(
        "objective = max_acceleration",
        &format!("objective = max_acceleration\ndump = {}", dump.display()),
    );
    let cfg = write_cfg(&dir, "sweep.cfg", &text);
    let (code, out, _) = invoke(&["sweep", "--config", &cfg]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("grid points: 2250"));
    let csv = fs::read_to_string(&dump).unwrap();
    assert_eq!(csv.lines().count(), 2251);
    assert_eq!(
        csv.lines().next().unwrap(),
        "b,l,B,v,m,i,z_o,R_in,R_b,R_c,R_g,F,drawbar_pull,a,feasible,failed_check,objective"
    );
}

#[test]
fn sweep_without_feasible_points_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(paper_cfg())
        .unwrap()
        .replace("v = 1.0 m/s .. 2.0 m/s step 0.25 m/s", "m = 10000 kg .. 100000 kg step 10000 kg");
    let cfg = write_cfg(&dir, "heavy.cfg", &text);
    let (code, out, _) = invoke(&["sweep", "--config", &cfg]);
    assert_eq!(code, EXIT_FAILED_CHECKS);
    assert!(out.contains("no feasible configuration"));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let (code, out, _) = invoke(&["table3", "--output", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert!(fs::read_to_string(path).unwrap().contains("printed vs computed"));
}

#[test]
fn verbose_echoes_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        &dir,
        "min.cfg",
        "[terrain]\npreset = paper-soft-soil\n[chassis]\npreset = paper-chassis\n[state]\npreset = paper-state\n",
    );
    let (code, _, err) = invoke(&["evaluate", "--config", &cfg, "--verbose"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("default: [state] g = 9.81"), "{err}");
    assert!(err.contains("effective configuration"));
}
