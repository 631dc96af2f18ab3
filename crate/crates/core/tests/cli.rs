use std::path::PathBuf;
use std::process::{Command, Output};

const HEADER: &str =
    "strategy,N,L,d,r,kdiv,trials,seed,cancellation,mean_delay_s,stderr_s,min_delay_s";

fn apcc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apcc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("apcc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const SMALL: &[&str] = &["--trials", "50", "--kdiv-max", "3", "--out", "-"];

#[test]
fn simulate_writes_csv_with_header() {
    let o = apcc(&[&["simulate"], SMALL].concat());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    let rows: Vec<&str> = lines.collect();
    // Default strategies apcc and lcc at K′ = 1..=3.
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert_eq!(row.split(',').count(), 12);
    }
}

#[test]
fn simulate_is_byte_deterministic() {
    let args = [&["simulate", "--mode", "iid", "--seed", "9"], SMALL].concat();
    assert_eq!(apcc(&args).stdout, apcc(&args).stdout);
}

#[test]
fn header_is_written_even_without_rows() {
    assert_eq!(apcc::bench::simulation_csv(&[]).trim_end(), HEADER);
    let o = apcc(&[
        "simulate",
        "--kdiv-min",
        "3",
        "--kdiv-max",
        "2",
        "--out",
        "-",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_file_and_flags_override_config() {
    let cfg = scratch("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"n": 12, "trials": 40, "kdiv_max": 2, "strategies": ["lcc"]}"#,
    )
    .unwrap();
    let out = scratch("rows.csv");
    let o = apcc(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--n",
        "14",
        "--no-cancel",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows
        .iter()
        .all(|r| r.starts_with("lcc,14,") && r.contains(",40,1,false,")));
}

#[test]
fn infeasible_and_invalid_inputs_exit_two() {
    assert_eq!(
        apcc(&["optimize", "--k", "40", "--out", "-"]).status.code(),
        Some(2)
    );
    assert_eq!(
        apcc(&[
            "simulate",
            "--strategy",
            "lcc-mmc",
            "--l",
            "1",
            "--out",
            "-"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(apcc(&["simulate", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        apcc(&["simulate", "--strategy", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        apcc(&["simulate", "--config", "/nonexistent/apcc.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        apcc(&["simulate", "--kdiv-max", "999", "--out", "-"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn optimize_reports_every_method() {
    let o = apcc(&["optimize", "--n", "20", "--out", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for method in ["relaxed", "rounded", "mvd", "brute-force"] {
        assert!(
            text.lines().any(|l| l.starts_with(method)),
            "missing {method} in\n{text}"
        );
    }
}

#[test]
fn demo_and_costs_run() {
    let o = apcc(&["demo", "--out", "-"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max gradient deviation"));
    let o = apcc(&["report-costs", "--out", "-"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("metric,"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(apcc(&["--help"]).status.code(), Some(0));
}
