use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn rideshare(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rideshare"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Value of `column` in the single data row of a solve report.
fn column(report: &str, column: &str) -> String {
    let mut lines = report.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    row[header.iter().position(|h| *h == column).unwrap()].to_string()
}

const GADGET: [&str; 9] = ["generate", "--kind", "3p-stop", "--r", "2", "--m", "7", "--a", "2,2,3,2,2,3"];

const TWO_PATHS: &str = "4 4 2\n0 1 1\n0 2 1\n1 3 1\n2 3 1\n1 3 0 1 0 1 0 10 3 1 0 | 3 2 0\n2 1 0 0 0 0 0 10 1 0\n";

#[test]
fn generate_stop_gadget() {
    let dir = TempDir::new().unwrap();
    let out = rideshare(dir.path(), &[&GADGET[..], &["--out", "g.txt"]].concat());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("trips=20"));
    let text = fs::read_to_string(dir.path().join("g.txt")).unwrap();
    assert!(text.starts_with("9 8 20\n"));
    assert_eq!(text.lines().count(), 1 + 8 + 20);
}

#[test]
fn generate_single_random_trip() {
    let dir = TempDir::new().unwrap();
    let out = rideshare(dir.path(), &["generate", "--kind", "random", "--trips", "1", "--out", "r.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("r.txt")).unwrap();
    assert_eq!(text.lines().next().unwrap().split(' ').nth(2), Some("1"));
}

#[test]
fn generate_rejects_bad_sum() {
    let dir = TempDir::new().unwrap();
    let out = rideshare(
        dir.path(),
        &["generate", "--kind", "3p-stop", "--r", "2", "--m", "7", "--a", "2,2,3,2,2,2"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("spec: sum mismatch"));
}

#[test]
fn phase_on_gadget_is_within_ratio_and_validates() {
    let dir = TempDir::new().unwrap();
    rideshare(dir.path(), &[&GADGET[..], &["--out", "g.txt"]].concat());
    let out = rideshare(dir.path(), &["solve", "g.txt", "--algo", "phase", "--out", "g.sol"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let drivers: usize = column(&stdout(&out), "drivers").parse().unwrap();
    assert!((6..=15).contains(&drivers));
    let check = rideshare(dir.path(), &["validate", "g.txt", "g.sol"]);
    assert_eq!(check.status.code(), Some(0));
    assert!(stdout(&check).starts_with("valid drivers="));
}

#[test]
fn every_algorithm_output_validates() {
    let dir = TempDir::new().unwrap();
    rideshare(dir.path(), &["generate", "--kind", "random", "--trips", "9", "--nodes", "4", "--seed", "5", "--out", "r.txt"]);
    for algo in ["phase", "star-improve", "edge-swap", "exact"] {
        let out = rideshare(dir.path(), &["solve", "r.txt", "--algo", algo, "--out", "r.sol"]);
        assert_eq!(out.status.code(), Some(0), "{algo}: {}", stderr(&out));
        let check = rideshare(dir.path(), &["validate", "r.txt", "r.sol"]);
        assert_eq!(check.status.code(), Some(0), "{algo}: {}", stdout(&check));
    }
}

#[test]
fn exact_single_trip_and_budget() {
    let dir = TempDir::new().unwrap();
    rideshare(dir.path(), &["generate", "--kind", "random", "--trips", "1", "--out", "one.txt"]);
    let out = rideshare(dir.path(), &["solve", "one.txt", "--algo", "exact"]);
    assert_eq!(column(&stdout(&out), "drivers"), "1");

    rideshare(dir.path(), &["generate", "--kind", "random", "--trips", "30", "--nodes", "5", "--out", "big.txt"]);
    let out = rideshare(dir.path(), &["solve", "big.txt", "--algo", "exact"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("oracle budget exceeded"));
}

#[test]
fn phase_precondition_names_condition() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("two.txt"), TWO_PATHS).unwrap();
    let out = rideshare(dir.path(), &["solve", "two.txt", "--algo", "phase"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("condition 3"));
}

#[test]
fn malformed_capacity_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.txt"), TWO_PATHS.replace("1 3 0 1 0 1", "1 3 0 -1 0 1")).unwrap();
    let out = rideshare(dir.path(), &["solve", "bad.txt", "--algo", "phase"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("capacity"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let gen = ["generate", "--kind", "random", "--trips", "40", "--nodes", "9", "--seed", "11"];
    assert_eq!(stdout(&rideshare(dir.path(), &gen)), stdout(&rideshare(dir.path(), &gen)));
    rideshare(dir.path(), &[&gen[..], &["--out", "r.txt"]].concat());
    for algo in ["phase", "star-improve", "edge-swap"] {
        let run = |sol: &str| {
            let out = rideshare(dir.path(), &["solve", "r.txt", "--algo", algo, "--no-timing", "--out", sol]);
            (stdout(&out), fs::read(dir.path().join(sol)).unwrap())
        };
        assert_eq!(run("a.sol"), run("b.sol"), "{algo}");
    }
}

#[test]
fn compare_empty_glob_prints_header_only() {
    let dir = TempDir::new().unwrap();
    let out = rideshare(dir.path(), &["compare", "missing/*.txt"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "# rideshare-report v1\ninstance,algo,status,drivers,distance,passengers,wall_ms,valid,ratio\n"
    );
}

#[test]
fn compare_marks_precondition_skips() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("two.txt"), TWO_PATHS).unwrap();
    let out = rideshare(dir.path(), &["compare", "*.txt", "--algo", "phase,exact", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = stdout(&out);
    assert!(csv.contains("two.txt,phase,skipped: condition 3,"), "{csv}");
    assert!(csv.contains("two.txt,exact,ok,"), "{csv}");
}

#[test]
fn compare_ratio_stays_within_bound() {
    let dir = TempDir::new().unwrap();
    let max_capacity = 3.0;
    for seed in 0..100 {
        let name = format!("i{seed:03}.txt");
        let nodes = (1 + seed % 6).to_string();
        let seed = seed.to_string();
        let out = rideshare(
            dir.path(),
            &["generate", "--kind", "random", "--trips", "10", "--nodes", &nodes, "--max-capacity", "3", "--seed", &seed, "--out", &name],
        );
        assert_eq!(out.status.code(), Some(0));
    }
    let args = ["compare", "i*.txt", "--algo", "phase,star-improve,exact", "--no-timing", "--out", "report.csv"];
    let out = rideshare(dir.path(), &args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2 + 300 + 1);
    let summary = csv.lines().last().unwrap();
    let ratio: f64 = summary.rsplit(',').next().unwrap().parse().unwrap();
    assert!(summary.starts_with("summary,all,max_ratio,"));
    assert!(ratio >= 1.0 && ratio <= (max_capacity + 2.0) / 2.0, "{ratio}");
    assert!(csv.lines().skip(2).take(300).all(|l| l.contains(",ok,")), "{csv}");

    rideshare(dir.path(), &[&args[..5], &["--out", "again.csv"]].concat());
    assert_eq!(csv, fs::read_to_string(dir.path().join("again.csv")).unwrap());
}
