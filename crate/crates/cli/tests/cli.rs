use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bfrand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bfrand")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path_s = path.to_str().unwrap().to_string();
    let mut full = vec!["generate", "-o", &path_s];
    full.extend_from_slice(args);
    let o = bfrand(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path_s
}

/// CSV rows with the wall-time column blanked.
fn rows_without_time(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| {
            let mut cols: Vec<&str> = l.split(',').collect();
            cols[7] = "_";
            cols.join(",")
        })
        .collect()
}

#[test]
fn run_emits_header_and_one_row_per_seed() {
    let o = bfrand(&["run", "--generator", "path-worst-case", "-n", "30", "--seeds", "0..7", "--check-oracle"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "algorithm,seed,n,m,iterations,relax_calls,improvements,wall_time_ns,negative_cycle_found,c,instance"
    );
    assert_eq!(lines.len(), 8);
    for (i, l) in lines[1..].iter().enumerate() {
        assert!(l.starts_with(&format!("randomized,{i},30,29,")));
    }
}

#[test]
fn runs_are_reproducible() {
    let args = ["run", "--generator", "random-sparse", "-n", "40", "-m", "150", "--cycle-free", "--seeds", "3..=12", "-a", "yen", "--ordering", "random"];
    let a = stdout(&bfrand(&args));
    let b = stdout(&bfrand(&args));
    assert_eq!(rows_without_time(&a), rows_without_time(&b));
}

#[test]
fn strict_basic_count() {
    let o = bfrand(&["run", "--generator", "random-sparse", "-n", "9", "-m", "20", "-a", "basic", "--strict-count", "--seeds", "0..3"]);
    assert!(o.status.success());
    for row in stdout(&o).lines().skip(1) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[5], "160");
    }
}

#[test]
fn adversarial_ordering_hits_the_worst_case() {
    let o = bfrand(&["run", "--generator", "alternating-adversary", "-n", "100", "-a", "yen", "--ordering", "adversarial", "--format", "json-lines"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.contains("\"iterations\":51"), "{out}");
}

#[test]
fn file_input_is_labelled_by_digest() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "g.gr", &["-g", "random-sparse", "-n", "12", "-m", "30", "--cycle-free"]);
    let o = bfrand(&["run", "-i", &path, "--check-oracle", "--seeds", "0..2"]);
    assert!(o.status.success());
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let label = row.rsplit(',').next().unwrap();
    assert!(label.starts_with("sha256:") && label.len() == 7 + 64, "{label}");

    let o = bfrand(&["run", "-i", &path, "--source", "3", "--check-oracle"]);
    assert!(o.status.success());
}

#[test]
fn negative_cycle_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "c.gr", &["-g", "planted-cycle", "-n", "12", "-m", "30", "--weight-min", "0"]);

    let o = bfrand(&["run", "-i", &path, "--detect-cycles", "--check-oracle", "--seeds", "0..5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().skip(1).all(|l| l.contains(",true,")));

    let o = bfrand(&["run", "-i", &path, "--detect-cycles", "--fail-on-cycle"]);
    assert_eq!(o.status.code(), Some(3));

    // no detector: the oracle disagrees with the silent run
    let o = bfrand(&["run", "-i", &path, "-a", "basic", "--check-oracle"]);
    assert_eq!(o.status.code(), Some(1));

    let o = bfrand(&["verify", "-i", &path, "--fail-on-cycle"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("negative cycle reachable"));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("missing.gr", "a 1 2 3\n", "problem line"),
        ("count.gr", "p sp 2 2\na 1 2 5\n", "declares 2 arcs"),
        ("range.gr", "p sp 2 1\na 1 3 5\n", "outside"),
        ("float.gr", "p sp 2 1\na 1 2 1.5\n", "not an integer"),
    ];
    for (name, body, needle) in cases {
        let path = dir.path().join(name);
        fs::write(&path, body).unwrap();
        let o = bfrand(&["run", "-i", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(needle), "{name}: {err}");
    }
    assert_eq!(bfrand(&["run", "--generator", "random-sparse", "-n", "5"]).status.code(), Some(2));
    assert_eq!(bfrand(&["run", "--generator", "path-worst-case", "-a", "basic", "--detect-cycles"]).status.code(), Some(2));
    assert_eq!(bfrand(&["run", "--generator", "path-worst-case", "--seeds", "5..5"]).status.code(), Some(2));
    assert_eq!(bfrand(&["run"]).status.code(), Some(2));
}

#[test]
fn verify_reports_every_engine() {
    let o = bfrand(&["verify", "--generator", "random-sparse", "-n", "10", "-m", "30", "--cycle-free", "--seeds", "0..5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for name in ["basic", "adaptive", "yen", "randomized"] {
        assert!(out.lines().any(|l| l.starts_with(name) && l.contains("ok (5 seeds)")), "{out}");
    }
}

#[test]
fn generate_round_trips_through_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "p.gr", &["-g", "path-worst-case", "-n", "50"]);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("p sp 50 49"));
    let from_file = stdout(&bfrand(&["run", "-i", &path, "--seeds", "0..4"]));
    let from_gen = stdout(&bfrand(&["run", "--generator", "path-worst-case", "-n", "50", "--seeds", "0..4"]));
    let counts = |s: &str| -> Vec<String> {
        s.lines().skip(1).map(|l| l.split(',').take(7).collect::<Vec<_>>().join(",")).collect()
    };
    assert_eq!(counts(&from_file), counts(&from_gen));
}
