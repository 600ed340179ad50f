use std::path::Path;
use std::process::{Command, Output};

use nrw::cli::config::Settings;
use nrw::cli::{run_cli, sweep, time_series, RunConfig, Scenario};

fn nrw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nrw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

fn numbers(csv: &str, name: &str) -> Vec<f64> {
    column(csv, name).iter().map(|x| x.parse().unwrap()).collect()
}

#[test]
fn run_writes_header_and_one_row_per_point() {
    let o = nrw(&["run", "--points", "7", "--tmax", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,log_negativity,lambda_t_min,coherence_variance,damping_regime"
    );
    assert_eq!(lines.count(), 7);
    assert_eq!(numbers(&text, "t").last().copied(), Some(2.0));
}

#[test]
fn numbers_have_seventeen_significant_digits() {
    let text = stdout(&nrw(&["run", "--points", "3"]));
    for cell in column(&text, "coherence_variance") {
        let mantissa = cell.split('e').next().unwrap().replace(['-', '.'], "");
        assert_eq!(mantissa.len(), 17, "{cell}");
    }
}

#[test]
fn single_scenarios_report_entropy() {
    let o = nrw(&["run", "--scenario", "single-free", "--points", "4"]);
    let text = stdout(&o);
    assert!(text.starts_with("t,entropy,coherence_variance,damping_regime\n"));
    assert!(column(&text, "damping_regime").iter().all(|r| r == "free"));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let args = [
            "run",
            "--scenario",
            "bipartite-harmonic",
            "--omega0",
            "2",
            "--points",
            "50",
            "--out",
        ];
        let mut all: Vec<&str> = args.to_vec();
        all.push(p.to_str().unwrap());
        assert!(nrw(&all).status.success());
        std::fs::read(p).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn separable_point_has_zero_negativity() {
    let text = stdout(&nrw(&["run", "--s", "4", "--d", "2", "--points", "20", "--tmax", "3"]));
    assert!(numbers(&text, "log_negativity").iter().all(|&x| x == 0.0));
}

#[test]
fn config_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["run", "--points", "1"],
        &[
            "run",
            "--scenario",
            "bipartite-harmonic",
            "--omega0",
            "1",
            "--gamma2",
            "2",
        ],
        &["run", "--scenario", "bipartite-harmonic"],
        &["run", "--scenario", "bipartite-free", "--omega0", "1"],
        &["run", "--s", "-1"],
        &["run", "--bogus", "1"],
        &["sweep", "--vary", "points", "--values", "2,3"],
        &["sweep", "--vary", "s"],
        &["esd", "--scenario", "single-free"],
        &["validate", "--tol", "0"],
        &["validate", "--corrupt", "nothing"],
    ];
    for args in cases {
        let o = nrw(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# pair in a shared bath\nscenario = bipartite-harmonic\nomega0 = 2\npoints = 5\ntmax = 3\n",
    )
    .unwrap();
    let o = nrw(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(numbers(&text, "t").len(), 5);
    assert!(column(&text, "damping_regime").iter().all(|r| r == "under-damped"));
    let o = nrw(&["run", "--config", cfg.to_str().unwrap(), "--points", "3"]);
    assert_eq!(numbers(&stdout(&o), "t"), vec![0.0, 1.5, 3.0]);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "gama1 = 2\n").unwrap();
    let o = nrw(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gama1"));
    assert!(Settings::parse_file_contents("s = 1\ns = 2\n").is_err());
    assert!(Settings::parse_file_contents("just words\n").is_err());
}

#[test]
fn every_flag_has_a_config_key() {
    let all = "scenario = single-harmonic\ns = 1.5\nd = 2\ngamma1 = 0.5\ngamma2 = 0.5\ntemp1 = 3\n\
               temp2 = 3\nmass = 2\nhbar = 1\nkb = 1\nomega0 = 0.4\ntmax = 2\npoints = 9\n\
               convention = paper\nout = x.csv\nvary = s\nvalues = 1, 2\ntol = 1e-5\n";
    let s = Settings::parse_file_contents(all).unwrap();
    let cfg = s.resolve().unwrap();
    assert_eq!(cfg.scenario, Scenario::SingleHarmonic);
    assert_eq!((cfg.mass, cfg.n_points, cfg.omega0), (2.0, 9, 0.4));
    assert_eq!(s.values, Some(vec![1.0, 2.0]));
}

#[test]
fn sweep_is_long_format_and_single_value_matches_run() {
    let text = stdout(&nrw(&["sweep", "--vary", "s", "--values", "0.25,1", "--points", "4"]));
    assert!(text.starts_with("series,s,t,log_negativity,"));
    let series = column(&text, "series");
    assert_eq!(
        series,
        vec!["s=0.25"; 4].into_iter().chain(vec!["s=1"; 4]).collect::<Vec<_>>()
    );

    let one = stdout(&nrw(&["sweep", "--vary", "s", "--values", "1", "--points", "6"]));
    let run = stdout(&nrw(&["run", "--s", "1", "--points", "6"]));
    let strip: Vec<String> = one
        .lines()
        .map(|l| l.splitn(3, ',').nth(2).unwrap().to_string())
        .collect();
    assert_eq!(strip.join("\n") + "\n", run);
}

#[test]
fn sweep_respects_thread_cap_without_changing_output() {
    let args = [
        "sweep",
        "--vary",
        "omega0",
        "--values",
        "0.2,0.5,0.7,0.9",
        "--scenario",
        "bipartite-harmonic",
        "--points",
        "30",
    ];
    let capped = Command::new(env!("CARGO_BIN_EXE_nrw"))
        .args(args)
        .env("NRW_NUM_THREADS", "1")
        .output()
        .unwrap();
    let free = nrw(&args);
    assert!(capped.status.success());
    assert_eq!(capped.stdout, free.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_nrw"))
        .args(args)
        .env("NRW_NUM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn esd_reports_death_and_separable_states() {
    let text = stdout(&nrw(&["esd", "--vary", "s", "--values", "0.25,1,4", "--tmax", "5"]));
    assert_eq!(
        column(&text, "status"),
        vec!["sudden-death", "sudden-death", "separable"]
    );
    let t = column(&text, "t_esd");
    let (a, b): (f64, f64) = (t[0].parse().unwrap(), t[1].parse().unwrap());
    assert!(a > b);
    let single = stdout(&nrw(&["esd", "--tmax", "5"]));
    assert_eq!(column(&single, "t_esd")[0], t[1]);
}

#[test]
fn validate_passes_at_default_tolerance() {
    let o = nrw(&["validate"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(
        column(&text, "check"),
        vec!["characteristics", "covariance", "noise-integrals", "nystrom"]
    );
    assert!(column(&text, "status").iter().all(|s| s == "pass"));
    for scenario in ["single-free", "bipartite-free"] {
        assert!(
            nrw(&["validate", "--scenario", scenario]).status.success(),
            "{scenario}"
        );
    }
    let o = nrw(&["validate", "--scenario", "single-harmonic", "--omega0", "0.7"]);
    assert!(o.status.success());
    let o = nrw(&[
        "validate",
        "--scenario",
        "bipartite-harmonic",
        "--omega0",
        "1",
        "--gamma1",
        "3",
        "--tmax",
        "2",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn validate_fails_at_impossible_tolerance() {
    let o = nrw(&["validate", "--tol", "1e-15"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(column(&stdout(&o), "status").iter().any(|s| s == "fail"));
}

#[test]
fn corrupted_term_is_identified() {
    for term in ["g23", "chi2", "f14", "eig3"] {
        let o = nrw(&["validate", "--corrupt", term]);
        assert_eq!(o.status.code(), Some(1), "{term}");
        let text = stdout(&o);
        let failed: Vec<String> = text
            .lines()
            .skip(1)
            .filter(|l| l.ends_with(",fail"))
            .map(|l| l.split(',').nth(1).unwrap().to_string())
            .collect();
        assert_eq!(failed, vec![term.to_string()]);
    }
}

#[test]
fn entropy_initial_reports_the_pure_state_entropy() {
    let text = stdout(&nrw(&["entropy-initial", "--s", "4", "--d", "2"]));
    assert_eq!(numbers(&text, "entropy"), vec![0.0]);
    let text = stdout(&nrw(&["entropy-initial"]));
    assert!(numbers(&text, "entropy")[0] > 0.0);
}

#[test]
fn library_entry_points_match_the_binary() {
    assert_eq!(run_cli(["nrw", "run", "--points", "1"]), 2);
    let cfg = RunConfig {
        n_points: 3,
        ..RunConfig::default()
    };
    let csv = time_series(&cfg).unwrap().to_csv_string();
    assert_eq!(csv, stdout(&nrw(&["run", "--points", "3"])));
    let base = Settings {
        points: Some(3),
        ..Settings::default()
    };
    let table = sweep(&base, "d", &[2.0, 3.0], Some(2)).unwrap();
    assert_eq!(table.rows.len(), 6);
    assert!(!Path::new("x.csv").exists());
}
