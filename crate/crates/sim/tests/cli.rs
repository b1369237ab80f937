use std::path::Path;
use std::process::{Command, Output};

use hybrid_relay_sim::table::HEADER;
use hybrid_relay_sim::ResultTable;

fn relaysim(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_relaysim"));
    cmd.args(args).env("RUST_LOG", "warn");
    match threads {
        Some(t) => cmd.env("SIM_THREADS", t),
        None => cmd.env_remove("SIM_THREADS"),
    };
    cmd.output().expect("binary runs")
}

const SMALL: &[&str] = &[
    "simulate", "--case", "2", "--eu-db", "13", "--pr-db", "13", "--n", "16,32", "--beta", "cont,2", "--modes",
    "hybrid,full,asym", "--trials", "40", "--k", "4", "--seed", "9",
];

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn simulate_writes_the_documented_schema() {
    let o = relaysim(SMALL, Some("2"));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), HEADER.join(","));
    // per N: two betas x (hybrid, asymptote), then one full-digital row
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 10);
    let keys: Vec<(&str, &str, &str)> = rows.iter().map(|r| (r[1], r[2], r[3])).collect();
    assert_eq!(
        &keys[..5],
        &[
            ("16", "cont", "hybrid"),
            ("16", "cont", "asymptote"),
            ("16", "2", "hybrid"),
            ("16", "2", "asymptote"),
            ("16", "na", "full_digital"),
        ]
    );
    for r in &rows {
        assert_eq!(r.len(), HEADER.len());
        assert_eq!(r[0], "case2");
    }
    let table = ResultTable::parse_csv(&text).unwrap();
    assert_eq!(table.to_csv_string().unwrap(), text);
}

#[test]
fn output_is_byte_identical_across_worker_counts() {
    let one = relaysim(SMALL, Some("1"));
    let many = relaysim(SMALL, Some("3"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn file_outputs_and_config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("rates.csv");
    let dat = dir.path().join("rates.dat");
    std::fs::write(
        &cfg,
        r#"{"case": "3", "pu_db": 10, "er_db": 10, "n": [16, 32], "beta": "cont", "modes": ["hybrid"], "trials": 5, "k": 3}"#,
    )
    .unwrap();
    let o = relaysim(
        &[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--trials",
            "7",
            "--out",
            out.to_str().unwrap(),
            "--dat",
            dat.to_str().unwrap(),
        ],
        Some("1"),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let table = ResultTable::read_csv(std::fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(table.rows.len(), 2);
    assert!(table.rows.iter().all(|r| r.case == "case3" && r.trials == 7));
    let dat_text = std::fs::read_to_string(&dat).unwrap();
    assert!(dat_text.starts_with("# case=case3 beta=cont mode=hybrid\n"));
    assert_eq!(dat_text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count(), 2);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["simulate", "--case", "2", "--eu-db", "13"][..],
        &["simulate", "--case", "7"][..],
        &["simulate", "--case", "1", "--eu-db", "1", "--er-db", "1", "--beta", "cont,zero"][..],
        &["simulate", "--no-such-flag"][..],
        &["verify-lemmas", "--n", "1000,100"][..],
    ] {
        let o = relaysim(args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn runtime_failures_exit_with_one() {
    let missing = Path::new("/nonexistent-dir/rates.csv");
    let o = relaysim(
        &[
            "simulate", "--case", "fixed", "--pu-db", "0", "--pr-db", "0", "--n", "8", "--trials", "3", "--k", "2",
            "--out", missing.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let bad_threads = relaysim(
        &["simulate", "--case", "fixed", "--pu-db", "0", "--pr-db", "0", "--n", "8", "--trials", "3", "--k", "2"],
        Some("zero"),
    );
    assert_ne!(bad_threads.status.code(), Some(0));
}

#[test]
fn verify_lemmas_reports_each_check() {
    let o = relaysim(&["verify-lemmas", "--n", "100,400,1600", "--seeds", "4", "--beta", "cont,2"], Some("2"));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().filter(|l| l.starts_with("PASS ")).count(), 8, "{err}");
    let csv = stdout(&o);
    assert!(csv.starts_with("metric,N,beta,seed,deviation,bound,passed\n"));
}
