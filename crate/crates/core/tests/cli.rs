use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbert-lines"))
        .args(args)
        .env_remove("HL_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn verify_reports() {
    let out = run(&["verify", "--n", "3", "--d", "5", "--m", "2", "--s", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["dim"], 0);
    assert_eq!(r["certified"], true);
    assert_eq!(r["prime"], 2147483647u64);
    assert_eq!(r["seeds"], serde_json::json!([1, 2, 3]));

    let out = run(&["verify", "--n", "3", "--d", "4", "--m", "4", "--s", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["dim"], 3);
    assert_eq!(r["defect"], 3);
    assert_eq!(r["case_tag"], "n3-defective");

    let out = run(&[
        "verify",
        "--n",
        "4",
        "--d",
        "5",
        "--m",
        "4",
        "--s",
        "15",
        "--points",
        "1",
        "--on-line",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["dim"], 0);
}

#[test]
fn same_seed_same_bytes() {
    let args = [
        "verify", "--n", "4", "--d", "3", "--m", "2", "--s", "5", "--seed", "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "verify", "--n", "4", "--d", "3", "--m", "2", "--s", "5", "--seed", "43",
    ]);
    assert_ne!(a.stdout, c.stdout);

    let scan = ["scan", "--n", "3", "--dmax", "4"];
    assert_eq!(run(&scan).stdout, run(&scan).stdout);
}

#[test]
fn seed_from_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_hilbert-lines"))
        .args(["verify", "--n", "3", "--d", "2", "--s", "1"])
        .env("HL_SEED", "9")
        .output()
        .unwrap();
    let with_flag = run(&["verify", "--n", "3", "--d", "2", "--s", "1", "--seed", "9"]);
    assert_eq!(with_env.stdout, with_flag.stdout);
    assert_eq!(json(&with_env)["seeds"][0], 9);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["verify", "--n", "3"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run(&["verify", "--n", "3", "--d", "2", "--s", "1", "--prime", "15"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["verify", "--n", "3", "--d", "9", "--s", "1", "--prime", "7"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["scan", "--dmax", "6", "--budget", "100"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn scan_findings_and_label() {
    let out = run(&["scan", "--n", "3", "--dmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["note"].as_str().unwrap().contains("not a proof"));
    let found: Vec<(u64, u64, u64)> = r["findings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| {
            (
                f["d"].as_u64().unwrap(),
                f["m"].as_u64().unwrap(),
                f["s"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(found, vec![(2, 2, 2), (3, 3, 2), (3, 3, 3)]);

    let csv = run(&["scan", "--n", "3", "--dmax", "1", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 2, "{text}");
}

#[test]
fn appendix_rows() {
    let out = run(&["appendix", "--n", "4", "--dmax", "9"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("d,m,e,e_prime,r_prime,slack\n"));
    for row in [
        "6,5,20,9,2,7",
        "8,7,31,14,2,13",
        "9,6,58,40,0,18",
        "5,4,15,6,4,1",
    ] {
        assert!(text.lines().any(|l| l == row), "missing {row}");
    }
    let out = run(&["appendix", "--dmax", "3", "--format", "json"]);
    let rows = json(&out);
    assert_eq!(rows.as_array().unwrap().len(), 3);
    assert_eq!(rows[2]["r_prime"], 2);
}

#[test]
fn replay_and_quadric() {
    let out = run(&[
        "replay", "--n", "4", "--d", "3", "--m", "2", "--trials", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(
        (r["params"]["e"].clone(), r["params"]["r"].clone()),
        (serde_json::json!(7), serde_json::json!(2))
    );
    let steps = r["steps"].as_array().unwrap();
    assert!(steps.iter().all(|s| s["pass"] == true));
    assert!(steps
        .iter()
        .all(|s| s.get("scheme").is_some() && s.get("expected").is_some()));

    let out = run(&[
        "replay", "--n", "3", "--d", "6", "--m", "2", "--trials", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["quadric", "--a", "1", "--b", "6", "--points", "14"]);
    assert_eq!(json(&out)["dim"], 0);
    let out = run(&["quadric", "--a", "2", "--b", "2", "--ruling0", "1"]);
    assert_eq!(json(&out)["dim"], 6);
}

#[test]
fn predict_output() {
    let out = run(&["predict", "--n", "3", "--d", "4", "--m", "4", "--s", "3"]);
    let r = json(&out);
    assert_eq!(r["dim"], 3);
    assert_eq!(r["defect"], 3);
    let out = run(&[
        "predict", "--n", "3", "--d", "4", "--m", "4", "--s", "3", "--format", "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("3,4,3,4,0,3,0,3,n3-defective"));
}

#[test]
fn writes_to_out_path() {
    let dir = std::env::temp_dir().join(format!("hl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let out = run(&["appendix", "--dmax", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "d,m,e,e_prime,r_prime,slack\n2,1,4,1,0,3\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn mismatch_exits_two_with_report() {
    // Over F_2 two "generic" lines in P^3 can meet, so the oracle exceeds
    // the prediction for this seed.
    let out = run(&[
        "verify", "--n", "3", "--d", "1", "--s", "2", "--prime", "2", "--trials", "1", "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["matches"], false);
    assert_eq!(r["replay"]["components"].as_array().unwrap().len(), 2);
}
