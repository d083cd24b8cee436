use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubefill")).args(args).env_remove("CUBEFILL_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn plane_depth_one_golden_csv() {
    let o = run(&["curve", "order", "--n", "2", "--depth", "1", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "rank,digits,c0,c1,side\n0,1,0,0,1/2\n1,2,0,1/2,1/2\n2,4,1/2,1/2,1/2\n3,3,1/2,0,1/2\n"
    );
}

#[test]
fn n1_rows_left_to_right() {
    let o = run(&["curve", "order", "--n", "1", "--depth", "3"]);
    let text = stdout(&o);
    let corners: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(corners, vec!["0", "1/8", "1/4", "3/8", "1/2", "5/8", "3/4", "7/8"]);
}

#[test]
fn n3_json_order_is_face_adjacent() {
    let o = run(&["curve", "order", "--n", "3", "--depth", "2", "--format", "json"]);
    let v = json(&o);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 64);
    let corner = |r: &serde_json::Value| -> Vec<i64> {
        r["corner"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| {
                let q: cubefill::Rational = c.as_str().unwrap().parse().unwrap();
                i64::try_from(q.mul_int(4).floor()).unwrap()
            })
            .collect()
    };
    for w in rows.windows(2) {
        let (a, b) = (corner(&w[0]), corner(&w[1]));
        let dist: i64 = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum();
        assert_eq!(dist, 1);
    }
}

#[test]
fn encode_decode_examples() {
    assert_eq!(stdout(&run(&["curve", "encode", "--n", "2", "--depth", "1", "0.1,0.9"])), "1\n");
    let d = stdout(&run(&["curve", "decode", "--n", "2", "--depth", "1", "3"]));
    assert!(d.contains("corner 1/2,0"), "{d}");
    for r in 0..64u32 {
        let v = json(&run(&["curve", "decode", "--n", "3", "--depth", "2", &r.to_string(), "--format", "json"]));
        let centre: Vec<String> = v["corner"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| {
                let q: cubefill::Rational = c.as_str().unwrap().parse().unwrap();
                (&q + &"1/8".parse::<cubefill::Rational>().unwrap()).to_string()
            })
            .collect();
        assert_eq!(stdout(&run(&["curve", "encode", "--n", "3", "--depth", "2", &centre.join(",")])), format!("{r}\n"));
    }
}

#[test]
fn bad_inputs_are_usage_errors() {
    for args in [
        &["curve", "encode", "--n", "2", "--depth", "1", "0.5,abc"][..],
        &["curve", "encode", "--n", "2", "--depth", "1", "0.5"],
        &["curve", "encode", "--n", "2", "--depth", "1", "1.5,0"],
        &["curve", "decode", "--n", "2", "--depth", "1", "4"],
        &["curve", "order", "--n", "2"],
        &["whitney", "verify", "--m", "2", "--n", "2", "--depth", "1"],
        &["whitney", "build", "--m", "1", "--n", "2", "--depth", "1"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn budget_flag_and_env() {
    let o = run(&["curve", "order", "--n", "3", "--depth", "4", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    let o = Command::new(env!("CARGO_BIN_EXE_cubefill"))
        .args(["curve", "order", "--n", "2", "--depth", "3"])
        .env("CUBEFILL_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn curve_verify_passes_and_detects_faults() {
    for (n, s) in [("2", "6"), ("5", "2")] {
        let o = run(&["curve", "verify", "--n", n, "--depth", s]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let v = json(&o);
        assert_eq!(v["command"], "curve verify");
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
        assert!(v["artifacts"].as_array().unwrap().is_empty());
    }
    let o = run(&["curve", "verify", "--n", "3", "--depth", "2", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let adj = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "adjacency").unwrap();
    assert_eq!(adj["status"], "fail");
    assert!(adj["detail"].as_str().unwrap().contains("ranks"));
}

#[test]
fn whitney_verify_examples() {
    for (m, n, d) in [("2", "1", "3"), ("3", "2", "1")] {
        let o = run(&["whitney", "verify", "--m", m, "--n", n, "--depth", d]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let names: Vec<String> =
            json(&o)["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect();
        for want in ["surjectivity", "connectivity", "segment_constancy", "majorant_series", "vanish_probe"] {
            assert!(names.iter().any(|n| n == want), "{want}");
        }
    }
}

#[test]
fn whitney_build_outputs() {
    let o = run(&["whitney", "build", "--m", "2", "--n", "1", "--depth", "1"]);
    assert!(o.status.success());
    let v = json(&o);
    let segs = v["segments"].as_array().unwrap();
    assert_eq!(segs.len(), 3);
    assert_eq!(segs[0]["x_prime"], serde_json::json!(["0", "3/8"]));
    assert_eq!(segs[0]["x_double_prime"], serde_json::json!(["0", "5/8"]));
    assert_eq!(segs[0]["value"], serde_json::json!(["1/4"]));
    let svg = stdout(&run(&["whitney", "build", "--m", "2", "--n", "1", "--depth", "2", "--format", "svg"]));
    assert!(svg.starts_with("<svg") && svg.contains("<line") && svg.contains("<rect"));
    let o = run(&["whitney", "build", "--m", "3", "--n", "1", "--depth", "1", "--format", "svg"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn probe_report_records_precision() {
    let o = run(&["whitney", "probe", "--m", "2", "--n", "1", "--depth", "2", "--samples", "6", "--precision", "160"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["precision"], 160);
    let samples = v["report"]["samples"].as_array().unwrap();
    assert!(!samples.is_empty());
    assert!(samples.iter().all(|s| s["ratio"].as_f64().unwrap() >= 0.0));
}

#[test]
fn outputs_are_deterministic_and_written_to_files() {
    let dir = std::env::temp_dir().join(format!("cubefill-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let runs = [
        vec!["curve", "order", "--n", "2", "--depth", "3", "--format", "svg"],
        vec!["whitney", "build", "--m", "3", "--n", "2", "--depth", "1"],
        vec!["whitney", "probe", "--m", "2", "--n", "1", "--depth", "2", "--samples", "4", "--seed", "9"],
    ];
    for (i, args) in runs.iter().enumerate() {
        // the path is part of the recorded config, so reuse it
        let path = dir.join(format!("out{i}"));
        let mut bytes = Vec::new();
        for _ in 0..2 {
            let mut full: Vec<&str> = args.clone();
            full.extend(["--out", path.to_str().unwrap()]);
            let o = run(&full);
            assert!(o.status.success());
            assert!(o.stdout.is_empty());
            bytes.push(std::fs::read(&path).unwrap());
        }
        assert!(bytes[0] == bytes[1], "{args:?}");
    }
    let report = dir.join("report.json");
    let o = run(&["curve", "verify", "--n", "2", "--depth", "2", "--out", report.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(v["artifacts"][0], report.to_str().unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}
