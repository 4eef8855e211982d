use std::process::{Command, Output};

fn clausen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clausen")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn eval_log_two() {
    let o = clausen(&["eval", "--spec", r#"{"upper":["1","1"],"lower":["2"]}"#, "--at", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &lines(&o)[0];
    assert!(v["decimal"].as_str().unwrap().starts_with("1.38629436111989061883446424291635313615"));
}

#[test]
fn eval_negative_point() {
    // z 2F1(1,1;2;-z) at z = 1 is log 2
    let o = clausen(&["eval", "--spec", r#"{"upper":["1","1"],"lower":["2"]}"#, "--at", "-1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(lines(&o)[0]["decimal"].as_str().unwrap().starts_with("6.9314718055994530941723212145817656807550"));
}

#[test]
fn eval_double_series_at_origin() {
    let spec = r#"{"shape":"F2111","params":{"a":"1/2","b":"1/3","p1":"1/4","p2":"1/5","c":"2","q1":"3","q2":"4"}}"#;
    let o = clausen(&["eval", "--spec", spec, "--at", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o)[0]["decimal"], "1");
}

#[test]
fn eval_dihedral_polynomial_is_one() {
    let o = clausen(&["eval", "--case", "dihedral-sum", "--param", "a=2/7", "--param", "m=0", "--param", "n=0", "--at", "3/10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o)[0]["rhs"], "1");
}

#[test]
fn eval_errors() {
    let o = clausen(&["eval", "--spec", r#"{"upper":["1/3","1/4"],"lower":["1/5"]}"#, "--at", "2"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let o = clausen(&["eval", "--spec", "not json", "--at", "1/2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = clausen(&["eval", "--case", "no-such-case", "--at", "1/2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn clausen_predicate_rejection() {
    let o = clausen(&["verify", "clausen", "--param", "a=-1/2", "--param", "b=-3/2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("terminates"), "{}", stderr(&o));
}

#[test]
fn operators_combination() {
    let o = clausen(&["verify", "operators", "--check", "combination"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(lines(&o).iter().all(|r| r["pass"] == true && r["kind"] == "operator"));
}

#[test]
fn catalog_listing() {
    let all = lines(&clausen(&["catalog"]));
    assert!(all.len() >= 18);
    let term = lines(&clausen(&["catalog", "--filter", "terminating"]));
    assert!(!term.is_empty() && term.iter().all(|c| c["mode"] == "exact"));
    assert_eq!(lines(&clausen(&["catalog", "--filter", "theorem2"])).len(), 3);
    let csv = stdout(&clausen(&["catalog", "--csv"]));
    assert!(csv.starts_with("id,mode,tags,params,anchor"));
    assert_eq!(csv.lines().count(), all.len() + 1);
}

#[test]
fn config_validation() {
    assert_eq!(clausen(&["--prec", "10", "catalog"]).status.code(), Some(2));
    assert_eq!(clausen(&["catalog", "--max-terms", "50"]).status.code(), Some(2));
    assert_eq!(clausen(&["verify", "operators", "--check", "bogus"]).status.code(), Some(1));
}

#[test]
fn reports_are_deterministic() {
    let strip = |o: Output| {
        lines(&o)
            .into_iter()
            .map(|mut v| {
                v["timing"] = serde_json::Value::Null;
                v.to_string()
            })
            .collect::<Vec<_>>()
    };
    let args = ["verify", "gen-clausen", "--samples", "2", "--points", "2", "--seed", "17", "--prec", "30"];
    let a = strip(clausen(&args));
    let b = strip(clausen(&[&args[..], &["--jobs", "1"]].concat()));
    assert_eq!(a.len(), 3);
    assert_eq!(a, b);
    let c = strip(clausen(&["verify", "gen-clausen", "--samples", "2", "--points", "2", "--seed", "18", "--prec", "30"]));
    assert_ne!(a, c);
}

#[test]
fn verify_all_passes() {
    let dir = std::env::temp_dir().join(format!("clausen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.jsonl");
    let o = clausen(&["verify", "all", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 failed, 0 errors"));
    let report = std::fs::read_to_string(&out).unwrap();
    let kinds: Vec<serde_json::Value> = report.lines().map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["kind"].clone()).collect();
    for k in ["identity", "operator", "theorem1"] {
        assert!(kinds.iter().any(|x| x == k), "{k}");
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn csv_summary() {
    let o = clausen(&["verify", "exclausen", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("kind,id,params,max_rel,pass,error,wall_ms"));
    assert!(s.lines().nth(1).unwrap().starts_with("identity,exclausen,"));
}
