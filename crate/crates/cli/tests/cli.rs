use besselext::corpus::{golden_cases, ProblemConfig};
use serde_json::Value;
use std::process::{Command, Output};

fn besselext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_besselext")).args(args).env_remove("BESSELEXT_TOL").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(v, |v, key| match key.parse::<usize>() {
        Ok(i) if v.is_array() => v.get(i),
        _ => v.get(key),
    })
}

#[test]
fn golden_cases_run_through_the_binary() {
    for case in golden_cases() {
        let c = &case.config;
        let mut args: Vec<String> = vec![case.command.clone()];
        for (k, v) in [("a", c.a), ("b", c.b), ("sa", c.sa), ("sb", c.sb)] {
            args.extend([format!("--{k}"), format!("{v:?}")]);
        }
        args.extend(["--q".into(), c.q.clone()]);
        if let Some(t) = c.rel_tol {
            args.extend(["--tol".into(), format!("{t:?}")]);
        }
        for (k, v) in &case.options {
            args.extend([format!("--{k}"), v.clone()]);
        }
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let report = json(&besselext(&argv));
        assert_eq!(report["schema"], 1);
        for e in &case.expected {
            let got = lookup(&report, &e.path).and_then(Value::as_f64);
            let got = got.unwrap_or_else(|| panic!("{}: no number at {}", case.name, e.path));
            let err = if e.value == 0.0 { got.abs() } else { (got - e.value).abs() / e.value.abs() };
            assert!(err <= e.tol, "{}: {} = {got}, expected {} ({}) within {}", case.name, e.path, e.value, e.source, e.tol);
        }
    }
}

#[test]
fn classify_examples() {
    let r = json(&besselext(&["classify", "--a", "0", "--b", "1", "--sa", "0", "--sb", "0.5"]));
    assert_eq!((r["at_a"].as_str(), r["at_b"].as_str(), r["n"].as_u64()), (Some("LC"), Some("LC"), Some(2)));
    let r = json(&besselext(&["classify", "--sa", "1", "--sb", "2"]));
    assert_eq!((r["at_a"].as_str(), r["at_b"].as_str(), r["n"].as_u64()), (Some("LP"), Some("LP"), Some(0)));
}

#[test]
fn exit_codes() {
    let bad_q = besselext(&["classify", "--q", "poly:1,x"]);
    assert_eq!(bad_q.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_q.stderr).contains("poly:1,x"));
    assert_eq!(besselext(&["classify", "--sa", "-1"]).status.code(), Some(2));
    assert_eq!(besselext(&["spectrum", "--ext", "separated:0.3"]).status.code(), Some(2));
    assert_eq!(besselext(&["spectrum", "--ext", "coupled:0,1,1,1,1"]).status.code(), Some(2));
    assert_eq!(besselext(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(besselext(&[]).status.code(), Some(2));
    let krein = besselext(&["krein", "--q", "const:-30"]);
    assert_eq!(krein.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&krein.stderr).contains("strictly positive"));
    assert_eq!(besselext(&["spectrum", "--ext", "krein", "--q", "const:-30"]).status.code(), Some(3));
    assert_eq!(besselext(&["hardy", "--trial", "halfpower:0.3"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["spectrum", "--sa", "0.25", "--sb", "0.5", "--q", "poly:1,-2", "--ext", "krein", "--lmax", "200"];
    let one = besselext(&[&args[..], &["--jobs", "1"]].concat());
    let four = besselext(&[&args[..], &["--jobs", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, besselext(&args).stdout);
}

#[test]
fn csv_table() {
    let out = besselext(&["spectrum", "--lmax", "100", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,multiplicity,residual"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    for (n, row) in rows.iter().enumerate() {
        let lambda: f64 = row[0].parse().unwrap();
        let want = ((n + 1) as f64 * std::f64::consts::PI).powi(2);
        assert!((lambda - want).abs() < 1e-8 * want && row[1] == "1");
    }
}

#[test]
fn dumped_config_round_trips() {
    let dir = std::env::temp_dir().join(format!("besselext-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("problem.conf");
    std::fs::write(&file, "# a test problem\nb = 2.5\nsa = 0.1\nq = poly:1,0.3\n").unwrap();
    let path = file.to_str().unwrap();
    let out = besselext(&["--config", path, "--sb", "0.7", "--a", "-0.5", "--dump-config"]);
    assert!(out.status.success());
    let dumped = String::from_utf8(out.stdout).unwrap();
    let c = ProblemConfig::parse(&dumped).unwrap();
    assert_eq!((c.a, c.b, c.sa, c.sb, c.q.as_str()), (-0.5, 2.5, 0.1, 0.7, "poly:1,0.3"));
    std::fs::write(&file, &dumped).unwrap();
    let again = besselext(&["--config", path, "--dump-config"]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), dumped);
    let from_file = besselext(&["--config", path, "classify"]);
    let from_flags = besselext(&["classify", "--a", "-0.5", "--b", "2.5", "--sa", "0.1", "--sb", "0.7", "--q", "poly:1,0.3"]);
    assert_eq!(from_file.stdout, from_flags.stdout);
    std::fs::write(&file, "sa = 0.1\nsb = x\n").unwrap();
    let bad = besselext(&["--config", path, "classify"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 2"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn tolerance_from_the_environment() {
    let run = |tol: &str| Command::new(env!("CARGO_BIN_EXE_besselext")).args(["classify"]).env("BESSELEXT_TOL", tol).output().unwrap();
    assert!(run("1e-9").status.success());
    assert_eq!(run("tight").status.code(), Some(2));
    assert_eq!(run("-1").status.code(), Some(2));
}

#[test]
fn trial_from_a_file() {
    let file = std::env::temp_dir().join(format!("besselext-trial-{}", std::process::id()));
    std::fs::write(&file, "# x(1 − x)\npoly:1\n").unwrap();
    let r = json(&besselext(&["hardy", "--trial", file.to_str().unwrap()]));
    assert!((r["lhs"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    std::fs::remove_file(&file).ok();
}

#[test]
fn muckenhoupt_reports() {
    let r = json(&besselext(&["muckenhoupt", "--kind", "A", "--u", "pow:-2", "--v", "pow:1"]));
    assert_eq!(r["value"], "infinite");
    assert!(r["bracket"].is_null());
    let r = json(&besselext(&["muckenhoupt", "--kind", "A", "--u", "const:1", "--v", "const:1", "--p", "3"]));
    let (v, hi) = (r["value"].as_f64().unwrap(), r["bracket"][1].as_f64().unwrap());
    // ((1 − c) c²)^{1/3} peaks at c = 2/3
    let want = (4.0f64 / 27.0).cbrt();
    assert!((v - want).abs() < 1e-6, "{v}");
    assert!((hi - 3f64.cbrt() * 1.5f64.powf(2.0 / 3.0) * v).abs() < 1e-9);
    assert_eq!(besselext(&["muckenhoupt", "--kind", "C", "--u", "const:1", "--v", "const:1"]).status.code(), Some(2));
    assert_eq!(besselext(&["muckenhoupt", "--kind", "A", "--u", "exp:1", "--v", "const:1"]).status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for suite in ["specialfn", "krein"] {
        let r = json(&besselext(&["verify", "--suite", suite]));
        assert_eq!(r["failed"], 0, "{suite}");
        assert!(r["total"].as_u64().unwrap() > 10);
    }
}
