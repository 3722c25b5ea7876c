use std::process::{Command, Output};

fn gg1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gg1"))
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../../models"))
        .args(args)
        .output()
        .expect("run gg1")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn md1_table_passes() {
    let o = gg1(&["reproduce", "md1-tails"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 12);
    assert!(r.iter().all(|row| row.last().unwrap() == "true"));
}

#[test]
fn ud1_tail_at_one() {
    let o = gg1(&["tail", "--model", "ud1.model", "--t", "1.0", "--terms", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let p: f64 = rows(&stdout(&o))[0][1].parse().unwrap();
    assert!((p - 0.018440).abs() < 5e-7, "{p}");
}

#[test]
fn uu1_roots_listing() {
    let o = gg1(&["roots", "--model", "uu1.model", "--count", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for needle in ["-1.112636162916,0.000000000000", "-3.214439899720,10.723473915095", "-3.214439950779,10.723473898301"] {
        assert!(out.contains(needle), "{needle}");
    }
    assert_eq!(rows(&out).len(), 10);
}

#[test]
fn json_output() {
    let o = gg1(&["--format", "json", "idle", "--model", "ud1.model", "--terms", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.to_string().contains("p_wait"));
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        &["tail", "--model", "missing.model", "--t", "1"][..],
        &["frobnicate"],
        &["reproduce", "no-such-table"],
        &["gated", "--lambda", "5", "--mu", "4"],
        &["oracle", "takacs", "--lambda", "1.5", "--t", "1"],
    ] {
        assert_eq!(gg1(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn tolerance_failure_exits_with_one() {
    // the printed first moment is the closed form; the thousand-term sum is 3e-5 away
    let o = gg1(&["reproduce", "e2d1-moments"]);
    assert_eq!(o.status.code(), Some(1));
    let failing: Vec<_> = rows(&stdout(&o)).into_iter().filter(|r| r.last().unwrap() == "false").collect();
    assert_eq!(failing.len(), 1);
    assert!(failing[0][0].starts_with("m1"));
}

#[test]
fn output_is_deterministic() {
    let args = ["oracle", "simulate", "--model", "uu1.model", "--customers", "200000", "--seed", "7", "--t", "0.5,1"];
    let (a, b) = (gg1(&args), gg1(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("seed 7"));
    let r = ["roots", "--model", "ud1.model", "--count", "20"];
    assert_eq!(gg1(&r).stdout, gg1(&r).stdout);
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("gg1-cli-test-{}.csv", std::process::id()));
    let o = gg1(&["--out", path.to_str().unwrap(), "oracle", "takacs", "--lambda", "0.3333333333333333", "--t", "0.5,2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.contains("0.212426391") && text.contains("0.011646734"), "{text}");
}

#[test]
fn reproduce_all_covers_every_table() {
    let o = gg1(&["reproduce", "all"]);
    let out = stdout(&o);
    for id in ["gated-tail", "gated-mean", "gated-timing", "e2d1-moments", "md1-tails", "ud1", "uu1", "mixture-roots"] {
        assert!(out.contains(&format!("# table {id}\n")), "{id}");
    }
    assert!(out.contains("skipped"));
    // only the E2/D/1 first moment misses
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(out.matches(",false").count(), 1);
}
