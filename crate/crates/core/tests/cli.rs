use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;

use nested_qcf::config::{ElementEntry, ElementKind, ParamValue, ScenarioConfig};

const BIN: &str = env!("CARGO_BIN_EXE_nested-qcf");

const TABLE1_GOLDEN: &str = "\
N,element_prob,cheat_prob,bias
2,0.50,0.7500,0.2500
3,0.50,0.8750,0.3750
4,0.50,0.9375,0.4375
5,0.50,0.9688,0.4688
6,0.50,0.9844,0.4844
";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const IDEAL2: &str = r#"
p_e = 0.0
trials = 100000
seed = 7

[[elements]]
kind = "ideal"
repeat = 2
"#;

const JUSTICE2: &str = r#"
p_e = 0.5
trials = 100000
seed = 11

[[elements]]
kind = "custom"
repeat = 2
params = { p = 0.8, q = 0.8, p_star = 0.5 }
"#;

#[test]
fn table1_matches_golden() {
    let out = run(&["table1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), TABLE1_GOLDEN);
}

#[test]
fn simulate_reports_closed_form_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ideal2.toml", IDEAL2);
    let first = run(&["simulate", "--config", &cfg, "cheat_alice"]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let second = run(&["simulate", "--config", &cfg, "cheat_alice"]);
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_str(&stdout(&first)).unwrap();
    for key in ["scenario", "trials", "seed", "estimate", "std_error", "analytic", "sigma_distance"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["scenario"], "cheat_alice");
    assert_eq!(v["analytic"].as_f64().unwrap(), 0.75);
    assert_eq!(v["seed"].as_u64().unwrap(), 7);
    assert!(v["sigma_distance"].as_f64().unwrap() <= 5.0);

    let reseeded = run(&["simulate", "--config", &cfg, "--seed", "8", "--trials", "5000", "cheat_alice"]);
    let v: Value = serde_json::from_str(&stdout(&reseeded)).unwrap();
    assert_eq!(v["seed"].as_u64().unwrap(), 8);
    assert_eq!(v["trials"].as_u64().unwrap(), 5000);
}

#[test]
fn simulate_justice_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "j.toml", JUSTICE2);
    let out = run(&["simulate", "--config", &cfg, "honest_failure"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["analytic"].as_f64().unwrap(), 0.0625);
}

#[test]
fn simulate_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ideal2.toml", IDEAL2);
    assert_eq!(run(&["simulate", "--config", &cfg, "cheat_eve"]).status.code(), Some(2));
    let missing = dir.path().join("nope.toml");
    let out = run(&["simulate", "--config", missing.to_str().unwrap(), "cheat_alice"]);
    assert_eq!(out.status.code(), Some(2));
    let bad = write_config(dir.path(), "bad.toml", &format!("{IDEAL2}\nflavour = 1\n"));
    let out = run(&["simulate", "--config", &bad, "cheat_alice"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("flavour"));
}

#[test]
fn sweep_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("a.csv");
    let out = run(&["sweep", "--panel", "a", "--output", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out_path).unwrap();
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "p_e,N=1,N=2,N=3");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 51);
    assert_eq!(rows[0][1], 0.8);
    assert_eq!(rows[0][2], 0.96);
    for w in rows.windows(2) {
        assert!(w[0][0] < w[1][0]);
    }
    assert!(rows.iter().flatten().all(|v| (0.0..=1.0).contains(v)));
}

#[test]
fn sweep_uses_config_sections() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.toml",
        r#"
p_e = 0.1
trials = 10
seed = 1

[[elements]]
kind = "custom"
params = { p = 0.9, q = 0.6, p_star = 0.5 }

[sweep]
p_values = [0.85, 0.9]
depth = 3
p_e_grid = [0.5, 0.0, 0.25]
"#,
    );
    let out = run(&["sweep", "--config", &cfg, "--panel", "b"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p_e,p=0.85,p=0.9");
    assert!(lines[1].starts_with("0,"));
    assert!(lines[3].starts_with("0.5,"));
    // 0.9 + 0.1·0.9 + 0.01·0.9
    assert_eq!(lines[1].split(',').nth(2).unwrap(), "0.999");
}

#[test]
fn sweep_io_and_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let unwritable = dir.path().join("no_such_dir").join("out.csv");
    let out = run(&["sweep", "--output", unwritable.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let missing = dir.path().join("missing.toml");
    let out = run(&["sweep", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_fair_commands() {
    let out = run(&["solve-fair", "bbbg09", "--coefficient", "half"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["alpha_sq"].as_f64().unwrap() - 0.9).abs() <= 1e-9);
    assert!((v["beta_sq"].as_f64().unwrap() - 0.1).abs() <= 1e-9);
    assert!((v["framework_bias"].as_f64().unwrap() - 0.45).abs() <= 1e-9);
    assert_eq!(v["coefficient_used"], "half");

    let out = run(&["solve-fair", "bbbg09", "--coefficient", "quarter"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["alpha_sq"].as_f64().unwrap() - 0.841340).abs() <= 1e-5);

    let out = run(&["solve-fair", "chailloux"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["framework_bias"].as_f64().unwrap() - 0.4295).abs() <= 5e-4);

    assert_eq!(run(&["solve-fair", "chailloux", "--coefficient", "quarter"]).status.code(), Some(2));
    assert_eq!(run(&["solve-fair", "bbbg09", "--tolerance", "0.1"]).status.code(), Some(2));
}

fn element_entry() -> impl Strategy<Value = ElementEntry> {
    let ideal = (1usize..=3).prop_map(|repeat| ElementEntry {
        kind: ElementKind::Ideal,
        repeat,
        params: Default::default(),
    });
    let chailloux = Just(ElementEntry {
        kind: ElementKind::Chailloux,
        repeat: 1,
        params: Default::default(),
    });
    let bbbg09 = (0.75f64..0.99, prop::bool::ANY).prop_map(|(a, half)| ElementEntry {
        kind: ElementKind::Bbbg09,
        repeat: 1,
        params: [
            ("alpha_sq".to_owned(), ParamValue::Number(a)),
            (
                "coefficient".to_owned(),
                ParamValue::Text(if half { "half" } else { "quarter" }.to_owned()),
            ),
        ]
        .into_iter()
        .collect(),
    });
    let custom = (0.5f64..0.99, 0.5f64..0.99, 0.0f64..0.5).prop_map(|(p, q, ps)| ElementEntry {
        kind: ElementKind::Custom,
        repeat: 1,
        params: [
            ("p".to_owned(), ParamValue::Number(p)),
            ("q".to_owned(), ParamValue::Number(q)),
            ("p_star".to_owned(), ParamValue::Number(ps)),
        ]
        .into_iter()
        .collect(),
    });
    prop_oneof![ideal, chailloux, bbbg09, custom]
}

proptest! {
    #[test]
    fn config_round_trips(
        elements in prop::collection::vec(element_entry(), 1..=4),
        p_e in 0.0f64..=0.5,
        trials in 1u64..1_000_000,
        seed in 0u64..(i64::MAX as u64),
    ) {
        let cfg = ScenarioConfig { p_e, trials, seed, elements, sweep: None };
        let parsed = ScenarioConfig::parse(&cfg.to_toml()).unwrap();
        prop_assert_eq!(&parsed, &cfg);
        let again = ScenarioConfig::parse(&parsed.to_toml()).unwrap();
        prop_assert_eq!(again, parsed);
    }
}
