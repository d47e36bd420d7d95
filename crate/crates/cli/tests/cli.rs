use std::fs;
use std::path::PathBuf;

use jncsim::run_cli;

const HEADER: &str = "protocol,p,N,M,B,seed,trials,mean_retx,ci95,mean_tx_per_packet,slots_stage1,slots_stage2";

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("jncsim").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn table1() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/table1.txt").display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("jncsim-test-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn run_lossless_needs_no_retransmissions() {
    let (code, out, err) = cli(&["run", "--n", "5", "--m", "2", "--p", "0", "--b", "20", "--protocol", "jnc", "--trials", "20", "--seed", "7"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, [HEADER, "jnc,0,5,2,20,7,20,0,0,1,0,0"]);
    assert!(err.contains("mean retx 0"));
}

#[test]
fn run_writes_csv_file_and_summary() {
    let path = scratch("run.csv");
    let p = path.display().to_string();
    let (code, out, _) = cli(&["run", "--n", "3", "--m", "1", "--p", "0.2", "--b", "5", "--protocol", "arq", "--trials", "50", "--out", &p]);
    assert_eq!(code, 0);
    assert!(out.starts_with("arq "));
    let csv = fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().next(), Some(HEADER));
    assert!(csv.lines().nth(1).unwrap().starts_with("arq,0.2,3,1,5,1,50,"));
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(cli(&["run", "--n", "5", "--m", "6", "--p", "0.1", "--b", "20"]).0, 2);
    assert_eq!(cli(&["run", "--n", "5", "--m", "2", "--p", "1.5", "--b", "20"]).0, 2);
    assert_eq!(cli(&["run", "--n", "5", "--m", "2", "--p", "0.1", "--b", "20", "--protocol", "tcp"]).0, 2);
    assert_eq!(cli(&["run", "--n", "5"]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["sweep", "--preset", "fig9"]).0, 2);
    assert_eq!(cli(&["sweep"]).0, 2);
}

#[test]
fn exhausted_budget_exits_3() {
    let (code, _, err) = cli(&["run", "--n", "1", "--m", "1", "--p", "1", "--b", "1", "--protocol", "arq", "--trials", "1"]);
    assert_eq!(code, 3);
    assert!(err.contains("budget"));
}

#[test]
fn analytic_values() {
    let (code, out, _) = cli(&["analytic", "--n", "1", "--b", "20", "--p", "0.1"]);
    assert_eq!(code, 0);
    assert!(out.contains("): 22.2222\n"), "{out}");
    let (code, out, _) = cli(&["analytic", "--n", "1", "--b", "1", "--p", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("): 1\n"), "{out}");
    let (_, out, _) = cli(&["analytic", "--n", "5", "--b", "20", "--p", "0.1"]);
    assert!(out.contains("jnc         138"), "{out}");
    assert_eq!(cli(&["analytic", "--n", "1", "--b", "20", "--p", "1"]).0, 3);
    assert_eq!(cli(&["analytic", "--n", "0", "--b", "20", "--p", "0.1"]).0, 2);
}

#[test]
fn replay_table1() {
    let m = table1();
    let (code, out, _) = cli(&["replay", &m, "--protocol", "arq"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("total: 4 slots (4 AP transmissions) with arq\n"), "{out}");
    let (_, out, _) = cli(&["replay", &m, "--protocol", "dnc"]);
    assert!(out.contains("total: 2 slots"));
    let (_, out, _) = cli(&["replay", &m, "--protocol", "jnc"]);
    assert!(out.contains("AP1+AP2 send (c1⊕c2)⊙(c3⊕c4)"), "{out}");
    assert!(out.contains("total: 1 slots (2 AP transmissions)"));
}

#[test]
fn replay_lossless_and_malformed() {
    let clean = scratch("clean.txt");
    fs::write(&clean, "2 1 2\n1 0 0 0 0\n2 0 0 - -\n3 0 0 0 0\n4 - - 0 0\n").unwrap();
    let (code, out, _) = cli(&["replay", &clean.display().to_string()]);
    assert_eq!(code, 0);
    assert_eq!(out, "total: 0 slots (0 AP transmissions) with jnc\n");
    let bad = scratch("bad.txt");
    fs::write(&bad, "2 1 2\n1 0 0 0\n").unwrap();
    let (code, _, err) = cli(&["replay", &bad.display().to_string()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(cli(&["replay", "/nonexistent/matrix.txt"]).0, 2);
}

#[test]
fn sweep_csv_and_svg() {
    let svg = scratch("sweep.svg");
    let args = ["sweep", "--param", "p", "--values", "0.1,0.2", "--m-series", "1,2", "--n", "3", "--b", "6", "--trials", "30", "--seed", "4"];
    let mut with_svg = args.to_vec();
    let svg_arg = svg.display().to_string();
    with_svg.extend(["--svg", &svg_arg]);
    let (code, out, _) = cli(&with_svg);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 1 + 2 * 2 * 2);
    // same flags and seed, same bytes
    assert_eq!(cli(&args).1, out);

    let text = fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("valid XML");
    let polylines = doc.descendants().filter(|n| n.has_tag_name("polyline")).count();
    assert_eq!(polylines, 4, "dnc and jnc for M=1 and M=2");
}

#[test]
fn sweep_spec_file() {
    let spec = scratch("spec.json");
    fs::write(&spec, r#"{"param":"B","values":[2,4],"n":2,"m":1,"p":0.1,"b":1,"protocols":["jnc"],"trials":10}"#).unwrap();
    let (code, out, _) = cli(&["sweep", "--spec", &spec.display().to_string()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    let empty = scratch("empty.json");
    fs::write(&empty, r#"{"param":"p","values":[],"n":5,"m":2,"p":0.1,"b":20}"#).unwrap();
    assert_eq!(cli(&["sweep", "--spec", &empty.display().to_string()]).0, 2);
}
