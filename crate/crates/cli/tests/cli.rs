use std::path::PathBuf;
use std::process::{Command, Output};

use hrgen_core::{is_cnf, Grammar, Hypergraph};

fn fixture(name: &str) -> &'static str {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.json"));
    Box::leak(p.to_str().unwrap().to_string().into_boxed_str())
}

fn hrgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hrgen")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn normalize_matches_golden_file() {
    let out = hrgen(&["normalize", "-g", fixture("fig6_lemma_demo")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let golden = include_str!("golden/fig6_lemma_demo.cnf.json");
    assert_eq!(stdout(&out), golden);
    assert!(is_cnf(&Grammar::from_json_str(golden).unwrap()).is_empty());
}

#[test]
fn normalize_reports_already_normal_form() {
    let f = fixture("fig4_cnf");
    let out = hrgen(&["normalize", "-g", f]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("already CNF"));
    let original = Grammar::from_json_str(&std::fs::read_to_string(f).unwrap()).unwrap();
    assert_eq!(Grammar::from_json_str(&stdout(&out)).unwrap(), original);
}

#[test]
fn normalize_trace_goes_to_stderr() {
    let out = hrgen(&["normalize", "-g", fixture("fig6_lemma_demo"), "--trace"]);
    assert!(stderr(&out).contains("outlined terminal `a`"));
}

#[test]
fn input_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    let out = hrgen(&["normalize", "-g", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("invalid grammar JSON"));

    let mut g: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(fixture("fig4_cnf")).unwrap()).unwrap();
    g["start"] = "1".into();
    std::fs::write(&bad, g.to_string()).unwrap();
    let out = hrgen(&["count", "-g", bad.to_str().unwrap(), "-n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not a valid grammar"));

    let out = hrgen(&["count", "-g", "/nonexistent/grammar.json", "-n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hrgen(&["sample", "-g", fixture("fig4_cnf"), "-n", "4", "--seed", "x"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hrgen(&["sample", "-g", fixture("fig4_cnf"), "-n", "4", "--start", "Q"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hrgen(&["enumerate", "-g", fixture("fig4_cnf"), "-n", "9", "--cap", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_reproduces_table_entries() {
    let out = hrgen(&["count", "-g", fixture("fig4_cnf"), "--size", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["m1"]["A"][9], "616");
    assert_eq!(v["m1"]["B"][7], "128");
    assert_eq!(v["m2"]["P2"][5], "12");
}

#[test]
fn forced_derivation_gives_identical_samples() {
    let out = hrgen(&["sample", "-g", fixture("fig4_cnf"), "--size", "2", "--count", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l == &lines[0]));
    let h: Hypergraph = serde_json::from_str(&lines[0]).unwrap();
    assert_eq!(h.size(), 2);
}

#[test]
fn empty_slice_exits_with_3() {
    let out = hrgen(&["sample", "-g", fixture("fig4_cnf"), "--size", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("size 3") && stderr(&out).contains("`A`"));
    let out = hrgen(&["sample", "-g", fixture("fig4_cnf"), "--size", "1", "--start", "B"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sampling_is_deterministic_and_round_trips() {
    let args = ["sample", "-g", fixture("fig3_unambiguous"), "-n", "12", "--count", "40", "--seed", "11"];
    let a = hrgen(&args);
    let b = hrgen(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 40);
    for line in text.lines() {
        let h: Hypergraph = serde_json::from_str(line).unwrap();
        assert_eq!(h.size(), 12);
        assert_eq!(serde_json::to_string(&h).unwrap(), line);
    }
    let other = hrgen(&["sample", "-g", fixture("fig3_unambiguous"), "-n", "12", "--count", "40", "--seed", "12"]);
    assert_ne!(other.stdout, a.stdout);
}

#[test]
fn default_seed_is_fixed() {
    let args = ["sample", "-g", fixture("fig4_cnf"), "-n", "10", "--count", "5"];
    assert_eq!(hrgen(&args).stdout, hrgen(&args).stdout);
    let random = hrgen(&["sample", "-g", fixture("fig4_cnf"), "-n", "10", "--seed", "random"]);
    assert_eq!(random.status.code(), Some(0));
    assert!(stderr(&random).starts_with("seed: "));
}

#[test]
fn table_cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("tables.json");
    let cache_arg = cache.to_str().unwrap();
    let base = ["sample", "-g", fixture("fig4_cnf"), "-n", "10", "--count", "5", "--seed", "3"];
    let plain = hrgen(&base);
    let first = hrgen(&[&base[..], &["--cache", cache_arg]].concat());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(v["n_max"], 9);
    assert_eq!(v["grammar_sha256"].as_str().unwrap().len(), 64);
    let second = hrgen(&[&base[..], &["--cache", cache_arg]].concat());
    assert_eq!(plain.stdout, first.stdout);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn samples_with_trees_and_dot_output() {
    let out = hrgen(&["sample", "-g", fixture("anbncn"), "-n", "13", "--count", "2", "--with-tree"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("normalizing"));
    for line in stdout(&out).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["tree"]["production"].is_string());
        assert!(v["choices"].as_array().unwrap().len() > 1);
    }
    let dot = hrgen(&["sample", "-g", fixture("anbncn"), "-n", "13", "--count", "2", "--format", "dot"]);
    let text = stdout(&dot);
    assert_eq!(text.matches("graph \"sample").count(), 2);
}

#[test]
fn render_reads_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("s.jsonl");
    let out = hrgen(&["sample", "-g", fixture("fig4_cnf"), "-n", "6", "--count", "3", "-o", samples.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let dot = hrgen(&["render", "-i", samples.to_str().unwrap()]);
    assert_eq!(dot.status.code(), Some(0));
    assert_eq!(stdout(&dot).matches("graph \"g").count(), 3);
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"nodes\": 3}\n").unwrap();
    assert_eq!(hrgen(&["render", "-i", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn enumerate_and_check_ambiguity() {
    let out = hrgen(&["enumerate", "-g", fixture("fig4_cnf"), "-n", "8"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["total_graphs"], 92);
    assert_eq!(v["total_trees"], 92);

    let out = hrgen(&["check-ambiguity", "-g", fixture("fig4_cnf"), "-n", "10"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "unambiguous");

    let out = hrgen(&["check-ambiguity", "-g", fixture("fig2_ambiguous"), "-n", "8"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "ambiguous");
    assert_ne!(v["first"], v["second"]);
}

#[test]
fn oracle_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hrgen"))
        .args(["enumerate", "-g", fixture("fig4_cnf"), "-n", "8"])
        .env("HRGEN_ORACLE_CAP", "6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cap 6"));
}

#[test]
fn bench_reports_each_size() {
    let out = hrgen(&["bench", "-g", fixture("node_chain"), "--sizes", "20,40", "--count", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("# tables to offset 40"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("20\t") && rows[1].starts_with("40\t"));
}
