use std::path::PathBuf;
use std::process::{Command, Output};

use wreathmul::grouplib::{stpp_family, triples_to_json};

fn wreathmul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wreathmul")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exponents_for_the_running_example() {
    let o = wreathmul(&["exponents", "--m", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("16,12.0000,3.9069,2.8155,1.7917,2.7917,"), "{row}");
}

#[test]
fn exponents_flag_degenerate_moduli() {
    let o = wreathmul(&["exponents", "--m", "2,3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("2,degenerate"));
    assert!(text.lines().any(|l| l.starts_with("3,")));
}

#[test]
fn measure_emits_reproducible_csv() {
    let args = ["measure", "--alg", "strassen", "--sizes", "2:64", "--trials", "3", "--seed", "5", "--out", "csv"];
    let (a, b) = (wreathmul(&args), wreathmul(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().next(), Some("n,trial,measured,predicted,ratio"));
    assert_eq!(text.lines().count(), 1 + 6 * 3);
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(f[2] <= f[3] && f[4] <= 1.0);
    }
}

#[test]
fn measure_json_has_schema() {
    let o = wreathmul(&["measure", "--alg", "stp:3,2", "--sizes", "8", "--trials", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["reports"][0]["norm"], "frobenius");
}

#[test]
fn bound_prints_the_coefficient() {
    let o = wreathmul(&["bound", "--alg", "strassen", "--n", "2", "--eps", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("mu 9.6e1"), "{text}");
    assert!(text.contains("norm max_entry"));
}

#[test]
fn bench_reports_flops() {
    let o = wreathmul(&["bench", "--alg", "naive", "--sizes", "4", "--out", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().nth(1).unwrap().split(',').nth(1), Some("480"));
}

#[test]
fn verify_accepts_good_files_and_rejects_broken_ones() {
    let triples = std::env::temp_dir().join(format!("wreathmul-cli-triples-{}.json", std::process::id()));
    std::fs::write(&triples, triples_to_json(&stpp_family(2, 3).unwrap())).unwrap();
    let t = triples.display().to_string();

    let good = wreathmul(&["verify", "--quick", "--scheme", &data("strassen.json"), "--scheme", &data("naive3.json"), "--triples", &t]);
    assert_eq!(good.status.code(), Some(0), "{}", stdout(&good));
    assert!(!stdout(&good).contains("FAIL"));

    let bad = wreathmul(&["verify", "--quick", "--json", "--scheme", &data("strassen_broken.json")]);
    assert_eq!(bad.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["checks"][0]["passed"], false);
    std::fs::remove_file(triples).ok();
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["measure", "--alg", "winograd", "--sizes", "4"],
        vec!["measure", "--alg", "naive", "--sizes", "3:16"],
        vec!["measure", "--alg", "stp:3,2", "--sizes", "9"],
        vec!["bound", "--alg", "naive"],
        vec!["frobnicate"],
    ] {
        let o = wreathmul(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}
