use std::process::{Command, Output};

fn guesslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_guesslab"))
        .args(args)
        .env_remove("GUESSLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

#[test]
fn gen_frozen_rows() {
    let o = guesslab(&["gen", "--family", "frozen:11", "--depth", "8", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let cards: Vec<u64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(cards.len(), 9);
    assert_eq!(&cards[..2], &[0, 0]);
    for (n, &c) in cards.iter().enumerate().skip(2) {
        assert_eq!(c, 1 << (n - 2));
    }
}

#[test]
fn gen_tail_depth_zero() {
    let o = guesslab(&["gen", "--family", "tail", "--depth", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 1);
    assert_eq!(levels[0]["cardinality"], "0");
}

#[test]
fn unknown_family_is_a_usage_error() {
    let o = guesslab(&["gen", "--family", "nope", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_flags_exit_two_without_panic() {
    for args in [&["--bogus"][..], &["walk", "--dim", "x"], &["exact"], &["tree", "build", "--stages", "-1"]] {
        let o = guesslab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!String::from_utf8_lossy(&o.stderr).contains("panicked"));
    }
}

#[test]
fn help_for_every_subcommand() {
    for args in [
        &["--help"][..],
        &["gen", "--help"],
        &["exact", "--help"],
        &["exact", "avoiders", "--help"],
        &["exact", "sums", "--help"],
        &["exact", "stirling", "--help"],
        &["mc", "--help"],
        &["mc", "hits", "--help"],
        &["mc", "random-families", "--help"],
        &["walk", "--help"],
        &["tree", "--help"],
        &["tree", "build", "--help"],
        &["tree", "witness", "--help"],
    ] {
        let o = guesslab(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert!(stdout(&o).contains("Usage"));
    }
}

#[test]
fn exact_avoiders_are_fibonacci() {
    let o = guesslab(&["exact", "avoiders", "--family", "frozen:11", "--depth", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let counts: Vec<u64> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(&counts[..6], &[1, 2, 3, 5, 8, 13]);
    assert!(counts.windows(3).all(|w| w[2] == w[1] + w[0]));
}

#[test]
fn exact_sums_geometric() {
    let o = guesslab(&["exact", "sums", "--pi", "const:1", "--depth", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["rows"][10]["partial_sum"], "2047/1024");
}

#[test]
fn exact_stirling_ratio() {
    let o = guesslab(&["exact", "stirling", "--n", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let ratio: f64 = json(&o)["ratio"].as_str().unwrap().parse().unwrap();
    assert!((ratio - 1.0).abs() <= 0.003);
    assert_eq!(guesslab(&["exact", "stirling", "--n", "7"]).status.code(), Some(2));
}

#[test]
fn tree_witness_verdict() {
    let o = guesslab(&["tree", "witness", "--stages", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("witness verified: true"));
}

#[test]
fn tree_build_reports_checks() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tree.json");
    let o = guesslab(&["tree", "build", "--stages", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("tree verified: true"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["tree"]["m"], serde_json::json!([1, 2, 5, 6, 21]));
    assert_eq!(guesslab(&["tree", "build", "--stages", "9"]).status.code(), Some(3));
}

#[test]
fn walk_three_dimensions_is_transient_enough() {
    let o = guesslab(&["walk", "--dim", "3", "--steps", "10000", "--walks", "2000", "--seed", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["return_fraction"].as_f64().unwrap() <= 0.5);
}

#[test]
fn mc_hits_level_frequency() {
    let o = guesslab(&["mc", "hits", "--family", "cb1:rounded", "--depth", "10", "--samples", "100000", "--seed", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let f: f64 = json(&o)["level_frequency"][10].as_str().unwrap().parse().unwrap();
    let p = 63.0 / 256.0;
    let sigma = (p * (1.0 - p) / 100_000.0f64).sqrt();
    assert!((f - p).abs() <= 3.0 * sigma, "{f}");
}

#[test]
fn mc_random_families_runs() {
    let o = guesslab(&["mc", "random-families", "--pi", "const:1", "--depth", "10", "--families", "3", "--words", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["families"].as_array().unwrap().len(), 3);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let runs = [
        vec!["mc", "hits", "--family", "random:const:3:7", "--depth", "12", "--samples", "5000"],
        vec!["walk", "--dim", "2", "--steps", "300", "--walks", "500", "--return-times", "--format", "csv"],
        vec!["mc", "random-families", "--pi", "pow2minus:1", "--depth", "12", "--families", "4", "--words", "300"],
        vec!["gen", "--family", "cycling:cb1:rounded", "--depth", "20"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut texts = Vec::new();
        for j in 0..2 {
            let path = dir.path().join(format!("{i}-{j}"));
            let mut full = args.clone();
            full.extend(["--out", path.to_str().unwrap()]);
            assert_eq!(guesslab(&full).status.code(), Some(0), "{args:?}");
            texts.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(texts[0], texts[1], "{args:?}");
    }
}

#[test]
fn seed_comes_from_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_guesslab"));
        cmd.args(["walk", "--dim", "1", "--steps", "50", "--walks", "50", "--return-times", "--format", "csv"]);
        cmd.args(extra);
        match env {
            Some(v) => cmd.env("GUESSLAB_SEED", v),
            None => cmd.env_remove("GUESSLAB_SEED"),
        };
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(None, &[]), run(None, &["--seed", "0"]));
    assert_eq!(run(Some("9"), &[]), run(None, &["--seed", "9"]));
    assert_ne!(run(Some("9"), &[]), run(None, &[]));
    assert_eq!(run(Some("9"), &["--seed", "0"]), run(None, &[]));
}

#[test]
fn json_keys_are_sorted() {
    let o = guesslab(&["walk", "--dim", "1", "--steps", "10", "--walks", "5"]);
    let text = stdout(&o);
    let keys: Vec<&str> = text.lines().filter_map(|l| l.trim().strip_prefix('"')?.split('"').next()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}
