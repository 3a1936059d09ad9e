use std::path::Path;

use clap::Parser;
use sprintlab::cli::{effective_config, run, Cli};

fn invoke(args: &[&str]) -> sprintlab::Result<i32> {
    let mut full = vec!["sprintlab"];
    full.extend_from_slice(args);
    run(&Cli::try_parse_from(full).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn pipeline_runs_and_repeats_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let corpus = d.join("corpus");
    assert_eq!(invoke(&["synth", "--n", "1", "--seed", "3", "--out", s(&corpus)]).unwrap(), 0);
    let scene = corpus.join("002_PEN");
    assert!(scene.join("tracking.csv").exists());

    for round in 0..2 {
        let out = d.join(format!("r{round}"));
        std::fs::create_dir_all(&out).unwrap();
        let roles = scene.join("roles.csv");
        assert_eq!(invoke(&["detect", "--tracking", s(&scene), "--out", s(&out.join("s.csv"))]).unwrap(), 0);
        assert_eq!(
            invoke(&["classify", "--tracking", s(&scene), "--roles", s(&roles), "--out", s(&out.join("c.csv"))]).unwrap(),
            0
        );
        assert_eq!(invoke(&["aggregate", "--classified", s(&out.join("c.csv")), "--out", s(&out.join("d.csv"))]).unwrap(), 0);
        assert_eq!(
            invoke(&[
                "plays", "--tracking", s(&scene), "--classified", s(&out.join("c.csv")), "--query", "0",
                "--out", s(&out.join("plays")),
            ])
            .unwrap(),
            0
        );
        assert_eq!(
            invoke(&[
                "export-features", "--tracking", s(&scene), "--classified", s(&out.join("c.csv")),
                "--out", s(&out.join("f")),
            ])
            .unwrap(),
            0
        );
    }
    for f in ["s.csv", "c.csv", "d.csv", "d_long.csv", "plays/index.json", "plays/hits.csv", "f/index.csv", "f/sprint_0000.spft"] {
        let a = std::fs::read(d.join("r0").join(f)).unwrap();
        assert_eq!(a, std::fs::read(d.join("r1").join(f)).unwrap(), "{f}");
    }
    let c = std::fs::read_to_string(d.join("r0/c.csv")).unwrap();
    assert!(c.lines().nth(1).unwrap().contains(",PEN,"));
    let hits = std::fs::read_to_string(d.join("r0/plays/hits.csv")).unwrap();
    assert!(hits.lines().nth(1).unwrap().starts_with("1,0,"));
}

#[test]
fn classify_without_roles_assigns_them() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c");
    invoke(&["synth", "--n", "1", "--out", s(&corpus)]).unwrap();
    let out = dir.path().join("c.json");
    let roles_out = dir.path().join("roles.csv");
    let code = invoke(&[
        "classify", "--tracking", s(&corpus.join("000_RWB")), "--format", "json",
        "--roles-out", s(&roles_out), "--out", s(&out),
    ])
    .unwrap();
    assert_eq!(code, 0);
    assert!(roles_out.exists());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"category\": \"RWB\""));
}

#[test]
fn malformed_tracking_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c");
    invoke(&["synth", "--n", "1", "--out", s(&corpus)]).unwrap();
    let scene = corpus.join("000_RWB");
    let t = scene.join("tracking.csv");
    let mut text = std::fs::read_to_string(&t).unwrap();
    text = text.replacen("\n1,0.000,ball", "\n1,zero,ball", 1);
    std::fs::write(&t, text).unwrap();
    let err = invoke(&["detect", "--tracking", s(&scene), "--out", s(&dir.path().join("x.csv"))]).unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
}

#[test]
fn overrides_and_unknown_keys() {
    let cli = Cli::try_parse_from(["sprintlab", "--set", "detection.tau=5", "--print-config"]).unwrap();
    let cfg = effective_config(&cli).unwrap();
    assert_eq!(cfg.detection.tau, 5.0);
    assert_eq!(run(&cli).unwrap(), 0);
    assert!(invoke(&["--set", "detection.nope=1", "--print-config"]).is_err());
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cfg.toml");
    std::fs::write(&p, "[detection]\nsprint_threshold = 19.0\n").unwrap();
    let cli = Cli::try_parse_from(["sprintlab", "--config", s(&p), "--print-config"]).unwrap();
    let cfg = effective_config(&cli).unwrap();
    assert_eq!(cfg.detection.sprint_threshold, 19.0);
    assert_eq!(cfg.detection.tau, 4.0);
}

#[test]
fn unknown_backend_fails() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c");
    invoke(&["synth", "--n", "1", "--out", s(&corpus)]).unwrap();
    let scene = corpus.join("000_RWB");
    let c = dir.path().join("c.csv");
    invoke(&["classify", "--tracking", s(&scene), "--out", s(&c)]).unwrap();
    let err = invoke(&["plays", "--tracking", s(&scene), "--classified", s(&c), "--backend", "play2vec"]).unwrap_err();
    assert!(matches!(err, sprintlab::Error::UnknownBackend(_)));
}
