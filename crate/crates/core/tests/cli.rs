use std::path::Path;
use std::process::{Command, Output};

fn mav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mav"))
        .args(args)
        .output()
        .expect("spawn mav")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn oracle_lists_every_action_and_eight_optima() {
    let o = mav(&["oracle"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 729);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",true")).count(), 8);
    assert!(text.contains("# optima: 8 at fitness 10.000000"));
}

#[test]
fn run_to_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = mav(&[
            "run",
            "--seed",
            "9",
            "--iterations",
            "40",
            "--grid",
            "6x7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let text = String::from_utf8(text).unwrap();
    assert!(text.contains("# rows = 6\n# cols = 7\n"));
    assert!(text.lines().last().unwrap().starts_with("40,"));
}

#[test]
fn run_flags_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.conf");
    std::fs::write(&cfg, "p_create = 0.25\niterations = 10\n").unwrap();
    let o = mav(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--no-imitation",
        "--no-knowledge-ops",
        "--no-mental-simulation",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    for line in [
        "# p_create = 0.25",
        "# iterations = 10",
        "# imitation_enabled = false",
        "# knowledge_ops = false",
        "# mental_simulation = false",
    ] {
        assert!(text.contains(line), "{line}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        mav(&["run", "--mutation-rate", "1.5"]).status.code(),
        Some(1)
    );
    assert_eq!(mav(&["run", "--grid", "ten"]).status.code(), Some(1));
    assert_eq!(mav(&["run", "--grid", "0x4"]).status.code(), Some(1));
    assert_eq!(
        mav(&["preset", "figure1", "--out", "/tmp/unused"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mav(&["run", "--config", "/definitely/missing.conf"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mav(&[
            "run",
            "--iterations",
            "2",
            "--out",
            "/definitely/missing/x.csv"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(mav(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(mav(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "seed = 1\nsweep.p_create = 0.5, 7\n").unwrap();
    let o = mav(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn sweep_writes_runs_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.conf");
    std::fs::write(
        &cfg,
        "rows = 5\ncols = 5\niterations = 30\nreplicates = 3\nsweep.p_create = 0.25, 0.75\n",
    )
    .unwrap();
    let out1 = dir.path().join("one");
    let out2 = dir.path().join("two");
    for out in [&out1, &out2] {
        let o = mav(&[
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let files = tree(&out1);
    assert_eq!(files.len(), 7);
    assert_eq!(files, tree(&out2));
    let summary = String::from_utf8(
        files
            .iter()
            .find(|(n, _)| n == "summary.csv")
            .unwrap()
            .1
            .clone(),
    )
    .unwrap();
    assert!(summary.starts_with("cell_params,metric,median,q1,q3,n\n"));
    assert!(summary.contains("p_create=0.25,convergence_iteration,"));
}

#[test]
fn preset_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = mav(&[
            "preset",
            "figure4",
            "--out",
            out.to_str().unwrap(),
            "--replicates",
            "2",
            "--seed",
            "5",
        ]);
        assert!(o.status.success());
    }
    let files = tree(&a);
    assert_eq!(files.len(), 3);
    assert_eq!(files, tree(&b));
    let run = String::from_utf8(files[0].1.clone()).unwrap();
    assert!(run.contains("# mutation_rate = 0.01\n"));
}
