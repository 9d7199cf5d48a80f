use chromlag::cli::run_with;
use chromlag::qseries::{qpoch2, QRat, XSeries};
use chromlag::seeds::FramedSeed;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["chromlag"];
    argv.extend_from_slice(args);
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("chromlag-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn canoe_with_framing() {
    let (code, out, err) = run(&["wavefunction", "--preset", "canoe", "--g", "1", "--A", "[[1]]", "--order", "6"]);
    assert_eq!(code, 0, "{err}");
    let f = XSeries::from_json(&serde_json::from_str(&out).unwrap()).unwrap();
    for v in 0..=6u32 {
        let want = &QRat::qpow((v * v) as i64) * &qpoch2(v as usize).inv().unwrap();
        assert_eq!(f.get(&[v]), want);
    }
}

#[test]
fn dt_rejects_negative_disk_accepts() {
    let (code, out, err) = run(&["dt-series", "--adjacency", "[[-1]]"]);
    assert_eq!(code, 2);
    assert!(out.is_empty() && err.contains("error"));
    let (code, out, _) = run(&["disk-invariants", "--adjacency", "[[-1]]", "--order", "4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("d,n\n"));
    let (code, out, _) = run(&["disk-invariants", "--A", "[[-2]]"]);
    assert_eq!(code, 0);
    let ns: Vec<&str> = out.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(ns, ["1", "1", "3", "10", "40", "171", "791"]);
    let (code, out, _) = run(&["dt-series", "--adjacency", "[[1,0],[0,1]]", "--order", "3", "--invariants", "--format", "json"]);
    assert_eq!(code, 0);
    assert!(serde_json::from_str::<serde_json::Value>(&out).unwrap()["integral"].as_bool().unwrap());
    assert_eq!(run(&["dt-series", "--adjacency", "[[0,1],[2,0]]"]).0, 2);
}

#[test]
fn mutate_round_trip_through_files() {
    let seed_path = tmp("seed.json");
    let (code, _, err) = run(&["mutate", "--g", "2", "--edge", "s1", "--out", &seed_path]);
    assert_eq!(code, 0, "{err}");
    let s: FramedSeed = FramedSeed::from_json(&serde_json::from_str(&std::fs::read_to_string(&seed_path).unwrap()).unwrap()).unwrap();
    assert!(s.validate().is_empty());
    // solving at the mutated seed agrees with the path evaluation
    let (c1, by_seed, _) = run(&["wavefunction", "--seed", &seed_path, "--order", "4"]);
    let (c2, by_path, _) =
        run(&["wavefunction", "--g", "2", "--path", r#"[{"op":"mutate","edge":"s1","sign":1}]"#, "--order", "4"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(by_seed, by_path);
    // inverse mutation restores the seed
    let (code, out, _) = run(&["mutate", "--seed", &seed_path, "--edge", "s1", "--sign", "-1"]);
    assert_eq!(code, 0);
    let back = FramedSeed::from_json(&serde_json::from_str(&out).unwrap()).unwrap();
    let start = chromlag::seeds::standard_necklace_seed(2).unwrap();
    assert_eq!(back.edge_mono, start.edge_mono);
    assert!(back.graph.is_isomorphic(&start.graph));
    let (code, _, err) = run(&["mutate", "--g", "1", "--edge", "nope"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn presets_and_ov_table() {
    for preset in ["necklace", "prism", "cube", "aenv"] {
        let (code, out, err) = run(&["wavefunction", "--preset", preset, "--order", "3"]);
        assert_eq!(code, 0, "{preset}: {err}");
        assert!(out.contains("terms"));
    }
    let (code, out, _) = run(&["ov-invariants", "--preset", "canoe", "--g", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "d,k,n\n\"1\",-1,1\n");
    let series = tmp("series.json");
    run(&["wavefunction", "--preset", "canoe", "--g", "2", "--A", "[[1,1],[1,0]]", "--order", "4", "--out", &series]);
    let (code, out, _) = run(&["ov-invariants", "--series", &series, "--format", "json"]);
    assert_eq!(code, 0);
    assert!(serde_json::from_str::<serde_json::Value>(&out).unwrap()["integral"].as_bool().unwrap());
    let (code, out, _) = run(&["wavefunction", "--preset", "aenv", "--order", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
    assert_eq!(run(&["wavefunction", "--preset", "prism", "--A", "[[1]]"]).0, 2);
    assert_eq!(run(&["wavefunction", "--preset", "canoe", "--g", "2", "--A", "[[1]]"]).0, 2);
}

#[test]
fn foam_and_chromatic() {
    let (code, out, _) = run(&["foam-h1", "--graph", "prism"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(v["framing_parameter_rank"], 3);
    assert_eq!(run(&["foam-h1", "--graph", "prism", "--format", "csv"]).0, 2);
    let (code, out, _) = run(&["chromatic-check", "--graph", "cube", "--samples", "20"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"passed\": true"));
    let graph = tmp("graph.json");
    std::fs::write(&graph, chromlag::cubicmap::tetrahedron().unwrap().to_json().to_string()).unwrap();
    let (code, out, _) = run(&["chromatic-check", "--graph", &graph, "--samples", "10", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("true\n"));
    assert_eq!(run(&["chromatic-check", "--graph", "/nonexistent/graph.json"]).0, 2);
}

#[test]
fn identities_and_golden() {
    let (code, out, err) = run(&["verify-identities", "--name", "inversion", "--name", "functional_plus", "--points", "5", "--format", "csv"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 3);
    let (code, out, _) = run(&["verify-identities", "--name", "fourier_1", "--hbar", "0.8+0.6i", "--points", "1"]);
    assert_eq!(code, 0);
    let reps: Vec<chromlag::faddeev::IdentityReport> = serde_json::from_str(&out).unwrap();
    assert!(reps[0].passed);
    assert_eq!(run(&["verify-identities", "--name", "bogus"]).0, 2);
    assert_eq!(run(&["verify-identities", "--name", "inversion", "--hbar", "-1"]).0, 2);

    let (code, out, _) = run(&["golden", "--only", "1,3,8"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("[PASS]").count(), 3);
    assert!(out.ends_with("3/3 checks passed\n"));
    assert_eq!(run(&["golden", "--only", "11"]).0, 2);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["wavefunction", "--order", "0"]).0, 2);
    assert_eq!(run(&["disk-invariants", "--adjacency", "[[1,2]]"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("golden"));
}
