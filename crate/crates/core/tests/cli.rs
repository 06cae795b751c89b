use std::path::{Path, PathBuf};
use std::process::Command;

use planedual::cli::{parse_t_grid, write_poly, SigmaFamilySpec};
use planedual::elimination::PlaneCurve;
use planedual::poly::{exact_poly, Space};

fn workdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("planedual-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn fermat_file(dir: &Path, d: u32) -> PathBuf {
    let p = dir.join(format!("fermat{d}.json"));
    write_poly(&p, &PlaneCurve::fermat(d).f).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_planedual")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn discriminant_writes_polynomial_and_uses_cache() {
    let dir = workdir("disc");
    let curve = fermat_file(&dir, 2);
    let out = dir.join("out");
    let cache = dir.join("cache");
    let args = ["discriminant", "--curve", s(&curve), "--out", s(&out), "--cache", s(&cache)];
    let (code, stdout) = run(&args);
    assert_eq!(code, 0);
    assert!(stdout.contains("a0^2") && stdout.contains("a2^2"));
    assert_eq!(read_json(&out.join("discriminant-meta.json"))["cache_hit"], false);
    assert_eq!(run(&args).0, 0);
    let meta = read_json(&out.join("discriminant-meta.json"));
    assert_eq!(meta["cache_hit"], true);
    assert_eq!(meta["degree_ok"], true);
}

#[test]
fn exit_codes() {
    let dir = workdir("codes");
    let quintic = fermat_file(&dir, 5);
    assert_eq!(run(&["discriminant", "--curve", s(&quintic), "--out", s(&dir)]).0, 4);
    assert_eq!(run(&["generic-resultant", "--degree", "6", "--out", s(&dir)]).0, 4);

    let conic = fermat_file(&dir, 2);
    assert_eq!(run(&["verify", "--curve", s(&conic), "--sigma", "random-sl3:seed=x"]).0, 3);
    assert_eq!(run(&["verify", "--curve", s(&conic), "--t-grid", "0.1"]).0, 3);
    assert_eq!(run(&["verify", "--curve", s(&conic), "--tolerance", "-1"]).0, 3);
    assert_eq!(run(&["verify", "--curve", s(&dir.join("missing.json"))]).0, 3);
    assert_eq!(run(&["verify", "--bogus-flag"]).0, 3);

    let node = dir.join("node.json");
    write_poly(&node, &exact_poly(3, Space::Point, &[("1", &[1, 1, 1])])).unwrap();
    assert_eq!(run(&["discriminant", "--curve", s(&node), "--out", s(&dir)]).0, 3);

    let floaty = dir.join("float.json");
    std::fs::write(&floaty, r#"{"vars":3,"degree":2,"space":"point","terms":[{"c":[1.0,0.0],"e":[2,0,0]}]}"#).unwrap();
    assert_eq!(run(&["discriminant", "--curve", s(&floaty), "--out", s(&dir)]).0, 3);
}

#[test]
fn ddbar_passes_on_conic() {
    let dir = workdir("ddbar");
    let conic = fermat_file(&dir, 2);
    let (code, stdout) = run(&["verify", "--which", "ddbar", "--curve", s(&conic), "--resolution", "32", "--out", s(&dir)]);
    assert_eq!(code, 0, "{stdout}");
    let rep = read_json(&dir.join("verify-ddbar.json"));
    assert_eq!(rep["report"]["pass"], true);
    assert!(rep["version"].as_str().unwrap().starts_with(env!("CARGO_PKG_VERSION")));
}

#[test]
fn reports_are_byte_identical_and_flags_override_config() {
    let dir = workdir("repro");
    let conic = fermat_file(&dir, 2);
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, format!("curve = {:?}\nresolution = 512\nseed = 4\nsigma = [\"random-sl3:seed=2,count=3,spread=3\"]\n", s(&conic)))
        .unwrap();
    let mut reports = Vec::new();
    for k in 0..2 {
        let out = dir.join(format!("out{k}"));
        let args = ["verify", "--which", "aubin", "--config", s(&cfg), "--resolution", "64", "--out", s(&out)];
        let (code, _) = run(&args);
        assert!(code == 0 || code == 2);
        reports.push(std::fs::read(out.join("verify-aubin.json")).unwrap());
    }
    // Output directories differ, so compare everything but the config echo.
    let strip = |b: &[u8]| {
        let mut v: serde_json::Value = serde_json::from_slice(b).unwrap();
        v["config"]["out"] = serde_json::Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(&reports[0]), strip(&reports[1]));
    let v: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert_eq!(v["config"]["resolution"], 64);
    assert_eq!(v["config"]["seed"], 4);
    assert_eq!(v["report"]["sigma_id"].as_array().unwrap().len(), 3 + 8);
}

#[test]
fn polytope_inclusion_reports_witnesses() {
    let dir = workdir("poly");
    let (code, stdout) =
        run(&["polytope", "--target", "generic", "--degree", "2", "--inclusion", "1/2", "--out", s(&dir)]);
    assert_eq!(code, 0);
    assert!(stdout.contains("1/3, 5/6"), "{stdout}");
    let v = read_json(&dir.join("polytope.json"));
    assert_eq!(v["inclusion"]["inside"], true);
    assert_eq!(v["inclusion"]["projected"], true);
}

#[test]
fn trivial_subgroup_slopes_are_zero() {
    let dir = workdir("slope");
    let conic = fermat_file(&dir, 2);
    let (code, _) = run(&["slope", "--curve", s(&conic), "--sigma", "diagonal:0,0,0", "--resolution", "64", "--out", s(&dir)]);
    assert_eq!(code, 0);
    let v = read_json(&dir.join("slopes.json"));
    for row in v["slopes"].as_array().unwrap() {
        if let Some(m) = row.get("measured").and_then(|m| m.as_f64()) {
            assert!(m.abs() < 1e-9, "{row}");
        }
    }
}

#[test]
fn sigma_and_grid_specs_parse() {
    assert_eq!(
        SigmaFamilySpec::parse("random-sl3:seed=3,count=2,spread=5").unwrap(),
        SigmaFamilySpec::RandomSl3 { seed: 3, count: 2, spread: 5.0 }
    );
    assert_eq!(SigmaFamilySpec::parse("diagonal:2,-1,-1").unwrap(), SigmaFamilySpec::Diagonal1psg { m: vec![2, -1, -1] });
    assert!(SigmaFamilySpec::parse("diagonal:1,1,1").is_err());
    assert!(SigmaFamilySpec::parse("explicit:").is_err());
    let g = parse_t_grid("geom:1e-2:1e-4:3").unwrap();
    assert!((g[0] - 0.1).abs() < 1e-15 && (g[2] - 0.01).abs() < 1e-15);
    assert_eq!(parse_t_grid("0.5,0.25").unwrap(), vec![0.5, 0.25]);
    assert!(parse_t_grid("0.5,-1").is_err());
}
