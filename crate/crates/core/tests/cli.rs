use std::path::PathBuf;

use magic_heat::cli::{manifest_path, run, run_command, Cli, Outcome, EXIT_CERTIFIED, EXIT_INPUT, EXIT_OK, FAMILY_SCHEMA, TFIM_SCHEMA};
use clap::Parser;

fn outcome(args: &[&str]) -> Outcome {
    let cli = Cli::try_parse_from(std::iter::once("magic-heat").chain(args.iter().copied())).unwrap();
    run_command(&cli.command).unwrap()
}

fn numbers(text: &str) -> Vec<Vec<String>> {
    text.lines().filter(|l| !l.starts_with('#')).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn assert_matches_golden(produced: &str, golden: &str) {
    let (a, b) = (numbers(produced), numbers(golden));
    assert_eq!(a.len(), b.len());
    for (ra, rb) in a.iter().zip(&b) {
        for (x, y) in ra.iter().zip(rb) {
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(u), Ok(v)) => assert!((u - v).abs() <= 1e-9 * (1.0 + v.abs()), "{u} vs {v}"),
                _ => assert_eq!(x, y),
            }
        }
    }
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("magic-heat-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn sweep_matches_golden_file() {
    let out = scratch("sweep.csv");
    let o = outcome(&["sweep-tfim", "--n", "4", "--steps", "5", "--out", out.to_str().unwrap()]);
    let (path, text) = &o.files[0];
    assert_eq!(path, &out);
    assert!(text.starts_with(&format!("# schema: {TFIM_SCHEMA}\n# manifest: {}", manifest_path(&out).display())));
    assert_matches_golden(text, include_str!("golden/sweep_tfim_n4.csv"));
}

#[test]
fn family_matches_golden_file() {
    let out = scratch("family.csv");
    let o = outcome(&["family", "--preset", "dephased-t", "--steps", "5", "--out", out.to_str().unwrap()]);
    assert!(o.files[0].1.starts_with(&format!("# schema: {FAMILY_SCHEMA}")));
    assert_matches_golden(&o.files[0].1, include_str!("golden/family_dephased_t.csv"));
    let thresholds: serde_json::Value = serde_json::from_str(&o.files[1].1).unwrap();
    assert!((thresholds["thresholds"]["lambda_crt"].as_f64().unwrap() - (1.0 - (2.0 - 3f64.sqrt()).sqrt())).abs() < 1e-6);
    assert!(thresholds["manifest"].as_str().unwrap().ends_with(".thresholds.json.manifest.json"));
}

#[test]
fn subcommands_are_deterministic() {
    for args in [
        vec!["gap", "--bell-perturbed", "eps=1.5"],
        vec!["sweep-tfim", "--n", "6", "--steps", "7"],
        vec!["heat-window", "--n", "2", "--E0", "0.5", "--beta", "2"],
        vec!["detect", "--qubit", "z=1", "--E0", "0.2", "--Q", "0.1", "--dE", "0.05", "--dQ", "0.01"],
        vec!["family", "--preset", "depolarized-h", "--steps", "4"],
    ] {
        let (a, b) = (outcome(&args), outcome(&args));
        assert_eq!(a.result, b.result, "{args:?}");
        assert_eq!(a.parameters, b.parameters);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(["magic-heat", "gap", "--heisenberg", "n=4"]), EXIT_OK);
    assert_eq!(run(["magic-heat", "family", "--preset", "nope"]), EXIT_INPUT);
    assert_eq!(run(["magic-heat", "heat-window", "--n", "2", "--E0", "9"]), EXIT_INPUT);
    assert_eq!(run(["magic-heat", "detect", "--qubit", "z=1", "--E0", "0", "--Q", "0"]), EXIT_OK);
    assert_eq!(run(["magic-heat", "detect", "--bell-perturbed", "eps=2", "--E0", "-3.05", "--Q", "0"]), EXIT_CERTIFIED);
    let cfg = scratch("tc.json");
    std::fs::write(&cfg, r#"{"n_max": 4}"#).unwrap();
    assert_eq!(run(["magic-heat", "tavis-cummings", cfg.to_str().unwrap()]), EXIT_INPUT);
}

#[test]
fn manifests_reference_outputs() {
    let out = scratch("gap.json");
    assert_eq!(run(["magic-heat", "gap", "--tfim", "n=100", "h=1.0", "--out", out.to_str().unwrap()]), EXIT_OK);
    let result: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(manifest_path(&out)).unwrap()).unwrap();
    assert_eq!(result["manifest"], manifest_path(&out).display().to_string());
    assert_eq!(manifest["outputs"][0], out.display().to_string());
    assert_eq!(manifest["parameters"]["source"]["kind"], "tfim");
    assert_eq!(result["method"], "closed-form");
}
