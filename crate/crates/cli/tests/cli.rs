//! End-to-end tests of the `cpkit` binary: exit codes, report schema,
//! seed reproducibility, and the dependency-gated skip behavior.

use std::io::Write;
use std::process::Command;

fn cpkit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cpkit"))
}

#[test]
fn gallery_list_names_every_case() {
    let out = cpkit().args(["gallery", "list"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "kraus",
        "carteret",
        "jss",
        "zero_discord",
        "brodutch",
        "buscemi",
        "choi_effros_counterexample",
        "consistent_pos_counterexample",
    ] {
        assert!(text.contains(name), "missing {name} in gallery list");
    }
}

#[test]
fn carteret_non_cp_case_reports_no() {
    let out = cpkit()
        .args([
            "analyze",
            "--input",
            "gallery:carteret",
            "--param",
            "a=0.35",
            "--param",
            "theta=0.5235987755982988",
            "--checks",
            "cp",
            "--samples",
            "0",
            "--format",
            "json",
            "--seed",
            "5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cp = &report["results"][0];
    assert_eq!(cp["check"], "cp");
    assert_eq!(cp["status"], "completed");
    // The distinguished unitary's map is the first dynamical map.
    assert_eq!(cp["outcome"]["dynamicalMaps"][0]["verdict"], "no");
}

#[test]
fn kraus_all_checks_all_yes() {
    let out = cpkit()
        .args([
            "gallery", "run", "kraus", "--samples", "3", "--seed", "9", "--format", "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schemaVersion"], 1);
    assert_eq!(report["expectationMismatches"].as_array().unwrap().len(), 0);
    for result in report["results"].as_array().unwrap() {
        assert_ne!(result["status"], "failed", "{result}");
        if ["positive", "cp", "cpte", "cpze"]
            .contains(&result["check"].as_str().unwrap_or(""))
        {
            assert_eq!(result["outcome"]["assignment"], "yes", "{result}");
        }
        if result["check"] == "domain" {
            for probe in result["outcome"]["probes"].as_array().unwrap() {
                assert_eq!(probe["verdict"], "inside");
            }
        }
    }
}

#[test]
fn inconsistent_file_input_skips_dependent_checks() {
    // ρ_s ⊗ τ₁ and ρ_s ⊗ τ₂ share a reduction: V₀ ≠ {0}, so the full
    // group breaks consistency and map-level checks are skipped.
    let dir = std::env::temp_dir().join(format!("cpkit-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("space.json");
    let mut file = std::fs::File::create(&path).unwrap();
    let space = serde_json::json!({
        "dS": 2,
        "dB": 2,
        "generators": [
            {"rows": 4, "cols": 4, "data": [
                [0.6,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0],
                [0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0],
                [0.0,0.0],[0.0,0.0],[0.4,0.0],[0.0,0.0],
                [0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]
            ]},
            {"rows": 4, "cols": 4, "data": [
                [0.3,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0],
                [0.0,0.0],[0.3,0.0],[0.0,0.0],[0.0,0.0],
                [0.0,0.0],[0.0,0.0],[0.2,0.0],[0.0,0.0],
                [0.0,0.0],[0.0,0.0],[0.0,0.0],[0.2,0.0]
            ]}
        ]
    });
    file.write_all(space.to_string().as_bytes()).unwrap();

    let out = cpkit()
        .args([
            "analyze",
            "--input",
            path.to_str().unwrap(),
            "--semigroup",
            "full",
            "--checks",
            "consistency,dynmap,cp",
            "--format",
            "json",
            "--samples",
            "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let results = report["results"].as_array().unwrap();
    assert_eq!(results[0]["check"], "consistency");
    assert_eq!(results[0]["outcome"]["consistent"], false);
    assert_eq!(results[1]["status"], "skipped");
    assert_eq!(results[2]["status"], "skipped");
    assert!(results[1]["reason"].as_str().unwrap().contains("consistent"));
}

#[test]
fn distinguished_unitary_from_file() {
    // Swap on the product subspace: the first dynamical map is the
    // constant map onto ρ_B, still completely positive.
    let dir = std::env::temp_dir().join(format!("cpkit-u-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("swap.json");
    let swap = serde_json::json!({
        "rows": 4, "cols": 4, "data": [
            [1.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0],
            [0.0,0.0],[0.0,0.0],[1.0,0.0],[0.0,0.0],
            [0.0,0.0],[1.0,0.0],[0.0,0.0],[0.0,0.0],
            [0.0,0.0],[0.0,0.0],[0.0,0.0],[1.0,0.0]
        ]
    });
    std::fs::write(&path, swap.to_string()).unwrap();
    let out = cpkit()
        .args([
            "analyze",
            "--input",
            "gallery:kraus",
            "--unitary",
            path.to_str().unwrap(),
            "--checks",
            "dynmap,cp",
            "--samples",
            "1",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dynmap = &report["results"][0];
    assert_eq!(dynmap["check"], "dynmap");
    // Distinguished map plus one sample.
    assert_eq!(dynmap["outcome"]["count"], 2);
    assert!(dynmap["outcome"]["maps"][0]["choi"].is_object());
    let cp = &report["results"][1];
    assert_eq!(cp["outcome"]["dynamicalMaps"][0]["verdict"], "yes");
}

#[test]
fn seed_reproduces_reports() {
    let run = || {
        let out = cpkit()
            .args([
                "gallery",
                "run",
                "zero_discord",
                "--seed",
                "33",
                "--samples",
                "2",
                "--format",
                "json",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["timings_ms"] = serde_json::Value::Null;
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn env_seed_fallback() {
    let out = cpkit()
        .env("CPKIT_SEED", "777")
        .args(["gallery", "run", "kraus", "--checks", "consistency", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["seed"], 777);
}

#[test]
fn unknown_case_is_operational_failure() {
    let out = cpkit()
        .args(["gallery", "run", "not_a_case"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
