// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::path::Path;
use std::process::{Command, Output};

fn hiermem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hiermem")).args(args).output().expect("spawn hiermem")
}

fn path_arg(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn help_lists_subcommands_and_params() {
    let out = hiermem(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for cmd in ["route", "codegen", "circuit", "simulate-tiles", "bounds", "estimate", "crossover", "verify", "run"] {
        assert!(text.contains(cmd), "help misses {cmd}");
    }
    let out = hiermem(&["route", "--help"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PARAMS") && text.contains("permutation"));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(hiermem(&["teleport"]).status.code(), Some(2));
}

#[test]
fn set_overrides_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"command":"route","seed":3,"params":{"size":6}}"#).unwrap();
    let out_dir = dir.path().join("out");
    let out = hiermem(&["route", "-c", path_arg(&cfg), "--set", "params.size=9", "-o", path_arg(&out_dir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest: serde_json::Value = serde_json::from_str(&read(&out_dir.join("route.json"))).unwrap();
    assert_eq!(manifest["params"]["size"], 9);
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["params"]["permutation"].as_array().map(Vec::len), Some(9));

    // the seed flag wins over the file too
    let out_dir = dir.path().join("seeded");
    hiermem(&["route", "-c", path_arg(&cfg), "--seed", "11", "-o", path_arg(&out_dir)]);
    let schedule = read(&out_dir.join("schedule.txt"));
    assert!(schedule.lines().next().unwrap().ends_with("seed=11"), "{schedule}");
}

#[test]
fn config_command_mismatch_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"command":"route","params":{}}"#).unwrap();
    let out = hiermem(&["circuit", "-c", path_arg(&cfg), "-o", path_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_config_reports_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let out = hiermem(&["route", "--set", "params.sise=4", "-o", path_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/params"));

    let out = hiermem(&["route", "--set", "params.size=-1", "-o", path_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/params/size"));

    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{ not json").unwrap();
    assert_eq!(hiermem(&["run", "-c", path_arg(&cfg)]).status.code(), Some(2));
}

#[test]
fn run_dispatches_on_config_command() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"command":"bounds","seed":1,"params":{}}"#).unwrap();
    let out_dir = dir.path().join("out");
    let out = hiermem(&["run", "-c", path_arg(&cfg), "-o", path_arg(&out_dir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let bounds: serde_json::Value = serde_json::from_str(&read(&out_dir.join("bounds.json"))).unwrap();
    assert!(bounds["provenance"]["config_hash"].is_string());
}

#[test]
fn verify_accepts_route_output_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let routed = dir.path().join("routed");
    let out = hiermem(&["route", "--set", "params.size=10", "--seed", "4", "-o", path_arg(&routed)]);
    assert!(out.status.success());
    let schedule = routed.join("schedule.txt");
    let set = format!("params.schedule={}", schedule.display());
    let out = hiermem(&["verify", "--set", &set, "-o", path_arg(&dir.path().join("v1"))]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    // swap along a non-edge of the path
    let text = read(&schedule);
    let mut lines: Vec<&str> = text.lines().collect();
    let last = lines.len() - 1;
    lines[last] = "0-2";
    std::fs::write(&schedule, lines.join("\n") + "\n").unwrap();
    let out = hiermem(&["verify", "--set", &set, "-o", path_arg(&dir.path().join("v2"))]);
    assert_eq!(out.status.code(), Some(1));
    let report = read(&dir.path().join("v2/verify.json"));
    assert!(report.contains("\"ok\": false"), "{report}");
}

#[test]
fn estimate_writes_csv_and_svg_per_r_swap() {
    let dir = tempfile::tempdir().unwrap();
    let out = hiermem(&["estimate", "--set", "params.points=5", "-o", path_arg(dir.path())]);
    assert!(out.status.success());
    for r in ["1", "0.1", "0.01"] {
        let csv = read(&dir.path().join(format!("estimate_r{r}.csv")));
        assert!(csv.starts_with("# hiermem "), "missing provenance header");
        assert!(dir.path().join(format!("estimate_r{r}.svg")).exists());
    }
}
