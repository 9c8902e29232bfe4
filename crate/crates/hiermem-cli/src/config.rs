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

//! Run configuration: a strict JSON envelope `{command, seed, output_dir,
//! params}` with a parameter block per command, plus `--set` overrides.

use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::params::Params;

pub const TOOL: &str = concat!("hiermem ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Route,
    Codegen,
    Circuit,
    SimulateTiles,
    Bounds,
    Estimate,
    Crossover,
    Verify,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Route => "route",
            CommandName::Codegen => "codegen",
            CommandName::Circuit => "circuit",
            CommandName::SimulateTiles => "simulate-tiles",
            CommandName::Bounds => "bounds",
            CommandName::Estimate => "estimate",
            CommandName::Crossover => "crossover",
            CommandName::Verify => "verify",
        }
    }
}

/// Error with the JSON-pointer location of the offending value (empty for
/// the document root).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("parse error at {pointer:?}: {message}")]
    Parse { pointer: String, message: String },
    #[error("validation error at {pointer:?}: {message}")]
    Validation { pointer: String, message: String },
}

impl ConfigError {
    pub fn pointer(&self) -> &str {
        match self {
            ConfigError::Parse { pointer, .. } | ConfigError::Validation { pointer, .. } => pointer,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            ConfigError::Parse { message, .. } | ConfigError::Validation { message, .. } => message,
        }
    }

    pub(crate) fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Validation { pointer: pointer.into(), message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: CommandName,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub params: Params,
    /// First 16 hex digits of the SHA-256 of the resolved command, seed and
    /// parameters. The output directory is not part of it.
    pub config_hash: String,
}

impl RunConfig {
    /// One-line provenance stamp, without a comment marker.
    pub fn provenance_line(&self) -> String {
        format!("{TOOL} config={} seed={}", self.config_hash, self.seed)
    }

    pub fn provenance(&self) -> Value {
        serde_json::json!({ "tool": TOOL, "config_hash": self.config_hash, "seed": self.seed })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    command: CommandName,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_output_dir")]
    output_dir: PathBuf,
    #[serde(default)]
    params: Option<Value>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    resolve(parse_document(text)?)
}

/// Parse JSON text without interpreting it.
pub fn parse_document(text: &str) -> Result<Value, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Parse { pointer: String::new(), message: e.to_string() })
}

/// Validate a config document (after overrides) into a [`RunConfig`].
pub fn resolve(doc: Value) -> Result<RunConfig, ConfigError> {
    if !doc.is_object() {
        return Err(ConfigError::invalid("", "config must be a JSON object"));
    }
    let env: Envelope = typed(&doc, "")?;
    let params_doc = env.params.unwrap_or_else(|| Value::Object(Map::new()));
    let params = Params::from_value(env.command, &params_doc)?;
    params.validate()?;
    let canonical = serde_json::json!({
        "command": env.command,
        "seed": env.seed,
        "params": params.to_value(),
    });
    let digest = Sha256::digest(canonical.to_string().as_bytes());
    let config_hash = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
    Ok(RunConfig { command: env.command, seed: env.seed, output_dir: env.output_dir, params, config_hash })
}

/// Deserialize `v`, reporting failures at `prefix` + the path inside `v`.
pub(crate) fn typed<T: DeserializeOwned>(v: &Value, prefix: &str) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let mut pointer = prefix.to_string();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => pointer.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
                Segment::Enum { variant } => pointer.push_str(&format!("/{variant}")),
                Segment::Unknown => {}
            }
        }
        ConfigError::Validation { pointer, message: e.into_inner().to_string() }
    })
}

/// Apply one `key.path=value` override. The value is read as JSON when it
/// parses, otherwise as a string. Missing objects along the path are created;
/// numeric segments index into existing arrays.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<(), String> {
    let (path, raw) = assignment.split_once('=').ok_or_else(|| format!("override {assignment:?} is not key=value"))?;
    if path.is_empty() {
        return Err(format!("override {assignment:?} has an empty key"));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let segs: Vec<&str> = path.split('.').collect();
    let mut cur = doc;
    for (i, seg) in segs.iter().enumerate() {
        if seg.is_empty() {
            return Err(format!("override key {path:?} has an empty segment"));
        }
        let last = i + 1 == segs.len();
        cur = match cur {
            Value::Object(map) => {
                if last {
                    map.insert(seg.to_string(), value);
                    return Ok(());
                }
                let next = map.entry(seg.to_string()).or_insert_with(|| Value::Object(Map::new()));
                if next.is_null() {
                    *next = Value::Object(Map::new());
                }
                next
            }
            Value::Array(items) => {
                let idx: usize = seg.parse().map_err(|_| format!("{path:?}: {seg:?} is not an array index"))?;
                let len = items.len();
                let slot = items.get_mut(idx).ok_or_else(|| format!("{path:?}: index {idx} out of bounds ({len})"))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(format!("{path:?}: cannot descend into a scalar at {seg:?}")),
        };
    }
    unreachable!("loop returns on the last segment")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_estimate_config() {
        let c = parse_config(r#"{"command":"estimate","seed":1}"#).unwrap();
        assert_eq!(c.command, CommandName::Estimate);
        assert_eq!(c.seed, 1);
        assert_eq!(c.config_hash.len(), 16);
    }

    #[test]
    fn unknown_keys_are_named() {
        let e = parse_config(r#"{"command":"estimate","sede":1}"#).unwrap_err();
        assert!(matches!(e, ConfigError::Validation { .. }));
        assert!(e.message().contains("sede"), "{e}");
        let e = parse_config(r#"{"command":"route","params":{"sise":4}}"#).unwrap_err();
        assert!(e.message().contains("sise"), "{e}");
        assert!(e.pointer().starts_with("/params"), "{e}");
    }

    #[test]
    fn syntax_errors_are_parse_errors() {
        assert!(matches!(parse_config("{"), Err(ConfigError::Parse { .. })));
    }

    #[test]
    fn negative_size_points_at_the_key() {
        let e = parse_config(r#"{"command":"route","params":{"size":-3}}"#).unwrap_err();
        assert_eq!(e.pointer(), "/params/size");
        let e = parse_config(r#"{"command":"simulate-tiles","params":{"l":0}}"#).unwrap_err();
        assert_eq!(e.pointer(), "/params/l");
    }

    #[test]
    fn overrides_create_and_replace() {
        let mut doc = serde_json::json!({"command": "route", "params": {"size": 4}});
        apply_override(&mut doc, "params.size=8").unwrap();
        apply_override(&mut doc, "params.mode=dense").unwrap();
        apply_override(&mut doc, "seed=7").unwrap();
        assert_eq!(doc["params"]["size"], 8);
        assert_eq!(doc["params"]["mode"], "dense");
        assert_eq!(doc["seed"], 7);
        let mut doc = serde_json::json!({"a": [1, 2]});
        apply_override(&mut doc, "a.1=5").unwrap();
        assert_eq!(doc["a"], serde_json::json!([1, 5]));
        assert!(apply_override(&mut doc, "a.1.b=5").is_err());
        assert!(apply_override(&mut doc, "nokey").is_err());
    }

    #[test]
    fn hash_ignores_output_dir_but_not_seed() {
        let a = parse_config(r#"{"command":"bounds","seed":1,"output_dir":"x"}"#).unwrap();
        let b = parse_config(r#"{"command":"bounds","seed":1,"output_dir":"y"}"#).unwrap();
        let c = parse_config(r#"{"command":"bounds","seed":2}"#).unwrap();
        assert_eq!(a.config_hash, b.config_hash);
        assert_ne!(a.config_hash, c.config_hash);
    }
}
