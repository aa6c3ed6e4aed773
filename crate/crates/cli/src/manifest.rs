use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Everything needed to rerun a command; `wall_time_ms` is the only field that
/// may differ between reruns.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Value,
    pub precision_bits: u32,
    pub budget_states: usize,
    pub threads: Option<usize>,
    pub version: &'static str,
    pub input_hash: String,
    pub wall_time_ms: u64,
}

impl RunManifest {
    pub fn new(command: &str, params: Value, precision_bits: u32, budget_states: usize, threads: Option<usize>) -> Self {
        let canonical = serde_json::json!({
            "command": command,
            "params": params,
            "precision_bits": precision_bits,
            "budget_states": budget_states,
        });
        let input_hash = hex::encode(Sha256::digest(canonical.to_string().as_bytes()));
        RunManifest {
            command: command.to_string(),
            params,
            precision_bits,
            budget_states,
            threads,
            version: env!("CARGO_PKG_VERSION"),
            input_hash,
            wall_time_ms: 0,
        }
    }
}
