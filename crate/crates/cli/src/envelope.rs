use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Machine-readable wrapper around every command result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub command: String,
    /// SHA-256 over the command name, its parameters and input file bytes.
    pub inputs_digest: String,
    pub params: Value,
    pub result: Value,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Digest of `command`, the canonical JSON of `params` (object keys are
/// sorted) and each named input file.
pub fn inputs_digest(command: &str, params: &Value, files: &[(String, Vec<u8>)]) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update(b"\n");
    h.update(params.to_string().as_bytes());
    for (name, bytes) in files {
        h.update(b"\n");
        h.update(name.as_bytes());
        h.update(format!("\n{}\n", bytes.len()).as_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_depends_on_every_input() {
        let p = serde_json::json!({"n": 2, "d": 1});
        let base = inputs_digest("bounds", &p, &[]);
        assert_eq!(
            base,
            inputs_digest("bounds", &serde_json::json!({"d": 1, "n": 2}), &[])
        );
        assert_ne!(base, inputs_digest("audit", &p, &[]));
        assert_ne!(
            base,
            inputs_digest("bounds", &serde_json::json!({"n": 3, "d": 1}), &[])
        );
        let f = vec![("system".to_string(), b"{}".to_vec())];
        assert_ne!(base, inputs_digest("bounds", &p, &f));
        assert_eq!(base.len(), 64);
    }
}
