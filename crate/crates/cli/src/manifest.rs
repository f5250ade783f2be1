use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use dbf_core::Field;

pub const TOOL: &str = "dbf";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldFingerprint {
    pub p: u32,
    pub m: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
    /// sha256 of the modulus coefficients written as comma-separated decimals
    pub modulus_sha256: String,
}

impl FieldFingerprint {
    pub fn of(field: &Field) -> Self {
        let text = field
            .modulus()
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let digest = Sha256::digest(text.as_bytes());
        FieldFingerprint {
            p: field.p(),
            m: field.m(),
            n: field.n(),
            modulus: field.modulus().to_vec(),
            modulus_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

/// Provenance block embedded in every JSON output. Contains no timestamps or
/// absolute paths so identical invocations give identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub flags: serde_json::Value,
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub field: FieldFingerprint,
}

impl RunManifest {
    pub fn new<A: Serialize>(
        subcommand: &str,
        flags: &A,
        inputs: Vec<String>,
        output: Option<String>,
        field: &Field,
    ) -> Self {
        RunManifest {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            flags: serde_json::to_value(flags).expect("flags serialize"),
            inputs,
            output,
            field: FieldFingerprint::of(field),
        }
    }
}
