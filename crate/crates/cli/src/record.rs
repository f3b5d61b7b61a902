use chrono::{SecondsFormat, Utc};
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub program: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
    /// Grids, tolerances and other numerical settings actually used.
    pub settings: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// One self-describing result: the resolved inputs, the outputs, how they
/// were computed, and when.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub inputs: RunConfig,
    pub outputs: Value,
    pub provenance: Provenance,
    pub timestamp: String,
}

impl ResultRecord {
    pub fn new(inputs: RunConfig, outputs: Value, settings: Value, notes: Vec<String>) -> Self {
        Self {
            inputs,
            outputs,
            provenance: Provenance {
                program: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                core_version: bdl_core::VERSION,
                settings,
                notes,
            },
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
        }
    }
}
