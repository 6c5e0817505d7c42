//! Report envelope shared by the CLI and the bindings: every JSON document
//! embeds the manifest of the run that produced it, and tabular results can
//! render as CSV.

use serde::{Deserialize, Serialize};

/// Reproducibility header embedded in every report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub toolkit_version: String,
    pub input_hashes: Vec<InputHash>,
    /// informational only; excluded from equality contracts
    pub wall_ms: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

/// A result with its manifest.
#[derive(Clone, Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub manifest: RunManifest,
    pub result: T,
}

/// One obstruction claim: a self-contained rule name, the full statement,
/// and exactly the unproved assumptions it consumed.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Claim {
    pub rule: String,
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub radical_primes: Vec<u64>,
    pub assumptions_used: Vec<String>,
}

/// Tabular reports render their per-row data as CSV for plotting.
pub trait CsvTable {
    fn csv_header(&self) -> String;
    fn csv_rows(&self) -> Vec<String>;

    fn to_csv(&self) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        for r in self.csv_rows() {
            out.push_str(&r);
            out.push('\n');
        }
        out
    }
}
