//! Run manifests: everything needed to reproduce a run byte for byte.

use std::path::Path;

use serde::{Deserialize, Serialize};

use floq_otoc::OtocRequest;

use crate::UsageError;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub request: OtocRequest,
    /// Highest kick actually evaluated (equals request.n_max unless the run
    /// was truncated by a budget).
    pub last_kick: usize,
    pub truncated: bool,
    pub duration_secs: f64,
    /// Data files this manifest describes, relative to its directory.
    pub outputs: Vec<String>,
}

impl RunManifest {
    /// The request that reproduces the emitted series exactly: a truncated
    /// run is re-run only up to the horizon it actually reached.
    pub fn rerun_request(&self) -> OtocRequest {
        let mut request = self.request;
        if self.truncated {
            request.n_max = self.last_kick;
        }
        request
    }
}

pub fn write_manifest(path: &Path, manifest: &RunManifest) -> Result<(), UsageError> {
    let json = serde_json::to_string_pretty(manifest)
        .map_err(|e| UsageError(format!("cannot encode manifest: {e}")))?;
    std::fs::write(path, json + "\n")
        .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))
}

pub fn read_manifest(path: &Path) -> Result<RunManifest, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("cannot parse manifest {}: {e}", path.display())))
}
