//! Key-value run configuration files.
//!
//! Format: one `key = value` per line, `#` starts a comment. Kick periods
//! accept either plain numbers or the `eps` shorthand (`eps = pi/28`), e.g.
//! `tau = 6eps/2`.

use std::collections::BTreeMap;
use std::path::Path;

use floq_otoc::{
    InitialState, ModelConfig, ObservableAxis, OtocRequest, Variant, DEFAULT_MAX_SITES, EPSILON,
};

use crate::UsageError;

/// Environment variable overriding the chain-length cap.
pub const MAX_SITES_ENV: &str = "FLOQ_OTOC_MAX_SITES";

const KNOWN_KEYS: &[&str] = &[
    "n_sites", "j_x", "h_x", "h_z", "tau", "variant", "axis", "l", "m", "n_max", "stride",
    "initial", "seed", "out_dir",
];

/// Parsed configuration: the request plus file-level extras.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub request: OtocRequest,
    pub out_dir: Option<String>,
}

/// The chain-length cap: `FLOQ_OTOC_MAX_SITES` when set, else the default.
pub fn site_cap() -> usize {
    std::env::var(MAX_SITES_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_SITES)
}

pub fn parse_file(path: &Path, overrides: &[(String, String)]) -> Result<RunConfig, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    parse_str(&text, overrides)
}

pub fn parse_str(text: &str, overrides: &[(String, String)]) -> Result<RunConfig, UsageError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(UsageError(format!(
                "config line {} is not `key = value`: {raw:?}",
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(UsageError(format!("unknown config key: {key}")));
        }
        map.insert(key, value.trim().to_string());
    }
    for (key, value) in overrides {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(UsageError(format!("unknown config key: {key}")));
        }
        map.insert(key.clone(), value.clone());
    }
    build(&map)
}

fn build(map: &BTreeMap<String, String>) -> Result<RunConfig, UsageError> {
    let n_sites: usize = require_parsed(map, "n_sites")?;
    let j_x = parse_or(map, "j_x", 1.0)?;
    let h_x = parse_or(map, "h_x", 0.0)?;
    let h_z = parse_or(map, "h_z", 1.0)?;
    let tau = parse_tau(
        map.get("tau")
            .ok_or_else(|| UsageError("missing config key: tau".into()))?,
    )?;
    let variant = match map.get("variant").map(String::as_str) {
        None | Some("integrable") => Variant::Integrable,
        Some("nonintegrable") => Variant::Nonintegrable,
        Some(other) => {
            return Err(UsageError(format!(
                "variant must be integrable or nonintegrable, got {other}"
            )))
        }
    };
    let axis = match map.get("axis").map(String::as_str) {
        None | Some("tm") => ObservableAxis::Transverse,
        Some("lm") => ObservableAxis::Longitudinal,
        Some(other) => return Err(UsageError(format!("axis must be tm or lm, got {other}"))),
    };
    let site_l: usize = require_parsed(map, "l")?;
    let site_m: usize = require_parsed(map, "m")?;
    let n_max: usize = require_parsed(map, "n_max")?;
    let stride: usize = parse_or(map, "stride", 1usize)?;
    let seed: u64 = parse_or(map, "seed", 0u64)?;
    let initial = match map.get("initial").map(String::as_str) {
        None => axis.default_initial(),
        Some("allup") => InitialState::AllUpZ,
        Some("allright") => InitialState::AllRightX,
        Some("haar") => InitialState::HaarRandom { seed },
        Some(other) => {
            return Err(UsageError(format!(
                "initial must be allup, allright, or haar, got {other}"
            )))
        }
    };

    let config = ModelConfig::with_cap(n_sites, j_x, h_x, h_z, tau, variant, site_cap())
        .map_err(|e| UsageError(e.to_string()))?;
    let request = OtocRequest::new(config, axis, site_l, site_m, n_max, stride, initial)
        .map_err(|e| UsageError(e.to_string()))?;
    Ok(RunConfig {
        request,
        out_dir: map.get("out_dir").cloned(),
    })
}

fn require_parsed<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<T, UsageError> {
    let raw = map
        .get(key)
        .ok_or_else(|| UsageError(format!("missing config key: {key}")))?;
    raw.parse()
        .map_err(|_| UsageError(format!("config key {key} has invalid value {raw:?}")))
}

fn parse_or<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, UsageError> {
    match map.get(key) {
        None => Ok(default),
        Some(raw) => raw
            .parse()
            .map_err(|_| UsageError(format!("config key {key} has invalid value {raw:?}"))),
    }
}

/// Kick periods: a float, or `<k>eps[/<d>]` in units of eps = pi/28.
pub fn parse_tau(raw: &str) -> Result<f64, UsageError> {
    let s = raw.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    if let Some(idx) = s.find("eps") {
        let (pre, rest) = (&s[..idx], &s[idx + 3..]);
        let factor: f64 = if pre.is_empty() {
            1.0
        } else {
            pre.parse()
                .map_err(|_| UsageError(format!("invalid tau shorthand: {raw:?}")))?
        };
        let divisor: f64 = if rest.is_empty() {
            1.0
        } else if let Some(den) = rest.strip_prefix('/') {
            den.parse()
                .map_err(|_| UsageError(format!("invalid tau shorthand: {raw:?}")))?
        } else {
            return Err(UsageError(format!("invalid tau shorthand: {raw:?}")));
        };
        if divisor == 0.0 {
            return Err(UsageError(format!("invalid tau shorthand: {raw:?}")));
        }
        return Ok(factor * EPSILON / divisor);
    }
    Err(UsageError(format!("cannot parse tau value {raw:?}")))
}
