//! Implementations of the CLI subcommands.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use floq_otoc::analysis::{
    classify_regions_with_threshold, fit_exponent_profile, ProfileModel, RegionReport,
    DEPARTURE_THRESHOLD,
};
use floq_otoc::{
    compute_otoc_series_with_budget, ModelConfig, ObservableAxis, OtocRequest, OtocSeries,
    Variant,
};

use crate::config_file::{parse_file, parse_tau, site_cap};
use crate::manifest::{read_manifest, write_manifest, RunManifest, MANIFEST_FILE};
use crate::series_io::{read_series, series_from_columns, write_series, SERIES_FILE};
use crate::UsageError;

pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub truncated: bool,
}

pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub stride: Option<usize>,
    pub budget_secs: Option<f64>,
    pub set: Vec<(String, String)>,
}

/// `run`: compute one series and persist series.csv + manifest.json.
///
/// The config may be a key-value file or a previously written manifest.json
/// (re-runs reproduce the series byte for byte).
pub fn cmd_run(config_path: &Path, opts: &RunOptions) -> Result<RunOutcome, UsageError> {
    let (mut request, out_dir) = load_request(config_path, &opts.set)?;
    if let Some(stride) = opts.stride {
        if stride == 0 {
            return Err(UsageError("stride must be >= 1".into()));
        }
        request.stride = stride;
    }
    let out_dir = opts
        .out
        .clone()
        .or(out_dir.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let budget = opts.budget_secs.map(Duration::from_secs_f64);

    let started = Instant::now();
    let series = compute_otoc_series_with_budget(&request, budget)
        .map_err(|e| UsageError(e.to_string()))?;
    let duration = started.elapsed().as_secs_f64();
    persist_series(&out_dir, &series, duration)?;
    Ok(RunOutcome {
        out_dir,
        truncated: series.truncated,
    })
}

fn load_request(
    config_path: &Path,
    overrides: &[(String, String)],
) -> Result<(OtocRequest, Option<String>), UsageError> {
    let looks_like_manifest = config_path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if looks_like_manifest {
        if !overrides.is_empty() {
            return Err(UsageError(
                "--set overrides do not apply to manifest re-runs".into(),
            ));
        }
        let manifest = read_manifest(config_path)?;
        return Ok((manifest.rerun_request(), None));
    }
    let cfg = parse_file(config_path, overrides)?;
    Ok((cfg.request, cfg.out_dir))
}

fn persist_series(out_dir: &Path, series: &OtocSeries, duration_secs: f64) -> Result<(), UsageError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| UsageError(format!("cannot create {}: {e}", out_dir.display())))?;
    write_series(&out_dir.join(SERIES_FILE), series)
        .map_err(|e| UsageError(format!("cannot write series: {e}")))?;
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        request: series.request,
        last_kick: series.kicks.last().copied().unwrap_or(0),
        truncated: series.truncated,
        duration_secs,
        outputs: vec![SERIES_FILE.into()],
    };
    write_manifest(&out_dir.join(MANIFEST_FILE), &manifest)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Tau,
    DeltaL,
    Sites,
}

pub struct SweepOptions {
    pub out: PathBuf,
    pub jobs: usize,
    pub stride: Option<usize>,
    pub budget_secs: Option<f64>,
    pub threshold: f64,
    pub set: Vec<(String, String)>,
}

/// `sweep`: one series per value plus a profile table (and an exponent
/// profile fit for separation sweeps).
pub fn cmd_sweep(
    config_path: &Path,
    axis: SweepAxis,
    values: &[String],
    opts: &SweepOptions,
) -> Result<(), UsageError> {
    if values.is_empty() {
        return Err(UsageError("sweep needs a non-empty --values list".into()));
    }
    let cfg = parse_file(config_path, &opts.set)?;
    let mut base = cfg.request;
    if let Some(stride) = opts.stride {
        base.stride = stride.max(1);
    }

    // materialize one request per sweep value
    let mut requests: Vec<(String, OtocRequest)> = Vec::new();
    for raw in values {
        let (label, request) = derive_request(&base, axis, raw)?;
        requests.push((label, request));
    }

    std::fs::create_dir_all(&opts.out)
        .map_err(|e| UsageError(format!("cannot create {}: {e}", opts.out.display())))?;

    // dispatch up to `jobs` series computations concurrently
    let jobs = opts.jobs.max(1);
    let budget = opts.budget_secs.map(Duration::from_secs_f64);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<std::sync::Mutex<Option<Result<OtocSeries, UsageError>>>> =
        requests.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(requests.len()) {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if idx >= requests.len() {
                    break;
                }
                let started = Instant::now();
                let outcome = compute_otoc_series_with_budget(&requests[idx].1, budget)
                    .map_err(|e| UsageError(e.to_string()))
                    .and_then(|series| {
                        let dir = opts.out.join(&requests[idx].0);
                        persist_series(&dir, &series, started.elapsed().as_secs_f64())?;
                        Ok(series)
                    });
                *results[idx].lock().unwrap() = Some(outcome);
            });
        }
    });

    let mut series_list = Vec::new();
    for (slot, (label, _)) in results.iter().zip(&requests) {
        let outcome = slot
            .lock()
            .unwrap()
            .take()
            .unwrap_or_else(|| Err(UsageError(format!("series {label} was never computed"))));
        series_list.push(outcome?);
    }

    write_profile(&opts.out, axis, &requests, &series_list, opts.threshold)
}

fn derive_request(
    base: &OtocRequest,
    axis: SweepAxis,
    raw: &str,
) -> Result<(String, OtocRequest), UsageError> {
    let mut request = *base;
    let label;
    match axis {
        SweepAxis::Tau => {
            let tau = parse_tau(raw)?;
            let c = request.config;
            request.config =
                ModelConfig::with_cap(c.n_sites, c.j_x, c.h_x, c.h_z, tau, c.variant, site_cap())
                    .map_err(|e| UsageError(e.to_string()))?;
            label = format!("tau-{}", sanitize(raw));
        }
        SweepAxis::DeltaL => {
            let delta: usize = raw
                .parse()
                .map_err(|_| UsageError(format!("bad separation value {raw:?}")))?;
            let n = request.config.n_sites;
            if delta == 0 || delta >= n {
                return Err(UsageError(format!(
                    "separation {delta} outside [1, {}]",
                    n - 1
                )));
            }
            request.site_m = (request.site_l + delta) % n;
            label = format!("dl-{delta}");
        }
        SweepAxis::Sites => {
            let n_sites: usize = raw
                .parse()
                .map_err(|_| UsageError(format!("bad chain size {raw:?}")))?;
            let c = request.config;
            request.config = ModelConfig::with_cap(
                n_sites, c.j_x, c.h_x, c.h_z, c.tau, c.variant, site_cap(),
            )
            .map_err(|e| UsageError(e.to_string()))?;
            // keep the separation of the base request
            let delta = base.separation().min(n_sites - 1);
            request.site_l = 0;
            request.site_m = delta;
            label = format!("n-{n_sites}");
        }
    }
    // revalidate the assembled request
    let request = OtocRequest::new(
        request.config,
        request.axis,
        request.site_l,
        request.site_m,
        request.n_max,
        request.stride,
        request.initial,
    )
    .map_err(|e| UsageError(e.to_string()))?;
    Ok((label, request))
}

fn sanitize(raw: &str) -> String {
    raw.chars()
        .map(|c| if c.is_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect()
}

fn write_profile(
    out: &Path,
    axis: SweepAxis,
    requests: &[(String, OtocRequest)],
    series_list: &[OtocSeries],
    threshold: f64,
) -> Result<(), UsageError> {
    let mut profile = String::new();
    match axis {
        SweepAxis::DeltaL => {
            profile.push_str("delta_l,b,b_stderr\n");
            let mut points = Vec::new();
            for ((_, request), series) in requests.iter().zip(series_list) {
                let report = classify_regions_with_threshold(series, threshold)
                    .map_err(|e| UsageError(e.to_string()))?;
                let delta = request.separation();
                match (report.b, report.b_stderr) {
                    (Some(b), Some(se)) => {
                        profile.push_str(&format!("{delta},{b},{se}\n"));
                        points.push((delta, b));
                    }
                    _ => profile.push_str(&format!("{delta},,\n")),
                }
            }
            if points.len() >= 3 {
                let base = &requests[0].1;
                let model = if base.axis == ObservableAxis::Longitudinal
                    && base.config.variant == Variant::Nonintegrable
                {
                    ProfileModel::Quadratic
                } else {
                    ProfileModel::TriangularLinear
                };
                if let Ok(fit) = fit_exponent_profile(&points, base.config.n_sites, model) {
                    let json = serde_json::to_string_pretty(&fit)
                        .map_err(|e| UsageError(format!("cannot encode profile fit: {e}")))?;
                    std::fs::write(out.join("exponent_profile.json"), json + "\n")
                        .map_err(|e| UsageError(format!("cannot write profile fit: {e}")))?;
                }
            }
        }
        SweepAxis::Tau => {
            profile.push_str("tau,t_char\n");
            for ((_, request), series) in requests.iter().zip(series_list) {
                let t_char = floq_otoc::analysis::detect_characteristic_kick(series, threshold);
                match t_char {
                    Some(t) => profile.push_str(&format!("{},{t}\n", request.config.tau)),
                    None => profile.push_str(&format!("{},\n", request.config.tau)),
                }
            }
        }
        SweepAxis::Sites => {
            profile.push_str("n_sites,t_char\n");
            for ((_, request), series) in requests.iter().zip(series_list) {
                let t_char = floq_otoc::analysis::detect_characteristic_kick(series, threshold);
                match t_char {
                    Some(t) => profile.push_str(&format!("{},{t}\n", request.config.n_sites)),
                    None => profile.push_str(&format!("{},\n", request.config.n_sites)),
                }
            }
        }
    }
    std::fs::write(out.join("profile.csv"), profile)
        .map_err(|e| UsageError(format!("cannot write profile.csv: {e}")))
}

/// `analyze`: region report for a previously persisted run directory.
pub fn cmd_analyze(run_dir: &Path, threshold: Option<f64>) -> Result<RegionReport, UsageError> {
    let manifest = read_manifest(&run_dir.join(MANIFEST_FILE))?;
    let (kicks, values) = read_series(&run_dir.join(SERIES_FILE))?;
    let series = series_from_columns(manifest.request, kicks, values, manifest.truncated)?;
    let report =
        classify_regions_with_threshold(&series, threshold.unwrap_or(DEPARTURE_THRESHOLD))
            .map_err(|e| UsageError(e.to_string()))?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| UsageError(format!("cannot encode report: {e}")))?;
    std::fs::write(run_dir.join("report.json"), json + "\n")
        .map_err(|e| UsageError(format!("cannot write report.json: {e}")))?;
    Ok(report)
}

pub fn render_report(report: &RegionReport) -> String {
    let fmt_opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
    let fmt_f = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6}"));
    format!(
        "t_char={} t_s={} b={} b_stderr={} mu={} revival={}\n",
        fmt_opt(report.t_char),
        fmt_opt(report.t_s),
        fmt_f(report.b),
        fmt_f(report.b_stderr),
        report.mu.map_or("-".to_string(), |x| format!("{x:.3e}")),
        report.revival_detected
    )
}
