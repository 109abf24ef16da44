//! Segmentation of correlator series into characteristic, dynamic, and
//! near-saturation regions, and the fits extracted from each.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::otoc::OtocSeries;

/// Default threshold separating "still at the pre-characteristic plateau"
/// from a genuine departure: just above accumulated round-off, since the
/// plateau is exactly zero in exact arithmetic.
pub const DEPARTURE_THRESHOLD: f64 = 1e-10;

/// C level treated as a meaningful departure when scanning for revivals.
pub const REVIVAL_DEPARTURE: f64 = 1e-2;

/// How close Re F must come back to 1 to count as a revival.
pub const REVIVAL_TOLERANCE: f64 = 1e-3;

/// Functional form fitted to the exponent-vs-separation profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileModel {
    /// b = b_max - kappa |N/2 - delta_l|
    TriangularLinear,
    /// b = b_max - lambda |N/2 - delta_l|^2
    Quadratic,
}

/// Saturation-region fit flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SaturationMode {
    /// Least-squares slope of Re F against n over the window.
    LinearDecay,
    /// Slope of the strict local maxima of Re F (the dashed-envelope
    /// construction).
    EnvelopeLinearDecay,
    /// Scan for Re F returning within `REVIVAL_TOLERANCE` of 1 after a
    /// genuine departure.
    RevivalScan,
}

/// Power-law fit of the dynamic region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Exponent (slope of log C against log n).
    pub b: f64,
    pub prefactor: f64,
    pub stderr: f64,
}

/// Saturation fit: decay rate per kick (positive = decaying) and whether a
/// revival was seen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationFit {
    pub mu: f64,
    pub revival_detected: bool,
}

/// Everything extracted from one series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub t_char: Option<usize>,
    pub dynamic_window: Option<(usize, usize)>,
    pub b: Option<f64>,
    pub b_stderr: Option<f64>,
    pub prefactor: Option<f64>,
    pub t_s: Option<usize>,
    pub mu: Option<f64>,
    pub revival_detected: bool,
}

/// Exponent profile over separations with the fitted model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentProfile {
    pub separations: Vec<usize>,
    pub exponents: Vec<f64>,
    pub model: ProfileModel,
    /// kappa for the triangular model, lambda for the quadratic one.
    pub kappa_or_lambda: f64,
    pub b_max: f64,
    /// Fitted model evaluated at delta_l = 1.
    pub b_at_edge: f64,
    pub residual_rms: f64,
}

/// First kick at which C exceeds the threshold, or None if the series never
/// departs.
pub fn detect_characteristic_kick(series: &OtocSeries, threshold: f64) -> Option<usize> {
    series
        .kicks
        .iter()
        .zip(&series.c_values)
        .find(|(_, &c)| c > threshold)
        .map(|(&n, _)| n)
}

/// Saturation onset: first kick where the centered 5-point moving average
/// of C exceeds 0.9 times the mean of the trailing quarter of the series.
pub fn detect_saturation_onset(series: &OtocSeries) -> Option<usize> {
    let c = &series.c_values;
    let len = c.len();
    if len < 8 {
        return None;
    }
    let tail = &c[len - len / 4..];
    let trailing_mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let target = 0.9 * trailing_mean;
    for i in 2..len - 2 {
        let ma: f64 = c[i - 2..=i + 2].iter().sum::<f64>() / 5.0;
        if ma > target {
            return Some(series.kicks[i]);
        }
    }
    None
}

/// Least-squares fit of log C against log n over kicks in
/// `window = (n_lo, n_hi)` inclusive.
pub fn fit_power_law(series: &OtocSeries, window: (usize, usize)) -> Result<PowerLawFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&n, &c) in series.kicks.iter().zip(&series.c_values) {
        if n == 0 || n < window.0 || n > window.1 {
            continue;
        }
        if c <= 0.0 {
            return Err(Error::FitDomain(format!(
                "nonpositive C = {c} at kick {n} inside the fit window"
            )));
        }
        xs.push((n as f64).ln());
        ys.push(c.ln());
    }
    if xs.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: xs.len(),
        });
    }
    let (slope, intercept, stderr) = linear_fit(&xs, &ys);
    Ok(PowerLawFit {
        b: slope,
        prefactor: intercept.exp(),
        stderr,
    })
}

/// Contiguous dynamic-region fit window in kick units: starts at the first
/// kick (n > 0) with C >= c_lo and ends just before the first later kick
/// with C > c_hi. Returns None if no point qualifies.
pub fn dynamic_fit_window(series: &OtocSeries, c_lo: f64, c_hi: f64) -> Option<(usize, usize)> {
    let mut lo = None;
    let mut hi = None;
    for (&n, &c) in series.kicks.iter().zip(&series.c_values) {
        if n == 0 {
            continue;
        }
        if lo.is_none() {
            if c >= c_lo {
                lo = Some(n);
                hi = Some(n);
            }
            continue;
        }
        if c > c_hi {
            break;
        }
        hi = Some(n);
    }
    lo.zip(hi)
}

/// Fit the exponent-vs-separation profile with the vertex pinned at N/2.
pub fn fit_exponent_profile(
    points: &[(usize, f64)],
    n_sites: usize,
    model: ProfileModel,
) -> Result<ExponentProfile> {
    let mut distinct: Vec<usize> = points.iter().map(|p| p.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: distinct.len(),
        });
    }
    let half = n_sites as f64 / 2.0;
    let xs: Vec<f64> = points
        .iter()
        .map(|&(dl, _)| {
            let v = (half - dl as f64).abs();
            match model {
                ProfileModel::TriangularLinear => v,
                ProfileModel::Quadratic => v * v,
            }
        })
        .collect();
    let bs: Vec<f64> = points.iter().map(|p| p.1).collect();
    // b = b_max - k x: ordinary least squares in (b_max, k)
    let m = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sy: f64 = bs.iter().sum();
    let sxy: f64 = xs.iter().zip(&bs).map(|(x, y)| x * y).sum();
    let det = m * sxx - sx * sx;
    if det.abs() < 1e-30 {
        return Err(Error::FitDomain(
            "degenerate separations for profile fit".into(),
        ));
    }
    let k = -(m * sxy - sx * sy) / det;
    let b_max = (sy + k * sx) / m;
    let residual_rms = (xs
        .iter()
        .zip(&bs)
        .map(|(x, y)| (y - (b_max - k * x)).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    let edge = {
        let v = (half - 1.0).abs();
        let x = match model {
            ProfileModel::TriangularLinear => v,
            ProfileModel::Quadratic => v * v,
        };
        b_max - k * x
    };
    Ok(ExponentProfile {
        separations: points.iter().map(|p| p.0).collect(),
        exponents: bs,
        model,
        kappa_or_lambda: k,
        b_max,
        b_at_edge: edge,
        residual_rms,
    })
}

/// Saturation fit over kicks in `window` inclusive.
pub fn fit_saturation(
    series: &OtocSeries,
    window: (usize, usize),
    mode: SaturationMode,
) -> Result<SaturationFit> {
    let mut ns = Vec::new();
    let mut re = Vec::new();
    for (&n, f) in series.kicks.iter().zip(&series.f_values) {
        if n >= window.0 && n <= window.1 {
            ns.push(n as f64);
            re.push(f.re);
        }
    }
    if ns.len() < 10 {
        return Err(Error::InsufficientData {
            needed: 10,
            got: ns.len(),
        });
    }
    match mode {
        SaturationMode::LinearDecay => {
            let (slope, _, _) = linear_fit(&ns, &re);
            Ok(SaturationFit {
                mu: -slope,
                revival_detected: false,
            })
        }
        SaturationMode::EnvelopeLinearDecay => {
            let (mn, my) = strict_local_maxima(&ns, &re);
            if mn.len() < 2 {
                return Err(Error::InsufficientData {
                    needed: 2,
                    got: mn.len(),
                });
            }
            let (slope, _, _) = linear_fit(&mn, &my);
            Ok(SaturationFit {
                mu: -slope,
                revival_detected: false,
            })
        }
        SaturationMode::RevivalScan => {
            let revival = scan_revival(series, window);
            Ok(SaturationFit {
                mu: 0.0,
                revival_detected: revival,
            })
        }
    }
}

/// Whether Re F returns within `REVIVAL_TOLERANCE` of 1 (inside the window)
/// after the series first genuinely departs from 1 anywhere before or inside
/// the window.
fn scan_revival(series: &OtocSeries, window: (usize, usize)) -> bool {
    let mut departed_at = None;
    for (&n, &c) in series.kicks.iter().zip(&series.c_values) {
        if c > REVIVAL_DEPARTURE {
            departed_at = Some(n);
            break;
        }
    }
    let Some(dep) = departed_at else {
        return false;
    };
    series
        .kicks
        .iter()
        .zip(&series.f_values)
        .any(|(&n, f)| n > dep && n >= window.0 && n <= window.1 && f.re >= 1.0 - REVIVAL_TOLERANCE)
}

/// Strict local maxima over a 3-point stencil; on a tie with the next point
/// the earlier kick wins.
fn strict_local_maxima(ns: &[f64], ys: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut mn = Vec::new();
    let mut my = Vec::new();
    for i in 1..ys.len().saturating_sub(1) {
        if ys[i] > ys[i - 1] && ys[i] >= ys[i + 1] {
            mn.push(ns[i]);
            my.push(ys[i]);
        }
    }
    (mn, my)
}

/// Full three-region segmentation with the default departure threshold.
pub fn classify_regions(series: &OtocSeries) -> Result<RegionReport> {
    classify_regions_with_threshold(series, DEPARTURE_THRESHOLD)
}

/// Full three-region segmentation: characteristic kick, saturation onset,
/// dynamic power-law fit between them, saturation envelope slope and
/// revival scan beyond the onset. Fits that lack data leave their fields
/// empty rather than failing the whole report.
pub fn classify_regions_with_threshold(
    series: &OtocSeries,
    threshold: f64,
) -> Result<RegionReport> {
    if series.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let t_char = detect_characteristic_kick(series, threshold);
    let t_s = detect_saturation_onset(series);
    let last_kick = *series.kicks.last().expect("nonempty");

    let mut report = RegionReport {
        t_char,
        dynamic_window: None,
        b: None,
        b_stderr: None,
        prefactor: None,
        t_s,
        mu: None,
        revival_detected: false,
    };

    if let (Some(tc), Some(ts)) = (t_char, t_s) {
        if tc + 1 <= ts.saturating_sub(1) {
            let window = (tc + 1, ts - 1);
            report.dynamic_window = Some(window);
            if let Ok(fit) = fit_power_law(series, window) {
                report.b = Some(fit.b);
                report.b_stderr = Some(fit.stderr);
                report.prefactor = Some(fit.prefactor);
            }
        }
    }

    if let Some(ts) = t_s {
        if let Ok(fit) = fit_saturation(series, (ts, last_kick), SaturationMode::EnvelopeLinearDecay)
        {
            report.mu = Some(fit.mu);
        }
        if let Ok(fit) = fit_saturation(series, (ts, last_kick), SaturationMode::RevivalScan) {
            report.revival_detected = fit.revival_detected;
        }
    }

    Ok(report)
}

/// Ordinary least squares; returns (slope, intercept, slope standard error).
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let m = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / m;
    let mean_y = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    if sxx == 0.0 {
        return (0.0, mean_y, 0.0);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let dof = m - 2.0;
    let stderr = if dof > 0.0 {
        let ssr: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
            .sum();
        (ssr / dof / sxx).sqrt()
    } else {
        0.0
    };
    (slope, intercept, stderr)
}
