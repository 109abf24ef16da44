//! Python bindings: the main simulation and analysis entry points exposed
//! as plain functions plus thin result classes.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use floq_otoc::analysis::{classify_regions_with_threshold, DEPARTURE_THRESHOLD};
use floq_otoc::analytic::build_tables;
use floq_otoc::hbc::{hbc_predict_with_table, HbcTable};
use floq_otoc::validate::{run_validation, ValidateLevel};
use floq_otoc::{
    compute_otoc_series, InitialState, ModelConfig, ObservableAxis, OtocRequest, Variant,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_variant(s: &str) -> PyResult<Variant> {
    match s {
        "integrable" => Ok(Variant::Integrable),
        "nonintegrable" => Ok(Variant::Nonintegrable),
        other => Err(value_err(format!(
            "variant must be integrable or nonintegrable, got {other:?}"
        ))),
    }
}

fn parse_axis(s: &str) -> PyResult<ObservableAxis> {
    match s {
        "tm" => Ok(ObservableAxis::Transverse),
        "lm" => Ok(ObservableAxis::Longitudinal),
        other => Err(value_err(format!("axis must be tm or lm, got {other:?}"))),
    }
}

/// One computed correlator series.
#[pyclass(name = "OtocSeries")]
struct PyOtocSeries {
    inner: floq_otoc::OtocSeries,
}

#[pymethods]
impl PyOtocSeries {
    /// Evaluated kick counts.
    #[getter]
    fn kicks(&self) -> Vec<usize> {
        self.inner.kicks.clone()
    }

    /// F(n) values as Python complex numbers.
    #[getter]
    fn f_values(&self) -> Vec<Complex64> {
        self.inner.f_values.clone()
    }

    /// C(n) = 1 - Re F(n).
    #[getter]
    fn c_values(&self) -> Vec<f64> {
        self.inner.c_values.clone()
    }

    #[getter]
    fn truncated(&self) -> bool {
        self.inner.truncated
    }

    /// Three-region segmentation of this series.
    #[pyo3(signature = (threshold = DEPARTURE_THRESHOLD))]
    fn classify(&self, threshold: f64) -> PyResult<PyRegionReport> {
        let report =
            classify_regions_with_threshold(&self.inner, threshold).map_err(value_err)?;
        Ok(PyRegionReport { inner: report })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "OtocSeries(axis={}, n_points={}, truncated={})",
            self.inner.request.axis,
            self.inner.len(),
            self.inner.truncated
        )
    }
}

/// Region segmentation result.
#[pyclass(name = "RegionReport")]
struct PyRegionReport {
    inner: floq_otoc::analysis::RegionReport,
}

#[pymethods]
impl PyRegionReport {
    #[getter]
    fn t_char(&self) -> Option<usize> {
        self.inner.t_char
    }

    #[getter]
    fn t_s(&self) -> Option<usize> {
        self.inner.t_s
    }

    #[getter]
    fn b(&self) -> Option<f64> {
        self.inner.b
    }

    #[getter]
    fn b_stderr(&self) -> Option<f64> {
        self.inner.b_stderr
    }

    #[getter]
    fn mu(&self) -> Option<f64> {
        self.inner.mu
    }

    #[getter]
    fn revival_detected(&self) -> bool {
        self.inner.revival_detected
    }

    fn __repr__(&self) -> String {
        format!(
            "RegionReport(t_char={:?}, t_s={:?}, b={:?}, mu={:?}, revival={})",
            self.inner.t_char, self.inner.t_s, self.inner.b, self.inner.mu,
            self.inner.revival_detected
        )
    }
}

/// Compute an OTOC series with the state-vector echo engine.
///
/// `initial` defaults per axis: all-up for "tm", all-right for "lm";
/// pass "haar" with a `seed` for a random state.
#[pyfunction]
#[pyo3(signature = (n_sites, tau, l, m, n_max, *, axis = "tm", variant = "integrable",
                    j_x = 1.0, h_x = 0.0, h_z = 1.0, stride = 1, initial = None, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn compute_otoc(
    n_sites: usize,
    tau: f64,
    l: usize,
    m: usize,
    n_max: usize,
    axis: &str,
    variant: &str,
    j_x: f64,
    h_x: f64,
    h_z: f64,
    stride: usize,
    initial: Option<&str>,
    seed: u64,
) -> PyResult<PyOtocSeries> {
    let axis = parse_axis(axis)?;
    let variant = parse_variant(variant)?;
    let config = ModelConfig::new(n_sites, j_x, h_x, h_z, tau, variant).map_err(value_err)?;
    let initial = match initial {
        None => axis.default_initial(),
        Some("allup") => InitialState::AllUpZ,
        Some("allright") => InitialState::AllRightX,
        Some("haar") => InitialState::HaarRandom { seed },
        Some(other) => {
            return Err(value_err(format!(
                "initial must be allup, allright, or haar, got {other:?}"
            )))
        }
    };
    let request =
        OtocRequest::new(config, axis, l, m, n_max, stride, initial).map_err(value_err)?;
    let series = compute_otoc_series(&request).map_err(value_err)?;
    Ok(PyOtocSeries { inner: series })
}

/// Closed-form transverse correlator of the integrable chain
/// (J_x = h_z = 1) at the given kick counts.
#[pyfunction]
fn analytic_tmotoc(
    n_sites: usize,
    tau: f64,
    delta_l: usize,
    kicks: Vec<usize>,
) -> PyResult<Vec<Complex64>> {
    let tables = build_tables(n_sites, tau).map_err(value_err)?;
    tables.tmotoc_series(delta_l, &kicks).map_err(value_err)
}

/// Leading-order short-time prediction for C(n).
///
/// With `verified=True` (default) the constants are the re-derived set that
/// exact simulation reproduces; `verified=False` selects the historically
/// tabulated set.
#[pyfunction]
#[pyo3(signature = (axis, delta_l, n, tau, verified = true))]
fn hbc_prediction(axis: &str, delta_l: usize, n: usize, tau: f64, verified: bool) -> PyResult<f64> {
    let axis = parse_axis(axis)?;
    let table = if verified {
        HbcTable::Verified
    } else {
        HbcTable::Tabulated
    };
    let p = hbc_predict_with_table(axis, delta_l, n, tau, table).map_err(value_err)?;
    Ok(p.c_leading)
}

/// Run the cross-validation suite. Returns (passed, report_text).
#[pyfunction]
#[pyo3(signature = (level = "quick"))]
fn validate(level: &str) -> PyResult<(bool, String)> {
    let level = match level {
        "quick" => ValidateLevel::Quick,
        "full" => ValidateLevel::Full,
        other => return Err(value_err(format!("level must be quick or full, got {other:?}"))),
    };
    let report = run_validation(level).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok((report.passed(), report.render_text()))
}

#[pymodule]
fn _floq_otoc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOtocSeries>()?;
    m.add_class::<PyRegionReport>()?;
    m.add_function(wrap_pyfunction!(compute_otoc, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_tmotoc, m)?)?;
    m.add_function(wrap_pyfunction!(hbc_prediction, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add("EPSILON", floq_otoc::EPSILON)?;
    Ok(())
}
