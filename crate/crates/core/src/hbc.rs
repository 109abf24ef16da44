//! Short-time correlator predictions from the nested-commutator (HBC)
//! expansion of the kicked evolution, used as a small-tau oracle for the
//! echo engine.
//!
//! Only the low orders with a clean leading term are tabulated; there is no
//! symbolic commutator engine and no extrapolation outside the table.
//!
//! Two coefficient sets are carried. `Tabulated` holds the constants as
//! historically reported for this model family. `Verified` holds the
//! constants obtained by carrying the expansion through explicitly
//! (C = (1/2) <[W(n),V]' [W(n),V]> with the exact kick factors); exact
//! state-vector simulation reproduces the verified set, which differs from
//! the tabulated one by constant factors of 2 to 8 at identical orders.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::otoc::ObservableAxis;

/// Which constant set to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HbcTable {
    Tabulated,
    Verified,
}

/// Leading-order prediction for one (axis, separation, kick) case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HbcPrediction {
    pub axis: ObservableAxis,
    pub delta_l: usize,
    pub n: usize,
    pub tau: f64,
    /// Value of the leading term; zero when the lowest nonvanishing order
    /// has no contribution at this kick count.
    pub c_leading: f64,
    /// Power of tau of the leading term for this (axis, delta_l) family.
    pub order: u32,
}

/// Leading-order C for the tabulated set. Valid for small kick periods
/// (tau <= 0.05 recommended).
///
/// Supported cases: transverse with delta_l in {1, 2}, longitudinal with
/// delta_l = 1, kicks n in {1, 2, 3} (n in {1, 2} for delta_l = 2).
pub fn hbc_predict(
    axis: ObservableAxis,
    delta_l: usize,
    n: usize,
    tau: f64,
) -> Result<HbcPrediction> {
    hbc_predict_with_table(axis, delta_l, n, tau, HbcTable::Tabulated)
}

/// Leading-order C from an explicit constant set.
pub fn hbc_predict_with_table(
    axis: ObservableAxis,
    delta_l: usize,
    n: usize,
    tau: f64,
    table: HbcTable,
) -> Result<HbcPrediction> {
    let t2 = tau * tau;
    let t6 = t2 * t2 * t2;
    let entry = match (axis, delta_l, n) {
        (ObservableAxis::Transverse, 1, 1..=3) => {
            let base = match table {
                HbcTable::Tabulated => 4.0,
                HbcTable::Verified => 8.0,
            };
            Some((base * (n * n) as f64 * t2, 2))
        }
        (ObservableAxis::Transverse, 2, 1) => Some((0.0, 6)),
        (ObservableAxis::Transverse, 2, 2) | (ObservableAxis::Longitudinal, 1, 2) => {
            let base = match table {
                HbcTable::Tabulated => 64.0,
                HbcTable::Verified => 128.0,
            };
            Some((base * t6, 6))
        }
        (ObservableAxis::Longitudinal, 1, 1) => Some((0.0, 6)),
        (ObservableAxis::Longitudinal, 1, 3) => {
            let base = match table {
                HbcTable::Tabulated => 256.0,
                HbcTable::Verified => 2048.0,
            };
            Some((base * t6, 6))
        }
        _ => None,
    };
    match entry {
        Some((c_leading, order)) => Ok(HbcPrediction {
            axis,
            delta_l,
            n,
            tau,
            c_leading,
            order,
        }),
        None => Err(Error::UnsupportedHbcCase {
            axis: match axis {
                ObservableAxis::Transverse => "tm",
                ObservableAxis::Longitudinal => "lm",
            },
            delta_l,
            n,
        }),
    }
}

/// All supported (axis, delta_l, n) tuples.
pub fn supported_cases() -> Vec<(ObservableAxis, usize, usize)> {
    vec![
        (ObservableAxis::Transverse, 1, 1),
        (ObservableAxis::Transverse, 1, 2),
        (ObservableAxis::Transverse, 1, 3),
        (ObservableAxis::Transverse, 2, 1),
        (ObservableAxis::Transverse, 2, 2),
        (ObservableAxis::Longitudinal, 1, 1),
        (ObservableAxis::Longitudinal, 1, 2),
        (ObservableAxis::Longitudinal, 1, 3),
    ]
}
