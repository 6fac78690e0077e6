//! Named experiments. Each returns [`ExperimentRow`]s whose pass flags are
//! plain functions of the values they carry.

mod identities;
mod kernels;
mod norms;
mod vaughan;

pub use identities::{
    epsilon_row, large_sieve_trials, parseval_row, prime_count_row, ramanujan_oracle_row,
    sieve_check_row, squarefree_density_row, LargeSieveTrials,
};
pub use kernels::{convolution_annihilation, kernel_duality_row, kernel_gap_scan};
pub use norms::{
    autocorrelation_row, norm_row, prime_support_experiments, prime_weighted_row,
    squarefree_sequence_row, squarefree_theorem_ratio, SquarefreeInput,
};
pub use vaughan::{eq29_trend, eq34_row, lambda_l1_bounds, vaughan_v, VReport};

use serde::{Deserialize, Serialize};
use sievenorm_core::L1Options;

use crate::row::{CheckKind, ExperimentRow};

/// Tolerances and floors shared by every experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// L¹ refinement stops when successive grids agree to this.
    pub rel_tol: f64,
    pub oversample: usize,
    pub oversample_cap: usize,
    /// Empirical floor for the asymptotic ratios.
    pub floor: f64,
    /// Route-agreement slack for V, in units of `N² Q`.
    pub vaughan_tol: f64,
    /// Largest N for which V is also computed by quadrature.
    pub quadrature_max_n: usize,
    /// The ε of the final lower-bound display, for reporting.
    pub epsilon: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-4,
            oversample: 16,
            oversample_cap: 1024,
            floor: 0.1,
            vaughan_tol: 1e-9,
            quadrature_max_n: 4096,
            epsilon: 0.05,
        }
    }
}

impl Settings {
    pub fn l1_options(&self) -> L1Options {
        L1Options {
            rel_tol: self.rel_tol,
            oversample_start: self.oversample,
            oversample_cap: self.oversample_cap,
            ..L1Options::default()
        }
    }

    pub fn as_map(&self) -> std::collections::BTreeMap<String, f64> {
        [
            ("rel_tol", self.rel_tol),
            ("oversample", self.oversample as f64),
            ("oversample_cap", self.oversample_cap as f64),
            ("floor", self.floor),
            ("vaughan_tol", self.vaughan_tol),
            ("quadrature_max_n", self.quadrature_max_n as f64),
            ("epsilon", self.epsilon),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

/// Grid sizes and values of an L¹ estimate, as row extras.
pub(crate) fn with_grids(
    mut row: ExperimentRow,
    est: &sievenorm_core::L1Estimate,
) -> ExperimentRow {
    for (m, v) in &est.grids {
        row = row.extra(&format!("grid_{m}"), *v);
    }
    row.m = est.grids.last().map(|g| g.0 as u64);
    row.extra("last_delta", est.last_delta)
        .extra("rel_tol", est.rel_tol)
        .converged(est.converged)
}

/// Checks that `key` (the ratio, or a named extra) never decreases along
/// `rows` taken in the given order. Rows that failed to run are skipped.
pub fn nondecreasing_trend(
    name: &str,
    rows: &[&ExperimentRow],
    key: Option<&str>,
) -> ExperimentRow {
    let values: Vec<(u64, f64)> = rows
        .iter()
        .filter(|r| r.check != CheckKind::Error)
        .filter_map(|r| {
            let v = match key {
                Some(k) => r.extras.get(k).copied(),
                None => r.ratio,
            };
            Some((r.n?, v?))
        })
        .collect();
    let worst_step = values
        .windows(2)
        .map(|w| w[1].1 - w[0].1)
        .fold(f64::INFINITY, f64::min);
    let measured = if worst_step.is_finite() {
        worst_step
    } else {
        0.0
    };
    let mut row = ExperimentRow::new(name, CheckKind::Empirical, measured)
        .pass_if(values.len() >= 2 && worst_step >= 0.0)
        .note(format!(
            "non-decreasing {} across the N ladder",
            key.unwrap_or("ratio")
        ));
    for (n, v) in &values {
        row = row.extra(&format!("n_{n}"), *v);
    }
    if values.len() < 2 {
        row = row.note("fewer than two points");
    }
    row
}
