//! L¹ and L² norms on `[0, 1]` by the rectangle rule on `j/M`.
//!
//! For a trigonometric polynomial the rectangle rule is exact on `|S|²` once
//! `M` exceeds the degree, so the L² route doubles as a Parseval check. For
//! `|S|` it is only spectrally accurate, and the L¹ estimate is refined by
//! doubling `M` until two successive values agree to `rel_tol`.

use alloc::vec::Vec;

use crate::arith::ArithmeticTables;
use crate::expsum::{
    grid_eval_kernel, grid_eval_sequence_with_budget, CoefficientSequence, KernelSpec,
    DEFAULT_GRID_BUDGET,
};
use crate::sum::{sum, sum_by};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Options {
    pub rel_tol: f64,
    /// Initial samples per unit of `N + 1`.
    pub oversample_start: usize,
    /// Refinement stops once the oversampling factor would pass this.
    pub oversample_cap: usize,
    pub grid_budget: usize,
}

impl Default for L1Options {
    fn default() -> Self {
        Self {
            rel_tol: 1e-4,
            oversample_start: 16,
            oversample_cap: 1024,
            grid_budget: DEFAULT_GRID_BUDGET,
        }
    }
}

impl L1Options {
    pub fn with_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.rel_tol.is_nan() || self.rel_tol <= 0.0 {
            return Err(Error::Parameter("rel_tol must be positive"));
        }
        if self.oversample_start < 2 {
            return Err(Error::Parameter("oversampling must start at 2 or more"));
        }
        Ok(())
    }
}

/// An L¹ value together with the evidence for it.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Estimate {
    pub value: f64,
    /// `(M, value at M)` for each grid tried, `M` strictly increasing.
    pub grids: Vec<(usize, f64)>,
    pub converged: bool,
    /// Relative change between the last two grids (infinite with one grid).
    pub last_delta: f64,
    pub rel_tol: f64,
    /// For sequences: `max |a_n| <= value <= (Σ|a_n|²)^{1/2}`, both of
    /// which hold exactly for the discrete mean once `M > N`.
    pub bracket_ok: Option<bool>,
}

/// `Σ |a_n|²`.
pub fn l2_norm_sq(seq: &CoefficientSequence) -> f64 {
    let c = seq.coeffs();
    sum_by(c.len(), |i| c[i].norm_sqr())
}

/// `∫|S|²` by the rectangle rule on `M = 2N + 2` points.
pub fn l2_norm_sq_quadrature(seq: &CoefficientSequence) -> Result<f64> {
    let m = 2 * seq.len() + 2;
    let g = grid_eval_sequence_with_budget(seq, m, DEFAULT_GRID_BUDGET)?;
    Ok(sum_by(m, |j| g.values[j].norm_sqr()) / m as f64)
}

fn refine(
    n: usize,
    opts: &L1Options,
    mut mean_abs: impl FnMut(usize) -> Result<f64>,
) -> Result<L1Estimate> {
    opts.validate()?;
    let mut grids: Vec<(usize, f64)> = Vec::new();
    let mut last_delta = f64::INFINITY;
    let mut converged = false;
    let mut oversample = opts.oversample_start;
    while oversample <= opts.oversample_cap.max(opts.oversample_start) {
        let m = match oversample.checked_mul(n + 1) {
            Some(m) if m <= opts.grid_budget => m,
            _ if grids.is_empty() => {
                return Err(Error::Capacity {
                    what: "L1 quadrature grid",
                    requested: (oversample as u64).saturating_mul(n as u64 + 1),
                    limit: opts.grid_budget as u64,
                })
            }
            _ => break,
        };
        let v = mean_abs(m)?;
        if let Some(&(_, prev)) = grids.last() {
            let scale = v.abs().max(prev.abs());
            last_delta = if scale == 0.0 {
                0.0
            } else {
                (v - prev).abs() / scale
            };
        }
        grids.push((m, v));
        if last_delta < opts.rel_tol {
            converged = true;
            break;
        }
        oversample *= 2;
    }
    let value = grids.last().map_or(0.0, |g| g.1);
    Ok(L1Estimate {
        value,
        grids,
        converged,
        last_delta,
        rel_tol: opts.rel_tol,
        bracket_ok: None,
    })
}

/// `∫₀¹ |Σ a_n e(nα)| dα`, starting from `M = oversample_start · (N + 1)`
/// with the default cap and grid budget.
pub fn l1_norm(
    seq: &CoefficientSequence,
    rel_tol: f64,
    oversample_start: usize,
) -> Result<L1Estimate> {
    l1_norm_with(
        seq,
        &L1Options {
            rel_tol,
            oversample_start,
            ..L1Options::default()
        },
    )
}

pub fn l1_norm_with(seq: &CoefficientSequence, opts: &L1Options) -> Result<L1Estimate> {
    let mut est = refine(seq.len(), opts, |m| {
        let g = grid_eval_sequence_with_budget(seq, m, opts.grid_budget)?;
        Ok(sum_by(m, |j| g.values[j].norm()) / m as f64)
    })?;
    let upper = libm::sqrt(l2_norm_sq(seq));
    let lower = seq.max_modulus();
    let slack = 1e-9 * est.value.max(1e-300);
    est.bracket_ok = Some(est.value <= upper + slack && est.value >= lower - slack);
    Ok(est)
}

/// `∫₀¹ |K(α)| dα` for any kernel, by the same refinement.
pub fn l1_norm_kernel(
    tables: &ArithmeticTables,
    spec: &KernelSpec,
    rel_tol: f64,
) -> Result<L1Estimate> {
    l1_norm_kernel_with(tables, spec, &L1Options::with_tol(rel_tol))
}

pub fn l1_norm_kernel_with(
    tables: &ArithmeticTables,
    spec: &KernelSpec,
    opts: &L1Options,
) -> Result<L1Estimate> {
    refine(spec.n, opts, |m| {
        let g = grid_eval_kernel(tables, spec, m)?;
        let abs: Vec<f64> = g.values.iter().map(|v| v.abs()).collect();
        Ok(sum(&abs) / m as f64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::CoeffKind;
    use crate::Complex64;
    use alloc::vec;

    #[test]
    fn l2_examples() {
        let t = ArithmeticTables::build(1000).unwrap();
        let ones = t.coefficient_sequence(CoeffKind::Ones, 5).unwrap();
        assert_eq!(l2_norm_sq(&ones), 5.0);
        let mu = t.coefficient_sequence(CoeffKind::Mobius, 10).unwrap();
        assert_eq!(l2_norm_sq(&mu), 7.0);
        let r = t
            .coefficient_sequence(CoeffKind::RandomComplex(5), 256)
            .unwrap();
        let a = l2_norm_sq(&r);
        let b = l2_norm_sq_quadrature(&r).unwrap();
        assert!((a - b).abs() <= 1e-9 * a);
    }

    #[test]
    fn l1_of_single_exponential_is_one() {
        let mut c = vec![Complex64::new(0.0, 0.0); 10];
        c[0] = Complex64::new(1.0, 0.0);
        let est = l1_norm(&CoefficientSequence::new(c), 1e-6, 2).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
        assert!(est.converged);
        assert_eq!(est.bracket_ok, Some(true));
    }

    #[test]
    fn l1_parameter_errors() {
        let s = CoefficientSequence::new(vec![Complex64::new(1.0, 0.0); 4]);
        assert!(l1_norm(&s, 0.0, 16).is_err());
        assert!(l1_norm(&s, 1e-4, 1).is_err());
        let tiny = L1Options {
            grid_budget: 8,
            ..L1Options::default()
        };
        assert!(matches!(
            l1_norm_with(&s, &tiny),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn l1_reports_non_convergence() {
        let t = ArithmeticTables::build(1000).unwrap();
        let s = t.coefficient_sequence(CoeffKind::Mobius, 200).unwrap();
        let opts = L1Options {
            rel_tol: 1e-15,
            oversample_start: 2,
            oversample_cap: 8,
            ..L1Options::default()
        };
        let est = l1_norm_with(&s, &opts).unwrap();
        assert!(!est.converged);
        assert_eq!(est.grids.len(), 3);
        assert!(est.grids.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn fejer_has_unit_mean() {
        let t = ArithmeticTables::build(100).unwrap();
        let est = l1_norm_kernel(&t, &KernelSpec::fejer(32), 1e-6).unwrap();
        assert!((est.value - 1.0).abs() < 1e-6);
    }
}
