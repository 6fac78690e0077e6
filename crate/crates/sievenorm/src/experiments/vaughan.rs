use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use sievenorm_core::expsum::{grid_eval_kernel, grid_eval_sequence};
use sievenorm_core::quadrature::{l1_norm_with, l2_norm_sq};
use sievenorm_core::sum::{sum, sum_by};
use sievenorm_core::{ArithmeticTables, CoeffKind, Error, KernelSpec, Result};

use super::{with_grids, Settings};
use crate::row::{CheckKind, ExperimentRow};

/// Smallest N at which the weighted prime sum is held to its asymptotic band.
const EQ34_MIN_N: usize = 1 << 14;

/// Both evaluations of `V = ∫ (Σ Λ(n) e(nα)) K_{N,Q}(α) dα`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VReport {
    pub n: usize,
    pub q: usize,
    /// `Σ_{q<=Q} μ(q) Σ_{n<=N} (N - n) Λ(n) c_q(n)`.
    pub v_spectral: f64,
    /// The integral by the rectangle rule, when `N` is small enough.
    pub v_quadrature: Option<f64>,
    pub m: Option<usize>,
    /// `3 Q N² / π²`.
    pub target: f64,
    pub ratio: f64,
    pub routes_agree: Option<bool>,
    pub route_tol: f64,
    /// `Σ (N - n) Λ(n)`.
    pub weighted_mangoldt: f64,
    /// `Σ_{q<=Q} q · Σ (N - n) Λ(n)`.
    pub crude_bound: f64,
}

impl VReport {
    pub fn to_row(&self) -> ExperimentRow {
        let mut row = ExperimentRow::new("vaughan_v", CheckKind::Invariant, self.v_spectral)
            .n(self.n)
            .q(self.q)
            .against(self.target)
            .extra("crude_bound", self.crude_bound)
            .extra("weighted_mangoldt", self.weighted_mangoldt)
            .extra("route_tol", self.route_tol);
        row.m = self.m.map(|m| m as u64);
        if let Some(vq) = self.v_quadrature {
            row = row
                .extra("v_quadrature", vq)
                .extra("route_diff", (self.v_spectral - vq).abs());
        } else {
            row = row.note("quadrature route skipped above quadrature_max_n");
        }
        let ok = self.routes_agree.unwrap_or(true) && self.v_spectral.abs() <= self.crude_bound;
        row.pass_if(ok)
    }
}

fn weighted_mangoldt(tables: &ArithmeticTables, n: usize) -> f64 {
    sum_by(n, |i| (n - i - 1) as f64 * tables.mangoldt(i + 1))
}

fn v_spectral(tables: &ArithmeticTables, n: usize, big_q: usize) -> Result<f64> {
    let powers: Vec<usize> = (2..=n).filter(|&k| tables.mangoldt(k) > 0.0).collect();
    let mut per_q = Vec::with_capacity(big_q);
    for q in 1..=big_q {
        let mu = tables.mobius(q);
        if mu == 0 {
            continue;
        }
        let c = powers
            .iter()
            .map(|&k| tables.ramanujan_sum(q, k as i64).map(|c| c as f64))
            .collect::<Result<Vec<f64>>>()?;
        let inner = sum_by(powers.len(), |i| {
            let k = powers[i];
            (n - k) as f64 * tables.mangoldt(k) * c[i]
        });
        per_q.push(f64::from(mu) * inner);
    }
    Ok(sum(&per_q))
}

fn check_nq(tables: &ArithmeticTables, n: usize, q: usize) -> Result<()> {
    if n == 0 || q == 0 {
        return Err(Error::Parameter("N and Q must be positive"));
    }
    if q > n {
        return Err(Error::Parameter("Q must not exceed N"));
    }
    if n > tables.n_max() {
        return Err(Error::Range {
            what: "N",
            value: n as f64,
            max: tables.n_max() as f64,
        });
    }
    Ok(())
}

/// `V` by the Ramanujan-sum double sum and, for `N <= quadrature_max_n`,
/// by quadrature of `(Σ Λ e) · K_{N,Q}` on `M = 4N` points, which is exact
/// for this product of degrees.
pub fn vaughan_v(
    tables: &ArithmeticTables,
    n: usize,
    q: usize,
    settings: &Settings,
) -> Result<VReport> {
    check_nq(tables, n, q)?;
    let vs = v_spectral(tables, n, q)?;
    let nf = n as f64;
    let qf = q as f64;
    let target = 3.0 * qf * nf * nf / (PI * PI);
    let wm = weighted_mangoldt(tables, n);
    let crude = (q * (q + 1) / 2) as f64 * wm;
    let route_tol = (1e-6 * vs.abs()).max(settings.vaughan_tol * nf * nf * qf);

    let (vq, m) = if n <= settings.quadrature_max_n {
        let m = 4 * n;
        let lam = tables.coefficient_sequence(CoeffKind::Mangoldt, n)?;
        let s = grid_eval_sequence(&lam, m)?.values;
        let k = grid_eval_kernel(tables, &KernelSpec::k_part3(n, q), m)?.values;
        (Some(sum_by(m, |j| s[j].re * k[j]) / m as f64), Some(m))
    } else {
        (None, None)
    };
    Ok(VReport {
        n,
        q,
        v_spectral: vs,
        v_quadrature: vq,
        m,
        target,
        ratio: vs / target,
        routes_agree: vq.map(|v| (vs - v).abs() <= route_tol),
        route_tol,
        weighted_mangoldt: wm,
        crude_bound: crude,
    })
}

/// `V π² / (3 Q N²)` should sit within `1 ± band` at the last report and be
/// closer to 1 there than at the first.
pub fn eq29_trend(reports: &[VReport], band: f64) -> ExperimentRow {
    let (Some(first), Some(last)) = (reports.first(), reports.last()) else {
        return ExperimentRow::new("vaughan_trend", CheckKind::Empirical, 0.0).note("no reports");
    };
    let mut row = ExperimentRow::new("vaughan_trend", CheckKind::Empirical, last.ratio)
        .n(last.n)
        .q(last.q)
        .extra("band", band)
        .extra("first_ratio", first.ratio)
        .extra("first_n", first.n as f64);
    for r in reports {
        row = row.extra(&format!("ratio_n_{}", r.n), r.ratio);
    }
    let ok = reports.len() >= 2
        && (last.ratio - 1.0).abs() <= band
        && (last.ratio - 1.0).abs() < (first.ratio - 1.0).abs();
    row.pass_if(ok)
}

/// `L = ∫|Σ Λ(n) e(nα)|` against the lower bound `V / (N (N + Q²))`
/// (an invariant) and against the bracket `0.15 √N <= L <= √(0.75 N log N)`
/// (empirical).
pub fn lambda_l1_bounds(
    tables: &ArithmeticTables,
    n: usize,
    q: usize,
    settings: &Settings,
) -> Result<Vec<ExperimentRow>> {
    check_nq(tables, n, q)?;
    let lam = tables.coefficient_sequence(CoeffKind::Mangoldt, n)?;
    let est = l1_norm_with(&lam, &settings.l1_options())?;
    let l = est.value;
    let v = v_spectral(tables, n, q)?;
    let nf = n as f64;
    let qf = q as f64;
    let lower = v / (nf * (nf + qf * qf));
    let display = (3.0 / (PI * PI) - settings.epsilon) * qf * nf / (nf + qf * qf);

    let chain = ExperimentRow::new("lambda_chain", CheckKind::Invariant, l)
        .n(n)
        .q(q)
        .against(lower)
        .extra("v_spectral", v)
        .extra("display_bound", display)
        .extra("epsilon", settings.epsilon);
    let chain = with_grids(chain, &est).pass_if(l >= lower * (1.0 - 5.0 * settings.rel_tol));

    let ceiling = (0.75 * nf * nf.ln()).sqrt();
    let floor = 0.15;
    let bracket = ExperimentRow::new("lambda_bracket", CheckKind::Empirical, l)
        .n(n)
        .q(q)
        .against(ceiling)
        .extra("l_over_sqrt_n", l / nf.sqrt())
        .extra("sqrt_n_floor", floor)
        .extra("derived_constant", 3.0 / (2.0 * PI * PI))
        .extra("l_over_sqrt_n_log_n", l / (nf * nf.ln()).sqrt())
        .extra("cauchy_upper", l2_norm_sq(&lam).sqrt());
    let bracket = with_grids(bracket, &est).pass_if(l / nf.sqrt() >= floor && l <= ceiling);
    Ok(vec![chain, bracket])
}

/// `Σ (N - n) Λ(n) / (N²/2)`, held to `[0.9, 1.1]` from `N = 2^14` on.
pub fn eq34_row(tables: &ArithmeticTables, n: usize) -> Result<ExperimentRow> {
    if n == 0 || n > tables.n_max() {
        return Err(Error::Range {
            what: "N",
            value: n as f64,
            max: tables.n_max() as f64,
        });
    }
    let s = weighted_mangoldt(tables, n);
    let nf = n as f64;
    let row = ExperimentRow::new("weighted_prime_sum", CheckKind::Record, s)
        .n(n)
        .against(nf * nf / 2.0);
    if n >= EQ34_MIN_N {
        let r = row.ratio.unwrap_or(0.0);
        let ok = (0.9..=1.1).contains(&r);
        Ok(ExperimentRow {
            check: CheckKind::Empirical,
            ..row
        }
        .pass_if(ok))
    } else {
        Ok(row.note("below 2^14: recorded only"))
    }
}
