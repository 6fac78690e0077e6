use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sievenorm_core::expsum::{
    eval_kernel, eval_kernel_spectral, grid_eval_sequence, grid_eval_spectral, spectral_weights,
};
use sievenorm_core::largesieve::sieve_bound_for_kernel_gap;
use sievenorm_core::quadrature::l2_norm_sq;
use sievenorm_core::sum::sum_by;
use sievenorm_core::{
    ArithmeticTables, CoeffKind, Complex64, Error, KernelKind, KernelSpec, Result,
};

use crate::row::{CheckKind, ExperimentRow};

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `max_j |K(j/M) - T_N(j/M)|` for `K` in {gstar, h, h_truncated}, checked
/// against the large-sieve ceiling, plus nonnegativity of `K - T_N` for the
/// two full kernels and the size of `H_N - H_{N,P}` for the truncated one.
pub fn kernel_gap_scan(
    tables: &ArithmeticTables,
    n: usize,
    p: usize,
    kind: KernelKind,
    m: usize,
) -> Result<ExperimentRow> {
    let spec = KernelSpec { kind, n, p, q: 0 };
    spec.validate()?;
    let nf = n as f64;
    let (bound_kind, ceiling) = match kind {
        KernelKind::GStar => (KernelKind::GStar, nf.powf(0.75) * nf.ln()),
        KernelKind::H | KernelKind::HTruncated => (KernelKind::H, nf.sqrt() * nf.ln()),
        _ => return Err(Error::Parameter("gap scan needs gstar, h or h_truncated")),
    };
    let w = spectral_weights(tables, &spec)?;
    let fejer = spectral_weights(tables, &KernelSpec::fejer(n))?;
    let gap_w: Vec<f64> = w.iter().zip(&fejer).map(|(a, b)| a - b).collect();
    let gap = grid_eval_spectral(&gap_w, m, 0.0)?.values;
    let max_gap = max_abs(&gap);
    let min_gap = gap.iter().copied().fold(f64::INFINITY, f64::min);

    let mut certified = sieve_bound_for_kernel_gap(tables, n, p, bound_kind)?;
    let pi_p = tables.primes_up_to(p).len();
    let mut row = ExperimentRow::new(
        format!("kernel_gap_{}", kind.name()),
        CheckKind::Invariant,
        max_gap,
    )
    .n(n)
    .p(p)
    .m(m)
    .extra("min_gap", min_gap)
    .extra("asymptotic_ceiling", ceiling)
    .extra("asymptotic_ratio", max_gap / ceiling)
    .extra("pi_p", pi_p as f64);

    let mut ok = true;
    if kind == KernelKind::HTruncated {
        // |H_N - H_{N,P}| <= 3P, so the H ceiling plus 3P bounds the truncated gap.
        let full = spectral_weights(tables, &KernelSpec::h(n, p))?;
        let cut = p.min(n);
        let low = &full[n - cut..=n + cut];
        let diff = max_abs(&grid_eval_spectral(low, m, 0.0)?.values);
        let limit = 3.5 * p as f64;
        certified += 3.0 * p as f64;
        row = row
            .extra("low_freq_max", diff)
            .extra("low_freq_limit", limit);
        ok &= diff <= limit;
    } else {
        row = row.extra("min_gap_floor", -1e-8 * nf);
        ok &= min_gap >= -1e-8 * nf;
    }
    ok &= max_gap <= certified * (1.0 + 1e-12) + 1e-9;
    row = row.against(certified).pass_if(ok);
    if m < 4 * n {
        row = row.note("grid-resolution warning: M < 4N");
    }
    Ok(row)
}

/// `∫ K(α - β) S(β) dβ` at random `α` for a sequence whose support the
/// kernel's spectrum avoids: squarefree `b` against `G*_N`, prime-supported
/// `a` against `H_{N,P}`. The rectangle rule on `M = 2N + 2` points is exact
/// for these products, so the result should vanish to rounding.
pub fn convolution_annihilation(
    tables: &ArithmeticTables,
    kind: KernelKind,
    n: usize,
    p: usize,
    seed: u64,
    alphas: usize,
) -> Result<ExperimentRow> {
    let coeff = match kind {
        KernelKind::GStar => CoeffKind::SquarefreeRandom(seed),
        KernelKind::HTruncated => CoeffKind::PrimeRandom(seed),
        _ => {
            return Err(Error::Parameter(
                "annihilation is defined for gstar and h_truncated",
            ))
        }
    };
    let spec = KernelSpec { kind, n, p, q: 0 };
    let seq = tables.coefficient_sequence(coeff, n)?;
    let w = spectral_weights(tables, &spec)?;
    let fejer = spectral_weights(tables, &KernelSpec::fejer(n))?;
    let m = 2 * n + 2;
    let s = grid_eval_sequence(&seq, m)?.values;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let convolve = |weights: &[f64], alpha: f64| -> Result<f64> {
        let k = grid_eval_spectral(weights, m, -alpha)?.values;
        let v: Complex64 = sum_by(m, |j| s[j] * k[j]);
        Ok(v.norm() / m as f64)
    };
    let mut worst: f64 = 0.0;
    let mut control: f64 = 0.0;
    for _ in 0..alphas {
        let alpha: f64 = rng.gen();
        worst = worst.max(convolve(&w, alpha)?);
        control = control.max(convolve(&fejer, alpha)?);
    }
    let l1_coeffs = sum_by(seq.len(), |i| seq.coeffs()[i].norm());
    let reference = 1e-6 * n as f64 * l1_coeffs;
    Ok(ExperimentRow::new(
        format!("annihilation_{}", kind.name()),
        CheckKind::Invariant,
        worst,
    )
    .n(n)
    .p(p)
    .m(m)
    .seed(Some(seed))
    .against(reference)
    .extra("alphas", alphas as f64)
    .extra("fejer_control", control)
    .extra("l2_sq", l2_norm_sq(&seq))
    .pass_if(worst <= reference))
}

/// Largest disagreement between the shifted and spectral routes of a
/// kernel over `count` random points, relative to `max(|K|, 1)`.
pub fn kernel_duality_row(
    tables: &ArithmeticTables,
    spec: &KernelSpec,
    count: usize,
    seed: u64,
) -> Result<ExperimentRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let alpha: f64 = rng.gen();
        let a = eval_kernel(tables, spec, alpha)?;
        let b = eval_kernel_spectral(tables, spec, alpha)?;
        worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
    }
    Ok(ExperimentRow::new(
        format!("duality_{}", spec.kind.name()),
        CheckKind::Invariant,
        worst,
    )
    .n(spec.n)
    .p(spec.p)
    .seed(Some(seed))
    .against(1e-6)
    .extra("points", count as f64)
    .pass_if(worst <= 1e-6))
}
