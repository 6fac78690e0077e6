use sievenorm_core::arith::chi3;
use sievenorm_core::quadrature::{l1_norm_with, l2_norm_sq, l2_norm_sq_quadrature};
use sievenorm_core::{
    ArithmeticTables, CoeffKind, CoefficientSequence, Error, L1Estimate, Result, Support,
};

use super::{with_grids, Settings};
use crate::row::{CheckKind, ExperimentRow};

/// The squarefree-supported inputs of the theorem experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquarefreeInput {
    Mobius,
    Random(u64),
}

fn need_even(n: usize) -> Result<()> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::Parameter("N must be even and at least 2"));
    }
    Ok(())
}

fn l1(seq: &CoefficientSequence, settings: &Settings) -> Result<L1Estimate> {
    l1_norm_with(seq, &settings.l1_options())
}

/// `L¹ / reference` against the empirical floor; non-convergence fails the row.
fn floor_row(
    name: &str,
    seq: &CoefficientSequence,
    reference: f64,
    settings: &Settings,
) -> Result<ExperimentRow> {
    let est = l1(seq, settings)?;
    let row = ExperimentRow::new(name, CheckKind::Empirical, est.value)
        .n(seq.len())
        .against(reference)
        .extra("floor", settings.floor);
    let ok = row.ratio.is_some_and(|r| r >= settings.floor) && est.converged;
    Ok(with_grids(row, &est).pass_if(ok))
}

pub fn squarefree_theorem_ratio(
    tables: &ArithmeticTables,
    input: SquarefreeInput,
    n: usize,
    settings: &Settings,
) -> Result<ExperimentRow> {
    need_even(n)?;
    let (name, kind) = match input {
        SquarefreeInput::Mobius => ("squarefree_theorem_mobius", CoeffKind::Mobius),
        SquarefreeInput::Random(s) => ("squarefree_theorem_random", CoeffKind::SquarefreeRandom(s)),
    };
    let seq = tables.coefficient_sequence(kind, n)?;
    let mut row = squarefree_sequence_row(tables, name, &seq, settings)?.seed(kind.seed());
    if input == SquarefreeInput::Mobius {
        let nf = n as f64;
        let eq5 = row.measured * nf.ln().sqrt() / nf.powf(0.125);
        row = row.extra("eq5_ratio", eq5);
        row.pass &= eq5 >= settings.floor;
    }
    Ok(row)
}

/// `L¹(b) N^{3/8} (log N)^{1/2} / ‖b‖₂` for any squarefree-supported `b`.
pub fn squarefree_sequence_row(
    tables: &ArithmeticTables,
    name: &str,
    seq: &CoefficientSequence,
    settings: &Settings,
) -> Result<ExperimentRow> {
    let n = seq.len();
    if n < 2 {
        return Err(Error::Parameter("N must be at least 2"));
    }
    let checked =
        CoefficientSequence::with_support(tables, seq.coeffs().to_vec(), Support::Squarefree)?;
    let l2 = l2_norm_sq(&checked);
    if l2 == 0.0 {
        return Err(Error::Parameter("sequence is identically zero"));
    }
    let nf = n as f64;
    let reference = l2.sqrt() / (nf.powf(0.375) * nf.ln().sqrt());
    Ok(floor_row(name, &checked, reference, settings)?.extra("l2_sq", l2))
}

/// `L¹(|b|²) <= L¹(b)²` for random squarefree `b`, with slack `5 rel_tol`.
pub fn autocorrelation_row(
    tables: &ArithmeticTables,
    n: usize,
    seed: u64,
    settings: &Settings,
) -> Result<ExperimentRow> {
    let b = tables.coefficient_sequence(CoeffKind::SquarefreeRandom(seed), n)?;
    let lhs = l1(&b.squared_moduli(), settings)?;
    let rhs = l1(&b, settings)?;
    let bound = rhs.value * rhs.value;
    Ok(
        ExperimentRow::new("autocorrelation", CheckKind::Invariant, lhs.value)
            .n(n)
            .seed(Some(seed))
            .against(bound)
            .extra("l1_b", rhs.value)
            .extra("slack", 5.0 * settings.rel_tol)
            .converged(lhs.converged && rhs.converged)
            .pass_if(lhs.value <= bound * (1.0 + 5.0 * settings.rel_tol)),
    )
}

/// `L¹(S) N^{1/4} (log N)^{1/2} / (Σ_p |a_p|²)^{1/2}` for prime-supported `a`.
pub fn prime_weighted_row(
    tables: &ArithmeticTables,
    name: &str,
    seq: &CoefficientSequence,
    settings: &Settings,
) -> Result<ExperimentRow> {
    let n = seq.len();
    if n < 2 {
        return Err(Error::Parameter("N must be at least 2"));
    }
    let checked =
        CoefficientSequence::with_support(tables, seq.coeffs().to_vec(), Support::Primes)?;
    let l2 = l2_norm_sq(&checked);
    if l2 == 0.0 {
        return Err(Error::Parameter("sequence is identically zero"));
    }
    let nf = n as f64;
    let reference = l2.sqrt() / (nf.powf(0.25) * nf.ln().sqrt());
    Ok(floor_row(name, &checked, reference, settings)?.extra("l2_sq", l2))
}

/// The three prime-supported rows: the prime indicator, `χ₃` on primes,
/// and random prime-supported coefficients.
pub fn prime_support_experiments(
    tables: &ArithmeticTables,
    n: usize,
    seed: u64,
    settings: &Settings,
) -> Result<Vec<ExperimentRow>> {
    need_even(n)?;
    let nf = n as f64;
    let ln = nf.ln();

    let primes = tables.coefficient_sequence(CoeffKind::PrimeIndicator, n)?;
    let indicator = floor_row("prime_indicator", &primes, nf.sqrt() / (ln * ln), settings)?;

    let chi = tables.coefficient_sequence(CoeffKind::Chi3OnPrimes, n)?;
    let partial: i64 = tables
        .primes_up_to(n)
        .iter()
        .map(|&p| i64::from(chi3(u64::from(p))))
        .sum();
    let chi_row = floor_row("chi3_on_primes", &chi, nf.powf(0.25) / ln, settings)?
        .extra("chi3_prime_sum", partial as f64)
        .extra("chi3_prime_sum_scaled", partial as f64 / (nf.sqrt() / ln));

    let a = tables.coefficient_sequence(CoeffKind::PrimeRandom(seed), n)?;
    let weighted = prime_weighted_row(tables, "prime_random", &a, settings)?.seed(Some(seed));
    Ok(vec![indicator, chi_row, weighted])
}

/// L¹ and L² of one coefficient sequence with the convergence evidence.
pub fn norm_row(
    tables: &ArithmeticTables,
    kind: CoeffKind,
    n: usize,
    settings: &Settings,
) -> Result<ExperimentRow> {
    let seq = tables.coefficient_sequence(kind, n)?;
    let est = l1(&seq, settings)?;
    let l2 = l2_norm_sq(&seq);
    let l2_quad = l2_norm_sq_quadrature(&seq)?;
    let bracket = est.bracket_ok.unwrap_or(false);
    let row = ExperimentRow::new(
        format!("norm_{}", kind.name()),
        CheckKind::Invariant,
        est.value,
    )
    .n(n)
    .seed(kind.seed())
    .extra("l2_sq", l2)
    .extra("l2_sq_quadrature", l2_quad)
    .extra("l2_sqrt", l2.sqrt())
    .extra("max_modulus", seq.max_modulus());
    let parseval = (l2 - l2_quad).abs() <= 1e-9 * l2.max(1e-300);
    let mut row = with_grids(row, &est).pass_if(bracket && parseval);
    if !est.converged {
        row = row.note("L1 refinement did not reach rel_tol");
    }
    Ok(row)
}
