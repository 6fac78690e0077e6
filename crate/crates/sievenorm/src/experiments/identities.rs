use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sievenorm_core::arith::ramanujan_sum_direct;
use sievenorm_core::expsum::{e, epsilon};
use sievenorm_core::largesieve::{large_sieve_check, FareyKind};
use sievenorm_core::quadrature::{l2_norm_sq, l2_norm_sq_quadrature};
use sievenorm_core::{ArithmeticTables, CoeffKind, Complex64, Error, Result, SpacedPointSet};

use crate::row::{CheckKind, ExperimentRow};

const SIEVE_SLACK: f64 = 1e-9;

fn need_table(tables: &ArithmeticTables, what: &'static str, x: usize) -> Result<()> {
    if x > tables.n_max() {
        return Err(Error::Range {
            what,
            value: x as f64,
            max: tables.n_max() as f64,
        });
    }
    Ok(())
}

/// `min_{17 <= N <= upto} π(N) log N / N`, which must exceed 1.
pub fn prime_count_row(tables: &ArithmeticTables, upto: usize) -> Result<ExperimentRow> {
    if upto < 17 {
        return Err(Error::Parameter("the prime count bound starts at N = 17"));
    }
    need_table(tables, "N", upto)?;
    let mut count = 0usize;
    let mut worst = f64::INFINITY;
    let mut worst_n = 0;
    for k in 2..=upto {
        count += usize::from(tables.is_prime(k));
        if k >= 17 {
            let r = count as f64 * (k as f64).ln() / k as f64;
            if r < worst {
                worst = r;
                worst_n = k;
            }
        }
    }
    Ok(
        ExperimentRow::new("prime_count_lower", CheckKind::Invariant, worst)
            .n(upto)
            .against(1.0)
            .extra("argmin_n", worst_n as f64)
            .extra("pi_upto", count as f64)
            .pass_if(worst > 1.0),
    )
}

/// Closed-form Ramanujan sums against the direct exponential sum.
pub fn ramanujan_oracle_row(
    tables: &ArithmeticTables,
    q_max: usize,
    n_max: i64,
) -> Result<ExperimentRow> {
    need_table(tables, "q", q_max)?;
    let mut mismatches = 0usize;
    let mut residual: f64 = 0.0;
    for q in 1..=q_max {
        for n in -n_max..=n_max {
            let closed = tables.ramanujan_sum(q, n)?;
            let direct = ramanujan_sum_direct(q as u64, n);
            residual = residual.max((direct - direct.round()).abs());
            if direct.round() as i64 != closed {
                mismatches += 1;
            }
        }
    }
    Ok(
        ExperimentRow::new("ramanujan_oracle", CheckKind::Invariant, mismatches as f64)
            .q(q_max)
            .extra("n_range", n_max as f64)
            .extra("max_rounding_residual", residual)
            .pass_if(mismatches == 0),
    )
}

/// `ε_q(n)` against the complete sum `Σ_{a=1}^{q} e(-na/q)`.
pub fn epsilon_row(q_max: u64, n_range: i64) -> ExperimentRow {
    let mut worst: f64 = 0.0;
    for q in 1..=q_max {
        for n in -n_range..=n_range {
            let direct: Complex64 = (1..=q)
                .map(|a| e(-((n * a as i64).rem_euclid(q as i64) as f64) / q as f64))
                .sum();
            worst = worst.max((direct - Complex64::new(epsilon(q, n), 0.0)).norm());
        }
    }
    ExperimentRow::new("epsilon_orthogonality", CheckKind::Invariant, worst)
        .q(q_max as usize)
        .against(1e-9)
        .extra("n_range", n_range as f64)
        .pass_if(worst <= 1e-9)
}

/// Largest relative gap between `Σ|a_n|²` and its `2N + 2`-point quadrature
/// over `trials` random complex sequences.
pub fn parseval_row(
    tables: &ArithmeticTables,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ExperimentRow> {
    let mut worst: f64 = 0.0;
    for t in 0..trials as u64 {
        let seq = tables.coefficient_sequence(CoeffKind::RandomComplex(seed.wrapping_add(t)), n)?;
        let exact = l2_norm_sq(&seq);
        let quad = l2_norm_sq_quadrature(&seq)?;
        worst = worst.max((exact - quad).abs() / exact);
    }
    Ok(ExperimentRow::new("parseval", CheckKind::Invariant, worst)
        .n(n)
        .m(2 * n + 2)
        .seed(Some(seed))
        .against(1e-9)
        .extra("trials", trials as f64)
        .pass_if(worst <= 1e-9))
}

/// `max_{100 <= Q <= upto} |count(Q)/(6Q/π²) - 1| · √Q / 2`, at most 1.
pub fn squarefree_density_row(tables: &ArithmeticTables, upto: usize) -> Result<ExperimentRow> {
    need_table(tables, "Q", upto)?;
    let mut count = 0usize;
    let mut worst: f64 = 0.0;
    for q in 1..=upto {
        count += usize::from(tables.is_squarefree(q));
        if q >= 100 {
            let ratio = count as f64 / (6.0 / (PI * PI) * q as f64);
            worst = worst.max((ratio - 1.0).abs() * (q as f64).sqrt() / 2.0);
        }
    }
    Ok(
        ExperimentRow::new("squarefree_density", CheckKind::Invariant, worst)
            .q(upto)
            .against(1.0)
            .extra("count", count as f64)
            .extra(
                "density_ratio",
                count as f64 / (6.0 / (PI * PI) * upto as f64),
            )
            .pass_if(worst <= 1.0),
    )
}

/// One large-sieve evaluation on a Farey point set.
pub fn sieve_check_row(
    tables: &ArithmeticTables,
    kind: FareyKind,
    param: u64,
    coeff: CoeffKind,
    n: usize,
    shift: f64,
) -> Result<ExperimentRow> {
    let set = SpacedPointSet::build(tables, kind, param)?;
    let seq = tables.coefficient_sequence(coeff, n)?;
    let c = large_sieve_check(&seq, &set, shift);
    Ok(ExperimentRow::new(
        format!("sieve_check_{}", kind.name()),
        CheckKind::Invariant,
        c.ratio,
    )
    .n(n)
    .p(param as usize)
    .seed(coeff.seed())
    .against(1.0 + SIEVE_SLACK)
    .extra("lhs", c.lhs)
    .extra("rhs", c.rhs)
    .extra("delta", set.delta())
    .extra("points", set.len() as f64)
    .extra("shift", shift)
    .note(coeff.name())
    .pass_if(c.ratio <= 1.0 + SIEVE_SLACK))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LargeSieveTrials {
    pub trials: usize,
    pub seed: u64,
    /// Largest parameter for the prime and reduced Farey sets.
    pub max_param: u64,
    /// Largest parameter for the prime-square Farey set.
    pub max_square_param: u64,
    pub max_n: usize,
}

impl Default for LargeSieveTrials {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 42,
            max_param: 1000,
            max_square_param: 211,
            max_n: 512,
        }
    }
}

struct Trial {
    kind: FareyKind,
    param: u64,
    coeff: CoeffKind,
    n: usize,
    shift: f64,
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    let x = rng
        .gen_range((lo as f64).ln()..=(hi as f64).ln())
        .exp()
        .round() as u64;
    x.clamp(lo, hi)
}

fn draw_trials(cfg: &LargeSieveTrials) -> Vec<Trial> {
    const KINDS: [FareyKind; 3] = [FareyKind::Reduced, FareyKind::Prime, FareyKind::PrimeSquare];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.trials)
        .map(|t| {
            let kind = KINDS[t % 3];
            let cap = if kind == FareyKind::PrimeSquare {
                cfg.max_square_param
            } else {
                cfg.max_param
            };
            // the first round of each kind runs at the largest parameter
            let param = if t < 3 {
                cap
            } else {
                log_uniform(&mut rng, 2, cap)
            };
            let s = rng.gen::<u64>();
            let coeff = match rng.gen_range(0..8) {
                0 => CoeffKind::Mobius,
                1 => CoeffKind::Mangoldt,
                2 => CoeffKind::Chi3,
                3 => CoeffKind::Ones,
                4 => CoeffKind::PrimeIndicator,
                5 => CoeffKind::SquarefreeRandom(s),
                6 => CoeffKind::PrimeRandom(s),
                _ => CoeffKind::RandomComplex(s),
            };
            let n = log_uniform(&mut rng, 1, cfg.max_n as u64) as usize;
            let shift = if t < 3 { 0.0 } else { rng.gen::<f64>() };
            Trial {
                kind,
                param,
                coeff,
                n,
                shift,
            }
        })
        .collect()
}

/// `max ratio` of the large-sieve inequality over randomized sequences,
/// Farey sets and shifts.
pub fn large_sieve_trials(
    tables: &ArithmeticTables,
    cfg: &LargeSieveTrials,
) -> Result<ExperimentRow> {
    let trials = draw_trials(cfg);
    let mut keys: Vec<(FareyKind, u64)> = trials.iter().map(|t| (t.kind, t.param)).collect();
    keys.sort_by_key(|&(k, p)| (k.name(), p));
    keys.dedup();
    let built = keys
        .par_iter()
        .map(|&(k, p)| SpacedPointSet::build(tables, k, p).map(|s| ((k.name(), p), s)))
        .collect::<Result<Vec<_>>>()?;
    let sets: BTreeMap<(&str, u64), SpacedPointSet> = built.into_iter().collect();
    let ratios = trials
        .par_iter()
        .map(|t| {
            let seq = tables.coefficient_sequence(t.coeff, t.n)?;
            Ok(large_sieve_check(&seq, &sets[&(t.kind.name(), t.param)], t.shift).ratio)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (worst_i, worst) = ratios
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
    let mut row = ExperimentRow::new("large_sieve_trials", CheckKind::Invariant, worst)
        .seed(Some(cfg.seed))
        .against(1.0 + SIEVE_SLACK)
        .extra("trials", cfg.trials as f64)
        .extra("point_sets", sets.len() as f64)
        .extra("max_param", cfg.max_param as f64)
        .extra("max_square_param", cfg.max_square_param as f64)
        .extra("max_n", cfg.max_n as f64)
        .pass_if(worst <= 1.0 + SIEVE_SLACK);
    if let Some(t) = trials.get(worst_i) {
        row = row.note(format!(
            "worst: {}({}) {} N={} shift={:.6}",
            t.kind.name(),
            t.param,
            t.coeff.name(),
            t.n,
            t.shift
        ));
    }
    Ok(row)
}
