//! Expands a [`SuiteConfig`] into experiment tasks and runs them.

use rayon::prelude::*;
use sievenorm_core::expsum::integer_root;
use sievenorm_core::{ArithmeticTables, KernelKind, KernelSpec, Result};

use crate::config::{ExperimentBlock, SuiteConfig};
use crate::experiments::{self as ex, LargeSieveTrials, Settings, SquarefreeInput};
use crate::row::{timed, CheckKind, ExperimentRow};

const DEFAULT_SEED: u64 = 42;

type Job<'a> =
    Box<dyn Fn(&ArithmeticTables, &Settings) -> Result<Vec<ExperimentRow>> + Send + Sync + 'a>;

/// One unit of parallel work: a block index and a closure producing rows.
struct Task<'a> {
    block: usize,
    name: &'a str,
    n: Option<usize>,
    run: Job<'a>,
}

fn one(row: Result<ExperimentRow>) -> Result<Vec<ExperimentRow>> {
    row.map(|r| vec![r])
}

fn sqrt_floor(n: usize) -> usize {
    integer_root(n as u64, 2) as usize
}

/// The table size a config needs.
pub fn required_table_size(cfg: &SuiteConfig) -> usize {
    let mut need = 1000;
    for b in &cfg.experiment {
        need = need.max(b.n.iter().copied().max().unwrap_or(0));
        for x in [b.upto, b.q_max, b.p, b.q].into_iter().flatten() {
            need = need.max(x);
        }
        if b.name == "large_sieve" {
            let d = LargeSieveTrials::default();
            need = need
                .max(b.max_param.unwrap_or(d.max_param) as usize)
                .max(b.max_square_param.unwrap_or(d.max_square_param) as usize)
                .max(b.max_n.unwrap_or(d.max_n));
        }
        if b.name == "parseval" && b.n.is_empty() {
            need = need.max(4096);
        }
    }
    need
}

fn tasks_for<'a>(i: usize, b: &'a ExperimentBlock) -> Vec<Task<'a>> {
    let seed = b.seed.unwrap_or(DEFAULT_SEED);
    let name = b.name.as_str();
    let task = |n: Option<usize>, run: Job<'a>| Task {
        block: i,
        name,
        n,
        run,
    };
    let mut out = Vec::new();
    match name {
        "ramanujan_oracle" => {
            let (q, r) = (b.q_max.unwrap_or(200), b.n_range.unwrap_or(200));
            out.push(task(
                None,
                Box::new(move |t, _| one(ex::ramanujan_oracle_row(t, q, r))),
            ));
        }
        "epsilon_orthogonality" => {
            let (q, r) = (b.q_max.unwrap_or(50) as u64, b.n_range.unwrap_or(200));
            out.push(task(
                None,
                Box::new(move |_, _| Ok(vec![ex::epsilon_row(q, r)])),
            ));
        }
        "parseval" => {
            let ns = if b.n.is_empty() {
                vec![64, 512, 4096]
            } else {
                b.n.clone()
            };
            let trials = b.trials.unwrap_or(50);
            for n in ns {
                out.push(task(
                    Some(n),
                    Box::new(move |t, _| one(ex::parseval_row(t, n, trials, seed))),
                ));
            }
        }
        "kernel_duality" => {
            let kinds = b
                .kernel_kinds(&[KernelKind::GStar, KernelKind::H])
                .unwrap_or_default();
            let points = b.points.unwrap_or(100);
            for &n in &b.n {
                for &k in &kinds {
                    let mut spec = KernelSpec::with_defaults(k, n);
                    if let Some(p) = b.p {
                        spec.p = p;
                    }
                    out.push(task(
                        Some(n),
                        Box::new(move |t, _| one(ex::kernel_duality_row(t, &spec, points, seed))),
                    ));
                }
            }
        }
        "kernel_gap" => {
            let kinds = b
                .kernel_kinds(&[KernelKind::GStar, KernelKind::H, KernelKind::HTruncated])
                .unwrap_or_default();
            let factor = b.grid_factor.unwrap_or(4);
            for &n in &b.n {
                for &k in &kinds {
                    let p = b.p.unwrap_or(KernelSpec::with_defaults(k, n).p);
                    out.push(task(
                        Some(n),
                        Box::new(move |t, _| one(ex::kernel_gap_scan(t, n, p, k, factor * n))),
                    ));
                }
            }
        }
        "annihilation" => {
            let kinds = b
                .kernel_kinds(&[KernelKind::GStar, KernelKind::HTruncated])
                .unwrap_or_default();
            let points = b.points.unwrap_or(10);
            for &n in &b.n {
                for &k in &kinds {
                    let p = b.p.unwrap_or(KernelSpec::with_defaults(k, n).p);
                    out.push(task(
                        Some(n),
                        Box::new(move |t, _| {
                            one(ex::convolution_annihilation(t, k, n, p, seed, points))
                        }),
                    ));
                }
            }
        }
        "squarefree_theorem" => {
            let seeds = if b.seeds.is_empty() {
                vec![seed]
            } else {
                b.seeds.clone()
            };
            for &n in &b.n {
                let seeds = seeds.clone();
                out.push(task(
                    Some(n),
                    Box::new(move |t, s| {
                        let mut rows = vec![ex::squarefree_theorem_ratio(
                            t,
                            SquarefreeInput::Mobius,
                            n,
                            s,
                        )?];
                        for &sd in &seeds {
                            rows.push(ex::squarefree_theorem_ratio(
                                t,
                                SquarefreeInput::Random(sd),
                                n,
                                s,
                            )?);
                        }
                        Ok(rows)
                    }),
                ));
            }
        }
        "autocorrelation" => {
            for &n in &b.n {
                out.push(task(
                    Some(n),
                    Box::new(move |t, s| one(ex::autocorrelation_row(t, n, seed, s))),
                ));
            }
        }
        "prime_support" => {
            for &n in &b.n {
                out.push(task(
                    Some(n),
                    Box::new(move |t, s| ex::prime_support_experiments(t, n, seed, s)),
                ));
            }
        }
        "vaughan" => {
            for &n in &b.n {
                let q = b.q.unwrap_or(sqrt_floor(n));
                out.push(task(
                    Some(n),
                    Box::new(move |t, s| Ok(vec![ex::vaughan_v(t, n, q, s)?.to_row()])),
                ));
            }
        }
        "lambda_l1" => {
            for &n in &b.n {
                let q = b.q.unwrap_or(sqrt_floor(n));
                out.push(task(
                    Some(n),
                    Box::new(move |t, s| ex::lambda_l1_bounds(t, n, q, s)),
                ));
            }
        }
        "weighted_prime_sum" => {
            for &n in &b.n {
                out.push(task(Some(n), Box::new(move |t, _| one(ex::eq34_row(t, n)))));
            }
        }
        "prime_count" => {
            let upto = b.upto.unwrap_or(1_000_000);
            out.push(task(
                None,
                Box::new(move |t, _| one(ex::prime_count_row(t, upto))),
            ));
        }
        "squarefree_density" => {
            let upto = b.upto.unwrap_or(1_000_000);
            out.push(task(
                None,
                Box::new(move |t, _| one(ex::squarefree_density_row(t, upto))),
            ));
        }
        "large_sieve" => {
            let d = LargeSieveTrials::default();
            let cfg = LargeSieveTrials {
                trials: b.trials.unwrap_or(d.trials),
                seed,
                max_param: b.max_param.unwrap_or(d.max_param),
                max_square_param: b.max_square_param.unwrap_or(d.max_square_param),
                max_n: b.max_n.unwrap_or(d.max_n),
            };
            out.push(task(
                None,
                Box::new(move |t, _| one(ex::large_sieve_trials(t, &cfg))),
            ));
        }
        _ => {}
    }
    out
}

/// Summary rows computed from a block's own rows after it has run.
fn trend_rows(b: &ExperimentBlock, rows: &[ExperimentRow]) -> Vec<ExperimentRow> {
    let pick = |name: &str, seed: Option<u64>| -> Vec<&ExperimentRow> {
        rows.iter()
            .filter(|r| r.experiment == name && (seed.is_none() || r.seed == seed))
            .collect()
    };
    match b.name.as_str() {
        "squarefree_theorem" if b.n.len() >= 2 => {
            let mu = pick("squarefree_theorem_mobius", None);
            let mut out = vec![
                ex::nondecreasing_trend("squarefree_theorem_mobius_trend", &mu, None),
                ex::nondecreasing_trend("eq5_mobius_trend", &mu, Some("eq5_ratio")),
            ];
            let seeds = if b.seeds.is_empty() {
                vec![b.seed.unwrap_or(DEFAULT_SEED)]
            } else {
                b.seeds.clone()
            };
            for s in seeds {
                let r = pick("squarefree_theorem_random", Some(s));
                out.push(
                    ex::nondecreasing_trend("squarefree_theorem_random_trend", &r, None)
                        .seed(Some(s)),
                );
            }
            out
        }
        "vaughan" if b.n.len() >= 2 => {
            // rebuild the ratio series from the rows
            let reports: Vec<ex::VReport> = rows
                .iter()
                .filter(|r| r.experiment == "vaughan_v" && r.check != CheckKind::Error)
                .map(|r| ex::VReport {
                    n: r.n.unwrap_or(0) as usize,
                    q: r.q.unwrap_or(0) as usize,
                    v_spectral: r.measured,
                    v_quadrature: r.extras.get("v_quadrature").copied(),
                    m: r.m.map(|m| m as usize),
                    target: r.reference.unwrap_or(f64::NAN),
                    ratio: r.ratio.unwrap_or(f64::NAN),
                    routes_agree: None,
                    route_tol: 0.0,
                    weighted_mangoldt: 0.0,
                    crude_bound: 0.0,
                })
                .collect();
            vec![ex::eq29_trend(&reports, 0.4)]
        }
        _ => Vec::new(),
    }
}

/// Runs every block of `cfg` against shared tables. Rows within the suite
/// run concurrently; the output order is the config order, with each
/// block's trend rows after its own rows. A failing experiment becomes an
/// error row and the rest of the suite still runs.
pub fn run_suite_with_tables(tables: &ArithmeticTables, cfg: &SuiteConfig) -> Vec<ExperimentRow> {
    let tasks: Vec<Task> = cfg
        .experiment
        .iter()
        .enumerate()
        .flat_map(|(i, b)| tasks_for(i, b))
        .collect();
    let results: Vec<(usize, Vec<ExperimentRow>)> = tasks
        .par_iter()
        .map(|t| {
            let rows = timed(|| match (t.run)(tables, &cfg.settings) {
                Ok(rows) => rows,
                Err(e) => vec![ExperimentRow::error(t.name, t.n.map(|n| n as u64), e)],
            });
            (t.block, rows)
        })
        .collect();
    let mut out = Vec::new();
    for (i, b) in cfg.experiment.iter().enumerate() {
        let rows: Vec<ExperimentRow> = results
            .iter()
            .filter(|(blk, _)| *blk == i)
            .flat_map(|(_, r)| r.iter().cloned())
            .collect();
        let trends = trend_rows(b, &rows);
        out.extend(rows);
        out.extend(trends);
    }
    out
}

/// Builds tables large enough for `cfg` and runs it. An empty config runs
/// nothing and builds nothing.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<ExperimentRow>> {
    if cfg.experiment.is_empty() {
        return Ok(Vec::new());
    }
    let tables = ArithmeticTables::build(required_table_size(cfg))?;
    Ok(run_suite_with_tables(&tables, cfg))
}
