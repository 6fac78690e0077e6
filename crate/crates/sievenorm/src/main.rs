use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use sievenorm::config::SuiteConfig;
use sievenorm::experiments::{self as ex, Settings};
use sievenorm::output::{Metadata, OutputRecord};
use sievenorm::row::ExperimentRow;
use sievenorm::suite::{required_table_size, run_suite_with_tables};
use sievenorm_core::expsum::integer_root;
use sievenorm_core::largesieve::FareyKind;
use sievenorm_core::{ArithmeticTables, CoeffKind, KernelKind, KernelSpec};

/// Numerical experiments on L¹ norms of exponential sums over squarefree
/// and prime-supported coefficients.
#[derive(Parser, Debug)]
#[command(name = "sievenorm", version)]
struct Cli {
    /// Emit JSON instead of CSV.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Zero runtimes and omit timestamps, for byte-identical reruns.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Tol {
    /// Relative tolerance of the L¹ refinement.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Initial samples per unit of N + 1.
    #[arg(long, default_value_t = 16)]
    oversample: usize,
    /// Largest oversampling factor tried.
    #[arg(long, default_value_t = 1024)]
    oversample_cap: usize,
}

impl Tol {
    fn settings(self) -> Settings {
        Settings {
            rel_tol: self.tol,
            oversample: self.oversample,
            oversample_cap: self.oversample_cap,
            ..Settings::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// L¹ and L² norms of one coefficient sequence.
    Norm {
        /// mobius, mangoldt, prime_indicator, theta, chi3, chi3_on_primes,
        /// ones, random_complex, squarefree_random, prime_random
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        tol: Tol,
    },
    /// Maximum of |kernel - Fejér| on a grid, against the certified ceiling.
    KernelGap {
        /// gstar, h or h_truncated
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        /// Prime bound (default N^{1/4} for gstar, N^{1/2} otherwise).
        #[arg(long)]
        p: Option<usize>,
        /// Grid size (default 4N).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Large-sieve inequality on a Farey point set.
    SieveCheck {
        /// prime_square_farey, prime_farey or reduced_farey
        #[arg(long)]
        set: String,
        /// P or Q of the point set.
        #[arg(long)]
        param: u64,
        #[arg(long)]
        coeff: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        shift: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// V by both routes and the L¹(Λ) bounds that follow from it.
    Vaughan {
        #[arg(long)]
        n: usize,
        /// Modulus bound (default ⌊N^{1/2}⌋).
        #[arg(long)]
        q: Option<usize>,
        /// Route-agreement slack in units of N²Q.
        #[arg(long, default_value_t = 1e-9)]
        vaughan_tol: f64,
        /// Largest N that also gets the quadrature route.
        #[arg(long, default_value_t = 4096)]
        quadrature_max_n: usize,
        #[command(flatten)]
        tol: Tol,
    },
    /// Run an experiment suite (the built-in one by default).
    Suite {
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        /// Run only the named experiments (repeatable).
        #[arg(long = "only", value_name = "NAME")]
        only: Vec<String>,
    },
}

fn tables_for(n: usize) -> anyhow::Result<ArithmeticTables> {
    Ok(ArithmeticTables::build(n.max(1000))?)
}

fn run(cli: &Cli, meta: &mut Metadata) -> anyhow::Result<Vec<ExperimentRow>> {
    let rows = match &cli.command {
        Command::Norm { kind, n, seed, tol } => {
            let k = CoeffKind::from_name(kind, *seed)
                .with_context(|| format!("unknown coefficient kind {kind:?}"))?;
            let settings = tol.settings();
            meta.settings = settings.as_map();
            meta.seeds = k.seed().into_iter().collect();
            let t = tables_for(*n)?;
            let row = ex::norm_row(&t, k, *n, &settings)?;
            if row.converged == Some(false) {
                eprintln!(
                    "warning: L1 refinement did not reach tol {}",
                    settings.rel_tol
                );
            }
            vec![row]
        }
        Command::KernelGap { kind, n, p, m } => {
            let k = KernelKind::from_name(kind)
                .with_context(|| format!("unknown kernel kind {kind:?}"))?;
            let p = p.unwrap_or(KernelSpec::with_defaults(k, *n).p);
            let m = m.unwrap_or(4 * n);
            let t = tables_for(p)?;
            let row = ex::kernel_gap_scan(&t, *n, p, k, m)?;
            if m < 4 * n {
                eprintln!("warning: grid M = {m} is below 4N");
            }
            vec![row]
        }
        Command::SieveCheck {
            set,
            param,
            coeff,
            n,
            shift,
            seed,
        } => {
            let kind =
                FareyKind::from_name(set).with_context(|| format!("unknown point set {set:?}"))?;
            let c = CoeffKind::from_name(coeff, *seed)
                .with_context(|| format!("unknown coefficient kind {coeff:?}"))?;
            meta.seeds = c.seed().into_iter().collect();
            let t = tables_for((*param as usize).max(*n))?;
            vec![ex::sieve_check_row(&t, kind, *param, c, *n, *shift)?]
        }
        Command::Vaughan {
            n,
            q,
            vaughan_tol,
            quadrature_max_n,
            tol,
        } => {
            let q = q.unwrap_or(integer_root(*n as u64, 2) as usize);
            let settings = Settings {
                vaughan_tol: *vaughan_tol,
                quadrature_max_n: *quadrature_max_n,
                ..tol.settings()
            };
            meta.settings = settings.as_map();
            let t = tables_for(*n)?;
            let mut rows = vec![ex::vaughan_v(&t, *n, q, &settings)?.to_row()];
            rows.extend(ex::lambda_l1_bounds(&t, *n, q, &settings)?);
            rows
        }
        Command::Suite { config, only } => {
            let mut cfg = match config {
                Some(path) => SuiteConfig::load(path)?,
                None => SuiteConfig::default_suite(),
            };
            if !only.is_empty() {
                cfg = cfg.select(only);
                if cfg.experiment.is_empty() {
                    bail!("no experiment in the config matches {only:?}");
                }
            }
            meta.settings = cfg.settings.as_map();
            let mut seeds: Vec<u64> = cfg
                .experiment
                .iter()
                .flat_map(|b| b.seed.into_iter().chain(b.seeds.iter().copied()))
                .collect();
            seeds.sort_unstable();
            seeds.dedup();
            meta.seeds = seeds;
            if cfg.experiment.is_empty() {
                Vec::new()
            } else {
                let t = ArithmeticTables::build(required_table_size(&cfg))?;
                return Ok(run_suite_with_tables(&t, &cfg));
            }
        }
    };
    Ok(rows)
}

fn command_line() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let workers = rayon::current_num_threads();
    let mut meta = Metadata::new(command_line(), workers);
    meta.stamp_now();
    let start = Instant::now();
    let mut rows = match run(&cli, &mut meta) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    // suite rows carry their own runtimes; single commands take the whole run
    if !matches!(cli.command, Command::Suite { .. }) {
        for r in &mut rows {
            r.runtime_ms = elapsed;
        }
    }
    meta.elapsed_ms = Some(elapsed);
    let mut record = OutputRecord::new(meta, rows);
    if cli.no_timing {
        record.strip_timing();
    }
    let text = if cli.json {
        match record.to_json() {
            Ok(mut s) => {
                s.push('\n');
                s
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
    } else {
        record.to_csv()
    };
    let written = match &cli.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(text.as_bytes())),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    for r in record.rows.iter().filter(|r| !r.pass) {
        eprintln!(
            "{} {}: {} {}",
            r.check.name(),
            r.experiment,
            r.measured,
            r.note
        );
    }
    if record.has_violation() {
        ExitCode::from(2)
    } else if record.has_error() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
