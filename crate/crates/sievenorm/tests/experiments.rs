use std::sync::OnceLock;

use sievenorm::config::{SuiteConfig, EXPERIMENTS};
use sievenorm::experiments::*;
use sievenorm::row::CheckKind;
use sievenorm::run_suite;
use sievenorm::suite::run_suite_with_tables;
use sievenorm_core::arith::chi3;
use sievenorm_core::largesieve::sieve_bound_for_kernel_gap;
use sievenorm_core::{ArithmeticTables, CoeffKind, CoefficientSequence, Complex64, KernelKind};

fn tables() -> &'static ArithmeticTables {
    static T: OnceLock<ArithmeticTables> = OnceLock::new();
    T.get_or_init(|| ArithmeticTables::build(20_000).unwrap())
}

fn settings() -> Settings {
    Settings::default()
}

#[test]
fn gap_scan_respects_certified_bounds() {
    let t = tables();
    let g = kernel_gap_scan(t, 4096, 8, KernelKind::GStar, 32768).unwrap();
    let bound = sieve_bound_for_kernel_gap(t, 4096, 8, KernelKind::GStar).unwrap();
    assert_eq!(g.reference, Some(bound));
    assert!(g.measured <= bound);
    assert!(g.pass && g.note.is_empty());

    let h = kernel_gap_scan(t, 4096, 64, KernelKind::H, 32768).unwrap();
    assert!(h.extras["min_gap"] >= -1e-8 * 4096.0);
    assert!(h.pass);

    for (n, p) in [(1024, 32), (4096, 64), (2000, 10)] {
        let ht = kernel_gap_scan(t, n, p, KernelKind::HTruncated, 4 * n).unwrap();
        assert!(
            ht.extras["low_freq_max"] <= 3.0 * p as f64 * (1.0 + 1e-9),
            "N={n} P={p}"
        );
        assert!(ht.pass);
    }
}

#[test]
fn gap_scan_warns_and_rejects() {
    let t = tables();
    let coarse = kernel_gap_scan(t, 1024, 5, KernelKind::GStar, 1024).unwrap();
    assert!(coarse.note.contains("M < 4N"));
    assert!(kernel_gap_scan(t, 1024, 5, KernelKind::Fejer, 4096).is_err());
    assert!(kernel_gap_scan(t, 1024, 1, KernelKind::H, 4096).is_err());
}

#[test]
fn annihilation_vanishes_and_control_does_not() {
    let t = tables();
    for kind in [KernelKind::GStar, KernelKind::HTruncated] {
        let p = if kind == KernelKind::GStar { 5 } else { 32 };
        let r = convolution_annihilation(t, kind, 1024, p, 42, 10).unwrap();
        assert!(r.pass, "{kind:?}: {}", r.measured);
        assert!(r.extras["fejer_control"] > 1.0);
    }
    assert!(convolution_annihilation(t, KernelKind::H, 1024, 32, 42, 10).is_err());
}

#[test]
fn duality_rows_pass() {
    let t = tables();
    for spec in [
        sievenorm_core::KernelSpec::gstar(1024, 5),
        sievenorm_core::KernelSpec::h(1024, 32),
    ] {
        assert!(kernel_duality_row(t, &spec, 50, 1).unwrap().pass);
    }
}

#[test]
fn squarefree_theorem_examples() {
    let t = tables();
    let s = settings();
    let mu = squarefree_theorem_ratio(t, SquarefreeInput::Mobius, 1024, &s).unwrap();
    let nf = 1024f64;
    assert!(mu.measured >= nf.powf(0.125) / nf.ln().sqrt() * s.floor);
    assert!(mu.extras["eq5_ratio"] >= s.floor);
    assert!(mu.pass && mu.converged == Some(true));
    assert_eq!(mu.check, CheckKind::Empirical);

    assert!(squarefree_theorem_ratio(t, SquarefreeInput::Mobius, 1023, &s).is_err());

    // a single exponential: L1 = 1 exactly
    let mut c = vec![Complex64::new(0.0, 0.0); 1024];
    c[0] = Complex64::new(1.0, 0.0);
    let row = squarefree_sequence_row(t, "single", &CoefficientSequence::new(c), &s).unwrap();
    assert!((row.measured - 1.0).abs() < 1e-9);
    let expect = nf.powf(0.375) * nf.ln().sqrt();
    assert!((row.ratio.unwrap() - expect).abs() < 1e-6 * expect);

    // support off the squarefree integers is rejected
    let mut c = vec![Complex64::new(0.0, 0.0); 16];
    c[3] = Complex64::new(1.0, 0.0);
    assert!(squarefree_sequence_row(t, "bad", &CoefficientSequence::new(c), &s).is_err());
}

#[test]
fn autocorrelation_example() {
    let r = autocorrelation_row(tables(), 512, 42, &settings()).unwrap();
    assert!(r.pass);
    assert!(r.measured <= r.reference.unwrap() * (1.0 + 5e-4));
}

#[test]
fn prime_support_rows() {
    let t = tables();
    let s = settings();
    let rows = prime_support_experiments(t, 4096, 42, &s).unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r.experiment.as_str()).collect();
    assert_eq!(names, ["prime_indicator", "chi3_on_primes", "prime_random"]);
    let nf = 4096f64;
    assert!(rows[0].measured >= s.floor * nf.sqrt() / nf.ln().powi(2));
    let direct: i64 = (2..=4096u64)
        .filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .map(|p| i64::from(chi3(p)))
        .sum();
    assert_eq!(rows[1].extras["chi3_prime_sum"], direct as f64);
    assert!(rows.iter().all(|r| r.pass));

    let mut c = vec![Complex64::new(0.0, 0.0); 4096];
    c[996] = Complex64::new(0.5, 0.5); // 997 is prime
    let single = prime_weighted_row(t, "single", &CoefficientSequence::new(c), &s).unwrap();
    // L1 = |a|, so the ratio is N^{1/4} (log N)^{1/2}
    let expect = nf.powf(0.25) * nf.ln().sqrt();
    assert!((single.ratio.unwrap() - expect).abs() < 1e-6 * expect);
    assert!(prime_support_experiments(t, 4095, 42, &s).is_err());
}

#[test]
fn vaughan_small_case_is_the_weighted_sum() {
    let t = tables();
    let r = vaughan_v(t, 16, 1, &settings()).unwrap();
    let direct: f64 = (0..=16usize)
        .map(|n| (16 - n) as f64 * t.mangoldt(n.max(1)))
        .sum();
    assert!((r.v_spectral - direct).abs() < 1e-9 * direct);
    assert_eq!(r.routes_agree, Some(true));
    assert!((r.v_quadrature.unwrap() - direct).abs() < 1e-9 * direct);
    assert!(vaughan_v(t, 16, 17, &settings()).is_err());
}

#[test]
fn vaughan_routes_and_crude_bound() {
    let t = tables();
    for (n, q) in [(256, 16), (1000, 31), (1024, 32), (600, 100)] {
        let r = vaughan_v(t, n, q, &settings()).unwrap();
        assert_eq!(r.routes_agree, Some(true), "N={n} Q={q}");
        assert!(r.v_spectral.abs() <= r.crude_bound);
        assert!(r.to_row().pass);
    }
}

#[test]
fn vaughan_trend_ten_thousand() {
    let t = tables();
    let s = Settings {
        quadrature_max_n: 0,
        ..settings()
    };
    let small = vaughan_v(t, 1000, 31, &s).unwrap();
    let large = vaughan_v(t, 10_000, 100, &s).unwrap();
    assert!((0.7..=1.3).contains(&large.ratio), "{}", large.ratio);
    assert!((large.ratio - 1.0).abs() < (small.ratio - 1.0).abs());
    assert!(eq29_trend(&[small.clone(), large.clone()], 0.3).pass);
    assert!(!eq29_trend(&[large, small], 0.3).pass);
    assert!(!eq29_trend(&[], 0.3).pass);
}

#[test]
fn lambda_bounds_at_4096() {
    let rows = lambda_l1_bounds(tables(), 4096, 64, &settings()).unwrap();
    assert_eq!(rows[0].experiment, "lambda_chain");
    assert!(rows[0].measured >= rows[0].reference.unwrap());
    assert!(rows[1].extras["l_over_sqrt_n"] >= 0.15);
    assert!(rows[1].measured <= (0.75 * 4096f64 * 4096f64.ln()).sqrt());
    assert!(rows.iter().all(|r| r.pass));
}

#[test]
fn weighted_prime_sum_rows() {
    let t = tables();
    let small = eq34_row(t, 1024).unwrap();
    assert_eq!(small.check, CheckKind::Record);
    assert!(small.pass);
    let big = eq34_row(t, 16384).unwrap();
    assert_eq!(big.check, CheckKind::Empirical);
    assert!(big.pass);
    assert!(eq34_row(t, 1 << 20).is_err());
}

#[test]
fn identity_rows() {
    let t = tables();
    assert!(prime_count_row(t, 20_000).unwrap().pass);
    assert!(prime_count_row(t, 10).is_err());
    assert!(ramanujan_oracle_row(t, 30, 40).unwrap().pass);
    assert!(epsilon_row(12, 30).pass);
    assert!(parseval_row(t, 100, 5, 3).unwrap().pass);
    assert!(squarefree_density_row(t, 20_000).unwrap().pass);
    let r = sieve_check_row(
        t,
        sievenorm_core::largesieve::FareyKind::Reduced,
        22,
        CoeffKind::Mobius,
        512,
        0.0,
    )
    .unwrap();
    assert!(r.pass && r.measured <= 1.0);
}

#[test]
fn small_large_sieve_trials() {
    let cfg = LargeSieveTrials {
        trials: 30,
        seed: 7,
        max_param: 60,
        max_square_param: 20,
        max_n: 64,
    };
    let a = large_sieve_trials(tables(), &cfg).unwrap();
    let b = large_sieve_trials(tables(), &cfg).unwrap();
    assert!(a.pass);
    assert_eq!(a.measured, b.measured);
    assert_eq!(a.note, b.note);
}

#[test]
fn trend_helper() {
    let mk = |n: usize, r: f64| {
        sievenorm::ExperimentRow::new("x", CheckKind::Empirical, r)
            .n(n)
            .against(1.0)
    };
    let rows = [mk(1, 1.0), mk(2, 2.0), mk(3, 2.0)];
    let refs: Vec<_> = rows.iter().collect();
    assert!(nondecreasing_trend("t", &refs, None).pass);
    let rows = [mk(1, 1.0), mk(2, 0.5)];
    let refs: Vec<_> = rows.iter().collect();
    assert!(!nondecreasing_trend("t", &refs, None).pass);
    assert!(!nondecreasing_trend("t", &refs[..1], None).pass);
}

#[test]
fn suite_shapes() {
    assert!(run_suite(&SuiteConfig::parse("").unwrap())
        .unwrap()
        .is_empty());

    let one =
        SuiteConfig::parse("[[experiment]]\nname = \"weighted_prime_sum\"\nn = [4096]").unwrap();
    let rows = run_suite(&one).unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].pass);

    let default = SuiteConfig::default_suite();
    for name in EXPERIMENTS {
        assert!(default.experiment.iter().any(|b| b.name == name), "{name}");
    }
    let gap = default
        .experiment
        .iter()
        .find(|b| b.name == "kernel_gap")
        .unwrap();
    assert_eq!(gap.n, [1 << 10, 1 << 12, 1 << 14, 1 << 16]);
}

#[test]
fn suite_failures_become_rows_and_order_is_stable() {
    let cfg = SuiteConfig::parse(
        r#"
[[experiment]]
name = "kernel_gap"
n = [8, 256]
kinds = ["gstar"]

[[experiment]]
name = "vaughan"
n = [256, 1024]

[[experiment]]
name = "squarefree_theorem"
n = [256, 512]
seeds = [1, 2]
"#,
    )
    .unwrap();
    let t = tables();
    let a = run_suite_with_tables(t, &cfg);
    let b = run_suite_with_tables(t, &cfg);
    let names: Vec<&str> = a.iter().map(|r| r.experiment.as_str()).collect();
    assert_eq!(
        names,
        [
            "kernel_gap",
            "kernel_gap_gstar",
            "vaughan_v",
            "vaughan_v",
            "vaughan_trend",
            "squarefree_theorem_mobius",
            "squarefree_theorem_random",
            "squarefree_theorem_random",
            "squarefree_theorem_mobius",
            "squarefree_theorem_random",
            "squarefree_theorem_random",
            "squarefree_theorem_mobius_trend",
            "eq5_mobius_trend",
            "squarefree_theorem_random_trend",
            "squarefree_theorem_random_trend",
        ]
    );
    assert_eq!(a[0].check, CheckKind::Error);
    assert_eq!(a[0].n, Some(8));
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(
            (x.measured, x.pass, &x.extras),
            (y.measured, y.pass, &y.extras)
        );
    }
}
