//! Exponential sums `Σ a_n e(nα)` and the kernel families built from the
//! Fejér kernel `T_N = |F_N|²/N`.
//!
//! Every kernel except `K_{N,Q}` can be evaluated two independent ways: as a
//! sum of shifted copies of `|F_N|²` ("shifted route") or from its Fourier
//! coefficients over `|k| <= N` ("spectral route"). Batch evaluation on the
//! uniform grid `α_j = j/M` goes through one FFT.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::arith::ArithmeticTables;
use crate::sum::{map_indexed, sum_by};
use crate::{fft, Error, Result};

/// Largest grid accepted by the batch evaluators.
pub const DEFAULT_GRID_BUDGET: usize = 1 << 26;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `e(x) = exp(2πix)`, with `x` first reduced to `[-1/2, 1/2]`.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let r = x - libm::round(x);
    let (s, c) = libm::sincos(2.0 * PI * r);
    Complex64::new(c, s)
}

/// `‖x‖`, the distance from `x` to the nearest integer.
#[inline]
pub fn distance_to_nearest_integer(x: f64) -> f64 {
    (x - libm::round(x)).abs()
}

/// `ε_q(n)`: `q` if `q | n`, else 0.
#[inline]
pub fn epsilon(q: u64, n: i64) -> f64 {
    if n.unsigned_abs().is_multiple_of(q) {
        q as f64
    } else {
        0.0
    }
}

/// Largest `r` with `r^k <= n`.
pub fn integer_root(n: u64, k: u32) -> u64 {
    let mut r = libm::pow(n as f64, 1.0 / f64::from(k)) as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Below this distance from an integer `F_N` is summed term by term.
#[inline]
fn near_integer(n: usize, r: f64) -> bool {
    r.abs() < 0.25 / (n as f64 * n as f64)
}

/// `F_N(α) = Σ_{n=1}^{N} e(nα)`.
pub fn eval_f(n: usize, alpha: f64) -> Complex64 {
    let r = alpha - libm::round(alpha);
    if near_integer(n, r) {
        return (1..=n).map(|k| e(k as f64 * r)).sum();
    }
    let t = n as f64 * r;
    let ratio = libm::sin(PI * (t - 2.0 * libm::round(t / 2.0))) / libm::sin(PI * r);
    e((n as f64 + 1.0) * r / 2.0) * ratio
}

fn fejer_sq_reduced(n: usize, r: f64) -> f64 {
    if r == 0.0 {
        return n as f64 * n as f64;
    }
    if near_integer(n, r) {
        return (1..=n)
            .map(|k| e(k as f64 * r))
            .sum::<Complex64>()
            .norm_sqr();
    }
    let t = n as f64 * r;
    let ratio = libm::sin(PI * (t - 2.0 * libm::round(t / 2.0))) / libm::sin(PI * r);
    ratio * ratio
}

/// `|F_N(α)|²`.
pub fn fejer_sq(n: usize, alpha: f64) -> f64 {
    fejer_sq_reduced(n, alpha - libm::round(alpha))
}

/// `|F_N(num/den)|²` with the argument reduced modulo one in integers.
pub fn fejer_sq_rational(n: usize, num: i128, den: i128) -> f64 {
    debug_assert!(den > 0);
    let mut r = num.rem_euclid(den);
    if 2 * r > den {
        r -= den;
    }
    fejer_sq_reduced(n, r as f64 / den as f64)
}

/// The Fejér kernel `T_N(α) = |F_N(α)|² / N`.
pub fn eval_t(n: usize, alpha: f64) -> f64 {
    fejer_sq(n, alpha) / n as f64
}

/// `T_N(α)` from its triangular spectrum `Σ_{|k|<=N} (1 - |k|/N) e(kα)`.
pub fn eval_t_spectral(n: usize, alpha: f64) -> f64 {
    let nf = n as f64;
    1.0 + 2.0
        * sum_by(n, |i| {
            let k = i + 1;
            (1.0 - k as f64 / nf) * libm::cos(2.0 * PI * frac(k as f64 * alpha))
        })
}

#[inline]
fn frac(x: f64) -> f64 {
    x - libm::round(x)
}

/// Which integers a coefficient sequence is allowed to live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    All,
    Squarefree,
    Primes,
}

impl Support {
    pub fn name(self) -> &'static str {
        match self {
            Support::All => "all",
            Support::Squarefree => "squarefree",
            Support::Primes => "primes",
        }
    }
}

/// Coefficients `a_1..a_N` (stored at indices `0..N`) with a support tag.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    coeffs: Vec<Complex64>,
    support: Support,
}

impl CoefficientSequence {
    /// An unrestricted sequence.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self {
            coeffs,
            support: Support::All,
        }
    }

    /// A sequence with a declared support, checked against the tables.
    pub fn with_support(
        tables: &ArithmeticTables,
        coeffs: Vec<Complex64>,
        support: Support,
    ) -> Result<Self> {
        let seq = Self { coeffs, support };
        if tables.respects_support(&seq) {
            Ok(seq)
        } else {
            Err(Error::Parameter(
                "coefficients do not vanish off the declared support",
            ))
        }
    }

    pub(crate) fn from_parts(coeffs: Vec<Complex64>, support: Support) -> Self {
        Self { coeffs, support }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `a_n` for `1 <= n <= N`.
    pub fn get(&self, n: usize) -> Complex64 {
        self.coeffs[n - 1]
    }

    pub fn support(&self) -> Support {
        self.support
    }

    /// The sequence `|a_n|²`, on the same support.
    pub fn squared_moduli(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Complex64::new(c.norm_sqr(), 0.0))
                .collect(),
            support: self.support,
        }
    }

    /// Same length, with `a_n = 0` for `n > m`.
    pub fn truncated(&self, m: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        for c in coeffs.iter_mut().skip(m) {
            *c = ZERO;
        }
        Self {
            coeffs,
            support: self.support,
        }
    }

    /// `max_n |a_n|`.
    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// `Σ_n a_n e(nα)` by Horner's rule in `e(α)`.
pub fn eval_sequence(seq: &CoefficientSequence, alpha: f64) -> Complex64 {
    let w = e(alpha);
    let mut acc = ZERO;
    for c in seq.coeffs.iter().rev() {
        acc = (acc + c) * w;
    }
    acc
}

/// `Σ_n a_n e(nα)` summed term by term with exact phases.
pub fn eval_sequence_direct(seq: &CoefficientSequence, alpha: f64) -> Complex64 {
    seq.coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * e((i + 1) as f64 * alpha))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `T_N`.
    Fejer,
    /// `G*_N`: shifts by `a/p²`, spectrum supported off the squarefree integers.
    GStar,
    /// `H_N`: shifts by `a/p`.
    H,
    /// `H_{N,P}`: `H_N` with the frequencies `|k| <= P` removed.
    HTruncated,
    /// `K_{N,Q}`: Möbius-weighted `|F_N|²` at the reduced fractions `a/q`.
    KPart3,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Fejer => "fejer",
            KernelKind::GStar => "gstar",
            KernelKind::H => "h",
            KernelKind::HTruncated => "h_truncated",
            KernelKind::KPart3 => "k_part3",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "fejer" => KernelKind::Fejer,
            "gstar" => KernelKind::GStar,
            "h" => KernelKind::H,
            "h_truncated" => KernelKind::HTruncated,
            "k_part3" => KernelKind::KPart3,
            _ => return None,
        })
    }
}

/// A kernel together with its length `N` and its prime bound `P` or
/// modulus bound `Q` (whichever the kind uses; the other is ignored).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

impl KernelSpec {
    pub fn fejer(n: usize) -> Self {
        Self {
            kind: KernelKind::Fejer,
            n,
            p: 0,
            q: 0,
        }
    }

    pub fn gstar(n: usize, p: usize) -> Self {
        Self {
            kind: KernelKind::GStar,
            n,
            p,
            q: 0,
        }
    }

    pub fn h(n: usize, p: usize) -> Self {
        Self {
            kind: KernelKind::H,
            n,
            p,
            q: 0,
        }
    }

    pub fn h_truncated(n: usize, p: usize) -> Self {
        Self {
            kind: KernelKind::HTruncated,
            n,
            p,
            q: 0,
        }
    }

    pub fn k_part3(n: usize, q: usize) -> Self {
        Self {
            kind: KernelKind::KPart3,
            n,
            p: 0,
            q,
        }
    }

    /// Default parameters: `P = ⌊N^{1/4}⌋` for `G*`, `P = ⌊N^{1/2}⌋` for
    /// the `H` kernels, `Q = ⌊N^{1/2}⌋` for `K`.
    pub fn with_defaults(kind: KernelKind, n: usize) -> Self {
        let p4 = integer_root(n as u64, 4) as usize;
        let p2 = integer_root(n as u64, 2) as usize;
        match kind {
            KernelKind::Fejer => Self::fejer(n),
            KernelKind::GStar => Self::gstar(n, p4),
            KernelKind::H => Self::h(n, p2),
            KernelKind::HTruncated => Self::h_truncated(n, p2),
            KernelKind::KPart3 => Self::k_part3(n, p2),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Parameter("kernel length N must be positive"));
        }
        match self.kind {
            KernelKind::Fejer => Ok(()),
            KernelKind::GStar | KernelKind::H | KernelKind::HTruncated if self.p < 2 => {
                Err(Error::Parameter("prime bound P must be at least 2"))
            }
            KernelKind::KPart3 if self.q < 1 => Err(Error::Parameter("Q must be at least 1")),
            _ => Ok(()),
        }
    }

    fn validate_against(&self, tables: &ArithmeticTables) -> Result<()> {
        self.validate()?;
        let need = match self.kind {
            KernelKind::GStar | KernelKind::H | KernelKind::HTruncated => self.p,
            KernelKind::KPart3 => self.q,
            KernelKind::Fejer => 0,
        };
        if need > tables.n_max() {
            return Err(Error::Range {
                what: "kernel parameter",
                value: need as f64,
                max: tables.n_max() as f64,
            });
        }
        Ok(())
    }
}

/// `c_k` (for `G*`) or `d_k` (for `H`, and `H_{N,P}` with `|k| <= P`
/// zeroed) at index `k + N`, `|k| <= N`.
pub fn kernel_coefficients(tables: &ArithmeticTables, spec: &KernelSpec) -> Result<Vec<f64>> {
    spec.validate_against(tables)?;
    let n = spec.n as i64;
    let primes = tables.primes_up_to(spec.p);
    let norm = 1.0 / primes.len() as f64;
    let modulus = |p: u32| -> u64 {
        match spec.kind {
            KernelKind::GStar => u64::from(p) * u64::from(p),
            _ => u64::from(p),
        }
    };
    match spec.kind {
        KernelKind::GStar | KernelKind::H | KernelKind::HTruncated => {}
        _ => {
            return Err(Error::Parameter(
                "only gstar, h and h_truncated have coefficient arrays",
            ))
        }
    }
    let mut coeffs: Vec<f64> = (-n..=n)
        .map(|k| norm * primes.iter().map(|&p| epsilon(modulus(p), k)).sum::<f64>())
        .collect();
    if spec.kind == KernelKind::HTruncated {
        let cut = spec.p.min(spec.n) as i64;
        for k in -cut..=cut {
            coeffs[(k + n) as usize] = 0.0;
        }
    }
    Ok(coeffs)
}

/// The full Fourier coefficients `(1 - |k|/N) · coef_k` at index `k + N`
/// for every kernel with a spectral form (all but `K_{N,Q}`).
pub fn spectral_weights(tables: &ArithmeticTables, spec: &KernelSpec) -> Result<Vec<f64>> {
    spec.validate_against(tables)?;
    let n = spec.n as i64;
    let nf = spec.n as f64;
    let tri = |k: i64| 1.0 - k.unsigned_abs() as f64 / nf;
    match spec.kind {
        KernelKind::Fejer => Ok((-n..=n).map(tri).collect()),
        KernelKind::KPart3 => Err(Error::Parameter(
            "k_part3 is evaluated only through its shifted form",
        )),
        _ => {
            let mut w = kernel_coefficients(tables, spec)?;
            for (i, v) in w.iter_mut().enumerate() {
                *v *= tri(i as i64 - n);
            }
            Ok(w)
        }
    }
}

/// `Σ_k w_k e(kα)` for symmetric real weights at index `k + N`.
pub fn eval_symmetric_weights(weights: &[f64], alpha: f64) -> f64 {
    let n = weights.len() / 2;
    weights[n]
        + 2.0
            * sum_by(n, |i| {
                let k = i + 1;
                weights[n + k] * libm::cos(2.0 * PI * frac(k as f64 * alpha))
            })
}

/// A shift `num/den` applied to `|F_N|²`, with its weight.
#[derive(Debug, Clone, Copy)]
struct Shift {
    num: i64,
    den: i64,
    weight: f64,
}

/// Shifts of the non-identity terms, ascending in modulus then numerator.
/// The weights exclude the `1/N` of `T_N`.
fn shifts(tables: &ArithmeticTables, spec: &KernelSpec) -> Vec<Shift> {
    let mut out = Vec::new();
    match spec.kind {
        KernelKind::Fejer => {}
        KernelKind::GStar | KernelKind::H | KernelKind::HTruncated => {
            let primes = tables.primes_up_to(spec.p);
            let w = 1.0 / primes.len() as f64;
            for &p in primes {
                let d = if spec.kind == KernelKind::GStar {
                    i64::from(p) * i64::from(p)
                } else {
                    i64::from(p)
                };
                out.extend((1..d).map(|a| Shift {
                    num: a,
                    den: d,
                    weight: w,
                }));
            }
        }
        KernelKind::KPart3 => {
            for q in 1..=spec.q {
                let mu = tables.mobius(q);
                if mu == 0 {
                    continue;
                }
                for a in 1..=q as u64 {
                    if crate::arith::gcd(a, q as u64) == 1 {
                        out.push(Shift {
                            num: a as i64,
                            den: q as i64,
                            weight: f64::from(mu),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Kernel value by the shifted-`|F_N|²` route.
///
/// `H_{N,P}` has no shifted form of its own; it is `H_N` minus the
/// `2P + 1` low frequencies.
pub fn eval_kernel(tables: &ArithmeticTables, spec: &KernelSpec, alpha: f64) -> Result<f64> {
    spec.validate_against(tables)?;
    let n = spec.n;
    let shifted = shifts(tables, spec);
    let tail = sum_by(shifted.len(), |i| {
        let s = shifted[i];
        s.weight * fejer_sq(n, alpha - s.num as f64 / s.den as f64)
    });
    let value = match spec.kind {
        KernelKind::Fejer => eval_t(n, alpha),
        KernelKind::GStar | KernelKind::H => eval_t(n, alpha) + tail / n as f64,
        KernelKind::HTruncated => {
            let full = eval_t(n, alpha) + tail / n as f64;
            full - low_frequencies(tables, spec, alpha)?
        }
        // q = 1 contributes the unshifted |F_N(α)|².
        KernelKind::KPart3 => tail,
    };
    Ok(value)
}

// Σ_{|k| <= P} (1 - |k|/N) d_k e(kα): what H_N has and H_{N,P} lacks.
fn low_frequencies(tables: &ArithmeticTables, spec: &KernelSpec, alpha: f64) -> Result<f64> {
    let full = KernelSpec::h(spec.n, spec.p);
    let w = spectral_weights(tables, &full)?;
    let cut = spec.p.min(spec.n);
    let lo = &w[spec.n - cut..=spec.n + cut];
    Ok(eval_symmetric_weights(lo, alpha))
}

/// Kernel value by the spectral route.
pub fn eval_kernel_spectral(
    tables: &ArithmeticTables,
    spec: &KernelSpec,
    alpha: f64,
) -> Result<f64> {
    let w = spectral_weights(tables, spec)?;
    Ok(eval_symmetric_weights(&w, alpha))
}

/// Where the samples of a [`GridEvaluation`] came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSource {
    Sequence { n: usize, support: Support },
    Kernel(KernelSpec),
    Spectral { n: usize, offset: f64 },
}

/// Samples at `α_j = j/M`, `0 <= j < M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEvaluation<T> {
    pub values: Vec<T>,
    pub source: GridSource,
}

impl<T> GridEvaluation<T> {
    pub fn m(&self) -> usize {
        self.values.len()
    }
}

fn check_grid(m: usize, budget: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Parameter("grid size M must be positive"));
    }
    if m > budget {
        return Err(Error::Capacity {
            what: "grid",
            requested: m as u64,
            limit: budget as u64,
        });
    }
    Ok(())
}

/// `S(j/M)` for every `j`, through one length-`M` transform. When `M <= N`
/// the coefficients are first folded modulo `M`, which is the same sum
/// since `e(nj/M)` only depends on `n mod M`.
pub fn grid_eval_sequence(
    seq: &CoefficientSequence,
    m: usize,
) -> Result<GridEvaluation<Complex64>> {
    grid_eval_sequence_with_budget(seq, m, DEFAULT_GRID_BUDGET)
}

pub fn grid_eval_sequence_with_budget(
    seq: &CoefficientSequence,
    m: usize,
    budget: usize,
) -> Result<GridEvaluation<Complex64>> {
    check_grid(m, budget)?;
    let mut buf = vec![ZERO; m];
    for (i, c) in seq.coeffs.iter().enumerate() {
        buf[(i + 1) % m] += c;
    }
    fft::backward(&mut buf);
    Ok(GridEvaluation {
        values: buf,
        source: GridSource::Sequence {
            n: seq.len(),
            support: seq.support,
        },
    })
}

/// `Σ_k w_k e(k(offset + j/M))` for symmetric real weights (index `k + N`).
/// The result is real; the imaginary residue is checked in debug builds.
pub fn grid_eval_spectral(weights: &[f64], m: usize, offset: f64) -> Result<GridEvaluation<f64>> {
    check_grid(m, DEFAULT_GRID_BUDGET)?;
    let n = weights.len() / 2;
    let mut buf = vec![ZERO; m];
    for (i, &w) in weights.iter().enumerate() {
        let k = i as i64 - n as i64;
        let twist = if offset == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            e(k as f64 * offset)
        };
        buf[k.rem_euclid(m as i64) as usize] += twist * w;
    }
    fft::backward(&mut buf);
    if cfg!(debug_assertions) {
        let scale = buf.iter().map(|z| z.re.abs()).fold(1.0, f64::max);
        let im = buf.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        debug_assert!(im <= 1e-9 * scale, "imaginary residue {im} vs {scale}");
    }
    Ok(GridEvaluation {
        values: buf.into_iter().map(|z| z.re).collect(),
        source: GridSource::Spectral { n, offset },
    })
}

/// Kernel samples at `j/M`. Spectral kernels take one transform of their
/// `2N + 1` coefficients; `K_{N,Q}` is summed pointwise over its shifts.
pub fn grid_eval_kernel(
    tables: &ArithmeticTables,
    spec: &KernelSpec,
    m: usize,
) -> Result<GridEvaluation<f64>> {
    spec.validate_against(tables)?;
    check_grid(m, DEFAULT_GRID_BUDGET)?;
    let values = if spec.kind == KernelKind::KPart3 {
        let shifted = shifts(tables, spec);
        let mi = m as i128;
        map_indexed(m, |j| {
            // α_j - a/q = (j q - a M) / (M q), reduced exactly.
            sum_by(shifted.len(), |i| {
                let s = shifted[i];
                let den = i128::from(s.den);
                s.weight
                    * fejer_sq_rational(spec.n, j as i128 * den - i128::from(s.num) * mi, mi * den)
            })
        })
    } else {
        let w = spectral_weights(tables, spec)?;
        grid_eval_spectral(&w, m, 0.0)?.values
    };
    Ok(GridEvaluation {
        values,
        source: GridSource::Kernel(*spec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables() -> ArithmeticTables {
        ArithmeticTables::build(1000).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn f_examples() {
        assert!((eval_f(5, 0.0) - Complex64::new(5.0, 0.0)).norm() < 1e-12);
        assert!(eval_f(2, 0.5).norm() < 1e-12);
        let direct: Complex64 = (1..=100).map(|n| e(n as f64 * 0.3)).sum();
        assert!((eval_f(100, 0.3) - direct).norm() < 1e-10);
        // near-integer branch
        let a = 1.0 + 1e-9;
        let direct: Complex64 = (1..=50).map(|n| e(n as f64 * a)).sum();
        assert!((eval_f(50, a) - direct).norm() < 1e-10);
    }

    #[test]
    fn t_examples() {
        assert!((eval_t(8, 0.0) - 8.0).abs() < 1e-12);
        assert!(eval_t(8, 3.0 / 8.0).abs() < 1e-12);
        let a = eval_t(64, 0.237);
        assert!(close(a, eval_t_spectral(64, 0.237), 1e-8));
    }

    #[test]
    fn distance_examples() {
        assert!((distance_to_nearest_integer(0.7) - 0.3).abs() < 1e-15);
        assert_eq!(distance_to_nearest_integer(-1.5), 0.5);
        assert_eq!(distance_to_nearest_integer(3.0), 0.0);
    }

    #[test]
    fn integer_roots() {
        assert_eq!(integer_root(4096, 4), 8);
        assert_eq!(integer_root(4095, 4), 7);
        assert_eq!(integer_root(65536, 2), 256);
        assert_eq!(integer_root(65535, 2), 255);
        assert_eq!(integer_root(1, 4), 1);
    }

    #[test]
    fn defaults() {
        let s = KernelSpec::with_defaults(KernelKind::GStar, 65536);
        assert_eq!(s.p, 16);
        let s = KernelSpec::with_defaults(KernelKind::H, 4096);
        assert_eq!(s.p, 64);
        let s = KernelSpec::with_defaults(KernelKind::KPart3, 1000);
        assert_eq!(s.q, 31);
        assert!(KernelSpec::with_defaults(KernelKind::GStar, 8)
            .validate()
            .is_err());
    }

    #[test]
    fn coefficient_examples() {
        let t = tables();
        let c = kernel_coefficients(&t, &KernelSpec::gstar(20, 2)).unwrap();
        assert_eq!(c[20 + 4], 4.0);
        assert_eq!(c[20 + 6], 0.0);
        assert_eq!(c[20 - 4], 4.0);
        let d = kernel_coefficients(&t, &KernelSpec::h(20, 3)).unwrap();
        assert_eq!(d[20 + 6], 2.5);
        assert_eq!(d[20 + 1], 0.0);
        assert_eq!(d[20 - 1], 0.0);
        assert_eq!(d[20], 2.5);
        let dt = kernel_coefficients(&t, &KernelSpec::h_truncated(20, 3)).unwrap();
        assert_eq!(dt[20 + 3], 0.0);
        assert_eq!(dt[20 + 6], 2.5);
        assert!(kernel_coefficients(&t, &KernelSpec::fejer(20)).is_err());
        assert!(kernel_coefficients(&t, &KernelSpec::k_part3(20, 3)).is_err());
    }

    #[test]
    fn gstar_coefficients_vanish_on_squarefree() {
        let t = tables();
        let c = kernel_coefficients(&t, &KernelSpec::gstar(500, 4)).unwrap();
        for k in 1..=500usize {
            if t.is_squarefree(k) {
                assert_eq!(c[500 + k], 0.0, "k={k}");
            } else if [4, 9].iter().any(|s| k % s == 0) {
                assert!(c[500 + k] > 0.0);
            }
        }
    }

    #[test]
    fn h_coefficients_vanish_exactly_off_small_primes() {
        let t = tables();
        let p = 7;
        let d = kernel_coefficients(&t, &KernelSpec::h(300, p)).unwrap();
        for k in 1..=300usize {
            let zero = k == 1 || t.smallest_prime_factor(k) as usize > p;
            assert_eq!(d[300 + k] == 0.0, zero, "k={k}");
        }
    }

    #[test]
    fn kernel_routes_agree() {
        let t = tables();
        assert!(close(
            eval_kernel(&t, &KernelSpec::fejer(17), 0.3).unwrap(),
            eval_t(17, 0.3),
            1e-15
        ));
        let k = eval_kernel(&t, &KernelSpec::k_part3(4, 1), 0.0).unwrap();
        assert!((k - 16.0).abs() < 1e-12);
        for spec in [
            KernelSpec::gstar(256, 4),
            KernelSpec::h(256, 16),
            KernelSpec::h_truncated(256, 16),
        ] {
            for alpha in [0.0, 0.41, 0.1234567, 0.5] {
                let a = eval_kernel(&t, &spec, alpha).unwrap();
                let b = eval_kernel_spectral(&t, &spec, alpha).unwrap();
                assert!(close(a, b, 1e-6), "{spec:?} α={alpha}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn grid_sequence_examples() {
        let ones3 = CoefficientSequence::new(vec![Complex64::new(1.0, 0.0); 3]);
        let g = grid_eval_sequence(&ones3, 4).unwrap();
        assert!((g.values[0] - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        let ones4 = CoefficientSequence::new(vec![Complex64::new(1.0, 0.0); 4]);
        let g = grid_eval_sequence(&ones4, 4).unwrap();
        assert!(g.values[1].norm() < 1e-12);
        assert!((g.values[0] - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        assert!(grid_eval_sequence(&ones4, 0).is_err());
        assert!(matches!(
            grid_eval_sequence_with_budget(&ones4, 100, 64),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn grid_kernel_examples() {
        let t = tables();
        let g = grid_eval_kernel(&t, &KernelSpec::fejer(4), 8).unwrap();
        assert!((g.values[0] - 4.0).abs() < 1e-12);
        let spec = KernelSpec::gstar(64, 2);
        let g = grid_eval_kernel(&t, &spec, 256).unwrap();
        for j in [0usize, 3, 17, 64, 101, 128, 200, 255] {
            let p = eval_kernel(&t, &spec, j as f64 / 256.0).unwrap();
            assert!((g.values[j] - p).abs() <= 1e-6 * p.abs().max(1.0));
        }
        let spec = KernelSpec::k_part3(32, 5);
        let g = grid_eval_kernel(&t, &spec, 128).unwrap();
        for j in [0usize, 5, 64, 127] {
            let p = eval_kernel(&t, &spec, j as f64 / 128.0).unwrap();
            assert!((g.values[j] - p).abs() <= 1e-8 * p.abs().max(1.0));
        }
    }
}
