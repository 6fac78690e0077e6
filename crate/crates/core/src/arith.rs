//! Sieve tables for the classical arithmetic functions, Ramanujan sums, and
//! the coefficient sequences fed to the exponential-sum machinery.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expsum::{e, CoefficientSequence, Support};
use crate::{Error, Result};

/// Largest `n_max` accepted by [`ArithmeticTables::build`].
pub const DEFAULT_TABLE_BUDGET: usize = 1 << 26;

/// μ, Λ, φ and the smallest prime factor for every `1 <= n <= n_max`,
/// plus the ascending list of primes up to `n_max`.
///
/// Index 0 of every per-`n` table is a placeholder and never read.
#[derive(Debug, Clone)]
pub struct ArithmeticTables {
    n_max: usize,
    spf: Vec<u32>,
    mobius: Vec<i8>,
    mangoldt: Vec<f64>,
    phi: Vec<u32>,
    primes: Vec<u32>,
}

impl ArithmeticTables {
    pub fn build(n_max: usize) -> Result<Self> {
        Self::build_with_budget(n_max, DEFAULT_TABLE_BUDGET)
    }

    /// Linear sieve: every composite is crossed out exactly once, by its
    /// smallest prime factor, and μ and φ are filled in on the same pass.
    pub fn build_with_budget(n_max: usize, budget: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::Parameter("n_max must be at least 2"));
        }
        if n_max > budget || n_max >= u32::MAX as usize {
            return Err(Error::Capacity {
                what: "arithmetic tables",
                requested: n_max as u64,
                limit: budget.min(u32::MAX as usize - 1) as u64,
            });
        }
        let len = n_max + 1;
        let mut spf = vec![0u32; len];
        let mut mobius = vec![0i8; len];
        let mut phi = vec![0u32; len];
        let mut primes: Vec<u32> = Vec::new();
        spf[1] = 1;
        mobius[1] = 1;
        phi[1] = 1;
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mobius[i] = -1;
                phi[i] = i as u32 - 1;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let ip = i * p as usize;
                if p > si || ip > n_max {
                    break;
                }
                spf[ip] = p;
                if p == si {
                    mobius[ip] = 0;
                    phi[ip] = phi[i] * p;
                } else {
                    mobius[ip] = -mobius[i];
                    phi[ip] = phi[i] * (p - 1);
                }
            }
        }
        let mut mangoldt = vec![0.0f64; len];
        for &p in &primes {
            let log_p = libm::log(f64::from(p));
            let mut pk = p as usize;
            loop {
                mangoldt[pk] = log_p;
                match pk.checked_mul(p as usize) {
                    Some(next) if next <= n_max => pk = next,
                    _ => break,
                }
            }
        }
        Ok(Self {
            n_max,
            spf,
            mobius,
            mangoldt,
            phi,
            primes,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn check(&self, n: usize, what: &'static str) -> Result<()> {
        if n == 0 || n > self.n_max {
            Err(Error::Range {
                what,
                value: n as f64,
                max: self.n_max as f64,
            })
        } else {
            Ok(())
        }
    }

    /// # Panics
    /// If `n` is 0 or beyond `n_max`. The same holds for the other per-`n`
    /// accessors.
    pub fn mobius(&self, n: usize) -> i8 {
        assert!(n >= 1, "mobius(0) is undefined");
        self.mobius[n]
    }

    pub fn mangoldt(&self, n: usize) -> f64 {
        assert!(n >= 1, "mangoldt(0) is undefined");
        self.mangoldt[n]
    }

    pub fn phi(&self, n: usize) -> u64 {
        assert!(n >= 1, "phi(0) is undefined");
        u64::from(self.phi[n])
    }

    pub fn smallest_prime_factor(&self, n: usize) -> u64 {
        assert!(n >= 1, "spf(0) is undefined");
        u64::from(self.spf[n])
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    pub fn is_squarefree(&self, n: usize) -> bool {
        self.mobius(n) != 0
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Primes `p <= x`.
    pub fn primes_up_to(&self, x: usize) -> &[u32] {
        let k = self.primes.partition_point(|&p| p as usize <= x);
        &self.primes[..k]
    }

    /// `π(x)`, the number of primes not exceeding `x`.
    pub fn prime_count(&self, x: f64) -> Result<usize> {
        if x.is_nan() || x > self.n_max as f64 {
            return Err(Error::Range {
                what: "prime_count",
                value: x,
                max: self.n_max as f64,
            });
        }
        Ok(self.primes.partition_point(|&p| f64::from(p) <= x))
    }

    /// Ramanujan's sum `c_q(n)` from the closed form
    /// `μ(q/g) φ(q) / φ(q/g)`, `g = gcd(q, |n|)`. For `n = 0` this is `φ(q)`.
    pub fn ramanujan_sum(&self, q: usize, n: i64) -> Result<i64> {
        self.check(q, "ramanujan_sum modulus")?;
        let g = gcd(q as u64, n.unsigned_abs()) as usize;
        let r = q / g;
        let phi_q = i64::from(self.phi[q]);
        Ok(i64::from(self.mobius[r]) * phi_q / i64::from(self.phi[r]))
    }

    /// Number of squarefree `q <= big_q`.
    pub fn squarefree_count(&self, big_q: usize) -> Result<usize> {
        self.check(big_q, "squarefree_count")?;
        Ok(self.mobius[1..=big_q].iter().filter(|&&m| m != 0).count())
    }

    /// The length-`n` sequence `a_1..a_n` of the given kind.
    pub fn coefficient_sequence(&self, kind: CoeffKind, n: usize) -> Result<CoefficientSequence> {
        if n == 0 {
            return Err(Error::Parameter("sequence length must be positive"));
        }
        self.check(n, "coefficient_sequence length")?;
        let real = |f: &dyn Fn(usize) -> f64| -> Vec<Complex64> {
            (1..=n).map(|k| Complex64::new(f(k), 0.0)).collect()
        };
        let (coeffs, support) = match kind {
            CoeffKind::Mobius => (real(&|k| f64::from(self.mobius[k])), Support::Squarefree),
            CoeffKind::Mangoldt => (real(&|k| self.mangoldt[k]), Support::All),
            CoeffKind::PrimeIndicator => (
                real(&|k| if self.is_prime(k) { 1.0 } else { 0.0 }),
                Support::Primes,
            ),
            CoeffKind::Theta => (
                real(&|k| {
                    if self.is_prime(k) {
                        self.mangoldt[k]
                    } else {
                        0.0
                    }
                }),
                Support::Primes,
            ),
            CoeffKind::Chi3 => (real(&|k| f64::from(chi3(k as u64))), Support::All),
            CoeffKind::Chi3OnPrimes => (
                real(&|k| {
                    if self.is_prime(k) {
                        f64::from(chi3(k as u64))
                    } else {
                        0.0
                    }
                }),
                Support::Primes,
            ),
            CoeffKind::Ones => (real(&|_| 1.0), Support::All),
            CoeffKind::RandomComplex(seed) => {
                (random_coefficients(seed, n, |_| true), Support::All)
            }
            CoeffKind::SquarefreeRandom(seed) => (
                random_coefficients(seed, n, |k| self.mobius[k] != 0),
                Support::Squarefree,
            ),
            CoeffKind::PrimeRandom(seed) => (
                random_coefficients(seed, n, |k| self.is_prime(k)),
                Support::Primes,
            ),
        };
        Ok(CoefficientSequence::from_parts(coeffs, support))
    }

    /// Does `seq` vanish off its declared support?
    pub fn respects_support(&self, seq: &CoefficientSequence) -> bool {
        if seq.len() > self.n_max {
            return false;
        }
        seq.coeffs().iter().enumerate().all(|(i, a)| {
            let n = i + 1;
            let allowed = match seq.support() {
                Support::All => true,
                Support::Squarefree => self.mobius[n] != 0,
                Support::Primes => self.is_prime(n),
            };
            allowed || *a == Complex64::new(0.0, 0.0)
        })
    }
}

/// Which coefficient sequence to build; the random kinds carry their seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffKind {
    Mobius,
    Mangoldt,
    PrimeIndicator,
    Theta,
    Chi3,
    Chi3OnPrimes,
    Ones,
    RandomComplex(u64),
    SquarefreeRandom(u64),
    PrimeRandom(u64),
}

impl CoeffKind {
    pub const NAMES: [&'static str; 10] = [
        "mobius",
        "mangoldt",
        "prime_indicator",
        "theta",
        "chi3",
        "chi3_on_primes",
        "ones",
        "random_complex",
        "squarefree_random",
        "prime_random",
    ];

    /// Parse a kind name; `seed` is used only by the random kinds.
    pub fn from_name(name: &str, seed: u64) -> Option<Self> {
        Some(match name {
            "mobius" => Self::Mobius,
            "mangoldt" => Self::Mangoldt,
            "prime_indicator" => Self::PrimeIndicator,
            "theta" => Self::Theta,
            "chi3" => Self::Chi3,
            "chi3_on_primes" => Self::Chi3OnPrimes,
            "ones" => Self::Ones,
            "random_complex" => Self::RandomComplex(seed),
            "squarefree_random" => Self::SquarefreeRandom(seed),
            "prime_random" => Self::PrimeRandom(seed),
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Mobius => "mobius",
            Self::Mangoldt => "mangoldt",
            Self::PrimeIndicator => "prime_indicator",
            Self::Theta => "theta",
            Self::Chi3 => "chi3",
            Self::Chi3OnPrimes => "chi3_on_primes",
            Self::Ones => "ones",
            Self::RandomComplex(_) => "random_complex",
            Self::SquarefreeRandom(_) => "squarefree_random",
            Self::PrimeRandom(_) => "prime_random",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Self::RandomComplex(s) | Self::SquarefreeRandom(s) | Self::PrimeRandom(s) => Some(*s),
            _ => None,
        }
    }
}

/// The non-principal character modulo 3.
pub fn chi3(n: u64) -> i8 {
    match n % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

// Modulus uniform in [1/2, 1], phase uniform. One draw per index whether or
// not it is masked, so the unmasked entries do not depend on the mask.
fn random_coefficients(seed: u64, n: usize, keep: impl Fn(usize) -> bool) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=n)
        .map(|k| {
            let r: f64 = rng.gen_range(0.5..=1.0);
            let theta: f64 = rng.gen();
            if keep(k) {
                e(theta) * r
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `c_q(n) = Σ_{1<=a<=q, (a,q)=1} e(an/q)` summed term by term. The real
/// part is returned; the imaginary part cancels to rounding error.
pub fn ramanujan_sum_direct(q: u64, n: i64) -> f64 {
    ramanujan_sum_direct_complex(q, n).re
}

pub fn ramanujan_sum_direct_complex(q: u64, n: i64) -> Complex64 {
    assert!(q >= 1, "Ramanujan sum needs q >= 1");
    let qi = i128::from(q);
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 1..=q {
        if gcd(a, q) == 1 {
            let r = (i128::from(a) * i128::from(n)).rem_euclid(qi);
            acc += e(r as f64 / q as f64);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables(n: usize) -> ArithmeticTables {
        ArithmeticTables::build(n).unwrap()
    }

    #[test]
    fn mobius_first_ten() {
        let t = tables(10);
        let mu: Vec<i8> = (1..=10).map(|n| t.mobius(n)).collect();
        assert_eq!(mu, [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    #[test]
    fn mangoldt_values() {
        let t = tables(10);
        assert_eq!(t.mangoldt(8), libm::log(2.0));
        assert_eq!(t.mangoldt(6), 0.0);
        assert_eq!(t.mangoldt(1), 0.0);
        assert_eq!(t.mangoldt(9), libm::log(3.0));
    }

    #[test]
    fn prime_counts() {
        let t = tables(1000);
        assert_eq!(t.prime_count(2.0).unwrap(), 1);
        assert_eq!(t.prime_count(17.0).unwrap(), 7);
        assert!(7.0 > 17.0 / libm::log(17.0));
        assert_eq!(t.prime_count(100.0).unwrap(), 25);
        assert_eq!(t.prime_count(1000.0).unwrap(), 168);
        assert_eq!(t.prime_count(1.5).unwrap(), 0);
        assert!(matches!(t.prime_count(1000.5), Err(Error::Range { .. })));
    }

    #[test]
    fn build_rejects_bad_sizes() {
        assert!(matches!(
            ArithmeticTables::build(1),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            ArithmeticTables::build_with_budget(1001, 1000),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn ramanujan_examples() {
        let t = tables(100);
        assert_eq!(t.ramanujan_sum(5, 3).unwrap(), -1);
        assert_eq!(t.ramanujan_sum(1, 7).unwrap(), 1);
        assert_eq!(t.ramanujan_sum(6, 4).unwrap(), -1);
        assert_eq!(t.ramanujan_sum(6, -4).unwrap(), -1);
        assert_eq!(t.ramanujan_sum(12, 0).unwrap(), 4);
        assert!(t.ramanujan_sum(101, 1).is_err());
        assert!(t.ramanujan_sum(0, 1).is_err());
    }

    #[test]
    fn ramanujan_direct_examples() {
        assert!((ramanujan_sum_direct(4, 2) + 2.0).abs() < 1e-9);
        assert!((ramanujan_sum_direct(3, 3) - 2.0).abs() < 1e-9);
        assert!((ramanujan_sum_direct(2, 1) + 1.0).abs() < 1e-9);
        assert!(ramanujan_sum_direct_complex(30, 7).im.abs() < 1e-9);
    }

    #[test]
    fn squarefree_counts() {
        let t = tables(10_000);
        assert_eq!(t.squarefree_count(10).unwrap(), 7);
        assert_eq!(t.squarefree_count(1).unwrap(), 1);
        let c = t.squarefree_count(10_000).unwrap() as f64;
        assert!((c / 6079.27 - 1.0).abs() < 0.01);
    }

    #[test]
    fn sequences() {
        let t = tables(100);
        let re = |s: &CoefficientSequence| s.coeffs().iter().map(|c| c.re).collect::<Vec<_>>();
        let chi = t.coefficient_sequence(CoeffKind::Chi3, 5).unwrap();
        assert_eq!(re(&chi), [1.0, -1.0, 0.0, 1.0, -1.0]);
        let ind = t
            .coefficient_sequence(CoeffKind::PrimeIndicator, 6)
            .unwrap();
        assert_eq!(re(&ind), [0.0, 1.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(ind.support(), Support::Primes);
        let mu = t.coefficient_sequence(CoeffKind::Mobius, 4).unwrap();
        assert_eq!(re(&mu), [1.0, -1.0, -1.0, 0.0]);
        assert_eq!(mu.support(), Support::Squarefree);
        assert!(t.coefficient_sequence(CoeffKind::Ones, 101).is_err());
    }

    #[test]
    fn random_sequences_respect_support_and_seed() {
        let t = tables(500);
        for kind in [
            CoeffKind::SquarefreeRandom(7),
            CoeffKind::PrimeRandom(7),
            CoeffKind::RandomComplex(7),
        ] {
            let s = t.coefficient_sequence(kind, 500).unwrap();
            assert!(t.respects_support(&s));
            let again = t.coefficient_sequence(kind, 500).unwrap();
            assert_eq!(s, again);
        }
        let all = t
            .coefficient_sequence(CoeffKind::RandomComplex(3), 50)
            .unwrap();
        for c in all.coeffs() {
            let r = c.norm();
            assert!((0.5 - 1e-12..=1.0 + 1e-12).contains(&r));
        }
        let masked = t
            .coefficient_sequence(CoeffKind::PrimeRandom(3), 50)
            .unwrap();
        assert_eq!(masked.coeffs()[6], all.coeffs()[6]); // n = 7
        assert_eq!(masked.coeffs()[7], Complex64::new(0.0, 0.0)); // n = 8
    }

    #[test]
    fn kind_names_round_trip() {
        for name in CoeffKind::NAMES {
            assert_eq!(CoeffKind::from_name(name, 1).unwrap().name(), name);
        }
        assert!(CoeffKind::from_name("liouville", 0).is_none());
    }
}
