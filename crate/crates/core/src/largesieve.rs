//! Well-spaced point sets on the circle and the sharp large sieve
//!
//! ```text
//! Σ_r |Σ_{n<=N} a_n e(n α_r)|² <= (N + 1/δ - 1) Σ |a_n|²,   ‖α_r - α_s‖ >= δ.
//! ```
//!
//! Farey-type sets are kept as reduced fractions and their minimum circular
//! gap is computed in integer arithmetic, so δ is a certificate rather than
//! a floating-point estimate.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::arith::{gcd, ArithmeticTables};
use crate::expsum::{eval_sequence, CoefficientSequence, KernelKind};
use crate::quadrature::l2_norm_sq;
use crate::sum::sum_by;
use crate::{Error, Result};

/// Largest point set [`SpacedPointSet::build`] will materialise.
pub const DEFAULT_POINT_BUDGET: u64 = 1 << 24;

/// A reduced fraction `num/den` with `0 <= num < den` (or a gap `<= 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `other - self` for `self <= other`.
    fn gap_to(self, other: Fraction) -> Fraction {
        let hi = u128::from(other.num) * u128::from(self.den);
        let lo = u128::from(self.num) * u128::from(other.den);
        let den = u128::from(self.den) * u128::from(other.den);
        reduce128(hi - lo, den)
    }

    /// `(1 - self) + other`: the gap across 0 from the last point to the first.
    fn wrap_gap_to(self, other: Fraction) -> Fraction {
        let den = u128::from(self.den) * u128::from(other.den);
        let num = u128::from(self.den - self.num) * u128::from(other.den)
            + u128::from(other.num) * u128::from(self.den);
        reduce128(num, den)
    }
}

fn reduce128(num: u128, den: u128) -> Fraction {
    let (mut a, mut b) = (num, den);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    let g = a.max(1);
    let (n, d) = (num / g, den / g);
    Fraction {
        num: u64::try_from(n).expect("gap numerator overflows u64"),
        den: u64::try_from(d).expect("gap denominator overflows u64"),
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (u128::from(self.num) * u128::from(other.den))
            .cmp(&(u128::from(other.num) * u128::from(self.den)))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The Farey-type families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FareyKind {
    /// `a/p²`, `p <= P` prime, `1 <= a < p²`; spacing at least `1/P⁴`.
    PrimeSquare,
    /// `a/p`, `p <= P` prime, `1 <= a < p`; spacing at least `1/P²`.
    Prime,
    /// `a/q`, `q <= Q`, `1 <= a <= q`, `gcd(a, q) = 1`; spacing at least `1/Q²`.
    Reduced,
}

impl FareyKind {
    pub fn name(self) -> &'static str {
        match self {
            FareyKind::PrimeSquare => "prime_square_farey",
            FareyKind::Prime => "prime_farey",
            FareyKind::Reduced => "reduced_farey",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "prime_square_farey" => FareyKind::PrimeSquare,
            "prime_farey" => FareyKind::Prime,
            "reduced_farey" => FareyKind::Reduced,
            _ => return None,
        })
    }

    /// The guaranteed lower bound for δ: `1/P⁴`, `1/P²` or `1/Q²`.
    pub fn spacing_bound(self, param: u64) -> Fraction {
        match self {
            FareyKind::PrimeSquare => Fraction::new(1, param.pow(4)),
            FareyKind::Prime | FareyKind::Reduced => Fraction::new(1, param * param),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointSetKind {
    Farey(FareyKind, u64),
    Explicit,
    Shifted { base: Box<PointSetKind>, shift: f64 },
}

/// Distinct points of `[0, 1)` with a certified minimum circular gap.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacedPointSet {
    points: Vec<f64>,
    fractions: Option<Vec<Fraction>>,
    delta: f64,
    delta_exact: Option<Fraction>,
    kind: PointSetKind,
}

impl SpacedPointSet {
    pub fn build(tables: &ArithmeticTables, kind: FareyKind, param: u64) -> Result<Self> {
        Self::build_with_budget(tables, kind, param, DEFAULT_POINT_BUDGET)
    }

    pub fn build_with_budget(
        tables: &ArithmeticTables,
        kind: FareyKind,
        param: u64,
        budget: u64,
    ) -> Result<Self> {
        if param < 2 {
            return Err(Error::Parameter("Farey parameter must be at least 2"));
        }
        if param as usize > tables.n_max() {
            return Err(Error::Range {
                what: "Farey parameter",
                value: param as f64,
                max: tables.n_max() as f64,
            });
        }
        let primes = tables.primes_up_to(param as usize);
        let count: u64 = match kind {
            FareyKind::PrimeSquare => primes.iter().map(|&p| u64::from(p).pow(2) - 1).sum(),
            FareyKind::Prime => primes.iter().map(|&p| u64::from(p) - 1).sum(),
            FareyKind::Reduced => (1..=param as usize).map(|q| tables.phi(q)).sum(),
        };
        if count > budget {
            return Err(Error::Capacity {
                what: "point set",
                requested: count,
                limit: budget,
            });
        }
        let mut fr: Vec<Fraction> = Vec::with_capacity(count as usize);
        match kind {
            FareyKind::PrimeSquare | FareyKind::Prime => {
                for &p in primes {
                    let d = if kind == FareyKind::PrimeSquare {
                        u64::from(p).pow(2)
                    } else {
                        u64::from(p)
                    };
                    fr.extend((1..d).map(|a| Fraction::new(a, d)));
                }
            }
            FareyKind::Reduced => {
                for q in 1..=param {
                    for a in 1..=q {
                        if gcd(a, q) == 1 {
                            fr.push(Fraction::new(a % q, q));
                        }
                    }
                }
            }
        }
        fr.sort_unstable();
        fr.dedup();
        Self::from_sorted_fractions(fr, PointSetKind::Farey(kind, param))
    }

    fn from_sorted_fractions(fr: Vec<Fraction>, kind: PointSetKind) -> Result<Self> {
        if fr.is_empty() {
            return Err(Error::DegenerateSet);
        }
        let mut delta = fr[fr.len() - 1].wrap_gap_to(fr[0]);
        for w in fr.windows(2) {
            let g = w[0].gap_to(w[1]);
            if g.num == 0 {
                return Err(Error::DegenerateSet);
            }
            delta = delta.min(g);
        }
        if fr.len() == 1 {
            delta = Fraction { num: 1, den: 1 };
        }
        Ok(Self {
            points: fr.iter().map(|f| f.to_f64()).collect(),
            fractions: Some(fr),
            delta: delta.to_f64(),
            delta_exact: Some(delta),
            kind,
        })
    }

    /// Points `num/den`, reduced modulo one; coincident points are an error.
    pub fn from_fractions(points: &[(u64, u64)]) -> Result<Self> {
        let mut fr: Vec<Fraction> = points
            .iter()
            .map(|&(n, d)| {
                if d == 0 {
                    Err(Error::Parameter("zero denominator"))
                } else {
                    Ok(Fraction::new(n % d, d))
                }
            })
            .collect::<Result<_>>()?;
        fr.sort_unstable();
        Self::from_sorted_fractions(fr, PointSetKind::Explicit)
    }

    /// `{j/m : 0 <= j < m}`, with `δ = 1/m`.
    pub fn equispaced(m: u64) -> Result<Self> {
        let pts: Vec<(u64, u64)> = (0..m).map(|j| (j, m)).collect();
        Self::from_fractions(&pts)
    }

    /// Arbitrary real points, reduced to `[0, 1)`. The gap is measured in
    /// floating point.
    pub fn from_reals(points: &[f64]) -> Result<Self> {
        let mut pts: Vec<f64> = points.iter().map(|x| x - libm::floor(*x)).collect();
        if pts.is_empty() || pts.iter().any(|x| !x.is_finite()) {
            return Err(Error::DegenerateSet);
        }
        pts.sort_unstable_by(f64::total_cmp);
        let mut delta = if pts.len() == 1 {
            1.0
        } else {
            1.0 - pts[pts.len() - 1] + pts[0]
        };
        for w in pts.windows(2) {
            delta = delta.min(w[1] - w[0]);
        }
        if delta.is_nan() || delta <= 0.0 {
            return Err(Error::DegenerateSet);
        }
        Ok(Self {
            points: pts,
            fractions: None,
            delta,
            delta_exact: None,
            kind: PointSetKind::Explicit,
        })
    }

    /// Every point moved by `shift`. Spacing is unchanged.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|x| x + shift - libm::floor(x + shift))
                .collect(),
            fractions: None,
            delta: self.delta,
            delta_exact: self.delta_exact,
            kind: PointSetKind::Shifted {
                base: Box::new(self.kind.clone()),
                shift,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn fractions(&self) -> Option<&[Fraction]> {
        self.fractions.as_deref()
    }

    pub fn kind(&self) -> &PointSetKind {
        &self.kind
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn delta_exact(&self) -> Option<Fraction> {
        self.delta_exact
    }

    /// `1/δ`, exact up to one rounding when δ is a certified fraction.
    pub fn inverse_delta(&self) -> f64 {
        match self.delta_exact {
            Some(f) => f.den as f64 / f.num as f64,
            None => 1.0 / self.delta,
        }
    }
}

/// Both sides of the large-sieve inequality and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SieveCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// `Σ_r |S(α_r + shift)|²` against `(N + 1/δ - 1) Σ|a_n|²`.
pub fn large_sieve_check(
    seq: &CoefficientSequence,
    set: &SpacedPointSet,
    shift: f64,
) -> SieveCheck {
    let pts = set.points();
    let lhs = sum_by(pts.len(), |r| eval_sequence(seq, pts[r] + shift).norm_sqr());
    let rhs = (seq.len() as f64 + set.inverse_delta() - 1.0) * l2_norm_sq(seq);
    let ratio = if rhs == 0.0 { 0.0 } else { lhs / rhs };
    SieveCheck { lhs, rhs, ratio }
}

/// `(N + δ⁻¹ - 1)/π(P)` with `δ⁻¹ = P⁴` for `G*` and `P²` for `H`: the
/// large-sieve ceiling for `sup |kernel - T_N|`.
pub fn sieve_bound_for_kernel_gap(
    tables: &ArithmeticTables,
    n: usize,
    p: usize,
    kind: KernelKind,
) -> Result<f64> {
    let pi_p = tables.prime_count(p as f64)?;
    if pi_p == 0 {
        return Err(Error::Parameter("no primes up to P"));
    }
    let inv_delta = match kind {
        KernelKind::GStar => (p as f64) * (p as f64) * (p as f64) * (p as f64),
        KernelKind::H => (p as f64) * (p as f64),
        _ => {
            return Err(Error::Parameter(
                "gap bound is defined for gstar and h only",
            ))
        }
    };
    Ok((n as f64 + inv_delta - 1.0) / pi_p as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::CoeffKind;
    use crate::Complex64;
    use alloc::vec;

    fn tables() -> ArithmeticTables {
        ArithmeticTables::build(2000).unwrap()
    }

    fn fr(s: &SpacedPointSet) -> Vec<(u64, u64)> {
        s.fractions()
            .unwrap()
            .iter()
            .map(|f| (f.num, f.den))
            .collect()
    }

    #[test]
    fn farey_examples() {
        let t = tables();
        let s = SpacedPointSet::build(&t, FareyKind::Reduced, 3).unwrap();
        assert_eq!(fr(&s), [(0, 1), (1, 3), (1, 2), (2, 3)]);
        assert_eq!(s.delta_exact(), Some(Fraction::new(1, 6)));
        let s = SpacedPointSet::build(&t, FareyKind::Prime, 3).unwrap();
        assert_eq!(fr(&s), [(1, 3), (1, 2), (2, 3)]);
        assert_eq!(s.delta_exact(), Some(Fraction::new(1, 6)));
        let s = SpacedPointSet::build(&t, FareyKind::PrimeSquare, 2).unwrap();
        assert_eq!(fr(&s), [(1, 4), (1, 2), (3, 4)]);
        assert_eq!(s.delta_exact(), Some(Fraction::new(1, 4)));
        assert_eq!(s.inverse_delta(), 4.0);
    }

    #[test]
    fn build_errors() {
        let t = tables();
        assert!(SpacedPointSet::build(&t, FareyKind::Reduced, 1).is_err());
        assert!(matches!(
            SpacedPointSet::build(&t, FareyKind::Reduced, 5000),
            Err(Error::Range { .. })
        ));
        assert!(matches!(
            SpacedPointSet::build_with_budget(&t, FareyKind::PrimeSquare, 100, 1000),
            Err(Error::Capacity { .. })
        ));
        assert_eq!(
            SpacedPointSet::from_fractions(&[]),
            Err(Error::DegenerateSet)
        );
        assert_eq!(
            SpacedPointSet::from_fractions(&[(1, 2), (2, 4)]),
            Err(Error::DegenerateSet)
        );
        assert_eq!(
            SpacedPointSet::from_reals(&[0.25, 1.25]),
            Err(Error::DegenerateSet)
        );
    }

    #[test]
    fn spacing_meets_kind_bound() {
        let t = tables();
        for kind in [FareyKind::PrimeSquare, FareyKind::Prime, FareyKind::Reduced] {
            for param in [2u64, 3, 5, 10, 31, 60] {
                let s = SpacedPointSet::build(&t, kind, param).unwrap();
                assert!(
                    s.delta_exact().unwrap() >= kind.spacing_bound(param),
                    "{kind:?} {param}"
                );
            }
        }
    }

    #[test]
    fn single_point_is_cauchy() {
        let t = tables();
        let s = SpacedPointSet::from_reals(&[0.3]).unwrap();
        assert_eq!(s.delta(), 1.0);
        let seq = t
            .coefficient_sequence(CoeffKind::RandomComplex(1), 40)
            .unwrap();
        let c = large_sieve_check(&seq, &s, 0.0);
        assert!(c.lhs <= 40.0 * l2_norm_sq(&seq) * (1.0 + 1e-12));
        assert!(c.ratio <= 1.0);
    }

    #[test]
    fn equispaced_is_exact() {
        let t = tables();
        let n = 50;
        let m = 64u64;
        let seq = t
            .coefficient_sequence(CoeffKind::RandomComplex(9), n)
            .unwrap();
        let s = SpacedPointSet::equispaced(m).unwrap();
        let c = large_sieve_check(&seq, &s, 0.0);
        let l2 = l2_norm_sq(&seq);
        assert!((c.lhs - m as f64 * l2).abs() <= 1e-9 * c.lhs);
        assert!((c.ratio - m as f64 / (n as f64 + m as f64 - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn kernel_gap_bounds() {
        let t = ArithmeticTables::build(20_000).unwrap();
        let b = sieve_bound_for_kernel_gap(&t, 10_000, 10, KernelKind::GStar).unwrap();
        assert!((b - 4999.75).abs() < 1e-9);
        let b = sieve_bound_for_kernel_gap(&t, 10_000, 100, KernelKind::H).unwrap();
        assert!((b - 799.96).abs() < 1e-9);
        let b = sieve_bound_for_kernel_gap(&t, 16, 2, KernelKind::GStar).unwrap();
        assert_eq!(b, 31.0);
        assert!(sieve_bound_for_kernel_gap(&t, 16, 2, KernelKind::Fejer).is_err());
    }

    #[test]
    fn shifted_set_keeps_spacing() {
        let t = tables();
        let s = SpacedPointSet::build(&t, FareyKind::Reduced, 12).unwrap();
        let sh = s.shifted(0.377);
        assert_eq!(sh.delta_exact(), s.delta_exact());
        assert!(sh.points().iter().all(|x| (0.0..1.0).contains(x)));
        let seq = CoefficientSequence::new(vec![Complex64::new(1.0, 0.0); 30]);
        assert!(large_sieve_check(&seq, &sh, 0.0).ratio <= 1.0 + 1e-9);
    }
}
