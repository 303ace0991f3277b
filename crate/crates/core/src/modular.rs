//! Pointwise log transforms and the integral functionals built on them.
//!
//! Two functionals are computed over a [`DiscreteMeasure`]:
//!
//! * the log⁺ energy `∫(log⁺|f|)^p dμ`, finite exactly for members of `L_p⁺`;
//! * the Orlicz modular `‖f‖_p^p = ∫(log(1+|f|))^p dμ` generated by the
//!   φ-function `ψ(t) = (log(1+t))^p`.

use std::f64::consts::LN_2;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::measure::DiscreteMeasure;

/// The exponent `p > 0` together with the constants of the elementary
/// inequalities `(|x|+|y|)^p ≤ 2^{max(p-1,0)}(|x|^p+|y|^p)` and its
/// three-term analogue.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 {
            Ok(Self(p))
        } else {
            Err(LabError::BadExponent(p))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `x^p`, skipping `powf` for the common integer exponents.
    #[inline]
    pub fn pow(self, x: f64) -> f64 {
        if self.0 == 1.0 {
            x
        } else if self.0 == 2.0 {
            x * x
        } else {
            x.powf(self.0)
        }
    }

    pub fn min1(self) -> f64 {
        self.0.min(1.0)
    }

    pub fn max1(self) -> f64 {
        self.0.max(1.0)
    }

    /// `2^{max(p-1, 0)}`
    pub fn two_term_constant(self) -> f64 {
        2f64.powf((self.0 - 1.0).max(0.0))
    }

    /// `3^{max(p-1, 0)}`
    pub fn three_term_constant(self) -> f64 {
        3f64.powf((self.0 - 1.0).max(0.0))
    }
}

impl TryFrom<f64> for Exponent {
    type Error = LabError;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

/// Complex samples attached to the atoms of a measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    measure: Arc<DiscreteMeasure>,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(measure: Arc<DiscreteMeasure>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != measure.len() {
            return Err(LabError::LengthMismatch {
                expected: measure.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(LabError::NonFinite { index });
        }
        Ok(Self { measure, values })
    }

    pub fn from_real(measure: Arc<DiscreteMeasure>, values: &[f64]) -> Result<Self> {
        Self::new(measure, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant(measure: Arc<DiscreteMeasure>, c: Complex64) -> Result<Self> {
        let n = measure.len();
        Self::new(measure, vec![c; n])
    }

    pub fn zero(measure: Arc<DiscreteMeasure>) -> Self {
        let n = measure.len();
        Self {
            measure,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn measure(&self) -> &Arc<DiscreteMeasure> {
        &self.measure
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_same_space(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.measure, &other.measure) || self.measure.same_space(&other.measure)
        {
            Ok(())
        } else {
            Err(LabError::MeasureMismatch)
        }
    }

    /// Pointwise combination of two functions on the same measure.
    pub fn zip_with<F>(&self, other: &Self, op: F) -> Result<Self>
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        self.check_same_space(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Self::new(self.measure.clone(), values)
    }

    pub fn map<F>(&self, op: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64,
    {
        Self::new(self.measure.clone(), self.values.iter().map(|&v| op(v)).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            measure: self.measure.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Pointwise product with real samples (e.g. a weight).
    pub fn scale_pointwise(&self, factors: &[f64]) -> Result<Self> {
        if factors.len() != self.len() {
            return Err(LabError::LengthMismatch {
                expected: self.len(),
                got: factors.len(),
            });
        }
        Self::new(
            self.measure.clone(),
            self.values.iter().zip(factors).map(|(v, w)| v * w).collect(),
        )
    }
}

/// `max(log x, 0)`, with `log⁺ 0 = 0`.
pub fn log_plus(x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(LabError::NegativeLogArgument(x));
    }
    Ok(log_plus_unchecked(x))
}

#[inline]
pub(crate) fn log_plus_unchecked(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// The φ-function `ψ(t) = (log(1+t))^p`.
#[inline]
pub fn psi(t: f64, p: Exponent) -> f64 {
    p.pow(t.ln_1p())
}

/// `∫(log⁺|f|)^p dμ`.
pub fn logplus_energy(f: &SampledFunction, p: Exponent) -> f64 {
    f.measure().integrate(
        f.values()
            .iter()
            .map(|v| log_plus_unchecked(v.norm()).powf(p.get())),
    )
}

/// The Orlicz modular `‖f‖_p^p = ∫(log(1+|f|))^p dμ`.
pub fn orlicz_modular(f: &SampledFunction, p: Exponent) -> f64 {
    modular_of_moduli(f.measure(), f.values().iter().map(|v| v.norm()), p)
}

pub(crate) fn modular_of_moduli<I>(measure: &DiscreteMeasure, moduli: I, p: Exponent) -> f64
where
    I: IntoIterator<Item = f64>,
{
    measure.integrate(moduli.into_iter().map(|a| psi(a, p)))
}

/// `‖f‖_p = (modular)^{1/p}`.
pub fn norm_p(f: &SampledFunction, p: Exponent) -> f64 {
    orlicz_modular(f, p).powf(1.0 / p.get())
}

/// Outcome of the pointwise sandwich `(log(1+|x|))^p ≤ 2^{max(p-1,0)}((log 2)^p + (log⁺|x|)^p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Sandwich {
    Holds { min_slack: f64 },
    Violated { atom: usize, lhs: f64, rhs: f64 },
}

impl Sandwich {
    pub fn holds(&self) -> bool {
        matches!(self, Sandwich::Holds { .. })
    }
}

pub fn check_sandwich(f: &SampledFunction, p: Exponent) -> Sandwich {
    let c = p.two_term_constant();
    let log2p = LN_2.powf(p.get());
    let mut min_slack = f64::INFINITY;
    for (atom, v) in f.values().iter().enumerate() {
        let a = v.norm();
        let lhs = psi(a, p);
        let rhs = c * (log2p + log_plus_unchecked(a).powf(p.get()));
        // relative rounding allowance for the powf evaluations
        if lhs > rhs * (1.0 + 4.0 * f64::EPSILON) {
            return Sandwich::Violated { atom, lhs, rhs };
        }
        min_slack = min_slack.min(rhs - lhs);
    }
    Sandwich::Holds { min_slack }
}

/// Log-spaced grid of `n` points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Points of the grid where `ψ(2t) > 2^p ψ(t)`.
pub fn delta2_violations(p: Exponent, grid: &[f64]) -> Vec<f64> {
    let c = 2f64.powf(p.get());
    grid.iter()
        .copied()
        .filter(|&t| psi(2.0 * t, p) > c * psi(t, p))
        .collect()
}

/// Evidence that `ψ(t)/t` decreases to zero beyond `t₀ = e^p`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayEvidence {
    pub t0: f64,
    pub ratio_at_t0: f64,
    pub ratio_at_end: f64,
    pub monotone: bool,
}

impl DecayEvidence {
    /// Monotone on the grid and the last ratio below `1e-3` of the first.
    pub fn passes(&self) -> bool {
        self.monotone && self.ratio_at_end < 1e-3 * self.ratio_at_t0
    }
}

/// `d/dt [ψ(t)/t] < 0` once `log(1+t) ≥ p`, so the grid starts at `e^p`.
pub fn decay_check(p: Exponent, t_max: f64, n: usize) -> DecayEvidence {
    let t0 = p.get().exp();
    let grid = log_grid(t0, t_max.max(2.0 * t0), n);
    let ratios: Vec<f64> = grid.iter().map(|&t| psi(t, p) / t).collect();
    let monotone = ratios.windows(2).all(|w| w[1] <= w[0]);
    DecayEvidence {
        t0,
        ratio_at_t0: ratios[0],
        ratio_at_end: *ratios.last().unwrap(),
        monotone,
    }
}

/// Worst slack of the pointwise algebra inequalities over a batch of sample pairs.
///
/// Checked: `log⁺|a+b| ≤ log⁺|a| + log⁺|b| + log 2`, `log⁺|ab| ≤ log⁺|a| + log⁺|b|`,
/// and `log(1+|ab|) ≤ log(1+|a|) + log(1+|b|)`. Returns the minimum of
/// `rhs - lhs` over all three, each padded by `1e-15·(1 + lhs)` for rounding;
/// negative means a violation.
pub fn algebra_inequality_slack(pairs: &[(Complex64, Complex64)]) -> f64 {
    let mut worst = f64::INFINITY;
    for &(a, b) in pairs {
        let (na, nb) = (a.norm(), b.norm());
        let (la, lb) = (log_plus_unchecked(na), log_plus_unchecked(nb));
        let sum = log_plus_unchecked((a + b).norm());
        let prod = log_plus_unchecked((a * b).norm());
        let sub = (a * b).norm().ln_1p();
        worst = worst
            .min(la + lb + LN_2 - sum + 1e-15 * (1.0 + sum))
            .min(la + lb - prod + 1e-15 * (1.0 + prod))
            .min(na.ln_1p() + nb.ln_1p() - sub + 1e-15 * (1.0 + sub));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn grid(n: usize) -> Arc<DiscreteMeasure> {
        Arc::new(DiscreteMeasure::lebesgue_grid(n).unwrap())
    }

    fn p(x: f64) -> Exponent {
        Exponent::new(x).unwrap()
    }

    fn constant(n: usize, c: f64) -> SampledFunction {
        SampledFunction::constant(grid(n), Complex64::new(c, 0.0)).unwrap()
    }

    #[test]
    fn log_plus_values() {
        assert_eq!(log_plus(1.0).unwrap(), 0.0);
        assert!((log_plus(E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(log_plus(0.5).unwrap(), 0.0);
        assert_eq!(log_plus(0.0).unwrap(), 0.0);
        assert!(log_plus(-1.0).is_err());
    }

    #[test]
    fn exponent_constants() {
        assert!(Exponent::new(0.0).is_err());
        assert!(Exponent::new(f64::INFINITY).is_err());
        let half = p(0.5);
        assert_eq!(half.min1(), 0.5);
        assert_eq!(half.max1(), 1.0);
        assert_eq!(half.two_term_constant(), 1.0);
        let three = p(3.0);
        assert_eq!(three.two_term_constant(), 4.0);
        assert_eq!(three.three_term_constant(), 9.0);
    }

    #[test]
    fn energy_anchors() {
        assert_eq!(logplus_energy(&constant(7, 1.0), p(2.0)), 0.0);
        assert!((logplus_energy(&constant(7, E), p(2.0)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn modular_anchors() {
        for &pv in &[0.5, 1.0, 2.0, 3.0] {
            assert_eq!(orlicz_modular(&constant(5, 0.0), p(pv)), 0.0);
            assert_eq!(norm_p(&constant(5, 0.0), p(pv)), 0.0);
            let m = orlicz_modular(&constant(5, 1.0), p(pv));
            assert!((m - LN_2.powf(pv)).abs() < 1e-14);
            assert!((norm_p(&constant(5, 1.0), p(pv)) - LN_2).abs() < 1e-14);
            let e1 = constant(5, E - 1.0);
            assert!((orlicz_modular(&e1, p(pv)) - 1.0).abs() < 1e-14);
            assert!((norm_p(&e1, p(pv)) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sandwich_anchors() {
        for &pv in &[0.5, 1.0, 2.0, 3.0] {
            assert!(check_sandwich(&constant(3, 1.0), p(pv)).holds());
            assert!(check_sandwich(&constant(3, 0.0), p(pv)).holds());
        }
    }

    #[test]
    fn sandwich_on_lognormal_samples() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, LogNormal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let dist = LogNormal::new(0.0, 3.0).unwrap();
        let vals: Vec<f64> = (0..1000).map(|_| dist.sample(&mut rng)).collect();
        let f = SampledFunction::from_real(grid(1000), &vals).unwrap();
        for &pv in &[0.5, 1.0, 2.0] {
            assert!(check_sandwich(&f, p(pv)).holds(), "p = {pv}");
        }
    }

    #[test]
    fn delta2_and_decay() {
        let g = log_grid(1e-9, 1e9, 10_000);
        for &pv in &[0.5, 1.0, 2.0, 3.0] {
            assert!(delta2_violations(p(pv), &g).is_empty());
            assert!(decay_check(p(pv), 1e9, 10_000).passes(), "p = {pv}");
        }
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let m = grid(3);
        assert!(SampledFunction::from_real(m.clone(), &[1.0, 2.0]).is_err());
        assert!(SampledFunction::from_real(m, &[1.0, f64::NAN, 2.0]).is_err());
    }

    fn complex() -> impl Strategy<Value = Complex64> {
        (-8.0f64..8.0, 0.0f64..std::f64::consts::TAU)
            .prop_map(|(l, th)| Complex64::from_polar(l.exp(), th))
    }

    proptest! {
        #[test]
        fn energy_matches_direct_loop(vals in prop::collection::vec(complex(), 1..50), pv in 0.2f64..4.0) {
            let f = SampledFunction::new(grid(vals.len()), vals.clone()).unwrap();
            let mut oracle = 0.0;
            for v in &vals {
                let a = v.norm();
                if a > 1.0 {
                    oracle += a.ln().powf(pv) / vals.len() as f64;
                }
            }
            let got = logplus_energy(&f, p(pv));
            prop_assert!((got - oracle).abs() <= 1e-12 * (1.0 + oracle));
        }

        #[test]
        fn algebra_inequalities(pairs in prop::collection::vec((complex(), complex()), 1..100)) {
            prop_assert!(algebra_inequality_slack(&pairs) >= 0.0);
        }

        #[test]
        fn modular_monotone(
            vals in prop::collection::vec((complex(), 0.0f64..1.0), 1..50),
            pv in 0.2f64..4.0,
        ) {
            let g: Vec<Complex64> = vals.iter().map(|(v, _)| *v).collect();
            let f: Vec<Complex64> = vals.iter().map(|(v, s)| v * *s).collect();
            let m = grid(vals.len());
            let fg = SampledFunction::new(m.clone(), f).unwrap();
            let gg = SampledFunction::new(m, g).unwrap();
            prop_assert!(orlicz_modular(&fg, p(pv)) <= orlicz_modular(&gg, p(pv)) * (1.0 + 1e-14));
        }
    }
}
