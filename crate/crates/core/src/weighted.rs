//! Weighted modulars `∫(log(1+|f|w))^p dμ` and weight-pair classification.
//!
//! Everything weighted reduces to the unweighted machinery applied to `w·f`;
//! the only new ingredient is comparing two weights `w`, `ω`. The space
//! `L_p^ω` sits inside `L_p^w` when `log⁺(w/ω)` has finite p-energy, and the
//! two spaces coincide exactly when `|log(w/ω)|` does. A finite grid cannot
//! certify integrability, so [`classify_weights`] watches how the grid
//! energies move along a refinement ladder and answers with three values.

use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::measure::DiscreteMeasure;
use crate::metrics::{f_norm_of_moduli, metric_rho_p, FNorm, FNormOptions};
use crate::modular::{orlicz_modular, Exponent, SampledFunction};
use crate::par::map_ordered;

/// Closed-form weight families, evaluable on any circle grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum WeightDescriptor {
    /// `c`
    Const { c: f64 },
    /// `a + b sin t`
    TrigAffine { a: f64, b: f64 },
    /// `exp(-a t^{-b})`
    ExpNeg { a: f64, b: f64 },
    /// `exp(a t^{-b})`
    ExpPos { a: f64, b: f64 },
    /// Equal-length constant pieces over `[0, 2π)`.
    Piecewise { values: Vec<f64> },
}

impl WeightDescriptor {
    /// `log w(t)`; kept in log form because `exp(-t^{-b})` underflows on fine grids.
    pub fn ln_at(&self, t: f64) -> f64 {
        match self {
            WeightDescriptor::Const { c } => c.ln(),
            WeightDescriptor::TrigAffine { a, b } => (a + b * t.sin()).ln(),
            WeightDescriptor::ExpNeg { a, b } => -a * t.powf(-b),
            WeightDescriptor::ExpPos { a, b } => a * t.powf(-b),
            WeightDescriptor::Piecewise { values } => {
                let k = ((t.rem_euclid(TAU) / TAU) * values.len() as f64) as usize;
                values[k.min(values.len() - 1)].ln()
            }
        }
    }

    /// Whether the family is singular at `t = 0` and needs midpoint grids.
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            WeightDescriptor::ExpNeg { .. } | WeightDescriptor::ExpPos { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| {
            Err(LabError::BadGenerator {
                spec: format!("{self:?}"),
                reason: reason.into(),
            })
        };
        match self {
            WeightDescriptor::Const { c } if !(*c > 0.0 && c.is_finite()) => bad("c must be positive"),
            WeightDescriptor::TrigAffine { a, b } if !(a - b.abs() > 0.0) => {
                bad("a + b sin t must stay positive (need a > |b|)")
            }
            WeightDescriptor::ExpNeg { a, b } | WeightDescriptor::ExpPos { a, b }
                if !(a.is_finite() && b.is_finite() && *a >= 0.0 && *b > 0.0) =>
            {
                bad("need a ≥ 0 and b > 0")
            }
            WeightDescriptor::Piecewise { values }
                if values.is_empty() || values.iter().any(|v| !(*v > 0.0 && v.is_finite())) =>
            {
                bad("pieces must be positive")
            }
            _ => Ok(()),
        }
    }
}

/// A strictly positive weight on the atoms of a measure.
///
/// Stored as `log w` so that weights like `exp(-t^{-1})` stay representable
/// (and strictly positive) where `w` itself underflows.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    measure: Arc<DiscreteMeasure>,
    log_values: Vec<f64>,
    descriptor: Option<WeightDescriptor>,
}

impl Weight {
    pub fn new(measure: Arc<DiscreteMeasure>, values: &[f64]) -> Result<Self> {
        if values.len() != measure.len() {
            return Err(LabError::LengthMismatch {
                expected: measure.len(),
                got: values.len(),
            });
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(LabError::NonPositiveWeight { index, value });
        }
        Ok(Self {
            measure,
            log_values: values.iter().map(|v| v.ln()).collect(),
            descriptor: None,
        })
    }

    pub fn from_descriptor(measure: Arc<DiscreteMeasure>, descriptor: WeightDescriptor) -> Result<Self> {
        descriptor.validate()?;
        let angles = measure.angles().ok_or(LabError::NotACircleGrid)?;
        let log_values: Vec<f64> = angles.iter().map(|&t| descriptor.ln_at(t)).collect();
        if let Some(index) = log_values.iter().position(|v| !v.is_finite()) {
            return Err(LabError::NonPositiveWeight {
                index,
                value: log_values[index].exp(),
            });
        }
        Ok(Self {
            measure,
            log_values,
            descriptor: Some(descriptor),
        })
    }

    pub fn unit(measure: Arc<DiscreteMeasure>) -> Self {
        let n = measure.len();
        Self {
            measure,
            log_values: vec![0.0; n],
            descriptor: Some(WeightDescriptor::Const { c: 1.0 }),
        }
    }

    pub fn measure(&self) -> &Arc<DiscreteMeasure> {
        &self.measure
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    pub fn values(&self) -> Vec<f64> {
        self.log_values.iter().map(|l| l.exp()).collect()
    }

    pub fn descriptor(&self) -> Option<&WeightDescriptor> {
        self.descriptor.as_ref()
    }

    fn check(&self, f: &SampledFunction) -> Result<()> {
        if Arc::ptr_eq(&self.measure, f.measure()) || self.measure.same_space(f.measure()) {
            Ok(())
        } else {
            Err(LabError::MeasureMismatch)
        }
    }

    /// `w·f`
    pub fn apply(&self, f: &SampledFunction) -> Result<SampledFunction> {
        self.check(f)?;
        f.scale_pointwise(&self.values())
    }
}

/// `(‖f‖_p^w)^p = ∫(log(1+|f|w))^p dμ`.
pub fn weighted_modular(f: &SampledFunction, w: &Weight, p: Exponent) -> Result<f64> {
    Ok(orlicz_modular(&w.apply(f)?, p))
}

/// `ρ_p^w(f,g) = ρ_p(wf, wg)`.
pub fn metric_rho_w_p(f: &SampledFunction, g: &SampledFunction, w: &Weight, p: Exponent) -> Result<f64> {
    metric_rho_p(&w.apply(f)?, &w.apply(g)?, p)
}

/// `|f|_p^w = |wf|_p`.
pub fn f_norm_w(f: &SampledFunction, w: &Weight, p: Exponent) -> Result<FNorm> {
    let wf = w.apply(f)?;
    f_norm_of_moduli(wf.measure(), &wf.moduli(), p, FNormOptions::default())
}

/// `log(1 + e^x)` without overflow.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `∫(log(1 + e^{L}))^p dμ` for log-moduli `L`; `L = -∞` contributes zero.
pub fn modular_from_logs(measure: &DiscreteMeasure, log_moduli: &[f64], p: Exponent) -> f64 {
    measure.integrate(log_moduli.iter().map(|&l| softplus(l).powf(p.get())))
}

/// Thresholds of the three-valued refinement verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRule {
    /// `E(N_max)/E(N_min)` above this declares divergence.
    pub divergence_ratio: f64,
    /// `E(N_max)/E(N_min)` at or below this declares boundedness.
    pub bounded_ratio: f64,
    /// Divergence is also declared when every increment is positive and the
    /// late increments (per unit of `log₂ N`) keep at least this fraction of
    /// the early ones. Logarithmic divergence has constant increments.
    pub increment_persistence: f64,
}

impl Default for DivergenceRule {
    fn default() -> Self {
        Self {
            divergence_ratio: 10.0,
            bounded_ratio: 1.05,
            increment_persistence: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyTrend {
    Bounded,
    Divergent,
    Undecided,
}

/// Growth of `energies[last] / energies[first]`; `1` when both vanish.
pub fn growth_ratio(energies: &[f64]) -> f64 {
    let (first, last) = (energies[0], energies[energies.len() - 1]);
    if last == 0.0 && first == 0.0 {
        1.0
    } else if first == 0.0 {
        f64::INFINITY
    } else {
        last / first
    }
}

impl DivergenceRule {
    pub fn trend(&self, sizes: &[usize], energies: &[f64]) -> EnergyTrend {
        assert_eq!(sizes.len(), energies.len());
        assert!(!energies.is_empty());
        let ratio = growth_ratio(energies);
        if ratio <= self.bounded_ratio {
            return EnergyTrend::Bounded;
        }
        if ratio > self.divergence_ratio {
            return EnergyTrend::Divergent;
        }
        if sizes.len() >= 4 {
            let rates: Vec<f64> = sizes
                .windows(2)
                .zip(energies.windows(2))
                .map(|(n, e)| (e[1] - e[0]) / ((n[1] as f64).log2() - (n[0] as f64).log2()))
                .collect();
            let half = rates.len() / 2;
            let early = rates[..half].iter().cloned().fold(0.0, f64::max);
            let late = rates[rates.len() - half..]
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            if rates.iter().all(|&r| r > 0.0) && late >= self.increment_persistence * early {
                return EnergyTrend::Divergent;
            }
        }
        EnergyTrend::Undecided
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRelation {
    /// `L_p^ω = L_p^w`
    EqualSpaces,
    /// `L_p^ω ⊊ L_p^w`
    ProperInclusion,
    Inconclusive,
}

/// Energies of the log-ratio on one grid of the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementEnergy {
    pub grid_size: usize,
    /// `Σ mass · |log(w/ω)|^p`
    pub abs_energy: f64,
    /// `Σ mass · (log⁺(w/ω))^p`
    pub plus_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightClassification {
    pub relation: WeightRelation,
    pub abs_trend: EnergyTrend,
    pub plus_trend: EnergyTrend,
    pub abs_growth: f64,
    pub plus_growth: f64,
    pub evidence: Vec<RefinementEnergy>,
}

/// Grid energies of `log(w/ω)` at one grid size.
pub fn log_ratio_energy(
    w: &WeightDescriptor,
    omega: &WeightDescriptor,
    p: Exponent,
    grid_size: usize,
) -> Result<RefinementEnergy> {
    let measure = if w.is_singular() || omega.is_singular() {
        DiscreteMeasure::midpoint_grid(grid_size)?
    } else {
        DiscreteMeasure::lebesgue_grid(grid_size)?
    };
    let angles = measure.angles().expect("circle grid");
    let logs: Vec<f64> = angles.iter().map(|&t| w.ln_at(t) - omega.ln_at(t)).collect();
    Ok(RefinementEnergy {
        grid_size,
        abs_energy: measure.integrate(logs.iter().map(|l| l.abs().powf(p.get()))),
        plus_energy: measure.integrate(logs.iter().map(|l| l.max(0.0).powf(p.get()))),
    })
}

/// Decide `L_p^ω` versus `L_p^w` from energies along a refinement ladder.
pub fn classify_weights(
    w: &Weight,
    omega: &Weight,
    p: Exponent,
    ladder: &[usize],
    rule: &DivergenceRule,
) -> Result<WeightClassification> {
    let wd = w.descriptor().ok_or(LabError::MissingDescriptor)?;
    let od = omega.descriptor().ok_or(LabError::MissingDescriptor)?;
    classify_descriptors(wd, od, p, ladder, rule)
}

pub fn classify_descriptors(
    w: &WeightDescriptor,
    omega: &WeightDescriptor,
    p: Exponent,
    ladder: &[usize],
    rule: &DivergenceRule,
) -> Result<WeightClassification> {
    if ladder.is_empty() {
        return Err(LabError::Config("empty refinement ladder".into()));
    }
    w.validate()?;
    omega.validate()?;
    let evidence = map_ordered(ladder, |&n| log_ratio_energy(w, omega, p, n))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let abs: Vec<f64> = evidence.iter().map(|e| e.abs_energy).collect();
    let plus: Vec<f64> = evidence.iter().map(|e| e.plus_energy).collect();
    let abs_trend = rule.trend(ladder, &abs);
    let plus_trend = rule.trend(ladder, &plus);
    let relation = match (plus_trend, abs_trend) {
        (EnergyTrend::Bounded, EnergyTrend::Bounded) => WeightRelation::EqualSpaces,
        (EnergyTrend::Bounded, EnergyTrend::Divergent) => WeightRelation::ProperInclusion,
        _ => WeightRelation::Inconclusive,
    };
    Ok(WeightClassification {
        relation,
        abs_trend,
        plus_trend,
        abs_growth: growth_ratio(&abs),
        plus_growth: growth_ratio(&plus),
        evidence,
    })
}

/// `ρ_p(ω f · w/ω) ≤ ρ_p(ω f) + ρ_p(w/ω)`, returned as `rhs − lhs`.
///
/// This is the pointwise bound `log(1+|ab|) ≤ log(1+|a|) + log(1+|b|)`
/// lifted by Minkowski (`p > 1`) or by subadditivity of `x^p` (`p ≤ 1`).
pub fn inclusion_bound_slack(f: &SampledFunction, w: &Weight, omega: &Weight, p: Exponent) -> Result<f64> {
    let zero = SampledFunction::zero(f.measure().clone());
    let lhs = metric_rho_w_p(f, &zero, w, p)?;
    let f_omega = metric_rho_w_p(f, &zero, omega, p)?;
    let ratio: Vec<f64> = w
        .log_values()
        .iter()
        .zip(omega.log_values())
        .map(|(a, b)| (a - b).exp())
        .collect();
    let ratio_fn = SampledFunction::from_real(f.measure().clone(), &ratio)?;
    let r = metric_rho_p(&ratio_fn, &zero, p)?;
    Ok(f_omega + r - lhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::f_norm;
    use crate::modular::{logplus_energy, norm_p};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn p(x: f64) -> Exponent {
        Exponent::new(x).unwrap()
    }

    fn grid(n: usize) -> Arc<DiscreteMeasure> {
        Arc::new(DiscreteMeasure::lebesgue_grid(n).unwrap())
    }

    fn ladder() -> Vec<usize> {
        (8..=20).step_by(2).map(|k| 1usize << k).collect()
    }

    #[test]
    fn weighted_modular_anchors() {
        let m = grid(16);
        let w = Weight::from_descriptor(m.clone(), WeightDescriptor::TrigAffine { a: 2.0, b: 1.0 }).unwrap();
        let zero = SampledFunction::zero(m.clone());
        assert_eq!(weighted_modular(&zero, &w, p(2.0)).unwrap(), 0.0);
        let inv: Vec<f64> = w.values().iter().map(|v| 1.0 / v).collect();
        let f = SampledFunction::from_real(m.clone(), &inv).unwrap();
        for &pv in &[0.5, 1.0, 3.0] {
            let got = weighted_modular(&f, &w, p(pv)).unwrap();
            assert!((got - LN_2.powf(pv)).abs() < 1e-14);
        }
    }

    #[test]
    fn unit_weight_reduces() {
        let m = grid(9);
        let f = SampledFunction::from_real(m.clone(), &[0.1, 3.0, -2.0, 0.0, 7.0, 1.0, 1.5, -0.2, 4.0]).unwrap();
        let g = SampledFunction::from_real(m.clone(), &[1.0, 1.0, 0.0, 0.3, -7.0, 2.0, 1.5, 5.0, 0.0]).unwrap();
        let one = Weight::unit(m);
        for &pv in &[0.5, 1.0, 2.0] {
            assert_eq!(weighted_modular(&f, &one, p(pv)).unwrap(), orlicz_modular(&f, p(pv)));
            assert_eq!(
                metric_rho_w_p(&f, &g, &one, p(pv)).unwrap(),
                metric_rho_p(&f, &g, p(pv)).unwrap()
            );
            assert_eq!(f_norm_w(&f, &one, p(pv)).unwrap(), f_norm(&f, p(pv)).unwrap());
            assert_eq!(metric_rho_w_p(&f, &f, &one, p(pv)).unwrap(), 0.0);
        }
    }

    #[test]
    fn bad_weights_rejected() {
        let m = grid(3);
        assert!(matches!(
            Weight::new(m.clone(), &[1.0, 0.0, 2.0]),
            Err(LabError::NonPositiveWeight { index: 1, .. })
        ));
        assert!(Weight::new(m.clone(), &[1.0, 2.0]).is_err());
        assert!(Weight::from_descriptor(m.clone(), WeightDescriptor::TrigAffine { a: 1.0, b: 1.0 }).is_err());
        let labelled = Weight::new(m.clone(), &[1.0, 2.0, 3.0]).unwrap();
        let unit = Weight::unit(m);
        assert!(matches!(
            classify_weights(&labelled, &unit, p(1.0), &[8], &DivergenceRule::default()),
            Err(LabError::MissingDescriptor)
        ));
    }

    #[test]
    fn identical_weights_are_equal_spaces() {
        let w = WeightDescriptor::ExpNeg { a: 1.0, b: 1.0 };
        let c = classify_descriptors(&w, &w, p(1.0), &ladder(), &DivergenceRule::default()).unwrap();
        assert_eq!(c.relation, WeightRelation::EqualSpaces);
        assert!(c.evidence.iter().all(|e| e.abs_energy == 0.0 && e.plus_energy == 0.0));
    }

    #[test]
    fn singular_pair_matches_harmonic_oracle() {
        // |log w|^p = 1/t on the midpoint grid: Σ (1/N) · N/(2π(k+½)) = (1/2π) Σ 1/(k+½)
        for &pv in &[1.0, 2.0] {
            let w = WeightDescriptor::ExpNeg { a: 1.0, b: 1.0 / pv };
            let one = WeightDescriptor::Const { c: 1.0 };
            for &n in &[256usize, 4096] {
                let e = log_ratio_energy(&w, &one, p(pv), n).unwrap();
                let oracle: f64 = (0..n).map(|k| 1.0 / (k as f64 + 0.5)).sum::<f64>() / TAU;
                assert!((e.abs_energy - oracle).abs() < 1e-9 * oracle, "{} {}", e.abs_energy, oracle);
                assert_eq!(e.plus_energy, 0.0);
            }
            let c = classify_descriptors(&w, &one, p(pv), &ladder(), &DivergenceRule::default()).unwrap();
            assert_eq!(c.relation, WeightRelation::ProperInclusion);
        }
    }

    #[test]
    fn bounded_log_weight_is_equal_spaces() {
        let w = WeightDescriptor::TrigAffine { a: 2.0, b: 1.0 };
        let one = WeightDescriptor::Const { c: 1.0 };
        let c = classify_descriptors(&w, &one, p(2.0), &ladder(), &DivergenceRule::default()).unwrap();
        assert_eq!(c.relation, WeightRelation::EqualSpaces);
        assert!(c.abs_growth <= 1.05);
    }

    #[test]
    fn failed_hypothesis_is_inconclusive() {
        // log⁺(w/ω) = t^{-1}: p-energy diverges, so the standing hypothesis fails
        let w = WeightDescriptor::ExpPos { a: 1.0, b: 1.0 };
        let one = WeightDescriptor::Const { c: 1.0 };
        let c = classify_descriptors(&w, &one, p(1.0), &ladder(), &DivergenceRule::default()).unwrap();
        assert_eq!(c.relation, WeightRelation::Inconclusive);
        assert_eq!(c.plus_trend, EnergyTrend::Divergent);
    }

    #[test]
    fn slowly_converging_energy_not_divergent() {
        // |log w|^p = t^{-1/2}: integrable, grid error ~ N^{-1/2}
        let w = WeightDescriptor::ExpNeg { a: 1.0, b: 0.5 };
        let one = WeightDescriptor::Const { c: 1.0 };
        let c = classify_descriptors(&w, &one, p(1.0), &ladder(), &DivergenceRule::default()).unwrap();
        assert_ne!(c.abs_trend, EnergyTrend::Divergent);
    }

    #[test]
    fn witness_one_over_w() {
        // 1/w has bounded weighted modular but diverging log⁺ energy
        let pv = 1.0;
        let mut energies = Vec::new();
        for &n in &ladder()[..4] {
            let m = Arc::new(DiscreteMeasure::midpoint_grid(n).unwrap());
            let w = Weight::from_descriptor(m.clone(), WeightDescriptor::ExpNeg { a: 1.0, b: 1.0 }).unwrap();
            let logs: Vec<f64> = w.log_values().iter().map(|l| -l + l).collect();
            assert!((modular_from_logs(&m, &logs, p(pv)) - LN_2).abs() < 1e-14);
            let inv_log: Vec<f64> = w.log_values().iter().map(|l| -l).collect();
            energies.push(m.integrate(inv_log.iter().map(|l| l.max(0.0).powf(pv))));
        }
        assert!(energies.windows(2).all(|e| e[1] > e[0] + 0.1));
    }

    #[test]
    fn scalar_finite_element_reading() {
        // ‖cf‖^w ≤ ‖c‖^w + ‖f‖^w with c read as a constant function holds for
        // w ≥ 1 and fails for small weights
        let m = grid(4);
        let f = SampledFunction::from_real(m.clone(), &[100.0, 3.0, 0.5, 10.0]).unwrap();
        let c = 100.0;
        let cf = f.scale(c);
        let cc = SampledFunction::constant(m.clone(), Complex64::new(c, 0.0)).unwrap();
        let check = |w: &Weight| {
            let lhs = norm_p(&w.apply(&cf).unwrap(), p(1.0));
            let rhs = norm_p(&w.apply(&cc).unwrap(), p(1.0)) + norm_p(&w.apply(&f).unwrap(), p(1.0));
            rhs - lhs
        };
        assert!(check(&Weight::new(m.clone(), &[1.0, 2.0, 5.0, 1.5]).unwrap()) >= 0.0);
        assert!(check(&Weight::new(m, &[1e-3; 4]).unwrap()) < 0.0);
    }

    #[test]
    fn softplus_is_stable() {
        assert!((softplus(0.0) - LN_2).abs() < 1e-16);
        assert_eq!(softplus(1000.0), 1000.0);
        assert_eq!(softplus(f64::NEG_INFINITY), 0.0);
        assert!((softplus(-50.0) - (-50f64).exp()).abs() < 1e-30);
    }

    fn positive() -> impl Strategy<Value = f64> {
        (-4.0f64..4.0).prop_map(f64::exp)
    }

    proptest! {
        #[test]
        fn delegation_matches_direct_formula(
            vals in prop::collection::vec((positive(), positive(), positive()), 1..40),
            pv in 0.3f64..3.5,
        ) {
            let m = grid(vals.len());
            let f: Vec<f64> = vals.iter().map(|v| v.0).collect();
            let g: Vec<f64> = vals.iter().map(|v| -v.1).collect();
            let w: Vec<f64> = vals.iter().map(|v| v.2).collect();
            let fs = SampledFunction::from_real(m.clone(), &f).unwrap();
            let gs = SampledFunction::from_real(m.clone(), &g).unwrap();
            let ws = Weight::new(m, &w).unwrap();
            let n = vals.len() as f64;
            let mut modular = 0.0;
            for i in 0..vals.len() {
                modular += (1.0 + (f[i] - g[i]).abs() * w[i]).ln().powf(pv) / n;
            }
            let oracle = if pv > 1.0 { modular.powf(1.0 / pv) } else { modular };
            let got = metric_rho_w_p(&fs, &gs, &ws, p(pv)).unwrap();
            prop_assert!((got - oracle).abs() <= 1e-12 * (1.0 + oracle));
        }

        #[test]
        fn inclusion_bound(
            vals in prop::collection::vec((-6.0f64..6.0, -3.0f64..3.0, -3.0f64..3.0), 1..40),
            pv in 0.3f64..3.5,
        ) {
            let m = grid(vals.len());
            let f: Vec<f64> = vals.iter().map(|v| v.0.exp()).collect();
            let w: Vec<f64> = vals.iter().map(|v| v.1.exp()).collect();
            let o: Vec<f64> = vals.iter().map(|v| v.2.exp()).collect();
            let fs = SampledFunction::from_real(m.clone(), &f).unwrap();
            let ws = Weight::new(m.clone(), &w).unwrap();
            let os = Weight::new(m, &o).unwrap();
            prop_assert!(inclusion_bound_slack(&fs, &ws, &os, p(pv)).unwrap() >= -1e-12);
        }

        #[test]
        fn weighted_is_product_reduction(
            vals in prop::collection::vec((-5.0f64..5.0, -3.0f64..3.0), 1..30),
            pv in 0.3f64..3.5,
        ) {
            let m = grid(vals.len());
            let f: Vec<f64> = vals.iter().map(|v| v.0).collect();
            let w: Vec<f64> = vals.iter().map(|v| v.1.exp()).collect();
            let fs = SampledFunction::from_real(m.clone(), &f).unwrap();
            let ws = Weight::new(m, &w).unwrap();
            let direct = weighted_modular(&fs, &ws, p(pv)).unwrap();
            let product = orlicz_modular(&ws.apply(&fs).unwrap(), p(pv));
            prop_assert_eq!(direct, product);
            prop_assert!(logplus_energy(&fs, p(pv)) >= 0.0);
        }
    }
}
