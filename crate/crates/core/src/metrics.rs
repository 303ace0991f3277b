//! The metrics `d_p`, `δ_p`, `ρ_p` on `L_p⁺` and the F-norm `|·|_p`.
//!
//! All three metrics share the Ky Fan term `inf_{t>0} [t + μ{|f-g| ≥ t}]`,
//! which metrizes convergence in measure. On a discrete measure the superlevel
//! mass is a right-continuous step function of `t`, so the infimum is found
//! among finitely many candidates by one sorted sweep (see [`ky_fan`]).

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::measure::DiscreteMeasure;
use crate::modular::{log_plus_unchecked, modular_of_moduli, Exponent, SampledFunction};
use crate::sum::NeumaierSum;

/// A metric value with its additive breakdown, when the metric has one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ky_fan_part: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integral_part: Option<f64>,
}

impl MetricValue {
    fn split(ky_fan: f64, integral: f64) -> Self {
        Self {
            value: ky_fan + integral,
            ky_fan_part: Some(ky_fan),
            integral_part: Some(integral),
        }
    }

    fn plain(value: f64) -> Self {
        Self {
            value,
            ky_fan_part: None,
            integral_part: None,
        }
    }
}

/// Which metric to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    D,
    Delta,
    Rho,
}

impl std::str::FromStr for MetricKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d" => Ok(MetricKind::D),
            "delta" => Ok(MetricKind::Delta),
            "rho" => Ok(MetricKind::Rho),
            other => Err(LabError::Config(format!("unknown metric kind `{other}`"))),
        }
    }
}

pub fn metric(kind: MetricKind, f: &SampledFunction, g: &SampledFunction, p: Exponent) -> Result<MetricValue> {
    match kind {
        MetricKind::D => metric_d_p(f, g, p),
        MetricKind::Delta => metric_delta_p(f, g, p),
        MetricKind::Rho => metric_rho_p(f, g, p).map(MetricValue::plain),
    }
}

/// `inf_{t>0} [t + μ{|f-g| ≥ t}]`.
pub fn ky_fan(f: &SampledFunction, g: &SampledFunction) -> Result<f64> {
    f.check_same_space(g)?;
    let h: Vec<f64> = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| (a - b).norm())
        .collect();
    Ok(ky_fan_of(f.measure(), &h))
}

/// Sorted sweep over the candidate set.
///
/// With distinct values `v_1 < … < v_m` of `h`, the map `t ↦ t + μ{h ≥ t}` is
/// affine with slope one on each `(v_{i-1}, v_i]`, so its infimum over `t > 0`
/// is the smallest of the inclusive values `v_i + μ{h ≥ v_i}` (for `v_i > 0`)
/// and the right limits `v_i + μ{h > v_i}`, together with the `t → 0⁺`
/// limit `μ{h > 0}`.
pub fn ky_fan_of(measure: &DiscreteMeasure, h: &[f64]) -> f64 {
    let mut pairs: Vec<(f64, f64)> = h.iter().copied().zip(measure.masses().iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    // walk from the top so the running sum is μ{h > v} before a group and
    // μ{h ≥ v} after it
    let mut above = NeumaierSum::new();
    let mut best = f64::INFINITY;
    let mut i = pairs.len();
    while i > 0 {
        let v = pairs[i - 1].0;
        best = best.min(v + above.value());
        while i > 0 && pairs[i - 1].0 == v {
            above.add(pairs[i - 1].1);
            i -= 1;
        }
        if v > 0.0 {
            best = best.min(v + above.value());
        }
    }
    // t → 0⁺ when every value is positive
    if pairs.first().is_some_and(|&(v, _)| v > 0.0) {
        best = best.min(above.value());
    }
    best
}

/// `d_p(f,g) = KyFan(f,g) + ∫|(log⁺|f|)^p − (log⁺|g|)^p| dμ`.
pub fn metric_d_p(f: &SampledFunction, g: &SampledFunction, p: Exponent) -> Result<MetricValue> {
    let kf = ky_fan(f, g)?;
    let integral = f.measure().integrate(f.values().iter().zip(g.values()).map(|(a, b)| {
        (log_plus_unchecked(a.norm()).powf(p.get()) - log_plus_unchecked(b.norm()).powf(p.get()))
            .abs()
    }));
    Ok(MetricValue::split(kf, integral))
}

/// `δ_p(f,g) = KyFan(f,g) + (∫|log⁺|f| − log⁺|g||^p dμ)^{1/max(p,1)}`.
pub fn metric_delta_p(f: &SampledFunction, g: &SampledFunction, p: Exponent) -> Result<MetricValue> {
    let kf = ky_fan(f, g)?;
    let inner = f.measure().integrate(f.values().iter().zip(g.values()).map(|(a, b)| {
        (log_plus_unchecked(a.norm()) - log_plus_unchecked(b.norm()))
            .abs()
            .powf(p.get())
    }));
    Ok(MetricValue::split(kf, inner.powf(1.0 / p.max1())))
}

/// `ρ_p(f,g) = ‖f−g‖_p^{min(p,1)}`: the norm for `p > 1`, the modular itself for `p ≤ 1`.
pub fn metric_rho_p(f: &SampledFunction, g: &SampledFunction, p: Exponent) -> Result<f64> {
    f.check_same_space(g)?;
    let moduli = f.values().iter().zip(g.values()).map(|(a, b)| (a - b).norm());
    Ok(rho_of_moduli(f.measure(), moduli, p))
}

pub(crate) fn rho_of_moduli<I>(measure: &DiscreteMeasure, moduli: I, p: Exponent) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let modular = modular_of_moduli(measure, moduli, p);
    if p.get() > 1.0 {
        modular.powf(1.0 / p.get())
    } else {
        modular
    }
}

/// Stopping rule for the F-norm bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FNormOptions {
    /// Bracket width relative to its upper end.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for FNormOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FNorm {
    pub value: f64,
    pub iterations: usize,
}

/// `|f|_p = inf{ε > 0 : ∫(log(1+|f|/ε))^p dμ ≤ ε}`.
pub fn f_norm(f: &SampledFunction, p: Exponent) -> Result<FNorm> {
    f_norm_with(f, p, FNormOptions::default())
}

pub fn f_norm_with(f: &SampledFunction, p: Exponent, opts: FNormOptions) -> Result<FNorm> {
    f_norm_of_moduli(f.measure(), &f.moduli(), p, opts)
}

/// Bracketing plus bisection on `G(ε) = modular(|f|/ε) − ε`, which is
/// continuous and strictly decreasing for `f ≢ 0`. The returned `ε*` always
/// satisfies `G(ε*) ≤ 0`.
pub fn f_norm_of_moduli(
    measure: &DiscreteMeasure,
    moduli: &[f64],
    p: Exponent,
    opts: FNormOptions,
) -> Result<FNorm> {
    if moduli.iter().all(|&a| a == 0.0) {
        return Ok(FNorm {
            value: 0.0,
            iterations: 0,
        });
    }
    let g = |eps: f64| modular_of_moduli(measure, moduli.iter().map(|a| a / eps), p) - eps;

    let mut iterations = 0;
    let mut hi = modular_of_moduli(measure, moduli.iter().copied(), p).max(1.0);
    while g(hi) > 0.0 {
        hi *= 2.0;
        iterations += 1;
        if iterations > opts.max_iter {
            return Err(LabError::NoConvergence(iterations));
        }
    }
    let mut lo = hi / 2.0;
    while g(lo) <= 0.0 {
        hi = lo;
        lo /= 2.0;
        iterations += 1;
        if lo < 1e-300 {
            return Ok(FNorm {
                value: 0.0,
                iterations,
            });
        }
    }
    while hi - lo > opts.rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
        if iterations > opts.max_iter {
            return Err(LabError::NoConvergence(iterations));
        }
    }
    Ok(FNorm {
        value: hi,
        iterations,
    })
}

/// Tail threshold of the operational "→ 0" rule.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-3;
/// Number of trailing indices that must be non-increasing.
pub const CONVERGENCE_TAIL: usize = 10;

/// Operational reading of `a_n → 0`: the last value is below `threshold`
/// and the last `tail` values are non-increasing (up to relative rounding of 1e-12).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRule {
    pub threshold: f64,
    pub tail: usize,
}

impl Default for ConvergenceRule {
    fn default() -> Self {
        Self {
            threshold: CONVERGENCE_THRESHOLD,
            tail: CONVERGENCE_TAIL,
        }
    }
}

impl ConvergenceRule {
    pub fn holds(&self, seq: &[f64]) -> bool {
        if self.tail == 0 || seq.len() < self.tail {
            return false;
        }
        let tail = &seq[seq.len() - self.tail..];
        tail.last().is_some_and(|&x| x < self.threshold) && tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12))
    }
}

/// [`ConvergenceRule::holds`] with the default threshold and tail.
pub fn converges_to_zero(seq: &[f64]) -> bool {
    ConvergenceRule::default().holds(seq)
}

/// Constant `C` with `(log(1+x))^p ≤ C x^q` for all `x ≥ 0`, when `0 < q ≤ min(p, 1)`.
///
/// Follows from `log(1+x) ≤ x^s/s` with `s = q/p ≤ 1`, giving `C = (p/q)^p`.
/// For `q > p` no bound of this shape exists near `x = 0`.
pub fn lq_pointwise_constant(p: Exponent, q: f64) -> Option<f64> {
    (q > 0.0 && q <= p.min1()).then(|| (p.get() / q).powf(p.get()))
}

/// Points of `grid` where `(log(1+x))^p > constant · x^q`.
pub fn lq_bound_violations(p: Exponent, q: f64, constant: f64, grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .copied()
        .filter(|&x| x.ln_1p().powf(p.get()) > constant * x.powf(q) * (1.0 + 1e-14))
        .collect()
}
