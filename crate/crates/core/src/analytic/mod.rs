//! Functions on the unit disk: polynomials and outer functions, radial
//! log⁺ means, boundary recovery and the polynomial modular infimum.
//!
//! An outer function is determined by its boundary log-modulus `u`:
//! `F(z) = exp(∫ K(t, z) u(t) dt/2π)` with the Herglotz kernel
//! `K(t, z) = (e^{it}+z)/(e^{it}−z)`. On an `N`-point grid the plain kernel
//! sum aliases every frequency above `N/2` back into the band, which leaves
//! an error floor of about `2 r^N` (≈ `2e^{-2π}` at `r = 1 − 2π/N`) that no
//! refinement removes. [`OuterKernel::BandLimited`] truncates the kernel's
//! series `1 + 2Σ_{m≥1} (z e^{-it})^m` at the highest frequency the grid
//! resolves; its closed form keeps the quadrature O(N) per point.

mod infimum;
pub mod simplex;

pub use infimum::{poly_modular_infimum, PolyInfimum, PolyInfimumOptions};

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::measure::DiscreteMeasure;
use crate::modular::Exponent;
use crate::par::map_ordered;
use crate::sum::NeumaierSum;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OuterKernel {
    /// Herglotz series truncated to the grid-resolvable band.
    #[default]
    BandLimited,
    /// The Herglotz kernel summed as is.
    Raw,
}

/// Outer function given by log-modulus samples on a circle grid.
#[derive(Debug, Clone)]
pub struct OuterFunction {
    measure: Arc<DiscreteMeasure>,
    log_modulus: Vec<f64>,
    kernel: OuterKernel,
    // e^{-it_k}
    conj_nodes: Vec<Complex64>,
    // e^{-i(M+1)t_k}, M the highest resolved frequency
    cutoff_phase: Vec<Complex64>,
    cutoff: i32,
}

impl OuterFunction {
    pub fn new(measure: Arc<DiscreteMeasure>, log_modulus: Vec<f64>) -> Result<Self> {
        Self::with_kernel(measure, log_modulus, OuterKernel::default())
    }

    pub fn with_kernel(measure: Arc<DiscreteMeasure>, log_modulus: Vec<f64>, kernel: OuterKernel) -> Result<Self> {
        let angles = measure.angles().ok_or(LabError::NotACircleGrid)?;
        if log_modulus.len() != angles.len() {
            return Err(LabError::LengthMismatch {
                expected: angles.len(),
                got: log_modulus.len(),
            });
        }
        if let Some(index) = log_modulus.iter().position(|v| !v.is_finite()) {
            return Err(LabError::NonFinite { index });
        }
        let n = angles.len();
        let cutoff = ((n.saturating_sub(1)) / 2 + 1) as i32;
        let conj_nodes = angles.iter().map(|&t| Complex64::from_polar(1.0, -t)).collect();
        let cutoff_phase = angles
            .iter()
            .map(|&t| Complex64::from_polar(1.0, -(cutoff as f64) * t))
            .collect();
        Ok(Self {
            measure,
            log_modulus,
            kernel,
            conj_nodes,
            cutoff_phase,
            cutoff,
        })
    }

    /// Samples `u(t_k)` of a closure on the measure's angles.
    pub fn from_fn<F: Fn(f64) -> f64>(measure: Arc<DiscreteMeasure>, u: F) -> Result<Self> {
        let angles = measure.angles().ok_or(LabError::NotACircleGrid)?;
        let samples = angles.iter().map(|&t| u(t)).collect();
        Self::new(measure, samples)
    }

    pub fn measure(&self) -> &Arc<DiscreteMeasure> {
        &self.measure
    }

    pub fn log_modulus(&self) -> &[f64] {
        &self.log_modulus
    }

    pub fn kernel(&self) -> OuterKernel {
        self.kernel
    }

    /// `Σ_k mass_k K(t_k, z) u_k`, i.e. `log F(z)`.
    pub fn log_eval(&self, z: Complex64) -> Complex64 {
        let mut re = NeumaierSum::new();
        let mut im = NeumaierSum::new();
        let z_cut = z.powi(self.cutoff);
        for k in 0..self.log_modulus.len() {
            let w = z * self.conj_nodes[k];
            let kernel = match self.kernel {
                OuterKernel::Raw => (1.0 + w) / (1.0 - w),
                OuterKernel::BandLimited => (1.0 + w - 2.0 * z_cut * self.cutoff_phase[k]) / (1.0 - w),
            };
            let term = kernel * (self.measure.masses()[k] * self.log_modulus[k]);
            re.add(term.re);
            im.add(term.im);
        }
        Complex64::new(re.value(), im.value())
    }
}

/// A holomorphic function on the disk.
#[derive(Debug, Clone)]
pub enum AnalyticFunction {
    /// Coefficients, constant term first.
    Polynomial(Vec<Complex64>),
    Outer(OuterFunction),
}

fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(LabError::RadiusOutOfRange(r))
    }
}

/// Horner evaluation.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

impl AnalyticFunction {
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        AnalyticFunction::Polynomial(coeffs)
    }

    pub fn real_polynomial(coeffs: &[f64]) -> Self {
        AnalyticFunction::Polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `f(re^{iθ})`
    pub fn eval(&self, r: f64, theta: f64) -> Result<Complex64> {
        check_radius(r)?;
        let z = Complex64::from_polar(r, theta);
        Ok(match self {
            AnalyticFunction::Polynomial(c) => horner(c, z),
            AnalyticFunction::Outer(o) => o.log_eval(z).exp(),
        })
    }

    /// `log|f(re^{iθ})|`, computed without forming `f` for outer functions.
    pub fn log_modulus_at(&self, r: f64, theta: f64) -> Result<f64> {
        check_radius(r)?;
        let z = Complex64::from_polar(r, theta);
        Ok(match self {
            AnalyticFunction::Polynomial(c) => horner(c, z).norm().ln(),
            AnalyticFunction::Outer(o) => o.log_eval(z).re,
        })
    }
}

/// Radial means `∫(log⁺|f(re^{iθ})|)^p dθ/2π` over a set of radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialMeanProfile {
    pub radii: Vec<f64>,
    pub means: Vec<f64>,
    pub sup_estimate: f64,
    pub bounded: bool,
}

/// Relative spread allowed among the last three means by the boundedness heuristic.
pub const PROFILE_PLATEAU_TOLERANCE: f64 = 0.05;

/// Bounded when the last three means agree within 5%, are non-increasing,
/// or rise by increments that at least halve each step.
pub fn profile_looks_bounded(means: &[f64]) -> bool {
    let tail = &means[means.len().saturating_sub(3)..];
    if tail.is_empty() {
        return true;
    }
    let max = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let plateau = max <= min * (1.0 + PROFILE_PLATEAU_TOLERANCE) || max == 0.0;
    let steps: Vec<f64> = tail.windows(2).map(|w| w[1] - w[0]).collect();
    let settling = steps.len() == 2 && steps[1] <= 0.5 * steps[0];
    plateau || settling || steps.iter().all(|&d| d <= 0.0)
}

pub fn privalov_profile(
    f: &AnalyticFunction,
    p: Exponent,
    radii: &[f64],
    grid: &DiscreteMeasure,
) -> Result<RadialMeanProfile> {
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LabError::Config("radii must be strictly increasing".into()));
    }
    for &r in radii {
        check_radius(r)?;
    }
    let angles = grid.angles().ok_or(LabError::NotACircleGrid)?;
    let mut means = Vec::with_capacity(radii.len());
    for &r in radii {
        let logs = map_ordered(angles, |&th| f.log_modulus_at(r, th));
        let logs = logs.into_iter().collect::<Result<Vec<_>>>()?;
        means.push(grid.integrate(logs.iter().map(|l| l.max(0.0).powf(p.get()))));
    }
    let sup_estimate = means.iter().cloned().fold(0.0, f64::max);
    Ok(RadialMeanProfile {
        radii: radii.to_vec(),
        bounded: profile_looks_bounded(&means),
        means,
        sup_estimate,
    })
}

/// Default probe radius `1 − 2π/N` for an `N`-point grid.
pub fn probe_radius(grid_size: usize) -> f64 {
    1.0 - std::f64::consts::TAU / grid_size as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub max_relative_error: f64,
    pub r_probe: f64,
    pub atoms_compared: usize,
}

/// Largest `||F(r e^{it_k})| − target_k| / target_k` over grid atoms.
///
/// `target_log` holds `log target_k`; atoms within `exclude_radius` (in angle)
/// of `t = 0` are skipped, which handles boundary data singular at zero.
pub fn boundary_modulus_check(
    f: &OuterFunction,
    target_log: &[f64],
    r_probe: Option<f64>,
    exclude_radius: f64,
) -> Result<BoundaryCheck> {
    let angles = f.measure().angles().ok_or(LabError::NotACircleGrid)?;
    if target_log.len() != angles.len() {
        return Err(LabError::LengthMismatch {
            expected: angles.len(),
            got: target_log.len(),
        });
    }
    let r = r_probe.unwrap_or_else(|| probe_radius(angles.len()));
    check_radius(r)?;
    let kept: Vec<usize> = (0..angles.len())
        .filter(|&k| {
            let t = angles[k];
            t.min(std::f64::consts::TAU - t) >= exclude_radius
        })
        .collect();
    let errors = map_ordered(&kept, |&k| {
        let log_f = f.log_eval(Complex64::from_polar(r, angles[k])).re;
        (log_f - target_log[k]).exp_m1().abs()
    });
    Ok(BoundaryCheck {
        max_relative_error: errors.iter().cloned().fold(0.0, f64::max),
        r_probe: r,
        atoms_compared: kept.len(),
    })
}
