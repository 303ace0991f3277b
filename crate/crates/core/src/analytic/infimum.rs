//! Minimizing `∫(log(1 + |P(e^{it})| ρ(t)))^p dt/2π` over polynomials with `P(0) = 1`.
//!
//! Without a weight (`ρ ≡ 1`) the infimum is `(log 2)^p`, attained by
//! `P ≡ 1`: `x ↦ (log(1+e^x))^p` is convex and increasing, and Jensen's
//! formula gives `∫ log|P| ≥ log|P(0)| = 0`. With a ratio `ρ` whose logarithm
//! is not integrable, the infimum drops to zero; polynomials can grow large
//! where `ρ` is tiny.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::simplex::{nelder_mead, SimplexOptions};
use crate::error::{LabError, Result};
use crate::measure::DiscreteMeasure;
use crate::modular::{psi, Exponent};
use crate::par::map_ordered;
use crate::weighted::softplus;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyInfimumOptions {
    pub degree: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Random starts draw each coefficient's real and imaginary part from
    /// `[-start_scale, start_scale]`.
    pub start_scale: f64,
    /// Extra Nelder–Mead passes from the best point of each restart.
    pub polish_rounds: usize,
    pub max_evals: usize,
}

impl Default for PolyInfimumOptions {
    fn default() -> Self {
        Self {
            degree: 3,
            restarts: 20,
            seed: 0,
            start_scale: 0.5,
            polish_rounds: 2,
            max_evals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyInfimum {
    pub value: f64,
    /// Constant term first; always starts with `1`.
    pub coefficients: Vec<Complex64>,
    pub restart_values: Vec<f64>,
    pub best_restart: usize,
    pub evaluations: usize,
}

/// Polynomial values on the grid nodes, with `P(0) = 1` fixed.
struct Objective<'a> {
    measure: &'a DiscreteMeasure,
    nodes: Vec<Complex64>,
    log_ratio: Option<&'a [f64]>,
    p: Exponent,
}

impl Objective<'_> {
    fn coefficients(x: &[f64]) -> Vec<Complex64> {
        std::iter::once(Complex64::new(1.0, 0.0))
            .chain(x.chunks(2).map(|c| Complex64::new(c[0], c[1])))
            .collect()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let coeffs = Self::coefficients(x);
        let squares = self.nodes.iter().map(|&z| super::horner(&coeffs, z).norm_sqr());
        match self.log_ratio {
            None => self.measure.integrate(squares.map(|s| psi(s.sqrt(), self.p))),
            Some(l) => self.measure.integrate(
                squares
                    .zip(l)
                    .map(|(s, &lr)| self.p.pow(softplus(0.5 * s.ln() + lr))),
            ),
        }
    }
}

/// Multi-start Nelder–Mead over the free coefficients `a_1, …, a_d`.
///
/// `log_ratio`, when given, holds `log(w/ω)` on the grid atoms. `warm_start`
/// (coefficients `a_1, …`, shorter ones padded with zeros) is used as one
/// extra start; seeding degree `d` with the optimum of degree `d − 1` makes
/// the best values non-increasing in `d`. Restarts run independently and are
/// reduced by value, ties going to the lower restart index.
pub fn poly_modular_infimum(
    p: Exponent,
    grid: &DiscreteMeasure,
    log_ratio: Option<&[f64]>,
    warm_start: Option<&[Complex64]>,
    opts: &PolyInfimumOptions,
) -> Result<PolyInfimum> {
    let angles = grid.angles().ok_or(LabError::NotACircleGrid)?;
    if let Some(l) = log_ratio {
        if l.len() != angles.len() {
            return Err(LabError::LengthMismatch {
                expected: angles.len(),
                got: l.len(),
            });
        }
    }
    let objective = Objective {
        measure: grid,
        nodes: angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect(),
        log_ratio,
        p,
    };
    let dim = 2 * opts.degree;
    if dim == 0 {
        let value = objective.value(&[]);
        return Ok(PolyInfimum {
            value,
            coefficients: vec![Complex64::new(1.0, 0.0)],
            restart_values: vec![value],
            best_restart: 0,
            evaluations: 1,
        });
    }

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(opts.restarts + 1);
    if let Some(ws) = warm_start {
        let mut x: Vec<f64> = ws.iter().take(opts.degree).flat_map(|c| [c.re, c.im]).collect();
        x.resize(dim, 0.0);
        starts.push(x);
    }
    for i in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(i as u64 + 1);
        starts.push(
            (0..dim)
                .map(|_| rng.random_range(-opts.start_scale..=opts.start_scale))
                .collect(),
        );
    }

    let simplex = SimplexOptions {
        max_evals: opts.max_evals,
        ..SimplexOptions::default()
    };
    let runs = map_ordered(&starts, |x0| {
        let f = |x: &[f64]| objective.value(x);
        let mut best = nelder_mead(f, x0, &simplex);
        let mut evals = best.evals;
        for round in 0..opts.polish_rounds {
            let step = SimplexOptions {
                initial_step: 0.05 / (round + 1) as f64,
                ..simplex
            };
            let next = nelder_mead(f, &best.x, &step);
            evals += next.evals;
            if next.value < best.value {
                best = next;
            }
        }
        (best, evals)
    });

    let restart_values: Vec<f64> = runs.iter().map(|(r, _)| r.value).collect();
    let evaluations = runs.iter().map(|(_, e)| e).sum();
    let best_restart = restart_values
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v < restart_values[best] { i } else { best });
    let best = &runs[best_restart].0;
    Ok(PolyInfimum {
        value: best.value,
        coefficients: Objective::coefficients(&best.x),
        restart_values,
        best_restart,
        evaluations,
    })
}
