//! Deterministic sample generators.
//!
//! | name            | arguments         | function samples          |
//! |-----------------|-------------------|---------------------------|
//! | `const`         | `c`               | `c`                       |
//! | `poly-boundary` | coefficients      | `P(e^{it})`               |
//! | `lognormal`     | `sigma`           | `e^{σZ} e^{iφ}`, seeded   |
//! | `expneg`        | `a`, `b`          | `exp(-a t^{-b})`          |
//! | `exppos`        | `a`, `b`          | `exp(a t^{-b})`           |
//! | `trig-affine`   | `a`, `b`          | `a + b sin t`             |
//! | `piecewise`     | values            | equal constant pieces     |

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::rng::substream;
use super::spec::GeneratorSpec;
use crate::analytic::horner;
use crate::error::{LabError, Result};
use crate::measure::DiscreteMeasure;
use crate::modular::SampledFunction;
use crate::weighted::{Weight, WeightDescriptor};

pub const GENERATORS: &[&str] = &[
    "const",
    "poly-boundary",
    "lognormal",
    "expneg",
    "exppos",
    "trig-affine",
    "piecewise",
];

/// Closed-form weight family of a spec, `None` for `lognormal`/`poly-boundary`.
pub fn weight_descriptor(spec: &GeneratorSpec) -> Result<Option<WeightDescriptor>> {
    let d = match spec.name.as_str() {
        "const" => WeightDescriptor::Const {
            c: spec.arg("c", 0, Some(1.0))?,
        },
        "trig-affine" => WeightDescriptor::TrigAffine {
            a: spec.arg("a", 0, None)?,
            b: spec.arg("b", 1, None)?,
        },
        "expneg" => WeightDescriptor::ExpNeg {
            a: spec.arg("a", 0, Some(1.0))?,
            b: spec.arg("b", 1, None)?,
        },
        "exppos" => WeightDescriptor::ExpPos {
            a: spec.arg("a", 0, Some(1.0))?,
            b: spec.arg("b", 1, None)?,
        },
        "piecewise" => WeightDescriptor::Piecewise {
            values: spec.values(),
        },
        "lognormal" | "poly-boundary" => return Ok(None),
        other => return Err(LabError::UnknownGenerator(other.to_string())),
    };
    d.validate()?;
    Ok(Some(d))
}

fn angles(measure: &DiscreteMeasure) -> Result<&[f64]> {
    measure.angles().ok_or(LabError::NotACircleGrid)
}

/// Samples of a generator on the atoms of `measure`. Only `lognormal` uses
/// randomness, drawn from the substream of `seed` named by the spec string.
pub fn generate_function(spec: &GeneratorSpec, measure: Arc<DiscreteMeasure>, seed: u64) -> Result<SampledFunction> {
    let values: Vec<Complex64> = match spec.name.as_str() {
        "const" => vec![Complex64::new(spec.arg("c", 0, Some(1.0))?, 0.0); measure.len()],
        "poly-boundary" => {
            let coeffs: Vec<Complex64> = spec.values().into_iter().map(|c| Complex64::new(c, 0.0)).collect();
            angles(&measure)?
                .iter()
                .map(|&t| horner(&coeffs, Complex64::from_polar(1.0, t)))
                .collect()
        }
        "lognormal" => {
            let sigma = spec.arg("sigma", 0, Some(1.0))?;
            let mut rng = substream(seed, spec.source());
            lognormal_samples(&mut rng, sigma, measure.len())
        }
        _ => {
            let d = weight_descriptor(spec)?.expect("closed-form family");
            angles(&measure)?
                .iter()
                .map(|&t| Complex64::new(d.ln_at(t).exp(), 0.0))
                .collect()
        }
    };
    SampledFunction::new(measure, values)
}

pub fn generate_weight(spec: &GeneratorSpec, measure: Arc<DiscreteMeasure>, seed: u64) -> Result<Weight> {
    match weight_descriptor(spec)? {
        Some(d) => Weight::from_descriptor(measure, d),
        None => {
            let f = generate_function(spec, measure.clone(), seed)?;
            Weight::new(measure, &f.moduli())
        }
    }
}

/// `e^{σZ}` moduli with uniform phases.
pub fn lognormal_samples(rng: &mut ChaCha8Rng, sigma: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            let phase = rng.random_range(0.0..TAU);
            Complex64::from_polar((sigma * z).exp(), phase)
        })
        .collect()
}
