//! Browser bindings: each export takes plain numbers and strings and returns a JSON string.

use std::sync::Arc;

use logspace_core::analytic::{boundary_modulus_check, probe_radius, OuterFunction};
use logspace_core::harness::generate::{generate_function, weight_descriptor};
use logspace_core::harness::GeneratorSpec;
use logspace_core::metrics::f_norm;
use logspace_core::modular::orlicz_modular;
use logspace_core::weighted::{classify_descriptors, DivergenceRule};
use logspace_core::{Complex64, DiscreteMeasure, Exponent, LabError, Result};
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_GRID: usize = 1 << 16;

fn circle_grid(n: usize, singular: bool) -> Result<Arc<DiscreteMeasure>> {
    if n > MAX_GRID {
        return Err(LabError::Config(format!("grid size above {MAX_GRID}")));
    }
    Ok(Arc::new(if singular {
        DiscreteMeasure::midpoint_grid(n)?
    } else {
        DiscreteMeasure::lebesgue_grid(n)?
    }))
}

fn is_singular(spec: &GeneratorSpec) -> Result<bool> {
    Ok(weight_descriptor(spec)?.is_some_and(|d| d.is_singular()))
}

/// Modular curve `ε ↦ ∫(log(1+|f|/ε))^p` on a log grid of `points` scales, with the F-norm root.
pub fn fnorm_curve_json(spec: &str, p: f64, grid_size: usize, points: usize) -> Result<String> {
    let exp = Exponent::new(p)?;
    let spec = GeneratorSpec::parse(spec, Some(p))?;
    let measure = circle_grid(grid_size, is_singular(&spec)?)?;
    let f = generate_function(&spec, measure, 0)?;
    let norm = f_norm(&f, exp)?;
    let points = points.clamp(2, 400);
    let (lo, hi) = ((norm.value * 1e-2).max(1e-12), (norm.value * 1e2).max(1e-10));
    let curve: Vec<[f64; 2]> = (0..points)
        .map(|i| {
            let eps = lo * (hi / lo).powf(i as f64 / (points - 1) as f64);
            let scaled = f.map(|z| z / eps)?;
            Ok([eps, orlicz_modular(&scaled, exp)])
        })
        .collect::<Result<_>>()?;
    Ok(json!({
        "modular": orlicz_modular(&f, exp),
        "fnorm": norm.value,
        "iterations": norm.iterations,
        "curve": curve,
    })
    .to_string())
}

/// Outer function with boundary modulus given by a weight family, compared with its data near the circle.
pub fn outer_boundary_json(spec: &str, p: f64, grid_size: usize) -> Result<String> {
    let spec = GeneratorSpec::parse(spec, Some(p))?;
    let descriptor = weight_descriptor(&spec)?.ok_or(LabError::MissingDescriptor)?;
    let singular = descriptor.is_singular();
    let measure = circle_grid(grid_size, singular)?;
    let angles = measure.angles().ok_or(LabError::NotACircleGrid)?.to_vec();
    let target: Vec<f64> = angles.iter().map(|&t| descriptor.ln_at(t)).collect();
    let outer = OuterFunction::new(measure, target.clone())?;
    let exclude = if singular { 0.5 } else { 0.0 };
    let check = boundary_modulus_check(&outer, &target, None, exclude)?;
    let r = probe_radius(grid_size);
    let stride = (grid_size / 512).max(1);
    let samples: Vec<[f64; 3]> = (0..angles.len())
        .step_by(stride)
        .map(|k| {
            let z = Complex64::from_polar(r, angles[k]);
            [angles[k], target[k].exp(), outer.log_eval(z).re.exp()]
        })
        .collect();
    Ok(json!({
        "probe_radius": r,
        "max_relative_error": check.max_relative_error,
        "atoms_compared": check.atoms_compared,
        "excluded_radius": exclude,
        "samples": samples,
    })
    .to_string())
}

/// Classify two weight families along grid sizes `2^lo, 2^(lo+2), ..., 2^hi`.
pub fn classify_json(w: &str, omega: &str, p: f64, lo: u32, hi: u32) -> Result<String> {
    if lo > hi || hi > 20 {
        return Err(LabError::Config("ladder exponents must satisfy lo <= hi <= 20".into()));
    }
    let exp = Exponent::new(p)?;
    let descriptor = |s: &str| weight_descriptor(&GeneratorSpec::parse(s, Some(p))?)?.ok_or(LabError::MissingDescriptor);
    let (w, omega) = (descriptor(w)?, descriptor(omega)?);
    let ladder: Vec<usize> = (lo..=hi).step_by(2).map(|k| 1usize << k).collect();
    let c = classify_descriptors(&w, &omega, exp, &ladder, &DivergenceRule::default())?;
    Ok(serde_json::to_string(&c)?)
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = fnormCurve)]
pub fn fnorm_curve(spec: &str, p: f64, grid_size: usize, points: usize) -> std::result::Result<String, JsError> {
    js(fnorm_curve_json(spec, p, grid_size, points))
}

#[wasm_bindgen(js_name = outerBoundary)]
pub fn outer_boundary(spec: &str, p: f64, grid_size: usize) -> std::result::Result<String, JsError> {
    js(outer_boundary_json(spec, p, grid_size))
}

#[wasm_bindgen(js_name = classifyWeights)]
pub fn classify_weights(w: &str, omega: &str, p: f64, lo: u32, hi: u32) -> std::result::Result<String, JsError> {
    js(classify_json(w, omega, p, lo, hi))
}
