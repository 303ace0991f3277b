//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

use std::f64::consts::{E, LN_2};
use std::sync::Arc;
use std::time::Instant;

use logspace_core::analytic::{boundary_modulus_check, poly_modular_infimum, horner, OuterFunction, PolyInfimumOptions};
use logspace_core::harness::experiments::weighted_infimum_ladder;
use logspace_core::harness::{run_experiment, ExperimentConfig};
use logspace_core::measure::{Atoms, DiscreteMeasure};
use logspace_core::metrics::{converges_to_zero, f_norm, ky_fan, metric_d_p, metric_delta_p, metric_rho_p};
use logspace_core::modular::{delta2_violations, log_grid, norm_p, orlicz_modular, psi};
use logspace_core::weighted::{classify_descriptors, DivergenceRule};
use logspace_core::{Exponent, SampledFunction, WeightDescriptor, WeightRelation};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn p(x: f64) -> Exponent {
    Exponent::new(x).unwrap()
}

fn grid(n: usize) -> Arc<DiscreteMeasure> {
    Arc::new(DiscreteMeasure::lebesgue_grid(n).unwrap())
}

fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::from_polar(rng.random_range(-4.0f64..4.0).exp(), rng.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}

fn random_fn(rng: &mut ChaCha8Rng, m: &Arc<DiscreteMeasure>) -> SampledFunction {
    SampledFunction::new(m.clone(), random_complex(rng, m.len())).unwrap()
}

fn random_probability(rng: &mut ChaCha8Rng, n: usize) -> Arc<DiscreteMeasure> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let labels = (0..n).map(|i| i.to_string()).collect();
    Arc::new(DiscreteMeasure::new(Atoms::Labels(labels), raw.iter().map(|m| m / total).collect()).unwrap())
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut measures = vec![grid(1), grid(7), grid(1024)];
    measures.push(random_probability(&mut rng, 33));
    let mut worst = 0.0f64;
    for m in &measures {
        for &pv in &[0.25, 0.5, 1.0, 2.0, 3.0, 7.5] {
            let one = SampledFunction::constant(m.clone(), Complex64::new(1.0, 0.0)).unwrap();
            let em1 = SampledFunction::constant(m.clone(), Complex64::new(E - 1.0, 0.0)).unwrap();
            worst = worst
                .max((norm_p(&one, p(pv)) - LN_2).abs())
                .max((orlicz_modular(&em1, p(pv)) - 1.0).abs());
        }
    }
    outcome(worst <= 1e-12, format!("max deviation {worst:.2e}"))
}

fn criterion_2() -> Outcome {
    let t = log_grid(1e-9, 1e9, 10_000);
    let mut total = 0;
    for &pv in &[0.5, 1.0, 2.0, 3.0] {
        total += delta2_violations(p(pv), &t).len();
        // Independent pointwise oracle.
        total += t
            .iter()
            .filter(|&&x| (2.0 * x).ln_1p().powf(pv) > 2f64.powf(pv) * x.ln_1p().powf(pv) * (1.0 + 1e-14))
            .count();
    }
    outcome(total == 0, format!("{total} violations on 10^4 points x 4 exponents"))
}

fn criterion_3() -> Outcome {
    let m = DiscreteMeasure::lebesgue_grid(1 << 12).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for &pv in &[1.0, 2.0] {
        let floor = LN_2.powf(pv);
        for degree in 0..=3 {
            let opts = PolyInfimumOptions {
                degree,
                restarts: 20,
                seed: 3,
                ..PolyInfimumOptions::default()
            };
            let r = poly_modular_infimum(p(pv), &m, None, None, &opts).unwrap();
            let in_window = r.value >= floor - 1e-6 && r.value <= floor + 1e-3;
            let above_floor = r.restart_values.iter().all(|&v| v >= floor - 1e-6);
            ok &= in_window && above_floor;
            parts.push(format!("p={pv} d={degree}: {:+.1e}", r.value - floor));
        }
    }
    outcome(ok, format!("value - (log 2)^p: {}", parts.join(", ")))
}

/// `min_t t + μ{h ≥ t}` over `t_j = j/M`, `j = 1..=M`, on a probability measure, by direct counting.
fn dense_oracle(masses: &[f64], h: &[f64], points: usize) -> f64 {
    let mut sorted: Vec<(f64, f64)> = h.iter().copied().zip(masses.iter().copied()).collect();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = f64::INFINITY;
    let mut included = 0;
    let mut mass_at_least = 0.0;
    for j in (1..=points).rev() {
        let t = j as f64 / points as f64;
        while included < sorted.len() && sorted[included].0 >= t {
            mass_at_least += sorted[included].1;
            included += 1;
        }
        best = best.min(t + mass_at_least);
    }
    best
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let m = grid(50);
    let mut gap = 0.0f64;
    let mut larger = 0;
    for _ in 0..100 {
        let f = random_fn(&mut rng, &m);
        let g = SampledFunction::new(
            m.clone(),
            f.values().iter().map(|v| v + Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5))).collect(),
        )
        .unwrap();
        let sweep = ky_fan(&f, &g).unwrap();
        let h = f.sub(&g).unwrap().moduli();
        let oracle = dense_oracle(m.masses(), &h, 1_000_000);
        gap = gap.max((sweep - oracle).abs());
        if sweep > oracle + 1e-12 {
            larger += 1;
        }
    }
    outcome(
        gap <= 1e-6 + 1e-12 && larger == 0,
        format!("max |sweep - oracle| {gap:.3e}, sweep larger in {larger}/100"),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = random_probability(&mut rng, 24);
    let mut excess = f64::NEG_INFINITY;
    let mut asym = 0;
    for &pv in &[0.5, 1.0, 2.0, 3.0] {
        let pe = p(pv);
        for trial in 0..1000 {
            let (f, mut g, mut h) = (random_fn(&mut rng, &m), random_fn(&mut rng, &m), random_fn(&mut rng, &m));
            if trial % 2 == 1 {
                // nearby triples
                let s = 10f64.powf(rng.random_range(-6.0..0.0));
                g = f.add(&g.scale(s)).unwrap();
                h = g.add(&h.scale(s)).unwrap();
            }
            let ms: [&dyn Fn(&SampledFunction, &SampledFunction) -> f64; 3] = [
                &|a, b| metric_d_p(a, b, pe).unwrap().value,
                &|a, b| metric_delta_p(a, b, pe).unwrap().value,
                &|a, b| metric_rho_p(a, b, pe).unwrap(),
            ];
            for d in ms {
                excess = excess.max(d(&f, &h) - d(&f, &g) - d(&g, &h));
                if d(&f, &g) != d(&g, &f) {
                    asym += 1;
                }
            }
        }
    }
    outcome(
        excess <= 1e-12 && asym == 0,
        format!("max triangle excess {excess:.2e}, {asym} asymmetric pairs"),
    )
}

fn criterion_6() -> Outcome {
    let mut failed = Vec::new();
    let mut checks = 0;
    for name in ["metric-equivalence", "coarser-topology", "lq-stronger", "norm-modular"] {
        let r = run_experiment(&ExperimentConfig::new(name)).unwrap();
        for c in &r.checks {
            if c.values.keys().any(|k| k.ends_with("_converges")) {
                checks += 1;
                if !c.pass {
                    failed.push(format!("{name}:{}", c.id));
                }
            }
        }
    }
    outcome(
        failed.is_empty() && checks > 0,
        format!("{checks} sequence families, counterexamples: {failed:?}"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut residual = 0.0f64;
    let mut mono = 0;
    let mut scalar = 0;
    for i in 0..200 {
        let pv = [0.5, 1.0, 2.0, 3.0][i % 4];
        let n = rng.random_range(1..40);
        let m = random_probability(&mut rng, n);
        let f = random_fn(&mut rng, &m);
        let eps = f_norm(&f, p(pv)).unwrap().value;
        let lhs = orlicz_modular(&f.scale(1.0 / eps), p(pv));
        residual = residual.max((lhs - eps).abs() / eps.max(1.0));
        let bigger = f.scale_pointwise(&(0..n).map(|_| rng.random_range(1.0..3.0)).collect::<Vec<_>>()).unwrap();
        if eps > f_norm(&bigger, p(pv)).unwrap().value * (1.0 + 1e-10) {
            mono += 1;
        }
        let c: f64 = rng.random_range(-4.0..4.0);
        let k = c.abs().ceil().max(1.0);
        let (nc, nk) = (f_norm(&f.scale(c), p(pv)).unwrap().value, f_norm(&f.scale(k), p(pv)).unwrap().value);
        if nc > nk * (1.0 + 1e-10) || nk > k * eps * (1.0 + 1e-10) {
            scalar += 1;
        }
    }
    let f = random_fn(&mut rng, &grid(16));
    let shrinking: Vec<f64> = (0..=45)
        .map(|k| f_norm(&f.scale(0.5f64.powi(k)), p(1.0)).unwrap().value)
        .collect();
    let continuous = converges_to_zero(&shrinking);
    outcome(
        residual <= 1e-10 && mono == 0 && scalar == 0 && continuous,
        format!(
            "max scaled residual {residual:.2e}, monotonicity failures {mono}, scaling failures {scalar}, |2^-45 f| = {:.1e}",
            shrinking[45]
        ),
    )
}

fn ladder() -> Vec<usize> {
    (8..=20).step_by(2).map(|k| 1usize << k).collect()
}

fn criterion_8_verdicts() -> Outcome {
    let rule = DivergenceRule::default();
    let one = WeightDescriptor::Const { c: 1.0 };
    let mut ok = true;
    let mut parts = Vec::new();
    for &pv in &[1.0, 2.0] {
        let singular = WeightDescriptor::ExpNeg { a: 1.0, b: 1.0 / pv };
        let c = classify_descriptors(&singular, &one, p(pv), &ladder(), &rule).unwrap();
        ok &= c.relation == WeightRelation::ProperInclusion;
        parts.push(format!("p={pv} exp(-t^(-1/p)): {:?}", c.relation));
        let trig = WeightDescriptor::TrigAffine { a: 2.0, b: 1.0 };
        let c = classify_descriptors(&trig, &one, p(pv), &ladder(), &rule).unwrap();
        ok &= c.relation == WeightRelation::EqualSpaces && c.abs_growth <= 1.05;
        parts.push(format!("p={pv} 2+sin t: {:?} ratio {:.4}", c.relation, c.abs_growth));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_8_growth() -> Outcome {
    let rule = DivergenceRule::default();
    let one = WeightDescriptor::Const { c: 1.0 };
    let mut growth = Vec::new();
    for &pv in &[1.0, 2.0] {
        let singular = WeightDescriptor::ExpNeg { a: 1.0, b: 1.0 / pv };
        let c = classify_descriptors(&singular, &one, p(pv), &ladder(), &rule).unwrap();
        growth.push(c.abs_growth);
    }
    // Harmonic oracle: midpoint sums of 1/t grow like log N.
    let harmonic = |n: usize| {
        let h = std::f64::consts::TAU / n as f64;
        (0..n).map(|k| 1.0 / (h * (k as f64 + 0.5))).sum::<f64>() / n as f64
    };
    let oracle = harmonic(1 << 20) / harmonic(1 << 8);
    outcome(
        growth.iter().all(|&g| g >= 10.0),
        format!("energy growth 2^8->2^20: {growth:.4?} (harmonic oracle {oracle:.4}), required >= 10"),
    )
}

fn criterion_9() -> Outcome {
    let mut errors = Vec::new();
    for k in [8, 10, 12, 14] {
        let m = grid(1 << k);
        let outer = OuterFunction::from_fn(m, |t| (2.0 + t.sin()).ln()).unwrap();
        let target = outer.log_modulus().to_vec();
        errors.push(boundary_modulus_check(&outer, &target, None, 0.0).unwrap().max_relative_error);
    }
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    outcome(
        decreasing && errors[3] < 1e-2,
        format!("errors at N = 2^8..2^14: {:?}", errors.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>()),
    )
}

fn criterion_10() -> Outcome {
    let pe = p(1.0);
    let n = 1024;
    let ladder = weighted_infimum_ladder(pe, n, 6, 4, 10).unwrap();
    let values: Vec<f64> = ladder.iter().map(|r| r.value).collect();
    let strict = values.windows(2).all(|w| w[1] < w[0]);
    let m = DiscreteMeasure::lebesgue_grid(n).unwrap();
    let nodes: Vec<Complex64> = m.angles().unwrap().iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    let unweighted: Vec<f64> = ladder
        .iter()
        .map(|r| m.integrate(nodes.iter().map(|&z| psi(horner(&r.coefficients, z).norm(), pe))))
        .collect();
    let floor = unweighted.iter().all(|&u| u >= LN_2 - 1e-6);
    outcome(
        strict && floor,
        format!("weighted best values {values:.6?}; unweighted modular of the same P >= log 2: {floor}"),
    )
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 constant-function anchors", criterion_1),
        ("2 Delta_2 constant", criterion_2),
        ("3 polynomial infimum", criterion_3),
        ("4 Ky Fan exactness", criterion_4),
        ("5 metric axioms", criterion_5),
        ("6 convergence equivalences", criterion_6),
        ("7 F-norm consistency", criterion_7),
        ("8 weight classification verdicts", criterion_8_verdicts),
        ("8 weight classification growth >= 10x", criterion_8_growth),
        ("9 outer-function boundary recovery", criterion_9),
        ("10 weighted strictness witness", criterion_10),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failures += 1;
        }
        println!("{verdict} criterion {name} ({:.2?}): {}", start.elapsed(), o.detail);
    }
    if failures > 0 {
        println!("{failures} acceptance line(s) failed");
        std::process::exit(1);
    }
}
