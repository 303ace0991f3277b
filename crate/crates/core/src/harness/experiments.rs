//! The experiment catalog and its runner.
//!
//! Every experiment turns a family of claims into checks on generated data.
//! Randomness comes from one seed split into per-check substreams, so a fixed
//! configuration always produces the same report.

use std::f64::consts::LN_2;
use std::path::PathBuf;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::generate::{generate_function, generate_weight, lognormal_samples, weight_descriptor};
use super::ingest::{load_function, load_measure};
use super::report::{CheckRecord, ExperimentReport};
use super::rng::substream;
use super::spec::GeneratorSpec;
use crate::analytic::{
    boundary_modulus_check, poly_modular_infimum, PROFILE_PLATEAU_TOLERANCE, privalov_profile, probe_radius, AnalyticFunction, OuterFunction,
    PolyInfimumOptions,
};
use crate::error::{LabError, Result};
use crate::measure::{Atoms, DiscreteMeasure};
use crate::metrics::{
    f_norm, ky_fan_of, lq_bound_violations, lq_pointwise_constant, metric_d_p, metric_delta_p, metric_rho_p,
    ConvergenceRule,
};
use crate::modular::{
    algebra_inequality_slack, check_sandwich, decay_check, delta2_violations, log_grid, logplus_energy,
    orlicz_modular, Exponent, SampledFunction, Sandwich,
};
use crate::par::map_ordered;
use crate::weighted::{
    classify_descriptors, inclusion_bound_slack, metric_rho_w_p, modular_from_logs, DivergenceRule, EnergyTrend,
    Weight, WeightDescriptor, WeightRelation,
};

/// Experiment names with the claim each one checks.
pub const CATALOG: &[(&str, &str)] = &[
    ("metric-axioms", "d_p, delta_p and rho_p are metrics; the Ky Fan term is an exact infimum"),
    ("metric-equivalence", "rho_p, d_p and delta_p define the same convergence; multiplication is continuous"),
    ("coarser-topology", "for p < s, d_s convergence implies d_p convergence"),
    ("lq-stronger", "L^q convergence implies rho_p convergence"),
    ("norm-modular", "norm and modular convergences coincide; |.|_p is an F-norm"),
    ("delta2", "psi(t) = (log(1+t))^p satisfies Delta_2 with c = 2^p and psi(t)/t -> 0"),
    ("algebra-inequalities", "L_p^+ is an algebra; log(1+|fg|) <= log(1+|f|) + log(1+|g|)"),
    ("weight-classify", "L_p^omega = L_p^w iff log(w/omega) in L^p"),
    ("proper-inclusion", "L_p^omega is a proper subset of L_p^w when log(w/omega) is not in L^p"),
    ("poly-infimum", "inf over P(0)=1 of the modular of P is (log 2)^p; weighted infima tend to 0"),
    ("outer-boundary", "the outer function has boundary modulus exp(u); Privalov means are bounded"),
    ("cauchy-spotcheck", "absolutely summable series converge in (L_p, rho_p) and (L_p^w, rho_p^w)"),
];

pub fn anchor(experiment: &str) -> Option<&'static str> {
    CATALOG.iter().find(|(n, _)| *n == experiment).map(|(_, a)| *a)
}

/// Number of halvings in the sequence families `s_k = 2^{-k}`, `k = 0..=STEPS`.
pub const SEQUENCE_STEPS: usize = 45;

/// Numerical thresholds. Every field is overridable by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub triangle_slack: f64,
    pub ky_fan: f64,
    pub ky_fan_oracle_points: usize,
    pub convergence_threshold: f64,
    pub convergence_tail: usize,
    pub fnorm_residual: f64,
    pub fnorm_relative: f64,
    pub inclusion_slack: f64,
    pub poly_floor: f64,
    pub poly_window: f64,
    pub bounded_ratio: f64,
    pub divergence_ratio: f64,
    pub increment_persistence: f64,
    pub boundary_error: f64,
    pub outer_identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            triangle_slack: 1e-12,
            ky_fan: 1e-6,
            ky_fan_oracle_points: 1_000_000,
            convergence_threshold: 1e-3,
            convergence_tail: 10,
            fnorm_residual: 1e-10,
            fnorm_relative: 1e-10,
            inclusion_slack: 1e-12,
            poly_floor: 1e-6,
            poly_window: 1e-3,
            bounded_ratio: 1.05,
            divergence_ratio: 10.0,
            increment_persistence: 0.5,
            boundary_error: 1e-2,
            outer_identity: 1e-8,
        }
    }
}

/// `(name, description)` of every tolerance, in declaration order.
pub const TOLERANCE_DOCS: &[(&str, &str)] = &[
    ("triangle_slack", "allowed excess in triangle inequalities"),
    ("ky_fan", "Ky Fan sweep vs dense-grid oracle"),
    ("ky_fan_oracle_points", "points of the dense Ky Fan oracle grid"),
    ("convergence_threshold", "a sequence tends to 0 when its last value is below this"),
    ("convergence_tail", "...and its last this-many values are non-increasing"),
    ("fnorm_residual", "|modular(f/e) - e| <= this * max(1, e) at the F-norm root"),
    ("fnorm_relative", "relative slack in F-norm monotonicity and scaling checks"),
    ("inclusion_slack", "allowed excess in the weighted inclusion bound"),
    ("poly_floor", "minimized modular may not drop below (log 2)^p minus this"),
    ("poly_window", "minimized modular must be within this above (log 2)^p"),
    ("bounded_ratio", "refinement energy ratio at or below this means bounded"),
    ("divergence_ratio", "refinement energy ratio above this means divergent"),
    ("increment_persistence", "late/early per-doubling energy increments at or above this means divergent"),
    ("boundary_error", "outer-function boundary modulus relative error at the finest grid"),
    ("outer_identity", "outer-function constant and multiplicativity identities"),
];

impl Tolerances {
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let mut map = serde_json::to_value(&*self)?;
        let slot = map
            .get_mut(key)
            .ok_or_else(|| LabError::Config(format!("unknown tolerance `{key}`")))?;
        *slot = if slot.is_u64() {
            if value < 0.0 || value.fract() != 0.0 {
                return Err(LabError::Config(format!("tolerance `{key}` must be a non-negative integer")));
            }
            serde_json::Value::from(value as u64)
        } else {
            serde_json::Value::from(value)
        };
        *self = serde_json::from_value(map)?;
        Ok(())
    }

    pub fn default_of(key: &str) -> Option<String> {
        serde_json::to_value(Self::default()).ok()?.get(key).map(|v| v.to_string())
    }

    fn rule(&self) -> ConvergenceRule {
        ConvergenceRule {
            threshold: self.convergence_threshold,
            tail: self.convergence_tail,
        }
    }

    fn divergence(&self) -> DivergenceRule {
        DivergenceRule {
            divergence_ratio: self.divergence_ratio,
            bounded_ratio: self.bounded_ratio,
            increment_persistence: self.increment_persistence,
        }
    }
}

/// Files and generator specs that replace the seeded base samples.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Inputs {
    pub measure: Option<PathBuf>,
    pub f: Option<PathBuf>,
    pub g: Option<PathBuf>,
    pub f_spec: Option<String>,
    pub g_spec: Option<String>,
    pub w_spec: Option<String>,
    pub omega_spec: Option<String>,
}

/// Empty lists and `None` fields fall back to per-experiment defaults; the
/// report records the resolved values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub p_values: Vec<f64>,
    pub grid_sizes: Vec<usize>,
    pub seed: u64,
    pub trials: Option<usize>,
    pub degree: Option<usize>,
    pub restarts: Option<usize>,
    pub tolerances: Tolerances,
    pub inputs: Inputs,
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            ..Self::default()
        }
    }

    fn resolve(&self) -> Result<Self> {
        let name = self.experiment.as_str();
        if anchor(name).is_none() {
            return Err(LabError::UnknownExperiment(name.to_string()));
        }
        let mut c = self.clone();
        let ladder = || (8..=20).step_by(2).map(|k| 1usize << k).collect::<Vec<_>>();
        let (ps, grids, trials): (Vec<f64>, Vec<usize>, usize) = match name {
            "metric-axioms" => (vec![0.5, 1.0, 2.0, 3.0], vec![16], 1000),
            "metric-equivalence" | "lq-stronger" | "cauchy-spotcheck" => (vec![0.5, 1.0, 2.0, 3.0], vec![256], 0),
            "coarser-topology" => (vec![0.5, 1.0, 2.0, 3.0], vec![256], 0),
            "norm-modular" => (vec![0.5, 1.0, 2.0, 3.0], vec![256], 200),
            "delta2" => (vec![0.5, 1.0, 2.0, 3.0], vec![10_000], 1000),
            "algebra-inequalities" => (vec![0.5, 1.0, 2.0, 3.0], vec![256], 1000),
            "weight-classify" => (vec![1.0, 2.0], ladder(), 0),
            "proper-inclusion" => (vec![1.0, 2.0], ladder(), 200),
            "poly-infimum" => (vec![1.0, 2.0], vec![1024], 0),
            "outer-boundary" => (vec![1.0, 2.0], vec![256, 1024, 4096], 0),
            _ => unreachable!("catalog checked above"),
        };
        if c.p_values.is_empty() {
            c.p_values = ps;
        }
        if c.grid_sizes.is_empty() {
            c.grid_sizes = grids;
        }
        if c.trials.is_none() && trials > 0 {
            c.trials = Some(trials);
        }
        if name == "poly-infimum" {
            c.degree.get_or_insert(3);
            c.restarts.get_or_insert(4);
        }
        for &p in &c.p_values {
            Exponent::new(p)?;
        }
        if c.grid_sizes.contains(&0) {
            return Err(LabError::EmptyGrid);
        }
        Ok(c)
    }

    fn exponents(&self) -> Vec<Exponent> {
        self.p_values.iter().map(|&p| Exponent::new(p).expect("validated")).collect()
    }

    fn grid(&self) -> usize {
        self.grid_sizes[0]
    }

    fn trials(&self) -> usize {
        self.trials.unwrap_or(0)
    }

    fn rng(&self, id: &str) -> ChaCha8Rng {
        substream(self.seed, &format!("{}/{id}", self.experiment))
    }
}

/// Runs one catalogued experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let cfg = config.resolve()?;
    let checks = match cfg.experiment.as_str() {
        "metric-axioms" => metric_axioms(&cfg)?,
        "metric-equivalence" => metric_equivalence(&cfg)?,
        "coarser-topology" => coarser_topology(&cfg)?,
        "lq-stronger" => lq_stronger(&cfg)?,
        "norm-modular" => norm_modular(&cfg)?,
        "delta2" => delta2(&cfg)?,
        "algebra-inequalities" => algebra_inequalities(&cfg)?,
        "weight-classify" => weight_classify(&cfg)?,
        "proper-inclusion" => proper_inclusion(&cfg)?,
        "poly-infimum" => poly_infimum(&cfg)?,
        "outer-boundary" => outer_boundary(&cfg)?,
        "cauchy-spotcheck" => cauchy_spotcheck(&cfg)?,
        _ => unreachable!("resolved config names a catalogued experiment"),
    };
    Ok(ExperimentReport::new(&cfg.experiment, serde_json::to_value(&cfg)?, checks))
}

fn ptag(p: Exponent) -> String {
    format!("p={}", p.get())
}

fn grid(n: usize) -> Result<Arc<DiscreteMeasure>> {
    Ok(Arc::new(DiscreteMeasure::lebesgue_grid(n)?))
}

fn lognormal(measure: &Arc<DiscreteMeasure>, rng: &mut ChaCha8Rng, sigma: f64) -> SampledFunction {
    SampledFunction::new(measure.clone(), lognormal_samples(rng, sigma, measure.len())).expect("finite samples")
}

/// Labelled atoms with masses drawn from `[0.05, 1)`, optionally normalized to total 1.
fn random_measure(rng: &mut ChaCha8Rng, n: usize, probability: bool) -> Result<Arc<DiscreteMeasure>> {
    let labels = (0..n).map(|i| format!("a{i}")).collect();
    let mut masses: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    if probability {
        let total: f64 = masses.iter().sum();
        masses.iter_mut().for_each(|m| *m /= total);
    }
    Ok(Arc::new(DiscreteMeasure::new(Atoms::Labels(labels), masses)?))
}

/// Base functions `f, g, h`: from files or specs when given, otherwise seeded log-normal samples.
fn bases(cfg: &ExperimentConfig, n: usize) -> Result<[SampledFunction; 3]> {
    let inputs = &cfg.inputs;
    let measure = match &inputs.measure {
        Some(path) => Some(Arc::new(load_measure(path)?)),
        None => None,
    };
    let one = |path: &Option<PathBuf>, spec: &Option<String>, measure: Option<Arc<DiscreteMeasure>>, id: &str| {
        if let Some(path) = path {
            return load_function(path, measure);
        }
        let measure = match measure {
            Some(m) => m,
            None => grid(n)?,
        };
        match spec {
            Some(s) => generate_function(&GeneratorSpec::parse(s, None)?, measure, cfg.seed),
            None => Ok(lognormal(&measure, &mut cfg.rng(id), 1.0)),
        }
    };
    let f = one(&inputs.f, &inputs.f_spec, measure, "base-f")?;
    let m = Some(f.measure().clone());
    let g = one(&inputs.g, &inputs.g_spec, m.clone(), "base-g")?;
    let h = one(&None, &None, m, "base-h")?;
    Ok([f, g, h])
}

#[derive(Debug, Clone, Copy)]
enum Family {
    Additive,
    Multiplicative,
    LogShift,
}

impl Family {
    const ALL: [Family; 3] = [Family::Additive, Family::Multiplicative, Family::LogShift];

    fn name(self) -> &'static str {
        match self {
            Family::Additive => "additive",
            Family::Multiplicative => "multiplicative",
            Family::LogShift => "log-shift",
        }
    }

    /// `f + s g`, `f (1 + s g)` and `e^s f`.
    fn member(self, f: &SampledFunction, g: &SampledFunction, s: f64) -> SampledFunction {
        match self {
            Family::Additive => f.add(&g.scale(s)).expect("shared measure"),
            Family::Multiplicative => f.zip_with(g, |a, b| a * (1.0 + s * b)).expect("shared measure"),
            Family::LogShift => f.scale(s.exp()),
        }
    }
}

fn steps() -> impl Iterator<Item = f64> {
    (0..=SEQUENCE_STEPS).map(|k| 0.5f64.powi(k as i32))
}

/// Distances `dist(member(s_k), f)` along a family.
fn family_sequence<D>(family: Family, f: &SampledFunction, g: &SampledFunction, dist: D) -> Result<Vec<f64>>
where
    D: Fn(&SampledFunction, &SampledFunction) -> Result<f64>,
{
    steps().map(|s| dist(&family.member(f, g, s), f)).collect()
}

fn first_below(seq: &[f64], threshold: f64) -> Option<usize> {
    seq.iter().position(|&x| x < threshold)
}

fn d_dist(p: Exponent) -> impl Fn(&SampledFunction, &SampledFunction) -> Result<f64> {
    move |a, b| Ok(metric_d_p(a, b, p)?.value)
}

fn delta_dist(p: Exponent) -> impl Fn(&SampledFunction, &SampledFunction) -> Result<f64> {
    move |a, b| Ok(metric_delta_p(a, b, p)?.value)
}

fn rho_dist(p: Exponent) -> impl Fn(&SampledFunction, &SampledFunction) -> Result<f64> {
    move |a, b| metric_rho_p(a, b, p)
}

/// Record for a set of named sequences that must all tend to zero.
fn convergence_record(
    id: String,
    anchor: &str,
    rule: &ConvergenceRule,
    sequences: &[(&str, &[f64])],
) -> CheckRecord {
    let mut rec = CheckRecord::new(id, anchor).threshold(rule.threshold);
    let mut pass = true;
    for (name, seq) in sequences {
        let ok = rule.holds(seq);
        pass &= ok;
        rec = rec
            .number(&format!("{name}_last"), *seq.last().unwrap_or(&f64::NAN))
            .value(&format!("{name}_first_below"), first_below(seq, rule.threshold))
            .value(&format!("{name}_converges"), ok);
    }
    rec.pass(pass)
}

/// `min_t t + μ{h ≥ t}` over `points` equally spaced `t ∈ (0, μ(Ω)]`.
pub fn dense_ky_fan(measure: &DiscreteMeasure, h: &[f64], points: usize) -> f64 {
    let total = measure.total_mass();
    let mut order: Vec<usize> = (0..h.len()).collect();
    order.sort_by(|&a, &b| h[a].total_cmp(&h[b]));
    let masses = measure.masses();
    let mut remaining = total;
    let mut next = 0;
    let mut best = f64::INFINITY;
    for i in 1..=points {
        let t = total * i as f64 / points as f64;
        while next < order.len() && h[order[next]] < t {
            remaining -= masses[order[next]];
            next += 1;
        }
        best = best.min(t + remaining.max(0.0));
    }
    best
}

fn metric_axioms(cfg: &ExperimentConfig) -> Result<Vec<CheckRecord>> {
    let anchor = "d_p, delta_p and rho_p satisfy the metric axioms";
    let tol = &cfg.tolerances;
    let n = cfg.grid();
    let per_p = map_ordered(&cfg.exponents(), |&p| -> Result<Vec<CheckRecord>> {
        let mut rng = cfg.rng(&format!("triples/{}", ptag(p)));
        let measure = match &cfg.inputs.measure {
            Some(path) => Arc::new(load_measure(path)?),
            None => random_measure(&mut rng, n, false)?,
        };
        let mut excess = [f64::NEG_INFINITY; 3];
        let mut asymmetric = [0usize; 3];
        let mut identity_failures = 0usize;
        for _ in 0..cfg.trials() {
            let f = lognormal(&measure, &mut rng, 1.5);
            let mut g = lognormal(&measure, &mut rng, 1.5);
            let h = lognormal(&measure, &mut rng, 1.5);
            if rng.random_bool(0.5) {
                let share: Vec<bool> = (0..measure.len()).map(|_| rng.random_bool(0.3)).collect();
                let vals = g
                    .values()
                    .iter()
                    .zip(f.values())
                    .zip(&share)
                    .map(|((&gv, &fv), &s)| if s { fv } else { gv })
                    .collect();
                g = SampledFunction::new(measure.clone(), vals)?;
            }
            let metrics: [&dyn Fn(&SampledFunction, &SampledFunction) -> Result<f64>; 3] =
                [&d_dist(p), &delta_dist(p), &rho_dist(p)];
            for (k, m) in metrics.iter().enumerate() {
                let (fg, gh, fh) = (m(&f, &g)?, m(&g, &h)?, m(&f, &h)?);
                excess[k] = excess[k].max(fh - fg - gh);
                if fg != m(&g, &f)? {
                    asymmetric[k] += 1;
                }
                let differs = f.values().iter().zip(g.values()).any(|(a, b)| a != b);
                if m(&f, &f)? != 0.0 || (differs && fg <= 0.0) {
                    identity_failures += 1;
                }
            }
        }
        let tag = ptag(p);
        Ok(vec![
            CheckRecord::new(format!("triangle/{tag}"), anchor)
                .number("d_max_excess", excess[0])
                .number("delta_max_excess", excess[1])
                .number("rho_max_excess", excess[2])
                .value("trials", cfg.trials())
                .threshold(tol.triangle_slack)
                .pass(excess.iter().all(|&e| e <= tol.triangle_slack)),
            CheckRecord::new(format!("symmetry/{tag}"), anchor)
                .value("d_asymmetric", asymmetric[0])
                .value("delta_asymmetric", asymmetric[1])
                .value("rho_asymmetric", asymmetric[2])
                .threshold(0.0)
                .pass(asymmetric.iter().all(|&a| a == 0)),
            CheckRecord::new(format!("identity/{tag}"), anchor)
                .value("failures", identity_failures)
                .threshold(0.0)
                .pass(identity_failures == 0),
        ])
    });
    let mut out = Vec::new();
    for r in per_p {
        out.extend(r?);
    }

    let mut rng = cfg.rng("ky-fan-oracle");
    let pairs = 100;
    let mut max_gap = 0.0f64;
    let mut max_excess = f64::NEG_INFINITY;
    for _ in 0..pairs {
        let measure = random_measure(&mut rng, 50, true)?;
        let f = lognormal(&measure, &mut rng, 1.0);
        let g = lognormal(&measure, &mut rng, 1.0);
        let h = f.sub(&g)?.moduli();
        let sweep = ky_fan_of(&measure, &h);
        let oracle = dense_ky_fan(&measure, &h, tol.ky_fan_oracle_points);
        max_gap = max_gap.max((sweep - oracle).abs());
        max_excess = max_excess.max(sweep - oracle);
    }
    out.push(
        CheckRecord::new("ky-fan-oracle", "the Ky Fan sweep is the exact infimum over t > 0")
            .number("max_abs_gap", max_gap)
            .number("max_sweep_minus_oracle", max_excess)
            .value("pairs", pairs)
            .value("oracle_points", tol.ky_fan_oracle_points)
            .threshold(tol.ky_fan)
            .pass(max_gap <= tol.ky_fan + 1e-12 && max_excess <= 1e-12),
    );
    Ok(out)
}

fn metric_equivalence(cfg: &ExperimentConfig) -> Result<Vec<CheckRecord>> {
    let anchor = "rho_p, d_p and delta_p convergence coincide on every generated sequence";
    let rule = cfg.tolerances.rule();
    let [f, g, h] = bases(cfg, cfg.grid())?;
    let mut out = Vec::new();
    for p in cfg.exponents() {
        for fam in Family::ALL {
            let rho = family_sequence(fam, &f, &g, rho_dist(p))?;
            let d = family_sequence(fam, &f, &g, d_dist(p))?;
            let delta = family_sequence(fam, &f, &g, delta_dist(p))?;
            out.push(convergence_record(
                format!("equivalence/{}/{}", fam.name(), ptag(p)),
                anchor,
                &rule,
                &[("rho", &rho), ("d", &d), ("delta", &delta)],
            ));
        }
        let fg = f.mul(&g)?;
        let product: Vec<f64> = steps()
            .map(|s| {
                let fs = f.add(&g.scale(s))?;
                let gs = g.add(&h.scale(s))?;
                metric_rho_p(&fs.mul(&gs)?, &fg, p)
            })
            .collect::<Result<_>>()?;
        out.push(convergence_record(
            format!("product-continuity/{}", ptag(p)),
            "f_n -> f and g_n -> g in rho_p imply f_n g_n -> f g",
            &rule,
            &[("rho", &product)],
        ));
    }
    Ok(out)
}

fn coarser_topology(cfg: &ExperimentConfig) -> Result<Vec<CheckRecord>> {
    let anchor = "for p < s the d_p topology is coarser than the d_s topology";
    let rule = cfg.tolerances.rule();
    let [f, g, _] = bases(cfg, cfg.grid())?;
    let mut ps = cfg.exponents();
    ps.sort_by(|a, b| a.get().total_cmp(&b.get()));
    ps.dedup();
    let mut out = Vec::new();
    for pair in ps.windows(2) {
        let (p, s) = (pair[0], pair[1]);
        for fam in Family::ALL {
            let ds = family_sequence(fam, &f, &g, d_dist(s))?;
            let dp = family_sequence(fam, &f, &g, d_dist(p))?;
            out.push(convergence_record(
                format!("coarser/{}/p={},s={}", fam.name(), p.get(), s.get()),
                anchor,
                &rule,
                &[("d_s", &ds), ("d_p", &dp)],
            ));
        }
    }
    Ok(out)
}

fn lq_stronger(cfg: &ExperimentConfig) -> Result<Vec<CheckRecord>> {
    let anchor = "the L^q topology is stronger than the rho_p topology";
    let rule = cfg.tolerances.rule();
    let [f, g, _] = bases(cfg, cfg.grid())?;
    let t_grid = log_grid(1e-9, 1e9, 10_000);
    let mut out = Vec::new();
    for p in cfg.exponents() {
        let qs: Vec<f64> = [0.25, 0.5, 1.0].iter().map(|&q| q * p.min1()).collect();
        for &q in &qs {
            let c = lq_pointwise_constant(p, q).expect("q <= min(p, 1)");
            let bad = lq_bound_violations(p, q, c, &t_grid);
            let verbatim = lq_bound_violations(p, q, p.get() / q, &t_grid);
            out.push(
                CheckRecord::new(
                    format!("pointwise/{}/q={q}", ptag(p)),
                    "(log(1+x))^p <= (p/q)^p x^q for q <= min(p, 1)",
                )
                .number("constant", c)
                .value("violations", bad.len())
                .value("violations_with_constant_p_over_q", verbatim.len())
                .threshold(0.0)
                .pass(bad.is_empty()),
            );
            for fam in Family::ALL {
                let lq: Vec<f64> = steps()
                    .map(|s| {
                        let d = fam.member(&f, &g, s).sub(&f).expect("shared measure");
                        let m = d.measure().integrate(d.values().iter().map(|v| v.norm().powf(q)));
                        m.powf(1.0 / q)
                    })
                    .collect();
                let rho = family_sequence(fam, &f, &g, rho_dist(p))?;
                out.push(convergence_record(
                    format!("sequence/{}/{}/q={q}", fam.name(), ptag(p)),
                    anchor,
                    &rule,
                    &[("lq", &lq), ("rho", &rho)],
                ));
            }
        }
    }
    Ok(out)
}

fn random_function(rng: &mut ChaCha8Rng) -> Result<SampledFunction> {
    let n = rng.random_range(1..=64);
    let measure = random_measure(rng, n, false)?;
    let sigma = rng.random_range(0.1..3.0);
    let scale = 10f64.powf(rng.random_range(-3.0..3.0));
    Ok(lognormal(&measure, rng, sigma).scale(scale))
}

fn norm_modular(cfg: &ExperimentConfig) -> Result<Vec<CheckRecord>> {
    let anchor = "norm and modular convergences are equivalent";
    let tol = &cfg.tolerances;
    let rule = tol.rule();
    let [f, g, _] = bases(cfg, cfg.grid())?;
    let mut out = Vec::new();
    for p in cfg.exponents() {
        let tag = ptag(p);
        let fnorm = |x: &SampledFunction| f_norm(x, p).map(|r| r.value);

        let scaled: Vec<SampledFunction> = steps().map(|s| f.scale(s)).collect();
        let modular: Vec<f64> = scaled.iter().map(|x| orlicz_modular(x, p)).collect();
        let norms: Vec<f64> = scaled.iter().map(fnorm).collect::<Result<_>>()?;
        out.push(convergence_record(
            format!("scaling/{tag}"),
            anchor,
            &rule,
            &[("modular", &modular), ("f_norm", &norms)],
        ));

        for fam in Family::ALL {
            let diffs: Vec<SampledFunction> = steps()
                .map(|s| fam.member(&f, &g, s).sub(&f).expect("shared measure"))
                .collect();
            let modular: Vec<f64> = diffs.iter().map(|x| orlicz_modular(x, p)).collect();
            let norms: Vec<f64> = diffs.iter().map(fnorm).collect::<Result<_>>()?;
            out.push(convergence_record(
                format!("difference/{}/{tag}", fam.name()),
                anchor,
                &rule,
                &[("modular", &modular), ("f_norm", &norms)],
            ));
        }

        let mut rng = cfg.rng(&format!("fnorm/{tag}"));
        let mut worst_residual = 0.0f64;
        let mut monotone_excess = f64::NEG_INFINITY;
        let mut scaling_excess = f64::NEG_INFINITY;
        for _ in 0..cfg.trials() {
            let x = random_function(&mut rng)?;
            let eps = fnorm(&x)?;
            if eps > 0.0 {
                let r = (orlicz_modular(&x.scale(1.0 / eps), p) - eps).abs() / eps.max(1.0);
                worst_residual = worst_residual.max(r);
            }
            let bump: Vec<f64> = (0..x.len()).map(|_| 1.0 + rng.random_range(0.0..2.0)).collect();
            let y = x.scale_pointwise(&bump)?;
            monotone_excess = monotone_excess.max(eps - fnorm(&y)? * (1.0 + tol.fnorm_relative));
            let c: f64 = rng.random_range(-5.0..5.0);
            let k = c.abs().ceil().max(1.0);
            let (nc, nk) = (fnorm(&x.scale(c))?, fnorm(&x.scale(k))?);
            scaling_excess = scaling_excess
                .max(nc - nk * (1.0 + tol.fnorm_relative))
                .max(nk - k * eps * (1.0 + tol.fnorm_relative));
        }
        out.push(
            CheckRecord::new(format!("fnorm-residual/{tag}"), "the F-norm is the root of modular(f/e) = e")
                .number("max_scaled_residual", worst_residual)
                .value("trials", cfg.trials())
                .threshold(tol.fnorm_residual)
                .pass(worst_residual <= tol.fnorm_residual),
        );
        out.push(
            CheckRecord::new(format!("fnorm-monotone/{tag}"), "|f| <= |g| implies |f|_p <= |g|_p")
                .number("max_excess", monotone_excess)
                .threshold(0.0)
                .pass(monotone_excess <= 0.0),
        );
        out.push(
            CheckRecord::new(format!("fnorm-scalar/{tag}"), "|cf|_p <= |kf|_p <= k|f|_p for integer k >= |c|")
                .number("max_excess", scaling_excess)
                .threshold(0.0)
                .pass(scaling_excess <= 0.0),
        );
        let shrink: Vec<f64> = scaled.iter().map(fnorm).collect::<Result<_>>()?;
        out.push(convergence_record(
            format!("fnorm-continuity/{tag}"),
            "|cf|_p -> 0 as c -> 0",
            &rule,
            &[("f_norm", &shrink)],
        ));
    }
    Ok(out)
}

fn delta2(cfg: &ExperimentConfig) -> Result<Vec<CheckRecord>> {
    let points = cfg.grid();
    let t_grid = log_grid(1e-9, 1e9, points);
    let mut out = Vec::new();
    for p in cfg.exponents() {
        let tag = ptag(p);
        let bad = delta2_violations(p, &t_grid);
        out.push(
            CheckRecord::new(format!("delta2/{tag}"), "psi(2t) <= 2^p psi(t) for all t >= 0")
                .number("constant", 2f64.powf(p.get()))
                .value("grid_points", points)
                .value("violations", bad.len())
                .threshold(0.0)
                .pass(bad.is_empty()),
        );
        let decay = decay_check(p, 1e9, points);
        out.push(
            CheckRecord::new(format!("decay/{tag}"), "psi(t)/t decreases to 0 for large t")
                .value("evidence", &decay)
                .pass(decay.passes()),
        );
        let measure = grid(cfg.trials().max(1))?;
        let f = lognormal(&measure, &mut cfg.rng(&format!("sandwich/{tag}")), 2.0);
        let rec = CheckRecord::new(
            format!("sandwich/{tag}"),
            "(log(1+|f|))^p <= 2^max(p-1,0) ((log 2)^p + (log+|f|)^p)",
        )
        .value("samples", measure.len());
        out.push(match check_sandwich(&f, p) {
            Sandwich::Holds { min_slack } => rec.number("min_slack", min_slack).pass(true),
            Sandwich::Violated { atom, lhs, rhs } => rec
                .value("atom", atom)
                .number("lhs", lhs)
                .number("rhs", rhs)
                .pass(false),
        });
    }
    Ok(out)
}

fn algebra_inequalities(cfg: &ExperimentConfig) -> Result<Vec<CheckRecord>> {
    let mut rng = cfg.rng("pairs");
    let mut pairs: Vec<(Complex64, Complex64)> = lognormal_samples(&mut rng, 3.0, cfg.trials())
        .into_iter()
        .zip(lognormal_samples(&mut rng, 3.0, cfg.trials()))
        .collect();
    let edges = [0.0, 1e-300, 0.5, 1.0, 2.0, 1e150];
    for &a in &edges {
        for &b in &edges {
            pairs.push((Complex64::new(a, 0.0), Complex64::new(-b, 0.0)));
        }
    }
    let slack = algebra_inequality_slack(&pairs);
    let mut out = vec![CheckRecord::new(
        "pointwise",
        "log+|f+g| <= log+|f| + log+|g| + log 2, log+|fg| <= log+|f| + log+|g|, log(1+|fg|) <= log(1+|f|) + log(1+|g|)",
    )
    .number("min_slack", slack)
    .value("pairs", pairs.len())
    .threshold(0.0)
    .pass(slack >= 0.0)];

    let measure = grid(cfg.grid())?;
    let tol = &cfg.tolerances;
    for p in cfg.exponents() {
        let tag = ptag(p);
        let mut rng = cfg.rng(&format!("functions/{tag}"));
        let f = lognormal(&measure, &mut rng, 2.0);
        let g = lognormal(&measure, &mut rng, 2.0);
        let fg = f.mul(&g)?;
        let (ef, eg, efg) = (logplus_energy(&f, p), logplus_energy(&g, p), logplus_energy(&fg, p));
        let c = p.two_term_constant();
        let excess = efg - c * (ef + eg) * (1.0 + 1e-12);
        out.push(
            CheckRecord::new(
                format!("product-energy/{tag}"),
                "L_p^+ is closed under products: energy(fg) <= 2^max(p-1,0) (energy(f) + energy(g))",
            )
            .number("energy_f", ef)
            .number("energy_g", eg)
            .number("energy_fg", efg)
            .number("excess", excess)
            .pass(excess <= 0.0),
        );

        let zero = SampledFunction::zero(measure.clone());
        let scalar = |w: f64, rng: &mut ChaCha8Rng| -> Result<f64> {
            let weight = Weight::new(measure.clone(), &vec![w; measure.len()])?;
            let c = 10f64.powf(rng.random_range(-2.0..4.0));
            let cf = f.scale(c);
            let cconst = SampledFunction::constant(measure.clone(), Complex64::new(c, 0.0))?;
            let lhs = metric_rho_w_p(&cf, &zero, &weight, p)?;
            let rhs = metric_rho_w_p(&cconst, &zero, &weight, p)? + metric_rho_w_p(&f, &zero, &weight, p)?;
            Ok(lhs - rhs)
        };
        let mut excess = f64::NEG_INFINITY;
        for &w in &[1.0, 2.0, 10.0, 1e3] {
            for _ in 0..20 {
                excess = excess.max(scalar(w, &mut rng)?);
            }
        }
        let mut small = f64::NEG_INFINITY;
        for _ in 0..20 {
            small = small.max(scalar(1e-3, &mut rng)?);
        }
        out.push(
            CheckRecord::new(
                format!("scalar-finite-element/{tag}"),
                "rho_p^w(cf, 0) <= rho_p^w(c, 0) + rho_p^w(f, 0) with c a constant function",
            )
            .number("max_excess_w_ge_1", excess)
            .number("max_excess_w_1e-3", small)
            .threshold(tol.triangle_slack)
            .pass(excess <= tol.triangle_slack),
        );
    }
    Ok(out)
}

fn descriptor(spec: &str, p: Exponent) -> Result<WeightDescriptor> {
    weight_descriptor(&GeneratorSpec::parse(spec, Some(p.get()))?)?.ok_or(LabError::MissingDescriptor)
}

/// Samples of `d` on the grid that `classify_descriptors` would use.
fn descriptor_weight(d: &WeightDescriptor, n: usize) -> Result<Weight> {
    let measure = if d.is_singular() {
        DiscreteMeasure::midpoint_grid(n)?
    } else {
        DiscreteMeasure::lebesgue_grid(n)?
    };
    Weight::from_descriptor(Arc::new(measure), d.clone())
}

fn weight_classify(cfg: &ExperimentConfig) -> Result<Vec<CheckRecord>> {
    let anchor_i = "L_p^omega = L_p^w if and only if log(w/omega) is in L^p";
    let anchor_iii = "L_p^omega is a proper subset of L_p^w";
    let tol = &cfg.tolerances;
    let rule = tol.divergence();
    let ladder = cfg.grid_sizes.clone();
    let mut out = Vec::new();
    for p in cfg.exponents() {
        let tag = ptag(p);
        let one = descriptor("const:1", p)?;
        let singular = descriptor("expneg:a=1,b=1/p", p)?;
        let trig = descriptor("trig-affine:2,1", p)?;

        let c = classify_descriptors(&singular, &one, p, &ladder, &rule)?;
        out.push(
            CheckRecord::new(format!("singular/{tag}"), anchor_iii)
                .value("w", "expneg:a=1,b=1/p")
                .value("classification", &c)
                .pass(c.relation == WeightRelation::ProperInclusion),
        );
        out.push(
            CheckRecord::new(format!("singular-growth/{tag}"), anchor_iii)
                .number("abs_growth", c.abs_growth)
                .threshold(tol.divergence_ratio)
                .pass(c.abs_growth >= tol.divergence_ratio),
        );

        let c = classify_descriptors(&trig, &one, p, &ladder, &rule)?;
        out.push(
            CheckRecord::new(format!("trig-affine/{tag}"), anchor_i)
                .value("w", "trig-affine:2,1")
                .value("classification", &c)
                .threshold(tol.bounded_ratio)
                .pass(c.relation == WeightRelation::EqualSpaces && c.abs_growth <= tol.bounded_ratio),
        );

        let c = classify_descriptors(&singular, &singular, p, &ladder, &rule)?;
        let zero = c.evidence.iter().all(|e| e.abs_energy == 0.0 && e.plus_energy == 0.0);
        out.push(
            CheckRecord::new(format!("identical/{tag}"), anchor_i)
                .value("classification", &c)
                .pass(c.relation == WeightRelation::EqualSpaces && zero),
        );

        let c = classify_descriptors(&descriptor("exppos:a=1,b=1/p", p)?, &one, p, &ladder, &rule)?;
        out.push(
            CheckRecord::new(
                format!("hypothesis-violated/{tag}"),
                "the inclusion needs log+(w/omega) in L^p; without it the verdict is inconclusive",
            )
            .value("w", "exppos:a=1,b=1/p")
            .value("classification", &c)
            .pass(c.relation == WeightRelation::Inconclusive),
        );

        if let (Some(w), Some(o)) = (&cfg.inputs.w_spec, &cfg.inputs.omega_spec) {
            let c = classify_descriptors(&descriptor(w, p)?, &descriptor(o, p)?, p, &ladder, &rule)?;
            out.push(
                CheckRecord::new(format!("user-pair/{tag}"), anchor_i)
                    .value("w", w)
                    .value("omega", o)
                    .value("classification", &c),
            );
        }

        // Conditions (i) log w in L^p and (ii) L_p^w = L_p, decided separately.
        if p.get() >= 1.0 {
            let specs = [
                "const:1",
                "const:3",
                "trig-affine:2,1",
                "trig-affine:3,-2",
                "piecewise:1,2,4,8",
                "expneg:a=1,b=1/p",
                "expneg:a=1,b=1/2p",
                "expneg:a=2,b=2/p",
            ];
            let mut rows = Vec::new();
            let mut agree = true;
            for spec in specs {
                let d = descriptor(&spec.replace("1/2p", &format!("{}", 0.5 / p.get())), p)?;
                let energies: Vec<f64> = ladder
                    .iter()
                    .map(|&n| {
                        let w = descriptor_weight(&d, n)?;
                        Ok(w.measure().integrate(w.log_values().iter().map(|l| p.pow(l.abs()))))
                    })
                    .collect::<Result<_>>()?;
                let cond_i = rule.trend(&ladder, &energies) == EnergyTrend::Bounded;
                let relation = classify_descriptors(&d, &one, p, &ladder, &rule)?.relation;
                let cond_ii = relation == WeightRelation::EqualSpaces;
                agree &= cond_i == cond_ii;
                rows.push(serde_json::json!({
                    "w": spec, "log_w_in_Lp": cond_i, "equal_spaces": cond_ii, "relation": relation,
                }));
            }
            out.push(
                CheckRecord::new(
                    format!("equivalent-conditions/{tag}"),
                    "for p >= 1: log w in L^p iff L_p^w = L_p",
                )
                .value("weights", rows)
                .pass(agree),
            );
        }

        let n = ladder[0];
        let [f, g, _] = bases(cfg, n)?;
        let trig_w = Weight::from_descriptor(f.measure().clone(), trig.clone())?;
        let rho: Vec<f64> = family_sequence(Family::Additive, &f, &g, rho_dist(p))?;
        let rho_w: Vec<f64> = family_sequence(Family::Additive, &f, &g, |a, b| metric_rho_w_p(a, b, &trig_w, p))?;
        out.push(convergence_record(
            format!("same-topology/{tag}"),
            "if log w is in L^p the topologies of rho_p^w and rho_p coincide",
            &tol.rule(),
            &[("rho", &rho), ("rho_w", &rho_w)],
        ));
    }
    Ok(out)
}

fn proper_inclusion(cfg: &ExperimentConfig) -> Result<Vec<CheckRecord>> {
    let anchor = "L_p^omega is a proper subset of L_p^w";
    let tol = &cfg.tolerances;
    let rule = tol.divergence();
    let ladder = cfg.grid_sizes.clone();
    let mut out = Vec::new();
    for p in cfg.exponents() {
        let tag = ptag(p);
        let b = 1.0 / p.get();
        // 1/w with w = exp(-t^{-1/p}); everything in logs since 1/w overflows.
        let mut weighted = Vec::new();
        let mut unweighted = Vec::new();
        let mut product = Vec::new();
        for &n in &ladder {
            let m = DiscreteMeasure::midpoint_grid(n)?;
            let inv_w: Vec<f64> = m.angles().expect("circle grid").iter().map(|&t| t.powf(-b)).collect();
            let zeros = vec![0.0; n];
            weighted.push(modular_from_logs(&m, &zeros, p));
            unweighted.push(modular_from_logs(&m, &inv_w, p));
            // f = g = 1/w: w f = 1, w f g = 1/w.
            product.push(modular_from_logs(&m, &inv_w, p));
        }
        let floor = p.pow(LN_2);
        let weighted_err = weighted.iter().map(|v| (v - floor).abs()).fold(0.0, f64::max);
        let trend = rule.trend(&ladder, &unweighted);
        out.push(
            CheckRecord::new(format!("witness/{tag}"), anchor)
                .value("function", "1/w, w = exp(-t^(-1/p))")
                .numbers("weighted_modular", &weighted)
                .numbers("unweighted_modular", &unweighted)
                .value("unweighted_trend", trend)
                .number("weighted_max_error", weighted_err)
                .threshold(1e-12)
                .pass(weighted_err <= 1e-12 && trend == EnergyTrend::Divergent),
        );

        let product_trend = rule.trend(&ladder, &product);
        out.push(
            CheckRecord::new(format!("non-algebra-search/{tag}"), "L_p^w is not necessarily an algebra")
                .value("pair", "f = g = 1/w, w = exp(-t^(-1/p))")
                .numbers("factor_modulars", &weighted)
                .numbers("product_modulars", &product)
                .value("product_trend", product_trend)
                .value("witness_found", product_trend == EnergyTrend::Divergent),
        );

        let mut rng = cfg.rng(&format!("inclusion/{tag}"));
        let measure = grid(256)?;
        let mut worst = f64::INFINITY;
        for _ in 0..cfg.trials() {
            let f = lognormal(&measure, &mut rng, 2.0);
            let w = Weight::new(measure.clone(), &lognormal(&measure, &mut rng, 2.0).moduli())?;
            let omega = Weight::new(measure.clone(), &lognormal(&measure, &mut rng, 2.0).moduli())?;
            worst = worst.min(inclusion_bound_slack(&f, &w, &omega, p)?);
        }
        out.push(
            CheckRecord::new(format!("inclusion-bound/{tag}"), "rho_p^w(f) <= rho_p^omega(f) + rho_p(w/omega)")
                .number("min_slack", worst)
                .threshold(-tol.inclusion_slack)
                .pass(worst >= -tol.inclusion_slack),
        );

        let [f, g, _] = bases(cfg, 256)?;
        let m = f.measure().clone();
        let w = Weight::new(m.clone(), &lognormal(&m, &mut rng, 1.0).moduli())?;
        let omega = Weight::new(m.clone(), &lognormal(&m, &mut rng, 1.0).moduli())?;
        let rho_o = family_sequence(Family::Additive, &f, &g, |a, b| metric_rho_w_p(a, b, &omega, p))?;
        let rho_w = family_sequence(Family::Additive, &f, &g, |a, b| metric_rho_w_p(a, b, &w, p))?;
        out.push(convergence_record(
            format!("stronger-topology/{tag}"),
            "rho_p^omega convergence implies rho_p^w convergence",
            &tol.rule(),
            &[("rho_omega", &rho_o), ("rho_w", &rho_w)],
        ));
    }
    Ok(out)
}

/// Best weighted infima for degrees `1..=max_degree` with the singular ratio
/// `w/ω = exp(-t^{-1/p})`, each degree warm-started from the previous optimum.
pub fn weighted_infimum_ladder(
    p: Exponent,
    grid_size: usize,
    max_degree: usize,
    restarts: usize,
    seed: u64,
) -> Result<Vec<crate::analytic::PolyInfimum>> {
    let m = DiscreteMeasure::midpoint_grid(grid_size)?;
    let b = 1.0 / p.get();
    let log_ratio: Vec<f64> = m.angles().expect("circle grid").iter().map(|&t| -t.powf(-b)).collect();
    let mut out: Vec<crate::analytic::PolyInfimum> = Vec::new();
    for degree in 1..=max_degree {
        let opts = PolyInfimumOptions {
            degree,
            restarts,
            seed,
            start_scale: 1.0,
            ..PolyInfimumOptions::default()
        };
        let warm = out.last().map(|r| r.coefficients[1..].to_vec());
        out.push(poly_modular_infimum(p, &m, Some(&log_ratio), warm.as_deref(), &opts)?);
    }
    Ok(out)
}

fn poly_infimum(cfg: &ExperimentConfig) -> Result<Vec<CheckRecord>> {
    let anchor = "inf over polynomials with P(0) = 1 of the modular of P equals (log 2)^p";
    let tol = &cfg.tolerances;
    let n = cfg.grid();
    let measure = DiscreteMeasure::lebesgue_grid(n)?;
    let degree = cfg.degree.expect("resolved");
    let restarts = cfg.restarts.expect("resolved");
    let mut out = Vec::new();
    for p in cfg.exponents() {
        let tag = ptag(p);
        let floor = p.pow(LN_2);
        let mut warm: Option<Vec<Complex64>> = None;
        for d in 0..=degree {
            let opts = PolyInfimumOptions {
                degree: d,
                restarts,
                seed: cfg.seed,
                ..PolyInfimumOptions::default()
            };
            let r = poly_modular_infimum(p, &measure, None, warm.as_deref(), &opts)?;
            let pass = if d == 0 {
                (r.value - floor).abs() <= 1e-14
            } else {
                r.value >= floor - tol.poly_floor && r.value <= floor + tol.poly_window
            };
            out.push(
                CheckRecord::new(format!("unweighted/{tag}/degree={d}"), anchor)
                    .number("value", r.value)
                    .number("floor", floor)
                    .numbers("restart_values", &r.restart_values)
                    .value("coefficients", r.coefficients.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>())
                    .threshold(tol.poly_window)
                    .pass(pass),
            );
            warm = Some(r.coefficients[1..].to_vec());
        }
    }

    // The weighted ratio's log is outside L^1 only for p = 1.
    let p = Exponent::new(1.0)?;
    let ladder = weighted_infimum_ladder(p, n, 6, restarts, cfg.seed)?;
    let values: Vec<f64> = ladder.iter().map(|r| r.value).collect();
    let strict = values.windows(2).all(|w| w[1] < w[0]);
    out.push(
        CheckRecord::new(
            "weighted-decrease",
            "with log(w/omega) outside L^p the weighted infimum is 0: best values strictly decrease with degree",
        )
        .value("ratio", "w/omega = exp(-1/t), p = 1")
        .numbers("best_values", &values)
        .pass(strict),
    );
    let unweighted: Vec<f64> = ladder
        .iter()
        .map(|r| {
            let nodes = measure.angles().expect("circle grid");
            measure.integrate(
                nodes
                    .iter()
                    .map(|&t| crate::analytic::horner(&r.coefficients, Complex64::from_polar(1.0, t)).norm().ln_1p()),
            )
        })
        .collect();
    let floor = LN_2;
    out.push(
        CheckRecord::new(
            "witness-separation",
            "the same polynomials keep unweighted modular at least (log 2)^p: rho_p^w -> 0 while rho_p^omega does not",
        )
        .numbers("weighted", &values)
        .numbers("unweighted", &unweighted)
        .number("floor", floor)
        .threshold(tol.poly_floor)
        .pass(strict && unweighted.iter().all(|&u| u >= floor - tol.poly_floor)),
    );
    Ok(out)
}

fn outer_boundary(cfg: &ExperimentConfig) -> Result<Vec<CheckRecord>> {
    let anchor = "the outer function F has |F*(e^{it})| = exp(u(t))";
    let tol = &cfg.tolerances;
    let mut out = Vec::new();

    let ladder = cfg.grid_sizes.clone();
    let errors: Vec<f64> = ladder
        .iter()
        .map(|&n| {
            let m = grid(n)?;
            let outer = OuterFunction::from_fn(m.clone(), |t| (2.0 + t.sin()).ln())?;
            let target: Vec<f64> = outer.log_modulus().to_vec();
            Ok(boundary_modulus_check(&outer, &target, None, 0.0)?.max_relative_error)
        })
        .collect::<Result<_>>()?;
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let last = *errors.last().expect("non-empty ladder");
    out.push(
        CheckRecord::new("recovery", anchor)
            .value("log_modulus", "log(2 + sin t)")
            .value("grid_sizes", &ladder)
            .numbers("probe_radii", &ladder.iter().map(|&n| probe_radius(n)).collect::<Vec<_>>())
            .numbers("max_relative_error", &errors)
            .threshold(tol.boundary_error)
            .pass(decreasing && last < tol.boundary_error),
    );

    let n = *ladder.last().expect("non-empty ladder");
    let m = grid(n)?;
    let zero = OuterFunction::new(m.clone(), vec![0.0; n])?;
    let e0 = boundary_modulus_check(&zero, &vec![0.0; n], None, 0.0)?.max_relative_error;
    let c = 0.7;
    let constant = OuterFunction::new(m.clone(), vec![c; n])?;
    let mut const_err = 0.0f64;
    let mut mult_err = 0.0f64;
    let u1 = OuterFunction::from_fn(m.clone(), |t| (2.0 + t.sin()).ln())?;
    let u2 = OuterFunction::from_fn(m.clone(), |t| 0.3 * (3.0 * t).cos() - 0.1)?;
    let u12 = OuterFunction::from_fn(m.clone(), |t| (2.0 + t.sin()).ln() + 0.3 * (3.0 * t).cos() - 0.1)?;
    for &r in &[0.0, 0.3, 0.6, 0.9, 0.99] {
        for k in 0..16 {
            let z = Complex64::from_polar(r, k as f64 * 0.4);
            const_err = const_err.max((constant.log_eval(z).re - c).exp_m1().abs());
            let prod = u1.log_eval(z) + u2.log_eval(z);
            mult_err = mult_err.max(((u12.log_eval(z) - prod).exp() - 1.0).norm());
        }
    }
    out.push(
        CheckRecord::new("identities", "F is 1 for u = 0, e^c for u = c, and multiplicative in u")
            .number("zero_boundary_error", e0)
            .number("constant_max_error", const_err)
            .number("multiplicative_max_error", mult_err)
            .threshold(tol.outer_identity)
            .pass(e0 <= tol.outer_identity && const_err <= tol.outer_identity && mult_err <= tol.outer_identity),
    );

    let radii = [0.5, 0.9, 0.99, 0.995, 0.999];
    let p_grid = grid(n.max(4096))?;
    for p in cfg.exponents() {
        let tag = ptag(p);
        let mid = Arc::new(DiscreteMeasure::midpoint_grid(n)?);
        let b = 1.0 / p.get();
        let singular = OuterFunction::from_fn(mid.clone(), |t| -t.powf(-b))?;
        let target: Vec<f64> = singular.log_modulus().to_vec();
        let check = boundary_modulus_check(&singular, &target, None, 0.5)?;
        out.push(
            CheckRecord::new(format!("singular-masked/{tag}"), anchor)
                .value("log_modulus", "-t^(-1/p)")
                .number("excluded_radius", 0.5)
                .value("check", check)
                .pass(check.max_relative_error.is_finite()),
        );

        let half = 0.5 / p.get();
        let outer = OuterFunction::from_fn(mid.clone(), |t| t.powf(-half))?;
        let boundary = outer.log_modulus().to_vec();
        let energy = mid.integrate(boundary.iter().map(|&u| p.pow(u.max(0.0))));
        let profile = privalov_profile(&AnalyticFunction::Outer(outer), p, &radii, &p_grid)?;
        out.push(
            CheckRecord::new(format!("privalov-outer/{tag}"), "outer functions of L^p data lie in N^p")
                .value("log_modulus", "t^(-1/(2p))")
                .value("profile", &profile)
                .number("boundary_energy", energy)
                .pass(profile.bounded && profile.sup_estimate <= energy * (1.0 + PROFILE_PLATEAU_TOLERANCE)),
        );

        let two_z = AnalyticFunction::real_polynomial(&[0.0, 2.0]);
        let profile = privalov_profile(&two_z, p, &radii, &p_grid)?;
        let limit = p.pow(LN_2);
        out.push(
            CheckRecord::new(format!("privalov-2z/{tag}"), "sup_r of the radial means of 2z is (log 2)^p")
                .value("profile", &profile)
                .number("limit", limit)
                .pass(profile.bounded && profile.sup_estimate <= limit),
        );
    }

    let candidates: Vec<(&str, AnalyticFunction)> = vec![
        ("poly:0,2", AnalyticFunction::real_polynomial(&[0.0, 2.0])),
        ("poly:1,1", AnalyticFunction::real_polynomial(&[1.0, 1.0])),
        ("poly:1,0,0,3", AnalyticFunction::real_polynomial(&[1.0, 0.0, 0.0, 3.0])),
        (
            "outer:log(2+sin t)",
            AnalyticFunction::Outer(OuterFunction::from_fn(p_grid.clone(), |t| (2.0 + t.sin()).ln())?),
        ),
    ];
    let p1 = Exponent::new(1.0)?;
    let p2 = Exponent::new(2.0)?;
    let mut rows = Vec::new();
    let mut chain = true;
    for (name, f) in &candidates {
        let b2 = privalov_profile(f, p2, &radii, &p_grid)?.bounded;
        let b1 = privalov_profile(f, p1, &radii, &p_grid)?.bounded;
        chain &= !b2 || b1;
        rows.push(serde_json::json!({ "function": name, "bounded_p2": b2, "bounded_p1": b1 }));
    }
    out.push(
        CheckRecord::new("privalov-chain", "N^p for p > 1 is contained in N^+")
            .value("functions", rows)
            .pass(chain),
    );
    Ok(out)
}

fn cauchy_spotcheck(cfg: &ExperimentConfig) -> Result<Vec<CheckRecord>> {
    let anchor = "(L_p, rho_p) and (L_p^w, rho_p^w) are complete";
    let tol = &cfg.tolerances;
    let rule = tol.rule();
    let n = cfg.grid();
    let measure = grid(n)?;
    let terms = 30;
    let limit_terms = 60;
    let mut out = Vec::new();
    for p in cfg.exponents() {
        let tag = ptag(p);
        let mut rng = cfg.rng(&format!("series/{tag}"));
        let h: Vec<SampledFunction> = (0..=limit_terms)
            .map(|k| {
                let g = lognormal(&measure, &mut rng, 1.0).moduli();
                SampledFunction::from_real(measure.clone(), &g).map(|g| g.scale(0.5f64.powi(k as i32)))
            })
            .collect::<Result<_>>()?;
        let mut partial = Vec::with_capacity(limit_terms + 1);
        let mut acc = SampledFunction::zero(measure.clone());
        for hk in &h {
            acc = acc.add(hk)?;
            partial.push(acc.clone());
        }
        let limit = partial.last().expect("non-empty").clone();
        let zero = SampledFunction::zero(measure.clone());
        let norms: Vec<f64> = h.iter().map(|x| metric_rho_p(x, &zero, p)).collect::<Result<_>>()?;
        let to_limit: Vec<f64> = partial[..=terms]
            .iter()
            .map(|s| metric_rho_p(s, &limit, p))
            .collect::<Result<_>>()?;
        let mut tail_excess = f64::NEG_INFINITY;
        for i in 0..terms {
            for j in (i + 1)..=terms {
                let bound: f64 = norms[i + 1..=j].iter().sum();
                tail_excess = tail_excess.max(metric_rho_p(&partial[i], &partial[j], p)? - bound);
            }
        }
        out.push(
            convergence_record(format!("limit/{tag}"), anchor, &rule, &[("rho_to_limit", &to_limit)])
                .number("sum_of_term_norms", norms.iter().sum()),
        );
        out.push(
            CheckRecord::new(
                format!("cauchy-bound/{tag}"),
                "rho_p(S_i, S_j) is bounded by the tail sum of term distances",
            )
            .number("max_excess", tail_excess)
            .threshold(tol.triangle_slack)
            .pass(tail_excess <= tol.triangle_slack),
        );

        let w = Weight::new(measure.clone(), &lognormal(&measure, &mut rng, 1.0).moduli())?;
        let wf = generate_weight(&GeneratorSpec::parse("trig-affine:2,1", None)?, measure.clone(), cfg.seed)?;
        for (name, weight) in [("lognormal", &w), ("trig-affine", &wf)] {
            let to_limit: Vec<f64> = partial[..=terms]
                .iter()
                .map(|s| metric_rho_w_p(s, &limit, weight, p))
                .collect::<Result<_>>()?;
            out.push(convergence_record(
                format!("weighted-limit/{name}/{tag}"),
                anchor,
                &rule,
                &[("rho_w_to_limit", &to_limit)],
            ));
        }
    }
    Ok(out)
}
