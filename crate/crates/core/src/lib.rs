//! Computational toolkit for log-type Orlicz spaces on finite measure spaces.
//!
//! Functions live on a [`DiscreteMeasure`]: a finite list of atoms with
//! positive masses. On such a space every integral is an exact finite sum, so
//! the modular `∫(log(1+|f|))^p dμ`, the Ky Fan term `inf_t [t + μ{|f-g| ≥ t}]`
//! and the F-norm `inf{ε : ∫(log(1+|f|/ε))^p ≤ ε}` can be computed without
//! quadrature error. Phenomena that only exist in the continuum (singular
//! weights, boundary behaviour of outer functions) are probed with refinement
//! ladders of circle grids.
//!
//! Module map:
//!
//! * [`measure`]: discrete measures and the circle grid discretizing `dt/2π`.
//! * [`modular`]: sampled functions, `log⁺`, the log⁺ energy and the Orlicz modular.
//! * [`metrics`]: the metrics `d_p`, `δ_p`, `ρ_p` and the F-norm `|·|_p`.
//! * [`weighted`]: weights, weighted modulars and weight-pair classification.
//! * [`analytic`]: polynomials and outer functions on the disk, radial means,
//!   and the polynomial modular infimum.
//! * [`harness`]: generators, CSV ingestion, the experiment catalog and reports.

pub mod analytic;
pub mod error;
pub mod harness;
pub mod measure;
pub mod metrics;
pub mod modular;
mod par;
pub mod sum;
pub mod weighted;

pub use num_complex::Complex64;
pub use analytic::{AnalyticFunction, OuterKernel, RadialMeanProfile};
pub use error::{LabError, Result};
pub use measure::DiscreteMeasure;
pub use metrics::MetricValue;
pub use modular::{Exponent, SampledFunction};
pub use weighted::{Weight, WeightClassification, WeightDescriptor, WeightRelation};
