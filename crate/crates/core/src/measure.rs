//! Finite discrete measure spaces.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::sum::neumaier;

/// Atom labels of a discrete measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Atoms {
    /// Points of `[0, 2π)`; circle grids use this.
    Angles(Vec<f64>),
    /// Opaque labels, e.g. from CSV ingestion.
    Labels(Vec<String>),
}

impl Atoms {
    pub fn len(&self) -> usize {
        match self {
            Atoms::Angles(a) => a.len(),
            Atoms::Labels(l) => l.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A finite list of atoms carrying strictly positive masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    atoms: Atoms,
    masses: Vec<f64>,
    total_mass: f64,
}

impl DiscreteMeasure {
    pub fn new(atoms: Atoms, masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(LabError::EmptyMeasure);
        }
        if atoms.len() != masses.len() {
            return Err(LabError::LengthMismatch {
                expected: atoms.len(),
                got: masses.len(),
            });
        }
        if let Some((index, &mass)) = masses
            .iter()
            .enumerate()
            .find(|(_, m)| !(m.is_finite() && **m > 0.0))
        {
            return Err(LabError::BadMass { index, mass });
        }
        let total_mass = neumaier(masses.iter().copied());
        if !total_mass.is_finite() {
            return Err(LabError::BadMass {
                index: 0,
                mass: total_mass,
            });
        }
        Ok(Self {
            atoms,
            masses,
            total_mass,
        })
    }

    /// Uniform grid `t_k = 2πk/N` with masses `1/N`: the discretized `dt/2π`.
    pub fn lebesgue_grid(n: usize) -> Result<Self> {
        Self::circle_grid(n, 0.0)
    }

    /// Midpoint-shifted grid `t_k = 2π(k+½)/N`, used for weights singular at `t = 0`.
    pub fn midpoint_grid(n: usize) -> Result<Self> {
        Self::circle_grid(n, 0.5)
    }

    fn circle_grid(n: usize, offset: f64) -> Result<Self> {
        if n == 0 {
            return Err(LabError::EmptyGrid);
        }
        let step = TAU / n as f64;
        let angles = (0..n).map(|k| step * (k as f64 + offset)).collect();
        let mass = 1.0 / n as f64;
        Ok(Self {
            atoms: Atoms::Angles(angles),
            masses: vec![mass; n],
            // exact: the masses are a partition of unity by construction
            total_mass: 1.0,
        })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn atoms(&self) -> &Atoms {
        &self.atoms
    }

    /// Angles of a circle grid, `None` for labelled measures.
    pub fn angles(&self) -> Option<&[f64]> {
        match &self.atoms {
            Atoms::Angles(a) => Some(a),
            Atoms::Labels(_) => None,
        }
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// `Σ_k mass_k · g_k` with compensated summation.
    pub fn integrate<I>(&self, integrand: I) -> f64
    where
        I: IntoIterator<Item = f64>,
    {
        neumaier(
            self.masses
                .iter()
                .zip(integrand)
                .map(|(m, v)| m * v),
        )
    }

    /// `μ{k : h_k ≥ t}`; the comparison is inclusive.
    pub fn superlevel_mass(&self, h: &[f64], t: f64) -> f64 {
        debug_assert_eq!(h.len(), self.len());
        neumaier(
            self.masses
                .iter()
                .zip(h)
                .filter(|(_, &v)| v >= t)
                .map(|(m, _)| *m),
        )
    }

    /// Same-space test used by every binary operation.
    pub fn same_space(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (self.masses == other.masses && self.atoms == other.atoms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_of_one() {
        let m = DiscreteMeasure::lebesgue_grid(1).unwrap();
        assert_eq!(m.angles().unwrap(), &[0.0]);
        assert_eq!(m.masses(), &[1.0]);
        assert_eq!(m.total_mass(), 1.0);
    }

    #[test]
    fn grid_of_four() {
        let m = DiscreteMeasure::lebesgue_grid(4).unwrap();
        let a = m.angles().unwrap();
        for (got, want) in a.iter().zip([0.0, PI / 2.0, PI, 3.0 * PI / 2.0]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(m.masses().iter().all(|&x| x == 0.25));
        assert_eq!(m.total_mass(), 1.0);
    }

    #[test]
    fn zero_grid_rejected() {
        assert!(matches!(
            DiscreteMeasure::lebesgue_grid(0),
            Err(LabError::EmptyGrid)
        ));
    }

    #[test]
    fn bad_masses_rejected() {
        let atoms = Atoms::Labels(vec!["a".into(), "b".into()]);
        assert!(DiscreteMeasure::new(atoms.clone(), vec![1.0, 0.0]).is_err());
        assert!(DiscreteMeasure::new(atoms.clone(), vec![1.0, -2.0]).is_err());
        assert!(DiscreteMeasure::new(atoms.clone(), vec![1.0, f64::NAN]).is_err());
        assert!(DiscreteMeasure::new(atoms, vec![1.0]).is_err());
    }

    #[test]
    fn midpoint_grid_avoids_zero() {
        let m = DiscreteMeasure::midpoint_grid(8).unwrap();
        let a = m.angles().unwrap();
        assert!((a[0] - TAU / 16.0).abs() < 1e-15);
        assert!(a.iter().all(|&t| t > 0.0 && t < TAU));
    }

    #[test]
    fn superlevel_inclusive() {
        let m = DiscreteMeasure::lebesgue_grid(5).unwrap();
        let h = vec![0.5; 5];
        assert!((m.superlevel_mass(&h, 0.5) - 1.0).abs() < 1e-15);
        assert_eq!(m.superlevel_mass(&h, 0.6), 0.0);
        assert!((m.superlevel_mass(&h, 0.0) - m.total_mass()).abs() < 1e-15);
    }

    fn weighted_measure(masses: Vec<f64>) -> DiscreteMeasure {
        let labels = (0..masses.len()).map(|i| i.to_string()).collect();
        DiscreteMeasure::new(Atoms::Labels(labels), masses).unwrap()
    }

    proptest! {
        #[test]
        fn superlevel_matches_loop(
            pairs in prop::collection::vec((0.01f64..3.0, 0.0f64..2.0), 1..40),
            t in 0.0f64..2.5,
        ) {
            let (masses, h): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let m = weighted_measure(masses.clone());
            let mut oracle = 0.0;
            for i in 0..h.len() {
                if h[i] >= t {
                    oracle += masses[i];
                }
            }
            prop_assert!((m.superlevel_mass(&h, t) - oracle).abs() < 1e-12);
        }

        #[test]
        fn superlevel_monotone_and_vanishing(
            h in prop::collection::vec(0.0f64..5.0, 1..40),
            t1 in 0.0f64..6.0,
            t2 in 0.0f64..6.0,
        ) {
            let m = DiscreteMeasure::lebesgue_grid(h.len()).unwrap();
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            prop_assert!(m.superlevel_mass(&h, lo) >= m.superlevel_mass(&h, hi));
            let max = h.iter().cloned().fold(0.0, f64::max);
            prop_assert_eq!(m.superlevel_mass(&h, max + 1e-9), 0.0);
            prop_assert!((m.superlevel_mass(&h, 0.0) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn superlevel_subadditive(
            vals in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0), 1..30),
            t1 in 0.0f64..3.0,
            t2 in 0.0f64..3.0,
        ) {
            let m = DiscreteMeasure::lebesgue_grid(vals.len()).unwrap();
            let fh: Vec<f64> = vals.iter().map(|(f, _, h)| (f - h).abs()).collect();
            let fg: Vec<f64> = vals.iter().map(|(f, g, _)| (f - g).abs()).collect();
            let gh: Vec<f64> = vals.iter().map(|(_, g, h)| (g - h).abs()).collect();
            let lhs = m.superlevel_mass(&fh, t1 + t2);
            let rhs = m.superlevel_mass(&fg, t1) + m.superlevel_mass(&gh, t2);
            prop_assert!(lhs <= rhs + 1e-12);
        }
    }
}
