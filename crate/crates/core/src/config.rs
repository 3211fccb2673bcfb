//! Numerical tolerances. Length-like values are fractions of the curve
//! length `L` and are turned into absolute values by [`Tolerances::scaled`].

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed deviation of `|γ'|` from 1.
    pub tol_arc: f64,
    pub embedding_tol: f64,
    pub curvature_floor: f64,
    pub newton_tol: f64,
    pub merge_tol: f64,
    /// Relative to the largest Hessian eigenvalue among the critical points.
    pub nondegeneracy_floor: f64,
    pub diag_tube: f64,
    pub event_tol: f64,
    pub intersect_tol: f64,
    pub endpoint_margin: f64,
    /// Chord fraction kept away from both endpoints, dimensionless.
    pub tau_floor: f64,
    pub min_split_decrease: f64,
    pub basin_tol: f64,
    pub trajectory_tol: f64,
    pub boundary_tol: f64,
    /// Largest parameter displacement of one flow step.
    pub max_step: f64,
    pub max_splits: usize,
    pub max_perturb: usize,
    pub min_grid: usize,
    pub max_grid: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_arc: 1e-3,
            embedding_tol: 1e-4,
            curvature_floor: 1e-6,
            newton_tol: 1e-10,
            merge_tol: 1e-6,
            nondegeneracy_floor: 1e-6,
            diag_tube: 0.02,
            event_tol: 1e-9,
            intersect_tol: 1e-6,
            endpoint_margin: 1e-3,
            tau_floor: 1e-3,
            min_split_decrease: 1e-4,
            basin_tol: 5e-3,
            trajectory_tol: 1e-4,
            boundary_tol: 1e-3,
            max_step: 2e-3,
            max_splits: 64,
            max_perturb: 8,
            min_grid: 64,
            max_grid: 1024,
        }
    }
}

impl Tolerances {
    /// Multiplies every tolerance (not the counts) by `factor`.
    pub fn with_scale(mut self, factor: f64) -> Self {
        for v in [
            &mut self.tol_arc,
            &mut self.embedding_tol,
            &mut self.curvature_floor,
            &mut self.newton_tol,
            &mut self.merge_tol,
            &mut self.nondegeneracy_floor,
            &mut self.diag_tube,
            &mut self.event_tol,
            &mut self.intersect_tol,
            &mut self.endpoint_margin,
            &mut self.tau_floor,
            &mut self.min_split_decrease,
            &mut self.basin_tol,
            &mut self.trajectory_tol,
            &mut self.boundary_tol,
            &mut self.max_step,
        ] {
            *v *= factor;
        }
        self
    }

    /// Absolute values for a curve of length `length`.
    pub fn scaled(&self, length: f64) -> Scaled {
        Scaled {
            length,
            embedding: self.embedding_tol * length,
            newton: self.newton_tol * length,
            merge: self.merge_tol * length,
            diag_tube: self.diag_tube * length,
            event: self.event_tol * length,
            intersect: self.intersect_tol * length,
            endpoint_margin: self.endpoint_margin * length,
            min_split_decrease: self.min_split_decrease * length,
            basin: self.basin_tol * length,
            trajectory: self.trajectory_tol * length,
            boundary: self.boundary_tol * length,
            max_step: self.max_step * length,
        }
    }
}

/// Length-valued tolerances for one curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub length: f64,
    pub embedding: f64,
    pub newton: f64,
    pub merge: f64,
    pub diag_tube: f64,
    pub event: f64,
    pub intersect: f64,
    pub endpoint_margin: f64,
    pub min_split_decrease: f64,
    pub basin: f64,
    pub trajectory: f64,
    pub boundary: f64,
    pub max_step: f64,
}
