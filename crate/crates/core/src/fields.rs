//! Pointwise evaluation of discrete solutions.

use crate::solver::Solution;
use crate::spaces::{Discretization, DofMap};

/// Read-only view pairing a solution with its discretization.
#[derive(Debug, Clone, Copy)]
pub struct DiscreteFields<'a> {
    pub disc: &'a Discretization,
    pub solution: &'a Solution,
}

fn vector_local(map: &DofMap, t: usize, coeffs: &[f64]) -> [[f64; 2]; 3] {
    let x = map.local_vector_coefficients(t, coeffs, 0);
    let y = map.local_vector_coefficients(t, coeffs, 1);
    [0, 1, 2].map(|k| [x[k], y[k]])
}

fn combine_vector(values: [f64; 3], local: [[f64; 2]; 3]) -> [f64; 2] {
    let mut out = [0.0; 2];
    for k in 0..3 {
        out[0] += values[k] * local[k][0];
        out[1] += values[k] * local[k][1];
    }
    out
}

impl<'a> DiscreteFields<'a> {
    pub fn new(disc: &'a Discretization, solution: &'a Solution) -> Self {
        Self { disc, solution }
    }

    pub fn rotation_at(&self, t: usize, bary: [f64; 3]) -> [f64; 2] {
        let map = &self.disc.rotation;
        combine_vector(map.basis().values_bary(bary), vector_local(map, t, &self.solution.rotation))
    }

    /// `g[i][j] = ∂_j φ_i` on triangle `t`.
    pub fn rotation_gradient(&self, t: usize) -> [[f64; 2]; 2] {
        let map = &self.disc.rotation;
        let local = vector_local(map, t, &self.solution.rotation);
        let slope = map.basis().slope();
        let grads = self.disc.mesh.barycentric_gradients(t);
        let mut g = [[0.0; 2]; 2];
        for k in 0..3 {
            for i in 0..2 {
                for j in 0..2 {
                    g[i][j] += slope * local[k][i] * grads[k][j];
                }
            }
        }
        g
    }

    pub fn displacement_at(&self, t: usize, bary: [f64; 3]) -> f64 {
        let map = &self.disc.displacement;
        let c = map.local_coefficients(t, &self.solution.displacement);
        let v = map.basis().values_bary(bary);
        (0..3).map(|k| c[k] * v[k]).sum()
    }

    pub fn displacement_gradient(&self, t: usize) -> [f64; 2] {
        let map = &self.disc.displacement;
        let c = map.local_coefficients(t, &self.solution.displacement);
        let slope = map.basis().slope();
        let grads = self.disc.mesh.barycentric_gradients(t);
        let mut g = [0.0; 2];
        for k in 0..3 {
            g[0] += slope * c[k] * grads[k][0];
            g[1] += slope * c[k] * grads[k][1];
        }
        g
    }

    pub fn shear_at(&self, t: usize, bary: [f64; 3]) -> [f64; 2] {
        let map = &self.disc.multiplier;
        combine_vector(map.basis().values_bary(bary), vector_local(map, t, &self.solution.multiplier))
    }
}

/// Rotation at every mesh vertex (zero where the space is constrained).
pub fn vertex_rotations(disc: &Discretization, solution: &Solution) -> Vec<[f64; 2]> {
    (0..disc.mesh.num_vertices())
        .map(|v| {
            let mut out = [0.0; 2];
            for &(g, w) in disc.rotation.expansion(v) {
                out[0] += w * solution.rotation[2 * g];
                out[1] += w * solution.rotation[2 * g + 1];
            }
            out
        })
        .collect()
}

const CENTROID: [f64; 3] = [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];

pub fn centroid_displacements(disc: &Discretization, solution: &Solution) -> Vec<f64> {
    let f = DiscreteFields::new(disc, solution);
    (0..disc.mesh.num_triangles()).map(|t| f.displacement_at(t, CENTROID)).collect()
}

pub fn centroid_shear(disc: &Discretization, solution: &Solution) -> Vec<[f64; 2]> {
    let f = DiscreteFields::new(disc, solution);
    (0..disc.mesh.num_triangles()).map(|t| f.shear_at(t, CENTROID)).collect()
}
