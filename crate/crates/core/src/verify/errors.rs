//! Error norms against reference fields.

use serde::Serialize;

use crate::fields::DiscreteFields;
use crate::quadrature::QuadratureRule;
use crate::solver::Solution;
use crate::spaces::Discretization;

use super::exact::ReferenceFields;

/// Errors of one discrete solution. Norms are full (value plus gradient)
/// unless named `_semi`; displacement gradients are taken element by element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorReport {
    pub h: f64,
    pub t: f64,
    pub rotation_l2: f64,
    pub rotation_h1_semi: f64,
    pub rotation_h1: f64,
    pub displacement_l2: f64,
    pub displacement_broken_h1_semi: f64,
    pub displacement_broken_h1: f64,
    pub shear_l2: f64,
    /// `t ‖ζ − ζ_h‖`.
    pub shear_scaled_l2: f64,
}

pub const ERROR_QUADRATURE: QuadratureRule = QuadratureRule::Degree6;

pub fn compute_errors(disc: &Discretization, solution: &Solution, exact: &dyn ReferenceFields, t: f64) -> ErrorReport {
    let mesh = &disc.mesh;
    let f = DiscreteFields::new(disc, solution);
    let (mut rl2, mut rh1, mut ul2, mut uh1, mut zl2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for tri in 0..mesh.num_triangles() {
        let area = mesh.area(tri);
        let gphi = f.rotation_gradient(tri);
        let gu = f.displacement_gradient(tri);
        for &(l, w) in ERROR_QUADRATURE.points() {
            let wa = w * area;
            let p = mesh.point_at(tri, l);
            let (phi, phi_h) = (exact.rotation(p), f.rotation_at(tri, l));
            let gp = exact.rotation_gradient(p);
            let gue = exact.displacement_gradient(p);
            let (z, z_h) = (exact.shear(p), f.shear_at(tri, l));
            for i in 0..2 {
                rl2 += wa * (phi[i] - phi_h[i]).powi(2);
                uh1 += wa * (gue[i] - gu[i]).powi(2);
                zl2 += wa * (z[i] - z_h[i]).powi(2);
                for j in 0..2 {
                    rh1 += wa * (gp[i][j] - gphi[i][j]).powi(2);
                }
            }
            ul2 += wa * (exact.displacement(p) - f.displacement_at(tri, l)).powi(2);
        }
    }
    ErrorReport {
        h: mesh.mesh_size(),
        t,
        rotation_l2: rl2.sqrt(),
        rotation_h1_semi: rh1.sqrt(),
        rotation_h1: (rl2 + rh1).sqrt(),
        displacement_l2: ul2.sqrt(),
        displacement_broken_h1_semi: uh1.sqrt(),
        displacement_broken_h1: (ul2 + uh1).sqrt(),
        shear_l2: zl2.sqrt(),
        shear_scaled_l2: t * zl2.sqrt(),
    }
}
