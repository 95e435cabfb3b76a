//! Manufactured plate solution on the unit square.
//!
//! The shear profile `γ` is independent of the thickness, so the scaled shear
//! stress `ζ = λ(1−t²)γ` stays bounded as `t → 0` while the rotation
//! approaches the displacement gradient: `φ = ∇u + t²γ`.

use crate::assembly::{bending_tensor_apply, PlateModel};
use crate::quadrature::QuadratureRule;
use crate::spaces::BoundaryCondition;

/// Exact fields an error report is measured against.
pub trait ReferenceFields: Sync {
    fn displacement(&self, p: [f64; 2]) -> f64;
    fn displacement_gradient(&self, p: [f64; 2]) -> [f64; 2];
    fn rotation(&self, p: [f64; 2]) -> [f64; 2];
    /// `g[i][j] = ∂_j φ_i`.
    fn rotation_gradient(&self, p: [f64; 2]) -> [[f64; 2]; 2];
    fn shear(&self, p: [f64; 2]) -> [f64; 2];
}

/// Identically zero fields.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroFields;

impl ReferenceFields for ZeroFields {
    fn displacement(&self, _: [f64; 2]) -> f64 {
        0.0
    }
    fn displacement_gradient(&self, _: [f64; 2]) -> [f64; 2] {
        [0.0; 2]
    }
    fn rotation(&self, _: [f64; 2]) -> [f64; 2] {
        [0.0; 2]
    }
    fn rotation_gradient(&self, _: [f64; 2]) -> [[f64; 2]; 2] {
        [[0.0; 2]; 2]
    }
    fn shear(&self, _: [f64; 2]) -> [f64; 2] {
        [0.0; 2]
    }
}

// p(x) = x²(1−x)² and derivatives
fn p0(x: f64) -> f64 {
    x * x * (1.0 - x) * (1.0 - x)
}
fn p1(x: f64) -> f64 {
    2.0 * x * (1.0 - x) * (1.0 - x) - 2.0 * x * x * (1.0 - x)
}
fn p2(x: f64) -> f64 {
    2.0 * (1.0 - x) * (1.0 - x) - 8.0 * x * (1.0 - x) + 2.0 * x * x
}
fn p3(x: f64) -> f64 {
    24.0 * x - 12.0
}
// q(x) = x(1−x)
fn q0(x: f64) -> f64 {
    x * (1.0 - x)
}
fn q1(x: f64) -> f64 {
    1.0 - 2.0 * x
}
const Q2: f64 = -2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSolution {
    pub thickness: f64,
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub shear_modulus: f64,
    pub bc: BoundaryCondition,
}

pub fn manufactured_solution(model: &PlateModel, bc: BoundaryCondition) -> ExactSolution {
    ExactSolution {
        thickness: model.thickness,
        youngs_modulus: model.youngs_modulus,
        poisson_ratio: model.poisson_ratio,
        shear_modulus: model.shear_modulus(),
        bc,
    }
}

impl ExactSolution {
    fn t2(&self) -> f64 {
        self.thickness * self.thickness
    }

    /// Scalar shear profile `s = q(x)q(y)`; `γ = (s, s)`.
    fn profile(&self, [x, y]: [f64; 2]) -> f64 {
        q0(x) * q0(y)
    }

    fn profile_gradient(&self, [x, y]: [f64; 2]) -> [f64; 2] {
        [q1(x) * q0(y), q0(x) * q1(y)]
    }

    pub fn transverse_load(&self, p: [f64; 2]) -> f64 {
        let g = self.profile_gradient(p);
        self.shear_modulus * (g[0] + g[1])
    }

    /// `−div Cε(φ) + λγ`.
    pub fn moment_load(&self, p: [f64; 2]) -> [f64; 2] {
        let [x, y] = p;
        let t2 = self.t2();
        let (uxxx, uxxy, uxyy, uyyy) = (p3(x) * p0(y), p2(x) * p1(y), p1(x) * p2(y), p0(x) * p3(y));
        let (sxx, sxy, syy) = (Q2 * q0(y), q1(x) * q1(y), q0(x) * Q2);
        let (f1xx, f1xy, f1yy) = (uxxx + t2 * sxx, uxxy + t2 * sxy, uxyy + t2 * syy);
        let (f2xx, f2xy, f2yy) = (uxxy + t2 * sxx, uxyy + t2 * sxy, uyyy + t2 * syy);
        let grad_div = [f1xx + f2xy, f1xy + f2yy];
        let div_eps = [0.5 * (f1xx + f1yy + grad_div[0]), 0.5 * (f2xx + f2yy + grad_div[1])];
        let nu = self.poisson_ratio;
        let k = self.youngs_modulus / (12.0 * (1.0 - nu * nu));
        let s = self.shear_modulus * self.profile(p);
        [0, 1].map(|i| -k * ((1.0 - nu) * div_eps[i] + nu * grad_div[i]) + s)
    }

    /// Bending moment `Cε(φ)`.
    pub fn moment(&self, p: [f64; 2]) -> [[f64; 2]; 2] {
        let g = self.rotation_gradient(p);
        let eps = [[g[0][0], 0.5 * (g[0][1] + g[1][0])], [0.5 * (g[0][1] + g[1][0]), g[1][1]]];
        bending_tensor_apply(eps, self.youngs_modulus, self.poisson_ratio)
    }

    /// `Cε(φ) n` on the boundary of the unit square.
    pub fn boundary_traction(&self, p: [f64; 2]) -> [f64; 2] {
        let n = unit_square_normal(p);
        let m = self.moment(p);
        [m[0][0] * n[0] + m[0][1] * n[1], m[1][0] * n[0] + m[1][1] * n[1]]
    }

    /// The model with this solution's loads attached. Simply supported plates
    /// also receive the boundary moment the free boundary rotations need.
    pub fn loaded_model(&self, base: &PlateModel) -> PlateModel {
        let (a, b, c) = (*self, *self, *self);
        let mut model = base.clone().with_load(move |p| a.transverse_load(p)).with_moment(move |p| b.moment_load(p));
        model.boundary_moment = match self.bc {
            BoundaryCondition::Clamped => None,
            BoundaryCondition::SimplySupported => Some(std::sync::Arc::new(move |p| c.boundary_traction(p))),
        };
        model.load_quadrature = QuadratureRule::Degree6;
        model
    }
}

fn unit_square_normal([x, y]: [f64; 2]) -> [f64; 2] {
    let d = [x, 1.0 - x, y, 1.0 - y];
    let side = (0..4).min_by(|&i, &j| d[i].total_cmp(&d[j])).unwrap();
    [[-1.0, 0.0], [1.0, 0.0], [0.0, -1.0], [0.0, 1.0]][side]
}

impl ReferenceFields for ExactSolution {
    fn displacement(&self, [x, y]: [f64; 2]) -> f64 {
        p0(x) * p0(y)
    }

    fn displacement_gradient(&self, [x, y]: [f64; 2]) -> [f64; 2] {
        [p1(x) * p0(y), p0(x) * p1(y)]
    }

    fn rotation(&self, p: [f64; 2]) -> [f64; 2] {
        let g = self.displacement_gradient(p);
        let s = self.t2() * self.profile(p);
        [g[0] + s, g[1] + s]
    }

    fn rotation_gradient(&self, p: [f64; 2]) -> [[f64; 2]; 2] {
        let [x, y] = p;
        let sg = self.profile_gradient(p);
        let t2 = self.t2();
        let uxy = p1(x) * p1(y);
        [[p2(x) * p0(y) + t2 * sg[0], uxy + t2 * sg[1]], [uxy + t2 * sg[0], p0(x) * p2(y) + t2 * sg[1]]]
    }

    fn shear(&self, p: [f64; 2]) -> [f64; 2] {
        let s = self.shear_modulus * (1.0 - self.t2()) * self.profile(p);
        [s, s]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn exact(t: f64) -> ExactSolution {
        manufactured_solution(&PlateModel::new(1.0, 0.3, t).unwrap(), BoundaryCondition::Clamped)
    }

    // deterministic points in the open unit square
    fn samples() -> Vec<[f64; 2]> {
        (1..=10).map(|i| [(0.6180339887 * i as f64).fract(), (0.7548776662 * i as f64).fract()]).collect()
    }

    #[test]
    fn boundary_values_vanish() {
        let e = exact(0.1);
        for &s in &[0.0, 0.17, 0.5, 0.93, 1.0] {
            for p in [[0.0, s], [1.0, s], [s, 0.0], [s, 1.0]] {
                assert_abs_diff_eq!(e.displacement(p), 0.0);
                assert_eq!(e.rotation(p), [0.0, 0.0]);
            }
        }
    }

    #[test]
    fn load_vanishes_at_centre() {
        assert_abs_diff_eq!(exact(0.1).transverse_load([0.5, 0.5]), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn kirchhoff_relation_and_bounded_shear() {
        for t in [0.1, 1e-3, 1e-6] {
            let e = exact(t);
            for p in samples() {
                let (phi, gu, z) = (e.rotation(p), e.displacement_gradient(p), e.shear(p));
                let c = t * t / (e.shear_modulus * (1.0 - t * t));
                for i in 0..2 {
                    assert_abs_diff_eq!(z[i] * c, phi[i] - gu[i], epsilon = 1e-14);
                }
            }
        }
    }

    // central differences of the closed-form fields
    fn fd<F: Fn([f64; 2]) -> f64>(f: F, p: [f64; 2], dir: usize) -> f64 {
        let h = 1e-5;
        let (mut a, mut b) = (p, p);
        a[dir] += h;
        b[dir] -= h;
        (f(a) - f(b)) / (2.0 * h)
    }

    #[test]
    fn gradients_match_finite_differences() {
        let e = exact(0.3);
        for p in samples() {
            let gu = e.displacement_gradient(p);
            let gp = e.rotation_gradient(p);
            for j in 0..2 {
                assert_abs_diff_eq!(fd(|q| e.displacement(q), p, j), gu[j], epsilon = 1e-8);
                for i in 0..2 {
                    assert_abs_diff_eq!(fd(|q| e.rotation(q)[i], p, j), gp[i][j], epsilon = 1e-8);
                }
            }
        }
    }

    #[test]
    fn strong_form_residual_is_small() {
        for t in [0.3, 1e-2] {
            let e = exact(t);
            let lam = e.shear_modulus;
            for p in samples() {
                // −div Cε(φ) + λ(φ − ∇u) + ζ = m
                for i in 0..2 {
                    let div_m = fd(|q| e.moment(q)[i][0], p, 0) + fd(|q| e.moment(q)[i][1], p, 1);
                    let r = -div_m + lam * (e.rotation(p)[i] - e.displacement_gradient(p)[i]) + e.shear(p)[i]
                        - e.moment_load(p)[i];
                    assert!(r.abs() < 1e-8, "rotation residual {r:e}");
                }
                // div(λ(φ − ∇u) + ζ) = g
                let flux =
                    |q: [f64; 2], i: usize| lam * (e.rotation(q)[i] - e.displacement_gradient(q)[i]) + e.shear(q)[i];
                let r = fd(|q| flux(q, 0), p, 0) + fd(|q| flux(q, 1), p, 1) - e.transverse_load(p);
                assert!(r.abs() < 1e-8, "displacement residual {r:e}");
            }
        }
    }

    #[test]
    fn boundary_normals() {
        assert_eq!(unit_square_normal([0.0, 0.4]), [-1.0, 0.0]);
        assert_eq!(unit_square_normal([0.3, 1.0]), [0.0, 1.0]);
    }
}
