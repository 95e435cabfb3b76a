//! Dense inf-sup estimates on small meshes.

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use serde::Serialize;

use crate::error::{PlateError, Result};
use crate::mesh::Mesh;
use crate::quadrature::QuadratureRule;
use crate::solver::sequential_linear_algebra;
use crate::spaces::{build_dof_map, BoundaryCondition, DofMap, MultiplierFamily, SpaceKind};

/// Dense computations are refused above this many unknowns.
pub const INFSUP_LIMIT: usize = 3000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfSupPair {
    /// `∫ ∇_h·v q` for vector Crouzeix–Raviart `v` with zero boundary means in the
    /// broken H¹ norm, against a multiplier-family `q` over all vertices in L².
    Divergence(MultiplierFamily),
    /// `∫ μ·φ` between the multiplier and rotation spaces, both in L².
    Gram(MultiplierFamily, BoundaryCondition),
}

/// Scalar mass matrix of a vertex- or edge-based space.
fn mass(mesh: &Mesh, map: &DofMap) -> Mat<f64> {
    cross_mass(mesh, map, map)
}

fn cross_mass(mesh: &Mesh, rows: &DofMap, cols: &DofMap) -> Mat<f64> {
    let mut m = Mat::zeros(rows.dim(), cols.dim());
    let (br, bc) = (rows.basis(), cols.basis());
    for t in 0..mesh.num_triangles() {
        let area = mesh.area(t);
        for &(l, w) in QuadratureRule::EdgeMidpoint.points() {
            let (vr, vc) = (br.values_bary(l), bc.values_bary(l));
            for a in 0..3 {
                for &(i, wi) in rows.local(t, a) {
                    for b in 0..3 {
                        for &(j, wj) in cols.local(t, b) {
                            m[(i, j)] += w * area * wi * wj * vr[a] * vc[b];
                        }
                    }
                }
            }
        }
    }
    m
}

/// Generalized eigenvalues of `C x = σ N x` with `N` symmetric positive definite, ascending.
fn generalized_eigenvalues(c: &Mat<f64>, n: &Mat<f64>) -> Result<Vec<f64>> {
    let eig = n.self_adjoint_eigen(Side::Lower).map_err(|_| PlateError::NotPositiveDefinite)?;
    let u = eig.U();
    let s = eig.S().column_vector();
    let k = s.nrows();
    let mut w = Mat::zeros(k, k);
    for j in 0..k {
        if !(s[j] > 0.0) {
            return Err(PlateError::NotPositiveDefinite);
        }
        let f = 1.0 / s[j].sqrt();
        for i in 0..k {
            w[(i, j)] = u[(i, j)] * f;
        }
    }
    // Wᵀ C W with W = U S^{-1/2}
    let p = w.transpose() * c * &w;
    let sym = Mat::from_fn(k, k, |i, j| 0.5 * (p[(i, j)] + p[(j, i)]));
    sym.self_adjoint_eigenvalues(Side::Lower).map_err(|_| PlateError::NotPositiveDefinite)
}

fn smallest_nonzero(ev: &[f64]) -> f64 {
    let max = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ev.iter().copied().find(|&v| v > 1e-10 * max).unwrap_or(0.0).max(0.0).sqrt()
}

pub fn estimate_infsup(mesh: &Mesh, pair: InfSupPair) -> Result<f64> {
    sequential_linear_algebra();
    match pair {
        InfSupPair::Divergence(family) => divergence_infsup(mesh, family),
        InfSupPair::Gram(family, bc) => gram_infsup(mesh, family, bc),
    }
}

fn divergence_infsup(mesh: &Mesh, family: MultiplierFamily) -> Result<f64> {
    let vel = build_dof_map(mesh, SpaceKind::CrouzeixRaviartZero)?;
    let q = build_dof_map(mesh, SpaceKind::Multiplier(family))?;
    let (nv, nq) = (vel.vector_dim(), q.dim());
    if nv + nq > INFSUP_LIMIT {
        return Err(PlateError::TooLarge { unknowns: nv + nq, limit: INFSUP_LIMIT });
    }
    let mut b = Mat::<f64>::zeros(nq, nv);
    let qb = q.basis();
    for t in 0..mesh.num_triangles() {
        let area = mesh.area(t);
        let grads = mesh.barycentric_gradients(t);
        // ∫_T q_m = area/3 for both families
        let mut int_q = [0.0; 3];
        for &(l, w) in QuadratureRule::EdgeMidpoint.points() {
            let v = qb.values_bary(l);
            for m in 0..3 {
                int_q[m] += w * area * v[m];
            }
        }
        for m in 0..3 {
            for &(i, wi) in q.local(t, m) {
                for k in 0..3 {
                    for &(j, wj) in vel.local(t, k) {
                        for c in 0..2 {
                            // div of ψ_k e_c is −2 ∂_c λ_k
                            b[(i, 2 * j + c)] += wi * wj * int_q[m] * (-2.0 * grads[k][c]);
                        }
                    }
                }
            }
        }
    }
    divergence_beta(mesh, &vel, &b, &mass(mesh, &q))
}

/// Broken H¹ norm matrix of vector Crouzeix–Raviart fields, interleaved components.
fn broken_h1_norm(mesh: &Mesh, vel: &DofMap) -> Mat<f64> {
    let mut scalar = mass(mesh, vel);
    for t in 0..mesh.num_triangles() {
        let area = mesh.area(t);
        let grads = mesh.barycentric_gradients(t);
        for k in 0..3 {
            for &(i, wi) in vel.local(t, k) {
                for l in 0..3 {
                    for &(j, wj) in vel.local(t, l) {
                        let dot = grads[k][0] * grads[l][0] + grads[k][1] * grads[l][1];
                        scalar[(i, j)] += 4.0 * area * wi * wj * dot;
                    }
                }
            }
        }
    }
    let nv = vel.vector_dim();
    Mat::from_fn(nv, nv, |i, j| if i % 2 == j % 2 { scalar[(i / 2, j / 2)] } else { 0.0 })
}

fn divergence_beta(mesh: &Mesh, vel: &DofMap, b: &Mat<f64>, q_mass: &Mat<f64>) -> Result<f64> {
    let kv = broken_h1_norm(mesh, vel);
    let kinv_bt = kv.llt(Side::Lower).map_err(|_| PlateError::NotPositiveDefinite)?.solve(b.transpose().to_owned());
    let c = b * &kinv_bt;
    Ok(smallest_nonzero(&generalized_eigenvalues(&c, q_mass)?))
}

fn gram_infsup(mesh: &Mesh, family: MultiplierFamily, bc: BoundaryCondition) -> Result<f64> {
    let rot = build_dof_map(mesh, SpaceKind::rotation(bc))?;
    let mult = build_dof_map(mesh, SpaceKind::multiplier(bc, family))?;
    if rot.dim() + mult.dim() > INFSUP_LIMIT {
        return Err(PlateError::TooLarge { unknowns: rot.dim() + mult.dim(), limit: INFSUP_LIMIT });
    }
    let d = cross_mass(mesh, &mult, &rot);
    let mr = mass(mesh, &rot);
    let minv_dt = mr.llt(Side::Lower).map_err(|_| PlateError::NotPositiveDefinite)?.solve(d.transpose().to_owned());
    let c = &d * &minv_dt;
    Ok(smallest_nonzero(&generalized_eigenvalues(&c, &mass(mesh, &mult))?))
}
