//! Thickness sweeps under a uniform load.
//!
//! The mixed method keeps the mean deflection bounded away from zero as the
//! plate gets thin. For contrast, a conforming P1–P1 discretization with the
//! shear energy `(λ/t²)‖φ − ∇u‖²` locks: its deflection collapses with `t`.

use faer::linalg::solvers::Solve;
use faer::sparse::Triplet;
use faer::{Col, Side};
use serde::Serialize;

use crate::assembly::{assemble, element_matrices, scalar_load, PlateModel};
use crate::error::{PlateError, Result};
use crate::fields::centroid_displacements;
use crate::mesh::Mesh;
use crate::quadrature::QuadratureRule;
use crate::solver::{sequential_linear_algebra, solve, SolverChoice};
use crate::spaces::{build_dof_map, BoundaryCondition, Discretization, MultiplierFamily, ReferenceBasis, SpaceKind};
use crate::sparse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LockingMode {
    Mixed(MultiplierFamily),
    /// Conforming P1 rotations and displacement with a pure penalty shear term.
    NaiveConforming,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LockingRow {
    pub t: f64,
    pub deflection: f64,
    /// Relative change against the previous row.
    pub relative_change: Option<f64>,
}

/// Area-weighted mean of per-triangle values over triangles whose centroid lies
/// in the middle half of the mesh bounding box.
pub fn centre_region_mean(mesh: &Mesh, values: &[f64]) -> f64 {
    let (lo, hi) = mesh.bounding_box();
    let inside = |p: [f64; 2]| {
        (0..2).all(|i| {
            let (a, b) = (lo[i] + 0.25 * (hi[i] - lo[i]), lo[i] + 0.75 * (hi[i] - lo[i]));
            p[i] >= a && p[i] <= b
        })
    };
    let (mut sum, mut area) = (0.0, 0.0);
    for t in 0..mesh.num_triangles() {
        if inside(mesh.centroid(t)) {
            sum += mesh.area(t) * values[t];
            area += mesh.area(t);
        }
    }
    sum / area
}

pub fn locking_sweep(
    mesh: &Mesh,
    thicknesses: &[f64],
    base: &PlateModel,
    bc: BoundaryCondition,
    mode: LockingMode,
) -> Result<Vec<LockingRow>> {
    if thicknesses.is_empty() {
        return Err(PlateError::InvalidInput("thickness list is empty".into()));
    }
    if thicknesses.windows(2).any(|w| w[1] >= w[0]) {
        return Err(PlateError::InvalidInput("thickness list must be strictly decreasing".into()));
    }
    let mut rows: Vec<LockingRow> = Vec::with_capacity(thicknesses.len());
    for &t in thicknesses {
        let model = PlateModel::new(base.youngs_modulus, base.poisson_ratio, t)?;
        let model = PlateModel { transverse_load: base.transverse_load.clone(), ..model };
        let per_triangle = match mode {
            LockingMode::Mixed(family) => {
                let disc = Discretization::new(mesh.clone(), bc, family)?;
                let sol = solve(&assemble(&disc, &model)?, SolverChoice::Auto)?;
                centroid_displacements(&disc, &sol)
            }
            LockingMode::NaiveConforming => naive_conforming(mesh, &model, bc)?,
        };
        let deflection = centre_region_mean(mesh, &per_triangle);
        let relative_change = rows.last().map(|r| ((deflection - r.deflection) / r.deflection).abs());
        rows.push(LockingRow { t, deflection, relative_change });
    }
    Ok(rows)
}

/// Centroid deflections of the locking-prone conforming discretization.
fn naive_conforming(mesh: &Mesh, model: &PlateModel, bc: BoundaryCondition) -> Result<Vec<f64>> {
    sequential_linear_algebra();
    let rot = build_dof_map(mesh, SpaceKind::rotation(bc))?;
    let disp = build_dof_map(mesh, SpaceKind::LinearZero)?;
    let (nr, nw) = (rot.vector_dim(), disp.dim());
    let lam = model.shear_modulus();
    let weight = 1.0 / (model.thickness * model.thickness);
    let mut k = Vec::new();
    for t in 0..mesh.num_triangles() {
        let lb = element_matrices(mesh, t, model, ReferenceBasis::Linear, QuadratureRule::EdgeMidpoint)?;
        let grads = mesh.barycentric_gradients(t);
        let area = mesh.area(t);
        let int_lin = area / 3.0;
        // local vector: rotations 2a+c (0..6), displacement 6+k
        let mut local = [[0.0; 9]; 9];
        for i in 0..6 {
            for j in 0..6 {
                local[i][j] = lb.bending[i][j];
                if i % 2 == j % 2 {
                    local[i][j] += weight * lb.shear_mass[i / 2][j / 2];
                }
            }
        }
        for a in 0..3 {
            for c in 0..2 {
                for kk in 0..3 {
                    let g = -weight * lam * grads[kk][c] * int_lin;
                    local[2 * a + c][6 + kk] = g;
                    local[6 + kk][2 * a + c] = g;
                }
            }
        }
        for kk in 0..3 {
            for l in 0..3 {
                local[6 + kk][6 + l] = weight * lam * area * (grads[kk][0] * grads[l][0] + grads[kk][1] * grads[l][1]);
            }
        }
        let global = |i: usize| -> Vec<(usize, f64)> {
            if i < 6 {
                rot.local(t, i / 2).iter().map(|&(g, w)| (2 * g + i % 2, w)).collect()
            } else {
                disp.local(t, i - 6).iter().map(|&(g, w)| (nr + g, w)).collect()
            }
        };
        for i in 0..9 {
            for (gi, wi) in global(i) {
                for j in 0..9 {
                    for (gj, wj) in global(j) {
                        k.push(Triplet::new(gi, gj, wi * wj * local[i][j]));
                    }
                }
            }
        }
    }
    let n = nr + nw;
    let k = sparse::from_triplets(n, n, &k);
    let f = scalar_load(mesh, &disp, model.transverse_load.as_ref(), model.load_quadrature);
    let rhs = Col::from_fn(n, |i| if i < nr { 0.0 } else { f[i - nr] });
    let x = k.sp_cholesky(Side::Lower).map_err(|_| PlateError::NotPositiveDefinite)?.solve(&rhs);
    let u: Vec<f64> = (0..nw).map(|i| x[nr + i]).collect();
    Ok((0..mesh.num_triangles()).map(|t| disp.local_coefficients(t, &u).iter().sum::<f64>() / 3.0).collect())
}
