//! Convergence studies with the manufactured solution.

use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::{assemble, PlateModel};
use crate::error::{PlateError, Result};
use crate::mesh::Mesh;
use crate::solver::{solve, Solution, SolveInfo, SolverChoice};
use crate::spaces::{BoundaryCondition, Discretization, MultiplierFamily};

use super::errors::{compute_errors, ErrorReport};
use super::exact::manufactured_solution;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRecord {
    pub level: usize,
    pub t: f64,
    pub errors: ErrorReport,
    /// Observed orders against the previous level at the same thickness.
    pub rate_rotation: Option<f64>,
    pub rate_displacement: Option<f64>,
    pub rate_displacement_l2: Option<f64>,
    pub rate_shear: Option<f64>,
    pub solve: SolveInfo,
}

/// Observed order `log(e_coarse / e_fine) / log(h_coarse / h_fine)`;
/// `log₂(e_2h / e_h)` for halved meshes.
pub fn observed_rate(e_coarse: f64, e_fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (e_coarse / e_fine).ln() / (h_coarse / h_fine).ln()
}

/// Solves the manufactured problem on one mesh at one thickness.
pub fn solve_manufactured(
    mesh: &Mesh,
    t: f64,
    base: &PlateModel,
    bc: BoundaryCondition,
    family: MultiplierFamily,
    solver: SolverChoice,
) -> Result<(Discretization, Solution, ErrorReport)> {
    let model = base.clone().with_thickness(t);
    let exact = manufactured_solution(&model, bc);
    let model = exact.loaded_model(&model);
    let disc = Discretization::new(mesh.clone(), bc, family)?;
    let system = assemble(&disc, &model)?;
    let solution = solve(&system, solver)?;
    let errors = compute_errors(&disc, &solution, &exact, t);
    Ok((disc, solution, errors))
}

/// Errors and rates for every (thickness, level) pair, thickness-major.
pub fn convergence_study(
    levels: &[Mesh],
    thicknesses: &[f64],
    base: &PlateModel,
    bc: BoundaryCondition,
    family: MultiplierFamily,
    solver: SolverChoice,
) -> Result<Vec<StudyRecord>> {
    if levels.len() < 3 {
        return Err(PlateError::InvalidInput(format!(
            "a convergence study needs at least 3 mesh levels, got {}",
            levels.len()
        )));
    }
    if thicknesses.is_empty() {
        return Err(PlateError::InvalidInput("a convergence study needs at least one thickness".into()));
    }
    for &t in thicknesses {
        PlateModel::new(base.youngs_modulus, base.poisson_ratio, t)?;
    }
    let pairs: Vec<(usize, usize)> =
        (0..thicknesses.len()).flat_map(|i| (0..levels.len()).map(move |l| (i, l))).collect();
    let runs: Vec<(ErrorReport, SolveInfo)> = pairs
        .par_iter()
        .map(|&(i, l)| {
            solve_manufactured(&levels[l], thicknesses[i], base, bc, family, solver).map(|(_, s, e)| (e, s.info))
        })
        .collect::<Result<_>>()?;

    let mut records: Vec<StudyRecord> = Vec::with_capacity(runs.len());
    for (k, ((i, l), (errors, info))) in pairs.into_iter().zip(runs).enumerate() {
        let prev = (l > 0).then(|| records[k - 1].errors);
        let rate = |f: fn(&ErrorReport) -> f64| prev.map(|p| observed_rate(f(&p), f(&errors), p.h, errors.h));
        records.push(StudyRecord {
            level: l,
            t: thicknesses[i],
            rate_rotation: rate(|e| e.rotation_h1),
            rate_displacement: rate(|e| e.displacement_broken_h1),
            rate_displacement_l2: rate(|e| e.displacement_l2),
            rate_shear: rate(|e| e.shear_scaled_l2),
            errors,
            solve: info,
        });
    }
    Ok(records)
}

/// `levels` meshes: `base` followed by successive uniform refinements.
pub fn refinement_levels(base: Mesh, levels: usize) -> Vec<Mesh> {
    let mut out = vec![base];
    while out.len() < levels {
        let next = out[out.len() - 1].refine_uniform();
        out.push(next);
    }
    out.truncate(levels);
    out
}
