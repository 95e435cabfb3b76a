use std::path::PathBuf;

use rmplate::fields::centroid_displacements;
use rmplate::solver::{condense, reduced_eigenvalues};
use rmplate::sparse;
use rmplate::verify::{
    biorthogonality_defect, centre_region_mean, convergence_study, estimate_infsup, locking_sweep,
    partition_of_unity_defect, refinement_levels, InfSupPair, LockingMode,
};
use rmplate::{
    assemble, load_mesh, solve, solve_condensed, solve_saddle, Discretization, Mesh, MultiplierFamily, PlateError,
    PlateModel,
};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::config::{CommandKind, ConfigError, MeshSource, RunConfig};
use crate::output;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{0}")]
    Plate(#[from] PlateError),

    #[error("cannot read mesh {path}: {message}")]
    MeshFile { path: PathBuf, message: String },

    #[error("cannot write results: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::MeshFile { .. } | CliError::Output(_) => 3,
            CliError::Plate(_) => 4,
        }
    }
}

/// What a run produced: text for stdout, files to write, and whether every check passed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: &'static str,
    /// `pass`, `fail` or `skipped`.
    pub status: &'static str,
    pub value: Option<f64>,
    pub detail: String,
}

fn load(config: &RunConfig) -> Result<Mesh, CliError> {
    match &config.mesh {
        MeshSource::UnitSquare(n) => Ok(Mesh::unit_square(*n)),
        MeshSource::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::MeshFile { path: path.clone(), message: e.to_string() })?;
            Ok(load_mesh(&text)?)
        }
    }
}

fn model(config: &RunConfig, t: f64) -> Result<PlateModel, CliError> {
    Ok(PlateModel::new(config.youngs, config.poisson, t)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report is serializable");
    s.push('\n');
    s
}

fn csv_text(result: Result<String, csv::Error>) -> Result<String, CliError> {
    result.map_err(|e| CliError::Output(e.to_string()))
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    match config.command {
        CommandKind::Solve => solve_plate(config),
        CommandKind::Converge => converge(config),
        CommandKind::Lock => lock(config),
        CommandKind::Check => check(config),
        CommandKind::MeshInfo => mesh_info(config),
    }
}

fn solve_plate(config: &RunConfig) -> Result<Outcome, CliError> {
    let disc = Discretization::new(load(config)?, config.bc, config.multiplier)?;
    let system = assemble(&disc, &model(config, config.thickness[0])?)?;
    let sol = solve(&system, config.solver)?;
    let deflection = centroid_displacements(&disc, &sol);
    let summary = json!({
        "config": config,
        "solve": sol.info,
        "centre_deflection": centre_region_mean(&disc.mesh, &deflection),
        "max_deflection": sparse::max_norm(&deflection),
        "rotation_max": sparse::max_norm(&sol.rotation),
        "shear_max": sparse::max_norm(&sol.multiplier),
    });
    let mut out = Outcome { passed: true, ..Default::default() };
    let text = to_json(&summary);
    match &config.json {
        Some(path) => out.files.push((path.clone(), text)),
        None => out.stdout = text,
    }
    if let Some(path) = &config.vtk {
        out.files.push((path.clone(), output::vtk(&disc, &sol)));
    }
    Ok(out)
}

fn converge(config: &RunConfig) -> Result<Outcome, CliError> {
    let (levels, base_n) = match config.mesh {
        MeshSource::UnitSquare(n) => ((0..config.levels).map(|l| Mesh::unit_square(n << l)).collect(), Some(n)),
        MeshSource::File(_) => (refinement_levels(load(config)?, config.levels), None),
    };
    let base = model(config, config.thickness[0])?;
    let records = convergence_study(&levels, &config.thickness, &base, config.bc, config.multiplier, config.solver)?;
    let csv = csv_text(output::study_csv(&records, base_n))?;
    let mut out = Outcome { passed: true, ..Default::default() };
    match &config.csv {
        Some(path) => out.files.push((path.clone(), csv)),
        None => out.stdout = csv,
    }
    if let Some(path) = &config.json {
        out.files.push((path.clone(), to_json(&json!({ "config": config, "records": records }))));
    }
    Ok(out)
}

fn lock(config: &RunConfig) -> Result<Outcome, CliError> {
    let mode = if config.naive { LockingMode::NaiveConforming } else { LockingMode::Mixed(config.multiplier) };
    let base = model(config, config.thickness[0])?;
    let rows = locking_sweep(&load(config)?, &config.thickness, &base, config.bc, mode)?;
    let csv = csv_text(output::locking_csv(&rows))?;
    let mut out = Outcome { passed: true, ..Default::default() };
    match &config.csv {
        Some(path) => out.files.push((path.clone(), csv)),
        None => out.stdout = csv,
    }
    if let Some(path) = &config.json {
        out.files.push((path.clone(), to_json(&json!({ "config": config, "records": rows }))));
    }
    Ok(out)
}

fn verdict(name: &'static str, pass: bool, value: f64, detail: String) -> Verdict {
    Verdict { name, status: if pass { "pass" } else { "fail" }, value: Some(value), detail }
}

fn skipped(name: &'static str, detail: &str) -> Verdict {
    Verdict { name, status: "skipped", value: None, detail: detail.into() }
}

fn check(config: &RunConfig) -> Result<Outcome, CliError> {
    let mesh = load(config)?;
    let disc = Discretization::new(mesh.clone(), config.bc, config.multiplier)?;
    let dual = config.multiplier == MultiplierFamily::Dual;
    let mut verdicts = Vec::new();

    verdicts.push(if dual {
        let d = biorthogonality_defect(&mesh);
        verdict("biorthogonality", d <= 1e-12, d, "max |(xi_i, phi_j) - delta_ij (1, phi_j)|".into())
    } else {
        skipped("biorthogonality", "p1 multiplier has no biorthogonal pairing")
    });

    let d = partition_of_unity_defect(&disc);
    verdicts.push(verdict("partition-of-unity", d <= 1e-12, d, "max |sum of multiplier basis - 1|".into()));

    let system = assemble(&disc, &model(config, config.thickness[0])?)?;
    verdicts.push(if dual {
        let a = solve_saddle(&system)?.stacked();
        let b = solve_condensed(&system)?.stacked();
        let diff: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let rel = sparse::norm(&diff) / sparse::norm(&a).max(f64::MIN_POSITIVE);
        verdict("saddle-equals-condensed", rel <= 1e-8, rel, "relative difference of stacked solutions".into())
    } else {
        skipped("saddle-equals-condensed", "condensation requires the dual multiplier")
    });

    let pair = InfSupPair::Gram(config.multiplier, config.bc);
    verdicts.push(match estimate_infsup(&mesh, pair) {
        Ok(beta) => {
            verdict("inf-sup", beta > 0.0, beta, "smallest singular value of the multiplier/rotation pairing".into())
        }
        Err(PlateError::TooLarge { .. }) => skipped("inf-sup", "mesh too large for the dense estimate"),
        Err(e) => return Err(e.into()),
    });

    verdicts.push(if dual {
        match reduced_eigenvalues(&condense(&system)?, 2000) {
            Ok(ev) => verdict("spd", ev[0] > 0.0, ev[0], "smallest eigenvalue of the reduced operator".into()),
            Err(PlateError::TooLarge { .. }) => skipped("spd", "reduced system too large for a dense eigensolve"),
            Err(e) => return Err(e.into()),
        }
    } else {
        skipped("spd", "condensation requires the dual multiplier")
    });

    let passed = verdicts.iter().all(|v| v.status != "fail");
    let mut stdout = String::new();
    for v in &verdicts {
        let value = v.value.map(|x| format!("{x:.3e}")).unwrap_or_else(|| "-".into());
        stdout.push_str(&format!("{:<24} {:<8} {:>10}  {}\n", v.name, v.status.to_uppercase(), value, v.detail));
    }
    let mut out = Outcome { stdout, files: Vec::new(), passed };
    if let Some(path) = &config.json {
        out.files.push((path.clone(), to_json(&json!({ "config": config, "checks": verdicts, "passed": passed }))));
    }
    Ok(out)
}

fn mesh_info(config: &RunConfig) -> Result<Outcome, CliError> {
    let mesh = load(config)?;
    let (lo, hi) = mesh.bounding_box();
    let dims = Discretization::new(mesh.clone(), config.bc, config.multiplier).map(|d| d.dims());
    let info = json!({
        "vertices": mesh.num_vertices(),
        "interior_vertices": mesh.num_interior_vertices(),
        "triangles": mesh.num_triangles(),
        "edges": mesh.num_edges(),
        "boundary_edges": mesh.num_boundary_edges(),
        "all_boundary_triangles": mesh.all_boundary_triangles().len(),
        "mesh_size": mesh.mesh_size(),
        "min_angle_degrees": mesh.min_angle().to_degrees(),
        "bounding_box": [lo, hi],
        "dofs": dims.as_ref().ok(),
        "space_error": dims.as_ref().err().map(|e| e.to_string()),
    });
    let mut out = Outcome { passed: true, ..Default::default() };
    let text = to_json(&info);
    match &config.json {
        Some(path) => out.files.push((path.clone(), text)),
        None => out.stdout = text,
    }
    Ok(out)
}
