//! Result files. Everything is rendered to memory first and only written once
//! the whole run has succeeded, each file through a temporary sibling and a rename.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rmplate::fields::{centroid_displacements, centroid_shear, vertex_rotations};
use rmplate::verify::{LockingRow, StudyRecord};
use rmplate::{Discretization, Solution};
use serde::Serialize;

#[derive(Debug, Serialize)]
struct StudyRow {
    level: usize,
    n: Option<usize>,
    h: f64,
    t: f64,
    err_rot_h1: f64,
    err_disp_broken_h1: f64,
    err_disp_l2: f64,
    err_shear_tl2: f64,
    rate_rot: Option<f64>,
    rate_disp: Option<f64>,
}

/// One row per (level, thickness). `n` is the subdivision count for built-in meshes.
pub fn study_csv(records: &[StudyRecord], base_n: Option<usize>) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(StudyRow {
            level: r.level,
            n: base_n.map(|n| n << r.level),
            h: r.errors.h,
            t: r.t,
            err_rot_h1: r.errors.rotation_h1,
            err_disp_broken_h1: r.errors.displacement_broken_h1,
            err_disp_l2: r.errors.displacement_l2,
            err_shear_tl2: r.errors.shear_scaled_l2,
            rate_rot: r.rate_rotation,
            rate_disp: r.rate_displacement,
        })?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
}

pub fn locking_csv(rows: &[LockingRow]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
}

/// Legacy ASCII VTK: rotations at vertices, displacement and shear at triangle centroids.
pub fn vtk(disc: &Discretization, solution: &Solution) -> String {
    let mesh = &disc.mesh;
    let mut s = String::new();
    writeln!(s, "# vtk DataFile Version 3.0").unwrap();
    writeln!(s, "rmplate solution").unwrap();
    writeln!(s, "ASCII").unwrap();
    writeln!(s, "DATASET UNSTRUCTURED_GRID").unwrap();
    writeln!(s, "POINTS {} double", mesh.num_vertices()).unwrap();
    for p in mesh.vertices() {
        writeln!(s, "{} {} 0", p[0], p[1]).unwrap();
    }
    let nt = mesh.num_triangles();
    writeln!(s, "CELLS {nt} {}", 4 * nt).unwrap();
    for [a, b, c] in mesh.triangles() {
        writeln!(s, "3 {a} {b} {c}").unwrap();
    }
    writeln!(s, "CELL_TYPES {nt}").unwrap();
    for _ in 0..nt {
        writeln!(s, "5").unwrap();
    }
    writeln!(s, "POINT_DATA {}", mesh.num_vertices()).unwrap();
    writeln!(s, "VECTORS rotation double").unwrap();
    for r in vertex_rotations(disc, solution) {
        writeln!(s, "{} {} 0", r[0], r[1]).unwrap();
    }
    writeln!(s, "CELL_DATA {nt}").unwrap();
    writeln!(s, "SCALARS displacement double 1").unwrap();
    writeln!(s, "LOOKUP_TABLE default").unwrap();
    for u in centroid_displacements(disc, solution) {
        writeln!(s, "{u}").unwrap();
    }
    writeln!(s, "VECTORS shear double").unwrap();
    for z in centroid_shear(disc, solution) {
        writeln!(s, "{} {} 0", z[0], z[1]).unwrap();
    }
    s
}

fn temp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".partial");
    path.with_file_name(name)
}

/// Writes all files or none: temporaries first, renamed only after every write succeeded.
pub fn write_all(files: &[(PathBuf, String)]) -> std::io::Result<()> {
    let mut written = Vec::new();
    for (path, contents) in files {
        let tmp = temp_sibling(path);
        if let Err(e) = fs::write(&tmp, contents) {
            let _ = fs::remove_file(&tmp);
            for t in &written {
                let _ = fs::remove_file(t);
            }
            return Err(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())));
        }
        written.push(tmp);
    }
    for ((path, _), tmp) in files.iter().zip(&written) {
        fs::rename(tmp, path)?;
    }
    Ok(())
}
