//! Direct solvers for the assembled system.
//!
//! The saddle path factors the full indefinite matrix with sparse LU. The
//! condensed path needs a diagonal rotation/multiplier Gram matrix `D` (dual
//! multiplier) and solves a symmetric positive definite system instead.
//!
//! Eliminating the multiplier through the rotation rows,
//! `ζ = D⁻¹(r − Aφ + Gu)`, leaves a reduced matrix `R` in `(φ, u)` that is not
//! symmetric. It factors as `R = L S` with `S` the SPD Schur complement
//! `K + c⁻¹BᵀM⁻¹B` and `L = [[cMD⁻¹, 0], [ED⁻¹, I]]`, so the congruent operator
//! `L S Lᵀ` is SPD. Because `B Lᵀ = [cM, 0]` it only needs `D⁻¹`:
//!
//! ```text
//! Q = L' K L'ᵀ + diag(M, 0),   L' = [[√c MD⁻¹, 0], [ED⁻¹, I]]
//! ```
//!
//! `Q` is solved for `(s, u)` with `s = √c ζ`; the rotation follows from
//! `φ = D⁻¹(√c M s + Eᵀu)` and the multiplier from the rotation rows.

use std::sync::Once;

use faer::linalg::solvers::Solve;
use faer::{Col, Mat, Side};
use serde::Serialize;

use crate::assembly::BlockSystem;
use crate::error::{PlateError, Result};
use crate::sparse::{self, SparseMatrix};

/// Relative residual every returned solution must meet.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Largest tolerated asymmetry of the condensed operator, relative to its largest entry.
pub const ASYMMETRY_TOLERANCE: f64 = 1e-10;

static SEQUENTIAL: Once = Once::new();

/// Factorizations run single-threaded so results are bit-reproducible.
pub(crate) fn sequential_linear_algebra() {
    SEQUENTIAL.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolvePath {
    Saddle,
    Condensed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveInfo {
    pub path: SolvePath,
    /// Relative residual of the full saddle system.
    pub residual: f64,
    /// Vector rotation, displacement and vector multiplier dimensions.
    pub dims: [usize; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub rotation: Vec<f64>,
    pub displacement: Vec<f64>,
    pub multiplier: Vec<f64>,
    pub info: SolveInfo,
}

impl Solution {
    pub fn stacked(&self) -> Vec<f64> {
        let mut x = self.rotation.clone();
        x.extend_from_slice(&self.displacement);
        x.extend_from_slice(&self.multiplier);
        x
    }
}

fn check_dims(system: &BlockSystem) -> Result<()> {
    let [nr, nw, nm] = system.dims();
    let checks = [
        ("rotation stiffness", nr, system.rotation_stiffness.nrows()),
        ("coupling rows", nr, system.coupling.nrows()),
        ("coupling columns", nw, system.coupling.ncols()),
        ("displacement stiffness", nw, system.stiffness.nrows()),
        ("gram rows", nr, system.gram.nrows()),
        ("gram columns", nm, system.gram.ncols()),
        ("multiplier coupling rows", nw, system.multiplier_coupling.nrows()),
        ("multiplier coupling columns", nm, system.multiplier_coupling.ncols()),
    ];
    for (what, expected, found) in checks {
        if expected != found {
            return Err(PlateError::DimensionMismatch { what: what.into(), expected, found });
        }
    }
    Ok(())
}

fn block_of(system: &BlockSystem, index: usize) -> &'static str {
    let [nr, nw, _] = system.dims();
    if index < nr {
        "rotation"
    } else if index < nr + nw {
        "displacement"
    } else {
        "multiplier"
    }
}

/// Relative residual `‖Kx − b‖ / ‖b‖` of the full system (absolute when `b = 0`).
pub fn saddle_residual(system: &BlockSystem, x: &[f64]) -> f64 {
    residual_of(&system.saddle_matrix(), x, &system.saddle_rhs())
}

fn residual_of(k: &SparseMatrix, x: &[f64], b: &[f64]) -> f64 {
    let kx = sparse::mul_vec(k, x);
    let r: Vec<f64> = kx.iter().zip(b).map(|(a, b)| a - b).collect();
    let bn = sparse::norm(b);
    sparse::norm(&r) / if bn > 0.0 { bn } else { 1.0 }
}

fn split(system: &BlockSystem, x: &[f64], path: SolvePath, residual: f64) -> Solution {
    let [nr, nw, _] = system.dims();
    Solution {
        rotation: x[..nr].to_vec(),
        displacement: x[nr..nr + nw].to_vec(),
        multiplier: x[nr + nw..].to_vec(),
        info: SolveInfo { path, residual, dims: system.dims() },
    }
}

/// Solves the full indefinite system by sparse LU with one refinement step.
pub fn solve_saddle(system: &BlockSystem) -> Result<Solution> {
    sequential_linear_algebra();
    check_dims(system)?;
    let k = system.saddle_matrix();
    let b = system.saddle_rhs();
    let n = b.len();
    if b.iter().all(|&v| v == 0.0) {
        return Ok(split(system, &vec![0.0; n], SolvePath::Saddle, 0.0));
    }
    let lu = k.sp_lu().map_err(|e| match e {
        faer::sparse::linalg::LuError::SymbolicSingular { index } => {
            PlateError::Singular { block: block_of(system, index) }
        }
        faer::sparse::linalg::LuError::Generic(_) => PlateError::Singular { block: "saddle" },
    })?;
    let rhs = Col::from_fn(n, |i| b[i]);
    let mut x: Vec<f64> = lu.solve(&rhs).iter().copied().collect();
    let kx = sparse::mul_vec(&k, &x);
    let r = Col::from_fn(n, |i| b[i] - kx[i]);
    let dx = lu.solve(&r);
    for (xi, d) in x.iter_mut().zip(dx.iter()) {
        *xi += d;
    }
    finish(system, &k, &b, x, SolvePath::Saddle)
}

fn finish(system: &BlockSystem, k: &SparseMatrix, b: &[f64], x: Vec<f64>, path: SolvePath) -> Result<Solution> {
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(PlateError::Singular { block: block_of(system, i) });
    }
    let residual = residual_of(k, &x, b);
    if !(residual <= RESIDUAL_TOLERANCE) {
        return Err(PlateError::InaccurateSolve(residual));
    }
    Ok(split(system, &x, path, residual))
}

/// Condensed operator and everything needed to map its solution back.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    /// Symmetrized SPD operator in `(s, u)`.
    pub operator: SparseMatrix,
    pub rhs: Vec<f64>,
    /// The directly eliminated system in `(φ, u)`, kept for diagnostics.
    pub natural: SparseMatrix,
    pub natural_rhs: Vec<f64>,
    /// Largest entry of `Q − Qᵀ` relative to the largest entry of `Q`, before averaging.
    pub asymmetry: f64,
    /// `√c`.
    pub scale: f64,
    /// Diagonal of the rotation/multiplier Gram matrix.
    pub gram_diagonal: Vec<f64>,
}

impl ReducedSystem {
    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    /// The factor `L'`; `operator = diag(1/√c, I) · natural · L'ᵀ` up to roundoff.
    pub fn congruence(&self, system: &BlockSystem) -> SparseMatrix {
        let [nr, nw, _] = system.dims();
        let dinv: Vec<f64> = self.gram_diagonal.iter().map(|d| 1.0 / d).collect();
        let p = sparse::scale(self.scale, &sparse::scale_cols(&system.multiplier_mass, &dinv));
        let f = sparse::scale_cols(&system.multiplier_coupling, &dinv);
        let eye = identity(nw);
        sparse::stack(nr + nw, nr + nw, &[(0, 0, 1.0, &p), (nr, 0, 1.0, &f), (nr, nr, 1.0, &eye)])
    }
}

fn identity(n: usize) -> SparseMatrix {
    let t: Vec<sparse::Entry> = (0..n).map(|i| faer::sparse::Triplet::new(i, i, 1.0)).collect();
    sparse::from_triplets(n, n, &t)
}

/// Diagonal of `D`, or the reason it cannot be inverted.
pub fn gram_diagonal(system: &BlockSystem) -> Result<Vec<f64>> {
    let d = &system.gram;
    if d.nrows() != d.ncols() {
        return Err(PlateError::DimensionMismatch {
            what: "gram matrix".into(),
            expected: d.nrows(),
            found: d.ncols(),
        });
    }
    let diag = sparse::diagonal(d);
    let scale = diag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if sparse::max_off_diagonal(d) > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(PlateError::NonDiagonalGram);
    }
    if let Some(i) = diag.iter().position(|v| v.abs() <= 1e-14 * scale) {
        return Err(PlateError::ZeroDiagonal(i));
    }
    Ok(diag)
}

/// Eliminates the multiplier; requires a diagonal Gram matrix.
pub fn condense(system: &BlockSystem) -> Result<ReducedSystem> {
    check_dims(system)?;
    let d = gram_diagonal(system)?;
    let [nr, nw, _] = system.dims();
    let c = system.penalty;
    let kappa = c.sqrt();
    let dinv: Vec<f64> = d.iter().map(|v| 1.0 / v).collect();
    let a = &system.rotation_stiffness;
    let g = &system.coupling;
    let h = &system.stiffness;
    let m = &system.multiplier_mass;
    let e = &system.multiplier_coupling;
    let gt = sparse::transpose(g);
    let et = sparse::transpose(e);
    let r = &system.rotation_load;
    let f = &system.displacement_load;

    // MD⁻¹, ED⁻¹
    let m_dinv = sparse::scale_cols(m, &dinv);
    let e_dinv = sparse::scale_cols(e, &dinv);
    let dinv_et = sparse::scale_rows(&dinv, &et);

    // natural system: rows (multiplier tests, displacement tests), columns (φ, u)
    let n11 = sparse::combine(1.0, &sparse::transpose(&system.gram), c, &sparse::product(&m_dinv, a));
    let n12 = sparse::combine(-1.0, &et, -c, &sparse::product(&m_dinv, g));
    let n21 = sparse::combine(1.0, &sparse::product(&e_dinv, a), -1.0, &gt);
    let n22 = sparse::combine(1.0, h, -1.0, &sparse::product(&e_dinv, g));
    let natural = sparse::stack(
        nr + nw,
        nr + nw,
        &[(0, 0, 1.0, &n11), (0, nr, 1.0, &n12), (nr, 0, 1.0, &n21), (nr, nr, 1.0, &n22)],
    );
    let dr: Vec<f64> = r.iter().zip(&dinv).map(|(a, b)| a * b).collect();
    let mut natural_rhs: Vec<f64> = sparse::mul_vec(m, &dr).iter().map(|v| c * v).collect();
    natural_rhs.extend(sparse::mul_vec(e, &dr).iter().zip(f).map(|(a, b)| a + b));

    // SPD congruence
    let q11 = sparse::combine(1.0, m, c, &sparse::product(&m_dinv, &sparse::product(a, &sparse::transpose(&m_dinv))));
    let a_dinv_et = sparse::product(a, &dinv_et);
    let q12 = sparse::scale(kappa, &sparse::product(&m_dinv, &sparse::combine(1.0, &a_dinv_et, -1.0, g)));
    let q21 = sparse::scale(
        kappa,
        &sparse::product(&sparse::combine(1.0, &sparse::product(&e_dinv, a), -1.0, &gt), &sparse::scale_rows(&dinv, m)),
    );
    let e_dinv_g = sparse::product(&e_dinv, g);
    let q22 = sparse::combine(
        1.0,
        &sparse::combine(1.0, h, 1.0, &sparse::product(&e_dinv, &a_dinv_et)),
        -1.0,
        &sparse::combine(1.0, &e_dinv_g, 1.0, &sparse::transpose(&e_dinv_g)),
    );
    let q = sparse::stack(
        nr + nw,
        nr + nw,
        &[(0, 0, 1.0, &q11), (0, nr, 1.0, &q12), (nr, 0, 1.0, &q21), (nr, nr, 1.0, &q22)],
    );
    let qmax = sparse::max_abs(&q);
    let asymmetry = if qmax > 0.0 { sparse::asymmetry(&q) / qmax } else { 0.0 };
    if asymmetry > ASYMMETRY_TOLERANCE {
        return Err(PlateError::Asymmetric(asymmetry));
    }
    let operator = sparse::combine(0.5, &q, 0.5, &sparse::transpose(&q));

    let mut rhs: Vec<f64> = sparse::mul_vec(m, &dr).iter().map(|v| kappa * v).collect();
    rhs.extend(sparse::mul_vec(e, &dr).iter().zip(f).map(|(a, b)| a + b));

    Ok(ReducedSystem { operator, rhs, natural, natural_rhs, asymmetry, scale: kappa, gram_diagonal: d })
}

/// Solves the condensed SPD system by sparse Cholesky.
pub fn solve_condensed(system: &BlockSystem) -> Result<Solution> {
    sequential_linear_algebra();
    let reduced = condense(system)?;
    let [nr, nw, _] = system.dims();
    let n = nr + nw + system.dims()[2];
    if reduced.rhs.iter().all(|&v| v == 0.0) {
        return Ok(split(system, &vec![0.0; n], SolvePath::Condensed, 0.0));
    }
    let llt = reduced.operator.sp_cholesky(Side::Lower).map_err(|_| PlateError::NotPositiveDefinite)?;
    let rhs = Col::from_fn(reduced.dim(), |i| reduced.rhs[i]);
    let z: Vec<f64> = llt.solve(&rhs).iter().copied().collect();
    let (s, u) = z.split_at(nr);

    let mut phi: Vec<f64> = sparse::mul_vec(&system.multiplier_mass, s).iter().map(|v| reduced.scale * v).collect();
    for (p, v) in phi.iter_mut().zip(sparse::mul_transpose_vec(&system.multiplier_coupling, u)) {
        *p += v;
    }
    for (p, d) in phi.iter_mut().zip(&reduced.gram_diagonal) {
        *p /= d;
    }
    let zeta = shear_from_rotation_rows(system, &reduced.gram_diagonal, &phi, u);
    let mut x = phi;
    x.extend_from_slice(u);
    x.extend(zeta);
    let k = system.saddle_matrix();
    finish(system, &k, &system.saddle_rhs(), x, SolvePath::Condensed)
}

fn shear_from_rotation_rows(system: &BlockSystem, gram: &[f64], rotation: &[f64], displacement: &[f64]) -> Vec<f64> {
    let ap = sparse::mul_vec(&system.rotation_stiffness, rotation);
    let gu = sparse::mul_vec(&system.coupling, displacement);
    (0..gram.len()).map(|i| (system.rotation_load[i] - ap[i] + gu[i]) / gram[i]).collect()
}

/// Multiplier recovered from the rotation equations, `D⁻¹(r − Aφ + Gu)`.
///
/// Falls back to the solved multiplier when the Gram matrix is not diagonal.
pub fn recover_shear(solution: &Solution, system: &BlockSystem) -> Result<Vec<f64>> {
    match gram_diagonal(system) {
        Ok(d) => Ok(shear_from_rotation_rows(system, &d, &solution.rotation, &solution.displacement)),
        Err(PlateError::NonDiagonalGram) => Ok(solution.multiplier.clone()),
        Err(e) => Err(e),
    }
}

/// Eigenvalues of the symmetrized condensed operator, ascending. Dense; small systems only.
pub fn reduced_eigenvalues(reduced: &ReducedSystem, limit: usize) -> Result<Vec<f64>> {
    sequential_linear_algebra();
    let n = reduced.dim();
    if n > limit {
        return Err(PlateError::TooLarge { unknowns: n, limit });
    }
    let dense: Mat<f64> = sparse::to_dense(&reduced.operator);
    let ev = dense.self_adjoint_eigenvalues(Side::Lower).map_err(|_| PlateError::NotPositiveDefinite)?;
    Ok(ev)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    Saddle,
    Condensed,
    /// Condensed when the Gram matrix is diagonal, saddle otherwise.
    #[default]
    Auto,
}

pub fn solve(system: &BlockSystem, choice: SolverChoice) -> Result<Solution> {
    match choice {
        SolverChoice::Saddle => solve_saddle(system),
        SolverChoice::Condensed => solve_condensed(system),
        SolverChoice::Auto => match gram_diagonal(system) {
            Ok(_) => solve_condensed(system),
            Err(PlateError::NonDiagonalGram) => solve_saddle(system),
            Err(e) => Err(e),
        },
    }
}
