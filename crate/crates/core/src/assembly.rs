//! Element integrals and global assembly of the plate saddle-point system.
//!
//! Unknowns are ordered (rotation, displacement, multiplier). The assembled
//! system is
//!
//! ```text
//! [ A   -G   D  ] [φ]   [r]
//! [-Gᵀ   H  -E  ] [u] = [f]
//! [ Dᵀ  -Eᵀ -cM ] [ζ]   [0]
//! ```
//!
//! with `A` the bending stiffness plus shear mass and `c` the thickness penalty.

use std::fmt;
use std::sync::Arc;

use faer::sparse::Triplet;
use rayon::prelude::*;

use crate::error::{PlateError, Result};
use crate::mesh::Mesh;
use crate::quadrature::QuadratureRule;
use crate::spaces::{Discretization, DofMap, ReferenceBasis};
use crate::sparse::{self, Entry, SparseMatrix};

pub type ScalarField = Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>;
pub type VectorField = Arc<dyn Fn([f64; 2]) -> [f64; 2] + Send + Sync>;

pub const SHEAR_CORRECTION: f64 = 5.0 / 6.0;

/// Material, thickness and loads.
#[derive(Clone)]
pub struct PlateModel {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub thickness: f64,
    pub shear_correction: f64,
    pub transverse_load: ScalarField,
    /// Distributed moment acting on the rotations.
    pub moment_load: Option<VectorField>,
    /// Moment traction on the boundary; only felt by unconstrained boundary rotations.
    pub boundary_moment: Option<VectorField>,
    /// Rule used for the load integrals. Matrices are always integrated exactly.
    pub load_quadrature: QuadratureRule,
}

impl fmt::Debug for PlateModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlateModel")
            .field("youngs_modulus", &self.youngs_modulus)
            .field("poisson_ratio", &self.poisson_ratio)
            .field("thickness", &self.thickness)
            .field("shear_correction", &self.shear_correction)
            .field("moment_load", &self.moment_load.is_some())
            .field("boundary_moment", &self.boundary_moment.is_some())
            .field("load_quadrature", &self.load_quadrature)
            .finish()
    }
}

impl PlateModel {
    /// Uniform unit load, no moments.
    pub fn new(youngs_modulus: f64, poisson_ratio: f64, thickness: f64) -> Result<Self> {
        if !(youngs_modulus > 0.0 && youngs_modulus.is_finite()) {
            return Err(PlateError::InvalidInput(format!("Young's modulus must be positive, got {youngs_modulus}")));
        }
        if !(0.0..0.5).contains(&poisson_ratio) {
            return Err(PlateError::InvalidInput(format!("Poisson ratio must lie in [0, 0.5), got {poisson_ratio}")));
        }
        if !(thickness > 0.0 && thickness < 1.0) {
            return Err(PlateError::InvalidInput(format!("thickness must lie in (0, 1), got {thickness}")));
        }
        Ok(Self {
            youngs_modulus,
            poisson_ratio,
            thickness,
            shear_correction: SHEAR_CORRECTION,
            transverse_load: Arc::new(|_| 1.0),
            moment_load: None,
            boundary_moment: None,
            load_quadrature: QuadratureRule::EdgeMidpoint,
        })
    }

    pub fn with_load(mut self, g: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static) -> Self {
        self.transverse_load = Arc::new(g);
        self
    }

    pub fn with_moment(mut self, m: impl Fn([f64; 2]) -> [f64; 2] + Send + Sync + 'static) -> Self {
        self.moment_load = Some(Arc::new(m));
        self
    }

    pub fn with_boundary_moment(mut self, m: impl Fn([f64; 2]) -> [f64; 2] + Send + Sync + 'static) -> Self {
        self.boundary_moment = Some(Arc::new(m));
        self
    }

    pub fn with_thickness(mut self, thickness: f64) -> Self {
        self.thickness = thickness;
        self
    }

    /// Shear modulus with shear correction, `Eκ / (2(1+ν))`.
    pub fn shear_modulus(&self) -> f64 {
        self.youngs_modulus * self.shear_correction / (2.0 * (1.0 + self.poisson_ratio))
    }

    /// Weight of the multiplier mass, `t² / (λ(1−t²))`.
    pub fn penalty(&self) -> f64 {
        let t2 = self.thickness * self.thickness;
        t2 / (self.shear_modulus() * (1.0 - t2))
    }
}

/// Isotropic bending tensor applied to a symmetric strain.
pub fn bending_tensor_apply(eps: [[f64; 2]; 2], youngs_modulus: f64, poisson_ratio: f64) -> [[f64; 2]; 2] {
    let k = youngs_modulus / (12.0 * (1.0 - poisson_ratio * poisson_ratio));
    let tr = eps[0][0] + eps[1][1];
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { 1.0 } else { 0.0 };
            out[i][j] = k * ((1.0 - poisson_ratio) * eps[i][j] + poisson_ratio * tr * id);
        }
    }
    out
}

/// Element contributions. Vector rotation and multiplier indices are `2 * a + c`;
/// blocks that act componentwise are stored once as scalar 3×3 matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalBlocks {
    pub bending: [[f64; 6]; 6],
    /// `λ ∫ λ_a λ_b`, per component.
    pub shear_mass: [[f64; 3]; 3],
    /// `λ ∫ ∂_c ψ_k λ_a` at row `2a+c`, column `k`.
    pub coupling: [[f64; 3]; 6],
    /// `λ ∫ ∇ψ_k · ∇ψ_l`.
    pub stiffness: [[f64; 3]; 3],
    /// `∫ λ_a μ_m`, per component.
    pub gram: [[f64; 3]; 3],
    /// `∫ ∂_c ψ_k μ_m` at row `2m+c`, column `k`.
    pub multiplier_coupling: [[f64; 3]; 6],
    /// `∫ μ_m μ_n`, per component.
    pub multiplier_mass: [[f64; 3]; 3],
}

fn strain_of(grad: [f64; 2], c: usize) -> [[f64; 2]; 2] {
    let mut e = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let di = if i == c { grad[j] } else { 0.0 };
            let dj = if j == c { grad[i] } else { 0.0 };
            e[i][j] = 0.5 * (di + dj);
        }
    }
    e
}

pub fn element_matrices(
    mesh: &Mesh,
    t: usize,
    model: &PlateModel,
    multiplier: ReferenceBasis,
    rule: QuadratureRule,
) -> Result<LocalBlocks> {
    let area = mesh.area(t);
    if !(area > 0.0) {
        return Err(PlateError::DegenerateTriangle(t));
    }
    let lam = model.shear_modulus();
    let grads = mesh.barycentric_gradients(t);
    let cr_grads = grads.map(|g| [-2.0 * g[0], -2.0 * g[1]]);

    let mut b = LocalBlocks {
        bending: [[0.0; 6]; 6],
        shear_mass: [[0.0; 3]; 3],
        coupling: [[0.0; 3]; 6],
        stiffness: [[0.0; 3]; 3],
        gram: [[0.0; 3]; 3],
        multiplier_coupling: [[0.0; 3]; 6],
        multiplier_mass: [[0.0; 3]; 3],
    };

    for a in 0..3 {
        for c in 0..2 {
            let ea = strain_of(grads[a], c);
            for bb in 0..3 {
                for d in 0..2 {
                    let ce = bending_tensor_apply(strain_of(grads[bb], d), model.youngs_modulus, model.poisson_ratio);
                    let mut s = 0.0;
                    for i in 0..2 {
                        for j in 0..2 {
                            s += ce[i][j] * ea[i][j];
                        }
                    }
                    b.bending[2 * a + c][2 * bb + d] = area * s;
                }
            }
        }
    }
    for k in 0..3 {
        for l in 0..3 {
            b.stiffness[k][l] = lam * area * (cr_grads[k][0] * cr_grads[l][0] + cr_grads[k][1] * cr_grads[l][1]);
        }
    }

    let mut int_lin = [0.0; 3];
    let mut int_mult = [0.0; 3];
    for &(l, w) in rule.points() {
        let wa = w * area;
        let mu = multiplier.values_bary(l);
        for a in 0..3 {
            int_lin[a] += wa * l[a];
            int_mult[a] += wa * mu[a];
            for bb in 0..3 {
                b.shear_mass[a][bb] += wa * lam * l[a] * l[bb];
                b.gram[a][bb] += wa * l[a] * mu[bb];
                b.multiplier_mass[a][bb] += wa * mu[a] * mu[bb];
            }
        }
    }
    for a in 0..3 {
        for c in 0..2 {
            for k in 0..3 {
                b.coupling[2 * a + c][k] = lam * cr_grads[k][c] * int_lin[a];
                b.multiplier_coupling[2 * a + c][k] = cr_grads[k][c] * int_mult[a];
            }
        }
    }
    Ok(b)
}

/// Global blocks of the discrete system.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub bending: SparseMatrix,
    pub shear_mass: SparseMatrix,
    /// Bending plus shear mass.
    pub rotation_stiffness: SparseMatrix,
    /// Rotation × displacement.
    pub coupling: SparseMatrix,
    pub stiffness: SparseMatrix,
    /// Rotation × multiplier.
    pub gram: SparseMatrix,
    /// Displacement × multiplier.
    pub multiplier_coupling: SparseMatrix,
    pub multiplier_mass: SparseMatrix,
    pub rotation_load: Vec<f64>,
    pub displacement_load: Vec<f64>,
    pub penalty: f64,
}

impl BlockSystem {
    /// Vector rotation, displacement and vector multiplier dimensions.
    pub fn dims(&self) -> [usize; 3] {
        [self.rotation_load.len(), self.displacement_load.len(), self.multiplier_mass.nrows()]
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    pub fn saddle_matrix(&self) -> SparseMatrix {
        let [nr, nw, nm] = self.dims();
        let n = nr + nw + nm;
        let gt = sparse::transpose(&self.coupling);
        let dt = sparse::transpose(&self.gram);
        let et = sparse::transpose(&self.multiplier_coupling);
        sparse::stack(
            n,
            n,
            &[
                (0, 0, 1.0, &self.rotation_stiffness),
                (0, nr, -1.0, &self.coupling),
                (0, nr + nw, 1.0, &self.gram),
                (nr, 0, -1.0, &gt),
                (nr, nr, 1.0, &self.stiffness),
                (nr, nr + nw, -1.0, &self.multiplier_coupling),
                (nr + nw, 0, 1.0, &dt),
                (nr + nw, nr, -1.0, &et),
                (nr + nw, nr + nw, -self.penalty, &self.multiplier_mass),
            ],
        )
    }

    pub fn saddle_rhs(&self) -> Vec<f64> {
        let mut b = self.rotation_load.clone();
        b.extend_from_slice(&self.displacement_load);
        b.resize(self.total_dim(), 0.0);
        b
    }
}

fn scatter_scalar(out: &mut Vec<Entry>, rows: &DofMap, cols: &DofMap, t: usize, local: &[[f64; 3]; 3], vector: bool) {
    for a in 0..3 {
        for &(i, wi) in rows.local(t, a) {
            for bb in 0..3 {
                for &(j, wj) in cols.local(t, bb) {
                    let v = wi * wj * local[a][bb];
                    if vector {
                        out.push(Triplet::new(2 * i, 2 * j, v));
                        out.push(Triplet::new(2 * i + 1, 2 * j + 1, v));
                    } else {
                        out.push(Triplet::new(i, j, v));
                    }
                }
            }
        }
    }
}

/// Scatters a block whose rows are vector-valued and columns scalar (or the transpose).
fn scatter_mixed(
    out: &mut Vec<Entry>,
    vec_map: &DofMap,
    scal_map: &DofMap,
    t: usize,
    local: &[[f64; 3]; 6],
    transposed: bool,
) {
    for a in 0..3 {
        for &(i, wi) in vec_map.local(t, a) {
            for c in 0..2 {
                for k in 0..3 {
                    for &(j, wj) in scal_map.local(t, k) {
                        let v = wi * wj * local[2 * a + c][k];
                        out.push(if transposed {
                            Triplet::new(j, 2 * i + c, v)
                        } else {
                            Triplet::new(2 * i + c, j, v)
                        });
                    }
                }
            }
        }
    }
}

pub fn assemble(disc: &Discretization, model: &PlateModel) -> Result<BlockSystem> {
    assemble_with_rule(disc, model, QuadratureRule::EdgeMidpoint)
}

/// Assembly with an explicit rule for the matrix integrals; every rule of
/// degree ≥ 2 gives the same matrices up to roundoff.
pub fn assemble_with_rule(disc: &Discretization, model: &PlateModel, rule: QuadratureRule) -> Result<BlockSystem> {
    let mesh = &disc.mesh;
    let (rot, disp, mult) = (&disc.rotation, &disc.displacement, &disc.multiplier);
    check_map(mesh, rot, "rotation")?;
    check_map(mesh, disp, "displacement")?;
    check_map(mesh, mult, "multiplier")?;
    if rot.dim() != mult.dim() {
        return Err(PlateError::DimensionMismatch {
            what: "multiplier space".into(),
            expected: rot.vector_dim(),
            found: mult.vector_dim(),
        });
    }
    let basis = mult.basis();
    let locals: Vec<LocalBlocks> = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| element_matrices(mesh, t, model, basis, rule))
        .collect::<Result<_>>()?;

    let (nr, nw, nm) = (rot.vector_dim(), disp.dim(), mult.vector_dim());
    let mut bending = Vec::new();
    let mut shear_mass = Vec::new();
    let mut coupling = Vec::new();
    let mut stiffness = Vec::new();
    let mut gram = Vec::new();
    let mut mcoupling = Vec::new();
    let mut mmass = Vec::new();
    for (t, lb) in locals.iter().enumerate() {
        for a in 0..3 {
            for &(i, wi) in rot.local(t, a) {
                for bb in 0..3 {
                    for &(j, wj) in rot.local(t, bb) {
                        for c in 0..2 {
                            for d in 0..2 {
                                bending.push(Triplet::new(
                                    2 * i + c,
                                    2 * j + d,
                                    wi * wj * lb.bending[2 * a + c][2 * bb + d],
                                ));
                            }
                        }
                    }
                }
            }
        }
        scatter_scalar(&mut shear_mass, rot, rot, t, &lb.shear_mass, true);
        scatter_mixed(&mut coupling, rot, disp, t, &lb.coupling, false);
        scatter_scalar(&mut stiffness, disp, disp, t, &lb.stiffness, false);
        scatter_scalar(&mut gram, rot, mult, t, &lb.gram, true);
        scatter_mixed(&mut mcoupling, mult, disp, t, &lb.multiplier_coupling, true);
        scatter_scalar(&mut mmass, mult, mult, t, &lb.multiplier_mass, true);
    }
    let bending = sparse::from_triplets(nr, nr, &bending);
    let shear_mass = sparse::from_triplets(nr, nr, &shear_mass);
    let rotation_stiffness = sparse::combine(1.0, &bending, 1.0, &shear_mass);

    let mut rotation_load = moment_vector(mesh, rot, model);
    if let Some(bm) = &model.boundary_moment {
        for (r, v) in rotation_load.iter_mut().zip(boundary_moment_vector(mesh, rot, bm.as_ref())) {
            *r += v;
        }
    }
    Ok(BlockSystem {
        bending,
        shear_mass,
        rotation_stiffness,
        coupling: sparse::from_triplets(nr, nw, &coupling),
        stiffness: sparse::from_triplets(nw, nw, &stiffness),
        gram: sparse::from_triplets(nr, nm, &gram),
        multiplier_coupling: sparse::from_triplets(nw, nm, &mcoupling),
        multiplier_mass: sparse::from_triplets(nm, nm, &mmass),
        rotation_load,
        displacement_load: load_vector(mesh, disp, model),
        penalty: model.penalty(),
    })
}

fn check_map(mesh: &Mesh, map: &DofMap, what: &str) -> Result<()> {
    let ok = (0..mesh.num_triangles()).all(|t| {
        let cell = mesh.triangles()[t];
        let edges = mesh.triangle_edges()[t];
        map.cell(t) == if map.kind().on_edges() { edges } else { cell }
    });
    if ok {
        Ok(())
    } else {
        Err(PlateError::DimensionMismatch { what: format!("{what} dof map"), expected: mesh.num_triangles(), found: 0 })
    }
}

/// `∫ g v` for every basis function of a scalar space.
pub fn load_vector(mesh: &Mesh, map: &DofMap, model: &PlateModel) -> Vec<f64> {
    scalar_load(mesh, map, model.transverse_load.as_ref(), model.load_quadrature)
}

pub fn scalar_load(
    mesh: &Mesh,
    map: &DofMap,
    g: &(dyn Fn([f64; 2]) -> f64 + Send + Sync),
    rule: QuadratureRule,
) -> Vec<f64> {
    let basis = map.basis();
    let mut out = vec![0.0; map.dim()];
    for t in 0..mesh.num_triangles() {
        let area = mesh.area(t);
        let mut local = [0.0; 3];
        for &(l, w) in rule.points() {
            let gv = g(mesh.point_at(t, l));
            for (k, phi) in basis.values_bary(l).iter().enumerate() {
                local[k] += w * area * gv * phi;
            }
        }
        for k in 0..3 {
            for &(i, wi) in map.local(t, k) {
                out[i] += wi * local[k];
            }
        }
    }
    out
}

/// `∫ m · ψ` over the vector rotation space; zero without a moment load.
pub fn moment_vector(mesh: &Mesh, map: &DofMap, model: &PlateModel) -> Vec<f64> {
    let mut out = vec![0.0; map.vector_dim()];
    let Some(m) = &model.moment_load else { return out };
    let basis = map.basis();
    for t in 0..mesh.num_triangles() {
        let area = mesh.area(t);
        let mut local = [[0.0; 2]; 3];
        for &(l, w) in model.load_quadrature.points() {
            let mv = m(mesh.point_at(t, l));
            for (k, phi) in basis.values_bary(l).iter().enumerate() {
                for c in 0..2 {
                    local[k][c] += w * area * mv[c] * phi;
                }
            }
        }
        for k in 0..3 {
            for &(i, wi) in map.local(t, k) {
                for c in 0..2 {
                    out[2 * i + c] += wi * local[k][c];
                }
            }
        }
    }
    out
}

// Gauss–Legendre on [0, 1], exact for degree 7.
const EDGE_GAUSS: [(f64, f64); 4] = [
    (0.069_431_844_202_973_71, 0.173_927_422_568_726_93),
    (0.330_009_478_207_571_87, 0.326_072_577_431_273_07),
    (0.669_990_521_792_428_1, 0.326_072_577_431_273_07),
    (0.930_568_155_797_026_3, 0.173_927_422_568_726_93),
];

/// `∫_∂Ω τ · ψ ds` over the vector rotation space.
pub fn boundary_moment_vector(
    mesh: &Mesh,
    map: &DofMap,
    traction: &(dyn Fn([f64; 2]) -> [f64; 2] + Send + Sync),
) -> Vec<f64> {
    let mut out = vec![0.0; map.vector_dim()];
    for e in mesh.edges().iter().filter(|e| e.boundary) {
        let [a, b] = e.vertices;
        let (pa, pb) = (mesh.vertices()[a], mesh.vertices()[b]);
        let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
        for &(s, w) in &EDGE_GAUSS {
            let tau = traction([pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])]);
            for (v, phi) in [(a, 1.0 - s), (b, s)] {
                for &(i, wi) in map.expansion(v) {
                    for c in 0..2 {
                        out[2 * i + c] += wi * w * len * tau[c] * phi;
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{build_dof_map, BoundaryCondition, MultiplierFamily, SpaceKind};
    use crate::sparse::{mul_vec, to_dense};
    use approx::assert_abs_diff_eq;

    fn unit_model() -> PlateModel {
        PlateModel::new(1.0, 0.3, 0.1).unwrap()
    }

    #[test]
    fn bending_tensor_examples() {
        assert_eq!(bending_tensor_apply([[0.0; 2]; 2], 3.0, 0.2), [[0.0; 2]; 2]);
        assert_eq!(bending_tensor_apply([[1.0, 0.0], [0.0, 1.0]], 12.0, 0.0), [[1.0, 0.0], [0.0, 1.0]]);
        let c = bending_tensor_apply([[1.0, 0.0], [0.0, 0.0]], 12.0 * (1.0 - 0.09), 0.3);
        assert_abs_diff_eq!(c[0][0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c[1][1], 0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(c[0][1], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn model_constants() {
        let m = unit_model();
        assert_abs_diff_eq!(m.shear_modulus(), (5.0 / 6.0) / 2.6, epsilon = 1e-15);
        assert_abs_diff_eq!(m.penalty(), 0.01 / (m.shear_modulus() * 0.99), epsilon = 1e-15);
        assert!(PlateModel::new(1.0, 0.5, 0.1).is_err());
        assert!(PlateModel::new(1.0, 0.3, 1.0).is_err());
        assert!(PlateModel::new(0.0, 0.3, 0.1).is_err());
    }

    fn reference_triangle() -> Mesh {
        Mesh::new(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![[0, 1, 2]]).unwrap()
    }

    #[test]
    fn reference_element_values() {
        let mesh = reference_triangle();
        let mut model = unit_model();
        model.youngs_modulus = 2.0 * (1.0 + 0.3) / (5.0 / 6.0); // λ = 1
        let lb = element_matrices(&mesh, 0, &model, ReferenceBasis::Dual, QuadratureRule::EdgeMidpoint).unwrap();
        assert_abs_diff_eq!(lb.stiffness[0][0], 4.0, epsilon = 1e-14);
        for a in 0..3 {
            for m in 0..3 {
                assert_abs_diff_eq!(lb.gram[a][m], if a == m { 0.5 / 3.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn rigid_rotation_has_no_bending_energy() {
        let mesh = Mesh::unit_square(3);
        for t in 0..mesh.num_triangles() {
            let lb =
                element_matrices(&mesh, t, &unit_model(), ReferenceBasis::Dual, QuadratureRule::EdgeMidpoint).unwrap();
            let mut phi = [0.0; 6];
            for (a, &v) in mesh.triangles()[t].iter().enumerate() {
                let p = mesh.vertices()[v];
                phi[2 * a] = -p[1];
                phi[2 * a + 1] = p[0];
            }
            for i in 0..6 {
                let row: f64 = (0..6).map(|j| lb.bending[i][j] * phi[j]).sum();
                assert_abs_diff_eq!(row, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn block_dimensions_and_constant_kernel() {
        let disc =
            Discretization::new(Mesh::unit_square(2), BoundaryCondition::Clamped, MultiplierFamily::Dual).unwrap();
        let sys = assemble(&disc, &unit_model()).unwrap();
        assert_eq!(sys.dims(), [2, 8, 2]);
        assert_eq!(sys.saddle_matrix().nrows(), 12);

        // H annihilates constants on the unconstrained CR space
        let mesh = Mesh::unit_square(3);
        let disc =
            Discretization::new(mesh.clone(), BoundaryCondition::SimplySupported, MultiplierFamily::Linear).unwrap();
        let full = Discretization { displacement: build_dof_map(&mesh, SpaceKind::CrouzeixRaviart).unwrap(), ..disc };
        let sys = assemble(&full, &unit_model()).unwrap();
        let ones = vec![1.0; full.displacement.dim()];
        assert!(mul_vec(&sys.stiffness, &ones).iter().all(|v| v.abs() < 1e-13));
    }

    #[test]
    fn dual_gram_is_diagonal_with_support_area() {
        let mesh = Mesh::unit_square(4);
        let disc =
            Discretization::new(mesh.clone(), BoundaryCondition::SimplySupported, MultiplierFamily::Dual).unwrap();
        let sys = assemble(&disc, &unit_model()).unwrap();
        let d = to_dense(&sys.gram);
        let mut support = vec![0.0; mesh.num_vertices()];
        for (t, tri) in mesh.triangles().iter().enumerate() {
            for &v in tri {
                support[v] += mesh.area(t);
            }
        }
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                let expected = if i == j { support[i / 2] / 3.0 } else { 0.0 };
                assert_abs_diff_eq!(d[(i, j)], expected, epsilon = 1e-15);
            }
        }
        // row sums agree with the P1 multiplier Gram (both families sum to one)
        let p1 = Discretization::new(mesh, BoundaryCondition::SimplySupported, MultiplierFamily::Linear).unwrap();
        let sp = to_dense(&assemble(&p1, &unit_model()).unwrap().gram);
        for i in 0..d.nrows() {
            let (a, b): (f64, f64) =
                ((0..d.ncols()).map(|j| d[(i, j)]).sum(), (0..d.ncols()).map(|j| sp[(i, j)]).sum());
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn load_vector_examples() {
        let mesh = Mesh::unit_square(2);
        let full = build_dof_map(&mesh, SpaceKind::CrouzeixRaviart).unwrap();
        let zero = unit_model().with_load(|_| 0.0);
        assert!(load_vector(&mesh, &full, &zero).iter().all(|&v| v == 0.0));
        let one: f64 = load_vector(&mesh, &full, &unit_model()).iter().sum();
        assert_abs_diff_eq!(one, 1.0, epsilon = 1e-14);
        let x: f64 = load_vector(&mesh, &full, &unit_model().with_load(|p| p[0])).iter().sum();
        assert_abs_diff_eq!(x, 0.5, epsilon = 1e-14);
        let rot = build_dof_map(&mesh, SpaceKind::Linear).unwrap();
        assert!(moment_vector(&mesh, &rot, &unit_model()).iter().all(|&v| v == 0.0));
        let m: f64 = moment_vector(&mesh, &rot, &unit_model().with_moment(|_| [1.0, 2.0])).iter().sum();
        assert_abs_diff_eq!(m, 3.0, epsilon = 1e-14);
        // perimeter 4, constant unit traction in x
        let b: f64 = boundary_moment_vector(&mesh, &rot, &|_| [1.0, 0.0]).iter().sum();
        assert_abs_diff_eq!(b, 4.0, epsilon = 1e-14);
    }
}
