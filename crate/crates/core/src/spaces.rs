//! Reference bases and global degree-of-freedom maps.
//!
//! Every space here is scalar; vector spaces interleave components, so the
//! vector dof of scalar dof `g` and component `c` is `2 * g + c`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{PlateError, Result};
use crate::mesh::{Mesh, VertexSets};

/// Shape functions on the reference triangle with vertices (0,0), (1,0), (0,1).
///
/// Local index `i` refers to vertex `i`; for the Crouzeix–Raviart element it is
/// the edge opposite vertex `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceBasis {
    CrouzeixRaviart,
    Linear,
    Dual,
}

fn reference_barycentric(p: [f64; 2]) -> [f64; 3] {
    [1.0 - p[0] - p[1], p[0], p[1]]
}

const LINEAR_GRADIENTS: [[f64; 2]; 3] = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];

impl ReferenceBasis {
    pub fn value(self, p: [f64; 2], i: usize) -> f64 {
        self.value_bary(reference_barycentric(p), i)
    }

    pub fn value_bary(self, l: [f64; 3], i: usize) -> f64 {
        match self {
            Self::CrouzeixRaviart => 1.0 - 2.0 * l[i],
            Self::Linear => l[i],
            Self::Dual => 4.0 * l[i] - 1.0,
        }
    }

    pub fn values_bary(self, l: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| self.value_bary(l, i))
    }

    /// Every basis function is affine in its own barycentric coordinate,
    /// `a + slope * λ_i`; its physical gradient is `slope * ∇λ_i`.
    pub fn slope(self) -> f64 {
        match self {
            Self::CrouzeixRaviart => -2.0,
            Self::Linear => 1.0,
            Self::Dual => 4.0,
        }
    }

    /// Constant reference gradient; the dual basis never needs one.
    pub fn gradient(self, i: usize) -> Option<[f64; 2]> {
        let g = LINEAR_GRADIENTS[i];
        match self {
            Self::CrouzeixRaviart => Some([-2.0 * g[0], -2.0 * g[1]]),
            Self::Linear => Some(g),
            Self::Dual => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    Clamped,
    SimplySupported,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiplierFamily {
    /// Continuous piecewise linears.
    #[serde(rename = "p1")]
    Linear,
    /// Discontinuous functions biorthogonal to the piecewise linears.
    Dual,
}

impl MultiplierFamily {
    pub fn basis(self) -> ReferenceBasis {
        match self {
            Self::Linear => ReferenceBasis::Linear,
            Self::Dual => ReferenceBasis::Dual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// Crouzeix–Raviart, one dof per edge.
    CrouzeixRaviart,
    /// Crouzeix–Raviart with vanishing boundary-edge means.
    CrouzeixRaviartZero,
    /// Continuous P1, one dof per vertex.
    Linear,
    /// Continuous P1 vanishing on the boundary.
    LinearZero,
    /// Multiplier with one function per vertex.
    Multiplier(MultiplierFamily),
    /// Multiplier with boundary-vertex functions folded onto interior vertices.
    ModifiedMultiplier(MultiplierFamily),
}

impl SpaceKind {
    pub fn basis(self) -> ReferenceBasis {
        match self {
            Self::CrouzeixRaviart | Self::CrouzeixRaviartZero => ReferenceBasis::CrouzeixRaviart,
            Self::Linear | Self::LinearZero => ReferenceBasis::Linear,
            Self::Multiplier(f) | Self::ModifiedMultiplier(f) => f.basis(),
        }
    }

    pub fn on_edges(self) -> bool {
        matches!(self, Self::CrouzeixRaviart | Self::CrouzeixRaviartZero)
    }

    pub fn rotation(bc: BoundaryCondition) -> Self {
        match bc {
            BoundaryCondition::Clamped => Self::LinearZero,
            BoundaryCondition::SimplySupported => Self::Linear,
        }
    }

    pub fn multiplier(bc: BoundaryCondition, family: MultiplierFamily) -> Self {
        match bc {
            BoundaryCondition::Clamped => Self::ModifiedMultiplier(family),
            BoundaryCondition::SimplySupported => Self::Multiplier(family),
        }
    }
}

/// Global numbering of a scalar space.
///
/// Each mesh entity (vertex or edge, depending on the space) expands into a
/// weighted list of global dofs: empty for constrained entities, a single unit
/// entry for ordinary ones, and several entries for boundary vertices of the
/// modified multiplier space.
#[derive(Debug, Clone)]
pub struct DofMap {
    kind: SpaceKind,
    dim: usize,
    expansion: Vec<Vec<(usize, f64)>>,
    cells: Vec<[usize; 3]>,
    /// Entity owning each global dof.
    owners: Vec<usize>,
    weights: BTreeMap<(usize, usize), f64>,
}

impl DofMap {
    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn basis(&self) -> ReferenceBasis {
        self.kind.basis()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector_dim(&self) -> usize {
        2 * self.dim
    }

    /// Entity ids of triangle `t`, in local order.
    pub fn cell(&self, t: usize) -> [usize; 3] {
        self.cells[t]
    }

    pub fn expansion(&self, entity: usize) -> &[(usize, f64)] {
        &self.expansion[entity]
    }

    /// Expansion of local function `k` of triangle `t`.
    pub fn local(&self, t: usize, k: usize) -> &[(usize, f64)] {
        &self.expansion[self.cells[t][k]]
    }

    /// Entity (vertex or edge) carrying global dof `g`.
    pub fn owner(&self, g: usize) -> usize {
        self.owners[g]
    }

    /// Boundary-vertex weights `(j, i) -> A_ji` of the modified multiplier space.
    pub fn weights(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.weights
    }

    /// Local coefficients on triangle `t` of a scalar coefficient vector.
    pub fn local_coefficients(&self, t: usize, coeffs: &[f64]) -> [f64; 3] {
        [0, 1, 2].map(|k| self.local(t, k).iter().map(|&(g, w)| w * coeffs[g]).sum())
    }

    /// Local coefficients of component `c` of an interleaved vector.
    pub fn local_vector_coefficients(&self, t: usize, coeffs: &[f64], c: usize) -> [f64; 3] {
        [0, 1, 2].map(|k| self.local(t, k).iter().map(|&(g, w)| w * coeffs[2 * g + c]).sum())
    }

    fn from_mask(kind: SpaceKind, mesh: &Mesh, free: impl Fn(usize) -> bool, count: usize) -> Self {
        let mut expansion = Vec::with_capacity(count);
        let mut owners = Vec::new();
        for e in 0..count {
            if free(e) {
                expansion.push(vec![(owners.len(), 1.0)]);
                owners.push(e);
            } else {
                expansion.push(Vec::new());
            }
        }
        let cells = if kind.on_edges() { mesh.triangle_edges().to_vec() } else { mesh.triangles().to_vec() };
        Self { kind, dim: owners.len(), expansion, cells, owners, weights: BTreeMap::new() }
    }
}

pub fn build_dof_map(mesh: &Mesh, kind: SpaceKind) -> Result<DofMap> {
    let ne = mesh.num_edges();
    let nv = mesh.num_vertices();
    Ok(match kind {
        SpaceKind::CrouzeixRaviart => DofMap::from_mask(kind, mesh, |_| true, ne),
        SpaceKind::CrouzeixRaviartZero => DofMap::from_mask(kind, mesh, |e| !mesh.edges()[e].boundary, ne),
        SpaceKind::Linear | SpaceKind::Multiplier(_) => DofMap::from_mask(kind, mesh, |_| true, nv),
        SpaceKind::LinearZero => DofMap::from_mask(kind, mesh, |v| !mesh.is_boundary_vertex(v), nv),
        SpaceKind::ModifiedMultiplier(family) => build_modified_multiplier(mesh, &VertexSets::new(mesh), family)?,
    })
}

/// Multiplier space whose boundary-vertex functions are absorbed, with equal
/// weights, by neighbouring interior vertices. The result has one function per
/// interior vertex and still reproduces constants.
pub fn build_modified_multiplier(mesh: &Mesh, sets: &VertexSets, family: MultiplierFamily) -> Result<DofMap> {
    let kind = SpaceKind::ModifiedMultiplier(family);
    let mut map = DofMap::from_mask(kind, mesh, |v| !sets.is_boundary(v), mesh.num_vertices());
    for &j in &sets.boundary {
        let absorbers = sets.absorbers(j);
        if absorbers.is_empty() {
            return Err(PlateError::AllBoundaryTriangle { vertex: j });
        }
        let w = 1.0 / absorbers.len() as f64;
        map.expansion[j] = absorbers.iter().map(|&i| (map.expansion[i][0].0, w)).collect();
        for &i in &absorbers {
            map.weights.insert((j, i), w);
        }
    }
    Ok(map)
}

/// All dof maps of one discrete problem on one mesh.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub mesh: Mesh,
    pub bc: BoundaryCondition,
    pub family: MultiplierFamily,
    pub rotation: DofMap,
    pub displacement: DofMap,
    pub multiplier: DofMap,
}

impl Discretization {
    pub fn new(mesh: Mesh, bc: BoundaryCondition, family: MultiplierFamily) -> Result<Self> {
        let rotation = build_dof_map(&mesh, SpaceKind::rotation(bc))?;
        let displacement = build_dof_map(&mesh, SpaceKind::CrouzeixRaviartZero)?;
        let multiplier = build_dof_map(&mesh, SpaceKind::multiplier(bc, family))?;
        if rotation.dim() != multiplier.dim() {
            return Err(PlateError::DimensionMismatch {
                what: "multiplier space".into(),
                expected: rotation.vector_dim(),
                found: multiplier.vector_dim(),
            });
        }
        Ok(Self { mesh, bc, family, rotation, displacement, multiplier })
    }

    /// Vector rotation, displacement and vector multiplier dimensions.
    pub fn dims(&self) -> [usize; 3] {
        [self.rotation.vector_dim(), self.displacement.dim(), self.multiplier.vector_dim()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadratureRule;
    use approx::assert_abs_diff_eq;

    const MIDPOINTS: [[f64; 2]; 3] = [[0.5, 0.5], [0.0, 0.5], [0.5, 0.0]];

    #[test]
    fn crouzeix_raviart_reference() {
        let b = ReferenceBasis::CrouzeixRaviart;
        for (e, m) in MIDPOINTS.iter().enumerate() {
            for i in 0..3 {
                assert_abs_diff_eq!(b.value(*m, i), if i == e { 1.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }
        for i in 0..3 {
            assert_abs_diff_eq!(b.value([1.0 / 3.0, 1.0 / 3.0], i), 1.0 / 3.0, epsilon = 1e-15);
        }
        let s: f64 = (0..3).map(|i| b.value([0.13, 0.61], i)).sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn linear_reference() {
        let b = ReferenceBasis::Linear;
        assert_eq!(b.value([0.0, 0.0], 0), 1.0);
        assert_eq!(b.value([1.0, 0.0], 0), 0.0);
        assert_eq!(b.value([0.0, 1.0], 0), 0.0);
        assert_eq!(b.gradient(1), Some([1.0, 0.0]));
        let s: f64 = (0..3).map(|i| b.value([0.3, 0.2], i)).sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn dual_reference() {
        let b = ReferenceBasis::Dual;
        assert_eq!([0, 1, 2].map(|i| b.value([0.0, 0.0], i)), [3.0, -1.0, -1.0]);
        assert_eq!(b.gradient(0), None);
        // ∫ ξ_i λ_j = δ_ij / 6 and ∫ ξ_i = 1/6 on the reference triangle (area 1/2)
        for i in 0..3 {
            let mut int_xi = 0.0;
            for j in 0..3 {
                let v: f64 = QuadratureRule::EdgeMidpoint
                    .points()
                    .iter()
                    .map(|(l, w)| 0.5 * w * b.value_bary(*l, i) * l[j])
                    .sum();
                assert_abs_diff_eq!(v, if i == j { 1.0 / 6.0 } else { 0.0 }, epsilon = 1e-15);
            }
            for (l, w) in QuadratureRule::EdgeMidpoint.points() {
                int_xi += 0.5 * w * b.value_bary(*l, i);
            }
            assert_abs_diff_eq!(int_xi, 1.0 / 6.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn dimensions_on_small_meshes() {
        let m = Mesh::unit_square(2);
        assert_eq!(build_dof_map(&m, SpaceKind::CrouzeixRaviartZero).unwrap().dim(), 8);
        assert_eq!(build_dof_map(&m, SpaceKind::CrouzeixRaviart).unwrap().dim(), 16);
        assert_eq!(build_dof_map(&m, SpaceKind::LinearZero).unwrap().dim(), 1);
        assert_eq!(build_dof_map(&m, SpaceKind::Linear).unwrap().dim(), 9);
        let d = Discretization::new(m, BoundaryCondition::Clamped, MultiplierFamily::Dual).unwrap();
        assert_eq!(d.dims(), [2, 8, 2]);
        let m4 = Mesh::unit_square(4);
        let d = Discretization::new(m4, BoundaryCondition::SimplySupported, MultiplierFamily::Linear).unwrap();
        assert_eq!(d.dims(), [50, 40, 50]);
    }

    #[test]
    fn centre_absorbs_everything_on_two_by_two() {
        let m = Mesh::unit_square(2);
        let map = build_dof_map(&m, SpaceKind::ModifiedMultiplier(MultiplierFamily::Linear)).unwrap();
        assert_eq!(map.dim(), 1);
        assert_eq!(map.weights().len(), 8);
        assert!(map.weights().values().all(|&w| w == 1.0));
        for v in 0..9 {
            assert_eq!(map.expansion(v), &[(0, 1.0)]);
        }
    }

    #[test]
    fn no_interior_vertex_is_rejected() {
        let m = Mesh::unit_square(1);
        for f in [MultiplierFamily::Linear, MultiplierFamily::Dual] {
            assert!(matches!(
                build_dof_map(&m, SpaceKind::ModifiedMultiplier(f)),
                Err(PlateError::AllBoundaryTriangle { .. })
            ));
        }
    }

    #[test]
    fn weights_sum_to_one_per_boundary_vertex() {
        let m = Mesh::unit_square(4);
        let sets = VertexSets::new(&m);
        let map = build_modified_multiplier(&m, &sets, MultiplierFamily::Dual).unwrap();
        for &j in &sets.boundary {
            let row: Vec<f64> = map.weights().range((j, 0)..(j + 1, 0)).map(|(_, &w)| w).collect();
            assert!(!row.is_empty());
            assert_abs_diff_eq!(row.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
            assert!(row.iter().all(|&w| w > 0.0 && (w - row[0]).abs() < 1e-15));
            if !sets.interior_neighbors[j].is_empty() {
                assert_eq!(row.len(), sets.interior_neighbors[j].len());
            }
        }
        // corner (0,0) touches only (1/4,1/4) through the diagonal
        let sw = sets.boundary.iter().copied().find(|&v| m.vertices()[v] == [0.0, 0.0]).unwrap();
        assert_eq!(sets.interior_neighbors[sw].len(), 1);
    }
}
