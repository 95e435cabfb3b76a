//! Structural checks shared by the command-line `check` report.

use crate::mesh::Mesh;
use crate::quadrature::QuadratureRule;
use crate::spaces::{build_dof_map, Discretization, MultiplierFamily, ReferenceBasis, SpaceKind};

/// `max |∫ ξ_i φ_j − δ_ij ∫ φ_j|` between the dual and P1 bases over all vertices.
pub fn biorthogonality_defect(mesh: &Mesh) -> f64 {
    let dual = build_dof_map(mesh, SpaceKind::Multiplier(MultiplierFamily::Dual)).expect("unconstrained space");
    let nv = mesh.num_vertices();
    let mut gram = std::collections::BTreeMap::<(usize, usize), f64>::new();
    let mut support = vec![0.0; nv];
    for t in 0..mesh.num_triangles() {
        let area = mesh.area(t);
        let cell = dual.cell(t);
        for &(l, w) in QuadratureRule::Degree4.points() {
            let (xi, phi) = (ReferenceBasis::Dual.values_bary(l), ReferenceBasis::Linear.values_bary(l));
            for a in 0..3 {
                support[cell[a]] += w * area * phi[a];
                for b in 0..3 {
                    *gram.entry((cell[a], cell[b])).or_default() += w * area * xi[a] * phi[b];
                }
            }
        }
    }
    gram.iter().map(|(&(i, j), &v)| (v - if i == j { support[j] } else { 0.0 }).abs()).fold(0.0, f64::max)
}

/// Largest deviation from 1 of the multiplier basis sum, sampled at quadrature
/// points and edge midpoints of every triangle.
pub fn partition_of_unity_defect(disc: &Discretization) -> f64 {
    let map = &disc.multiplier;
    let basis = map.basis();
    let mut worst = 0.0f64;
    for t in 0..disc.mesh.num_triangles() {
        for &(l, _) in QuadratureRule::Degree6.points().iter().chain(QuadratureRule::EdgeMidpoint.points()) {
            let v = basis.values_bary(l);
            let sum: f64 = (0..3).map(|k| map.local(t, k).iter().map(|&(_, w)| w * v[k]).sum::<f64>()).sum();
            worst = worst.max((sum - 1.0).abs());
        }
    }
    worst
}
