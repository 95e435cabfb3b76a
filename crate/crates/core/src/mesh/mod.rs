//! Conforming triangulations of polygonal domains.
//!
//! A [`Mesh`] owns its vertices and counterclockwise triangles and derives the
//! edge list on construction. Edge identity is the unordered vertex pair; local
//! edge `k` of a triangle is the one opposite its local vertex `k`.

mod io;
mod sets;

pub use io::{load_mesh, save_mesh};
pub use sets::VertexSets;

use std::collections::{HashMap, HashSet};

use crate::error::{PlateError, Result};

pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Endpoints, smaller index first.
    pub vertices: [usize; 2],
    /// One (boundary) or two (interior) adjacent triangles.
    pub triangles: Vec<usize>,
    pub boundary: bool,
}

#[derive(Debug, Clone)]
pub struct Mesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    triangle_edges: Vec<[usize; 3]>,
    boundary_vertex: Vec<bool>,
    mesh_size: f64,
}

impl Mesh {
    /// Builds a mesh, reorienting clockwise triangles.
    ///
    /// Rejects out-of-range indices, repeated vertices inside a triangle,
    /// duplicate triangles, zero-area triangles, edges shared by more than two
    /// triangles and vertices that belong to no triangle.
    pub fn new(vertices: Vec<Point>, mut triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(PlateError::Topology("mesh has no triangles".into()));
        }
        let nv = vertices.len();
        let mut seen = HashSet::with_capacity(triangles.len());
        for (t, tri) in triangles.iter_mut().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&v| v >= nv) {
                return Err(PlateError::Topology(format!(
                    "triangle {t} references vertex {bad}, but only {nv} vertices exist"
                )));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(PlateError::Topology(format!("triangle {t} repeats a vertex")));
            }
            let area = signed_area(&vertices, tri);
            if area == 0.0 {
                return Err(PlateError::DegenerateTriangle(t));
            }
            if area < 0.0 {
                tri.swap(1, 2);
            }
            let mut key = *tri;
            key.sort_unstable();
            if !seen.insert(key) {
                return Err(PlateError::Topology(format!("triangle {t} duplicates an earlier triangle")));
            }
        }

        let mut index: HashMap<[usize; 2], usize> = HashMap::with_capacity(triangles.len() * 2);
        let mut edges: Vec<Edge> = Vec::with_capacity(triangles.len() * 2);
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut local = [0; 3];
            for (k, slot) in local.iter_mut().enumerate() {
                let (a, b) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
                let key = if a < b { [a, b] } else { [b, a] };
                let e = *index.entry(key).or_insert_with(|| {
                    edges.push(Edge { vertices: key, triangles: Vec::with_capacity(2), boundary: false });
                    edges.len() - 1
                });
                edges[e].triangles.push(t);
                if edges[e].triangles.len() > 2 {
                    return Err(PlateError::Topology(format!(
                        "edge ({}, {}) is shared by more than two triangles",
                        key[0], key[1]
                    )));
                }
                *slot = e;
            }
            triangle_edges.push(local);
        }

        let mut boundary_vertex = vec![false; nv];
        let mut used = vec![false; nv];
        for edge in edges.iter_mut() {
            edge.boundary = edge.triangles.len() == 1;
            for &v in &edge.vertices {
                used[v] = true;
                if edge.boundary {
                    boundary_vertex[v] = true;
                }
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(PlateError::Topology(format!("vertex {v} belongs to no triangle")));
        }

        let mesh_size =
            edges.iter().map(|e| distance(vertices[e.vertices[0]], vertices[e.vertices[1]])).fold(0.0, f64::max);

        Ok(Self { vertices, triangles, edges, triangle_edges, boundary_vertex, mesh_size })
    }

    /// Uniform grid on the unit square, each cell split along its SW–NE diagonal.
    pub fn unit_square(n: usize) -> Self {
        assert!(n >= 1, "unit_square needs n >= 1");
        let idx = |i: usize, j: usize| j * (n + 1) + i;
        let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            for i in 0..=n {
                vertices.push([i as f64 / n as f64, j as f64 / n as f64]);
            }
        }
        let mut triangles = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                let (sw, se, ne, nw) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
                triangles.push([sw, se, ne]);
                triangles.push([sw, ne, nw]);
            }
        }
        Self::new(vertices, triangles).expect("structured grid is a valid mesh")
    }

    /// Splits every triangle into four congruent children through its edge midpoints.
    ///
    /// The midpoint of edge `e` becomes vertex `num_vertices() + e`.
    pub fn refine_uniform(&self) -> Self {
        let nv = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices
            .extend(self.edges.iter().map(|e| midpoint(self.vertices[e.vertices[0]], self.vertices[e.vertices[1]])));
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for (tri, te) in self.triangles.iter().zip(&self.triangle_edges) {
            let [v0, v1, v2] = *tri;
            let [m0, m1, m2] = te.map(|e| nv + e);
            triangles.push([v0, m2, m1]);
            triangles.push([m2, v1, m0]);
            triangles.push([m1, m0, v2]);
            triangles.push([m0, m1, m2]);
        }
        Self::new(vertices, triangles).expect("refinement of a valid mesh is valid")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Global edge indices of each triangle; entry `k` is opposite local vertex `k`.
    pub fn triangle_edges(&self) -> &[[usize; 3]] {
        &self.triangle_edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_boundary_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.boundary).count()
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    pub fn num_interior_vertices(&self) -> usize {
        self.boundary_vertex.iter().filter(|b| !**b).count()
    }

    /// Maximum over triangles of the longest edge.
    pub fn mesh_size(&self) -> f64 {
        self.mesh_size
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        self.triangles[t].map(|v| self.vertices[v])
    }

    pub fn area(&self, t: usize) -> f64 {
        signed_area(&self.vertices, &self.triangles[t])
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.corners(t);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn edge_midpoint(&self, e: usize) -> Point {
        let [a, b] = self.edges[e].vertices;
        midpoint(self.vertices[a], self.vertices[b])
    }

    /// Gradients of the three barycentric coordinates on triangle `t`.
    pub fn barycentric_gradients(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.corners(t);
        let twice_area = 2.0 * self.area(t);
        [
            [(b[1] - c[1]) / twice_area, (c[0] - b[0]) / twice_area],
            [(c[1] - a[1]) / twice_area, (a[0] - c[0]) / twice_area],
            [(a[1] - b[1]) / twice_area, (b[0] - a[0]) / twice_area],
        ]
    }

    /// Maps barycentric coordinates on triangle `t` to a physical point.
    pub fn point_at(&self, t: usize, bary: [f64; 3]) -> Point {
        let [a, b, c] = self.corners(t);
        [bary[0] * a[0] + bary[1] * b[0] + bary[2] * c[0], bary[0] * a[1] + bary[1] * b[1] + bary[2] * c[1]]
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        self.vertices.iter().fold(([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]), |(lo, hi), p| {
            ([lo[0].min(p[0]), lo[1].min(p[1])], [hi[0].max(p[0]), hi[1].max(p[1])])
        })
    }

    /// Triangles whose three vertices all lie on the boundary.
    pub fn all_boundary_triangles(&self) -> Vec<usize> {
        (0..self.triangles.len()).filter(|&t| self.triangles[t].iter().all(|&v| self.boundary_vertex[v])).collect()
    }

    /// Smallest interior angle over all triangles, in radians.
    pub fn min_angle(&self) -> f64 {
        let mut min = f64::INFINITY;
        for t in 0..self.triangles.len() {
            let p = self.corners(t);
            for k in 0..3 {
                let (o, u, w) = (p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
                let a = [u[0] - o[0], u[1] - o[1]];
                let b = [w[0] - o[0], w[1] - o[1]];
                let cos = (a[0] * b[0] + a[1] * b[1]) / (norm(a) * norm(b));
                min = min.min(cos.clamp(-1.0, 1.0).acos());
            }
        }
        min
    }
}

fn signed_area(vertices: &[Point], tri: &[usize; 3]) -> f64 {
    let [a, b, c] = tri.map(|v| vertices[v]);
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn midpoint(a: Point, b: Point) -> Point {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

fn distance(a: Point, b: Point) -> f64 {
    norm([b[0] - a[0], b[1] - a[1]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn counts(m: &Mesh) -> (usize, usize, usize, usize, usize) {
        (m.num_vertices(), m.num_triangles(), m.num_edges(), m.num_boundary_edges(), m.num_interior_vertices())
    }

    #[test]
    fn unit_square_counts() {
        assert_eq!(counts(&Mesh::unit_square(1)), (4, 2, 5, 4, 0));
        assert_eq!(counts(&Mesh::unit_square(2)), (9, 8, 16, 8, 1));
        assert_eq!(counts(&Mesh::unit_square(4)), (25, 32, 56, 16, 9));
        for n in [1, 3, 7] {
            let m = Mesh::unit_square(n);
            assert_eq!(m.num_edges(), 2 * n * (n + 1) + n * n);
            assert_eq!(m.num_boundary_edges(), 4 * n);
            assert!((m.mesh_size() - 2f64.sqrt() / n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn refinement_counts_and_size() {
        let m = Mesh::unit_square(1).refine_uniform();
        assert_eq!((m.num_vertices(), m.num_triangles()), (9, 8));
        let m2 = Mesh::unit_square(2);
        let r = m2.refine_uniform();
        assert_eq!((r.num_vertices(), r.num_triangles()), (25, 32));
        assert_eq!(r.num_vertices(), m2.num_vertices() + m2.num_edges());
        assert!((r.mesh_size() - m2.mesh_size() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn edge_incidence() {
        let m = Mesh::unit_square(3);
        for e in m.edges() {
            assert_eq!(e.triangles.len(), if e.boundary { 1 } else { 2 });
        }
        // every local edge of every triangle is the one opposite the local vertex
        for (t, tri) in m.triangles().iter().enumerate() {
            for k in 0..3 {
                let e = &m.edges()[m.triangle_edges()[t][k]];
                assert!(!e.vertices.contains(&tri[k]));
                assert!(e.triangles.contains(&t));
            }
        }
    }

    #[test]
    fn rejects_bad_topology() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        assert!(matches!(Mesh::new(v.clone(), vec![[0, 1, 7]]), Err(PlateError::Topology(_))));
        assert!(matches!(Mesh::new(v.clone(), vec![[0, 1, 2], [2, 1, 0]]), Err(PlateError::Topology(_))));
        let collinear = vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]];
        assert_eq!(Mesh::new(collinear, vec![[0, 1, 2]]).unwrap_err(), PlateError::DegenerateTriangle(0));
        // three triangles on the edge (0, 1)
        let fan = vec![[0.0, 0.0], [1.0, 0.0], [0.5, 1.0], [0.5, -1.0], [0.5, 2.0]];
        let err = Mesh::new(fan, vec![[0, 1, 2], [0, 3, 1], [0, 1, 4]]).unwrap_err();
        assert!(matches!(err, PlateError::Topology(_)));
        assert!(matches!(Mesh::new(v, vec![[0, 1, 2]]), Err(PlateError::Topology(_))));
    }

    #[test]
    fn clockwise_triangles_are_reoriented() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let m = Mesh::new(v, vec![[0, 2, 1]]).unwrap();
        assert!(m.area(0) > 0.0);
        assert!((m.area(0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn barycentric_gradients_sum_to_zero() {
        let m = Mesh::unit_square(3);
        for t in 0..m.num_triangles() {
            let g = m.barycentric_gradients(t);
            for c in 0..2 {
                assert!((g[0][c] + g[1][c] + g[2][c]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn corner_triangles_touch_only_boundary() {
        // The SW-NE split cuts off the (1,0) and (0,1) corners.
        let m = Mesh::unit_square(4);
        assert_eq!(m.all_boundary_triangles().len(), 2);
    }

    proptest! {
        #[test]
        fn unit_square_area_is_one(n in 1usize..=64) {
            let m = Mesh::unit_square(n);
            let total: f64 = (0..m.num_triangles()).map(|t| m.area(t)).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn refinement_preserves_area(n in 1usize..=12, levels in 1usize..=2) {
            let mut m = Mesh::unit_square(n);
            for _ in 0..levels {
                m = m.refine_uniform();
            }
            let total: f64 = (0..m.num_triangles()).map(|t| m.area(t)).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            for e in m.edges() {
                prop_assert_eq!(e.triangles.len(), if e.boundary { 1 } else { 2 });
            }
        }
    }
}
