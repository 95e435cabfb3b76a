use super::Mesh;

/// Vertex classification and edge-neighbour sets.
///
/// `stencil[i]` holds every vertex sharing an edge with `i`;
/// `interior_neighbors[i]` keeps the interior ones. It is filled for every
/// vertex, because the collar is the union of these sets over boundary vertices.
#[derive(Debug, Clone)]
pub struct VertexSets {
    pub interior: Vec<usize>,
    pub boundary: Vec<usize>,
    pub stencil: Vec<Vec<usize>>,
    pub interior_neighbors: Vec<Vec<usize>>,
    /// Interior vertices with at least one boundary neighbour.
    pub collar: Vec<usize>,
    is_boundary: Vec<bool>,
}

impl VertexSets {
    pub fn new(mesh: &Mesh) -> Self {
        let nv = mesh.num_vertices();
        let is_boundary: Vec<bool> = (0..nv).map(|v| mesh.is_boundary_vertex(v)).collect();
        let mut stencil = vec![Vec::new(); nv];
        for e in mesh.edges() {
            let [a, b] = e.vertices;
            stencil[a].push(b);
            stencil[b].push(a);
        }
        for s in stencil.iter_mut() {
            s.sort_unstable();
        }
        let interior_neighbors: Vec<Vec<usize>> =
            stencil.iter().map(|s| s.iter().copied().filter(|&j| !is_boundary[j]).collect()).collect();
        let (boundary, interior): (Vec<usize>, Vec<usize>) = (0..nv).partition(|&v| is_boundary[v]);
        let mut collar: Vec<usize> = boundary.iter().flat_map(|&j| interior_neighbors[j].iter().copied()).collect();
        collar.sort_unstable();
        collar.dedup();
        Self { interior, boundary, stencil, interior_neighbors, collar, is_boundary }
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.is_boundary[v]
    }

    /// Interior vertices that take over the multiplier function of boundary vertex `j`.
    ///
    /// These are the interior edge-neighbours of `j`. A vertex cut off by triangles
    /// lying entirely on the boundary has none, and falls back to the interior
    /// vertices two edges away. Empty means no interior vertex is reachable.
    pub fn absorbers(&self, j: usize) -> Vec<usize> {
        if !self.interior_neighbors[j].is_empty() {
            return self.interior_neighbors[j].clone();
        }
        let mut second: Vec<usize> =
            self.stencil[j].iter().flat_map(|&k| self.interior_neighbors[k].iter().copied()).collect();
        second.sort_unstable();
        second.dedup();
        second
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vertex_at(mesh: &Mesh, p: [f64; 2]) -> usize {
        mesh.vertices().iter().position(|q| (q[0] - p[0]).abs() + (q[1] - p[1]).abs() < 1e-12).unwrap()
    }

    #[test]
    fn two_by_two() {
        let m = Mesh::unit_square(2);
        let s = VertexSets::new(&m);
        let c = vertex_at(&m, [0.5, 0.5]);
        assert_eq!(s.interior, vec![c]);
        assert_eq!(s.boundary.len(), 8);
        assert_eq!(s.collar, vec![c]);
        // four axis neighbours plus (0,0) and (1,1) on the diagonal
        assert_eq!(s.stencil[c].len(), 6);
        assert!(s.stencil[c].contains(&vertex_at(&m, [0.0, 0.0])));
        assert!(s.stencil[c].contains(&vertex_at(&m, [1.0, 1.0])));
        assert!(!s.stencil[c].contains(&vertex_at(&m, [1.0, 0.0])));
    }

    #[test]
    fn four_by_four() {
        let m = Mesh::unit_square(4);
        let s = VertexSets::new(&m);
        assert_eq!(s.interior.len(), 9);
        assert_eq!(s.boundary.len(), 16);
        for &v in &s.boundary {
            let p = m.vertices()[v];
            assert!(p.iter().any(|&c| c == 0.0 || c == 1.0));
        }
        // the 8 interior vertices next to the boundary ring; only the centre is missing
        let centre = vertex_at(&m, [0.5, 0.5]);
        let expected: Vec<usize> = s.interior.iter().copied().filter(|&v| v != centre).collect();
        assert_eq!(s.collar, expected);
    }

    #[test]
    fn stencil_is_symmetric_and_interior_neighbors_are_interior() {
        let m = Mesh::unit_square(5).refine_uniform();
        let s = VertexSets::new(&m);
        for i in 0..m.num_vertices() {
            for &j in &s.stencil[i] {
                assert!(s.stencil[j].contains(&i));
            }
            for &j in &s.interior_neighbors[i] {
                assert!(s.stencil[i].contains(&j) && !s.is_boundary(j));
            }
        }
        let mut all: Vec<usize> = s.interior.iter().chain(&s.boundary).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..m.num_vertices()).collect::<Vec<_>>());
    }

    #[test]
    fn cut_off_corner_falls_back_to_second_ring() {
        let m = Mesh::unit_square(4);
        let s = VertexSets::new(&m);
        let corner = vertex_at(&m, [1.0, 0.0]);
        assert!(s.interior_neighbors[corner].is_empty());
        assert_eq!(s.absorbers(corner), vec![vertex_at(&m, [0.75, 0.25])]);
        let sw = vertex_at(&m, [0.0, 0.0]);
        assert_eq!(s.absorbers(sw), vec![vertex_at(&m, [0.25, 0.25])]);
        assert!(VertexSets::new(&Mesh::unit_square(1)).absorbers(0).is_empty());
    }
}
