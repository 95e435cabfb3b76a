//! Line-oriented mesh text format.
//!
//! ```text
//! plate-mesh 1
//! vertices <count>
//! x y
//! ...
//! triangles <count>
//! i j k
//! ...
//! ```
//!
//! Tokens are whitespace separated, `#` starts a comment, blank lines are
//! ignored and vertex indices are 0-based. Edges are never stored.

use std::fmt::Write;
use std::str::FromStr;

use super::{Mesh, Point};
use crate::error::{PlateError, Result};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self { inner: text.lines().enumerate(), last: 0 }
    }

    /// Next non-empty line with comments stripped, with its 1-based number.
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((i + 1, tokens));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        self.next_tokens().ok_or_else(|| PlateError::Parse {
            line: self.last + 1,
            message: format!("unexpected end of file, expected {what}"),
        })
    }
}

fn parse<T: FromStr>(token: &str, line: usize, what: &str) -> Result<T> {
    token.parse().map_err(|_| PlateError::Parse { line, message: format!("invalid {what} '{token}'") })
}

fn section_count(lines: &mut Lines<'_>, keyword: &str) -> Result<usize> {
    let (line, tokens) = lines.expect(keyword)?;
    match tokens.as_slice() {
        [k, count] if *k == keyword => parse(count, line, &format!("{keyword} count")),
        _ => Err(PlateError::Parse { line, message: format!("expected '{keyword} <count>'") }),
    }
}

fn expect_len(tokens: &[&str], n: usize, line: usize, what: &str) -> Result<()> {
    if tokens.len() != n {
        return Err(PlateError::Parse {
            line,
            message: format!("expected {n} values for {what}, found {}", tokens.len()),
        });
    }
    Ok(())
}

pub fn load_mesh(text: &str) -> Result<Mesh> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.expect("header")?;
    if header != ["plate-mesh", "1"] {
        return Err(PlateError::Parse { line, message: "expected header 'plate-mesh 1'".into() });
    }

    let nv = section_count(&mut lines, "vertices")?;
    let mut vertices: Vec<Point> = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, t) = lines.expect("vertex coordinates")?;
        expect_len(&t, 2, line, "a vertex")?;
        let p = [parse::<f64>(t[0], line, "coordinate")?, parse::<f64>(t[1], line, "coordinate")?];
        if !p.iter().all(|c| c.is_finite()) {
            return Err(PlateError::Parse { line, message: "non-finite coordinate".into() });
        }
        vertices.push(p);
    }

    let nt = section_count(&mut lines, "triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (line, t) = lines.expect("triangle indices")?;
        expect_len(&t, 3, line, "a triangle")?;
        triangles.push([
            parse::<usize>(t[0], line, "vertex index")?,
            parse::<usize>(t[1], line, "vertex index")?,
            parse::<usize>(t[2], line, "vertex index")?,
        ]);
    }
    if let Some((line, _)) = lines.next_tokens() {
        return Err(PlateError::Parse { line, message: "trailing content after triangle section".into() });
    }
    Mesh::new(vertices, triangles)
}

/// Writes the mesh; `f64` display is the shortest round-tripping form.
pub fn save_mesh(mesh: &Mesh) -> String {
    let mut out = String::new();
    writeln!(out, "plate-mesh 1").unwrap();
    writeln!(out, "vertices {}", mesh.num_vertices()).unwrap();
    for p in mesh.vertices() {
        writeln!(out, "{} {}", p[0], p[1]).unwrap();
    }
    writeln!(out, "triangles {}", mesh.num_triangles()).unwrap();
    for t in mesh.triangles() {
        writeln!(out, "{} {} {}", t[0], t[1], t[2]).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for m in [Mesh::unit_square(1), Mesh::unit_square(3).refine_uniform()] {
            let back = load_mesh(&save_mesh(&m)).unwrap();
            assert_eq!(back.vertices(), m.vertices());
            assert_eq!(back.triangles(), m.triangles());
            assert_eq!(back.num_edges(), m.num_edges());
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a unit triangle\nplate-mesh 1\n\nvertices 3 # three\n0 0\n1 0\n0 1\ntriangles 1\n0 1 2\n";
        let m = load_mesh(text).unwrap();
        assert_eq!(m.num_triangles(), 1);
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let text = "plate-mesh 1\nvertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 2 1\n";
        let m = load_mesh(text).unwrap();
        assert!(m.area(0) > 0.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad_coord = "plate-mesh 1\nvertices 1\n0 zero\ntriangles 0\n";
        assert_eq!(
            load_mesh(bad_coord).unwrap_err(),
            PlateError::Parse { line: 3, message: "invalid coordinate 'zero'".into() }
        );
        let bad_header = "plate-mesh 2\n";
        assert!(matches!(load_mesh(bad_header), Err(PlateError::Parse { line: 1, .. })));
        let truncated = "plate-mesh 1\nvertices 3\n0 0\n1 0\n";
        assert!(matches!(load_mesh(truncated), Err(PlateError::Parse { line: 5, .. })));
        let short_tri = "plate-mesh 1\nvertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1\n";
        assert!(matches!(load_mesh(short_tri), Err(PlateError::Parse { line: 7, .. })));
    }

    #[test]
    fn missing_vertex_is_topology_error() {
        let text = "plate-mesh 1\nvertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 3\n";
        assert!(matches!(load_mesh(text), Err(PlateError::Topology(_))));
    }
}
