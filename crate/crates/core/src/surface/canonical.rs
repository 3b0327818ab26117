//! Canonical base triangulation for each admissible `(g, s)`.
//!
//! * `g = 0`: two triangles glued along their boundary (Σ₀,₃), then `s − 3`
//!   vertex insertions.
//! * `g ≥ 1`: the `4g`-gon with side word `a₁b₁a₁⁻¹b₁⁻¹⋯`, fan-triangulated
//!   from polygon vertex 0, then `s − 1` vertex insertions.
//!
//! A vertex insertion replaces face 0 by three triangles around a new
//! puncture; the first of them keeps index 0 and the other two are appended.
//! Half-edge `3f + i` is slot `i` of face `f`; edge `e` pairs its forward
//! half-edge (index 0) with its backward one (index 1).

use super::{kappa_of, Triangulation};
use crate::error::Result;

/// A face side: edge id and whether the face traverses it forwards.
type Side = (usize, bool);

pub(super) fn build(genus: usize, punctures: usize) -> Result<Triangulation> {
    kappa_of(genus, punctures)?;
    let (mut faces, mut num_edges, base_punctures) = if genus == 0 {
        (
            vec![
                [(0, true), (1, true), (2, true)],
                [(2, false), (1, false), (0, false)],
            ],
            3,
            3,
        )
    } else {
        let (faces, edges) = polygon_fan(genus);
        (faces, edges, 1)
    };
    for _ in base_punctures..punctures {
        insert_vertex(&mut faces, &mut num_edges);
    }
    assemble(genus, punctures, &faces, num_edges)
}

fn polygon_fan(genus: usize) -> (Vec<[Side; 3]>, usize) {
    let sides = 4 * genus;
    // polygon side i runs from vertex i to vertex i+1
    let side = |i: usize| -> Side {
        let block = i / 4;
        match i % 4 {
            0 => (2 * block, true),
            1 => (2 * block + 1, true),
            2 => (2 * block, false),
            _ => (2 * block + 1, false),
        }
    };
    // diagonal d_j from vertex 0 to vertex j, j = 2..sides-2
    let diagonal = |j: usize| 2 * genus + (j - 2);
    let mut faces = Vec::with_capacity(sides - 2);
    for j in 1..sides - 1 {
        let first = if j == 1 { side(0) } else { (diagonal(j), true) };
        let last = if j + 1 == sides - 1 {
            side(sides - 1)
        } else {
            (diagonal(j + 1), false)
        };
        faces.push([first, side(j), last]);
    }
    (faces, 2 * genus + sides - 3)
}

fn insert_vertex(faces: &mut Vec<[Side; 3]>, num_edges: &mut usize) {
    let [s0, s1, s2] = faces[0];
    // spoke p_i runs from corner i to the new vertex
    let (p0, p1, p2) = (*num_edges, *num_edges + 1, *num_edges + 2);
    *num_edges += 3;
    faces[0] = [s0, (p1, true), (p0, false)];
    faces.push([s1, (p2, true), (p1, false)]);
    faces.push([s2, (p0, true), (p2, false)]);
}

fn assemble(
    genus: usize,
    punctures: usize,
    faces: &[[Side; 3]],
    num_edges: usize,
) -> Result<Triangulation> {
    let mut edges = vec![[usize::MAX; 2]; num_edges];
    for (f, face) in faces.iter().enumerate() {
        for (i, &(e, forward)) in face.iter().enumerate() {
            edges[e][if forward { 0 } else { 1 }] = 3 * f + i;
        }
    }
    let half_edges = (0..faces.len()).map(|f| [3 * f, 3 * f + 1, 3 * f + 2]).collect();
    Triangulation::from_parts(genus, punctures, half_edges, edges, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_is_square_with_diagonal() {
        let tri = build(1, 1).unwrap();
        // sides of both faces are {a, b, diagonal}
        for f in 0..2 {
            let mut sides = tri.face_sides(f).to_vec();
            sides.sort();
            assert_eq!(sides, vec![0, 1, 2]);
        }
        for e in 0..3 {
            assert_eq!(tri.endpoints(e), (0, 0));
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(build(2, 3).unwrap(), build(2, 3).unwrap());
    }

    #[test]
    fn three_punctured_sphere_has_distinct_endpoints() {
        let tri = build(0, 3).unwrap();
        for e in 0..3 {
            let (p, q) = tri.endpoints(e);
            assert_ne!(p, q);
        }
    }

    #[test]
    fn inserted_vertex_has_degree_three() {
        let tri = build(0, 4).unwrap();
        let degrees: Vec<_> = (0..4).map(|p| tri.corners_at(p).unwrap().len()).collect();
        assert_eq!(degrees, vec![3, 3, 3, 3]);
    }
}
