//! Orientation-preserving isomorphisms between combinatorial maps.
//!
//! Maps are connected, so an isomorphism is fixed by the image of a single
//! half-edge; everything else follows by transporting along `next` and
//! `twin`.

use super::{HalfEdge, Relabeling, Triangulation};

impl Triangulation {
    /// The isomorphism sending `from` (in `self`) to `to` (in `other`), if
    /// one exists.
    pub fn isomorphism_from_anchor(
        &self,
        other: &Triangulation,
        from: HalfEdge,
        to: HalfEdge,
    ) -> Option<Relabeling> {
        if self.genus != other.genus
            || self.punctures != other.punctures
            || self.num_half_edges() != other.num_half_edges()
        {
            return None;
        }
        let n = self.num_half_edges();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[from] = to;
        used[to] = true;
        let mut stack = vec![from];
        while let Some(h) = stack.pop() {
            let image = map[h];
            for (src, dst) in [
                (self.next(h), other.next(image)),
                (self.twin(h), other.twin(image)),
            ] {
                if map[src] == usize::MAX {
                    if used[dst] {
                        return None;
                    }
                    map[src] = dst;
                    used[dst] = true;
                    stack.push(src);
                } else if map[src] != dst {
                    return None;
                }
            }
        }
        let edges = (0..self.num_edges())
            .map(|e| other.edge_of(map[self.edges[e][0]]))
            .collect();
        let faces = (0..self.num_faces())
            .map(|f| other.face_of(map[self.faces[f][0]]))
            .collect();
        let mut vertices = vec![0; self.num_vertices()];
        for h in 0..n {
            vertices[self.tail(h)] = other.tail(map[h]);
        }
        Some(Relabeling {
            half_edges: map,
            edges,
            faces,
            vertices,
        })
    }

    /// All isomorphisms `self → other`.
    pub fn isomorphisms(&self, other: &Triangulation) -> Vec<Relabeling> {
        if self.num_half_edges() != other.num_half_edges() {
            return Vec::new();
        }
        (0..other.num_half_edges())
            .filter_map(|to| self.isomorphism_from_anchor(other, 0, to))
            .collect()
    }

    pub fn is_isomorphic(&self, other: &Triangulation) -> bool {
        self.num_half_edges() == other.num_half_edges()
            && (0..other.num_half_edges())
                .any(|to| self.isomorphism_from_anchor(other, 0, to).is_some())
    }

    /// Orientation-preserving automorphisms of the map.
    pub fn automorphisms(&self) -> Vec<Relabeling> {
        self.isomorphisms(self)
    }

    /// An isomorphism that fixes every edge identifier, if one exists.
    pub fn edge_preserving_isomorphism(&self, other: &Triangulation) -> Option<Relabeling> {
        if self.num_edges() != other.num_edges() {
            return None;
        }
        other.edges[0]
            .iter()
            .filter_map(|&to| self.isomorphism_from_anchor(other, self.edges[0][0], to))
            .find(|iso| iso.edges.iter().enumerate().all(|(e, &img)| e == img))
    }

    /// Encoding that is equal for two triangulations exactly when an
    /// edge-id-preserving isomorphism exists between them.
    pub fn edge_labeled_code(&self) -> Vec<usize> {
        self.edges[0]
            .iter()
            .map(|&start| self.traversal_code(start))
            .min()
            .expect("edge 0 has two half-edges")
    }

    /// Breadth-first relabeling from `start`, recording for every visited
    /// half-edge its edge id and the local indices of `next` and `twin`.
    fn traversal_code(&self, start: HalfEdge) -> Vec<usize> {
        let n = self.num_half_edges();
        let mut index = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        index[start] = 0;
        order.push(start);
        let mut i = 0;
        while i < order.len() {
            let h = order[i];
            for nb in [self.next(h), self.twin(h)] {
                if index[nb] == usize::MAX {
                    index[nb] = order.len();
                    order.push(nb);
                }
            }
            i += 1;
        }
        let mut code = Vec::with_capacity(3 * n);
        for &h in &order {
            code.push(self.edge_of(h));
            code.push(index[self.next(h)]);
            code.push(index[self.twin(h)]);
        }
        code
    }
}
