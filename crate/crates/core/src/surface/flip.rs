use super::{EdgeId, FaceId, HalfEdge, Relabeling, Triangulation};
use crate::error::{Error, Result};

/// The quadrilateral around a flippable edge.
///
/// `first` has sides `(e, a, b)` and `second` has sides `(e, c, d)`, both in
/// counterclockwise order starting from the diagonal. `first` is the face of
/// the edge's half-edge with index 0. Sides may repeat (e.g. `a = c`,
/// `b = d` on the once-punctured torus).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quad {
    pub diagonal: EdgeId,
    pub first: FaceId,
    pub second: FaceId,
    /// Sides `[a, b, c, d]`.
    pub sides: [EdgeId; 4],
    /// Half-edges of the diagonal in `first` and `second`.
    pub diagonal_half_edges: [HalfEdge; 2],
    /// Half-edges of `a, b` (in `first`) and `c, d` (in `second`).
    pub side_half_edges: [HalfEdge; 4],
}

impl Quad {
    pub fn a(&self) -> EdgeId {
        self.sides[0]
    }
    pub fn b(&self) -> EdgeId {
        self.sides[1]
    }
    pub fn c(&self) -> EdgeId {
        self.sides[2]
    }
    pub fn d(&self) -> EdgeId {
        self.sides[3]
    }
}

impl Triangulation {
    pub fn quad_of(&self, e: EdgeId) -> Result<Quad> {
        let [h, h2] = *self
            .edges
            .get(e)
            .ok_or_else(|| Error::Constraint(format!("no edge {e}")))?;
        let (first, second) = (self.face_of(h), self.face_of(h2));
        if first == second {
            return Err(Error::FlipUndefined(e));
        }
        let (ha, hb) = (self.next(h), self.prev(h));
        let (hc, hd) = (self.next(h2), self.prev(h2));
        Ok(Quad {
            diagonal: e,
            first,
            second,
            sides: [ha, hb, hc, hd].map(|x| self.edge_of(x)),
            diagonal_half_edges: [h, h2],
            side_half_edges: [ha, hb, hc, hd],
        })
    }

    /// Replaces `e` by the other diagonal of its quad.
    ///
    /// Identifiers persist: the new diagonal keeps the id (and half-edges)
    /// of `e`, the face with sides `(e′, d, a)` keeps the id of `first` and
    /// the face `(e′, b, c)` keeps the id of `second`. The returned
    /// relabeling is therefore the identity on every table.
    pub fn flip_combinatorial(&self, e: EdgeId) -> Result<(Triangulation, Relabeling)> {
        let q = self.quad_of(e)?;
        let [h, h2] = q.diagonal_half_edges;
        let [ha, hb, hc, hd] = q.side_half_edges;
        let mut faces = self.faces.clone();
        faces[q.first] = [h, hd, ha];
        faces[q.second] = [h2, hb, hc];
        let mut tails = self.tails.clone();
        // h now runs from the apex of `first` (tail of hb) to the apex of `second`
        tails[h] = self.tail(hb);
        tails[h2] = self.tail(hd);
        let flipped = Triangulation::from_parts(
            self.genus,
            self.punctures,
            faces,
            self.edges.clone(),
            Some(tails),
        )?;
        let relabel = Relabeling::identity(self);
        Ok((flipped, relabel))
    }

    /// Edges whose two sides lie in distinct faces.
    pub fn flippable_edges(&self) -> Vec<EdgeId> {
        (0..self.num_edges())
            .filter(|&e| self.face_of(self.edges[e][0]) != self.face_of(self.edges[e][1]))
            .collect()
    }
}
