//! Combinatorial ideal triangulations of punctured surfaces.
//!
//! A triangulation is stored as an oriented combinatorial map on `6κ`
//! half-edges. Each face is a counterclockwise cyclic triple of half-edges;
//! each edge pairs two half-edges running in opposite directions. A half-edge
//! `h` in face `(h, h1, h2)` runs from its tail vertex to the tail of `h1`.
//!
//! Corners are identified with half-edges: the corner `h` sits at the tail of
//! `h`, between the incoming side `prev(h)` and the outgoing side `h`.
//!
//! Puncture labels are stored per half-edge (the tail puncture) so that
//! they survive flips; a flip never changes the tail of any half-edge other
//! than the two on the flipped edge.

mod canonical;
mod flip;
mod iso;
mod polygon;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use flip::Quad;
pub use polygon::{catalan_number, enumerate_polygon_triangulations, Diagonal};

pub type HalfEdge = usize;
pub type EdgeId = usize;
pub type FaceId = usize;
pub type VertexId = usize;

/// A corner of a face at one of its punctures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Corner {
    /// Outgoing half-edge at the apex; doubles as the corner identifier.
    pub id: HalfEdge,
    pub face: FaceId,
    pub apex: VertexId,
    /// Side of the face opposite the apex.
    pub opposite: EdgeId,
    /// Side leaving the apex (edge of `id`).
    pub flank_a: EdgeId,
    /// Side entering the apex (edge of `prev(id)`).
    pub flank_b: EdgeId,
}

/// Identifier correspondence between two triangulations: entry `i` of each
/// table is the image of object `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    pub half_edges: Vec<HalfEdge>,
    pub edges: Vec<EdgeId>,
    pub faces: Vec<FaceId>,
    pub vertices: Vec<VertexId>,
}

impl Relabeling {
    pub fn identity(tri: &Triangulation) -> Self {
        Relabeling {
            half_edges: (0..tri.num_half_edges()).collect(),
            edges: (0..tri.num_edges()).collect(),
            faces: (0..tri.num_faces()).collect(),
            vertices: (0..tri.num_vertices()).collect(),
        }
    }

    /// `other ∘ self`: first apply `self`, then `other`.
    pub fn then(&self, other: &Relabeling) -> Relabeling {
        Relabeling {
            half_edges: self.half_edges.iter().map(|&h| other.half_edges[h]).collect(),
            edges: self.edges.iter().map(|&e| other.edges[e]).collect(),
            faces: self.faces.iter().map(|&f| other.faces[f]).collect(),
            vertices: self.vertices.iter().map(|&v| other.vertices[v]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triangulation {
    genus: usize,
    punctures: usize,
    faces: Vec<[HalfEdge; 3]>,
    edges: Vec<[HalfEdge; 2]>,
    /// Tail puncture of every half-edge.
    tails: Vec<VertexId>,
    slot: Vec<(FaceId, usize)>,
    pairing: Vec<(EdgeId, usize)>,
}

/// Serialized form of a [`Triangulation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationFile {
    pub genus: usize,
    pub punctures: usize,
    pub faces: Vec<[HalfEdge; 3]>,
    pub edges: Vec<[HalfEdge; 2]>,
    /// Tail puncture per half-edge. Optional on input; when absent the
    /// punctures are numbered by their smallest outgoing half-edge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<VertexId>>,
}

impl Triangulation {
    /// Builds and validates a triangulation from raw face/edge tables.
    pub fn from_parts(
        genus: usize,
        punctures: usize,
        faces: Vec<[HalfEdge; 3]>,
        edges: Vec<[HalfEdge; 2]>,
        tails: Option<Vec<VertexId>>,
    ) -> Result<Self> {
        let kappa = kappa_of(genus, punctures)?;
        if faces.len() != 2 * kappa || edges.len() != 3 * kappa {
            return Err(Error::Constraint(format!(
                "expected {} faces and {} edges for (g,s)=({genus},{punctures}), got {} and {}",
                2 * kappa,
                3 * kappa,
                faces.len(),
                edges.len()
            )));
        }
        let n = 6 * kappa;
        let mut slot = vec![None; n];
        for (f, face) in faces.iter().enumerate() {
            for (i, &h) in face.iter().enumerate() {
                let entry = slot
                    .get_mut(h)
                    .ok_or_else(|| Error::Constraint(format!("half-edge {h} out of range")))?;
                if entry.replace((f, i)).is_some() {
                    return Err(Error::Constraint(format!("half-edge {h} used in two face slots")));
                }
            }
        }
        let mut pairing = vec![None; n];
        for (e, pair) in edges.iter().enumerate() {
            for (j, &h) in pair.iter().enumerate() {
                let entry = pairing
                    .get_mut(h)
                    .ok_or_else(|| Error::Constraint(format!("half-edge {h} out of range")))?;
                if entry.replace((e, j)).is_some() {
                    return Err(Error::Constraint(format!("half-edge {h} paired twice")));
                }
            }
        }
        let slot: Vec<_> = slot.into_iter().map(|s| s.expect("every slot filled")).collect();
        let pairing: Vec<_> = pairing.into_iter().map(|p| p.expect("every pairing filled")).collect();

        let mut tri = Triangulation {
            genus,
            punctures,
            faces,
            edges,
            tails: Vec::new(),
            slot,
            pairing,
        };
        let orbits = tri.vertex_orbits();
        if orbits.len() != punctures {
            return Err(Error::Constraint(format!(
                "vertex count {} does not match punctures {punctures}",
                orbits.len()
            )));
        }
        tri.tails = match tails {
            None => {
                let mut tails = vec![0; n];
                for (v, orbit) in orbits.iter().enumerate() {
                    for &h in orbit {
                        tails[h] = v;
                    }
                }
                tails
            }
            Some(tails) => {
                if tails.len() != n {
                    return Err(Error::Constraint("vertex table has wrong length".into()));
                }
                let mut seen = vec![false; punctures];
                for orbit in &orbits {
                    let v = tails[orbit[0]];
                    if v >= punctures || seen[v] || orbit.iter().any(|&h| tails[h] != v) {
                        return Err(Error::Constraint(
                            "vertex labels are not a bijection onto puncture orbits".into(),
                        ));
                    }
                    seen[v] = true;
                }
                tails
            }
        };
        if !tri.is_connected() {
            return Err(Error::Constraint("face adjacency graph is disconnected".into()));
        }
        Ok(tri)
    }

    /// Canonical triangulation of Σ_{g,s}: a fan-triangulated `4g`-gon (two
    /// glued triangles when `g = 0`) with the remaining punctures inserted
    /// into face 0 one at a time.
    pub fn new_surface(genus: usize, punctures: usize) -> Result<Self> {
        canonical::build(genus, punctures)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn punctures(&self) -> usize {
        self.punctures
    }

    /// κ = 2g − 2 + s.
    pub fn kappa(&self) -> usize {
        2 * self.genus + self.punctures - 2
    }

    pub fn num_half_edges(&self) -> usize {
        self.slot.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.punctures
    }

    pub fn num_corners(&self) -> usize {
        self.num_half_edges()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn faces(&self) -> &[[HalfEdge; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[[HalfEdge; 2]] {
        &self.edges
    }

    pub fn face_of(&self, h: HalfEdge) -> FaceId {
        self.slot[h].0
    }

    pub fn edge_of(&self, h: HalfEdge) -> EdgeId {
        self.pairing[h].0
    }

    pub fn next(&self, h: HalfEdge) -> HalfEdge {
        let (f, i) = self.slot[h];
        self.faces[f][(i + 1) % 3]
    }

    pub fn prev(&self, h: HalfEdge) -> HalfEdge {
        let (f, i) = self.slot[h];
        self.faces[f][(i + 2) % 3]
    }

    pub fn twin(&self, h: HalfEdge) -> HalfEdge {
        let (e, j) = self.pairing[h];
        self.edges[e][1 - j]
    }

    pub fn tail(&self, h: HalfEdge) -> VertexId {
        self.tails[h]
    }

    pub fn head(&self, h: HalfEdge) -> VertexId {
        self.tails[self.twin(h)]
    }

    /// Endpoints `(P(e), Q(e))` of an edge, possibly equal.
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let h = self.edges[e][0];
        (self.tail(h), self.head(h))
    }

    /// The three sides of a face in counterclockwise order.
    pub fn face_sides(&self, f: FaceId) -> [EdgeId; 3] {
        self.faces[f].map(|h| self.edge_of(h))
    }

    pub fn corner(&self, h: HalfEdge) -> Corner {
        Corner {
            id: h,
            face: self.face_of(h),
            apex: self.tail(h),
            opposite: self.edge_of(self.next(h)),
            flank_a: self.edge_of(h),
            flank_b: self.edge_of(self.prev(h)),
        }
    }

    pub fn corners(&self) -> impl Iterator<Item = Corner> + '_ {
        (0..self.num_half_edges()).map(|h| self.corner(h))
    }

    /// Next corner around the same puncture, in the order traversed by the
    /// boundary-circle segments: `h ↦ next(twin(h))`.
    pub fn rotate(&self, h: HalfEdge) -> HalfEdge {
        self.next(self.twin(h))
    }

    /// Corners at puncture `p`, in cyclic order starting from the smallest
    /// outgoing half-edge.
    pub fn corners_at(&self, p: VertexId) -> Result<Vec<Corner>> {
        if p >= self.punctures {
            return Err(Error::Constraint(format!("no puncture {p}")));
        }
        let start = (0..self.num_half_edges())
            .find(|&h| self.tails[h] == p)
            .expect("every puncture has a corner");
        let mut out = vec![self.corner(start)];
        let mut h = self.rotate(start);
        while h != start {
            out.push(self.corner(h));
            h = self.rotate(h);
        }
        Ok(out)
    }

    /// Orbits of `rotate`, ordered by their smallest member.
    fn vertex_orbits(&self) -> Vec<Vec<HalfEdge>> {
        let n = self.num_half_edges();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                orbit.push(h);
                h = self.rotate(h);
            }
            orbits.push(orbit);
        }
        orbits
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.num_faces()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(f) = stack.pop() {
            for &h in &self.faces[f] {
                let g = self.face_of(self.twin(h));
                if !seen[g] {
                    seen[g] = true;
                    stack.push(g);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Re-checks every structural invariant; used after flips in tests.
    pub fn validate(&self) -> Result<()> {
        let rebuilt = Triangulation::from_parts(
            self.genus,
            self.punctures,
            self.faces.clone(),
            self.edges.clone(),
            Some(self.tails.clone()),
        )?;
        if self.euler_characteristic() != 2 - 2 * self.genus as i64 {
            return Err(Error::Constraint("Euler characteristic mismatch".into()));
        }
        for h in 0..self.num_half_edges() {
            if self.tail(self.twin(h)) != self.tail(self.next(h)) {
                return Err(Error::Constraint(format!("half-edge {h} has inconsistent head")));
            }
        }
        debug_assert_eq!(&rebuilt, self);
        Ok(())
    }

    pub fn to_file(&self) -> TriangulationFile {
        TriangulationFile {
            genus: self.genus,
            punctures: self.punctures,
            faces: self.faces.clone(),
            edges: self.edges.clone(),
            vertices: Some(self.tails.clone()),
        }
    }

    pub fn from_file(file: TriangulationFile) -> Result<Self> {
        Triangulation::from_parts(file.genus, file.punctures, file.faces, file.edges, file.vertices)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("triangulation serializes")
    }

    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let file: TriangulationFile =
            serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        Triangulation::from_file(file)
    }
}

/// κ = 2g − 2 + s, rejecting s = 0 and κ ≤ 0.
pub fn kappa_of(genus: usize, punctures: usize) -> Result<usize> {
    let kappa = 2 * genus as i64 - 2 + punctures as i64;
    if punctures == 0 || kappa <= 0 {
        return Err(Error::Constraint(format!(
            "need s > 0 and 2g-2+s > 0, got g={genus}, s={punctures}"
        )));
    }
    Ok(kappa as usize)
}
