//! Graph connections on the ribbon graph of a triangulation.
//!
//! The ribbon graph has one vertex per half-edge `h`, sitting on the edge of
//! `h` near its tail puncture. Its edges are
//!
//! * a *long* edge per triangulation edge, from vertex `h` to vertex
//!   `twin(h)`, carrying `θ·(f(e), 0)`; the index-0 half-edge of each edge
//!   gives the forward direction;
//! * a *short* edge per corner `c`, from vertex `twin(prev(c))` to vertex
//!   `c` (the face-boundary direction), carrying the T-element `(1, u(c))`.
//!
//! Holonomy of a walk is the left-to-right product of its step matrices.
//! With this convention and `u(c) = ε(T_c) f(O_c) / (f(A_c) f(B_c))` the
//! boundary hexagon `L S L S L S` of every face is trivial in PSL(2,ℝ); the
//! short edges around a puncture compose to `(1, φ_P)`.

use serde_json::{json, Map, Value};

use super::matrix::{
    long_transport, parabolic_fixed_point, share_fixed_point, short_transport, BorelElement,
    ProjectiveMatrix,
};
use crate::coords::{corner_term, is_valid_chart_point, SignedCoords};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Sign, Tolerance};
use crate::surface::{EdgeId, HalfEdge, Triangulation, VertexId};

/// A vertex of the ribbon graph, named by its half-edge.
pub type GraphVertex = HalfEdge;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// Long edge from vertex `h` to vertex `twin(h)`.
    Long(HalfEdge),
    /// Short edge of a corner; forward runs from `twin(prev(corner))` to
    /// `corner`.
    Short { corner: HalfEdge, reversed: bool },
}

impl Step {
    pub fn short(corner: HalfEdge) -> Self {
        Step::Short { corner, reversed: false }
    }

    pub fn endpoints(&self, tri: &Triangulation) -> (GraphVertex, GraphVertex) {
        match *self {
            Step::Long(h) => (h, tri.twin(h)),
            Step::Short { corner, reversed } => {
                let from = tri.twin(tri.prev(corner));
                if reversed {
                    (corner, from)
                } else {
                    (from, corner)
                }
            }
        }
    }

    pub fn reversed(&self, tri: &Triangulation) -> Self {
        match *self {
            Step::Long(h) => Step::Long(tri.twin(h)),
            Step::Short { corner, reversed } => Step::Short {
                corner,
                reversed: !reversed,
            },
        }
    }
}

/// A walk in the ribbon graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    pub start: GraphVertex,
    pub steps: Vec<Step>,
}

impl Walk {
    pub fn empty(start: GraphVertex) -> Self {
        Walk { start, steps: Vec::new() }
    }

    /// Final vertex, checking that consecutive steps connect.
    pub fn end(&self, tri: &Triangulation) -> Result<GraphVertex> {
        if self.start >= tri.num_half_edges() {
            return Err(Error::MalformedWalk(format!("no vertex {}", self.start)));
        }
        let mut at = self.start;
        for (i, step) in self.steps.iter().enumerate() {
            let id = match *step {
                Step::Long(h) => h,
                Step::Short { corner, .. } => corner,
            };
            if id >= tri.num_half_edges() {
                return Err(Error::MalformedWalk(format!("step {i} names unknown half-edge {id}")));
            }
            let (from, to) = step.endpoints(tri);
            if from != at {
                return Err(Error::MalformedWalk(format!(
                    "step {i} starts at {from} but the walk is at {at}"
                )));
            }
            at = to;
        }
        Ok(at)
    }

    pub fn reversed(&self, tri: &Triangulation) -> Result<Walk> {
        let end = self.end(tri)?;
        Ok(Walk {
            start: end,
            steps: self.steps.iter().rev().map(|s| s.reversed(tri)).collect(),
        })
    }

    pub fn then(mut self, other: &Walk) -> Walk {
        self.steps.extend_from_slice(&other.steps);
        self
    }
}

/// Boundary hexagon of a face, starting at the vertex of its first slot.
pub fn hexagon_walk(tri: &Triangulation, face: usize) -> Walk {
    let [h0, h1, h2] = tri.faces()[face];
    Walk {
        start: h0,
        steps: vec![
            Step::Long(h0),
            Step::short(h1),
            Step::Long(h1),
            Step::short(h2),
            Step::Long(h2),
            Step::short(h0),
        ],
    }
}

/// Full circuit of short edges around the puncture of `v`, starting and
/// ending at `v`.
pub fn boundary_circuit(tri: &Triangulation, v: GraphVertex) -> Walk {
    let mut steps = Vec::new();
    let mut at = v;
    loop {
        let corner = tri.rotate(at);
        steps.push(Step::short(corner));
        at = corner;
        if at == v {
            break;
        }
    }
    Walk { start: v, steps }
}

/// The walk pair exhibiting an existing edge: the empty walk (ending on the
/// circle of the tail puncture) and the long edge itself.
pub fn edge_walks(tri: &Triangulation, e: EdgeId) -> (Walk, Walk) {
    let h = tri.edges()[e][0];
    (Walk::empty(h), Walk { start: h, steps: vec![Step::Long(h)] })
}

/// The walk pair for the other diagonal of the quad of `e`: both start at
/// the vertex of side `a` at the apex shared by `a` and `d`; one runs along
/// `a`, the other crosses the two short edges there and runs along `d`.
pub fn diagonal_walks(tri: &Triangulation, e: EdgeId) -> Result<(Walk, Walk)> {
    let q = tri.quad_of(e)?;
    let [_, h2] = q.diagonal_half_edges;
    let [ha, _, _, hd] = q.side_half_edges;
    let start = ha;
    let along_a = Walk { start, steps: vec![Step::Long(ha)] };
    let along_d = Walk {
        start,
        steps: vec![
            Step::Short { corner: ha, reversed: true },
            Step::Short { corner: h2, reversed: true },
            Step::Long(tri.twin(hd)),
        ],
    };
    Ok((along_a, along_d))
}

/// `u(c) = ε(T_c) f(O_c) / (f(A_c) f(B_c))`.
pub fn corner_u<S: Scalar>(tri: &Triangulation, c: &SignedCoords<S>, corner: HalfEdge) -> S {
    corner_term(c, &tri.corner(corner))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphConnection<S> {
    tri: Triangulation,
    long: Vec<S>,
    short: Vec<S>,
}

impl<S: Scalar> GraphConnection<S> {
    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    /// H-parameter of the long edge `e`.
    pub fn long(&self, e: EdgeId) -> &S {
        &self.long[e]
    }

    /// T-parameter of the short edge at `corner`.
    pub fn short(&self, corner: HalfEdge) -> &S {
        &self.short[corner]
    }

    pub fn step_matrix(&self, step: &Step) -> ProjectiveMatrix<S> {
        match *step {
            Step::Long(h) => {
                let e = self.tri.edge_of(h);
                let m = long_transport(&self.long[e]);
                if self.tri.edges()[e][0] == h {
                    m
                } else {
                    m.inverse()
                }
            }
            Step::Short { corner, reversed } => {
                let u = self.short[corner].clone();
                short_transport(&if reversed { -u } else { u })
            }
        }
    }

    /// Ordered product of step transports.
    pub fn path_holonomy(&self, walk: &Walk) -> Result<ProjectiveMatrix<S>> {
        walk.end(&self.tri)?;
        Ok(walk
            .steps
            .iter()
            .fold(ProjectiveMatrix::identity(), |acc, s| &acc * &self.step_matrix(s)))
    }

    /// Holonomy of the short-edge circuit around `p`; equals `(1, φ_P)`.
    pub fn puncture_holonomy(&self, p: VertexId, tol: Tolerance) -> Result<BorelElement<S>> {
        let start = self.tri.corners_at(p)?[0].id;
        let m = self.path_holonomy(&boundary_circuit(&self.tri, start))?;
        BorelElement::from_matrix(&m, tol)
    }

    /// Holonomy of `ℓ(walk)`: along the walk, once around the boundary
    /// circle at its end, and back.
    pub fn loop_holonomy(&self, walk: &Walk) -> Result<ProjectiveMatrix<S>> {
        let end = walk.end(&self.tri)?;
        let there = self.path_holonomy(walk)?;
        let around = self.path_holonomy(&boundary_circuit(&self.tri, end))?;
        Ok(&(&there * &around) * &there.inverse())
    }

    /// Whether the arc `a⁻¹b` is admissible: both `ℓ`-holonomies are
    /// parabolic with distinct fixed points. Fails with `NotParabolic` when
    /// either loop holonomy is not parabolic.
    pub fn is_arc_admissible(&self, a: &Walk, b: &Walk, tol: Tolerance) -> Result<bool> {
        if a.start != b.start {
            return Err(Error::MalformedWalk("walks must share their start vertex".into()));
        }
        let la = self.loop_holonomy(a)?;
        let lb = self.loop_holonomy(b)?;
        let pa = parabolic_fixed_point(&la, tol)?;
        let pb = parabolic_fixed_point(&lb, tol)?;
        Ok(!pa.same_as(&pb, tol))
    }

    pub fn to_json(&self) -> Value {
        let long: Map<String, Value> = self
            .long
            .iter()
            .enumerate()
            .map(|(e, x)| (e.to_string(), Value::String(x.to_repr())))
            .collect();
        let short: Map<String, Value> = self
            .short
            .iter()
            .enumerate()
            .map(|(c, x)| (c.to_string(), Value::String(x.to_repr())))
            .collect();
        json!({ "long": long, "short": short })
    }
}

/// Connection with long parameters `f` and short parameters from corner
/// sums. Rejects points where some puncture sum vanishes.
pub fn build_connection<S: Scalar>(
    tri: &Triangulation,
    c: &SignedCoords<S>,
    tol: Tolerance,
) -> Result<GraphConnection<S>> {
    if !is_valid_chart_point(tri, c, tol) {
        return Err(Error::InvalidChart);
    }
    Ok(build_connection_unchecked(tri, c))
}

/// Same as [`build_connection`] without the validity check, for inspecting
/// points off the chart (their puncture holonomies are trivial).
pub fn build_connection_unchecked<S: Scalar>(tri: &Triangulation, c: &SignedCoords<S>) -> GraphConnection<S> {
    GraphConnection {
        tri: tri.clone(),
        long: c.lengths().to_vec(),
        short: (0..tri.num_corners()).map(|h| corner_u(tri, c, h)).collect(),
    }
}

/// Cycle generators of the ribbon graph from a breadth-first spanning tree.
#[derive(Debug, Clone)]
pub struct Pi1Representation<S> {
    pub base: GraphVertex,
    /// One closed walk per non-tree edge, with its holonomy.
    pub generators: Vec<(Walk, ProjectiveMatrix<S>)>,
    /// Number of hexagon relations (one per face).
    pub relations: usize,
}

impl<S> Pi1Representation<S> {
    /// Generators minus relations: `2g + s − 1`.
    pub fn rank(&self) -> usize {
        self.generators.len() - self.relations
    }
}

pub fn pi1_representation<S: Scalar>(
    conn: &GraphConnection<S>,
    base: GraphVertex,
) -> Result<Pi1Representation<S>> {
    let tri = &conn.tri;
    let n = tri.num_half_edges();
    if base >= n {
        return Err(Error::MalformedWalk(format!("no vertex {base}")));
    }
    let mut all_steps: Vec<Step> = tri.edges().iter().map(|pair| Step::Long(pair[0])).collect();
    all_steps.extend((0..n).map(Step::short));

    let mut incident: Vec<Vec<Step>> = vec![Vec::new(); n];
    for s in &all_steps {
        let (from, to) = s.endpoints(tri);
        incident[from].push(*s);
        incident[to].push(s.reversed(tri));
    }
    // parent step reaching each vertex
    let mut parent: Vec<Option<Step>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut tree_steps = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::from([base]);
    seen[base] = true;
    while let Some(v) = queue.pop_front() {
        for s in &incident[v] {
            let (_, to) = s.endpoints(tri);
            if !seen[to] {
                seen[to] = true;
                parent[to] = Some(*s);
                tree_steps.insert(canonical_step(tri, s));
                queue.push_back(to);
            }
        }
    }
    let path_from_base = |v: GraphVertex| -> Walk {
        let mut steps = Vec::new();
        let mut at = v;
        while let Some(s) = parent[at] {
            steps.push(s);
            at = s.endpoints(tri).0;
        }
        steps.reverse();
        Walk { start: base, steps }
    };
    let mut generators = Vec::new();
    for s in &all_steps {
        if tree_steps.contains(s) {
            continue;
        }
        let (from, to) = s.endpoints(tri);
        let back = path_from_base(to).reversed(tri)?;
        let walk = path_from_base(from)
            .then(&Walk { start: from, steps: vec![*s] })
            .then(&back);
        let m = conn.path_holonomy(&walk)?;
        generators.push((walk, m));
    }
    Ok(Pi1Representation {
        base,
        generators,
        relations: tri.num_faces(),
    })
}

fn canonical_step(tri: &Triangulation, s: &Step) -> Step {
    match *s {
        Step::Long(h) => Step::Long(tri.edges()[tri.edge_of(h)][0]),
        Step::Short { corner, .. } => Step::short(corner),
    }
}

/// Heuristic irreducibility: the generator images have no common fixed
/// point on the real projective line. Not a certificate.
pub fn looks_irreducible<S: Scalar>(rep: &Pi1Representation<S>, tol: Tolerance) -> bool {
    let mats: Vec<_> = rep.generators.iter().map(|(_, m)| m.clone()).collect();
    !share_fixed_point(&mats, tol)
}

/// Transports along the new diagonal and new corners of a flip, derived
/// from the connection of the unflipped triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalExtension<S> {
    /// `f′(e′)` from the corner at the apex of `first′` opposite `e′`.
    pub length: S,
    /// `f′(e′)` recomputed from the other new face.
    pub length_from_second: S,
    pub sign_first: Sign,
    pub sign_second: Sign,
    /// Short parameters of the corners of the two new faces, keyed by the
    /// half-edge ids they carry after the flip.
    pub corners: Vec<(HalfEdge, S)>,
}

/// Given the short parameter `u` of a corner and the lengths of its two
/// sides `A` and `B`, the rest of the face is forced: returns the length of
/// the opposite side and the short parameters at the corners opposite `B`
/// and opposite `A`, in that order.
pub fn complete_face<S: Scalar>(u: &S, f_a: &S, f_b: &S) -> (S, S, S) {
    let f_o = u.abs() * f_a.clone() * f_b.clone();
    let opposite_b = S::one() / (u.clone() * f_a.clone() * f_a.clone());
    let opposite_a = S::one() / (u.clone() * f_b.clone() * f_b.clone());
    (f_o, opposite_b, opposite_a)
}

/// Extends the connection across the other diagonal of the quad of `e`.
///
/// The corner of each new face opposite the new diagonal is a composite of
/// two old short edges; its parameter is read off the holonomy of that
/// two-step walk; [`complete_face`] does the rest.
pub fn extend_to_diagonal<S: Scalar>(
    tri: &Triangulation,
    c: &SignedCoords<S>,
    e: EdgeId,
    tol: Tolerance,
) -> Result<DiagonalExtension<S>> {
    let q = tri.quad_of(e)?;
    let conn = build_connection(tri, c, tol)?;
    let [h1, h2] = q.diagonal_half_edges;
    let [ha, hb, hc, hd] = q.side_half_edges;
    let [a, b, cc, d] = q.sides;

    let composite = |first: HalfEdge, second: HalfEdge| -> Result<S> {
        let walk = Walk {
            start: tri.twin(tri.prev(first)),
            steps: vec![Step::short(first), Step::short(second)],
        };
        let m = conn.path_holonomy(&walk)?;
        let t = BorelElement::from_matrix(&m, tol)?;
        let scale = conn.short(first).abs() + conn.short(second).abs();
        if t.v().is_negligible(&scale, tol) {
            return Err(Error::DegenerateFlip { edge: e });
        }
        Ok(t.v().clone())
    };
    // apex between d and a (tail of ha), and apex between b and c (tail of hc)
    let u_first = composite(h2, ha)?;
    let u_second = composite(h1, hc)?;

    let fl = |x: EdgeId| c.length(x).clone();
    // first′ = [h1, hd, ha] with ha at the apex, A = a, B = d
    // second′ = [h2, hb, hc] with hc at the apex, A = c, B = b
    let (length, at_h1, at_hd) = complete_face(&u_first, &fl(a), &fl(d));
    let (length_from_second, at_h2, at_hb) = complete_face(&u_second, &fl(cc), &fl(b));
    let corners = vec![
        (ha, u_first.clone()),
        (h1, at_h1),
        (hd, at_hd),
        (hc, u_second.clone()),
        (h2, at_h2),
        (hb, at_hb),
    ];
    Ok(DiagonalExtension {
        length,
        length_from_second,
        sign_first: u_first.sign(),
        sign_second: u_second.sign(),
        corners,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{flip, phi_puncture, scale_action, PunctureScaling};
    use crate::scalar::Rational;

    const TOL: Tolerance = Tolerance(1e-9);

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn torus() -> Triangulation {
        Triangulation::new_surface(1, 1).unwrap()
    }

    fn torus_mixed() -> (Triangulation, SignedCoords<Rational>) {
        let tri = torus();
        let c = SignedCoords::unit(&tri).with_signs(vec![Sign::Plus, Sign::Minus]).unwrap();
        (tri, c)
    }

    fn quad_point(sides: [i64; 4], diag: i64, s1: Sign, s2: Sign) -> (Triangulation, SignedCoords<Rational>) {
        let tri = Triangulation::new_surface(0, 4).unwrap();
        let quad = tri.quad_of(0).unwrap();
        let mut f = vec![q(1, 1); 6];
        f[0] = q(diag, 1);
        for (side, len) in quad.sides.iter().zip(sides) {
            f[*side] = q(len, 1);
        }
        let mut eps = vec![Sign::Plus; 4];
        eps[quad.first] = s1;
        eps[quad.second] = s2;
        let c = SignedCoords::new(&tri, f, eps).unwrap();
        (tri, c)
    }

    #[test]
    fn corner_u_examples() {
        let tri = Triangulation::new_surface(0, 3).unwrap();
        let c = SignedCoords::new(&tri, vec![q(2, 1), q(6, 1), q(3, 1)], vec![Sign::Plus; 2]).unwrap();
        let corner = tri.corner(0);
        assert_eq!((corner.flank_a, corner.opposite, corner.flank_b), (0, 1, 2));
        assert_eq!(corner_u(&tri, &c, 0), q(1, 1));

        let (tri, c) = torus_mixed();
        let minus = tri.faces()[1][0];
        assert_eq!(corner_u(&tri, &c, minus), q(-1, 1));
        assert_eq!(corner_u(&tri, &SignedCoords::<Rational>::unit(&tri), 0), q(1, 1));
    }

    #[test]
    fn unit_torus_connection() {
        let tri = torus();
        let conn = build_connection(&tri, &SignedCoords::<Rational>::unit(&tri), TOL).unwrap();
        assert!((0..3).all(|e| conn.long(e) == &q(1, 1)));
        assert!((0..6).all(|h| conn.short(h) == &q(1, 1)));
        let json = conn.to_json();
        assert_eq!(json["long"]["2"], "1/1");
        assert_eq!(json["short"]["5"], "1/1");
    }

    #[test]
    fn hexagons_are_trivial() {
        let (tri, c) = quad_point([2, 1, 3, 5], 7, Sign::Plus, Sign::Minus);
        let conn = build_connection(&tri, &c, TOL).unwrap();
        for f in 0..tri.num_faces() {
            let m = conn.path_holonomy(&hexagon_walk(&tri, f)).unwrap();
            assert!(m.is_identity(TOL), "face {f}");
        }
        for t in [1, 2] {
            let walk = Walk {
                start: tri.faces()[0][t],
                steps: hexagon_walk(&tri, 0).steps[2 * t..].iter().chain(&hexagon_walk(&tri, 0).steps[..2 * t]).copied().collect(),
            };
            assert!(conn.path_holonomy(&walk).unwrap().is_identity(TOL));
        }
    }

    #[test]
    fn short_edges_are_borel_long_edges_are_not() {
        let (tri, c) = quad_point([2, 1, 3, 5], 7, Sign::Plus, Sign::Plus);
        let conn = build_connection(&tri, &c, TOL).unwrap();
        for h in 0..tri.num_half_edges() {
            let long = conn.step_matrix(&Step::Long(h));
            assert_eq!(super::super::bruhat_cell(&long, TOL), super::super::BruhatCell::BigCell);
            let short = BorelElement::from_matrix(&conn.step_matrix(&Step::short(h)), TOL).unwrap();
            assert_eq!(short.u(), &q(1, 1));
        }
    }

    #[test]
    fn path_basics() {
        let tri = torus();
        let conn = build_connection(&tri, &SignedCoords::<Rational>::unit(&tri), TOL).unwrap();
        assert!(conn.path_holonomy(&Walk::empty(4)).unwrap().is_identity(TOL));
        let there_and_back = Walk { start: 1, steps: vec![Step::Long(1), Step::Long(tri.twin(1))] };
        assert!(conn.path_holonomy(&there_and_back).unwrap().is_identity(TOL));
        let short_back = Walk {
            start: tri.twin(tri.prev(2)),
            steps: vec![Step::short(2), Step::Short { corner: 2, reversed: true }],
        };
        assert!(conn.path_holonomy(&short_back).unwrap().is_identity(TOL));
        let broken = Walk { start: 0, steps: vec![Step::Long(3)] };
        assert!(matches!(conn.path_holonomy(&broken), Err(Error::MalformedWalk(_))));
        let unknown = Walk { start: 0, steps: vec![Step::Long(99)] };
        assert!(matches!(conn.path_holonomy(&unknown), Err(Error::MalformedWalk(_))));
    }

    #[test]
    fn puncture_holonomy_examples() {
        let tri = torus();
        let c = SignedCoords::<Rational>::unit(&tri);
        let conn = build_connection(&tri, &c, TOL).unwrap();
        let hol = conn.puncture_holonomy(0, TOL).unwrap();
        assert_eq!((hol.u(), hol.v()), (&q(1, 1), &q(6, 1)));

        let scaled = scale_action(&tri, &c, &PunctureScaling::new(&tri, vec![q(2, 1)]).unwrap());
        let hol = build_connection(&tri, &scaled, TOL).unwrap().puncture_holonomy(0, TOL).unwrap();
        assert_eq!(hol.v(), &q(6, 4));

        let (tri, c) = torus_mixed();
        assert_eq!(build_connection(&tri, &c, TOL).unwrap_err(), Error::InvalidChart);
        let conn = build_connection_unchecked(&tri, &c);
        let hol = conn.puncture_holonomy(0, TOL).unwrap();
        assert_eq!(hol, BorelElement::identity());
        let circuit = boundary_circuit(&tri, 0);
        assert!(!super::super::is_parabolic(&conn.path_holonomy(&circuit).unwrap(), TOL));
    }

    #[test]
    fn puncture_holonomy_matches_phi() {
        let (tri, c) = quad_point([2, 1, 3, 5], 7, Sign::Plus, Sign::Minus);
        let conn = build_connection(&tri, &c, TOL).unwrap();
        for p in 0..tri.num_vertices() {
            let hol = conn.puncture_holonomy(p, TOL).unwrap();
            assert_eq!(hol.u(), &q(1, 1));
            assert_eq!(hol.v(), &phi_puncture(&tri, &c, p).unwrap());
        }
    }

    #[test]
    fn pi1_counts() {
        for (g, s) in [(1, 1), (0, 3), (0, 4), (1, 2), (2, 1)] {
            let tri = Triangulation::new_surface(g, s).unwrap();
            let conn = build_connection(&tri, &SignedCoords::<Rational>::unit(&tri), TOL).unwrap();
            let rep = pi1_representation(&conn, 0).unwrap();
            let kappa = tri.kappa();
            assert_eq!(rep.generators.len(), 3 * kappa + 1);
            assert_eq!(rep.relations, 2 * kappa);
            assert_eq!(rep.rank(), 2 * g + s - 1);
            for (walk, m) in &rep.generators {
                assert_eq!(walk.start, 0);
                assert_eq!(walk.end(&tri).unwrap(), 0);
                assert!(conn.path_holonomy(walk).unwrap().projectively_eq(m, TOL));
            }
        }
        let tri = torus();
        let conn = build_connection(&tri, &SignedCoords::<Rational>::unit(&tri), TOL).unwrap();
        assert!(matches!(pi1_representation(&conn, 6), Err(Error::MalformedWalk(_))));
    }

    #[test]
    fn hexagon_loops_from_base_are_trivial() {
        let (tri, c) = quad_point([2, 1, 3, 5], 7, Sign::Minus, Sign::Plus);
        let conn = build_connection(&tri, &c, TOL).unwrap();
        let rep = pi1_representation(&conn, 0).unwrap();
        let base_hex = hexagon_walk(&tri, tri.face_of(0));
        assert!(conn.path_holonomy(&base_hex).unwrap().is_identity(TOL));
        assert!(looks_irreducible(&rep, TOL));
    }

    #[test]
    fn complete_face_examples() {
        assert_eq!(complete_face(&q(1, 1), &q(2, 1), &q(3, 1)), (q(6, 1), q(1, 4), q(1, 9)));
        assert_eq!(complete_face(&q(-1, 1), &q(1, 1), &q(1, 1)), (q(1, 1), q(-1, 1), q(-1, 1)));
    }

    #[test]
    fn extension_matches_coordinate_flip() {
        for (sides, diag, s1, s2) in [
            ([1, 1, 1, 1], 1, Sign::Plus, Sign::Plus),
            ([1, 1, 1, 3], 1, Sign::Plus, Sign::Minus),
            ([2, 5, 3, 7], 4, Sign::Minus, Sign::Plus),
            ([2, 5, 3, 7], 4, Sign::Minus, Sign::Minus),
        ] {
            let (tri, c) = quad_point(sides, diag, s1, s2);
            let quad = tri.quad_of(0).unwrap();
            let ext = extend_to_diagonal(&tri, &c, 0, TOL).unwrap();
            let flipped = flip(&tri, &c, 0, TOL).unwrap();
            assert_eq!(&ext.length, flipped.coords.length(0));
            assert_eq!(ext.length, ext.length_from_second);
            assert_eq!(ext.sign_first, flipped.coords.sign(quad.first));
            assert_eq!(ext.sign_second, flipped.coords.sign(quad.second));
            let conn = build_connection(&flipped.triangulation, &flipped.coords, TOL).unwrap();
            for (h, u) in &ext.corners {
                assert_eq!(conn.short(*h), u, "corner {h}");
            }
        }
    }

    #[test]
    fn degenerate_extension() {
        let (tri, c) = quad_point([2, 1, 3, 6], 1, Sign::Plus, Sign::Minus);
        assert_eq!(extend_to_diagonal(&tri, &c, 0, TOL).unwrap_err(), Error::DegenerateFlip { edge: 0 });
        let conn = build_connection(&tri, &c, TOL).unwrap();
        let (a, b) = diagonal_walks(&tri, 0).unwrap();
        assert!(!conn.is_arc_admissible(&a, &b, TOL).unwrap());
    }

    #[test]
    fn existing_edges_are_admissible() {
        let (tri, c) = quad_point([2, 1, 3, 5], 7, Sign::Plus, Sign::Minus);
        let conn = build_connection(&tri, &c, TOL).unwrap();
        for e in 0..tri.num_edges() {
            let (a, b) = edge_walks(&tri, e);
            assert!(conn.is_arc_admissible(&a, &b, TOL).unwrap(), "edge {e}");
            let (a, b) = diagonal_walks(&tri, e).unwrap();
            assert!(conn.is_arc_admissible(&a, &b, TOL).unwrap(), "diagonal of {e}");
        }
    }

    #[test]
    fn cancelled_torus_is_not_parabolic() {
        let (tri, c) = torus_mixed();
        let conn = build_connection_unchecked(&tri, &c);
        let (a, b) = edge_walks(&tri, 0);
        assert_eq!(conn.is_arc_admissible(&a, &b, TOL), Err(Error::NotParabolic));
    }

    #[test]
    fn walks_must_share_start() {
        let tri = torus();
        let conn = build_connection(&tri, &SignedCoords::<Rational>::unit(&tri), TOL).unwrap();
        let err = conn.is_arc_admissible(&Walk::empty(0), &Walk::empty(1), TOL);
        assert!(matches!(err, Err(Error::MalformedWalk(_))));
    }
}
