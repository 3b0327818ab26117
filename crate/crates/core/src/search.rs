//! Sampling chart points, routing through non-degenerate flips, and
//! component censuses.
//!
//! Everything here is deterministic in the seed: a census draws each sign
//! class from its own ChaCha stream, so results do not depend on thread
//! scheduling.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::coords::{
    component_index, flip_coords, flip_unchecked, is_valid_chart_point, SignedCoords,
};
use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar, Sign, Tolerance};
use crate::surface::{EdgeId, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignChoice {
    Uniform,
    Fixed(Vec<Sign>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub seed: u64,
    /// Lengths are log-uniform on `[1/R, R]`.
    pub bound: f64,
    /// Largest denominator of a rational sample.
    pub max_den: i64,
    pub signs: SignChoice,
    /// Draws attempted before giving up on a vanishing `φ`.
    pub retries: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            seed: 0,
            bound: 10.0,
            max_den: 1000,
            signs: SignChoice::Uniform,
            retries: 64,
        }
    }
}

impl SampleSpec {
    pub fn with_seed(seed: u64) -> Self {
        SampleSpec { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bound > 1.0 && self.bound.is_finite()) {
            return Err(Error::Constraint(format!("length bound must exceed 1, got {}", self.bound)));
        }
        if self.max_den < 1 {
            return Err(Error::Constraint("maximal denominator must be positive".into()));
        }
        Ok(())
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn sample_length<S: Scalar, R: Rng>(rng: &mut R, spec: &SampleSpec) -> S {
    let x = spec.bound.powf(2.0 * rng.gen::<f64>() - 1.0);
    match S::MODE {
        Mode::Float => S::from_f64(x),
        Mode::Rational => {
            let q = rng.gen_range(1..=spec.max_den);
            let p = ((x * q as f64).round() as i64).max(1);
            S::from_ratio(p, q)
        }
    }
}

/// One draw of lengths and signs, valid or not.
pub fn sample_coords<S: Scalar, R: Rng>(
    tri: &Triangulation,
    spec: &SampleSpec,
    rng: &mut R,
) -> Result<SignedCoords<S>> {
    let f = (0..tri.num_edges()).map(|_| sample_length(rng, spec)).collect();
    let eps = match &spec.signs {
        SignChoice::Uniform => (0..tri.num_faces())
            .map(|_| if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus })
            .collect(),
        SignChoice::Fixed(eps) => eps.clone(),
    };
    SignedCoords::new(tri, f, eps)
}

/// Rejection-samples a chart point with a fresh generator seeded from the
/// spec.
pub fn sample_chart_point<S: Scalar>(
    tri: &Triangulation,
    spec: &SampleSpec,
    tol: Tolerance,
) -> Result<SignedCoords<S>> {
    sample_chart_point_with(tri, spec, &mut spec.rng(), tol)
}

/// As [`sample_chart_point`], drawing from a caller-owned generator.
pub fn sample_chart_point_with<S: Scalar, R: Rng>(
    tri: &Triangulation,
    spec: &SampleSpec,
    rng: &mut R,
    tol: Tolerance,
) -> Result<SignedCoords<S>> {
    spec.validate()?;
    for _ in 0..spec.retries.max(1) {
        let c = sample_coords(tri, spec, rng)?;
        if is_valid_chart_point(tri, &c, tol) {
            return Ok(c);
        }
    }
    Err(Error::IdenticallyInvalid { retries: spec.retries.max(1) })
}

/// Edges whose flip is defined and non-degenerate.
pub fn admissible_flip_targets<S: Scalar>(
    tri: &Triangulation,
    c: &SignedCoords<S>,
    tol: Tolerance,
) -> BTreeSet<EdgeId> {
    (0..tri.num_edges())
        .filter(|&e| {
            tri.quad_of(e)
                .map(|q| flip_coords(c, &q, tol).is_ok())
                .unwrap_or(false)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteStep<S> {
    pub edge: EdgeId,
    /// Right-hand side `S` of the flip.
    pub rhs: S,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route<S> {
    pub steps: Vec<RouteStep<S>>,
    pub success: bool,
    /// Index of the flip that degenerated, on failed replays.
    pub failure_step: Option<usize>,
}

impl<S: Scalar> Route<S> {
    pub fn edges(&self) -> Vec<EdgeId> {
        self.steps.iter().map(|s| s.edge).collect()
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| json!({ "edge": s.edge, "S": s.rhs.to_repr(), "sign": s.sign.value() }))
            .collect();
        json!({ "steps": steps, "success": self.success, "failure_step": self.failure_step })
    }
}

/// Result of replaying a flip list: the log and the last state reached.
#[derive(Debug, Clone)]
pub struct Replay<S> {
    pub route: Route<S>,
    pub triangulation: Triangulation,
    pub coords: SignedCoords<S>,
}

/// Applies `edges` in order, stopping at the first degenerate flip.
pub fn replay_route<S: Scalar>(
    tri: &Triangulation,
    c: &SignedCoords<S>,
    edges: &[EdgeId],
    tol: Tolerance,
) -> Result<Replay<S>> {
    if !is_valid_chart_point(tri, c, tol) {
        return Err(Error::InvalidChart);
    }
    let mut tri = tri.clone();
    let mut c = c.clone();
    let mut steps = Vec::with_capacity(edges.len());
    for (i, &e) in edges.iter().enumerate() {
        match flip_unchecked(&tri, &c, e, tol) {
            Ok(out) => {
                steps.push(RouteStep { edge: e, rhs: out.step.rhs, sign: out.step.sign });
                tri = out.triangulation;
                c = out.coords;
            }
            Err(Error::DegenerateFlip { .. }) => {
                return Ok(Replay {
                    route: Route { steps, success: false, failure_step: Some(i) },
                    triangulation: tri,
                    coords: c,
                })
            }
            Err(other) => return Err(other),
        }
    }
    Ok(Replay {
        route: Route { steps, success: true, failure_step: None },
        triangulation: tri,
        coords: c,
    })
}

/// Depth used when none is given: twice the number of edges.
pub fn default_depth(tri: &Triangulation) -> usize {
    2 * tri.num_edges()
}

/// Breadth-first search for a flip sequence from `tri` to a triangulation
/// with the same edge labels as `target`, using only non-degenerate flips.
///
/// States are identified up to edge-label-preserving isomorphism; the
/// coordinates at such a state do not depend on the path taken, so the
/// first visit is kept. Exhausting `depth` is inconclusive, not a proof
/// that no route exists.
pub fn find_route<S: Scalar>(
    tri: &Triangulation,
    c: &SignedCoords<S>,
    target: &Triangulation,
    depth: usize,
    tol: Tolerance,
) -> Result<Route<S>> {
    if tri.genus() != target.genus() || tri.punctures() != target.punctures() {
        return Err(Error::Constraint("target is a different surface".into()));
    }
    if !is_valid_chart_point(tri, c, tol) {
        return Err(Error::InvalidChart);
    }
    let reached = |t: &Triangulation| t.edge_preserving_isomorphism(target).is_some();
    let start = Route { steps: Vec::new(), success: true, failure_step: None };
    if reached(tri) {
        return Ok(start);
    }
    let mut seen = HashSet::from([tri.edge_labeled_code()]);
    let mut frontier = VecDeque::from([(tri.clone(), c.clone(), start)]);
    while let Some((t, coords, route)) = frontier.pop_front() {
        if route.steps.len() >= depth {
            continue;
        }
        for e in t.flippable_edges() {
            let out = match flip_unchecked(&t, &coords, e, tol) {
                Ok(out) => out,
                Err(Error::DegenerateFlip { .. }) => continue,
                Err(other) => return Err(other),
            };
            if !seen.insert(out.triangulation.edge_labeled_code()) {
                continue;
            }
            let mut next = route.clone();
            next.steps.push(RouteStep { edge: e, rhs: out.step.rhs, sign: out.step.sign });
            if reached(&out.triangulation) {
                return Ok(next);
            }
            frontier.push_back((out.triangulation, out.coords, next));
        }
    }
    Err(Error::Inconclusive { depth })
}

/// Two edges sharing a face whose quads span three distinct faces, so that
/// flipping `[d1, d2]` and `[d2, d1, d2]` are the two sides of a pentagon.
/// The second route lands on the same triangulation with the labels of
/// `d1` and `d2` exchanged.
pub fn pentagon_pair(tri: &Triangulation) -> Option<(EdgeId, EdgeId)> {
    for d1 in tri.flippable_edges() {
        let q1 = tri.quad_of(d1).ok()?;
        for d2 in tri.flippable_edges() {
            if d2 == d1 || !q1.sides.contains(&d2) {
                continue;
            }
            let Ok(q2) = tri.quad_of(d2) else { continue };
            let faces: BTreeSet<_> = [q1.first, q1.second, q2.first, q2.second].into_iter().collect();
            if faces.len() == 3 {
                return Some((d1, d2));
            }
        }
    }
    None
}

/// Whether two labeled states describe the same point, comparing through
/// the isomorphism that fixes the index-0 half-edge of `anchor`.
pub fn same_point<S: Scalar>(
    a: (&Triangulation, &SignedCoords<S>),
    b: (&Triangulation, &SignedCoords<S>),
    anchor: EdgeId,
) -> bool {
    let h = a.0.edges()[anchor][0];
    let Some(iso) = a.0.isomorphism_from_anchor(b.0, h, b.0.edges()[anchor][0]) else {
        return false;
    };
    a.1.relabeled(&iso) == *b.1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    /// Representative sign pattern, one `+`/`-` per face.
    pub pattern_class: String,
    /// Number of sign patterns in the class.
    pub class_size: usize,
    pub k: i64,
    pub trials: usize,
    pub valid: usize,
    pub invalid: usize,
}

/// Sign patterns of the canonical triangulation up to its automorphisms,
/// each class given by its smallest member (`+` before `-`).
pub fn sign_pattern_classes(tri: &Triangulation) -> Result<Vec<(Vec<Sign>, usize)>> {
    let n = tri.num_faces();
    if n > 20 {
        return Err(Error::Constraint(format!("{n} faces is too many sign patterns to enumerate")));
    }
    let autos = tri.automorphisms();
    let decode = |bits: u32| -> Vec<Sign> {
        (0..n)
            .map(|t| if bits >> t & 1 == 1 { Sign::Minus } else { Sign::Plus })
            .collect()
    };
    let encode = |eps: &[Sign]| -> u32 {
        eps.iter()
            .enumerate()
            .map(|(t, s)| if *s == Sign::Minus { 1 << t } else { 0 })
            .sum()
    };
    let mut classes: BTreeMap<String, (Vec<Sign>, usize)> = BTreeMap::new();
    let mut done = vec![false; 1 << n];
    for bits in 0..1u32 << n {
        if done[bits as usize] {
            continue;
        }
        let eps = decode(bits);
        let mut orbit = BTreeSet::new();
        for iso in &autos {
            let mut image = eps.clone();
            for (t, &img) in iso.faces.iter().enumerate() {
                image[img] = eps[t];
            }
            orbit.insert(encode(&image));
        }
        for &m in &orbit {
            done[m as usize] = true;
        }
        let rep = decode(*orbit.iter().min_by_key(|&&m| pattern_string(&decode(m))).unwrap());
        classes.insert(pattern_string(&rep), (rep, orbit.len()));
    }
    Ok(classes.into_values().collect())
}

pub fn pattern_string(eps: &[Sign]) -> String {
    eps.iter().map(|s| s.as_char()).collect()
}

/// For each sign class of the canonical triangulation of `(g, s)`, draws
/// `trials` length vectors and counts those giving chart points.
pub fn component_census<S: Scalar>(
    genus: usize,
    punctures: usize,
    spec: &SampleSpec,
    trials: usize,
    tol: Tolerance,
) -> Result<Vec<CensusRow>> {
    spec.validate()?;
    let tri = Triangulation::new_surface(genus, punctures)?;
    let classes = sign_pattern_classes(&tri)?;
    let rows = classes
        .par_iter()
        .enumerate()
        .map(|(i, (eps, size))| {
            let mut rng = spec.rng();
            rng.set_stream(i as u64);
            let spec = SampleSpec { signs: SignChoice::Fixed(eps.clone()), ..spec.clone() };
            let mut valid = 0;
            for _ in 0..trials {
                let c: SignedCoords<S> = sample_coords(&tri, &spec, &mut rng)?;
                if is_valid_chart_point(&tri, &c, tol) {
                    valid += 1;
                }
            }
            let k = component_index(&SignedCoords::<S>::unit(&tri).with_signs(eps.clone())?);
            Ok(CensusRow {
                pattern_class: pattern_string(eps),
                class_size: *size,
                k,
                trials,
                valid,
                invalid: trials - valid,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows)
}

pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut out = String::from("pattern_class,k,trials,valid,invalid\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.pattern_class, r.k, r.trials, r.valid, r.invalid));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    const TOL: Tolerance = Tolerance(1e-9);

    fn torus() -> Triangulation {
        Triangulation::new_surface(1, 1).unwrap()
    }

    fn fixed(eps: &[i64], seed: u64) -> SampleSpec {
        SampleSpec {
            signs: SignChoice::Fixed(eps.iter().map(|&v| Sign::from_value(v).unwrap()).collect()),
            ..SampleSpec::with_seed(seed)
        }
    }

    #[test]
    fn positive_torus_samples_are_valid() {
        let tri = torus();
        for seed in 0..20 {
            let c: SignedCoords<Rational> = sample_chart_point(&tri, &fixed(&[1, 1], seed), TOL).unwrap();
            assert!(is_valid_chart_point(&tri, &c, TOL));
            for x in c.lengths() {
                assert!(x.denom() <= &1000.into());
                assert!(x.to_f64() >= 0.099 && x.to_f64() <= 10.01);
            }
        }
    }

    #[test]
    fn cancelling_torus_is_identically_invalid() {
        let tri = torus();
        let err = sample_chart_point::<Rational>(&tri, &fixed(&[1, -1], 3), TOL).unwrap_err();
        assert_eq!(err, Error::IdenticallyInvalid { retries: 64 });
    }

    #[test]
    fn sampling_is_reproducible() {
        let tri = Triangulation::new_surface(0, 4).unwrap();
        let spec = SampleSpec::with_seed(11);
        let a: SignedCoords<Rational> = sample_chart_point(&tri, &spec, TOL).unwrap();
        let b: SignedCoords<Rational> = sample_chart_point(&tri, &spec, TOL).unwrap();
        assert_eq!(a, b);
        let x: SignedCoords<f64> = sample_chart_point(&tri, &spec, TOL).unwrap();
        let y: SignedCoords<f64> = sample_chart_point(&tri, &spec, TOL).unwrap();
        assert_eq!(x.lengths(), y.lengths());
    }

    #[test]
    fn bad_specs_are_rejected() {
        let tri = torus();
        let spec = SampleSpec { bound: 1.0, ..SampleSpec::default() };
        assert!(matches!(sample_chart_point::<f64>(&tri, &spec, TOL), Err(Error::Constraint(_))));
        let spec = SampleSpec { max_den: 0, ..SampleSpec::default() };
        assert!(matches!(sample_chart_point::<Rational>(&tri, &spec, TOL), Err(Error::Constraint(_))));
    }

    #[test]
    fn flip_targets() {
        let tri = torus();
        let c = SignedCoords::<Rational>::unit(&tri);
        assert_eq!(admissible_flip_targets(&tri, &c, TOL), BTreeSet::from([0, 1, 2]));

        let tri = Triangulation::new_surface(0, 4).unwrap();
        let quad = tri.quad_of(0).unwrap();
        let mut f = vec![Rational::from_i64(1); 6];
        for (side, len) in quad.sides.iter().zip([2, 1, 3, 6]) {
            f[*side] = Rational::from_i64(len);
        }
        let mut eps = vec![Sign::Plus; 4];
        eps[quad.second] = Sign::Minus;
        let c = SignedCoords::new(&tri, f, eps).unwrap();
        let targets = admissible_flip_targets(&tri, &c, TOL);
        assert!(!targets.contains(&0));
        assert_eq!(targets.len(), 5);
    }

    #[test]
    fn route_to_self_is_empty() {
        let tri = torus();
        let c = SignedCoords::<Rational>::unit(&tri);
        let route = find_route(&tri, &c, &tri, 0, TOL).unwrap();
        assert!(route.success && route.steps.is_empty());
    }

    #[test]
    fn routes_on_the_torus() {
        let tri = torus();
        let c: SignedCoords<Rational> = sample_chart_point(&tri, &fixed(&[1, 1], 5), TOL).unwrap();
        let target = replay_route(&tri, &c, &[0, 1, 2, 0], TOL).unwrap().triangulation;
        let route = find_route(&tri, &c, &target, 6, TOL).unwrap();
        assert!(route.success && route.steps.len() <= 4);
        let replay = replay_route(&tri, &c, &route.edges(), TOL).unwrap();
        assert_eq!(replay.route, route);
        assert!(replay.triangulation.edge_preserving_isomorphism(&target).is_some());
        assert!(is_valid_chart_point(&replay.triangulation, &replay.coords, TOL));
    }

    #[test]
    fn blocked_route_is_inconclusive() {
        let tri = Triangulation::new_surface(0, 4).unwrap();
        let quad = tri.quad_of(0).unwrap();
        let mut f = vec![Rational::from_i64(1); 6];
        for (side, len) in quad.sides.iter().zip([2, 1, 3, 6]) {
            f[*side] = Rational::from_i64(len);
        }
        let mut eps = vec![Sign::Plus; 4];
        eps[quad.second] = Sign::Minus;
        let c = SignedCoords::new(&tri, f, eps).unwrap();
        let (target, _) = tri.flip_combinatorial(0).unwrap();
        assert_eq!(find_route(&tri, &c, &target, 1, TOL).unwrap_err(), Error::Inconclusive { depth: 1 });
        let replay = replay_route(&tri, &c, &[0], TOL).unwrap();
        assert!(!replay.route.success);
        assert_eq!(replay.route.failure_step, Some(0));
    }

    #[test]
    fn route_rejects_other_surfaces() {
        let tri = torus();
        let other = Triangulation::new_surface(0, 3).unwrap();
        let c = SignedCoords::<Rational>::unit(&tri);
        assert!(matches!(find_route(&tri, &c, &other, 3, TOL), Err(Error::Constraint(_))));
    }

    #[test]
    fn pentagon_routes_agree() {
        let tri = Triangulation::new_surface(0, 4).unwrap();
        let (d1, d2) = pentagon_pair(&tri).unwrap();
        let c: SignedCoords<Rational> = sample_chart_point(&tri, &fixed(&[1, 1, 1, 1], 2), TOL).unwrap();
        let one = replay_route(&tri, &c, &[d1, d2], TOL).unwrap();
        let two = replay_route(&tri, &c, &[d2, d1, d2], TOL).unwrap();
        let anchor = (0..6).find(|e| ![d1, d2].contains(e)).unwrap();
        assert!(same_point(
            (&one.triangulation, &one.coords),
            (&two.triangulation, &two.coords),
            anchor
        ));
        assert_eq!(one.coords.length(d1), two.coords.length(d2));
        assert_eq!(one.coords.length(d2), two.coords.length(d1));
    }

    #[test]
    fn torus_census() {
        let rows = component_census::<Rational>(1, 1, &SampleSpec::with_seed(1), 50, TOL).unwrap();
        let summary: Vec<_> = rows.iter().map(|r| (r.pattern_class.as_str(), r.class_size, r.k, r.valid)).collect();
        assert_eq!(summary, vec![("++", 1, 1, 50), ("+-", 2, 0, 0), ("--", 1, -1, 50)]);
        let csv = census_csv(&rows);
        assert!(csv.starts_with("pattern_class,k,trials,valid,invalid\n++,1,50,50,0\n"));
        let again = component_census::<Rational>(1, 1, &SampleSpec::with_seed(1), 50, TOL).unwrap();
        assert_eq!(rows, again);
    }

    #[test]
    fn four_punctured_sphere_census() {
        let rows = component_census::<f64>(0, 4, &SampleSpec::with_seed(9), 40, TOL).unwrap();
        let total: usize = rows.iter().map(|r| r.class_size).sum();
        assert_eq!(total, 16);
        for r in &rows {
            assert!(r.k.abs() <= 2);
            assert_eq!(r.valid + r.invalid, 40);
        }
        assert!(rows.iter().any(|r| r.k == 2 && r.valid == 40));
        assert!(rows.iter().any(|r| r.k == -2 && r.valid == 40));
    }
}
