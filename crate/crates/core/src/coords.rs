//! Signed Penner coordinates: a positive length per edge and a sign per face.
//!
//! The puncture functional is
//! `φ_P(f, ε) = Σ_{corners c at P} ε(T_c) f(O_c) / (f(A_c) f(B_c))`
//! and a pair `(f, ε)` is a chart point exactly when every `φ_P` is non-zero.
//! Under a flip of `e` in the quad `(e, a, b) | (e, c, d)` the only new length
//! is `f′(e′) = |S| / f(e)` with `S = ε(t₂) f(a) f(c) + ε(t₁) f(b) f(d)`; the
//! new faces get `ε′(t₁′) = sign S` and `ε′(t₂′) = ε(t₁) ε(t₂) sign S`.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar, Sign, Tolerance};
use crate::surface::{Corner, EdgeId, FaceId, Relabeling, Triangulation, VertexId};

#[derive(Debug, Clone, PartialEq)]
pub struct SignedCoords<S> {
    f: Vec<S>,
    eps: Vec<Sign>,
}

impl<S: Scalar> SignedCoords<S> {
    pub fn new(tri: &Triangulation, f: Vec<S>, eps: Vec<Sign>) -> Result<Self> {
        if f.len() != tri.num_edges() || eps.len() != tri.num_faces() {
            return Err(Error::Constraint(format!(
                "coordinate domain mismatch: {} lengths / {} signs for {} edges / {} faces",
                f.len(),
                eps.len(),
                tri.num_edges(),
                tri.num_faces()
            )));
        }
        if let Some(e) = f.iter().position(|x| !x.is_positive()) {
            return Err(Error::Constraint(format!("edge {e} has non-positive length")));
        }
        Ok(SignedCoords { f, eps })
    }

    /// `f ≡ 1`, `ε ≡ +1`.
    pub fn unit(tri: &Triangulation) -> Self {
        SignedCoords {
            f: vec![S::one(); tri.num_edges()],
            eps: vec![Sign::Plus; tri.num_faces()],
        }
    }

    pub fn lengths(&self) -> &[S] {
        &self.f
    }

    pub fn signs(&self) -> &[Sign] {
        &self.eps
    }

    pub fn length(&self, e: EdgeId) -> &S {
        &self.f[e]
    }

    pub fn sign(&self, t: FaceId) -> Sign {
        self.eps[t]
    }

    pub fn with_signs(mut self, eps: Vec<Sign>) -> Result<Self> {
        if eps.len() != self.eps.len() {
            return Err(Error::Constraint("sign vector has wrong length".into()));
        }
        self.eps = eps;
        Ok(self)
    }

    /// Negates every face sign.
    pub fn negated(&self) -> Self {
        SignedCoords {
            f: self.f.clone(),
            eps: self.eps.iter().map(|&s| -s).collect(),
        }
    }

    /// Transports the coordinates along an identifier correspondence.
    pub fn relabeled(&self, map: &Relabeling) -> Self {
        let mut f = self.f.clone();
        let mut eps = self.eps.clone();
        for (e, &img) in map.edges.iter().enumerate() {
            f[img] = self.f[e].clone();
        }
        for (t, &img) in map.faces.iter().enumerate() {
            eps[img] = self.eps[t];
        }
        SignedCoords { f, eps }
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }

    /// `{"f": {edge: scalar}, "eps": {face: ±1}, "mode": ...}`.
    pub fn to_json(&self) -> Value {
        let f: Map<String, Value> = self
            .f
            .iter()
            .enumerate()
            .map(|(e, x)| (e.to_string(), x.to_json()))
            .collect();
        let eps: Map<String, Value> = self
            .eps
            .iter()
            .enumerate()
            .map(|(t, s)| (t.to_string(), json!(s.value())))
            .collect();
        json!({ "f": f, "eps": eps, "mode": S::MODE })
    }

    pub fn from_json(tri: &Triangulation, value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("coordinates must be a JSON object".into()))?;
        if let Some(mode) = obj.get("mode") {
            let mode: Mode =
                serde_json::from_value(mode.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            if mode != S::MODE {
                return Err(Error::Parse(format!("expected mode {:?}, found {mode:?}", S::MODE)));
            }
        }
        let table = |key: &str, len: usize| -> Result<Vec<Value>> {
            let map = obj
                .get(key)
                .and_then(Value::as_object)
                .ok_or_else(|| Error::Parse(format!("missing object {key:?}")))?;
            let mut out = vec![Value::Null; len];
            for (k, v) in map {
                let i: usize = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad {key} key {k:?}")))?;
                if i >= len {
                    return Err(Error::Parse(format!("{key} key {i} out of range")));
                }
                out[i] = v.clone();
            }
            if let Some(i) = out.iter().position(Value::is_null) {
                return Err(Error::Parse(format!("{key} entry {i} missing")));
            }
            Ok(out)
        };
        let f = table("f", tri.num_edges())?
            .iter()
            .map(S::from_json)
            .collect::<Result<Vec<_>>>()?;
        let eps = table("eps", tri.num_faces())?
            .iter()
            .map(|v| {
                v.as_i64()
                    .ok_or_else(|| Error::Parse(format!("sign {v} is not an integer")))
                    .and_then(Sign::from_value)
            })
            .collect::<Result<Vec<_>>>()?;
        SignedCoords::new(tri, f, eps)
    }
}

/// Positive scaling factor per puncture.
#[derive(Debug, Clone, PartialEq)]
pub struct PunctureScaling<S> {
    h: Vec<S>,
}

impl<S: Scalar> PunctureScaling<S> {
    pub fn new(tri: &Triangulation, h: Vec<S>) -> Result<Self> {
        if h.len() != tri.num_vertices() {
            return Err(Error::Constraint("one scaling factor per puncture expected".into()));
        }
        if h.iter().any(|x| !x.is_positive()) {
            return Err(Error::Constraint("scaling factors must be positive".into()));
        }
        Ok(PunctureScaling { h })
    }

    pub fn factor(&self, p: VertexId) -> &S {
        &self.h[p]
    }
}

/// One signed corner term `ε(T_c) f(O_c) / (f(A_c) f(B_c))`.
pub fn corner_term<S: Scalar>(c: &SignedCoords<S>, corner: &Corner) -> S {
    let ratio = c.f[corner.opposite].clone()
        / (c.f[corner.flank_a].clone() * c.f[corner.flank_b].clone());
    c.eps[corner.face].apply(ratio)
}

pub fn phi_puncture<S: Scalar>(tri: &Triangulation, c: &SignedCoords<S>, p: VertexId) -> Result<S> {
    Ok(tri
        .corners_at(p)?
        .iter()
        .fold(S::zero(), |acc, corner| acc + corner_term(c, corner)))
}

pub fn phi_total<S: Scalar>(tri: &Triangulation, c: &SignedCoords<S>) -> S {
    (0..tri.num_vertices()).fold(S::one(), |acc, p| {
        acc * phi_puncture(tri, c, p).expect("puncture in range")
    })
}

/// True iff no puncture sum vanishes. In float mode a sum counts as zero
/// when it is within `tol` times the sum of the absolute corner terms.
pub fn is_valid_chart_point<S: Scalar>(tri: &Triangulation, c: &SignedCoords<S>, tol: Tolerance) -> bool {
    (0..tri.num_vertices()).all(|p| {
        let terms: Vec<S> = tri
            .corners_at(p)
            .expect("puncture in range")
            .iter()
            .map(|corner| corner_term(c, corner))
            .collect();
        let sum = terms.iter().cloned().fold(S::zero(), |a, b| a + b);
        let scale = match S::MODE {
            Mode::Rational => S::one(),
            Mode::Float => terms.iter().fold(S::zero(), |a, b| a + b.abs()),
        };
        !sum.is_negligible(&scale, tol)
    })
}

/// `k = ½ Σ_t ε(t)`, an integer in `[−κ, κ]`.
pub fn component_index<S>(c: &SignedCoords<S>) -> i64 {
    let total: i64 = c.eps.iter().map(|s| s.value() as i64).sum();
    total / 2
}

/// `f^h(e) = f(e) h(P(e)) h(Q(e))`; signs are untouched.
pub fn scale_action<S: Scalar>(
    tri: &Triangulation,
    c: &SignedCoords<S>,
    h: &PunctureScaling<S>,
) -> SignedCoords<S> {
    let f = (0..tri.num_edges())
        .map(|e| {
            let (p, q) = tri.endpoints(e);
            c.f[e].clone() * h.h[p].clone() * h.h[q].clone()
        })
        .collect();
    SignedCoords { f, eps: c.eps.clone() }
}

/// Record of one coordinate flip.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipStep<S> {
    pub edge: EdgeId,
    /// `S = ε(t₂) f(a) f(c) + ε(t₁) f(b) f(d)`.
    pub rhs: S,
    /// `ε′(t₁′) = sign S`.
    pub sign: Sign,
}

#[derive(Debug, Clone)]
pub struct Flipped<S> {
    pub triangulation: Triangulation,
    pub coords: SignedCoords<S>,
    pub step: FlipStep<S>,
}

pub fn flip<S: Scalar>(
    tri: &Triangulation,
    c: &SignedCoords<S>,
    e: EdgeId,
    tol: Tolerance,
) -> Result<Flipped<S>> {
    tri.quad_of(e)?;
    if !is_valid_chart_point(tri, c, tol) {
        return Err(Error::InvalidChart);
    }
    flip_unchecked(tri, c, e, tol)
}

/// [`flip`] without the chart-point check. Since every `φ_P` is unchanged
/// by a flip, a sequence only needs checking once, before its first step.
pub fn flip_unchecked<S: Scalar>(
    tri: &Triangulation,
    c: &SignedCoords<S>,
    e: EdgeId,
    tol: Tolerance,
) -> Result<Flipped<S>> {
    let q = tri.quad_of(e)?;
    let (coords, step) = flip_coords(c, &q, tol)?;
    let (triangulation, _) = tri.flip_combinatorial(e)?;
    Ok(Flipped {
        triangulation,
        coords,
        step,
    })
}

/// Coordinate half of a flip, given the quad. Does not check validity.
pub(crate) fn flip_coords<S: Scalar>(
    c: &SignedCoords<S>,
    q: &crate::surface::Quad,
    tol: Tolerance,
) -> Result<(SignedCoords<S>, FlipStep<S>)> {
    let [a, b, cc, d] = q.sides;
    let (e1, e2) = (c.eps[q.first], c.eps[q.second]);
    let ac = c.f[a].clone() * c.f[cc].clone();
    let bd = c.f[b].clone() * c.f[d].clone();
    let scale = ac.clone() + bd.clone();
    let rhs = e2.apply(ac) + e1.apply(bd);
    if rhs.is_negligible(&scale, tol) {
        return Err(Error::DegenerateFlip { edge: q.diagonal });
    }
    let sign = rhs.sign();
    let mut out = c.clone();
    out.f[q.diagonal] = rhs.abs() / c.f[q.diagonal].clone();
    out.eps[q.first] = sign;
    out.eps[q.second] = e1 * e2 * sign;
    Ok((
        out,
        FlipStep {
            edge: q.diagonal,
            rhs,
            sign,
        },
    ))
}

/// Applies flips left to right, stopping at the first failure.
pub fn flip_sequence<S: Scalar>(
    tri: &Triangulation,
    c: &SignedCoords<S>,
    edges: &[EdgeId],
    tol: Tolerance,
) -> Result<(Triangulation, SignedCoords<S>, Vec<FlipStep<S>>)> {
    if !is_valid_chart_point(tri, c, tol) {
        return Err(Error::InvalidChart);
    }
    let mut tri = tri.clone();
    let mut c = c.clone();
    let mut log = Vec::with_capacity(edges.len());
    for (step, &e) in edges.iter().enumerate() {
        let out = flip_unchecked(&tri, &c, e, tol).map_err(|err| match err {
            Error::DegenerateFlip { edge } => Error::DegenerateAt { step, edge },
            other => other,
        })?;
        tri = out.triangulation;
        c = out.coords;
        log.push(out.step);
    }
    Ok((tri, c, log))
}
