//! PSL(2,ℝ) elements and the Borel subgroup.
//!
//! Conventions: `θ = [[0, 1], [−1, 0]]`, the Borel element `(u, v)` is the
//! upper-triangular matrix `[[u, v], [0, 1/u]]`. Matrices are row-major and
//! compared modulo a global sign.

use std::ops::Mul;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMatrix<S> {
    m: [S; 4],
}

impl<S: Scalar> ProjectiveMatrix<S> {
    /// Checks `det = 1` (relative tolerance in float mode).
    pub fn new(entries: [S; 4], tol: Tolerance) -> Result<Self> {
        let m = ProjectiveMatrix { m: entries };
        let det = m.det();
        if !(det.clone() - S::one()).is_negligible(&S::one(), tol) {
            return Err(Error::Constraint(format!("determinant {det} is not 1")));
        }
        Ok(m)
    }

    pub(crate) fn from_entries(entries: [S; 4]) -> Self {
        ProjectiveMatrix { m: entries }
    }

    pub fn identity() -> Self {
        Self::from_entries([S::one(), S::zero(), S::zero(), S::one()])
    }

    /// The Weyl representative with `θ² ≡ 1`.
    pub fn theta() -> Self {
        Self::from_entries([S::zero(), S::one(), -S::one(), S::zero()])
    }

    pub fn entries(&self) -> &[S; 4] {
        &self.m
    }

    pub fn det(&self) -> S {
        let [a, b, c, d] = &self.m;
        a.clone() * d.clone() - b.clone() * c.clone()
    }

    pub fn trace(&self) -> S {
        self.m[0].clone() + self.m[3].clone()
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m.clone();
        Self::from_entries([d, -b, -c, a])
    }

    fn norm(&self) -> S {
        self.m.iter().fold(S::zero(), |acc, x| acc + x.abs())
    }

    /// `M ≡ N` iff `M = N` or `M = −N` (entrywise within tolerance in float mode).
    pub fn projectively_eq(&self, other: &Self, tol: Tolerance) -> bool {
        let scale = self.norm() + other.norm();
        let close = |sign: bool| {
            self.m.iter().zip(&other.m).all(|(x, y)| {
                let diff = if sign { x.clone() - y.clone() } else { x.clone() + y.clone() };
                diff.is_negligible(&scale, tol)
            })
        };
        close(true) || close(false)
    }

    pub fn is_identity(&self, tol: Tolerance) -> bool {
        self.projectively_eq(&Self::identity(), tol)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.m.iter().map(|x| Value::String(x.to_repr())).collect())
    }

    pub fn from_json(value: &Value, tol: Tolerance) -> Result<Self> {
        let arr = value
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| Error::Parse("matrix must be a 4-entry array".into()))?;
        let e = arr.iter().map(S::from_json).collect::<Result<Vec<_>>>()?;
        let [a, b, c, d]: [S; 4] = e.try_into().expect("length checked");
        Self::new([a, b, c, d], tol)
    }
}

impl<S: Scalar> Mul for &ProjectiveMatrix<S> {
    type Output = ProjectiveMatrix<S>;

    fn mul(self, rhs: &ProjectiveMatrix<S>) -> ProjectiveMatrix<S> {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &rhs.m;
        ProjectiveMatrix::from_entries([
            a.clone() * e.clone() + b.clone() * g.clone(),
            a.clone() * f.clone() + b.clone() * h.clone(),
            c.clone() * e.clone() + d.clone() * g.clone(),
            c.clone() * f.clone() + d.clone() * h.clone(),
        ])
    }
}

impl<S: Scalar> Mul for ProjectiveMatrix<S> {
    type Output = ProjectiveMatrix<S>;

    fn mul(self, rhs: ProjectiveMatrix<S>) -> ProjectiveMatrix<S> {
        &self * &rhs
    }
}

/// `(u, v) ∈ ℝ₊ × ℝ` with `(u₁,v₁)(u₂,v₂) = (u₁u₂, u₁v₂ + v₁/u₂)`.
/// `v = 0` is the diagonal part H, `u = 1` the parabolic part T.
#[derive(Debug, Clone, PartialEq)]
pub struct BorelElement<S> {
    u: S,
    v: S,
}

impl<S: Scalar> BorelElement<S> {
    pub fn new(u: S, v: S) -> Result<Self> {
        if !u.is_positive() {
            return Err(Error::Constraint(format!("Borel H-part must be positive, got {u}")));
        }
        Ok(BorelElement { u, v })
    }

    pub fn identity() -> Self {
        BorelElement {
            u: S::one(),
            v: S::zero(),
        }
    }

    /// Pure T-element `(1, v)`.
    pub fn translation(v: S) -> Self {
        BorelElement { u: S::one(), v }
    }

    pub fn u(&self) -> &S {
        &self.u
    }

    pub fn v(&self) -> &S {
        &self.v
    }

    pub fn mul(&self, other: &Self) -> Self {
        BorelElement {
            u: self.u.clone() * other.u.clone(),
            v: self.u.clone() * other.v.clone() + self.v.clone() / other.u.clone(),
        }
    }

    pub fn inv(&self) -> Self {
        BorelElement {
            u: S::one() / self.u.clone(),
            v: -self.v.clone(),
        }
    }

    pub fn to_matrix(&self) -> ProjectiveMatrix<S> {
        ProjectiveMatrix::from_entries([
            self.u.clone(),
            self.v.clone(),
            S::zero(),
            S::one() / self.u.clone(),
        ])
    }

    /// Reads a Borel element off an upper-triangular matrix, fixing the
    /// global sign so that the H-part is positive.
    pub fn from_matrix(m: &ProjectiveMatrix<S>, tol: Tolerance) -> Result<Self> {
        if bruhat_cell(m, tol) != BruhatCell::Borel {
            return Err(Error::Constraint("matrix is not upper triangular".into()));
        }
        let [a, b, _, _] = m.entries().clone();
        let (u, v) = if a.is_negative() { (-a, -b) } else { (a, b) };
        BorelElement::new(u, v)
    }
}

/// Long-edge transport `θ · (f, 0)`.
pub fn long_transport<S: Scalar>(f: &S) -> ProjectiveMatrix<S> {
    &ProjectiveMatrix::theta() * &BorelElement::new(f.clone(), S::zero()).expect("positive length").to_matrix()
}

/// Short-edge transport `(1, u)`.
pub fn short_transport<S: Scalar>(u: &S) -> ProjectiveMatrix<S> {
    BorelElement::translation(u.clone()).to_matrix()
}

/// The two Bruhat cells `G = BθB ⊔ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruhatCell {
    BigCell,
    Borel,
}

pub fn bruhat_cell<S: Scalar>(m: &ProjectiveMatrix<S>, tol: Tolerance) -> BruhatCell {
    if m.entries()[2].is_negligible(&m.norm(), tol) {
        BruhatCell::Borel
    } else {
        BruhatCell::BigCell
    }
}

/// A point `(x : y)` of the projective line, kept as an undivided pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> ProjectivePoint<S> {
    /// Cross-product test `x₁y₂ − x₂y₁ = 0`.
    pub fn same_as(&self, other: &Self, tol: Tolerance) -> bool {
        let cross = self.x.clone() * other.y.clone() - other.x.clone() * self.y.clone();
        let scale = (self.x.abs() + self.y.abs()) * (other.x.abs() + other.y.abs());
        cross.is_negligible(&scale, tol)
    }
}

/// `|tr M| = 2` and `M ≢ 1`. In float mode the trace test is
/// `||tr| − 2| ≤ δ (1 + |tr|)`.
pub fn is_parabolic<S: Scalar>(m: &ProjectiveMatrix<S>, tol: Tolerance) -> bool {
    let tr = m.trace().abs();
    let two = S::from_i64(2);
    let scale = S::one() + tr.clone();
    (tr - two).is_negligible(&scale, tol) && !m.is_identity(tol)
}

/// The unique fixed point of a parabolic element.
pub fn parabolic_fixed_point<S: Scalar>(
    m: &ProjectiveMatrix<S>,
    tol: Tolerance,
) -> Result<ProjectivePoint<S>> {
    if !is_parabolic(m, tol) {
        return Err(Error::NotParabolic);
    }
    let lambda = if m.trace().is_negative() { -S::one() } else { S::one() };
    let [a, b, c, d] = m.entries().clone();
    // (M − λ) has rank one; any non-zero row gives the kernel.
    let (n11, n12) = (a - lambda.clone(), b);
    let (n21, n22) = (c, d - lambda);
    let row1 = n11.abs() + n12.abs();
    let row2 = n21.abs() + n22.abs();
    Ok(if row1 >= row2 {
        ProjectivePoint { x: n12, y: -n11 }
    } else {
        ProjectivePoint { x: n22, y: -n21 }
    })
}

/// Whether two parabolic elements lie in the same parabolic subgroup,
/// i.e. share their fixed point.
pub fn same_parabolic_subgroup<S: Scalar>(
    a: &ProjectiveMatrix<S>,
    b: &ProjectiveMatrix<S>,
    tol: Tolerance,
) -> Result<bool> {
    let pa = parabolic_fixed_point(a, tol)?;
    let pb = parabolic_fixed_point(b, tol)?;
    Ok(pa.same_as(&pb, tol))
}

/// `p + q·r` with `r² = D`, for exact eigenvector tests when `√D` is irrational.
#[derive(Clone)]
struct Surd<S> {
    p: S,
    q: S,
}

impl<S: Scalar> Surd<S> {
    fn rational(p: S) -> Self {
        Surd { p, q: S::zero() }
    }
    fn add(&self, o: &Self) -> Self {
        Surd {
            p: self.p.clone() + o.p.clone(),
            q: self.q.clone() + o.q.clone(),
        }
    }
    fn scale(&self, k: &S) -> Self {
        Surd {
            p: self.p.clone() * k.clone(),
            q: self.q.clone() * k.clone(),
        }
    }
    fn mul(&self, o: &Self, disc: &S) -> Self {
        Surd {
            p: self.p.clone() * o.p.clone() + self.q.clone() * o.q.clone() * disc.clone(),
            q: self.p.clone() * o.q.clone() + self.q.clone() * o.p.clone(),
        }
    }
}

/// Whether `b` maps the direction `(v1, v2)` to itself.
fn fixes_direction<S: Scalar>(b: &ProjectiveMatrix<S>, v1: &Surd<S>, v2: &Surd<S>, disc: &S, tol: Tolerance) -> bool {
    let [b11, b12, b21, b22] = b.entries().clone();
    let t1 = v1.mul(v1, disc).scale(&b21);
    let t2 = v1.mul(v2, disc).scale(&(b22 - b11));
    let t3 = v2.mul(v2, disc).scale(&-b12);
    let sum = t1.add(&t2).add(&t3);
    let w = v1.p.abs() + v1.q.abs() + v2.p.abs() + v2.q.abs();
    let scale = b.norm() * w.clone() * w;
    sum.p.is_negligible(&scale, tol) && sum.q.is_negligible(&scale, tol)
}

/// Whether all matrices fix a common point of the real projective line.
/// A `true` answer means the generated group is reducible; `false` is only
/// evidence of irreducibility. Exact in rational mode.
pub fn share_fixed_point<S: Scalar>(mats: &[ProjectiveMatrix<S>], tol: Tolerance) -> bool {
    let Some(first) = mats.iter().find(|m| !m.is_identity(tol)) else {
        return true;
    };
    let [a, b, c, d] = first.entries().clone();
    let tr = a.clone() + d.clone();
    let disc = tr.clone() * tr.clone() - S::from_i64(4);
    let two = S::from_i64(2);
    let scale = tr.clone() * tr.clone() + S::from_i64(4);
    if disc.is_negative() && !disc.is_negligible(&scale, tol) {
        return false;
    }
    let disc_zero = disc.is_negligible(&scale, tol);
    let root = if disc_zero { Some(S::zero()) } else { disc.sqrt_exact() };
    // eigenvalue λ = (tr + r)/2 with r = ±√D
    let candidates: Vec<(Surd<S>, Surd<S>)> = {
        let signs: &[i64] = if disc_zero { &[1] } else { &[1, -1] };
        signs
            .iter()
            .map(|&sgn| {
                let r = match &root {
                    Some(r) => Surd::rational(r.clone() * S::from_i64(sgn)),
                    None => Surd { p: S::zero(), q: S::from_i64(sgn) },
                };
                let half_tr = tr.clone() / two.clone();
                let half_r = r.scale(&(S::one() / two.clone()));
                let lambda = Surd::rational(half_tr).add(&half_r);
                let bscale = first.norm();
                if !b.is_negligible(&bscale, tol) {
                    (Surd::rational(b.clone()), lambda.add(&Surd::rational(-a.clone())))
                } else if !c.is_negligible(&bscale, tol) {
                    (lambda.add(&Surd::rational(-d.clone())), Surd::rational(c.clone()))
                } else if sgn == 1 {
                    (Surd::rational(S::one()), Surd::rational(S::zero()))
                } else {
                    (Surd::rational(S::zero()), Surd::rational(S::one()))
                }
            })
            .collect()
    };
    let disc_for_mul = if root.is_some() { S::zero() } else { disc };
    candidates.iter().any(|(v1, v2)| {
        mats.iter()
            .all(|m| fixes_direction(m, v1, v2, &disc_for_mul, tol))
    })
}
