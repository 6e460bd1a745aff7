//! Closed-form primitives of the first Heisenberg group.
//!
//! Points are `(x, y, t)` with the group law
//! `(x, y, t)·(ξ, η, τ) = (x + ξ, y + η, t + τ + 2(yξ − xη))`.
//! The left-invariant horizontal frame is `X = ∂x + 2y∂t`, `Y = ∂y − 2x∂t`
//! and the vertical plane `W = {x = 0}` is carried as [`WPoint`].
//!
//! Tangent vectors ([`HVector`]) are stored in ambient coordinates. Because
//! `X` and `Y` project onto the standard basis of the `(x, y)` plane, the
//! frame coefficients of a horizontal vector are just its `a` and `b`
//! components; no basis change is ever needed.

use serde::{Deserialize, Serialize};

/// A point of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

/// A point of the vertical plane `x = 0`, in `(y, t)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WPoint {
    pub y: f64,
    pub t: f64,
}

/// A tangent vector in ambient coordinates: `a ∂x + b ∂y + c ∂t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HVector {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HPoint {
    pub const IDENTITY: HPoint = HPoint { x: 0.0, y: 0.0, t: 0.0 };

    pub const fn new(x: f64, y: f64, t: f64) -> Self {
        Self { x, y, t }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.t.is_finite()
    }

    pub fn inverse(&self) -> HPoint {
        HPoint::new(-self.x, -self.y, -self.t)
    }

    /// Ambient difference `self − other`, read as a tangent vector.
    pub fn sub(&self, other: &HPoint) -> HVector {
        HVector::new(self.x - other.x, self.y - other.y, self.t - other.t)
    }

    /// Affine combination `(1 − h)·self + h·other` in ambient coordinates.
    pub fn lerp(&self, other: &HPoint, h: f64) -> HPoint {
        HPoint::new(
            (1.0 - h) * self.x + h * other.x,
            (1.0 - h) * self.y + h * other.y,
            (1.0 - h) * self.t + h * other.t,
        )
    }

    /// Max-norm coordinate distance.
    pub fn max_dist(&self, other: &HPoint) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs()).max((self.t - other.t).abs())
    }
}

impl WPoint {
    pub const fn new(y: f64, t: f64) -> Self {
        Self { y, t }
    }

    /// The point `(0, y, t)` of the group.
    pub fn embed(&self) -> HPoint {
        HPoint::new(0.0, self.y, self.t)
    }
}

impl HVector {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn dot(&self, other: &HVector) -> f64 {
        self.a * other.a + self.b * other.b + self.c * other.c
    }

    pub fn cross(&self, other: &HVector) -> HVector {
        HVector::new(
            self.b * other.c - self.c * other.b,
            self.c * other.a - self.a * other.c,
            self.a * other.b - self.b * other.a,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, k: f64) -> HVector {
        HVector::new(k * self.a, k * self.b, k * self.c)
    }

    pub fn add(&self, other: &HVector) -> HVector {
        HVector::new(self.a + other.a, self.b + other.b, self.c + other.c)
    }
}

/// Group law.
pub fn group_mul(p: HPoint, q: HPoint) -> HPoint {
    HPoint::new(p.x + q.x, p.y + q.y, p.t + q.t + 2.0 * (p.y * q.x - p.x * q.y))
}

/// Flow of the left-invariant field `X` for time `s`.
pub fn flow_x(p: HPoint, s: f64) -> HPoint {
    HPoint::new(p.x + s, p.y, p.t + 2.0 * p.y * s)
}

/// Flow of the right-invariant field `X^r = ∂x − 2y∂t` for time `s`.
pub fn flow_xr(p: HPoint, s: f64) -> HPoint {
    HPoint::new(p.x + s, p.y, p.t - 2.0 * p.y * s)
}

/// Projection onto `W` along the integral lines of `X`.
pub fn project_left(p: HPoint) -> WPoint {
    WPoint::new(p.y, p.t - 2.0 * p.x * p.y)
}

/// Projection onto `W` along the integral lines of `X^r`.
pub fn project_right(p: HPoint) -> WPoint {
    WPoint::new(p.y, p.t + 2.0 * p.x * p.y)
}

/// `X(p)` in ambient coordinates.
pub fn frame_x(p: HPoint) -> HVector {
    HVector::new(1.0, 0.0, 2.0 * p.y)
}

/// `Y(p)` in ambient coordinates.
pub fn frame_y(p: HPoint) -> HVector {
    HVector::new(0.0, 1.0, -2.0 * p.x)
}

/// Horizontal vector `a X(p) + b Y(p)` in ambient coordinates.
pub fn horizontal(p: HPoint, a: f64, b: f64) -> HVector {
    HVector::new(a, b, 2.0 * p.y * a - 2.0 * p.x * b)
}

/// Signed defect of `v` from the horizontal plane at `p`:
/// `2·p.y·v.a − 2·p.x·v.b − v.c`, zero iff `v ∈ H_p`.
pub fn horizontality_residual(p: HPoint, v: HVector) -> f64 {
    2.0 * p.y * v.a - 2.0 * p.x * v.b - v.c
}

/// Point on the left intrinsic graph over `(y, t)` at height `x`.
pub fn lift_left(w: WPoint, x: f64) -> HPoint {
    flow_x(w.embed(), x)
}

/// Point on the right intrinsic graph over `(y, t)` at height `x`.
pub fn lift_right(w: WPoint, x: f64) -> HPoint {
    flow_xr(w.embed(), x)
}
