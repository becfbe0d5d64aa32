//! Points and lines of the real projective plane in homogeneous coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[inline]
fn cross<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
fn dot<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> S {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn norm<S: Scalar>(a: &[S; 3]) -> S {
    dot(a, a).sqrt()
}

fn scaled<S: Scalar>(a: &[S; 3], k: S) -> [S; 3] {
    [a[0] * k, a[1] * k, a[2] * k]
}

/// Rescales to unit norm with the largest-magnitude entry positive.
fn canonical<S: Scalar>(a: &[S; 3]) -> [S; 3] {
    let n = norm(a);
    if n == S::zero() {
        return *a;
    }
    let big = a
        .iter()
        .copied()
        .fold(S::zero(), |m, x| if x.abs() > m.abs() { x } else { m });
    let k = if big < S::zero() { -n.recip() } else { n.recip() };
    scaled(a, k)
}

/// Angle between two homogeneous vectors as projective points, in `[0, pi/2]`.
pub fn projective_angle<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> S {
    norm(&cross(a, b)).atan2(dot(a, b).abs())
}

macro_rules! hom_type {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name<S>(pub [S; 3]);

        impl<S: Scalar> $name<S> {
            pub fn new(x: S, y: S, z: S) -> Self {
                $name([x, y, z])
            }

            pub fn coords(&self) -> [S; 3] {
                self.0
            }

            pub fn norm(&self) -> S {
                norm(&self.0)
            }

            /// Unit norm, sign fixed so equal points compare equal.
            pub fn normalized(&self) -> Self {
                $name(canonical(&self.0))
            }

            /// Unit norm without touching the sign, so the result varies
            /// continuously with the input.
            pub fn unit(&self) -> Self {
                $name(scaled(&self.0, self.norm().recip()))
            }

            pub fn is_degenerate(&self, tol: S) -> bool {
                self.norm() <= tol
            }

            pub fn cast<T: Scalar>(&self) -> $name<T> {
                $name(self.0.map(|x| T::lit(x.as_f64())))
            }
        }

        impl<S: Scalar> fmt::Display for $name<S> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
            }
        }
    };
}

hom_type!(HomPoint, "A point `(x : y : z)`; `z = 0` is a point at infinity.");
hom_type!(HomLine, "The line `a x + b y + c z = 0`.");

impl<S: Scalar> HomPoint<S> {
    /// The affine point `(x, y)`.
    pub fn affine(x: S, y: S) -> Self {
        HomPoint([x, y, S::one()])
    }

    /// `(x, y)` if the point is finite at tolerance `tol`.
    pub fn to_affine(&self, tol: S) -> Option<(S, S)> {
        let p = self.unit();
        if p.0[2].abs() <= tol {
            None
        } else {
            Some((p.0[0] / p.0[2], p.0[1] / p.0[2]))
        }
    }

    /// The line through both points (not normalized).
    pub fn join(&self, other: &HomPoint<S>) -> HomLine<S> {
        HomLine(cross(&self.0, &other.0))
    }

    pub fn distance(&self, other: &HomPoint<S>) -> S {
        projective_angle(&self.0, &other.0)
    }
}

impl<S: Scalar> HomLine<S> {
    /// The common point of both lines (not normalized).
    pub fn meet(&self, other: &HomLine<S>) -> HomPoint<S> {
        HomPoint(cross(&self.0, &other.0))
    }

    /// `|<l, p>| / (|l| |p|)`: zero exactly when `p` lies on the line.
    pub fn incidence(&self, p: &HomPoint<S>) -> S {
        let d = self.norm() * p.norm();
        if d == S::zero() {
            S::zero()
        } else {
            dot(&self.0, &p.0).abs() / d
        }
    }

    /// Like [`HomLine::incidence`] but keeps the sign.
    pub fn signed_incidence(&self, p: &HomPoint<S>) -> S {
        let d = self.norm() * p.norm();
        if d == S::zero() {
            S::zero()
        } else {
            dot(&self.0, &p.0) / d
        }
    }

    pub fn distance(&self, other: &HomLine<S>) -> S {
        projective_angle(&self.0, &other.0)
    }
}

/// Normalized determinant of three lines: zero iff they are concurrent.
pub fn concurrence<S: Scalar>(a: &HomLine<S>, b: &HomLine<S>, c: &HomLine<S>) -> S {
    let d = a.norm() * b.norm() * c.norm();
    if d == S::zero() {
        S::zero()
    } else {
        dot(&a.0, &cross(&b.0, &c.0)) / d
    }
}
