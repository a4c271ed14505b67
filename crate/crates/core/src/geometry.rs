//! Vectors, polygons and the constraint residuals that define an
//! equilateral, equiangular polygon.
//!
//! All edges are measured against unit length and every vertex angle
//! `angle(P[i-1], P[i], P[i+1])` against the bond angle.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edges shorter than this make a vertex angle undefined.
pub const DEGENERATE_EDGE: f64 = 1e-12;

/// Two bond angles closer than this are treated as the same regime boundary.
pub const ANGLE_EPS: f64 = 1e-12;

/// Low part of pi in double-double form: `PI + PI_LO` is pi to ~32 digits.
const PI_LO: f64 = 1.224_646_799_147_353_2e-16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Angle between two nonzero vectors in `[0, pi]`.
///
/// Uses `atan2(|u x v|, u . v)`, which stays accurate near 0 and pi where
/// `acos` of the normalized dot product loses half its digits.
pub fn angle_between(u: Vec3, v: Vec3) -> f64 {
    u.cross(v).norm().atan2(u.dot(v))
}

/// A closed polygon; vertex indices are taken modulo `len()`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec3>", into = "Vec<Vec3>")]
pub struct Polygon {
    vertices: Vec<Vec3>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec3>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn vertex(&self, i: isize) -> Vec3 {
        let n = self.vertices.len() as isize;
        self.vertices[i.rem_euclid(n) as usize]
    }

    /// Edge vectors `P[i+1] - P[i]`.
    pub fn edges(&self) -> impl Iterator<Item = Vec3> + '_ {
        let n = self.len() as isize;
        (0..n).map(move |i| self.vertex(i + 1) - self.vertex(i))
    }

    /// Reflection `z -> -z`; an orientation-reversing isometry, so the image is
    /// the mirror configuration.
    pub fn mirror_z(&self) -> Polygon {
        Polygon {
            vertices: self
                .vertices
                .iter()
                .map(|v| Vec3::new(v.x, v.y, -v.z))
                .collect(),
        }
    }

    /// Applies `v -> rotation * v + translation`. Rows of `rotation` are used
    /// as given; callers pass a proper rotation.
    pub fn transformed(&self, rotation: [[f64; 3]; 3], translation: Vec3) -> Polygon {
        let apply = |v: Vec3| {
            let r = |row: [f64; 3]| row[0] * v.x + row[1] * v.y + row[2] * v.z;
            Vec3::new(r(rotation[0]), r(rotation[1]), r(rotation[2])) + translation
        };
        Polygon {
            vertices: self.vertices.iter().copied().map(apply).collect(),
        }
    }
}

impl TryFrom<Vec<Vec3>> for Polygon {
    type Error = Error;
    fn try_from(vertices: Vec<Vec3>) -> Result<Self> {
        Polygon::new(vertices)
    }
}

impl From<Polygon> for Vec<Vec3> {
    fn from(p: Polygon) -> Self {
        p.vertices
    }
}

/// The common vertex angle theta together with `C = cos(theta/2)` and
/// `S = sin(theta/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BondAngle {
    theta: f64,
    c: f64,
    s: f64,
}

impl BondAngle {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..PI).contains(&theta) {
            return Err(Error::BondAngleRange(theta));
        }
        let (s, c) = (0.5 * theta).sin_cos();
        Ok(Self { theta, c, s })
    }

    /// `num * pi / den`, rounded once from a double-double product so that
    /// fractions such as `pi/3` land on the nearest double.
    pub fn from_pi_fraction(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Self::new(pi_fraction(num, den))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `cos(theta / 2)`
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `sin(theta / 2)`
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn is_near(&self, value: f64) -> bool {
        (self.theta - value).abs() <= ANGLE_EPS
    }
}

/// `num * pi / den` evaluated in double-double arithmetic.
pub fn pi_fraction(num: i64, den: i64) -> f64 {
    let n = num as f64;
    let d = den as f64;
    let hi = n * PI;
    let lo = n.mul_add(PI, -hi) + n * PI_LO;
    let q = hi / d;
    let rem = (-q).mul_add(d, hi);
    q + (rem + lo) / d
}

/// Per-edge and per-vertex deviations from a unit-edge, theta-equiangular
/// polygon.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `| |P[i+1] - P[i]| - 1 |`
    pub edge_residuals: Vec<f64>,
    /// `| angle at P[i] - theta |`
    pub angle_residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Vertex angles `angle(P[i-1], P[i], P[i+1])` in `[0, pi]`.
pub fn bond_angles(p: &Polygon) -> Result<Vec<f64>> {
    let n = p.len() as isize;
    let mut out = Vec::with_capacity(p.len());
    for i in 0..n {
        let here = p.vertex(i);
        let back = p.vertex(i - 1) - here;
        let fwd = p.vertex(i + 1) - here;
        for (len, idx) in [(back.norm(), i - 1), (fwd.norm(), i)] {
            if len < DEGENERATE_EDGE {
                return Err(Error::DegenerateEdge {
                    index: idx.rem_euclid(n) as usize,
                    length: len,
                });
            }
        }
        out.push(angle_between(back, fwd));
    }
    Ok(out)
}

pub fn residual(p: &Polygon, theta: BondAngle) -> Result<ResidualReport> {
    let angles = bond_angles(p)?;
    let edge_residuals: Vec<f64> = p.edges().map(|e| (e.norm() - 1.0).abs()).collect();
    let angle_residuals: Vec<f64> = angles.iter().map(|a| (a - theta.theta()).abs()).collect();
    let max_residual = edge_residuals
        .iter()
        .chain(&angle_residuals)
        .fold(0.0_f64, |m, &r| m.max(r));
    Ok(ResidualReport {
        edge_residuals,
        angle_residuals,
        max_residual,
    })
}

pub fn mirror_z(p: &Polygon) -> Polygon {
    p.mirror_z()
}

/// True when `a` and `b` differ by an orientation-preserving isometry, judged
/// by all pairwise distances and all signed tetrahedron volumes.
pub fn congruent(a: &Polygon, b: &Polygon, tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (va, vb) = (a.vertices(), b.vertices());
    let n = va.len();
    for i in 0..n {
        for j in i + 1..n {
            if ((va[j] - va[i]).norm() - (vb[j] - vb[i]).norm()).abs() > tol {
                return false;
            }
        }
    }
    let volume = |v: &[Vec3], i: usize, j: usize, k: usize, l: usize| {
        (v[j] - v[i]).cross(v[k] - v[i]).dot(v[l] - v[i])
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    if (volume(va, i, j, k, l) - volume(vb, i, j, k, l)).abs() > tol {
                        return false;
                    }
                }
            }
        }
    }
    true
}
