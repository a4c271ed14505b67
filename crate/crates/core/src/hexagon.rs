//! Equilateral, equiangular hexagons in the double-cone parameterization.
//!
//! The even vertices `P0, P2, P4` are pinned to an equilateral triangle of
//! side `2S` in the plane `z = 0`. Each odd vertex lies on the circle of
//! radius `C` around the midpoint of the opposite triangle edge, at dihedral
//! angle `phi1`, `phi3` or `phi5`. Every edge then has unit length and the
//! odd vertices already carry the bond angle; only the angles at the even
//! vertices remain to be solved for.
//!
//! Each of the remaining conditions couples two neighbouring dihedral angles
//! through `a cos(phi') + b sin(phi') = d`, with `a, b, d` depending on the
//! first angle only. Its discriminant `a^2 + b^2 - d^2` decides which `phi1`
//! admit a closing hexagon.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::class::{ClassTag, ConfigSpaceClass};
use crate::error::{Error, Result};
use crate::geometry::{pi_fraction, BondAngle, Polygon, Vec3};
use crate::torus::{torus_distance, wrap_angle};

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Discriminant noise band treated as an exact double root.
pub const DISC_EPS: f64 = 1e-9;

/// Point `(phi1, phi3, phi5)` on the parameter torus; wrapped to `(-pi, pi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(into = "[f64; 3]")]
pub struct TorusPoint {
    phi1: f64,
    phi3: f64,
    phi5: f64,
}

impl TorusPoint {
    pub fn new(phi1: f64, phi3: f64, phi5: f64) -> Self {
        Self {
            phi1: wrap_angle(phi1),
            phi3: wrap_angle(phi3),
            phi5: wrap_angle(phi5),
        }
    }

    pub fn splat(phi: f64) -> Self {
        Self::new(phi, phi, phi)
    }

    pub fn from_slice(x: &[f64]) -> Self {
        Self::new(x[0], x[1], x[2])
    }

    pub fn phi1(&self) -> f64 {
        self.phi1
    }

    pub fn phi3(&self) -> f64 {
        self.phi3
    }

    pub fn phi5(&self) -> f64 {
        self.phi5
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.phi1, self.phi3, self.phi5]
    }

    pub fn negated(&self) -> Self {
        Self::new(-self.phi1, -self.phi3, -self.phi5)
    }

    /// Cyclic relabelling `(phi1, phi3, phi5) -> (phi3, phi5, phi1)`.
    pub fn rotated(&self) -> Self {
        Self::new(self.phi3, self.phi5, self.phi1)
    }

    pub fn distance(&self, other: &TorusPoint) -> f64 {
        torus_distance(&self.to_array(), &other.to_array())
    }
}

impl From<TorusPoint> for [f64; 3] {
    fn from(t: TorusPoint) -> Self {
        t.to_array()
    }
}

/// A sign choice: the mirror member of a named pair, or the root taken in the
/// two-root solution of the angle condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_value(v: i32) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::InvalidArgument(format!(
                "sign must be +1 or -1, got {v}"
            ))),
        }
    }
}

/// Coefficients of `a cos(phi') + b sin(phi') = d` for a given `phi1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoeffTriple {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    /// `a^2 + b^2 - d^2`
    pub disc: f64,
}

impl CoeffTriple {
    pub fn norm_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b
    }

    /// `a = b = 0`: the angle condition holds for every `phi'`. Happens only
    /// at `theta = pi/3, phi1 = pi`.
    pub fn is_degenerate(&self) -> bool {
        self.norm_sq() < 1e-24
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Arc {
    pub lo: f64,
    pub hi: f64,
}

impl Arc {
    pub fn contains(&self, phi: f64, tol: f64) -> bool {
        phi >= self.lo - tol && phi <= self.hi + tol
    }

    pub fn is_point(&self) -> bool {
        self.hi - self.lo < 1e-15
    }
}

/// The values of `phi1` for which the two neighbouring angle conditions can
/// be met; symmetric under `phi1 -> -phi1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibleSet {
    pub arcs: Vec<Arc>,
}

impl AdmissibleSet {
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn contains(&self, phi1: f64) -> bool {
        let phi1 = wrap_angle(phi1);
        self.arcs.iter().any(|a| a.contains(phi1, 1e-12))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyKind {
    Chair,
    Boat,
    InwardCrown,
    RegularHexagon,
    MultiEdge,
    /// Inner end of a boat loop when `0 < theta < pi/3`: `phi3 = phi5` sits at
    /// the crown angle while `phi1` does not.
    GenericBranch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NamedFamily {
    pub kind: FamilyKind,
    pub sign: Option<Sign>,
}

impl std::fmt::Display for NamedFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.sign {
            Some(Sign::Plus) => write!(f, "{:?}+", self.kind),
            Some(Sign::Minus) => write!(f, "{:?}-", self.kind),
            None => write!(f, "{:?}", self.kind),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedConfiguration {
    pub family: NamedFamily,
    pub torus: TorusPoint,
    pub polygon: Polygon,
}

/// Which qualitative regime a bond angle falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `theta = 0`: six-fold covered edge.
    MultiEdge,
    /// `0 < theta < pi/3`
    TwoLoops,
    /// `theta = pi/3`
    Pi3,
    /// `pi/3 < theta < 2pi/3`
    OneLoop,
    /// `theta = 2pi/3`
    Regular,
    /// `theta > 2pi/3`
    Empty,
}

pub fn regime(theta: BondAngle) -> Regime {
    let third = pi_fraction(1, 3);
    let two_thirds = pi_fraction(2, 3);
    if theta.is_near(0.0) {
        Regime::MultiEdge
    } else if theta.is_near(two_thirds) {
        Regime::Regular
    } else if theta.theta() > two_thirds {
        Regime::Empty
    } else if theta.is_near(third) {
        Regime::Pi3
    } else if theta.theta() > third {
        Regime::OneLoop
    } else {
        Regime::TwoLoops
    }
}

/// `P0 = (-S, 0, 0)`, `P2 = (S, 0, 0)`, `P4 = (0, sqrt(3) S, 0)`.
pub fn base_triangle(theta: BondAngle) -> [Vec3; 3] {
    let s = theta.s();
    [
        Vec3::new(-s, 0.0, 0.0),
        Vec3::new(s, 0.0, 0.0),
        Vec3::new(0.0, SQRT3 * s, 0.0),
    ]
}

/// The six vertices for dihedral angles `(phi1, phi3, phi5)`.
pub fn hexagon_vertices(theta: BondAngle, phi1: f64, phi3: f64, phi5: f64) -> [Vec3; 6] {
    let (c, s) = (theta.c(), theta.s());
    let [p0, p2, p4] = base_triangle(theta);
    let (s1, c1) = phi1.sin_cos();
    let (s3, c3) = phi3.sin_cos();
    let (s5, c5) = phi5.sin_cos();
    let p1 = Vec3::new(0.0, -c * c1, c * s1);
    let p3 = Vec3::new(
        0.5 * s + 0.5 * SQRT3 * c * c3,
        0.5 * SQRT3 * s + 0.5 * c * c3,
        c * s3,
    );
    let p5 = Vec3::new(
        -0.5 * s - 0.5 * SQRT3 * c * c5,
        0.5 * SQRT3 * s + 0.5 * c * c5,
        c * s5,
    );
    [p0, p1, p2, p3, p4, p5]
}

pub fn build_hexagon(theta: BondAngle, t: TorusPoint) -> Polygon {
    Polygon::new(hexagon_vertices(theta, t.phi1, t.phi3, t.phi5).to_vec())
        .expect("cone vertices are finite")
}

/// Left minus right side of the condition that the even vertex between two
/// odd vertices with dihedral angles `phi_i`, `phi_j` has the bond angle.
pub fn angle_condition_residual(theta: BondAngle, phi_i: f64, phi_j: f64) -> f64 {
    let (c, s) = (theta.c(), theta.s());
    let (si, ci) = phi_i.sin_cos();
    let (sj, cj) = phi_j.sin_cos();
    c * c * (ci * cj - 2.0 * si * sj) + SQRT3 * s * c * (ci + cj) - (3.0 - 5.0 * c * c)
}

pub fn coefficients(theta: BondAngle, phi1: f64) -> CoeffTriple {
    let (c, s) = (theta.c(), theta.s());
    let (s1, c1) = phi1.sin_cos();
    let a = c * (c * c1 + SQRT3 * s);
    let b = -2.0 * c * c * s1;
    let d = 3.0 - 5.0 * c * c - SQRT3 * s * c * c1;
    CoeffTriple {
        a,
        b,
        d,
        disc: a * a + b * b - d * d,
    }
}

/// Factored discriminant `-sqrt(3) (C cos(phi1) - sqrt(3) S) (sqrt(3) C cos(phi1) - (3 - 8C^2) S)`.
pub fn disc_factored(theta: BondAngle, phi1: f64) -> f64 {
    let (c, s) = (theta.c(), theta.s());
    let c1 = phi1.cos();
    -SQRT3 * (c * c1 - SQRT3 * s) * (SQRT3 * c * c1 - (3.0 - 8.0 * c * c) * s)
}

/// `4 - (S - sqrt(3) C cos(phi1))^2`. Equals `(a^2 + b^2) / C^2`; it is the
/// common denominator of the expanded odd-vertex coordinates.
pub fn reduced_norm_sq(theta: BondAngle, phi1: f64) -> f64 {
    let (c, s) = (theta.c(), theta.s());
    4.0 - (s - SQRT3 * c * phi1.cos()).powi(2)
}

/// Lower and upper bounds on `cos(phi1)`.
fn cos_bounds(theta: BondAngle) -> (f64, f64) {
    let (c, s) = (theta.c(), theta.s());
    ((3.0 - 8.0 * c * c) * s / (SQRT3 * c), SQRT3 * s / c)
}

pub fn admissible_phi1(theta: BondAngle) -> AdmissibleSet {
    let (lower, upper) = cos_bounds(theta);
    let outer = lower.clamp(-1.0, 1.0).acos();
    let inner = upper.clamp(-1.0, 1.0).acos();
    let arcs = match regime(theta) {
        Regime::Empty => vec![],
        Regime::Regular => vec![Arc { lo: 0.0, hi: 0.0 }],
        // Both torus points describe the same six-fold edge; see `named_configurations`.
        Regime::MultiEdge => vec![
            Arc {
                lo: -PI / 2.0,
                hi: -PI / 2.0,
            },
            Arc {
                lo: PI / 2.0,
                hi: PI / 2.0,
            },
        ],
        Regime::Pi3 => vec![Arc { lo: -PI, hi: PI }],
        Regime::OneLoop => vec![Arc {
            lo: -outer,
            hi: outer,
        }],
        Regime::TwoLoops => vec![
            Arc {
                lo: -outer,
                hi: -inner,
            },
            Arc {
                lo: inner,
                hi: outer,
            },
        ],
    };
    AdmissibleSet { arcs }
}

/// Completes `phi1` to a closing hexagon. `branch` picks which root of the
/// angle condition goes to `phi3`; `phi5` takes the other.
pub fn solve_branch(theta: BondAngle, phi1: f64, branch: Sign) -> Result<TorusPoint> {
    let k = coefficients(theta, phi1);
    if k.is_degenerate() {
        return Err(Error::DegenerateCoefficients);
    }
    if k.disc < -DISC_EPS {
        return Err(Error::NotAdmissible { phi1, disc: k.disc });
    }
    let root = if k.disc.abs() <= DISC_EPS {
        0.0
    } else {
        k.disc.sqrt()
    };
    let q = k.norm_sq();
    let sgn = branch.value();
    let (x3, y3) = (
        (k.a * k.d + sgn * k.b * root) / q,
        (k.b * k.d - sgn * k.a * root) / q,
    );
    let (x5, y5) = (
        (k.a * k.d - sgn * k.b * root) / q,
        (k.b * k.d + sgn * k.a * root) / q,
    );
    Ok(TorusPoint::new(phi1, y3.atan2(x3), y5.atan2(x5)))
}

/// Expanded coordinates of `P3` and `P5` on the two-root branch, written out
/// in terms of `phi1` alone. Used as an independent check on `solve_branch`.
pub fn expanded_odd_vertices(theta: BondAngle, phi1: f64, branch: Sign) -> Result<(Vec3, Vec3)> {
    let (c, s) = (theta.c(), theta.s());
    let (s1, c1) = phi1.sin_cos();
    let disc = disc_factored(theta, phi1);
    if disc < -DISC_EPS {
        return Err(Error::NotAdmissible { phi1, disc });
    }
    let w = reduced_norm_sq(theta, phi1);
    if w.abs() < 1e-12 {
        return Err(Error::DegenerateCoefficients);
    }
    let root = if disc.abs() <= DISC_EPS {
        0.0
    } else {
        disc.sqrt()
    };
    let pm = branch.value();
    let k = 3.0 - 8.0 * c * c;
    let d = 3.0 - 5.0 * c * c - SQRT3 * s * c * c1;
    let vertex = |pm: f64, xsign: f64| {
        Vec3::new(
            xsign * (s - (SQRT3 * c * c1 - k * s + pm * SQRT3 * c * s1 * root) / w),
            2.0 / SQRT3 * s - (c * c1 - k * s / SQRT3 + pm * c * s1 * root) / w,
            -(2.0 * c * d * s1 + pm * (c * c1 + SQRT3 * s) * root) / w,
        )
    };
    Ok((vertex(pm, 1.0), vertex(-pm, -1.0)))
}

fn require(
    theta: BondAngle,
    ok: bool,
    what: &'static str,
    requirement: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRegime {
            what,
            requirement,
            theta: theta.theta(),
        })
    }
}

fn named(
    theta: BondAngle,
    kind: FamilyKind,
    sign: Option<Sign>,
    torus: TorusPoint,
) -> NamedConfiguration {
    let kind = match regime(theta) {
        Regime::MultiEdge if kind != FamilyKind::InwardCrown => FamilyKind::MultiEdge,
        Regime::Regular => FamilyKind::RegularHexagon,
        _ => kind,
    };
    let sign = match kind {
        FamilyKind::RegularHexagon => None,
        _ => sign,
    };
    NamedConfiguration {
        family: NamedFamily { kind, sign },
        torus,
        polygon: build_hexagon(theta, torus),
    }
}

/// Dihedral angle shared by chair and boat odd vertices: `cos = S / (sqrt(3) C)`.
fn chair_angle(theta: BondAngle, sign: Sign) -> f64 {
    let (c, s) = (theta.c(), theta.s());
    let cos = s / (SQRT3 * c);
    let sin = sign.value() * (4.0 * c * c - 1.0).max(0.0).sqrt() / (SQRT3 * c);
    sin.atan2(cos)
}

/// Dihedral angle of the inward crown: `cos = -sqrt(3) S / C`.
fn crown_angle(theta: BondAngle, sign: Sign) -> f64 {
    let (c, s) = (theta.c(), theta.s());
    let cos = -SQRT3 * s / c;
    let sin = sign.value() * (4.0 * c * c - 3.0).max(0.0).sqrt() / c;
    sin.atan2(cos)
}

/// `phi1 = phi3 = phi5`, all on the chair angle. Isolated in the
/// configuration space.
pub fn chair(theta: BondAngle, sign: Sign) -> Result<NamedConfiguration> {
    require(
        theta,
        regime(theta) != Regime::Empty,
        "chair",
        "theta <= 2pi/3",
    )?;
    let phi = chair_angle(theta, sign);
    Ok(named(
        theta,
        FamilyKind::Chair,
        Some(sign),
        TorusPoint::splat(phi),
    ))
}

/// `phi3 = phi5` on the chair angle with `phi1` on the far end of the
/// admissible arc. The boat lies on a loop of deformations.
pub fn boat(theta: BondAngle, sign: Sign) -> Result<NamedConfiguration> {
    require(
        theta,
        regime(theta) != Regime::Empty,
        "boat",
        "theta <= 2pi/3",
    )?;
    let (c, s) = (theta.c(), theta.s());
    let cos1 = (3.0 - 8.0 * c * c) * s / (SQRT3 * c);
    let sin1 =
        sign.value() * (4.0 * c * c - 3.0) * (4.0 * c * c - 1.0).max(0.0).sqrt() / (SQRT3 * c);
    let phi = chair_angle(theta, sign);
    Ok(named(
        theta,
        FamilyKind::Boat,
        Some(sign),
        TorusPoint::new(sin1.atan2(cos1), phi, phi),
    ))
}

/// `phi1 = phi3 = phi5` on the crown angle; exists for `0 < theta <= pi/3`.
pub fn inward_crown(theta: BondAngle, sign: Sign) -> Result<NamedConfiguration> {
    let r = regime(theta);
    require(
        theta,
        matches!(r, Regime::TwoLoops | Regime::Pi3),
        "inward crown",
        "0 < theta <= pi/3",
    )?;
    let phi = crown_angle(theta, sign);
    Ok(named(
        theta,
        FamilyKind::InwardCrown,
        Some(sign),
        TorusPoint::splat(phi),
    ))
}

/// Inner endpoint of a boat loop for `0 < theta < pi/3`:
/// `phi1 = +-arccos(sqrt(3) S / C)`, `phi3 = phi5` on the crown angle.
pub fn generic_branch(theta: BondAngle, sign: Sign) -> Result<NamedConfiguration> {
    require(
        theta,
        regime(theta) == Regime::TwoLoops,
        "inner loop end",
        "0 < theta < pi/3",
    )?;
    let (c, s) = (theta.c(), theta.s());
    let phi1 = sign.value() * (SQRT3 * s / c).clamp(-1.0, 1.0).acos();
    let phi = crown_angle(theta, sign);
    Ok(named(
        theta,
        FamilyKind::GenericBranch,
        Some(sign),
        TorusPoint::new(phi1, phi, phi),
    ))
}

/// Every named configuration that exists at `theta`.
///
/// At `theta = 0` both torus representatives of the six-fold edge are
/// listed; they are congruent and describe one configuration.
pub fn named_configurations(theta: BondAngle) -> Vec<NamedConfiguration> {
    let both = [Sign::Plus, Sign::Minus];
    let mut out = Vec::new();
    match regime(theta) {
        Regime::Empty => {}
        Regime::Regular => out.extend(chair(theta, Sign::Plus)),
        Regime::MultiEdge => out.extend(both.iter().filter_map(|&s| chair(theta, s).ok())),
        Regime::OneLoop => {
            out.extend(both.iter().filter_map(|&s| chair(theta, s).ok()));
            out.extend(both.iter().filter_map(|&s| boat(theta, s).ok()));
        }
        Regime::Pi3 => {
            out.extend(both.iter().filter_map(|&s| chair(theta, s).ok()));
            out.extend(both.iter().filter_map(|&s| boat(theta, s).ok()));
            // Both signs give phi = pi, the doubly covered triangle.
            out.extend(inward_crown(theta, Sign::Plus));
        }
        Regime::TwoLoops => {
            out.extend(both.iter().filter_map(|&s| chair(theta, s).ok()));
            out.extend(both.iter().filter_map(|&s| inward_crown(theta, s).ok()));
            out.extend(both.iter().filter_map(|&s| boat(theta, s).ok()));
            out.extend(both.iter().filter_map(|&s| generic_branch(theta, s).ok()));
        }
    }
    out
}

/// Named configurations that form isolated points of the configuration
/// space (everything except the configurations sitting on loops or on the
/// graph at `pi/3`).
pub fn isolated_configurations(theta: BondAngle) -> Vec<NamedConfiguration> {
    named_configurations(theta)
        .into_iter()
        .filter(|n| {
            !matches!(n.family.kind, FamilyKind::Boat | FamilyKind::GenericBranch)
                && !(regime(theta) == Regime::Pi3 && n.family.kind == FamilyKind::InwardCrown)
        })
        .collect()
}

pub fn classify(theta: BondAngle) -> ConfigSpaceClass {
    match regime(theta) {
        Regime::Empty => {
            ConfigSpaceClass::new(ClassTag::Empty, "no hexagon closes for theta > 2pi/3")
        }
        Regime::MultiEdge => {
            ConfigSpaceClass::new(ClassTag::SinglePoint, "six-fold covered multiple edge")
        }
        Regime::Regular => ConfigSpaceClass::new(ClassTag::SinglePoint, "planar regular hexagon"),
        Regime::OneLoop => ConfigSpaceClass::new(
            ClassTag::CircleAndTwoPoints,
            "one loop through the boat and its mirror image; chair and mirror chair isolated",
        ),
        Regime::TwoLoops => ConfigSpaceClass::new(
            ClassTag::TwoCirclesAndFourPoints,
            "boat loop and mirror boat loop; chairs and inward crowns isolated",
        ),
        Regime::Pi3 => ConfigSpaceClass::new(
            ClassTag::GraphXAndTwoPoints,
            "doubled tetrahedron graph of planar and boat configurations; chairs isolated",
        ),
    }
}

/// A closed discrete loop through one circle component.
///
/// `phi1` runs along the admissible arc with `branch = +` and back with
/// `branch = -`. Samples are spaced uniformly in `u` where
/// `phi1 = mid - half * cos(u)`, which keeps the `sqrt`-shaped branch merge
/// at either arc end as finely resolved as the interior. The first and last
/// points coincide.
pub fn deformation_loop(theta: BondAngle, loop_id: usize, steps: usize) -> Result<Vec<TorusPoint>> {
    if steps < 8 {
        return Err(Error::InvalidArgument(format!(
            "steps must be >= 8, got {steps}"
        )));
    }
    let arcs = admissible_phi1(theta).arcs;
    let arc = match (regime(theta), loop_id) {
        (Regime::OneLoop, 0) => arcs[0],
        (Regime::TwoLoops, 0) => arcs[1],
        (Regime::TwoLoops, 1) => arcs[0],
        (Regime::OneLoop | Regime::TwoLoops, _) => {
            return Err(Error::InvalidArgument(format!(
                "no loop {loop_id} at theta = {}",
                theta.theta()
            )))
        }
        _ => {
            return Err(Error::OutOfRegime {
                what: "deformation loop",
                requirement: "0 < theta < pi/3 or pi/3 < theta < 2pi/3",
                theta: theta.theta(),
            })
        }
    };
    let mid = 0.5 * (arc.lo + arc.hi);
    let half = 0.5 * (arc.hi - arc.lo);
    let last = steps - 1;
    let mut out = Vec::with_capacity(steps);
    for k in 0..last {
        let u = TAU * k as f64 / last as f64;
        let phi1 = if 2 * k == last {
            arc.hi
        } else if k == 0 {
            arc.lo
        } else {
            mid - half * u.cos()
        };
        let branch = if 2 * k <= last {
            Sign::Plus
        } else {
            Sign::Minus
        };
        out.push(solve_branch(theta, phi1, branch)?);
    }
    out.push(out[0]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{bond_angles, residual};
    use proptest::prelude::*;

    fn b(num: i64, den: i64) -> BondAngle {
        BondAngle::from_pi_fraction(num, den).unwrap()
    }

    fn close(a: f64, e: f64, tol: f64) -> bool {
        (a - e).abs() <= tol
    }

    #[test]
    fn base_triangle_values() {
        let [p0, p2, p4] = base_triangle(b(1, 2));
        assert!(close(p0.x, -std::f64::consts::FRAC_1_SQRT_2, 1e-15) && p0.y == 0.0 && p0.z == 0.0);
        assert!(close(p2.x, std::f64::consts::FRAC_1_SQRT_2, 1e-15));
        assert!(close(p4.y, 1.22474, 1e-5) && p4.x == 0.0);
        let [p0, p2, p4] = base_triangle(BondAngle::new(0.0).unwrap());
        assert!(p0.norm() == 0.0 && p2.norm() == 0.0 && p4.norm() == 0.0);
        let [p0, p2, _] = base_triangle(b(2, 3));
        assert!(close((p2 - p0).norm(), 3f64.sqrt(), 1e-15));
    }

    #[test]
    fn regular_hexagon_at_origin() {
        let hex = build_hexagon(b(2, 3), TorusPoint::splat(0.0));
        let r = residual(&hex, b(2, 3)).unwrap();
        assert!(r.max_residual < 1e-12);
        assert!(hex.vertices().iter().all(|v| v.z == 0.0));
    }

    #[test]
    fn odd_vertices_satisfied_by_construction() {
        let theta = BondAngle::new(1.1).unwrap();
        for t in [
            TorusPoint::new(0.3, -2.0, 1.7),
            TorusPoint::new(3.0, 0.1, -0.4),
        ] {
            let hex = build_hexagon(theta, t);
            let r = residual(&hex, theta).unwrap();
            assert!(r.edge_residuals.iter().all(|&e| e < 1e-12));
            for i in [1, 3, 5] {
                assert!(r.angle_residuals[i] < 1e-12);
            }
        }
    }

    #[test]
    fn symmetric_torus_point_gives_threefold_symmetry() {
        let theta = BondAngle::new(1.3).unwrap();
        let hex = build_hexagon(theta, TorusPoint::splat(0.7));
        let v = hex.vertices();
        let centroid = (v[0] + v[2] + v[4]) * (1.0 / 3.0);
        // 120 degree rotation about the vertical axis through the centroid.
        let (s, c) = (2.0 * PI / 3.0).sin_cos();
        let rot = |p: Vec3| {
            let q = p - centroid;
            Vec3::new(c * q.x - s * q.y, s * q.x + c * q.y, q.z) + centroid
        };
        for i in 0..6 {
            let img = rot(v[i]);
            assert!((img - v[(i + 2) % 6]).norm() < 1e-12);
        }
    }

    #[test]
    fn chair_at_right_angle() {
        let ch = chair(b(1, 2), Sign::Plus).unwrap();
        for x in ch.torus.to_array() {
            assert!(close(x, 0.95532, 1e-5));
        }
        let p1 = ch.polygon.vertices()[1];
        assert!(
            close(p1.x, 0.0, 1e-15) && close(p1.y, -0.40825, 1e-5) && close(p1.z, 0.57735, 1e-5)
        );
        assert!(residual(&ch.polygon, b(1, 2)).unwrap().max_residual < 1e-10);
        let mirrored = chair(b(1, 2), Sign::Minus).unwrap();
        assert!(
            (mirrored.polygon.vertices()[3] - ch.polygon.mirror_z().vertices()[3]).norm() < 1e-12
        );
    }

    #[test]
    fn chair_matches_vertex_display() {
        for theta in [0.4, 1.0, 1.9, (-1.0f64 / 3.0).acos()] {
            let theta = BondAngle::new(theta).unwrap();
            let (c, s) = (theta.c(), theta.s());
            let h = (4.0 * c * c - 1.0).sqrt() / SQRT3;
            let v = chair(theta, Sign::Plus).unwrap().polygon;
            let want = [
                Vec3::new(0.0, -s / SQRT3, h),
                Vec3::new(s, 2.0 * s / SQRT3, h),
                Vec3::new(-s, 2.0 * s / SQRT3, h),
            ];
            for (i, w) in [1, 3, 5].into_iter().zip(want) {
                assert!(
                    (v.vertices()[i] - w).norm() < 1e-12,
                    "theta {}",
                    theta.theta()
                );
            }
        }
    }

    #[test]
    fn tetrahedral_chair_height_is_one_third() {
        let theta = BondAngle::new((-1.0f64 / 3.0).acos()).unwrap();
        let ch = chair(theta, Sign::Plus).unwrap();
        assert!(close(ch.polygon.vertices()[1].z, 1.0 / 3.0, 1e-15));
        assert!(residual(&ch.polygon, theta).unwrap().max_residual < 1e-10);
        let bt = boat(theta, Sign::Plus).unwrap();
        assert!(close(bt.torus.phi1().cos(), 0.27217, 1e-5));
        assert!(residual(&bt.polygon, theta).unwrap().max_residual < 1e-10);
    }

    #[test]
    fn boat_at_right_angle() {
        let bt = boat(b(1, 2), Sign::Plus).unwrap();
        let t = bt.torus;
        assert!(close(t.phi1(), -2.18628, 1e-5));
        assert!(close(t.phi3(), 0.95532, 1e-5) && close(t.phi5(), 0.95532, 1e-5));
        assert!(close(t.phi1().cos(), -0.57735, 1e-5) && close(t.phi1().sin(), -0.81650, 1e-5));
        assert!(residual(&bt.polygon, b(1, 2)).unwrap().max_residual < 1e-10);
        let mirror = boat(b(1, 2), Sign::Minus).unwrap();
        assert!(mirror.torus.distance(&t.negated()) < 1e-14);
        let r = residual(&bt.polygon.mirror_z(), b(1, 2)).unwrap();
        assert!(r.max_residual < 1e-10);
    }

    #[test]
    fn boat_matches_vertex_display() {
        for theta in [0.5, 1.2, 1.9] {
            let theta = BondAngle::new(theta).unwrap();
            let (c, s) = (theta.c(), theta.s());
            let h = (4.0 * c * c - 1.0).sqrt() / SQRT3;
            let v = boat(theta, Sign::Plus).unwrap().polygon;
            let want = Vec3::new(
                0.0,
                -(3.0 - 8.0 * c * c) * s / SQRT3,
                (4.0 * c * c - 3.0) * h,
            );
            assert!((v.vertices()[1] - want).norm() < 1e-12);
            assert!((v.vertices()[3] - Vec3::new(s, 2.0 * s / SQRT3, h)).norm() < 1e-12);
        }
    }

    #[test]
    fn chair_and_boat_merge_into_regular_hexagon() {
        let theta = b(2, 3);
        let ch = chair(theta, Sign::Plus).unwrap();
        let bt = boat(theta, Sign::Minus).unwrap();
        assert_eq!(ch.family.kind, FamilyKind::RegularHexagon);
        assert!(ch.torus.distance(&TorusPoint::splat(0.0)) < 1e-7);
        assert!(bt.torus.distance(&TorusPoint::splat(0.0)) < 1e-7);
        assert!(chair(b(5, 6), Sign::Plus).is_err());
        assert!(boat(b(5, 6), Sign::Plus).is_err());
    }

    #[test]
    fn crown_values() {
        let theta = b(1, 4);
        let cr = inward_crown(theta, Sign::Plus).unwrap();
        assert!(close(cr.torus.phi1(), 2.37092, 1e-5));
        assert!(close(cr.torus.phi1().cos(), -0.71744, 1e-5));
        assert!(close(cr.torus.phi1().sin(), 0.69662, 1e-5));
        assert!(residual(&cr.polygon, theta).unwrap().max_residual < 1e-10);
        let (c, s) = (theta.c(), theta.s());
        let h = (4.0 * c * c - 3.0).sqrt();
        let v = cr.polygon.vertices();
        assert!((v[1] - Vec3::new(0.0, SQRT3 * s, h)).norm() < 1e-12);
        assert!((v[3] - Vec3::new(-s, 0.0, h)).norm() < 1e-12);
        assert!((v[5] - Vec3::new(s, 0.0, h)).norm() < 1e-12);
        assert!(close(
            inward_crown(theta, Sign::Minus).unwrap().torus.phi1(),
            -2.37092,
            1e-5
        ));

        let degenerate = inward_crown(b(1, 3), Sign::Plus).unwrap();
        assert!(close(degenerate.torus.phi1(), PI, 1e-7));
        assert!(degenerate
            .polygon
            .vertices()
            .iter()
            .all(|p| p.z.abs() < 1e-7));
        assert!(inward_crown(b(1, 2), Sign::Plus).is_err());
        assert!(inward_crown(BondAngle::new(0.0).unwrap(), Sign::Plus).is_err());
    }

    #[test]
    fn generic_branch_closes() {
        for theta in [0.2, 0.6, 1.0] {
            let theta = BondAngle::new(theta).unwrap();
            for sign in [Sign::Plus, Sign::Minus] {
                let g = generic_branch(theta, sign).unwrap();
                assert!(residual(&g.polygon, theta).unwrap().max_residual < 1e-10);
            }
        }
    }

    #[test]
    fn angle_condition_examples() {
        assert!(angle_condition_residual(b(2, 3), 0.0, 0.0).abs() < 1e-12);
        let phi = chair(b(1, 2), Sign::Plus).unwrap().torus.phi1();
        assert!(angle_condition_residual(b(1, 2), phi, phi).abs() < 1e-9);
        // Cross-check the zero set against measured angles.
        let theta = b(1, 2);
        let hex = build_hexagon(theta, TorusPoint::splat(0.0));
        let angle_p2 = bond_angles(&hex).unwrap()[2];
        let r = angle_condition_residual(theta, 0.0, 0.0);
        assert!(r.abs() > 0.1);
        assert!((angle_p2 - theta.theta()).abs() > 0.1);
    }

    #[test]
    fn angle_condition_vanishes_exactly_where_the_angle_is_right() {
        // Sign agreement between the algebraic residual and cos(angle) - cos(theta).
        let theta = BondAngle::new(1.4).unwrap();
        for i in 0..40 {
            for j in 0..40 {
                let p1 = -PI + TAU * (i as f64 + 0.5) / 40.0;
                let p3 = -PI + TAU * (j as f64 + 0.5) / 40.0;
                let hex = build_hexagon(theta, TorusPoint::new(p1, p3, 0.0));
                let angle = bond_angles(&hex).unwrap()[2];
                let geometric = angle.cos() - theta.theta().cos();
                let algebraic = angle_condition_residual(theta, p1, p3);
                // cos(angle at P2) is an affine function of the algebraic residual.
                assert!((geometric + algebraic / 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn coefficient_examples() {
        let k = coefficients(b(1, 2), 0.0);
        assert!(close(k.a, 1.36603, 1e-5) && k.b == 0.0 && close(k.d, -0.36603, 1e-5));
        assert!(close(k.disc, 1.73205, 1e-5));
        assert!(close(disc_factored(b(1, 2), 0.0), k.disc, 1e-12));
        let k = coefficients(b(1, 3), PI);
        assert!(k.a.abs() < 1e-15 && k.b.abs() < 1e-15 && k.is_degenerate());
        let end = admissible_phi1(b(1, 2)).arcs[0].hi;
        assert!(close(end, 2.18628, 1e-5));
        assert!(coefficients(b(1, 2), end).disc.abs() < 1e-8);
        assert!(coefficients(b(1, 2), -end).disc.abs() < 1e-8);
    }

    #[test]
    fn admissible_examples() {
        let set = admissible_phi1(b(1, 2));
        assert_eq!(set.arcs.len(), 1);
        assert!(close(set.arcs[0].lo, -2.18628, 1e-5) && close(set.arcs[0].hi, 2.18628, 1e-5));
        let set = admissible_phi1(b(1, 4));
        assert_eq!(set.arcs.len(), 2);
        assert!(close(set.arcs[1].lo, 0.77068, 1e-5) && close(set.arcs[1].hi, 2.72768, 1e-5));
        assert!(close(set.arcs[0].lo, -2.72768, 1e-5) && close(set.arcs[0].hi, -0.77068, 1e-5));
        assert!(
            close(set.arcs[1].hi.cos(), -0.91555, 1e-5)
                && close(set.arcs[1].lo.cos(), 0.71744, 1e-5)
        );
        assert!(admissible_phi1(b(5, 6)).is_empty());
        let set = admissible_phi1(b(2, 3));
        assert!(set.arcs.len() == 1 && set.arcs[0].is_point());
    }

    #[test]
    fn admissible_set_is_sign_symmetric() {
        for k in 1..60 {
            let theta = BondAngle::new(2.0 * PI / 3.0 * k as f64 / 60.0).unwrap();
            let set = admissible_phi1(theta);
            for i in 0..200 {
                let phi = -PI + TAU * i as f64 / 200.0 + 1e-3;
                assert_eq!(set.contains(phi), set.contains(-phi));
                let nonneg = disc_factored(theta, phi) >= -1e-12;
                if regime(theta) != Regime::Pi3 {
                    assert_eq!(
                        set.contains(phi),
                        nonneg,
                        "theta {} phi {}",
                        theta.theta(),
                        phi
                    );
                }
            }
        }
    }

    #[test]
    fn solve_branch_examples() {
        let t = solve_branch(b(1, 2), 0.0, Sign::Plus).unwrap();
        assert!(t.phi1() == 0.0);
        assert!(close(t.phi3(), -1.84206, 1e-5) && close(t.phi5(), 1.84206, 1e-5));
        assert!(close(t.phi3().cos(), -0.26795, 1e-5) && close(t.phi3().sin(), -0.96343, 1e-5));
        let hex = build_hexagon(b(1, 2), t);
        assert!(residual(&hex, b(1, 2)).unwrap().max_residual < 1e-9);

        let end = admissible_phi1(b(1, 2)).arcs[0].lo;
        for branch in [Sign::Plus, Sign::Minus] {
            let t = solve_branch(b(1, 2), end, branch).unwrap();
            assert!(close(t.phi3(), 0.95532, 1e-5) && close(t.phi5(), 0.95532, 1e-5));
        }
        let t = solve_branch(b(2, 3), 0.0, Sign::Plus).unwrap();
        assert!(t.distance(&TorusPoint::splat(0.0)) < 1e-7);
    }

    #[test]
    fn solve_branch_errors() {
        assert!(matches!(
            solve_branch(b(1, 2), PI, Sign::Plus),
            Err(Error::NotAdmissible { .. })
        ));
        assert!(matches!(
            solve_branch(b(1, 3), PI, Sign::Plus),
            Err(Error::DegenerateCoefficients)
        ));
        assert!(solve_branch(b(5, 6), 0.0, Sign::Plus).is_err());
    }

    #[test]
    fn expanded_coordinates_agree_with_branch_solution() {
        for k in 1..40 {
            let theta = BondAngle::new(2.0 * PI / 3.0 * k as f64 / 40.0).unwrap();
            if regime(theta) == Regime::Pi3 {
                continue;
            }
            for arc in admissible_phi1(theta).arcs {
                for i in 0..=20 {
                    let phi1 = arc.lo + (arc.hi - arc.lo) * i as f64 / 20.0;
                    for branch in [Sign::Plus, Sign::Minus] {
                        let t = solve_branch(theta, phi1, branch).unwrap();
                        let v = build_hexagon(theta, t);
                        let (p3, p5) = expanded_odd_vertices(theta, phi1, branch).unwrap();
                        assert!(
                            (v.vertices()[3] - p3).norm() < 1e-8,
                            "theta {} phi1 {phi1}",
                            theta.theta()
                        );
                        assert!((v.vertices()[5] - p5).norm() < 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(b(1, 2)).tag, ClassTag::CircleAndTwoPoints);
        assert_eq!(classify(b(1, 4)).tag, ClassTag::TwoCirclesAndFourPoints);
        assert_eq!(
            classify(BondAngle::new(0.0).unwrap()).tag,
            ClassTag::SinglePoint
        );
        assert_eq!(classify(b(2, 3)).tag, ClassTag::SinglePoint);
        assert_eq!(classify(b(1, 3)).tag, ClassTag::GraphXAndTwoPoints);
        assert_eq!(classify(b(5, 6)).tag, ClassTag::Empty);
    }

    #[test]
    fn named_kinds_respect_regimes() {
        for k in 0..=120 {
            let theta = BondAngle::new(PI * k as f64 / 121.0).unwrap();
            for n in named_configurations(theta) {
                match n.family.kind {
                    FamilyKind::InwardCrown => {
                        assert!(theta.theta() > 0.0 && theta.theta() <= PI / 3.0 + 1e-12)
                    }
                    FamilyKind::RegularHexagon => assert!(theta.is_near(2.0 * PI / 3.0)),
                    FamilyKind::MultiEdge => assert!(theta.theta() == 0.0),
                    _ => {}
                }
                assert!(residual(&n.polygon, theta).unwrap().max_residual < 1e-10);
            }
        }
    }

    #[test]
    fn deformation_loop_at_right_angle() {
        let theta = b(1, 2);
        let steps = 256;
        let pts = deformation_loop(theta, 0, steps).unwrap();
        assert_eq!(pts.len(), steps);
        assert_eq!(pts[0], pts[steps - 1]);
        let bound = TAU * 4.0 / steps as f64;
        for w in pts.windows(2) {
            assert!(w[0].distance(&w[1]) < bound);
        }
        for t in &pts {
            assert!(
                residual(&build_hexagon(theta, *t), theta)
                    .unwrap()
                    .max_residual
                    < 1e-8
            );
        }
        let bt = boat(theta, Sign::Plus).unwrap().torus;
        let mirror = boat(theta, Sign::Minus).unwrap().torus;
        let nearest = |q: &TorusPoint| {
            pts.iter()
                .map(|p| p.distance(q))
                .fold(f64::INFINITY, f64::min)
        };
        assert!(nearest(&bt) < 1e-9 && close(bt.phi1(), -2.18628, 1e-5));
        assert!(nearest(&mirror) < bound);
    }

    #[test]
    fn small_angle_loops_are_mirror_images() {
        let theta = b(1, 4);
        // Odd step count: the mirrored samples land on the grid of the other loop.
        let l0 = deformation_loop(theta, 0, 201).unwrap();
        let l1 = deformation_loop(theta, 1, 201).unwrap();
        let nearest = |set: &[TorusPoint], q: &TorusPoint| {
            set.iter()
                .map(|p| p.distance(q))
                .fold(f64::INFINITY, f64::min)
        };
        for p in &l0 {
            assert!(nearest(&l1, &p.negated()) < 1e-9);
        }
        assert!(nearest(&l0, &boat(theta, Sign::Plus).unwrap().torus) < 1e-9);
        assert!(deformation_loop(theta, 2, 200).is_err());
        assert!(deformation_loop(b(2, 3), 0, 64).is_err());
        assert!(deformation_loop(b(1, 3), 0, 64).is_err());
        assert!(deformation_loop(b(1, 2), 0, 4).is_err());
    }

    #[test]
    fn chair_inside_arc_above_pi_over_three() {
        for k in 1..40 {
            let theta =
                BondAngle::new(pi_fraction(1, 3) + k as f64 * pi_fraction(1, 3) / 40.0).unwrap();
            let arc = admissible_phi1(theta).arcs[0];
            for sign in [Sign::Plus, Sign::Minus] {
                let phi = chair(theta, sign).unwrap().torus.phi1();
                assert!(arc.lo < phi && phi < arc.hi, "theta = {}", theta.theta());
            }
        }
    }

    #[test]
    fn signed_families_are_mirror_pairs() {
        for theta in [b(1, 4), b(1, 2), b(1, 3), b(3, 5)] {
            for f in [chair, boat, inward_crown, generic_branch] {
                let (Ok(p), Ok(m)) = (f(theta, Sign::Plus), f(theta, Sign::Minus)) else {
                    continue;
                };
                for (u, v) in p
                    .polygon
                    .mirror_z()
                    .vertices()
                    .iter()
                    .zip(m.polygon.vertices())
                {
                    assert!((*u - *v).norm() < 1e-12);
                }
            }
        }
    }

    fn admissible_sample() -> impl Strategy<Value = (BondAngle, f64, Sign)> {
        let third = pi_fraction(1, 3);
        (
            1e-3f64..2.0 * third - 1e-3,
            0.0f64..=1.0,
            any::<bool>(),
            any::<bool>(),
        )
            .prop_filter("near pi/3", move |(t, ..)| (t - third).abs() > 1e-3)
            .prop_map(|(t, u, which, plus)| {
                let theta = BondAngle::new(t).unwrap();
                let arcs = admissible_phi1(theta).arcs;
                let arc = arcs[usize::from(which) % arcs.len()];
                let sign = if plus { Sign::Plus } else { Sign::Minus };
                (theta, arc.lo + u * (arc.hi - arc.lo), sign)
            })
    }

    proptest! {
        #[test]
        fn admissible_points_close((theta, phi1, sign) in admissible_sample()) {
            let t = solve_branch(theta, phi1, sign).unwrap();
            let r = residual(&build_hexagon(theta, t), theta).unwrap();
            prop_assert!(r.max_residual < 1e-9, "{}", r.max_residual);
        }

        #[test]
        fn negated_point_is_the_mirror_image((theta, phi1, sign) in admissible_sample()) {
            let t = solve_branch(theta, phi1, sign).unwrap();
            let p = build_hexagon(theta, t);
            let q = build_hexagon(theta, t.negated());
            prop_assert!(residual(&q, theta).unwrap().max_residual < 1e-9);
            for (u, v) in p.mirror_z().vertices().iter().zip(q.vertices()) {
                prop_assert!((*u - *v).norm() < 1e-12);
            }
        }
    }
}
