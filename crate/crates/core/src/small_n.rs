//! Triangles, quadrilaterals and pentagons.
//!
//! The quadrilateral is placed with `P0 = (-S, 0, 0)`, `P2 = (S, 0, 0)` and
//! both apexes `P1`, `P3` on the circle `x = 0, y^2 + z^2 = C^2`. Edges and
//! the apex angles then hold automatically; the angles at `P0` and `P2`
//! both reduce to `cos(delta) = 1 - 2 tan^2(theta / 2)` for the fold angle
//! `delta` between the apexes.
//!
//! The pentagon uses `P0 = 0`, `P1 = e_x`, `P4 = (cos t, sin t, 0)` with
//! `P2`, `P3` on cones around `P1` and `P4` described by `phi2`, `phi3`.

use serde::Serialize;

use crate::class::{ClassTag, ConfigSpaceClass};
use crate::error::{Error, Result};
use crate::geometry::{pi_fraction, BondAngle, Polygon, Vec3};
use crate::hexagon::Sign;

/// The two free dihedral angles of a pentagon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PentagonParams {
    pub phi2: f64,
    pub phi3: f64,
}

/// Dihedral separation of the two quadrilateral apexes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FoldAngle {
    pub delta: f64,
}

/// Note printed with every quadrilateral classification.
pub const QUAD_THRESHOLD_NOTE: &str =
    "a unit square has vertex angle pi/2; folded quadrilaterals exist up to theta = pi/2 \
     (cos delta = 1 - 2 tan^2(theta/2)), not pi/4 as sometimes stated";

fn unsupported(n: usize) -> Error {
    Error::InvalidArgument(format!("small polygons need n in {{3, 4, 5}}, got {n}"))
}

/// `cos(delta) = 1 - 2 tan^2(theta / 2)`; `None` when out of `[-1, 1]`.
pub fn fold_angle(theta: BondAngle) -> Option<FoldAngle> {
    let t = theta.s() / theta.c();
    let cos = 1.0 - 2.0 * t * t;
    if theta.is_near(pi_fraction(1, 2)) {
        return Some(FoldAngle {
            delta: std::f64::consts::PI,
        });
    }
    (cos >= -1.0).then(|| FoldAngle {
        delta: cos.min(1.0).acos(),
    })
}

/// `(1 - 2 cos t + 2 cos^2 t) / (2 sin^2 t)`, the value both `cos(phi2)` and
/// `cos(phi3)` must take.
pub fn pentagon_cos_phi(theta: BondAngle) -> f64 {
    let (s, c) = theta.theta().sin_cos();
    (1.0 - 2.0 * c + 2.0 * c * c) / (2.0 * s * s)
}

/// Left minus right side of the pentagon relation
/// `(-4c^2 + 2c + 1) / (4 (1 - c)) = sin^2 t sin(phi2) (sin(phi2) - sin(phi3))`.
pub fn pentagon_equation_residual(theta: BondAngle, phi2: f64, phi3: f64) -> Result<f64> {
    if theta.theta() == 0.0 {
        return Err(Error::OutOfRegime {
            what: "pentagon relation",
            requirement: "theta != 0",
            theta: 0.0,
        });
    }
    let (s, c) = theta.theta().sin_cos();
    let lhs = (-4.0 * c * c + 2.0 * c + 1.0) / (4.0 * (1.0 - c));
    let rhs = s * s * phi2.sin() * (phi2.sin() - phi3.sin());
    Ok(lhs - rhs)
}

fn is_pentagon_angle(theta: BondAngle) -> bool {
    theta.is_near(pi_fraction(1, 5)) || theta.is_near(pi_fraction(3, 5))
}

pub fn classify_small(n: usize, theta: BondAngle) -> Result<ConfigSpaceClass> {
    let class = match n {
        3 if theta.is_near(pi_fraction(1, 3)) => {
            ConfigSpaceClass::new(ClassTag::SinglePoint, "regular triangle")
        }
        3 => ConfigSpaceClass::new(ClassTag::Empty, "triangles are equiangular only at pi/3"),
        4 => match fold_angle(theta) {
            None => ConfigSpaceClass::new(ClassTag::Empty, QUAD_THRESHOLD_NOTE),
            Some(_) if theta.is_near(0.0) => ConfigSpaceClass::new(
                ClassTag::SinglePoint,
                format!("4-folded edge; {QUAD_THRESHOLD_NOTE}"),
            ),
            Some(_) if theta.is_near(pi_fraction(1, 2)) => ConfigSpaceClass::new(
                ClassTag::SinglePoint,
                format!("square; {QUAD_THRESHOLD_NOTE}"),
            ),
            Some(_) => ConfigSpaceClass::new(
                ClassTag::TwoPoints,
                format!("folded rhombus and its mirror image; {QUAD_THRESHOLD_NOTE}"),
            ),
        },
        5 if theta.is_near(pi_fraction(1, 5)) => {
            ConfigSpaceClass::new(ClassTag::SinglePoint, "regular star pentagon")
        }
        5 if theta.is_near(pi_fraction(3, 5)) => {
            ConfigSpaceClass::new(ClassTag::SinglePoint, "regular pentagon")
        }
        5 => ConfigSpaceClass::new(
            ClassTag::Empty,
            "pentagons are equiangular only at pi/5 and 3pi/5",
        ),
        _ => return Err(unsupported(n)),
    };
    Ok(class)
}

/// Quadrilateral with apexes at dihedral angles `alpha` and `beta`.
pub fn quad_vertices(theta: BondAngle, alpha: f64, beta: f64) -> [Vec3; 4] {
    let (c, s) = (theta.c(), theta.s());
    [
        Vec3::new(-s, 0.0, 0.0),
        Vec3::new(0.0, c * alpha.cos(), c * alpha.sin()),
        Vec3::new(s, 0.0, 0.0),
        Vec3::new(0.0, c * beta.cos(), c * beta.sin()),
    ]
}

/// Pentagon from the cone angles; `theta` is taken raw so that it can be
/// varied continuously.
pub fn pentagon_vertices(theta: f64, phi2: f64, phi3: f64) -> [Vec3; 5] {
    let (s, c) = theta.sin_cos();
    let cone = |phi: f64| Vec3::new(1.0 - c, s * phi.cos(), s * phi.sin());
    let q = cone(phi3);
    // reflection exchanging P1 and P4
    let p3 = Vec3::new(c * q.x + s * q.y, s * q.x - c * q.y, q.z);
    [
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(1.0, 0.0, 0.0),
        cone(phi2),
        p3,
        Vec3::new(c, s, 0.0),
    ]
}

/// Closed-form configuration. The sign picks the mirror image of a folded
/// quadrilateral and is ignored for the planar cases.
pub fn construct_small(n: usize, theta: BondAngle, sign: Sign) -> Result<Polygon> {
    if classify_small(n, theta)?.tag == ClassTag::Empty {
        return Err(Error::OutOfRegime {
            what: "small polygon",
            requirement: "a non-empty configuration space",
            theta: theta.theta(),
        });
    }
    let vertices = match n {
        3 => {
            let h = 0.5 * 3f64.sqrt();
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.5, h, 0.0),
            ]
        }
        4 => {
            let delta = fold_angle(theta).expect("class is non-empty").delta;
            let half = 0.5 * sign.value() * delta;
            quad_vertices(theta, half, -half).to_vec()
        }
        5 => {
            debug_assert!(is_pentagon_angle(theta));
            pentagon_vertices(theta.theta(), 0.0, 0.0).to_vec()
        }
        _ => return Err(unsupported(n)),
    };
    Polygon::new(vertices)
}
