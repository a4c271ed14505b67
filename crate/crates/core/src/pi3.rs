//! The exceptional bond angle `theta = pi/3`.
//!
//! Here the angle condition between neighbouring dihedral angles reads
//! `(cos p + 1)(cos q + 1) = 2 sin p sin q`. It is solved by `p = pi` for any
//! `q`, and otherwise by `q = pi` or `q = f(p)` with the involution `f`.
//! Apart from the two chairs, the solution set is a union of six circles
//! meeting in four planar configurations.

use std::f64::consts::PI;

use serde::Serialize;

use crate::geometry::{pi_fraction, residual, BondAngle};
use crate::hexagon::{build_hexagon, Sign, TorusPoint};
use crate::torus::wrap_angle;

/// Residual bound used to accept a sampled ordering.
const ORDER_TOL: f64 = 1e-9;

/// `tan(f/2) = 1 / (2 tan(phi/2))`, with `f(0) = pi` and `f(pi) = 0`.
pub fn f_map(phi: f64) -> f64 {
    let phi = wrap_angle(phi);
    if phi == PI {
        return 0.0;
    }
    let (s, c) = (0.5 * phi).sin_cos();
    wrap_angle(2.0 * c.atan2(2.0 * s))
}

/// The fixed points of `f` are `+-arccos(1/3)`.
pub fn chair_angle_pi3() -> f64 {
    (1.0f64 / 3.0).acos()
}

/// Index 0, 1, 2 for the slots of `phi1`, `phi3`, `phi5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Slot(pub usize);

impl Slot {
    pub const ALL: [Slot; 3] = [Slot(0), Slot(1), Slot(2)];

    fn next(self) -> Slot {
        Slot((self.0 + 1) % 3)
    }

    /// 1, 3 or 5.
    pub fn label(self) -> usize {
        2 * self.0 + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Pi3Kind {
    /// Two angles equal to `pi`; the free one sits in the given slot.
    PiPiPhi(Slot),
    /// `pi` in the given slot, `phi` and `f(phi)` in the other two.
    PhiPiF(Slot),
    Chair(Sign),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pi3Family {
    pub kind: Pi3Kind,
    pub parameter: f64,
}

fn bond() -> BondAngle {
    BondAngle::from_pi_fraction(1, 3).expect("pi/3 is a valid bond angle")
}

fn place(values: [(Slot, f64); 3]) -> TorusPoint {
    let mut x = [0.0; 3];
    for (slot, v) in values {
        x[slot.0] = v;
    }
    TorusPoint::new(x[0], x[1], x[2])
}

/// Point of a circle family at parameter `phi`. For `PhiPiF` the slot after
/// the `pi` slot (cyclically) carries `phi`, unless that ordering fails the
/// residual check, in which case `phi` and `f(phi)` are swapped.
pub fn family_point(kind: Pi3Kind, phi: f64) -> Option<TorusPoint> {
    match kind {
        Pi3Kind::PiPiPhi(j) => Some(place([(j, phi), (j.next(), PI), (j.next().next(), PI)])),
        Pi3Kind::PhiPiF(j) => {
            let (k, l) = (j.next(), j.next().next());
            let fphi = f_map(phi);
            [
                place([(j, PI), (k, phi), (l, fphi)]),
                place([(j, PI), (k, fphi), (l, phi)]),
            ]
            .into_iter()
            .find(|t| hexagon_residual(*t) < ORDER_TOL)
        }
        Pi3Kind::Chair(sign) => Some(TorusPoint::splat(sign.value() * chair_angle_pi3())),
    }
}

fn hexagon_residual(t: TorusPoint) -> f64 {
    let theta = bond();
    residual(&build_hexagon(theta, t), theta)
        .map(|r| r.max_residual)
        .unwrap_or(f64::INFINITY)
}

/// The six circle families in a fixed order.
pub fn circle_kinds() -> Vec<Pi3Kind> {
    let mut out: Vec<Pi3Kind> = Slot::ALL.iter().map(|&j| Pi3Kind::PiPiPhi(j)).collect();
    out.extend(Slot::ALL.iter().map(|&j| Pi3Kind::PhiPiF(j)));
    out
}

/// Uniform parameter grid `phi_k = -pi + 2 pi k / samples`, wrapped. With an
/// even count it contains `0` and `pi` exactly.
pub fn parameter_grid(samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|k| {
            let num = 2 * k as i64 - samples as i64;
            if num == 0 {
                0.0
            } else {
                wrap_angle(pi_fraction(num, samples as i64))
            }
        })
        .collect()
}

/// Samples of every family: the six circles followed by the two chairs.
/// `samples` is rounded up to an even number of at least 4.
pub fn pi3_families(samples: usize) -> Vec<(Pi3Family, TorusPoint)> {
    let samples = samples.max(4).next_multiple_of(2);
    let grid = parameter_grid(samples);
    let mut out = Vec::new();
    for kind in circle_kinds() {
        for &phi in &grid {
            if let Some(t) = family_point(kind, phi) {
                out.push((
                    Pi3Family {
                        kind,
                        parameter: phi,
                    },
                    t,
                ));
            }
        }
    }
    for sign in [Sign::Plus, Sign::Minus] {
        let kind = Pi3Kind::Chair(sign);
        let phi = sign.value() * chair_angle_pi3();
        out.push((
            Pi3Family {
                kind,
                parameter: phi,
            },
            TorusPoint::splat(phi),
        ));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Pi3Vertex {
    pub label: char,
    pub torus: TorusPoint,
}

#[derive(Clone, Debug, Serialize)]
pub struct Pi3Circle {
    pub kind: Pi3Kind,
    /// Vertex indices hit at `phi = 0` and `phi = pi`.
    pub ends: (usize, usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct Pi3Graph {
    pub vertices: Vec<Pi3Vertex>,
    pub circles: Vec<Pi3Circle>,
    /// Each circle splits into two arcs between its two vertices.
    pub edges: Vec<(usize, usize)>,
}

impl Pi3Graph {
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            for &(a, b) in &self.edges {
                if a == v && !seen[b] {
                    stack.push(b);
                }
                if b == v && !seen[a] {
                    stack.push(a);
                }
            }
        }
        n > 0 && seen.into_iter().all(|s| s)
    }

    /// True if every pair of distinct vertices is joined by exactly two edges.
    pub fn is_doubled_complete(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                self.edges
                    .iter()
                    .filter(|&&(a, b)| (a.min(b), a.max(b)) == (i, j))
                    .count()
                    == 2
            })
        }) && self.edges.iter().all(|(a, b)| a != b)
    }
}

/// Planar configurations where the circles cross.
pub fn pi3_vertices() -> Vec<Pi3Vertex> {
    [
        ('A', TorusPoint::new(PI, PI, PI)),
        ('B', TorusPoint::new(PI, PI, 0.0)),
        ('C', TorusPoint::new(0.0, PI, PI)),
        ('D', TorusPoint::new(PI, 0.0, PI)),
    ]
    .into_iter()
    .map(|(label, torus)| Pi3Vertex { label, torus })
    .collect()
}

/// Builds the graph by evaluating each circle at `phi = 0` and `phi = pi`
/// and locating the result among the four vertices.
pub fn pi3_graph() -> Pi3Graph {
    let vertices = pi3_vertices();
    let locate = |t: TorusPoint| {
        vertices
            .iter()
            .position(|v| v.torus.distance(&t) < 1e-12)
            .expect("circle end is a planar vertex")
    };
    let mut circles = Vec::new();
    let mut edges = Vec::new();
    for kind in circle_kinds() {
        let a = locate(family_point(kind, 0.0).expect("valid ordering at phi = 0"));
        let b = locate(family_point(kind, PI).expect("valid ordering at phi = pi"));
        circles.push(Pi3Circle { kind, ends: (a, b) });
        edges.push((a, b));
        edges.push((a, b));
    }
    Pi3Graph {
        vertices,
        circles,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexagon::{angle_condition_residual, boat};

    /// Quotient form of `f`.
    fn f_quotient(phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        let den = (c + 1.0).powi(2) + 4.0 * s * s;
        let x = (-(c + 1.0).powi(2) + 4.0 * s * s) / den;
        let y = 4.0 * s * (c + 1.0) / den;
        y.atan2(x)
    }

    #[test]
    fn f_values() {
        assert_eq!(f_map(0.0), PI);
        assert_eq!(f_map(PI), 0.0);
        assert_eq!(f_map(-PI), 0.0);
        assert!((f_map(PI / 2.0) - 0.6f64.acos()).abs() < 1e-15);
        assert!((f_map(PI / 2.0) - 0.92730).abs() < 1e-5);
        let a = chair_angle_pi3();
        assert!((a - 1.23096).abs() < 1e-5);
        assert!((f_map(a) - a).abs() < 1e-14);
        assert!((f_map(-a) + a).abs() < 1e-14);
    }

    #[test]
    fn f_matches_quotient_form() {
        for k in 1..400 {
            let phi = -PI + 2.0 * PI * k as f64 / 400.0;
            if (phi.abs() - PI).abs() < 0.1 {
                continue;
            }
            let d = wrap_angle(f_map(phi) - f_quotient(phi));
            assert!(d.abs() < 1e-12, "phi = {phi}: {d}");
        }
    }

    #[test]
    fn f_involution_and_angle_condition() {
        let theta = bond();
        for k in 0..1000 {
            let phi = wrap_angle(-PI + 2.0 * PI * k as f64 / 1000.0);
            let back = wrap_angle(f_map(f_map(phi)) - phi);
            assert!(back.abs() < 1e-10, "phi = {phi}");
            assert!(angle_condition_residual(theta, phi, f_map(phi)).abs() < 1e-12);
        }
    }

    #[test]
    fn arbitrary_neighbour_of_pi() {
        let theta = bond();
        for k in 0..64 {
            let phi3 = -PI + 2.0 * PI * k as f64 / 64.0;
            assert!(angle_condition_residual(theta, PI, phi3).abs() < 1e-10);
        }
    }

    #[test]
    fn families_close() {
        let pts = pi3_families(48);
        assert_eq!(pts.len(), 6 * 48 + 2);
        for (fam, t) in &pts {
            assert!(hexagon_residual(*t) < 1e-9, "{fam:?} {t:?}");
        }
    }

    #[test]
    fn both_orderings_pass() {
        // f is an involution, so swapping phi and f(phi) retraces the circle.
        for phi in [0.3, -1.9, 2.5] {
            for j in Slot::ALL {
                let (k, l) = (j.next(), j.next().next());
                let a = place([(j, PI), (k, phi), (l, f_map(phi))]);
                let b = place([(j, PI), (k, f_map(phi)), (l, phi)]);
                assert!(hexagon_residual(a) < ORDER_TOL && hexagon_residual(b) < ORDER_TOL);
            }
        }
    }

    #[test]
    fn grid_contains_zero_and_pi() {
        let g = parameter_grid(8);
        assert!(g.contains(&0.0) && g.contains(&PI));
    }

    #[test]
    fn circle_through_a_and_d() {
        let t = family_point(Pi3Kind::PiPiPhi(Slot(1)), 0.0).unwrap();
        assert_eq!(t.to_array(), [PI, 0.0, PI]);
        let t = family_point(Pi3Kind::PiPiPhi(Slot(1)), PI).unwrap();
        assert_eq!(t.to_array(), [PI, PI, PI]);
    }

    #[test]
    fn boat_on_f_circle() {
        let a = chair_angle_pi3();
        let t = family_point(Pi3Kind::PhiPiF(Slot(0)), a).unwrap();
        assert!(t.distance(&TorusPoint::new(PI, a, a)) < 1e-12);
        // limit of the boat family from above
        let near = BondAngle::new(pi_fraction(1, 3) + 1e-9).unwrap();
        let b = boat(near, Sign::Plus).unwrap();
        assert!(b.torus.distance(&t) < 1e-6);
    }

    #[test]
    fn chairs() {
        for (fam, t) in pi3_families(4)
            .into_iter()
            .filter(|(f, _)| matches!(f.kind, Pi3Kind::Chair(_)))
        {
            assert!((t.phi1().abs() - 1.23096).abs() < 1e-5, "{fam:?}");
            assert!(hexagon_residual(t) < 1e-10);
        }
    }

    #[test]
    fn graph_shape() {
        let g = pi3_graph();
        assert_eq!(g.vertices.len(), 4);
        assert_eq!(g.circles.len(), 6);
        assert_eq!(g.edges.len(), 12);
        assert!(g.is_connected());
        assert!(g.is_doubled_complete());
        for c in &g.circles {
            assert_ne!(c.ends.0, c.ends.1);
        }
    }
}
