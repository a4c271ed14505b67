//! Brute-force solver: grid search over the parameter torus followed by
//! local least-squares refinement. Knows nothing about the closed forms; the
//! residual systems only place the polygon and measure the angles that the
//! placement does not satisfy by construction.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{angle_between, congruent, residual, BondAngle, Polygon, Vec3};
use crate::hexagon::hexagon_vertices;
use crate::small_n::{pentagon_vertices, quad_vertices};
use crate::torus::{torus_distance, wrap_angle, TorusIndex};

pub const TOL_REFINED: f64 = 1e-10;
pub const MAX_ITER: usize = 200;
/// Finite-difference step far from a solution. Shrinks with the residual so
/// that the non-smooth solutions at `theta = 0` are still resolved.
pub const FD_STEP: f64 = 1e-6;
const FD_STEP_MIN: f64 = 1e-10;
const MAX_STEP: f64 = 0.5;
const MAX_HALVINGS: usize = 40;
const CONGRUENCE_TOL: f64 = 1e-6;

pub const THREADS_ENV: &str = "EQUIPOLY_THREADS";

/// The conditions a placement leaves open, as a map from the parameter torus
/// to residuals in radians.
pub trait ResidualSystem: Sync {
    fn n(&self) -> usize;

    fn dim(&self) -> usize;

    /// Bond angle the system is posed at (its initial value if it is one of
    /// the unknowns).
    fn theta(&self) -> f64;

    fn residuals(&self, x: &[f64]) -> Vec<f64>;

    /// The polygon at `x` and the bond angle it should carry.
    fn configuration(&self, x: &[f64]) -> (Polygon, BondAngle);

    /// Candidate cut-off for cell centres at `res` points per axis.
    fn coarse_threshold(&self, res: usize) -> f64 {
        10.0 * TAU / res as f64
    }

    /// The placement does not fix the isometry (all pinned vertices
    /// coincide); distinct points may then describe congruent polygons.
    fn degenerate_frame(&self) -> bool {
        false
    }
}

fn vertex_angle(prev: Vec3, here: Vec3, next: Vec3) -> f64 {
    angle_between(prev - here, next - here)
}

/// Hexagon over `(phi1, phi3, phi5)`; residuals are the angles at `P0`,
/// `P2`, `P4` minus `theta`.
#[derive(Clone, Copy, Debug)]
pub struct HexagonSystem {
    pub theta: BondAngle,
}

impl ResidualSystem for HexagonSystem {
    fn theta(&self) -> f64 {
        self.theta.theta()
    }

    fn n(&self) -> usize {
        6
    }

    fn dim(&self) -> usize {
        3
    }

    fn residuals(&self, x: &[f64]) -> Vec<f64> {
        let p = hexagon_vertices(self.theta, x[0], x[1], x[2]);
        let t = self.theta.theta();
        [0, 2, 4]
            .iter()
            .map(|&i| vertex_angle(p[(i + 5) % 6], p[i], p[i + 1]) - t)
            .collect()
    }

    fn configuration(&self, x: &[f64]) -> (Polygon, BondAngle) {
        let p = hexagon_vertices(self.theta, x[0], x[1], x[2]);
        (Polygon::new(p.to_vec()).expect("finite"), self.theta)
    }

    /// Each even-vertex angle moves by at most `C` per radian of either
    /// neighbouring dihedral angle, so the residual map is `2C`-Lipschitz.
    /// Any cell containing a solution has its centre below the threshold.
    fn coarse_threshold(&self, res: usize) -> f64 {
        let half_diagonal = 0.5 * 3f64.sqrt() * TAU / res as f64;
        2.0 * self.theta.c() * half_diagonal
    }

    fn degenerate_frame(&self) -> bool {
        self.theta.s() < 1e-12
    }
}

/// Pentagon over `(phi2, phi3)` at fixed `theta`.
#[derive(Clone, Copy, Debug)]
pub struct PentagonSystem {
    pub theta: BondAngle,
}

fn pentagon_residuals(theta: f64, phi2: f64, phi3: f64) -> Vec<f64> {
    let p = pentagon_vertices(theta, phi2, phi3);
    vec![
        (p[3] - p[2]).norm() - 1.0,
        vertex_angle(p[1], p[2], p[3]) - theta,
        vertex_angle(p[2], p[3], p[4]) - theta,
    ]
}

impl ResidualSystem for PentagonSystem {
    fn theta(&self) -> f64 {
        self.theta.theta()
    }

    fn n(&self) -> usize {
        5
    }

    fn dim(&self) -> usize {
        2
    }

    fn residuals(&self, x: &[f64]) -> Vec<f64> {
        pentagon_residuals(self.theta.theta(), x[0], x[1])
    }

    fn configuration(&self, x: &[f64]) -> (Polygon, BondAngle) {
        let p = pentagon_vertices(self.theta.theta(), x[0], x[1]);
        (Polygon::new(p.to_vec()).expect("finite"), self.theta)
    }
}

/// Pentagon with the bond angle as a third unknown `(phi2, phi3, theta)`.
/// Used to pull a near-miss at a sampled `theta` onto an exact solution.
#[derive(Clone, Copy, Debug)]
pub struct PentagonThetaSystem;

impl ResidualSystem for PentagonThetaSystem {
    fn theta(&self) -> f64 {
        f64::NAN
    }

    fn n(&self) -> usize {
        5
    }

    fn dim(&self) -> usize {
        3
    }

    fn residuals(&self, x: &[f64]) -> Vec<f64> {
        pentagon_residuals(x[2], x[0], x[1])
    }

    fn configuration(&self, x: &[f64]) -> (Polygon, BondAngle) {
        let p = pentagon_vertices(x[2], x[0], x[1]);
        let theta = BondAngle::new(x[2].clamp(0.0, PI - 1e-15)).expect("clamped");
        (Polygon::new(p.to_vec()).expect("finite"), theta)
    }
}

/// Quadrilateral over the fold angle `delta`, apexes at `+-delta/2`.
#[derive(Clone, Copy, Debug)]
pub struct QuadSystem {
    pub theta: BondAngle,
}

impl ResidualSystem for QuadSystem {
    fn theta(&self) -> f64 {
        self.theta.theta()
    }

    fn n(&self) -> usize {
        4
    }

    fn dim(&self) -> usize {
        1
    }

    fn residuals(&self, x: &[f64]) -> Vec<f64> {
        let p = quad_vertices(self.theta, 0.5 * x[0], -0.5 * x[0]);
        let t = self.theta.theta();
        vec![
            vertex_angle(p[3], p[0], p[1]) - t,
            vertex_angle(p[1], p[2], p[3]) - t,
        ]
    }

    fn configuration(&self, x: &[f64]) -> (Polygon, BondAngle) {
        let p = quad_vertices(self.theta, 0.5 * x[0], -0.5 * x[0]);
        (Polygon::new(p.to_vec()).expect("finite"), self.theta)
    }

    fn degenerate_frame(&self) -> bool {
        self.theta.s() < 1e-12
    }
}

fn norm(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn wrap_all(x: &mut [f64]) {
    for v in x {
        *v = wrap_angle(*v);
    }
}

/// Runs `f` on a pool sized by `EQUIPOLY_THREADS` (unset or 0: all cores).
pub fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn cell_centre(mut index: usize, res: usize, dim: usize) -> Vec<f64> {
    let h = TAU / res as f64;
    let mut x = vec![0.0; dim];
    for v in x.iter_mut() {
        *v = -PI + ((index % res) as f64 + 0.5) * h;
        index /= res;
    }
    x.reverse();
    x
}

/// Cell centres whose residual norm is below `threshold`, in lexicographic
/// cell order.
pub fn grid_candidates_with<S: ResidualSystem + ?Sized>(
    sys: &S,
    res: usize,
    threshold: f64,
) -> Vec<Vec<f64>> {
    let dim = sys.dim();
    let total = res.pow(dim as u32);
    (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let x = cell_centre(i, res, dim);
            (norm(&sys.residuals(&x)) < threshold).then_some(x)
        })
        .collect()
}

pub fn grid_candidates<S: ResidualSystem + ?Sized>(sys: &S, res: usize) -> Vec<Vec<f64>> {
    grid_candidates_with(sys, res, sys.coarse_threshold(res))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Refined {
    pub point: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn jacobian<S: ResidualSystem + ?Sized>(sys: &S, x: &[f64], m: usize, step: f64) -> DMatrix<f64> {
    let d = x.len();
    let mut jac = DMatrix::zeros(m, d);
    let mut probe = x.to_vec();
    for j in 0..d {
        probe[j] = x[j] + step;
        let hi = sys.residuals(&probe);
        probe[j] = x[j] - step;
        let lo = sys.residuals(&probe);
        probe[j] = x[j];
        for i in 0..m {
            jac[(i, j)] = (hi[i] - lo[i]) / (2.0 * step);
        }
    }
    jac
}

/// Gauss-Newton with minimum-norm steps and step halving. `None` if the
/// residual norm does not drop below [`TOL_REFINED`] within [`MAX_ITER`]
/// iterations.
pub fn refine<S: ResidualSystem + ?Sized>(sys: &S, start: &[f64]) -> Option<Refined> {
    refine_impl(sys, start, None)
}

/// As [`refine`] with coordinate `pin` held at its start value.
///
/// Near a crossing of solution curves the residuals are close to
/// homogeneous quadratics, where a Newton step from `x` is `-x / 2`: every
/// unconstrained start nearby falls into the crossing. Restricted to a grid
/// plane the iteration instead lands where a curve pierces that plane.
pub fn refine_pinned<S: ResidualSystem + ?Sized>(
    sys: &S,
    start: &[f64],
    pin: usize,
) -> Option<Refined> {
    refine_impl(sys, start, Some(pin))
}

fn refine_impl<S: ResidualSystem + ?Sized>(
    sys: &S,
    start: &[f64],
    pin: Option<usize>,
) -> Option<Refined> {
    if start.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let mut x = start.to_vec();
    wrap_all(&mut x);
    let mut r = sys.residuals(&x);
    let mut rn = norm(&r);
    for iterations in 0..=MAX_ITER {
        if rn < TOL_REFINED {
            return Some(Refined {
                point: x,
                residual: rn,
                iterations,
            });
        }
        if iterations == MAX_ITER {
            break;
        }
        let mut jac = jacobian(sys, &x, r.len(), (1e-2 * rn).clamp(FD_STEP_MIN, FD_STEP));
        if let Some(k) = pin {
            jac.column_mut(k).fill(0.0);
        }
        let svd = jac.svd(true, true);
        let cutoff = svd.singular_values.max() * 1e-10;
        if cutoff == 0.0 {
            return None;
        }
        let rhs = DVector::from_column_slice(&r);
        let mut step = -svd.solve(&rhs, cutoff).ok()?;
        let len = step.norm();
        if len > MAX_STEP {
            step *= MAX_STEP / len;
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let mut trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + t * s).collect();
            wrap_all(&mut trial);
            let tr = sys.residuals(&trial);
            let tn = norm(&tr);
            if tn < rn {
                x = trial;
                r = tr;
                rn = tn;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    None
}

/// Deduplicated oracle solutions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionCloud {
    pub n: usize,
    pub dim: usize,
    pub theta: f64,
    /// Sorted lexicographically, pairwise further apart than `dedupe_radius`.
    pub points: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub resolution: usize,
    pub grid_spacing: f64,
    pub dedupe_radius: f64,
    pub coarse_threshold: f64,
    pub tol_refined: f64,
    pub candidates: usize,
    /// Refinement runs that converged, over all pinned and free runs.
    pub converged: usize,
    /// `(kept, dropped)` pairs merged because their polygons are congruent.
    pub identified: Vec<(Vec<f64>, Vec<f64>)>,
}

impl SolutionCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index and distance of the cloud point nearest to `q`.
    pub fn nearest(&self, q: &[f64]) -> Option<(usize, f64)> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, torus_distance(p, q)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub resolution: usize,
    /// Defaults to half the grid spacing.
    pub dedupe_radius: Option<f64>,
    /// Defaults to the system's coarse threshold.
    pub threshold: Option<f64>,
}

impl OracleOptions {
    pub fn new(resolution: usize) -> Self {
        Self {
            resolution,
            dedupe_radius: None,
            threshold: None,
        }
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Greedy deduplication in the given order: a point survives unless it lies
/// within `radius` of an earlier survivor.
fn dedupe(points: &[Vec<f64>], dim: usize, radius: f64) -> Vec<usize> {
    let index = TorusIndex::new(points, dim, radius);
    let mut removed = vec![false; points.len()];
    let mut kept = Vec::new();
    for i in 0..points.len() {
        if removed[i] {
            continue;
        }
        kept.push(i);
        for j in index.within(&points[i], radius) {
            removed[j] = true;
        }
    }
    kept
}

pub fn solve_all<S: ResidualSystem + ?Sized>(
    sys: &S,
    res: usize,
    dedupe_radius: f64,
) -> SolutionCloud {
    solve_with(
        sys,
        OracleOptions {
            resolution: res,
            dedupe_radius: Some(dedupe_radius),
            threshold: None,
        },
    )
}

pub fn solve_with<S: ResidualSystem + ?Sized>(sys: &S, opts: OracleOptions) -> SolutionCloud {
    let res = opts.resolution.max(2);
    let dim = sys.dim();
    let h = TAU / res as f64;
    let radius = opts.dedupe_radius.unwrap_or(0.5 * h);
    let threshold = opts.threshold.unwrap_or_else(|| sys.coarse_threshold(res));

    let (candidates, refined) = with_pool(|| {
        let candidates = grid_candidates_with(sys, res, threshold);
        // one unconstrained and, for curves, one run per pinned coordinate
        let pins: Vec<Option<usize>> = if dim > 1 {
            std::iter::once(None).chain((0..dim).map(Some)).collect()
        } else {
            vec![None]
        };
        let refined: Vec<Refined> = candidates
            .par_iter()
            .flat_map_iter(|c| pins.iter().filter_map(|&pin| refine_impl(sys, c, pin)))
            .filter(|r| {
                let (poly, theta) = sys.configuration(&r.point);
                residual(&poly, theta).is_ok_and(|rep| rep.max_residual < TOL_REFINED)
            })
            .collect();
        (candidates.len(), refined)
    });
    let converged = refined.len();

    let mut order: Vec<usize> = (0..refined.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(&refined[a].point, &refined[b].point));
    let sorted: Vec<Vec<f64>> = order.iter().map(|&i| refined[i].point.clone()).collect();
    let sorted_res: Vec<f64> = order.iter().map(|&i| refined[i].residual).collect();
    let kept = dedupe(&sorted, dim, radius);
    let mut points: Vec<Vec<f64>> = kept.iter().map(|&i| sorted[i].clone()).collect();
    let mut residuals: Vec<f64> = kept.iter().map(|&i| sorted_res[i]).collect();

    let mut identified = Vec::new();
    if sys.degenerate_frame() {
        let polys: Vec<Polygon> = points.iter().map(|p| sys.configuration(p).0).collect();
        let mut drop = vec![false; points.len()];
        for i in 0..points.len() {
            if drop[i] {
                continue;
            }
            for j in i + 1..points.len() {
                if !drop[j] && congruent(&polys[i], &polys[j], CONGRUENCE_TOL) {
                    drop[j] = true;
                    identified.push((points[i].clone(), points[j].clone()));
                }
            }
        }
        let mut k = 0;
        points.retain(|_| {
            k += 1;
            !drop[k - 1]
        });
        let mut k = 0;
        residuals.retain(|_| {
            k += 1;
            !drop[k - 1]
        });
    }

    SolutionCloud {
        n: sys.n(),
        dim,
        theta: sys.theta(),
        points,
        residuals,
        resolution: res,
        grid_spacing: h,
        dedupe_radius: radius,
        coarse_threshold: threshold,
        tol_refined: TOL_REFINED,
        candidates,
        converged,
        identified,
    }
}

/// An exact pentagon found from a sampled bond angle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepHit {
    pub theta: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub residual: f64,
}

/// For each sampled `theta`, grid candidates at that angle are refined with
/// `theta` free. A hit is attributed to the sample only if the refined angle
/// stays within `window` of it, so each exact solution shows up at the
/// samples nearest to it and nowhere else.
pub fn pentagon_theta_sweep(thetas: &[f64], res: usize, window: f64) -> Vec<(f64, Vec<SweepHit>)> {
    with_pool(|| {
        thetas
            .iter()
            .map(|&t| {
                let Ok(theta) = BondAngle::new(t) else {
                    return (t, Vec::new());
                };
                let sys = PentagonSystem { theta };
                let candidates = grid_candidates(&sys, res);
                let mut hits: Vec<SweepHit> = candidates
                    .par_iter()
                    .filter_map(|c| refine(&PentagonThetaSystem, &[c[0], c[1], t]))
                    .filter(|r| (r.point[2] - t).abs() <= window)
                    .map(|r| SweepHit {
                        theta: r.point[2],
                        phi2: r.point[0],
                        phi3: r.point[1],
                        residual: r.residual,
                    })
                    .collect();
                hits.sort_by(|a, b| {
                    lex_cmp(&[a.theta, a.phi2, a.phi3], &[b.theta, b.phi2, b.phi3])
                });
                let pts: Vec<Vec<f64>> =
                    hits.iter().map(|h| vec![h.phi2, h.phi3, h.theta]).collect();
                let kept = dedupe(&pts, 3, 0.5 * TAU / res as f64);
                let hits = kept.into_iter().map(|i| hits[i].clone()).collect();
                (t, hits)
            })
            .collect()
    })
}

/// Oracle clouds of quadrilateral fold angles for each sampled `theta`.
pub fn quad_theta_sweep(thetas: &[BondAngle], res: usize) -> Vec<SolutionCloud> {
    thetas
        .iter()
        .map(|&theta| solve_with(&QuadSystem { theta }, OracleOptions::new(res)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexagon::{boat, chair, Sign, TorusPoint};

    fn b(num: i64, den: i64) -> BondAngle {
        BondAngle::from_pi_fraction(num, den).unwrap()
    }

    #[test]
    fn cell_centres_are_lexicographic() {
        let res = 4;
        let cells: Vec<Vec<f64>> = (0..res * res).map(|i| cell_centre(i, res, 2)).collect();
        for w in cells.windows(2) {
            assert_eq!(lex_cmp(&w[0], &w[1]), std::cmp::Ordering::Less);
        }
        assert_eq!(cells[0], vec![-PI + 0.25 * PI, -PI + 0.25 * PI]);
    }

    #[test]
    fn no_candidates_beyond_two_thirds_pi() {
        let sys = HexagonSystem { theta: b(5, 6) };
        assert!(grid_candidates(&sys, 32).is_empty());
    }

    #[test]
    fn regular_candidates_near_origin() {
        let sys = HexagonSystem { theta: b(2, 3) };
        let c = grid_candidates(&sys, 48);
        assert!(!c.is_empty());
        assert!(c.iter().all(|x| torus_distance(x, &[0.0; 3]) < 1.0));
    }

    #[test]
    fn refine_chair_from_perturbed_start() {
        let theta = b(1, 2);
        let sys = HexagonSystem { theta };
        let ch = chair(theta, Sign::Plus).unwrap().torus.to_array();
        let start: Vec<f64> = ch.iter().map(|v| v + 0.05).collect();
        let r = refine(&sys, &start).unwrap();
        assert!(r.residual < TOL_REFINED);
        assert!(torus_distance(&r.point, &ch) < 1e-8);
    }

    #[test]
    fn pinned_refinement_leaves_crossing_branches_populated() {
        // at pi/3, (pi, pi, pi) is a crossing of three solution circles
        let sys = HexagonSystem { theta: b(1, 3) };
        let start = [PI - 0.3, PI + 0.1, PI - 0.05];
        let free = refine(&sys, &start).unwrap();
        assert!(torus_distance(&free.point, &[PI; 3]) < 1e-3);
        let pinned = refine_pinned(&sys, &start, 0).unwrap();
        assert_eq!(pinned.point[0], start[0]);
        assert!(torus_distance(&pinned.point, &[start[0], PI, PI]) < 1e-6);
    }

    #[test]
    fn refine_fixed_point_on_boat() {
        let theta = b(1, 2);
        let sys = HexagonSystem { theta };
        let bt = boat(theta, Sign::Plus).unwrap().torus.to_array();
        let r = refine(&sys, &bt).unwrap();
        assert!(torus_distance(&r.point, &bt) < 1e-9);
    }

    #[test]
    fn refine_fails_without_solutions() {
        let sys = HexagonSystem { theta: b(5, 6) };
        for start in [[0.0, 0.0, 0.0], [1.0, -2.0, 0.5], [3.0, 3.0, 3.0]] {
            assert!(refine(&sys, &start).is_none());
        }
    }

    #[test]
    fn single_edge_at_zero_is_one_point() {
        let cloud = solve_with(
            &HexagonSystem {
                theta: BondAngle::new(0.0).unwrap(),
            },
            OracleOptions::new(24),
        );
        assert_eq!(cloud.len(), 1, "{:?}", cloud.points);
        assert_eq!(cloud.identified.len(), 1);
        let p = TorusPoint::from_slice(&cloud.points[0]);
        assert!((p.phi1().abs() - PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn cloud_is_sound_and_sorted() {
        let sys = HexagonSystem { theta: b(1, 2) };
        let cloud = solve_with(&sys, OracleOptions::new(24));
        assert!(!cloud.is_empty());
        for (p, r) in cloud.points.iter().zip(&cloud.residuals) {
            assert!(*r < TOL_REFINED);
            let (poly, t) = sys.configuration(p);
            assert!(residual(&poly, t).unwrap().max_residual < TOL_REFINED);
        }
        for w in cloud.points.windows(2) {
            assert_eq!(lex_cmp(&w[0], &w[1]), std::cmp::Ordering::Less);
        }
        for i in 0..cloud.len() {
            for j in i + 1..cloud.len() {
                assert!(torus_distance(&cloud.points[i], &cloud.points[j]) > cloud.dedupe_radius);
            }
        }
    }

    #[test]
    fn deterministic() {
        let sys = HexagonSystem { theta: b(1, 4) };
        let a = solve_with(&sys, OracleOptions::new(20));
        let c = solve_with(&sys, OracleOptions::new(20));
        assert_eq!(a, c);
    }

    #[test]
    fn quad_pair_and_square() {
        let cloud = solve_with(&QuadSystem { theta: b(1, 3) }, OracleOptions::new(64));
        assert_eq!(cloud.len(), 2);
        for p in &cloud.points {
            assert!((p[0].cos() - 1.0 / 3.0).abs() < 1e-9);
        }
        let cloud = solve_with(&QuadSystem { theta: b(1, 2) }, OracleOptions::new(64));
        assert_eq!(cloud.len(), 1);
        assert!((cloud.points[0][0].abs() - PI).abs() < 1e-4);
        let cloud = solve_with(&QuadSystem { theta: b(3, 5) }, OracleOptions::new(64));
        assert!(cloud.is_empty());
    }

    #[test]
    fn pentagon_fixed_theta() {
        let cloud = solve_with(&PentagonSystem { theta: b(3, 5) }, OracleOptions::new(32));
        assert_eq!(cloud.len(), 1);
        assert!(
            torus_distance(&cloud.points[0], &[0.0, 0.0]) < 1e-4,
            "{:?}",
            cloud.points
        );
        let cloud = solve_with(&PentagonSystem { theta: b(1, 2) }, OracleOptions::new(32));
        assert!(cloud.is_empty());
    }
}
