//! Connected components of a sampled solution set and a coarse
//! classification of each one as an isolated point, a closed curve, or a
//! graph with junctions.
//!
//! Curves are told apart from junctions by counting branches: the points of
//! the component in the annulus `(eps, 2.5 eps]` around a member, grouped by
//! `eps`-adjacency. A member in the middle of a curve sees two branches, a
//! member next to a crossing sees three or more.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::SolutionCloud;
use crate::torus::{torus_distance, TorusIndex};

/// Outer radius of the branch-counting annulus, in units of `eps`.
pub const ANNULUS_OUTER: f64 = 2.5;
/// Minimum diameter of a loop, in units of `eps`.
pub const LOOP_DIAMETER: f64 = 10.0;

#[derive(Clone, Debug)]
pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ComponentKind {
    Loop,
    IsolatedPoint,
    GraphLike,
}

impl std::fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Component {
    pub size: usize,
    pub diameter: f64,
    pub kind: ComponentKind,
    /// Lexicographically smallest member.
    pub sample: Vec<f64>,
    /// Fewest and most branches seen at any member.
    pub branches: (usize, usize),
    /// Indices into the cloud, ascending.
    #[serde(skip)]
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentReport {
    pub eps: f64,
    pub component_count: usize,
    pub components: Vec<Component>,
}

impl ComponentReport {
    pub fn count(&self, kind: ComponentKind) -> usize {
        self.components.iter().filter(|c| c.kind == kind).count()
    }

    /// E.g. `1 Loop + 2 IsolatedPoint`, kinds in a fixed order.
    pub fn summary(&self) -> String {
        summarize(
            self.count(ComponentKind::Loop),
            self.count(ComponentKind::GraphLike),
            self.count(ComponentKind::IsolatedPoint),
        )
    }

    /// Index of the component containing cloud point `i`.
    pub fn component_of(&self, i: usize) -> Option<usize> {
        self.components
            .iter()
            .position(|c| c.members.binary_search(&i).is_ok())
    }
}

/// Formats component counts the way [`ComponentReport::summary`] does.
pub fn summarize(loops: usize, graphs: usize, points: usize) -> String {
    let parts: Vec<String> = [
        (loops, ComponentKind::Loop),
        (graphs, ComponentKind::GraphLike),
        (points, ComponentKind::IsolatedPoint),
    ]
    .iter()
    .filter(|(c, _)| *c > 0)
    .map(|(c, k)| format!("{c} {k}"))
    .collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(" + ")
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn diameter(points: &[Vec<f64>], members: &[usize]) -> f64 {
    members
        .par_iter()
        .enumerate()
        .map(|(k, &i)| {
            members[k + 1..]
                .iter()
                .map(|&j| torus_distance(&points[i], &points[j]))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Number of branches leaving the `eps`-ball around `points[i]`.
fn branch_count(
    points: &[Vec<f64>],
    index: &TorusIndex,
    label: &[usize],
    i: usize,
    eps: f64,
) -> usize {
    let ring: Vec<usize> = index
        .within(&points[i], ANNULUS_OUTER * eps)
        .into_iter()
        .filter(|&j| label[j] == label[i] && torus_distance(&points[i], &points[j]) > eps)
        .collect();
    let mut ds = DisjointSet::new(ring.len());
    for a in 0..ring.len() {
        for b in a + 1..ring.len() {
            if torus_distance(&points[ring[a]], &points[ring[b]]) <= eps {
                ds.union(a, b);
            }
        }
    }
    (0..ring.len()).filter(|&a| ds.find(a) == a).count()
}

/// Components of the `eps`-neighbourhood graph of `points` under the torus
/// metric.
pub fn components_of(points: &[Vec<f64>], dim: usize, eps: f64) -> ComponentReport {
    let index = TorusIndex::new(points, dim, ANNULUS_OUTER * eps);
    let neighbours: Vec<Vec<usize>> = points.par_iter().map(|p| index.within(p, eps)).collect();
    let mut ds = DisjointSet::new(points.len());
    for (i, nb) in neighbours.iter().enumerate() {
        for &j in nb {
            ds.union(i, j);
        }
    }
    let roots: Vec<usize> = (0..points.len()).map(|i| ds.find(i)).collect();
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, &r) in roots.iter().enumerate() {
        groups.entry(r).or_default().push(i);
    }
    let branches: Vec<usize> = (0..points.len())
        .into_par_iter()
        .map(|i| branch_count(points, &index, &roots, i, eps))
        .collect();

    let mut components: Vec<Component> = groups
        .into_values()
        .map(|members| {
            let d = diameter(points, &members);
            let lo = members.iter().map(|&i| branches[i]).min().unwrap_or(0);
            let hi = members.iter().map(|&i| branches[i]).max().unwrap_or(0);
            let kind = if d < eps {
                ComponentKind::IsolatedPoint
            } else if lo >= 2 && hi <= 2 && d >= LOOP_DIAMETER * eps {
                ComponentKind::Loop
            } else {
                ComponentKind::GraphLike
            };
            let sample = members
                .iter()
                .map(|&i| &points[i])
                .min_by(|a, b| lex_cmp(a, b))
                .cloned()
                .unwrap_or_default();
            Component {
                size: members.len(),
                diameter: d,
                kind,
                sample,
                branches: (lo, hi),
                members,
            }
        })
        .collect();
    components.sort_by(|a, b| lex_cmp(&a.sample, &b.sample));
    ComponentReport {
        eps,
        component_count: components.len(),
        components,
    }
}

pub fn components(cloud: &SolutionCloud, eps: f64) -> ComponentReport {
    components_of(&cloud.points, cloud.dim, eps)
}

/// Cloud point nearest to `q`, which must lie within `radius`.
fn locate(cloud: &SolutionCloud, q: &[f64], radius: f64) -> Result<usize> {
    match cloud.nearest(q) {
        Some((i, d)) if d <= radius => Ok(i),
        Some((_, d)) => Err(Error::NotAConfiguration {
            distance: d,
            radius,
        }),
        None => Err(Error::NotAConfiguration {
            distance: f64::INFINITY,
            radius,
        }),
    }
}

/// Whether `a` and `b` fall into the same `eps`-component of the cloud.
pub fn path_connected(cloud: &SolutionCloud, a: &[f64], b: &[f64], eps: f64) -> Result<bool> {
    let ia = locate(cloud, a, eps)?;
    let ib = locate(cloud, b, eps)?;
    let report = components(cloud, eps);
    Ok(report.component_of(ia) == report.component_of(ib))
}

/// Distance from `p` to the nearest cloud point other than the one `p` is
/// identified with (its nearest, which must lie within the dedupe radius).
pub fn isolation_radius(cloud: &SolutionCloud, p: &[f64]) -> Result<f64> {
    let own = locate(cloud, p, cloud.dedupe_radius)?;
    Ok(cloud
        .points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != own)
        .map(|(_, q)| torus_distance(p, q))
        .fold(f64::INFINITY, f64::min))
}

/// Largest distance from a point of `from` to the set `to`.
pub fn directed_hausdorff(from: &[Vec<f64>], to: &[Vec<f64>]) -> f64 {
    from.par_iter()
        .map(|p| {
            to.iter()
                .map(|q| torus_distance(p, q))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max)
}

/// Two-sided Hausdorff distance under the torus metric. Zero for two empty
/// sets, infinite if exactly one is empty.
pub fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => directed_hausdorff(a, b).max(directed_hausdorff(b, a)),
    }
}

/// Greedy nearest-neighbour walk through a component.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoopTrace {
    pub order: Vec<usize>,
    pub max_step: f64,
    /// Distance from the last visited member back to the first.
    pub closing_gap: f64,
}

impl LoopTrace {
    pub fn is_closed(&self, eps: f64) -> bool {
        self.closing_gap <= eps
    }
}

pub fn trace_loop(points: &[Vec<f64>], members: &[usize]) -> LoopTrace {
    let mut order = Vec::with_capacity(members.len());
    let mut left: Vec<usize> = members.to_vec();
    let mut max_step: f64 = 0.0;
    if left.is_empty() {
        return LoopTrace {
            order,
            max_step,
            closing_gap: 0.0,
        };
    }
    let mut here = left.remove(0);
    order.push(here);
    while !left.is_empty() {
        let (k, d) = left
            .iter()
            .enumerate()
            .map(|(k, &j)| (k, torus_distance(&points[here], &points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        max_step = max_step.max(d);
        here = left.remove(k);
        order.push(here);
    }
    let closing_gap = torus_distance(&points[here], &points[order[0]]);
    LoopTrace {
        order,
        max_step,
        closing_gap,
    }
}
