//! Angle wrapping, the flat torus metric and a bucket index for radius
//! queries on `(-pi, pi]^d`.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Shortest signed difference `a - b` on the circle.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    wrap_angle(a - b)
}

/// Per-axis wrapped differences combined by the Euclidean norm.
pub fn torus_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| angle_diff(*x, *y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Uniform bucket grid over the torus. Radius queries are exact as long as
/// `radius <= cell width`.
pub struct TorusIndex<'a> {
    points: &'a [Vec<f64>],
    cells_per_axis: i64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
    dim: usize,
}

impl<'a> TorusIndex<'a> {
    pub fn new(points: &'a [Vec<f64>], dim: usize, radius: f64) -> Self {
        let cells_per_axis = ((TAU / radius.max(1e-12)).floor() as i64).max(1);
        let mut index = Self {
            points,
            cells_per_axis,
            buckets: HashMap::new(),
            dim,
        };
        for (i, p) in points.iter().enumerate() {
            let key = index.cell_of(p);
            index.buckets.entry(key).or_default().push(i);
        }
        index
    }

    fn cell_of(&self, p: &[f64]) -> Vec<i64> {
        p.iter()
            .map(|&x| {
                let t = (wrap_angle(x) + PI) / TAU;
                ((t * self.cells_per_axis as f64).floor() as i64).clamp(0, self.cells_per_axis - 1)
            })
            .collect()
    }

    /// Indices of points within `radius` of `q`, in ascending order.
    pub fn within(&self, q: &[f64], radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if self.cells_per_axis < 3 {
            out.extend(
                (0..self.points.len()).filter(|&i| torus_distance(&self.points[i], q) <= radius),
            );
            return out;
        }
        let centre = self.cell_of(q);
        let mut offset = vec![-1i64; self.dim];
        loop {
            let key: Vec<i64> = centre
                .iter()
                .zip(&offset)
                .map(|(c, o)| (c + o).rem_euclid(self.cells_per_axis))
                .collect();
            if let Some(bucket) = self.buckets.get(&key) {
                out.extend(
                    bucket
                        .iter()
                        .copied()
                        .filter(|&i| torus_distance(&self.points[i], q) <= radius),
                );
            }
            // odometer over {-1, 0, 1}^dim
            let mut axis = 0;
            while axis < self.dim {
                offset[axis] += 1;
                if offset[axis] <= 1 {
                    break;
                }
                offset[axis] = -1;
                axis += 1;
            }
            if axis == self.dim {
                break;
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}
