//! Planar and spatial primitives used by the continuous environments.

use std::f64::consts::TAU;

pub type Vec2 = [f64; 2];
pub type Vec3 = [f64; 3];

pub fn dist2(a: Vec2, b: Vec2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

pub fn norm3(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Distance along the ray from `origin` with heading `angle` to the first
/// point of the disc; `Some(0)` when the origin lies inside it.
pub fn ray_disc(origin: Vec2, angle: f64, center: Vec2, radius: f64) -> Option<f64> {
    let w = [center[0] - origin[0], center[1] - origin[1]];
    let w2 = w[0] * w[0] + w[1] * w[1];
    if w2 <= radius * radius {
        return Some(0.0);
    }
    let t_ca = w[0] * angle.cos() + w[1] * angle.sin();
    if t_ca < 0.0 {
        return None;
    }
    let d2 = w2 - t_ca * t_ca;
    if d2 > radius * radius {
        return None;
    }
    Some(t_ca - (radius * radius - d2).sqrt())
}

/// Egocentric LiDAR over one class of discs. Bin `k` reads along its sector's
/// center ray at heading `2*pi*(k + 0.5)/bins` relative to the agent.
pub fn lidar(origin: Vec2, heading: f64, discs: &[(Vec2, f64)], bins: usize, range: f64) -> Vec<f64> {
    (0..bins)
        .map(|k| {
            let angle = heading + TAU * (k as f64 + 0.5) / bins as f64;
            discs
                .iter()
                .filter_map(|&(c, r)| ray_disc(origin, angle, c, r))
                .filter(|&d| d <= range)
                .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.min(d))))
                .map_or(0.0, |d| 1.0 - d.min(range) / range)
        })
        .collect()
}

/// Index of the sector containing the egocentric bearing `angle`.
pub fn bin_of(angle: f64, bins: usize) -> usize {
    let a = angle.rem_euclid(TAU);
    ((a / TAU * bins as f64) as usize).min(bins - 1)
}

/// Moves `x` by `v * dt` inside `[-bound, bound]`, reflecting off the walls.
/// Returns the new coordinate and velocity.
pub fn reflect(x: f64, v: f64, dt: f64, bound: f64) -> (f64, f64) {
    let mut x = x + v * dt;
    let mut v = v;
    // A single step never crosses the box more than once for sane speeds,
    // but loop anyway so the invariant holds for any input.
    loop {
        if x > bound {
            x = 2.0 * bound - x;
            v = -v;
        } else if x < -bound {
            x = -2.0 * bound - x;
            v = -v;
        } else {
            return (x, v);
        }
    }
}

pub fn point_in_sphere(p: Vec3, center: Vec3, radius: f64) -> bool {
    norm3(sub3(p, center)) <= radius
}

/// Closest point to `c` on the segment `a..b`.
pub fn closest_on_segment(a: Vec3, b: Vec3, c: Vec3) -> Vec3 {
    let ab = sub3(b, a);
    let len2 = dot3(ab, ab);
    let t = if len2 == 0.0 { 0.0 } else { (dot3(sub3(c, a), ab) / len2).clamp(0.0, 1.0) };
    [a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]]
}

pub fn segment_hits_sphere(a: Vec3, b: Vec3, center: Vec3, radius: f64) -> bool {
    point_in_sphere(closest_on_segment(a, b, center), center, radius)
}

/// Distance to `target` and unit direction toward it; the direction is the
/// zero vector when the points coincide.
pub fn range_bearing(from: Vec3, target: Vec3) -> (f64, Vec3) {
    let d = sub3(target, from);
    let n = norm3(d);
    if n < 1e-9 {
        (n, [0.0; 3])
    } else {
        (n, [d[0] / n, d[1] / n, d[2] / n])
    }
}

/// Grid coordinate shifted by `delta` on a torus of side `n`.
pub fn wrap(x: usize, delta: i64, n: usize) -> usize {
    (x as i64 + delta).rem_euclid(n as i64) as usize
}
