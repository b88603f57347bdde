//! Euclidean projections onto norm balls, onto finite intersections of them
//! (Dykstra), and the closest pair between an intersection and one ball.

use crate::feasibility::Ball;
use crate::space::{euclid, sub, NormKind};

const MAX_CYCLES: usize = 10_000;
const STEP_TOL: f64 = 1e-12;

/// Euclidean projection of `x` onto the `kind`-ball around `center`.
pub(crate) fn project_ball(kind: &NormKind, center: &[f64], radius: f64, x: &[f64]) -> Vec<f64> {
    match kind {
        NormKind::L2 => {
            let v = sub(x, center);
            let n = euclid(&v);
            if n <= radius {
                x.to_vec()
            } else {
                let t = radius / n;
                center.iter().zip(&v).map(|(c, d)| c + t * d).collect()
            }
        }
        NormKind::LInf => x
            .iter()
            .zip(center)
            .map(|(v, c)| v.clamp(c - radius, c + radius))
            .collect(),
        NormKind::WeightedSup(s) => x
            .iter()
            .zip(center)
            .zip(s)
            .map(|((v, c), s)| v.clamp(c - radius / s, c + radius / s))
            .collect(),
        NormKind::L1 => {
            let v = sub(x, center);
            let theta = l1_threshold(&v, radius);
            center
                .iter()
                .zip(&v)
                .map(|(c, d)| c + d.signum() * (d.abs() - theta).max(0.0))
                .collect()
        }
    }
}

/// Soft-threshold level for projecting onto the L1 ball of `radius`.
fn l1_threshold(v: &[f64], radius: f64) -> f64 {
    let total: f64 = v.iter().map(|a| a.abs()).sum();
    if total <= radius {
        return 0.0;
    }
    let mut u: Vec<f64> = v.iter().map(|a| a.abs()).collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (j, uj) in u.iter().enumerate() {
        acc += uj;
        let t = (acc - radius) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    theta
}

/// Dykstra's algorithm for the projection onto the intersection of `balls`.
pub(crate) fn project_intersection(kind: &NormKind, balls: &[Ball], x: &[f64]) -> Vec<f64> {
    if balls.len() == 1 {
        return project_ball(kind, balls[0].center(), balls[0].radius(), x);
    }
    let d = x.len();
    let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut y = x.to_vec();
    let mut increments = vec![vec![0.0; d]; balls.len()];
    for _ in 0..MAX_CYCLES {
        let mut moved = 0.0f64;
        for (ball, inc) in balls.iter().zip(increments.iter_mut()) {
            let shifted: Vec<f64> = y.iter().zip(inc.iter()).map(|(a, b)| a + b).collect();
            let p = project_ball(kind, ball.center(), ball.radius(), &shifted);
            for k in 0..d {
                inc[k] = shifted[k] - p[k];
                moved = moved.max((p[k] - y[k]).abs());
            }
            y = p;
        }
        if moved < STEP_TOL * scale {
            break;
        }
    }
    y
}

/// Closest pair `(p, q)` with `p` in the intersection of `k1` and `q` in
/// `target`, by alternating projections started from `start`.
pub(crate) fn closest_pair(
    kind: &NormKind,
    k1: &[Ball],
    target: &Ball,
    start: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let mut p = start.to_vec();
    let mut q = project_ball(kind, target.center(), target.radius(), &p);
    let scale = 1.0 + p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for _ in 0..MAX_CYCLES {
        let p_next = project_intersection(kind, k1, &q);
        let q_next = project_ball(kind, target.center(), target.radius(), &p_next);
        let moved = euclid(&sub(&p_next, &p)).max(euclid(&sub(&q_next, &q)));
        p = p_next;
        q = q_next;
        if moved < STEP_TOL * scale {
            break;
        }
    }
    (p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_projection_lands_on_the_boundary() {
        let p = project_ball(&NormKind::L1, &[0.0, 0.0], 1.0, &[2.0, 0.5]);
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15);
        let p = project_ball(&NormKind::L1, &[0.0, 0.0], 1.0, &[1.0, 1.0]);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dykstra_finds_lens_point() {
        let balls = [
            Ball::new(vec![0.0, 0.0], 1.0).unwrap(),
            Ball::new(vec![1.5, 0.0], 1.0).unwrap(),
        ];
        let p = project_intersection(&NormKind::L2, &balls, &[0.75, 3.0]);
        // top of the lens: x = 0.75, y = sqrt(1 - 0.75^2)
        assert!((p[0] - 0.75).abs() < 1e-9);
        assert!((p[1] - (1.0f64 - 0.5625).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn closest_pair_of_disjoint_disks() {
        let k1 = [Ball::new(vec![3.0, 0.0], 1.0).unwrap()];
        let target = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        let (p, q) = closest_pair(&NormKind::L2, &k1, &target, &[3.0, 0.5]);
        assert!((p[0] - 2.0).abs() < 1e-9 && p[1].abs() < 1e-9);
        assert!((q[0] - 1.0).abs() < 1e-9 && q[1].abs() < 1e-9);
    }
}
