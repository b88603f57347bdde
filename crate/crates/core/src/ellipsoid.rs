//! Central-cut ellipsoid method for small convex problems.
//!
//! The caller supplies an oracle returning either an objective cut (the
//! point is feasible; value and subgradient) or a feasibility cut (the point
//! violates a constraint; subgradient of the violated constraint). Each
//! objective cut also yields the lower bound `f(y) - sqrt(g' P g)`, the
//! minimum of the linear model over the current ellipsoid, which is valid as
//! long as the initial ball contains a minimizer.

use nalgebra::{DMatrix, DVector};

pub(crate) enum Cut {
    Objective { value: f64, subgradient: Vec<f64> },
    Feasibility { subgradient: Vec<f64> },
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub best_point: Option<Vec<f64>>,
    pub best_value: f64,
    pub lower_bound: f64,
    pub iterations: usize,
}

pub(crate) fn minimize<F>(
    center: Vec<f64>,
    radius: f64,
    tol: f64,
    max_iter: usize,
    mut oracle: F,
) -> Outcome
where
    F: FnMut(&[f64]) -> Cut,
{
    let n = center.len();
    let origin = center.clone();
    let mut y = center;
    let mut best_point: Option<Vec<f64>> = None;
    let mut best_value = f64::INFINITY;
    let mut lower_bound = f64::NEG_INFINITY;
    let scale = 1.0 + y.iter().fold(0.0f64, |m, v| m.max(v.abs())) + radius;

    // P = L L^T, L stored column-major as n columns of length n
    let mut l = DMatrix::<f64>::identity(n, n) * radius;
    let nf = n as f64;
    let expand = if n > 1 {
        (nf * nf / (nf * nf - 1.0)).sqrt()
    } else {
        1.0
    };
    let gamma = 1.0 - (1.0 - 2.0 / (nf + 1.0)).sqrt();
    let clamp_factor = (2.0 * nf).sqrt();

    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let (g, value) = match oracle(&y) {
            Cut::Objective { value, subgradient } => {
                if value < best_value {
                    best_value = value;
                    best_point = Some(y.clone());
                }
                (subgradient, Some(value))
            }
            Cut::Feasibility { subgradient } => (subgradient, None),
        };
        let g = DVector::from_vec(g);
        let lt_g = l.tr_mul(&g);
        let width = lt_g.norm();

        if !(width > 0.0 && width.is_finite()) {
            // a zero subgradient at a feasible point certifies optimality;
            // otherwise the ellipsoid has degenerated numerically
            if value.is_some() && g.iter().all(|v| *v == 0.0) {
                lower_bound = lower_bound.max(best_value);
            }
            break;
        }
        if let Some(value) = value {
            lower_bound = lower_bound.max(value - width);
            if best_value - lower_bound <= tol {
                break;
            }
        } else if width < 1e-15 * scale {
            break;
        }

        if n == 1 {
            let h = l[(0, 0)].abs();
            y[0] -= g[0].signum() * h / 2.0;
            l[(0, 0)] = h / 2.0;
            continue;
        }

        let a = lt_g / width;
        let b = &l * &a;
        for (yi, bi) in y.iter_mut().zip(b.iter()) {
            *yi -= bi / (nf + 1.0);
        }
        l = (&l - (&b * a.transpose()) * gamma) * expand;

        // keep the ellipsoid from outgrowing the initial ball, which still
        // contains every point of interest
        let rho = radius
            + y.iter()
                .zip(&origin)
                .map(|(p, q)| (p - q) * (p - q))
                .sum::<f64>()
                .sqrt();
        let cap = rho * clamp_factor;
        let longest = l.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
        if longest > 8.0 * cap {
            let svd = l.clone().svd(true, false);
            let u = svd.u.expect("requested U");
            let clamped = svd.singular_values.map(|s| {
                if s > cap {
                    cap
                } else {
                    s * std::f64::consts::SQRT_2
                }
            });
            l = u * DMatrix::from_diagonal(&clamped);
        }
    }

    Outcome {
        best_point,
        best_value,
        lower_bound,
        iterations,
    }
}
