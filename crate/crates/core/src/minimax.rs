//! Shared engine for `min_x max_i (scale_i ||x - c_i|| - offset_i)` over the
//! affine set of a space, and for linear functionals over ball intersections.
//!
//! Polyhedral norms are linearized into a linear program; the Euclidean norm
//! goes through the ellipsoid method in chart coordinates.

use crate::ellipsoid::{self, Cut};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::space::{dot, NormKind, NormSpec};

pub(crate) const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Term<'a> {
    pub center: &'a [f64],
    pub scale: f64,
    pub offset: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub point: Vec<f64>,
    /// Objective evaluated at `point`.
    pub value: f64,
    pub lower_bound: f64,
    pub iterations: usize,
}

pub(crate) fn objective(space: &NormSpec, terms: &[Term], x: &[f64]) -> f64 {
    terms
        .iter()
        .map(|t| t.scale * space.distance(x, t.center) - t.offset)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn data_scale(terms: &[Term]) -> f64 {
    terms.iter().fold(1.0f64, |m, t| {
        t.center
            .iter()
            .fold(m.max(t.offset.abs()), |m, v| m.max(v.abs()))
    })
}

pub(crate) fn solve(space: &NormSpec, terms: &[Term], max_iter: usize) -> Result<Solution> {
    debug_assert!(!terms.is_empty());
    if space.kind().is_polyhedral() {
        solve_lp(space, terms)
    } else {
        solve_ellipsoid(space, terms, max_iter)
    }
}

/// Column layout: x (dim, free), t (free), then one nonnegative aux block per
/// term for the L1 norm.
fn solve_lp(space: &NormSpec, terms: &[Term]) -> Result<Solution> {
    let d = space.dim();
    let n = terms.len();
    let aux = matches!(space.kind(), NormKind::L1);
    let nvars = d + 1 + if aux { n * d } else { 0 };
    let t = d;
    let mut obj = vec![0.0; nvars];
    obj[t] = 1.0;
    let mut free = vec![false; nvars];
    free[..=d].iter_mut().for_each(|f| *f = true);
    let mut lp = LinearProgram::minimize(obj, free);

    for (i, term) in terms.iter().enumerate() {
        match space.kind() {
            NormKind::L1 => {
                let base = d + 1 + i * d;
                for k in 0..d {
                    lp.add_sparse(&[(k, 1.0), (base + k, -1.0)], Relation::Le, term.center[k]);
                    lp.add_sparse(
                        &[(k, -1.0), (base + k, -1.0)],
                        Relation::Le,
                        -term.center[k],
                    );
                }
                let mut row: Vec<(usize, f64)> = (0..d).map(|k| (base + k, term.scale)).collect();
                row.push((t, -1.0));
                lp.add_sparse(&row, Relation::Le, term.offset);
            }
            kind => {
                for k in 0..d {
                    let a = term.scale * sup_scale(kind, k);
                    lp.add_sparse(
                        &[(k, a), (t, -1.0)],
                        Relation::Le,
                        term.offset + a * term.center[k],
                    );
                    lp.add_sparse(
                        &[(k, -a), (t, -1.0)],
                        Relation::Le,
                        term.offset - a * term.center[k],
                    );
                }
            }
        }
    }
    add_affine_rows(space, &mut lp);

    match lp.solve() {
        LpOutcome::Optimal {
            x,
            objective: lp_value,
        } => {
            let point = space.project_to_subspace(&x[..d]);
            let value = objective(space, terms, &point);
            Ok(Solution {
                point,
                value,
                lower_bound: lp_value.min(value),
                iterations: 1,
            })
        }
        LpOutcome::Infeasible => Err(Error::InfeasibleConstraints),
        other => Err(Error::LinearProgram(format!("{other:?}"))),
    }
}

fn sup_scale(kind: &NormKind, k: usize) -> f64 {
    match kind {
        NormKind::WeightedSup(s) => s[k],
        _ => 1.0,
    }
}

fn add_affine_rows(space: &NormSpec, lp: &mut LinearProgram) {
    if let Some(c) = space.constraints() {
        let nvars = lp.num_vars();
        for (row, b) in c.matrix().iter().zip(c.rhs()) {
            let mut coeffs = vec![0.0; nvars];
            coeffs[..row.len()].copy_from_slice(row);
            lp.add(coeffs, Relation::Eq, *b);
        }
    }
}

fn solve_ellipsoid(space: &NormSpec, terms: &[Term], max_iter: usize) -> Result<Solution> {
    let kappa = space.euclidean_factor();
    // any minimizer x* has scale_i ||x* - c_i|| - offset_i <= f(p_i)
    let mut start: Option<(Vec<f64>, f64)> = None;
    for term in terms {
        let p = space.project_to_subspace(term.center);
        let bound = kappa * (objective(space, terms, &p) + term.offset) / term.scale;
        if start.as_ref().is_none_or(|(_, r)| bound < *r) {
            start = Some((space.chart_coords(term.center), bound.max(0.0)));
        }
    }
    let (center, radius) = start.expect("at least one term");
    if radius == 0.0 {
        let point = space.lift(&center);
        let value = objective(space, terms, &point);
        return Ok(Solution {
            point,
            value,
            lower_bound: value,
            iterations: 0,
        });
    }
    let radius = radius * (1.0 + 1e-9) + 1e-300;
    let tol = 1e-13 * data_scale(terms).max(radius);

    let out = ellipsoid::minimize(center, radius, tol, max_iter, |y| {
        let x = space.lift(y);
        let mut best = 0;
        let mut value = f64::NEG_INFINITY;
        for (i, term) in terms.iter().enumerate() {
            let v = term.scale * space.distance(&x, term.center) - term.offset;
            if v > value {
                value = v;
                best = i;
            }
        }
        let diff: Vec<f64> = x
            .iter()
            .zip(terms[best].center)
            .map(|(a, b)| a - b)
            .collect();
        let s = space.norm_subgradient(&diff);
        let g = space.chart_gradient(&s);
        Cut::Objective {
            value,
            subgradient: g.iter().map(|v| v * terms[best].scale).collect(),
        }
    });
    let y = out.best_point.expect("unconstrained objective cuts");
    let point = space.lift(&y);
    let value = objective(space, terms, &point);
    Ok(Solution {
        point,
        value,
        lower_bound: out.lower_bound.min(value),
        iterations: out.iterations,
    })
}

#[derive(Debug, Clone)]
pub(crate) struct Extent {
    pub point: Vec<f64>,
    /// Value of the functional at `point` (an upper bound on the minimum).
    pub value: f64,
    pub lower_bound: f64,
}

/// Minimizes `<g, x>` over the affine set intersected with the balls
/// `||x - c_i|| <= r_i`. `witness` must be a feasible point.
pub(crate) fn min_linear(
    space: &NormSpec,
    balls: &[(&[f64], f64)],
    g: &[f64],
    witness: &[f64],
    max_iter: usize,
) -> Result<Extent> {
    // support-function bound: <g, x> >= <g, c_i> - ||g||_* r_i on each ball
    let dual = space.dual_norm_unchecked(g);
    let support = balls
        .iter()
        .map(|(c, r)| dot(g, c) - dual * r)
        .fold(f64::NEG_INFINITY, f64::max);

    if space.kind().is_polyhedral() {
        return min_linear_lp(space, balls, g, support);
    }

    let kappa = space.euclidean_factor();
    let (ci, ri) = balls
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .copied()
        .expect("at least one ball");
    let center = space.chart_coords(ci);
    let radius = kappa * ri * (1.0 + 1e-9) + 1e-12;
    let scale = balls.iter().fold(1.0f64, |m, (c, r)| {
        c.iter().fold(m.max(*r), |m, v| m.max(v.abs()))
    });
    let tol = 1e-13 * scale * (1.0 + dual);
    let gy = space.chart_gradient(g);

    let out = ellipsoid::minimize(center, radius, tol, max_iter, |y| {
        let x = space.lift(y);
        let mut worst = None;
        let mut violation = 0.0;
        for (c, r) in balls {
            let v = space.distance(&x, c) - r;
            if v > violation {
                violation = v;
                worst = Some(*c);
            }
        }
        match worst {
            Some(c) => {
                let diff: Vec<f64> = x.iter().zip(c).map(|(a, b)| a - b).collect();
                Cut::Feasibility {
                    subgradient: space.chart_gradient(&space.norm_subgradient(&diff)),
                }
            }
            None => Cut::Objective {
                value: dot(g, &x),
                subgradient: gy.clone(),
            },
        }
    });

    let witness_value = dot(g, witness);
    let (point, value) = match out.best_point {
        Some(y) if out.best_value <= witness_value => (space.lift(&y), out.best_value),
        _ => (witness.to_vec(), witness_value),
    };
    let lower_bound = out.lower_bound.max(support).min(value);
    Ok(Extent {
        point,
        value,
        lower_bound,
    })
}

fn min_linear_lp(
    space: &NormSpec,
    balls: &[(&[f64], f64)],
    g: &[f64],
    support: f64,
) -> Result<Extent> {
    let d = space.dim();
    let n = balls.len();
    let aux = matches!(space.kind(), NormKind::L1);
    let nvars = d + if aux { n * d } else { 0 };
    let mut obj = vec![0.0; nvars];
    obj[..d].copy_from_slice(g);
    let mut free = vec![false; nvars];
    free[..d].iter_mut().for_each(|f| *f = true);
    let mut lp = LinearProgram::minimize(obj, free);
    for (i, (c, r)) in balls.iter().enumerate() {
        match space.kind() {
            NormKind::L1 => {
                let base = d + i * d;
                for k in 0..d {
                    lp.add_sparse(&[(k, 1.0), (base + k, -1.0)], Relation::Le, c[k]);
                    lp.add_sparse(&[(k, -1.0), (base + k, -1.0)], Relation::Le, -c[k]);
                }
                let row: Vec<(usize, f64)> = (0..d).map(|k| (base + k, 1.0)).collect();
                lp.add_sparse(&row, Relation::Le, *r);
            }
            kind => {
                for k in 0..d {
                    let half = r / sup_scale(kind, k);
                    lp.add_sparse(&[(k, 1.0)], Relation::Le, c[k] + half);
                    lp.add_sparse(&[(k, -1.0)], Relation::Le, half - c[k]);
                }
            }
        }
    }
    add_affine_rows(space, &mut lp);
    match lp.solve() {
        LpOutcome::Optimal { x, objective } => {
            let point = x[..d].to_vec();
            let value = dot(g, &point);
            Ok(Extent {
                point,
                value,
                lower_bound: objective.min(value).max(support.min(value)),
            })
        }
        LpOutcome::Infeasible => Err(Error::EmptyDomain),
        other => Err(Error::LinearProgram(format!("{other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l2_minimax_matches_midpoint() {
        let space = NormSpec::l2(2);
        let a = [0.0, 0.0];
        let b = [3.0, 4.0];
        let terms = [
            Term {
                center: &a,
                scale: 1.0,
                offset: 0.0,
            },
            Term {
                center: &b,
                scale: 1.0,
                offset: 0.0,
            },
        ];
        let sol = solve(&space, &terms, DEFAULT_MAX_ITER).unwrap();
        assert!((sol.value - 2.5).abs() < 1e-11);
        assert!(sol.value - sol.lower_bound < 1e-11);
    }

    #[test]
    fn polyhedral_minimax_is_exact() {
        for space in [NormSpec::l1(2), NormSpec::linf(2)] {
            let a = [0.0, 0.0];
            let b = [2.0, 1.0];
            let terms = [
                Term {
                    center: &a,
                    scale: 1.0,
                    offset: 0.0,
                },
                Term {
                    center: &b,
                    scale: 1.0,
                    offset: 0.0,
                },
            ];
            let sol = solve(&space, &terms, DEFAULT_MAX_ITER).unwrap();
            let half = space.distance(&a, &b) / 2.0;
            assert!((sol.value - half).abs() < 1e-12, "{:?}", space.kind());
        }
    }

    #[test]
    fn linear_extent_on_disk() {
        let space = NormSpec::l2(2);
        let c = [1.0, 0.0];
        let ext = min_linear(&space, &[(&c, 2.0)], &[0.0, 1.0], &c, DEFAULT_MAX_ITER).unwrap();
        assert!((ext.value + 2.0).abs() < 1e-10);
        assert!(ext.lower_bound <= ext.value && ext.value - ext.lower_bound < 1e-10);
    }
}
