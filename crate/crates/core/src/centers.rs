//! Generalized Chebyshev centers of finite point sets.
//!
//! For `F = {a_1, ..., a_n}` and an aggregator `f`, the radius function is
//! `r_f(x, F) = f(||x - a_1||, ..., ||x - a_n||)`; the center problem asks
//! for a minimizer over the (affine) space and its value.
//!
//! - [`Aggregator::MaxWeighted`]: `max_i rho_i t_i`. Solved exactly as a
//!   linear program for polyhedral norms and with the ellipsoid method for
//!   the Euclidean norm.
//! - [`Aggregator::PowerSum`]: `(sum_i rho_i t_i^q)^(1/q)`, solved with the
//!   ellipsoid method. Both routes carry a certified lower bound.
//! - [`Aggregator::Oracle`]: a user callback promised to be continuous,
//!   monotone and coercive. Solved by multistart Nelder-Mead and labeled
//!   heuristic.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::direct_search::nelder_mead;
use crate::ellipsoid::{self, Cut};
use crate::error::{check_dim, Error, Result};
use crate::minimax::{self, Term, DEFAULT_MAX_ITER};
use crate::space::NormSpec;

/// Membership tolerance for points of a constrained space.
pub const SUBSPACE_TOL: f64 = 1e-9;

const MULTISTART_SEED: u64 = 0x5eed_cafe;

/// A finite point set with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    space: NormSpec,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl PointSet {
    pub fn new(space: NormSpec, points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        Self::weighted(space, points, vec![1.0; n])
    }

    pub fn weighted(space: NormSpec, points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("point set is empty".into()));
        }
        if weights.len() != points.len() {
            return Err(Error::InvalidInput(format!(
                "{} weights given for {} points",
                weights.len(),
                points.len()
            )));
        }
        for p in &points {
            check_dim(space.dim(), p.len())?;
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("non-finite coordinate".into()));
            }
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidInput(
                "weights must be finite and positive".into(),
            ));
        }
        if let Some(c) = space.constraints() {
            for (i, p) in points.iter().enumerate() {
                let res = c.residual(p);
                if res > SUBSPACE_TOL {
                    return Err(Error::InvalidInput(format!(
                        "point {i} violates the subspace constraints by {res:e}"
                    )));
                }
            }
        }
        Ok(PointSet {
            space,
            points,
            weights,
        })
    }

    pub fn space(&self) -> &NormSpec {
        &self.space
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn has_unit_weights(&self) -> bool {
        self.weights.iter().all(|w| *w == 1.0)
    }

    /// The same points with unit weights.
    pub fn unweighted(&self) -> PointSet {
        PointSet {
            space: self.space.clone(),
            points: self.points.clone(),
            weights: vec![1.0; self.points.len()],
        }
    }

    /// Sub-collection selected by index, weights carried along.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet {
            space: self.space.clone(),
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            weights: indices.iter().map(|&i| self.weights[i]).collect(),
        }
    }

    fn all_coincide(&self) -> bool {
        self.points.iter().all(|p| p == &self.points[0])
    }

    fn centroid(&self) -> Vec<f64> {
        let n = self.points.len() as f64;
        (0..self.space.dim())
            .map(|k| self.points.iter().map(|p| p[k]).sum::<f64>() / n)
            .collect()
    }
}

/// Black-box aggregator callback.
pub type OracleFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// `f : R^n_{>=0} -> R_{>=0}` applied to the distance vector.
#[derive(Clone)]
pub enum Aggregator {
    /// `max_i rho_i t_i` with the point-set weights.
    MaxWeighted,
    /// `(sum_i rho_i t_i^q)^(1/q)` with `q >= 1`.
    PowerSum(f64),
    /// User callback on the unweighted distances. The caller promises it is
    /// continuous, coordinatewise nondecreasing and coercive; this is not
    /// checked.
    Oracle { name: String, f: OracleFn },
}

impl fmt::Debug for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Aggregator::MaxWeighted => write!(f, "MaxWeighted"),
            Aggregator::PowerSum(q) => write!(f, "PowerSum({q})"),
            Aggregator::Oracle { name, .. } => write!(f, "Oracle({name})"),
        }
    }
}

impl PartialEq for Aggregator {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Aggregator::MaxWeighted, Aggregator::MaxWeighted) => true,
            (Aggregator::PowerSum(a), Aggregator::PowerSum(b)) => a == b,
            (Aggregator::Oracle { name: a, .. }, Aggregator::Oracle { name: b, .. }) => a == b,
            _ => false,
        }
    }
}

impl Aggregator {
    pub fn power_sum(q: f64) -> Result<Self> {
        if !(q.is_finite() && q >= 1.0) {
            return Err(Error::InvalidInput(format!(
                "power-sum exponent {q} must be >= 1"
            )));
        }
        Ok(Aggregator::PowerSum(q))
    }

    pub fn oracle(
        name: impl Into<String>,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Aggregator::Oracle {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// Names accepted by [`Aggregator::named_oracle`].
    pub const ORACLE_NAMES: [&'static str; 2] = ["sum-of-squares", "log-sum-exp"];

    /// Built-in black-box aggregators addressable from instance files.
    pub fn named_oracle(name: &str) -> Option<Self> {
        match name {
            "sum-of-squares" => Some(Self::oracle(name, |t| t.iter().map(|v| v * v).sum())),
            "log-sum-exp" => Some(Self::oracle(name, |t| {
                let m = t.iter().fold(0.0f64, |m, v| m.max(*v));
                m + t.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
            })),
            _ => None,
        }
    }

    fn apply(&self, distances: &[f64], weights: &[f64]) -> Result<f64> {
        match self {
            Aggregator::MaxWeighted => Ok(distances
                .iter()
                .zip(weights)
                .map(|(t, w)| t * w)
                .fold(0.0, f64::max)),
            Aggregator::PowerSum(q) => {
                let q = *q;
                if q == 1.0 {
                    Ok(distances.iter().zip(weights).map(|(t, w)| w * t).sum())
                } else {
                    // factor out the largest term to avoid overflow
                    let m = distances.iter().fold(0.0f64, |m, t| m.max(*t));
                    if m == 0.0 {
                        return Ok(0.0);
                    }
                    let s: f64 = distances
                        .iter()
                        .zip(weights)
                        .map(|(t, w)| w * (t / m).powf(q))
                        .sum();
                    Ok(m * s.powf(1.0 / q))
                }
            }
            Aggregator::Oracle { f, .. } => {
                let v = f(distances);
                if v.is_finite() && v >= 0.0 {
                    Ok(v)
                } else {
                    Err(Error::OracleValue(v))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterMethod {
    LP,
    Subgradient,
    MultiStart,
}

impl CenterMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CenterMethod::LP => "lp",
            CenterMethod::Subgradient => "subgradient",
            CenterMethod::MultiStart => "multistart",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CenterResult {
    pub center: Vec<f64>,
    /// `r_f` at `center`.
    pub radius: f64,
    pub lower_bound: f64,
    pub gap: f64,
    pub iterations: usize,
    pub method: CenterMethod,
    pub certified: bool,
}

/// `r_f(x, F)`. The point `x` need not satisfy the space constraints.
pub fn eval_radius(set: &PointSet, x: &[f64], agg: &Aggregator) -> Result<f64> {
    check_dim(set.space.dim(), x.len())?;
    let distances: Vec<f64> = set
        .points
        .iter()
        .map(|a| set.space.distance(x, a))
        .collect();
    agg.apply(&distances, &set.weights)
}

/// `max_{i<j} ||a_i - a_j|| / (1/rho_i + 1/rho_j)`, a lower bound on the
/// weighted Chebyshev radius; zero for a singleton.
pub fn pairwise_lower_bound(set: &PointSet) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let d = set.space.distance(&set.points[i], &set.points[j]);
            best = best.max(d / (1.0 / set.weights[i] + 1.0 / set.weights[j]));
        }
    }
    best
}

/// Two-point bound for the power-sum aggregator: with `t_i + t_j >= D`,
/// `(rho_i t_i^q + rho_j t_j^q)^(1/q) >= D (u_i + u_j)^((1-q)/q)` where
/// `u = rho^(-1/(q-1))`, and `min(rho_i, rho_j) D` when `q = 1`.
fn power_sum_pair_bound(set: &PointSet, q: f64) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let d = set.space.distance(&set.points[i], &set.points[j]);
            let (wi, wj) = (set.weights[i], set.weights[j]);
            let bound = if q == 1.0 {
                d * wi.min(wj)
            } else {
                let e = -1.0 / (q - 1.0);
                d * (wi.powf(e) + wj.powf(e)).powf((1.0 - q) / q)
            };
            best = best.max(bound);
        }
    }
    best
}

pub fn chebyshev_center(set: &PointSet, agg: &Aggregator, tol: f64) -> Result<CenterResult> {
    chebyshev_center_capped(set, agg, tol, DEFAULT_MAX_ITER)
}

/// [`chebyshev_center`] with an explicit iteration cap for the iterative
/// methods. Hitting the cap yields `certified = false`, not an error.
pub fn chebyshev_center_capped(
    set: &PointSet,
    agg: &Aggregator,
    tol: f64,
    max_iter: usize,
) -> Result<CenterResult> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let method = match agg {
        Aggregator::MaxWeighted if set.space.kind().is_polyhedral() => CenterMethod::LP,
        Aggregator::MaxWeighted | Aggregator::PowerSum(_) => CenterMethod::Subgradient,
        Aggregator::Oracle { .. } => CenterMethod::MultiStart,
    };

    if set.all_coincide() {
        // every distance is zero at the common point; monotonicity makes it optimal
        let center = set.points[0].clone();
        let radius = eval_radius(set, &center, agg)?;
        return Ok(finish(center, radius, radius, 0, method, tol));
    }

    match agg {
        Aggregator::MaxWeighted => {
            let terms: Vec<Term> = set
                .points
                .iter()
                .zip(&set.weights)
                .map(|(a, w)| Term {
                    center: a,
                    scale: *w,
                    offset: 0.0,
                })
                .collect();
            let sol = minimax::solve(&set.space, &terms, max_iter)?;
            let radius = eval_radius(set, &sol.point, agg)?;
            let lower = sol.lower_bound.max(pairwise_lower_bound(set));
            Ok(finish(
                sol.point,
                radius,
                lower,
                sol.iterations,
                method,
                tol,
            ))
        }
        Aggregator::PowerSum(q) => {
            let (center, lower, iterations) = power_sum_center(set, *q, max_iter)?;
            let radius = eval_radius(set, &center, agg)?;
            let lower = lower.max(power_sum_pair_bound(set, *q));
            Ok(finish(center, radius, lower, iterations, method, tol))
        }
        Aggregator::Oracle { .. } => {
            let (center, radius, evals) = multistart(set, agg)?;
            let zeros = vec![0.0; set.len()];
            let lower = agg.apply(&zeros, &set.weights)?;
            Ok(finish(center, radius, lower, evals, method, tol))
        }
    }
}

fn finish(
    center: Vec<f64>,
    radius: f64,
    lower: f64,
    iterations: usize,
    method: CenterMethod,
    tol: f64,
) -> CenterResult {
    let gap = (radius - lower).max(0.0);
    CenterResult {
        center,
        radius,
        lower_bound: lower,
        gap,
        iterations,
        method,
        certified: gap <= tol,
    }
}

fn power_sum_center(set: &PointSet, q: f64, max_iter: usize) -> Result<(Vec<f64>, f64, usize)> {
    let space = &set.space;
    let agg = Aggregator::PowerSum(q);
    let kappa = space.euclidean_factor();
    // rho_i^(1/q) ||x* - a_i|| <= f(x*) <= f(a_i)
    let mut start: Option<(usize, f64)> = None;
    for (i, a) in set.points.iter().enumerate() {
        let bound = kappa * eval_radius(set, a, &agg)? / set.weights[i].powf(1.0 / q);
        if start.is_none_or(|(_, r)| bound < r) {
            start = Some((i, bound));
        }
    }
    let (i0, radius) = start.expect("nonempty set");
    let center = space.chart_coords(&set.points[i0]);
    let radius = radius * (1.0 + 1e-9) + 1e-300;
    let scale = set
        .points
        .iter()
        .flatten()
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let wsum: f64 = set.weights.iter().sum();
    let tol = 1e-13 * scale * wsum;

    let out = ellipsoid::minimize(center, radius, tol, max_iter, |y| {
        let x = space.lift(y);
        let dist: Vec<f64> = set.points.iter().map(|a| space.distance(&x, a)).collect();
        let value = agg.apply(&dist, &set.weights).unwrap_or(f64::INFINITY);
        let mut grad = vec![0.0; x.len()];
        if value > 0.0 {
            for ((a, t), w) in set.points.iter().zip(&dist).zip(&set.weights) {
                if *t == 0.0 {
                    continue;
                }
                let coef = if q == 1.0 {
                    *w
                } else {
                    w * (t / value).powf(q - 1.0)
                };
                let diff: Vec<f64> = x.iter().zip(a).map(|(p, c)| p - c).collect();
                for (g, s) in grad.iter_mut().zip(space.norm_subgradient(&diff)) {
                    *g += coef * s;
                }
            }
        }
        Cut::Objective {
            value,
            subgradient: space.chart_gradient(&grad),
        }
    });
    let y = out.best_point.expect("objective cuts only");
    Ok((space.lift(&y), out.lower_bound, out.iterations))
}

/// Nelder-Mead from the centroid, every point of the set, and seeded random
/// points until at least `2 * free_dim + 1` starts are used.
fn multistart(set: &PointSet, agg: &Aggregator) -> Result<(Vec<f64>, f64, usize)> {
    let space = &set.space;
    let d = space.dim();
    let mut starts = vec![space.project_to_subspace(&set.centroid())];
    starts.extend(set.points.iter().cloned());

    let lo: Vec<f64> = (0..d)
        .map(|k| {
            set.points
                .iter()
                .map(|p| p[k])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let hi: Vec<f64> = (0..d)
        .map(|k| {
            set.points
                .iter()
                .map(|p| p[k])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let spread = lo
        .iter()
        .zip(&hi)
        .fold(0.0f64, |m, (a, b)| m.max(b - a))
        .max(1e-6);
    let mut rng = ChaCha8Rng::seed_from_u64(MULTISTART_SEED);
    while starts.len() < 2 * space.free_dim() + 1 {
        let x: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| if b > a { rng.gen_range(*a..=*b) } else { *a })
            .collect();
        starts.push(space.project_to_subspace(&x));
    }

    // an invalid oracle value surfaces as an error before searching
    eval_radius(set, &starts[0], agg)?;
    let objective = |y: &[f64]| {
        let x = space.lift(y);
        eval_radius(set, &x, agg).unwrap_or(f64::INFINITY)
    };

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut evaluations = 0;
    let budget = 4000 * (space.free_dim() + 1);
    for s in &starts {
        let y0 = space.chart_coords(s);
        let mut r = nelder_mead(&y0, 0.1 * spread, budget, objective);
        // one restart from the result to escape premature collapse
        let again = nelder_mead(&r.point, 0.01 * spread, budget, objective);
        evaluations += r.evaluations + again.evaluations;
        if again.value < r.value {
            r = again;
        }
        if best.as_ref().is_none_or(|(_, v)| r.value < *v) {
            best = Some((r.point, r.value));
        }
    }
    let (y, _) = best.expect("at least one start");
    let center = space.lift(&y);
    let radius = eval_radius(set, &center, agg)?;
    Ok((center, radius, evaluations))
}
