//! Relocation of balls with empty intersection to a common radius while
//! keeping the intersection empty.
//!
//! Balls are processed in input order. For ball `j`, let `K1` be the
//! intersection of the already relocated balls (radius `r`) with the balls
//! still to be processed. If `K1` is empty the ball stays put; otherwise a
//! functional `f` separating `K1` from `B[x_j, r_j]` is normalized so that
//! `f(y - x_j) >= 1` on `K1`, and the new center is `x_j + (r - r_j) z` for a
//! unit vector `z` with `f(z) = -||f||`. Every point `x` of the new ball then
//! has `f(x - x_j) <= ||f|| r_j = 1 - eps < 1`.

use crate::error::{check_dim, Error, Result};
use crate::feasibility::{
    intersect, linear_extent_bounds, Ball, Direction, FeasibilityCertificate, FeasibilityStatus,
};
use crate::projection::closest_pair;
use crate::space::{dot, Functional, NormSpec};

pub const DEFAULT_MARGIN_TOL: f64 = 1e-6;
const FEAS_TOL: f64 = 1e-9;

/// Normalized separator of `K1` from a target ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    /// Satisfies `f(y - target.center) >= alpha1 = 1` on `K1`.
    pub functional: Functional,
    pub alpha1: f64,
    /// `||f|| target.radius`, the supremum of `f(x - target.center)` on the target.
    pub alpha2: f64,
    pub epsilon: f64,
}

/// Separates the (nonempty) intersection of `k1` from `target`.
pub fn separate(
    space: &NormSpec,
    k1: &[Ball],
    target: &Ball,
    margin_tol: f64,
) -> Result<Separation> {
    require_unconstrained(space)?;
    check_dim(space.dim(), target.center().len())?;
    let inner = intersect(space, k1, FEAS_TOL)?;
    let start = match (inner.status, inner.witness) {
        (FeasibilityStatus::Witness, Some(w)) => w,
        _ => {
            return Err(Error::NotDisjoint(
                "the separated intersection is empty".into(),
            ))
        }
    };
    let mut all = k1.to_vec();
    all.push(target.clone());
    if intersect(space, &all, FEAS_TOL)?.status == FeasibilityStatus::Witness {
        return Err(Error::NotDisjoint(
            "the target meets the intersection".into(),
        ));
    }

    let (p, q) = closest_pair(space.kind(), k1, target, &start);
    let raw: Vec<f64> = p.iter().zip(&q).map(|(a, b)| a - b).collect();
    if raw.iter().all(|v| *v == 0.0) {
        return Err(Error::NotDisjoint("closest pair coincides".into()));
    }
    let raw = Functional::new(space, raw)?;
    // certified lower end of f over K1
    let low = linear_extent_bounds(space, k1, &raw, Direction::Min)?.bound;
    let alpha1_raw = low - raw.apply(target.center());
    let alpha2_raw = raw.dual_norm() * target.radius();
    let margin = (alpha1_raw - alpha2_raw) / alpha1_raw;
    if !(alpha1_raw > 0.0 && margin >= margin_tol) {
        return Err(Error::SeparationTooThin {
            margin,
            required: margin_tol,
        });
    }
    let functional = raw.scaled(1.0 / alpha1_raw);
    let alpha2 = functional.dual_norm() * target.radius();
    Ok(Separation {
        functional,
        alpha1: 1.0,
        alpha2,
        epsilon: 1.0 - alpha2,
    })
}

fn require_unconstrained(space: &NormSpec) -> Result<()> {
    if space.is_constrained() {
        return Err(Error::InvalidSpace(
            "ball relocation is only supported without affine constraints".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepCase {
    AlreadyEmpty,
    Separated,
}

impl StepCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepCase::AlreadyEmpty => "already-empty",
            StepCase::Separated => "separated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EqualizeStep {
    pub index: usize,
    pub case: StepCase,
    pub separator: Option<Functional>,
    pub epsilon: Option<f64>,
    pub direction: Option<Vec<f64>>,
    pub new_center: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EqualizeResult {
    pub steps: Vec<EqualizeStep>,
    pub new_balls: Vec<Ball>,
    pub verification: FeasibilityCertificate,
}

pub fn equalize(
    space: &NormSpec,
    balls: &[Ball],
    r: f64,
    margin_tol: f64,
) -> Result<EqualizeResult> {
    require_unconstrained(space)?;
    if balls.is_empty() {
        return Err(Error::InvalidInput("at least one ball is required".into()));
    }
    let max_radius = balls.iter().map(Ball::radius).fold(0.0, f64::max);
    if !(r.is_finite() && r > max_radius) {
        return Err(Error::PreconditionRadius { r, max_radius });
    }
    let initial = intersect(space, balls, FEAS_TOL)?;
    match initial.status {
        FeasibilityStatus::Witness => return Err(Error::NotEmpty),
        FeasibilityStatus::Undetermined => {
            return Err(Error::Unverified {
                depth: initial.depth,
            })
        }
        FeasibilityStatus::Empty => {}
    }

    let n = balls.len();
    let mut current: Vec<Ball> = balls.to_vec();
    let mut steps = Vec::with_capacity(n);
    let mut verification = initial;
    for j in 0..n {
        let k1: Vec<Ball> = current
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, b)| b.clone())
            .collect();
        let target = &balls[j];
        let rest = intersect(space, &k1, FEAS_TOL)?;
        let step = match rest.status {
            FeasibilityStatus::Empty => EqualizeStep {
                index: j,
                case: StepCase::AlreadyEmpty,
                separator: None,
                epsilon: None,
                direction: None,
                new_center: target.center().to_vec(),
            },
            FeasibilityStatus::Witness => {
                let sep = separate(space, &k1, target, margin_tol)?;
                let z = space.norming_direction(&sep.functional)?;
                let reach = r - target.radius();
                let new_center: Vec<f64> = target
                    .center()
                    .iter()
                    .zip(&z)
                    .map(|(x, d)| x + reach * d)
                    .collect();
                EqualizeStep {
                    index: j,
                    case: StepCase::Separated,
                    separator: Some(sep.functional),
                    epsilon: Some(sep.epsilon),
                    direction: Some(z),
                    new_center,
                }
            }
            FeasibilityStatus::Undetermined => return Err(Error::Unverified { depth: rest.depth }),
        };
        current[j] = Ball::new(step.new_center.clone(), r)?;
        steps.push(step);

        verification = intersect(space, &current, FEAS_TOL)?;
        match verification.status {
            FeasibilityStatus::Empty => {}
            FeasibilityStatus::Witness => return Err(Error::LoopInvariantViolated { step: j }),
            FeasibilityStatus::Undetermined => {
                return Err(Error::Unverified {
                    depth: verification.depth,
                })
            }
        }
    }

    Ok(EqualizeResult {
        steps,
        new_balls: current,
        verification,
    })
}

/// Upper end of `f(x - x_j)` over the relocated ball of a separated step,
/// `f(w_j - x_j) + ||f|| r`. The construction makes it equal `||f|| r_j`.
pub fn step_upper_value(step: &EqualizeStep, original: &Ball, r: f64) -> Option<f64> {
    let f = step.separator.as_ref()?;
    let shift: Vec<f64> = step
        .new_center
        .iter()
        .zip(original.center())
        .map(|(w, x)| w - x)
        .collect();
    Some(dot(f.coefficients(), &shift) + f.dual_norm() * r)
}
