//! Nonemptiness of finite ball intersections, linear extents over them, and
//! the radius/intersection duality check.

use crate::centers::{chebyshev_center, Aggregator, PointSet};
use crate::error::{check_dim, Error, Result};
use crate::minimax::{self, Extent, Term, DEFAULT_MAX_ITER};
use crate::space::{Functional, NormSpec};

pub const DEFAULT_FEAS_TOL: f64 = 1e-9;

/// Closed ball `B[center, radius]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Vec<f64>,
    radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "ball radius {radius} must be finite and >= 0"
            )));
        }
        if center.is_empty() || center.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "ball center must be finite and nonempty".into(),
            ));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, space: &NormSpec, x: &[f64], tol: f64) -> bool {
        space.distance(x, &self.center) <= self.radius + tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityStatus {
    Witness,
    Empty,
    Undetermined,
}

impl FeasibilityStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeasibilityStatus::Witness => "witness",
            FeasibilityStatus::Empty => "empty",
            FeasibilityStatus::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityCertificate {
    pub status: FeasibilityStatus,
    /// The minimax point; reported as a witness only when `status` is `Witness`.
    pub witness: Option<Vec<f64>>,
    /// `max_i (||x - x_i|| - r_i)` at the minimax point.
    pub depth: f64,
    /// Certified lower bound on the optimal depth.
    pub depth_lower_bound: f64,
    /// Explicit separating functional, available for two disjoint balls.
    pub separator: Option<Functional>,
    pub feas_tol: f64,
}

fn check_balls(space: &NormSpec, balls: &[Ball]) -> Result<()> {
    if balls.is_empty() {
        return Err(Error::InvalidInput("at least one ball is required".into()));
    }
    for b in balls {
        check_dim(space.dim(), b.center.len())?;
    }
    Ok(())
}

/// Decides whether the intersection of `balls` (within the affine set of
/// `space`) is nonempty.
pub fn intersect(
    space: &NormSpec,
    balls: &[Ball],
    feas_tol: f64,
) -> Result<FeasibilityCertificate> {
    check_balls(space, balls)?;
    if !(feas_tol.is_finite() && feas_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "feasibility tolerance {feas_tol} must be positive"
        )));
    }
    let terms: Vec<Term> = balls
        .iter()
        .map(|b| Term {
            center: &b.center,
            scale: 1.0,
            offset: b.radius,
        })
        .collect();
    let sol = minimax::solve(space, &terms, DEFAULT_MAX_ITER)?;

    let status = if sol.value <= feas_tol {
        FeasibilityStatus::Witness
    } else if sol.lower_bound >= 10.0 * feas_tol {
        FeasibilityStatus::Empty
    } else {
        FeasibilityStatus::Undetermined
    };
    let separator = match (status, balls) {
        (FeasibilityStatus::Empty, [a, b]) => two_ball_separator(space, a, b),
        _ => None,
    };
    Ok(FeasibilityCertificate {
        status,
        witness: (status == FeasibilityStatus::Witness).then_some(sol.point),
        depth: sol.value,
        depth_lower_bound: sol.lower_bound,
        separator,
        feas_tol,
    })
}

/// A unit functional `f` with `f(b.center - a.center) = ||b.center - a.center||`;
/// it is at most `<f, a.center> + r_a` on `a` and at least
/// `<f, b.center> - r_b` on `b`.
fn two_ball_separator(space: &NormSpec, a: &Ball, b: &Ball) -> Option<Functional> {
    let diff: Vec<f64> = b.center.iter().zip(&a.center).map(|(p, q)| p - q).collect();
    if space.distance(&a.center, &b.center) <= a.radius + b.radius {
        return None;
    }
    Functional::new(space, space.norm_subgradient(&diff)).ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

/// Two-sided bounds on an extremum of a functional over a ball intersection.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtentBounds {
    /// Feasible point attaining `value`.
    pub point: Vec<f64>,
    pub value: f64,
    /// Certified bound on the other side: below `value` for `Min`, above it for `Max`.
    pub bound: f64,
}

pub fn linear_extent(
    space: &NormSpec,
    balls: &[Ball],
    g: &Functional,
    direction: Direction,
) -> Result<f64> {
    linear_extent_bounds(space, balls, g, direction).map(|e| e.value)
}

pub fn linear_extent_bounds(
    space: &NormSpec,
    balls: &[Ball],
    g: &Functional,
    direction: Direction,
) -> Result<ExtentBounds> {
    check_balls(space, balls)?;
    check_dim(space.dim(), g.coefficients().len())?;
    let cert = intersect(space, balls, DEFAULT_FEAS_TOL)?;
    let witness = match cert.status {
        FeasibilityStatus::Empty => return Err(Error::EmptyDomain),
        _ => cert
            .witness
            .unwrap_or_else(|| space.project_to_subspace(&balls[0].center)),
    };
    let sign = match direction {
        Direction::Min => 1.0,
        Direction::Max => -1.0,
    };
    let coeffs: Vec<f64> = g.coefficients().iter().map(|v| sign * v).collect();
    let pairs: Vec<(&[f64], f64)> = balls
        .iter()
        .map(|b| (b.center.as_slice(), b.radius))
        .collect();
    let Extent {
        point,
        value,
        lower_bound,
    } = minimax::min_linear(space, &pairs, &coeffs, &witness, DEFAULT_MAX_ITER)?;
    Ok(ExtentBounds {
        point,
        value: sign * value,
        bound: sign * lower_bound,
    })
}

/// Checks that equal-radius balls around the points of `set` meet at
/// `rad + tol` and fail to meet at `rad - 10 tol`.
pub fn duality_check(set: &PointSet, tol: f64) -> Result<bool> {
    if !set.has_unit_weights() {
        return Err(Error::InvalidInput(
            "duality check needs unit weights".into(),
        ));
    }
    let center = chebyshev_center(set, &Aggregator::MaxWeighted, tol)?;
    let rad = center.radius;
    let balls_at = |r: f64| -> Result<Vec<Ball>> {
        set.points()
            .iter()
            .map(|p| Ball::new(p.clone(), r))
            .collect()
    };

    let above = intersect(set.space(), &balls_at(rad + tol)?, tol)?;
    if above.status != FeasibilityStatus::Witness {
        return Ok(false);
    }
    let shrunk = rad - 10.0 * tol;
    if shrunk <= 0.0 {
        return Ok(true);
    }
    let below = intersect(set.space(), &balls_at(shrunk)?, tol)?;
    Ok(below.status != FeasibilityStatus::Witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(c: &[f64], r: f64) -> Ball {
        Ball::new(c.to_vec(), r).unwrap()
    }

    fn triangle(r: f64) -> Vec<Ball> {
        let h = 3f64.sqrt();
        vec![
            ball(&[0.0, 0.0], r),
            ball(&[2.0, 0.0], r),
            ball(&[1.0, h], r),
        ]
    }

    #[test]
    fn overlapping_boxes_have_a_witness() {
        let space = NormSpec::linf(2);
        let cert = intersect(
            &space,
            &[ball(&[0.0, 0.0], 1.0), ball(&[1.5, 0.0], 1.0)],
            1e-9,
        )
        .unwrap();
        assert_eq!(cert.status, FeasibilityStatus::Witness);
        let w = cert.witness.unwrap();
        assert!(w[0] >= 0.5 - 1e-9 && w[0] <= 1.0 + 1e-9);
    }

    #[test]
    fn equilateral_disks_are_empty() {
        let space = NormSpec::l2(2);
        let cert = intersect(&space, &triangle(1.05), 1e-9).unwrap();
        assert_eq!(cert.status, FeasibilityStatus::Empty);
        let expected = 2.0 / 3f64.sqrt() - 1.05;
        assert!((cert.depth - expected).abs() < 1e-10, "{cert:?}");
    }

    #[test]
    fn circumradius_disks_meet_at_the_circumcenter() {
        let space = NormSpec::l2(2);
        let cert = intersect(&space, &triangle(2.0 / 3f64.sqrt()), 1e-9).unwrap();
        assert_eq!(cert.status, FeasibilityStatus::Witness);
        let w = cert.witness.unwrap();
        assert!((w[0] - 1.0).abs() < 1e-6 && (w[1] - 1.0 / 3f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn two_disjoint_balls_carry_a_separator() {
        let space = NormSpec::l1(2);
        let a = ball(&[0.0, 0.0], 1.0);
        let b = ball(&[3.0, 1.0], 1.0);
        let cert = intersect(&space, &[a, b], 1e-9).unwrap();
        assert_eq!(cert.status, FeasibilityStatus::Empty);
        let f = cert.separator.unwrap();
        assert!((f.dual_norm() - 1.0).abs() < 1e-15);
        assert!((f.apply(&[3.0, 1.0]) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn extents_match_support_functions() {
        let space = NormSpec::linf(2);
        let g = Functional::new(&space, vec![1.0, 0.0]).unwrap();
        let v = linear_extent(&space, &[ball(&[0.0, 0.0], 1.0)], &g, Direction::Max).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let two = [ball(&[0.0, 0.0], 1.0), ball(&[1.0, 0.0], 1.0)];
        let v = linear_extent(&space, &two, &g, Direction::Max).unwrap();
        assert!((v - 1.0).abs() < 1e-12);

        let space = NormSpec::l2(2);
        let g = Functional::new(&space, vec![0.0, 1.0]).unwrap();
        let e =
            linear_extent_bounds(&space, &[ball(&[1.0, 0.0], 2.0)], &g, Direction::Min).unwrap();
        assert!((e.value + 2.0).abs() < 1e-9 && e.bound <= e.value);
    }

    #[test]
    fn extent_of_empty_domain_fails() {
        let space = NormSpec::l2(1);
        let g = Functional::new(&space, vec![1.0]).unwrap();
        let err = linear_extent(
            &space,
            &[ball(&[0.0], 1.0), ball(&[5.0], 1.0)],
            &g,
            Direction::Min,
        );
        assert_eq!(err, Err(Error::EmptyDomain));
    }

    #[test]
    fn duality_on_small_sets() {
        let two = PointSet::new(NormSpec::l2(2), vec![vec![0.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert!(duality_check(&two, 1e-9).unwrap());
        let single = PointSet::new(NormSpec::l2(2), vec![vec![1.0, 1.0]]).unwrap();
        assert!(duality_check(&single, 1e-9).unwrap());
        let square = PointSet::new(
            NormSpec::l2(2),
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 1.0],
            ],
        )
        .unwrap();
        assert!(duality_check(&square, 1e-9).unwrap());
    }
}
