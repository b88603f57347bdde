//! Chebyshev radii in finite truncations of two hyperplane-type subspaces of
//! `c0` with the sup norm:
//!
//! * `XSpace`: `sum_n 2^-n (x_{2n} - x_{2n-1}) = 0`
//! * `YSpace`: `sum_n 2^-n x_{2n-1} = 0` and `sum_n 2^-n x_{2n} = 0`
//!
//! Zero-padding embeds each truncation isometrically into the next one, so
//! radii can only decrease as the dimension grows. The sweep is exploratory:
//! nothing is claimed about the infinite-dimensional limit.

use crate::centers::{chebyshev_center, Aggregator, PointSet};
use crate::error::{Error, Result};
use crate::space::NormSpec;

const CENTER_TOL: f64 = 1e-9;
pub const SEED_TOL: f64 = 1e-9;
pub const MONOTONE_TOL: f64 = 2e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    XSpace,
    YSpace,
}

impl Truncation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Truncation::XSpace => "x-space",
            Truncation::YSpace => "y-space",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "x-space" => Some(Truncation::XSpace),
            "y-space" => Some(Truncation::YSpace),
            _ => None,
        }
    }

    pub fn min_dim(&self) -> usize {
        match self {
            Truncation::XSpace => 2,
            Truncation::YSpace => 4,
        }
    }
}

/// `2^-n` for the n-th pair (1-based), exact in binary.
fn weight(pair: usize) -> f64 {
    let n = i32::try_from(pair).expect("dimension fits in i32");
    2f64.powi(-n)
}

/// The LInf space of dimension `d` restricted to the truncated constraints.
pub fn build_truncation(variant: Truncation, d: usize) -> Result<NormSpec> {
    if !d.is_multiple_of(2) || d < variant.min_dim() {
        return Err(Error::InvalidTruncation(d));
    }
    let pairs = d / 2;
    let rows = match variant {
        Truncation::XSpace => {
            let mut row = vec![0.0; d];
            for n in 1..=pairs {
                row[2 * n - 2] = -weight(n);
                row[2 * n - 1] = weight(n);
            }
            vec![row]
        }
        Truncation::YSpace => {
            let mut odd = vec![0.0; d];
            let mut even = vec![0.0; d];
            for n in 1..=pairs {
                odd[2 * n - 2] = weight(n);
                even[2 * n - 1] = weight(n);
            }
            vec![odd, even]
        }
    };
    let rhs = vec![0.0; rows.len()];
    NormSpec::linf(d).with_constraints(rows, rhs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub dim: usize,
    pub radius: f64,
    pub center: Vec<f64>,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub variant: Truncation,
    pub records: Vec<SweepRecord>,
    /// Radii non-increasing in the dimension within [`MONOTONE_TOL`].
    pub monotone: bool,
}

pub fn radius_sweep(variant: Truncation, seed: &[Vec<f64>], dims: &[usize]) -> Result<SweepResult> {
    if seed.is_empty() {
        return Err(Error::InvalidInput("the seed set is empty".into()));
    }
    let base = seed[0].len();
    if seed.iter().any(|p| p.len() != base) {
        return Err(Error::InvalidInput(
            "seed points have different lengths".into(),
        ));
    }
    if dims.is_empty() {
        return Err(Error::InvalidInput("no dimensions requested".into()));
    }
    let mut dims = dims.to_vec();
    dims.sort_unstable();
    dims.dedup();

    let mut records = Vec::with_capacity(dims.len());
    for d in dims {
        let space = build_truncation(variant, d)?;
        if d < base {
            return Err(Error::InvalidInput(format!(
                "dimension {d} is smaller than the seed dimension {base}"
            )));
        }
        let mut points = Vec::with_capacity(seed.len());
        for (index, p) in seed.iter().enumerate() {
            let mut padded = p.clone();
            padded.resize(d, 0.0);
            let violation = space.constraints().map_or(0.0, |c| c.residual(&padded));
            if violation > SEED_TOL {
                return Err(Error::SeedInfeasible { index, violation });
            }
            points.push(padded);
        }
        let set = PointSet::new(space, points)?;
        let res = chebyshev_center(&set, &Aggregator::MaxWeighted, CENTER_TOL)?;
        records.push(SweepRecord {
            dim: d,
            radius: res.radius,
            center: res.center,
            certified: res.certified,
        });
    }
    let monotone = records
        .windows(2)
        .all(|w| w[1].radius <= w[0].radius + MONOTONE_TOL);
    Ok(SweepResult {
        variant,
        records,
        monotone,
    })
}
