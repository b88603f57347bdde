//! Test-only oracles, written independently of the library solvers.

#![allow(dead_code)]

use chebyshev_core::NormKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn norm(kind: &NormKind, v: &[f64]) -> f64 {
    match kind {
        NormKind::L1 => v.iter().map(|a| a.abs()).sum(),
        NormKind::L2 => v.iter().map(|a| a * a).sum::<f64>().sqrt(),
        NormKind::LInf => v.iter().fold(0.0, |m, a| m.max(a.abs())),
        NormKind::WeightedSup(s) => v.iter().zip(s).fold(0.0, |m, (a, s)| m.max(s * a.abs())),
    }
}

pub fn dist(kind: &NormKind, a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(kind, &d)
}

pub fn weighted_max(kind: &NormKind, points: &[Vec<f64>], weights: &[f64], x: &[f64]) -> f64 {
    points
        .iter()
        .zip(weights)
        .map(|(p, w)| w * dist(kind, x, p))
        .fold(0.0, f64::max)
}

pub fn power_sum(kind: &NormKind, points: &[Vec<f64>], weights: &[f64], q: f64, x: &[f64]) -> f64 {
    points
        .iter()
        .zip(weights)
        .map(|(p, w)| w * dist(kind, x, p).powf(q))
        .sum::<f64>()
        .powf(1.0 / q)
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Golden-section search; exact up to the final bracket width for convex `f`.
pub fn golden_min(f: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimum of a convex function over a box by nested golden-section
/// searches (the partial minimum of a convex function is convex).
pub fn nested_min(f: &dyn Fn(&[f64]) -> f64, lo: &[f64], hi: &[f64], iters: usize) -> f64 {
    let mut x = lo.to_vec();
    nested_level(f, lo, hi, iters, 0, &mut x)
}

fn nested_level(
    f: &dyn Fn(&[f64]) -> f64,
    lo: &[f64],
    hi: &[f64],
    iters: usize,
    k: usize,
    x: &mut [f64],
) -> f64 {
    if k == lo.len() {
        return f(x);
    }
    golden_min(
        &mut |t| {
            x[k] = t;
            nested_level(f, lo, hi, iters, k + 1, x)
        },
        lo[k],
        hi[k],
        iters,
    )
    .1
}

pub fn bounding_box(points: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let d = points[0].len();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in points {
        for k in 0..d {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

/// Weighted Chebyshev radius by nested golden sections over the bounding
/// box, which contains a minimizer for every absolute norm.
pub fn radius_by_search(kind: &NormKind, points: &[Vec<f64>], weights: &[f64]) -> f64 {
    let (lo, hi) = bounding_box(points);
    let iters = if points[0].len() <= 2 { 70 } else { 48 };
    nested_min(&|x| weighted_max(kind, points, weights, x), &lo, &hi, iters)
}

/// LInf separates by coordinates; in one dimension the weighted radius is
/// the largest pairwise value `|a - b| / (1/wa + 1/wb)`.
pub fn linf_radius(points: &[Vec<f64>], weights: &[f64]) -> f64 {
    let d = points[0].len();
    let mut best = 0.0f64;
    for k in 0..d {
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let gap = (points[i][k] - points[j][k]).abs();
                best = best.max(gap / (1.0 / weights[i] + 1.0 / weights[j]));
            }
        }
    }
    best
}

pub fn two_point_radius(kind: &NormKind, a: &[f64], b: &[f64], wa: f64, wb: f64) -> f64 {
    dist(kind, a, b) / (1.0 / wa + 1.0 / wb)
}

pub fn random_point(rng: &mut ChaCha8Rng, dim: usize, half: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-half..half)).collect()
}

pub fn kind_of(index: usize) -> NormKind {
    match index % 3 {
        0 => NormKind::L1,
        1 => NormKind::L2,
        _ => NormKind::LInf,
    }
}

/// One random weighted center instance: (norm, points, weights, unit weights?).
pub struct CenterCase {
    pub kind: NormKind,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub unit: bool,
}

pub fn center_corpus(count: usize, seed: u64) -> Vec<CenterCase> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let dim = 1 + i % 4;
            let kind = kind_of(i / 4);
            let unit = (i / 12) % 2 == 0;
            let n = r.gen_range(2..=6);
            let points = (0..n).map(|_| random_point(&mut r, dim, 5.0)).collect();
            let weights = if unit {
                vec![1.0; n]
            } else {
                (0..n).map(|_| r.gen_range(0.5..3.0)).collect()
            };
            CenterCase {
                kind,
                points,
                weights,
                unit,
            }
        })
        .collect()
}

/// Exact covering radius `max_a min_y ||a - y||`.
pub fn covering(kind: &NormKind, points: &[Vec<f64>], nets: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .map(|a| {
            nets.iter()
                .map(|y| dist(kind, a, y))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}
