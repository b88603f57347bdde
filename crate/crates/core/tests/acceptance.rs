//! Acceptance gate: one PASS/FAIL line per criterion. Run with
//! `cargo test --test acceptance`.

mod common;

use std::process::ExitCode;

use chebyshev_core::equalizer::DEFAULT_MARGIN_TOL;
use chebyshev_core::io::{execute, parse_str, RunOptions, GOLDEN};
use chebyshev_core::{
    best_nnet_exact, best_nnet_heuristic, chebyshev_center, duality_check, equalize, eval_radius,
    intersect, radius_sweep, Aggregator, Ball, Error, FeasibilityStatus, NormKind, NormSpec,
    PointSet, StepCase, Truncation,
};
use common::*;
use rand::Rng;

const CENTER_TOL: f64 = 1e-6;
const DUALITY_TOL: f64 = 1e-9;
const CONTAIN_TOL: f64 = 1e-9;
const EQUILATERAL_DEPTH_TOL: f64 = 1e-6;
const DISPLACEMENT_TOL: f64 = 1e-9;
const NET_TOL: f64 = 1e-6;
const NET_RADIUS_TOL: f64 = 2e-6;
const FERMAT_TOL: f64 = 1e-4;
const PROBE_SLACK: f64 = 1e-9;
const SWEEP_MONOTONE_TOL: f64 = 2e-9;
const SWEEP_FEAS_TOL: f64 = 1e-9;

type Verdict = Result<String, String>;
type Check = fn() -> Verdict;
type Residual = fn(&[f64]) -> f64;

fn space_of(kind: &NormKind, dim: usize) -> NormSpec {
    NormSpec::new(dim, kind.clone()).unwrap()
}

fn dual_norm(kind: &NormKind, c: &[f64]) -> f64 {
    match kind {
        NormKind::L1 => norm(&NormKind::LInf, c),
        NormKind::L2 => norm(&NormKind::L2, c),
        NormKind::LInf => norm(&NormKind::L1, c),
        NormKind::WeightedSup(s) => c.iter().zip(s).map(|(a, s)| a.abs() / s).sum(),
    }
}

/// 1. Weighted centers agree with the search, interval and two-point oracles.
fn centers() -> Verdict {
    let corpus = center_corpus(200, 1);
    let mut worst = 0.0f64;
    for (i, case) in corpus.iter().enumerate() {
        let dim = case.points[0].len();
        let set = PointSet::weighted(
            space_of(&case.kind, dim),
            case.points.clone(),
            case.weights.clone(),
        )
        .map_err(|e| format!("instance {i}: {e}"))?;
        let got = chebyshev_center(&set, &Aggregator::MaxWeighted, 1e-9)
            .map_err(|e| format!("instance {i}: {e}"))?;
        let at_center = weighted_max(&case.kind, &case.points, &case.weights, &got.center);
        let mut oracles = vec![(
            "search",
            radius_by_search(&case.kind, &case.points, &case.weights),
        )];
        if case.kind == NormKind::LInf {
            oracles.push(("interval", linf_radius(&case.points, &case.weights)));
        }
        if case.points.len() == 2 {
            oracles.push((
                "two-point",
                two_point_radius(
                    &case.kind,
                    &case.points[0],
                    &case.points[1],
                    case.weights[0],
                    case.weights[1],
                ),
            ));
        }
        for (name, value) in oracles {
            let err = (got.radius - value).abs().max((at_center - value).abs());
            worst = worst.max(err);
            if err > CENTER_TOL {
                return Err(format!(
                    "instance {i} ({:?}, dim {dim}): radius {} vs {name} oracle {value}",
                    case.kind, got.radius
                ));
            }
        }
    }
    Ok(format!("200 instances, worst deviation {worst:.2e}"))
}

/// 2. Center/intersection duality on the same corpus (unit weights).
fn duality() -> Verdict {
    for (i, case) in center_corpus(200, 1).iter().enumerate() {
        let dim = case.points[0].len();
        let set = PointSet::new(space_of(&case.kind, dim), case.points.clone()).unwrap();
        match duality_check(&set, DUALITY_TOL) {
            Ok(true) => {}
            Ok(false) => return Err(format!("instance {i}: duality check failed")),
            Err(e) => return Err(format!("instance {i}: {e}")),
        }
    }
    Ok("200 instances".into())
}

/// Random ball system whose intersection is empty with depth `gap`.
fn empty_system(
    r: &mut rand_chacha::ChaCha8Rng,
    kind: &NormKind,
    dim: usize,
) -> (NormSpec, Vec<Ball>) {
    let space = space_of(kind, dim);
    loop {
        let n = r.gen_range(2..=5);
        let centers: Vec<Vec<f64>> = (0..n).map(|_| random_point(r, dim, 3.0)).collect();
        let base: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..1.5)).collect();
        let gap = r.gen_range(1e-3..0.3);
        let balls: Vec<Ball> = centers
            .iter()
            .zip(&base)
            .map(|(c, b)| Ball::new(c.clone(), *b).unwrap())
            .collect();
        let depth = intersect(&space, &balls, 1e-9).unwrap().depth;
        let shift = depth - gap;
        if base.iter().any(|b| b + shift < 0.05) {
            continue;
        }
        let balls = centers
            .into_iter()
            .zip(&base)
            .map(|(c, b)| Ball::new(c, b + shift).unwrap())
            .collect();
        return (space, balls);
    }
}

/// 3. Equalizer containment, relocated sup chain, and final emptiness.
fn equalizer() -> Verdict {
    let mut r = rng(3);
    let mut runs = 0;
    for i in 0..200 {
        let kind = kind_of(i);
        let dim = 1 + (i / 3) % 4;
        let (space, balls) = empty_system(&mut r, &kind, dim);
        let max_r = balls.iter().map(Ball::radius).fold(0.0, f64::max);
        for target in [max_r * (1.0 + 1e-3) + 1e-3, max_r + 1.0, 4.0 * max_r + 10.0] {
            runs += 1;
            let out = match equalize(&space, &balls, target, DEFAULT_MARGIN_TOL) {
                Ok(out) => out,
                Err(e @ Error::LoopInvariantViolated { .. }) => {
                    return Err(format!("system {i}: {e}"))
                }
                Err(e) => return Err(format!("system {i} ({kind:?}, dim {dim}, r {target}): {e}")),
            };
            if out.verification.status != FeasibilityStatus::Empty {
                return Err(format!("system {i}: final system not certified empty"));
            }
            for step in &out.steps {
                let orig = &balls[step.index];
                let moved = dist(&kind, &step.new_center, orig.center());
                if moved > target - orig.radius() + CONTAIN_TOL {
                    return Err(format!(
                        "system {i} step {}: moved {moved} > r - r_i",
                        step.index
                    ));
                }
                if step.case == StepCase::Separated {
                    let f = step.separator.as_ref().unwrap().coefficients();
                    let eps = step.epsilon.unwrap();
                    let shift: Vec<f64> = step
                        .new_center
                        .iter()
                        .zip(orig.center())
                        .map(|(w, x)| w - x)
                        .collect();
                    let upper = f.iter().zip(&shift).map(|(a, b)| a * b).sum::<f64>()
                        + dual_norm(&kind, f) * target;
                    if !(eps > 0.0 && upper <= 1.0 - eps + 1e-9) {
                        return Err(format!(
                            "system {i} step {}: sup {upper}, epsilon {eps}",
                            step.index
                        ));
                    }
                }
            }
        }
    }
    Ok(format!("{runs} runs, no invariant violations"))
}

/// 4. The equilateral three-disk instance.
fn equilateral() -> Verdict {
    let h = 3f64.sqrt();
    let space = NormSpec::l2(2);
    let balls: Vec<Ball> = [[0.0, 0.0], [2.0, 0.0], [1.0, h]]
        .iter()
        .map(|c| Ball::new(c.to_vec(), 1.05).unwrap())
        .collect();
    let cert = intersect(&space, &balls, 1e-9).map_err(|e| e.to_string())?;
    if cert.status != FeasibilityStatus::Empty {
        return Err(format!("status {}", cert.status.as_str()));
    }
    let depth = cert.depth;
    let expected = 2.0 / h - 1.05;
    if (depth - expected).abs() > EQUILATERAL_DEPTH_TOL {
        return Err(format!("depth {depth}, expected {expected}"));
    }
    let out = equalize(&space, &balls, 1.2, DEFAULT_MARGIN_TOL).map_err(|e| e.to_string())?;
    let mut separated = 0;
    for step in &out.steps {
        if step.case == StepCase::Separated {
            separated += 1;
            let moved = dist(&NormKind::L2, &step.new_center, balls[step.index].center());
            if (moved - 0.15).abs() > DISPLACEMENT_TOL {
                return Err(format!("step {} moved {moved}", step.index));
            }
        }
    }
    Ok(format!(
        "depth {depth:.9}, {separated} separated steps of 0.15"
    ))
}

/// 5. n-nets: square, heuristic bounds, n = 1 and monotonicity.
fn nnets() -> Verdict {
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
    let two = best_nnet_exact(&square, 2).map_err(|e| e.to_string())?;
    if (two.covering_radius - 0.5).abs() > NET_TOL {
        return Err(format!("square 2-net radius {}", two.covering_radius));
    }
    let mut r = rng(5);
    for i in 0..50 {
        let kind = kind_of(i);
        let dim = 1 + i % 3;
        let count = r.gen_range(3..=10);
        let points: Vec<Vec<f64>> = (0..count).map(|_| random_point(&mut r, dim, 4.0)).collect();
        let set = PointSet::new(space_of(&kind, dim), points.clone()).unwrap();
        let mut previous = f64::INFINITY;
        for n in 1..=3 {
            let exact = best_nnet_exact(&set, n).map_err(|e| format!("instance {i}: {e}"))?;
            let heur =
                best_nnet_heuristic(&set, n, 1e-9).map_err(|e| format!("instance {i}: {e}"))?;
            let exact_cov = covering(&kind, &points, &exact.nets);
            let heur_cov = covering(&kind, &points, &heur.nets);
            if (exact_cov - exact.covering_radius).abs() > NET_TOL {
                return Err(format!(
                    "instance {i} n={n}: reported {} vs {exact_cov}",
                    exact.covering_radius
                ));
            }
            if heur_cov < exact_cov - NET_TOL || heur_cov > 2.0 * exact_cov + NET_TOL {
                return Err(format!(
                    "instance {i} n={n}: heuristic {heur_cov} vs exact {exact_cov}"
                ));
            }
            if exact_cov > previous + NET_TOL {
                return Err(format!(
                    "instance {i}: R_{n} = {exact_cov} > R_{} = {previous}",
                    n - 1
                ));
            }
            if n == 1 {
                let rad = radius_by_search(&kind, &points, &vec![1.0; count]);
                if (exact_cov - rad).abs() > NET_RADIUS_TOL {
                    return Err(format!("instance {i}: R_1 {exact_cov} vs radius {rad}"));
                }
            }
            previous = exact_cov;
        }
    }
    Ok("square 0.5; 50 random instances".into())
}

/// 6. Power-sum centers: Fermat point and random probes.
fn power_sums() -> Verdict {
    let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.75f64.sqrt()]];
    let set = PointSet::new(NormSpec::l2(2), tri.clone()).unwrap();
    let got =
        chebyshev_center(&set, &Aggregator::PowerSum(1.0), 1e-9).map_err(|e| e.to_string())?;
    let (lo, hi) = bounding_box(&tri);
    let oracle = nested_min(
        &|x| power_sum(&NormKind::L2, &tri, &[1.0; 3], 1.0, x),
        &lo,
        &hi,
        70,
    );
    if (got.radius - oracle).abs() > FERMAT_TOL || (got.radius - 3f64.sqrt()).abs() > FERMAT_TOL {
        return Err(format!("Fermat value {} vs oracle {oracle}", got.radius));
    }

    let mut r = rng(6);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..100 {
        let kind = kind_of(i);
        let dim = 1 + i % 4;
        let q = [1.0, 1.5, 2.0, 3.0][(i / 3) % 4];
        let n = r.gen_range(2..=6);
        let points: Vec<Vec<f64>> = (0..n).map(|_| random_point(&mut r, dim, 5.0)).collect();
        let weights: Vec<f64> = (0..n).map(|_| r.gen_range(0.5..3.0)).collect();
        let set =
            PointSet::weighted(space_of(&kind, dim), points.clone(), weights.clone()).unwrap();
        let agg = Aggregator::power_sum(q).unwrap();
        let got = chebyshev_center(&set, &agg, 1e-9).map_err(|e| format!("instance {i}: {e}"))?;
        let value = eval_radius(&set, &got.center, &agg).unwrap();
        for p in 0..1000 {
            let probe: Vec<f64> = if p % 2 == 0 {
                random_point(&mut r, dim, 6.0)
            } else {
                let scale = 10f64.powi(-(p % 14) / 2);
                got.center
                    .iter()
                    .map(|c| c + scale * r.gen_range(-1.0..1.0))
                    .collect()
            };
            let other = power_sum(&kind, &points, &weights, q, &probe);
            worst = worst.max(value - other);
            if value > other + PROBE_SLACK {
                return Err(format!(
                    "instance {i}: probe value {other} below solver value {value}"
                ));
            }
        }
    }
    Ok(format!(
        "Fermat {:.9}; 100 x 1000 probes, worst excess {worst:.2e}",
        got.radius
    ))
}

fn x_residual(x: &[f64]) -> f64 {
    (0..x.len() / 2)
        .map(|n| 0.5f64.powi(n as i32 + 1) * (x[2 * n + 1] - x[2 * n]))
        .sum::<f64>()
        .abs()
}

fn y_residual(x: &[f64]) -> f64 {
    let odd: f64 = (0..x.len() / 2)
        .map(|n| 0.5f64.powi(n as i32 + 1) * x[2 * n])
        .sum();
    let even: f64 = (0..x.len() / 2)
        .map(|n| 0.5f64.powi(n as i32 + 1) * x[2 * n + 1])
        .sum();
    odd.abs().max(even.abs())
}

fn check_sweep(
    s: usize,
    variant: Truncation,
    seed: &[Vec<f64>],
    first: usize,
    residual: Residual,
) -> Result<usize, String> {
    let dims: Vec<usize> = (first..=16).step_by(2).collect();
    let out = radius_sweep(variant, seed, &dims).map_err(|e| format!("seed {s}: {e}"))?;
    let mut previous = f64::INFINITY;
    for rec in &out.records {
        if residual(&rec.center) > SWEEP_FEAS_TOL {
            return Err(format!(
                "seed {s} {} d={}: infeasible center",
                variant.as_str(),
                rec.dim
            ));
        }
        let padded: Vec<Vec<f64>> = seed
            .iter()
            .map(|p| {
                let mut p = p.clone();
                p.resize(rec.dim, 0.0);
                p
            })
            .collect();
        let actual = weighted_max(
            &NormKind::LInf,
            &padded,
            &vec![1.0; seed.len()],
            &rec.center,
        );
        if (actual - rec.radius).abs() > SWEEP_FEAS_TOL {
            return Err(format!(
                "seed {s} d={}: radius {} vs {actual}",
                rec.dim, rec.radius
            ));
        }
        if rec.radius > previous + SWEEP_MONOTONE_TOL {
            return Err(format!(
                "seed {s} {}: radius rises at d={}",
                variant.as_str(),
                rec.dim
            ));
        }
        previous = rec.radius;
    }
    Ok(out.records.len())
}

/// 7. Truncation sweeps: monotone radii, feasible centers.
fn sweeps() -> Verdict {
    let mut r = rng(7);
    let mut checked = 0;
    for s in 0..20 {
        let n = r.gen_range(2..=5);
        let x_seed: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let t = r.gen_range(-2.0..2.0);
                vec![t, t]
            })
            .collect();
        let y_seed: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let a: f64 = r.gen_range(-2.0..2.0);
                let b: f64 = r.gen_range(-2.0..2.0);
                vec![a, b, -2.0 * a, -2.0 * b]
            })
            .collect();
        checked += check_sweep(s, Truncation::XSpace, &x_seed, 2, x_residual)?;
        checked += check_sweep(s, Truncation::YSpace, &y_seed, 4, y_residual)?;
    }
    Ok(format!("40 sweeps, {checked} dimensions"))
}

/// 8. Bit-identical records for repeated runs of the golden corpus.
fn determinism() -> Verdict {
    for (name, text) in GOLDEN {
        let first = execute(
            &parse_str(text).map_err(|e| e.to_string())?,
            RunOptions { svg: true },
        );
        let second = execute(
            &parse_str(text).map_err(|e| e.to_string())?,
            RunOptions { svg: true },
        );
        if first.record != second.record || first.table != second.table || first.svg != second.svg {
            return Err(format!("{name}: outputs differ between runs"));
        }
    }
    Ok(format!("{} golden instances", GOLDEN.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 8] = [
        ("center oracle equivalence", centers),
        ("center/intersection duality", duality),
        ("equalizer invariants", equalizer),
        ("equilateral disks", equilateral),
        ("n-net bounds", nnets),
        ("power-sum centers", power_sums),
        ("truncation sweeps", sweeps),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
