//! Covering radii and best n-nets (continuous k-center) for finite sets.
//!
//! For a finite set, some optimal net consists of the Chebyshev centers of
//! the blocks of some partition: given any net, grouping the points by their
//! nearest net point and moving each net point to its block's center never
//! increases the covering radius. The exact method therefore enumerates
//! partitions into at most `n` blocks.

use std::collections::HashMap;

use crate::centers::{chebyshev_center, Aggregator, PointSet};
use crate::error::{check_dim, Error, Result};

pub const MAX_EXACT_POINTS: usize = 14;
pub const MAX_EXACT_NETS: usize = 4;
const CENTER_TOL: f64 = 1e-9;
const MAX_ROUNDS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct NNetResult {
    pub nets: Vec<Vec<f64>>,
    pub covering_radius: f64,
    /// Index of the nearest net point for each point (lowest index on ties).
    pub assignment: Vec<usize>,
    pub optimal: bool,
}

/// `max_{a in F} min_i ||a - y_i||`.
pub fn covering_radius(set: &PointSet, nets: &[Vec<f64>]) -> Result<f64> {
    if nets.is_empty() {
        return Err(Error::InvalidInput(
            "the net must contain at least one point".into(),
        ));
    }
    for y in nets {
        check_dim(set.space().dim(), y.len())?;
    }
    Ok(assign(set, nets).1)
}

fn assign(set: &PointSet, nets: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let space = set.space();
    let mut worst = 0.0f64;
    let assignment = set
        .points()
        .iter()
        .map(|a| {
            let (idx, dist) = nets
                .iter()
                .enumerate()
                .map(|(i, y)| (i, space.distance(a, y)))
                .fold(
                    (0, f64::INFINITY),
                    |best, cur| if cur.1 < best.1 { cur } else { best },
                );
            worst = worst.max(dist);
            idx
        })
        .collect();
    (assignment, worst)
}

fn finish(set: &PointSet, mut nets: Vec<Vec<f64>>, n: usize, optimal: bool) -> NNetResult {
    // fewer blocks than requested: repeat a net point, which changes nothing
    while nets.len() < n {
        nets.push(nets[0].clone());
    }
    let (assignment, covering_radius) = assign(set, &nets);
    NNetResult {
        nets,
        covering_radius,
        assignment,
        optimal,
    }
}

fn check_request(set: &PointSet, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if set.is_empty() {
        return Err(Error::InvalidInput("the point set is empty".into()));
    }
    Ok(())
}

struct BlockCenters<'a> {
    set: &'a PointSet,
    cache: HashMap<u32, (Vec<f64>, f64)>,
}

impl BlockCenters<'_> {
    fn get(&mut self, mask: u32) -> Result<&(Vec<f64>, f64)> {
        if !self.cache.contains_key(&mask) {
            let indices: Vec<usize> = (0..self.set.len()).filter(|i| mask >> i & 1 == 1).collect();
            let block = self.set.subset(&indices);
            let res = chebyshev_center(&block, &Aggregator::MaxWeighted, CENTER_TOL)?;
            self.cache.insert(mask, (res.center, res.radius));
        }
        Ok(&self.cache[&mask])
    }

    fn radius(&mut self, mask: u32) -> Result<f64> {
        self.get(mask).map(|c| c.1)
    }
}

struct Search<'a, 'b> {
    blocks: &'b mut BlockCenters<'a>,
    n: usize,
    len: usize,
    masks: Vec<u32>,
    best: Option<(f64, Vec<u32>)>,
}

impl Search<'_, '_> {
    fn bound(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.0)
    }

    /// Restricted-growth enumeration: point `i` joins an existing block or
    /// opens the next one.
    fn visit(&mut self, i: usize, current: f64) -> Result<()> {
        if i == self.len {
            if current < self.bound() {
                self.best = Some((current, self.masks.clone()));
            }
            return Ok(());
        }
        let open = self.masks.len();
        for b in 0..=open.min(self.n - 1) {
            if b == open {
                self.masks.push(1 << i);
                self.visit(i + 1, current)?;
                self.masks.pop();
            } else {
                let grown = self.masks[b] | 1 << i;
                // block radii only grow as points join, so this prunes soundly
                let r = self.blocks.radius(grown)?.max(current);
                if r < self.bound() {
                    let old = std::mem::replace(&mut self.masks[b], grown);
                    self.visit(i + 1, r)?;
                    self.masks[b] = old;
                }
            }
        }
        Ok(())
    }
}

pub fn best_nnet_exact(set: &PointSet, n: usize) -> Result<NNetResult> {
    check_request(set, n)?;
    if set.len() > MAX_EXACT_POINTS || n > MAX_EXACT_NETS {
        return Err(Error::BudgetExceeded(format!(
            "exact n-nets need at most {MAX_EXACT_POINTS} points and n <= {MAX_EXACT_NETS}, got {} points and n = {n}",
            set.len()
        )));
    }
    let plain = set.unweighted();
    let mut blocks = BlockCenters {
        set: &plain,
        cache: HashMap::new(),
    };
    let mut search = Search {
        blocks: &mut blocks,
        n,
        len: plain.len(),
        masks: Vec::with_capacity(n),
        best: None,
    };
    search.visit(0, 0.0)?;
    let (_, masks) = search.best.expect("the one-block partition always exists");
    let nets = masks
        .iter()
        .map(|m| blocks.get(*m).map(|c| c.0.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(&plain, nets, n, true))
}

/// Farthest-first seeding followed by assign/re-center rounds.
pub fn best_nnet_heuristic(set: &PointSet, n: usize, tol: f64) -> Result<NNetResult> {
    check_request(set, n)?;
    let plain = set.unweighted();
    let space = plain.space();
    let points = plain.points();

    let mut nets = vec![points[0].clone()];
    let mut nearest: Vec<f64> = points
        .iter()
        .map(|a| space.distance(a, &points[0]))
        .collect();
    while nets.len() < n {
        let (far, dist) =
            nearest
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, d)| {
                    if *d > best.1 {
                        (i, *d)
                    } else {
                        best
                    }
                });
        if dist <= 0.0 {
            break;
        }
        nets.push(points[far].clone());
        for (d, a) in nearest.iter_mut().zip(points) {
            *d = d.min(space.distance(a, &points[far]));
        }
    }

    let (mut assignment, mut radius) = assign(&plain, &nets);
    let mut best = (nets.clone(), radius);
    for _ in 0..MAX_ROUNDS {
        for (k, net) in nets.iter_mut().enumerate() {
            let members: Vec<usize> = (0..points.len()).filter(|i| assignment[*i] == k).collect();
            if !members.is_empty() {
                let res = chebyshev_center(
                    &plain.subset(&members),
                    &Aggregator::MaxWeighted,
                    CENTER_TOL,
                )?;
                *net = res.center;
            }
        }
        let (next_assignment, next_radius) = assign(&plain, &nets);
        let improvement = radius - next_radius;
        assignment = next_assignment;
        radius = next_radius;
        if radius < best.1 {
            best = (nets.clone(), radius);
        }
        if improvement < tol {
            break;
        }
    }
    Ok(finish(&plain, best.0, n, false))
}
