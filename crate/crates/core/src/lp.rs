//! Small dense linear programs.
//!
//! Two-phase tableau simplex with Bland's rule. Free variables are split into
//! a difference of nonnegative columns. After the final basis is found the
//! basic solution is recomputed from the original columns with an LU solve,
//! which removes most of the rounding accumulated by the tableau pivots.

use nalgebra::{DMatrix, DVector};

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub(crate) struct LinearProgram {
    objective: Vec<f64>,
    free: Vec<bool>,
    rows: Vec<(Vec<f64>, Relation, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl LinearProgram {
    /// Minimize `objective . x`; `free[j]` marks unrestricted variables, the
    /// rest are nonnegative.
    pub(crate) fn minimize(objective: Vec<f64>, free: Vec<bool>) -> Self {
        debug_assert_eq!(objective.len(), free.len());
        LinearProgram {
            objective,
            free,
            rows: Vec::new(),
        }
    }

    pub(crate) fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub(crate) fn add(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.num_vars());
        self.rows.push((coeffs, rel, rhs));
    }

    /// Adds a row given as sparse `(index, coefficient)` pairs.
    pub(crate) fn add_sparse(&mut self, terms: &[(usize, f64)], rel: Relation, rhs: f64) {
        let mut coeffs = vec![0.0; self.num_vars()];
        for &(j, c) in terms {
            coeffs[j] += c;
        }
        self.add(coeffs, rel, rhs);
    }

    pub(crate) fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    // m rows of width ncols + 1 (last entry is the rhs)
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
    // standard-form column -> (original var, sign)
    col_var: Vec<Option<(usize, f64)>>,
    artificial_start: usize,
    // original standard-form matrix and rhs, kept for the final re-solve
    std_rows: Vec<Vec<f64>>,
    std_rhs: Vec<f64>,
    active: Vec<bool>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut col_var = Vec::new();
        let mut var_cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); lp.num_vars()];
        for (j, &free) in lp.free.iter().enumerate() {
            var_cols[j].push((col_var.len(), 1.0));
            col_var.push(Some((j, 1.0)));
            if free {
                var_cols[j].push((col_var.len(), -1.0));
                col_var.push(Some((j, -1.0)));
            }
        }
        let structural = col_var.len();
        let m = lp.rows.len();

        // normalize so every rhs is nonnegative
        let mut normalized = Vec::with_capacity(m);
        for (coeffs, rel, rhs) in &lp.rows {
            let mut dense = vec![0.0; structural];
            for (j, c) in coeffs.iter().enumerate() {
                if *c != 0.0 {
                    for &(col, s) in &var_cols[j] {
                        dense[col] += s * c;
                    }
                }
            }
            let (dense, rel, rhs) = if *rhs < 0.0 {
                let flipped = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (dense.iter().map(|v| -v).collect(), flipped, -rhs)
            } else {
                (dense, *rel, *rhs)
            };
            normalized.push((dense, rel, rhs));
        }

        let slack_count = normalized
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Eq)
            .count();
        let artificial_count = normalized
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Le)
            .count();
        let artificial_start = structural + slack_count;
        let ncols = artificial_start + artificial_count;
        col_var.resize(ncols, None);

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut std_rows = Vec::with_capacity(m);
        let mut std_rhs = Vec::with_capacity(m);
        let mut slack = structural;
        let mut artificial = artificial_start;
        for (dense, rel, rhs) in normalized {
            let mut row = vec![0.0; ncols + 1];
            row[..structural].copy_from_slice(&dense);
            row[ncols] = rhs;
            match rel {
                Relation::Le => {
                    row[slack] = 1.0;
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[artificial] = 1.0;
                    basis.push(artificial);
                    artificial += 1;
                }
                Relation::Eq => {
                    row[artificial] = 1.0;
                    basis.push(artificial);
                    artificial += 1;
                }
            }
            std_rows.push(row[..artificial_start].to_vec());
            std_rhs.push(rhs);
            rows.push(row);
        }

        Tableau {
            rows,
            basis,
            ncols,
            col_var,
            artificial_start,
            std_rows,
            std_rhs,
            active: vec![true; m],
        }
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.ncols + 1];
        z[..self.ncols].copy_from_slice(&cost[..self.ncols]);
        for (i, row) in self.rows.iter().enumerate() {
            if !self.active[i] {
                continue;
            }
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for (zj, rj) in z.iter_mut().zip(row) {
                    *zj -= cb * rj;
                }
            }
        }
        z
    }

    fn pivot(&mut self, r: usize, c: usize, z: &mut [f64]) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || !self.active[i] {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        let f = z[c];
        if f != 0.0 {
            for (v, pv) in z.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            z[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Bland's rule iterations on columns `< limit`. Returns `Ok(true)` at
    /// optimality, `Ok(false)` when unbounded.
    fn iterate(&mut self, z: &mut [f64], limit: usize, pivots: &mut usize) -> Result<bool, ()> {
        loop {
            let Some(c) = (0..limit).find(|&j| z[j] < -COST_TOL) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !self.active[i] || row[c] <= PIVOT_TOL {
                    continue;
                }
                let ratio = row[self.ncols] / row[c];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - 1e-12
                            || (ratio <= lr + 1e-12 && self.basis[i] < self.basis[li])
                        {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.pivot(r, c, z);
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(());
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let mut pivots = 0;
        let m = self.rows.len();

        // phase 1
        let mut phase1 = vec![0.0; self.ncols];
        for c in phase1.iter_mut().skip(self.artificial_start) {
            *c = 1.0;
        }
        let mut z = self.reduced_costs(&phase1);
        if self.iterate(&mut z, self.ncols, &mut pivots).is_err() {
            return LpOutcome::IterationLimit;
        }
        let infeasibility: f64 = (0..m)
            .filter(|&i| self.basis[i] >= self.artificial_start)
            .map(|i| self.rows[i][self.ncols])
            .sum();
        let scale = 1.0 + self.std_rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if infeasibility > FEAS_TOL * scale {
            return LpOutcome::Infeasible;
        }

        // drive remaining artificials out of the basis, dropping redundant rows
        for i in 0..m {
            if self.basis[i] < self.artificial_start {
                continue;
            }
            let col = (0..self.artificial_start).find(|&j| self.rows[i][j].abs() > PIVOT_TOL);
            match col {
                Some(c) => {
                    let mut dummy = vec![0.0; self.ncols + 1];
                    self.pivot(i, c, &mut dummy);
                }
                None => self.active[i] = false,
            }
        }

        // phase 2
        let mut cost = vec![0.0; self.ncols];
        for (col, slot) in self.col_var.iter().enumerate() {
            if let Some((j, s)) = slot {
                cost[col] = s * lp.objective[*j];
            }
        }
        let mut z = self.reduced_costs(&cost);
        match self.iterate(&mut z, self.artificial_start, &mut pivots) {
            Err(()) => return LpOutcome::IterationLimit,
            Ok(false) => return LpOutcome::Unbounded,
            Ok(true) => {}
        }

        let values = self.refined_basic_solution();
        let mut x = vec![0.0; lp.num_vars()];
        for (col, v) in values.iter().enumerate() {
            if let Some((j, s)) = self.col_var[col] {
                x[j] += s * v;
            }
        }
        let objective = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { x, objective }
    }

    /// Values of all non-artificial standard-form columns.
    fn refined_basic_solution(&self) -> Vec<f64> {
        let rows: Vec<usize> = (0..self.rows.len()).filter(|&i| self.active[i]).collect();
        let k = rows.len();
        let mut values = vec![0.0; self.artificial_start];
        let tableau_values = |values: &mut Vec<f64>| {
            for &i in &rows {
                values[self.basis[i]] = self.rows[i][self.ncols];
            }
        };
        if k == 0 {
            return values;
        }
        let b = DMatrix::from_fn(k, k, |r, c| self.std_rows[rows[r]][self.basis[rows[c]]]);
        let rhs = DVector::from_fn(k, |r, _| self.std_rhs[rows[r]]);
        match b.lu().solve(&rhs) {
            Some(sol) if sol.iter().all(|v| v.is_finite()) => {
                for (c, v) in sol.iter().enumerate() {
                    // tiny negative values are rounding on degenerate bases
                    values[self.basis[rows[c]]] = if *v < 0.0 && *v > -1e-9 { 0.0 } else { *v };
                }
            }
            _ => tableau_values(&mut values),
        }
        values
    }
}
