//! Finite-dimensional normed spaces.
//!
//! A [`NormSpec`] is a norm on `R^dim` together with an optional affine
//! equality system `Ax = b`. Every solver in the crate searches inside the
//! affine set and measures distances with the ambient norm.
//!
//! Functionals act through the standard inner product; their size is the
//! dual norm of the coefficient vector. The sign convention `sign(0) = +1`
//! is used throughout so that norming directions are deterministic.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{check_dim, Error, Result};

/// Relative singular value below which the constraint matrix is rejected.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    L1,
    L2,
    LInf,
    /// `max_k s_k |x_k|` with strictly positive scales `s_k`.
    WeightedSup(Vec<f64>),
}

impl NormKind {
    /// True for the norms whose unit ball is a polytope.
    pub fn is_polyhedral(&self) -> bool {
        !matches!(self, NormKind::L2)
    }
}

/// The affine set `{x : Ax = b}` with an orthonormal chart `x = origin + N y`.
#[derive(Debug, Clone)]
pub struct AffineConstraints {
    matrix: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    origin: Vec<f64>,
    // columns of N, each of length dim
    basis: Vec<Vec<f64>>,
}

impl PartialEq for AffineConstraints {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix && self.rhs == other.rhs
    }
}

impl AffineConstraints {
    pub fn new(dim: usize, matrix: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        let m = matrix.len();
        if m == 0 {
            return Err(Error::InvalidSpace("constraint matrix has no rows".into()));
        }
        if rhs.len() != m {
            return Err(Error::InvalidSpace(format!(
                "constraint rhs has length {} but the matrix has {m} rows",
                rhs.len()
            )));
        }
        for row in &matrix {
            check_dim(dim, row.len())?;
        }
        if m >= dim {
            return Err(Error::InvalidSpace(format!(
                "{m} constraints leave no free direction in dimension {dim}"
            )));
        }
        if matrix.iter().flatten().chain(&rhs).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpace("non-finite constraint entry".into()));
        }

        let a = DMatrix::from_fn(m, dim, |i, j| matrix[i][j]);
        let sv = a.clone().svd(false, false).singular_values;
        let largest = sv.max();
        let smallest = sv.min();
        if largest == 0.0 || smallest / largest < RANK_TOL {
            let rel = if largest == 0.0 {
                0.0
            } else {
                smallest / largest
            };
            return Err(Error::RankDeficient(rel));
        }

        // least-norm particular solution A^T (A A^T)^{-1} b
        let gram = &a * a.transpose();
        let chol = gram.clone().cholesky().ok_or(Error::RankDeficient(0.0))?;
        let b = DVector::from_vec(rhs.clone());
        let origin = a.transpose() * chol.solve(&b);

        // null space from the eigenvectors of the orthogonal projector
        let proj = DMatrix::identity(dim, dim) - a.transpose() * chol.solve(&a);
        let eig = SymmetricEigen::new(proj);
        let mut basis = Vec::with_capacity(dim - m);
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda > 0.5 {
                basis.push(eig.eigenvectors.column(k).iter().copied().collect());
            }
        }
        if basis.len() != dim - m {
            return Err(Error::RankDeficient(smallest / largest));
        }

        Ok(AffineConstraints {
            matrix,
            rhs,
            origin: origin.iter().copied().collect(),
            basis,
        })
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// `max_i |(Ax - b)_i|`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| (dot(row, x) - b).abs())
            .fold(0.0, f64::max)
    }
}

/// A norm on `R^dim`, optionally restricted to an affine subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    dim: usize,
    kind: NormKind,
    constraints: Option<AffineConstraints>,
}

impl NormSpec {
    pub fn new(dim: usize, kind: NormKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be at least 1".into()));
        }
        if let NormKind::WeightedSup(scales) = &kind {
            check_dim(dim, scales.len())?;
            if scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                return Err(Error::InvalidSpace(
                    "weighted sup scales must be finite and strictly positive".into(),
                ));
            }
        }
        Ok(NormSpec {
            dim,
            kind,
            constraints: None,
        })
    }

    pub fn l1(dim: usize) -> Self {
        Self::new(dim, NormKind::L1).expect("valid dimension")
    }

    pub fn l2(dim: usize) -> Self {
        Self::new(dim, NormKind::L2).expect("valid dimension")
    }

    pub fn linf(dim: usize) -> Self {
        Self::new(dim, NormKind::LInf).expect("valid dimension")
    }

    /// Restricts the space to `{x : Ax = b}`.
    pub fn with_constraints(mut self, matrix: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        self.constraints = Some(AffineConstraints::new(self.dim, matrix, rhs)?);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn constraints(&self) -> Option<&AffineConstraints> {
        self.constraints.as_ref()
    }

    pub fn is_constrained(&self) -> bool {
        self.constraints.is_some()
    }

    /// Dimension of the affine search set.
    pub fn free_dim(&self) -> usize {
        match &self.constraints {
            Some(c) => c.basis.len(),
            None => self.dim,
        }
    }

    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        Ok(self.norm_unchecked(x))
    }

    pub(crate) fn norm_unchecked(&self, x: &[f64]) -> f64 {
        match &self.kind {
            NormKind::L1 => x.iter().map(|v| v.abs()).sum(),
            NormKind::L2 => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            NormKind::LInf => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            NormKind::WeightedSup(s) => x.iter().zip(s).fold(0.0, |m, (v, s)| m.max(s * v.abs())),
        }
    }

    pub(crate) fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        match &self.kind {
            NormKind::L1 => x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum(),
            NormKind::L2 => x
                .iter()
                .zip(y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            NormKind::LInf => x.iter().zip(y).fold(0.0, |m, (a, b)| m.max((a - b).abs())),
            NormKind::WeightedSup(s) => x
                .iter()
                .zip(y)
                .zip(s)
                .fold(0.0, |m, ((a, b), s)| m.max(s * (a - b).abs())),
        }
    }

    pub fn dual_norm(&self, g: &[f64]) -> Result<f64> {
        check_dim(self.dim, g.len())?;
        Ok(self.dual_norm_unchecked(g))
    }

    pub(crate) fn dual_norm_unchecked(&self, g: &[f64]) -> f64 {
        match &self.kind {
            NormKind::L1 => g.iter().fold(0.0, |m, v| m.max(v.abs())),
            NormKind::L2 => g.iter().map(|v| v * v).sum::<f64>().sqrt(),
            NormKind::LInf => g.iter().map(|v| v.abs()).sum(),
            NormKind::WeightedSup(s) => g.iter().zip(s).map(|(v, s)| v.abs() / s).sum(),
        }
    }

    /// A unit vector `z` with `<g, z> = -dual_norm(g)`.
    ///
    /// Computed in the ambient norm; affine constraints are not consulted.
    /// Ties and zero coefficients are broken with `sign(0) = +1` and the
    /// lowest index.
    pub fn norming_direction(&self, g: &Functional) -> Result<Vec<f64>> {
        let c = g.coefficients();
        check_dim(self.dim, c.len())?;
        if c.iter().all(|v| *v == 0.0) {
            return Err(Error::ZeroFunctional);
        }
        let z = match &self.kind {
            NormKind::LInf => c.iter().map(|v| -sign(*v)).collect(),
            NormKind::WeightedSup(s) => c.iter().zip(s).map(|(v, s)| -sign(*v) / s).collect(),
            NormKind::L1 => {
                let mut best = 0;
                for (k, v) in c.iter().enumerate() {
                    if v.abs() > c[best].abs() {
                        best = k;
                    }
                }
                let mut z = vec![0.0; self.dim];
                z[best] = -sign(c[best]);
                z
            }
            NormKind::L2 => {
                let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
                c.iter().map(|v| -v / n).collect()
            }
        };
        Ok(z)
    }

    /// Membership in the affine set: `||Ax - b||_inf <= tol`.
    pub fn in_subspace(&self, x: &[f64], tol: f64) -> bool {
        match &self.constraints {
            Some(c) => x.len() == self.dim && c.residual(x) <= tol,
            None => x.len() == self.dim,
        }
    }

    /// An element `s` of the subdifferential of the norm at `v`:
    /// `<s, v> = ||v||` and `dual_norm(s) <= 1`.
    pub(crate) fn norm_subgradient(&self, v: &[f64]) -> Vec<f64> {
        let mut s = vec![0.0; v.len()];
        match &self.kind {
            NormKind::L1 => {
                for (sk, vk) in s.iter_mut().zip(v) {
                    if *vk != 0.0 {
                        *sk = vk.signum();
                    }
                }
            }
            NormKind::L2 => {
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n > 0.0 {
                    for (sk, vk) in s.iter_mut().zip(v) {
                        *sk = vk / n;
                    }
                }
            }
            NormKind::LInf | NormKind::WeightedSup(_) => {
                let scale = |k: usize| match &self.kind {
                    NormKind::WeightedSup(w) => w[k],
                    _ => 1.0,
                };
                let mut best = 0;
                let mut best_val = 0.0;
                for (k, vk) in v.iter().enumerate() {
                    let a = scale(k) * vk.abs();
                    if a > best_val {
                        best_val = a;
                        best = k;
                    }
                }
                if best_val > 0.0 {
                    s[best] = scale(best) * v[best].signum();
                }
            }
        }
        s
    }

    /// Smallest `kappa` with `||x||_2 <= kappa ||x||` for all `x`.
    pub(crate) fn euclidean_factor(&self) -> f64 {
        let d = self.dim as f64;
        match &self.kind {
            NormKind::L1 | NormKind::L2 => 1.0,
            NormKind::LInf => d.sqrt(),
            NormKind::WeightedSup(s) => s.iter().map(|s| 1.0 / (s * s)).sum::<f64>().sqrt(),
        }
    }

    /// `x = origin + N y`.
    pub(crate) fn lift(&self, y: &[f64]) -> Vec<f64> {
        match &self.constraints {
            None => y.to_vec(),
            Some(c) => {
                let mut x = c.origin.clone();
                for (col, yk) in c.basis.iter().zip(y) {
                    for (xi, ci) in x.iter_mut().zip(col) {
                        *xi += yk * ci;
                    }
                }
                x
            }
        }
    }

    /// Chart coordinates of the orthogonal projection of `x`.
    pub(crate) fn chart_coords(&self, x: &[f64]) -> Vec<f64> {
        match &self.constraints {
            None => x.to_vec(),
            Some(c) => {
                let diff: Vec<f64> = x.iter().zip(&c.origin).map(|(a, b)| a - b).collect();
                c.basis.iter().map(|col| dot(col, &diff)).collect()
            }
        }
    }

    /// Pulls a gradient in ambient coordinates back to chart coordinates.
    pub(crate) fn chart_gradient(&self, g: &[f64]) -> Vec<f64> {
        match &self.constraints {
            None => g.to_vec(),
            Some(c) => c.basis.iter().map(|col| dot(col, g)).collect(),
        }
    }

    /// Euclidean projection onto the affine set.
    pub fn project_to_subspace(&self, x: &[f64]) -> Vec<f64> {
        match &self.constraints {
            None => x.to_vec(),
            Some(_) => self.lift(&self.chart_coords(x)),
        }
    }
}

/// A linear functional `x -> <coefficients, x>` with its dual norm cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    coefficients: Vec<f64>,
    dual_norm: f64,
}

impl Functional {
    pub fn new(space: &NormSpec, coefficients: Vec<f64>) -> Result<Self> {
        let dual_norm = space.dual_norm(&coefficients)?;
        Ok(Functional {
            coefficients,
            dual_norm,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn dual_norm(&self) -> f64 {
        self.dual_norm
    }

    pub fn apply(&self, x: &[f64]) -> f64 {
        dot(&self.coefficients, x)
    }

    pub(crate) fn scaled(&self, factor: f64) -> Functional {
        Functional {
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
            dual_norm: self.dual_norm * factor.abs(),
        }
    }
}

/// `sign(0) = +1`.
pub(crate) fn sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn euclid(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}
