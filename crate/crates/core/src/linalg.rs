//! Small dense linear algebra shared by the exact and float paths.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

use crate::scalar::Scalar;

/// 3×3 matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat3<S>(pub [[S; 3]; 3]);

impl<S: Scalar> Mat3<S> {
    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> S) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn diag(d: [S; 3]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i].clone() } else { S::zero() })
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn mul_vec(&self, v: &[S; 3]) -> [S; 3] {
        std::array::from_fn(|i| {
            (0..3).fold(S::zero(), |acc, k| acc + self.0[i][k].clone() * v[k].clone())
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| {
            (0..3).fold(S::zero(), |acc, k| {
                acc + self.0[i][k].clone() * other.0[k][j].clone()
            })
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].clone() + other.0[i][j].clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_fn(|i, j| self.0[i][j].clone() * s.clone())
    }

    pub fn column(&self, j: usize) -> [S; 3] {
        std::array::from_fn(|i| self.0[i][j].clone())
    }

    pub fn from_columns(cols: [[S; 3]; 3]) -> Self {
        Self::from_fn(|i, j| cols[j][i].clone())
    }

    fn cofactor(&self, i: usize, j: usize) -> S {
        let r = |k: usize| (i + k) % 3;
        let c = |k: usize| (j + k) % 3;
        self.0[r(1)][c(1)].clone() * self.0[r(2)][c(2)].clone()
            - self.0[r(1)][c(2)].clone() * self.0[r(2)][c(1)].clone()
    }

    pub fn det(&self) -> S {
        (0..3).fold(S::zero(), |acc, j| {
            acc + self.0[0][j].clone() * self.cofactor(0, j)
        })
    }

    /// Classical adjugate: `adj(M) · M = det(M) · I`.
    pub fn adjugate(&self) -> Self {
        Self::from_fn(|i, j| self.cofactor(j, i))
    }

    /// Inverse, or `None` when the determinant vanishes (exactly, or relative
    /// to the entry scale in float mode).
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        let scale = self.max_magnitude().powi(3);
        if scale == 0.0 || det.is_negligible(scale, 1e-13) {
            return None;
        }
        Some(self.adjugate().scale(&(S::one() / det)))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(Scalar::magnitude)
            .fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat3<T> {
        Mat3::from_fn(|i, j| f(&self.0[i][j]))
    }
}

pub fn cross<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Row echelon reduction in place; returns pivot columns. Pivots are chosen
/// by largest magnitude, which is exact for rationals and partial pivoting
/// for floats.
pub fn row_reduce<S: Scalar>(rows: &mut [Vec<S>], tol: f64) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let scale = rows
        .iter()
        .flatten()
        .map(Scalar::magnitude)
        .fold(0.0, f64::max);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some((p, _)) = (r..nrows)
            .map(|i| (i, rows[i][c].magnitude()))
            .filter(|(i, _)| !rows[*i][c].is_negligible(scale, tol))
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            continue;
        };
        rows.swap(r, p);
        let inv = S::one() / rows[r][c].clone();
        for x in rows[r].iter_mut().skip(c) {
            *x = x.clone() * inv.clone();
        }
        for i in 0..nrows {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            for k in c..ncols {
                let sub = factor.clone() * rows[r][k].clone();
                rows[i][k] = rows[i][k].clone() - sub;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank for rationals; pivoted elimination rank for floats (prefer
/// [`singular_values`] when a float rank decision matters).
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m, 1e-10).len()
}

/// Basis of the right nullspace `{x : A x = 0}`.
pub fn nullspace<S: Scalar>(rows: &[Vec<S>], tol: f64) -> Vec<Vec<S>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m, tol);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![S::zero(); ncols];
            x[f] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Solves the square system `A x = b`, or `None` if `A` is singular.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    let mut aug: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug, 1e-13);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

pub fn to_complex_matrix<S: Scalar>(rows: &[Vec<S>]) -> DMatrix<Complex64> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(nr, nc, |i, j| rows[i][j].to_complex())
}

/// Singular values in decreasing order.
pub fn singular_values<T: ComplexField<RealField = f64>>(m: DMatrix<T>) -> Vec<f64> {
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numerical rank: count of singular values above `rel_tol · σ₁`.
pub fn numeric_rank<T: ComplexField<RealField = f64>>(m: DMatrix<T>, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}
