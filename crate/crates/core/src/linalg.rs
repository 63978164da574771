//! Small dense helpers shared by the spectral routines.

use nalgebra::{DMatrix, Matrix2, Matrix4, SymmetricEigen};

use crate::error::{Error, Result};

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub(crate) fn pair_indices(i: usize, j: usize) -> [usize; 4] {
    [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
}

pub(crate) fn block(m: &DMatrix<f64>, i: usize, j: usize) -> Matrix2<f64> {
    Matrix2::new(
        m[(2 * i, 2 * j)],
        m[(2 * i, 2 * j + 1)],
        m[(2 * i + 1, 2 * j)],
        m[(2 * i + 1, 2 * j + 1)],
    )
}

pub(crate) fn set_block(m: &mut DMatrix<f64>, i: usize, j: usize, b: &Matrix2<f64>) {
    for r in 0..2 {
        for c in 0..2 {
            m[(2 * i + r, 2 * j + c)] = b[(r, c)];
        }
    }
}

/// The 4x4 principal submatrix on modes `i`, `j` (in that order).
pub(crate) fn pair_submatrix(m: &DMatrix<f64>, i: usize, j: usize) -> Matrix4<f64> {
    let idx = pair_indices(i, j);
    Matrix4::from_fn(|r, c| m[(idx[r], idx[c])])
}

/// Rows `idx` of `m` are replaced by `t * rows`.
pub(crate) fn left_apply(m: &mut DMatrix<f64>, t: &Matrix4<f64>, idx: [usize; 4]) {
    let cols = m.ncols();
    let mut tmp = [0.0; 4];
    for c in 0..cols {
        for (r, slot) in tmp.iter_mut().enumerate() {
            *slot = (0..4).map(|k| t[(r, k)] * m[(idx[k], c)]).sum();
        }
        for r in 0..4 {
            m[(idx[r], c)] = tmp[r];
        }
    }
}

/// Columns `idx` of `m` are replaced by `cols * t^T`.
pub(crate) fn right_apply_transpose(m: &mut DMatrix<f64>, t: &Matrix4<f64>, idx: [usize; 4]) {
    let rows = m.nrows();
    let mut tmp = [0.0; 4];
    for r in 0..rows {
        for (c, slot) in tmp.iter_mut().enumerate() {
            *slot = (0..4).map(|k| m[(r, idx[k])] * t[(c, k)]).sum();
        }
        for c in 0..4 {
            m[(r, idx[c])] = tmp[c];
        }
    }
}

/// `m <- T m T^T` where `T` acts on the modes `i`, `j`.
pub(crate) fn pair_congruence(m: &mut DMatrix<f64>, t: &Matrix4<f64>, i: usize, j: usize) {
    let idx = pair_indices(i, j);
    left_apply(m, t, idx);
    right_apply_transpose(m, t, idx);
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for r in 0..n {
        for c in (r + 1)..n {
            let avg = 0.5 * (m[(r, c)] + m[(c, r)]);
            m[(r, c)] = avg;
            m[(c, r)] = avg;
        }
    }
}

pub(crate) fn omega4() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// Inverse of a 4x4 symplectic matrix, `Omega S^T Omega^T`.
pub(crate) fn symplectic_inverse4(s: &Matrix4<f64>) -> Matrix4<f64> {
    let om = omega4();
    om * s.transpose() * om.transpose()
}

/// Symmetric square root and inverse square root of a positive-definite matrix.
pub(crate) fn sqrt_and_inv_sqrt(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let eig = SymmetricEigen::new(m.clone());
    let scale = eig.eigenvalues.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let min = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if !(min > 1e-14 * scale.max(f64::MIN_POSITIVE)) || !min.is_finite() {
        return Err(Error::InvalidCovariance(format!(
            "matrix is not positive definite (smallest eigenvalue {min:e})"
        )));
    }
    let q = &eig.eigenvectors;
    let sqrt_vals = eig.eigenvalues.map(f64::sqrt);
    let root = q * DMatrix::from_diagonal(&sqrt_vals) * q.transpose();
    let inv_root = q * DMatrix::from_diagonal(&sqrt_vals.map(|x| 1.0 / x)) * q.transpose();
    Ok((root, inv_root))
}

/// Principal square root of a 2x2 symmetric positive-definite matrix.
pub(crate) fn sqrt2(b: &Matrix2<f64>) -> Matrix2<f64> {
    let s = b.determinant().sqrt();
    let t = (b.trace() + 2.0 * s).sqrt();
    (b + Matrix2::identity() * s) / t
}

pub(crate) fn rotation2(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, -s, s, c)
}
