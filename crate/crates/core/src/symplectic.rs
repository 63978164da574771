//! Symplectic form, elementary two-mode generators and covariance matrices.
//!
//! All matrices use the mode ordering `q1, p1, q2, p2, ..., qn, pn`. Mode
//! indices in this module are zero-based.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs};
use crate::spectra::{symplectic_spectrum, SpectralVector};

/// Relative symmetry tolerance accepted when wrapping a covariance matrix.
const SYMMETRY_TOL: f64 = 1e-8;

/// The block-diagonal symplectic form with per-mode blocks `[[0, 1], [-1, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

pub fn symplectic_form(n: usize) -> Result<SymplecticForm> {
    if n == 0 {
        return Err(Error::InvalidArgument("mode count must be positive".into()));
    }
    Ok(SymplecticForm {
        n,
        matrix: omega(n),
    })
}

pub(crate) fn omega(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        m[(2 * j, 2 * j + 1)] = 1.0;
        m[(2 * j + 1, 2 * j)] = -1.0;
    }
    m
}

/// `max |S Omega S^T - Omega|`.
pub(crate) fn symplectic_residual(s: &DMatrix<f64>) -> f64 {
    let om = omega(s.nrows() / 2);
    max_abs(&(s * &om * s.transpose() - om))
}

/// Membership test for `Sp(2n, R)`: `max |S Omega S^T - Omega| <= tol`.
pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    if s.nrows() != s.ncols() || !s.nrows().is_multiple_of(2) || s.nrows() == 0 {
        return Err(Error::InvalidArgument(format!(
            "expected a square matrix of even dimension, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    Ok(symplectic_residual(s) <= tol)
}

/// A real symplectic matrix acting on `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticMatrix {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            matrix: DMatrix::identity(2 * n, 2 * n),
        }
    }

    /// Wraps `m` after checking it is symplectic within `tol`.
    pub fn new(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        if !is_symplectic(&m, tol)? {
            return Err(Error::InvalidArgument(format!(
                "matrix is not symplectic (residual {:e})",
                symplectic_residual(&m)
            )));
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    pub fn from_matrix_unchecked(m: DMatrix<f64>) -> Self {
        Self {
            n: m.nrows() / 2,
            matrix: m,
        }
    }

    /// Embeds a two-mode transformation on modes `i`, `j` (in that slot order).
    pub fn embed_pair(s4: &Matrix4<f64>, i: usize, j: usize, n: usize) -> Result<Self> {
        check_pair(i, j, n)?;
        let mut m = DMatrix::identity(2 * n, 2 * n);
        let idx = linalg::pair_indices(i, j);
        for r in 0..4 {
            for c in 0..4 {
                m[(idx[r], idx[c])] = s4[(r, c)];
            }
        }
        Ok(Self { n, matrix: m })
    }

    /// Block-diagonal matrix of single-mode symplectics.
    pub fn local(blocks: &[Matrix2<f64>]) -> Self {
        let n = blocks.len();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for (j, b) in blocks.iter().enumerate() {
            linalg::set_block(&mut m, j, j, b);
        }
        Self { n, matrix: m }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// `self * other`, i.e. `other` acts first.
    pub fn compose(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix {
            n: self.n,
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn transpose(&self) -> SymplecticMatrix {
        SymplecticMatrix {
            n: self.n,
            matrix: self.matrix.transpose(),
        }
    }

    /// Exact inverse through the symplectic structure, `Omega S^T Omega^T`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let om = omega(self.n);
        SymplecticMatrix {
            n: self.n,
            matrix: &om * self.matrix.transpose() * om.transpose(),
        }
    }

    pub fn residual(&self) -> f64 {
        symplectic_residual(&self.matrix)
    }

    /// Left-multiplies by a two-mode transformation on modes `i`, `j`.
    pub(crate) fn apply_pair_left(&mut self, t: &Matrix4<f64>, i: usize, j: usize) {
        linalg::left_apply(&mut self.matrix, t, linalg::pair_indices(i, j));
    }
}

/// A real symmetric covariance matrix of `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n: usize,
    matrix: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Wraps a square, even-dimensional, symmetric matrix. Symmetry is checked
    /// relative to the largest entry and the stored copy is symmetrized.
    /// Positive definiteness is checked by the operations that need it.
    pub fn new(mut m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) || m.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "covariance must be square with even dimension, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidCovariance("non-finite entry".into()));
        }
        let asym = max_abs(&(&m - m.transpose()));
        let scale = max_abs(&m).max(1.0);
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::InvalidCovariance(format!(
                "matrix is not symmetric (asymmetry {asym:e})"
            )));
        }
        linalg::symmetrize(&mut m);
        Ok(Self {
            n: m.nrows() / 2,
            matrix: m,
        })
    }

    /// `diag(d1, d1, d2, d2, ...)`.
    pub fn thermal(params: &[f64]) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::InvalidArgument("no modes".into()));
        }
        let diag: Vec<f64> = params.iter().flat_map(|&p| [p, p]).collect();
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)))
    }

    pub fn from_row_slice(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != 4 * n * n {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for {} modes, got {}",
                4 * n * n,
                n,
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(2 * n, 2 * n, data))
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<f64>) -> Self {
        Self {
            n: m.nrows() / 2,
            matrix: m,
        }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// The `2x2` block coupling modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        linalg::block(&self.matrix, i, j)
    }

    /// Local spectral parameters `sqrt(det V_jj)` in mode order.
    pub fn local_parameters(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| self.block(j, j).determinant().max(0.0).sqrt())
            .collect()
    }

    /// `S V S^T`.
    pub fn congruence(&self, s: &SymplecticMatrix) -> Result<CovarianceMatrix> {
        if s.modes() != self.n {
            return Err(Error::InvalidArgument(format!(
                "symplectic acts on {} modes, covariance has {}",
                s.modes(),
                self.n
            )));
        }
        let mut m = s.matrix() * &self.matrix * s.matrix().transpose();
        linalg::symmetrize(&mut m);
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Largest absolute entry over all off-diagonal `2x2` blocks.
    pub fn max_off_block(&self) -> f64 {
        let mut best = 0.0_f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                best = best.max(self.block(i, j).abs().max());
            }
        }
        best
    }
}

fn check_pair(j: usize, k: usize, n: usize) -> Result<()> {
    if j == k || j >= n || k >= n {
        return Err(Error::InvalidArgument(format!(
            "invalid mode pair ({j}, {k}) for {n} modes"
        )));
    }
    Ok(())
}

/// Two-mode beam splitter block `[[cos I, sin I], [-sin I, cos I]]`.
pub(crate) fn beam_splitter4(theta: f64) -> Matrix4<f64> {
    let (s, c) = theta.sin_cos();
    Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, s, //
        -s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )
}

/// Two-mode squeezer block `[[cosh I, sinh Z], [sinh Z, cosh I]]`, `Z = diag(1, -1)`.
pub(crate) fn squeezer4(mu: f64) -> Matrix4<f64> {
    let (ch, sh) = (mu.cosh(), mu.sinh());
    Matrix4::new(
        ch, 0.0, sh, 0.0, //
        0.0, ch, 0.0, -sh, //
        sh, 0.0, ch, 0.0, //
        0.0, -sh, 0.0, ch,
    )
}

/// Beam splitter of transmitivity `cos^2 theta` mixing modes `j` and `k`.
///
/// On the `(j, k)` subspace this is `cos(theta) I4 + sin(theta) [[0, I], [-I, 0]]`;
/// the identity elsewhere. Congruence on `diag(a I, b I)` keeps `a + b` and
/// scales `b - a` by `cos 2 theta`.
pub fn beam_splitter_pair(theta: f64, j: usize, k: usize, n: usize) -> Result<SymplecticMatrix> {
    SymplecticMatrix::embed_pair(&beam_splitter4(theta), j, k, n)
}

/// Two-mode squeezer on modes `j` and `k`.
///
/// Congruence on `diag(a I, b I)` keeps `b - a` and scales `a + b` by
/// `cosh 2 mu`. Negative `mu` gives the inverse squeezer.
pub fn squeezer_pair(mu: f64, j: usize, k: usize, n: usize) -> Result<SymplecticMatrix> {
    if !mu.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "squeezing {mu} is not finite"
        )));
    }
    SymplecticMatrix::embed_pair(&squeezer4(mu), j, k, n)
}

/// Result of bringing every diagonal block to a multiple of the identity.
#[derive(Debug, Clone)]
pub struct LocalNormalForm {
    pub covariance: CovarianceMatrix,
    /// Per-mode `Sp(2, R)` factors; `covariance = L V L^T` with `L` their direct sum.
    pub locals: Vec<Matrix2<f64>>,
    /// Local parameters in mode order (unsorted).
    pub local_params: Vec<f64>,
}

impl LocalNormalForm {
    pub fn transform(&self) -> SymplecticMatrix {
        SymplecticMatrix::local(&self.locals)
    }
}

/// Single-mode factor `sqrt(m) B^{-1/2}` taking `B` to `m I`, with `m = sqrt(det B)`.
pub(crate) fn local_normalizer(b: &Matrix2<f64>) -> Result<(Matrix2<f64>, f64)> {
    let det = b.determinant();
    if !(b[(0, 0)] > 0.0 && det > 0.0) {
        return Err(Error::InvalidCovariance(format!(
            "diagonal block is not positive definite (det {det:e})"
        )));
    }
    let m = det.sqrt();
    let root = linalg::sqrt2(b);
    let inv = root
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("singular block square root".into()))?;
    Ok((inv * m.sqrt(), m))
}

pub fn local_normal_form(v: &CovarianceMatrix) -> Result<LocalNormalForm> {
    let n = v.modes();
    let mut locals = Vec::with_capacity(n);
    let mut params = Vec::with_capacity(n);
    for j in 0..n {
        let b = v.block(j, j);
        let sym = 0.5 * (b + b.transpose());
        let (l, m) = local_normalizer(&sym)?;
        locals.push(l);
        params.push(m);
    }
    let covariance = v.congruence(&SymplecticMatrix::local(&locals))?;
    Ok(LocalNormalForm {
        covariance,
        locals,
        local_params: params,
    })
}

/// True iff every symplectic eigenvalue is at least `1 - tol`.
pub fn check_physical(v: &CovarianceMatrix, tol: f64) -> bool {
    match symplectic_spectrum(v) {
        Ok(k) => k.values().iter().all(|&x| x >= 1.0 - tol),
        Err(_) => false,
    }
}

/// A seeded random physical state together with the data used to build it.
#[derive(Debug, Clone)]
pub struct RandomState {
    pub covariance: CovarianceMatrix,
    pub symplectic: SymplecticMatrix,
    /// Global parameters in the order they were placed on the modes.
    pub kappa: SpectralVector,
}

/// Squeezing bound for two-mode states; larger `n` gets `0.5 * 2 / n` so the
/// accumulated squeezing of `4 n^2` generators stays bounded.
const MAX_RANDOM_SQUEEZE: f64 = 0.5;

fn max_squeeze(n: usize) -> f64 {
    MAX_RANDOM_SQUEEZE * 2.0 / n.max(2) as f64
}

/// Draws `kappa` uniformly from `kappa_range` and mixes `diag(kappa pairs)`
/// with `4 n^2` random beam splitters, two-mode squeezers and single-mode
/// rotations/squeezers (angles uniform in `[0, 2 pi)`, squeezing uniform in
/// `[0, 1/n]`, capped at 0.5). Deterministic for a fixed seed.
pub fn random_state(n: usize, seed: u64, kappa_range: (f64, f64)) -> Result<RandomState> {
    let (lo, hi) = kappa_range;
    if n == 0 {
        return Err(Error::InvalidArgument("mode count must be positive".into()));
    }
    if !(lo >= 1.0) || !(hi >= lo) || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "kappa range [{lo}, {hi}] must satisfy 1 <= lower <= upper"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kappa: Vec<f64> = (0..n)
        .map(|_| if hi > lo { rng.gen_range(lo..=hi) } else { lo })
        .collect();

    let mut s = SymplecticMatrix::identity(n);
    for _ in 0..4 * n * n {
        let kind = if n == 1 { 2 } else { rng.gen_range(0..3) };
        match kind {
            0 | 1 => {
                let j = rng.gen_range(0..n);
                let mut k = rng.gen_range(0..n - 1);
                if k >= j {
                    k += 1;
                }
                let t = if kind == 0 {
                    beam_splitter4(rng.gen_range(0.0..2.0 * PI))
                } else {
                    squeezer4(rng.gen_range(0.0..=max_squeeze(n)))
                };
                s.apply_pair_left(&t, j, k);
            }
            _ => {
                let j = rng.gen_range(0..n);
                let phi = rng.gen_range(0.0..2.0 * PI);
                let r = rng.gen_range(0.0..=max_squeeze(n));
                let local = linalg::rotation2(phi) * Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp());
                let rows = s.matrix.rows(2 * j, 2).into_owned();
                let updated = local * rows;
                s.matrix.rows_mut(2 * j, 2).copy_from(&updated);
            }
        }
    }
    let covariance = CovarianceMatrix::thermal(&kappa)?.congruence(&s)?;
    Ok(RandomState {
        covariance,
        symplectic: s,
        kappa: SpectralVector::new(kappa)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn form_for_one_mode() {
        let om = symplectic_form(1).unwrap();
        assert_eq!(
            om.matrix(),
            &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
        );
    }

    #[test]
    fn form_squares_to_minus_identity() {
        let om = symplectic_form(3).unwrap().into_matrix();
        assert_eq!(&om * &om, -DMatrix::<f64>::identity(6, 6));
        assert_eq!(om.transpose(), -om.clone());
        assert_abs_diff_eq!(om.determinant(), 1.0, epsilon = 1e-12);
        let om2 = symplectic_form(2).unwrap().into_matrix();
        assert_eq!(om2.view((0, 0), (2, 2)), om2.view((2, 2), (2, 2)));
        assert_eq!(om2.view((0, 2), (2, 2)), DMatrix::<f64>::zeros(2, 2));
    }

    #[test]
    fn zero_modes_rejected() {
        assert!(matches!(symplectic_form(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn symplectic_membership() {
        assert!(is_symplectic(&DMatrix::identity(4, 4), 1e-10).unwrap());
        let bs = beam_splitter_pair(0.3, 0, 1, 2).unwrap();
        assert!(is_symplectic(bs.matrix(), 1e-12).unwrap());
        let scaled = DMatrix::<f64>::identity(4, 4) * 2.0;
        assert!(!is_symplectic(&scaled, 1e-10).unwrap());
        assert!(is_symplectic(&DMatrix::identity(3, 3), 1e-10).is_err());
    }

    #[test]
    fn beam_splitter_examples() {
        assert_eq!(
            beam_splitter_pair(0.0, 0, 1, 2).unwrap().into_matrix(),
            DMatrix::identity(4, 4)
        );
        let v = CovarianceMatrix::thermal(&[2.0, 7.0]).unwrap();
        let swapped = v
            .congruence(&beam_splitter_pair(PI / 2.0, 0, 1, 2).unwrap())
            .unwrap();
        let d = swapped.matrix().diagonal();
        for (got, want) in d.iter().zip([7.0, 7.0, 2.0, 2.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        let v = CovarianceMatrix::thermal(&[1.0, 3.0]).unwrap();
        let mixed = v
            .congruence(&beam_splitter_pair(PI / 4.0, 0, 1, 2).unwrap())
            .unwrap();
        for got in mixed.matrix().diagonal().iter() {
            assert_abs_diff_eq!(*got, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pair_indices_validated() {
        assert!(beam_splitter_pair(0.1, 1, 1, 3).is_err());
        assert!(beam_splitter_pair(0.1, 0, 3, 3).is_err());
        assert!(squeezer_pair(0.1, 4, 0, 3).is_err());
    }

    #[test]
    fn squeezer_examples() {
        assert_eq!(
            squeezer_pair(0.0, 0, 2, 3).unwrap().into_matrix(),
            DMatrix::identity(6, 6)
        );
        for mu in [0.1, 0.7, 1.5, -0.4] {
            let s = squeezer_pair(mu, 0, 1, 2).unwrap();
            assert!(s.residual() < 1e-12);
            let (a, b) = (1.5, 4.0);
            let out = CovarianceMatrix::thermal(&[a, b])
                .unwrap()
                .congruence(&s)
                .unwrap();
            let (ch2, sh2) = (mu.cosh().powi(2), mu.sinh().powi(2));
            assert_abs_diff_eq!(out.matrix()[(0, 0)], a * ch2 + b * sh2, epsilon = 1e-12);
            assert_abs_diff_eq!(out.matrix()[(2, 2)], a * sh2 + b * ch2, epsilon = 1e-12);
            assert_abs_diff_eq!(
                out.matrix()[(2, 2)] - out.matrix()[(0, 0)],
                b - a,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn embedded_pair_slots_follow_argument_order() {
        let s = beam_splitter_pair(0.4, 2, 0, 3).unwrap();
        let m = s.matrix();
        assert_abs_diff_eq!(m[(4, 0)], 0.4_f64.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(m[(0, 4)], -0.4_f64.sin(), epsilon = 1e-15);
        assert!(s.residual() < 1e-14);
    }

    #[test]
    fn local_normal_form_identity_block() {
        let v = CovarianceMatrix::thermal(&[3.0]).unwrap();
        let lnf = local_normal_form(&v).unwrap();
        assert!((lnf.locals[0] - Matrix2::identity()).abs().max() < 1e-14);
        assert_abs_diff_eq!(lnf.local_params[0], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn local_normal_form_general_block() {
        let v = CovarianceMatrix::from_row_slice(1, &[2.0, 1.0, 1.0, 1.0]).unwrap();
        let lnf = local_normal_form(&v).unwrap();
        assert_abs_diff_eq!(lnf.local_params[0], 1.0, epsilon = 1e-14);
        assert!(
            (lnf.covariance.block(0, 0) - Matrix2::identity())
                .abs()
                .max()
                < 1e-13
        );
        assert_abs_diff_eq!(lnf.locals[0].determinant(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn local_normal_form_pure_squeeze() {
        let v = CovarianceMatrix::from_row_slice(1, &[3.0, 0.0, 0.0, 1.0 / 3.0]).unwrap();
        let lnf = local_normal_form(&v).unwrap();
        assert_abs_diff_eq!(lnf.local_params[0], 1.0, epsilon = 1e-14);
        let l = lnf.locals[0];
        assert_abs_diff_eq!(l[(0, 1)], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(l[(0, 0)], 1.0 / 3.0_f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(l[(1, 1)], 3.0_f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn local_normal_form_rejects_indefinite_block() {
        let v = CovarianceMatrix::from_row_slice(1, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(matches!(
            local_normal_form(&v),
            Err(Error::InvalidCovariance(_))
        ));
    }

    #[test]
    fn physicality() {
        assert!(check_physical(
            &CovarianceMatrix::thermal(&[1.0, 1.0]).unwrap(),
            1e-10
        ));
        assert!(!check_physical(
            &CovarianceMatrix::thermal(&[0.5, 0.5]).unwrap(),
            1e-10
        ));
        let r: f64 = 0.8;
        let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        let tmsv = CovarianceMatrix::from_row_slice(
            2,
            &[
                c, 0.0, s, 0.0, //
                0.0, c, 0.0, -s, //
                s, 0.0, c, 0.0, //
                0.0, -s, 0.0, c,
            ],
        )
        .unwrap();
        assert!(check_physical(&tmsv, 1e-10));
        let indefinite = CovarianceMatrix::from_row_slice(1, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(!check_physical(&indefinite, 1e-10));
    }

    #[test]
    fn random_state_is_deterministic_and_physical() {
        let a = random_state(4, 11, (1.0, 5.0)).unwrap();
        let b = random_state(4, 11, (1.0, 5.0)).unwrap();
        assert_eq!(a.covariance, b.covariance);
        assert!(check_physical(&a.covariance, 1e-9));
        assert!(a.symplectic.residual() < 1e-9);
        let spec = symplectic_spectrum(&a.covariance).unwrap();
        for (x, y) in spec.values().iter().zip(a.kappa.sorted().values()) {
            assert_abs_diff_eq!(*x, *y, epsilon = 1e-8);
        }
    }

    #[test]
    fn random_state_range_checked() {
        assert!(random_state(2, 0, (0.5, 2.0)).is_err());
        assert!(random_state(0, 0, (1.0, 2.0)).is_err());
        assert!(random_state(1, 3, (2.0, 2.0)).is_ok());
    }

    #[test]
    fn covariance_rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(
            CovarianceMatrix::new(m),
            Err(Error::InvalidCovariance(_))
        ));
    }
}
