//! Two-mode machinery: standard form, invariants, the coupling solver and
//! the beam-splitter / squeezer redistribution parameters.
//!
//! Every two-mode covariance matrix can be brought by local symplectics to
//!
//! ```text
//! [ m1  0   kx  0  ]
//! [ 0   m1  0   kp ]
//! [ kx  0   m2  0  ]
//! [ 0   kp  0   m2 ]
//! ```
//!
//! and `(m1, m2, kappa1, kappa2)` fix `(kx, kp)` up to the canonical
//! orientation `kx >= |kp|`. The state is therefore determined, modulo local
//! operations, by its local and global spectra.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Cholesky, Matrix2, Matrix4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, rotation2};
use crate::spectra::williamson;
use crate::symplectic::{
    beam_splitter4, local_normalizer, squeezer4, CovarianceMatrix, SymplecticMatrix,
};

/// Relative slack on the two-mode feasibility inequalities and redistribution ranges.
pub(crate) const FEASIBILITY_TOL: f64 = 1e-9;

/// The two-mode standard form `(m1, m2, kx, kp)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoModeStandardForm {
    pub m1: f64,
    pub m2: f64,
    pub kx: f64,
    pub kp: f64,
}

impl TwoModeStandardForm {
    pub fn matrix4(&self) -> Matrix4<f64> {
        let Self { m1, m2, kx, kp } = *self;
        Matrix4::new(
            m1, 0.0, kx, 0.0, //
            0.0, m1, 0.0, kp, //
            kx, 0.0, m2, 0.0, //
            0.0, kp, 0.0, m2,
        )
    }

    pub fn to_covariance(&self) -> CovarianceMatrix {
        CovarianceMatrix::from_row_slice(2, self.matrix4().transpose().as_slice())
            .expect("4x4 symmetric by construction")
    }

    /// Largest componentwise difference to `other`.
    pub fn distance(&self, other: &TwoModeStandardForm) -> f64 {
        [
            self.m1 - other.m1,
            self.m2 - other.m2,
            self.kx - other.kx,
            self.kp - other.kp,
        ]
        .iter()
        .fold(0.0_f64, |a, x| a.max(x.abs()))
    }
}

fn check_two_mode(v: &CovarianceMatrix) -> Result<()> {
    if v.modes() != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a two-mode (4x4) covariance, got {} modes",
            v.modes()
        )));
    }
    Ok(())
}

/// `(kappa1^2 + kappa2^2, (kappa1 kappa2)^2)` computed as
/// `(1/2 tr(Omega V Omega^T V), det V)`.
pub fn two_mode_invariants(v: &CovarianceMatrix) -> Result<(f64, f64)> {
    check_two_mode(v)?;
    let m = v.matrix();
    let om = crate::symplectic::omega(2);
    let sum_sq = 0.5 * (&om * m * om.transpose() * m).trace();
    Ok((sum_sq, m.determinant()))
}

/// Output of [`standard_form`].
#[derive(Debug, Clone)]
pub struct StandardForm {
    /// Canonical values: `m1 <= m2`, `kx >= |kp|`, `sign(kp) = sign(det C)`.
    pub form: TwoModeStandardForm,
    /// Per-mode `Sp(2, R)` factors in the input's mode order.
    pub locals: [Matrix2<f64>; 2],
    /// True when the input's first mode carries the larger local parameter,
    /// so `form.m1` belongs to input mode 2.
    pub swapped: bool,
}

impl StandardForm {
    pub fn transform(&self) -> SymplecticMatrix {
        SymplecticMatrix::local(&self.locals)
    }
}

/// Rotations `(r1, r2)` with `r1 C r2^T = diag(s1, s2)`, `s1 >= |s2|`,
/// `sign(s2) = sign(det C)`.
fn rotation_svd(c: &Matrix2<f64>) -> (Matrix2<f64>, Matrix2<f64>, f64, f64) {
    let e = 0.5 * (c[(0, 0)] + c[(1, 1)]);
    let f = 0.5 * (c[(0, 0)] - c[(1, 1)]);
    let g = 0.5 * (c[(1, 0)] + c[(0, 1)]);
    let h = 0.5 * (c[(1, 0)] - c[(0, 1)]);
    let q = e.hypot(h);
    let r = f.hypot(g);
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let theta = 0.5 * (a2 - a1);
    let phi = 0.5 * (a2 + a1);
    (rotation2(-phi), rotation2(theta), q + r, q - r)
}

/// Local symplectic reduction of a two-mode covariance to standard form.
pub fn standard_form(v: &CovarianceMatrix) -> Result<StandardForm> {
    check_two_mode(v)?;
    if Cholesky::new(v.matrix().clone()).is_none() {
        return Err(Error::InvalidCovariance(
            "matrix is not positive definite".into(),
        ));
    }
    let (n1, m1) = local_normalizer(&v.block(0, 0))?;
    let (n2, m2) = local_normalizer(&v.block(1, 1))?;
    let c = n1 * v.block(0, 1) * n2.transpose();
    let (r1, r2, kx, kp) = rotation_svd(&c);
    let swapped = m1 > m2;
    let (m1, m2) = if swapped { (m2, m1) } else { (m1, m2) };
    Ok(StandardForm {
        form: TwoModeStandardForm { m1, m2, kx, kp },
        locals: [r1 * n1, r2 * n2],
        swapped,
    })
}

/// Unique couplings `(kx, kp)` with `kx >= |kp|` realizing local parameters
/// `m1, m2` and global parameters `kappa1, kappa2`.
///
/// With `P = kx kp = ((k1^2 + k2^2) - (m1^2 + m2^2)) / 2` and
/// `Q = kx^2 + kp^2 = (m1^2 m2^2 - k1^2 k2^2 + P^2) / (m1 m2)`, real solutions
/// exist iff `m1 m2 - |P| >= k1 k2`.
pub fn solve_couplings(m1: f64, m2: f64, kappa1: f64, kappa2: f64) -> Result<(f64, f64)> {
    for x in [m1, m2, kappa1, kappa2] {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "spectral parameters must be positive, got {x}"
            )));
        }
    }
    let mm = m1 * m2;
    let kk = kappa1 * kappa2;
    let p = 0.5 * ((kappa1 * kappa1 + kappa2 * kappa2) - (m1 * m1 + m2 * m2));
    let gap = mm - p.abs();
    if gap < kk - FEASIBILITY_TOL * mm {
        return Err(Error::IncompatibleSpectra(format!(
            "no real couplings: m1 m2 - |kx kp| = {gap} < kappa1 kappa2 = {kk}"
        )));
    }
    // (kx - |kp|)^2 = Q - 2|P| = (gap - kk)(gap + kk) / (m1 m2).
    // The square root amplifies round-off near the boundary, so a gap at
    // round-off level is treated as exactly balanced.
    let roundoff = 16.0 * f64::EPSILON * (m1 * m1 + m2 * m2 + kappa1 * kappa1 + kappa2 * kappa2);
    let excess = if gap - kk <= roundoff { 0.0 } else { gap - kk };
    let diff_sq = excess * (gap + kk) / mm;
    let sum_sq = diff_sq + 4.0 * p.abs();
    let (sum, diff) = (sum_sq.sqrt(), diff_sq.sqrt());
    let kx = 0.5 * (sum + diff);
    let kp_abs = 0.5 * (sum - diff);
    let kp = if p == 0.0 {
        0.0
    } else {
        kp_abs.min(kx).copysign(p)
    };
    Ok((kx, kp))
}

/// The standard-form state with local parameters `(m1, m2)` (in that slot
/// order) and global parameters `(kappa1, kappa2)`.
pub fn reconstruct_two_mode(
    m1: f64,
    m2: f64,
    kappa1: f64,
    kappa2: f64,
) -> Result<CovarianceMatrix> {
    let (kx, kp) = solve_couplings(m1, m2, kappa1, kappa2)?;
    Ok(TwoModeStandardForm { m1, m2, kx, kp }.to_covariance())
}

fn check_positive(values: &[f64]) -> Result<()> {
    if let Some(bad) = values.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "expected positive parameters, got {bad}"
        )));
    }
    Ok(())
}

/// Beam-splitter angle moving `diag(a I, b I)` to first diagonal `target`
/// (and second `a + b - target`): `sin^2 theta = (target - a) / (b - a)`.
pub fn bs_param(a: f64, b: f64, target: f64) -> Result<f64> {
    check_positive(&[a, b, target])?;
    let (lo, hi) = (a.min(b), a.max(b));
    let slack = FEASIBILITY_TOL * hi;
    if target < lo - slack || target > hi + slack {
        return Err(Error::InfeasibleRedistribution(format!(
            "target {target} lies outside [{lo}, {hi}]"
        )));
    }
    if hi - lo <= slack {
        return Ok(0.0);
    }
    let s2 = ((target - a) / (b - a)).clamp(0.0, 1.0);
    Ok(s2.sqrt().asin())
}

/// Squeezing raising both entries of `diag(a I, b I)` by `eps`:
/// `sinh^2 mu = eps / (a + b)`.
pub fn sq_param(a: f64, b: f64, eps: f64) -> Result<f64> {
    check_positive(&[a, b])?;
    if !eps.is_finite() || eps < -FEASIBILITY_TOL * (a + b) {
        return Err(Error::InfeasibleRedistribution(format!(
            "squeezing can only raise both parameters, requested {eps}"
        )));
    }
    Ok((eps.max(0.0) / (a + b)).sqrt().asinh())
}

/// The three kinds of two-mode transformation used by the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GeneratorKind {
    #[serde(rename = "BS")]
    BeamSplitter,
    #[serde(rename = "SQ")]
    Squeezer,
    #[serde(rename = "GEN")]
    General,
}

impl GeneratorKind {
    pub fn label(self) -> &'static str {
        match self {
            GeneratorKind::BeamSplitter => "BS",
            GeneratorKind::Squeezer => "SQ",
            GeneratorKind::General => "GEN",
        }
    }
}

/// A single beam splitter or squeezer that diagonalizes a balanced form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BalancedDiagonalization {
    pub kind: GeneratorKind,
    /// `theta` for a beam splitter, `mu` for a squeezer.
    pub parameter: f64,
}

impl BalancedDiagonalization {
    pub fn matrix4(&self) -> Matrix4<f64> {
        match self.kind {
            GeneratorKind::Squeezer => squeezer4(self.parameter),
            _ => beam_splitter4(self.parameter),
        }
    }

    pub fn transform(&self) -> SymplecticMatrix {
        SymplecticMatrix::embed_pair(&self.matrix4(), 0, 1, 2).expect("fixed pair")
    }
}

/// Diagonalizes a standard form with `|kx| = |kp|` by one generator `G`, in
/// the sense that `G V G^T` is diagonal.
///
/// * `kp = kx = k`: beam splitter with `tan 2 theta = 2k / (m1 - m2)`,
///   `theta` taken in `(-pi/4, pi/4]`.
/// * `kp = -kx`: squeezer with `tanh 2 mu = -2 kx / (m1 + m2)`.
pub fn diagonalize_balanced(form: &TwoModeStandardForm) -> Result<BalancedDiagonalization> {
    let TwoModeStandardForm { m1, m2, kx, kp } = *form;
    check_positive(&[m1, m2])?;
    let scale = m1.max(m2);
    if (kx.abs() - kp.abs()).abs() > FEASIBILITY_TOL * scale {
        return Err(Error::NotBalanced { kx, kp });
    }
    if kx * kp >= 0.0 {
        let k = 0.5 * (kx + kp);
        let mut theta = 0.5 * (-2.0 * k).atan2(m2 - m1);
        if theta <= -0.5 * FRAC_PI_2 {
            theta += FRAC_PI_2;
        } else if theta > 0.5 * FRAC_PI_2 {
            theta -= FRAC_PI_2;
        }
        Ok(BalancedDiagonalization {
            kind: GeneratorKind::BeamSplitter,
            parameter: theta,
        })
    } else {
        let k = 0.5 * (kx - kp);
        let t = -2.0 * k / (m1 + m2);
        if t.abs() >= 1.0 {
            return Err(Error::InvalidCovariance(format!(
                "|2k| = {} is not below m1 + m2 = {}",
                2.0 * k.abs(),
                m1 + m2
            )));
        }
        Ok(BalancedDiagonalization {
            kind: GeneratorKind::Squeezer,
            parameter: 0.5 * t.atanh(),
        })
    }
}

fn swap4() -> Matrix4<f64> {
    beam_splitter4(FRAC_PI_2)
}

/// Two-mode symplectic `S` with `S diag(a, a, b, b) S^T` having diagonal
/// blocks `t_a I` and `t_b I`, keeping the symplectic spectrum `{a, b}`.
///
/// Feasible iff, after sorting each pair, `t_lo + t_hi >= lo + hi` and
/// `t_hi - t_lo <= hi - lo`.
pub fn pair_factor(a: f64, b: f64, t_a: f64, t_b: f64) -> Result<SymplecticMatrix> {
    check_positive(&[a, b, t_a, t_b])?;
    let (lo, hi) = (a.min(b), a.max(b));
    let (t_lo, t_hi) = (t_a.min(t_b), t_a.max(t_b));
    let slack = FEASIBILITY_TOL * (hi + t_hi);
    if t_lo + t_hi < lo + hi - slack || t_hi - t_lo > hi - lo + slack {
        return Err(Error::InfeasibleRedistribution(format!(
            "({a}, {b}) cannot be redistributed to ({t_a}, {t_b})"
        )));
    }
    let target = reconstruct_two_mode(t_lo, t_hi, lo, hi).map_err(|e| match e {
        Error::IncompatibleSpectra(msg) => Error::InfeasibleRedistribution(msg),
        other => other,
    })?;
    let w = williamson(&target)?;
    let mut s: Matrix4<f64> = w.symplectic.matrix().fixed_view::<4, 4>(0, 0).into_owned();
    if a > b {
        s *= swap4().transpose();
    }
    if t_a > t_b {
        s = swap4() * s;
    }
    Ok(SymplecticMatrix::from_matrix_unchecked(
        nalgebra::DMatrix::from_column_slice(4, 4, s.as_slice()),
    ))
}

/// The two-mode standard form reached from the covariance `S diag(...) S^T`.
pub(crate) fn submatrix_covariance(m: &Matrix4<f64>) -> CovarianceMatrix {
    let mut d = nalgebra::DMatrix::from_column_slice(4, 4, m.as_slice());
    linalg::symmetrize(&mut d);
    CovarianceMatrix::new(d).expect("symmetrized 4x4")
}
