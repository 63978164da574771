//! The two constructive procedures:
//!
//! * [`jacobi_decompose`] diagonalizes a covariance matrix by pairwise
//!   two-mode Williamson steps. The product of local parameters (the
//!   "profit") strictly decreases until it reaches `prod kappa_j`.
//! * [`synthesize`] builds, from sorted `kappa` dominating sorted `m`, a
//!   symplectic `S` such that `S diag(kappa) S^T` has local parameters `m`,
//!   using at most `n - 1` two-mode transformations in four stages:
//!   beam splitters between the first modes, squeezers with the last mode,
//!   at most one general two-mode step, then beam splitters with the last mode.
//!
//! Mode indices are zero-based here; the CLI reports them one-based.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, pair_congruence, pair_submatrix, symplectic_inverse4};
use crate::spectra::{dominates, symplectic_spectrum, williamson, SpectralVector};
use crate::symplectic::{
    beam_splitter4, local_normal_form, squeezer4, CovarianceMatrix, SymplecticMatrix,
};
use crate::two_mode::{
    bs_param, pair_factor, sq_param, standard_form, submatrix_covariance, GeneratorKind,
    TwoModeStandardForm,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiStep {
    pub pair: (usize, usize),
    /// Max-norm of the pivot off-diagonal block before the step.
    pub off_block_norm: f64,
    /// `prod_j sqrt(det V_jj)` after the step.
    pub profit_after: f64,
    /// Local parameters of every mode after the step.
    pub diag_after: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct JacobiTrace {
    pub steps: Vec<JacobiStep>,
    pub sweeps: usize,
    pub converged: bool,
    /// Profit of the input after local normalization.
    pub initial_profit: f64,
}

impl JacobiTrace {
    /// The profit sequence, starting with the initial value.
    pub fn profits(&self) -> Vec<f64> {
        std::iter::once(self.initial_profit)
            .chain(self.steps.iter().map(|s| s.profit_after))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct JacobiOutcome {
    /// `S V S^T` is diagonal.
    pub symplectic: SymplecticMatrix,
    /// Sorted global parameters.
    pub kappa: SpectralVector,
    /// Diagonal parameters in mode order.
    pub diagonal: Vec<f64>,
    pub trace: JacobiTrace,
}

fn local_params(m: &DMatrix<f64>, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| linalg::block(m, j, j).determinant().max(0.0).sqrt())
        .collect()
}

fn profit(m: &DMatrix<f64>, n: usize) -> f64 {
    local_params(m, n).iter().product()
}

/// Pairwise symplectic diagonalization.
///
/// Sweeps cyclically over mode pairs; each pivot with an off-diagonal block
/// above `tol` (max-norm) is rotated to diagonal coupling by local
/// rotations and then decoupled by the inverse of its two-mode Williamson
/// factor. Stops when every off-diagonal block is at most `tol`.
pub fn jacobi_decompose(
    v: &CovarianceMatrix,
    tol: f64,
    max_sweeps: usize,
) -> Result<JacobiOutcome> {
    let n = v.modes();
    let spectrum = symplectic_spectrum(v)?;
    if spectrum.values()[0] < 1.0 - 1e-9 {
        return Err(Error::InvalidCovariance(format!(
            "state is unphysical: smallest symplectic eigenvalue {}",
            spectrum.values()[0]
        )));
    }
    let lnf = local_normal_form(v)?;
    let mut s = lnf.transform();
    let mut w = lnf.covariance.into_matrix();
    let mut trace = JacobiTrace {
        initial_profit: profit(&w, n),
        ..JacobiTrace::default()
    };

    let off_max = |w: &DMatrix<f64>| {
        let mut best = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                best = best.max(linalg::block(w, i, j).abs().max());
            }
        }
        best
    };

    while off_max(&w) > tol {
        if trace.sweeps >= max_sweeps {
            return Err(Error::NonConvergence {
                sweeps: trace.sweeps,
                trace: Box::new(trace),
            });
        }
        trace.sweeps += 1;
        for j in 0..n {
            for k in (j + 1)..n {
                let norm = linalg::block(&w, j, k).abs().max();
                if norm <= tol {
                    continue;
                }
                let t = pivot_transform(&w, j, k)?;
                pair_congruence(&mut w, &t.matrix, j, k);
                s.apply_pair_left(&t.matrix, j, k);
                linalg::set_block(&mut w, j, k, &Matrix2::zeros());
                linalg::set_block(&mut w, k, j, &Matrix2::zeros());
                linalg::set_block(&mut w, j, j, &(Matrix2::identity() * t.kappa[0]));
                linalg::set_block(&mut w, k, k, &(Matrix2::identity() * t.kappa[1]));
                trace.steps.push(JacobiStep {
                    pair: (j, k),
                    off_block_norm: norm,
                    profit_after: profit(&w, n),
                    diag_after: local_params(&w, n),
                });
            }
        }
    }
    trace.converged = true;
    let diagonal: Vec<f64> = (0..n)
        .map(|j| 0.5 * (w[(2 * j, 2 * j)] + w[(2 * j + 1, 2 * j + 1)]))
        .collect();
    Ok(JacobiOutcome {
        symplectic: s,
        kappa: SpectralVector::new(diagonal.clone())?.sorted(),
        diagonal,
        trace,
    })
}

struct PivotTransform {
    matrix: Matrix4<f64>,
    kappa: [f64; 2],
}

/// Local rotations to standard form followed by the inverse two-mode
/// Williamson factor, on the `(j, k)` submatrix.
fn pivot_transform(w: &DMatrix<f64>, j: usize, k: usize) -> Result<PivotTransform> {
    let sub = submatrix_covariance(&pair_submatrix(w, j, k));
    let sf = standard_form(&sub)?;
    let mut locals = Matrix4::zeros();
    locals.fixed_view_mut::<2, 2>(0, 0).copy_from(&sf.locals[0]);
    locals.fixed_view_mut::<2, 2>(2, 2).copy_from(&sf.locals[1]);
    let (m_j, m_k) = if sf.swapped {
        (sf.form.m2, sf.form.m1)
    } else {
        (sf.form.m1, sf.form.m2)
    };
    let slot_form = TwoModeStandardForm {
        m1: m_j,
        m2: m_k,
        ..sf.form
    };
    let wf = williamson(&slot_form.to_covariance())?;
    let sw: Matrix4<f64> = wf.symplectic.matrix().fixed_view::<4, 4>(0, 0).into_owned();
    Ok(PivotTransform {
        matrix: symplectic_inverse4(&sw) * locals,
        kappa: [wf.kappa.values()[0], wf.kappa.values()[1]],
    })
}

/// The parameter of one synthesis step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepParameter {
    /// Beam-splitter angle.
    Theta(f64),
    /// Two-mode squeezing.
    Mu(f64),
    /// General two-mode step: the two target diagonal values.
    Targets([f64; 2]),
}

impl Serialize for StepParameter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            StepParameter::Theta(x) | StepParameter::Mu(x) => serializer.serialize_f64(*x),
            StepParameter::Targets(t) => t.serialize(serializer),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthesisStep {
    /// 1 to 4.
    pub stage: u8,
    pub kind: GeneratorKind,
    pub pair: (usize, usize),
    pub parameter: StepParameter,
    /// Amount the first mode of the pair is raised by.
    pub epsilon: f64,
    /// Diagonal (local) parameters of every mode after the step.
    pub diag_after: Vec<f64>,
    /// True when the pair was found correlated and the step was recomputed
    /// from its actual submatrix.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthesisTrace {
    pub steps: Vec<SynthesisStep>,
    pub stage_counts: [usize; 4],
    /// Modes finalized by the first stage.
    pub ell: usize,
    /// Squeezers applied in the second stage.
    pub r: usize,
    /// `sum m - sum kappa`.
    pub delta_initial: f64,
    pub initial_diag: Vec<f64>,
}

impl SynthesisTrace {
    /// The diagonal chain `kappa, m^(1), ..., m`.
    pub fn chain(&self) -> Vec<Vec<f64>> {
        std::iter::once(self.initial_diag.clone())
            .chain(self.steps.iter().map(|s| s.diag_after.clone()))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SynthesisOutcome {
    pub symplectic: SymplecticMatrix,
    /// `S diag(kappa pairs) S^T`.
    pub covariance: CovarianceMatrix,
    /// Sorted global parameters used as the starting diagonal.
    pub kappa: SpectralVector,
    /// Sorted target local parameters, in the mode order of `covariance`.
    pub m: SpectralVector,
    pub trace: SynthesisTrace,
}

struct Synthesis {
    n: usize,
    v: DMatrix<f64>,
    s: SymplecticMatrix,
    d: Vec<f64>,
    tol: f64,
    trace: SynthesisTrace,
}

impl Synthesis {
    /// Largest violation of "pair uncorrelated, both blocks scalar".
    fn structure_defect(&self, i: usize, j: usize) -> f64 {
        let cross = linalg::block(&self.v, i, j).abs().max();
        cross.max(self.diagonal_defect(i, j))
    }

    /// Deviation of the two diagonal blocks from their recorded values.
    fn diagonal_defect(&self, i: usize, j: usize) -> f64 {
        let bi = (linalg::block(&self.v, i, i) - Matrix2::identity() * self.d[i])
            .abs()
            .max();
        let bj = (linalg::block(&self.v, j, j) - Matrix2::identity() * self.d[j])
            .abs()
            .max();
        bi.max(bj)
    }

    #[allow(clippy::too_many_arguments)]
    fn step(
        &mut self,
        stage: u8,
        kind: GeneratorKind,
        (i, j): (usize, usize),
        t: Matrix4<f64>,
        parameter: StepParameter,
        epsilon: f64,
        targets: [f64; 2],
    ) -> Result<()> {
        let defect = self.structure_defect(i, j);
        let (t, kind, parameter, fallback) = if defect <= self.tol {
            (t, kind, parameter, false)
        } else {
            let t = self.recompute_pair(i, j, targets, defect)?;
            (
                t,
                GeneratorKind::General,
                StepParameter::Targets(targets),
                true,
            )
        };
        pair_congruence(&mut self.v, &t, i, j);
        self.s.apply_pair_left(&t, i, j);
        self.d[i] = targets[0];
        self.d[j] = targets[1];
        let after = self.diagonal_defect(i, j);
        if after > self.tol {
            return Err(Error::NumericalFailure(format!(
                "step on modes ({}, {}) missed its targets by {after:e}",
                i + 1,
                j + 1
            )));
        }
        self.trace.stage_counts[usize::from(stage) - 1] += 1;
        self.trace.steps.push(SynthesisStep {
            stage,
            kind,
            pair: (i, j),
            parameter,
            epsilon,
            diag_after: self.d.clone(),
            fallback,
        });
        Ok(())
    }

    /// Two-mode Williamson of the pair's actual submatrix followed by a
    /// general redistribution to the targets.
    fn recompute_pair(
        &self,
        i: usize,
        j: usize,
        targets: [f64; 2],
        defect: f64,
    ) -> Result<Matrix4<f64>> {
        let sub = submatrix_covariance(&pair_submatrix(&self.v, i, j));
        let wf = williamson(&sub)?;
        let (lo, hi) = (wf.kappa.values()[0], wf.kappa.values()[1]);
        let pf =
            pair_factor(lo, hi, targets[0], targets[1]).map_err(|e| Error::CorrelatedPair {
                i: i + 1,
                j: j + 1,
                detail: format!("structure defect {defect:e}; pair cannot be recovered: {e}"),
            })?;
        let sw: Matrix4<f64> = wf.symplectic.matrix().fixed_view::<4, 4>(0, 0).into_owned();
        let pf: Matrix4<f64> = pf.matrix().fixed_view::<4, 4>(0, 0).into_owned();
        Ok(pf * symplectic_inverse4(&sw))
    }
}

/// Builds a state with sorted global parameters `kappa` and sorted local
/// parameters `m`.
///
/// Both inputs are sorted nondecreasing first; mode `j` of the returned
/// covariance carries the `j`-th smallest target `m_j`. `tol` is relative to
/// `1 + max(kappa_n, m_n)` and governs structural checks and the final
/// residuals; the dominance pre-check allows slack `1e-9 (1 + |m|_1)`.
pub fn synthesize(
    kappa: &SpectralVector,
    m: &SpectralVector,
    tol: f64,
) -> Result<SynthesisOutcome> {
    if kappa.len() != m.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} global vs {} local parameters",
            kappa.len(),
            m.len()
        )));
    }
    let kappa = kappa.sorted();
    let m = m.sorted();
    let n = kappa.len();
    let k = kappa.values();
    let mv = m.values();
    if k[0] < 1.0 - tol {
        return Err(Error::UnphysicalGlobalSpectrum(k[0]));
    }
    let cert = dominates(&kappa, &m)?;
    let l1: f64 = mv.iter().sum();
    if !cert.compatible_within(1e-9 * (1.0 + l1)) {
        return Err(Error::IncompatibleSpectra(format!(
            "global parameters do not dominate local ones (min slack {})",
            cert.min_slack()
        )));
    }

    let scale = 1.0 + k[n - 1].max(mv[n - 1]);
    let tol_abs = tol * scale;
    let mut st = Synthesis {
        n,
        v: CovarianceMatrix::thermal(k)?.into_matrix(),
        s: SymplecticMatrix::identity(n),
        d: k.to_vec(),
        tol: tol_abs,
        trace: SynthesisTrace {
            steps: Vec::new(),
            stage_counts: [0; 4],
            ell: 0,
            r: 0,
            delta_initial: l1 - k.iter().sum::<f64>(),
            initial_diag: k.to_vec(),
        },
    };
    let last = n - 1;

    // Stage 1: beam splitters among the first n - 1 modes.
    let mut i = 0;
    while i < last {
        let eps = mv[i] - st.d[i];
        if eps < -tol_abs {
            return Err(Error::NumericalFailure(format!(
                "mode {} already exceeds its target by {}",
                i + 1,
                -eps
            )));
        }
        if eps <= tol_abs {
            i += 1;
            continue;
        }
        let Some(j) = ((i + 1)..last).find(|&j| st.d[j] >= mv[i] - tol_abs) else {
            break;
        };
        let theta = bs_param(st.d[i], st.d[j], mv[i])?;
        let targets = [mv[i], st.d[j] - eps];
        st.step(
            1,
            GeneratorKind::BeamSplitter,
            (i, j),
            beam_splitter4(theta),
            StepParameter::Theta(theta),
            eps,
            targets,
        )?;
        i += 1;
    }
    st.trace.ell = i;

    // Stage 2: squeezers with the last mode while the excess allows.
    let mut delta: f64 = mv.iter().sum::<f64>() - st.d.iter().sum::<f64>();
    if delta > tol_abs {
        while i < last {
            let eps = mv[i] - st.d[i];
            if eps <= tol_abs {
                i += 1;
                continue;
            }
            if delta + tol_abs < 2.0 * eps {
                break;
            }
            let mu = sq_param(st.d[i], st.d[last], eps)?;
            let targets = [mv[i], st.d[last] + eps];
            st.step(
                2,
                GeneratorKind::Squeezer,
                (i, last),
                squeezer4(mu),
                StepParameter::Mu(mu),
                eps,
                targets,
            )?;
            st.trace.r += 1;
            delta -= 2.0 * eps;
            i += 1;
            if delta <= tol_abs {
                break;
            }
        }
    }

    // Stage 3: one general two-mode step absorbs what is left of the excess.
    if delta > tol_abs {
        while i < last && mv[i] - st.d[i] <= tol_abs {
            i += 1;
        }
        if i >= last {
            return Err(Error::NumericalFailure(format!(
                "excess {delta} remains but no mode is left to absorb it"
            )));
        }
        let eps = mv[i] - st.d[i];
        let targets = [mv[i], st.d[last] + delta - eps];
        let pf = pair_factor(st.d[i], st.d[last], targets[0], targets[1])?;
        let t: Matrix4<f64> = pf.matrix().fixed_view::<4, 4>(0, 0).into_owned();
        st.step(
            3,
            GeneratorKind::General,
            (i, last),
            t,
            StepParameter::Targets(targets),
            eps,
            targets,
        )?;
        i += 1;
    }

    // Stage 4: beam splitters with the last mode.
    while i < last {
        let eps = mv[i] - st.d[i];
        if eps.abs() <= tol_abs {
            i += 1;
            continue;
        }
        let theta = bs_param(st.d[i], st.d[last], mv[i])?;
        let targets = [mv[i], st.d[last] - eps];
        st.step(
            4,
            GeneratorKind::BeamSplitter,
            (i, last),
            beam_splitter4(theta),
            StepParameter::Theta(theta),
            eps,
            targets,
        )?;
        i += 1;
    }

    if (st.d[last] - mv[last]).abs() > tol_abs {
        return Err(Error::NumericalFailure(format!(
            "last mode ends at {} instead of {}",
            st.d[last], mv[last]
        )));
    }
    debug_assert!(st.trace.steps.len() < st.n.max(1));

    let mut covariance = st.v;
    linalg::symmetrize(&mut covariance);
    Ok(SynthesisOutcome {
        symplectic: st.s,
        covariance: CovarianceMatrix::new(covariance)?,
        kappa,
        m,
        trace: st.trace,
    })
}

/// Residuals of a claimed realization `S diag(kappa) S^T` of local parameters `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    /// `max |S Omega S^T - Omega|`.
    pub symplectic_residual: f64,
    /// Largest deviation of the diagonal blocks from `m_j I`, matching `m`
    /// as a multiset.
    pub diagonal_residual: f64,
    /// Largest deviation of the symplectic spectrum from sorted `kappa`.
    pub spectrum_residual: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Checks `S`, `kappa` (in the order placed on the modes) and `m`.
pub fn verify(
    s: &SymplecticMatrix,
    kappa: &SpectralVector,
    m: &SpectralVector,
    tol: f64,
) -> Result<VerifyReport> {
    let n = s.modes();
    if kappa.len() != n || m.len() != n {
        return Err(Error::InvalidArgument(format!(
            "dimensions disagree: S acts on {n} modes, kappa has {}, m has {}",
            kappa.len(),
            m.len()
        )));
    }
    let symplectic_residual = s.residual();
    let v = CovarianceMatrix::thermal(kappa.values())?.congruence(s)?;

    let mut scalars = Vec::with_capacity(n);
    let mut shape = 0.0_f64;
    for j in 0..n {
        let b = v.block(j, j);
        let c = 0.5 * (b[(0, 0)] + b[(1, 1)]);
        shape = shape.max((b - Matrix2::identity() * c).abs().max());
        scalars.push(c);
    }
    scalars.sort_by(f64::total_cmp);
    let targets = m.sorted();
    let matching = scalars
        .iter()
        .zip(targets.values())
        .fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
    let diagonal_residual = shape.max(matching);

    let spectrum_residual = match symplectic_spectrum(&v) {
        Ok(sp) => sp
            .values()
            .iter()
            .zip(kappa.sorted().values())
            .fold(0.0_f64, |a, (x, y)| a.max((x - y).abs())),
        Err(_) => f64::INFINITY,
    };
    let passed = symplectic_residual <= tol && diagonal_residual <= tol && spectrum_residual <= tol;
    Ok(VerifyReport {
        symplectic_residual,
        diagonal_residual,
        spectrum_residual,
        tol,
        passed,
    })
}
