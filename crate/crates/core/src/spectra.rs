//! Symplectic spectra, Williamson factorization and the dominance relation.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs};
use crate::symplectic::{omega, CovarianceMatrix, SymplecticMatrix};

/// A list of positive spectral parameters (local `m` or global `kappa`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralVector {
    values: Vec<f64>,
    sorted: bool,
}

impl SpectralVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("spectral vector is empty".into()));
        }
        if let Some(bad) = values.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "spectral parameters must be positive and finite, got {bad}"
            )));
        }
        let sorted = values.windows(2).all(|w| w[0] <= w[1]);
        Ok(Self { values, sorted })
    }

    /// A nondecreasing copy.
    pub fn sorted(&self) -> SpectralVector {
        let mut values = self.values.clone();
        values.sort_by(f64::total_cmp);
        SpectralVector {
            values,
            sorted: true,
        }
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn product(&self) -> f64 {
        self.values.iter().product()
    }
}

/// `V^{1/2}` and the antisymmetric `V^{1/2} Omega V^{1/2}`.
fn antisymmetric_core(v: &CovarianceMatrix) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (root, _) = linalg::sqrt_and_inv_sqrt(v.matrix())?;
    let mut a = &root * omega(v.modes()) * &root;
    let n = a.nrows();
    for r in 0..n {
        a[(r, r)] = 0.0;
        for c in (r + 1)..n {
            let x = 0.5 * (a[(r, c)] - a[(c, r)]);
            a[(r, c)] = x;
            a[(c, r)] = -x;
        }
    }
    Ok((root, a))
}

/// Symplectic eigenvalues of `V`, sorted nondecreasing.
pub fn symplectic_spectrum(v: &CovarianceMatrix) -> Result<SpectralVector> {
    let (_, a) = antisymmetric_core(v)?;
    let eig = SymmetricEigen::new(a.transpose() * &a);
    let mut sq: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    sq.sort_by(f64::total_cmp);
    let values = sq
        .chunks(2)
        .map(|p| (0.5 * (p[0] + p[1])).max(0.0).sqrt())
        .collect();
    SpectralVector::new(values).map_err(|_| {
        Error::InvalidCovariance("matrix has a vanishing symplectic eigenvalue".into())
    })
}

/// `V = S diag(kappa_1, kappa_1, ..., kappa_n, kappa_n) S^T`.
#[derive(Debug, Clone)]
pub struct WilliamsonFactorization {
    pub symplectic: SymplecticMatrix,
    /// Sorted nondecreasing.
    pub kappa: SpectralVector,
}

impl WilliamsonFactorization {
    pub fn reconstruct(&self) -> CovarianceMatrix {
        CovarianceMatrix::thermal(self.kappa.values())
            .and_then(|d| d.congruence(&self.symplectic))
            .expect("dimensions agree by construction")
    }
}

/// Williamson normal form of a positive-definite covariance matrix.
///
/// The antisymmetric matrix `A = V^{1/2} Omega V^{1/2}` is brought to real
/// canonical form `O^T A O = blockdiag(kappa_j [[0, 1], [-1, 0]])` by an
/// orthogonal `O`; then `S = V^{1/2} O D^{-1/2}`. Each canonical pair is
/// built as `(u, -A u / kappa)` which fixes the block orientation.
pub fn williamson(v: &CovarianceMatrix) -> Result<WilliamsonFactorization> {
    let n = v.modes();
    let dim = 2 * n;
    let (root, a) = antisymmetric_core(v)?;
    let eig = SymmetricEigen::new(a.transpose() * &a);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));

    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let mut pairs: Vec<(f64, DVector<f64>, DVector<f64>)> = Vec::with_capacity(n);
    let mut used = vec![false; dim];
    let project = |x: &DVector<f64>, basis: &[DVector<f64>]| {
        let mut r = x.clone();
        for _ in 0..2 {
            for b in basis {
                let c = b.dot(&r);
                r.axpy(-c, b, 1.0);
            }
        }
        r
    };

    while pairs.len() < n {
        // The residual of an eigenvector of A^T A against the invariant span
        // of the chosen pairs is again an eigenvector; take the best-conditioned one.
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for &idx in &order {
            if used[idx] {
                continue;
            }
            let r = project(&eig.eigenvectors.column(idx).into_owned(), &basis);
            let norm = r.norm();
            if best.as_ref().is_none_or(|b| norm > b.2 + 1e-3) {
                best = Some((idx, r, norm));
            }
        }
        let (idx, r, norm) = best.ok_or_else(|| {
            Error::NumericalFailure("ran out of eigenvectors building canonical pairs".into())
        })?;
        if norm < 1e-6 {
            return Err(Error::NumericalFailure(
                "eigenvector basis lost orthogonality".into(),
            ));
        }
        used[idx] = true;
        let u = r / norm;
        let au = &a * &u;
        let kappa = au.norm();
        if !(kappa > 0.0) {
            return Err(Error::InvalidCovariance(
                "vanishing symplectic eigenvalue".into(),
            ));
        }
        let mut w = project(&(-au / kappa), &basis);
        let cu = u.dot(&w);
        w.axpy(-cu, &u, 1.0);
        let wn = w.norm();
        if wn < 0.5 {
            return Err(Error::NumericalFailure(
                "degenerate canonical partner".into(),
            ));
        }
        w /= wn;
        basis.push(u.clone());
        basis.push(w.clone());
        pairs.push((kappa, u, w));
    }

    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut s = DMatrix::zeros(dim, dim);
    let mut kappa = Vec::with_capacity(n);
    for (j, (k, u, w)) in pairs.into_iter().enumerate() {
        // Right-handedness: u^T A w must be +kappa.
        let (u, w) = if u.dot(&(&a * &w)) >= 0.0 {
            (u, w)
        } else {
            (w, u)
        };
        let scale = 1.0 / k.sqrt();
        s.set_column(2 * j, &(&root * u * scale));
        s.set_column(2 * j + 1, &(&root * w * scale));
        kappa.push(k);
    }
    let symplectic = SymplecticMatrix::from_matrix_unchecked(s);
    let residual = symplectic.residual();
    let tol = 1e-7 * max_abs(symplectic.matrix()).powi(2).max(1.0);
    if !(residual <= tol) {
        return Err(Error::NumericalFailure(format!(
            "Williamson factor is not symplectic (residual {residual:e})"
        )));
    }
    Ok(WilliamsonFactorization {
        symplectic,
        kappa: SpectralVector::new(kappa)?,
    })
}

/// Slack record of the dominance inequalities between sorted `kappa` and `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceCertificate {
    pub kappa_sorted: SpectralVector,
    pub m_sorted: SpectralVector,
    /// `sum_{j<=k} m_j - sum_{j<=k} kappa_j` for `k = 1..n`.
    pub partial_sum_slacks: Vec<f64>,
    /// `(kappa_n - sum_{j<n} kappa_j) - (m_n - sum_{j<n} m_j)`.
    pub tail_slack: f64,
    pub compatible: bool,
}

impl DominanceCertificate {
    pub fn min_slack(&self) -> f64 {
        self.partial_sum_slacks
            .iter()
            .copied()
            .fold(self.tail_slack, f64::min)
    }

    /// Compatibility with every slack allowed to dip to `-tol`.
    pub fn compatible_within(&self, tol: f64) -> bool {
        self.min_slack() >= -tol
    }
}

/// Whether `kappa` dominates `m`: after sorting both nondecreasing, every
/// partial sum of `m` is at least that of `kappa`, and
/// `m_n - sum_{j<n} m_j <= kappa_n - sum_{j<n} kappa_j`.
///
/// Physicality (`kappa_1 >= 1`) is not part of this test.
pub fn dominates(kappa: &SpectralVector, m: &SpectralVector) -> Result<DominanceCertificate> {
    if kappa.len() != m.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} global vs {} local parameters",
            kappa.len(),
            m.len()
        )));
    }
    let ks = kappa.sorted();
    let ms = m.sorted();
    let n = ks.len();
    let mut slacks = Vec::with_capacity(n);
    let (mut sk, mut sm) = (0.0, 0.0);
    for (k, mm) in ks.values().iter().zip(ms.values()) {
        sk += k;
        sm += mm;
        slacks.push(sm - sk);
    }
    let head_k: f64 = ks.values()[..n - 1].iter().sum();
    let head_m: f64 = ms.values()[..n - 1].iter().sum();
    let tail_slack = (ks.values()[n - 1] - head_k) - (ms.values()[n - 1] - head_m);
    let compatible = tail_slack >= 0.0 && slacks.iter().all(|&s| s >= 0.0);
    Ok(DominanceCertificate {
        kappa_sorted: ks,
        m_sorted: ms,
        partial_sum_slacks: slacks,
        tail_slack,
        compatible,
    })
}

/// One eigenvalue of a product of thermal states with its occupation numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalEigenvalue {
    pub value: f64,
    pub occupations: Vec<usize>,
}

/// `xi(p) = (p - 1) / (p + 1)`, so `p = 1` is the vacuum.
pub fn thermal_ratio(p: f64) -> f64 {
    (p - 1.0) / (p + 1.0)
}

#[derive(Debug, PartialEq)]
struct Candidate {
    value: f64,
    occupations: Vec<usize>,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| other.occupations.cmp(&self.occupations))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The `count` largest eigenvalues of `prod_j (1 - xi_j) xi_j^{k_j}`, in
/// descending order with ties broken by lexicographic occupation index.
pub fn thermal_eigenvalues(
    params: &SpectralVector,
    count: usize,
) -> Result<Vec<ThermalEigenvalue>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    if let Some(bad) = params.values().iter().find(|&&p| p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "thermal parameter {bad} is below the vacuum value 1"
        )));
    }
    let xi: Vec<f64> = params.values().iter().map(|&p| thermal_ratio(p)).collect();
    let value_of = |occ: &[usize]| -> f64 {
        xi.iter()
            .zip(occ)
            .map(|(&x, &k)| (1.0 - x) * x.powi(k as i32))
            .product()
    };

    let start = vec![0; xi.len()];
    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    seen.insert(start.clone());
    heap.push(Candidate {
        value: value_of(&start),
        occupations: start,
    });
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let Candidate { value, occupations } = heap.pop().expect("frontier never empties");
        for j in 0..occupations.len() {
            let mut next = occupations.clone();
            next[j] += 1;
            if seen.insert(next.clone()) {
                heap.push(Candidate {
                    value: value_of(&next),
                    occupations: next,
                });
            }
        }
        out.push(ThermalEigenvalue { value, occupations });
    }
    Ok(out)
}
