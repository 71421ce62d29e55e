//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// First and last jitter added to the diagonal before giving up on a
/// factorization.
pub const JITTER_START: f64 = 1e-12;
pub const JITTER_MAX: f64 = 1e-6;

pub(crate) fn max_abs_diag(m: &Matrix) -> f64 {
    m.diagonal().iter().fold(0.0f64, |a, &x| a.max(x.abs()))
}

/// Fails unless `m` is square and symmetric to `tol` (relative to its largest
/// diagonal entry, absolute below 1).
pub fn check_symmetric(m: &Matrix, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::domain(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    let scale = max_abs_diag(m).max(1.0);
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            if (m[(i, j)] - m[(j, i)]).abs() > tol * scale {
                return Err(Error::numerical(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Averages `m` with its transpose.
pub fn symmetrize(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

/// Lower-triangular factor `L` with `L Lᵀ = m` for a symmetric non-negative
/// definite `m`. Zero pivots produce zero columns, so singular (even zero)
/// matrices factor exactly. Negative pivots trigger jitter escalation.
pub fn psd_factor(m: &Matrix) -> Result<Matrix> {
    if let Some(l) = psd_cholesky(m) {
        return Ok(l);
    }
    let n = m.nrows();
    let mut jitter = JITTER_START;
    while jitter <= JITTER_MAX * 1.000001 {
        let scale = max_abs_diag(m).max(1.0);
        let shifted = m + Matrix::identity(n, n) * (jitter * scale);
        if let Some(l) = psd_cholesky(&shifted) {
            return Ok(l);
        }
        jitter *= 10.0;
    }
    Err(Error::numerical(
        "matrix is not non-negative definite after jitter escalation",
    ))
}

fn psd_cholesky(a: &Matrix) -> Option<Matrix> {
    let n = a.nrows();
    let scale = max_abs_diag(a).max(f64::MIN_POSITIVE);
    let tol = 1e-13 * scale;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d > tol {
            let ljj = d.sqrt();
            l[(j, j)] = ljj;
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / ljj;
            }
        } else if d >= -tol {
            // Zero pivot: the rest of the column must vanish too.
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                if s.abs() > 1e-7 * scale {
                    return None;
                }
            }
        } else {
            return None;
        }
    }
    Some(l)
}

/// Cholesky decomposition of a symmetric positive-definite matrix with jitter
/// escalation.
pub fn spd_cholesky(m: &Matrix) -> Result<Cholesky<f64, Dyn>> {
    if m.nrows() == 0 {
        return Ok(Cholesky::new(Matrix::zeros(0, 0)).expect("empty matrix"));
    }
    if let Some(c) = Cholesky::new(m.clone()) {
        return Ok(c);
    }
    let n = m.nrows();
    let scale = max_abs_diag(m).max(1.0);
    let mut jitter = JITTER_START;
    while jitter <= JITTER_MAX * 1.000001 {
        if let Some(c) = Cholesky::new(m + Matrix::identity(n, n) * (jitter * scale)) {
            return Ok(c);
        }
        jitter *= 10.0;
    }
    Err(Error::numerical("matrix is not positive definite"))
}

/// Cholesky without jitter; near-singular matrices (relative pivot below
/// 1e-13) are rejected.
pub fn strict_cholesky(m: &Matrix) -> Result<Cholesky<f64, Dyn>> {
    let scale = max_abs_diag(m);
    let chol = Cholesky::new(m.clone())
        .ok_or_else(|| Error::numerical("conditioning matrix is not positive definite"))?;
    let min_pivot = chol.l_dirty().diagonal().iter().fold(f64::INFINITY, |a, &x| a.min(x * x));
    if !(min_pivot > 1e-13 * scale) {
        return Err(Error::numerical("conditioning matrix is singular"));
    }
    Ok(chol)
}

pub fn spd_inverse(m: &Matrix) -> Result<Matrix> {
    let inv = spd_cholesky(m)?.inverse();
    Ok(symmetrize(&inv))
}

/// `ln |m|` of a symmetric positive-definite matrix.
pub fn spd_log_det(m: &Matrix) -> Result<f64> {
    let c = spd_cholesky(m)?;
    Ok(2.0 * c.l().diagonal().iter().map(|x| x.ln()).sum::<f64>())
}

pub fn submatrix(m: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
    Matrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn subvector(v: &Vector, idx: &[usize]) -> Vector {
    Vector::from_fn(idx.len(), |i, _| v[idx[i]])
}

/// Gaussian conditioning of the `target` coordinates on the `given` ones for a
/// covariance `cov`: the regression matrix `K = Σ_tg Σ_gg⁻¹` and the Schur
/// complement `Σ_tt − K Σ_gt`.
#[derive(Debug, Clone)]
pub struct Conditioner {
    pub target: Vec<usize>,
    pub given: Vec<usize>,
    pub gain: Matrix,
    pub cov: Matrix,
}

impl Conditioner {
    pub fn new(cov: &Matrix, target: &[usize], given: &[usize]) -> Result<Self> {
        let s_tt = submatrix(cov, target, target);
        if given.is_empty() {
            return Ok(Conditioner {
                target: target.to_vec(),
                given: Vec::new(),
                gain: Matrix::zeros(target.len(), 0),
                cov: s_tt,
            });
        }
        let s_tg = submatrix(cov, target, given);
        let s_gg = submatrix(cov, given, given);
        let chol = strict_cholesky(&s_gg)?;
        // K = Σ_tg Σ_gg⁻¹  ⇔  Σ_gg Kᵀ = Σ_gt
        let gain = chol.solve(&s_tg.transpose()).transpose();
        let cond = symmetrize(&(s_tt - &gain * s_tg.transpose()));
        Ok(Conditioner {
            target: target.to_vec(),
            given: given.to_vec(),
            gain,
            cov: cond,
        })
    }

    /// Conditional mean of the target block, given the full mean vector and a
    /// full-length vector holding the conditioning values.
    pub fn mean(&self, mean: &Vector, values: &Vector) -> Vector {
        let mut out = subvector(mean, &self.target);
        if !self.given.is_empty() {
            let diff = Vector::from_fn(self.given.len(), |i, _| {
                values[self.given[i]] - mean[self.given[i]]
            });
            out += &self.gain * diff;
        }
        out
    }
}

/// Indices `0..n` not contained in `exclude`.
pub fn complement(n: usize, exclude: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !exclude.contains(i)).collect()
}
