use crate::error::{Error, Result};
use crate::linalg::{check_symmetric, psd_factor, submatrix, subvector, Matrix, Vector};

/// Diagonal tolerance for the identification constraint `[Σ]_{w_i2, w_i2} = 1`.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// Parameters `(μ, Σ, λ)` of a `(p, q)`-variate JPSN.
///
/// `μ` and `Σ` are ordered as `(w_11, w_12, …, w_p1, w_p2, y_1, …, y_q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JpsnParams {
    p: usize,
    q: usize,
    pub mu: Vector,
    pub sigma: Matrix,
    pub lambda: Vector,
    constrained: bool,
}

impl JpsnParams {
    /// Validates dimensions, symmetry and non-negative definiteness.
    pub fn new(p: usize, q: usize, mu: Vector, sigma: Matrix, lambda: Vector) -> Result<Self> {
        let n = 2 * p + q;
        if p + q == 0 {
            return Err(Error::domain("JPSN needs p + q >= 1"));
        }
        if mu.len() != n || sigma.nrows() != n || sigma.ncols() != n || lambda.len() != q {
            return Err(Error::domain(format!(
                "JPSN({p}, {q}) needs mu of length {n}, sigma {n}x{n} and lambda of length {q}"
            )));
        }
        check_symmetric(&sigma, 1e-10)?;
        psd_factor(&sigma)?;
        Ok(JpsnParams {
            p,
            q,
            mu,
            sigma,
            lambda,
            constrained: false,
        })
    }

    /// Like [`JpsnParams::new`] but also requires the identification
    /// constraint and marks the parameters as constrained.
    pub fn new_constrained(
        p: usize,
        q: usize,
        mu: Vector,
        sigma: Matrix,
        lambda: Vector,
    ) -> Result<Self> {
        let mut out = Self::new(p, q, mu, sigma, lambda)?;
        if !out.satisfies_constraint() {
            return Err(Error::domain(
                "constrained parameters need unit variance on every second w coordinate",
            ));
        }
        out.constrained = true;
        Ok(out)
    }

    pub(crate) fn from_parts_unchecked(
        p: usize,
        q: usize,
        mu: Vector,
        sigma: Matrix,
        lambda: Vector,
        constrained: bool,
    ) -> Self {
        JpsnParams {
            p,
            q,
            mu,
            sigma,
            lambda,
            constrained,
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `2p + q`
    pub fn dim(&self) -> usize {
        2 * self.p + self.q
    }

    pub fn is_constrained(&self) -> bool {
        self.constrained
    }

    pub fn satisfies_constraint(&self) -> bool {
        (0..self.p).all(|i| (self.sigma[(2 * i + 1, 2 * i + 1)] - 1.0).abs() < CONSTRAINT_TOL)
    }

    /// Index of `w_{i,j}` (`j` in {0, 1}) in `μ` and `Σ`.
    pub fn w_index(&self, i: usize, j: usize) -> usize {
        2 * i + j
    }

    pub fn y_index(&self, j: usize) -> usize {
        2 * self.p + j
    }

    pub fn w_indices(&self) -> Vec<usize> {
        (0..2 * self.p).collect()
    }

    pub fn y_indices(&self) -> Vec<usize> {
        (2 * self.p..self.dim()).collect()
    }

    pub fn mu_w(&self) -> Vector {
        subvector(&self.mu, &self.w_indices())
    }

    pub fn mu_y(&self) -> Vector {
        subvector(&self.mu, &self.y_indices())
    }

    pub fn sigma_w(&self) -> Matrix {
        let w = self.w_indices();
        submatrix(&self.sigma, &w, &w)
    }

    pub fn sigma_wy(&self) -> Matrix {
        submatrix(&self.sigma, &self.w_indices(), &self.y_indices())
    }

    pub fn sigma_y(&self) -> Matrix {
        let y = self.y_indices();
        submatrix(&self.sigma, &y, &y)
    }

    /// Parameters of the JPSN obtained by keeping only the listed angles and
    /// linear variables.
    pub fn marginal(&self, angles: &[usize], linears: &[usize]) -> Result<JpsnParams> {
        if angles.iter().any(|&i| i >= self.p) || linears.iter().any(|&j| j >= self.q) {
            return Err(Error::domain("marginal index out of range"));
        }
        let mut idx: Vec<usize> = angles.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
        idx.extend(linears.iter().map(|&j| self.y_index(j)));
        Ok(JpsnParams {
            p: angles.len(),
            q: linears.len(),
            mu: subvector(&self.mu, &idx),
            sigma: submatrix(&self.sigma, &idx, &idx),
            lambda: Vector::from_iterator(linears.len(), linears.iter().map(|&j| self.lambda[j])),
            constrained: self.constrained,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_checks() {
        let ok = JpsnParams::new(1, 1, Vector::zeros(3), Matrix::identity(3, 3), Vector::zeros(1));
        assert!(ok.is_ok());
        let bad = JpsnParams::new(1, 1, Vector::zeros(2), Matrix::identity(3, 3), Vector::zeros(1));
        assert!(matches!(bad, Err(Error::Domain(_))));
        let s = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 1.5]));
        assert!(JpsnParams::new_constrained(1, 0, Vector::zeros(2), s, Vector::zeros(0)).is_err());
    }

    #[test]
    fn marginal_picks_blocks() {
        let sigma = Matrix::from_fn(5, 5, |i, j| if i == j { 1.0 + i as f64 } else { 0.1 });
        let mu = Vector::from_fn(5, |i, _| i as f64);
        let p = JpsnParams::new(2, 1, mu, sigma, Vector::from_vec(vec![3.0])).unwrap();
        let m = p.marginal(&[1], &[0]).unwrap();
        assert_eq!(m.mu.as_slice(), &[2.0, 3.0, 4.0]);
        assert_eq!(m.sigma[(0, 0)], 3.0);
        assert_eq!(m.sigma[(2, 2)], 5.0);
        assert_eq!(m.lambda[0], 3.0);
    }
}
