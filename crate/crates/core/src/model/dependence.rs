use rand::Rng;

use crate::diagnostics::{credible_interval_95, mean, pearson};
use crate::error::{Error, Result};
use crate::geometry::Angle;
use crate::linalg::Matrix;

use super::params::JpsnParams;
use super::simulate::simulate_jpsn;

/// Default number of forward-simulated observations per posterior draw.
pub const DEFAULT_DEPENDENCE_MC: usize = 4096;

fn circular_mean(theta: &[Angle]) -> f64 {
    let (s, c) = theta
        .iter()
        .fold((0.0, 0.0), |(s, c), t| (s + t.sin(), c + t.cos()));
    if s == 0.0 && c == 0.0 {
        0.0
    } else {
        s.atan2(c)
    }
}

/// Sample circular-circular correlation
/// `Σ sin(a − ā) sin(b − b̄) / √(Σ sin²(a − ā) Σ sin²(b − b̄))`, centred at the
/// sample circular means.
pub fn circ_circ_corr(theta_a: &[Angle], theta_b: &[Angle]) -> Result<f64> {
    if theta_a.len() != theta_b.len() {
        return Err(Error::domain("circular series have different lengths"));
    }
    if theta_a.len() < 2 {
        return Err(Error::domain("need at least two paired angles"));
    }
    let (ma, mb) = (circular_mean(theta_a), circular_mean(theta_b));
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (a, b) in theta_a.iter().zip(theta_b) {
        let sa = (a.value() - ma).sin();
        let sb = (b.value() - mb).sin();
        sab += sa * sb;
        saa += sa * sa;
        sbb += sb * sb;
    }
    let denom = (saa * sbb).sqrt();
    if !(denom > 0.0) {
        return Err(Error::domain("circular series has no spread around its mean"));
    }
    Ok((sab / denom).clamp(-1.0, 1.0))
}

/// Circular-linear dependence
/// `(r_yc² + r_ys² − 2 r_yc r_ys r_cs) / (1 − r_cs²)` built from the Pearson
/// correlations of `cos θ`, `sin θ` and `y`.
pub fn circ_lin_r2(theta: &[Angle], y: &[f64]) -> Result<f64> {
    if theta.len() != y.len() {
        return Err(Error::domain("series have different lengths"));
    }
    if theta.len() < 3 {
        return Err(Error::domain("need at least three pairs"));
    }
    let my = mean(y);
    if y.iter().all(|&v| v == my) {
        return Err(Error::domain("linear series has zero variance"));
    }
    let c: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
    let s: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
    let (ryc, rys, rcs) = (pearson(y, &c), pearson(y, &s), pearson(&c, &s));
    if !(ryc.is_finite() && rys.is_finite() && rcs.is_finite()) {
        return Err(Error::domain("circular series is degenerate"));
    }
    let denom = 1.0 - rcs * rcs;
    if !(denom > 0.0) {
        return Err(Error::domain("cos and sin of the angles are collinear"));
    }
    Ok(((ryc * ryc + rys * rys - 2.0 * ryc * rys * rcs) / denom).clamp(0.0, 1.0))
}

/// Kind of dependence measured in a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Diagonal,
    CircularCircular,
    CircularLinear,
    LinearLinear,
}

/// Posterior summary of pairwise dependence between the `p + q` variables
/// (angles first).
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceMatrix {
    pub p: usize,
    pub q: usize,
    pub mean: Matrix,
    pub lower: Matrix,
    pub upper: Matrix,
    /// Off-diagonal cells whose dependence is supported by the posterior:
    /// the 95% interval excludes zero for correlations, and for
    /// circular-linear cells at least one relevant `Σ_wy` interval excludes
    /// zero.
    pub flagged: Vec<Vec<bool>>,
}

impl DependenceMatrix {
    pub fn kind(&self, a: usize, b: usize) -> CellKind {
        if a == b {
            return CellKind::Diagonal;
        }
        match (a < self.p, b < self.p) {
            (true, true) => CellKind::CircularCircular,
            (false, false) => CellKind::LinearLinear,
            _ => CellKind::CircularLinear,
        }
    }
}

/// For every draw, simulates `mc_n` observations and computes the
/// circular-circular correlation, circular-linear `ρ²` and Pearson
/// correlation of each pair; reports posterior means, 95% intervals and
/// significance flags.
pub fn dependence_matrix<R: Rng + ?Sized>(
    draws: &[JpsnParams],
    mc_n: usize,
    rng: &mut R,
) -> Result<DependenceMatrix> {
    let first = draws
        .first()
        .ok_or_else(|| Error::domain("dependence matrix needs at least one draw"))?;
    let (p, q) = (first.p(), first.q());
    let k = p + q;
    if mc_n < 3 {
        return Err(Error::domain("need at least three simulated observations per draw"));
    }
    let mut cells: Vec<Vec<Vec<f64>>> = vec![vec![Vec::with_capacity(draws.len()); k]; k];
    for params in draws {
        if params.p() != p || params.q() != q {
            return Err(Error::domain("draws have inconsistent dimensions"));
        }
        let (data, _) = simulate_jpsn(params, mc_n, rng)?;
        let angles: Vec<Vec<Angle>> = (0..p).map(|i| data.angle_series(i)).collect();
        let linears: Vec<Vec<f64>> = (0..q).map(|j| data.linear_series(j)).collect();
        for a in 0..k {
            for b in (a + 1)..k {
                let v = match (a < p, b < p) {
                    (true, true) => circ_circ_corr(&angles[a], &angles[b])?,
                    (true, false) => circ_lin_r2(&angles[a], &linears[b - p])?,
                    (false, false) => pearson(&linears[a - p], &linears[b - p]),
                    (false, true) => unreachable!(),
                };
                cells[a][b].push(v);
            }
        }
    }

    // Σ_wy intervals for the circular-linear flags.
    let wy_excludes_zero = |row: usize, col: usize| {
        let xs: Vec<f64> = draws.iter().map(|d| d.sigma[(row, col)]).collect();
        let (lo, hi) = credible_interval_95(&xs);
        lo > 0.0 || hi < 0.0
    };

    let mut out = DependenceMatrix {
        p,
        q,
        mean: Matrix::identity(k, k),
        lower: Matrix::identity(k, k),
        upper: Matrix::identity(k, k),
        flagged: vec![vec![false; k]; k],
    };
    for a in 0..k {
        for b in (a + 1)..k {
            let xs = &cells[a][b];
            let m = mean(xs);
            let (lo, hi) = credible_interval_95(xs);
            let flag = if a < p && b >= p {
                let y = 2 * p + (b - p);
                wy_excludes_zero(2 * a, y) || wy_excludes_zero(2 * a + 1, y)
            } else {
                lo > 0.0 || hi < 0.0
            };
            for (x, y) in [(a, b), (b, a)] {
                out.mean[(x, y)] = m;
                out.lower[(x, y)] = lo;
                out.upper[(x, y)] = hi;
                out.flagged[x][y] = flag;
            }
        }
    }
    Ok(out)
}
