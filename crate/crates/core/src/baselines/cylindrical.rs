use rand::Rng;

use crate::data::{Coord, PolyCylDataset};
use crate::dists::niw::NiwParams;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::mcmc::{run_gibbs, ChainConfig, PosteriorDraws, PriorSpec};

/// One cylindrical unit: an angle and a linear variable of the full dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CylBlock {
    pub angle: usize,
    pub linear: usize,
}

/// `(θ_i, y_i)` blocks for `i = 0..p`, the usual pairing when every unit
/// contributes one angle and one linear variable.
pub fn paired_blocks(p: usize) -> Vec<CylBlock> {
    (0..p).map(|i| CylBlock { angle: i, linear: i }).collect()
}

/// Checks that `blocks` uses every angle and every linear variable exactly once.
pub fn validate_partition(p: usize, q: usize, blocks: &[CylBlock]) -> Result<()> {
    if p != q || blocks.len() != p {
        return Err(Error::domain(format!(
            "a cylindrical partition of (p, q) = ({p}, {q}) needs p = q blocks, got {}",
            blocks.len()
        )));
    }
    let mut seen_a = vec![false; p];
    let mut seen_l = vec![false; q];
    for b in blocks {
        if b.angle >= p || b.linear >= q || seen_a[b.angle] || seen_l[b.linear] {
            return Err(Error::domain(format!(
                "block (angle {}, linear {}) is out of range or repeats a variable",
                b.angle, b.linear
            )));
        }
        seen_a[b.angle] = true;
        seen_l[b.linear] = true;
    }
    Ok(())
}

/// `NIW(0_3, 0.001, 6, I_3)` with `λ ~ N(0, 100)` for one block.
pub fn cylindrical_prior() -> PriorSpec {
    PriorSpec::new(
        NiwParams::new(Vector::zeros(3), 0.001, 6.0, Matrix::identity(3, 3)).expect("valid NIW"),
        Vector::zeros(1),
        Matrix::from_element(1, 1, 100.0),
    )
    .expect("valid prior")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CylindricalDraws {
    pub blocks: Vec<CylBlock>,
    pub draws: Vec<PosteriorDraws>,
}

impl CylindricalDraws {
    /// Masked entries in coordinates of the full dataset, with the block and
    /// the index into that block's `missing` list.
    pub fn missing(&self) -> Vec<((usize, Coord), usize, usize)> {
        let mut out = Vec::new();
        for (b, (block, draws)) in self.blocks.iter().zip(&self.draws).enumerate() {
            for (k, &(row, coord)) in draws.missing.iter().enumerate() {
                let full = match coord {
                    Coord::Angle(_) => Coord::Angle(block.angle),
                    Coord::Linear(_) => Coord::Linear(block.linear),
                };
                out.push(((row, full), b, k));
            }
        }
        out
    }
}

/// Fits an independent `(1, 1)` JPSN to each block with the same chain
/// settings, drawing from `rng` block after block.
pub fn fit_cylindrical_jpsn<R: Rng + ?Sized>(
    data: &PolyCylDataset,
    blocks: &[CylBlock],
    prior: &PriorSpec,
    config: &ChainConfig,
    rng: &mut R,
) -> Result<CylindricalDraws> {
    validate_partition(data.p(), data.q(), blocks)?;
    prior.check_dims(1, 1)?;
    let draws = blocks
        .iter()
        .map(|b| {
            let sub = data.select(&[b.angle], &[b.linear])?;
            run_gibbs(&sub, prior, config, rng)
        })
        .collect::<Result<_>>()?;
    Ok(CylindricalDraws {
        blocks: blocks.to_vec(),
        draws,
    })
}
