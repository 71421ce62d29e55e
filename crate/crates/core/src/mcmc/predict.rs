use rand::Rng;

use crate::data::{Coord, PolyCylDataset};
use crate::error::{Error, Result};
use crate::model::JpsnParams;

use super::kernels::{record_vector, slice_update_r, DStep, Imputer, RStep};

/// Sweeps per draw used by the command-line predictor.
pub const DEFAULT_PREDICT_SWEEPS: usize = 20;

/// Posterior predictive draws of every masked entry of `data`, one per
/// parameter draw. For each draw the latents and masked entries of each
/// incomplete record are updated for `sweeps` Gibbs sweeps with the
/// parameters held fixed; the final masked values are kept.
pub fn predict_missing<R: Rng + ?Sized>(
    data: &PolyCylDataset,
    draws: &[JpsnParams],
    sweeps: usize,
    rng: &mut R,
) -> Result<Vec<((usize, Coord), Vec<f64>)>> {
    let (p, q) = (data.p(), data.q());
    if draws.iter().any(|d| d.p() != p || d.q() != q) {
        return Err(Error::domain("draws do not match the dataset dimensions"));
    }
    let rows: Vec<usize> = (0..data.len())
        .filter(|&t| data.observations()[t].has_missing())
        .collect();
    let entries: Vec<(usize, Coord)> = rows
        .iter()
        .flat_map(|&t| {
            let o = &data.observations()[t];
            let a = (0..p).filter(|&i| o.angle_missing[i]).map(move |i| (t, Coord::Angle(i)));
            let l = (0..q).filter(|&j| o.linear_missing[j]).map(move |j| (t, Coord::Linear(j)));
            a.chain(l).collect::<Vec<_>>()
        })
        .collect();
    let mut out: Vec<((usize, Coord), Vec<f64>)> = entries
        .iter()
        .map(|&e| (e, Vec::with_capacity(draws.len())))
        .collect();
    for params in draws {
        let d_step = DStep::new(params)?;
        let r_step = RStep::new(params)?;
        let mut imputer = Imputer::new(params);
        let mut k = 0;
        for &t in &rows {
            let mut obs = data.observations()[t].clone();
            let mut r = vec![1.0; p];
            let mut d = vec![(2.0 / std::f64::consts::PI).sqrt(); q];
            imputer.impute(&mut obs, &mut r, &d, rng)?;
            for _ in 0..sweeps {
                let mut x = record_vector(&obs, &r);
                d_step.sample(&params.mu, &x, &mut d, rng);
                let mut mean = params.mu.clone();
                for j in 0..q {
                    mean[2 * p + j] += params.lambda[j] * d[j];
                }
                for i in 0..p {
                    if obs.angle_missing[i] {
                        continue;
                    }
                    let u = obs.angles[i].unit();
                    let (a, b) = r_step.coefficients(i, u, &mean, &x);
                    r[i] = slice_update_r(r[i], a, b, rng)?;
                    x[2 * i] = r[i] * u[0];
                    x[2 * i + 1] = r[i] * u[1];
                }
                imputer.impute(&mut obs, &mut r, &d, rng)?;
            }
            for i in 0..p {
                if obs.angle_missing[i] {
                    out[k].1.push(obs.angles[i].value());
                    k += 1;
                }
            }
            for j in 0..q {
                if obs.linear_missing[j] {
                    out[k].1.push(obs.linears[j]);
                    k += 1;
                }
            }
        }
    }
    Ok(out)
}
