use rand::Rng;

use crate::data::{Coord, PolyCylDataset};
use crate::dists::mvn::{sample_mvn, MvnParams};
use crate::dists::niw::sample_niw;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::model::{identify_mu_sigma, CMatrix, JpsnParams, LatentState};

use super::config::{ChainConfig, Init};
use super::ess::ess;
use super::kernels::{lambda_full_conditional, niw_full_conditional, record_vector, DStep, Imputer, RStep};
use super::prior::PriorSpec;

/// One stored draw on the unconstrained scale.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDraw {
    pub params: JpsnParams,
    pub latents: LatentState,
    /// Current values of the masked entries, aligned with
    /// [`PosteriorDraws::missing`]. Angles are stored in radians.
    pub imputed: Vec<f64>,
}

/// One stored draw after identification.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentifiedDraw {
    /// `(μ̃, Σ̃, λ)`, marked constrained.
    pub params: JpsnParams,
    /// `r̃_ti = r_ti / c_i`; `d` is unchanged.
    pub latents: LatentState,
    pub c: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainMeta {
    pub config: ChainConfig,
    /// ESS of every free identified parameter, by name. `None` when the
    /// trace is constant or too short.
    pub ess: Vec<(String, Option<f64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorDraws {
    pub p: usize,
    pub q: usize,
    pub raw: Vec<RawDraw>,
    pub identified: Vec<IdentifiedDraw>,
    /// Masked entries of the input, as `(record, coordinate)`.
    pub missing: Vec<(usize, Coord)>,
    pub meta: ChainMeta,
}

impl PosteriorDraws {
    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    /// Identified parameter draws.
    pub fn identified_params(&self) -> Vec<JpsnParams> {
        self.identified.iter().map(|d| d.params.clone()).collect()
    }

    /// Trace of one free identified parameter (see [`free_parameter_names`]).
    pub fn trace(&self, index: usize) -> Vec<f64> {
        self.identified
            .iter()
            .map(|d| free_parameter_values(&d.params)[index])
            .collect()
    }

    /// Draws of the masked entry `k` of [`PosteriorDraws::missing`].
    pub fn imputed_trace(&self, k: usize) -> Vec<f64> {
        self.raw.iter().map(|d| d.imputed[k]).collect()
    }
}

/// Names of the free identified parameters: every `μ̃` entry, the upper
/// triangle of `Σ̃` without the unit-constrained diagonal entries, then `λ`.
/// Indices are 1-based.
pub fn free_parameter_names(p: usize, q: usize) -> Vec<String> {
    let n = 2 * p + q;
    let mut names: Vec<String> = (0..n).map(|k| format!("mu[{}]", k + 1)).collect();
    for i in 0..n {
        for j in i..n {
            if i == j && i < 2 * p && i % 2 == 1 {
                continue;
            }
            names.push(format!("sigma[{},{}]", i + 1, j + 1));
        }
    }
    names.extend((0..q).map(|j| format!("lambda[{}]", j + 1)));
    names
}

/// Values in the order of [`free_parameter_names`].
pub fn free_parameter_values(params: &JpsnParams) -> Vec<f64> {
    let (p, n) = (params.p(), params.dim());
    let mut out: Vec<f64> = params.mu.iter().copied().collect();
    for i in 0..n {
        for j in i..n {
            if i == j && i < 2 * p && i % 2 == 1 {
                continue;
            }
            out.push(params.sigma[(i, j)]);
        }
    }
    out.extend(params.lambda.iter());
    out
}

fn identify_draw(raw: &RawDraw) -> Result<IdentifiedDraw> {
    let params = &raw.params;
    let (p, q) = (params.p(), params.q());
    let (mu, sigma, c) = identify_mu_sigma(p, &params.mu, &params.sigma)?;
    let mut r = raw.latents.r.clone();
    for (i, ci) in c.0.iter().enumerate() {
        r.column_mut(i).apply(|x| *x /= ci);
    }
    Ok(IdentifiedDraw {
        params: JpsnParams::new_constrained(p, q, mu, sigma, params.lambda.clone())
            .map_err(|e| Error::numerical(format!("identified draw is invalid: {e}")))?,
        latents: LatentState {
            r,
            d: raw.latents.d.clone(),
        },
        c,
    })
}

/// Runs one systematic-scan Gibbs chain on the unconstrained parameters.
///
/// Each iteration updates every `d_t`, every observed `r_ti` (one slice
/// transition), the masked entries, then `(μ, Σ)` and finally `λ`. Draws
/// after burn-in are thinned, stored, and identified.
pub fn run_gibbs<R: Rng + ?Sized>(
    data: &PolyCylDataset,
    prior: &PriorSpec,
    config: &ChainConfig,
    rng: &mut R,
) -> Result<PosteriorDraws> {
    config.validate()?;
    let (p, q, t) = (data.p(), data.q(), data.len());
    prior.check_dims(p, q)?;
    if t == 0 {
        return Err(Error::InsufficientData("no records to fit".into()));
    }
    let (mut params, mut latents) = match &config.init {
        Init::Default => (
            JpsnParams::new(
                p,
                q,
                Vector::zeros(2 * p + q),
                Matrix::identity(2 * p + q, 2 * p + q),
                Vector::zeros(q),
            )?,
            LatentState::new(t, p, q),
        ),
        Init::Supplied { params, latents } => {
            if params.p() != p || params.q() != q {
                return Err(Error::Initialization("initial parameters do not match the data".into()));
            }
            if latents.r.shape() != (t, p) || latents.d.shape() != (t, q) {
                return Err(Error::Initialization("initial latents do not match the data".into()));
            }
            if !latents.all_positive() {
                return Err(Error::Initialization("initial latents must be positive".into()));
            }
            (params.clone(), latents.clone())
        }
    };

    let missing: Vec<(usize, Coord)> = data
        .observations()
        .iter()
        .enumerate()
        .flat_map(|(row, obs)| {
            let angles = (0..p).filter(|&i| obs.angle_missing[i]).map(move |i| (row, Coord::Angle(i)));
            let linears = (0..q).filter(|&j| obs.linear_missing[j]).map(move |j| (row, Coord::Linear(j)));
            angles.chain(linears)
        })
        .collect();

    let mut work = data.clone();
    let mut r_row = vec![0.0; p];
    let mut d_row = vec![0.0; q];

    // fill masked entries before the first scan reads them
    {
        let mut imputer = Imputer::new(&params);
        for row in 0..t {
            load_row(&latents, row, &mut r_row, &mut d_row);
            imputer
                .impute(&mut work.observations_mut()[row], &mut r_row, &d_row, rng)
                .map_err(|e| Error::Initialization(format!("initial imputation failed: {e}")))?;
            store_row(&mut latents, row, &r_row, &d_row);
        }
    }

    let mut raw = Vec::with_capacity(config.n_stored());
    for iteration in 0..config.iterations {
        scan(&mut work, &mut params, &mut latents, prior, rng, &mut r_row, &mut d_row)
            .map_err(|e| e.at_iteration(iteration))?;
        if config.is_stored(iteration) {
            let imputed = missing
                .iter()
                .map(|&(row, coord)| {
                    let obs = &work.observations()[row];
                    match coord {
                        Coord::Angle(i) => obs.angles[i].value(),
                        Coord::Linear(j) => obs.linears[j],
                    }
                })
                .collect();
            raw.push(RawDraw {
                params: params.clone(),
                latents: latents.clone(),
                imputed,
            });
        }
    }

    let identified = raw.iter().map(identify_draw).collect::<Result<Vec<_>>>()?;
    let names = free_parameter_names(p, q);
    let values: Vec<Vec<f64>> = identified.iter().map(|d| free_parameter_values(&d.params)).collect();
    let ess_stats = names
        .into_iter()
        .enumerate()
        .map(|(k, name)| {
            let trace: Vec<f64> = values.iter().map(|v| v[k]).collect();
            (name, ess(&trace).ok())
        })
        .collect();
    Ok(PosteriorDraws {
        p,
        q,
        raw,
        identified,
        missing,
        meta: ChainMeta {
            config: config.clone(),
            ess: ess_stats,
        },
    })
}

fn load_row(latents: &LatentState, row: usize, r: &mut [f64], d: &mut [f64]) {
    for (i, v) in r.iter_mut().enumerate() {
        *v = latents.r[(row, i)];
    }
    for (j, v) in d.iter_mut().enumerate() {
        *v = latents.d[(row, j)];
    }
}

fn store_row(latents: &mut LatentState, row: usize, r: &[f64], d: &[f64]) {
    for (i, v) in r.iter().enumerate() {
        latents.r[(row, i)] = *v;
    }
    for (j, v) in d.iter().enumerate() {
        latents.d[(row, j)] = *v;
    }
}

/// One full Gibbs scan.
fn scan<R: Rng + ?Sized>(
    work: &mut PolyCylDataset,
    params: &mut JpsnParams,
    latents: &mut LatentState,
    prior: &PriorSpec,
    rng: &mut R,
    r_row: &mut [f64],
    d_row: &mut [f64],
) -> Result<()> {
    let (p, q) = (params.p(), params.q());
    {
        let d_step = DStep::new(params)?;
        let r_step = RStep::new(params)?;
        let mut imputer = Imputer::new(params);
        for row in 0..work.len() {
            load_row(latents, row, r_row, d_row);
            let obs = &mut work.observations_mut()[row];
            let mut x = record_vector(obs, r_row);
            d_step.sample(&params.mu, &x, d_row, rng);
            let mut mean = params.mu.clone();
            for j in 0..q {
                mean[2 * p + j] += params.lambda[j] * d_row[j];
            }
            for i in 0..p {
                if obs.angle_missing[i] {
                    continue;
                }
                let u = obs.angles[i].unit();
                let (a, b) = r_step.coefficients(i, u, &mean, &x);
                let r_new = super::kernels::slice_update_r(r_row[i], a, b, rng)?;
                r_row[i] = r_new;
                x[2 * i] = r_new * u[0];
                x[2 * i + 1] = r_new * u[1];
            }
            imputer.impute(obs, r_row, d_row, rng)?;
            store_row(latents, row, r_row, d_row);
        }
    }
    let niw = niw_full_conditional(work, latents, &params.lambda, prior);
    let (mu, sigma) = sample_niw(&niw, rng)?;
    let (gamma, omega) = lambda_full_conditional(work, latents, &mu, &sigma, prior)?;
    let lambda = if q == 0 {
        Vector::zeros(0)
    } else {
        sample_mvn(&MvnParams::new_symmetrized(gamma, omega)?, rng)
    };
    *params = JpsnParams::new(p, q, mu, sigma, lambda)?;
    Ok(())
}
