use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::data::{Coord, PolyCylDataset, PolyCylObservation};
use crate::dists::abeley::{abeley_circular_log_density, abeley_log_density, AbeLeyParams};
use crate::error::{Error, Result};
use crate::geometry::Angle;

/// Grid size for tabulated inverse CDFs over the circle.
pub const CIRCLE_GRID: usize = 4096;

/// Inverse-gamma priors `IG(shape, scale)` for `α`, `β` and `κ`; `μ` and `λ`
/// get uniform priors on the circle and on `[−1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbeLeyPrior {
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
    pub kappa: (f64, f64),
}

impl Default for AbeLeyPrior {
    fn default() -> Self {
        AbeLeyPrior {
            alpha: (1.0, 1.0),
            beta: (1.0, 1.0),
            kappa: (1.0, 1.0),
        }
    }
}

/// Random-walk Metropolis-Hastings settings. Step scales are per coordinate
/// in the order `(ln α, ln β, μ, ln κ, atanh λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MhConfig {
    pub iterations: usize,
    pub burnin: usize,
    pub thin: usize,
    pub seed: u64,
    pub step_scales: [f64; 5],
    /// Iterations during which step scales adapt; never beyond `burnin`.
    pub adapt_window: usize,
    pub target_acceptance: f64,
}

impl MhConfig {
    pub fn new(iterations: usize, burnin: usize, thin: usize, seed: u64) -> Result<Self> {
        let c = MhConfig {
            iterations,
            burnin,
            thin,
            seed,
            step_scales: [0.1; 5],
            adapt_window: burnin,
            target_acceptance: 0.3,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.burnin >= self.iterations {
            return Err(Error::domain("burnin must be smaller than iterations"));
        }
        if self.thin == 0 {
            return Err(Error::domain("thin must be at least 1"));
        }
        if !(self.target_acceptance > 0.0 && self.target_acceptance < 1.0) {
            return Err(Error::domain("target acceptance must lie in (0, 1)"));
        }
        if self.step_scales.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::domain("step scales must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbeLeyDraws {
    pub params: Vec<AbeLeyParams>,
    /// Masked entries as `(record, coordinate)`; coordinates are always index 0.
    pub missing: Vec<(usize, Coord)>,
    /// One row per stored draw, aligned with `missing`.
    pub imputed: Vec<Vec<f64>>,
    /// Acceptance rate per coordinate after adaptation stopped.
    pub acceptance: [f64; 5],
    pub step_scales: [f64; 5],
}

/// Inverse CDF of the circular marginal tabulated on a regular grid.
struct CircleSampler {
    cdf: Vec<f64>,
}

impl CircleSampler {
    fn new(log_density: impl Fn(Angle) -> f64) -> Self {
        let h = TAU / CIRCLE_GRID as f64;
        let f: Vec<f64> = (0..=CIRCLE_GRID)
            .map(|k| log_density(Angle::new(k as f64 * h)).exp())
            .collect();
        let mut cdf = vec![0.0; CIRCLE_GRID + 1];
        for k in 1..=CIRCLE_GRID {
            cdf[k] = cdf[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
        }
        let total = cdf[CIRCLE_GRID];
        cdf.iter_mut().for_each(|c| *c /= total);
        CircleSampler { cdf }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Angle {
        let u: f64 = rng.random();
        let k = self.cdf.partition_point(|&c| c <= u).clamp(1, CIRCLE_GRID);
        let (lo, hi) = (self.cdf[k - 1], self.cdf[k]);
        let frac = if hi > lo { (u - lo) / (hi - lo) } else { 0.5 };
        Angle::new((k as f64 - 1.0 + frac) * TAU / CIRCLE_GRID as f64)
    }
}

/// `y | θ`: `e^y` is Weibull with shape `α` and rate `β^α (1 − tanh κ cos(θ − μ))`.
fn sample_linear_given_angle<R: Rng + ?Sized>(theta: Angle, params: &AbeLeyParams, rng: &mut R) -> f64 {
    let e: f64 = rng.sample(Exp1);
    (e / params.rate_modulation(theta)).ln() / params.alpha() - params.beta().ln()
}

/// Draws `T` cylindrical pairs: `θ` by inverse CDF of the circular marginal on
/// a 4096-point grid, then `y | θ` from the modulated log-Weibull.
pub fn simulate_abeley<R: Rng + ?Sized>(
    params: &AbeLeyParams,
    t: usize,
    rng: &mut R,
) -> PolyCylDataset {
    let sampler = CircleSampler::new(|a| abeley_circular_log_density(a, params));
    let obs = (0..t)
        .map(|_| {
            let theta = sampler.sample(rng);
            let y = sample_linear_given_angle(theta, params, rng);
            PolyCylObservation::complete(vec![theta], vec![y])
        })
        .collect();
    PolyCylDataset::new(1, 1, obs).expect("simulated records have p = q = 1")
}

/// Unconstrained coordinates `(ln α, ln β, μ, ln κ, atanh λ)`.
#[derive(Debug, Clone, Copy)]
struct State([f64; 5]);

impl State {
    fn params(&self) -> Option<AbeLeyParams> {
        let [a, b, m, k, l] = self.0;
        AbeLeyParams::new(a.exp(), b.exp(), Angle::new(m), k.exp(), l.tanh()).ok()
    }

    /// Log prior in these coordinates, Jacobians included.
    fn log_prior(&self, prior: &AbeLeyPrior) -> f64 {
        // IG(a, b) on x = e^u: −(a+1) u − b e^{−u} + u
        let ig = |u: f64, (shape, scale): (f64, f64)| -shape * u - scale * (-u).exp();
        let [a, b, _, k, l] = self.0;
        let lam_jac = 1.0 - l.tanh().powi(2);
        ig(a, prior.alpha) + ig(b, prior.beta) + ig(k, prior.kappa) + lam_jac.ln()
    }
}

fn log_likelihood(pairs: &[(Angle, f64)], params: &AbeLeyParams) -> f64 {
    pairs.iter().map(|&(t, y)| abeley_log_density(t, y, params)).sum()
}

/// Refreshes the masked entries of one record given the parameters. A lone
/// masked angle takes one MH step; everything else is drawn exactly.
fn impute_pair<R: Rng + ?Sized>(
    obs: &PolyCylObservation,
    pair: &mut (Angle, f64),
    params: &AbeLeyParams,
    marginal: &CircleSampler,
    rng: &mut R,
) {
    match (obs.angle_missing[0], obs.linear_missing[0]) {
        (false, false) => {}
        (false, true) => pair.1 = sample_linear_given_angle(pair.0, params, rng),
        (true, true) => {
            pair.0 = marginal.sample(rng);
            pair.1 = sample_linear_given_angle(pair.0, params, rng);
        }
        (true, false) => {
            // independence MH with the circular marginal as proposal: the
            // acceptance ratio reduces to the ratio of y | θ densities
            let y = pair.1;
            let cond = |a: Angle| abeley_log_density(a, y, params) - abeley_circular_log_density(a, params);
            let prop = marginal.sample(rng);
            if rng.random::<f64>().ln() < cond(prop) - cond(pair.0) {
                pair.0 = prop;
            }
        }
    }
}

/// Fits the Abe-Ley density to a `(1, 1)` dataset by component-wise random-walk
/// MH on `(ln α, ln β, μ, ln κ, atanh λ)`, imputing masked entries once per
/// iteration. Step scales adapt toward the target acceptance during the
/// adaptation window (Robbins-Monro on the log scale) and are frozen after.
pub fn fit_abeley_mh<R: Rng + ?Sized>(
    data: &PolyCylDataset,
    prior: &AbeLeyPrior,
    config: &MhConfig,
    rng: &mut R,
) -> Result<AbeLeyDraws> {
    config.validate()?;
    if data.p() != 1 || data.q() != 1 {
        return Err(Error::domain("Abe-Ley needs exactly one angle and one linear value"));
    }
    if data.is_empty() {
        return Err(Error::InsufficientData("no records to fit".into()));
    }
    let records = data.observations();
    let missing: Vec<(usize, Coord)> = records
        .iter()
        .enumerate()
        .flat_map(|(t, o)| {
            let a = o.angle_missing[0].then_some((t, Coord::Angle(0)));
            let l = o.linear_missing[0].then_some((t, Coord::Linear(0)));
            a.into_iter().chain(l)
        })
        .collect();

    // starting point from the observed values
    let ys: Vec<f64> = records.iter().filter_map(|o| o.observed_linear(0)).collect();
    let (s, c) = records
        .iter()
        .filter_map(|o| o.observed_angle(0))
        .fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
    let mean_exp = if ys.is_empty() {
        1.0
    } else {
        ys.iter().map(|y| y.exp()).sum::<f64>() / ys.len() as f64
    };
    let mut state = State([0.0, -mean_exp.ln(), s.atan2(c), 0.5f64.ln(), 0.0]);
    let mut params = state
        .params()
        .ok_or_else(|| Error::Initialization("invalid starting values".into()))?;

    let mut pairs: Vec<(Angle, f64)> = records.iter().map(|o| (o.angles[0], o.linears[0])).collect();
    let mut marginal = CircleSampler::new(|a| abeley_circular_log_density(a, &params));
    for (o, pair) in records.iter().zip(pairs.iter_mut()) {
        impute_pair(o, pair, &params, &marginal, rng);
    }
    let mut log_post = log_likelihood(&pairs, &params) + state.log_prior(prior);
    if !log_post.is_finite() {
        return Err(Error::Initialization(
            "Abe-Ley likelihood is not finite at the starting values".into(),
        ));
    }

    let mut ln_scales = config.step_scales.map(f64::ln);
    let adapt_until = config.adapt_window.min(config.burnin);
    let mut accepted = [0usize; 5];
    let mut tried = 0usize;
    let mut out = AbeLeyDraws {
        params: Vec::new(),
        missing: missing.clone(),
        imputed: Vec::new(),
        acceptance: [0.0; 5],
        step_scales: [0.0; 5],
    };
    for it in 0..config.iterations {
        for k in 0..5 {
            let mut prop = state;
            prop.0[k] += ln_scales[k].exp() * rng.sample::<f64, _>(StandardNormal);
            if k == 2 {
                prop.0[2] = prop.0[2].rem_euclid(TAU);
            }
            let accept_prob = match prop.params() {
                Some(pp) => {
                    let lp = log_likelihood(&pairs, &pp) + prop.log_prior(prior);
                    if lp.is_finite() {
                        let ratio = (lp - log_post).min(0.0).exp();
                        if rng.random::<f64>() < ratio {
                            state = prop;
                            params = pp;
                            log_post = lp;
                            if it >= adapt_until {
                                accepted[k] += 1;
                            }
                        }
                        ratio
                    } else {
                        0.0
                    }
                }
                None => 0.0,
            };
            if it < adapt_until {
                let gain = 1.0 / ((it + 1) as f64).powf(0.6);
                ln_scales[k] += gain * (accept_prob - config.target_acceptance);
            }
        }
        if it >= adapt_until {
            tried += 1;
        }
        if !missing.is_empty() {
            marginal = CircleSampler::new(|a| abeley_circular_log_density(a, &params));
            for (o, pair) in records.iter().zip(pairs.iter_mut()) {
                impute_pair(o, pair, &params, &marginal, rng);
            }
            log_post = log_likelihood(&pairs, &params) + state.log_prior(prior);
        }
        if it >= config.burnin && (it - config.burnin) % config.thin == 0 {
            out.params.push(params);
            out.imputed.push(
                missing
                    .iter()
                    .map(|&(t, coord)| match coord {
                        Coord::Angle(_) => pairs[t].0.value(),
                        Coord::Linear(_) => pairs[t].1,
                    })
                    .collect(),
            );
        }
    }
    out.acceptance = accepted.map(|a| a as f64 / tried.max(1) as f64);
    out.step_scales = ln_scales.map(f64::exp);
    Ok(out)
}
