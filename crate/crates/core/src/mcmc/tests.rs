use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::*;
use crate::data::{PolyCylDataset, PolyCylObservation};
use crate::diagnostics::{ks_one_sample, ks_two_sample, mean, pearson};
use crate::dists::niw::{sample_niw, NiwParams};
use crate::dists::normal::std_normal_cdf;
use crate::error::Error;
use crate::geometry::Angle;
use crate::linalg::{Matrix, Vector};
use crate::model::{jpsn_aug_log_density, simulate_jpsn, JpsnParams, LatentState};

fn random_spd<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    let a = Matrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    &a * a.transpose() + Matrix::identity(n, n) * 0.5
}

fn random_params<R: Rng>(p: usize, q: usize, rng: &mut R) -> JpsnParams {
    let n = 2 * p + q;
    let mu = Vector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let lambda = Vector::from_fn(q, |_, _| 2.0 * rng.sample::<f64, _>(StandardNormal));
    JpsnParams::new(p, q, mu, random_spd(n, rng), lambda).unwrap()
}

fn linear_only(ys: &[f64]) -> PolyCylDataset {
    let obs = ys
        .iter()
        .map(|&y| PolyCylObservation::complete(vec![], vec![y]))
        .collect();
    PolyCylDataset::new(0, 1, obs).unwrap()
}

/// Riemann sum over a grid.
fn grid_mean(lo: f64, hi: f64, n: usize, ln_f: impl Fn(f64) -> f64) -> f64 {
    let h = (hi - lo) / n as f64;
    let xs: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect();
    let lf: Vec<f64> = xs.iter().map(|&x| ln_f(x)).collect();
    let top = lf.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for (x, l) in xs.iter().zip(&lf) {
        let w = (l - top).exp();
        num += x * w;
        den += w;
    }
    num / den
}

#[test]
fn niw_conditional_without_data_is_prior() {
    let prior = PriorSpec::weak(1, 1);
    let data = PolyCylDataset::new(1, 1, vec![]).unwrap();
    let latents = LatentState::new(0, 1, 1);
    assert_eq!(niw_full_conditional(&data, &latents, &Vector::zeros(1), &prior), prior.niw);
}

#[test]
fn niw_conditional_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let params = random_params(1, 1, &mut rng);
    let (data, latents) = simulate_jpsn(&params, 37, &mut rng).unwrap();
    let prior = PriorSpec::weak(1, 1);
    let post = niw_full_conditional(&data, &latents, &params.lambda, &prior);
    assert_eq!(post.kappa0, prior.niw.kappa0 + 37.0);
    assert_eq!(post.nu0, prior.niw.nu0 + 37.0);
}

#[test]
fn niw_conditional_matches_grid_posterior() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ys: Vec<f64> = (0..50).map(|_| 1.3 + 0.8 * rng.sample::<f64, _>(StandardNormal)).collect();
    let data = linear_only(&ys);
    let latents = LatentState::new(50, 0, 1);
    let (mu0, kappa0, nu0, psi0) = (0.5, 1.0, 3.0, 1.0);
    let prior = PriorSpec::new(
        NiwParams::new(Vector::from_vec(vec![mu0]), kappa0, nu0, Matrix::from_element(1, 1, psi0))
            .unwrap(),
        Vector::zeros(1),
        Matrix::identity(1, 1),
    )
    .unwrap();
    let post = niw_full_conditional(&data, &latents, &Vector::zeros(1), &prior);

    // brute force: joint (μ, σ²) grid, marginal mean of μ
    let (nm, ns) = (800, 800);
    let (mlo, mhi, slo, shi) = (0.5, 2.2, 0.05, 2.5);
    let (hm, hs) = ((mhi - mlo) / nm as f64, (shi - slo) / ns as f64);
    let mut cells = Vec::with_capacity(nm * ns);
    for a in 0..nm {
        let m = mlo + (a as f64 + 0.5) * hm;
        for b in 0..ns {
            let s2 = slo + (b as f64 + 0.5) * hs;
            // IW(ν₀, ψ₀) on a scalar is inverse-gamma(ν₀/2, ψ₀/2)
            let mut lp = -(nu0 / 2.0 + 1.0) * s2.ln() - psi0 / (2.0 * s2);
            lp += -0.5 * (s2 / kappa0).ln() - kappa0 * (m - mu0).powi(2) / (2.0 * s2);
            for y in &ys {
                lp += -0.5 * s2.ln() - (y - m).powi(2) / (2.0 * s2);
            }
            cells.push((m, lp));
        }
    }
    let top = cells.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let (num, den) = cells.iter().fold((0.0, 0.0), |(n, d), (m, lp)| {
        let w = (lp - top).exp();
        (n + m * w, d + w)
    });
    assert!((num / den - post.mu0[0]).abs() < 1e-2, "{} vs {}", num / den, post.mu0[0]);
}

#[test]
fn lambda_conditional_without_skew_information_is_prior() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let params = random_params(1, 2, &mut rng);
    let (data, mut latents) = simulate_jpsn(&params, 20, &mut rng).unwrap();
    latents.d.fill(0.0);
    let prior = PriorSpec::new(
        NiwParams::isotropic(4, 1.0, 8.0).unwrap(),
        Vector::from_vec(vec![0.3, -1.0]),
        random_spd(2, &mut rng),
    )
    .unwrap();
    let (g, o) = lambda_full_conditional(&data, &latents, &params.mu, &params.sigma, &prior).unwrap();
    assert!((g - &prior.lambda_mean).amax() < 1e-12);
    assert!((o - &prior.lambda_cov).amax() < 1e-12);
}

#[test]
fn lambda_conditional_matches_grid_posterior() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mu, s2, lam): (f64, f64, f64) = (0.4, 1.5, -2.0);
    let ds: Vec<f64> = (0..30).map(|_| rng.sample::<f64, _>(StandardNormal).abs()).collect();
    let ys: Vec<f64> = ds
        .iter()
        .map(|d| mu + lam * d + s2.sqrt() * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let data = linear_only(&ys);
    let mut latents = LatentState::new(30, 0, 1);
    for (t, d) in ds.iter().enumerate() {
        latents.d[(t, 0)] = *d;
    }
    let (g0, o0) = (1.0, 4.0);
    let prior = PriorSpec::new(
        NiwParams::isotropic(1, 1.0, 3.0).unwrap(),
        Vector::from_vec(vec![g0]),
        Matrix::from_element(1, 1, o0),
    )
    .unwrap();
    let (g, o) = lambda_full_conditional(
        &data,
        &latents,
        &Vector::from_vec(vec![mu]),
        &Matrix::from_element(1, 1, s2),
        &prior,
    )
    .unwrap();
    let grid = grid_mean(-8.0, 4.0, 200_000, |l| {
        let mut lp = -(l - g0).powi(2) / (2.0 * o0);
        for (y, d) in ys.iter().zip(&ds) {
            lp -= (y - mu - l * d).powi(2) / (2.0 * s2);
        }
        lp
    });
    assert!((grid - g[0]).abs() < 1e-2);
    assert!(o[(0, 0)] > 0.0 && o[(0, 0)] < o0);
}

#[test]
fn lambda_posterior_covariance_is_spd() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let params = random_params(2, 3, &mut rng);
        let (data, latents) = simulate_jpsn(&params, 15, &mut rng).unwrap();
        let prior = PriorSpec::weak(2, 3);
        let (_, o) =
            lambda_full_conditional(&data, &latents, &params.mu, &params.sigma, &prior).unwrap();
        assert_eq!(o, o.transpose());
        assert!(o.clone().cholesky().is_some());
    }
}

#[test]
fn lambda_conditional_rejects_singular_sigma_w() {
    let prior = PriorSpec::weak(1, 1);
    let data = PolyCylDataset::new(
        1,
        1,
        vec![PolyCylObservation::complete(vec![Angle::new(1.0)], vec![0.0])],
    )
    .unwrap();
    let latents = LatentState::new(1, 1, 1);
    let mut s = Matrix::identity(3, 3);
    s[(0, 0)] = 0.0;
    assert!(matches!(
        lambda_full_conditional(&data, &latents, &Vector::zeros(3), &s, &prior),
        Err(Error::Numerical(_))
    ));
}

#[test]
fn sample_d_without_skew_is_half_normal() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut params = random_params(1, 2, &mut rng);
    params.lambda = Vector::zeros(2);
    let obs = PolyCylObservation::complete(vec![Angle::new(0.4)], vec![1.0, -3.0]);
    let mut d = vec![1.0, 1.0];
    let n = 20_000;
    let mut sums = [Vec::new(), Vec::new()];
    for _ in 0..n {
        d = sample_d(&obs, &[1.2], &d, &params, &mut rng).unwrap();
        sums[0].push(d[0]);
        sums[1].push(d[1]);
    }
    let se = (1.0 - 2.0 / PI).sqrt() / (n as f64).sqrt();
    for s in &sums {
        assert!((mean(s) - (2.0 / PI).sqrt()).abs() < 3.0 * se);
    }
}

#[test]
fn sample_d_matches_truncated_normal_at_q1() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let params = random_params(1, 1, &mut rng);
        let obs = PolyCylObservation::complete(vec![Angle::new(2.0)], vec![0.7]);
        let r = [1.4];
        // y | w is scalar normal; regress by hand
        let s = &params.sigma;
        let w = [r[0] * 2f64.cos(), r[0] * 2f64.sin()];
        let sww = Matrix::from_fn(2, 2, |i, j| s[(i, j)]);
        let swy = Vector::from_vec(vec![s[(0, 2)], s[(1, 2)]]);
        let beta = sww.try_inverse().unwrap() * &swy;
        let my = params.mu[2] + beta[0] * (w[0] - params.mu[0]) + beta[1] * (w[1] - params.mu[1]);
        let vy = s[(2, 2)] - beta.dot(&swy);
        let l = params.lambda[0];
        let v = 1.0 / (l * l / vy + 1.0);
        let m = v * l / vy * (0.7 - my);
        let sd = v.sqrt();
        let z0 = std_normal_cdf(-m / sd);
        let draws: Vec<f64> = (0..10_000)
            .map(|_| sample_d(&obs, &r, &[1.0], &params, &mut rng).unwrap()[0])
            .collect();
        let ks = ks_one_sample(&draws, |x| ((std_normal_cdf((x - m) / sd) - z0) / (1.0 - z0)).max(0.0));
        assert!(ks.p_value > 0.01, "{ks:?}");
    }
}

#[test]
fn sample_d_stays_positive_under_stress() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let params = JpsnParams::new(
        0,
        2,
        Vector::from_vec(vec![50.0, -50.0]),
        Matrix::identity(2, 2) * 0.01,
        Vector::from_vec(vec![40.0, 40.0]),
    )
    .unwrap();
    let step = DStep::new(&params).unwrap();
    let x = Vector::from_vec(vec![-50.0, 60.0]);
    let mut d = vec![1.0, 1.0];
    for _ in 0..500_000 {
        step.sample(&params.mu, &x, &mut d, &mut rng);
        assert!(d[0] > 0.0 && d[1] > 0.0);
    }
}

/// Normalized target `r exp(−A/2 (r − B/A)²)` on a grid, with a rejection
/// sampler and its CDF.
struct SliceOracle {
    lo: f64,
    h: f64,
    cdf: Vec<f64>,
    pdf: Vec<f64>,
    a: f64,
    m: f64,
    fmax: f64,
}

impl SliceOracle {
    fn new(a: f64, b: f64) -> Self {
        let m = b / a;
        let hi = m.max(0.0) + 12.0 / a.sqrt() + 1.0;
        let n = 400_000;
        let h = hi / n as f64;
        let f = |r: f64| r * (-0.5 * a * (r - m) * (r - m)).exp();
        let pdf: Vec<f64> = (0..=n).map(|i| f(i as f64 * h)).collect();
        let mut cdf = vec![0.0; n + 1];
        for i in 1..=n {
            cdf[i] = cdf[i - 1] + 0.5 * h * (pdf[i - 1] + pdf[i]);
        }
        let total = cdf[n];
        cdf.iter_mut().for_each(|c| *c /= total);
        let fmax = pdf.iter().cloned().fold(0.0, f64::max) * 1.01;
        SliceOracle { lo: 0.0, h, cdf, pdf, a, m, fmax }
    }

    fn cdf_at(&self, x: f64) -> f64 {
        let pos = (x - self.lo) / self.h;
        if pos <= 0.0 {
            return 0.0;
        }
        let i = pos.floor() as usize;
        if i + 1 >= self.cdf.len() {
            return 1.0;
        }
        let frac = pos - i as f64;
        self.cdf[i] + frac * (self.cdf[i + 1] - self.cdf[i])
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let hi = self.h * (self.pdf.len() - 1) as f64;
        loop {
            let r = rng.random::<f64>() * hi;
            let f = r * (-0.5 * self.a * (r - self.m) * (r - self.m)).exp();
            if rng.random::<f64>() * self.fmax < f {
                return r;
            }
        }
    }

    fn mean(&self) -> f64 {
        let mut s = 0.0;
        for i in 1..self.cdf.len() {
            let x = (i as f64 - 0.5) * self.h;
            s += x * (self.cdf[i] - self.cdf[i - 1]);
        }
        s
    }
}

#[test]
fn slice_transition_preserves_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for &(a, b) in &[(1.0, 0.0), (2.0, 3.0), (0.5, -2.0), (100.0, 100.0), (4.0, -10.0)] {
        let oracle = SliceOracle::new(a, b);
        let moved: Vec<f64> = (0..10_000)
            .map(|_| {
                let r0 = oracle.sample(&mut rng);
                slice_update_r(r0, a, b, &mut rng).unwrap()
            })
            .collect();
        assert!(moved.iter().all(|&r| r > 0.0));
        let ks = ks_one_sample(&moved, |x| oracle.cdf_at(x));
        assert!(ks.p_value > 0.01, "A={a}, B={b}: {ks:?}");
    }
}

#[test]
fn slice_chain_long_run_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let oracle = SliceOracle::new(100.0, 100.0);
    let mut r = 1.0;
    let chain: Vec<f64> = (0..100_000)
        .map(|_| {
            r = slice_update_r(r, 100.0, 100.0, &mut rng).unwrap();
            r
        })
        .collect();
    let se = (crate::diagnostics::variance(&chain) / ess(&chain).unwrap()).sqrt();
    assert!((mean(&chain) - oracle.mean()).abs() < 3.0 * se);
    // the r factor shifts the mode slightly above B/A
    assert!(oracle.mean() > 1.0 && oracle.mean() < 1.02);
}

#[test]
fn slice_rejects_bad_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    assert!(matches!(slice_update_r(1.0, 0.0, 1.0, &mut rng), Err(Error::Domain(_))));
    assert!(matches!(slice_update_r(1.0, -1.0, 1.0, &mut rng), Err(Error::Domain(_))));
}

#[test]
fn r_coefficients_identity_case() {
    let params = JpsnParams::new(1, 0, Vector::zeros(2), Matrix::identity(2, 2), Vector::zeros(0))
        .unwrap();
    let obs = PolyCylObservation::complete(vec![Angle::new(0.8)], vec![]);
    let (a, b) = compute_r_coefficients(&obs, 0, &params, &[], &[1.0]).unwrap();
    assert!((a - 1.0).abs() < 1e-14 && b.abs() < 1e-14);
}

#[test]
fn r_coefficients_match_augmented_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let params = random_params(2, 2, &mut rng);
        let obs = PolyCylObservation::complete(
            vec![Angle::new(rng.random::<f64>() * TAU), Angle::new(rng.random::<f64>() * TAU)],
            vec![rng.sample(StandardNormal), rng.sample(StandardNormal)],
        );
        let d = [0.3 + rng.random::<f64>(), 0.3 + rng.random::<f64>()];
        for i in 0..2 {
            let mut r = [0.5 + rng.random::<f64>(), 0.5 + rng.random::<f64>()];
            let (a, b) = compute_r_coefficients(&obs, i, &params, &d, &r).unwrap();
            assert!(a > 0.0);
            let mut diffs = Vec::new();
            for k in 1..=40 {
                r[i] = k as f64 * 0.1;
                let full = jpsn_aug_log_density(&obs, &r, &d, &params).unwrap();
                let kernel = r[i].ln() - 0.5 * a * (r[i] - b / a).powi(2);
                diffs.push(full - kernel);
            }
            let spread = diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - diffs.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(spread < 1e-8, "{spread}");
        }
    }
}

#[test]
fn impute_leaves_complete_records_alone() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let params = random_params(2, 1, &mut rng);
    let obs = PolyCylObservation::complete(vec![Angle::new(1.0), Angle::new(2.0)], vec![3.0]);
    let (out, r) = impute_missing(&obs, &[1.0, 2.0], &[0.5], &params, &mut rng).unwrap();
    assert_eq!(out, obs);
    assert_eq!(r, vec![1.0, 2.0]);
}

#[test]
fn impute_everything_recovers_marginals() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let params = JpsnParams::new(
        1,
        1,
        Vector::from_vec(vec![0.5, -0.3, 1.0]),
        Matrix::from_row_slice(3, 3, &[1.0, 0.3, 0.0, 0.3, 1.5, 0.0, 0.0, 0.0, 2.0]),
        Vector::from_vec(vec![2.5]),
    )
    .unwrap();
    let mut obs = PolyCylObservation::complete(vec![Angle::new(0.0)], vec![0.0]);
    obs.angle_missing[0] = true;
    obs.linear_missing[0] = true;
    let (mut r, mut d) = (vec![1.0], vec![1.0]);
    let mut ys = Vec::new();
    let mut thetas = Vec::new();
    for k in 0..40_000 {
        d = sample_d(&obs, &r, &d, &params, &mut rng).unwrap();
        let (o, rr) = impute_missing(&obs, &r, &d, &params, &mut rng).unwrap();
        obs = o;
        r = rr;
        if k % 8 == 0 {
            ys.push(obs.linears[0]);
            thetas.push(obs.angles[0].value());
        }
    }
    let (sim, _) = simulate_jpsn(&params, 5000, &mut rng).unwrap();
    let ks = ks_two_sample(&ys, &sim.linear_series(0));
    assert!(ks.p_value > 0.01, "{ks:?}");
    let sim_theta: Vec<f64> = sim.angle_series(0).iter().map(|a| a.value()).collect();
    let ks = ks_two_sample(&thetas, &sim_theta);
    assert!(ks.p_value > 0.01, "{ks:?}");
}

#[test]
fn impute_tracks_correlated_partner() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let params = JpsnParams::new(
        0,
        2,
        Vector::zeros(2),
        Matrix::from_row_slice(2, 2, &[1.0, 0.99, 0.99, 1.0]),
        Vector::zeros(2),
    )
    .unwrap();
    let mut observed = Vec::new();
    let mut imputed = Vec::new();
    for _ in 0..2000 {
        let y1: f64 = rng.sample(StandardNormal);
        let mut obs = PolyCylObservation::complete(vec![], vec![y1, 0.0]);
        obs.linear_missing[1] = true;
        let (out, _) = impute_missing(&obs, &[], &[0.5, 0.5], &params, &mut rng).unwrap();
        assert_eq!(out.linears[0], y1);
        observed.push(y1);
        imputed.push(out.linears[1]);
    }
    assert!(pearson(&observed, &imputed) > 0.9);
}

fn small_fit(seed: u64) -> PosteriorDraws {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let truth = crate::presets::example_2();
    let (mut data, _) = simulate_jpsn(&truth, 60, &mut rng).unwrap();
    data.observations_mut()[3].angle_missing[1] = true;
    data.observations_mut()[7].linear_missing[0] = true;
    let config = ChainConfig::new(300, 100, 4, seed).unwrap();
    run_gibbs(&data, &PriorSpec::weak(2, 1), &config, &mut chain_rng(seed, 0)).unwrap()
}

#[test]
fn gibbs_is_deterministic() {
    assert_eq!(small_fit(5), small_fit(5));
    assert_ne!(small_fit(5).raw, small_fit(6).raw);
}

#[test]
fn gibbs_draws_are_identified_and_consistent() {
    let draws = small_fit(7);
    assert_eq!(draws.len(), 50);
    assert_eq!(draws.missing.len(), 2);
    for (raw, ident) in draws.raw.iter().zip(&draws.identified) {
        assert!(ident.params.satisfies_constraint());
        for i in 0..2 {
            assert!((ident.params.sigma[(2 * i + 1, 2 * i + 1)] - 1.0).abs() <= 1e-10);
        }
        let (mu, sigma) = ident.c.apply(&ident.params.mu, &ident.params.sigma);
        assert!((mu - &raw.params.mu).amax() < 1e-10);
        assert!((sigma - &raw.params.sigma).amax() < 1e-10);
        for t in 0..raw.latents.r.nrows() {
            for i in 0..2 {
                let want = raw.latents.r[(t, i)] / ident.c.0[i];
                assert!((ident.latents.r[(t, i)] - want).abs() <= 1e-12 * want.abs());
            }
        }
        assert!(raw.latents.all_positive() && ident.latents.all_positive());
        assert!(raw.imputed.iter().all(|v| v.is_finite()));
    }
    assert_eq!(draws.meta.ess.len(), free_parameter_names(2, 1).len());
}

#[test]
fn free_parameters_of_example_layout() {
    let names = free_parameter_names(2, 1);
    assert_eq!(names.len(), 19);
    assert!(!names.contains(&"sigma[2,2]".to_string()));
    assert!(names.contains(&"sigma[1,1]".to_string()));
    let values = free_parameter_values(&crate::presets::example_1());
    assert_eq!(values.len(), 19);
    assert_eq!(values[18], -5.0);
}

#[test]
fn gibbs_validates_inputs() {
    let data = PolyCylDataset::new(1, 1, vec![]).unwrap();
    let config = ChainConfig::new(10, 5, 1, 1).unwrap();
    let mut rng = chain_rng(1, 0);
    assert!(matches!(
        run_gibbs(&data, &PriorSpec::weak(1, 1), &config, &mut rng),
        Err(Error::InsufficientData(_))
    ));
    assert!(ChainConfig::new(10, 10, 1, 1).is_err());
    assert!(ChainConfig::new(10, 5, 0, 1).is_err());
    let data = PolyCylDataset::new(
        1,
        1,
        vec![PolyCylObservation::complete(vec![Angle::new(1.0)], vec![0.0])],
    )
    .unwrap();
    assert!(matches!(
        run_gibbs(&data, &PriorSpec::weak(2, 1), &config, &mut rng),
        Err(Error::Domain(_))
    ));
}

/// Geweke's joint-distribution check: successive conditional simulation of
/// (data, latents) then one Gibbs scan must reproduce the prior.
#[test]
fn gibbs_joint_distribution_test() {
    let (p, q, t) = (1, 1, 10);
    let prior = PriorSpec::new(
        NiwParams::new(Vector::zeros(3), 1.0, 8.0, Matrix::identity(3, 3) * 5.0).unwrap(),
        Vector::zeros(1),
        Matrix::identity(1, 1),
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let draw_prior = |rng: &mut ChaCha8Rng| {
        let (mu, sigma) = sample_niw(&prior.niw, rng).unwrap();
        let lambda = Vector::from_vec(vec![rng.sample::<f64, _>(StandardNormal)]);
        JpsnParams::new(p, q, mu, sigma, lambda).unwrap()
    };
    let probes = |params: &JpsnParams| -> Vec<f64> {
        let mut v: Vec<f64> = params.mu.iter().copied().collect();
        v.extend((0..3).map(|k| params.sigma[(k, k)].ln()));
        v.push(params.lambda[0]);
        v
    };
    let n_keep = 3000;
    let thin = 10;
    let forward: Vec<Vec<f64>> = (0..n_keep).map(|_| probes(&draw_prior(&mut rng))).collect();
    let mut params = draw_prior(&mut rng);
    let mut successive = Vec::with_capacity(n_keep);
    for k in 0..n_keep * thin {
        let (data, latents) = simulate_jpsn(&params, t, &mut rng).unwrap();
        let config = ChainConfig::new(1, 0, 1, 0)
            .unwrap()
            .with_init(Init::Supplied { params, latents });
        let draws = run_gibbs(&data, &prior, &config, &mut rng).unwrap();
        params = draws.raw[0].params.clone();
        if k % thin == 0 {
            successive.push(probes(&params));
        }
    }
    for j in 0..7 {
        let a: Vec<f64> = forward.iter().map(|v| v[j]).collect();
        let b: Vec<f64> = successive.iter().map(|v| v[j]).collect();
        let ks = ks_two_sample(&a, &b);
        assert!(ks.p_value > 0.001, "probe {j}: {ks:?}");
    }
}

#[test]
fn predictive_draws_follow_the_conditional() {
    // p = 0: a masked y2 given y1 has a closed-form skew-normal conditional
    // only through d, so compare against brute-force joint simulation
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let params = JpsnParams::new(
        0,
        2,
        Vector::zeros(2),
        Matrix::from_row_slice(2, 2, &[1.0, 0.8, 0.8, 1.0]),
        Vector::from_vec(vec![1.5, -1.0]),
    )
    .unwrap();
    let mut obs = PolyCylObservation::complete(vec![], vec![0.0, 0.0]);
    obs.linear_missing[0] = true;
    obs.linear_missing[1] = true;
    let data = PolyCylDataset::new(0, 2, vec![obs]).unwrap();
    let draws = vec![params.clone(); 4000];
    let pred = predict_missing(&data, &draws, 5, &mut rng).unwrap();
    assert_eq!(pred.len(), 2);
    let (sim, _) = simulate_jpsn(&params, 4000, &mut rng).unwrap();
    for j in 0..2 {
        let ks = ks_two_sample(&pred[j].1, &sim.linear_series(j));
        assert!(ks.p_value > 0.01, "{ks:?}");
    }
}
