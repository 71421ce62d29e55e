use std::f64::consts::{LN_2, TAU};

use crate::error::{Error, Result};
use crate::geometry::Angle;

/// Parameters of the Abe-Ley cylindrical density with a log-transformed
/// linear part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbeLeyParams {
    alpha: f64,
    beta: f64,
    mu: Angle,
    kappa: f64,
    lambda: f64,
}

impl AbeLeyParams {
    pub fn new(alpha: f64, beta: f64, mu: Angle, kappa: f64, lambda: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!("beta must be positive, got {beta}")));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::domain(format!("kappa must be non-negative, got {kappa}")));
        }
        if !(-1.0..=1.0).contains(&lambda) {
            return Err(Error::domain(format!("lambda must lie in [-1, 1], got {lambda}")));
        }
        Ok(AbeLeyParams {
            alpha,
            beta,
            mu,
            kappa,
            lambda,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn mu(&self) -> Angle {
        self.mu
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `1 − tanh κ cos(θ − μ)`, the factor that modulates the Weibull rate.
    pub fn rate_modulation(&self, theta: Angle) -> f64 {
        // 1 − tanh κ cos δ = 2 sin²(δ/2) + cos δ (1 − tanh κ), which stays
        // positive near δ = 0 for large κ
        let delta = theta.value() - self.mu.value();
        let half = (0.5 * delta).sin();
        let one_minus_tanh = 2.0 / ((2.0 * self.kappa).exp() + 1.0);
        2.0 * half * half + delta.cos() * one_minus_tanh
    }
}

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// Log of
///
/// `α β^α / (2π cosh κ) · (1 + λ sin(θ − μ)) · e^{y(α−1)}
///  · exp(−(β e^y)^α (1 − tanh κ cos(θ − μ))) · e^y`.
pub fn abeley_log_density(theta: Angle, y: f64, params: &AbeLeyParams) -> f64 {
    let AbeLeyParams {
        alpha,
        beta,
        mu,
        kappa,
        lambda,
    } = *params;
    let delta = theta.value() - mu.value();
    let skew = 1.0 + lambda * delta.sin();
    let scaled = (alpha * (beta.ln() + y)).exp();
    alpha.ln() + alpha * beta.ln() - TAU.ln() - ln_cosh(kappa) + skew.ln() + y * (alpha - 1.0)
        - scaled * params.rate_modulation(theta)
        + y
}

/// Log of the circular marginal
/// `(1 + λ sin(θ − μ)) / (2π cosh κ (1 − tanh κ cos(θ − μ)))`.
pub fn abeley_circular_log_density(theta: Angle, params: &AbeLeyParams) -> f64 {
    let delta = theta.value() - params.mu.value();
    (1.0 + params.lambda * delta.sin()).ln()
        - TAU.ln()
        - ln_cosh(params.kappa)
        - params.rate_modulation(theta).ln()
}
