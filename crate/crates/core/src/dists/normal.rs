//! Scalar standard-normal helpers.

use std::f64::consts::{PI, SQRT_2};

use libm::erfc;
use statrs::function::erf::erfc_inv;

/// `ln √(2π)`
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard normal CDF, through the complementary error function so that
/// both tails keep full relative precision.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    0.5 * erfc(-x / SQRT_2)
}

/// Upper tail `1 − Φ(x)`.
pub fn std_normal_sf(x: f64) -> f64 {
    std_normal_cdf(-x)
}

pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub fn std_normal_ln_pdf(x: f64) -> f64 {
    -0.5 * x * x - LN_SQRT_2PI
}

/// Log density of `N(mean, var)` at `x`.
pub fn normal_ln_pdf(x: f64, mean: f64, var: f64) -> f64 {
    let z = x - mean;
    -0.5 * z * z / var - 0.5 * var.ln() - LN_SQRT_2PI
}

/// Inverse of [`std_normal_cdf`] on `(0, 1)`.
pub fn std_normal_inv_cdf(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    -SQRT_2 * erfc_inv(2.0 * p)
}

/// Mills ratio `(1 − Φ(x)) / φ(x)`.
pub fn mills_ratio(x: f64) -> f64 {
    if x > 30.0 {
        // Asymptotic series; the omitted term is below 1e-13 relative here.
        let x2 = x * x;
        let inv = 1.0 / x2;
        (1.0 - inv * (1.0 - 3.0 * inv * (1.0 - 5.0 * inv * (1.0 - 7.0 * inv * (1.0 - 9.0 * inv)))))
            / x
    } else {
        std_normal_sf(x) / std_normal_pdf(x)
    }
}

/// `ln(1 + d Φ(d)/φ(d))`, the radial integral that appears in the projected
/// normal density, evaluated without overflow or catastrophic cancellation.
pub(crate) fn ln_radial_factor(d: f64) -> f64 {
    if d >= 0.0 {
        // ln(φ(d) + d Φ(d)) − ln φ(d)
        (std_normal_pdf(d) + d * std_normal_cdf(d)).ln() + 0.5 * d * d + LN_SQRT_2PI
    } else {
        let x = -d;
        if x > 30.0 {
            // 1 − x R(x) = x⁻²(1 − 3x⁻² + 15x⁻⁴ − 105x⁻⁶ + 945x⁻⁸)
            let inv = 1.0 / (x * x);
            (inv * (1.0 - 3.0 * inv * (1.0 - 5.0 * inv * (1.0 - 7.0 * inv * (1.0 - 9.0 * inv)))))
                .ln()
        } else {
            (1.0 - x * mills_ratio(x)).ln()
        }
    }
}
