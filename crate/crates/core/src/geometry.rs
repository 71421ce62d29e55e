//! Angles on the circle and the planar transforms shared by every model.

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::error::{Error, Result};

/// An angle in radians, always stored in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    /// Reduces `radians` modulo 2π.
    pub fn new(radians: f64) -> Self {
        Angle(wrap(radians))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }

    /// Unit vector `(cos θ, sin θ)`.
    pub fn unit(self) -> [f64; 2] {
        let (s, c) = self.0.sin_cos();
        [c, s]
    }
}

impl From<f64> for Angle {
    fn from(x: f64) -> Self {
        Angle::new(x)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::new(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::new(self.0 - rhs.0)
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::new(-self.0)
    }
}

fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Quadrant-corrected arctangent of `s / c`, returned in `[0, 2π)`.
///
/// The five cases are: `c > 0, s ≥ 0` gives `atan(s/c)`; `c = 0, s > 0` gives
/// π/2; `c < 0` gives `atan(s/c) + π`; `c ≥ 0, s < 0` gives `atan(s/c) + 2π`;
/// and `(0, 0)` is undefined.
pub fn atan_star(s: f64, c: f64) -> Result<Angle> {
    if !(s.is_finite() && c.is_finite()) {
        return Err(Error::domain("atan_star of a non-finite point"));
    }
    let v = if c > 0.0 && s >= 0.0 {
        (s / c).atan()
    } else if c == 0.0 && s > 0.0 {
        PI / 2.0
    } else if c < 0.0 {
        (s / c).atan() + PI
    } else if s < 0.0 {
        if c == 0.0 {
            1.5 * PI
        } else {
            (s / c).atan() + TAU
        }
    } else {
        return Err(Error::domain("atan_star is undefined at (0, 0)"));
    };
    Ok(Angle::new(v))
}

/// Maps `(θ, r)` to the point `r (cos θ, sin θ)`.
pub fn polar_embed(theta: Angle, r: f64) -> Result<[f64; 2]> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    let [c, s] = theta.unit();
    Ok([r * c, r * s])
}

/// Inverse of [`polar_embed`]: the angle and norm of a planar point.
pub fn to_polar(x: f64, y: f64) -> Result<(Angle, f64)> {
    let theta = atan_star(y, x)?;
    Ok((theta, x.hypot(y)))
}

/// Shortest arc length between two angles, in `[0, π]`.
pub fn angular_distance(a: Angle, b: Angle) -> f64 {
    PI - (PI - (a.0 - b.0).abs()).abs()
}

/// Turning angles and log step lengths of a planar track.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackFeatures {
    /// Heading change between consecutive steps; `None` when either step is
    /// degenerate.
    pub turning_angles: Vec<Option<Angle>>,
    /// Log length of the step that ends at the same vertex as the turn;
    /// `None` for zero-length steps.
    pub log_step_lengths: Vec<Option<f64>>,
}

/// Derives `n − 2` aligned turning angles and log step lengths from `n`
/// planar positions.
///
/// Entry `k` pairs the turn made at position `k + 1` with the log length of
/// the step leaving it (`pos[k+2] − pos[k+1]`). Duplicate consecutive
/// positions yield missing entries instead of an error.
pub fn derive_track_features(positions: &[[f64; 2]]) -> Result<TrackFeatures> {
    if positions.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 positions, got {}",
            positions.len()
        )));
    }
    let steps: Vec<Option<(Angle, f64)>> = positions
        .windows(2)
        .map(|w| {
            let dx = w[1][0] - w[0][0];
            let dy = w[1][1] - w[0][1];
            to_polar(dx, dy).ok().filter(|(_, len)| *len > 0.0)
        })
        .collect();

    let mut turning_angles = Vec::with_capacity(steps.len() - 1);
    let mut log_step_lengths = Vec::with_capacity(steps.len() - 1);
    for pair in steps.windows(2) {
        let turn = match (pair[0], pair[1]) {
            (Some((h0, _)), Some((h1, _))) => Some(h1 - h0),
            _ => None,
        };
        turning_angles.push(turn);
        log_step_lengths.push(pair[1].map(|(_, len)| len.ln()));
    }
    Ok(TrackFeatures {
        turning_angles,
        log_step_lengths,
    })
}

/// Like [`derive_track_features`] but fails on the first zero-length step.
pub fn derive_track_features_strict(positions: &[[f64; 2]]) -> Result<(Vec<Angle>, Vec<f64>)> {
    if let Some(k) = positions.windows(2).position(|w| w[0] == w[1]) {
        return Err(Error::DegenerateStep(k));
    }
    let f = derive_track_features(positions)?;
    Ok((
        f.turning_angles.into_iter().flatten().collect(),
        f.log_step_lengths.into_iter().flatten().collect(),
    ))
}
