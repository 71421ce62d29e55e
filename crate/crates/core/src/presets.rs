//! The three `(p, q) = (2, 1)` parameter sets used by the simulation study,
//! already in identified form.

use crate::linalg::{Matrix, Vector};
use crate::model::JpsnParams;

/// Example 1: independent components.
pub fn example_1() -> JpsnParams {
    build(
        &[0.5, -1.0, -0.1, 0.1, -5.0],
        -5.0,
        &[
            [2.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.2, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 2.0],
        ],
    )
}

/// Example 2: dependent components.
pub fn example_2() -> JpsnParams {
    build(
        &[0.2, 0.2, 0.0, 0.1, -5.0],
        5.0,
        &[
            [3.000, 0.000, 0.551, 0.779, 0.857],
            [0.000, 1.000, -0.318, 0.450, 0.495],
            [0.551, -0.318, 0.500, 0.000, -0.318],
            [0.779, 0.450, 0.000, 1.000, 0.450],
            [0.857, 0.495, -0.318, 0.450, 1.000],
        ],
    )
}

/// Example 3: dependent components.
pub fn example_3() -> JpsnParams {
    build(
        &[0.5, 0.5, 0.0, 0.5, 5.0],
        6.0,
        &[
            [3.000, -0.783, 0.377, 0.684, 0.781],
            [-0.783, 1.000, 0.214, 0.335, -0.092],
            [0.377, 0.214, 0.200, 0.231, 0.209],
            [0.684, 0.335, 0.231, 1.000, -0.382],
            [0.781, -0.092, 0.209, -0.382, 1.000],
        ],
    )
}

/// `units` cylindrical units whose linear variables are correlated across
/// units with Pearson correlation `rho`, each with skewness `lambda`. Within a
/// unit the angle and linear parts are mildly dependent.
pub fn correlated_units(units: usize, rho: f64, lambda: f64) -> JpsnParams {
    let n = 3 * units;
    let y0 = 2 * units;
    // cross-unit covariance so that the implied correlation of Y is rho
    let cov = rho * (1.0 + lambda * lambda * (1.0 - 2.0 / std::f64::consts::PI));
    let mut s = Matrix::zeros(n, n);
    let mut mu = Vector::zeros(n);
    for i in 0..units {
        let (a, b, y) = (2 * i, 2 * i + 1, y0 + i);
        s[(a, a)] = 1.0;
        s[(b, b)] = 1.0;
        s[(a, b)] = 0.2;
        s[(b, a)] = 0.2;
        s[(a, y)] = 0.3;
        s[(y, a)] = 0.3;
        s[(b, y)] = 0.2;
        s[(y, b)] = 0.2;
        for j in 0..units {
            s[(y, y0 + j)] = if i == j { 1.0 } else { cov };
        }
        let phase = i as f64 * 1.7;
        mu[a] = phase.cos();
        mu[b] = phase.sin();
    }
    JpsnParams::new_constrained(units, units, mu, s, Vector::from_element(units, lambda))
        .expect("correlated-unit parameters are valid")
}

/// Looks up a preset by name (`example1`, `example2`, `example3`, `units4`).
pub fn by_name(name: &str) -> Option<JpsnParams> {
    match name {
        "units4" => Some(correlated_units(4, 0.7, 0.5)),
        "example1" | "example-1" => Some(example_1()),
        "example2" | "example-2" => Some(example_2()),
        "example3" | "example-3" => Some(example_3()),
        _ => None,
    }
}

fn build(mu: &[f64], lambda: f64, sigma: &[[f64; 5]; 5]) -> JpsnParams {
    let sigma = Matrix::from_fn(5, 5, |i, j| sigma[i][j]);
    JpsnParams::new_constrained(
        2,
        1,
        Vector::from_row_slice(mu),
        sigma,
        Vector::from_vec(vec![lambda]),
    )
    .expect("preset parameters are valid")
}
