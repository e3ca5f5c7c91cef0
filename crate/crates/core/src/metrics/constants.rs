use crate::error::{Error, Result};
use crate::sampling::AttentionSchedule;

/// Constants that the contraction and expansion bounds are phrased in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedConstants {
    /// `1 - (alpha + beta)(n - 1)`
    pub gamma_star: f64,
    /// `1 - alpha (n - 1)`
    pub lambda_star: f64,
    /// `min{alpha, 1 - (n - 1) alpha}`
    pub rho_star: f64,
    /// `(2n - 3) K`
    pub k0: u64,
}

impl DerivedConstants {
    pub fn new(n: usize, alpha: f64, beta: f64, k: u64) -> Self {
        let deg = (n - 1) as f64;
        DerivedConstants {
            gamma_star: 1.0 - (alpha + beta) * deg,
            lambda_star: 1.0 - alpha * deg,
            rho_star: alpha.min(1.0 - deg * alpha),
            k0: (2 * n as u64 - 3) * k,
        }
    }
}

/// Per-window quantities for window `m`, which spans slots
/// `m K0 ..= (m + 1) K0 - 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowCoefficients {
    /// Lower bound on the probability-weighted gap contraction.
    pub x: f64,
    /// Upper bound on the expansion caused by negative attention.
    pub y: f64,
    /// `prod b_t` over the window.
    pub j: f64,
    /// `sum d_t` over the window.
    pub w: f64,
}

fn power(base: f64, exp: u64) -> f64 {
    (0..exp).fold(1.0, |acc, _| acc * base)
}

#[allow(clippy::too_many_arguments)]
pub fn window_coefficients(
    n: usize,
    k: u64,
    alpha: f64,
    beta: f64,
    p_lower: f64,
    positive: &AttentionSchedule,
    negative: &AttentionSchedule,
    m: u64,
) -> Result<WindowCoefficients> {
    let c = DerivedConstants::new(n, alpha, beta, k);
    if c.rho_star <= 0.0 {
        return Err(Error::InvalidAlpha { rho: c.rho_star });
    }
    let slots = m * c.k0..(m + 1) * c.k0;
    let b = |t: u64| positive.mean_at(t);
    let d = |t: u64| negative.mean_at(t);

    let attentive = slots
        .clone()
        .fold(1.0, |acc, t| acc * (b(t) * (1.0 - d(t))));
    let quiet = slots.clone().fold(1.0, |acc, t| acc * (1.0 - d(t)));
    let x = power(p_lower, n as u64 - 1) * power(c.rho_star, c.k0) / 2.0 * attentive;
    let y = power(1.0 + 2.0 * beta * (n - 1) as f64, c.k0) * (1.0 - quiet);
    let j = slots.clone().fold(1.0, |acc, t| acc * b(t));
    let w = slots.fold(0.0, |acc, t| acc + d(t));
    Ok(WindowCoefficients { x, y, j, w })
}
