use super::density::density_at;
use super::profile::{CharFlow, InitialProfile};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `f₀ = (1 + cos px)/(2π)` at `α = 1/2`, for which `A₀(w) = 2π² cos(πwᵖ/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleMode {
    pub p: usize,
    pub flow: CharFlow,
    /// `t^* = 1/(pπ³)`.
    pub critical_time: f64,
}

pub fn single_mode_profile(p: usize) -> Result<SingleMode> {
    let flow = CharFlow::new(0.5, InitialProfile::SingleMode { p })?;
    Ok(SingleMode { p, flow, critical_time: 1.0 / (p as f64 * PI.powi(3)) })
}

impl SingleMode {
    /// Critical points of `Φ_{t^*}` on the unit circle: the `2p`-th roots of unity.
    pub fn critical_points(&self) -> Vec<Complex64> {
        let k = 2 * self.p;
        (0..k).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64)).collect()
    }

    /// One-sided difference quotients `(f(t, x₀ + h) - f(t, x₀))/h` for the
    /// given steps.
    pub fn derivative_probe(&self, t: f64, x0: f64, steps: &[f64]) -> Result<Vec<f64>> {
        if steps.iter().any(|h| !(*h > 0.0)) {
            return Err(Error::invalid("probe steps must be positive"));
        }
        let f0 = density_at(t, &self.flow, x0)?.f;
        steps.iter().map(|&h| Ok((density_at(t, &self.flow, x0 + h)?.f - f0) / h)).collect()
    }
}
