use super::flow::{flow_invert, flow_invert_seeded};
use super::profile::{check_alpha, CharFlow};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

/// Default number of grid nodes.
pub const DEFAULT_GRID: usize = 1024;
/// Depth of the radial continuation `r_j = 1 - 2^{-j}`.
pub const RADIAL_DEPTH: u32 = 40;
const SATURATION_TOL: f64 = 1e-9;

/// `𝒱_α(z) = 2π² sin(πα(1 + 2z)) / sin(πα)`.
pub fn velocity(z: Complex64, alpha: f64) -> Result<Complex64> {
    check_alpha(alpha)?;
    Ok(2.0 * PI * PI * (PI * alpha * (1.0 + 2.0 * z)).sin() / (PI * alpha).sin())
}

/// `𝒥_α = sin(2π²α f) sinh(2π²α ℋf)`.
pub fn flux(f: f64, hf: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let c = 2.0 * PI * PI * alpha;
    Ok((c * f).sin() * (c * hf).sinh())
}

fn fft(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

fn ifft_real(mut buf: Vec<Complex64>) -> Vec<f64> {
    let m = buf.len();
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    buf.iter().map(|c| c.re / m as f64).collect()
}

// signed frequency of FFT bin k, with the Nyquist bin reported as 0
fn frequency(k: usize, m: usize) -> f64 {
    if 2 * k < m {
        k as f64
    } else if 2 * k > m {
        k as f64 - m as f64
    } else {
        0.0
    }
}

fn check_grid(m: usize) -> Result<()> {
    if m < 4 || !m.is_power_of_two() {
        return Err(Error::invalid(format!("grid size {m} must be a power of two >= 4")));
    }
    Ok(())
}

/// Circle Hilbert transform on `x_j = 2πj/M`: multiplier `-i sgn(n)`.
pub fn hilbert_transform(samples: &[f64]) -> Result<Vec<f64>> {
    let m = samples.len();
    check_grid(m)?;
    let mut c = fft(samples);
    for (k, v) in c.iter_mut().enumerate() {
        let n = frequency(k, m);
        *v *= if n == 0.0 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, -n.signum()) };
    }
    Ok(ifft_real(c))
}

/// Spectral derivative on `x_j = 2πj/M`.
pub fn spectral_derivative(samples: &[f64]) -> Result<Vec<f64>> {
    let m = samples.len();
    check_grid(m)?;
    let mut c = fft(samples);
    for (k, v) in c.iter_mut().enumerate() {
        *v *= Complex64::new(0.0, frequency(k, m));
    }
    Ok(ifft_real(c))
}

/// Reconstructed density on `x_j = 2πj/M`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityGrid {
    pub t: f64,
    pub alpha: f64,
    pub f: Vec<f64>,
    pub saturated_low: Vec<bool>,
    pub saturated_high: Vec<bool>,
    /// Nodes whose boundary value came from radial extrapolation.
    pub front: Vec<bool>,
}

impl DensityGrid {
    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn x(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.f.len() as f64
    }

    /// Trapezoid rule for `∫ f dx`.
    pub fn mass(&self) -> f64 {
        self.f.iter().sum::<f64>() * 2.0 * PI / self.f.len() as f64
    }

    pub fn sup_deviation(&self) -> f64 {
        self.f.iter().map(|v| (v - 1.0 / (2.0 * PI)).abs()).fold(0.0, f64::max)
    }

    pub fn any_saturated(&self) -> bool {
        self.saturated_low.iter().chain(&self.saturated_high).chain(&self.front).any(|&b| b)
    }

    /// `n`-th Fourier coefficient `∫ f e^{-inx} dx` by the trapezoid rule.
    pub fn moment(&self, n: i64) -> Complex64 {
        let m = self.f.len();
        let h = 2.0 * PI / m as f64;
        self.f.iter().enumerate().map(|(j, &v)| Complex64::from_polar(v * h, -(n as f64) * self.x(j))).sum()
    }
}

/// Density value at one point and whether a front was crossed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointDensity {
    pub f: f64,
    pub front: bool,
}

fn density_of(flow: &CharFlow, w: Complex64) -> f64 {
    (1.0 + 2.0 * flow.g0(w).re) / (2.0 * PI)
}

/// `f(t, x) = (1 + 2 Re g₀(w(t, e^{ix}))) / 2π`.
///
/// The boundary root is tried directly first. Otherwise it is tracked along
/// `z = r_j e^{ix}`, `r_j = 1 - 2^{-j}`, and polished at `r = 1`; if that also
/// fails the value is extrapolated from the last two radii and flagged.
pub fn density_at(t: f64, flow: &CharFlow, x: f64) -> Result<PointDensity> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time {t} must be positive")));
    }
    let z = Complex64::from_polar(1.0, x);
    if let Ok(inv) = flow_invert(t, z, flow) {
        return Ok(PointDensity { f: density_of(flow, inv.w), front: false });
    }
    let mut seed = None;
    let mut last = [Complex64::new(0.0, 0.0); 2];
    for j in 1..=RADIAL_DEPTH {
        let r = 1.0 - 0.5f64.powi(j as i32);
        let inv = flow_invert_seeded(t, z * r, flow, seed)
            .map_err(|e| Error::numerical(format!("radial continuation at x = {x}, r = {r}: {e}")))?;
        seed = Some(inv.w);
        last = [last[1], flow.g0(inv.w)];
    }
    if let Ok(inv) = flow_invert_seeded(t, z, flow, seed) {
        return Ok(PointDensity { f: density_of(flow, inv.w), front: false });
    }
    let g = 2.0 * last[1] - last[0];
    Ok(PointDensity { f: (1.0 + 2.0 * g.re) / (2.0 * PI), front: true })
}

/// `f(t, ·)` on `M` equispaced nodes, in parallel over nodes.
pub fn density_reconstruct(t: f64, flow: &CharFlow, m: usize) -> Result<DensityGrid> {
    if m == 0 {
        return Err(Error::invalid("grid size must be positive"));
    }
    let pts: Vec<PointDensity> = (0..m)
        .into_par_iter()
        .map(|j| {
            let x = 2.0 * PI * j as f64 / m as f64;
            density_at(t, flow, x).map_err(|e| Error::numerical(format!("node {j} (x = {x:.6}): {e}")))
        })
        .collect::<Result<_>>()?;
    let cap = 1.0 / (2.0 * PI * flow.alpha());
    Ok(DensityGrid {
        t,
        alpha: flow.alpha(),
        f: pts.iter().map(|p| p.f).collect(),
        saturated_low: pts.iter().map(|p| p.f < SATURATION_TOL).collect(),
        saturated_high: pts.iter().map(|p| p.f > cap - SATURATION_TOL).collect(),
        front: pts.iter().map(|p| p.front).collect(),
    })
}

/// Sup norm of `∂_t f + ∂_x 𝒥_α f / (α sin πα)` at time `t`, with a centered
/// difference of spacing `dt` in time and spectral derivatives in space.
pub fn pde_residual(t: f64, flow: &CharFlow, m: usize, dt: f64) -> Result<f64> {
    check_grid(m)?;
    if !(dt > 0.0 && dt < t) {
        return Err(Error::invalid(format!("dt = {dt} must lie in (0, t = {t})")));
    }
    let now = density_reconstruct(t, flow, m)?;
    if now.any_saturated() {
        return Err(Error::invalid(format!("density is saturated at t = {t}; the strong form does not apply")));
    }
    let before = density_reconstruct(t - dt, flow, m)?;
    let after = density_reconstruct(t + dt, flow, m)?;
    let alpha = flow.alpha();
    let hf = hilbert_transform(&now.f)?;
    let j: Vec<f64> = now.f.iter().zip(&hf).map(|(&f, &h)| flux(f, h, alpha)).collect::<Result<_>>()?;
    let dj = spectral_derivative(&j)?;
    let c = 1.0 / (alpha * (PI * alpha).sin());
    Ok((0..m)
        .map(|i| ((after.f[i] - before.f[i]) / (2.0 * dt) + c * dj[i]).abs())
        .fold(0.0, f64::max))
}

/// Taylor coefficients `[zⁿ] g₀(w(t, z))`, `n = 0..=n_max`, from `nodes`
/// samples on `|z| = radius`.
pub fn transported_coefficients(t: f64, flow: &CharFlow, n_max: usize, radius: f64, nodes: usize) -> Result<Vec<Complex64>> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::invalid(format!("radius {radius} must lie in (0, 1)")));
    }
    if nodes <= 2 * n_max {
        return Err(Error::invalid(format!("{nodes} nodes cannot resolve {n_max} coefficients")));
    }
    let mut buf: Vec<Complex64> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let z = Complex64::from_polar(radius, 2.0 * PI * k as f64 / nodes as f64);
            flow_invert(t, z, flow).map(|inv| flow.g0(inv.w))
        })
        .collect::<Result<_>>()?;
    FftPlanner::new().plan_fft_forward(nodes).process(&mut buf);
    Ok((0..=n_max).map(|n| buf[n] / (nodes as f64 * radius.powi(n as i32))).collect())
}

/// CSV with columns `t,x,f,saturated_low,saturated_high`.
pub fn write_density_csv(grids: &[DensityGrid], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "x", "f", "saturated_low", "saturated_high"])?;
    for g in grids {
        for j in 0..g.len() {
            out.write_record([
                g.t.to_string(),
                g.x(j).to_string(),
                g.f[j].to_string(),
                (g.saturated_low[j] as u8).to_string(),
                (g.saturated_high[j] as u8).to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}
