use super::series::{self, Series};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Initial macroscopic profile. Moments are `m_n = ∫ f₀(x) e^{-inx} dx`,
/// so that `2π f₀ = 1 + 2 Re Σ_{n≥1} m_n e^{inx}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialProfile {
    /// `m_1, m_2, ...`; later moments vanish.
    Moments { moments: Vec<Complex64> },
    /// `f₀ = 1/(2πα)` on `[-πα, πα]`, zero elsewhere.
    Step,
    /// `f₀ = (1 + cos(px))/(2π)`, used with `α = 1/2`.
    SingleMode { p: usize },
    /// Samples of `f₀` on `x_j = 2πj/M`.
    Grid { samples: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    // m_1, m_2, ... of a polynomial g₀
    Poly(Vec<Complex64>),
    Step,
}

/// The characteristic flow `Φ_t(w) = w e^{t A₀(w)}` with
/// `A₀(w) = 2π² sin(πα(1 + 2g₀(w))) / sin(πα)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharFlow {
    alpha: f64,
    kind: Kind,
    profile: InitialProfile,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("α = {alpha} must lie in (0, 1)")));
    }
    Ok(())
}

impl CharFlow {
    pub fn new(alpha: f64, profile: InitialProfile) -> Result<Self> {
        check_alpha(alpha)?;
        let kind = match &profile {
            InitialProfile::Moments { moments } => {
                if let Some((n, m)) = moments.iter().enumerate().find(|(_, m)| m.norm() > 1.0 + 1e-12) {
                    return Err(Error::invalid(format!("|m_{}| = {} exceeds 1", n + 1, m.norm())));
                }
                Kind::Poly(moments.clone())
            }
            InitialProfile::SingleMode { p } => {
                if *p == 0 {
                    return Err(Error::invalid("single-mode profile needs p >= 1"));
                }
                let mut m = vec![zero(); *p];
                m[p - 1] = Complex64::new(0.5, 0.0);
                Kind::Poly(m)
            }
            InitialProfile::Grid { samples } => Kind::Poly(grid_moments(samples, alpha)?),
            InitialProfile::Step => {
                verify_step_branch(alpha)?;
                Kind::Step
            }
        };
        Ok(Self { alpha, kind, profile })
    }

    pub fn step(alpha: f64) -> Result<Self> {
        Self::new(alpha, InitialProfile::Step)
    }

    pub fn from_moments(alpha: f64, moments: Vec<Complex64>) -> Result<Self> {
        Self::new(alpha, InitialProfile::Moments { moments })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn profile(&self) -> &InitialProfile {
        &self.profile
    }

    /// Radius of the disk on which `A₀` is analytic.
    pub fn analytic_radius(&self) -> f64 {
        match self.kind {
            Kind::Poly(_) => f64::INFINITY,
            Kind::Step => 1.0,
        }
    }

    fn w_alpha(&self) -> Complex64 {
        Complex64::from_polar(1.0, PI * self.alpha)
    }

    // Möbius ratio (1 - w conj(w_α)) / (1 - w w_α) of the step profile
    fn step_ratio(&self, w: Complex64) -> Complex64 {
        let wa = self.w_alpha();
        (1.0 - w * wa.conj()) / (1.0 - w * wa)
    }

    /// `m_1, ..., m_n`.
    pub fn moments(&self, n: usize) -> Vec<Complex64> {
        match &self.kind {
            Kind::Poly(m) => (0..n).map(|k| m.get(k).copied().unwrap_or_default()).collect(),
            Kind::Step => (1..=n)
                .map(|k| {
                    let x = k as f64 * PI * self.alpha;
                    Complex64::new(x.sin() / x, 0.0)
                })
                .collect(),
        }
    }

    /// Taylor series of `g₀` up to `w^order`.
    pub fn g0_series(&self, order: usize) -> Series {
        let mut s = vec![zero()];
        s.extend(self.moments(order));
        s
    }

    pub fn g0(&self, w: Complex64) -> Complex64 {
        match &self.kind {
            Kind::Poly(m) => m.iter().rev().fold(zero(), |acc, &c| (acc + c) * w),
            Kind::Step => self.step_ratio(w).ln() / Complex64::new(0.0, 2.0 * PI * self.alpha),
        }
    }

    pub fn g0_prime(&self, w: Complex64) -> Complex64 {
        match &self.kind {
            Kind::Poly(m) => {
                let mut acc = zero();
                for (k, &c) in m.iter().enumerate().rev() {
                    acc = acc * w + c * (k + 1) as f64;
                }
                acc
            }
            Kind::Step => {
                let wa = self.w_alpha();
                (PI * self.alpha).sin() / (PI * self.alpha * (1.0 - w * wa) * (1.0 - w * wa.conj()))
            }
        }
    }

    pub fn a0(&self, w: Complex64) -> Complex64 {
        let s = (PI * self.alpha).sin();
        match &self.kind {
            Kind::Poly(_) => 2.0 * PI * PI * (PI * self.alpha * (1.0 + 2.0 * self.g0(w))).sin() / s,
            Kind::Step => {
                let (wa, u) = (self.w_alpha(), self.step_ratio(w));
                2.0 * PI * PI * (wa * u - wa.conj() / u) / Complex64::new(0.0, 2.0 * s)
            }
        }
    }

    pub fn a0_prime(&self, w: Complex64) -> Complex64 {
        let s = (PI * self.alpha).sin();
        match &self.kind {
            Kind::Poly(_) => {
                2.0 * PI * PI * (PI * self.alpha * (1.0 + 2.0 * self.g0(w))).cos() * 2.0 * PI * self.alpha
                    * self.g0_prime(w)
                    / s
            }
            Kind::Step => {
                let (wa, u) = (self.w_alpha(), self.step_ratio(w));
                2.0 * PI * PI * (wa + wa.conj() / (u * u)) / ((1.0 - w * wa) * (1.0 - w * wa))
            }
        }
    }

    /// `Φ_t(w) = w e^{t A₀(w)}`.
    pub fn phi(&self, t: f64, w: Complex64) -> Complex64 {
        w * (t * self.a0(w)).exp()
    }

    /// `Φ_t'(w) = e^{t A₀(w)} (1 + t w A₀'(w))`.
    pub fn phi_prime(&self, t: f64, w: Complex64) -> Complex64 {
        (t * self.a0(w)).exp() * (1.0 + t * w * self.a0_prime(w))
    }

    /// Taylor series of `A₀` up to `w^order`.
    pub fn a0_series(&self, order: usize) -> Series {
        let sin = series::sin_shift(PI * self.alpha, order);
        let y: Series = self.g0_series(order).iter().map(|c| c * 2.0 * PI * self.alpha).collect();
        let c = 2.0 * PI * PI / (PI * self.alpha).sin();
        series::compose(&sin, &y, order).iter().map(|v| v * c).collect()
    }
}

/// Moments of grid samples by the trapezoid rule (an FFT), after checking the
/// normalisation and the bounds `0 <= f₀ <= 1/(2πα)`.
fn grid_moments(samples: &[f64], alpha: f64) -> Result<Vec<Complex64>> {
    let m = samples.len();
    if m < 4 {
        return Err(Error::invalid("grid profile needs at least 4 samples"));
    }
    let cap = 1.0 / (2.0 * PI * alpha);
    if let Some(v) = samples.iter().find(|v| !v.is_finite() || **v < -1e-8 || **v > cap + 1e-8) {
        return Err(Error::invalid(format!("sample {v} outside [0, 1/(2πα)] = [0, {cap}]")));
    }
    let mass = samples.iter().sum::<f64>() * 2.0 * PI / m as f64;
    if (mass - 1.0).abs() > 1e-6 {
        return Err(Error::invalid(format!("grid profile has mass {mass}, expected 1")));
    }
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let h = 2.0 * PI / m as f64;
    let mut out: Vec<Complex64> = buf.iter().skip(1).take((m - 1) / 2).map(|c| c * h).collect();
    while out.last().is_some_and(|c| c.norm() < 1e-15) {
        out.pop();
    }
    Ok(out)
}

/// The principal logarithm of the step profile is continuous on the disk as
/// long as the Möbius ratio avoids `(-∞, 0]`; checked on a polar sample.
fn verify_step_branch(alpha: f64) -> Result<()> {
    let wa = Complex64::from_polar(1.0, PI * alpha);
    for i in 1..16 {
        let r = i as f64 / 16.0;
        for j in 0..64 {
            let w = Complex64::from_polar(r, 2.0 * PI * j as f64 / 64.0);
            let u = (1.0 - w * wa.conj()) / (1.0 - w * wa);
            if u.re <= 0.0 && u.im.abs() < 1e-12 {
                return Err(Error::numerical(format!("step-profile ratio {u} hits the branch cut at w = {w}")));
            }
        }
    }
    Ok(())
}
