use super::profile::CharFlow;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const NEWTON_ITERS: usize = 200;
const RESIDUAL_TOL: f64 = 1e-14;
/// Nodes of the argument-principle check.
pub const WINDING_NODES: usize = 256;

/// How a root of `Φ_t(w) = z` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvertPath {
    Direct,
    TimeContinuation,
    Certified,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Inversion {
    pub w: Complex64,
    pub residual: f64,
    pub path: InvertPath,
}

// Newton on F(w) = w - z e^{-tA₀(w)}, with backtracking on |F|. A₀ is entire
// or rational, so iterates may leave the disk; admissibility is checked after.
pub(crate) fn newton(flow: &CharFlow, t: f64, z: Complex64, seed: Complex64) -> Option<(Complex64, f64)> {
    let f = |w: Complex64| w - z * (-t * flow.a0(w)).exp();
    let mut w = seed;
    let mut fw = f(w);
    if !fw.is_finite() {
        return None;
    }
    let scale = z.norm().max(1e-300);
    for _ in 0..NEWTON_ITERS {
        if fw.norm() <= RESIDUAL_TOL * scale.max(1.0) {
            return Some((w, fw.norm()));
        }
        let d = 1.0 + t * z * flow.a0_prime(w) * (-t * flow.a0(w)).exp();
        if !d.is_finite() || d.norm() == 0.0 {
            return None;
        }
        let mut step = fw / d;
        let mut accepted = false;
        for _ in 0..40 {
            let cand = w - step;
            let fc = f(cand);
            if fc.is_finite() && fc.norm() < fw.norm() {
                w = cand;
                fw = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (fw.norm() <= 1e-12 * scale.max(1.0)).then_some((w, fw.norm()))
}

/// `Re(w Φ_t'(w)/Φ_t(w)) = Re(1 + t w A₀'(w))`, positive when `Φ_t` preserves
/// the orientation of the circle through `w`.
pub fn radial_orientation(flow: &CharFlow, t: f64, w: Complex64) -> f64 {
    (1.0 + t * w * flow.a0_prime(w)).re
}

// A root inside the disk |w| < |z|, or on the unit circle with |z| = 1 when
// Φ_t maps the inside of the disk locally into itself there.
fn admissible(flow: &CharFlow, t: f64, z: Complex64, w: Complex64) -> bool {
    let r = z.norm();
    if w.norm() < r * (1.0 - 1e-12) || (t == 0.0 && (w - z).norm() < 1e-12) {
        return true;
    }
    (r - 1.0).abs() < 1e-12 && (w.norm() - 1.0).abs() < 1e-9 && radial_orientation(flow, t, w) >= -1e-9
}

/// Winding number of `Φ_t(w) - z` along `|w| = radius`.
pub fn winding_count(flow: &CharFlow, t: f64, z: Complex64, radius: f64) -> Result<i64> {
    let vals: Vec<Complex64> = (0..=WINDING_NODES)
        .map(|k| flow.phi(t, Complex64::from_polar(radius, 2.0 * PI * k as f64 / WINDING_NODES as f64)) - z)
        .collect();
    if vals.iter().any(|v| !v.is_finite() || v.norm() < 1e-14) {
        return Err(Error::numerical(format!("Φ_t - z vanishes or blows up on |w| = {radius}")));
    }
    let mut total = 0.0;
    for w in vals.windows(2) {
        let d = (w[1] / w[0]).arg();
        if d.abs() > 0.5 * PI {
            return Err(Error::numerical(format!("winding integrand under-resolved on |w| = {radius}")));
        }
        total += d;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// The unique `w` in the closed disk `|w| <= |z|` with `Φ_t(w) = z`.
///
/// Newton is seeded at `z e^{-tA₀(z)}`; if it stalls or lands outside the
/// disk, the root is followed from `t = 0` by time continuation; as a last
/// resort the argument principle confirms a single root inside and a polar
/// grid of seeds is tried.
pub fn flow_invert(t: f64, z: Complex64, flow: &CharFlow) -> Result<Inversion> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time {t} must be finite and non-negative")));
    }
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::invalid(format!("|z| = {} exceeds 1", z.norm())));
    }
    if t == 0.0 || z.norm() == 0.0 {
        return Ok(Inversion { w: z, residual: 0.0, path: InvertPath::Direct });
    }
    flow_invert_seeded(t, z, flow, None)
}

pub(crate) fn flow_invert_seeded(t: f64, z: Complex64, flow: &CharFlow, seed: Option<Complex64>) -> Result<Inversion> {
    let seeds = [seed, Some(z * (-t * flow.a0(z)).exp()).filter(|s| s.is_finite()), Some(z)];
    for s in seeds.into_iter().flatten() {
        if let Some((w, res)) = newton(flow, t, z, s) {
            if admissible(flow, t, z, w) {
                return Ok(Inversion { w, residual: res, path: InvertPath::Direct });
            }
        }
    }
    for steps in [8usize, 32, 128, 512] {
        let mut w = z;
        let mut ok = true;
        for k in 1..=steps {
            let tk = t * k as f64 / steps as f64;
            match newton(flow, tk, z, w) {
                Some((wk, _)) if admissible(flow, tk, z, wk) => w = wk,
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let res = (w - z * (-t * flow.a0(w)).exp()).norm();
            return Ok(Inversion { w, residual: res, path: InvertPath::TimeContinuation });
        }
    }
    let r = z.norm();
    if r < 1.0 - 1e-9 {
        let wind = winding_count(flow, t, z, r)?;
        if wind != 1 {
            return Err(Error::numerical(format!("argument principle counts {wind} roots of Φ_t(w) = {z} in |w| < {r}, t = {t}")));
        }
        for i in 1..=8 {
            for j in 0..16 {
                let s = Complex64::from_polar(r * i as f64 / 9.0, 2.0 * PI * j as f64 / 16.0);
                if let Some((w, res)) = newton(flow, t, z, s) {
                    if admissible(flow, t, z, w) {
                        return Ok(Inversion { w, residual: res, path: InvertPath::Certified });
                    }
                }
            }
        }
        return Err(Error::numerical(format!(
            "one root of Φ_t(w) = {z} certified in |w| < {r} at t = {t}, but Newton did not reach it"
        )));
    }
    Err(Error::numerical(format!("no admissible root of Φ_t(w) = {z} at t = {t}")))
}
