use super::profile::{check_alpha, CharFlow};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Critical times and the boundary point `w_α` of the step profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepProfileData {
    pub alpha: f64,
    pub w_alpha: Complex64,
    /// `t_*`, end of the packed plateau.
    pub t_lower: f64,
    /// `t^*`, end of the void.
    pub t_upper: f64,
}

pub fn step_profile(alpha: f64) -> Result<StepProfileData> {
    check_alpha(alpha)?;
    let c = (PI * alpha).cos();
    let (a, b) = ((1.0 - c) / (2.0 * PI * PI), (1.0 + c) / (2.0 * PI * PI));
    Ok(StepProfileData { alpha, w_alpha: Complex64::from_polar(1.0, PI * alpha), t_lower: a.min(b), t_upper: a.max(b) })
}

/// Coefficients `(a, b)` of the palindromic quartic `w⁴ + a w³ + b w² + a w + 1`.
pub fn step_quartic(alpha: f64, t: f64) -> (f64, f64) {
    let c = (PI * alpha).cos();
    (4.0 * c * (PI * PI * t - 1.0), 4.0 * c * c + 2.0 - 8.0 * PI * PI * t)
}

/// The two values `s± = (w + 1/w)/2` of the quartic, `s⁺ >= s⁻`.
pub fn step_s_values(alpha: f64, t: f64) -> (f64, f64) {
    let (c, s) = ((PI * alpha).cos(), (PI * alpha).sin());
    let p2t = PI * PI * t;
    let mid = c * (1.0 - p2t);
    let disc = (p2t * (p2t * c * c + 2.0 * s * s)).sqrt();
    (mid + disc, mid - disc)
}

// both roots of w + 1/w = 2s
fn roots_of_s(s: f64) -> [Complex64; 2] {
    let d = Complex64::new(s * s - 1.0, 0.0).sqrt();
    [s + d, s - d]
}

/// Critical points of `Φ_t` for the step profile: the four roots
/// `w = s± ± √(s±² - 1)`, ordered `[w⁺₊, w⁺₋, w⁻₊, w⁻₋]`. For `α > 1/2` the
/// points are those of `1 - α`, negated.
pub fn step_critical_points(alpha: f64, t: f64) -> Result<Vec<Complex64>> {
    check_alpha(alpha)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time {t} must be finite and non-negative")));
    }
    if alpha > 0.5 {
        return Ok(step_critical_points(1.0 - alpha, t)?.into_iter().map(|w| -w).collect());
    }
    let (sp, sm) = step_s_values(alpha, t);
    Ok(roots_of_s(sp).into_iter().chain(roots_of_s(sm)).collect())
}

/// Front angles `(φ₁, φ₂)` with `f = 1/(2πα)` on `[-φ₁, φ₁]` and `f = 0`
/// outside `(-φ₂, φ₂)`; a front that has expired is `None`.
pub fn step_fronts(alpha: f64, t: f64) -> Result<(Option<f64>, Option<f64>)> {
    check_alpha(alpha)?;
    if alpha > 0.5 {
        return Err(Error::invalid(format!("fronts are computed for α <= 1/2, got {alpha}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time {t} must be positive")));
    }
    let data = step_profile(alpha)?;
    let flow = CharFlow::step(alpha)?;
    let (sp, sm) = step_s_values(alpha, t);
    let angle = |s: f64| {
        let theta = s.clamp(-1.0, 1.0).acos();
        theta + t * flow.a0(Complex64::from_polar(1.0, theta)).im
    };
    let phi1 = (t < data.t_lower).then(|| angle(sp));
    let phi2 = (t < data.t_upper).then(|| angle(sm));
    Ok((phi1, phi2))
}

/// JSON report of the step-profile geometry at one time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub alpha: f64,
    pub t: f64,
    pub t_lower: f64,
    pub t_upper: f64,
    pub phi1: Option<f64>,
    pub phi2: Option<f64>,
    pub critical_points: Vec<Complex64>,
}

pub fn step_report(alpha: f64, t: f64) -> Result<StepReport> {
    let data = step_profile(alpha)?;
    let (phi1, phi2) = if alpha <= 0.5 { step_fronts(alpha, t)? } else { (None, None) };
    Ok(StepReport {
        alpha,
        t,
        t_lower: data.t_lower,
        t_upper: data.t_upper,
        phi1,
        phi2,
        critical_points: step_critical_points(alpha, t)?,
    })
}
