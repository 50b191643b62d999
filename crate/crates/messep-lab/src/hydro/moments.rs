use super::profile::CharFlow;
use super::series;
use crate::error::{Error, Result};
use crate::partitions::enumerate_partitions;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest moment order accepted by [`limit_moment`].
pub const MAX_MOMENT_ORDER: usize = 512;
/// Largest order for the literal sum over partitions.
pub const MAX_PARTITION_ORDER: usize = 30;

fn check_order(n: usize, cap: usize) -> Result<()> {
    if n == 0 || n > cap {
        return Err(Error::invalid(format!("moment order {n} outside 1..={cap}")));
    }
    Ok(())
}

/// Taylor coefficients at 0 of `h_t(x)^n`, `h_t(x) = exp(-2π² t sin(απ + x)/sin(απ))`,
/// up to `x^order`.
pub fn h_power_jet(n: usize, t: f64, alpha: f64, order: usize) -> Vec<Complex64> {
    let c = -(n as f64) * 2.0 * PI * PI * t / (PI * alpha).sin();
    let a: Vec<Complex64> = series::sin_shift(PI * alpha, order).iter().map(|v| v * c).collect();
    series::exp(&a, order)
}

/// `𝔪_n(t)` as the literal sum over `π ⊢ n` of
/// `(2πα)^{ℓ-1}/∏ l_i! · ∂^{ℓ-1} h_tⁿ(0) · m_π`.
pub fn limit_moment_partitions(n: usize, t: f64, flow: &CharFlow) -> Result<Complex64> {
    check_order(n, MAX_PARTITION_ORDER)?;
    let alpha = flow.alpha();
    let m = flow.moments(n);
    let jet = h_power_jet(n, t, alpha, n - 1);
    let mut total = Complex64::new(0.0, 0.0);
    for pi in enumerate_partitions(n) {
        let l = pi.len();
        // ∂^{l-1} h(0) = (l-1)! jet[l-1]
        let mut coeff = jet[l - 1] * (2.0 * PI * alpha).powi(l as i32 - 1);
        for k in 1..l {
            coeff *= k as f64;
        }
        for (_, mult) in pi.multiplicities() {
            for k in 1..=mult {
                coeff /= k as f64;
            }
        }
        let m_pi: Complex64 = pi.parts().iter().map(|&p| m[p - 1]).product();
        total += coeff * m_pi;
    }
    Ok(total)
}

/// `𝔪_n(t)`, grouping the partition sum by length:
/// `Σ_ℓ (2πα)^{ℓ-1} ∂^{ℓ-1}h_tⁿ(0)/ℓ! · [zⁿ] g₀(z)^ℓ`.
pub fn limit_moment(n: usize, t: f64, flow: &CharFlow) -> Result<Complex64> {
    check_order(n, MAX_MOMENT_ORDER)?;
    Ok(limit_moments(n, t, flow)?[n - 1])
}

/// `𝔪_1(t), ..., 𝔪_{n_max}(t)`.
pub fn limit_moments(n_max: usize, t: f64, flow: &CharFlow) -> Result<Vec<Complex64>> {
    check_order(n_max, MAX_MOMENT_ORDER)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time {t} must be finite and non-negative")));
    }
    let alpha = flow.alpha();
    let g = flow.g0_series(n_max);
    // powers[ℓ] = g₀^ℓ truncated at z^{n_max}
    let mut powers = vec![g.clone()];
    for _ in 1..n_max {
        let next = series::mul(powers.last().expect("nonempty"), &g, n_max);
        powers.push(next);
    }
    Ok((1..=n_max)
        .map(|n| {
            let jet = h_power_jet(n, t, alpha, n - 1);
            (1..=n)
                .map(|l| jet[l - 1] * (2.0 * PI * alpha).powi(l as i32 - 1) / l as f64 * powers[l - 1][n])
                .sum()
        })
        .collect())
}

/// `𝔪_n(t) = (1/n) [w^{n-1}] g₀'(w) e^{-n t A₀(w)}` (Lagrange inversion of
/// `z = Φ_t(w)`), for `n = 1..=n_max`.
pub fn lagrange_moments(n_max: usize, t: f64, flow: &CharFlow) -> Result<Vec<Complex64>> {
    check_order(n_max, MAX_MOMENT_ORDER)?;
    let a0 = flow.a0_series(n_max);
    let dg = series::derivative(&flow.g0_series(n_max));
    Ok((1..=n_max)
        .map(|n| {
            let e: Vec<Complex64> = a0.iter().map(|c| c * (-(n as f64) * t)).collect();
            let prod = series::mul(&dg, &series::exp(&e, n - 1), n - 1);
            prod[n - 1] / n as f64
        })
        .collect())
}

/// Quadrature settings for [`coefficient_a_n`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ContourOptions {
    /// Circle radius; defaults to 1 for entire `A₀` and 0.9 otherwise.
    pub radius: Option<f64>,
    /// Trapezoid nodes; defaults to `16 n_max`, at least `8 n_max`.
    pub nodes: Option<usize>,
}

/// Taylor coefficients `𝔞_n(t)` of `w(t, z)` from
/// `𝔞_n = (1/(2πin)) ∮ e^{-n t A₀(w)} w^{-n} dw` by the trapezoid rule.
pub fn coefficient_a_n(t: f64, flow: &CharFlow, n_max: usize, opts: ContourOptions) -> Result<Vec<Complex64>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time {t} must be positive")));
    }
    if n_max == 0 {
        return Err(Error::invalid("n_max must be positive"));
    }
    let limit = flow.analytic_radius();
    let r = opts.radius.unwrap_or(if limit.is_infinite() { 1.0 } else { 0.9 * limit });
    if !(r > 0.0 && r < limit) {
        return Err(Error::invalid(format!("radius {r} leaves the analyticity disk of radius {limit}")));
    }
    let nodes = opts.nodes.unwrap_or(16 * n_max);
    if nodes < 8 * n_max {
        return Err(Error::invalid(format!("{nodes} nodes is fewer than 8 n_max = {}", 8 * n_max)));
    }
    let w: Vec<Complex64> = (0..nodes).map(|k| Complex64::from_polar(r, 2.0 * PI * k as f64 / nodes as f64)).collect();
    let ratio: Vec<Complex64> = w.iter().map(|&wk| (-t * flow.a0(wk)).exp() / wk).collect();
    // running (e^{-tA₀}/w)^n · w, one entry per node
    let mut acc: Vec<Complex64> = w.clone();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        for (a, q) in acc.iter_mut().zip(&ratio) {
            *a *= q;
        }
        let s: Complex64 = acc.iter().sum();
        out.push(s / (nodes as f64 * n as f64));
    }
    Ok(out)
}
