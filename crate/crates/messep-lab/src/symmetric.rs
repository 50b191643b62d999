//! Schur, power-sum and skew-hook functions evaluated at points of the unit circle.

use crate::error::{Error, Result};
use crate::partitions::{DoubleHook, Hook, Partition};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

const UNIT_TOL: f64 = 1e-12;
/// Below this Vandermonde modulus the determinant ratio is not trusted.
pub const VANDERMONDE_FLOOR: f64 = 1e-10;
/// Largest weight handled by the tableau fallback.
pub const TABLEAU_MAX_WEIGHT: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct RootTuple {
    points: Vec<Complex64>,
    order: Option<usize>,
}

impl RootTuple {
    /// Arbitrary points, each of modulus one.
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if let Some(z) = points.iter().find(|z| (z.norm() - 1.0).abs() > UNIT_TOL) {
            return Err(Error::invalid(format!("point {z} is not on the unit circle")));
        }
        Ok(Self { points, order: None })
    }

    /// Points without the unit-modulus check (used for `s_λ(1,...,1)` and
    /// off-circle evaluations).
    pub fn unchecked(points: Vec<Complex64>) -> Self {
        Self { points, order: None }
    }

    /// `e^{2πi k_j / L}` for integer sites `k_j`.
    pub fn from_sites(sites: &[i64], ring: usize) -> Self {
        let points = sites
            .iter()
            .map(|&k| Complex64::from_polar(1.0, 2.0 * PI * k.rem_euclid(ring as i64) as f64 / ring as f64))
            .collect();
        Self { points, order: Some(ring) }
    }

    /// `e^{i x_j}`.
    pub fn from_angles(angles: &[f64]) -> Self {
        Self { points: angles.iter().map(|&x| Complex64::from_polar(1.0, x)).collect(), order: None }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `∏_{i<j} (z_i - z_j)`, the determinant of `(z_j^{N-i})`.
    pub fn vandermonde(&self) -> Complex64 {
        let z = &self.points;
        let mut v = Complex64::new(1.0, 0.0);
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                v *= z[i] - z[j];
            }
        }
        v
    }
}

fn powi(z: Complex64, e: i64) -> Complex64 {
    if e >= 0 {
        z.powu(e as u32)
    } else {
        z.inv().powu((-e) as u32)
    }
}

/// `s_λ(z)`. Uses the alternant ratio, falling back to the tableau sum when
/// the points are (nearly) coincident.
pub fn schur_eval(lambda: &Partition, z: &RootTuple) -> Result<Complex64> {
    let n = z.len();
    if lambda.len() > n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if lambda.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let vdm = z.vandermonde();
    if vdm.norm() < VANDERMONDE_FLOOR {
        if lambda.weight() <= TABLEAU_MAX_WEIGHT {
            return Ok(schur_tableau(lambda, z));
        }
        return Err(Error::DegenerateEvaluation(format!(
            "Vandermonde modulus {:.3e} too small for λ = {lambda} with |λ| > {TABLEAU_MAX_WEIGHT}",
            vdm.norm()
        )));
    }
    Ok(alternant(lambda, z) / vdm)
}

/// `det(z_j^{λ_i + N - i})`.
pub fn alternant(lambda: &Partition, z: &RootTuple) -> Complex64 {
    let n = z.len();
    let m = DMatrix::from_fn(n, n, |i, j| powi(z.points[j], (lambda.part(i) + n - 1 - i) as i64));
    m.lu().determinant()
}

/// `s_λ(z)` by the branching rule over interlacing sequences, which sums the
/// semistandard tableaux of shape `λ` grouped by the cells holding the
/// largest entry.
pub fn schur_tableau(lambda: &Partition, z: &RootTuple) -> Complex64 {
    fn rec(lambda: &[usize], z: &[Complex64]) -> Complex64 {
        let n = z.len();
        if lambda.iter().all(|&p| p == 0) {
            return Complex64::new(1.0, 0.0);
        }
        if n == 0 || lambda.len() > n && lambda[n] > 0 {
            return Complex64::new(0.0, 0.0);
        }
        let last = z[n - 1];
        let rows = lambda.len().min(n);
        let mut mu = vec![0usize; rows];
        let mut total = Complex64::new(0.0, 0.0);
        interlace(lambda, &mut mu, 0, n, &mut |mu| {
            let removed: usize = lambda.iter().sum::<usize>() - mu.iter().sum::<usize>();
            total += rec(mu, &z[..n - 1]) * last.powu(removed as u32);
        });
        total
    }
    // μ ≺ λ: λ_{i+1} <= μ_i <= λ_i, with μ of length at most n - 1.
    fn interlace(lambda: &[usize], mu: &mut Vec<usize>, i: usize, n: usize, f: &mut impl FnMut(&[usize])) {
        if i == mu.len() {
            f(mu);
            return;
        }
        let hi = if i + 1 >= n { 0 } else { lambda[i] };
        let lo = lambda.get(i + 1).copied().unwrap_or(0);
        if lo > hi {
            return;
        }
        for v in lo..=hi {
            mu[i] = v;
            interlace(lambda, mu, i + 1, n, f);
        }
    }
    rec(lambda.parts(), &z.points)
}

/// `s_λ(1, ..., 1) = ∏_{i<j} (λ_i - λ_j + j - i)/(j - i)` with `N` ones.
pub fn schur_dimension(lambda: &Partition, n: usize) -> f64 {
    if lambda.len() > n {
        return 0.0;
    }
    let mut v = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            v *= (lambda.part(i) as f64 - lambda.part(j) as f64 + (j - i) as f64) / (j - i) as f64;
        }
    }
    v
}

/// `p_n(z) = Σ z_i^n` for any integer `n`; `p_0 = N`.
pub fn power_sum_eval(n: i64, z: &RootTuple) -> Complex64 {
    z.points.iter().map(|&x| powi(x, n)).sum()
}

/// Elementary symmetric polynomial `e_k(z)`.
pub fn elementary_eval(k: usize, z: &RootTuple) -> Complex64 {
    let mut e = vec![Complex64::new(0.0, 0.0); k + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for &x in &z.points {
        for j in (1..=k).rev() {
            e[j] = e[j] + e[j - 1] * x;
        }
    }
    e[k]
}

/// `s_{{n|k}}(z)` with the out-of-range convention: zero unless
/// `0 <= k <= n-1`, and `s_{{0|j}} = δ_{0j}`.
pub fn hook_eval(n: i64, k: i64, z: &RootTuple) -> Result<Complex64> {
    match Hook::checked(n, k) {
        Some(p) => schur_eval(&p, z),
        None => Ok(Complex64::new(0.0, 0.0)),
    }
}

/// `|p_n(z) - Σ_k (-1)^k s_{{n|k}}(z)|`.
pub fn hook_expansion_check(n: usize, z: &RootTuple) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("hook expansion needs n >= 1"));
    }
    let mut rhs = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let s = hook_eval(n as i64, k as i64, z)?;
        rhs += if k % 2 == 0 { s } else { -s };
    }
    Ok((power_sum_eval(n as i64, z) - rhs).norm())
}

fn gamma_sign(particles: usize) -> f64 {
    if particles.is_multiple_of(2) {
        -1.0
    } else {
        1.0
    }
}

fn require_ring(z: &RootTuple, ring: usize) -> Result<()> {
    for p in &z.points {
        let k = p.arg() * ring as f64 / (2.0 * PI);
        if (k - k.round()).abs() > 1e-9 {
            return Err(Error::invalid(format!("point {p} is not an {ring}-th root of unity")));
        }
    }
    Ok(())
}

/// `|conj(s_{{n|k}}(z)) - (-1)^{2γ} s_{{L-n|N-k-1}}(z)|` for `z ∈ U_L^N`.
pub fn conj_hook_identity(n: usize, k: usize, z: &RootTuple, ring: usize) -> Result<f64> {
    if ring <= n {
        return Err(Error::invalid(format!("L - n = {} must be positive", ring as i64 - n as i64)));
    }
    Hook::new(n, k)?;
    require_ring(z, ring)?;
    let particles = z.len();
    let lhs = hook_eval(n as i64, k as i64, z)?.conj();
    let rhs = hook_eval((ring - n) as i64, particles as i64 - k as i64 - 1, z)? * gamma_sign(particles);
    Ok((lhs - rhs).norm())
}

/// Schur value of the double hook `{n|k,l}`.
pub fn double_hook_eval(h: DoubleHook, z: &RootTuple, ring: usize) -> Result<Complex64> {
    let p = h
        .partition(ring, z.len())
        .ok_or_else(|| Error::invalid(format!("{h:?} is not a partition for L = {ring}, N = {}", z.len())))?;
    schur_eval(&p, z)
}

/// `|p_n p_{-n}(z) - (-1)^{2γ} Σ_{k,l} (-1)^{k+l} s_{{n|k,l}}(z) - n|`.
///
/// Needs `L >= 2n + N`. When `N < 2n` some `{n|k,l}` have a negative
/// number of trailing ones and are not partitions; those terms take the
/// value of the rational Schur expansion instead.
pub fn double_hook_expansion(n: usize, z: &RootTuple, ring: usize) -> Result<f64> {
    let particles = z.len();
    if n == 0 {
        return Err(Error::invalid("double hook expansion needs n >= 1"));
    }
    if ring < 2 * n + particles {
        return Err(Error::invalid(format!("need L >= 2n + N, got L = {ring}, n = {n}, N = {particles}")));
    }
    require_ring(z, ring)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        for l in 0..n {
            let h = DoubleHook::new(n, k, l)?;
            let s = match h.partition(ring, particles) {
                Some(p) => schur_eval(&p, z)?,
                None => double_hook_via_skew(h, z)?,
            };
            sum += if (k + l) % 2 == 0 { s } else { -s };
        }
    }
    let lhs = power_sum_eval(n as i64, z) * power_sum_eval(-(n as i64), z);
    Ok((lhs - sum * gamma_sign(particles) - n as f64).norm())
}

/// Inner shape of a skew hook.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkewInner {
    /// `{m|i}`.
    Hook { m: usize, i: usize },
    /// `{m|i}' = {m|m-i-1}`.
    Conjugate { m: usize, i: usize },
}

/// `s_{{n|k}∖τ}(z)` via the two-term hook rule.
pub fn skew_hook_eval(outer: Hook, inner: SkewInner, z: &RootTuple) -> Result<Complex64> {
    let (m, leg) = match inner {
        SkewInner::Hook { m, i } => (m, i as i64),
        SkewInner::Conjugate { m, i } => (m, m as i64 - i as i64 - 1),
    };
    if m == 0 {
        return hook_eval(outer.n as i64, outer.k as i64, z);
    }
    // containment of {m|leg} in {n|k}: leg and arm must both fit
    let arm = m as i64 - leg - 1;
    let outer_arm = outer.n as i64 - outer.k as i64 - 1;
    if m > outer.n || leg < 0 || leg > outer.k as i64 || arm < 0 || arm > outer_arm {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let r = outer.n as i64 - m as i64;
    let j = outer.k as i64 - leg;
    Ok(hook_eval(r, j, z)? + hook_eval(r, j - 1, z)?)
}

/// Right-hand side of the rational Schur expansion of `s_{{n|k,l}}`:
/// `(-1)^{N-1} Σ_τ (-1)^{|τ|} s_{{n|k}∖τ} conj(s_{{n|l}∖τ'})`.
pub fn double_hook_via_skew(h: DoubleHook, z: &RootTuple) -> Result<Complex64> {
    let outer_k = Hook::new(h.n, h.k)?;
    let outer_l = Hook::new(h.n, h.l)?;
    let mut sum = hook_eval(h.n as i64, h.k as i64, z)? * hook_eval(h.n as i64, h.l as i64, z)?.conj();
    for m in 1..=h.n {
        for i in 0..m {
            let a = skew_hook_eval(outer_k, SkewInner::Hook { m, i }, z)?;
            let b = skew_hook_eval(outer_l, SkewInner::Conjugate { m, i }, z)?;
            let term = a * b.conj();
            sum += if m % 2 == 0 { term } else { -term };
        }
    }
    let sign = if (z.len() - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sum * sign)
}
