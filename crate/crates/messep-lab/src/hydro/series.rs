//! Truncated power series with complex coefficients.

use num_complex::Complex64;

pub type Series = Vec<Complex64>;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn mul(a: &[Complex64], b: &[Complex64], order: usize) -> Series {
    let mut out = vec![zero(); order + 1];
    for (i, &x) in a.iter().enumerate().take(order + 1) {
        if x == zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `exp(a)` through `g' = a' g`.
pub fn exp(a: &[Complex64], order: usize) -> Series {
    let mut g = vec![zero(); order + 1];
    g[0] = a.first().copied().unwrap_or_default().exp();
    for k in 1..=order {
        let mut s = zero();
        for j in 1..=k.min(a.len().saturating_sub(1)) {
            s += a[j] * j as f64 * g[k - j];
        }
        g[k] = s / k as f64;
    }
    g
}

/// `Σ_k c_k y^k` for a series `y` with `y(0) = 0`, by Horner's scheme.
pub fn compose(outer: &[Complex64], y: &[Complex64], order: usize) -> Series {
    debug_assert!(y.first().is_none_or(|c| c.norm() < 1e-300), "inner series must vanish at 0");
    let mut acc = vec![zero(); order + 1];
    for &c in outer.iter().take(order + 1).rev() {
        acc = mul(&acc, y, order);
        acc[0] += c;
    }
    acc
}

/// Taylor coefficients of `sin(a + x)` at 0 up to `x^order`.
pub fn sin_shift(a: f64, order: usize) -> Series {
    let mut out = Vec::with_capacity(order + 1);
    let mut fact = 1.0;
    for k in 0..=order {
        if k > 0 {
            fact *= k as f64;
        }
        out.push(Complex64::new((a + k as f64 * std::f64::consts::FRAC_PI_2).sin() / fact, 0.0));
    }
    out
}

pub fn derivative(a: &[Complex64]) -> Series {
    a.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

/// `a^p` truncated at `order`.
pub fn pow(a: &[Complex64], p: usize, order: usize) -> Series {
    let mut out = vec![zero(); order + 1];
    out[0] = Complex64::new(1.0, 0.0);
    for _ in 0..p {
        out = mul(&out, a, order);
    }
    out
}
