use crate::error::{Error, Result};
use num_complex::Complex64;

/// Partial exponential Bell polynomial `B_{n,k}(x_1, ..., x_{n-k+1})`,
/// summed over the partitions of `n` into exactly `k` parts.
pub fn bell_partial(n: usize, k: usize, x: &[Complex64]) -> Result<Complex64> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("B_{{{n},{k}}} needs 1 <= k <= n")));
    }
    if x.len() < n - k + 1 {
        return Err(Error::invalid(format!(
            "B_{{{n},{k}}} needs {} arguments, got {}",
            n - k + 1,
            x.len()
        )));
    }
    let log_fact: Vec<f64> = (0..=n).scan(0.0, |acc, i| {
        if i > 0 {
            *acc += (i as f64).ln();
        }
        Some(*acc)
    }).collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut mult = vec![0usize; n + 1];
    walk(n, k, n - k + 1, &mut mult, &mut |mult| {
        // n! / ∏ (l_i! (i!)^{l_i})
        let mut log_c = log_fact[n];
        let mut prod = Complex64::new(1.0, 0.0);
        for (i, &l) in mult.iter().enumerate().skip(1) {
            if l > 0 {
                log_c -= log_fact[l] + l as f64 * log_fact[i];
                prod *= x[i - 1].powu(l as u32);
            }
        }
        total += prod * log_c.exp().round_if_small();
    });
    Ok(total)
}

trait RoundIfSmall {
    fn round_if_small(self) -> f64;
}

impl RoundIfSmall for f64 {
    // Multinomial coefficients are integers; snap them while f64 holds them exactly.
    fn round_if_small(self) -> f64 {
        if self < 9.0e15 {
            self.round()
        } else {
            self
        }
    }
}

// Enumerates multiplicity vectors of partitions of `rest` into `parts` parts,
// each part at most `max`.
fn walk(rest: usize, parts: usize, max: usize, mult: &mut [usize], f: &mut impl FnMut(&[usize])) {
    if parts == 0 {
        if rest == 0 {
            f(mult);
        }
        return;
    }
    if rest < parts {
        return;
    }
    let hi = max.min(rest - (parts - 1));
    let lo = rest.div_ceil(parts);
    for p in (lo..=hi).rev() {
        mult[p] += 1;
        walk(rest - p, parts - 1, p, mult, f);
        mult[p] -= 1;
    }
}
