use crate::error::{Error, Result};
use std::f64::consts::PI;

fn check(history: &[i64], ring: usize) -> Result<()> {
    if ring < 3 {
        return Err(Error::invalid(format!("winding needs L >= 3, got {ring}")));
    }
    for w in history.windows(2) {
        let d = (w[1] - w[0]).rem_euclid(ring as i64);
        if d != 0 && d != 1 && d != ring as i64 - 1 {
            return Err(Error::invalid(format!("increment {} -> {} is not a unit step mod {ring}", w[0], w[1])));
        }
    }
    Ok(())
}

/// Winding angle of a nearest-neighbour path on `Z/LZ`, read from the ring
/// positions alone: `(2π/L)/sin(2π/L) · Σ_k Im e^{2πi(s_{k+1}-s_k)/L}`.
/// Positions may be given mod `L` or as integer lifts.
pub fn winding(history: &[i64], ring: usize) -> Result<f64> {
    check(history, ring)?;
    let a = 2.0 * PI / ring as f64;
    let sum: f64 = history.windows(2).map(|w| (a * (w[1] - w[0]) as f64).sin()).sum();
    Ok(a / a.sin() * sum)
}

/// `2π(s_n - s_0)/L` for an integer lift of the path.
pub fn winding_direct(lift: &[i64], ring: usize) -> Result<f64> {
    check(lift, ring)?;
    if lift.windows(2).any(|w| (w[1] - w[0]).abs() > 1) {
        return Err(Error::invalid("lift increments must be 0 or ±1"));
    }
    Ok(match (lift.first(), lift.last()) {
        (Some(a), Some(b)) => 2.0 * PI * (b - a) as f64 / ring as f64,
        _ => 0.0,
    })
}
