//! The unitary Dyson Brownian motion on the circle: an Euler scheme for the
//! SDE, the exact eigen-semigroup, and the comparison with the rescaled
//! exclusion process at fixed `N`.

mod spectrum;

pub use spectrum::{
    cue_average, energy, semigroup_moment, spectral_indices, MomentEstimate, SpectralIndex, SymmetricObservable,
};

use crate::error::{Error, Result};
use crate::messep::LatticeParams;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

/// Smallest substep of the adaptive scheme.
pub const DT_MIN: f64 = 1e-8;
// gaps below this count as a boundary start
const COINCIDENT: f64 = 1e-12;

/// Lifted angles with `x_1 <= ... <= x_N <= x_1 + 2π`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DysonState {
    pub angles: Vec<f64>,
    pub time: f64,
}

impl DysonState {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() || angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("angles must be finite and non-empty"));
        }
        if angles.windows(2).any(|w| w[0] > w[1]) || angles[angles.len() - 1] > angles[0] + 2.0 * PI {
            return Err(Error::invalid(format!("angles {angles:?} are not in the closed Weyl chamber")));
        }
        Ok(Self { angles, time: 0.0 })
    }

    /// Smallest gap, including the one across `x_1 + 2π`.
    pub fn min_gap(&self) -> f64 {
        min_gap(&self.angles)
    }
}

fn min_gap(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let wrap = x[0] + 2.0 * PI - x[n - 1];
    x.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::min)
}

fn interior(x: &[f64]) -> bool {
    x.windows(2).all(|w| w[0] < w[1]) && x[x.len() - 1] < x[0] + 2.0 * PI
}

/// `(2π²/N) Σ_{j≠i} cot((x_i - x_j)/2)`.
pub fn drift(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let c = 2.0 * PI * PI / n as f64;
    (0..n)
        .map(|i| c * (0..n).filter(|&j| j != i).map(|j| 1.0 / ((x[i] - x[j]) / 2.0).tan()).sum::<f64>())
        .collect()
}

fn standard_normals(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

// Advances by `dt` with Brownian increment `db`; on an ordering violation the
// step is split in two, the midpoint increment drawn from the Brownian bridge.
fn advance(x: &[f64], dt: f64, db: &[f64], rng: &mut impl Rng) -> Result<Vec<f64>> {
    let sigma = 2.0 * PI / (x.len() as f64).sqrt();
    let b = drift(x);
    let cand: Vec<f64> = x.iter().zip(&b).zip(db).map(|((xi, bi), w)| xi + bi * dt + sigma * w).collect();
    if interior(&cand) {
        return Ok(cand);
    }
    if dt / 2.0 < DT_MIN {
        return Err(Error::numerical(format!("ordering still violated at dt = {dt:.3e} from {x:?}")));
    }
    let z = standard_normals(x.len(), rng);
    let half_sd = (dt / 4.0).sqrt();
    let db1: Vec<f64> = db.iter().zip(&z).map(|(w, zi)| 0.5 * w + half_sd * zi).collect();
    let db2: Vec<f64> = db.iter().zip(&db1).map(|(w, w1)| w - w1).collect();
    let mid = advance(x, dt / 2.0, &db1, rng)?;
    advance(&mid, dt / 2.0, &db2, rng)
}

/// One Euler–Maruyama step of length `dt` for
/// `dx_i = (2π/√N) dB_i + (2π²/N) Σ_{j≠i} cot((x_i - x_j)/2) dt`.
///
/// A step that would break the ordering is halved (down to [`DT_MIN`]). From
/// a boundary point (coincident angles) the first `DT_MIN` is pure noise and
/// the remaining time is covered by doubling substeps.
pub fn sde_step(state: &DysonState, dt: f64, rng: &mut impl Rng) -> Result<DysonState> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid(format!("dt = {dt} must be positive")));
    }
    let n = state.angles.len();
    let mut x = state.angles.clone();
    let mut done: f64;
    if n > 1 && min_gap(&x) < COINCIDENT {
        let sigma = 2.0 * PI / (n as f64).sqrt();
        let h = DT_MIN.min(dt);
        let z = standard_normals(n, rng);
        for (xi, zi) in x.iter_mut().zip(&z) {
            *xi += sigma * h.sqrt() * zi;
        }
        x.sort_by(f64::total_cmp);
        done = h;
        let mut sub = 2.0 * h;
        while done < dt {
            let h = sub.min(dt - done);
            let db: Vec<f64> = standard_normals(n, rng).iter().map(|z| z * h.sqrt()).collect();
            x = advance(&x, h, &db, rng)?;
            done += h;
            sub *= 2.0;
        }
    } else {
        let db: Vec<f64> = standard_normals(n, rng).iter().map(|z| z * dt.sqrt()).collect();
        x = advance(&x, dt, &db, rng)?;
        done = dt;
    }
    Ok(DysonState { angles: x, time: state.time + done })
}

/// Integrates to time `t` with steps `dt` (the last one shortened).
pub fn sde_path(start: &DysonState, t: f64, dt: f64, rng: &mut impl Rng) -> Result<DysonState> {
    let mut s = start.clone();
    let target = start.time + t;
    while s.time < target - 1e-15 {
        let h = dt.min(target - s.time);
        s = sde_step(&s, h, rng)?;
    }
    Ok(s)
}

/// Eigenangles of a Haar unitary matrix: i.i.d. uniform proposals accepted
/// with probability `|Δ(e^{ix})|² / N^N`, returned sorted in `[0, 2π)`.
pub fn sample_cue(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let bound = (n as f64).powi(n as i32);
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 * PI).collect();
        let mut v = 1.0;
        for i in 0..n {
            for j in i + 1..n {
                v *= (Complex64::from_polar(1.0, x[i]) - Complex64::from_polar(1.0, x[j])).norm_sqr();
            }
        }
        if rng.random::<f64>() * bound < v {
            let mut x = x;
            x.sort_by(f64::total_cmp);
            return x;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub ring: usize,
    pub observable: String,
    pub discrete: Complex64,
    pub continuous: Complex64,
    pub abs_err: f64,
}

/// Which Dyson time the exclusion process at `⌊L² t⌋` steps is compared with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeMatching {
    /// `⌊L² t⌋ / L²`, the time actually elapsed on the lattice.
    #[default]
    Matched,
    /// `t` itself; the rounding adds an `O(L⁻²)` error that jitters with `L`.
    Literal,
}

/// Discrete versus continuous expectation of the eigenfunction `Ψ_m/Ψ_c`.
///
/// For each `L` the exclusion process starts from the integer lift nearest to
/// `L x₀ / 2π` and runs `⌊L² t⌋` steps, so that its expectation is
/// `(ρ_m/ρ_c)^{⌊L² t⌋} f_m(2πx/L)`; the Dyson side starts from `2πx/L` and
/// gives `e^{-E_m s} f_m(2πx/L)` with `s` chosen by `matching`.
pub fn low_density_compare(
    rings: &[usize],
    m: &SpectralIndex,
    t: f64,
    x0: &[f64],
    matching: TimeMatching,
) -> Result<Vec<CompareRow>> {
    let n = m.len();
    if x0.len() != n {
        return Err(Error::invalid(format!("{} start angles for N = {n}", x0.len())));
    }
    if !(t >= 0.0) {
        return Err(Error::invalid("time must be non-negative"));
    }
    let width = m.values()[n - 1] - m.values()[0] + 1;
    rings
        .iter()
        .map(|&ring| {
            if (ring as i64) < width {
                return Err(Error::invalid(format!("L = {ring} is smaller than m_N - m_1 + 1 = {width}")));
            }
            let params = LatticeParams::new(ring, n)?;
            let lift = matched_lift(x0, ring)?;
            let angles: Vec<f64> = lift.iter().map(|&x| 2.0 * PI * x as f64 / ring as f64).collect();
            let f = m.eigenfunction(&angles)?;
            let r = params.rho_of_lift(m.values()) / params.rho_of_lift(&params.compact_lift());
            let steps = crate::simulator::diffusive_steps(ring, t);
            let discrete = f * r.powi(steps as i32);
            let s = match matching {
                TimeMatching::Matched => steps as f64 / (ring * ring) as f64,
                TimeMatching::Literal => t,
            };
            let continuous = f * (-m.energy() * s).exp();
            Ok(CompareRow {
                ring,
                observable: format!("m={:?}", m.values()),
                discrete,
                continuous,
                abs_err: (discrete - continuous).norm(),
            })
        })
        .collect()
}

/// Integer sites nearest to `L x / 2π`, kept strictly increasing and inside
/// one period.
pub fn matched_lift(x: &[f64], ring: usize) -> Result<Vec<i64>> {
    let mut lift: Vec<i64> = x.iter().map(|&a| (a * ring as f64 / (2.0 * PI)).round() as i64).collect();
    for i in 1..lift.len() {
        if lift[i] <= lift[i - 1] {
            lift[i] = lift[i - 1] + 1;
        }
    }
    if lift[lift.len() - 1] >= lift[0] + ring as i64 {
        return Err(Error::invalid(format!("angles {x:?} do not fit on a ring of {ring} sites")));
    }
    Ok(lift)
}

/// CSV with columns `t,path_id,x1..xN`.
pub fn write_paths_csv(rows: &[(f64, u64, Vec<f64>)], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let n = rows.first().map_or(0, |r| r.2.len());
    let mut header = vec!["t".to_string(), "path_id".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    out.write_record(&header)?;
    for (t, id, x) in rows {
        let mut rec = vec![t.to_string(), id.to_string()];
        rec.extend(x.iter().map(|v| v.to_string()));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// CSV with columns `L,observable,discrete_re,discrete_im,continuous_re,continuous_im,abs_err`.
pub fn write_compare_csv(rows: &[CompareRow], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["L", "observable", "discrete_re", "discrete_im", "continuous_re", "continuous_im", "abs_err"])?;
    for r in rows {
        out.write_record([
            r.ring.to_string(),
            r.observable.clone(),
            r.discrete.re.to_string(),
            r.discrete.im.to_string(),
            r.continuous.re.to_string(),
            r.continuous.im.to_string(),
            r.abs_err.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
