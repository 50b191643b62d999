//! Exact Monte Carlo sampling of the MESSEP on the ring, with a lift of the
//! particles to the integers so that windings and tagged positions survive
//! the periodic identification.

mod conditioned;
mod initial;
mod winding;

pub use conditioned::conditioned_srw_compare;
pub use initial::{quantile_positions, InitialCondition};
pub use winding::{winding, winding_direct};

use crate::error::{Error, Result};
use crate::messep::{Configuration, LatticeParams};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

/// Steps between full recomputations of the cached log-sine sums.
const REFRESH_EVERY: u64 = 4096;

/// The RNG used for path `path_id` of an ensemble seeded with `seed`: ChaCha8
/// keyed by the seed, one stream per path.
pub fn path_rng(seed: u64, path_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_id);
    rng
}

/// One MESSEP trajectory. `lift` holds integer positions in the Weyl chamber
/// `x_1 < ... < x_N < x_1 + L`; particle `j` of the lift keeps its label
/// forever since particles never cross.
#[derive(Clone, Debug)]
pub struct ChainState {
    params: LatticeParams,
    lift: Vec<i64>,
    step_count: u64,
    // log|sin(dπ/L)| for d = 0..L, with the d = 0 entry set to 0
    log_sin: Vec<f64>,
    // log ψ(x + e_i) - log ψ(x) and log ψ(x - e_i) - log ψ(x), blocked pairs counted as 0
    up: Vec<f64>,
    down: Vec<f64>,
}

impl ChainState {
    /// Starts from a lift, which must lie in the Weyl chamber.
    pub fn from_lift(params: LatticeParams, lift: Vec<i64>) -> Result<Self> {
        let (l, n) = (params.ring() as i64, params.particles());
        if lift.len() != n {
            return Err(Error::invalid(format!("lift has {} entries, expected N = {n}", lift.len())));
        }
        if lift.windows(2).any(|w| w[0] >= w[1]) || lift[n - 1] >= lift[0] + l {
            return Err(Error::invalid(format!("lift {lift:?} is not in the Weyl chamber for L = {l}")));
        }
        let log_sin = (0..=params.ring())
            .map(|d| if d == 0 || d == params.ring() { 0.0 } else { (d as f64 * PI / l as f64).sin().ln() })
            .collect();
        let mut s = Self { params, lift, step_count: 0, log_sin, up: vec![0.0; n], down: vec![0.0; n] };
        s.refresh();
        Ok(s)
    }

    /// Starts from a configuration; the lift is the sorted sites themselves.
    pub fn from_config(params: LatticeParams, config: &Configuration) -> Result<Self> {
        Self::from_lift(params, config.as_i64())
    }

    pub fn params(&self) -> &LatticeParams {
        &self.params
    }

    pub fn lift(&self) -> &[i64] {
        &self.lift
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// The configuration: the lift reduced mod `L` and sorted.
    pub fn config(&self) -> Configuration {
        Configuration::from_lift(&self.lift, self.params.ring())
    }

    /// `2π X_k / L` reduced to `[0, 2π)`, in lift order.
    pub fn angles(&self) -> Vec<f64> {
        let l = self.params.ring() as i64;
        self.lift.iter().map(|&x| 2.0 * PI * x.rem_euclid(l) as f64 / l as f64).collect()
    }

    fn t(&self, d: i64) -> f64 {
        self.log_sin[d.rem_euclid(self.params.ring() as i64) as usize]
    }

    fn pair(&self, xi: i64, xj: i64, dir: i64) -> f64 {
        self.t(xi + dir - xj) - self.t(xi - xj)
    }

    fn refresh(&mut self) {
        let n = self.lift.len();
        for i in 0..n {
            let (mut u, mut d) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    u += self.pair(self.lift[i], self.lift[j], 1);
                    d += self.pair(self.lift[i], self.lift[j], -1);
                }
            }
            self.up[i] = u;
            self.down[i] = d;
        }
    }

    fn blocked(&self, i: usize, dir: i64) -> bool {
        let (n, l) = (self.lift.len(), self.params.ring() as i64);
        let x = &self.lift;
        if dir > 0 {
            if i + 1 < n { x[i] + 1 == x[i + 1] } else { x[i] + 1 == x[0] + l }
        } else if i > 0 {
            x[i] - 1 == x[i - 1]
        } else {
            x[0] - 1 == x[n - 1] - l
        }
    }

    /// Unnormalised weights `ψ(η)/ψ(ξ)` of the admissible moves, as
    /// `(particle, direction, weight)`.
    pub fn move_weights(&self) -> Vec<(usize, i64, f64)> {
        let mut out = Vec::with_capacity(2 * self.lift.len());
        for i in 0..self.lift.len() {
            if !self.blocked(i, 1) {
                out.push((i, 1, self.up[i].exp()));
            }
            if !self.blocked(i, -1) {
                out.push((i, -1, self.down[i].exp()));
            }
        }
        out
    }

    /// Moves particle `i` by `dir`, updating the cached sums in `O(N)`.
    fn apply(&mut self, i: usize, dir: i64) {
        let old = self.lift[i];
        let new = old + dir;
        for j in 0..self.lift.len() {
            if j == i {
                continue;
            }
            let xj = self.lift[j];
            self.up[j] += self.pair(xj, new, 1) - self.pair(xj, old, 1);
            self.down[j] += self.pair(xj, new, -1) - self.pair(xj, old, -1);
        }
        self.lift[i] = new;
        let (mut u, mut d) = (0.0, 0.0);
        for j in 0..self.lift.len() {
            if j != i {
                u += self.pair(new, self.lift[j], 1);
                d += self.pair(new, self.lift[j], -1);
            }
        }
        self.up[i] = u;
        self.down[i] = d;
        self.step_count += 1;
        if self.step_count.is_multiple_of(REFRESH_EVERY) {
            self.refresh();
        }
        debug_assert!(self.lift.windows(2).all(|w| w[0] < w[1]), "exclusion violated: {:?}", self.lift);
        debug_assert!(self.lift[self.lift.len() - 1] < self.lift[0] + self.params.ring() as i64);
    }

    /// One MESSEP step: a neighbour `η` is chosen with probability
    /// `ψ(η) / (ρ ψ(ξ))`, by inverse CDF over the admissible moves.
    /// Returns the moved particle and its direction.
    pub fn step(&mut self, rng: &mut impl Rng) -> (usize, i64) {
        let weights = self.move_weights();
        let total: f64 = weights.iter().map(|w| w.2).sum();
        debug_assert!(
            (total / self.params.rho() - 1.0).abs() < 1e-8,
            "move weights sum to {total}, expected ρ = {}",
            self.params.rho()
        );
        let mut u = rng.random::<f64>() * total;
        let mut pick = weights[weights.len() - 1];
        for w in &weights {
            if u < w.2 {
                pick = *w;
                break;
            }
            u -= w.2;
        }
        self.apply(pick.0, pick.1);
        (pick.0, pick.1)
    }

    pub fn empirical(&self, n_max: usize) -> EmpiricalMeasure {
        EmpiricalMeasure::new(self.angles(), n_max)
    }
}

/// Empirical measure of the angles `2πX_k/L` and its moments
/// `M_n = (1/N) Σ_k e^{i n θ_k}` for `0 <= n <= n_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalMeasure {
    pub angles: Vec<f64>,
    pub moments: Vec<Complex64>,
}

impl EmpiricalMeasure {
    pub fn new(angles: Vec<f64>, n_max: usize) -> Self {
        let n = angles.len() as f64;
        let moments = (0..=n_max)
            .map(|k| angles.iter().map(|&a| Complex64::from_polar(1.0, k as f64 * a)).sum::<Complex64>() / n)
            .collect();
        Self { angles, moments }
    }

    /// `M_n` for any integer `n <= n_max` in absolute value; `M_{-n} = conj(M_n)`.
    pub fn moment(&self, n: i64) -> Option<Complex64> {
        let m = *self.moments.get(n.unsigned_abs() as usize)?;
        Some(if n < 0 { m.conj() } else { m })
    }

    /// Wrapped-Gaussian smoothing of the empirical measure on the grid
    /// `x_j = 2πj/grid`, normalised as a density on `[0, 2π)`.
    pub fn smoothed_density(&self, grid: usize, bandwidth: f64) -> Vec<f64> {
        let norm = 1.0 / (self.angles.len() as f64 * bandwidth * (2.0 * PI).sqrt());
        let wraps = (4.0 * bandwidth / (2.0 * PI)).ceil() as i64 + 1;
        (0..grid)
            .map(|j| {
                let x = 2.0 * PI * j as f64 / grid as f64;
                let mut s = 0.0;
                for &a in &self.angles {
                    for k in -wraps..=wraps {
                        let d = (x - a + 2.0 * PI * k as f64) / bandwidth;
                        s += (-0.5 * d * d).exp();
                    }
                }
                s * norm
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub params: LatticeParams,
    pub initial: InitialCondition,
    pub paths: usize,
    pub seed: u64,
    /// Diffusive times `t`, recorded after `⌊L² t⌋` steps.
    pub times: Vec<f64>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
}

fn default_n_max() -> usize {
    4
}

#[derive(Clone, Debug, Serialize)]
pub struct PathRecord {
    pub path_id: u64,
    pub records: Vec<(f64, EmpiricalMeasure)>,
}

/// Step index `⌊L² t⌋` of a diffusive time.
pub fn diffusive_steps(ring: usize, t: f64) -> u64 {
    ((ring * ring) as f64 * t).floor() as u64
}

/// Runs `job.paths` independent trajectories, path `k` on stream `k` of the
/// seed, recording the empirical measure at each requested time.
pub fn run(job: &RunSpec) -> Result<Vec<PathRecord>> {
    if job.times.is_empty() {
        return Err(Error::invalid("no recording times"));
    }
    if job.times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::invalid("recording times must be finite and non-negative"));
    }
    let mut order: Vec<usize> = (0..job.times.len()).collect();
    order.sort_by(|&a, &b| job.times[a].total_cmp(&job.times[b]));
    (0..job.paths as u64)
        .into_par_iter()
        .map(|path_id| {
            let mut rng = path_rng(job.seed, path_id);
            let mut state = job.initial.realize(job.params, &mut rng)?;
            let mut records = vec![None; job.times.len()];
            for &k in &order {
                let target = diffusive_steps(job.params.ring(), job.times[k]);
                while state.step_count() < target {
                    state.step(&mut rng);
                }
                records[k] = Some((job.times[k], state.empirical(job.n_max)));
            }
            Ok(PathRecord { path_id, records: records.into_iter().map(|r| r.expect("filled")).collect() })
        })
        .collect()
}

/// Sample mean and its standard error `sqrt(E|f - mean|² / n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: Complex64,
    pub std_err: f64,
}

impl Estimate {
    pub fn from_samples(samples: &[Complex64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<Complex64>() / n;
        let var = samples.iter().map(|s| (s - mean).norm_sqr()).sum::<f64>() / (n - 1.0).max(1.0);
        Self { mean, std_err: (var / n).sqrt() }
    }

    /// `|mean - target|` in units of the standard error.
    pub fn z_score(&self, target: Complex64) -> f64 {
        let d = (self.mean - target).norm();
        if self.std_err == 0.0 {
            if d == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            d / self.std_err
        }
    }
}

/// Monte Carlo estimates of `E[f(X_n)]` for every observable and every step
/// count in `steps`, over `paths` independent paths started at `start`.
/// Result is indexed `[step][observable]`.
pub fn ensemble_expectations<F>(
    start: &ChainState,
    steps: &[u64],
    paths: usize,
    seed: u64,
    observables: &[F],
) -> Vec<Vec<Estimate>>
where
    F: Fn(&Configuration) -> Complex64 + Sync,
{
    let mut sorted = steps.to_vec();
    sorted.sort_unstable();
    let per_path: Vec<Vec<Vec<Complex64>>> = (0..paths as u64)
        .into_par_iter()
        .map(|path_id| {
            let mut rng = path_rng(seed, path_id);
            let mut state = start.clone();
            let mut out = Vec::with_capacity(steps.len());
            for &n in &sorted {
                while state.step_count() - start.step_count() < n {
                    state.step(&mut rng);
                }
                let c = state.config();
                out.push(observables.iter().map(|f| f(&c)).collect());
            }
            out
        })
        .collect();
    steps
        .iter()
        .map(|n| {
            let k = sorted.binary_search(n).expect("present");
            (0..observables.len())
                .map(|o| Estimate::from_samples(&per_path.iter().map(|p| p[k][o]).collect::<Vec<_>>()))
                .collect()
        })
        .collect()
}

/// CSV dump with columns `path_id,t,n,re,im`.
pub fn write_moments_csv(records: &[PathRecord], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["path_id", "t", "n", "re", "im"])?;
    for p in records {
        for (t, m) in &p.records {
            for (n, v) in m.moments.iter().enumerate() {
                out.write_record([p.path_id.to_string(), t.to_string(), n.to_string(), v.re.to_string(), v.im.to_string()])?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
