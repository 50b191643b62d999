//! Monte Carlo against exact or limiting predictions.

use crate::error::{Error, Result};
use crate::hydro::{density_reconstruct, CharFlow, DensityGrid};
use crate::messep::{semigroup_apply, Configuration, LatticeParams, SpectralKernel};
use crate::partitions::Partition;
use crate::simulator::{ensemble_expectations, run, ChainState, Estimate, InitialCondition, RunSpec};
use crate::symmetric::{power_sum_eval, schur_eval, RootTuple};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// A symmetric observable of the roots `e^{2πiη_j/L}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Observable {
    Schur(Partition),
    PowerSum(i64),
    /// `|p_1|²`.
    AbsP1Squared,
}

impl Observable {
    pub fn name(&self) -> String {
        match self {
            Observable::Schur(l) => format!("s{:?}", l.parts()),
            Observable::PowerSum(n) => format!("p{n}"),
            Observable::AbsP1Squared => "|p1|^2".to_string(),
        }
    }

    pub fn eval(&self, z: &RootTuple) -> Result<Complex64> {
        Ok(match self {
            Observable::Schur(l) => schur_eval(l, z)?,
            Observable::PowerSum(n) => power_sum_eval(*n, z),
            Observable::AbsP1Squared => Complex64::new(power_sum_eval(1, z).norm_sqr(), 0.0),
        })
    }
}

/// `s_(1)`, `s_(2,1)`, `p_2`, `|p_1|²` and `s_(3,1)`.
pub fn default_observables() -> Vec<Observable> {
    let p = |v: &[usize]| Partition::new(v).expect("valid partition");
    vec![
        Observable::Schur(p(&[1])),
        Observable::Schur(p(&[2, 1])),
        Observable::PowerSum(2),
        Observable::AbsP1Squared,
        Observable::Schur(p(&[3, 1])),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableRow {
    pub observable: String,
    pub steps: u64,
    pub estimate: Estimate,
    pub exact: Complex64,
    pub z_score: f64,
}

/// Empirical `E_η[f(X_n)]` against the spectral sum `Pⁿ f(η)`.
pub fn mc_vs_spectral(
    params: LatticeParams,
    start: &Configuration,
    steps: &[u64],
    paths: usize,
    seed: u64,
    observables: &[Observable],
) -> Result<Vec<ObservableRow>> {
    if steps.is_empty() {
        return Err(Error::invalid("no step counts given"));
    }
    if paths < 2 {
        return Err(Error::invalid("need at least two paths"));
    }
    let kernel = SpectralKernel::new(params)?;
    let values: Vec<Vec<Complex64>> = observables
        .iter()
        .map(|o| (0..kernel.len()).map(|i| o.eval(&kernel.root_tuple(i))).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let state = ChainState::from_config(params, start)?;
    let fs: Vec<_> = values
        .iter()
        .map(|v| {
            let v = v.clone();
            move |c: &Configuration| v[c.colex_rank()]
        })
        .collect();
    let est = ensemble_expectations(&state, steps, paths, seed, &fs);
    let mut rows = Vec::new();
    for (k, &n) in steps.iter().enumerate() {
        for (o, obs) in observables.iter().enumerate() {
            let exact = semigroup_apply(&kernel, &values[o], n, start)?;
            let e = est[k][o];
            rows.push(ObservableRow { observable: obs.name(), steps: n, estimate: e, exact, z_score: e.z_score(exact) });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HydroComparison {
    pub ring: usize,
    pub particles: usize,
    pub t: f64,
    pub paths: usize,
    pub bandwidth: f64,
    pub l1: f64,
    /// Path-averaged smoothed empirical density on the grid.
    pub empirical: Vec<f64>,
    #[serde(skip)]
    pub hydro: DensityGrid,
}

/// Smoothed empirical density after `⌊L² t⌋` steps from the packed block,
/// against the step-profile reconstruction at `α = N/L`, in `L¹([0, 2π))`.
pub fn mc_vs_hydro(
    ring: usize,
    particles: usize,
    t: f64,
    paths: usize,
    seed: u64,
    grid: usize,
    bandwidth: f64,
) -> Result<HydroComparison> {
    if !(bandwidth > 0.0) {
        return Err(Error::invalid("bandwidth must be positive"));
    }
    if paths == 0 || grid == 0 {
        return Err(Error::invalid("paths and grid must be positive"));
    }
    let params = LatticeParams::new(ring, particles)?;
    let alpha = particles as f64 / ring as f64;
    let job = RunSpec { params, initial: InitialCondition::PackedBlock, paths, seed, times: vec![t], n_max: 1 };
    let records = run(&job)?;
    let mut empirical = vec![0.0; grid];
    for r in &records {
        for (acc, v) in empirical.iter_mut().zip(r.records[0].1.smoothed_density(grid, bandwidth)) {
            *acc += v / paths as f64;
        }
    }
    let hydro = density_reconstruct(t, &CharFlow::step(alpha)?, grid)?;
    let h = 2.0 * PI / grid as f64;
    let l1 = empirical.iter().zip(&hydro.f).map(|(a, b)| (a - b).abs()).sum::<f64>() * h;
    Ok(HydroComparison { ring, particles, t, paths, bandwidth, l1, empirical, hydro })
}
