use super::ChainState;
use crate::error::{Error, Result};
use crate::messep::{Configuration, LatticeParams};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How a trajectory starts. Densities are samples of `f₀` on the grid
/// `x_j = 2πj/M` of `[0, 2π)`, normalised so that `∫ f₀ = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[derive(Default)]
pub enum InitialCondition {
    /// Explicit occupied sites.
    Explicit { sites: Vec<usize> },
    /// The compact block `-p, ..., N-1-p` centred at site 0, i.e. the step
    /// profile of height `1/(2πα)` on `[-πα, πα]`.
    #[default]
    PackedBlock,
    /// Deterministic quantile placement: particle `k` sits at `F⁻¹((k-1/2)/N)`
    /// rounded to the lattice, pushed forward past occupied sites.
    Quantile { density: Vec<f64> },
    /// Particles drawn i.i.d. from the density, a draw onto an occupied site
    /// being rejected.
    Thinned { density: Vec<f64> },
}


impl InitialCondition {
    pub fn realize(&self, params: LatticeParams, rng: &mut impl Rng) -> Result<ChainState> {
        match self {
            InitialCondition::Explicit { sites } => {
                let mut s = sites.clone();
                s.sort_unstable();
                let c = Configuration::new(s, params.ring())?;
                if c.len() != params.particles() {
                    return Err(Error::invalid(format!("{} sites given, N = {}", c.len(), params.particles())));
                }
                ChainState::from_config(params, &c)
            }
            InitialCondition::PackedBlock => ChainState::from_lift(params, params.compact_lift()),
            InitialCondition::Quantile { density } => {
                let targets = quantile_positions(density, params.particles())?;
                let ring = params.ring();
                let mut occupied = vec![false; ring];
                for x in targets {
                    let mut s = ((x * ring as f64 / (2.0 * PI)).round() as usize) % ring;
                    while occupied[s] {
                        s = (s + 1) % ring;
                    }
                    occupied[s] = true;
                }
                let sites = (0..ring).filter(|&s| occupied[s]).collect();
                ChainState::from_config(params, &Configuration::new(sites, ring)?)
            }
            InitialCondition::Thinned { density } => {
                check_density(density)?;
                let ring = params.ring();
                let sup = density.iter().cloned().fold(0.0, f64::max);
                let mut occupied = vec![false; ring];
                let mut placed = 0;
                let mut tries = 0u64;
                while placed < params.particles() {
                    tries += 1;
                    if tries > 1_000_000 * params.particles() as u64 {
                        return Err(Error::numerical("thinned sampling did not place all particles"));
                    }
                    let x = rng.random::<f64>() * 2.0 * PI;
                    if rng.random::<f64>() * sup > interpolate(density, x) {
                        continue;
                    }
                    let s = ((x * ring as f64 / (2.0 * PI)).round() as usize) % ring;
                    if !occupied[s] {
                        occupied[s] = true;
                        placed += 1;
                    }
                }
                let sites = (0..ring).filter(|&s| occupied[s]).collect();
                ChainState::from_config(params, &Configuration::new(sites, ring)?)
            }
        }
    }
}

fn check_density(density: &[f64]) -> Result<()> {
    if density.len() < 2 || density.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::invalid("density needs at least two finite non-negative samples"));
    }
    if density.iter().all(|&v| v == 0.0) {
        return Err(Error::invalid("density vanishes identically"));
    }
    Ok(())
}

fn interpolate(density: &[f64], x: f64) -> f64 {
    let m = density.len();
    let u = x / (2.0 * PI) * m as f64;
    let j = u.floor() as usize % m;
    let frac = u - u.floor();
    density[j] * (1.0 - frac) + density[(j + 1) % m] * frac
}

/// `F⁻¹((k - 1/2)/n)` for `k = 1..n`, with `F` the distribution function of the
/// piecewise-linear interpolant of the samples.
pub fn quantile_positions(density: &[f64], n: usize) -> Result<Vec<f64>> {
    check_density(density)?;
    let m = density.len();
    let h = 2.0 * PI / m as f64;
    // mass of each cell [x_j, x_{j+1}]
    let cells: Vec<f64> = (0..m).map(|j| 0.5 * h * (density[j] + density[(j + 1) % m])).collect();
    let total: f64 = cells.iter().sum();
    let mut out = Vec::with_capacity(n);
    let (mut j, mut acc) = (0usize, 0.0);
    for k in 0..n {
        let q = (k as f64 + 0.5) / n as f64 * total;
        while j + 1 < m && acc + cells[j] < q {
            acc += cells[j];
            j += 1;
        }
        let (a, b) = (density[j], density[(j + 1) % m]);
        let need = q - acc;
        // solve a s + (b - a) s² / (2h) = need for s in [0, h]
        let s = if (b - a).abs() < 1e-14 * (a + b).max(1e-300) {
            if a > 0.0 { need / a } else { 0.5 * h }
        } else {
            let c = (b - a) / (2.0 * h);
            let disc = (a * a + 4.0 * c * need).max(0.0);
            (-a + disc.sqrt()) / (2.0 * c)
        };
        out.push(j as f64 * h + s.clamp(0.0, h));
    }
    Ok(out)
}
