use super::{
    eigenvalue_of, enumerate_configurations, partition_from_config, spectral_gap, Configuration, LatticeParams,
};
use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::symmetric::{schur_eval, RootTuple};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const DEFAULT_STATE_CAP: u64 = 200_000;

/// The MESSEP transition kernel on all `C(L, N)` configurations.
///
/// Rows are stored sparsely (each has at most `2N` entries); the spectrum is
/// indexed like the configurations, through the minimal partition of each one.
#[derive(Clone, Debug)]
pub struct SpectralKernel {
    pub params: LatticeParams,
    pub configs: Vec<Configuration>,
    /// `P(ξ, ·)` as `(column, probability)` pairs, duplicates merged.
    pub rows: Vec<Vec<(usize, f64)>>,
    pub psi: Vec<f64>,
    pub rho: f64,
    /// Minimal partition labelling the eigenfunction attached to each configuration.
    pub partitions: Vec<Partition>,
    /// `ρ_ξ / ρ_c`, same order as `partitions`.
    pub eigenvalues: Vec<f64>,
}

impl SpectralKernel {
    pub fn new(params: LatticeParams) -> Result<Self> {
        Self::with_cap(params, DEFAULT_STATE_CAP)
    }

    pub fn with_cap(params: LatticeParams, cap: u64) -> Result<Self> {
        let count = params.state_count();
        if count > cap {
            return Err(Error::cap(format!("C({}, {})", params.ring(), params.particles()), count, cap));
        }
        let ring = params.ring();
        let configs = enumerate_configurations(&params);
        let rho = params.rho();
        let psi: Vec<f64> = configs.iter().map(|c| params.psi(c)).collect();
        let rows = configs
            .par_iter()
            .enumerate()
            .map(|(i, c)| {
                let mut row: Vec<(usize, f64)> = Vec::new();
                for mv in c.moves(ring) {
                    let j = mv.to.colex_rank();
                    let p = psi[j] / (rho * psi[i]);
                    match row.iter_mut().find(|(k, _)| *k == j) {
                        Some(e) => e.1 += p,
                        None => row.push((j, p)),
                    }
                }
                row.sort_unstable_by_key(|e| e.0);
                row
            })
            .collect();
        let partitions: Vec<Partition> = configs
            .iter()
            .map(|c| partition_from_config(c, &params))
            .collect::<Result<_>>()?;
        let eigenvalues = partitions.iter().map(|l| eigenvalue_of(l, &params)).collect::<Result<_>>()?;
        Ok(Self { params, configs, rows, psi, rho, partitions, eigenvalues })
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn index_of(&self, c: &Configuration) -> usize {
        c.colex_rank()
    }

    /// Invariant measure `μ = ψ² / Z` (with the printed normalisation `Z = 1`
    /// up to rounding; it is renormalised here).
    pub fn mu(&self) -> Vec<f64> {
        let z: f64 = self.psi.iter().map(|p| p * p).sum();
        self.psi.iter().map(|p| p * p / z).collect()
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                m[(i, j)] = p;
            }
        }
        m
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        self.rows.iter().map(|row| row.iter().map(|&(j, p)| f[j] * p).sum()).collect()
    }

    /// `Pⁿ f` by repeated sparse products.
    pub fn apply_power(&self, f: &[Complex64], steps: usize) -> Vec<Complex64> {
        let mut v = f.to_vec();
        for _ in 0..steps {
            v = self.apply(&v);
        }
        v
    }

    /// Roots of unity `e^{2πi η_j / L}` of every configuration.
    pub fn root_tuple(&self, idx: usize) -> RootTuple {
        RootTuple::from_sites(&self.configs[idx].as_i64(), self.params.ring())
    }

    /// Values of `s_λ` on all configurations.
    pub fn schur_vector(&self, lambda: &Partition) -> Result<Vec<Complex64>> {
        (0..self.len()).into_par_iter().map(|i| schur_eval(lambda, &self.root_tuple(i))).collect()
    }

    /// All eigenfunctions, column `k` being `s_{λ_k}` for `λ_k = partitions[k]`.
    pub fn eigenbasis(&self) -> Result<DMatrix<Complex64>> {
        let n = self.len();
        let cols: Vec<Vec<Complex64>> = self.partitions.iter().map(|l| self.schur_vector(l)).collect::<Result<_>>()?;
        Ok(DMatrix::from_fn(n, n, |i, k| cols[k][i]))
    }

    /// Rows `max |μ(ξ)P(ξ,η) - μ(η)P(η,ξ)|` over all edges.
    pub fn detailed_balance_defect(&self) -> f64 {
        let mu = self.mu();
        let mut worst = 0.0f64;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                let back = self.rows[j].iter().find(|e| e.0 == i).map_or(0.0, |e| e.1);
                worst = worst.max((mu[i] * p - mu[j] * back).abs());
            }
        }
        worst
    }

    pub fn gap(&self) -> f64 {
        spectral_gap(&self.params)
    }
}

/// `Pⁿ f(η)` through the full spectral sum
/// `Σ_λ r_λⁿ ⟨f, s_λ⟩_μ s_λ(η)`.
pub fn semigroup_apply(kernel: &SpectralKernel, f: &[Complex64], steps: u64, eta: &Configuration) -> Result<Complex64> {
    if f.len() != kernel.len() {
        return Err(Error::invalid(format!("f has {} values, kernel has {} states", f.len(), kernel.len())));
    }
    if steps == 0 {
        return Ok(f[kernel.index_of(eta)]);
    }
    let mu = kernel.mu();
    let at = kernel.root_tuple(kernel.index_of(eta));
    let terms: Vec<Complex64> = kernel
        .partitions
        .par_iter()
        .zip(&kernel.eigenvalues)
        .map(|(lambda, &r)| {
            let weight = r.powi(steps.min(i32::MAX as u64) as i32);
            if weight == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let s = kernel.schur_vector(lambda)?;
            let coeff: Complex64 = f.iter().zip(&s).zip(&mu).map(|((fv, sv), m)| fv * sv.conj() * m).sum();
            Ok(coeff * weight * schur_eval(lambda, &at)?)
        })
        .collect::<Result<_>>()?;
    Ok(terms.iter().sum())
}

/// Adjacency matrix of the configuration graph, counting moves.
pub fn adjacency_matrix(params: &LatticeParams) -> Result<DMatrix<f64>> {
    let count = params.state_count();
    if count > 5000 {
        return Err(Error::cap("dense adjacency matrix", count, 5000));
    }
    let configs = enumerate_configurations(params);
    let n = configs.len();
    let mut a = DMatrix::zeros(n, n);
    for (i, c) in configs.iter().enumerate() {
        for mv in c.moves(params.ring()) {
            a[(i, mv.to.colex_rank())] += 1.0;
        }
    }
    Ok(a)
}

/// `P_ξ(T > n) = (2N)^{-n} Aⁿ 1(ξ)`: survival of `N` independent simple
/// walks, each step moving one uniformly chosen particle, before any collision.
pub fn survival_probability(xi: &Configuration, steps: usize, params: &LatticeParams) -> Result<f64> {
    Ok(survival_table(params, steps)?[steps][xi.colex_rank()])
}

/// `P_·(T > k)` on all configurations for `k = 0..=steps`.
pub fn survival_table(params: &LatticeParams, steps: usize) -> Result<Vec<Vec<f64>>> {
    let count = params.state_count();
    if count > DEFAULT_STATE_CAP {
        return Err(Error::cap("survival table", count, DEFAULT_STATE_CAP));
    }
    let configs = enumerate_configurations(params);
    let nbrs: Vec<Vec<usize>> = configs.iter().map(|c| c.moves(params.ring()).iter().map(|m| m.to.colex_rank()).collect()).collect();
    let scale = 1.0 / (2 * params.particles()) as f64;
    let mut out = vec![vec![1.0; configs.len()]];
    for _ in 0..steps {
        let prev = out.last().expect("nonempty");
        let next = nbrs.iter().map(|nb| nb.iter().map(|&j| prev[j]).sum::<f64>() * scale).collect();
        out.push(next);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    pub ring: usize,
    pub particles: usize,
    pub gap: f64,
    /// `|1 - λ - 2π²/L²| · L³`.
    pub scaled_l3: f64,
    /// `|1 - λ - 2π²/L²| · L⁴`.
    pub scaled_l4: f64,
}

/// Gap table at half filling `N = ⌊L/2⌋`.
pub fn gap_asymptotics_check(rings: impl IntoIterator<Item = usize>) -> Result<Vec<GapRow>> {
    rings
        .into_iter()
        .map(|l| {
            let params = LatticeParams::new(l, l / 2)?;
            let gap = spectral_gap(&params);
            let dev = (gap - 2.0 * PI * PI / (l * l) as f64).abs();
            Ok(GapRow {
                ring: l,
                particles: l / 2,
                gap,
                scaled_l3: dev * (l as f64).powi(3),
                scaled_l4: dev * (l as f64).powi(4),
            })
        })
        .collect()
}
