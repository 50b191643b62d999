//! The exclusion process on the ring `Z/LZ`: configurations, the Perron data
//! of the configuration graph, the partition labelling of its spectrum and
//! closed-form eigenvalues.

mod kernel;

pub use kernel::{
    adjacency_matrix, gap_asymptotics_check, semigroup_apply, survival_probability, survival_table, GapRow, SpectralKernel,
    DEFAULT_STATE_CAP,
};

use crate::error::{Error, Result};
use crate::partitions::{DoubleHook, Hook, Partition};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct LatticeParams {
    ring: usize,
    particles: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    ring: usize,
    particles: usize,
}

impl TryFrom<RawParams> for LatticeParams {
    type Error = Error;

    fn try_from(r: RawParams) -> Result<Self> {
        Self::new(r.ring, r.particles)
    }
}

impl LatticeParams {
    pub fn new(ring: usize, particles: usize) -> Result<Self> {
        if ring < 2 {
            return Err(Error::invalid(format!("ring size L = {ring} must be at least 2")));
        }
        if particles == 0 || particles >= ring {
            return Err(Error::invalid(format!("need 1 <= N <= L-1, got N = {particles}, L = {ring}")));
        }
        Ok(Self { ring, particles })
    }

    /// `L`.
    pub fn ring(&self) -> usize {
        self.ring
    }

    /// `N`.
    pub fn particles(&self) -> usize {
        self.particles
    }

    /// `γ`: 0 for odd `N`, 1/2 for even `N`.
    pub fn gamma(&self) -> f64 {
        if self.particles.is_multiple_of(2) {
            0.5
        } else {
            0.0
        }
    }

    /// `(-1)^{2γ}`.
    pub fn gamma_sign(&self) -> f64 {
        if self.particles.is_multiple_of(2) {
            -1.0
        } else {
            1.0
        }
    }

    /// `p` with `N = 2p + 1` or `N = 2p`.
    pub fn half(&self) -> i64 {
        (self.particles / 2) as i64
    }

    /// `C(L, N)`.
    pub fn state_count(&self) -> u64 {
        binomial(self.ring as u64, self.particles as u64)
    }

    /// Spectral radius `ρ = 2 sin(Nπ/L) / sin(π/L)` of the configuration graph.
    pub fn rho(&self) -> f64 {
        let (l, n) = (self.ring as f64, self.particles as f64);
        2.0 * (n * PI / l).sin() / (PI / l).sin()
    }

    /// Lift `(c_1, ..., c_N) = (-p, ..., -p + N - 1)` of the compact configuration.
    pub fn compact_lift(&self) -> Vec<i64> {
        (0..self.particles as i64).map(|j| j - self.half()).collect()
    }

    pub fn compact(&self) -> Configuration {
        Configuration::from_lift(&self.compact_lift(), self.ring)
    }

    /// `ψ(η) = 2^{N(N-1)/2} L^{-N/2} ∏_{i<j} sin((η_j - η_i)π/L)`.
    pub fn psi(&self, eta: &Configuration) -> f64 {
        let (l, n) = (self.ring as f64, self.particles as f64);
        let s = eta.sites();
        let mut log = 0.5 * n * (n - 1.0) * 2f64.ln() - 0.5 * n * l.ln();
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                log += ((s[j] - s[i]) as f64 * PI / l).sin().ln();
            }
        }
        log.exp()
    }

    /// `ρ_ξ = 2 Σ cos(2π(x_j + γ)/L)` for a lift `x`.
    pub fn rho_of_lift(&self, lift: &[i64]) -> f64 {
        let (l, g) = (self.ring as f64, self.gamma());
        2.0 * lift.iter().map(|&x| (2.0 * PI * (x as f64 + g) / l).cos()).sum::<f64>()
    }

    fn check(&self, eta: &Configuration) -> Result<()> {
        if eta.len() != self.particles || eta.sites().iter().any(|&s| s >= self.ring) {
            return Err(Error::invalid(format!("configuration {:?} does not fit L = {}, N = {}", eta.sites(), self.ring, self.particles)));
        }
        Ok(())
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Occupied sites, strictly increasing in `[0, L)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration {
    sites: Vec<usize>,
}

impl Configuration {
    pub fn new(sites: Vec<usize>, ring: usize) -> Result<Self> {
        if sites.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("sites {sites:?} are not strictly increasing")));
        }
        if sites.iter().any(|&s| s >= ring) {
            return Err(Error::invalid(format!("sites {sites:?} exceed ring size {ring}")));
        }
        Ok(Self { sites })
    }

    /// Reduces integer positions mod `L` and sorts; the positions must be
    /// distinct mod `L`.
    pub fn from_lift(lift: &[i64], ring: usize) -> Self {
        let mut sites: Vec<usize> = lift.iter().map(|&x| x.rem_euclid(ring as i64) as usize).collect();
        sites.sort_unstable();
        debug_assert!(sites.windows(2).all(|w| w[0] < w[1]), "lift {lift:?} collides mod {ring}");
        Self { sites }
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.sites.iter().map(|&s| s as i64).collect()
    }

    /// Colexicographic rank `Σ_i C(ξ_i, i + 1)`.
    pub fn colex_rank(&self) -> usize {
        self.sites.iter().enumerate().map(|(i, &s)| binomial(s as u64, i as u64 + 1) as usize).sum()
    }

    pub fn is_occupied(&self, site: usize) -> bool {
        self.sites.binary_search(&site).is_ok()
    }

    /// All admissible single-particle moves, one entry per (particle, direction).
    pub fn moves(&self, ring: usize) -> Vec<Move> {
        let mut out = Vec::with_capacity(2 * self.sites.len());
        for (i, &s) in self.sites.iter().enumerate() {
            for dir in [1i64, -1] {
                let target = (s as i64 + dir).rem_euclid(ring as i64) as usize;
                if self.is_occupied(target) {
                    continue;
                }
                let mut sites = self.sites.clone();
                sites[i] = target;
                sites.sort_unstable();
                out.push(Move { particle: i, dir, to: Configuration { sites } });
            }
        }
        out
    }
}

/// A move of particle `particle` (index into the sorted sites) by `dir = ±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub particle: usize,
    pub dir: i64,
    pub to: Configuration,
}

/// All `C(L, N)` configurations in colexicographic order.
pub fn enumerate_configurations(params: &LatticeParams) -> Vec<Configuration> {
    let (l, n) = (params.ring, params.particles);
    let mut out = Vec::with_capacity(params.state_count() as usize);
    let mut sites: Vec<usize> = (0..n).collect();
    loop {
        out.push(Configuration { sites: sites.clone() });
        // colex successor: bump the lowest coordinate that can move up
        let mut i = 0;
        while i < n && sites[i] + 1 == if i + 1 < n { sites[i + 1] } else { l } {
            i += 1;
        }
        if i == n {
            break;
        }
        sites[i] += 1;
        for (j, s) in sites.iter_mut().enumerate().take(i) {
            *s = j;
        }
    }
    out
}

/// Lift `x_j = c_j + λ_{N+1-j}` of the configuration attached to `λ`.
pub fn lift_from_partition(lambda: &Partition, params: &LatticeParams) -> Result<Vec<i64>> {
    let (l, n) = (params.ring, params.particles);
    if !lambda.fits_box(n, l - n) {
        return Err(Error::invalid(format!("partition {lambda} does not fit the {n} x {} box", l - n)));
    }
    Ok(params
        .compact_lift()
        .iter()
        .enumerate()
        .map(|(j, &c)| c + lambda.part(n - 1 - j) as i64)
        .collect())
}

/// The configuration labelled by the partition `λ` in the `N x (L-N)` box.
pub fn config_from_partition(lambda: &Partition, params: &LatticeParams) -> Result<Configuration> {
    Ok(Configuration::from_lift(&lift_from_partition(lambda, params)?, params.ring))
}

/// The unique lift of `ξ` inside the window `[-p, L-1-p]`, sorted.
pub fn minimal_lift(xi: &Configuration, params: &LatticeParams) -> Result<Vec<i64>> {
    params.check(xi)?;
    let (l, p) = (params.ring as i64, params.half());
    let mut lift: Vec<i64> = xi.sites.iter().map(|&s| if (s as i64) > l - 1 - p { s as i64 - l } else { s as i64 }).collect();
    lift.sort_unstable();
    Ok(lift)
}

/// The minimal partition of `ξ`; inverse of [`config_from_partition`].
pub fn partition_from_config(xi: &Configuration, params: &LatticeParams) -> Result<Partition> {
    let lift = minimal_lift(xi, params)?;
    let c = params.compact_lift();
    let n = params.particles;
    let parts: Vec<usize> = (0..n).map(|i| (lift[n - 1 - i] - c[n - 1 - i]) as usize).collect();
    Partition::new(&parts)
}

/// `ρ_ξ / ρ_c` for the configuration attached to `λ`.
pub fn eigenvalue_of(lambda: &Partition, params: &LatticeParams) -> Result<f64> {
    let lift = lift_from_partition(lambda, params)?;
    Ok(params.rho_of_lift(&lift) / params.rho_of_lift(&params.compact_lift()))
}

/// Closed-form eigenvalue of the hook `{n|k}`.
pub fn hook_eigenvalue(n: usize, k: usize, params: &LatticeParams) -> Result<f64> {
    Hook::new(n, k)?;
    let (l, big_n) = (params.ring as f64, params.particles as f64);
    let shift = (n as f64 - 2.0 * k as f64 - 1.0) * PI / l;
    let sn = (PI * big_n / l).sin();
    Ok(1.0 - 2.0 * (PI / l).sin() * (PI * n as f64 / l).sin() * (PI * big_n / l + shift).sin() / sn)
}

/// Closed-form eigenvalue of the double hook `{n|k,l}`; defined when the
/// double hook is a partition in the `N x (L-N)` box.
pub fn double_hook_eigenvalue(n: usize, k: usize, l_leg: usize, params: &LatticeParams) -> Result<f64> {
    let h = DoubleHook::new(n, k, l_leg)?;
    let (ring, particles) = (params.ring, params.particles);
    if !h.partition(ring, particles).is_some_and(|p| p.fits_box(particles, ring - particles)) {
        return Err(Error::invalid(format!(
            "double hook {{{n}|{k},{l_leg}}} is not a partition in the box for L = {ring}, N = {particles}"
        )));
    }
    let (l, big_n) = (params.ring as f64, params.particles as f64);
    let arm = |j: usize| (PI * big_n / l + (n as f64 - 2.0 * j as f64 - 1.0) * PI / l).sin();
    let sn = (PI * big_n / l).sin();
    Ok(1.0 - 2.0 * (PI / l).sin() * (PI * n as f64 / l).sin() * (arm(k) + arm(l_leg)) / sn)
}

/// Spectral gap `1 - λ_{L,N}`, with `λ_{L,N}` the eigenvalue of the compact
/// configuration whose last particle is pushed one site forward.
pub fn spectral_gap(params: &LatticeParams) -> f64 {
    let mut lift = params.compact_lift();
    *lift.last_mut().expect("N >= 1") += 1;
    1.0 - params.rho_of_lift(&lift) / params.rho_of_lift(&params.compact_lift())
}
