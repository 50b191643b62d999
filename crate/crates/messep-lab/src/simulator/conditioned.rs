use crate::error::{Error, Result};
use crate::messep::{enumerate_configurations, survival_table, Configuration, LatticeParams};

const STATE_CAP: u64 = 20_000;

/// Total-variation distance between the laws of the first `n` steps of
/// (a) `N` independent simple walks conditioned on no collision up to time `m`
/// and (b) the MESSEP, both started at `xi0`.
///
/// Both path laws depend on a path only through its endpoint, so the distance
/// reduces to a sum over endpoints weighted by the number of collision-free
/// paths reaching them.
pub fn conditioned_srw_compare(xi0: &Configuration, n: usize, m: usize, params: &LatticeParams) -> Result<f64> {
    if m < n {
        return Err(Error::invalid(format!("horizon m = {m} must be at least the path length n = {n}")));
    }
    let count = params.state_count();
    if count > STATE_CAP {
        return Err(Error::cap(format!("C({}, {})", params.ring(), params.particles()), count, STATE_CAP));
    }
    if xi0.len() != params.particles() || xi0.sites().iter().any(|&s| s >= params.ring()) {
        return Err(Error::invalid(format!("{:?} is not a configuration of L = {}, N = {}", xi0.sites(), params.ring(), params.particles())));
    }
    let configs = enumerate_configurations(params);
    let nbrs: Vec<Vec<usize>> =
        configs.iter().map(|c| c.moves(params.ring()).iter().map(|mv| mv.to.colex_rank()).collect()).collect();
    let walkers = (2 * params.particles()) as f64;
    // D(η) = P(walk at η after n steps, no collision so far)
    let mut d = vec![0.0; configs.len()];
    let start = xi0.colex_rank();
    d[start] = 1.0;
    for _ in 0..n {
        let mut next = vec![0.0; configs.len()];
        for (i, nb) in nbrs.iter().enumerate() {
            if d[i] != 0.0 {
                for &j in nb {
                    next[j] += d[i] / walkers;
                }
            }
        }
        d = next;
    }
    let survival = survival_table(params, m)?;
    let s_m = survival[m][start];
    let tail = &survival[m - n];
    let psi0 = params.psi(xi0);
    let growth = (walkers / params.rho()).powi(n as i32);
    let tv: f64 = configs
        .iter()
        .enumerate()
        .map(|(j, c)| (d[j] * tail[j] / s_m - d[j] * growth * params.psi(c) / psi0).abs())
        .sum();
    Ok(0.5 * tv)
}
