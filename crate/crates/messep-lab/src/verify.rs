//! Named self-checks with machine-readable verdicts, shared by the
//! `verify` command and the test suites.

use crate::error::{Error, Result};
use crate::messep::{adjacency_matrix, LatticeParams, SpectralKernel};
use crate::partitions::{enumerate_partitions, hook_char_sum, CharacterTable, DoubleHook};
use crate::symmetric::{
    conj_hook_identity, double_hook_expansion, double_hook_via_skew, hook_expansion_check, schur_eval, RootTuple,
};
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Characters,
    SchurIdentities,
    Eigenbasis,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "characters" => Ok(Suite::Characters),
            "schur-identities" => Ok(Suite::SchurIdentities),
            "eigenbasis" => Ok(Suite::Eigenbasis),
            "all" => Ok(Suite::All),
            _ => Err(Error::invalid(format!("unknown suite {s:?}"))),
        }
    }
}

/// One check: `value <= tolerance` passes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
}

impl Verdict {
    pub fn new(check: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { check: check.into(), passed: value <= tolerance, value, tolerance }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyOptions {
    /// Largest `n` for the character identities.
    pub n_max: usize,
    /// Largest ring size for the eigenbasis sweep.
    pub ring_max: usize,
    /// Random tuples per symmetric-function identity.
    pub samples: usize,
    pub seed: u64,
    /// Multiplies every floating-point tolerance.
    pub tolerance_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { n_max: 12, ring_max: 10, samples: 100, seed: 0, tolerance_scale: 1.0 }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<Verdict>> {
    if !(opts.tolerance_scale > 0.0) {
        return Err(Error::invalid("tolerance scale must be positive"));
    }
    match suite {
        Suite::Characters => characters(opts),
        Suite::SchurIdentities => schur_identities(opts),
        Suite::Eigenbasis => eigenbasis(opts),
        Suite::All => {
            let mut v = characters(opts)?;
            v.extend(schur_identities(opts)?);
            v.extend(eigenbasis(opts)?);
            Ok(v)
        }
    }
}

/// `0` for `j < ℓ - 1` and `2^{ℓ-1} (ℓ-1)! ∏ π_i` for `j = ℓ - 1`.
pub fn hook_char_sum_closed_form(parts: &[usize], j: usize) -> i128 {
    let l = parts.len();
    if j + 1 < l {
        return 0;
    }
    let fact: i128 = (1..l as i128).product();
    (1i128 << (l - 1)) * fact * parts.iter().map(|&p| p as i128).product::<i128>()
}

fn characters(opts: &VerifyOptions) -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    for n in 1..=opts.n_max {
        let bad: usize = enumerate_partitions(n)
            .par_iter()
            .map(|pi| {
                (0..pi.len())
                    .map(|j| Ok((hook_char_sum(pi, j)? != hook_char_sum_closed_form(pi.parts(), j)) as usize))
                    .sum::<Result<usize>>()
            })
            .sum::<Result<usize>>()?;
        out.push(Verdict::new(format!("characters/hook-sum/n={n}"), bad as f64, 0.0));
    }
    for n in 1..=opts.n_max.min(8) {
        let defect = CharacterTable::build(n).orthogonality_defect();
        out.push(Verdict::new(format!("characters/orthogonality/n={n}"), defect as f64, 0.0));
    }
    Ok(out)
}

/// `N` distinct `L`-th roots of unity.
pub fn random_roots(ring: usize, particles: usize, rng: &mut ChaCha8Rng) -> RootTuple {
    let mut sites: Vec<i64> = sample(rng, ring, particles).into_iter().map(|s| s as i64).collect();
    sites.sort_unstable();
    RootTuple::from_sites(&sites, ring)
}

// ring and particle numbers of the random tuples; L >= 2n + N for n <= 5
const IDENTITY_RING: usize = 16;
const IDENTITY_PARTICLES: usize = 4;
const IDENTITY_N_MAX: usize = 5;

fn schur_identities(opts: &VerifyOptions) -> Result<Vec<Verdict>> {
    let tol = 1e-9 * opts.tolerance_scale;
    let (ring, particles) = (IDENTITY_RING, IDENTITY_PARTICLES);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let tuples: Vec<RootTuple> = (0..opts.samples).map(|_| random_roots(ring, particles, &mut rng)).collect();
    let worst = |f: &dyn Fn(&RootTuple) -> Result<f64>| -> Result<f64> {
        tuples.iter().map(f).try_fold(0.0f64, |m, r| Ok(m.max(r?)))
    };
    let mut out = Vec::new();
    for n in 1..=IDENTITY_N_MAX {
        out.push(Verdict::new(format!("schur/power-sum-hooks/n={n}"), worst(&|z| hook_expansion_check(n, z))?, tol));
        let conj = worst(&|z| (0..n).try_fold(0.0f64, |m, k| Ok(m.max(conj_hook_identity(n, k, z, ring)?))))?;
        out.push(Verdict::new(format!("schur/conjugate-hook/n={n}"), conj, tol));
        out.push(Verdict::new(
            format!("schur/double-hook-expansion/n={n}"),
            worst(&|z| double_hook_expansion(n, z, ring))?,
            tol,
        ));
        let skew = worst(&|z| {
            let mut m = 0.0f64;
            for k in 0..n {
                for l in 0..n {
                    let h = DoubleHook::new(n, k, l)?;
                    if let Some(p) = h.partition(ring, particles) {
                        m = m.max((schur_eval(&p, z)? - double_hook_via_skew(h, z)?).norm());
                    }
                }
            }
            Ok(m)
        })?;
        out.push(Verdict::new(format!("schur/skew-hooks/n={n}"), skew, tol));
    }
    Ok(out)
}

/// Residual, Gram and spectrum defects of the Schur eigenbasis for one `(L, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenbasisReport {
    pub ring: usize,
    pub particles: usize,
    /// `max_λ ‖P s_λ - r_λ s_λ‖_∞`.
    pub residual: f64,
    /// `max |⟨s_λ, s_κ⟩_μ - δ_λκ|`.
    pub gram: f64,
    /// Sorted spectra of the kernel labels and of `A/ρ`, sup distance.
    pub spectrum: f64,
}

pub fn eigenbasis_report(params: LatticeParams) -> Result<EigenbasisReport> {
    let kernel = SpectralKernel::new(params)?;
    let basis = kernel.eigenbasis()?;
    let n = kernel.len();
    let mut residual = 0.0f64;
    for (k, &r) in kernel.eigenvalues.iter().enumerate() {
        let col: Vec<Complex64> = basis.column(k).iter().copied().collect();
        let pc = kernel.apply(&col);
        residual = pc.iter().zip(&col).map(|(a, b)| (a - b * r).norm()).fold(residual, f64::max);
    }
    let mu = kernel.mu();
    let weighted = nalgebra::DMatrix::from_fn(n, n, |i, k| basis[(i, k)] * mu[i]);
    let gram = basis.adjoint() * weighted;
    let mut gram_defect = 0.0f64;
    for i in 0..n {
        for k in 0..n {
            let target = if i == k { 1.0 } else { 0.0 };
            gram_defect = gram_defect.max((gram[(i, k)] - target).norm());
        }
    }
    let adj = adjacency_matrix(&params)?;
    let mut direct: Vec<f64> = SymmetricEigen::new(adj).eigenvalues.iter().map(|v| v / kernel.rho).collect();
    let mut labels = kernel.eigenvalues.clone();
    direct.sort_by(f64::total_cmp);
    labels.sort_by(f64::total_cmp);
    let spectrum = direct.iter().zip(&labels).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(EigenbasisReport { ring: params.ring(), particles: params.particles(), residual, gram: gram_defect, spectrum })
}

fn eigenbasis(opts: &VerifyOptions) -> Result<Vec<Verdict>> {
    let s = opts.tolerance_scale;
    let pairs: Vec<(usize, usize)> = (2..=opts.ring_max).flat_map(|l| (1..l).map(move |n| (l, n))).collect();
    let reports: Vec<EigenbasisReport> =
        pairs.par_iter().map(|&(l, n)| eigenbasis_report(LatticeParams::new(l, n)?)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for r in reports {
        let tag = format!("L={},N={}", r.ring, r.particles);
        out.push(Verdict::new(format!("eigenbasis/residual/{tag}"), r.residual, 1e-10 * s));
        out.push(Verdict::new(format!("eigenbasis/gram/{tag}"), r.gram, 1e-9 * s));
        out.push(Verdict::new(format!("eigenbasis/spectrum/{tag}"), r.spectrum, 1e-8 * s));
    }
    Ok(out)
}
