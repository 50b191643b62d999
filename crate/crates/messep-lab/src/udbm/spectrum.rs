use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::symmetric::{schur_dimension, schur_eval, RootTuple};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// A strictly increasing integer tuple `m`, labelling the eigenfunction
/// `Ψ_m / Ψ_c` of the circular Dyson generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpectralIndex {
    m: Vec<i64>,
}

fn half(n: usize) -> i64 {
    (n / 2) as i64
}

fn gamma(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        0.5
    } else {
        0.0
    }
}

impl SpectralIndex {
    pub fn new(m: Vec<i64>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::invalid("spectral index needs N >= 1 entries"));
        }
        if m.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("{m:?} is not strictly increasing")));
        }
        Ok(Self { m })
    }

    /// `c = (-p, ..., N-1-p)`.
    pub fn compact(n: usize) -> Self {
        Self { m: (0..n as i64).map(|j| j - half(n)).collect() }
    }

    pub fn values(&self) -> &[i64] {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// `(λ, δ)` with `Ψ_m/Ψ_c = e^{iδΣx} s_λ(e^{ix})` and `λ_N = 0`.
    pub fn schur_form(&self) -> (Partition, i64) {
        let n = self.m.len();
        let l = self.m[0];
        let parts: Vec<usize> = (0..n).map(|i| (self.m[n - 1 - i] - (n - 1 - i) as i64 - l) as usize).collect();
        (Partition::new(&parts).expect("decreasing by construction"), l + half(n))
    }

    /// Inverse of [`schur_form`](Self::schur_form): `m_i = λ_{N+1-i} + i - 1 + δ - p`.
    pub fn from_schur(lambda: &Partition, delta: i64, n: usize) -> Result<Self> {
        if lambda.len() > n {
            return Err(Error::invalid(format!("partition {lambda} has more than N = {n} parts")));
        }
        let shift = delta - half(n);
        Self::new((0..n).map(|i| lambda.part(n - 1 - i) as i64 + i as i64 + shift).collect())
    }

    /// `E_m = (2π²/N) Σ ((m_i + γ)² - (c_i + γ)²)`.
    pub fn energy(&self) -> f64 {
        energy(self)
    }

    /// `Ψ_m/Ψ_c` at the angles `x`.
    pub fn eigenfunction(&self, x: &[f64]) -> Result<Complex64> {
        if x.len() != self.m.len() {
            return Err(Error::invalid(format!("{} angles for an index of length {}", x.len(), self.m.len())));
        }
        let (lambda, delta) = self.schur_form();
        let phase = Complex64::from_polar(1.0, delta as f64 * x.iter().sum::<f64>());
        Ok(phase * schur_eval(&lambda, &RootTuple::from_angles(x))?)
    }

    /// `sup |Ψ_m/Ψ_c| = s_λ(1, ..., 1)`.
    pub fn sup_norm(&self) -> f64 {
        schur_dimension(&self.schur_form().0, self.m.len())
    }
}

/// `E_m = (2π²/N) Σ ((m_i + γ)² - (c_i + γ)²)`.
pub fn energy(m: &SpectralIndex) -> f64 {
    let n = m.len();
    let g = gamma(n);
    let c = SpectralIndex::compact(n);
    let s: f64 = m.m.iter().zip(&c.m).map(|(&a, &b)| (a as f64 + g).powi(2) - (b as f64 + g).powi(2)).sum();
    2.0 * PI * PI / n as f64 * s
}

/// All indices with `E_m <= e_max`, sorted by energy then lexicographically.
pub fn spectral_indices(n: usize, e_max: f64) -> Result<Vec<SpectralIndex>> {
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let g = gamma(n);
    let base: f64 = SpectralIndex::compact(n).m.iter().map(|&c| (c as f64 + g).powi(2)).sum();
    // Σ (m_i + γ)² <= budget
    let budget = e_max * n as f64 / (2.0 * PI * PI) + base + 1e-9;
    let bound = budget.sqrt() as i64 + 1;
    let mut raw = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(cur: &mut Vec<i64>, n: usize, lo: i64, bound: i64, g: f64, used: f64, budget: f64, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in lo..=bound {
            let y = v as f64 + g;
            if used + y * y > budget {
                continue;
            }
            cur.push(v);
            rec(cur, n, v + 1, bound, g, used + y * y, budget, out);
            cur.pop();
        }
    }
    rec(&mut cur, n, -bound, bound, g, 0.0, budget, &mut raw);
    let mut out: Vec<SpectralIndex> =
        raw.into_iter().map(|m| SpectralIndex { m }).filter(|m| m.energy() <= e_max + 1e-9).collect();
    out.sort_by(|a, b| a.energy().total_cmp(&b.energy()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// A symmetric trigonometric polynomial
/// `f(x) = Σ_κ a_κ Σ_{distinct rearrangements e of κ} e^{i e·x}`,
/// keyed by weakly increasing exponent vectors `κ`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct SymmetricObservable {
    n: usize,
    terms: BTreeMap<Vec<i64>, Complex64>,
}

impl SymmetricObservable {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        let mut f = Self::zero(n);
        f.add_monomial(vec![0; n], c);
        f
    }

    /// Adds `a · m_κ` (the orbit sum of `e^{iκ·x}`).
    pub fn add_monomial(&mut self, mut kappa: Vec<i64>, a: Complex64) {
        assert_eq!(kappa.len(), self.n, "exponent vector length");
        kappa.sort_unstable();
        *self.terms.entry(kappa).or_insert(Complex64::new(0.0, 0.0)) += a;
    }

    /// `p_k(e^{ix}) = Σ_j e^{ikx_j}`.
    pub fn power_sum(n: usize, k: i64) -> Self {
        if k == 0 {
            return Self::constant(n, Complex64::new(n as f64, 0.0));
        }
        let mut f = Self::zero(n);
        let mut kappa = vec![0; n];
        kappa[0] = k;
        f.add_monomial(kappa, Complex64::new(1.0, 0.0));
        f
    }

    /// `e^{i(x_1 + ... + x_N)}`.
    pub fn center_of_mass(n: usize) -> Self {
        let mut f = Self::zero(n);
        f.add_monomial(vec![1; n], Complex64::new(1.0, 0.0));
        f
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (kappa, a) in &self.terms {
            let mut perm = kappa.clone();
            let mut s = Complex64::new(0.0, 0.0);
            loop {
                let phase: f64 = perm.iter().zip(x).map(|(&e, &xi)| e as f64 * xi).sum();
                s += Complex64::from_polar(1.0, phase);
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            total += a * s;
        }
        total
    }

    /// Coefficients `b_m` of `f = Σ_m b_m Ψ_m/Ψ_c`, read off from the
    /// antisymmetric product `f · det(z_j^{c_k})`.
    pub fn eigen_expansion(&self) -> BTreeMap<SpectralIndex, Complex64> {
        let n = self.n;
        let c = SpectralIndex::compact(n).m;
        let mut acc: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        let mut sigma: Vec<usize> = (0..n).collect();
        let mut perms = Vec::new();
        loop {
            perms.push((sigma.clone(), permutation_sign(&sigma)));
            if !next_permutation(&mut sigma) {
                break;
            }
        }
        for (kappa, a) in &self.terms {
            let mut e = kappa.clone();
            loop {
                for (s, sign) in &perms {
                    let exps: Vec<i64> = (0..n).map(|j| e[j] + c[s[j]]).collect();
                    if exps.windows(2).all(|w| w[0] < w[1]) {
                        *acc.entry(exps).or_insert(Complex64::new(0.0, 0.0)) += a * *sign;
                    }
                }
                if !next_permutation(&mut e) {
                    break;
                }
            }
        }
        acc.into_iter().filter(|(_, b)| b.norm() > 1e-15).map(|(m, b)| (SpectralIndex { m }, b)).collect()
    }
}

fn permutation_sign(p: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Truncated eigen-series value and a bound on the discarded tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub value: Complex64,
    /// `Σ_{dropped} |b_m| s_λ(1^N) e^{-E_m t}`.
    pub tail_bound: f64,
    pub terms: usize,
}

/// `E_x[f(Ξ_t)] = Σ_m e^{-E_m t} b_m (Ψ_m/Ψ_c)(x)`, keeping the terms with
/// `E_m <= e_max` (all terms when `e_max` is `None`).
pub fn semigroup_moment(f: &SymmetricObservable, t: f64, x: &[f64], e_max: Option<f64>) -> Result<MomentEstimate> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::invalid(format!("time {t} must be finite and non-negative")));
    }
    if x.len() != f.n {
        return Err(Error::invalid(format!("{} angles for an observable in {} variables", x.len(), f.n)));
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    let mut terms = 0;
    for (m, b) in f.eigen_expansion() {
        let e = m.energy();
        if e_max.is_some_and(|cap| e > cap + 1e-9) {
            tail += b.norm() * m.sup_norm() * (-e * t).exp();
            continue;
        }
        value += b * (-e * t).exp() * m.eigenfunction(x)?;
        terms += 1;
    }
    Ok(MomentEstimate { value, tail_bound: tail, terms })
}

/// `∫ f dμ` under the circular unitary ensemble: the `m = c` coefficient.
pub fn cue_average(f: &SymmetricObservable) -> Complex64 {
    f.eigen_expansion().get(&SpectralIndex::compact(f.n)).copied().unwrap_or_default()
}
