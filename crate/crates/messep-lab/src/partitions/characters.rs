use super::{enumerate_partitions, factorial, Partition};
use crate::error::{Error, Result};
use num_rational::Ratio;
use std::collections::{BTreeMap, HashMap};

/// Irreducible character `χ^λ_π` of the symmetric group.
///
/// Hooks go through the two-term hook recursion; every other shape goes
/// through general border-strip removal.
pub fn mn_character(lambda: &Partition, pi: &Partition) -> Result<i128> {
    check_weights(lambda, pi)?;
    match lambda.as_hook() {
        Some(h) => Ok(hook_rec(h.n as i64, h.k as i64, pi.parts())),
        None => Ok(BorderStrip::new(pi).eval(lambda)),
    }
}

/// `χ^λ_π` by border-strip removal for every shape, hooks included.
pub fn mn_character_border_strip(lambda: &Partition, pi: &Partition) -> Result<i128> {
    check_weights(lambda, pi)?;
    Ok(BorderStrip::new(pi).eval(lambda))
}

/// `χ^{{n|k}}_π`.
pub fn hook_character(n: usize, k: usize, pi: &Partition) -> Result<i128> {
    if n == 0 || k >= n {
        return Err(Error::invalid(format!("hook {{{n}|{k}}} out of range")));
    }
    if pi.weight() != n {
        return Err(Error::invalid(format!("|π| = {} but hook weight is {n}", pi.weight())));
    }
    Ok(hook_rec(n as i64, k as i64, pi.parts()))
}

fn check_weights(lambda: &Partition, pi: &Partition) -> Result<()> {
    if lambda.weight() != pi.weight() {
        return Err(Error::invalid(format!(
            "weight mismatch: |λ| = {}, |π| = {}",
            lambda.weight(),
            pi.weight()
        )));
    }
    Ok(())
}

// Hook values with the out-of-range convention: `{r|j}` vanishes unless
// 0 <= j <= r-1, and `{0|j}` is the empty shape when j = 0.
fn hook_rec(n: i64, k: i64, pi: &[usize]) -> i128 {
    if n == 0 {
        return i128::from(k == 0 && pi.is_empty());
    }
    if k < 0 || k > n - 1 {
        return 0;
    }
    let r = pi[0] as i64;
    let rest = &pi[1..];
    if r == n {
        return if k % 2 == 0 { 1 } else { -1 };
    }
    let sign = if (r - 1) % 2 == 0 { 1 } else { -1 };
    sign * hook_rec(n - r, k - r, rest) + hook_rec(n - r, k, rest)
}

struct BorderStrip<'a> {
    pi: &'a [usize],
    memo: HashMap<Vec<usize>, i128>,
}

impl<'a> BorderStrip<'a> {
    fn new(pi: &'a Partition) -> Self {
        Self { pi: pi.parts(), memo: HashMap::new() }
    }

    fn eval(&mut self, lambda: &Partition) -> i128 {
        self.rec(lambda.parts().to_vec(), 0)
    }

    // Rim hooks of length r correspond to moving a bead of the beta-set
    // from b to b - r; the sign counts the beads jumped over.
    fn rec(&mut self, lambda: Vec<usize>, idx: usize) -> i128 {
        if lambda.is_empty() {
            return 1;
        }
        if let Some(&v) = self.memo.get(&lambda) {
            return v;
        }
        let r = self.pi[idx];
        let len = lambda.len();
        let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
        let mut total = 0i128;
        for (i, &b) in beta.iter().enumerate() {
            if b < r || beta.contains(&(b - r)) {
                continue;
            }
            let target = b - r;
            let jumped = beta.iter().filter(|&&c| c > target && c < b).count();
            let mut next = beta.clone();
            next[i] = target;
            next.sort_unstable_by(|x, y| y.cmp(x));
            let shape: Vec<usize> = next
                .iter()
                .enumerate()
                .map(|(j, &c)| c - (len - 1 - j))
                .filter(|&p| p > 0)
                .collect();
            let v = self.rec(shape, idx + 1);
            total += if jumped % 2 == 0 { v } else { -v };
        }
        self.memo.insert(lambda, total);
        total
    }
}

/// `Σ_k (-1)^k χ^{{n|k}}_π (n-2k-1)^j`, summed term by term.
pub fn hook_char_sum(pi: &Partition, j: usize) -> Result<i128> {
    if pi.is_empty() {
        return Err(Error::invalid("π must be a nonempty partition"));
    }
    if j >= pi.len() {
        return Err(Error::invalid(format!("j = {j} must be at most ℓ(π) - 1 = {}", pi.len() - 1)));
    }
    let n = pi.weight();
    let mut total = 0i128;
    for k in 0..n {
        let chi = hook_character(n, k, pi)?;
        let base = n as i128 - 2 * k as i128 - 1;
        let term = chi * base.pow(j as u32);
        total += if k % 2 == 0 { term } else { -term };
    }
    Ok(total)
}

/// Coefficients of `p_π = Σ_λ χ^λ_π s_λ` (zero coefficients omitted).
pub fn frobenius_p_to_s(pi: &Partition) -> Result<BTreeMap<Partition, i128>> {
    let mut out = BTreeMap::new();
    for lambda in enumerate_partitions(pi.weight()) {
        let chi = mn_character(&lambda, pi)?;
        if chi != 0 {
            out.insert(lambda, chi);
        }
    }
    Ok(out)
}

/// Coefficients of `s_λ = Σ_π χ^λ_π p_π / z_π` (zero coefficients omitted).
pub fn frobenius_s_to_p(lambda: &Partition) -> Result<BTreeMap<Partition, Ratio<i128>>> {
    let mut out = BTreeMap::new();
    for pi in enumerate_partitions(lambda.weight()) {
        let chi = mn_character(lambda, &pi)?;
        if chi != 0 {
            out.insert(pi.clone(), Ratio::new(chi, pi.z()));
        }
    }
    Ok(out)
}

/// Full character table of `S_n`, rows indexed by `λ`, columns by `π`,
/// both in reverse lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub n: usize,
    pub partitions: Vec<Partition>,
    pub values: Vec<Vec<i128>>,
}

impl CharacterTable {
    pub fn build(n: usize) -> Self {
        let partitions = enumerate_partitions(n);
        let values = partitions
            .iter()
            .map(|lambda| {
                partitions
                    .iter()
                    .map(|pi| mn_character(lambda, pi).expect("weights agree by construction"))
                    .collect()
            })
            .collect();
        Self { n, partitions, values }
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.partitions.iter().position(|q| q == p)
    }

    pub fn get(&self, lambda: &Partition, pi: &Partition) -> Option<i128> {
        Some(self.values[self.index_of(lambda)?][self.index_of(pi)?])
    }

    /// Largest deviation of `n! Σ_π χ^λ_π χ^μ_π / z_π` from `n! δ_{λμ}`.
    pub fn orthogonality_defect(&self) -> i128 {
        let nf = factorial(self.n);
        let class: Vec<i128> = self.partitions.iter().map(|p| nf / p.z()).collect();
        let m = self.partitions.len();
        let mut worst = 0;
        for a in 0..m {
            for b in 0..m {
                let s: i128 = (0..m).map(|c| self.values[a][c] * self.values[b][c] * class[c]).sum();
                let expect = if a == b { nf } else { 0 };
                worst = worst.max((s - expect).abs());
            }
        }
        worst
    }
}
