//! Integer partitions, hooks and exact symmetric-group combinatorics.

mod bell;
mod cache;
mod characters;

pub use bell::bell_partial;
pub use cache::{load_or_build_table, read_table, write_table, CACHE_ENV, CACHE_MAGIC, CACHE_VERSION};
pub use characters::{
    frobenius_p_to_s, frobenius_s_to_p, hook_char_sum, hook_character, mn_character,
    mn_character_border_strip, CharacterTable,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A weakly decreasing sequence of positive integers. Trailing zeros are
/// dropped on construction, so `(2,1,0)` and `(2,1)` compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: &[usize]) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!("parts {parts:?} are not weakly decreasing")));
        }
        Ok(Self::from_sorted(parts.to_vec()))
    }

    /// Builds a partition from any multiset of parts (sorted internally).
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::from_sorted(parts)
    }

    fn from_sorted(mut parts: Vec<usize>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Self { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `λ_i` with 1-based indexing would be `part(i - 1)`; missing parts are 0.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Self {
        let width = self.part(0);
        let parts = (0..width)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Self { parts }
    }

    /// Pairs `(k, l_k)` with `l_k > 0`, in increasing `k`.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in self.parts.iter().rev() {
            match out.last_mut() {
                Some((k, l)) if *k == p => *l += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `z_π = ∏ k^{l_k} l_k!`.
    pub fn z(&self) -> i128 {
        self.multiplicities()
            .into_iter()
            .map(|(k, l)| (k as i128).pow(l as u32) * factorial(l))
            .product()
    }

    /// Young-diagram containment `μ ⊂ λ`.
    pub fn contains(&self, mu: &Partition) -> bool {
        mu.len() <= self.len() && mu.parts.iter().zip(&self.parts).all(|(m, l)| m <= l)
    }

    /// The partition without its first (largest) part.
    pub fn tail(&self) -> Self {
        Self { parts: self.parts.iter().skip(1).copied().collect() }
    }

    /// Returns `Some((n, k))` when the partition is the hook `(n-k, 1^k)`.
    pub fn as_hook(&self) -> Option<Hook> {
        if self.parts.is_empty() || self.parts[1..].iter().any(|&p| p != 1) {
            return None;
        }
        Some(Hook { n: self.weight(), k: self.len() - 1 })
    }

    /// Fits in the box with at most `rows` rows and `cols` columns.
    pub fn fits_box(&self, rows: usize, cols: usize) -> bool {
        self.len() <= rows && self.part(0) <= cols
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(&v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// The hook `{n|k} = (n-k, 1^k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hook {
    pub n: usize,
    pub k: usize,
}

impl Hook {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k >= n {
            return Err(Error::invalid(format!("hook {{{n}|{k}}} needs n >= 1 and k <= n-1")));
        }
        Ok(Self { n, k })
    }

    /// Hook with possibly out-of-range leg. `None` stands for the zero
    /// function; `{0|0}` is the empty partition.
    pub fn checked(n: i64, k: i64) -> Option<Partition> {
        if n == 0 {
            return (k == 0).then(Partition::empty);
        }
        if n < 0 || k < 0 || k > n - 1 {
            return None;
        }
        Some(Hook { n: n as usize, k: k as usize }.partition())
    }

    pub fn partition(&self) -> Partition {
        let mut parts = vec![self.n - self.k];
        parts.extend(std::iter::repeat_n(1, self.k));
        Partition { parts }
    }

    pub fn conjugate(&self) -> Self {
        Self { n: self.n, k: self.n - self.k - 1 }
    }
}

/// The double hook `{n|k,l}` attached to a ring of size `L` with `N` particles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DoubleHook {
    pub n: usize,
    pub k: usize,
    pub l: usize,
}

impl DoubleHook {
    pub fn new(n: usize, k: usize, l: usize) -> Result<Self> {
        if n == 0 || k >= n || l >= n {
            return Err(Error::invalid(format!("double hook {{{n}|{k},{l}}} out of range")));
        }
        Ok(Self { n, k, l })
    }

    /// `(L-n-(N-1-l), n-k+1, 2^k, 1^{N-2-l-k})`, or `None` when these
    /// numbers do not form a partition with at most `N` parts.
    pub fn partition(&self, ring: usize, particles: usize) -> Option<Partition> {
        let (n, k, l) = (self.n as i64, self.k as i64, self.l as i64);
        let (big_l, big_n) = (ring as i64, particles as i64);
        let first = big_l - n - (big_n - 1 - l);
        let ones = big_n - 2 - l - k;
        if ones < 0 || first < n - k + 1 {
            return None;
        }
        let mut parts = vec![first as usize, (n - k + 1) as usize];
        parts.extend(std::iter::repeat_n(2, self.k));
        parts.extend(std::iter::repeat_n(1, ones as usize));
        Some(Partition { parts })
    }
}

/// All partitions of `n`, in reverse lexicographic order starting at `(n)`.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill_partitions(n, n, &mut cur, &mut out);
    out
}

fn fill_partitions(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        cur.push(p);
        fill_partitions(rest - p, p, cur, out);
        cur.pop();
    }
}

/// Partitions fitting in a box of `rows` rows and `cols` columns.
pub fn box_partitions(rows: usize, cols: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill_box(rows, cols, &mut cur, &mut out);
    out
}

fn fill_box(rows: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    out.push(Partition { parts: cur.clone() });
    if cur.len() == rows {
        return;
    }
    for p in 1..=max {
        cur.push(p);
        fill_box(rows, p, cur, out);
        cur.pop();
    }
}

/// Cycle index `z_π`.
pub fn cycle_index(pi: &Partition) -> i128 {
    pi.z()
}

pub fn conjugate(lambda: &Partition) -> Partition {
    lambda.conjugate()
}

pub(crate) fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}
