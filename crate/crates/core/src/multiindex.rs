//! Multi-indices and the graded word order.
//!
//! Multi-indices are ordered first by total degree. Inside a degree block the
//! order is the dictionary order of the monomial words `x1^a1 x2^a2 ... xs^as`
//! over the alphabet `x1 < x2 < ... < xs`, which amounts to comparing the
//! exponent tuples lexicographically in *decreasing* order: for degree 3 in
//! three variables the block reads
//! `(3,0,0) (2,1,0) (2,0,1) (1,2,0) (1,1,1) (1,0,2) (0,3,0) (0,2,1) (0,1,2) (0,0,3)`.
//!
//! The position of a multi-index in [`enumerate`] is the column index of the
//! corresponding monomial in every Vandermonde matrix built by this crate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct MultiIndex {
    exponents: Vec<u32>,
}

impl MultiIndex {
    /// Panics if `exponents` is empty.
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(!exponents.is_empty(), "a multi-index needs at least one variable");
        Self { exponents }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![0; dim])
    }

    /// The unit index `e_j` (first derivative in variable `j`).
    pub fn unit(dim: usize, j: usize) -> Self {
        let mut e = vec![0; dim];
        e[j] = 1;
        Self::new(e)
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Total degree `|alpha|`.
    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&a| a as usize).sum()
    }

    /// `alpha! = prod alpha_i!`, exact.
    pub fn factorial(&self) -> Result<u64> {
        self.exponents.iter().try_fold(1u64, |acc, &a| {
            acc.checked_mul(factorial(a)?)
                .ok_or(Error::Overflow("multi-index factorial"))
        })
    }

    fn check_dim(&self, other: &MultiIndex) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Graded word order comparison; fails on a dimension mismatch.
    pub fn compare(&self, other: &MultiIndex) -> Result<Ordering> {
        self.check_dim(other)?;
        Ok(self.cmp(other))
    }

    /// `self <= other` componentwise.
    pub fn componentwise_leq(&self, other: &MultiIndex) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self
            .exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b))
    }

    /// `alpha - nu`, or `None` when `nu` is not componentwise below `alpha`.
    pub fn checked_sub(&self, nu: &MultiIndex) -> Option<MultiIndex> {
        if self.dim() != nu.dim() {
            return None;
        }
        let exps = self
            .exponents
            .iter()
            .zip(&nu.exponents)
            .map(|(&a, &n)| a.checked_sub(n))
            .collect::<Option<Vec<_>>>()?;
        Some(MultiIndex::new(exps))
    }

    /// Successor in the graded word order.
    pub fn successor(&self) -> MultiIndex {
        let mut next = self.exponents.clone();
        let last = next.len() - 1;
        let tail = next[last];
        match (0..last).rev().find(|&i| next[i] > 0) {
            Some(i) => {
                next[i] -= 1;
                next[last] = 0;
                next[i + 1] = tail + 1;
            }
            None => {
                // (0,...,0,n) closes the block; the next one opens at (n+1,0,...,0).
                next[last] = 0;
                next[0] = tail + 1;
            }
        }
        MultiIndex::new(next)
    }
}

impl Ord for MultiIndex {
    /// Degree first, then larger leading exponents first. Indices of different
    /// dimension are ordered by dimension last so the order stays total;
    /// use [`MultiIndex::compare`] when a mismatch must be reported.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exponents.cmp(&self.exponents))
            .then_with(|| self.dim().cmp(&other.dim()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Config(format!("multi-index {s:?}: {msg}"));
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| bad("expected the form (a,b,...)"))?;
        let exponents = inner
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| bad("non-integer exponent")))
            .collect::<Result<Vec<_>>>()?;
        if exponents.is_empty() {
            return Err(bad("empty"));
        }
        Ok(MultiIndex::new(exponents))
    }
}

impl From<MultiIndex> for String {
    fn from(m: MultiIndex) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for MultiIndex {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// `n!` for exponents; fails past `20!`.
pub fn factorial(n: u32) -> Result<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| {
        acc.checked_mul(k).ok_or(Error::Overflow("factorial"))
    })
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `dim Pi_d(R^s) = binom(d + s, s)`.
pub fn space_dimension(dim: usize, degree: usize) -> usize {
    binomial((degree + dim) as u64, dim as u64).expect("polynomial space dimension overflows u64")
        as usize
}

/// `prod alpha_i! / (alpha_i - nu_i)!`, the coefficient produced by applying
/// `D^nu` to `(x - c)^alpha`.
///
/// Returns [`Error::DerivativeVanishes`] when `nu` is not below `alpha`; callers
/// treat that term as zero.
pub fn factorial_ratio(alpha: &MultiIndex, nu: &MultiIndex) -> Result<u64> {
    if !nu.componentwise_leq(alpha)? {
        return Err(Error::DerivativeVanishes {
            alpha: alpha.to_string(),
            nu: nu.to_string(),
        });
    }
    alpha
        .exponents
        .iter()
        .zip(&nu.exponents)
        .try_fold(1u64, |acc, (&a, &n)| {
            ((a - n + 1)..=a).try_fold(acc, |acc, k| {
                acc.checked_mul(k as u64)
                    .ok_or(Error::Overflow("factorial ratio"))
            })
        })
}

/// All multi-indices of dimension `dim` and total degree at most `degree`, in
/// increasing graded word order.
pub fn enumerate(dim: usize, degree: usize) -> Vec<MultiIndex> {
    assert!(dim >= 1, "dimension must be at least 1");
    let len = space_dimension(dim, degree);
    let mut out = Vec::with_capacity(len);
    let mut current = MultiIndex::zero(dim);
    for _ in 0..len {
        let next = current.successor();
        out.push(current);
        current = next;
    }
    out
}

/// Multi-indices of exactly total degree `order`, in graded word order.
pub fn of_degree(dim: usize, order: usize) -> Vec<MultiIndex> {
    let start = if order == 0 {
        0
    } else {
        space_dimension(dim, order - 1)
    };
    enumerate(dim, order).split_off(start)
}

/// Ordered monomial basis of `Pi_d(R^s)` with the bookkeeping needed to
/// evaluate every monomial by one multiplication from a lower-degree one.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    dim: usize,
    degree: usize,
    indices: Vec<MultiIndex>,
    // (position of alpha - e_j, j) for every alpha except the zero index
    parents: Vec<(usize, usize)>,
}

impl MonomialBasis {
    pub fn new(dim: usize, degree: usize) -> Self {
        let indices = enumerate(dim, degree);
        let mut parents = Vec::with_capacity(indices.len());
        parents.push((0, 0));
        for alpha in indices.iter().skip(1) {
            let j = alpha
                .exponents()
                .iter()
                .position(|&a| a > 0)
                .expect("non-zero index has a positive exponent");
            let mut exps = alpha.exponents().to_vec();
            exps[j] -= 1;
            let parent = rank(&MultiIndex::new(exps));
            parents.push((parent, j));
        }
        Self {
            dim,
            degree,
            indices,
            parents,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    /// Column position of `alpha`, if it belongs to this basis.
    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        if alpha.dim() != self.dim || alpha.degree() > self.degree {
            return None;
        }
        Some(rank(alpha))
    }

    /// Writes `z^alpha` for every basis index into `out` (length `len()`).
    pub fn evaluate_into(&self, z: &[f64], out: &mut [f64]) {
        debug_assert_eq!(z.len(), self.dim);
        debug_assert_eq!(out.len(), self.len());
        out[0] = 1.0;
        for k in 1..out.len() {
            let (parent, j) = self.parents[k];
            out[k] = out[parent] * z[j];
        }
    }

    pub fn evaluate(&self, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.evaluate_into(z, &mut out);
        out
    }
}

/// Position of `alpha` in [`enumerate`]`(s, d)` for any `d >= |alpha|`.
pub fn rank(alpha: &MultiIndex) -> usize {
    let s = alpha.dim();
    let n = alpha.degree();
    let below = if n == 0 { 0 } else { space_dimension(s, n - 1) };
    // Count indices of the same degree that precede alpha: at each position,
    // those sharing the prefix but carrying a larger exponent there.
    let mut within = 0usize;
    let mut remaining = n;
    for (i, &a) in alpha.exponents().iter().enumerate() {
        let parts = s - i;
        let a = a as usize;
        if parts > 1 && remaining > a {
            // compositions of (remaining - a - 1) into `parts` parts
            within += binomial((remaining - a - 1 + parts - 1) as u64, (parts - 1) as u64)
                .expect("rank overflow") as usize;
        }
        remaining -= a;
    }
    below + within
}
