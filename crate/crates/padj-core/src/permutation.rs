//! Permutations over `{0, .., n-1}`, the four adjacency conventions, and
//! reduction to irreducible form.
//!
//! Positions are 1-based in the documentation (matching the combinatorial
//! literature); storage is 0-based.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Largest size accepted for brute-force class enumeration unless a caller
/// raises the budget explicitly (9! = 362,880 permutations).
pub const DEFAULT_ORACLE_LIMIT: usize = 9;

/// Largest size for which lexicographic ranks fit into `u64`.
pub const MAX_RANK_SIZE: usize = 20;

/// The four adjacency conventions.
///
/// A pair of consecutive symbols `(a, b)` with `b = a + 1` is an adjacency.
/// `Type2` additionally imagines a trailing symbol `n` (so a last symbol
/// `n-1` counts), `Type3` a leading `-1` (so a first symbol `0` counts),
/// `Type4` both, and `Type1` neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdjacencyType {
    Type1,
    Type2,
    Type3,
    Type4,
}

impl AdjacencyType {
    pub const ALL: [AdjacencyType; 4] = [
        AdjacencyType::Type1,
        AdjacencyType::Type2,
        AdjacencyType::Type3,
        AdjacencyType::Type4,
    ];

    /// Offset `delta` such that the maximum adjacency count at size `n` is
    /// exactly `n + delta`.
    pub fn offset(self) -> i64 {
        match self {
            AdjacencyType::Type1 => -1,
            AdjacencyType::Type2 | AdjacencyType::Type3 => 0,
            AdjacencyType::Type4 => 1,
        }
    }

    /// Maximum possible adjacency count for a permutation of size `n`.
    pub fn max_adjacencies(self, n: usize) -> usize {
        (n as i64 + self.offset()).max(0) as usize
    }

    pub fn index(self) -> u8 {
        match self {
            AdjacencyType::Type1 => 1,
            AdjacencyType::Type2 => 2,
            AdjacencyType::Type3 => 3,
            AdjacencyType::Type4 => 4,
        }
    }

    fn virtual_front(self) -> bool {
        matches!(self, AdjacencyType::Type3 | AdjacencyType::Type4)
    }

    fn virtual_back(self) -> bool {
        matches!(self, AdjacencyType::Type2 | AdjacencyType::Type4)
    }
}

impl fmt::Display for AdjacencyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type{}", self.index())
    }
}

impl FromStr for AdjacencyType {
    type Err = Error;

    /// Accepts `"type1"`..`"type4"` as well as the bare digits `"1"`..`"4"`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "type1" => Ok(AdjacencyType::Type1),
            "2" | "type2" => Ok(AdjacencyType::Type2),
            "3" | "type3" => Ok(AdjacencyType::Type3),
            "4" | "type4" => Ok(AdjacencyType::Type4),
            other => Err(Error::Parse(format!(
                "unknown adjacency type {other:?} (expected type1|type2|type3|type4)"
            ))),
        }
    }
}

/// A permutation of `{0, .., n-1}`, immutable after construction.
///
/// The designated size-0 permutation is admitted: it is what the identity
/// reduces to under the end-anchored adjacency conventions and sorts in
/// zero moves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    symbols: Vec<u8>,
}

impl Permutation {
    /// Builds a permutation, checking that `symbols` is a bijection onto
    /// `0..n`.
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        let n = symbols.len();
        if n > 256 {
            return Err(Error::InvalidPermutation(format!(
                "size {n} exceeds the supported maximum of 256"
            )));
        }
        let mut seen = vec![false; n];
        for &s in &symbols {
            if (s as usize) >= n || seen[s as usize] {
                return Err(Error::InvalidPermutation(format!(
                    "symbols must each appear exactly once in 0..{n}"
                )));
            }
            seen[s as usize] = true;
        }
        Ok(Permutation { symbols })
    }

    /// The identity `(0, 1, .., n-1)`.
    pub fn identity(n: usize) -> Self {
        Permutation {
            symbols: (0..n).map(|v| v as u8).collect(),
        }
    }

    /// The reverse order permutation `(n-1, .., 1, 0)`; it has zero
    /// adjacencies under every convention (for `n >= 2`).
    pub fn reversed(n: usize) -> Self {
        Permutation {
            symbols: (0..n).rev().map(|v| v as u8).collect(),
        }
    }

    /// The designated size-0 permutation.
    pub fn empty() -> Self {
        Permutation { symbols: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn is_identity(&self) -> bool {
        self.symbols.iter().enumerate().all(|(i, &s)| s as usize == i)
    }

    /// Number of adjacencies under convention `t`, including the virtual
    /// boundary symbols that `t` imagines.
    pub fn count_adjacencies(&self, t: AdjacencyType) -> usize {
        count_adjacencies_slice(&self.symbols, t)
    }

    /// Collapses every maximal run of consecutive adjacencies (runs anchored
    /// at a virtual boundary symbol delete entirely) and relabels the
    /// survivors order-isomorphically onto `0..m`. The result has zero
    /// adjacencies under `t`; reducing the identity under the end-anchored
    /// conventions yields the size-0 permutation.
    pub fn reduce(&self, t: AdjacencyType) -> Permutation {
        let mut cur = self.symbols.clone();
        loop {
            let mut changed = false;
            // One pass collapses all internal runs; a fresh internal
            // adjacency cannot appear (run maximality), but deleting a
            // boundary symbol can expose a new boundary anchor, hence the
            // outer loop.
            let mut kept: Vec<u8> = Vec::with_capacity(cur.len());
            for (i, &s) in cur.iter().enumerate() {
                if i > 0 && s == cur[i - 1] + 1 {
                    changed = true;
                    continue;
                }
                kept.push(s);
            }
            let mut next = relabel(&kept);
            if t.virtual_front() && next.first() == Some(&0) {
                next.remove(0);
                for v in &mut next {
                    *v -= 1;
                }
                changed = true;
            }
            if t.virtual_back() && !next.is_empty() && next[next.len() - 1] as usize == next.len() - 1 {
                next.pop();
                changed = true;
            }
            if !changed {
                return Permutation { symbols: next };
            }
            cur = next;
        }
    }

    /// Lexicographic rank of the permutation within `P_n` (factorial number
    /// system); the identity ranks 0.
    pub fn rank(&self) -> u64 {
        rank_slice(&self.symbols)
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(n: usize, r: u64) -> Result<Permutation> {
        if n > MAX_RANK_SIZE {
            return Err(Error::OutOfRange(format!(
                "rank/unrank supports sizes up to {MAX_RANK_SIZE}, got {n}"
            )));
        }
        let total = factorial_u64(n);
        if r >= total {
            return Err(Error::OutOfRange(format!(
                "rank {r} out of range for size {n} (must be < {total})"
            )));
        }
        let mut symbols = vec![0u8; n];
        unrank_into(n, r, &mut symbols);
        Ok(Permutation { symbols })
    }

    /// Parses a comma-separated decimal list such as `"4,2,1,3,0"`.
    pub fn parse(text: &str) -> Result<Permutation> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(Error::Parse("empty permutation literal".into()));
        }
        let mut symbols = Vec::new();
        for item in trimmed.split(',') {
            let v: u16 = item
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid symbol {:?}", item.trim())))?;
            if v > 255 {
                return Err(Error::Parse(format!("symbol {v} out of supported range")));
            }
            symbols.push(v as u8);
        }
        Permutation::new(symbols)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.symbols {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse(s)
    }
}

pub(crate) fn count_adjacencies_slice(symbols: &[u8], t: AdjacencyType) -> usize {
    let n = symbols.len();
    let mut c = symbols.windows(2).filter(|w| w[1] == w[0] + 1).count();
    if n > 0 {
        if t.virtual_back() && symbols[n - 1] as usize == n - 1 {
            c += 1;
        }
        if t.virtual_front() && symbols[0] == 0 {
            c += 1;
        }
    }
    c
}

/// Order-isomorphic relabeling of a sequence of distinct integers onto
/// `0..m`; mirrors collapse to one canonical representative.
pub fn mirror_canonicalize(values: &[i64]) -> Result<Permutation> {
    if values.len() > 256 {
        return Err(Error::InvalidPermutation(format!(
            "size {} exceeds the supported maximum of 256",
            values.len()
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidPermutation(
            "mirror_canonicalize requires distinct values".into(),
        ));
    }
    let symbols = values
        .iter()
        .map(|v| sorted.binary_search(v).unwrap() as u8)
        .collect();
    Ok(Permutation { symbols })
}

fn relabel(values: &[u8]) -> Vec<u8> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    values
        .iter()
        .map(|v| sorted.binary_search(v).unwrap() as u8)
        .collect()
}

pub(crate) fn factorial_u64(n: usize) -> u64 {
    (2..=n as u64).product()
}

pub(crate) fn rank_slice(symbols: &[u8]) -> u64 {
    let n = symbols.len();
    debug_assert!(n <= MAX_RANK_SIZE);
    let mut r = 0u64;
    for i in 0..n {
        let smaller = symbols[i + 1..].iter().filter(|&&s| s < symbols[i]).count() as u64;
        r = r * (n - i) as u64 + smaller;
    }
    r
}

pub(crate) fn unrank_into(n: usize, mut r: u64, out: &mut [u8]) {
    debug_assert_eq!(out.len(), n);
    let mut digits = vec![0u64; n];
    for i in (0..n).rev() {
        let base = (n - i) as u64;
        digits[i] = r % base;
        r /= base;
    }
    let mut pool: Vec<u8> = (0..n as u8).collect();
    for (i, &d) in digits.iter().enumerate() {
        out[i] = pool.remove(d as usize);
    }
}

/// Calls `f` with every permutation of size `n` in lexicographic order.
pub(crate) fn for_each_perm_lex<F: FnMut(&[u8])>(n: usize, mut f: F) {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    loop {
        f(&cur);
        // next_permutation
        if n < 2 {
            return;
        }
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Every `p` in `P_n` with exactly `k` adjacencies under `t`, in
/// lexicographic order. Refuses sizes above [`DEFAULT_ORACLE_LIMIT`]; use
/// [`enumerate_class_with_limit`] to raise the budget deliberately.
pub fn enumerate_class(n: usize, k: usize, t: AdjacencyType) -> Result<Vec<Permutation>> {
    enumerate_class_with_limit(n, k, t, DEFAULT_ORACLE_LIMIT)
}

pub fn enumerate_class_with_limit(
    n: usize,
    k: usize,
    t: AdjacencyType,
    limit: usize,
) -> Result<Vec<Permutation>> {
    if n > limit {
        return Err(Error::ResourceLimit(format!(
            "enumerate_class refuses n={n} above the oracle limit {limit}"
        )));
    }
    let mut out = Vec::new();
    for_each_perm_lex(n, |p| {
        if count_adjacencies_slice(p, t) == k {
            out.push(Permutation { symbols: p.to_vec() });
        }
    });
    Ok(out)
}
