//! Expected-cost estimation for prefix (and, by symmetry, suffix)
//! transposition sorting: the analytic double probability `sigma(n)`, the
//! per-move adjacency yield `psi`, the recurrence extending exact base
//! averages past search reach, and the class-weighted expected value over
//! all of `P_n`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::blockmoves::{double_feasible_prefix, BlockMoveKind, DistanceTable};
use crate::counting::{build_count_table, factorial_big, CountTable};
use crate::permutation::{
    count_adjacencies_slice, for_each_perm_lex, AdjacencyType, Permutation, DEFAULT_ORACLE_LIMIT,
};
use crate::{Error, Result};

/// Probability that a random irreducible permutation of size `n` admits a
/// double with a prefix transposition: `1/2 - 2/(n(n-1))`.
///
/// A positional-uniformity expectation, not an exact count; the empirical
/// fraction converges to it from above (gap ~0.036 at n = 8).
pub fn sigma(n: usize) -> Result<BigRational> {
    if n < 3 {
        return Err(Error::OutOfRange(format!(
            "sigma(n) needs n >= 3 (degenerates below), got {n}"
        )));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let corr = BigRational::new(BigInt::from(2), BigInt::from((n * (n - 1)) as u64));
    Ok(half - corr)
}

/// How the expected adjacency yield per move is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiMode {
    /// The limiting value 3/2. This is what reproduces the published
    /// predictions.
    Limiting,
    /// The size-dependent value `1 + sigma(n)`.
    SizeDependent,
}

impl FromStr for PsiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "limiting" => Ok(PsiMode::Limiting),
            "sized" | "size-dependent" => Ok(PsiMode::SizeDependent),
            other => Err(Error::Parse(format!(
                "unknown psi mode {other:?} (expected limiting|sized)"
            ))),
        }
    }
}

impl std::fmt::Display for PsiMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PsiMode::Limiting => write!(f, "limiting"),
            PsiMode::SizeDependent => write!(f, "sized"),
        }
    }
}

/// Expected number of new adjacencies a move creates on an irreducible
/// permutation: a double with probability `sigma`, a single otherwise,
/// hence `1 + sigma`, with limit 3/2.
pub fn psi(n: usize, mode: PsiMode) -> Result<BigRational> {
    match mode {
        PsiMode::Limiting => Ok(BigRational::new(BigInt::from(3), BigInt::from(2))),
        PsiMode::SizeDependent => Ok(BigRational::one() + sigma(n)?),
    }
}

/// Exact fraction of type-2 irreducible permutations of size `n` admitting
/// a prefix double, by exhaustive scan (guarded by `limit`).
pub fn empirical_double_probability(n: usize, limit: usize) -> Result<BigRational> {
    if n > limit {
        return Err(Error::ResourceLimit(format!(
            "empirical_double_probability refuses n={n} above the oracle limit {limit}"
        )));
    }
    let mut class = 0u64;
    let mut doubles = 0u64;
    for_each_perm_lex(n, |s| {
        if count_adjacencies_slice(s, AdjacencyType::Type2) != 0 {
            return;
        }
        class += 1;
        let p = Permutation::new(s.to_vec()).expect("valid by construction");
        if double_feasible_prefix(&p).expect("irreducible by filter") {
            doubles += 1;
        }
    });
    if class == 0 {
        return Err(Error::Undefined(format!(
            "P_{n}(0) is empty; no double probability"
        )));
    }
    Ok(BigRational::new(BigInt::from(doubles), BigInt::from(class)))
}

/// Extends exact base averages `base[2..=limit]` to `base[limit+1..=n_max]`
/// by the two-measure recurrence: the backward measure interpolates the
/// average at size `i - psi` and adds one move, the forward measure is
/// `(i-1)/psi`, and their mean becomes `base[i]`.
///
/// `base_exact` must hold `limit + 1` entries (indices `0..=limit`, with
/// `base[0] = base[1] = 0`). Returns the full vector `0..=n_max`.
pub fn move_count_model(
    limit: usize,
    base_exact: &[BigRational],
    n_max: usize,
    mode: PsiMode,
) -> Result<Vec<BigRational>> {
    if limit < 3 {
        return Err(Error::OutOfRange(format!(
            "move_count_model needs limit >= 3, got {limit}"
        )));
    }
    if base_exact.len() != limit + 1 {
        return Err(Error::OutOfRange(format!(
            "expected {} exact base entries, got {}",
            limit + 1,
            base_exact.len()
        )));
    }
    let mut base = base_exact.to_vec();
    for i in limit + 1..=n_max {
        let psi_i = psi(i, mode)?;
        let j = BigRational::from_integer(BigInt::from(i as u64)) - &psi_i;
        let floor = j.floor();
        let ceil = j.ceil();
        let fi = floor.to_integer().to_usize().expect("small index");
        let ci = ceil.to_integer().to_usize().expect("small index");
        let x = if fi == ci {
            BigRational::one() + &base[fi]
        } else {
            BigRational::one() + (&j - &floor) * &base[ci] + (&ceil - &j) * &base[fi]
        };
        let y = BigRational::from_integer(BigInt::from((i - 1) as u64)) / &psi_i;
        base.push((x + y) / BigRational::from_integer(BigInt::from(2)));
    }
    Ok(base)
}

/// Class-weighted expected moves over all of `P_n`:
/// `E(X_n) = sum_k f(n,k)/n! * base[n-k]`, exact rationals throughout.
/// `counts` must be the table of the paired end-anchored convention
/// (type 2 for prefix moves, type 3 for suffix; the tables coincide).
pub fn expected_value_model(counts: &CountTable, base: &[BigRational], n: usize) -> Result<BigRational> {
    if !matches!(
        counts.adjacency_type(),
        AdjacencyType::Type2 | AdjacencyType::Type3
    ) {
        return Err(Error::OutOfRange(
            "expected_value_model takes a type-2 or type-3 count table".into(),
        ));
    }
    if n > counts.n_max() || n >= base.len() {
        return Err(Error::OutOfRange(format!(
            "expected_value_model needs counts and base up to n={n}"
        )));
    }
    let nf = factorial_big(n);
    let mut total = BigRational::zero();
    for k in 0..=n {
        let f = counts.get(n, k);
        if f.is_zero() {
            continue;
        }
        total += BigRational::new(f, nf.clone()) * &base[n - k];
    }
    Ok(total)
}

/// Base averages from exact search up to `limit`, model predictions beyond,
/// and the induced expected values, for one prefix/suffix move family.
#[derive(Debug, Clone)]
pub struct EstimateModel {
    pub kind: BlockMoveKind,
    pub limit: usize,
    pub n_max: usize,
    pub psi_mode: PsiMode,
    /// `base[n]` for `n = 0..=n_max`; exact for `n <= limit`.
    pub base: Vec<BigRational>,
    /// `expected[n]` for `n = 0..=n_max` (`E(X_n)`; zero below size 2).
    pub expected: Vec<BigRational>,
}

impl EstimateModel {
    /// Builds the model. `distance_tables` supplies exact tables for sizes
    /// `2..=limit` (letting callers inject cached ones).
    pub fn build(
        kind: BlockMoveKind,
        limit: usize,
        n_max: usize,
        psi_mode: PsiMode,
        mut distance_tables: impl FnMut(usize) -> Result<DistanceTable>,
    ) -> Result<EstimateModel> {
        if kind == BlockMoveKind::Transposition {
            return Err(Error::OutOfRange(
                "the estimation model covers prefix and suffix transpositions".into(),
            ));
        }
        if n_max < limit {
            return Err(Error::OutOfRange(format!(
                "n_max {n_max} must be at least limit {limit}"
            )));
        }
        let mut exact = vec![BigRational::zero(), BigRational::zero()];
        for m in 2..=limit {
            let table = distance_tables(m)?;
            if table.n() != m || table.kind() != kind {
                return Err(Error::OutOfRange(format!(
                    "distance table for size {m} expected, got n={} kind={}",
                    table.n(),
                    table.kind()
                )));
            }
            exact.push(table.average_moves_zero()?);
        }
        let base = move_count_model(limit, &exact, n_max, psi_mode)?;
        let counts = build_count_table(n_max.max(2), kind.paired_adjacency())?;
        let mut expected = vec![BigRational::zero(), BigRational::zero()];
        for n in 2..=n_max {
            expected.push(expected_value_model(&counts, &base, n)?);
        }
        Ok(EstimateModel {
            kind,
            limit,
            n_max,
            psi_mode,
            base,
            expected,
        })
    }

    pub fn is_predicted(&self, n: usize) -> bool {
        n > self.limit
    }
}

/// Convenience for tests and the verify command: exhaustive-search model up
/// to `limit` with default budgets.
pub fn build_model_uncached(
    kind: BlockMoveKind,
    limit: usize,
    n_max: usize,
    psi_mode: PsiMode,
    workers: usize,
) -> Result<EstimateModel> {
    EstimateModel::build(kind, limit, n_max, psi_mode, |m| {
        crate::blockmoves::bfs_distances_with(m, kind, crate::blockmoves::DEFAULT_SEARCH_LIMIT, workers)
    })
}

/// Default budget used by [`empirical_double_probability`] callers.
pub fn default_oracle_limit() -> usize {
    DEFAULT_ORACLE_LIMIT
}

/// One computed-versus-predicted table: an exact column (empty past search
/// reach) and one prediction column per initialization limit (empty at or
/// below its limit, where the exact values are used verbatim).
#[derive(Debug, Clone)]
pub struct TableReplica {
    pub n_max: usize,
    /// Indexed by `n`, `0..=n_max`.
    pub computed: Vec<Option<BigRational>>,
    /// `(limit, column indexed by n)`.
    pub predictions: Vec<(usize, Vec<Option<BigRational>>)>,
}

/// Builds the base-average and expected-value replicas in one pass: exact
/// values from search up to `computed_to`, prediction columns for each
/// limit in `limits`. Distance tables come from `provider` (memoized here,
/// so cached tables are fetched once).
pub fn build_replicas(
    kind: BlockMoveKind,
    limits: &[usize],
    n_max: usize,
    computed_to: usize,
    psi_mode: PsiMode,
    mut provider: impl FnMut(usize) -> Result<DistanceTable>,
) -> Result<(TableReplica, TableReplica)> {
    let mut memo: Vec<Option<DistanceTable>> = vec![None; computed_to.max(n_max) + 1];
    let mut fetch = |m: usize, memo: &mut Vec<Option<DistanceTable>>| -> Result<DistanceTable> {
        if memo[m].is_none() {
            memo[m] = Some(provider(m)?);
        }
        Ok(memo[m].clone().expect("just inserted"))
    };

    let mut base_computed: Vec<Option<BigRational>> = vec![None; n_max + 1];
    let mut ex_computed: Vec<Option<BigRational>> = vec![None; n_max + 1];
    for n in 2..=computed_to.min(n_max) {
        let table = fetch(n, &mut memo)?;
        base_computed[n] = Some(table.average_moves_zero()?);
        ex_computed[n] = Some(table.expected_moves_exact());
    }

    let mut base_preds = Vec::new();
    let mut ex_preds = Vec::new();
    for &limit in limits {
        let model = EstimateModel::build(kind, limit, n_max, psi_mode, |m| fetch(m, &mut memo))?;
        let base_col: Vec<Option<BigRational>> = (0..=n_max)
            .map(|n| (n > limit).then(|| model.base[n].clone()))
            .collect();
        let ex_col: Vec<Option<BigRational>> = (0..=n_max)
            .map(|n| (n > limit).then(|| model.expected[n].clone()))
            .collect();
        base_preds.push((limit, base_col));
        ex_preds.push((limit, ex_col));
    }
    Ok((
        TableReplica {
            n_max,
            computed: base_computed,
            predictions: base_preds,
        },
        TableReplica {
            n_max,
            computed: ex_computed,
            predictions: ex_preds,
        },
    ))
}
