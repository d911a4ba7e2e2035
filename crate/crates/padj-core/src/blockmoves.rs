//! Block moves (transpositions, prefix transpositions, suffix
//! transpositions), exact sorting distances for all of `P_n` at small `n`
//! via breadth-first search from the identity, and the per-class statistics
//! they induce.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU8, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::permutation::{
    count_adjacencies_slice, factorial_u64, for_each_perm_lex, rank_slice, unrank_into,
    AdjacencyType, Permutation,
};
use crate::{Error, Result};

/// Default size cap for full-table breadth-first search (9! states).
pub const DEFAULT_SEARCH_LIMIT: usize = 9;
/// Hard cap: a 10! distance table is ~3.6 MB and still fine; beyond that
/// use the single-instance solver.
pub const MAX_SEARCH_LIMIT: usize = 10;
/// Largest size the iterative-deepening solver accepts.
pub const MAX_SOLVER_SIZE: usize = 12;

/// The three block-move families. Each is paired with the adjacency
/// convention whose count it monotonically completes: prefix transpositions
/// with type 2, suffix transpositions with type 3, unrestricted
/// transpositions with type 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockMoveKind {
    Transposition,
    PrefixTransposition,
    SuffixTransposition,
}

impl BlockMoveKind {
    pub const ALL: [BlockMoveKind; 3] = [
        BlockMoveKind::Transposition,
        BlockMoveKind::PrefixTransposition,
        BlockMoveKind::SuffixTransposition,
    ];

    pub fn paired_adjacency(self) -> AdjacencyType {
        match self {
            BlockMoveKind::Transposition => AdjacencyType::Type4,
            BlockMoveKind::PrefixTransposition => AdjacencyType::Type2,
            BlockMoveKind::SuffixTransposition => AdjacencyType::Type3,
        }
    }

    /// Most adjacencies a single move can create (or destroy): a triple is
    /// possible only for unrestricted transpositions.
    pub fn max_created(self) -> usize {
        match self {
            BlockMoveKind::Transposition => 3,
            _ => 2,
        }
    }

    pub(crate) fn cache_byte(self) -> u8 {
        match self {
            BlockMoveKind::Transposition => 0,
            BlockMoveKind::PrefixTransposition => 1,
            BlockMoveKind::SuffixTransposition => 2,
        }
    }

    pub(crate) fn from_cache_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(BlockMoveKind::Transposition),
            1 => Some(BlockMoveKind::PrefixTransposition),
            2 => Some(BlockMoveKind::SuffixTransposition),
            _ => None,
        }
    }
}

impl fmt::Display for BlockMoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BlockMoveKind::Transposition => "t",
            BlockMoveKind::PrefixTransposition => "pt",
            BlockMoveKind::SuffixTransposition => "st",
        };
        write!(f, "{s}")
    }
}

impl FromStr for BlockMoveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "t" | "transposition" => Ok(BlockMoveKind::Transposition),
            "pt" | "prefix" => Ok(BlockMoveKind::PrefixTransposition),
            "st" | "suffix" => Ok(BlockMoveKind::SuffixTransposition),
            other => Err(Error::Parse(format!(
                "unknown move kind {other:?} (expected t|pt|st)"
            ))),
        }
    }
}

/// Cut points `i < j < k` (1-based, `1 <= i`, `k <= n+1`) exchanging the
/// adjacent segments at positions `[i, j)` and `[j, k)`. A prefix
/// transposition fixes `i = 1`, a suffix transposition fixes `k = n+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockMove {
    i: usize,
    j: usize,
    k: usize,
}

impl BlockMove {
    pub fn new(i: usize, j: usize, k: usize) -> Result<Self> {
        if i >= 1 && i < j && j < k {
            Ok(BlockMove { i, j, k })
        } else {
            Err(Error::OutOfRange(format!(
                "cut points must satisfy 1 <= i < j < k, got ({i},{j},{k})"
            )))
        }
    }

    pub fn cuts(&self) -> (usize, usize, usize) {
        (self.i, self.j, self.k)
    }

    /// The move undoing this one (swap the same two segments back).
    pub fn inverse(&self) -> BlockMove {
        BlockMove {
            i: self.i,
            j: self.i + (self.k - self.j),
            k: self.k,
        }
    }

    pub(crate) fn apply_slice(&self, p: &[u8], out: &mut Vec<u8>) {
        out.clear();
        out.extend_from_slice(&p[..self.i - 1]);
        out.extend_from_slice(&p[self.j - 1..self.k - 1]);
        out.extend_from_slice(&p[self.i - 1..self.j - 1]);
        out.extend_from_slice(&p[self.k - 1..]);
    }
}

impl fmt::Display for BlockMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

/// All distinct moves of `kind` on size `n`, in deterministic (i, j, k)
/// order: `C(n+1, 3)` transpositions, `C(n, 2)` prefix or suffix
/// transpositions. Sizes below 2 admit no moves.
pub fn generate_moves(n: usize, kind: BlockMoveKind) -> Vec<BlockMove> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    match kind {
        BlockMoveKind::Transposition => {
            for i in 1..=n {
                for j in i + 1..=n {
                    for k in j + 1..=n + 1 {
                        out.push(BlockMove { i, j, k });
                    }
                }
            }
        }
        BlockMoveKind::PrefixTransposition => {
            for j in 2..=n {
                for k in j + 1..=n + 1 {
                    out.push(BlockMove { i: 1, j, k });
                }
            }
        }
        BlockMoveKind::SuffixTransposition => {
            for i in 1..n {
                for j in i + 1..=n {
                    out.push(BlockMove { i, j, k: n + 1 });
                }
            }
        }
    }
    out
}

/// Applies a block move, validating the cut points against `|p|`.
pub fn apply_move(p: &Permutation, m: &BlockMove) -> Result<Permutation> {
    if m.k > p.len() + 1 {
        return Err(Error::OutOfRange(format!(
            "move {m} does not fit a permutation of size {}",
            p.len()
        )));
    }
    let mut out = Vec::with_capacity(p.len());
    m.apply_slice(p.symbols(), &mut out);
    Permutation::new(out)
}

/// Change in adjacency count caused by `m` under convention `t`:
/// `count(m(p)) - count(p)`. Lies in `[-3, 3]`; prefix and suffix moves
/// stay within `[-2, 2]`.
pub fn adjacency_delta(p: &Permutation, m: &BlockMove, t: AdjacencyType) -> Result<i64> {
    let after = apply_move(p, m)?;
    Ok(after.count_adjacencies(t) as i64 - p.count_adjacencies(t) as i64)
}

/// Whether some prefix transposition creates two adjacencies at once on a
/// type-2-irreducible permutation.
///
/// Positional characterization rather than move enumeration: with `f` the
/// first symbol, a double exists iff `f >= 1` and either `f-1` sits at the
/// last position (move the prefix ending at `n-1` to the end, scoring the
/// virtual trailing adjacency), or the symbol `a` following `f-1` has `a-1`
/// strictly inside the prefix before `f-1`.
pub fn double_feasible_prefix(p: &Permutation) -> Result<bool> {
    if p.count_adjacencies(AdjacencyType::Type2) != 0 {
        return Err(Error::InvalidPermutation(format!(
            "double_feasible_prefix needs a type-2 irreducible permutation, got {p}"
        )));
    }
    let s = p.symbols();
    let n = s.len();
    if n < 2 || s[0] == 0 {
        return Ok(false);
    }
    let target = s[0] - 1;
    let ip = s.iter().position(|&v| v == target).unwrap();
    if ip == n - 1 {
        return Ok(true);
    }
    let a = s[ip + 1];
    if a == 0 {
        return Ok(false);
    }
    let ia = s.iter().position(|&v| v == a - 1).unwrap();
    Ok(ia < ip)
}

/// Exact block-move distance from the identity for every permutation of a
/// given size, indexed by lexicographic rank.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    n: usize,
    kind: BlockMoveKind,
    dist: Vec<u8>,
    diameter: u8,
}

impl DistanceTable {
    pub(crate) fn from_parts(n: usize, kind: BlockMoveKind, dist: Vec<u8>) -> Result<Self> {
        if dist.len() as u64 != factorial_u64(n) {
            return Err(Error::Cache(format!(
                "distance table for n={n} must hold {} entries, got {}",
                factorial_u64(n),
                dist.len()
            )));
        }
        let diameter = dist.iter().copied().max().unwrap_or(0);
        if diameter == u8::MAX {
            return Err(Error::Cache("distance table holds unreached states".into()));
        }
        Ok(DistanceTable {
            n,
            kind,
            dist,
            diameter,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> BlockMoveKind {
        self.kind
    }

    pub fn diameter(&self) -> u8 {
        self.diameter
    }

    pub fn entries(&self) -> &[u8] {
        &self.dist
    }

    pub fn distance_by_rank(&self, rank: u64) -> Result<u8> {
        self.dist
            .get(rank as usize)
            .copied()
            .ok_or_else(|| Error::OutOfRange(format!("rank {rank} out of table range")))
    }

    pub fn distance(&self, p: &Permutation) -> Result<u8> {
        if p.len() != self.n {
            return Err(Error::OutOfRange(format!(
                "permutation of size {} queried against a size-{} table",
                p.len(),
                self.n
            )));
        }
        Ok(self.dist[p.rank() as usize])
    }

    /// Per-class `(k, count, total distance)` under the paired adjacency
    /// convention, for `k = 0..=n+delta`.
    pub fn class_stats(&self) -> Vec<ClassStat> {
        let t = self.kind.paired_adjacency();
        let mut stats: Vec<ClassStat> = (0..=t.max_adjacencies(self.n))
            .map(|k| ClassStat {
                k,
                count: 0,
                total: 0,
            })
            .collect();
        let mut rank = 0usize;
        for_each_perm_lex(self.n, |p| {
            let k = count_adjacencies_slice(p, t);
            stats[k].count += 1;
            stats[k].total += self.dist[rank] as u64;
            rank += 1;
        });
        stats
    }

    /// Mean distance over the irreducible class `P_n(0)` of the paired
    /// convention, as an exact rational.
    pub fn average_moves_zero(&self) -> Result<BigRational> {
        let zero = &self.class_stats()[0];
        if zero.count == 0 {
            return Err(Error::Undefined(format!(
                "P_{}(0) is empty under {}; average undefined",
                self.n,
                self.kind.paired_adjacency()
            )));
        }
        Ok(BigRational::new(
            BigInt::from(zero.total),
            BigInt::from(zero.count),
        ))
    }

    /// Mean distance over all of `P_n`, as an exact rational.
    pub fn expected_moves_exact(&self) -> BigRational {
        let total: u64 = self.dist.iter().map(|&d| d as u64).sum();
        BigRational::new(BigInt::from(total), BigInt::from(factorial_u64(self.n)))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassStat {
    pub k: usize,
    pub count: u64,
    pub total: u64,
}

impl ClassStat {
    pub fn average(&self) -> Option<BigRational> {
        if self.count == 0 {
            None
        } else {
            Some(BigRational::new(
                BigInt::from(self.total),
                BigInt::from(self.count),
            ))
        }
    }
}

/// Breadth-first distances from the identity under the default search
/// limit, single worker.
pub fn bfs_distances(n: usize, kind: BlockMoveKind) -> Result<DistanceTable> {
    bfs_distances_with(n, kind, DEFAULT_SEARCH_LIMIT, 1)
}

/// Breadth-first distances with an explicit size budget (capped at
/// [`MAX_SEARCH_LIMIT`]) and worker count. Distances are
/// schedule-independent: expansion is level-synchronous and each rank is
/// claimed at most once per level.
pub fn bfs_distances_with(
    n: usize,
    kind: BlockMoveKind,
    limit: usize,
    workers: usize,
) -> Result<DistanceTable> {
    let limit = limit.min(MAX_SEARCH_LIMIT);
    if n > limit {
        return Err(Error::ResourceLimit(format!(
            "bfs_distances refuses n={n}: the table would hold {}! entries (limit {limit})",
            n
        )));
    }
    let workers = workers.max(1);
    let total = factorial_u64(n) as usize;
    let moves = generate_moves(n, kind);
    let templates: Vec<Vec<u8>> = moves
        .iter()
        .map(|m| {
            let idx: Vec<u8> = (0..n as u8).collect();
            let mut t = Vec::with_capacity(n);
            m.apply_slice(&idx, &mut t);
            t
        })
        .collect();

    let dist: Vec<AtomicU8> = (0..total).map(|_| AtomicU8::new(u8::MAX)).collect();
    dist[0].store(0, AtomicOrdering::Relaxed);
    let mut frontier: Vec<u32> = vec![0];
    let mut depth: u8 = 0;
    while !frontier.is_empty() {
        depth += 1;
        let next = if workers == 1 || frontier.len() < 4096 {
            expand_chunk(n, &frontier, &templates, &dist, depth)
        } else {
            let chunk = frontier.len().div_ceil(workers);
            std::thread::scope(|scope| {
                let handles: Vec<_> = frontier
                    .chunks(chunk)
                    .map(|part| scope.spawn(|| expand_chunk(n, part, &templates, &dist, depth)))
                    .collect();
                let mut merged = Vec::new();
                for h in handles {
                    merged.extend(h.join().expect("bfs worker panicked"));
                }
                merged
            })
        };
        frontier = next;
    }
    let dist: Vec<u8> = dist.into_iter().map(|a| a.into_inner()).collect();
    debug_assert!(dist.iter().all(|&d| d != u8::MAX), "moves must generate P_n");
    DistanceTable::from_parts(n, kind, dist)
}

fn expand_chunk(
    n: usize,
    frontier: &[u32],
    templates: &[Vec<u8>],
    dist: &[AtomicU8],
    depth: u8,
) -> Vec<u32> {
    let mut next = Vec::new();
    let mut buf = vec![0u8; n];
    let mut img = vec![0u8; n];
    for &r in frontier {
        unrank_into(n, r as u64, &mut buf);
        for t in templates {
            for (x, &src) in img.iter_mut().zip(t.iter()) {
                *x = buf[src as usize];
            }
            let rr = rank_slice(&img) as usize;
            if dist[rr]
                .compare_exchange(u8::MAX, depth, AtomicOrdering::Relaxed, AtomicOrdering::Relaxed)
                .is_ok()
            {
                next.push(rr as u32);
            }
        }
    }
    next
}

/// One `dist[p] != dist[reduce(p)]` witness.
#[derive(Debug, Clone)]
pub struct InvarianceViolation {
    pub perm: Permutation,
    pub dist: u8,
    pub reduced: Permutation,
    pub reduced_dist: u8,
}

#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub n: usize,
    pub kind: BlockMoveKind,
    pub checked: u64,
    pub violations: Vec<InvarianceViolation>,
}

impl InvarianceReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies `dist[p] = dist[reduce(p)]` for every `p` in `P_n`, reading the
/// reduced distance from the table of the smaller size. `tables` must hold
/// one table per size `0..=n` for the same move kind. Violations are data,
/// not errors.
pub fn reduction_invariance_check(tables: &[DistanceTable], n: usize) -> Result<InvarianceReport> {
    if tables.len() < n + 1 {
        return Err(Error::OutOfRange(format!(
            "need distance tables for sizes 0..={n}, got {}",
            tables.len()
        )));
    }
    for (m, t) in tables.iter().enumerate().take(n + 1) {
        if t.n() != m {
            return Err(Error::OutOfRange(format!(
                "table at index {m} is for size {}",
                t.n()
            )));
        }
    }
    let kind = tables[n].kind();
    let t = kind.paired_adjacency();
    let mut violations = Vec::new();
    let mut rank = 0usize;
    let mut checked = 0u64;
    for_each_perm_lex(n, |s| {
        let d = tables[n].entries()[rank];
        rank += 1;
        checked += 1;
        let p = Permutation::new(s.to_vec()).expect("lex generator yields valid permutations");
        let reduced = p.reduce(t);
        let rd = tables[reduced.len()].entries()[reduced.rank() as usize];
        if rd != d {
            violations.push(InvarianceViolation {
                perm: p,
                dist: d,
                reduced,
                reduced_dist: rd,
            });
        }
    });
    Ok(InvarianceReport {
        n,
        kind,
        checked,
        violations,
    })
}

/// Builds (or trivially fills, for sizes 0 and 1) distance tables for every
/// size `0..=n`.
pub fn build_tables_up_to(
    n: usize,
    kind: BlockMoveKind,
    limit: usize,
    workers: usize,
) -> Result<Vec<DistanceTable>> {
    (0..=n)
        .map(|m| bfs_distances_with(m, kind, limit, workers))
        .collect()
}

/// Reads an optimal move sequence for `p` off a full distance table by
/// greedy descent: from any non-identity state some move lowers the
/// distance by one.
pub fn solve_via_table(p: &Permutation, table: &DistanceTable) -> Result<Vec<BlockMove>> {
    if p.len() != table.n() {
        return Err(Error::OutOfRange(format!(
            "permutation of size {} against a size-{} table",
            p.len(),
            table.n()
        )));
    }
    let moves = generate_moves(p.len(), table.kind());
    let mut seq = Vec::new();
    let mut cur = p.clone();
    let mut d = table.distance(&cur)?;
    while d > 0 {
        let mut advanced = false;
        for m in &moves {
            let next = apply_move(&cur, m)?;
            if table.distance(&next)? == d - 1 {
                seq.push(*m);
                cur = next;
                d -= 1;
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Err(Error::Inconsistency(format!(
                "no distance-decreasing move from {cur}; table corrupt?"
            )));
        }
    }
    Ok(seq)
}

/// Optimal sort of a single permutation by iterative deepening, admissible
/// bound `ceil((max_adjacencies - current) / max_created)`. Intended for
/// sizes just past full-table reach; refuses n > [`MAX_SOLVER_SIZE`].
pub fn solve_iterative_deepening(p: &Permutation, kind: BlockMoveKind) -> Result<Vec<BlockMove>> {
    let n = p.len();
    if n > MAX_SOLVER_SIZE {
        return Err(Error::ResourceLimit(format!(
            "iterative deepening solver accepts sizes up to {MAX_SOLVER_SIZE}, got {n}"
        )));
    }
    let t = kind.paired_adjacency();
    let per_move = kind.max_created() as i64;
    let max_adj = t.max_adjacencies(n) as i64;
    let h = |s: &[u8]| -> i64 {
        let a = count_adjacencies_slice(s, t) as i64;
        (max_adj - a + per_move - 1) / per_move
    };
    let moves = generate_moves(n, kind);
    let templates: Vec<Vec<u8>> = moves
        .iter()
        .map(|m| {
            let idx: Vec<u8> = (0..n as u8).collect();
            let mut tmpl = Vec::with_capacity(n);
            m.apply_slice(&idx, &mut tmpl);
            tmpl
        })
        .collect();

    struct Ctx<'a> {
        templates: &'a [Vec<u8>],
        moves: &'a [BlockMove],
        path: Vec<BlockMove>,
        h: &'a dyn Fn(&[u8]) -> i64,
    }

    fn dfs(ctx: &mut Ctx, state: &[u8], g: i64, bound: i64) -> std::result::Result<i64, ()> {
        let est = g + (ctx.h)(state);
        if est > bound {
            return Ok(est);
        }
        if state.iter().enumerate().all(|(i, &s)| s as usize == i) {
            return Err(()); // found; path holds the answer
        }
        let mut min_next = i64::MAX;
        let mut img = vec![0u8; state.len()];
        for (mi, tmpl) in ctx.templates.iter().enumerate() {
            for (x, &src) in img.iter_mut().zip(tmpl.iter()) {
                *x = state[src as usize];
            }
            ctx.path.push(ctx.moves[mi]);
            let sub = dfs(ctx, &img.clone(), g + 1, bound)?;
            ctx.path.pop();
            min_next = min_next.min(sub);
        }
        Ok(min_next)
    }

    let start = p.symbols().to_vec();
    if p.is_identity() {
        return Ok(Vec::new());
    }
    let mut bound = h(&start).max(1);
    let mut ctx = Ctx {
        templates: &templates,
        moves: &moves,
        path: Vec::new(),
        h: &h,
    };
    loop {
        match dfs(&mut ctx, &start, 0, bound) {
            Err(()) => return Ok(ctx.path),
            Ok(next) => {
                if next == i64::MAX {
                    return Err(Error::Inconsistency(format!(
                        "search space exhausted without sorting {p}"
                    )));
                }
                bound = next;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(symbols: &[u8]) -> Permutation {
        Permutation::new(symbols.to_vec()).unwrap()
    }

    #[test]
    fn move_counts_match_binomials() {
        assert_eq!(generate_moves(3, BlockMoveKind::PrefixTransposition).len(), 3);
        assert_eq!(generate_moves(4, BlockMoveKind::Transposition).len(), 10);
        for kind in BlockMoveKind::ALL {
            assert_eq!(generate_moves(2, kind).len(), 1);
        }
        assert!(generate_moves(1, BlockMoveKind::Transposition).is_empty());
    }

    #[test]
    fn apply_move_examples_and_inverse() {
        let m = BlockMove::new(1, 2, 3).unwrap();
        assert_eq!(apply_move(&p(&[2, 1, 0]), &m).unwrap(), p(&[1, 2, 0]));
        let m = BlockMove::new(1, 3, 4).unwrap(); // prefix [1..2] to end
        let q = apply_move(&p(&[1, 0, 2]), &m).unwrap();
        assert_eq!(q, p(&[2, 1, 0]));
        assert_eq!(apply_move(&q, &m.inverse()).unwrap(), p(&[1, 0, 2]));
        assert!(BlockMove::new(2, 2, 3).is_err());
        assert!(apply_move(&p(&[1, 0]), &BlockMove::new(1, 2, 4).unwrap()).is_err());
    }

    #[test]
    fn every_move_has_an_inverse_of_the_same_kind() {
        for kind in BlockMoveKind::ALL {
            let moves = generate_moves(6, kind);
            let q = p(&[3, 1, 4, 0, 5, 2]);
            for m in &moves {
                let inv = m.inverse();
                assert!(moves.contains(&inv), "{kind}: {m} inverse {inv} missing");
                assert_eq!(
                    apply_move(&apply_move(&q, m).unwrap(), &inv).unwrap(),
                    q
                );
            }
        }
    }

    #[test]
    fn adjacency_delta_examples() {
        // (2,1,0): moving prefix [2] after the trailing 0 puts n-1 last
        let q = p(&[2, 1, 0]);
        let m = BlockMove::new(1, 2, 4).unwrap();
        assert_eq!(adjacency_delta(&q, &m, AdjacencyType::Type2).unwrap(), 1);
        // splitting an identity adjacency is destructive
        let id = Permutation::identity(5);
        let m = BlockMove::new(1, 2, 3).unwrap();
        assert!(adjacency_delta(&id, &m, AdjacencyType::Type1).unwrap() < 0);
    }

    #[test]
    fn delta_ranges_exhaustive_small() {
        for kind in BlockMoveKind::ALL {
            let t = kind.paired_adjacency();
            let bound = kind.max_created() as i64;
            let mut best = i64::MIN;
            for n in 2..=5 {
                let moves = generate_moves(n, kind);
                for_each_perm_lex(n, |s| {
                    let q = Permutation::new(s.to_vec()).unwrap();
                    for m in &moves {
                        let d = adjacency_delta(&q, m, t).unwrap();
                        assert!((-bound..=bound).contains(&d), "{kind} {q} {m} -> {d}");
                        best = best.max(d);
                    }
                });
            }
            // the bound is attained: triples exist for transpositions,
            // doubles for the restricted kinds
            assert_eq!(best, bound, "{kind}");
        }
    }

    #[test]
    fn double_feasibility_examples_and_exhaustive_agreement() {
        assert!(!double_feasible_prefix(&p(&[0, 2, 1])).unwrap());
        assert!(!double_feasible_prefix(&p(&[2, 1, 0])).unwrap());
        assert!(double_feasible_prefix(&p(&[1, 3, 0, 2])).unwrap());
        assert!(double_feasible_prefix(&p(&[0, 1])).is_err()); // reducible input
        for n in 2..=8 {
            let moves = generate_moves(n, BlockMoveKind::PrefixTransposition);
            for_each_perm_lex(n, |s| {
                if count_adjacencies_slice(s, AdjacencyType::Type2) != 0 {
                    return;
                }
                let q = Permutation::new(s.to_vec()).unwrap();
                let brute = moves.iter().any(|m| {
                    adjacency_delta(&q, m, AdjacencyType::Type2).unwrap() == 2
                });
                assert_eq!(
                    double_feasible_prefix(&q).unwrap(),
                    brute,
                    "predicate disagrees with enumeration on {q}"
                );
            });
        }
    }

    #[test]
    fn bfs_small_distances() {
        let dt = bfs_distances(2, BlockMoveKind::PrefixTransposition).unwrap();
        assert_eq!(dt.distance(&p(&[1, 0])).unwrap(), 1);
        assert_eq!(dt.distance(&Permutation::identity(2)).unwrap(), 0);
        assert_eq!(dt.diameter(), 1);

        // reverse order permutation needs ceil((n+1)/2) transpositions at n=5
        let dt = bfs_distances(5, BlockMoveKind::Transposition).unwrap();
        assert_eq!(dt.distance(&Permutation::reversed(5)).unwrap(), 3);
        assert_eq!(dt.diameter(), 3);

        assert!(matches!(
            bfs_distances(10, BlockMoveKind::Transposition),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn bfs_neighbors_differ_by_at_most_one() {
        let dt = bfs_distances(5, BlockMoveKind::PrefixTransposition).unwrap();
        let moves = generate_moves(5, BlockMoveKind::PrefixTransposition);
        for_each_perm_lex(5, |s| {
            let q = Permutation::new(s.to_vec()).unwrap();
            let d = dt.distance(&q).unwrap() as i64;
            for m in &moves {
                let e = dt.distance(&apply_move(&q, m).unwrap()).unwrap() as i64;
                assert!((d - e).abs() <= 1);
            }
        });
    }

    #[test]
    fn parallel_bfs_matches_sequential() {
        let a = bfs_distances_with(7, BlockMoveKind::PrefixTransposition, 9, 1).unwrap();
        let b = bfs_distances_with(7, BlockMoveKind::PrefixTransposition, 9, 4).unwrap();
        assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn average_examples() {
        let dt = bfs_distances(3, BlockMoveKind::PrefixTransposition).unwrap();
        assert_eq!(
            dt.average_moves_zero().unwrap(),
            BigRational::from_integer(2.into())
        );
        assert_eq!(
            dt.expected_moves_exact(),
            BigRational::new(7.into(), 6.into())
        );
        let dt = bfs_distances(5, BlockMoveKind::PrefixTransposition).unwrap();
        assert_eq!(
            dt.average_moves_zero().unwrap(),
            BigRational::new(34.into(), 11.into())
        );
    }

    #[test]
    fn class_stats_cover_the_group() {
        let dt = bfs_distances(6, BlockMoveKind::PrefixTransposition).unwrap();
        let stats = dt.class_stats();
        assert_eq!(stats.iter().map(|s| s.count).sum::<u64>(), 720);
        assert_eq!(stats[6].count, 1); // the identity class
        assert_eq!(stats[6].total, 0);
        assert_eq!(stats[5].count, 0); // k = n-1 empty under type 2
    }

    #[test]
    fn reduction_invariance_small() {
        for kind in [BlockMoveKind::PrefixTransposition, BlockMoveKind::Transposition] {
            let tables = build_tables_up_to(6, kind, 9, 1).unwrap();
            for n in 2..=6 {
                let report = reduction_invariance_check(&tables, n).unwrap();
                assert!(report.ok(), "{kind} n={n}: {:?}", report.violations.first());
                assert_eq!(report.checked, factorial_u64(n));
            }
        }
    }

    #[test]
    fn observation_singles_always_available_small() {
        for kind in BlockMoveKind::ALL {
            let t = kind.paired_adjacency();
            for n in 2..=6 {
                let moves = generate_moves(n, kind);
                for_each_perm_lex(n, |s| {
                    if count_adjacencies_slice(s, t) != 0 {
                        return;
                    }
                    let q = Permutation::new(s.to_vec()).unwrap();
                    let best = moves
                        .iter()
                        .map(|m| adjacency_delta(&q, m, t).unwrap())
                        .max()
                        .unwrap();
                    assert!(best >= 1, "{kind}: irreducible {q} admits no single");
                });
            }
        }
    }

    #[test]
    fn solvers_agree_with_distance_table() {
        let dt = bfs_distances(6, BlockMoveKind::PrefixTransposition).unwrap();
        for r in (0..720).step_by(37) {
            let q = Permutation::unrank(6, r).unwrap();
            let seq = solve_via_table(&q, &dt).unwrap();
            assert_eq!(seq.len() as u8, dt.distance(&q).unwrap());
            let mut cur = q.clone();
            for m in &seq {
                cur = apply_move(&cur, m).unwrap();
            }
            assert!(cur.is_identity());

            let seq2 = solve_iterative_deepening(&q, BlockMoveKind::PrefixTransposition).unwrap();
            assert_eq!(seq2.len(), seq.len(), "IDDFS not optimal for {q}");
            let mut cur = q;
            for m in &seq2 {
                cur = apply_move(&cur, m).unwrap();
            }
            assert!(cur.is_identity());
        }
    }

    #[test]
    fn iddfs_handles_sizes_past_table_reach() {
        let q = p(&[9, 4, 1, 8, 3, 6, 0, 5, 2, 7]);
        let seq = solve_iterative_deepening(&q, BlockMoveKind::PrefixTransposition).unwrap();
        let mut cur = q;
        for m in &seq {
            cur = apply_move(&cur, m).unwrap();
        }
        assert!(cur.is_identity());
        assert!(solve_iterative_deepening(
            &Permutation::identity(13),
            BlockMoveKind::PrefixTransposition
        )
        .is_err());
    }
}
