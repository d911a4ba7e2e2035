//! Class cardinalities `f(n, k) = |P_n(k)|` for the four adjacency
//! conventions, computed by `O(n^2)` recurrences in exact integer
//! arithmetic, plus the closed-form cross-checks (derangement numbers,
//! binomial copy multiplicities) used to validate them.
//!
//! Out-of-range `f` values (negative `k`, or `k` beyond `n + delta`) are
//! defined as 0, so the recurrences need no edge-case branching.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::permutation::AdjacencyType;
use crate::{Error, Result};

/// Triangular table of `f(n, k)` for one adjacency convention, `1 <= n <=
/// n_max`. Counts are arbitrary precision: the type-1 zero class already
/// exceeds `3 * 10^10` at `n = 14`.
#[derive(Debug, Clone)]
pub struct CountTable {
    adjacency_type: AdjacencyType,
    n_max: usize,
    rows: Vec<Vec<BigInt>>,
}

// Base rows for the end-anchored conventions. The two-row recurrence shared
// by types 2, 3 and 4 is seeded differently per convention; type 2/3 rows
// n = 2..4 are fixed by the brute-force oracle (they match the published
// triangle), type 4 rows n = 2..3 follow the counting algorithm's stated
// initialization.
const TYPE2_SEEDS: [&[u64]; 3] = [&[1, 0, 1], &[2, 3, 0, 1], &[9, 8, 6, 0, 1]];
const TYPE4_SEEDS: [&[u64]; 2] = [&[1, 0, 0, 1], &[1, 4, 0, 0, 1]];

/// Fills the table for `2 <= n <= n_max` by the recurrence for `t`
/// (`n_max >= 2`). Types 2 and 3 share one recurrence and base values and
/// therefore produce identical tables.
pub fn build_count_table(n_max: usize, t: AdjacencyType) -> Result<CountTable> {
    if n_max < 2 {
        return Err(Error::OutOfRange(format!(
            "count table needs n_max >= 2, got {n_max}"
        )));
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max);
    // Row n = 1 by convention: the single symbol 0 is simultaneously the
    // first symbol 0 and the last symbol n-1, so it carries one adjacency
    // per virtual boundary the convention imagines.
    rows.push(match t {
        AdjacencyType::Type1 => vec![BigInt::one()],
        AdjacencyType::Type2 | AdjacencyType::Type3 => vec![BigInt::zero(), BigInt::one()],
        AdjacencyType::Type4 => vec![BigInt::zero(), BigInt::zero(), BigInt::one()],
    });
    match t {
        AdjacencyType::Type1 => {
            for n in 2..=n_max {
                let prev = rows.last().unwrap();
                let g = |j: i64| lookup(prev, j);
                let mut row = Vec::with_capacity(n);
                for k in 0..n as i64 {
                    let v = g(k - 1) + g(k) * (n as i64 - 1 - k) + g(k + 1) * (k + 1);
                    debug_assert!(!v.is_negative());
                    row.push(v);
                }
                rows.push(row);
            }
        }
        _ => {
            let seeds: &[&[u64]] = if t == AdjacencyType::Type4 {
                &TYPE4_SEEDS
            } else {
                &TYPE2_SEEDS
            };
            for seed in seeds.iter().take(n_max - 1) {
                rows.push(seed.iter().map(|&v| BigInt::from(v)).collect());
            }
            for n in rows.len() + 1..=n_max {
                let row = two_row_step(&rows[n - 2], &rows[n - 3], n, t.max_adjacencies(n));
                rows.push(row);
            }
        }
    }
    Ok(CountTable {
        adjacency_type: t,
        n_max,
        rows,
    })
}

// One row of the shared recurrence for the end-anchored conventions:
// f(i,j) = (f(i-1,j-1) - f(i-2,j-2))*2 + f(i-2,j-2)
//        + (f(i-1,j+1) - f(i-2,j))*(j+1) + f(i-2,j)*(i-j-1)
//        + (f(i-1,j)   - f(i-2,j-1))*(i-j-2)
//        + f(i-2,j+1)*(j+1)
// The (i-j-2) coefficient goes negative near the diagonal but always
// multiplies a zero difference there.
fn two_row_step(prev: &[BigInt], prev2: &[BigInt], i: usize, max_k: usize) -> Vec<BigInt> {
    let g1 = |j: i64| lookup(prev, j);
    let g2 = |j: i64| lookup(prev2, j);
    let i = i as i64;
    let mut row = Vec::with_capacity(max_k + 1);
    for j in 0..=max_k as i64 {
        let v: BigInt = (g1(j - 1) - g2(j - 2)) * 2 + g2(j - 2)
            + (g1(j + 1) - g2(j)) * (j + 1)
            + g2(j) * (i - j - 1)
            + (g1(j) - g2(j - 1)) * (i - j - 2)
            + g2(j + 1) * (j + 1);
        debug_assert!(!v.is_negative(), "negative count at i={i} j={j}");
        row.push(v);
    }
    row
}

fn lookup(row: &[BigInt], j: i64) -> BigInt {
    if j < 0 || j as usize >= row.len() {
        BigInt::zero()
    } else {
        row[j as usize].clone()
    }
}

impl CountTable {
    pub fn adjacency_type(&self) -> AdjacencyType {
        self.adjacency_type
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `f(n, k)`, with out-of-range arguments reading 0.
    pub fn get(&self, n: usize, k: usize) -> BigInt {
        if n == 0 || n > self.n_max {
            return BigInt::zero();
        }
        lookup(&self.rows[n - 1], k as i64)
    }

    /// The row `f(n, 0..=n+delta)`.
    pub fn row(&self, n: usize) -> Result<&[BigInt]> {
        if n == 0 || n > self.n_max {
            return Err(Error::OutOfRange(format!(
                "row {n} not in table (1..={})",
                self.n_max
            )));
        }
        Ok(&self.rows[n - 1])
    }

    pub fn row_sum(&self, n: usize) -> Result<BigInt> {
        Ok(self.row(n)?.iter().sum())
    }

    /// `f(n, 0) / n!` as an exact rational.
    pub fn irreducible_fraction(&self, n: usize) -> Result<BigRational> {
        self.row(n)?;
        Ok(BigRational::new(self.get(n, 0), factorial_big(n)))
    }

    /// Number of distinct irreducible permutations that members of `P_n`
    /// can reduce to (including irreducible members reducing to themselves,
    /// and — for the end-anchored conventions — the size-0 reduction of the
    /// identity).
    pub fn vector_alphabet_size(&self, n: usize) -> Result<BigInt> {
        self.row(n)?;
        let mut total: BigInt = (1..=n).map(|k| self.get(k, 0)).sum();
        if self.adjacency_type != AdjacencyType::Type1 {
            total += 1; // the empty permutation
        }
        Ok(total)
    }
}

/// Derangement numbers `D_0..D_n_max` (`D_0 = 1`, `D_1 = 0`,
/// `D_n = (n-1)(D_(n-1) + D_(n-2))`).
pub fn derangements(n_max: usize) -> Vec<BigInt> {
    let mut d = Vec::with_capacity(n_max + 1);
    d.push(BigInt::one());
    if n_max == 0 {
        return d;
    }
    d.push(BigInt::zero());
    for n in 2..=n_max {
        let v = (&d[n - 1] + &d[n - 2]) * (n as i64 - 1);
        d.push(v);
    }
    d
}

pub fn factorial_big(n: usize) -> BigInt {
    (2..=n as u64).map(BigInt::from).product()
}

/// Exact binomial coefficient via the multiplicative formula.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut res = BigInt::one();
    for i in 1..=k {
        res = res * (n - k + i) / i;
    }
    res
}

/// Tanny's closed form for the type-1 class sizes:
/// `C(n-1, k) * (D_(n-k) + D_(n-1-k))`.
pub fn tanny_count(n: usize, k: usize) -> Result<BigInt> {
    if n == 0 || k >= n {
        return Err(Error::OutOfRange(format!(
            "tanny_count needs 0 <= k <= n-1, got n={n} k={k}"
        )));
    }
    let d = derangements(n - k);
    Ok(binomial(n as u64 - 1, k as u64) * (&d[n - k] + &d[n - 1 - k]))
}

/// Whitworth's count of permutations with no end-anchored (type 2/3)
/// adjacencies: `n! * sum_(j=0)^(n) (-1)^j / j!`, evaluated exactly.
pub fn whitworth_zero_count(n: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::OutOfRange("whitworth_zero_count needs n >= 1".into()));
    }
    // running term n!/j!, built from j = n downwards
    let mut term = BigInt::one();
    let mut acc = BigInt::zero();
    for j in (0..=n).rev() {
        if (n - j).is_multiple_of(2) {
            acc += &term;
        } else {
            acc -= &term;
        }
        term *= j as i64; // now n!/(j-1)!
    }
    if !n.is_multiple_of(2) {
        acc = -acc;
    }
    debug_assert!(!acc.is_negative());
    Ok(acc)
}

/// How `r` compares to `1/e`, decided exactly from the alternating series
/// `sum (-1)^j / j!` (never `Equal`: `1/e` is irrational).
pub fn cmp_inv_e(r: &BigRational) -> Ordering {
    let mut term = BigRational::one();
    let mut partial = BigRational::one(); // S_0 = 1
    for j in 1..10_000u64 {
        term /= BigInt::from(j);
        if j % 2 == 1 {
            partial -= &term; // S_odd < 1/e
            if *r <= partial {
                return Ordering::Less;
            }
        } else {
            partial += &term; // S_even > 1/e
            if *r >= partial {
                return Ordering::Greater;
            }
        }
    }
    unreachable!("rational input must separate from 1/e");
}

/// Copy multiplicity: `|P_n(n-k)| = c * |P_k(0)|` exactly.
#[derive(Debug, Clone)]
pub struct CopyCount {
    pub n: usize,
    pub k: usize,
    pub adjacency_type: AdjacencyType,
    pub c: BigInt,
}

/// The number of copies of each irreducible permutation of size `k` inside
/// `P_n(n-k)`: a closed binomial form for types 1-3, exact division for
/// type 4 (whose published recurrence undercounts; the division is asserted
/// exact either way).
pub fn copies_count(table: &CountTable, n: usize, k: usize) -> Result<CopyCount> {
    if k == 0 || k > n || n > table.n_max() {
        return Err(Error::OutOfRange(format!(
            "copies_count needs 1 <= k <= n <= n_max, got n={n} k={k}"
        )));
    }
    let t = table.adjacency_type();
    let class0 = table.get(k, 0);
    if class0.is_zero() {
        return Err(Error::Undefined(format!(
            "P_{k}(0) is empty under {t}; no copy multiplicity"
        )));
    }
    let target = table.get(n, n - k);
    let c = match t {
        AdjacencyType::Type1 => binomial(n as u64 - 1, k as u64 - 1),
        AdjacencyType::Type2 | AdjacencyType::Type3 => (1..=(n - k + 1) as u64)
            .map(|i| binomial(n as u64 - i, k as u64 - 1))
            .sum(),
        AdjacencyType::Type4 => {
            let (q, r) = num_integer::div_rem(target.clone(), class0.clone());
            if !r.is_zero() {
                return Err(Error::Inconsistency(format!(
                    "type4 copy multiplicity not integral at n={n} k={k}: {target} / {class0}"
                )));
            }
            q
        }
    };
    if &c * &class0 != target {
        return Err(Error::Inconsistency(format!(
            "copy multiplicity mismatch under {t} at n={n} k={k}: {c} * {class0} != {target}"
        )));
    }
    Ok(CopyCount {
        n,
        k,
        adjacency_type: t,
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::{enumerate_class, Permutation};

    fn big(v: u64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn derangement_numbers() {
        let d = derangements(8);
        assert_eq!(d[0], big(1));
        assert_eq!(d[1], big(0));
        assert_eq!(d[4], big(9));
        assert_eq!(d[8], big(14833));
    }

    #[test]
    fn type1_table_matches_published_rows() {
        let t = build_count_table(14, AdjacencyType::Type1).unwrap();
        assert_eq!(t.row(5).unwrap(), &[big(53), big(44), big(18), big(4), big(1)]);
        assert_eq!(t.get(7, 2), big(795));
        assert_eq!(t.get(14, 0), BigInt::from(34361893981u64));
        for n in 2..=14 {
            assert_eq!(t.row_sum(n).unwrap(), factorial_big(n));
            assert_eq!(t.get(n, n - 1), big(1));
        }
    }

    #[test]
    fn type2_table_matches_published_rows() {
        let t = build_count_table(14, AdjacencyType::Type2).unwrap();
        assert_eq!(
            t.row(5).unwrap(),
            &[big(44), big(45), big(20), big(10), big(0), big(1)]
        );
        assert_eq!(t.get(14, 0), BigInt::from(32071101049u64));
        for n in 2..=14 {
            assert_eq!(t.row_sum(n).unwrap(), factorial_big(n));
            assert_eq!(t.get(n, n), big(1));
            assert_eq!(t.get(n, n - 1), big(0));
        }
    }

    #[test]
    fn type3_equals_type2_entry_for_entry() {
        let t2 = build_count_table(12, AdjacencyType::Type2).unwrap();
        let t3 = build_count_table(12, AdjacencyType::Type3).unwrap();
        for n in 1..=12 {
            assert_eq!(t2.row(n).unwrap(), t3.row(n).unwrap());
        }
    }

    #[test]
    fn type4_table_matches_published_rows() {
        let t = build_count_table(14, AdjacencyType::Type4).unwrap();
        assert_eq!(
            t.row(6).unwrap(),
            &[big(229), big(252), big(168), big(35), big(35), big(0), big(0), big(1)]
        );
        assert_eq!(t.get(14, 0), BigInt::from(29943053061u64));
        for n in 2..=14 {
            assert_eq!(t.row_sum(n).unwrap(), factorial_big(n));
            assert_eq!(t.get(n, n + 1), big(1));
            assert_eq!(t.get(n, n), big(0));
            assert_eq!(t.get(n, n - 1), big(0));
        }
    }

    #[test]
    fn rejects_tiny_n_max() {
        assert!(build_count_table(1, AdjacencyType::Type1).is_err());
    }

    #[test]
    fn tanny_matches_type1() {
        assert_eq!(tanny_count(5, 1).unwrap(), big(44));
        assert_eq!(tanny_count(7, 2).unwrap(), big(795));
        let t = build_count_table(14, AdjacencyType::Type1).unwrap();
        for n in 1..=14 {
            for k in 0..n {
                assert_eq!(tanny_count(n, k).unwrap(), t.get(n, k), "n={n} k={k}");
            }
            assert_eq!(tanny_count(n, n - 1).unwrap(), big(1));
        }
        assert!(tanny_count(5, 5).is_err());
    }

    #[test]
    fn whitworth_matches_type2_zero_class() {
        assert_eq!(whitworth_zero_count(2).unwrap(), big(1));
        assert_eq!(whitworth_zero_count(5).unwrap(), big(44));
        assert_eq!(whitworth_zero_count(9).unwrap(), big(133496));
        let t = build_count_table(14, AdjacencyType::Type2).unwrap();
        let d = derangements(14);
        for n in 1..=14 {
            let w = whitworth_zero_count(n).unwrap();
            assert_eq!(w, t.get(n, 0), "n={n}");
            assert_eq!(w, d[n], "type-2 zero class is the derangement number");
        }
    }

    #[test]
    fn type2_first_two_columns_differ_by_one() {
        // a pattern of the published triangle; asserted as data
        let t = build_count_table(14, AdjacencyType::Type2).unwrap();
        for n in 3..=14 {
            let diff: BigInt = t.get(n, 0) - t.get(n, 1);
            assert_eq!(diff.magnitude(), &1u32.into(), "n={n}");
        }
    }

    #[test]
    fn copy_multiplicities_match_worked_examples() {
        let t1 = build_count_table(8, AdjacencyType::Type1).unwrap();
        let c = copies_count(&t1, 5, 3).unwrap();
        assert_eq!(c.c, big(6));
        assert_eq!(c.c * t1.get(3, 0), t1.get(5, 2)); // 6 * 3 = 18

        let t2 = build_count_table(8, AdjacencyType::Type2).unwrap();
        let c = copies_count(&t2, 5, 3).unwrap();
        assert_eq!(c.c, big(10)); // C(4,2) + C(3,2) + C(2,2)
        assert_eq!(c.c * t2.get(3, 0), t2.get(5, 2)); // 10 * 2 = 20

        let t4 = build_count_table(8, AdjacencyType::Type4).unwrap();
        let c = copies_count(&t4, 5, 4).unwrap();
        assert_eq!(c.c, big(6)); // 48 / 8
        assert!(copies_count(&t4, 3, 1).is_err()); // P_1(0) empty under type 4
    }

    #[test]
    fn divisibility_holds_for_all_types_to_n_max() {
        for t in AdjacencyType::ALL {
            let table = build_count_table(12, t).unwrap();
            for n in 2..=12usize {
                for k in 1..=n {
                    if table.get(k, 0).is_zero() {
                        continue;
                    }
                    copies_count(&table, n, k).unwrap();
                }
            }
        }
    }

    #[test]
    fn irreducible_fraction_examples() {
        let t1 = build_count_table(5, AdjacencyType::Type1).unwrap();
        let fr = t1.irreducible_fraction(5).unwrap();
        assert_eq!(fr, BigRational::new(big(53), big(120)));
        assert_eq!(cmp_inv_e(&fr), Ordering::Greater);
        let half = BigRational::new(big(1), big(2));
        let third = BigRational::new(big(1), big(3));
        assert_eq!(cmp_inv_e(&half), Ordering::Greater);
        assert_eq!(cmp_inv_e(&third), Ordering::Less);
        // the type-2 fraction IS the partial sum S_n: sits above 1/e for
        // even n, below for odd n
        let t2 = build_count_table(9, AdjacencyType::Type2).unwrap();
        assert_eq!(
            cmp_inv_e(&t2.irreducible_fraction(8).unwrap()),
            Ordering::Greater
        );
        assert_eq!(
            cmp_inv_e(&t2.irreducible_fraction(9).unwrap()),
            Ordering::Less
        );
    }

    #[test]
    fn vector_alphabet_matches_brute_force_reduction_images() {
        use std::collections::BTreeSet;
        let frozen: [(AdjacencyType, [u64; 7]); 3] = [
            (AdjacencyType::Type1, [1, 2, 5, 16, 69, 378, 2497]),
            (AdjacencyType::Type2, [1, 2, 4, 13, 57, 322, 2176]),
            (AdjacencyType::Type4, [1, 2, 3, 11, 47, 276, 1901]),
        ];
        for (t, expected) in frozen {
            let table = build_count_table(7, t).unwrap();
            for n in 1..=7usize {
                let mut images: BTreeSet<Permutation> = BTreeSet::new();
                for k in 0..=t.max_adjacencies(n) {
                    for p in enumerate_class(n, k, t).unwrap() {
                        images.insert(p.reduce(t));
                    }
                }
                assert_eq!(images.len() as u64, expected[n - 1], "{t} n={n}");
                assert_eq!(
                    table.vector_alphabet_size(n).unwrap(),
                    BigInt::from(expected[n - 1]),
                    "{t} n={n}"
                );
            }
        }
        let t3 = build_count_table(4, AdjacencyType::Type3).unwrap();
        assert_eq!(t3.vector_alphabet_size(3).unwrap(), big(4));
    }
}
