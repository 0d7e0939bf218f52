//! Character-theoretic counts of transposition tuples.
//!
//! The number of `b`-tuples of transpositions in `S_k` with identity product
//! (transitivity not required) is given by the Frobenius formula
//!
//! ```text
//! D(k, b) = |C|^b / k! · Σ_λ χ_λ(τ)^b · χ_λ(1)^(2-b)
//! ```
//!
//! with `C` the transposition class. Connected counts `N(k, b)` follow by
//! peeling off the block of the orbit partition that contains symbol 1:
//!
//! ```text
//! D(k, b) = Σ_{s=1..k} C(k-1, s-1) Σ_{b'} C(b, b') · N(s, b') · D(k-s, b-b')
//! ```
//!
//! Every evaluation is exact; integrality of the Frobenius sum is asserted.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{as_integer, binomial, factorial, q, Q};
use crate::hurwitz::{CensusSource, TupleCensus};
use crate::perm::CycleType;

/// Default capacity bound on the degree of a character table.
pub const DEFAULT_MAX_DEGREE: usize = 12;

/// Partitions of `n`, in reverse lexicographic order (`(n)` first).
pub fn partitions(n: usize) -> Vec<CycleType> {
    fn go(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<CycleType>) {
        if remaining == 0 {
            out.push(CycleType::new(prefix.clone()));
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            prefix.push(part);
            go(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Order of the centralizer of an element of cycle type `mu`: `Π i^{m_i} m_i!`.
pub fn centralizer_order(mu: &CycleType) -> BigInt {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &p in mu.parts() {
        *counts.entry(p).or_default() += 1;
    }
    counts.into_iter().fold(BigInt::one(), |acc, (part, m)| {
        acc * BigInt::from(part).pow(m as u32) * factorial(m)
    })
}

/// Murnaghan–Nakayama evaluation with beta-sets, memoized on `(λ, μ)`.
struct MurnaghanNakayama {
    memo: HashMap<(Vec<usize>, Vec<usize>), BigInt>,
}

impl MurnaghanNakayama {
    fn new() -> Self {
        Self { memo: HashMap::new() }
    }

    fn value(&mut self, lambda: &[usize], mu: &[usize]) -> BigInt {
        let Some((&r, rest)) = mu.split_first() else {
            return if lambda.is_empty() {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        };
        let key = (lambda.to_vec(), mu.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let len = lambda.len();
        let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
        let mut total = BigInt::zero();
        for (idx, &x) in beta.iter().enumerate() {
            if x < r || beta.contains(&(x - r)) {
                continue;
            }
            // Leg length: beads strictly between the new and old position.
            let leg = beta.iter().filter(|&&y| y > x - r && y < x).count();
            let mut moved = beta.clone();
            moved[idx] = x - r;
            moved.sort_unstable_by(|a, b| b.cmp(a));
            let smaller: Vec<usize> = moved
                .iter()
                .enumerate()
                .map(|(i, &y)| y - (len - 1 - i))
                .filter(|&p| p > 0)
                .collect();
            let v = self.value(&smaller, rest);
            if leg % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

/// The integer character table of `S_k`.
///
/// Rows are irreducibles and columns are conjugacy classes, both indexed by
/// [`partitions`]`(k)` in the same order.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    k: usize,
    partitions: Vec<CycleType>,
    values: Vec<Vec<BigInt>>,
}

impl CharacterTable {
    pub fn new(k: usize) -> Result<Self> {
        Self::with_bound(k, DEFAULT_MAX_DEGREE)
    }

    /// Builds the table and asserts both orthogonality relations.
    pub fn with_bound(k: usize, bound: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("character table needs k ≥ 1".into()));
        }
        if k > bound {
            return Err(Error::Capacity { k, bound });
        }
        let partitions = partitions(k);
        let mut mn = MurnaghanNakayama::new();
        let values = partitions
            .iter()
            .map(|lambda| {
                partitions
                    .iter()
                    .map(|mu| mn.value(lambda.parts(), mu.parts()))
                    .collect()
            })
            .collect();
        let table = Self { k, partitions, values };
        let check = table.orthogonality_defect();
        if !check.is_zero() {
            return Err(Error::invariant(format!(
                "character table of S_{k} fails orthogonality (defect {check})"
            )));
        }
        Ok(table)
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn partitions(&self) -> &[CycleType] {
        &self.partitions
    }

    pub fn index_of(&self, p: &CycleType) -> Option<usize> {
        self.partitions.iter().position(|x| x == p)
    }

    /// `χ_λ(μ)` by row and column index.
    pub fn value(&self, irrep: usize, class: usize) -> &BigInt {
        &self.values[irrep][class]
    }

    pub fn row(&self, irrep: usize) -> &[BigInt] {
        &self.values[irrep]
    }

    /// `χ_λ(1)`, read from the identity column.
    pub fn dimension(&self, irrep: usize) -> &BigInt {
        let id = self.partitions.len() - 1;
        &self.values[irrep][id]
    }

    pub fn class_size(&self, class: usize) -> BigInt {
        factorial(self.k) / centralizer_order(&self.partitions[class])
    }

    /// Column index of the transposition class, for `k ≥ 2`.
    pub fn transposition_class(&self) -> Option<usize> {
        if self.k < 2 {
            return None;
        }
        let mut parts = vec![2];
        parts.extend(std::iter::repeat_n(1, self.k - 2));
        self.index_of(&CycleType::new(parts))
    }

    /// Sum of absolute deviations from both orthogonality relations; zero for
    /// a correct table.
    pub fn orthogonality_defect(&self) -> BigInt {
        let n = self.partitions.len();
        let order = factorial(self.k);
        let sizes: Vec<BigInt> = (0..n).map(|c| self.class_size(c)).collect();
        let mut defect = BigInt::zero();
        for a in 0..n {
            for b in 0..n {
                let row: BigInt = (0..n)
                    .map(|c| &sizes[c] * &self.values[a][c] * &self.values[b][c])
                    .sum();
                let expect = if a == b { order.clone() } else { BigInt::zero() };
                defect += (row - expect).abs();

                let col: BigInt = (0..n).map(|l| &self.values[l][a] * &self.values[l][b]).sum();
                let expect = if a == b {
                    centralizer_order(&self.partitions[a])
                } else {
                    BigInt::zero()
                };
                defect += (col - expect).abs();
            }
        }
        defect
    }
}

/// Count of identity-product transposition tuples, transitive or not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisconnectedCount {
    pub k: usize,
    pub b: usize,
    pub value: BigInt,
}

/// Memoizing oracle for `D(k, b)` and `N(k, b)`.
///
/// The memo tables are owned by the value; share one oracle per worker.
#[derive(Debug, Clone)]
pub struct HurwitzOracle {
    max_degree: usize,
    tables: HashMap<usize, CharacterTable>,
    disconnected: HashMap<(usize, usize), BigInt>,
    connected: HashMap<(usize, usize), BigInt>,
}

impl Default for HurwitzOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl HurwitzOracle {
    pub fn new() -> Self {
        Self::with_max_degree(DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(max_degree: usize) -> Self {
        Self {
            max_degree,
            tables: HashMap::new(),
            disconnected: HashMap::new(),
            connected: HashMap::new(),
        }
    }

    pub fn character_table(&mut self, k: usize) -> Result<&CharacterTable> {
        if !self.tables.contains_key(&k) {
            let table = CharacterTable::with_bound(k, self.max_degree)?;
            self.tables.insert(k, table);
        }
        Ok(&self.tables[&k])
    }

    fn check_args(&self, k: usize, b: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::Domain("degree must be at least 1".into()));
        }
        if b % 2 == 1 {
            return Err(Error::OddBranchCount(b as u32));
        }
        if k > self.max_degree {
            return Err(Error::Capacity {
                k,
                bound: self.max_degree,
            });
        }
        Ok(())
    }

    pub fn disconnected_count(&mut self, k: usize, b: usize) -> Result<DisconnectedCount> {
        self.check_args(k, b)?;
        Ok(DisconnectedCount {
            k,
            b,
            value: self.disconnected(k, b)?,
        })
    }

    /// Connected count `N(k, b)`.
    pub fn connected_count(&mut self, k: usize, b: usize) -> Result<BigInt> {
        self.check_args(k, b)?;
        self.connected(k, b)
    }

    /// A [`TupleCensus`] whose counts come from this oracle.
    pub fn census(&mut self, k: u32, b: u32) -> Result<TupleCensus> {
        crate::hurwitz::cover_genus(k, b)?;
        let n = self.connected_count(k as usize, b as usize)?;
        TupleCensus::from_raw(k, b, n, CensusSource::Oracle)
    }

    /// `D(k, b)` for any `k ≥ 0`, `b ≥ 0` (zero for odd `b`).
    fn disconnected(&mut self, k: usize, b: usize) -> Result<BigInt> {
        if k <= 1 || b % 2 == 1 {
            return Ok(if b == 0 { BigInt::one() } else { BigInt::zero() });
        }
        if let Some(v) = self.disconnected.get(&(k, b)) {
            return Ok(v.clone());
        }
        let table = self.character_table(k)?;
        let tau = table.transposition_class().expect("k ≥ 2");
        let class_size = table.class_size(tau);
        let mut sum = Q::zero();
        for irrep in 0..table.partitions().len() {
            let chi = q(table.value(irrep, tau).clone());
            let dim = q(table.dimension(irrep).clone());
            let term = chi.pow(b as i32) * dim.pow(2 - b as i32);
            sum += term;
        }
        let total = q(class_size.pow(b as u32)) / q(factorial(k)) * sum;
        let value = as_integer(&total)
            .ok_or_else(|| Error::invariant(format!("Frobenius sum for D({k},{b}) is not integral: {total}")))?;
        self.disconnected.insert((k, b), value.clone());
        Ok(value)
    }

    fn connected(&mut self, k: usize, b: usize) -> Result<BigInt> {
        if b % 2 == 1 {
            return Ok(BigInt::zero());
        }
        if k == 1 {
            return Ok(if b == 0 { BigInt::one() } else { BigInt::zero() });
        }
        if let Some(v) = self.connected.get(&(k, b)) {
            return Ok(v.clone());
        }
        let mut value = self.disconnected(k, b)?;
        for s in 1..k {
            let choose_block = binomial(k - 1, s - 1);
            for inner in (0..=b).step_by(2) {
                let n_block = self.connected(s, inner)?;
                if n_block.is_zero() {
                    continue;
                }
                let rest = self.disconnected(k - s, b - inner)?;
                value -= &choose_block * binomial(b, inner) * n_block * rest;
            }
        }
        if value.is_negative() {
            return Err(Error::invariant(format!(
                "connected count N({k},{b}) came out negative: {value}"
            )));
        }
        self.connected.insert((k, b), value.clone());
        Ok(value)
    }
}

/// One-shot [`HurwitzOracle::character_table`] with the default bound.
pub fn character_table(k: usize) -> Result<CharacterTable> {
    CharacterTable::new(k)
}

pub fn disconnected_count(k: usize, b: usize) -> Result<DisconnectedCount> {
    HurwitzOracle::new().disconnected_count(k, b)
}

pub fn connected_count(k: usize, b: usize) -> Result<BigInt> {
    HurwitzOracle::new().connected_count(k, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{all_transpositions, compose, Permutation};

    /// Identity-product tuples counted by brute force.
    fn brute_disconnected(k: usize, b: usize) -> u64 {
        let ts: Vec<Permutation> = all_transpositions(k)
            .unwrap()
            .into_iter()
            .map(|t| t.to_permutation(k).unwrap())
            .collect();
        let mut count = 0;
        for mut code in 0..ts.len().pow(b as u32) {
            let mut acc = Permutation::identity(k);
            for _ in 0..b {
                acc = compose(&acc, &ts[code % ts.len()]).unwrap();
                code /= ts.len();
            }
            if acc.is_identity() {
                count += 1;
            }
        }
        count
    }

    fn dims(table: &CharacterTable) -> Vec<i64> {
        let mut d: Vec<i64> = (0..table.partitions().len())
            .map(|i| i64::try_from(table.dimension(i)).unwrap())
            .collect();
        d.sort_unstable();
        d
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=12).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
        assert_eq!(partitions(3)[0].parts(), &[3]);
    }

    #[test]
    fn small_tables() {
        assert_eq!(dims(&character_table(2).unwrap()), [1, 1]);
        let t3 = character_table(3).unwrap();
        assert_eq!(dims(&t3), [1, 1, 2]);
        let standard = t3.index_of(&CycleType::new(vec![2, 1])).unwrap();
        let tau = t3.transposition_class().unwrap();
        assert_eq!(t3.value(standard, tau), &BigInt::zero());
        // S_4: the 3-dimensional standard character is 1 on transpositions.
        let t4 = character_table(4).unwrap();
        let std4 = t4.index_of(&CycleType::new(vec![3, 1])).unwrap();
        assert_eq!(t4.value(std4, t4.transposition_class().unwrap()), &BigInt::from(1));
        assert_eq!(dims(&t4), [1, 1, 2, 3, 3]);
    }

    #[test]
    fn orthogonality_through_eight() {
        for k in 1..=8 {
            assert!(character_table(k).unwrap().orthogonality_defect().is_zero(), "k={k}");
        }
    }

    #[test]
    fn capacity_bound() {
        assert_eq!(
            CharacterTable::new(13).unwrap_err(),
            Error::Capacity { k: 13, bound: 12 }
        );
        assert!(CharacterTable::with_bound(13, 13).is_ok());
        assert!(matches!(
            HurwitzOracle::with_max_degree(4).connected_count(5, 8),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn frobenius_matches_brute_force() {
        assert_eq!(disconnected_count(3, 4).unwrap().value, BigInt::from(27));
        for (k, b) in [(2, 6), (3, 2), (3, 6), (4, 4), (4, 6)] {
            assert_eq!(
                disconnected_count(k, b).unwrap().value,
                BigInt::from(brute_disconnected(k, b)),
                "D({k},{b})"
            );
        }
    }

    #[test]
    fn trivial_disconnected_counts() {
        for b in (0..=12).step_by(2) {
            assert_eq!(disconnected_count(2, b).unwrap().value, BigInt::one());
        }
        for k in 1..=7 {
            assert_eq!(disconnected_count(k, 0).unwrap().value, BigInt::one());
        }
        assert_eq!(disconnected_count(3, 3).unwrap_err(), Error::OddBranchCount(3));
    }

    #[test]
    fn connected_counts() {
        assert_eq!(connected_count(3, 4).unwrap(), BigInt::from(24));
        for b in (2..=12).step_by(2) {
            assert_eq!(connected_count(2, b).unwrap(), BigInt::one());
        }
        assert_eq!(connected_count(2, 0).unwrap(), BigInt::zero());
        // Genus-zero closed form k^(k-3) (2k-2)!.
        for k in 3..=7usize {
            let expect = BigInt::from(k).pow((k - 3) as u32) * factorial(2 * k - 2);
            assert_eq!(connected_count(k, 2 * k - 2).unwrap(), expect, "k={k}");
        }
    }

    #[test]
    fn disconnected_dominates_connected() {
        let mut oracle = HurwitzOracle::new();
        for k in 1..=6 {
            for b in (0..=10).step_by(2) {
                let d = oracle.disconnected_count(k, b).unwrap().value;
                let n = oracle.connected_count(k, b).unwrap();
                assert!(d >= n, "D({k},{b}) < N");
            }
        }
    }

    #[test]
    fn oracle_census_divides_by_k_factorial() {
        let c = HurwitzOracle::new().census(3, 4).unwrap();
        assert_eq!(c.class_count, BigInt::from(4));
        assert_eq!(c.source, CensusSource::Oracle);
    }
}
