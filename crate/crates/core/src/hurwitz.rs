//! Monodromy tuples of simply branched covers and their enumeration.
//!
//! A connected `k`-sheeted cover of the line simply branched over `b` fixed
//! points is encoded by an ordered `b`-tuple of transpositions in `S_k` whose
//! product is the identity and which generate a transitive subgroup. `N(k, b)`
//! counts such tuples, `Ñ(k, b)` counts them up to simultaneous conjugation.
//!
//! The search fixes the first `b - 1` entries by depth-first search and
//! accepts a leaf only when the inverse of the running product is itself a
//! transposition, which then becomes the forced last entry. Two prunes keep
//! the tree small: the remaining entries must be able to merge the current
//! orbits into one, and must be able to cancel the running product.
//! Work is split across threads by fixing a prefix of the tuple; every prefix
//! is an independent subtree, so totals do not depend on the split.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::factorial;
use crate::perm::{all_permutations, all_transpositions, compose, Permutation, Transposition, UnionFind};

/// Largest degree the enumerator handles; the running product lives on the stack.
pub const MAX_ENUM_DEGREE: usize = 16;

/// Genus of a connected `k`-sheeted cover with `b` simple branch points,
/// after checking parity and nonnegativity.
pub fn cover_genus(k: u32, b: u32) -> Result<u32> {
    if k < 2 {
        return Err(Error::Domain(format!("degree k={k} must be at least 2")));
    }
    if b % 2 == 1 {
        return Err(Error::OddBranchCount(b));
    }
    let min = 2 * k - 2;
    if b < min {
        return Err(Error::NegativeGenus { k, b, min });
    }
    Ok((b - min) / 2)
}

/// An ordered tuple of transpositions with identity product and transitive span.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TupleRepr", into = "TupleRepr")]
pub struct MonodromyTuple {
    degree: usize,
    entries: Vec<Transposition>,
}

impl MonodromyTuple {
    pub fn new(degree: usize, entries: Vec<Transposition>) -> Result<Self> {
        if let Some(t) = entries.iter().find(|t| t.b() > degree) {
            return Err(Error::DegreeMismatch {
                left: t.b(),
                right: degree,
            });
        }
        if entries.len() % 2 == 1 {
            return Err(Error::OddBranchCount(entries.len() as u32));
        }
        let tuple = Self { degree, entries };
        if !tuple.product().is_identity() {
            return Err(Error::invariant_with("product of entries is not the identity", &tuple));
        }
        if !tuple.is_transitive() {
            return Err(Error::invariant_with("entries do not act transitively", &tuple));
        }
        Ok(tuple)
    }

    /// Parses `((12),(12),(13),(13))`-style text.
    pub fn parse(degree: usize, text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected outer parentheses in {text:?}")))?;
        let mut entries = Vec::new();
        for piece in inner.split("),") {
            let piece = piece.trim();
            let piece = if piece.ends_with(')') {
                piece.to_string()
            } else {
                format!("{piece})")
            };
            let p = Permutation::parse_cycles(degree, &piece)?;
            let t = p
                .as_transposition()
                .ok_or_else(|| Error::Parse(format!("{piece} is not a transposition")))?;
            entries.push(t);
        }
        Self::new(degree, entries)
    }

    pub(crate) fn from_trusted(degree: usize, entries: Vec<Transposition>) -> Self {
        debug_assert!(Self::new(degree, entries.clone()).is_ok());
        Self { degree, entries }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Transposition] {
        &self.entries
    }

    /// Genus of the cover, from Riemann–Hurwitz.
    pub fn genus(&self) -> u32 {
        ((self.entries.len() + 2 - 2 * self.degree) / 2) as u32
    }

    /// `t1 ∘ t2 ∘ … ∘ tb`.
    pub fn product(&self) -> Permutation {
        let mut acc = Permutation::identity(self.degree);
        for t in &self.entries {
            acc = compose(&acc, &t.to_permutation(self.degree).expect("entry within degree")).expect("equal degrees");
        }
        acc
    }

    pub fn is_transitive(&self) -> bool {
        let mut uf = UnionFind::new(self.degree);
        for t in &self.entries {
            let (a, b) = t.zero_based();
            uf.union(a, b);
        }
        uf.blocks() == 1
    }

    /// Simultaneous conjugation `t_i ↦ g t_i g⁻¹`.
    pub fn conjugate_by(&self, g: &Permutation) -> Result<Self> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: g.degree(),
                right: self.degree,
            });
        }
        Ok(Self {
            degree: self.degree,
            entries: self.entries.iter().map(|t| t.conjugate_by(g)).collect(),
        })
    }
}

impl fmt::Display for MonodromyTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, t) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for MonodromyTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonodromyTuple[S_{}; {self}]", self.degree)
    }
}

#[derive(Serialize, Deserialize)]
struct TupleRepr {
    degree: usize,
    entries: String,
}

impl From<MonodromyTuple> for TupleRepr {
    fn from(t: MonodromyTuple) -> Self {
        Self {
            degree: t.degree,
            entries: t.to_string(),
        }
    }
}

impl TryFrom<TupleRepr> for MonodromyTuple {
    type Error = Error;
    fn try_from(r: TupleRepr) -> Result<Self> {
        MonodromyTuple::parse(r.degree, &r.entries)
    }
}

/// Receives every tuple found by an [`Enumerator`].
///
/// Each worker owns one visitor; partial visitors are combined with
/// [`merge`](TupleVisitor::merge), which must be commutative for results to
/// be independent of the work split.
pub trait TupleVisitor: Send + Sized {
    fn visit(&mut self, entries: &[Transposition]);
    fn merge(&mut self, other: Self);
}

/// Counts tuples.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Counter(pub u64);

impl TupleVisitor for Counter {
    fn visit(&mut self, _: &[Transposition]) {
        self.0 += 1;
    }
    fn merge(&mut self, other: Self) {
        self.0 += other.0;
    }
}

/// Collects tuples; merged output is sorted so it does not depend on the split.
#[derive(Debug, Default, Clone)]
pub struct Collector {
    pub degree: usize,
    pub tuples: Vec<MonodromyTuple>,
}

impl TupleVisitor for Collector {
    fn visit(&mut self, entries: &[Transposition]) {
        self.tuples
            .push(MonodromyTuple::from_trusted(self.degree, entries.to_vec()));
    }
    fn merge(&mut self, mut other: Self) {
        self.tuples.append(&mut other.tuples);
        self.tuples.sort_unstable();
    }
}

/// Depth-first enumerator of monodromy tuples for a fixed `(k, b)`.
#[derive(Debug, Clone)]
pub struct Enumerator {
    k: usize,
    b: usize,
    transpositions: Vec<Transposition>,
    workers: usize,
    prefix_len: usize,
}

impl Enumerator {
    pub fn new(k: u32, b: u32) -> Result<Self> {
        cover_genus(k, b)?;
        if k as usize > MAX_ENUM_DEGREE {
            return Err(Error::Capacity {
                k: k as usize,
                bound: MAX_ENUM_DEGREE,
            });
        }
        Ok(Self {
            k: k as usize,
            b: b as usize,
            transpositions: all_transpositions(k as usize)?,
            workers: 1,
            prefix_len: 2,
        })
    }

    /// Number of worker threads (at least 1).
    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    /// Length of the fixed prefix that defines one unit of work.
    pub fn prefix_len(mut self, len: usize) -> Self {
        self.prefix_len = len;
        self
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn branch_points(&self) -> usize {
        self.b
    }

    /// Runs the search, giving every accepted tuple to a visitor built by `make`.
    pub fn run<V, F>(&self, make: F) -> V
    where
        V: TupleVisitor,
        F: Fn() -> V + Sync + Send,
    {
        let prefixes = self.prefixes();
        let work = |prefixes: &[Vec<Transposition>]| -> V {
            prefixes
                .par_iter()
                .fold(&make, |mut visitor, prefix| {
                    self.search_from(prefix, &mut |t| visitor.visit(t));
                    visitor
                })
                .reduce(&make, |mut a, b| {
                    a.merge(b);
                    a
                })
        };
        if self.workers == 1 {
            let mut visitor = make();
            for prefix in &prefixes {
                self.search_from(prefix, &mut |t| visitor.visit(t));
            }
            return visitor;
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.workers).build() {
            Ok(pool) => pool.install(|| work(&prefixes)),
            Err(_) => work(&prefixes),
        }
    }

    /// Raw count `N(k, b)`.
    pub fn count(&self) -> u64 {
        self.run(Counter::default).0
    }

    /// Every tuple, sorted lexicographically.
    pub fn collect(&self) -> Vec<MonodromyTuple> {
        let degree = self.k;
        let mut c = self.run(|| Collector {
            degree,
            tuples: Vec::new(),
        });
        c.tuples.sort_unstable();
        c.tuples
    }

    /// Sequential traversal with a closure.
    pub fn for_each(&self, mut f: impl FnMut(&[Transposition])) {
        for prefix in self.prefixes() {
            self.search_from(&prefix, &mut f);
        }
    }

    fn prefixes(&self) -> Vec<Vec<Transposition>> {
        let len = self.prefix_len.min(self.b - 1);
        let mut out: Vec<Vec<Transposition>> = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|p| {
                    self.transpositions.iter().map(move |&t| {
                        let mut q = p.clone();
                        q.push(t);
                        q
                    })
                })
                .collect();
        }
        out
    }

    fn search_from(&self, prefix: &[Transposition], f: &mut dyn FnMut(&[Transposition])) {
        let mut state = SearchState::new(self.k, self.b);
        for &t in prefix {
            state.push(t);
            if !state.feasible() {
                return;
            }
        }
        self.descend(&mut state, f);
    }

    fn descend(&self, state: &mut SearchState, f: &mut dyn FnMut(&[Transposition])) {
        if state.tuple.len() == self.b - 1 {
            if let Some(last) = state.product_as_transposition() {
                state.push(last);
                if state.blocks() == 1 {
                    f(&state.tuple);
                }
                state.pop();
            }
            return;
        }
        for &t in &self.transpositions {
            state.push(t);
            if state.feasible() {
                self.descend(state, f);
            }
            state.pop();
        }
    }
}

/// Running product and orbit labels for one DFS path.
struct SearchState {
    k: usize,
    b: usize,
    product: [u8; MAX_ENUM_DEGREE],
    /// Orbit label per symbol, one frame per depth.
    labels: Vec<[u8; MAX_ENUM_DEGREE]>,
    blocks: Vec<usize>,
    tuple: Vec<Transposition>,
}

impl SearchState {
    fn new(k: usize, b: usize) -> Self {
        let mut id = [0u8; MAX_ENUM_DEGREE];
        for (i, x) in id.iter_mut().enumerate() {
            *x = i as u8;
        }
        let mut labels = Vec::with_capacity(b + 1);
        labels.push(id);
        let mut blocks = Vec::with_capacity(b + 1);
        blocks.push(k);
        Self {
            k,
            b,
            product: id,
            labels,
            blocks,
            tuple: Vec::with_capacity(b),
        }
    }

    fn blocks(&self) -> usize {
        *self.blocks.last().unwrap()
    }

    fn push(&mut self, t: Transposition) {
        let (x, y) = t.zero_based();
        // P ∘ (x y): swap the images of x and y.
        self.product.swap(x, y);
        let mut labels = *self.labels.last().unwrap();
        let mut blocks = self.blocks();
        let (lx, ly) = (labels[x], labels[y]);
        if lx != ly {
            for l in labels[..self.k].iter_mut() {
                if *l == ly {
                    *l = lx;
                }
            }
            blocks -= 1;
        }
        self.labels.push(labels);
        self.blocks.push(blocks);
        self.tuple.push(t);
    }

    fn pop(&mut self) {
        let t = self.tuple.pop().unwrap();
        let (x, y) = t.zero_based();
        self.product.swap(x, y);
        self.labels.pop();
        self.blocks.pop();
    }

    /// Can the remaining entries still close the product and connect the orbits?
    fn feasible(&self) -> bool {
        let remaining = self.b - self.tuple.len();
        if self.blocks() - 1 > remaining {
            return false;
        }
        self.k - self.product_cycles() <= remaining
    }

    fn product_cycles(&self) -> usize {
        let mut seen = [false; MAX_ENUM_DEGREE];
        let mut cycles = 0;
        for start in 0..self.k {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.product[x] as usize;
            }
        }
        cycles
    }

    fn product_as_transposition(&self) -> Option<Transposition> {
        let mut moved = (0..self.k).filter(|&i| self.product[i] as usize != i);
        let a = moved.next()?;
        let b = moved.next()?;
        if moved.next().is_some() {
            return None;
        }
        Some(Transposition::from_raw(a as u8 + 1, b as u8 + 1))
    }
}

/// Where a [`TupleCensus`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusSource {
    Enumeration,
    Oracle,
}

/// Raw and class counts for one `(k, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleCensus {
    pub k: u32,
    pub b: u32,
    pub raw_count: BigInt,
    pub class_count: BigInt,
    pub source: CensusSource,
}

impl TupleCensus {
    pub fn from_raw(k: u32, b: u32, raw_count: BigInt, source: CensusSource) -> Result<Self> {
        let class_count = classes_from_raw(k, &raw_count)?;
        Ok(Self {
            k,
            b,
            raw_count,
            class_count,
            source,
        })
    }
}

/// `Ñ = N / k!` for `k ≥ 3` (the conjugation action is free), `Ñ = N` for `k = 2`.
pub fn classes_from_raw(k: u32, raw: &BigInt) -> Result<BigInt> {
    if k <= 2 {
        return Ok(raw.clone());
    }
    let (q, r) = raw.div_rem(&factorial(k as usize));
    if !r.is_zero() {
        return Err(Error::invariant(format!(
            "raw count {raw} is not divisible by {k}!; enumeration bug or non-free action"
        )));
    }
    Ok(q)
}

/// Enumerates and returns `N(k, b)` and `Ñ(k, b)`.
pub fn class_count(k: u32, b: u32, workers: usize) -> Result<TupleCensus> {
    let n = Enumerator::new(k, b)?.workers(workers).count();
    TupleCensus::from_raw(k, b, BigInt::from(n), CensusSource::Enumeration)
}

/// Simultaneous-conjugation orbits, computed against a fixed list of conjugators.
#[derive(Debug, Clone)]
pub struct Canonicalizer {
    degree: usize,
    conjugators: Vec<Permutation>,
}

impl Canonicalizer {
    pub fn new(degree: usize) -> Self {
        Self {
            degree,
            conjugators: all_permutations(degree),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Lexicographically least conjugate of `entries`.
    pub fn canonical(&self, entries: &[Transposition]) -> Vec<Transposition> {
        let mut best = entries.to_vec();
        let mut scratch = Vec::with_capacity(entries.len());
        for g in &self.conjugators[1..] {
            scratch.clear();
            scratch.extend(entries.iter().map(|t| t.conjugate_by(g)));
            if scratch < best {
                std::mem::swap(&mut scratch, &mut best);
            }
        }
        best
    }

    /// `true` iff `entries` is the least element of its orbit. Exits at the
    /// first differing entry for each conjugator.
    pub fn is_canonical(&self, entries: &[Transposition]) -> bool {
        for g in &self.conjugators[1..] {
            for &t in entries {
                let c = t.conjugate_by(g);
                if c < t {
                    return false;
                }
                if c > t {
                    break;
                }
            }
        }
        true
    }

    /// Number of conjugators fixing every entry.
    pub fn stabilizer_order(&self, entries: &[Transposition]) -> usize {
        self.conjugators
            .iter()
            .filter(|g| entries.iter().all(|t| t.conjugate_by(g) == *t))
            .count()
    }
}

/// Lexicographically minimal tuple in the simultaneous-conjugation orbit of `t`.
pub fn canonical_form(t: &MonodromyTuple) -> MonodromyTuple {
    let c = Canonicalizer::new(t.degree());
    MonodromyTuple::from_trusted(t.degree(), c.canonical(t.entries()))
}

/// Outcome of [`verify_free_action`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FreeActionReport {
    pub checked: usize,
    /// Tuples fixed by some non-identity conjugator.
    pub violations: usize,
    /// Largest stabilizer order seen.
    pub max_stabilizer: usize,
}

/// Checks that no non-identity `g ∈ S_k` fixes any sampled tuple.
///
/// For `k = 2` every tuple is fixed by the whole of `S_2`, so every sampled
/// tuple is reported as a violation with stabilizer order 2.
pub fn verify_free_action(sample: &[MonodromyTuple]) -> FreeActionReport {
    let mut report = FreeActionReport::default();
    let mut canon: Option<Canonicalizer> = None;
    for t in sample {
        let c = match &canon {
            Some(c) if c.degree() == t.degree() => c,
            _ => canon.insert(Canonicalizer::new(t.degree())),
        };
        let order = c.stabilizer_order(t.entries());
        report.checked += 1;
        report.max_stabilizer = report.max_stabilizer.max(order);
        if order > 1 {
            report.violations += 1;
        }
    }
    report
}
