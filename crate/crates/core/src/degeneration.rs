//! Node types of colliding branch points and the degeneration census.
//!
//! When the last two branch points of a tuple collide, the local monodromy
//! around both is the product of the last two entries. That product is the
//! identity (type 1), a double transposition (type 2,2) or a 3-cycle
//! (type 3). Type-1 classes are refined by what is left after removing the
//! doubled transposition: a transitive remainder is the central case, two
//! orbits give a split curve whose smaller sheet count is `j` and whose genus
//! on that side is `i`.
//!
//! All tallies are taken over raw tuples and divided by `k!` at the end; the
//! conjugation action preserves every label used here.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hurwitz::{
    classes_from_raw, cover_genus, Canonicalizer, CensusSource, Enumerator, MonodromyTuple, TupleCensus, TupleVisitor,
};
use crate::perm::{Transposition, UnionFind};

/// Node type at a collision of two adjacent branch points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeType {
    /// Product is the identity.
    TypeOne,
    /// Product is a pair of disjoint transpositions.
    TypeTwoTwo,
    /// Product is a 3-cycle.
    TypeThree,
}

impl fmt::Display for NodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeType::TypeOne => "(1)",
            NodeType::TypeTwoTwo => "(2,2)",
            NodeType::TypeThree => "(3)",
        })
    }
}

pub fn classify_node(t1: Transposition, t2: Transposition) -> NodeType {
    match t1.overlap(t2) {
        2 => NodeType::TypeOne,
        1 => NodeType::TypeThree,
        _ => NodeType::TypeTwoTwo,
    }
}

/// Refinement of a type-1 class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeOneProfile {
    /// The remainder is transitive; the fiber has a genus `g-1` component.
    Central,
    /// The remainder has two orbits. `j` is the smaller orbit size, `i` the
    /// genus of the degree-`j` side and `beta1` its number of branch points.
    /// For `j = k - j` the side with `i ≤ g - i` is chosen.
    Split { j: u32, i: u32, beta1: u32 },
}

/// Profile of a tuple whose last two entries are equal; `g` is the cover genus.
fn profile_of(entries: &[Transposition], k: usize, g: u32) -> std::result::Result<TypeOneProfile, String> {
    let b = entries.len();
    let rest = &entries[..b - 2];
    let mut uf = UnionFind::new(k);
    for t in rest {
        let (x, y) = t.zero_based();
        uf.union(x, y);
    }
    match uf.blocks() {
        1 => Ok(TypeOneProfile::Central),
        2 => {
            let root0 = uf.find(0);
            let size0 = (0..k).filter(|&x| uf.find(x) == root0).count();
            let beta0 = rest.iter().filter(|t| uf.find(t.zero_based().0) == root0).count();
            let side = |size: usize, beta: usize| -> std::result::Result<u32, String> {
                let twice = beta as i64 - 2 * size as i64 + 2;
                if twice < 0 || twice % 2 != 0 {
                    return Err(format!("orbit of size {size} with {beta} branch points has no genus"));
                }
                Ok((twice / 2) as u32)
            };
            let (size1, beta1) = (k - size0, b - 2 - beta0);
            let (i0, i1) = (side(size0, beta0)?, side(size1, beta1)?);
            if i0 + i1 != g {
                return Err(format!("component genera {i0} + {i1} differ from g = {g}"));
            }
            let pick0 = size0 < size1 || (size0 == size1 && i0 <= i1);
            let (j, i, beta) = if pick0 { (size0, i0, beta0) } else { (size1, i1, beta1) };
            Ok(TypeOneProfile::Split {
                j: j as u32,
                i,
                beta1: beta as u32,
            })
        }
        n => Err(format!(
            "remainder has {n} orbits; a transitive parent allows at most 2"
        )),
    }
}

/// Refines a tuple whose last two entries coincide.
pub fn refine_type_one(t: &MonodromyTuple) -> Result<TypeOneProfile> {
    let e = t.entries();
    if e.len() < 2 || classify_node(e[e.len() - 2], e[e.len() - 1]) != NodeType::TypeOne {
        return Err(Error::Domain(format!("{t} does not end in a type-(1) pair")));
    }
    profile_of(e, t.degree(), t.genus()).map_err(|what| Error::invariant_with(what, t))
}

/// Square of the braid half-twist on the last two positions:
/// `(…, x, y) ↦ (…, (xy)x(xy)⁻¹, (xy)y(xy)⁻¹)`.
pub fn full_twist(t: &MonodromyTuple) -> MonodromyTuple {
    let mut entries = t.entries().to_vec();
    twist_in_place(&mut entries);
    MonodromyTuple::from_trusted(t.degree(), entries)
}

fn twist_in_place(entries: &mut [Transposition]) {
    let n = entries.len();
    if n < 2 {
        return;
    }
    let (x, y) = (entries[n - 2], entries[n - 1]);
    // Conjugation by xy sends a symbol s to x(y(s)).
    let h = |s: usize| x.apply(y.apply(s));
    let conj = |t: Transposition| Transposition::new(h(t.a()), h(t.b())).expect("distinct images");
    entries[n - 2] = conj(x);
    entries[n - 1] = conj(y);
}

/// Class counts attached to a census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationCounts {
    #[serde(with = "crate::exact::decimal")]
    pub n_tilde: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub n1: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub n22: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub n3: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub e: BigInt,
    #[serde(with = "crate::exact::decimal")]
    pub n_sing: BigInt,
}

impl DegenerationCounts {
    /// Checks the identities linking the counts.
    pub fn validate(&self) -> Result<()> {
        if &self.n1 + &self.n22 + &self.n3 != self.n_tilde {
            return Err(Error::invariant(format!(
                "N1 + N22 + N3 = {} ≠ N_tilde = {}",
                &self.n1 + &self.n22 + &self.n3,
                self.n_tilde
            )));
        }
        if !self.n3.is_multiple_of(&BigInt::from(3)) {
            return Err(Error::invariant(format!("N3 = {} is not divisible by 3", self.n3)));
        }
        if self.e > self.n1 {
            return Err(Error::invariant(format!("e = {} exceeds N1 = {}", self.e, self.n1)));
        }
        if &self.e + &self.n_sing != self.n1 {
            return Err(Error::invariant(format!(
                "e + N_sing = {} ≠ N1 = {}",
                &self.e + &self.n_sing,
                self.n1
            )));
        }
        if [&self.n_tilde, &self.n1, &self.n22, &self.n3, &self.e, &self.n_sing]
            .iter()
            .any(|x| x.sign() == num_bigint::Sign::Minus)
        {
            return Err(Error::invariant("negative count"));
        }
        Ok(())
    }
}

/// Full census of one `(k, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationCensus {
    pub k: u32,
    pub b: u32,
    pub g: u32,
    /// Raw tuple count `N`.
    pub raw_count: BigInt,
    pub counts: DegenerationCounts,
    /// `(j, i) → M̃_{j,i}`.
    pub m_table: BTreeMap<(u32, u32), BigInt>,
    /// Type-(1₀) classes.
    pub central: BigInt,
}

impl DegenerationCensus {
    /// Assembles a census from class-level tallies, deriving `e` and `N_sing`.
    pub fn from_class_counts(
        k: u32,
        b: u32,
        raw_count: BigInt,
        n_tilde: BigInt,
        by_type: [BigInt; 3],
        m_table: BTreeMap<(u32, u32), BigInt>,
        central: BigInt,
    ) -> Result<Self> {
        let g = cover_genus(k, b)?;
        let [n1, n22, n3] = by_type;
        let e: BigInt = m_table
            .iter()
            .filter(|((_, i), _)| *i == 0 || *i == g)
            .map(|(_, v)| v)
            .sum();
        let counts = DegenerationCounts {
            n_sing: &n1 - &e,
            n_tilde,
            n1,
            n22,
            n3,
            e,
        };
        let census = Self {
            k,
            b,
            g,
            raw_count,
            counts,
            m_table,
            central,
        };
        census.validate()?;
        Ok(census)
    }

    pub fn validate(&self) -> Result<()> {
        self.counts.validate()?;
        let split: BigInt = self.m_table.values().sum();
        if &split + &self.central != self.counts.n1 {
            return Err(Error::invariant(format!(
                "M-table total {split} + central {} ≠ N1 = {}",
                self.central, self.counts.n1
            )));
        }
        for &(j, i) in self.m_table.keys() {
            if j == 0 || j > self.k / 2 || i > self.g {
                return Err(Error::invariant(format!("M-table cell ({j},{i}) out of range")));
            }
            if 2 * j == self.k && 2 * i > self.g {
                return Err(Error::invariant(format!("M-table cell ({j},{i}) not canonical")));
            }
        }
        if self.k >= 3 && classes_from_raw(self.k, &self.raw_count)? != self.counts.n_tilde {
            return Err(Error::invariant("raw count and class count disagree"));
        }
        Ok(())
    }

    pub fn tuple_census(&self) -> TupleCensus {
        TupleCensus {
            k: self.k,
            b: self.b,
            raw_count: self.raw_count.clone(),
            class_count: self.counts.n_tilde.clone(),
            source: CensusSource::Enumeration,
        }
    }
}

/// Raw-level tallies gathered during enumeration.
#[derive(Debug, Clone)]
struct CensusTally {
    k: usize,
    g: u32,
    total: u64,
    by_type: [u64; 3],
    central: u64,
    cells: BTreeMap<(u32, u32), u64>,
    error: Option<Error>,
}

impl CensusTally {
    fn new(k: usize, g: u32) -> Self {
        Self {
            k,
            g,
            total: 0,
            by_type: [0; 3],
            central: 0,
            cells: BTreeMap::new(),
            error: None,
        }
    }
}

impl TupleVisitor for CensusTally {
    fn visit(&mut self, entries: &[Transposition]) {
        self.total += 1;
        let n = entries.len();
        let node = classify_node(entries[n - 2], entries[n - 1]);
        self.by_type[node as usize] += 1;
        if node != NodeType::TypeOne {
            return;
        }
        match profile_of(entries, self.k, self.g) {
            Ok(TypeOneProfile::Central) => self.central += 1,
            Ok(TypeOneProfile::Split { j, i, .. }) => *self.cells.entry((j, i)).or_default() += 1,
            Err(what) => {
                if self.error.is_none() {
                    let witness = MonodromyTuple::from_trusted(self.k, entries.to_vec());
                    self.error = Some(Error::invariant_with(what, witness));
                }
            }
        }
    }

    fn merge(&mut self, other: Self) {
        self.total += other.total;
        for (a, b) in self.by_type.iter_mut().zip(other.by_type) {
            *a += b;
        }
        self.central += other.central;
        for (cell, v) in other.cells {
            *self.cells.entry(cell).or_default() += v;
        }
        // Keep the smallest witness so the reported error is split-independent.
        self.error = match (self.error.take(), other.error) {
            (Some(a), Some(b)) => Some(if a.to_string() <= b.to_string() { a } else { b }),
            (a, b) => a.or(b),
        };
    }
}

/// Enumerates `(k, b)` and assembles the degeneration census.
pub fn census(k: u32, b: u32, workers: usize) -> Result<DegenerationCensus> {
    let g = cover_genus(k, b)?;
    let enumerator = Enumerator::new(k, b)?.workers(workers);
    let tally = enumerator.run(|| CensusTally::new(k as usize, g));
    if let Some(err) = tally.error {
        return Err(err);
    }
    let to_classes = |raw: u64, what: &str| -> Result<BigInt> {
        classes_from_raw(k, &BigInt::from(raw))
            .map_err(|_| Error::invariant(format!("{what} raw tally {raw} is not divisible by {k}!")))
    };
    let n_tilde = to_classes(tally.total, "total")?;
    let by_type = [
        to_classes(tally.by_type[0], "type (1)")?,
        to_classes(tally.by_type[1], "type (2,2)")?,
        to_classes(tally.by_type[2], "type (3)")?,
    ];
    let m_table = tally
        .cells
        .iter()
        .map(|(&cell, &raw)| Ok((cell, to_classes(raw, &format!("M{cell:?}"))?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let central = to_classes(tally.central, "central")?;
    DegenerationCensus::from_class_counts(k, b, BigInt::from(tally.total), n_tilde, by_type, m_table, central)
}

/// Class-level behaviour of [`full_twist`] over one `(k, b)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TwistReport {
    pub classes: u64,
    pub type_three_classes: u64,
    /// Type-(3) classes whose twist orbit has exactly three classes.
    pub type_three_orbit_three: u64,
    pub fixed_classes: u64,
    /// Type-(1) and (2,2) classes moved by the twist (expected 0).
    pub moved_fixed_type: u64,
    /// Orbit sizes other than 3 seen on type-(3) classes, with one witness each.
    pub anomalies: Vec<(u64, String)>,
}

impl TwistReport {
    pub fn holds(&self) -> bool {
        self.moved_fixed_type == 0
            && self.anomalies.is_empty()
            && self.type_three_orbit_three == self.type_three_classes
    }
}

struct TwistTally<'a> {
    canon: &'a Canonicalizer,
    report: TwistReport,
}

impl TupleVisitor for TwistTally<'_> {
    fn visit(&mut self, entries: &[Transposition]) {
        if !self.canon.is_canonical(entries) {
            return;
        }
        let r = &mut self.report;
        r.classes += 1;
        let n = entries.len();
        let mut cur = entries.to_vec();
        twist_in_place(&mut cur);
        if classify_node(entries[n - 2], entries[n - 1]) != NodeType::TypeThree {
            if cur == entries {
                r.fixed_classes += 1;
            } else {
                r.moved_fixed_type += 1;
            }
            return;
        }
        r.type_three_classes += 1;
        let mut size = 1u64;
        while self.canon.canonical(&cur) != entries && size <= 6 {
            twist_in_place(&mut cur);
            size += 1;
        }
        if size == 3 {
            r.type_three_orbit_three += 1;
        } else if !r.anomalies.iter().any(|(s, _)| *s == size) {
            let witness = MonodromyTuple::from_trusted(self.canon.degree(), entries.to_vec());
            r.anomalies.push((size, witness.to_string()));
        }
    }

    fn merge(&mut self, other: Self) {
        let (a, b) = (&mut self.report, other.report);
        a.classes += b.classes;
        a.type_three_classes += b.type_three_classes;
        a.type_three_orbit_three += b.type_three_orbit_three;
        a.fixed_classes += b.fixed_classes;
        a.moved_fixed_type += b.moved_fixed_type;
        for anomaly in b.anomalies {
            if !a.anomalies.iter().any(|(s, _)| *s == anomaly.0) {
                a.anomalies.push(anomaly);
            }
        }
        a.anomalies.sort();
    }
}

/// Walks every conjugacy class of `(k, b)` and records full-twist orbit sizes.
pub fn twist_report(k: u32, b: u32, workers: usize) -> Result<TwistReport> {
    let enumerator = Enumerator::new(k, b)?.workers(workers);
    let canon = Canonicalizer::new(k as usize);
    let tally = enumerator.run(|| TwistTally {
        canon: &canon,
        report: TwistReport::default(),
    });
    Ok(tally.report)
}

/// Flattened M-table row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MTableRow {
    pub j: u32,
    pub i: u32,
    #[serde(with = "crate::exact::decimal")]
    pub count: BigInt,
}

pub fn m_table_rows(table: &BTreeMap<(u32, u32), BigInt>) -> Vec<MTableRow> {
    table
        .iter()
        .map(|(&(j, i), count)| MTableRow {
            j,
            i,
            count: count.clone(),
        })
        .collect()
}
