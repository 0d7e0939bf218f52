//! Permutations of the symbol set `{1, …, k}`.
//!
//! Composition is right-to-left throughout the crate: `compose(p, q)` is the
//! map `x ↦ p(q(x))`, so in a product `t1 t2 … tb` the rightmost factor acts
//! first. Symbols are 1-based at every public boundary; storage is 0-based.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest degree a [`Permutation`] can carry (symbols are stored as `u8`).
pub const MAX_DEGREE: usize = u8::MAX as usize;

/// A bijection of `{1, …, k}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&k), "degree {k} out of range");
        Self {
            images: (0..k as u8).collect(),
        }
    }

    /// Builds a permutation from 1-based images: `images[i-1]` is the image of `i`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let k = images.len();
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::Domain(format!("degree {k} out of range 1..={MAX_DEGREE}")));
        }
        let mut seen = vec![false; k];
        let mut stored = Vec::with_capacity(k);
        for &x in images {
            if x == 0 || x > k || seen[x - 1] {
                return Err(Error::Domain(format!("{images:?} is not a bijection of 1..={k}")));
            }
            seen[x - 1] = true;
            stored.push((x - 1) as u8);
        }
        Ok(Self { images: stored })
    }

    /// Builds a permutation from disjoint cycles written with 1-based symbols.
    pub fn from_cycles(k: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=k).collect();
        let mut touched = vec![false; k];
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                if x == 0 || x > k || touched[x - 1] {
                    return Err(Error::Domain(format!("bad cycle {cycle:?} in degree {k}")));
                }
                touched[x - 1] = true;
                images[x - 1] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    /// Parses cycle notation such as `(12)(34)` or `(1 10 3)`.
    ///
    /// Inside a cycle, symbols are separated by spaces or commas; a cycle
    /// without separators is read digit by digit.
    pub fn parse_cycles(k: usize, text: &str) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let body = open[..close].trim();
            let symbols: Vec<usize> = if body.contains([' ', ',']) {
                body.split([' ', ','])
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad symbol {s:?}"))))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Parse(format!("bad symbol {c:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            cycles.push(symbols);
            rest = open[close + 1..].trim_start();
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Self::from_cycles(k, &refs)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based symbol `x`.
    pub fn image(&self, x: usize) -> usize {
        self.images[x - 1] as usize + 1
    }

    /// 1-based images in symbol order.
    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Self { images: inv }
    }

    /// Cycles of length ≥ 2, each starting at its least symbol, ordered by that symbol.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let k = self.degree();
        let mut seen = vec![false; k];
        let mut out = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let k = self.degree();
        let mut seen = vec![false; k];
        let mut parts = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
            }
            parts.push(len);
        }
        CycleType::new(parts)
    }

    /// Returns the transposition this permutation equals, if it is one.
    pub fn as_transposition(&self) -> Option<Transposition> {
        let mut moved = self
            .images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i != x as usize)
            .map(|(i, _)| i);
        let a = moved.next()?;
        let b = moved.next()?;
        if moved.next().is_some() || self.images[a] as usize != b {
            return None;
        }
        Some(Transposition {
            a: a as u8 + 1,
            b: b as u8 + 1,
        })
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{self}]")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("id");
        }
        let sep = if self.degree() < 10 { "" } else { " " };
        for cycle in cycles {
            let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(sep))?;
        }
        Ok(())
    }
}

/// `x ↦ p(q(x))`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    Ok(Permutation {
        images: q.images.iter().map(|&x| p.images[x as usize]).collect(),
    })
}

/// `g ∘ p ∘ g⁻¹`.
pub fn conjugate(p: &Permutation, g: &Permutation) -> Result<Permutation> {
    if p.degree() != g.degree() {
        return Err(Error::DegreeMismatch {
            left: p.degree(),
            right: g.degree(),
        });
    }
    // g p g⁻¹ sends g(x) to g(p(x)).
    let mut images = vec![0u8; p.degree()];
    for (x, &px) in p.images.iter().enumerate() {
        images[g.images[x] as usize] = g.images[px as usize];
    }
    Ok(Permutation { images })
}

/// A transposition `(a b)` with `1 ≤ a < b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transposition {
    a: u8,
    b: u8,
}

impl Transposition {
    /// Accepts the two symbols in either order.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        let (a, b) = match a.cmp(&b) {
            Ordering::Less => (a, b),
            Ordering::Greater => (b, a),
            Ordering::Equal => return Err(Error::Domain(format!("transposition ({a} {b}) needs distinct symbols"))),
        };
        if a == 0 || b > MAX_DEGREE {
            return Err(Error::Domain(format!("symbols ({a} {b}) out of range")));
        }
        Ok(Self { a: a as u8, b: b as u8 })
    }

    pub(crate) const fn from_raw(a: u8, b: u8) -> Self {
        Self { a, b }
    }

    pub fn a(self) -> usize {
        self.a as usize
    }

    pub fn b(self) -> usize {
        self.b as usize
    }

    /// 0-based support, for the hot loops.
    pub(crate) fn zero_based(self) -> (usize, usize) {
        (self.a as usize - 1, self.b as usize - 1)
    }

    pub fn moves(self, x: usize) -> bool {
        x == self.a() || x == self.b()
    }

    pub fn apply(self, x: usize) -> usize {
        if x == self.a() {
            self.b()
        } else if x == self.b() {
            self.a()
        } else {
            x
        }
    }

    pub fn to_permutation(self, k: usize) -> Result<Permutation> {
        if self.b() > k {
            return Err(Error::DegreeMismatch {
                left: self.b(),
                right: k,
            });
        }
        let mut p = Permutation::identity(k);
        p.images.swap(self.a() - 1, self.b() - 1);
        Ok(p)
    }

    /// `g (a b) g⁻¹ = (g(a) g(b))`.
    pub fn conjugate_by(self, g: &Permutation) -> Self {
        let x = g.images[self.a as usize - 1] + 1;
        let y = g.images[self.b as usize - 1] + 1;
        if x < y {
            Self { a: x, b: y }
        } else {
            Self { a: y, b: x }
        }
    }

    /// Number of shared symbols with `other` (0, 1 or 2).
    pub fn overlap(self, other: Self) -> usize {
        usize::from(other.moves(self.a())) + usize::from(other.moves(self.b()))
    }
}

impl fmt::Debug for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b < 10 {
            write!(f, "({}{})", self.a, self.b)
        } else {
            write!(f, "({} {})", self.a, self.b)
        }
    }
}

/// A weakly decreasing partition, used both for cycle types and for the
/// irreducible characters of the symmetric group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    /// Sorts `parts` and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of fixed points.
    pub fn ones(&self) -> usize {
        self.parts.iter().filter(|&&p| p == 1).count()
    }

    /// `true` when every part other than 1s equals `nontrivial` exactly.
    pub fn is(&self, nontrivial: &[usize]) -> bool {
        let big: Vec<usize> = self.parts.iter().copied().filter(|&p| p > 1).collect();
        big == nontrivial
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", body.join(","))
    }
}

/// All `k(k-1)/2` transpositions of `S_k` in lexicographic order.
pub fn all_transpositions(k: usize) -> Result<Vec<Transposition>> {
    if k < 2 {
        return Err(Error::Domain(format!("S_{k} has no transpositions")));
    }
    if k > MAX_DEGREE {
        return Err(Error::Domain(format!("degree {k} out of range")));
    }
    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    for a in 1..k {
        for b in a + 1..=k {
            out.push(Transposition::from_raw(a as u8, b as u8));
        }
    }
    Ok(out)
}

/// All `k!` permutations, lexicographic in image order (identity first).
pub fn all_permutations(k: usize) -> Vec<Permutation> {
    let mut current: Vec<u8> = (0..k as u8).collect();
    let mut out = vec![Permutation {
        images: current.clone(),
    }];
    // Standard next-permutation step.
    while let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) {
        let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(Permutation {
            images: current.clone(),
        });
    }
    out
}

/// Disjoint-set forest over `0..n`; small and allocation-light.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    blocks: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            blocks: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.parent[rx.max(ry)] = rx.min(ry);
            self.blocks -= 1;
        }
    }

    pub(crate) fn blocks(&self) -> usize {
        self.blocks
    }

    /// Blocks as sorted 1-based symbol lists, ordered by least element.
    pub(crate) fn partition(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            by_root[r].push(x + 1);
        }
        by_root.into_iter().filter(|b| !b.is_empty()).collect()
    }
}

/// Orbit partition of `{1, …, k}` under the group generated by `gens`.
///
/// Blocks are sorted, and ordered by their least symbol. The group itself is
/// never built.
pub fn orbits(gens: &[Permutation], k: usize) -> Result<Vec<Vec<usize>>> {
    let mut uf = UnionFind::new(k);
    for g in gens {
        if g.degree() != k {
            return Err(Error::DegreeMismatch {
                left: g.degree(),
                right: k,
            });
        }
        for (x, &y) in g.images.iter().enumerate() {
            uf.union(x, y as usize);
        }
    }
    Ok(uf.partition())
}

/// Orbit partition under a set of transpositions, without building permutations.
pub fn transposition_orbits(gens: &[Transposition], k: usize) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(k);
    for t in gens {
        let (a, b) = t.zero_based();
        uf.union(a, b);
    }
    uf.partition()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(k, s).unwrap()
    }

    #[test]
    fn compose_examples() {
        let id = Permutation::identity(4);
        let q = p(4, "(1342)");
        assert_eq!(compose(&id, &q).unwrap(), q);
        assert!(compose(&p(3, "(12)"), &p(3, "(12)")).unwrap().is_identity());
        let r = compose(&p(5, "(12)"), &p(5, "(23)")).unwrap();
        assert_eq!(r.cycle_type().parts(), &[3, 1, 1]);
        // Right-to-left: apply (23) first, so 2 -> 3 -> 3, 3 -> 2 -> 1.
        assert_eq!(r.image(2), 3);
        assert_eq!(r.image(3), 1);
    }

    #[test]
    fn compose_degree_mismatch() {
        let err = compose(&Permutation::identity(3), &Permutation::identity(4)).unwrap_err();
        assert_eq!(err, Error::DegreeMismatch { left: 3, right: 4 });
        assert!(conjugate(&Permutation::identity(2), &Permutation::identity(3)).is_err());
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(Permutation::identity(4).cycle_type().parts(), &[1, 1, 1, 1]);
        assert_eq!(p(4, "(12)(34)").cycle_type().parts(), &[2, 2]);
        assert_eq!(p(5, "(123)").cycle_type().parts(), &[3, 1, 1]);
        assert!(p(5, "(123)").cycle_type().is(&[3]));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbits(&[p(3, "(12)")], 3).unwrap(), vec![vec![1, 2], vec![3]]);
        assert_eq!(orbits(&[p(3, "(12)"), p(3, "(23)")], 3).unwrap(), vec![vec![1, 2, 3]]);
        assert_eq!(orbits(&[], 2).unwrap(), vec![vec![1], vec![2]]);
        assert!(orbits(&[p(3, "(12)")], 4).is_err());
    }

    #[test]
    fn conjugate_examples() {
        let q = p(4, "(142)");
        assert_eq!(conjugate(&q, &Permutation::identity(4)).unwrap(), q);
        assert_eq!(conjugate(&p(3, "(12)"), &p(3, "(13)")).unwrap(), p(3, "(23)"));
        let t = Transposition::new(1, 2).unwrap();
        assert_eq!(t.conjugate_by(&p(3, "(13)")), Transposition::new(2, 3).unwrap());
    }

    #[test]
    fn transposition_lists() {
        assert_eq!(all_transpositions(2).unwrap().len(), 1);
        let t3: Vec<String> = all_transpositions(3).unwrap().iter().map(|t| t.to_string()).collect();
        assert_eq!(t3, ["(12)", "(13)", "(23)"]);
        assert_eq!(all_transpositions(5).unwrap().len(), 10);
        assert!(all_transpositions(1).is_err());
        assert!(Transposition::new(2, 2).is_err());
        assert_eq!(Transposition::new(3, 1).unwrap(), Transposition::new(1, 3).unwrap());
    }

    #[test]
    fn permutation_listing() {
        let all = all_permutations(4);
        assert_eq!(all.len(), 24);
        assert!(all[0].is_identity());
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all_permutations(1).len(), 1);
    }

    #[test]
    fn as_transposition_detects_only_transpositions() {
        assert_eq!(p(4, "(24)").as_transposition(), Transposition::new(2, 4).ok());
        assert_eq!(p(4, "(12)(34)").as_transposition(), None);
        assert_eq!(p(4, "(123)").as_transposition(), None);
        assert_eq!(Permutation::identity(4).as_transposition(), None);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(&[1, 1, 3]).is_err());
        assert!(Permutation::from_images(&[1, 4, 2]).is_err());
        assert!(Permutation::parse_cycles(3, "(12").is_err());
        assert_eq!(p(12, "(1 10 3)").image(10), 3);
    }

    #[test]
    fn display_round_trips() {
        let q = p(6, "(153)(26)");
        assert_eq!(q.to_string(), "(153)(26)");
        assert_eq!(Permutation::parse_cycles(6, &q.to_string()).unwrap(), q);
        assert_eq!(Permutation::identity(3).to_string(), "id");
    }
}
