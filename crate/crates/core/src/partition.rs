//! Set partitions of `{1..k}` and the r-equal partition lattice.
//!
//! A partition is stored as its restricted growth string (RGS): entry `e`
//! is the index of the block containing element `e + 1`, with blocks
//! numbered in order of their least element. The RGS is canonical, so
//! structural equality is partition equality.
//!
//! Partitions are totally ordered finer-first (more blocks first), then by
//! RGS. That order is a linear extension of refinement, which the order
//! complex builder relies on.

use std::cmp::{Ordering, Reverse};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Hard ceiling imposed by the `u8` block labels.
const MAX_GROUND: usize = 255;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    rgs: Box<[u8]>,
    blocks: u8,
}

impl Partition {
    /// Builds a partition from a restricted growth string.
    pub fn from_rgs(rgs: &[u8]) -> Result<Self> {
        if rgs.is_empty() {
            return Err(Error::usage("a partition needs a nonempty ground set"));
        }
        if rgs.len() > MAX_GROUND {
            return Err(Error::usage(format!("ground set larger than {MAX_GROUND}")));
        }
        let mut next = 0u8;
        for &label in rgs {
            match label.cmp(&next) {
                Ordering::Less => {}
                Ordering::Equal => next += 1,
                Ordering::Greater => {
                    return Err(Error::usage(format!(
                        "not a restricted growth string: {rgs:?}"
                    )))
                }
            }
        }
        Ok(Partition {
            rgs: rgs.into(),
            blocks: next,
        })
    }

    /// Builds a partition of `{1..k}` from 1-based blocks in any order.
    pub fn from_blocks(k: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if k == 0 || k > MAX_GROUND {
            return Err(Error::usage(format!("ground set size {k} out of range")));
        }
        let mut owner = vec![usize::MAX; k];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::usage("empty block"));
            }
            for &e in block {
                if e == 0 || e > k {
                    return Err(Error::usage(format!("element {e} outside 1..{k}")));
                }
                if owner[e - 1] != usize::MAX {
                    return Err(Error::usage(format!("element {e} appears twice")));
                }
                owner[e - 1] = b;
            }
        }
        if let Some(missing) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::usage(format!("element {} is not covered", missing + 1)));
        }
        let mut relabel = vec![u8::MAX; blocks.len()];
        let mut next = 0u8;
        let rgs: Vec<u8> = owner
            .iter()
            .map(|&b| {
                if relabel[b] == u8::MAX {
                    relabel[b] = next;
                    next += 1;
                }
                relabel[b]
            })
            .collect();
        Ok(Partition {
            rgs: rgs.into(),
            blocks: next,
        })
    }

    /// The all-singletons partition `0̂`.
    pub fn discrete(k: usize) -> Self {
        assert!((1..=MAX_GROUND).contains(&k));
        Partition {
            rgs: (0..k as u8).collect(),
            blocks: k as u8,
        }
    }

    /// The one-block partition `1̂`.
    pub fn single_block(k: usize) -> Self {
        assert!((1..=MAX_GROUND).contains(&k));
        Partition {
            rgs: vec![0; k].into(),
            blocks: 1,
        }
    }

    pub fn ground_size(&self) -> usize {
        self.rgs.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks as usize
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    /// Blocks as sorted 1-based element lists, ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (e, &b) in self.rgs.iter().enumerate() {
            out[b as usize].push(e + 1);
        }
        out
    }

    /// Block sizes in block order (by least element).
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.block_count()];
        for &b in self.rgs.iter() {
            sizes[b as usize] += 1;
        }
        sizes
    }

    /// Every block is a singleton or has at least `r` elements.
    pub fn is_r_equal(&self, r: usize) -> bool {
        self.block_sizes().iter().all(|&s| s == 1 || s >= r)
    }

    pub fn has_singleton(&self) -> bool {
        self.block_sizes().contains(&1)
    }

    pub fn is_discrete(&self) -> bool {
        self.block_count() == self.ground_size()
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> Result<bool> {
        if self.ground_size() != other.ground_size() {
            return Err(Error::usage(format!(
                "ground sizes differ: {} vs {}",
                self.ground_size(),
                other.ground_size()
            )));
        }
        Ok(self.refines_unchecked(other))
    }

    pub(crate) fn refines_unchecked(&self, other: &Partition) -> bool {
        if self.blocks < other.blocks {
            return false;
        }
        let mut image = [u8::MAX; MAX_GROUND];
        for (&a, &b) in self.rgs.iter().zip(other.rgs.iter()) {
            let slot = &mut image[a as usize];
            if *slot == u8::MAX {
                *slot = b;
            } else if *slot != b {
                return false;
            }
        }
        true
    }

    /// Codimension `n(k - c)` of the diagonal subspace in `(R^n)^k`.
    pub fn codimension(&self, n: u64) -> u64 {
        n * (self.ground_size() - self.block_count()) as u64
    }

    /// Sizes of all blocks, descending. These are the factors of `[0̂, x]`.
    pub fn interval_block_sizes(&self) -> Vec<usize> {
        let mut sizes = self.block_sizes();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// Sizes of the non-singleton blocks, descending. Singleton blocks are
    /// one-point factors of `[0̂, x]` and do not change the interval.
    pub fn nonsingleton_profile(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.block_sizes().into_iter().filter(|&s| s > 1).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// Re-reads a partition of `{1..|ground|}` as a partition of `{1..k}`:
    /// element `i` goes to `ground[i-1]` and everything outside `ground`
    /// becomes a singleton.
    pub fn embed(&self, ground: &[usize], k: usize) -> Result<Partition> {
        if ground.len() != self.ground_size() {
            return Err(Error::usage("embedding ground set has the wrong size"));
        }
        let mut blocks: Vec<Vec<usize>> = self
            .blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|e| ground[e - 1]).collect())
            .collect();
        let mut used = vec![false; k + 1];
        for &g in ground {
            if g == 0 || g > k || used[g] {
                return Err(Error::usage("embedding ground set is not a subset of 1..k"));
            }
            used[g] = true;
        }
        for e in 1..=k {
            if !used[e] {
                blocks.push(vec![e]);
            }
        }
        Partition::from_blocks(k, &blocks)
    }

    /// All non-singleton blocks are contained in `subset` (1-based elements).
    pub fn nonsingleton_blocks_within(&self, subset: &[usize]) -> bool {
        let mut inside = vec![false; self.ground_size() + 1];
        for &e in subset {
            if e >= 1 && e <= self.ground_size() {
                inside[e] = true;
            }
        }
        let sizes = self.block_sizes();
        self.rgs
            .iter()
            .enumerate()
            .all(|(e, &b)| sizes[b as usize] == 1 || inside[e + 1])
    }

    /// Text form, e.g. `(1,2,3)(4)`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ground_size(), Reverse(self.blocks), &self.rgs).cmp(&(
            other.ground_size(),
            Reverse(other.blocks),
            &other.rgs,
        ))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in self.blocks() {
            f.write_str("(")?;
            for (i, e) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{self}")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |detail: String| Error::Parse {
            what: "partition",
            detail,
        };
        let s = s.trim();
        let mut blocks = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| parse_err(format!("expected '(' in {s:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| parse_err(format!("unclosed block in {s:?}")))?;
            let block = body[..close]
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|e| parse_err(format!("{t:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
            rest = &body[close + 1..];
        }
        if blocks.is_empty() {
            return Err(parse_err("no blocks".into()));
        }
        let k = blocks.iter().map(Vec::len).sum();
        let p = Partition::from_blocks(k, &blocks).map_err(|e| parse_err(e.to_string()))?;
        if p.to_string() != s {
            return Err(parse_err(format!("{s:?} is not in canonical form")));
        }
        Ok(p)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(deserializer)?;
        let k = blocks.iter().map(Vec::len).sum();
        let p = Partition::from_blocks(k, &blocks).map_err(D::Error::custom)?;
        if p.blocks() != blocks {
            return Err(D::Error::custom("partition JSON is not in canonical form"));
        }
        Ok(p)
    }
}

/// Enumerates the r-equal partitions of `{1..k}` in canonical order.
pub fn enumerate_r_equal_partitions(k: usize, r: usize) -> Result<Vec<Partition>> {
    enumerate_r_equal_partitions_with(k, r, &Limits::default())
}

pub fn enumerate_r_equal_partitions_with(k: usize, r: usize, limits: &Limits) -> Result<Vec<Partition>> {
    check_params(k, r)?;
    limits.check_k(k)?;
    let mut out = Vec::new();
    let mut gen = RgsGenerator::new(k, r);
    gen.run(0, 0, &mut |rgs, blocks| {
        out.push(Partition {
            rgs: rgs.into(),
            blocks,
        })
    });
    out.sort();
    Ok(out)
}

/// Partitions of `{1..k}` in which every block has at least `r` elements.
pub fn singleton_free_elements(k: usize, r: usize) -> Result<Vec<Partition>> {
    singleton_free_elements_with(k, r, &Limits::default())
}

pub fn singleton_free_elements_with(k: usize, r: usize, limits: &Limits) -> Result<Vec<Partition>> {
    check_params(k, r)?;
    limits.check_k(k)?;
    let mut out = Vec::new();
    if k < r {
        return Ok(out);
    }
    let mut gen = RgsGenerator::new(k, r);
    gen.forbid_singletons = true;
    gen.run(0, 0, &mut |rgs, blocks| {
        out.push(Partition {
            rgs: rgs.into(),
            blocks,
        })
    });
    out.sort();
    Ok(out)
}

fn check_params(k: usize, r: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::usage("k must be at least 1"));
    }
    if k > MAX_GROUND {
        return Err(Error::usage(format!("k must be at most {MAX_GROUND}")));
    }
    if r < 2 {
        return Err(Error::usage("r must be at least 2"));
    }
    Ok(())
}

/// Restricted-growth-string generator pruned on block-size validity: a
/// block of size `2..r` owes `r - size` more elements, and the branch dies
/// once the total debt exceeds the elements left to place.
struct RgsGenerator {
    k: usize,
    r: usize,
    forbid_singletons: bool,
    rgs: Vec<u8>,
    sizes: Vec<usize>,
}

impl RgsGenerator {
    fn new(k: usize, r: usize) -> Self {
        RgsGenerator {
            k,
            r,
            forbid_singletons: false,
            rgs: vec![0; k],
            sizes: Vec::with_capacity(k),
        }
    }

    fn debt(&self, size: usize) -> usize {
        if size == 1 {
            if self.forbid_singletons {
                self.r - 1
            } else {
                0
            }
        } else { self.r.saturating_sub(size) }
    }

    fn run(&mut self, pos: usize, debt: usize, emit: &mut dyn FnMut(&[u8], u8)) {
        let remaining = self.k - pos;
        if debt > remaining {
            return;
        }
        if pos == self.k {
            emit(&self.rgs, self.sizes.len() as u8);
            return;
        }
        for b in 0..=self.sizes.len() {
            let (old, new) = if b == self.sizes.len() {
                self.sizes.push(0);
                (0, self.debt(1))
            } else {
                let s = self.sizes[b];
                (self.debt(s), self.debt(s + 1))
            };
            self.sizes[b] += 1;
            self.rgs[pos] = b as u8;
            self.run(pos + 1, debt - old + new, emit);
            self.sizes[b] -= 1;
            if self.sizes[b] == 0 {
                self.sizes.pop();
            }
        }
    }
}

/// The poset `Π_{k,r}` of r-equal partitions ordered by refinement.
#[derive(Debug, Clone)]
pub struct RLattice {
    k: usize,
    r: usize,
    elements: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// Row `i` has bit `j` set iff element `i` refines element `j`.
    relation: Option<Vec<Vec<u64>>>,
}

impl RLattice {
    pub fn new(k: usize, r: usize) -> Result<Self> {
        Self::with_limits(k, r, &Limits::default())
    }

    pub fn with_limits(k: usize, r: usize, limits: &Limits) -> Result<Self> {
        let elements = enumerate_r_equal_partitions_with(k, r, limits)?;
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let relation = (k <= limits.relation_table_max_k).then(|| {
            let words = elements.len().div_ceil(64);
            elements
                .iter()
                .map(|p| {
                    let mut row = vec![0u64; words];
                    for (j, q) in elements.iter().enumerate() {
                        if p.refines_unchecked(q) {
                            row[j / 64] |= 1 << (j % 64);
                        }
                    }
                    row
                })
                .collect()
        });
        Ok(RLattice {
            k,
            r,
            elements,
            index,
            relation,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn elements(&self) -> &[Partition] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.index.contains_key(p)
    }

    pub fn has_relation_table(&self) -> bool {
        self.relation.is_some()
    }

    pub fn bottom(&self) -> &Partition {
        &self.elements[0]
    }

    /// The one-block partition, present only when `k >= r`.
    pub fn top(&self) -> Option<&Partition> {
        (self.k >= self.r).then(|| self.elements.last().expect("lattice is never empty"))
    }

    /// Refinement between elements by index.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        match &self.relation {
            Some(rel) => rel[i][j / 64] >> (j % 64) & 1 == 1,
            None => self.elements[i].refines_unchecked(&self.elements[j]),
        }
    }

    /// Elements strictly between `x` and `y`, canonical order.
    pub fn open_interval(&self, x: &Partition, y: &Partition) -> Result<Vec<Partition>> {
        let (xi, yi) = match (self.index_of(x), self.index_of(y)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::usage("interval endpoints must belong to the lattice")),
        };
        if xi == yi || !self.leq(xi, yi) {
            return Err(Error::usage(format!("{x} does not strictly refine {y}")));
        }
        Ok((xi + 1..yi)
            .filter(|&z| self.leq(xi, z) && self.leq(z, yi))
            .map(|z| self.elements[z].clone())
            .collect())
    }

    /// Cover relations `(i, j)` (element `j` covers element `i`), sorted.
    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if covers(&self.elements[i], &self.elements[j], self.r) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// `y` covers `x` in `Π_{k,r}`: exactly one block of `y` is a union of
/// several `x` blocks, and no proper sub-union of two or more of those
/// blocks is itself large enough to be a legal block.
pub fn covers(x: &Partition, y: &Partition, r: usize) -> bool {
    if x.ground_size() != y.ground_size() || x.block_count() <= y.block_count() {
        return false;
    }
    if !x.refines_unchecked(y) {
        return false;
    }
    let x_sizes = x.block_sizes();
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); y.block_count()];
    let mut seen = vec![false; x.block_count()];
    for (e, &xb) in x.rgs().iter().enumerate() {
        if !seen[xb as usize] {
            seen[xb as usize] = true;
            parts[y.rgs()[e] as usize].push(x_sizes[xb as usize]);
        }
    }
    let mut merged = parts.iter().filter(|p| p.len() > 1);
    let group = match (merged.next(), merged.next()) {
        (Some(g), None) => g,
        _ => return false,
    };
    if group.len() == 2 {
        return true;
    }
    let total: usize = group.iter().sum();
    let smallest = *group.iter().min().expect("group has at least three parts");
    total - smallest < r
}

/// Free-function form of [`Partition::refines`].
pub fn refines(p: &Partition, q: &Partition) -> Result<bool> {
    p.refines(q)
}

/// Free-function form of [`RLattice::open_interval`].
pub fn open_interval(lat: &RLattice, x: &Partition, y: &Partition) -> Result<Vec<Partition>> {
    lat.open_interval(x, y)
}

pub fn block_count(p: &Partition) -> usize {
    p.block_count()
}

pub fn codimension(p: &Partition, n: u64) -> u64 {
    p.codimension(n)
}

pub fn interval_block_sizes(p: &Partition) -> Vec<usize> {
    p.interval_block_sizes()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    /// All set partitions by brute force: assign each element to an existing
    /// block or a new one, then filter.
    fn all_set_partitions(k: usize) -> Vec<Vec<Vec<usize>>> {
        let mut out = vec![vec![]];
        for e in 1..=k {
            let mut next = Vec::new();
            for blocks in &out {
                for b in 0..=blocks.len() {
                    let mut nb: Vec<Vec<usize>> = blocks.clone();
                    if b == nb.len() {
                        nb.push(vec![e]);
                    } else {
                        nb[b].push(e);
                    }
                    next.push(nb);
                }
            }
            out = next;
        }
        out
    }

    fn oracle_count(k: usize, r: usize, singleton_free: bool) -> usize {
        all_set_partitions(k)
            .into_iter()
            .filter(|bs| {
                bs.iter()
                    .all(|b| (b.len() == 1 && !singleton_free) || b.len() >= r)
            })
            .count()
    }

    #[test]
    fn enumeration_examples() {
        let l = enumerate_r_equal_partitions(4, 3).unwrap();
        assert_eq!(l.len(), 6);
        assert!(l[0].is_discrete());
        assert_eq!(l[5], Partition::single_block(4));
        assert_eq!(l[1..5].iter().filter(|x| x.block_count() == 2).count(), 4);

        assert_eq!(enumerate_r_equal_partitions(2, 3).unwrap(), vec![Partition::discrete(2)]);
        let five = enumerate_r_equal_partitions(5, 3).unwrap();
        assert_eq!(five.len(), 17);
        assert_eq!(all_set_partitions(5).len(), 52);
        assert_eq!(oracle_count(5, 3, false), 17);
    }

    #[test]
    fn enumeration_matches_filter_oracle() {
        for k in 1..=9 {
            for r in 2..=5 {
                let got = enumerate_r_equal_partitions(k, r).unwrap();
                assert_eq!(got.len(), oracle_count(k, r, false), "k={k} r={r}");
                assert!(got.iter().all(|x| x.is_r_equal(r)));
                assert!(got.windows(2).all(|w| w[0] < w[1]), "canonical order, no dups");
                let sf = singleton_free_elements(k, r).unwrap();
                assert_eq!(sf.len(), oracle_count(k, r, true), "k={k} r={r}");
            }
        }
    }

    #[test]
    fn singleton_free_examples() {
        assert_eq!(singleton_free_elements(4, 3).unwrap(), vec![Partition::single_block(4)]);
        assert!(singleton_free_elements(2, 3).unwrap().is_empty());
        let six = singleton_free_elements(6, 3).unwrap();
        assert_eq!(six.len(), 11);
        assert_eq!(six.iter().filter(|x| x.block_count() == 2).count(), 10);
    }

    #[test]
    fn guard_and_parameter_errors() {
        let err = enumerate_r_equal_partitions(13, 3).unwrap_err();
        assert!(err.is_guard());
        assert!(err.to_string().contains("12"));
        assert!(matches!(enumerate_r_equal_partitions(0, 3), Err(Error::Usage(_))));
        assert!(matches!(enumerate_r_equal_partitions(3, 1), Err(Error::Usage(_))));
        let lim = Limits::default().with_max_k(13);
        assert!(enumerate_r_equal_partitions_with(13, 7, &lim).is_ok());
    }

    #[test]
    fn refinement_examples() {
        let bottom = Partition::discrete(4);
        for q in enumerate_r_equal_partitions(4, 3).unwrap() {
            assert!(refines(&bottom, &q).unwrap());
        }
        assert!(refines(&p("(1,2,3)(4)"), &p("(1,2,3,4)")).unwrap());
        assert!(!refines(&p("(1,2,3)(4)"), &p("(1)(2,3,4)")).unwrap());
        assert!(matches!(refines(&p("(1,2,3)"), &p("(1,2,3,4)")), Err(Error::Usage(_))));
    }

    fn containment_oracle(a: &Partition, b: &Partition) -> bool {
        let bb = b.blocks();
        a.blocks()
            .iter()
            .all(|blk| bb.iter().any(|c| blk.iter().all(|e| c.contains(e))))
    }

    #[test]
    fn refinement_is_a_partial_order() {
        for k in 1..=7 {
            for r in [2, 3] {
                let lat = RLattice::new(k, r).unwrap();
                let n = lat.len();
                for i in 0..n {
                    assert!(lat.leq(i, i));
                    assert!(lat.leq(0, i), "0̂ is the minimum");
                    if let Some(top) = lat.top() {
                        assert!(lat.elements()[i].refines(top).unwrap());
                    }
                    for j in 0..n {
                        let ij = lat.leq(i, j);
                        assert_eq!(ij, containment_oracle(&lat.elements()[i], &lat.elements()[j]));
                        if i != j && ij {
                            assert!(!lat.leq(j, i), "antisymmetry");
                            assert!(i < j, "canonical order is a linear extension");
                        }
                    }
                }
                if k <= 5 {
                    for i in 0..n {
                        for j in 0..n {
                            for l in 0..n {
                                if lat.leq(i, j) && lat.leq(j, l) {
                                    assert!(lat.leq(i, l));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn small_lattices_have_one_element() {
        for r in 2..=5 {
            for k in 1..r {
                let lat = RLattice::new(k, r).unwrap();
                assert_eq!(lat.len(), 1);
                assert!(lat.top().is_none());
            }
        }
    }

    #[test]
    fn open_interval_examples() {
        let lat = RLattice::new(4, 3).unwrap();
        let top = Partition::single_block(4);
        let bottom = Partition::discrete(4);
        let mid = lat.open_interval(&bottom, &top).unwrap();
        assert_eq!(mid.len(), 4);
        assert!(mid.iter().all(|x| x.block_count() == 2));
        assert!(lat.open_interval(&bottom, &p("(1,2,3)(4)")).unwrap().is_empty());
        assert!(lat.open_interval(&top, &bottom).is_err());
        assert!(lat.open_interval(&top, &top).is_err());

        let lat5 = RLattice::new(5, 3).unwrap();
        let mid5 = lat5
            .open_interval(&Partition::discrete(5), &Partition::single_block(5))
            .unwrap();
        assert_eq!(mid5.len(), 15);
        assert_eq!(mid5.iter().filter(|x| x.block_sizes().contains(&3)).count(), 10);
        assert_eq!(mid5.iter().filter(|x| x.block_sizes().contains(&4)).count(), 5);
    }

    #[test]
    fn counts_and_codimension() {
        let bottom = Partition::discrete(6);
        assert_eq!(block_count(&bottom), 6);
        assert_eq!(block_count(&Partition::single_block(6)), 1);
        assert_eq!(block_count(&p("(1,2,3)(4)")), 2);
        assert_eq!(codimension(&bottom, 7), 0);
        assert_eq!(codimension(&p("(1,2,3)(4)"), 2), 4);
        for n in 1..6 {
            assert_eq!(codimension(&Partition::single_block(4), n), 3 * n);
        }
        assert_eq!(interval_block_sizes(&Partition::single_block(5)), vec![5]);
        assert_eq!(interval_block_sizes(&p("(1,2,3)(4,5,6)")), vec![3, 3]);
        assert_eq!(interval_block_sizes(&p("(1,2,3,4)(5)")), vec![4, 1]);
    }

    #[test]
    fn codimension_strictly_increases_along_chains() {
        let lat = RLattice::new(6, 2).unwrap();
        for i in 0..lat.len() {
            for j in 0..lat.len() {
                if i != j && lat.leq(i, j) {
                    for n in 1..4 {
                        assert!(lat.elements()[i].codimension(n) < lat.elements()[j].codimension(n));
                    }
                }
            }
        }
    }

    #[test]
    fn cover_relations_of_fig1_lattice() {
        let lat = RLattice::new(4, 3).unwrap();
        let covers = lat.cover_relations();
        assert_eq!(covers.len(), 8);
        for &(i, j) in &covers {
            assert!(i == 0 || j == 5);
        }
    }

    #[test]
    fn cover_rule_matches_interval_emptiness() {
        for k in 1..=7 {
            for r in 2..=4 {
                let lat = RLattice::new(k, r).unwrap();
                let els = lat.elements();
                for i in 0..els.len() {
                    for j in 0..els.len() {
                        let brute = i != j
                            && lat.leq(i, j)
                            && lat.open_interval(&els[i], &els[j]).unwrap().is_empty();
                        assert_eq!(covers(&els[i], &els[j], r), brute, "{} {}", els[i], els[j]);
                    }
                }
            }
        }
    }

    #[test]
    fn text_and_json_forms() {
        let x = p("(1,2,3)(4)");
        assert_eq!(x.to_string(), "(1,2,3)(4)");
        assert_eq!(serde_json::to_string(&x).unwrap(), "[[1,2,3],[4]]");
        let back: Partition = serde_json::from_str("[[1,2,3],[4]]").unwrap();
        assert_eq!(back, x);
        assert!("(2,1)(3)".parse::<Partition>().is_err());
        assert!("(1,2)(4)".parse::<Partition>().is_err());
        assert!("(1,2".parse::<Partition>().is_err());
        assert!(serde_json::from_str::<Partition>("[[4],[1,2,3]]").is_err());
    }

    #[test]
    fn embedding_adds_singletons() {
        let x = p("(1,2,3)");
        let e = x.embed(&[2, 3, 5], 5).unwrap();
        assert_eq!(e.to_string(), "(1)(2,3,5)(4)");
        assert!(e.nonsingleton_blocks_within(&[2, 3, 5]));
        assert!(!e.nonsingleton_blocks_within(&[2, 3]));
        assert_eq!(e.codimension(3), x.codimension(3));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_partition() -> impl Strategy<Value = Partition> {
            (1usize..=10).prop_flat_map(|k| {
                proptest::collection::vec(0usize..k, k).prop_map(move |labels| {
                    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
                    for (e, l) in labels.iter().enumerate() {
                        blocks[*l].push(e + 1);
                    }
                    blocks.retain(|b| !b.is_empty());
                    Partition::from_blocks(k, &blocks).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn text_round_trip(x in arb_partition()) {
                let s = x.to_string();
                let back: Partition = s.parse().unwrap();
                prop_assert_eq!(&back, &x);
                prop_assert_eq!(back.to_string(), s);
            }

            #[test]
            fn json_round_trip(x in arb_partition()) {
                let s = serde_json::to_string(&x).unwrap();
                let back: Partition = serde_json::from_str(&s).unwrap();
                prop_assert_eq!(serde_json::to_string(&back).unwrap(), s);
                prop_assert_eq!(back, x);
            }
        }
    }
}
