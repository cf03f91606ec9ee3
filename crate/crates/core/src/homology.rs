//! Reduced integral homology of simplicial complexes.
//!
//! Two independent routes are provided:
//!
//! * [`ChainComplex::homology`] assembles every boundary matrix and takes
//!   its Smith form. Simple, used as the reference on small complexes.
//! * [`reduced_homology`] reduces coboundary matrices degree by degree,
//!   skipping ("clearing") every column that the previous degree already
//!   proved redundant. This is what makes complexes with millions of faces
//!   tractable.
//!
//! Degrees are signed so that H̃_{-1} of the empty complex (which is ℤ) is
//! representable.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::complex::{FaceList, SimplicialComplex};
use crate::error::{Error, Result};
use crate::matrix::{self, Coeff, IntegerMatrix, Overflow, SmithForm, SparseColumn, LARGE_PRIME};
use crate::par::{self, Execution};

/// A finitely generated abelian group ℤ^rank ⊕ ℤ/t_1 ⊕ … ⊕ ℤ/t_s with
/// t_1 | t_2 | … | t_s and every t_i ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct FgGroup {
    pub rank: u64,
    pub torsion: Vec<BigInt>,
}

impl FgGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: u64) -> Self {
        FgGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Normalizes arbitrary cyclic orders into invariant factors.
    pub fn new(rank: u64, cyclic: impl IntoIterator<Item = BigInt>) -> Self {
        let orders: Vec<BigInt> = cyclic.into_iter().filter(|d| !d.is_one()).collect();
        assert!(orders.iter().all(|d| !d.is_zero()), "cyclic orders must be nonzero");
        FgGroup {
            rank,
            torsion: invariant_factors(orders),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &FgGroup) -> FgGroup {
        FgGroup::new(
            self.rank + other.rank,
            self.torsion.iter().chain(other.torsion.iter()).cloned(),
        )
    }
}

fn invariant_factors(orders: Vec<BigInt>) -> Vec<BigInt> {
    if orders.len() <= 1 {
        return orders.into_iter().map(|d| num_traits::Signed::abs(&d)).collect();
    }
    let n = orders.len();
    let diag: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { orders[i].clone() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    matrix::dense_smith_values(diag)
        .into_iter()
        .filter(|d| !d.is_one())
        .collect()
}

impl fmt::Display for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(format!("ℤ^{r}")),
        }
        // group equal factors: ℤ/2 ⊕ ℤ/2 prints as (ℤ/2)^2
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && &self.torsion[j] == t {
                j += 1;
            }
            match j - i {
                1 => parts.push(format!("ℤ/{t}")),
                m => parts.push(format!("(ℤ/{t})^{m}")),
            }
            i = j;
        }
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// A graded group; degrees holding the zero group are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedGroup {
    groups: BTreeMap<i64, FgGroup>,
}

impl GradedGroup {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(degree: i64, group: FgGroup) -> Self {
        let mut g = Self::new();
        g.add(degree, group);
        g
    }

    pub fn free_in(degree: i64, rank: u64) -> Self {
        Self::single(degree, FgGroup::free(rank))
    }

    /// Adds `group` as a direct summand in `degree`.
    pub fn add(&mut self, degree: i64, group: FgGroup) {
        if group.is_zero() {
            return;
        }
        let merged = match self.groups.get(&degree) {
            Some(g) => g.direct_sum(&group),
            None => group,
        };
        self.groups.insert(degree, merged);
    }

    pub fn get(&self, degree: i64) -> FgGroup {
        self.groups.get(&degree).cloned().unwrap_or_default()
    }

    pub fn rank(&self, degree: i64) -> u64 {
        self.groups.get(&degree).map_or(0, |g| g.rank)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &FgGroup)> {
        self.groups.iter().map(|(d, g)| (*d, g))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.groups.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.groups.values().all(FgGroup::is_free)
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.groups.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.groups.keys().next_back().copied()
    }

    pub fn total_rank(&self) -> u64 {
        self.groups.values().map(|g| g.rank).sum()
    }

    /// Σ (−1)^d rank_d.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|(d, g)| if d.rem_euclid(2) == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }

    pub fn shift(&self, by: i64) -> GradedGroup {
        GradedGroup {
            groups: self.groups.iter().map(|(d, g)| (d + by, g.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &GradedGroup) -> GradedGroup {
        let mut out = self.clone();
        for (d, g) in other.iter() {
            out.add(d, g.clone());
        }
        out
    }

    /// Prepends the ℤ in degree 0 that reduced (co)homology drops.
    pub fn unreduced(&self) -> GradedGroup {
        let mut out = self.clone();
        out.add(0, FgGroup::free(1));
        out
    }

    pub fn entries(&self) -> Vec<GroupEntry> {
        self.groups
            .iter()
            .map(|(d, g)| GroupEntry {
                degree: *d,
                rank: g.rank,
                torsion: g.torsion.clone(),
            })
            .collect()
    }
}

impl FromIterator<(i64, FgGroup)> for GradedGroup {
    fn from_iter<I: IntoIterator<Item = (i64, FgGroup)>>(iter: I) -> Self {
        let mut g = GradedGroup::new();
        for (d, x) in iter {
            g.add(d, x);
        }
        g
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.groups.iter().map(|(d, g)| format!("{d}: {g}")).collect();
        f.write_str(&parts.join(", "))
    }
}

impl Serialize for GradedGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

/// One degree of a [`GradedGroup`] in serialized form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupEntry {
    pub degree: i64,
    pub rank: u64,
    pub torsion: Vec<BigInt>,
}

impl Serialize for GroupEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let torsion: Vec<serde_json::Value> = self.torsion.iter().map(bigint_json).collect();
        let mut st = s.serialize_struct("GroupEntry", 3)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

/// Machine-sized integers as JSON numbers, anything larger as a string.
pub(crate) fn bigint_json(v: &BigInt) -> serde_json::Value {
    match v.to_u64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

/// The simplicial chain complex of a complex, optionally augmented.
///
/// `boundaries[d]` is ∂_d : C_d → C_{d−1}. With augmentation C_{−1} = ℤ and
/// ∂_0 is the all-ones row; without it ∂_0 has no rows.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    augmented: bool,
    ranks: Vec<usize>,
    boundaries: Vec<IntegerMatrix>,
}

impl ChainComplex {
    pub fn augmented(&self) -> bool {
        self.augmented
    }

    /// Rank of C_d for d ≥ 0.
    pub fn chain_rank(&self, d: usize) -> usize {
        self.ranks.get(d).copied().unwrap_or(0)
    }

    pub fn boundary(&self, d: usize) -> Option<&IntegerMatrix> {
        self.boundaries.get(d)
    }

    pub fn top_dimension(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    /// ∂_{d−1} ∘ ∂_d = 0 for every d.
    pub fn is_chain_complex(&self) -> bool {
        self.boundaries
            .windows(2)
            .all(|w| w[0].mul(&w[1]).is_zero())
    }

    /// Homology by the Smith form of every boundary matrix.
    pub fn homology(&self) -> GradedGroup {
        let smith: Vec<SmithForm> = self.boundaries.iter().map(matrix::smith_normal_form).collect();
        let rank_of = |d: usize| smith.get(d).map_or(0, |s| s.rank);
        let mut out = GradedGroup::new();
        if self.augmented {
            let f = 1 - rank_of(0);
            out.add(-1, FgGroup::free(f as u64));
        }
        for d in 0..self.ranks.len() {
            let free = self.ranks[d] - rank_of(d) - rank_of(d + 1);
            let torsion = smith.get(d + 1).map(|s| s.invariant_factors.clone()).unwrap_or_default();
            out.add(d as i64, FgGroup { rank: free as u64, torsion });
        }
        out
    }
}

/// Assembles the boundary matrices of `c` with the standard alternating
/// signs on canonically ordered vertices.
pub fn boundary_matrices(c: &SimplicialComplex, augmented: bool) -> ChainComplex {
    let top = c.dimension();
    let ranks: Vec<usize> = (0..=top).map(|d| c.face_count(d as usize)).collect();
    let mut boundaries = Vec::new();
    if top >= 0 {
        let f0 = ranks[0];
        let d0 = if augmented {
            IntegerMatrix::from_columns(1, (0..f0).map(|_| vec![(0, BigInt::one())]).collect())
        } else {
            IntegerMatrix::zeros(0, f0)
        };
        boundaries.push(d0);
        for d in 1..=top as usize {
            let faces = c.faces(d).expect("dimension in range");
            let lower = c.faces(d - 1).expect("dimension in range");
            let columns = faces
                .iter()
                .map(|tau| {
                    facets(tau)
                        .map(|(j, facet)| {
                            let s = lower.position(&facet).expect("complex is closed");
                            (s, sign(j))
                        })
                        .collect()
                })
                .collect();
            boundaries.push(IntegerMatrix::from_columns(lower.len(), columns));
        }
    }
    ChainComplex {
        augmented,
        ranks,
        boundaries,
    }
}

fn sign(j: usize) -> BigInt {
    if j.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn facets(face: &[u32]) -> impl Iterator<Item = (usize, Vec<u32>)> + '_ {
    (0..face.len()).map(move |j| {
        let mut f = Vec::with_capacity(face.len() - 1);
        f.extend_from_slice(&face[..j]);
        f.extend_from_slice(&face[j + 1..]);
        (j, f)
    })
}

/// Settings for [`reduced_homology_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HomologyOptions {
    pub execution: Execution,
    /// Recompute every coboundary rank modulo a large prime without
    /// clearing and compare.
    pub verify_mod_p: bool,
}

/// Per-degree statistics of one homology computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyReport {
    pub homology: GradedGroup,
    /// f_{−1}, f_0, …, f_top.
    pub face_counts: Vec<usize>,
    /// rank δ_d for d = −1, 0, …, top.
    pub coboundary_ranks: Vec<usize>,
    /// Columns skipped by clearing, per degree.
    pub cleared: Vec<usize>,
}

/// Reduced homology of `c`, with H̃_{−1}(∅) = ℤ.
pub fn reduced_homology(c: &SimplicialComplex) -> GradedGroup {
    reduced_homology_with(c, &HomologyOptions::default()).homology
}

pub fn reduced_homology_with(c: &SimplicialComplex, opts: &HomologyOptions) -> HomologyReport {
    let top = c.dimension();
    // index 0 stands for degree −1
    let mut face_counts = vec![1usize];
    face_counts.extend((0..=top).map(|d| c.face_count(d as usize)));
    let levels = face_counts.len();
    let mut coboundary_ranks = Vec::with_capacity(levels);
    let mut cleared_counts = Vec::with_capacity(levels);
    let mut factors: Vec<Vec<BigInt>> = Vec::with_capacity(levels);
    let mut cleared: Vec<bool> = vec![false; 1];
    for level in 0..levels {
        let d = level as i64 - 1;
        let cob = Coboundary::build(c, d, opts.execution);
        let skipped = cleared.iter().filter(|x| **x).count();
        let (rank, next_cleared, fs) = reduce_coboundary(&cob, &cleared);
        if opts.verify_mod_p {
            let p = cob.rank_mod_p(LARGE_PRIME);
            let divisible = fs
                .iter()
                .filter(|f| (*f % BigInt::from(LARGE_PRIME)).is_zero())
                .count();
            assert_eq!(p + divisible, rank, "coboundary rank failed its modular check in degree {d}");
        }
        coboundary_ranks.push(rank);
        cleared_counts.push(skipped);
        factors.push(fs);
        cleared = next_cleared;
    }
    let mut homology = GradedGroup::new();
    for level in 0..levels {
        let before = if level == 0 { 0 } else { coboundary_ranks[level - 1] };
        let free = face_counts[level] - before - coboundary_ranks[level];
        homology.add(
            level as i64 - 1,
            FgGroup {
                rank: free as u64,
                torsion: std::mem::take(&mut factors[level]),
            },
        );
    }
    assert_eq!(
        homology.euler_characteristic(),
        c.reduced_euler_characteristic(),
        "homology disagrees with the reduced Euler characteristic"
    );
    HomologyReport {
        homology,
        face_counts,
        coboundary_ranks,
        cleared: cleared_counts,
    }
}

/// δ_d : C^d → C^{d+1} in compressed sparse column form. Entries are ±1;
/// the sign of row τ in column σ is (−1)^j where σ is τ minus its j-th
/// vertex.
struct Coboundary {
    rows: usize,
    offsets: Vec<usize>,
    entries: Vec<u32>,
    negative: Vec<bool>,
}

impl Coboundary {
    fn build(c: &SimplicialComplex, d: i64, exec: Execution) -> Coboundary {
        let cols = if d < 0 { 1 } else { c.face_count(d as usize) };
        let Some(upper) = c.faces((d + 1) as usize) else {
            return Coboundary {
                rows: 0,
                offsets: vec![0; cols + 1],
                entries: Vec::new(),
                negative: Vec::new(),
            };
        };
        let rows = upper.len();
        if d < 0 {
            return Coboundary {
                rows,
                offsets: vec![0, rows],
                entries: (0..rows as u32).collect(),
                negative: vec![false; rows],
            };
        }
        let lower = c.faces(d as usize).expect("dimension in range");
        let width = d as usize + 2;
        let located = locate_facets(upper, lower, width, exec);
        let mut offsets = vec![0usize; cols + 1];
        for s in &located {
            offsets[*s as usize + 1] += 1;
        }
        for i in 0..cols {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut entries = vec![0u32; located.len()];
        let mut negative = vec![false; located.len()];
        for (pos, s) in located.iter().enumerate() {
            let (t, j) = (pos / width, pos % width);
            let slot = &mut fill[*s as usize];
            entries[*slot] = t as u32;
            negative[*slot] = j % 2 == 1;
            *slot += 1;
        }
        Coboundary {
            rows,
            offsets,
            entries,
            negative,
        }
    }

    fn cols(&self) -> usize {
        self.offsets.len() - 1
    }

    fn column<C: Coeff>(&self, j: usize) -> SparseColumn<C> {
        let (a, b) = (self.offsets[j], self.offsets[j + 1]);
        (a..b)
            .map(|p| (self.entries[p], C::from_i64(if self.negative[p] { -1 } else { 1 })))
            .collect()
    }

    fn to_matrix(&self) -> IntegerMatrix {
        let columns = (0..self.cols())
            .map(|j| {
                self.column::<i64>(j)
                    .into_iter()
                    .map(|(i, v)| (i as usize, BigInt::from(v)))
                    .collect()
            })
            .collect();
        IntegerMatrix::from_columns(self.rows, columns)
    }

    fn rank_mod_p(&self, p: u64) -> usize {
        matrix::rank_mod_prime(&self.to_matrix(), p)
    }
}

/// For every face τ of `upper` (in order) and every j, the index in `lower`
/// of τ with its j-th vertex removed.
fn locate_facets(upper: &FaceList, lower: &FaceList, width: usize, exec: Execution) -> Vec<u32> {
    const CHUNK: usize = 1 << 14;
    let chunks = upper.len().div_ceil(CHUNK);
    let parts = par::map_range(exec, chunks, |ci| {
        let mut out = Vec::with_capacity(CHUNK * width);
        let mut buf = vec![0u32; width - 1];
        for t in ci * CHUNK..((ci + 1) * CHUNK).min(upper.len()) {
            let tau = upper.get(t);
            for j in 0..width {
                buf[..j].copy_from_slice(&tau[..j]);
                buf[j..].copy_from_slice(&tau[j + 1..]);
                out.push(lower.position(&buf).expect("complex is closed") as u32);
            }
        }
        out
    });
    parts.concat()
}

/// Reduces δ_d with the given columns cleared. Returns its rank, the columns
/// of δ_{d+1} that may be cleared next, and the nontrivial invariant
/// factors of δ_d.
fn reduce_coboundary(cob: &Coboundary, cleared: &[bool]) -> (usize, Vec<bool>, Vec<BigInt>) {
    let run = |cob: &Coboundary| -> std::result::Result<_, Overflow> {
        reduce_generic::<i64>(cob, cleared)
    };
    match run(cob) {
        Ok(r) => r,
        Err(Overflow) => reduce_generic::<BigInt>(cob, cleared).expect("big integers cannot overflow"),
    }
}

fn reduce_generic<C: Coeff>(
    cob: &Coboundary,
    cleared: &[bool],
) -> std::result::Result<(usize, Vec<bool>, Vec<BigInt>), Overflow> {
    let mut next = vec![false; cob.rows];
    if cob.rows == 0 {
        return Ok((0, next, Vec::new()));
    }
    let columns = (0..cob.cols())
        .filter(|&j| !cleared.get(j).copied().unwrap_or(false))
        .map(|j| (j as u32, cob.column::<C>(j)));
    let red = matrix::reduce_columns(cob.rows, columns)?;
    for p in &red.pivots {
        if p.unit {
            next[p.low as usize] = true;
        }
    }
    let rank = red.rank();
    let smith = red.smith(cob.rows);
    debug_assert_eq!(smith.rank, rank);
    Ok((rank, next, smith.invariant_factors))
}

/// Join of two complexes with free homology:
/// H̃_t(A ∗ B) = ⊕_{p+q=t−1} H̃_p(A) ⊗ H̃_q(B).
pub fn join(a: &GradedGroup, b: &GradedGroup) -> Result<GradedGroup> {
    if !a.is_free() || !b.is_free() {
        return Err(Error::usage("join of graded groups is only defined here for free groups"));
    }
    let mut out = GradedGroup::new();
    for (p, x) in a.iter() {
        for (q, y) in b.iter() {
            out.add(p + q + 1, FgGroup::free(x.rank * y.rank));
        }
    }
    Ok(out)
}

/// Reduced homology of the `times`-fold suspension.
pub fn suspend(a: &GradedGroup, times: u32) -> GradedGroup {
    a.shift(times as i64)
}

/// Homology of the open interval (0̂, x) from the block sizes of x and the
/// homology of the proper parts Π^0_{m,r} of the block lattices.
///
/// Only blocks of size at least 2 enter: a singleton block contributes the
/// one-point lattice Π_{1,r}, which is a unit for the product and must not
/// be counted as a join factor. With c such blocks the interval is the
/// (c−1)-fold suspension of the join of their proper parts.
pub fn homology_of_interval_via_join(
    block_sizes: &[usize],
    mut base: impl FnMut(usize) -> Result<GradedGroup>,
) -> Result<GradedGroup> {
    let blocks: Vec<usize> = block_sizes.iter().copied().filter(|&m| m > 1).collect();
    if blocks.is_empty() {
        // (0̂, 0̂) is empty
        return Ok(GradedGroup::free_in(-1, 1));
    }
    let mut acc: Option<GradedGroup> = None;
    for &m in &blocks {
        let g = base(m)?;
        if !g.is_free() {
            return Err(Error::TorsionInJoin { block: m });
        }
        acc = Some(match acc {
            None => g,
            Some(a) => join(&a, &g)?,
        });
    }
    Ok(suspend(&acc.expect("at least one block"), blocks.len() as u32 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::order_complex;
    use crate::partition::{Partition, RLattice};

    fn complex(n: usize, faces: &[Vec<usize>]) -> SimplicialComplex {
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        SimplicialComplex::from_faces(labels, faces).unwrap()
    }

    fn rp2() -> SimplicialComplex {
        // the 6-vertex triangulation
        complex(
            6,
            &[
                vec![0, 1, 2],
                vec![0, 2, 3],
                vec![0, 3, 4],
                vec![0, 4, 5],
                vec![0, 1, 5],
                vec![1, 2, 4],
                vec![2, 3, 5],
                vec![1, 3, 4],
                vec![1, 3, 5],
                vec![2, 4, 5],
            ],
        )
    }

    fn proper_part(k: usize, r: usize) -> SimplicialComplex {
        let lat = RLattice::new(k, r).unwrap();
        let top = lat.top().unwrap().clone();
        order_complex(&lat.open_interval(lat.bottom(), &top).unwrap()).unwrap()
    }

    fn both_routes(c: &SimplicialComplex) -> GradedGroup {
        let fast = reduced_homology_with(
            c,
            &HomologyOptions {
                verify_mod_p: true,
                ..Default::default()
            },
        )
        .homology;
        let cc = boundary_matrices(c, true);
        assert!(cc.is_chain_complex());
        assert_eq!(cc.homology(), fast, "boundary and coboundary routes disagree");
        fast
    }

    #[test]
    fn group_arithmetic() {
        let g = FgGroup::new(0, [BigInt::from(2), BigInt::from(3)]);
        assert_eq!(g.torsion, vec![BigInt::from(6)]);
        let g = FgGroup::new(1, [BigInt::from(4), BigInt::from(2), BigInt::from(1)]);
        assert_eq!(g.torsion, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(g.to_string(), "ℤ ⊕ ℤ/2 ⊕ ℤ/4");
        assert_eq!(FgGroup::new(3, [BigInt::from(2), BigInt::from(2)]).to_string(), "ℤ^3 ⊕ (ℤ/2)^2");
        assert_eq!(FgGroup::zero().to_string(), "0");

        let mut a = GradedGroup::free_in(3, 4);
        a.add(4, FgGroup::free(3));
        a.add(5, FgGroup::zero());
        assert_eq!(a.degrees().collect::<Vec<_>>(), vec![3, 4]);
        assert_eq!(a.to_string(), "3: ℤ^4, 4: ℤ^3");
        assert_eq!(a.euler_characteristic(), -1);
        assert_eq!(a.shift(-4).min_degree(), Some(-1));
        assert_eq!(a.unreduced().rank(0), 1);
    }

    #[test]
    fn json_entries() {
        let mut a = GradedGroup::free_in(-1, 1);
        a.add(2, FgGroup::new(0, [BigInt::from(2)]));
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(
            v,
            serde_json::json!([
                {"degree": -1, "rank": 1, "torsion": []},
                {"degree": 2, "rank": 0, "torsion": [2]}
            ])
        );
    }

    #[test]
    fn empty_complex_and_augmentation() {
        let e = SimplicialComplex::empty();
        assert_eq!(both_routes(&e), GradedGroup::free_in(-1, 1));
        let cc = boundary_matrices(&e, true);
        assert_eq!(cc.top_dimension(), None);

        let antichain = complex(4, &[vec![0], vec![1], vec![2], vec![3]]);
        let cc = boundary_matrices(&antichain, true);
        let d0 = cc.boundary(0).unwrap();
        assert_eq!((d0.rows(), d0.cols()), (1, 4));
        assert!((0..4).all(|j| d0.get(0, j) == BigInt::one()));
        assert_eq!(both_routes(&antichain), GradedGroup::free_in(0, 3));
    }

    #[test]
    fn edge_boundary() {
        let e = complex(2, &[vec![0, 1]]);
        let cc = boundary_matrices(&e, false);
        let d1 = cc.boundary(1).unwrap();
        assert_eq!(d1.get(0, 0), BigInt::from(-1));
        assert_eq!(d1.get(1, 0), BigInt::from(1));
        assert!(both_routes(&e).is_zero());
    }

    #[test]
    fn spheres_and_torsion() {
        let circle = complex(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(both_routes(&circle), GradedGroup::free_in(1, 1));
        let s2 = complex(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
        assert_eq!(both_routes(&s2), GradedGroup::free_in(2, 1));
        let h = both_routes(&rp2());
        assert_eq!(h, GradedGroup::single(1, FgGroup::new(0, [BigInt::from(2)])));
        let triangle = complex(3, &[vec![0, 1, 2]]);
        assert!(both_routes(&triangle).is_zero());
    }

    #[test]
    fn clearing_skips_columns() {
        let s2 = complex(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
        let rep = reduced_homology_with(&s2, &HomologyOptions::default());
        assert_eq!(rep.face_counts, vec![1, 4, 6, 4]);
        assert_eq!(rep.coboundary_ranks, vec![1, 3, 3, 0]);
        assert!(rep.cleared[1] > 0);
    }

    #[test]
    fn small_lattice_intervals() {
        assert_eq!(both_routes(&proper_part(4, 3)), GradedGroup::free_in(0, 3));
        let h = both_routes(&proper_part(5, 3));
        assert_eq!(h, GradedGroup::free_in(1, 6));
        // rank equals 1 − χ̃ only because the graph is connected
        assert_eq!(h.rank(1) as i64, -proper_part(5, 3).reduced_euler_characteristic());
        assert_eq!(both_routes(&proper_part(3, 3)), GradedGroup::free_in(-1, 1));
    }

    #[test]
    fn full_partition_lattices() {
        // Π^0_{k,2}: top homology of rank (k−1)! in degree k−3
        let fact = |n: u64| (1..=n).product::<u64>();
        for k in 3..=6usize {
            let h = reduced_homology(&proper_part(k, 2));
            assert_eq!(h, GradedGroup::free_in(k as i64 - 3, fact(k as u64 - 1)), "k = {k}");
        }
        assert_eq!(both_routes(&proper_part(5, 2)), GradedGroup::free_in(2, 24));
    }

    #[test]
    fn join_examples() {
        let pt = GradedGroup::free_in(0, 1);
        let two_points = GradedGroup::free_in(0, 1);
        // S^0 ∗ S^0 = S^1
        assert_eq!(join(&two_points, &two_points).unwrap(), GradedGroup::free_in(1, 1));
        // joining with the empty complex is the identity
        let empty = GradedGroup::free_in(-1, 1);
        assert_eq!(join(&pt, &empty).unwrap(), pt);
        let tors = GradedGroup::single(1, FgGroup::new(0, [BigInt::from(2)]));
        assert!(join(&tors, &pt).is_err());
        assert_eq!(suspend(&empty, 2), GradedGroup::free_in(1, 1));
    }

    fn base(r: usize) -> impl FnMut(usize) -> Result<GradedGroup> {
        move |m| Ok(reduced_homology(&proper_part(m, r)))
    }

    #[test]
    fn interval_join_examples() {
        assert_eq!(
            homology_of_interval_via_join(&[4], base(3)).unwrap(),
            GradedGroup::free_in(0, 3)
        );
        assert_eq!(
            homology_of_interval_via_join(&[3, 3], base(3)).unwrap(),
            GradedGroup::free_in(0, 1)
        );
        assert_eq!(
            homology_of_interval_via_join(&[4, 3], base(3)).unwrap(),
            GradedGroup::free_in(1, 3)
        );
        // (1,2,3)(4): the interval below is empty
        assert_eq!(
            homology_of_interval_via_join(&[3, 1], base(3)).unwrap(),
            GradedGroup::free_in(-1, 1)
        );
        let torsion_base = |_m: usize| Ok(GradedGroup::single(0, FgGroup::new(0, [BigInt::from(3)])));
        assert_eq!(
            homology_of_interval_via_join(&[4, 3], torsion_base),
            Err(Error::TorsionInJoin { block: 4 })
        );
    }

    #[test]
    fn join_matches_direct_interval() {
        let x = Partition::from_blocks(7, &[vec![1, 2, 3, 4], vec![5, 6, 7]]).unwrap();
        let lat = RLattice::new(7, 3).unwrap();
        let direct = reduced_homology(&order_complex(&lat.open_interval(lat.bottom(), &x).unwrap()).unwrap());
        assert_eq!(direct, GradedGroup::free_in(1, 3));
        let x = Partition::from_blocks(7, &[vec![1, 2, 3], vec![4], vec![5, 6, 7]]).unwrap();
        let direct = reduced_homology(&order_complex(&lat.open_interval(lat.bottom(), &x).unwrap()).unwrap());
        assert_eq!(direct, homology_of_interval_via_join(&x.interval_block_sizes(), base(3)).unwrap());
    }
}
