//! Cubical diagrams of graded free abelian groups.
//!
//! A k-cube assigns a group to every subset S of {1..k} (encoded as a bit
//! mask) and a homomorphism to every edge S ⊆ S ∪ {i}. Total kernels and
//! total cokernels are computed twice: directly from the maps out of (or
//! into) the initial vertex, and iteratively one direction at a time.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arrangement::Engine;
use crate::error::{Error, Result};
use crate::homology::{FgGroup, GradedGroup};
use crate::matrix::{self, IntegerMatrix};
use crate::par;
use crate::partition::{enumerate_r_equal_partitions_with, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Maps χ(S) → χ(S ∪ {i}).
    Covariant,
    /// Maps χ(S ∪ {i}) → χ(S).
    Contravariant,
}

/// One vertex: a free group in each degree, with optional basis labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vertex {
    pub ranks: BTreeMap<i64, usize>,
    pub labels: BTreeMap<i64, Vec<String>>,
}

impl Vertex {
    pub fn rank(&self, degree: i64) -> usize {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }

    pub fn as_group(&self) -> GradedGroup {
        self.ranks.iter().map(|(d, r)| (*d, FgGroup::free(*r as u64))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCube {
    k: usize,
    orientation: Orientation,
    vertices: Vec<Vertex>,
    /// Indexed by `mask * k + i` for i ∉ mask; degreewise matrices.
    edges: Vec<BTreeMap<i64, IntegerMatrix>>,
}

impl GroupCube {
    /// A cube with the given vertices and every edge map zero.
    pub fn new(k: usize, orientation: Orientation, vertices: Vec<Vertex>) -> Result<Self> {
        if k > 24 {
            return Err(Error::usage("cube dimension too large"));
        }
        if vertices.len() != 1 << k {
            return Err(Error::usage(format!("a {k}-cube needs {} vertices", 1usize << k)));
        }
        Ok(GroupCube {
            k,
            orientation,
            vertices,
            edges: vec![BTreeMap::new(); (1 << k) * k.max(1)],
        })
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn vertex(&self, mask: usize) -> &Vertex {
        &self.vertices[mask]
    }

    /// Degrees in which some vertex is nonzero.
    pub fn degrees(&self) -> BTreeSet<i64> {
        self.vertices
            .iter()
            .flat_map(|v| v.ranks.iter().filter(|(_, r)| **r > 0).map(|(d, _)| *d))
            .collect()
    }

    fn edge_index(&self, mask: usize, i: usize) -> Result<usize> {
        if i >= self.k || mask >= 1 << self.k || mask & (1 << i) != 0 {
            return Err(Error::usage(format!("no edge from {mask:#b} in direction {i}")));
        }
        Ok(mask * self.k + i)
    }

    /// (rows, cols) of the map on edge (mask, i) in `degree`.
    fn edge_shape(&self, mask: usize, i: usize, degree: i64) -> (usize, usize) {
        let (lo, hi) = (self.vertices[mask].rank(degree), self.vertices[mask | 1 << i].rank(degree));
        match self.orientation {
            Orientation::Covariant => (hi, lo),
            Orientation::Contravariant => (lo, hi),
        }
    }

    /// Sets the map on the edge between `mask` and `mask ∪ {i}`.
    pub fn set_edge(&mut self, mask: usize, i: usize, degree: i64, m: IntegerMatrix) -> Result<()> {
        let idx = self.edge_index(mask, i)?;
        let shape = self.edge_shape(mask, i, degree);
        if (m.rows(), m.cols()) != shape {
            return Err(Error::usage(format!(
                "edge ({mask:#b}, {i}) in degree {degree} must be {}×{}, got {}×{}",
                shape.0,
                shape.1,
                m.rows(),
                m.cols()
            )));
        }
        self.edges[idx].insert(degree, m);
        Ok(())
    }

    pub fn edge(&self, mask: usize, i: usize, degree: i64) -> Result<IntegerMatrix> {
        let idx = self.edge_index(mask, i)?;
        Ok(match self.edges[idx].get(&degree) {
            Some(m) => m.clone(),
            None => {
                let (r, c) = self.edge_shape(mask, i, degree);
                IntegerMatrix::zeros(r, c)
            }
        })
    }

    /// Both paths around every square agree.
    pub fn check_functoriality(&self) -> Result<()> {
        for degree in self.degrees() {
            for mask in 0..1usize << self.k {
                for i in 0..self.k {
                    for j in i + 1..self.k {
                        if mask & (1 << i | 1 << j) != 0 {
                            continue;
                        }
                        let (a, b) = match self.orientation {
                            Orientation::Covariant => (
                                self.edge(mask | 1 << i, j, degree)?.mul(&self.edge(mask, i, degree)?),
                                self.edge(mask | 1 << j, i, degree)?.mul(&self.edge(mask, j, degree)?),
                            ),
                            Orientation::Contravariant => (
                                self.edge(mask, i, degree)?.mul(&self.edge(mask | 1 << i, j, degree)?),
                                self.edge(mask, j, degree)?.mul(&self.edge(mask | 1 << j, i, degree)?),
                            ),
                        };
                        if a != b {
                            return Err(Error::integrity(format!(
                                "square at {mask:#b} in directions {i}, {j} does not commute in degree {degree}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn require(&self, o: Orientation) -> Result<()> {
        if self.orientation != o {
            return Err(Error::usage(format!("operation needs a {o:?} cube")));
        }
        self.check_functoriality()
    }

    /// ker(χ(∅) → ⊕_i χ({i})) in each degree, as a basis of χ(∅).
    pub fn total_kernel_basis(&self, degree: i64) -> Result<IntegerMatrix> {
        let n = self.vertices[0].rank(degree);
        let maps: Vec<IntegerMatrix> = (0..self.k).map(|i| self.edge(0, i, degree)).collect::<Result<_>>()?;
        let refs: Vec<&IntegerMatrix> = maps.iter().collect();
        Ok(matrix::kernel_basis(&IntegerMatrix::vconcat(&refs, n)))
    }

    /// The same subgroup as an iterated kernel: K ← K · ker(F_i · K) for
    /// each direction in turn.
    pub fn iterated_kernel_basis(&self, degree: i64) -> Result<IntegerMatrix> {
        let mut basis = IntegerMatrix::identity(self.vertices[0].rank(degree));
        for i in 0..self.k {
            let f = self.edge(0, i, degree)?;
            basis = basis.mul(&matrix::kernel_basis(&f.mul(&basis)));
        }
        Ok(basis)
    }

    /// Total kernel of a covariant cube. Both routes are computed and must
    /// span the same sublattice.
    pub fn total_kernel(&self) -> Result<GradedGroup> {
        self.require(Orientation::Covariant)?;
        let mut out = GradedGroup::new();
        for degree in self.degrees() {
            let direct = self.total_kernel_basis(degree)?;
            let iterated = self.iterated_kernel_basis(degree)?;
            let rows = direct.rows();
            let both = IntegerMatrix::hconcat(&[&direct, &iterated], rows);
            let (a, b, ab) = (
                matrix::smith_normal_form(&direct).rank,
                matrix::smith_normal_form(&iterated).rank,
                matrix::smith_normal_form(&both).rank,
            );
            if !(a == b && b == ab) {
                return Err(Error::integrity(format!(
                    "direct and iterated total kernels differ in degree {degree}"
                )));
            }
            out.add(degree, FgGroup::free(a as u64));
        }
        Ok(out)
    }

    /// coker(⊕_i χ({i}) → χ(∅)) from one Smith form.
    pub fn total_cokernel_direct(&self, degree: i64) -> Result<FgGroup> {
        let n = self.vertices[0].rank(degree);
        let maps: Vec<IntegerMatrix> = (0..self.k).map(|i| self.edge(0, i, degree)).collect::<Result<_>>()?;
        let refs: Vec<&IntegerMatrix> = maps.iter().collect();
        let s = matrix::smith_normal_form(&IntegerMatrix::hconcat(&refs, n));
        Ok(FgGroup {
            rank: (n - s.rank) as u64,
            torsion: s.invariant_factors,
        })
    }

    /// The same group as an iterated cokernel, normalizing every
    /// intermediate quotient through its Smith transforms.
    pub fn total_cokernel_iterated(&self, degree: i64) -> Result<FgGroup> {
        let dirs: Vec<usize> = (0..self.k).collect();
        let q = self.quotient(0, &dirs, degree)?;
        let rank = q.orders.iter().filter(|d| d.is_zero()).count() as u64;
        Ok(FgGroup::new(rank, q.orders.into_iter().filter(|d| !d.is_zero())))
    }

    /// χ(base) / Σ_{i ∈ dirs} im(χ(base ∪ {i}) → χ(base)).
    fn quotient(&self, base: usize, dirs: &[usize], degree: i64) -> Result<Quotient> {
        let Some((&last, rest)) = dirs.split_last() else {
            return Ok(Quotient::free(self.vertices[base].rank(degree)));
        };
        let q1 = self.quotient(base, rest, degree)?;
        let q2 = self.quotient(base | 1 << last, rest, degree)?;
        let g = self.edge(base, last, degree)?;
        // images of q2's generators in q1's coordinates
        let images = dense(&q1.to_quotient.mul(&g).mul(&q2.lift));
        let m = q1.orders.len();
        let mut relations: Vec<Vec<BigInt>> = vec![Vec::with_capacity(m + images.first().map_or(0, Vec::len)); m];
        for (i, row) in relations.iter_mut().enumerate() {
            row.extend((0..m).map(|j| if i == j { q1.orders[i].clone() } else { BigInt::zero() }));
            row.extend(images[i].iter().cloned());
        }
        let cols = relations.first().map_or(0, Vec::len);
        let snf = matrix::smith_decomposition(&relations, cols);
        let kept: Vec<usize> = (0..m)
            .filter(|&i| i >= snf.rank() || !snf.diagonal[i].is_one())
            .collect();
        let orders = kept
            .iter()
            .map(|&i| if i < snf.rank() { snf.diagonal[i].clone() } else { BigInt::zero() })
            .collect();
        let u_rows = from_dense_rows(kept.iter().map(|&i| snf.u[i].clone()).collect(), m);
        let u_inv_cols = from_dense_rows(
            (0..m).map(|r| kept.iter().map(|&c| snf.u_inv[r][c].clone()).collect()).collect(),
            kept.len(),
        );
        Ok(Quotient {
            orders,
            to_quotient: u_rows.mul(&q1.to_quotient),
            lift: q1.lift.mul(&u_inv_cols),
        })
    }

    /// Total cokernel of a contravariant cube. Both routes are computed and
    /// must agree.
    pub fn total_cokernel(&self) -> Result<GradedGroup> {
        self.require(Orientation::Contravariant)?;
        let degrees: Vec<i64> = self.degrees().into_iter().collect();
        let groups = par::try_map(par::Execution::default(), &degrees, |&d| {
            let direct = self.total_cokernel_direct(d)?;
            let iterated = self.total_cokernel_iterated(d)?;
            if direct != iterated {
                return Err(Error::integrity(format!(
                    "direct total cokernel {direct} and iterated {iterated} differ in degree {d}"
                )));
            }
            Ok((d, direct))
        })?;
        Ok(groups.into_iter().collect())
    }

    /// Every edge map is injective with saturated image, in every degree.
    pub fn edges_split_injective(&self) -> Result<bool> {
        for degree in self.degrees() {
            for mask in 0..1usize << self.k {
                for i in (0..self.k).filter(|i| mask & (1 << i) == 0) {
                    let e = self.edge(mask, i, degree)?;
                    let s = matrix::smith_normal_form(&e);
                    if s.rank != e.cols() || !s.invariant_factors.is_empty() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn summary(&self) -> CubeSummary {
        let vertices = (0..1usize << self.k)
            .map(|mask| VertexSummary {
                subset: mask_to_subset(mask),
                ranks: self.vertices[mask].as_group(),
            })
            .collect();
        let mut edges = Vec::new();
        for mask in 0..1usize << self.k {
            for i in (0..self.k).filter(|i| mask & (1 << i) == 0) {
                let ranks = self
                    .degrees()
                    .into_iter()
                    .filter_map(|d| {
                        let e = self.edge(mask, i, d).ok()?;
                        let r = matrix::smith_normal_form(&e).rank;
                        (r > 0).then_some(EdgeRank { degree: d, rank: r })
                    })
                    .collect();
                edges.push(EdgeSummary {
                    from: mask_to_subset(mask),
                    direction: i + 1,
                    ranks,
                });
            }
        }
        CubeSummary {
            k: self.k,
            orientation: self.orientation,
            vertices,
            edges,
        }
    }
}

/// A quotient of some vertex group, normalized: ⊕ ℤ/orders[j] (0 = free).
/// `to_quotient` sends vertex coordinates to generator coordinates and
/// `lift` sends generators back to representatives.
struct Quotient {
    orders: Vec<BigInt>,
    to_quotient: IntegerMatrix,
    lift: IntegerMatrix,
}

impl Quotient {
    fn free(n: usize) -> Self {
        Quotient {
            orders: vec![BigInt::zero(); n],
            to_quotient: IntegerMatrix::identity(n),
            lift: IntegerMatrix::identity(n),
        }
    }
}

fn dense(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    m.to_dense()
}

fn from_dense_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> IntegerMatrix {
    if rows.is_empty() {
        return IntegerMatrix::zeros(0, cols);
    }
    IntegerMatrix::from_rows(&rows)
}

/// 1-based elements of a mask.
pub fn mask_to_subset(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexSummary {
    pub subset: Vec<usize>,
    pub ranks: GradedGroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeRank {
    pub degree: i64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeSummary {
    pub from: Vec<usize>,
    pub direction: usize,
    pub ranks: Vec<EdgeRank>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubeSummary {
    pub k: usize,
    pub orientation: Orientation,
    pub vertices: Vec<VertexSummary>,
    pub edges: Vec<EdgeSummary>,
}

/// Basis element of a restriction-cube vertex: the summand of x and an
/// index inside H̃_d(0̂, x).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct BasisLabel {
    x: Partition,
    index: usize,
}

/// The cube S ↦ H̃*(rConf({1..k} ∖ S, ℝⁿ)) with restriction maps.
///
/// Vertex S has one summand per lattice element whose non-singleton blocks
/// avoid S, embedded in Π_{k,r} by adding the points of S as singletons.
/// One reference basis is fixed per block-size profile, so forgetting a
/// point maps every summand onto the matching summand by the identity and
/// edge matrices are 0/1 inclusions.
pub fn build_restriction_cube(engine: &Engine, k: usize, r: usize, n: u64) -> Result<GroupCube> {
    engine.limits().check_cube_k(k)?;
    if n == 0 {
        return Err(Error::usage("n must be at least 1"));
    }
    if k == 0 {
        return GroupCube::new(0, Orientation::Contravariant, vec![Vertex::default()]);
    }
    let elements: Vec<Partition> = enumerate_r_equal_partitions_with(k, r, engine.limits())?
        .into_iter()
        .filter(|x| !x.is_discrete())
        .collect();
    // cohomology degree → basis labels, per element
    let summands = par::try_map(engine.execution(), &elements, |x| {
        let h = engine.interval_homology(x, r)?;
        if !h.is_free() {
            return Err(Error::integrity(format!("interval below {x} has torsion; no basis to fix")));
        }
        let codim = x.codimension(n) as i64;
        Ok(h.iter().map(|(d, g)| (codim - 2 - d, g.rank as usize)).collect::<Vec<_>>())
    })?;
    let full = 1usize << k;
    let bases: Vec<BTreeMap<i64, Vec<BasisLabel>>> = par::map_range(engine.execution(), full, |mask| {
        let keep: Vec<usize> = (1..=k).filter(|e| mask & (1 << (e - 1)) == 0).collect();
        let mut by_degree: BTreeMap<i64, Vec<BasisLabel>> = BTreeMap::new();
        for (x, parts) in elements.iter().zip(&summands) {
            if !x.nonsingleton_blocks_within(&keep) {
                continue;
            }
            for &(deg, rank) in parts {
                let list = by_degree.entry(deg).or_default();
                list.extend((0..rank).map(|index| BasisLabel { x: x.clone(), index }));
            }
        }
        by_degree
    });
    let vertices = bases
        .iter()
        .map(|b| Vertex {
            ranks: b.iter().map(|(d, l)| (*d, l.len())).collect(),
            labels: b
                .iter()
                .map(|(d, l)| (*d, l.iter().map(|e| format!("{}#{}", e.x, e.index)).collect()))
                .collect(),
        })
        .collect();
    let mut cube = GroupCube::new(k, Orientation::Contravariant, vertices)?;
    for mask in 0..full {
        for i in (0..k).filter(|i| mask & (1 << i) == 0) {
            let upper = &bases[mask | 1 << i];
            let lower = &bases[mask];
            for (deg, from) in upper {
                let to = &lower[deg];
                let columns = from
                    .iter()
                    .map(|label| {
                        let row = to.binary_search(label).expect("summands restrict to summands");
                        vec![(row, BigInt::one())]
                    })
                    .collect();
                cube.set_edge(mask, i, *deg, IntegerMatrix::from_columns(to.len(), columns))?;
            }
        }
    }
    Ok(cube)
}

/// Outcome of checking that the total cokernel of the restriction cube is
/// the sum over partitions without singletons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TotalCokernelReport {
    pub k: usize,
    pub r: usize,
    pub n: u64,
    pub total_cokernel: GradedGroup,
    pub singleton_free_sum: GradedGroup,
    pub split_injective: bool,
    pub summand_exact: bool,
    pub vertices_match: bool,
    pub pass: bool,
    /// Degrees where the two sides differ, as "d: lhs vs rhs".
    pub differences: Vec<String>,
    pub cube: CubeSummary,
}

pub fn verify_totalcokernel_theorem(engine: &Engine, k: usize, r: usize, n: u64) -> Result<TotalCokernelReport> {
    let cube = build_restriction_cube(engine, k, r, n)?;
    let tcoker = cube.total_cokernel()?;
    let tfiber = engine.tfiber_cohomology(k, r, n)?;
    let degrees: BTreeSet<i64> = tcoker.degrees().chain(tfiber.degrees()).collect();
    let differences: Vec<String> = degrees
        .into_iter()
        .filter(|d| tcoker.get(*d) != tfiber.get(*d))
        .map(|d| format!("{d}: {} vs {}", tcoker.get(d), tfiber.get(d)))
        .collect();
    let split_injective = cube.edges_split_injective()?;
    let summand_exact = summand_exactness(&cube);
    let vertices_match = vertices_match(engine, &cube, r, n)?;
    Ok(TotalCokernelReport {
        k,
        r,
        n,
        pass: differences.is_empty() && split_injective && summand_exact && vertices_match,
        total_cokernel: tcoker,
        singleton_free_sum: tfiber,
        split_injective,
        summand_exact,
        vertices_match,
        differences,
        cube: cube.summary(),
    })
}

/// The images of the maps into χ(∅) are spanned exactly by the basis
/// vectors of summands with at least one singleton block.
fn summand_exactness(cube: &GroupCube) -> bool {
    let k = cube.dimension();
    cube.degrees().into_iter().all(|deg| {
        let labels = cube.vertex(0).labels.get(&deg).cloned().unwrap_or_default();
        let mut hit = vec![false; labels.len()];
        for i in 0..k {
            let Ok(e) = cube.edge(0, i, deg) else { return false };
            for j in 0..e.cols() {
                match e.column(j) {
                    [(row, v)] if v.is_one() => hit[*row as usize] = true,
                    _ => return false,
                }
            }
        }
        labels.iter().zip(&hit).all(|(label, h)| {
            let x: Partition = label.split('#').next().and_then(|s| s.parse().ok()).expect("label format");
            *h == x.has_singleton()
        })
    })
}

/// Each vertex S agrees with the cohomology of rConf on k − |S| points
/// computed from scratch.
fn vertices_match(engine: &Engine, cube: &GroupCube, r: usize, n: u64) -> Result<bool> {
    let k = cube.dimension();
    let mut by_size: BTreeMap<usize, GradedGroup> = BTreeMap::new();
    for m in 0..=k {
        by_size.insert(m, engine.gm_cohomology(m, r, n)?);
    }
    Ok((0..1usize << k).all(|mask| {
        let m = k - mask.count_ones() as usize;
        cube.vertex(mask).as_group() == by_size[&m]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn free_vertex(degree: i64, rank: usize) -> Vertex {
        Vertex {
            ranks: [(degree, rank)].into_iter().collect(),
            labels: BTreeMap::new(),
        }
    }

    fn one_cube(o: Orientation, a: usize, b: usize, m: IntegerMatrix) -> GroupCube {
        let mut c = GroupCube::new(1, o, vec![free_vertex(0, a), free_vertex(0, b)]).unwrap();
        c.set_edge(0, 0, 0, m).unwrap();
        c
    }

    #[test]
    fn one_dimensional_kernels() {
        let inj = one_cube(Orientation::Covariant, 2, 3, IntegerMatrix::from_rows(&[vec![1, 0], vec![0, 1], vec![1, 1]]));
        assert!(inj.total_kernel().unwrap().is_zero());
        let to_zero = one_cube(Orientation::Covariant, 2, 0, IntegerMatrix::zeros(0, 2));
        assert_eq!(to_zero.total_kernel().unwrap(), GradedGroup::free_in(0, 2));
        assert!(one_cube(Orientation::Contravariant, 2, 0, IntegerMatrix::zeros(2, 0)).total_kernel().is_err());
    }

    #[test]
    fn one_dimensional_cokernels() {
        // B = ℤ ↪ A = ℤ² as a summand
        let split = one_cube(Orientation::Contravariant, 2, 1, IntegerMatrix::from_rows(&[vec![1], vec![0]]));
        assert_eq!(split.total_cokernel().unwrap(), GradedGroup::free_in(0, 1));
        assert!(split.edges_split_injective().unwrap());
        let doubled = one_cube(Orientation::Contravariant, 2, 1, IntegerMatrix::from_rows(&[vec![2], vec![0]]));
        let g = doubled.total_cokernel().unwrap();
        assert_eq!(g.get(0), FgGroup::new(1, [BigInt::from(2)]));
        assert!(!doubled.edges_split_injective().unwrap());
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let vs = vec![free_vertex(0, 1); 4];
        let mut c = GroupCube::new(2, Orientation::Covariant, vs).unwrap();
        let one = IntegerMatrix::from_rows(&[vec![1]]);
        let two = IntegerMatrix::from_rows(&[vec![2]]);
        c.set_edge(0, 0, 0, one.clone()).unwrap();
        c.set_edge(0, 1, 0, one.clone()).unwrap();
        c.set_edge(1, 1, 0, one.clone()).unwrap();
        c.set_edge(2, 0, 0, two).unwrap();
        assert!(matches!(c.total_kernel(), Err(Error::Integrity(_))));
        assert!(c.set_edge(0, 0, 0, IntegerMatrix::zeros(2, 2)).is_err());
    }

    /// Direction i acts by p_i(A) = a_i·I + b_i·A for one random matrix A;
    /// polynomials in A commute, so every square commutes.
    fn random_cube(rng: &mut ChaCha8Rng, k: usize, dim: usize, o: Orientation) -> GroupCube {
        let a: Vec<Vec<i64>> = (0..dim).map(|_| (0..dim).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let polys: Vec<IntegerMatrix> = (0..k)
            .map(|_| {
                let (s, t) = (rng.gen_range(-2i64..=2), rng.gen_range(-2i64..=2));
                let rows: Vec<Vec<i64>> = (0..dim)
                    .map(|i| (0..dim).map(|j| s * (i == j) as i64 + t * a[i][j]).collect())
                    .collect();
                IntegerMatrix::from_rows(&rows)
            })
            .collect();
        let vs = vec![free_vertex(0, dim); 1 << k];
        let mut c = GroupCube::new(k, o, vs).unwrap();
        for mask in 0..1usize << k {
            for i in (0..k).filter(|i| mask & (1 << i) == 0) {
                c.set_edge(mask, i, 0, polys[i].clone()).unwrap();
            }
        }
        c
    }

    #[test]
    fn random_cubes_iterated_equals_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let k = 1 + trial % 4;
            let dim = 1 + rng.gen_range(0..4);
            let cov = random_cube(&mut rng, k, dim, Orientation::Covariant);
            cov.check_functoriality().unwrap();
            cov.total_kernel().unwrap();
            let contra = random_cube(&mut rng, k, dim, Orientation::Contravariant);
            let g = contra.total_cokernel().unwrap();
            let direct = contra.total_cokernel_direct(0).unwrap();
            assert_eq!(g.get(0), direct);
        }
    }

    #[test]
    fn restriction_cube_small() {
        let e = Engine::default();
        let c = build_restriction_cube(&e, 3, 3, 2).unwrap();
        assert!(!c.vertex(0).as_group().is_zero());
        assert!((1..8).all(|m| c.vertex(m).as_group().is_zero()));

        let c = build_restriction_cube(&e, 4, 3, 2).unwrap();
        assert_eq!(c.vertex(0).rank(3), 4);
        assert_eq!(c.vertex(0).rank(4), 3);
        for i in 0..4 {
            assert_eq!(c.vertex(1 << i).as_group(), GradedGroup::free_in(3, 1));
        }
        c.check_functoriality().unwrap();
        assert_eq!(c.total_cokernel().unwrap(), GradedGroup::free_in(4, 3));
    }

    #[test]
    fn total_cokernel_theorem_small() {
        let e = Engine::default();
        for (k, r, n) in [(4, 3, 2), (2, 3, 2), (5, 3, 1), (6, 3, 2), (4, 2, 2), (5, 2, 3)] {
            let rep = verify_totalcokernel_theorem(&e, k, r, n).unwrap();
            assert!(rep.pass, "k={k} r={r} n={n}: {:?}", rep.differences);
        }
        let rep = verify_totalcokernel_theorem(&e, 2, 3, 2).unwrap();
        assert!(rep.total_cokernel.is_zero() && rep.singleton_free_sum.is_zero());
    }

    #[test]
    fn summary_serializes() {
        let e = Engine::default();
        let c = build_restriction_cube(&e, 3, 3, 2).unwrap();
        let v = serde_json::to_value(c.summary()).unwrap();
        assert_eq!(v["orientation"], "contravariant");
        assert_eq!(v["vertices"].as_array().unwrap().len(), 8);
    }
}
