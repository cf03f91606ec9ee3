//! Exact integer matrices and Smith normal form.
//!
//! Two engines share one coefficient abstraction:
//!
//! * a sparse column reducer (the persistence-style "low pivot" reduction
//!   run over ℤ with unimodular column operations). When every surviving
//!   pivot is ±1 the reduced matrix contains a unit-triangular minor of
//!   full rank, so all invariant factors are 1 and no further work is
//!   needed. Otherwise the reduced columns are handed to a general sparse
//!   Smith solver.
//! * a dense Smith decomposition `U·A·V = D` with transforms, used for
//!   small matrices and for quotient bookkeeping.
//!
//! Both try machine words first and redo the work with big integers on
//! overflow, so results are exact regardless of coefficient growth.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Ring operations needed by the reducers. Fallible operations return
/// `None` on machine-word overflow.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn from_i64(v: i64) -> Self;
    fn nil() -> Self;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Truncated quotient.
    fn quot(&self, o: &Self) -> Option<Self>;
    fn is_multiple_of(&self, o: &Self) -> bool;
    fn abs_lt(&self, o: &Self) -> bool;
    /// `(g, s, t)` with `s·self + t·o = g = gcd > 0`.
    fn ext_gcd(&self, o: &Self) -> Option<(Self, Self, Self)>;
    fn to_bigint(&self) -> BigInt;
}

impl Coeff for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn nil() -> Self {
        0
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn quot(&self, o: &Self) -> Option<Self> {
        self.checked_div(*o)
    }
    fn is_multiple_of(&self, o: &Self) -> bool {
        match self.checked_rem(*o) {
            Some(r) => r == 0,
            None => *o == -1,
        }
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.unsigned_abs() < o.unsigned_abs()
    }
    fn ext_gcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        let (a, b) = (*self as i128, *o as i128);
        let e = a.extended_gcd(&b);
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g < 0 {
            g = -g;
            s = -s;
            t = -t;
        }
        Some((g.try_into().ok()?, s.try_into().ok()?, t.try_into().ok()?))
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn nil() -> Self {
        Zero::zero()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn quot(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn is_multiple_of(&self, o: &Self) -> bool {
        Zero::is_zero(&(self % o))
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.magnitude() < o.magnitude()
    }
    fn ext_gcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        let e = self.extended_gcd(o);
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if Signed::is_negative(&g) {
            g = -g;
            s = -s;
            t = -t;
        }
        Some((g, s, t))
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Sparse column: `(row, value)` pairs sorted by row, no explicit zeros.
pub type SparseColumn<C> = Vec<(u32, C)>;

/// Marker for machine-word overflow; the caller retries with big integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

/// An integer matrix stored column-sparse with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, BigInt)>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.columns[i].push((i as u32, BigInt::one()));
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                let v: BigInt = v.clone().into();
                if !Zero::is_zero(&v) {
                    m.columns[j].push((i as u32, v));
                }
            }
        }
        m
    }

    /// Builds from sparse columns; entries are sorted and zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, BigInt)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|mut c| {
                c.sort_by_key(|e| e.0);
                let mut out: Vec<(u32, BigInt)> = Vec::with_capacity(c.len());
                for (r, v) in c {
                    assert!(r < rows, "row index out of range");
                    match out.last_mut() {
                        Some(last) if last.0 as usize == r => last.1 += v,
                        _ => out.push((r as u32, v)),
                    }
                }
                out.retain(|e| !Zero::is_zero(&e.1));
                out
            })
            .collect();
        IntegerMatrix { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(u32, BigInt)] {
        &self.columns[j]
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.columns[j]
            .binary_search_by_key(&(i as u32), |e| e.0)
            .map(|p| self.columns[j][p].1.clone())
            .unwrap_or_else(|_| <BigInt as Zero>::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![<BigInt as Zero>::zero(); self.cols]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c {
                out[*i as usize][j] = v.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c {
                cols[*i as usize].push((j as u32, v.clone()));
            }
        }
        IntegerMatrix {
            rows: self.cols,
            cols: self.rows,
            columns: cols,
        }
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let columns = other
            .columns
            .iter()
            .map(|oc| {
                let mut acc: HashMap<u32, BigInt> = HashMap::new();
                for (k, b) in oc {
                    for (i, a) in &self.columns[*k as usize] {
                        *acc.entry(*i).or_insert_with(<BigInt as Zero>::zero) += a * b;
                    }
                }
                let mut col: Vec<(u32, BigInt)> =
                    acc.into_iter().filter(|(_, v)| !Zero::is_zero(v)).collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect();
        IntegerMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        }
    }

    /// Columns side by side (same row count).
    pub fn hconcat(blocks: &[&IntegerMatrix], rows: usize) -> IntegerMatrix {
        let mut columns = Vec::new();
        for b in blocks {
            assert_eq!(b.rows, rows, "row mismatch in concatenation");
            columns.extend(b.columns.iter().cloned());
        }
        IntegerMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    /// Rows stacked (same column count).
    pub fn vconcat(blocks: &[&IntegerMatrix], cols: usize) -> IntegerMatrix {
        let mut columns: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); cols];
        let mut offset = 0u32;
        for b in blocks {
            assert_eq!(b.cols, cols, "column mismatch in stacking");
            for (j, c) in b.columns.iter().enumerate() {
                columns[j].extend(c.iter().map(|(i, v)| (i + offset, v.clone())));
            }
            offset += b.rows as u32;
        }
        IntegerMatrix {
            rows: offset as usize,
            cols,
            columns,
        }
    }

    fn to_columns<C: Coeff>(&self, conv: impl Fn(&BigInt) -> Option<C>) -> Option<Vec<SparseColumn<C>>> {
        self.columns
            .iter()
            .map(|c| c.iter().map(|(i, v)| conv(v).map(|x| (*i, x))).collect())
            .collect()
    }
}

/// Rank and invariant factors (only those greater than 1, ascending,
/// each dividing the next).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmithForm {
    pub rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    /// Number of invariant factors equal to 1.
    pub fn unit_factors(&self) -> usize {
        self.rank - self.invariant_factors.len()
    }
}

/// Smith normal form of an integer matrix.
///
/// The result is cross-checked against an independent rank computation
/// modulo a large prime; a disagreement is a bug and panics.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let snf = smith_unverified(m);
    let p = rank_mod_prime(m, LARGE_PRIME);
    let dropped = snf
        .invariant_factors
        .iter()
        .filter(|d| Zero::is_zero(&(*d % BigInt::from(LARGE_PRIME))))
        .count();
    assert_eq!(
        p,
        snf.rank - dropped,
        "Smith form failed its modular rank certificate"
    );
    snf
}

pub(crate) fn smith_unverified(m: &IntegerMatrix) -> SmithForm {
    let small = m.to_columns(|v| v.to_i64());
    if let Some(cols) = small {
        if let Ok(red) = reduce_columns(m.rows, cols.into_iter().enumerate().map(|(j, c)| (j as u32, c))) {
            return red.smith(m.rows);
        }
    }
    let cols = m.to_columns(|v| Some(v.clone())).expect("big integers always convert");
    let red = reduce_columns(m.rows, cols.into_iter().enumerate().map(|(j, c)| (j as u32, c)))
        .expect("big integer arithmetic cannot overflow");
    red.smith(m.rows)
}

pub(crate) const LARGE_PRIME: u64 = 2_147_483_647;

/// A reduced pivot column.
#[derive(Debug, Clone)]
pub(crate) struct Pivot {
    pub low: u32,
    pub unit: bool,
}

/// Output of [`reduce_columns`]: the nonzero columns of `R = A·V` with
/// pairwise distinct lowest rows, `V` unimodular.
#[derive(Debug)]
pub(crate) struct Reduction<C> {
    pub pivots: Vec<Pivot>,
    pub columns: Vec<SparseColumn<C>>,
}

impl<C: Coeff> Reduction<C> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn all_units(&self) -> bool {
        self.pivots.iter().all(|p| p.unit)
    }

    /// Completes the Smith form. With all-unit pivots the factors are all 1.
    pub fn smith(self, rows: usize) -> SmithForm {
        if self.all_units() {
            return SmithForm {
                rank: self.rank(),
                invariant_factors: Vec::new(),
            };
        }
        let cols: Vec<SparseColumn<BigInt>> = self
            .columns
            .into_iter()
            .map(|c| c.into_iter().map(|(i, v)| (i, v.to_bigint())).collect())
            .collect();
        sparse_smith(rows, cols)
    }
}

/// `a - q·b` on sorted sparse columns.
fn axpy<C: Coeff>(a: &[(u32, C)], q: &C, b: &[(u32, C)]) -> Result<SparseColumn<C>, Overflow> {
    lincomb(&C::from_i64(1), a, &q.neg().ok_or(Overflow)?, b)
}

/// `s·a + t·b` on sorted sparse columns.
fn lincomb<C: Coeff>(s: &C, a: &[(u32, C)], t: &C, b: &[(u32, C)]) -> Result<SparseColumn<C>, Overflow> {
    let one = C::from_i64(1);
    let scale = |x: &C, f: &C| if *f == one { Some(x.clone()) } else { x.mul(f) };
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            let v = scale(&a[i].1, s).ok_or(Overflow)?;
            if !v.is_nil() {
                out.push((a[i].0, v));
            }
            i += 1;
        } else if take_b {
            let v = scale(&b[j].1, t).ok_or(Overflow)?;
            if !v.is_nil() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = scale(&a[i].1, s)
                .and_then(|x| scale(&b[j].1, t).and_then(|y| x.add(&y)))
                .ok_or(Overflow)?;
            if !v.is_nil() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

const NO_PIVOT: u32 = u32::MAX;

/// Low-pivot column reduction over ℤ.
///
/// Each incoming column is reduced against the stored pivots until it is
/// zero or its lowest row is new. When the stored pivot does not divide the
/// incoming entry, the two columns are replaced by a unimodular 2×2
/// combination: one keeps the gcd at the low row, the other loses it.
pub(crate) fn reduce_columns<C: Coeff>(
    rows: usize,
    columns: impl Iterator<Item = (u32, SparseColumn<C>)>,
) -> Result<Reduction<C>, Overflow> {
    let mut pivot_at = vec![NO_PIVOT; rows];
    let mut stored: Vec<SparseColumn<C>> = Vec::new();
    for (_, mut col) in columns {
        while let Some((low, a)) = col.last().cloned() {
            let slot = pivot_at[low as usize];
            if slot == NO_PIVOT {
                pivot_at[low as usize] = stored.len() as u32;
                stored.push(col);
                break;
            }
            let piv = &stored[slot as usize];
            let b = &piv.last().expect("stored pivots are nonzero").1;
            if a.is_multiple_of(b) {
                let q = a.quot(b).ok_or(Overflow)?;
                col = axpy(&col, &q, piv)?;
            } else {
                let (g, s, t) = b.ext_gcd(&a).ok_or(Overflow)?;
                let a_g = a.quot(&g).ok_or(Overflow)?;
                let b_g = b.quot(&g).ok_or(Overflow)?;
                let new_piv = lincomb(&s, piv, &t, &col)?;
                let new_col = lincomb(&a_g, piv, &b_g.neg().ok_or(Overflow)?, &col)?;
                debug_assert!(new_col.last().is_none_or(|e| e.0 < low));
                stored[slot as usize] = new_piv;
                col = new_col;
            }
        }
    }
    let pivots = stored
        .iter()
        .map(|c| {
            let (low, v) = c.last().expect("nonzero");
            Pivot {
                low: *low,
                unit: v.is_unit(),
            }
        })
        .collect();
    Ok(Reduction {
        pivots,
        columns: stored,
    })
}

/// General sparse Smith form of columns with pairwise distinct lowest rows
/// (the output of [`reduce_columns`]).
///
/// Columns whose lowest entry is a unit are eliminated first, in order of
/// that row; eliminating one only touches rows above the others' lows, so
/// those lows and their values are stable. Remaining unit entries are then
/// eliminated by lowest Markowitz cost and the leftover block is finished
/// densely.
pub(crate) fn sparse_smith(rows: usize, columns: Vec<SparseColumn<BigInt>>) -> SmithForm {
    let mut by_low: Vec<(u32, u32)> = columns
        .iter()
        .enumerate()
        .filter_map(|(j, c)| c.last().filter(|e| e.1.magnitude().is_one()).map(|e| (e.0, j as u32)))
        .collect();
    by_low.sort_unstable();
    let mut elim = SparseElim::new(rows, columns);
    for (low, j) in by_low {
        elim.eliminate(j, low);
    }
    loop {
        let mut best: Option<(usize, u32, u32)> = None;
        for (j, c) in elim.cols.iter().enumerate() {
            let Some(c) = c else { continue };
            for (i, v) in c {
                if v.magnitude().is_one() {
                    let cost = (c.len() - 1) * (elim.row_members[*i as usize].len() - 1);
                    if best.is_none_or(|b| (cost, j as u32, *i) < b) {
                        best = Some((cost, j as u32, *i));
                    }
                }
            }
        }
        let Some((_, pj, pi)) = best else { break };
        elim.eliminate(pj, pi);
    }
    let units = elim.units;
    let live: Vec<HashMap<u32, BigInt>> = elim.cols.into_iter().flatten().filter(|c| !c.is_empty()).collect();
    let mut used_rows: Vec<u32> = live.iter().flat_map(|c| c.keys().copied()).collect();
    used_rows.sort_unstable();
    used_rows.dedup();
    let row_pos: HashMap<u32, usize> = used_rows.iter().enumerate().map(|(p, r)| (*r, p)).collect();
    let mut dense = vec![vec![<BigInt as Zero>::zero(); live.len()]; used_rows.len()];
    for (j, c) in live.iter().enumerate() {
        for (i, v) in c {
            dense[row_pos[i]][j] = v.clone();
        }
    }
    let rest = dense_smith_values(dense);
    SmithForm {
        rank: units + rest.len(),
        invariant_factors: rest.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

struct SparseElim {
    cols: Vec<Option<HashMap<u32, BigInt>>>,
    row_members: Vec<BTreeSet<u32>>,
    units: usize,
}

impl SparseElim {
    fn new(rows: usize, columns: Vec<SparseColumn<BigInt>>) -> Self {
        let mut row_members: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); rows];
        for (j, c) in columns.iter().enumerate() {
            for (i, _) in c {
                row_members[*i as usize].insert(j as u32);
            }
        }
        let cols = columns.into_iter().map(|c| Some(c.into_iter().collect())).collect();
        SparseElim {
            cols,
            row_members,
            units: 0,
        }
    }

    /// Removes column `pj` and row `pi` through the unit entry at `(pi, pj)`.
    fn eliminate(&mut self, pj: u32, pi: u32) {
        let pivot_col = self.cols[pj as usize].take().expect("live column");
        let u = pivot_col[&pi].clone();
        for i in pivot_col.keys() {
            self.row_members[*i as usize].remove(&pj);
        }
        let others: Vec<u32> = self.row_members[pi as usize].iter().copied().collect();
        for oj in others {
            let col = self.cols[oj as usize].as_mut().expect("live column");
            // u = ±1, so a/u = a·u
            let q = &col[&pi] * &u;
            for (i, v) in &pivot_col {
                let e = col.entry(*i).or_insert_with(<BigInt as Zero>::zero);
                let was_zero = Zero::is_zero(e);
                *e -= &q * v;
                if Zero::is_zero(e) {
                    col.remove(i);
                    self.row_members[*i as usize].remove(&oj);
                } else if was_zero {
                    self.row_members[*i as usize].insert(oj);
                }
            }
        }
        self.units += 1;
    }
}

/// Rank over `F_p` by an independent Gaussian elimination.
pub fn rank_mod_prime(m: &IntegerMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut pivot_at: HashMap<u32, Vec<(u32, u64)>> = HashMap::new();
    let mut rank = 0;
    let inv = |a: u64| pow_mod(a, p - 2, p);
    for c in &m.columns {
        let mut col: Vec<(u32, u64)> = c
            .iter()
            .filter_map(|(i, v)| {
                let r = v.mod_floor(&pb).to_u64().expect("reduced mod p");
                (r != 0).then_some((*i, r))
            })
            .collect();
        while let Some(&(low, a)) = col.last() {
            match pivot_at.get(&low) {
                None => {
                    let s = inv(a);
                    let normalized = col.iter().map(|&(i, v)| (i, v * s % p)).collect();
                    pivot_at.insert(low, normalized);
                    rank += 1;
                    break;
                }
                Some(piv) => {
                    // col -= a·piv (piv normalized to 1 at low)
                    let mut out = Vec::with_capacity(col.len() + piv.len());
                    let (mut x, mut y) = (0, 0);
                    while x < col.len() || y < piv.len() {
                        if y >= piv.len() || (x < col.len() && col[x].0 < piv[y].0) {
                            out.push(col[x]);
                            x += 1;
                        } else if x >= col.len() || piv[y].0 < col[x].0 {
                            out.push((piv[y].0, (p - a * piv[y].1 % p) % p));
                            y += 1;
                        } else {
                            let v = (col[x].1 + p - a * piv[y].1 % p) % p;
                            if v != 0 {
                                out.push((col[x].0, v));
                            }
                            x += 1;
                            y += 1;
                        }
                    }
                    col = out;
                }
            }
        }
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Dense Smith decomposition `U·A·V = D` with `U⁻¹` kept alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub diagonal: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub u_inv: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

/// Dense Smith decomposition with transforms.
pub fn smith_decomposition(a: &[Vec<BigInt>], cols: usize) -> SmithDecomposition {
    let small: Option<Vec<Vec<i64>>> = a
        .iter()
        .map(|row| row.iter().map(|v| v.to_i64()).collect())
        .collect();
    if let Some(s) = small {
        if let Ok(d) = DenseSmith::run(s, cols, true) {
            return d.into_decomposition();
        }
    }
    DenseSmith::run(a.to_vec(), cols, true)
        .expect("big integer arithmetic cannot overflow")
        .into_decomposition()
}

/// Diagonal of the dense Smith form only.
pub(crate) fn dense_smith_values(a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let cols = a.first().map_or(0, Vec::len);
    let small: Option<Vec<Vec<i64>>> = a
        .iter()
        .map(|row| row.iter().map(|v| v.to_i64()).collect())
        .collect();
    if let Some(s) = small {
        if let Ok(d) = DenseSmith::run(s, cols, false) {
            return d.diagonal.iter().map(Coeff::to_bigint).collect();
        }
    }
    DenseSmith::run(a, cols, false)
        .expect("big integer arithmetic cannot overflow")
        .diagonal
}

struct DenseSmith<C> {
    a: Vec<Vec<C>>,
    rows: usize,
    cols: usize,
    u: Option<Vec<Vec<C>>>,
    u_inv: Option<Vec<Vec<C>>>,
    v: Option<Vec<Vec<C>>>,
    diagonal: Vec<C>,
}

fn identity<C: Coeff>(n: usize) -> Vec<Vec<C>> {
    (0..n)
        .map(|i| (0..n).map(|j| C::from_i64((i == j) as i64)).collect())
        .collect()
}

impl<C: Coeff> DenseSmith<C> {
    fn run(a: Vec<Vec<C>>, cols: usize, transforms: bool) -> Result<Self, Overflow> {
        let rows = a.len();
        let mut s = DenseSmith {
            a,
            rows,
            cols,
            u: transforms.then(|| identity(rows)),
            u_inv: transforms.then(|| identity(rows)),
            v: transforms.then(|| identity(cols)),
            diagonal: Vec::new(),
        };
        s.solve()?;
        Ok(s)
    }

    /// row_i -= q·row_t (and the matching inverse column update).
    fn row_sub(&mut self, i: usize, t: usize, q: &C) -> Result<(), Overflow> {
        for j in 0..self.cols {
            if !self.a[t][j].is_nil() {
                let d = self.a[t][j].mul(q).ok_or(Overflow)?;
                self.a[i][j] = self.a[i][j].sub(&d).ok_or(Overflow)?;
            }
        }
        if let Some(u) = &mut self.u {
            for j in 0..self.rows {
                if !u[t][j].is_nil() {
                    let d = u[t][j].mul(q).ok_or(Overflow)?;
                    u[i][j] = u[i][j].sub(&d).ok_or(Overflow)?;
                }
            }
        }
        if let Some(ui) = &mut self.u_inv {
            // U⁻¹ ← U⁻¹·E⁻¹ where E⁻¹ adds q·col_i to col_t
            for row in ui.iter_mut() {
                if !row[i].is_nil() {
                    let d = row[i].mul(q).ok_or(Overflow)?;
                    row[t] = row[t].add(&d).ok_or(Overflow)?;
                }
            }
        }
        Ok(())
    }

    /// col_j -= q·col_t.
    fn col_sub(&mut self, j: usize, t: usize, q: &C) -> Result<(), Overflow> {
        for row in self.a.iter_mut() {
            if !row[t].is_nil() {
                let d = row[t].mul(q).ok_or(Overflow)?;
                row[j] = row[j].sub(&d).ok_or(Overflow)?;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[t].is_nil() {
                    let d = row[t].mul(q).ok_or(Overflow)?;
                    row[j] = row[j].sub(&d).ok_or(Overflow)?;
                }
            }
        }
        Ok(())
    }

    fn swap_rows(&mut self, i: usize, t: usize) {
        if i == t {
            return;
        }
        self.a.swap(i, t);
        if let Some(u) = &mut self.u {
            u.swap(i, t);
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row.swap(i, t);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, t: usize) {
        if j == t {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(j, t);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(j, t);
            }
        }
    }

    fn negate_row(&mut self, t: usize) -> Result<(), Overflow> {
        for x in self.a[t].iter_mut() {
            *x = x.neg().ok_or(Overflow)?;
        }
        if let Some(u) = &mut self.u {
            for x in u[t].iter_mut() {
                *x = x.neg().ok_or(Overflow)?;
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row[t] = row[t].neg().ok_or(Overflow)?;
            }
        }
        Ok(())
    }

    fn smallest_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if !x.is_nil() && best.is_none_or(|(bi, bj)| x.abs_lt(&self.a[bi][bj])) {
                    best = Some((i, j));
                    if x.is_unit() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn solve(&mut self) -> Result<(), Overflow> {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.smallest_in(t) else { break };
            self.swap_rows(pi, t);
            self.swap_cols(pj, t);
            loop {
                // clear column t and row t by Euclidean steps
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_nil() {
                        let q = self.a[i][t].quot(&self.a[t][t]).ok_or(Overflow)?;
                        if !q.is_nil() {
                            self.row_sub(i, t, &q)?;
                        }
                        if !self.a[i][t].is_nil() {
                            dirty = true;
                        }
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_nil() {
                        let q = self.a[t][j].quot(&self.a[t][t]).ok_or(Overflow)?;
                        if !q.is_nil() {
                            self.col_sub(j, t, &q)?;
                        }
                        if !self.a[t][j].is_nil() {
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    // move a smaller remainder into the pivot position
                    let mut best = (t, t);
                    for i in t + 1..self.rows {
                        if !self.a[i][t].is_nil() && self.a[i][t].abs_lt(&self.a[best.0][best.1]) {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.cols {
                        if !self.a[t][j].is_nil() && self.a[t][j].abs_lt(&self.a[best.0][best.1]) {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(best.0, t);
                    self.swap_cols(best.1, t);
                    continue;
                }
                // divisibility: the pivot must divide the rest
                let p = self.a[t][t].clone();
                let bad = (t + 1..self.rows).find(|&i| {
                    (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p))
                });
                match bad {
                    Some(i) => {
                        // row_t += row_i
                        let minus_one = C::from_i64(-1);
                        self.row_sub(t, i, &minus_one)?;
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t)?;
            }
            self.diagonal.push(self.a[t][t].clone());
            t += 1;
        }
        Ok(())
    }

    fn into_decomposition(self) -> SmithDecomposition {
        let conv = |m: Option<Vec<Vec<C>>>| -> Vec<Vec<BigInt>> {
            m.expect("transforms requested")
                .into_iter()
                .map(|r| r.iter().map(Coeff::to_bigint).collect())
                .collect()
        };
        SmithDecomposition {
            diagonal: self.diagonal.iter().map(Coeff::to_bigint).collect(),
            u: conv(self.u),
            u_inv: conv(self.u_inv),
            v: conv(self.v),
        }
    }
}

/// A basis of the integer kernel `{x : A·x = 0}` as matrix columns. The
/// basis spans a saturated sublattice.
pub fn kernel_basis(m: &IntegerMatrix) -> IntegerMatrix {
    let d = smith_decomposition(&m.to_dense(), m.cols());
    let rank = d.rank();
    let columns = (rank..m.cols())
        .map(|j| {
            (0..m.cols())
                .filter(|&i| !Zero::is_zero(&d.v[i][j]))
                .map(|i| (i, d.v[i][j].clone()))
                .collect()
        })
        .collect();
    IntegerMatrix::from_columns(m.cols(), columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().zip(b.iter()).map(|(x, brow)| x * &brow[j]).sum())
                    .collect()
            })
            .collect()
    }

    fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// Invariant factors by the determinantal-divisor definition: d_i is
    /// the gcd of all i×i minors divided by the gcd of (i−1)×(i−1) minors.
    fn determinantal_oracle(a: &[Vec<i64>]) -> (usize, Vec<BigInt>) {
        fn det(m: Vec<Vec<BigInt>>) -> BigInt {
            let n = m.len();
            if n == 0 {
                return BigInt::one();
            }
            // cofactor expansion; matrices here are tiny
            let mut acc = <BigInt as Zero>::zero();
            for j in 0..n {
                if Zero::is_zero(&m[0][j]) {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &m[0][j] * det(minor);
                if j % 2 == 0 {
                    acc += term
                } else {
                    acc -= term
                }
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut divisors = vec![BigInt::one()];
        for k in 1..=rows.min(cols) {
            let mut g = <BigInt as Zero>::zero();
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let m: Vec<Vec<BigInt>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| BigInt::from(a[i][j])).collect())
                        .collect();
                    g = g.gcd(&det(m));
                }
            }
            if Zero::is_zero(&g) {
                break;
            }
            divisors.push(g);
        }
        let rank = divisors.len() - 1;
        let factors = (1..=rank)
            .map(|i| &divisors[i] / &divisors[i - 1])
            .filter(|d| !d.is_one())
            .collect();
        (rank, factors)
    }

    #[test]
    fn examples() {
        let z = IntegerMatrix::zeros(3, 4);
        assert_eq!(smith_normal_form(&z), SmithForm::default());

        let d = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 4]]);
        let s = smith_normal_form(&d);
        assert_eq!(s.rank, 2);
        assert_eq!(s.invariant_factors, vec![BigInt::from(2), BigInt::from(4)]);

        let ones = IntegerMatrix::from_rows(&[vec![1, 1, 1, 1]]);
        let s = smith_normal_form(&ones);
        assert_eq!(s.rank, 1);
        assert!(s.invariant_factors.is_empty());
    }

    #[test]
    fn non_diagonal_torsion() {
        // diag(2, 3) is equivalent to diag(1, 6)
        let m = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_normal_form(&m).invariant_factors, vec![BigInt::from(6)]);
        let m = IntegerMatrix::from_rows(&[vec![4, 6], vec![6, 4]]);
        let (rank, f) = determinantal_oracle(&[vec![4, 6], vec![6, 4]]);
        let s = smith_normal_form(&m);
        assert_eq!((s.rank, s.invariant_factors), (rank, f));
    }

    #[test]
    fn big_integer_entries() {
        let huge = BigInt::from(i64::MAX) * BigInt::from(1000);
        let m = IntegerMatrix::from_columns(
            2,
            vec![vec![(0, huge.clone()), (1, BigInt::from(2))], vec![(0, huge.clone() * 2), (1, BigInt::from(4))]],
        );
        let s = smith_normal_form(&m);
        assert_eq!(s.rank, 1);
        let g = huge.gcd(&BigInt::from(2));
        assert_eq!(s.invariant_factors, vec![g]);
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let a = i64::MAX / 3;
        let m = IntegerMatrix::from_rows(&[vec![a, a - 1], vec![a - 7, a]]);
        let snf = smith_normal_form(&m);
        let det = BigInt::from(a) * BigInt::from(a) - BigInt::from(a - 1) * BigInt::from(a - 7);
        assert_eq!(snf.rank, 2);
        let prod: BigInt = snf.invariant_factors.iter().product();
        assert_eq!(prod, det.abs());
    }

    #[test]
    fn decomposition_reconstructs() {
        let a = big(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let d = smith_decomposition(&a, 3);
        assert_eq!(d.diagonal, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let uav = dense_mul(&dense_mul(&d.u, &a), &d.v);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { d.diagonal[i].clone() } else { <BigInt as Zero>::zero() };
                assert_eq!(uav[i][j], expect);
            }
        }
        let id = dense_mul(&d.u, &d.u_inv);
        assert_eq!(id, big(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]));
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = IntegerMatrix::from_rows(&[vec![1, 1, 1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 3);
        assert!(m.mul(&k).is_zero());
        let s = smith_normal_form(&k);
        assert_eq!(s.rank, 3);
        assert!(s.invariant_factors.is_empty(), "kernel basis is saturated");
    }

    fn arb_small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r)
        })
    }

    fn arb_sparse_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=9, 1usize..=9).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                proptest::collection::vec(prop_oneof![6 => Just(0i64), 2 => Just(1), 2 => Just(-1), 1 => -4i64..=4], c),
                r,
            )
        })
    }

    proptest! {
        #[test]
        fn snf_matches_determinantal_divisors(a in arb_small_matrix()) {
            let m = IntegerMatrix::from_rows(&a);
            let s = smith_normal_form(&m);
            let (rank, f) = determinantal_oracle(&a);
            prop_assert_eq!(s.rank, rank);
            prop_assert_eq!(s.invariant_factors, f);
        }

        #[test]
        fn sparse_and_dense_routes_agree(a in arb_sparse_matrix()) {
            let m = IntegerMatrix::from_rows(&a);
            let sparse = smith_normal_form(&m);
            let dense = dense_smith_values(big(&a));
            prop_assert_eq!(sparse.rank, dense.len());
            let f: Vec<BigInt> = dense.into_iter().filter(|d| !d.is_one()).collect();
            prop_assert_eq!(sparse.invariant_factors, f);
        }

        #[test]
        fn decomposition_is_unimodular(a in arb_sparse_matrix()) {
            let cols = a[0].len();
            let ba = big(&a);
            let d = smith_decomposition(&ba, cols);
            let uav = dense_mul(&dense_mul(&d.u, &ba), &d.v);
            for (i, row) in uav.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    let expect = if i == j && i < d.rank() { d.diagonal[i].clone() } else { <BigInt as Zero>::zero() };
                    prop_assert_eq!(x, &expect);
                }
            }
            for w in d.diagonal.windows(2) {
                prop_assert!(Zero::is_zero(&(&w[1] % &w[0])));
            }
            let n = a.len();
            let id = dense_mul(&d.u, &d.u_inv);
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(id[i][j].clone(), BigInt::from((i == j) as i64));
                }
            }
        }
    }
}
