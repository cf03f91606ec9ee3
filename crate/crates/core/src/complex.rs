//! Abstract simplicial complexes with explicitly stored faces, and the order
//! complex of a finite poset.
//!
//! Faces of each dimension are kept as a flat, lexicographically sorted
//! array of vertex-index tuples. Boundary assembly looks faces up by binary
//! search, so every face has a stable index.

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partition::Partition;

/// All faces of one dimension, `width = dim + 1` vertices each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceList {
    width: usize,
    data: Vec<u32>,
}

impl FaceList {
    fn new(width: usize) -> Self {
        FaceList {
            width,
            data: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.data.chunks_exact(self.width)
    }

    /// Index of a face by binary search.
    pub fn position(&self, face: &[u32]) -> Option<usize> {
        debug_assert_eq!(face.len(), self.width);
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(face) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    faces: Vec<FaceList>,
}

impl SimplicialComplex {
    /// The complex with no vertices (dimension −1).
    pub fn empty() -> Self {
        SimplicialComplex {
            vertices: Vec::new(),
            faces: Vec::new(),
        }
    }

    /// Closes a list of faces (vertex indices into `vertices`) under subsets.
    pub fn from_faces(vertices: Vec<String>, faces: &[Vec<usize>]) -> Result<Self> {
        let mut by_dim: Vec<Vec<Vec<u32>>> = Vec::new();
        for f in faces {
            let mut f: Vec<u32> = f.iter().map(|&v| v as u32).collect();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                continue;
            }
            if f.iter().any(|&v| v as usize >= vertices.len()) {
                return Err(Error::usage("face refers to an unknown vertex"));
            }
            let n = f.len();
            for mask in 1u64..(1u64 << n) {
                let sub: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                let d = sub.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize_with(d + 1, Vec::new);
                }
                by_dim[d].push(sub);
            }
        }
        if by_dim.is_empty() && !vertices.is_empty() {
            by_dim.push(Vec::new());
        }
        // every listed vertex is a 0-face
        if let Some(zero) = by_dim.first_mut() {
            zero.extend((0..vertices.len() as u32).map(|v| vec![v]));
        }
        let faces = by_dim
            .into_iter()
            .enumerate()
            .map(|(d, mut list)| {
                list.sort_unstable();
                list.dedup();
                let mut fl = FaceList::new(d + 1);
                for f in list {
                    fl.data.extend(f);
                }
                fl
            })
            .collect();
        Ok(SimplicialComplex { vertices, faces })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    /// −1 for the empty complex.
    pub fn dimension(&self) -> i64 {
        self.faces.len() as i64 - 1
    }

    pub fn faces(&self, dim: usize) -> Option<&FaceList> {
        self.faces.get(dim)
    }

    pub fn face_count(&self, dim: usize) -> usize {
        self.faces.get(dim).map_or(0, FaceList::len)
    }

    pub fn total_faces(&self) -> usize {
        self.faces.iter().map(FaceList::len).sum()
    }

    pub fn face_vector(&self) -> Vec<u64> {
        self.faces.iter().map(|f| f.len() as u64).collect()
    }

    /// `−1 + Σ_d (−1)^d f_d`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .fold(-1i64, |acc, (d, f)| if d % 2 == 0 { acc + f.len() as i64 } else { acc - f.len() as i64 })
    }

    /// Every stored face has all of its codimension-one faces stored.
    pub fn is_closed(&self) -> bool {
        let mut buf = Vec::new();
        for d in 1..self.faces.len() {
            for f in self.faces[d].iter() {
                for skip in 0..f.len() {
                    buf.clear();
                    buf.extend(f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                    if self.faces[d - 1].position(&buf).is_none() {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("complex serializes")
    }
}

struct FacesByDim<'a>(&'a [FaceList]);

impl Serialize for FacesByDim<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (d, list) in self.0.iter().enumerate() {
            let faces: Vec<&[u32]> = list.iter().collect();
            map.serialize_entry(&d.to_string(), &faces)?;
        }
        map.end()
    }
}

impl Serialize for SimplicialComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SimplicialComplex", 2)?;
        s.serialize_field("vertices", &self.vertices)?;
        s.serialize_field("faces", &FacesByDim(&self.faces))?;
        s.end()
    }
}

/// Order complex of `elements` under `less`, a strict partial order on
/// element indices. Simplices are exactly the chains.
pub fn order_complex_by(
    labels: Vec<String>,
    less: impl Fn(usize, usize) -> bool,
    limits: &Limits,
) -> Result<SimplicialComplex> {
    let n = labels.len();
    if n == 0 {
        return Ok(SimplicialComplex {
            vertices: labels,
            faces: Vec::new(),
        });
    }
    if n >= u32::MAX as usize {
        return Err(Error::SizeGuard {
            what: "order complex vertices",
            value: n,
            bound: u32::MAX as usize - 1,
        });
    }
    let words = n.div_ceil(64);
    // comparable[i]: bitset of j > i comparable with i
    let mut comparable = vec![0u64; n * words];
    for i in 0..n {
        for j in i + 1..n {
            if less(i, j) || less(j, i) {
                comparable[i * words + j / 64] |= 1 << (j % 64);
            }
        }
    }
    let mut builder = ChainBuilder {
        words,
        comparable: &comparable,
        faces: vec![FaceList::new(1)],
        chain: Vec::new(),
        total: 0,
        max_faces: limits.max_faces,
        scratch: Vec::new(),
    };
    let mut all = vec![0u64; words];
    for j in 0..n {
        all[j / 64] |= 1 << (j % 64);
    }
    builder.extend(&all, 0)?;
    Ok(SimplicialComplex {
        vertices: labels,
        faces: builder.faces,
    })
}

struct ChainBuilder<'a> {
    words: usize,
    comparable: &'a [u64],
    faces: Vec<FaceList>,
    chain: Vec<u32>,
    total: usize,
    max_faces: usize,
    /// Candidate bitsets, one per depth, reused across branches.
    scratch: Vec<Vec<u64>>,
}

impl ChainBuilder<'_> {
    /// Depth-first extension by candidates in increasing order, which emits
    /// each dimension's faces in lexicographic order.
    fn extend(&mut self, candidates: &[u64], depth: usize) -> Result<()> {
        if self.scratch.len() <= depth {
            self.scratch.push(vec![0u64; self.words]);
        }
        for w in 0..self.words {
            let mut bits = candidates[w];
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let v = w * 64 + b;
                self.chain.push(v as u32);
                self.total += 1;
                if self.total > self.max_faces {
                    return Err(Error::SizeGuard {
                        what: "order complex face count",
                        value: self.total,
                        bound: self.max_faces,
                    });
                }
                let d = self.chain.len() - 1;
                if self.faces.len() <= d {
                    self.faces.push(FaceList::new(d + 1));
                }
                self.faces[d].data.extend_from_slice(&self.chain);

                let row = &self.comparable[v * self.words..(v + 1) * self.words];
                let mut next = std::mem::take(&mut self.scratch[depth]);
                let mut any = false;
                for x in 0..self.words {
                    next[x] = candidates[x] & row[x];
                    any |= next[x] != 0;
                }
                if any {
                    self.extend(&next, depth + 1)?;
                }
                self.scratch[depth] = next;
                self.chain.pop();
            }
        }
        Ok(())
    }
}

/// Order complex of partitions under strict refinement.
pub fn order_complex(elements: &[Partition]) -> Result<SimplicialComplex> {
    order_complex_with(elements, &Limits::default())
}

pub fn order_complex_with(elements: &[Partition], limits: &Limits) -> Result<SimplicialComplex> {
    let labels = elements.iter().map(Partition::to_string).collect();
    order_complex_by(
        labels,
        |i, j| i != j && elements[i].refines_unchecked(&elements[j]),
        limits,
    )
}

pub fn face_vector(c: &SimplicialComplex) -> Vec<u64> {
    c.face_vector()
}

pub fn reduced_euler_characteristic(c: &SimplicialComplex) -> i64 {
    c.reduced_euler_characteristic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::RLattice;

    fn full_interval(k: usize, r: usize) -> Vec<Partition> {
        let lat = RLattice::new(k, r).unwrap();
        lat.open_interval(lat.bottom(), lat.top().unwrap()).unwrap()
    }

    /// Brute-force chain enumeration: every subset of the elements that is
    /// pairwise comparable, grouped by size.
    fn chain_counts(elements: &[Partition]) -> Vec<u64> {
        let n = elements.len();
        let cmp = |i: usize, j: usize| {
            elements[i].refines(&elements[j]).unwrap() || elements[j].refines(&elements[i]).unwrap()
        };
        let mut counts = Vec::new();
        let mut stack: Vec<(Vec<usize>, usize)> = (0..n).map(|i| (vec![i], i + 1)).collect();
        while let Some((chain, from)) = stack.pop() {
            if counts.len() < chain.len() {
                counts.resize(chain.len(), 0);
            }
            counts[chain.len() - 1] += 1;
            for j in from..n {
                if chain.iter().all(|&i| cmp(i, j)) {
                    let mut c = chain.clone();
                    c.push(j);
                    stack.push((c, j + 1));
                }
            }
        }
        counts
    }

    #[test]
    fn antichain_of_fig1() {
        let c = order_complex(&full_interval(4, 3)).unwrap();
        assert_eq!(c.vertices().len(), 4);
        assert_eq!(c.dimension(), 0);
        assert_eq!(face_vector(&c), vec![4]);
        assert_eq!(reduced_euler_characteristic(&c), 3);
    }

    #[test]
    fn empty_complex() {
        let c = order_complex(&[]).unwrap();
        assert_eq!(c.dimension(), -1);
        assert!(face_vector(&c).is_empty());
        assert_eq!(reduced_euler_characteristic(&c), -1);
        assert_eq!(c, SimplicialComplex::empty());
    }

    #[test]
    fn filled_triangle_is_contractible() {
        let c = SimplicialComplex::from_faces(
            vec!["a".into(), "b".into(), "c".into()],
            &[vec![0, 1, 2]],
        )
        .unwrap();
        assert_eq!(face_vector(&c), vec![3, 3, 1]);
        assert_eq!(reduced_euler_characteristic(&c), 0);
        assert!(c.is_closed());
    }

    #[test]
    fn pi53_interval_is_a_graph() {
        let els = full_interval(5, 3);
        let c = order_complex(&els).unwrap();
        let oracle = chain_counts(&els);
        assert_eq!(oracle, vec![15, 20]);
        assert_eq!(face_vector(&c), oracle);
        assert_eq!(c.dimension(), 1);
        // each 3-block element lies under exactly two 4-block elements
        for x in els.iter().filter(|x| x.block_sizes().contains(&3)) {
            let ups = els.iter().filter(|y| *y != x && x.refines(y).unwrap()).count();
            assert_eq!(ups, 2);
        }
    }

    #[test]
    fn faces_are_exactly_chains() {
        for k in 2..=7 {
            for r in 2..=4 {
                let lat = RLattice::new(k, r).unwrap();
                let els = lat.elements();
                // every interval (x, y) with x < y
                let step = if k >= 6 { 7 } else { 1 };
                for i in (0..els.len()).step_by(step) {
                    for j in (i + 1..els.len()).step_by(step) {
                        if !lat.leq(i, j) {
                            continue;
                        }
                        let mid = lat.open_interval(&els[i], &els[j]).unwrap();
                        if mid.len() > 60 {
                            continue;
                        }
                        let c = order_complex(&mid).unwrap();
                        assert!(c.is_closed());
                        assert_eq!(c.face_vector(), chain_counts(&mid));
                    }
                }
            }
        }
    }

    #[test]
    fn faces_are_sorted_and_unique() {
        let c = order_complex(&full_interval(6, 2)).unwrap();
        assert_eq!(c.face_vector(), vec![201, 1865, 4245, 2700]);
        for d in 0..=c.dimension() as usize {
            let f = c.faces(d).unwrap();
            for i in 1..f.len() {
                assert!(f.get(i - 1) < f.get(i));
            }
            for face in f.iter() {
                assert!(face.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn face_guard_refuses() {
        let limits = Limits {
            max_faces: 100,
            ..Limits::default()
        };
        let err = order_complex_with(&full_interval(6, 2), &limits).unwrap_err();
        assert!(err.is_guard());
    }

    #[test]
    fn json_dump_shape() {
        let c = SimplicialComplex::from_faces(vec!["a".into(), "b".into()], &[vec![0, 1]]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"vertices":["a","b"],"faces":{"0":[[0],[1]],"1":[[0,1]]}}"#);
    }
}
