//! Face lattices of polytopes and the flag vectors read off them.
//!
//! Every lattice here is atomic, so a face is stored as the set of vertices
//! it contains and the order relation is plain set inclusion. The pyramid,
//! prism and product constructors build vertex sets directly, without going
//! through coordinates.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::hull::FacetDescription;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("face lattice is not graded: {0}")]
    NotGraded(String),
    #[error("a 0-dimensional polytope must have exactly one point, got {0}")]
    BadPoint(usize),
    #[error("malformed flag vector: {0}")]
    Parse(String),
}

/// Graded lattice of faces from the empty face (dim -1) to the polytope
/// (dim `d`).
#[derive(Clone, PartialEq, Eq)]
pub struct FaceLattice {
    d: usize,
    num_vertices: usize,
    /// `levels[k]` holds the faces of dimension `k - 1`, sorted.
    levels: Vec<Vec<BitSet>>,
}

impl fmt::Debug for FaceLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FaceLattice(d={}, counts={:?})", self.d, self.face_counts())
    }
}

impl FaceLattice {
    fn from_levels(d: usize, num_vertices: usize, mut levels: Vec<Vec<BitSet>>) -> Self {
        for l in &mut levels {
            l.sort();
        }
        FaceLattice {
            d,
            num_vertices,
            levels,
        }
    }

    /// The lattice of a single point.
    pub fn point() -> Self {
        Self::from_levels(0, 1, vec![vec![BitSet::new(1)], vec![BitSet::full(1)]])
    }

    /// The lattice of a segment.
    pub fn segment() -> Self {
        Self::point().pyramid()
    }

    pub fn triangle() -> Self {
        Self::point().pyramid().pyramid()
    }

    pub fn square() -> Self {
        Self::segment().prism()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Faces of dimension `k` (`-1 <= k <= d`).
    pub fn faces_of_dim(&self, k: isize) -> &[BitSet] {
        &self.levels[(k + 1) as usize]
    }

    /// Number of faces by dimension, from -1 up to `d`.
    pub fn face_counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// All faces as `(dim, vertex set)`, by ascending dimension. The position
    /// in this iteration is the face id.
    pub fn faces(&self) -> impl Iterator<Item = (isize, &BitSet)> {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(k, l)| l.iter().map(move |f| (k as isize - 1, f)))
    }

    pub fn num_faces(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Face order: `a <= b` iff the vertex set of `a` is inside that of `b`.
    pub fn leq(&self, a: &BitSet, b: &BitSet) -> bool {
        a.is_subset(b)
    }

    /// Builds the face lattice of a full-dimensional polytope of dimension
    /// `d` from its vertex–facet incidences.
    ///
    /// Points that are not vertices (their closure is more than themselves)
    /// are dropped; vertices are renumbered in their original order. Faces
    /// are grown level by level from the vertices: the covers of a face `F`
    /// are the inclusion-minimal closures of `F + v`.
    pub fn from_incidence(fd: &FacetDescription, d: usize) -> Result<Self, LatticeError> {
        if d == 0 {
            if fd.num_points != 1 {
                return Err(LatticeError::BadPoint(fd.num_points));
            }
            return Ok(Self::point());
        }
        let n = fd.num_points;
        let all = BitSet::full(n);
        let closure = |s: &BitSet, facets: &[BitSet], full: &BitSet| -> BitSet {
            let mut c = full.clone();
            for f in facets {
                if s.is_subset(f) {
                    c.intersect_with(f);
                }
            }
            c
        };

        let vertices: Vec<usize> = (0..n)
            .filter(|&i| closure(&BitSet::from_indices(n, [i]), &fd.incidence, &all).len() == 1)
            .collect();
        let nv = vertices.len();
        let facets: Vec<BitSet> = fd
            .incidence
            .iter()
            .map(|f| {
                BitSet::from_indices(
                    nv,
                    vertices.iter().enumerate().filter(|(_, &p)| f.contains(p)).map(|(i, _)| i),
                )
            })
            .collect();
        let full = BitSet::full(nv);

        let mut seen: HashMap<BitSet, usize> = HashMap::new();
        let mut levels: Vec<Vec<BitSet>> = vec![vec![BitSet::new(nv)]];
        let vertex_level: Vec<BitSet> = (0..nv).map(|i| BitSet::from_indices(nv, [i])).collect();
        for v in &vertex_level {
            seen.insert(v.clone(), 0);
        }
        levels.push(vertex_level);

        for k in 0..d - 1 {
            let mut next: Vec<BitSet> = Vec::new();
            for face in &levels[k + 1] {
                let mut candidates: Vec<BitSet> = Vec::new();
                for v in 0..nv {
                    if face.contains(v) {
                        continue;
                    }
                    let mut s = face.clone();
                    s.insert(v);
                    let c = closure(&s, &facets, &full);
                    if !candidates.contains(&c) {
                        candidates.push(c);
                    }
                }
                for c in &candidates {
                    if candidates.iter().any(|o| o != c && o.is_subset(c)) {
                        continue;
                    }
                    if *c == full {
                        return Err(LatticeError::NotGraded(format!(
                            "the whole polytope covers a face of dimension {k}"
                        )));
                    }
                    match seen.get(c) {
                        Some(&dim) if dim != k + 1 => {
                            return Err(LatticeError::NotGraded(format!(
                                "face {c:?} reached at dimensions {dim} and {}",
                                k + 1
                            )))
                        }
                        Some(_) => {}
                        None => {
                            seen.insert(c.clone(), k + 1);
                            next.push(c.clone());
                        }
                    }
                }
            }
            levels.push(next);
        }

        let facet_sets: HashSet<&BitSet> = facets.iter().collect();
        let top: HashSet<&BitSet> = levels[d].iter().collect();
        if facet_sets != top {
            return Err(LatticeError::NotGraded(format!(
                "{} faces of dimension {} but {} facets",
                top.len(),
                d - 1,
                facet_sets.len()
            )));
        }
        levels.push(vec![full]);
        Ok(Self::from_levels(d, nv, levels))
    }

    /// The pyramid `C X`: every face `F` survives and gains a cone
    /// `F + apex` one dimension up.
    pub fn pyramid(&self) -> Self {
        let nv = self.num_vertices + 1;
        let apex = self.num_vertices;
        let widen = |f: &BitSet| BitSet::from_indices(nv, f.iter());
        let mut levels: Vec<Vec<BitSet>> = vec![Vec::new(); self.d + 3];
        for (k, level) in self.levels.iter().enumerate() {
            for f in level {
                let base = widen(f);
                let mut cone = base.clone();
                cone.insert(apex);
                levels[k].push(base);
                levels[k + 1].push(cone);
            }
        }
        Self::from_levels(self.d + 1, nv, levels)
    }

    /// The prism `I X = X × segment`.
    pub fn prism(&self) -> Self {
        self.product(&Self::segment())
    }

    /// Cartesian product: nonempty faces are pairs of nonempty faces, with
    /// one empty face below them all.
    pub fn product(&self, other: &Self) -> Self {
        let (n1, n2) = (self.num_vertices, other.num_vertices);
        let nv = n1 * n2;
        let d = self.d + other.d;
        let mut levels: Vec<Vec<BitSet>> = vec![Vec::new(); d + 2];
        levels[0].push(BitSet::new(nv));
        for (k1, l1) in self.levels.iter().enumerate().skip(1) {
            for (k2, l2) in other.levels.iter().enumerate().skip(1) {
                // dims k1-1 and k2-1 add to k1+k2-2, stored at level k1+k2-1
                for f in l1 {
                    for g in l2 {
                        let set = BitSet::from_indices(
                            nv,
                            f.iter().flat_map(|i| g.iter().map(move |j| i * n2 + j)),
                        );
                        levels[k1 + k2 - 1].push(set);
                    }
                }
            }
        }
        Self::from_levels(d, nv, levels)
    }

    /// The opposite lattice, realized as the face lattice of the polar:
    /// each face maps to the set of facets containing it.
    pub fn dual(&self) -> Self {
        if self.d == 0 {
            return Self::point();
        }
        let facets = self.faces_of_dim(self.d as isize - 1);
        let nf = facets.len();
        let mut levels: Vec<Vec<BitSet>> = vec![Vec::new(); self.d + 2];
        for (k, level) in self.levels.iter().enumerate() {
            for f in level {
                let set = BitSet::from_indices(
                    nf,
                    facets.iter().enumerate().filter(|(_, g)| f.is_subset(g)).map(|(i, _)| i),
                );
                levels[self.d + 1 - k].push(set);
            }
        }
        Self::from_levels(self.d, nf, levels)
    }

    /// Structural check used by tests: unique bottom and top, every face
    /// above the bottom covers something one level down, and every interval
    /// of length two is a diamond.
    pub fn validate(&self) -> Result<(), LatticeError> {
        let bad = |m: String| Err(LatticeError::NotGraded(m));
        if self.levels[0].len() != 1 || !self.levels[0][0].is_empty() {
            return bad("bottom is not a unique empty face".into());
        }
        if self.levels[self.d + 1].len() != 1 {
            return bad("top is not unique".into());
        }
        for k in 1..self.levels.len() {
            for g in &self.levels[k] {
                if !self.levels[k - 1].iter().any(|f| f.is_subset(g) && f != g) {
                    return bad(format!("face {g:?} covers nothing"));
                }
                if k >= 2 {
                    for f in &self.levels[k - 2] {
                        if !f.is_subset(g) {
                            continue;
                        }
                        let mid = self.levels[k - 1]
                            .iter()
                            .filter(|m| f.is_subset(m) && m.is_subset(g))
                            .count();
                        if mid != 2 {
                            return bad(format!("interval {f:?} < {g:?} has {mid} middle faces"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Chain counts for every `S ⊆ {0..d-1}`, built by propagating chain
    /// counts through containments between consecutive members of `S`.
    pub fn flag_vector(&self) -> FlagVector {
        let d = self.d;
        // below[(a, b)][j] = indices of dim-a faces inside the j-th dim-b face
        let mut below: HashMap<(usize, usize), Vec<Vec<usize>>> = HashMap::new();
        for b in 1..d {
            for a in 0..b {
                let lower = &self.levels[a + 1];
                let lists = self.levels[b + 1]
                    .iter()
                    .map(|g| {
                        lower
                            .iter()
                            .enumerate()
                            .filter(|(_, f)| f.is_subset(g))
                            .map(|(i, _)| i)
                            .collect()
                    })
                    .collect();
                below.insert((a, b), lists);
            }
        }
        let size = 1usize << d;
        let mut counts = vec![0u64; size];
        counts[0] = 1;
        // ending[S][j] = chains with dimension set S ending at the j-th face
        // of dimension max(S)
        let mut ending: Vec<Vec<u64>> = vec![Vec::new(); size];
        for s in 1..size {
            let top = usize::BITS as usize - 1 - s.leading_zeros() as usize;
            let rest = s & !(1 << top);
            let v: Vec<u64> = if rest == 0 {
                vec![1; self.levels[top + 1].len()]
            } else {
                let prev_top = usize::BITS as usize - 1 - rest.leading_zeros() as usize;
                let prev = &ending[rest];
                below[&(prev_top, top)]
                    .iter()
                    .map(|list| list.iter().map(|&i| prev[i]).sum())
                    .collect()
            };
            counts[s] = v.iter().sum();
            ending[s] = v;
        }
        FlagVector { d, counts }
    }
}

/// Flag vector `f_S` indexed by the bitmask `Σ_{i∈S} 2^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagVector {
    d: usize,
    counts: Vec<u64>,
}

impl FlagVector {
    pub fn new(d: usize, counts: Vec<u64>) -> Result<Self, LatticeError> {
        if counts.len() != 1 << d {
            return Err(LatticeError::Parse(format!(
                "dimension {d} needs {} entries, got {}",
                1usize << d,
                counts.len()
            )));
        }
        if counts[0] != 1 {
            return Err(LatticeError::Parse(format!("f_∅ must be 1, got {}", counts[0])));
        }
        Ok(FlagVector { d, counts })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `f_S` for a set of dimensions.
    pub fn get(&self, dims: &[usize]) -> u64 {
        self.counts[dims.iter().fold(0, |m, &i| m | 1 << i)]
    }

    /// Face numbers `f_0 .. f_{d-1}`.
    pub fn f_vector(&self) -> Vec<u64> {
        (0..self.d).map(|i| self.counts[1 << i]).collect()
    }

    /// `Σ (-1)^i f_i = 1 - (-1)^d` over proper nonempty faces.
    pub fn satisfies_euler(&self) -> bool {
        let alt: i128 = self
            .f_vector()
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i128 } else { -(f as i128) })
            .sum();
        alt == if self.d.is_multiple_of(2) { 0 } else { 2 }
    }
}

impl fmt::Display for FlagVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.counts.iter().map(u64::to_string).collect();
        write!(f, "d={};{}", self.d, body.join(","))
    }
}

impl FromStr for FlagVector {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: &str| LatticeError::Parse(format!("{m} in {s:?}"));
        let (head, body) = s.trim().split_once(';').ok_or_else(|| err("missing ';'"))?;
        let d: usize = head
            .strip_prefix("d=")
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| err("bad dimension prefix"))?;
        if d > 16 {
            return Err(err("dimension too large"));
        }
        let counts = body
            .split(',')
            .map(|x| x.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| err("bad count"))?;
        FlagVector::new(d, counts)
    }
}

/// Reverses every chain: `f'_S = f_{σ(S)}` with `σ(i) = d - 1 - i`.
pub fn polar_flag(f: &FlagVector) -> FlagVector {
    let d = f.d;
    let counts = (0..f.counts.len())
        .map(|s| {
            let image = (0..d).filter(|i| s >> i & 1 == 1).fold(0, |m, i| m | 1 << (d - 1 - i));
            f.counts[image]
        })
        .collect();
    FlagVector { d, counts }
}

/// Integer combination of flag vectors of one dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalFlagSum {
    d: usize,
    counts: Vec<i64>,
}

impl FormalFlagSum {
    pub fn zero(d: usize) -> Self {
        FormalFlagSum {
            d,
            counts: vec![0; 1 << d],
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }
}

impl From<&FlagVector> for FormalFlagSum {
    fn from(f: &FlagVector) -> Self {
        FormalFlagSum {
            d: f.d,
            counts: f.counts.iter().map(|&c| c as i64).collect(),
        }
    }
}

impl Add for FormalFlagSum {
    type Output = FormalFlagSum;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.d, rhs.d, "adding flag sums of different dimension");
        for (a, b) in self.counts.iter_mut().zip(rhs.counts) {
            *a += b;
        }
        self
    }
}

impl Neg for FormalFlagSum {
    type Output = FormalFlagSum;
    fn neg(self) -> Self {
        self * -1
    }
}

impl Sub for FormalFlagSum {
    type Output = FormalFlagSum;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul<i64> for FormalFlagSum {
    type Output = FormalFlagSum;
    fn mul(mut self, k: i64) -> Self {
        for a in &mut self.counts {
            *a *= k;
        }
        self
    }
}

/// Integer combination of face lattices of one dimension. Lattice
/// constructors act term by term, so non-polytopes such as
/// `D X = I C X - C C X` are representable.
#[derive(Debug, Clone)]
pub struct FormalLattice {
    pub terms: Vec<(i64, FaceLattice)>,
}

impl FormalLattice {
    pub fn single(l: FaceLattice) -> Self {
        FormalLattice { terms: vec![(1, l)] }
    }

    fn map(&self, op: impl Fn(&FaceLattice) -> FaceLattice) -> Self {
        FormalLattice {
            terms: self.terms.iter().map(|(c, l)| (*c, op(l))).collect(),
        }
    }

    pub fn pyramid(&self) -> Self {
        self.map(FaceLattice::pyramid)
    }

    pub fn prism(&self) -> Self {
        self.map(FaceLattice::prism)
    }

    pub fn product_with(&self, other: &FaceLattice) -> Self {
        self.map(|l| l.product(other))
    }

    /// `D = I C - C C`.
    pub fn d_operator(&self) -> Self {
        let mut terms = self.pyramid().prism().terms;
        terms.extend(self.pyramid().pyramid().terms.into_iter().map(|(c, l)| (-c, l)));
        FormalLattice { terms }
    }

    /// Panics on an empty sum, which has no dimension.
    pub fn flag(&self) -> FormalFlagSum {
        let d = self.terms[0].1.dim();
        self.terms.iter().fold(FormalFlagSum::zero(d), |acc, (c, l)| {
            acc + FormalFlagSum::from(&l.flag_vector()) * *c
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::{facet_enum, shapes};

    fn lattice_of(p: &crate::hull::Polytope) -> FaceLattice {
        let d = p.ambient_dim();
        FaceLattice::from_incidence(&facet_enum(p).unwrap(), d).unwrap()
    }

    /// Explicit chain enumeration; independent of the level-propagation code.
    fn enumerate_chains(l: &FaceLattice) -> Vec<u64> {
        let proper: Vec<(isize, &BitSet)> =
            l.faces().filter(|(k, _)| *k >= 0 && *k < l.dim() as isize).collect();
        let mut counts = vec![0u64; 1 << l.dim()];
        fn walk(
            proper: &[(isize, &BitSet)],
            last: Option<usize>,
            mask: usize,
            counts: &mut [u64],
        ) {
            counts[mask] += 1;
            for (i, (k, f)) in proper.iter().enumerate() {
                if let Some(j) = last {
                    let (kj, g) = proper[j];
                    if *k <= kj || !g.is_subset(f) {
                        continue;
                    }
                }
                walk(proper, Some(i), mask | 1 << k, counts);
            }
        }
        walk(&proper, None, 0, &mut counts);
        counts
    }

    #[test]
    fn incidence_lattices() {
        let tri = lattice_of(&shapes::simplex(2));
        assert_eq!(tri.face_counts(), vec![1, 3, 3, 1]);
        let cube = lattice_of(&shapes::cube(3));
        assert_eq!(cube.face_counts(), vec![1, 8, 12, 6, 1]);
        cube.validate().unwrap();
        let seg = lattice_of(&shapes::cube(1));
        assert_eq!(seg.face_counts(), vec![1, 2, 1]);
    }

    #[test]
    fn constructor_examples() {
        assert_eq!(FaceLattice::segment().face_counts(), vec![1, 2, 1]);
        assert_eq!(FaceLattice::triangle().face_counts(), vec![1, 3, 3, 1]);
        let sq_pyr = FaceLattice::square().pyramid();
        assert_eq!(sq_pyr.face_counts(), vec![1, 5, 8, 5, 1]);
        assert_eq!(FaceLattice::point().prism().face_counts(), vec![1, 2, 1]);
        assert_eq!(FaceLattice::square().face_counts(), vec![1, 4, 4, 1]);
        let tri_prism = FaceLattice::triangle().prism();
        assert_eq!(tri_prism.face_counts(), vec![1, 6, 9, 5, 1]);
        for l in [sq_pyr, tri_prism] {
            l.validate().unwrap();
        }
    }

    #[test]
    fn product_with_point_is_identity() {
        let x = lattice_of(&shapes::cross_polytope(3));
        let xp = x.product(&FaceLattice::point());
        assert_eq!(xp.face_counts(), x.face_counts());
        assert_eq!(xp.flag_vector(), x.flag_vector());
        let sq = FaceLattice::segment().product(&FaceLattice::segment());
        assert_eq!(sq.flag_vector(), FaceLattice::square().flag_vector());
    }

    #[test]
    fn square_times_triangle_is_double_prism() {
        let lhs = FaceLattice::square().product(&FaceLattice::triangle());
        let rhs = FaceLattice::triangle().prism().prism();
        assert_eq!(lhs.dim(), 4);
        assert_eq!(lhs.flag_vector(), rhs.flag_vector());
    }

    #[test]
    fn flag_vector_examples() {
        let sq = FaceLattice::square().flag_vector();
        assert_eq!(sq.counts(), &enumerate_chains(&FaceLattice::square())[..]);
        assert_eq!(sq.counts(), &[1, 4, 4, 8]);
        let cube = lattice_of(&shapes::cube(3));
        let oracle = enumerate_chains(&cube);
        assert_eq!(oracle, vec![1, 8, 12, 24, 6, 24, 24, 48]);
        assert_eq!(cube.flag_vector().counts(), &oracle[..]);
        assert_eq!(FaceLattice::point().flag_vector().counts(), &[1]);
    }

    #[test]
    fn polar_flag_examples() {
        let cube = lattice_of(&shapes::cube(3)).flag_vector();
        let oct = lattice_of(&shapes::cross_polytope(3));
        let oct_oracle = enumerate_chains(&oct);
        assert_eq!(oct_oracle, vec![1, 6, 12, 24, 8, 24, 24, 48]);
        assert_eq!(polar_flag(&cube).counts(), &oct_oracle[..]);
        assert_eq!(polar_flag(&polar_flag(&cube)), cube);
        let simplex = lattice_of(&shapes::simplex(4)).flag_vector();
        assert_eq!(polar_flag(&simplex), simplex);
    }

    #[test]
    fn polar_flag_matches_lattice_reversal() {
        let samples = [
            FaceLattice::square().pyramid(),
            FaceLattice::triangle().prism().pyramid(),
            lattice_of(&shapes::cross_polytope(4)),
            FaceLattice::triangle().product(&FaceLattice::square()),
        ];
        for l in samples {
            let dual = l.dual();
            dual.validate().unwrap();
            assert_eq!(polar_flag(&l.flag_vector()), dual.flag_vector());
        }
    }

    #[test]
    fn euler_relation() {
        for l in [
            FaceLattice::point(),
            FaceLattice::triangle().pyramid(),
            lattice_of(&shapes::cube(4)),
            lattice_of(&shapes::cross_polytope(5)),
        ] {
            assert!(l.flag_vector().satisfies_euler());
        }
    }

    #[test]
    fn flag_serialization() {
        let f = FaceLattice::square().flag_vector();
        assert_eq!(f.to_string(), "d=2;1,4,4,8");
        assert_eq!("d=2;1,4,4,8".parse::<FlagVector>().unwrap(), f);
        assert_eq!("d=0;1".parse::<FlagVector>().unwrap(), FaceLattice::point().flag_vector());
        assert!("d=2;1,4,4".parse::<FlagVector>().is_err());
        assert!("d=2;2,4,4,8".parse::<FlagVector>().is_err());
        assert!("2;1".parse::<FlagVector>().is_err());
    }

    #[test]
    fn ic_equation_on_small_lattices() {
        for x in [FaceLattice::point(), FaceLattice::segment(), FaceLattice::square()] {
            let x = FormalLattice::single(x);
            let lhs = x.d_operator().flag();
            let rhs = x.product_with(&FaceLattice::square()).flag()
                - x.product_with(&FaceLattice::triangle()).flag();
            assert_eq!(lhs, rhs);
            assert_eq!(x.prism().d_operator().flag(), x.d_operator().prism().flag());
        }
    }

    #[test]
    fn rejects_non_graded_incidence() {
        // A "square" whose facet list forgets one edge.
        let mut fd = facet_enum(&shapes::cube(2)).unwrap();
        fd.incidence.pop();
        fd.inequalities.pop();
        assert!(FaceLattice::from_incidence(&fd, 2).is_err());
    }
}
