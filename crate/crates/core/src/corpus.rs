//! 01-polytopes: cube symmetries, enumeration and sampling of classes, the
//! per-polytope pipeline, distance counts, and the on-disk corpus cache.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cdbasis::{cd_decompose, CdError, CdVector};
use crate::hull::{affine_dim, facet_enum, reduce_to_full_dim, HullError, Polytope};
use crate::lattice::{polar_flag, FaceLattice, FlagVector, LatticeError};

/// Largest cube dimension a 64-bit vertex mask can hold.
pub const MAX_CUBE_DIM: usize = 6;
/// Largest dimension enumerated exhaustively.
pub const MAX_EXHAUSTIVE_DIM: usize = 4;
pub const CACHE_HEADER: &str = "gvlab-corpus-v1";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cube dimension {0} is not supported (max {MAX_CUBE_DIM})")]
    Dimension(usize),
    #[error("exhaustive enumeration is limited to d <= {MAX_EXHAUSTIVE_DIM}; use sampling or ingest a list for d = {0}")]
    TooLargeForExhaustive(usize),
    #[error("mask {0} has no vertices")]
    EmptyMask(String),
    #[error("found only {found} distinct classes of the {wanted} requested within the retry budget")]
    SampleExhausted { found: usize, wanted: usize },
    #[error("mask {mask}: {source}")]
    Hull { mask: String, source: HullError },
    #[error("mask {mask}: {source}")]
    Lattice { mask: String, source: LatticeError },
    #[error("mask {mask}: {source}")]
    Cd { mask: String, source: CdError },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// A subset of the vertices of the `d`-cube. Bit `i` stands for the vertex
/// whose coordinate `j` is bit `j` of `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexMask {
    pub d: usize,
    pub mask: u64,
}

impl VertexMask {
    pub fn new(d: usize, mask: u64) -> Result<Self, CorpusError> {
        if d > MAX_CUBE_DIM {
            return Err(CorpusError::Dimension(d));
        }
        let m = VertexMask { d, mask };
        if mask & !m.full_bits() != 0 || mask == 0 {
            return Err(CorpusError::EmptyMask(format!("{m}")));
        }
        Ok(m)
    }

    fn full_bits(&self) -> u64 {
        if self.d == MAX_CUBE_DIM {
            u64::MAX
        } else {
            (1u64 << (1 << self.d)) - 1
        }
    }

    pub fn full_cube(d: usize) -> Self {
        let mut m = VertexMask { d, mask: 0 };
        m.mask = m.full_bits();
        m
    }

    pub fn from_vertices(d: usize, vertices: &[Vec<u8>]) -> Self {
        let mask = vertices.iter().fold(0u64, |m, v| m | 1 << vertex_index(v));
        VertexMask { d, mask }
    }

    pub fn complement(&self) -> Self {
        VertexMask {
            d: self.d,
            mask: self.full_bits() & !self.mask,
        }
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..1usize << self.d).filter(|&v| self.mask >> v & 1 == 1)
    }

    pub fn to_polytope(&self) -> Polytope {
        let pts: Vec<Vec<i64>> = self
            .vertices()
            .map(|v| (0..self.d).map(|j| (v >> j & 1) as i64).collect())
            .collect();
        Polytope::from_i64(&pts)
            .expect("distinct cube vertices")
            .with_label(self.to_string())
    }

    pub fn affine_dim(&self) -> usize {
        affine_dim(&self.to_polytope())
    }

    pub fn hex(&self) -> String {
        format!("0x{:x}", self.mask)
    }
}

impl fmt::Display for VertexMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} mask={}", self.d, self.hex())
    }
}

impl fmt::Debug for VertexMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Index of a 0/1 coordinate vector.
pub fn vertex_index(coords: &[u8]) -> usize {
    coords
        .iter()
        .enumerate()
        .fold(0, |i, (j, &c)| i | (c as usize & 1) << j)
}

fn parse_hex(text: &str) -> Option<u64> {
    let t = text.trim();
    let t = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u64::from_str_radix(t, 16).ok()
}

/// The hyperoctahedral group acting on vertex indices: every coordinate
/// permutation composed with every set of coordinate flips.
pub struct CubeSymmetries {
    d: usize,
    /// `images[g][v]` is the image of vertex `v` under element `g`.
    images: Vec<Vec<u8>>,
}

impl CubeSymmetries {
    fn build(d: usize) -> Self {
        let n = 1usize << d;
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for k in 0..d {
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    (0..=k).map(move |pos| {
                        let mut q = p.clone();
                        q.insert(pos, k);
                        q
                    })
                })
                .collect();
        }
        let mut images = Vec::with_capacity(perms.len() << d);
        for perm in &perms {
            for flips in 0..n {
                images.push(
                    (0..n)
                        .map(|v| {
                            let x = v ^ flips;
                            (0..d).fold(0usize, |img, j| img | (x >> j & 1) << perm[j]) as u8
                        })
                        .collect(),
                );
            }
        }
        CubeSymmetries { d, images }
    }

    /// Shared table for `d <= MAX_CUBE_DIM`.
    pub fn get(d: usize) -> &'static CubeSymmetries {
        static TABLES: [OnceLock<CubeSymmetries>; MAX_CUBE_DIM + 1] =
            [const { OnceLock::new() }; MAX_CUBE_DIM + 1];
        TABLES[d].get_or_init(|| CubeSymmetries::build(d))
    }

    /// `2^d · d!`.
    pub fn order(&self) -> usize {
        self.images.len()
    }

    pub fn vertex_image(&self, g: usize, v: usize) -> usize {
        self.images[g][v] as usize
    }

    pub fn apply(&self, g: usize, m: VertexMask) -> VertexMask {
        debug_assert_eq!(m.d, self.d);
        let img = &self.images[g];
        let mut out = 0u64;
        let mut bits = m.mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out |= 1 << img[v];
        }
        VertexMask { d: m.d, mask: out }
    }
}

/// Numerically smallest mask in the orbit of `m`.
pub fn canonical_form(m: VertexMask) -> VertexMask {
    let g = CubeSymmetries::get(m.d);
    (0..g.order())
        .map(|k| g.apply(k, m).mask)
        .min()
        .map(|mask| VertexMask { d: m.d, mask })
        .expect("group is nonempty")
}

/// One canonical representative per class of full-dimensional
/// 01-polytopes in the `d`-cube, in ascending mask order.
pub fn enumerate_01(d: usize) -> Result<Vec<VertexMask>, CorpusError> {
    if d > MAX_EXHAUSTIVE_DIM {
        return Err(CorpusError::TooLargeForExhaustive(d));
    }
    let limit = 1u64 << (1 << d);
    let out: Vec<VertexMask> = (1..limit)
        .into_par_iter()
        .map(|mask| VertexMask { d, mask })
        .filter(|&m| canonical_form(m) == m && m.affine_dim() == d)
        .collect();
    Ok(out)
}

/// `n` distinct canonical full-dimensional classes drawn by uniform random
/// subsets with rejection. The stream depends only on `(d, n, seed)`.
pub fn sample_01(d: usize, n: usize, seed: u64) -> Result<Vec<VertexMask>, CorpusError> {
    if d > MAX_CUBE_DIM {
        return Err(CorpusError::Dimension(d));
    }
    let full = VertexMask::full_cube(d).mask;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    let budget = 1000 * n + 10_000;
    for _ in 0..budget {
        if out.len() == n {
            break;
        }
        let mask = rng.gen::<u64>() & full;
        if mask == 0 {
            continue;
        }
        let m = canonical_form(VertexMask { d, mask });
        if seen.contains(&m) || m.affine_dim() != d {
            continue;
        }
        seen.insert(m);
        out.push(m);
    }
    if out.len() < n {
        return Err(CorpusError::SampleExhausted {
            found: out.len(),
            wanted: n,
        });
    }
    Ok(out)
}

/// Where a corpus entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntrySource {
    Mask(VertexMask),
    PolarOf(VertexMask),
}

impl EntrySource {
    pub fn mask(&self) -> VertexMask {
        match *self {
            EntrySource::Mask(m) | EntrySource::PolarOf(m) => m,
        }
    }

    pub fn is_polar(&self) -> bool {
        matches!(self, EntrySource::PolarOf(_))
    }
}

impl fmt::Display for EntrySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntrySource::Mask(m) => write!(f, "{}", m.hex()),
            EntrySource::PolarOf(m) => write!(f, "P:{}", m.hex()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub source: EntrySource,
    pub dim: usize,
    pub flag: FlagVector,
    pub cd: CdVector,
}

/// Flag vector of the convex hull of a point set; lower-dimensional input
/// is first re-expressed on its affine hull.
pub fn polytope_flag(p: &Polytope) -> Result<FlagVector, PipelineError> {
    let reduced = reduce_to_full_dim(p);
    let d = reduced.ambient_dim();
    let fd = facet_enum(&reduced)?;
    Ok(FaceLattice::from_incidence(&fd, d)?.flag_vector())
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Runs the full pipeline for one mask and derives the polar entry from the
/// reversed flag vector.
pub fn build_entry(m: VertexMask) -> Result<(CorpusEntry, CorpusEntry), CorpusError> {
    let mask = m.to_string();
    let flag = polytope_flag(&m.to_polytope()).map_err(|e| match e {
        PipelineError::Hull(source) => CorpusError::Hull {
            mask: mask.clone(),
            source,
        },
        PipelineError::Lattice(source) => CorpusError::Lattice {
            mask: mask.clone(),
            source,
        },
    })?;
    let cd_err = |source| CorpusError::Cd {
        mask: mask.clone(),
        source,
    };
    let cd = cd_decompose(&flag).map_err(cd_err)?;
    let pflag = polar_flag(&flag);
    let pcd = cd_decompose(&pflag).map_err(cd_err)?;
    let dim = flag.dim();
    Ok((
        CorpusEntry {
            source: EntrySource::Mask(m),
            dim,
            flag,
            cd,
        },
        CorpusEntry {
            source: EntrySource::PolarOf(m),
            dim,
            flag: pflag,
            cd: pcd,
        },
    ))
}

/// Builds primal and polar entries for every mask, in parallel. Output is
/// ordered by mask (primal before polar) whatever the worker count.
pub fn build_corpus(masks: &[VertexMask]) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut sorted = masks.to_vec();
    sorted.sort();
    sorted.dedup();
    let pairs = sorted
        .par_iter()
        .map(|&m| build_entry(m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(pairs.into_iter().flat_map(|(a, b)| [a, b]).collect())
}

/// Histogram of Hamming distances from `v` to the members of `set`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistanceCount(pub Vec<u32>);

pub fn distance_count(v: usize, set: VertexMask) -> DistanceCount {
    let mut counts = vec![0u32; set.d + 1];
    for w in set.vertices() {
        counts[(v ^ w).count_ones() as usize] += 1;
    }
    DistanceCount(counts)
}

/// Every canonical `k`-subset `V'` of the `d`-cube in which each member has
/// distance count `target` from `V'`.
///
/// Up to symmetry the search may assume vertex 0 is a member; vertices are
/// then added in increasing order and a branch is cut as soon as some
/// member's partial histogram exceeds `target`.
pub fn find_by_distance_count(d: usize, k: usize, target: &DistanceCount) -> Vec<VertexMask> {
    let n = 1usize << d;
    if target.0.len() != d + 1 || k == 0 || k > n {
        return Vec::new();
    }
    let target = &target.0;
    struct Search<'a> {
        n: usize,
        k: usize,
        target: &'a [u32],
        chosen: Vec<usize>,
        hist: Vec<Vec<u32>>,
        found: HashSet<VertexMask>,
        d: usize,
    }
    impl Search<'_> {
        fn run(&mut self, next: usize) {
            if self.chosen.len() == self.k {
                if self.hist.iter().all(|h| h == self.target) {
                    let mask = self.chosen.iter().fold(0u64, |m, &v| m | 1 << v);
                    self.found.insert(canonical_form(VertexMask { d: self.d, mask }));
                }
                return;
            }
            for v in next..self.n {
                if self.n - v < self.k - self.chosen.len() {
                    break;
                }
                let mut own = vec![0u32; self.d + 1];
                own[0] = 1;
                let mut ok = true;
                for (i, &u) in self.chosen.iter().enumerate() {
                    let dist = (u ^ v).count_ones() as usize;
                    own[dist] += 1;
                    if self.hist[i][dist] + 1 > self.target[dist] || own[dist] > self.target[dist] {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                for (i, &u) in self.chosen.iter().enumerate() {
                    self.hist[i][(u ^ v).count_ones() as usize] += 1;
                }
                self.chosen.push(v);
                self.hist.push(own);
                self.run(v + 1);
                self.chosen.pop();
                self.hist.pop();
                for (i, &u) in self.chosen.iter().enumerate() {
                    self.hist[i][(u ^ v).count_ones() as usize] -= 1;
                }
            }
        }
    }
    let mut first = vec![0u32; d + 1];
    first[0] = 1;
    if first.iter().zip(target).any(|(a, b)| a > b) {
        return Vec::new();
    }
    let mut s = Search {
        n,
        k,
        target,
        chosen: vec![0],
        hist: vec![first],
        found: HashSet::new(),
        d,
    };
    s.run(1);
    let mut out: Vec<VertexMask> = s.found.into_iter().collect();
    out.sort();
    out
}

fn format_record(e: &CorpusEntry) -> String {
    format!("{};{};{};{}", e.source.mask().d, e.source, e.flag, e.cd)
}

fn parse_record(line: &str) -> Result<CorpusEntry, String> {
    let fields: Vec<&str> = line.split(';').collect();
    if fields.len() != 6 {
        return Err(format!("expected 6 ';'-separated fields, found {}", fields.len()));
    }
    let d: usize = fields[0].parse().map_err(|_| "bad cube dimension".to_string())?;
    let (polar, hex) = match fields[1].strip_prefix("P:") {
        Some(h) => (true, h),
        None => (false, fields[1]),
    };
    let mask = parse_hex(hex).ok_or_else(|| format!("bad mask {hex:?}"))?;
    let mask = VertexMask::new(d, mask).map_err(|e| e.to_string())?;
    let flag: FlagVector = format!("{};{}", fields[2], fields[3])
        .parse()
        .map_err(|e: LatticeError| e.to_string())?;
    let cd: CdVector = format!("{};{}", fields[4], fields[5])
        .parse()
        .map_err(|e: CdError| e.to_string())?;
    if cd_decompose(&flag).as_ref() != Ok(&cd) {
        return Err("CD vector does not match the flag vector".into());
    }
    Ok(CorpusEntry {
        source: if polar {
            EntrySource::PolarOf(mask)
        } else {
            EntrySource::Mask(mask)
        },
        dim: flag.dim(),
        flag,
        cd,
    })
}

/// Appends entries to a cache file, writing the header first if the file is
/// new or empty.
pub fn cache_write(path: &Path, entries: &[CorpusEntry]) -> Result<(), CorpusError> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = std::io::BufWriter::new(file);
    if fresh {
        writeln!(w, "{CACHE_HEADER}")?;
    }
    for e in entries {
        writeln!(w, "{}", format_record(e))?;
    }
    w.flush()?;
    Ok(())
}

/// Entries read before any damage, plus the first error, if any.
#[derive(Debug)]
pub struct CacheContents {
    pub entries: Vec<CorpusEntry>,
    pub error: Option<CorpusError>,
}

/// Reads a cache, deduplicating repeated sources. Reading stops at the
/// first malformed line.
pub fn cache_parse(text: &str) -> CacheContents {
    let mut entries = Vec::new();
    let mut seen: HashMap<EntrySource, ()> = HashMap::new();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CACHE_HEADER => {}
        _ => {
            return CacheContents {
                entries,
                error: Some(CorpusError::Malformed {
                    line: 1,
                    message: format!("missing {CACHE_HEADER:?} header"),
                }),
            }
        }
    }
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(line.trim()) {
            Ok(e) => {
                if seen.insert(e.source, ()).is_none() {
                    entries.push(e);
                }
            }
            Err(message) => {
                return CacheContents {
                    entries,
                    error: Some(CorpusError::Malformed {
                        line: idx + 1,
                        message,
                    }),
                }
            }
        }
    }
    CacheContents {
        entries,
        error: None,
    }
}

pub fn cache_read(path: &Path) -> Result<CacheContents, CorpusError> {
    Ok(cache_parse(&std::fs::read_to_string(path)?))
}

/// Parses a mask list: `d=<d> mask=0x<hex>` per line, or a bare hex mask
/// when `default_d` is given. `#` lines are comments.
pub fn parse_mask_list(text: &str, default_d: Option<usize>) -> Result<Vec<VertexMask>, CorpusError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| CorpusError::Malformed {
            line: idx + 1,
            message,
        };
        let (d, hex) = if let Some(rest) = line.strip_prefix("d=") {
            let (d, m) = rest
                .split_once(char::is_whitespace)
                .ok_or_else(|| bad("expected 'd=<d> mask=0x<hex>'".into()))?;
            let m = m
                .trim()
                .strip_prefix("mask=")
                .ok_or_else(|| bad("missing 'mask='".into()))?;
            let d = d.parse().map_err(|_| bad(format!("bad dimension {d:?}")))?;
            (d, m)
        } else {
            let d = default_d.ok_or_else(|| bad("bare mask needs a dimension".into()))?;
            (d, line)
        };
        let mask = parse_hex(hex).ok_or_else(|| bad(format!("bad hex mask {hex:?}")))?;
        out.push(VertexMask::new(d, mask).map_err(|e| bad(e.to_string()))?);
    }
    Ok(out)
}

pub fn format_mask_list(masks: &[VertexMask]) -> String {
    masks.iter().map(|m| format!("{m}\n")).collect()
}

/// The 24-vertex 5-dimensional test polytope: the 5-cube minus a fixed set
/// of eight vertices whose pairwise distances follow the pattern
/// `(1, 0, 2, 4, 1, 0)`.
pub mod exceptional {
    use super::VertexMask;

    /// The eight removed vertices, in lexicographic order.
    pub const MISSING: [[u8; 5]; 8] = [
        [0, 0, 0, 0, 0],
        [0, 0, 0, 1, 1],
        [0, 1, 1, 0, 0],
        [0, 1, 1, 1, 1],
        [1, 0, 1, 0, 1],
        [1, 0, 1, 1, 0],
        [1, 1, 0, 0, 1],
        [1, 1, 0, 1, 0],
    ];

    /// Reference CD vector of the test polytope, in canonical word order.
    pub const CD: [(&str, i64); 8] = [
        ("CCCCC", 1),
        ("DCCC", 20),
        ("CDCC", -66),
        ("CCDC", 56),
        ("CCCD", 8),
        ("DDC", -5),
        ("DCD", 0),
        ("CDD", 20),
    ];

    /// Reference g components `g_0, g_1, g_2, g_1211, g_1121, g_1112,
    /// g_122, g_212`.
    pub const G: [i64; 8] = [1, 18, 15, 18, 64, 8, 20, 0];

    pub const DISTANCE_COUNT: [u32; 6] = [1, 0, 2, 4, 1, 0];

    pub fn missing_mask() -> VertexMask {
        let vs: Vec<Vec<u8>> = MISSING.iter().map(|v| v.to_vec()).collect();
        VertexMask::from_vertices(5, &vs)
    }

    pub fn polytope_mask() -> VertexMask {
        missing_mask().complement()
    }
}
