//! The (C,D) word calculus.
//!
//! A degree-`d` word over `{C, D}` names the formal polytope `w(point)`,
//! where `C` is the pyramid, `I` the prism and `D = IC - CC`. The flag
//! vectors of the `F_{d+1}` words form a basis of the span of all
//! `d`-polytope flag vectors; the coordinates of a flag vector in that basis
//! are its CD vector.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{
    format_rat, independent_rows, int, invert, mat_rank, parse_rat, QMatrix, Rat,
};
use crate::lattice::{FaceLattice, FlagVector, FormalFlagSum};

/// Largest dimension with a shared basis table.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CdError {
    #[error("flag basis for d={d} has rank {rank}, expected {expected}")]
    BasisRank {
        d: usize,
        rank: usize,
        expected: usize,
    },
    #[error("flag vector is not in the span of d={d} polytope flag vectors")]
    NotInSpan { d: usize },
    #[error("dimension {0} is outside the supported range 0..={MAX_DIM}")]
    Dimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("word-set is empty")]
    EmptyWordSet,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    C,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CiLetter {
    C,
    I,
}

/// A word over `{C, D}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn deg_c(&self) -> usize {
        self.0.iter().filter(|&&l| l == Letter::C).count()
    }

    pub fn deg_d(&self) -> usize {
        self.0.len() - self.deg_c()
    }

    pub fn degree(&self) -> usize {
        self.deg_c() + 2 * self.deg_d()
    }

    /// Number of occurrences of the substring `CD`.
    pub fn order(&self) -> usize {
        self.0
            .windows(2)
            .filter(|w| w[0] == Letter::C && w[1] == Letter::D)
            .count()
    }

    fn d_positions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == Letter::D)
            .map(|(i, _)| i)
            .collect()
    }

    /// Sort key of the canonical order: `deg_D` first, then the positions
    /// of the `D`s lexicographically.
    fn canonical_key(&self) -> (usize, Vec<usize>) {
        (self.deg_d(), self.d_positions())
    }

    /// `D^i C^{d-2i}`: the words carrying simple polytopes.
    pub fn is_simple_type(&self) -> bool {
        let first_c = self.0.iter().position(|&l| l == Letter::C).unwrap_or(self.0.len());
        self.0[first_c..].iter().all(|&l| l == Letter::C)
    }

    /// The 1/2 index string (`C -> 1`, `D -> 2`).
    pub fn index_string(&self) -> String {
        self.0
            .iter()
            .map(|l| match l {
                Letter::C => '1',
                Letter::D => '2',
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::C => "C",
                Letter::D => "D",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Word {
    type Err = CdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|c| match c {
                'C' => Ok(Letter::C),
                'D' => Ok(Letter::D),
                _ => Err(CdError::Parse(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// `F_{d+1}` with `F_1 = F_2 = 1`.
pub fn fibonacci_count(d: usize) -> usize {
    let (mut a, mut b) = (1usize, 1usize);
    for _ in 0..d {
        (a, b) = (b, a + b);
    }
    a
}

/// All degree-`d` words in canonical order.
pub fn words(d: usize) -> Vec<Word> {
    fn extend(prefix: &mut Vec<Letter>, remaining: usize, out: &mut Vec<Word>) {
        if remaining == 0 {
            out.push(Word(prefix.clone()));
            return;
        }
        prefix.push(Letter::C);
        extend(prefix, remaining - 1, out);
        prefix.pop();
        if remaining >= 2 {
            prefix.push(Letter::D);
            extend(prefix, remaining - 2, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), d, &mut out);
    out.sort_by_key(Word::canonical_key);
    out
}

/// Substitutes `D -> +IC - CC` distributively.
pub fn expand_to_ci(w: &Word) -> Vec<(i64, Vec<CiLetter>)> {
    let mut terms: Vec<(i64, Vec<CiLetter>)> = vec![(1, Vec::new())];
    for &l in &w.0 {
        terms = terms
            .into_iter()
            .flat_map(|(sign, prefix)| match l {
                Letter::C => {
                    let mut p = prefix;
                    p.push(CiLetter::C);
                    vec![(sign, p)]
                }
                Letter::D => {
                    let mut ic = prefix.clone();
                    ic.extend([CiLetter::I, CiLetter::C]);
                    let mut cc = prefix;
                    cc.extend([CiLetter::C, CiLetter::C]);
                    vec![(sign, ic), (-sign, cc)]
                }
            })
            .collect();
    }
    terms
}

/// Applies a `{C, I}` word to a point, rightmost letter first.
pub fn ci_lattice(letters: &[CiLetter]) -> FaceLattice {
    letters.iter().rev().fold(FaceLattice::point(), |l, c| match c {
        CiLetter::C => l.pyramid(),
        CiLetter::I => l.prism(),
    })
}

/// Flag vector of the formal polytope `w(point)`.
pub fn word_flag(w: &Word) -> FormalFlagSum {
    let d = w.degree();
    expand_to_ci(w)
        .iter()
        .fold(FormalFlagSum::zero(d), |acc, (sign, letters)| {
            acc + FormalFlagSum::from(&ci_lattice(letters).flag_vector()) * *sign
        })
}

/// Basis matrix whose columns are `f(w(point))` over all `2^d` flag
/// components, plus a precomputed left inverse on a row basis.
#[derive(Debug, Clone)]
pub struct FlagBasis {
    d: usize,
    words: Vec<Word>,
    matrix: QMatrix,
    rows: Vec<usize>,
    row_inverse: QMatrix,
}

impl FlagBasis {
    /// Builds and rank-checks the basis for dimension `d`.
    pub fn new(d: usize) -> Result<Self, CdError> {
        let words = words(d);
        let cols: Vec<Vec<Rat>> = words
            .iter()
            .map(|w| word_flag(w).counts().iter().map(|&c| int(c)).collect())
            .collect();
        Self::from_matrix(d, words, QMatrix::from_cols(&cols))
    }

    /// Assembles a basis from an explicit matrix, checking its rank.
    pub fn from_matrix(d: usize, words: Vec<Word>, matrix: QMatrix) -> Result<Self, CdError> {
        let expected = fibonacci_count(d);
        let rank = mat_rank(&matrix);
        if rank != expected || matrix.cols() != expected || matrix.rows() != 1 << d {
            return Err(CdError::BasisRank { d, rank, expected });
        }
        let rows = independent_rows(&matrix);
        let row_inverse = invert(&matrix.select_rows(&rows)).expect("row basis is invertible");
        Ok(FlagBasis {
            d,
            words,
            matrix,
            rows,
            row_inverse,
        })
    }

    /// Shared basis for `d <= MAX_DIM`, built on first use.
    pub fn shared(d: usize) -> Result<&'static FlagBasis, CdError> {
        static TABLE: [OnceLock<FlagBasis>; MAX_DIM + 1] = [const { OnceLock::new() }; MAX_DIM + 1];
        let slot = TABLE.get(d).ok_or(CdError::Dimension(d))?;
        if let Some(b) = slot.get() {
            return Ok(b);
        }
        let built = FlagBasis::new(d)?;
        Ok(slot.get_or_init(|| built))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        mat_rank(&self.matrix)
    }

    /// Coordinates of a flag vector, verified on every component.
    pub fn decompose(&self, f: &FlagVector) -> Result<CdVector, CdError> {
        let counts: Vec<Rat> = f.counts().iter().map(|&c| Rat::from_integer(c.into())).collect();
        self.decompose_counts(f.dim(), counts)
    }

    /// Same as [`decompose`](Self::decompose) for formal sums such as
    /// `f(D X)`.
    pub fn decompose_formal(&self, f: &FormalFlagSum) -> Result<CdVector, CdError> {
        let counts: Vec<Rat> = f.counts().iter().map(|&c| int(c)).collect();
        self.decompose_counts(f.dim(), counts)
    }

    fn decompose_counts(&self, d: usize, counts: Vec<Rat>) -> Result<CdVector, CdError> {
        if d != self.d {
            return Err(CdError::DimensionMismatch {
                expected: self.d,
                got: d,
            });
        }
        let picked: Vec<Rat> = self.rows.iter().map(|&r| counts[r].clone()).collect();
        let coeffs = self.row_inverse.mul_vec(&picked);
        if self.matrix.mul_vec(&coeffs) != counts {
            return Err(CdError::NotInSpan { d: self.d });
        }
        Ok(CdVector { d: self.d, coeffs })
    }
}

/// Unique `λ` with `Σ λ_w f(w(point)) = f`.
pub fn cd_decompose(f: &FlagVector) -> Result<CdVector, CdError> {
    FlagBasis::shared(f.dim())?.decompose(f)
}

/// Coefficients `λ_w` in canonical word order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CdVector {
    d: usize,
    coeffs: Vec<Rat>,
}

impl CdVector {
    pub fn new(d: usize, coeffs: Vec<Rat>) -> Result<Self, CdError> {
        if coeffs.len() != fibonacci_count(d) {
            return Err(CdError::Parse(format!(
                "{} coefficients for d={d}",
                coeffs.len()
            )));
        }
        Ok(CdVector { d, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn get(&self, w: &Word) -> Option<&Rat> {
        words(self.d).iter().position(|x| x == w).map(|i| &self.coeffs[i])
    }

    /// `(word, λ_w)` pairs in canonical order.
    pub fn entries(&self) -> Vec<(Word, Rat)> {
        words(self.d).into_iter().zip(self.coeffs.iter().cloned()).collect()
    }

    pub fn is_unit(&self, index: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| if i == index { c.is_one() } else { c.is_zero() })
    }
}

impl fmt::Display for CdVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .entries()
            .iter()
            .map(|(w, c)| format!("{w}:{}", format_rat(c)))
            .collect();
        write!(f, "d={};{}", self.d, body.join(","))
    }
}

impl FromStr for CdVector {
    type Err = CdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || CdError::Parse(s.to_string());
        let (head, body) = s.trim().split_once(';').ok_or_else(err)?;
        let d: usize = head
            .strip_prefix("d=")
            .and_then(|x| x.parse().ok())
            .ok_or_else(err)?;
        if d > MAX_DIM {
            return Err(CdError::Dimension(d));
        }
        let expected = words(d);
        let pairs: Vec<&str> = body.split(',').collect();
        if pairs.len() != expected.len() {
            return Err(err());
        }
        let mut coeffs = Vec::with_capacity(pairs.len());
        for (pair, w) in pairs.iter().zip(&expected) {
            let (word, value) = pair.split_once(':').ok_or_else(err)?;
            if word.parse::<Word>()? != *w {
                return Err(err());
            }
            coeffs.push(parse_rat(value).map_err(|_| err())?);
        }
        Ok(CdVector { d, coeffs })
    }
}

/// A set of degree-`d` words, stored as a bitmask over canonical indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordSet {
    d: usize,
    bits: u64,
}

impl WordSet {
    pub fn from_bits(d: usize, bits: u64) -> Self {
        debug_assert!(bits >> fibonacci_count(d) == 0);
        WordSet { d, bits }
    }

    pub fn empty(d: usize) -> Self {
        WordSet { d, bits: 0 }
    }

    /// Parses words such as `["CDCC", "CDD"]`; all must have degree `d`.
    pub fn from_words<S: AsRef<str>>(d: usize, items: &[S]) -> Result<Self, CdError> {
        let all = words(d);
        let mut bits = 0;
        for item in items {
            let w: Word = item.as_ref().parse()?;
            let i = all
                .iter()
                .position(|x| *x == w)
                .ok_or_else(|| CdError::Parse(item.as_ref().to_string()))?;
            bits |= 1 << i;
        }
        Ok(WordSet { d, bits })
    }

    /// `{w : deg_D w = i}`.
    pub fn order_zero(d: usize, i: usize) -> Self {
        let bits = words(d)
            .iter()
            .enumerate()
            .filter(|(_, w)| w.deg_d() == i)
            .fold(0, |b, (k, _)| b | 1 << k);
        WordSet { d, bits }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..64).filter(|&i| self.contains_index(i))
    }

    /// Members in canonical order.
    pub fn members(&self) -> Vec<Word> {
        let all = words(self.d);
        self.indices().map(|i| all[i].clone()).collect()
    }

    /// 0/1 indicator over canonical word indices.
    pub fn indicator(&self) -> Vec<Rat> {
        (0..fibonacci_count(self.d))
            .map(|i| if self.contains_index(i) { Rat::one() } else { Rat::zero() })
            .collect()
    }

    pub fn union(&self, other: &WordSet) -> WordSet {
        WordSet {
            d: self.d,
            bits: self.bits | other.bits,
        }
    }

    pub fn is_disjoint(&self, other: &WordSet) -> bool {
        self.bits & other.bits == 0
    }
}

impl fmt::Display for WordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.members().iter().map(Word::to_string).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

impl fmt::Debug for WordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `λ_s = Σ_{w ∈ s} λ_w`.
pub fn lambda_sum(cd: &CdVector, s: &WordSet) -> Rat {
    assert_eq!(cd.d, s.d, "degree mismatch in lambda_sum");
    s.indices().fold(Rat::zero(), |acc, i| acc + &cd.coeffs[i])
}

/// Order-zero `g_i = λ_{s_i}` for `0 <= i <= d/2`.
pub fn g_order_zero(cd: &CdVector) -> Vec<Rat> {
    (0..=cd.d / 2)
        .map(|i| lambda_sum(cd, &WordSet::order_zero(cd.d, i)))
        .collect()
}

/// Palindromic toric `h`, `h_0 .. h_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HVector {
    pub d: usize,
    pub entries: Vec<Rat>,
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.entries.iter().map(format_rat).collect();
        write!(f, "({})", body.join(", "))
    }
}

/// Partial sums of `g` up to the middle, mirrored.
pub fn h_vector(g: &[Rat], d: usize) -> HVector {
    assert_eq!(g.len(), d / 2 + 1, "g must have floor(d/2)+1 entries");
    let mut entries = vec![Rat::zero(); d + 1];
    let mut acc = Rat::zero();
    for (i, gi) in g.iter().enumerate() {
        acc += gi;
        entries[i] = acc.clone();
        entries[d - i] = acc.clone();
    }
    HVector { d, entries }
}

/// True iff `s` holds no word of the form `D^i C^{d-2i}`.
pub fn vanishes_on_simple(s: &WordSet) -> bool {
    !s.members().iter().any(Word::is_simple_type)
}

/// Index of a word-set: the 1/2 string of its first member in canonical
/// order.
pub fn word_index(s: &WordSet) -> Result<String, CdError> {
    s.members()
        .first()
        .map(Word::index_string)
        .ok_or(CdError::EmptyWordSet)
}

/// A g-vector: `g_s = λ_s` over a list of component word-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GVector {
    pub d: usize,
    pub components: Vec<(WordSet, Rat)>,
}

impl GVector {
    pub fn values(&self) -> Vec<Rat> {
        self.components.iter().map(|(_, v)| v.clone()).collect()
    }
}
